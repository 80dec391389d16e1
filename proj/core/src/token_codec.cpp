#include "pfvc/token_codec.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include "pfvc/errors.hpp"

namespace pfvc {

QuantConfig QuantConfig::from_q88(std::uint16_t step_q88, int symbol_bound) {
  if (step_q88 == 0) throw InvalidArgument("quantization step must be positive");
  if (symbol_bound < 1 || symbol_bound > (1 << 15)) throw InvalidArgument("symbol bound outside [1, 32768]");
  QuantConfig q;
  q.step_q88_ = step_q88;
  q.symbol_bound_ = symbol_bound;
  return q;
}

QuantConfig QuantConfig::from_step(double step, int symbol_bound) {
  if (!(step > 0.0) || !std::isfinite(step)) throw InvalidArgument("quantization step must be positive");
  const double q88 = std::round(step * 256.0);
  if (q88 < 1.0 || q88 > 65535.0 || q88 / 256.0 != step) {
    throw InvalidArgument("quantization step not representable as Q8.8: " + std::to_string(step));
  }
  return from_q88(static_cast<std::uint16_t>(q88), symbol_bound);
}

bool bit_identical(const PredictorState& a, const PredictorState& b) noexcept {
  return a.initialized == b.initialized && std::memcmp(a.ref.data(), b.ref.data(), sizeof(a.ref)) == 0;
}

PredictorState init_state(const TokenVector& key_tokens) {
  if (key_tokens.g != kFeatureSize) {
    throw InvalidArgument("predictor must be seeded with g = 256 key tokens, got g = " +
                          std::to_string(key_tokens.g));
  }
  PredictorState s;
  std::copy(key_tokens.coeffs.begin(), key_tokens.coeffs.end(), s.ref.begin());
  s.initialized = true;
  return s;
}

ResidualSymbols encode_frame(const TokenVector& tokens, PredictorState& state, const QuantConfig& q) {
  if (!state.initialized) throw InvalidArgument("predictor state used before init_state");
  const double step = q.step();
  constexpr double kLimit = static_cast<double>(std::numeric_limits<std::int32_t>::max());
  ResidualSymbols out{tokens.g, std::vector<std::int32_t>(static_cast<std::size_t>(tokens.g))};
  for (int i = 0; i < tokens.g; ++i) {
    const double level = std::round((tokens.coeffs[i] - state.ref[i]) / step);
    if (!(std::abs(level) <= kLimit)) throw InvalidArgument("token residual too large to quantize");
    const auto s = static_cast<std::int32_t>(level);
    out.symbols[i] = s;
    state.ref[i] = state.ref[i] + static_cast<double>(s) * step;
  }
  return out;
}

TokenVector decode_frame(const ResidualSymbols& symbols, PredictorState& state, const QuantConfig& q) {
  if (!state.initialized) throw InvalidArgument("predictor state used before init_state");
  if (symbols.g < 1 || symbols.g > kFeatureSize ||
      symbols.symbols.size() != static_cast<std::size_t>(symbols.g)) {
    throw InvalidArgument("symbol count does not match granularity");
  }
  const double step = q.step();
  std::vector<double> coeffs(static_cast<std::size_t>(symbols.g));
  for (int i = 0; i < symbols.g; ++i) {
    state.ref[i] = state.ref[i] + static_cast<double>(symbols.symbols[i]) * step;
    coeffs[i] = state.ref[i];
  }
  return TokenVector(symbols.g, std::move(coeffs));
}

}  // namespace pfvc
