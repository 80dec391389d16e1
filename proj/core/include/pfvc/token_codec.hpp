#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "pfvc/tokenizer.hpp"

namespace pfvc {

// Uniform quantizer for token residuals. The step travels in the container
// as unsigned Q8.8, so it is stored in that form and every step() a codec
// sees is exactly representable on the wire.
class QuantConfig {
 public:
  static constexpr int kDefaultSymbolBound = 255;
  static constexpr std::uint16_t kDefaultStepQ88 = 64;  // 0.25

  QuantConfig() = default;
  static QuantConfig from_step(double step, int symbol_bound = kDefaultSymbolBound);
  static QuantConfig from_q88(std::uint16_t step_q88, int symbol_bound = kDefaultSymbolBound);

  double step() const noexcept { return step_q88_ / 256.0; }
  std::uint16_t step_q88() const noexcept { return step_q88_; }
  int symbol_bound() const noexcept { return symbol_bound_; }

  friend bool operator==(const QuantConfig&, const QuantConfig&) = default;

 private:
  std::uint16_t step_q88_ = kDefaultStepQ88;
  int symbol_bound_ = kDefaultSymbolBound;
};

// Last reconstructed value of every zigzag coefficient. Encoder and
// decoder each hold one and must evolve them identically.
struct PredictorState {
  std::array<double, kFeatureSize> ref{};
  bool initialized = false;

  friend bool operator==(const PredictorState&, const PredictorState&) = default;
};

// Bitwise comparison; operator== would equate 0.0 and -0.0.
bool bit_identical(const PredictorState& a, const PredictorState& b) noexcept;

struct ResidualSymbols {
  int g = 0;
  std::vector<std::int32_t> symbols;

  friend bool operator==(const ResidualSymbols&, const ResidualSymbols&) = default;
};

// Seeds prediction from the key frame's full (g = 256) token vector.
PredictorState init_state(const TokenVector& key_tokens);

// Closed loop: s_i = round((c_i - ref_i) / step), then ref_i += s_i * step,
// so the encoder tracks what the decoder will reconstruct. Coefficients at
// or above tokens.g keep their previous reference.
ResidualSymbols encode_frame(const TokenVector& tokens, PredictorState& state, const QuantConfig& q);

// Difference compensation, the exact mirror of encode_frame.
TokenVector decode_frame(const ResidualSymbols& symbols, PredictorState& state, const QuantConfig& q);

}  // namespace pfvc
