#include "pfvc/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <set>
#include <sstream>
#include <thread>

#include "pfvc/bitstream.hpp"
#include "pfvc/entropy.hpp"
#include "pfvc/errors.hpp"
#include "pfvc/key_frame.hpp"
#include "pfvc/metrics.hpp"
#include "pfvc/motion_synthesis.hpp"

namespace pfvc {

namespace {

constexpr int kDimensionMultiple = kFeatureSide * kWorkingScale;
// Stand-in quality for lossless cells when building the hull.
constexpr double kPsnrHullCap = 100.0;

TokenVector key_tokens_of(const Frame& key_hat) {
  static const GranularityLadder full{kFeatureSize};
  return tokenize(frame_to_feature(key_hat, kWorkingScale), kFeatureSize, full);
}

double layer_bits(std::size_t payload_bytes) { return 8.0 * static_cast<double>(4 + payload_bytes); }

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream out;
  out.precision(10);
  out << v;
  return out.str();
}

Sequence luma_only(const Sequence& seq) {
  std::vector<Frame> luma;
  for (const Frame& f : seq.frames()) luma.push_back(f.luma_only());
  return Sequence(std::move(luma), seq.fps());
}

}  // namespace

void check_codec_input(const Sequence& seq) {
  if (seq.width() % kDimensionMultiple != 0 || seq.height() % kDimensionMultiple != 0) {
    throw InvalidArgument("frame dimensions must be multiples of 64");
  }
  if (seq.width() > 0xFFFF || seq.height() > 0xFFFF) throw InvalidArgument("frame dimensions exceed 65535");
  if (seq.fps() != std::floor(seq.fps()) || seq.fps() < 1.0 || seq.fps() > 255.0) {
    throw InvalidArgument("fps must be an integer in [1, 255]");
  }
  if (seq.size() > 0xFFFFFFFFull) throw InvalidArgument("too many frames");
}

EncodeResult encode(const Sequence& seq, const EncodeConfig& config) {
  check_codec_input(seq);
  if (config.quant.symbol_bound() != QuantConfig::kDefaultSymbolBound) {
    throw InvalidArgument("the container format fixes the symbol bound at 255");
  }
  if (config.quant.step_q88() == 0) throw InvalidArgument("quantizer step must be positive");
  if (const auto* fixed = std::get_if<FixedGranularity>(&config.policy); fixed && !config.ladder.contains(fixed->g)) {
    throw InvalidArgument("granularity " + std::to_string(fixed->g) + " is not on the ladder");
  }
  if (config.ladder.levels().size() > 255) throw InvalidArgument("ladder too long");

  Container c;
  c.header.width = static_cast<std::uint16_t>(seq.width());
  c.header.height = static_cast<std::uint16_t>(seq.height());
  c.header.fps = static_cast<std::uint8_t>(seq.fps());
  for (int g : config.ladder.levels()) c.header.ladder.push_back(static_cast<std::uint16_t>(g));
  c.header.quant_step_q88 = config.quant.step_q88();
  c.header.frame_count = static_cast<std::uint32_t>(seq.size());
  c.key_payload = encode_key_frame(seq[0], config.key_budget);

  const Frame key_hat = decode_key_frame(c.key_payload, seq.width(), seq.height()).luma_only();
  const KeyReference ref(key_hat, key_tokens_of(key_hat));
  PredictorState state = init_state(ref.tokens());
  ContextSet contexts(config.ladder, config.quant.symbol_bound());

  std::optional<RateController> controller;
  if (const auto* adaptive = std::get_if<TraceAdaptive>(&config.policy)) {
    controller.emplace(adaptive->trace, seq.fps(), config.ladder);
  }

  EncodeResult r;
  for (std::size_t t = 1; t < seq.size(); ++t) {
    const int g = controller ? controller->choose(t - 1) : std::get<FixedGranularity>(config.policy).g;
    const TokenVector tokens = tokenize(frame_to_feature(seq[t], kWorkingScale), g, config.ladder);
    const ResidualSymbols symbols = encode_frame(tokens, state, config.quant);
    InterFrameRecord rec;
    rec.gran_index = static_cast<std::uint8_t>(config.ladder.index_of(g));
    rec.payload = encode_symbols(symbols, contexts);
    const double bits = layer_bits(rec.payload.size());
    if (controller) controller->record(g, bits);
    r.granularities.push_back(g);
    r.states.push_back(state);
    r.layer_bits.push_back(bits);
    c.records.push_back(std::move(rec));
  }
  r.bytes = write_container(c);
  return r;
}

DecodeResult decode(std::span<const std::uint8_t> bytes) {
  const Container c = read_container(bytes);
  const ContainerHeader& h = c.header;
  if (h.width % kDimensionMultiple != 0 || h.height % kDimensionMultiple != 0 || h.width == 0 || h.height == 0) {
    throw CorruptStream("frame dimensions are not positive multiples of 64", 5);
  }
  if (h.fps == 0) throw CorruptStream("zero frame rate", 9);
  if (h.frame_count == 0) throw CorruptStream("zero frame count", h.serialized_size() - 4);
  if (h.quant_step_q88 == 0) throw CorruptStream("zero quantizer step", h.serialized_size() - 6);

  std::optional<GranularityLadder> ladder;
  try {
    ladder.emplace(std::vector<int>(h.ladder.begin(), h.ladder.end()));
  } catch (const InvalidArgument& e) {
    throw CorruptStream(std::string("bad ladder: ") + e.what(), 11);
  }
  const QuantConfig q = QuantConfig::from_q88(h.quant_step_q88);

  const Frame key_hat = decode_key_frame(c.key_payload, h.width, h.height).luma_only();
  const KeyReference ref(key_hat, key_tokens_of(key_hat));
  PredictorState state = init_state(ref.tokens());
  ContextSet contexts(*ladder, q.symbol_bound());

  std::vector<Frame> frames{key_hat};
  frames.reserve(h.frame_count);
  std::vector<int> granularities;
  std::vector<PredictorState> states;
  for (std::size_t i = 0; i < c.records.size(); ++i) {
    const InterFrameRecord& rec = c.records[i];
    if (rec.gran_index >= ladder->levels().size()) {
      throw CorruptStream("granularity index outside the ladder", 0, i);
    }
    const int g = ladder->levels()[rec.gran_index];
    ResidualSymbols symbols;
    try {
      symbols = decode_symbols(rec.payload, g, contexts);
    } catch (const CorruptStream& e) {
      throw CorruptStream(e.detail(), e.offset(), i);
    }
    frames.push_back(reconstruct_frame(ref, decode_frame(symbols, state, q)));
    granularities.push_back(g);
    states.push_back(state);
  }
  return {Sequence(std::move(frames), h.fps), std::move(granularities), std::move(states)};
}

std::vector<std::vector<double>> measure_layer_costs(const Sequence& seq, const EncodeConfig& base) {
  const auto& levels = base.ladder.levels();
  std::vector<std::vector<double>> costs(seq.size() - 1, std::vector<double>(levels.size()));
  for (std::size_t k = 0; k < levels.size(); ++k) {
    EncodeConfig cfg = base;
    cfg.policy = FixedGranularity{levels[k]};
    const EncodeResult r = encode(seq, cfg);
    for (std::size_t i = 0; i < r.layer_bits.size(); ++i) costs[i][k] = r.layer_bits[i];
  }
  return costs;
}

RdReport rd_report(const Sequence& seq, const RdOptions& options) {
  check_codec_input(seq);
  if (options.key_budgets.empty()) throw InvalidArgument("no key budgets given");
  for (int b : options.key_budgets) {
    if (b < 0 || b >= kKeyPresetCount) throw InvalidArgument("key budget id " + std::to_string(b) + " outside [0, 6)");
  }
  const auto& levels = options.ladder.levels();
  const std::size_t cells = options.key_budgets.size() * levels.size();
  RdReport report;
  report.rows.resize(cells);
  const Sequence reference = luma_only(seq);

  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(cells);
  auto worker = [&] {
    for (std::size_t i = next++; i < cells; i = next++) {
      try {
        RdRow& row = report.rows[i];
        row.key_budget_id = options.key_budgets[i / levels.size()];
        row.granularity = levels[i % levels.size()];
        EncodeConfig cfg{options.ladder, options.quant, FixedGranularity{row.granularity}, row.key_budget_id};
        const EncodeResult enc = encode(seq, cfg);
        const DecodeResult dec = decode(enc.bytes);
        row.rate_kbps = measure_bitrate(enc.bytes.size(), seq.fps(), static_cast<std::uint32_t>(seq.size()));
        row.psnr_db = sequence_psnr(reference, dec.sequence);
        row.ssim = options.compute_ssim ? sequence_ssim(reference, dec.sequence) : 0.0;
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned n_threads = std::clamp<unsigned>(options.threads, 1u, static_cast<unsigned>(cells));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::vector<RdPoint> points;
  for (const RdRow& row : report.rows) points.push_back({row.rate_kbps, std::min(row.psnr_db, kPsnrHullCap), {}});
  for (std::size_t i : convex_hull_indices(points)) report.rows[i].on_hull = true;
  return report;
}

std::string rd_report_csv(const RdReport& report) {
  std::set<std::string> extra;
  for (const RdRow& row : report.rows) {
    for (const auto& [name, _] : row.extra) extra.insert(name);
  }
  std::string out = "# rate_kbps counts every container byte, key frame included\n";
  out += "key_budget_id,granularity,rate_kbps,psnr_db,ssim,on_hull";
  for (const auto& name : extra) out += "," + name;
  out += "\n";
  for (const RdRow& row : report.rows) {
    out += std::to_string(row.key_budget_id) + "," + std::to_string(row.granularity) + "," +
           format_number(row.rate_kbps) + "," + format_number(row.psnr_db) + "," + format_number(row.ssim) + "," +
           (row.on_hull ? "1" : "0");
    for (const auto& name : extra) {
      const auto it = row.extra.find(name);
      out += "," + (it == row.extra.end() ? std::string() : format_number(it->second));
    }
    out += "\n";
  }
  return out;
}

}  // namespace pfvc
