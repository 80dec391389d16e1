#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "pfvc/media.hpp"
#include "pfvc/rate_adapt.hpp"
#include "pfvc/token_codec.hpp"
#include "pfvc/tokenizer.hpp"

namespace pfvc {

struct FixedGranularity {
  int g = kFeatureSize;
};

struct TraceAdaptive {
  BandwidthTrace trace;
};

using GranularityPolicy = std::variant<FixedGranularity, TraceAdaptive>;

struct EncodeConfig {
  GranularityLadder ladder;
  QuantConfig quant;
  GranularityPolicy policy = FixedGranularity{};
  // Key-frame preset in [0, 6); nullopt stores the key frame losslessly.
  std::optional<int> key_budget = 3;
};

// Sequences must have width and height divisible by 64 and an integer
// frame rate in [1, 255].
void check_codec_input(const Sequence& seq);

struct EncodeResult {
  std::vector<std::uint8_t> bytes;
  std::vector<int> granularities;         // per inter frame
  std::vector<PredictorState> states;     // encoder state after each inter frame
  std::vector<double> layer_bits;         // record header + payload, per inter frame
};

EncodeResult encode(const Sequence& seq, const EncodeConfig& config);

struct DecodeResult {
  Sequence sequence;
  std::vector<int> granularities;
  std::vector<PredictorState> states;
};

// Every failure on malformed input is a CorruptStream. Output frames are
// luma only.
DecodeResult decode(std::span<const std::uint8_t> bytes);

// costs[i][k]: inter-frame layer bits of frame i + 1 when the whole
// sequence is coded at ladder level k.
std::vector<std::vector<double>> measure_layer_costs(const Sequence& seq, const EncodeConfig& base);

struct RdRow {
  int key_budget_id = 0;
  int granularity = 0;
  double rate_kbps = 0.0;  // whole container, key frame included
  double psnr_db = 0.0;    // pooled MSE over all frames
  double ssim = 0.0;
  bool on_hull = false;
  std::map<std::string, double> extra;  // externally computed metrics
};

struct RdReport {
  std::vector<RdRow> rows;
};

struct RdOptions {
  GranularityLadder ladder;
  QuantConfig quant;
  std::vector<int> key_budgets{0, 1, 2, 3, 4, 5};
  bool compute_ssim = true;
  unsigned threads = 1;
};

// One row per (key budget, granularity) cell, budget-major. Hull flags
// come from convex_hull_rd on (rate, PSNR). Output does not depend on
// the thread count.
RdReport rd_report(const Sequence& seq, const RdOptions& options = {});

// CSV: key_budget_id,granularity,rate_kbps,psnr_db,ssim,on_hull followed
// by the sorted union of extra column names.
std::string rd_report_csv(const RdReport& report);

}  // namespace pfvc
