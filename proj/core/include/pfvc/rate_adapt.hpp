#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pfvc/tokenizer.hpp"

namespace pfvc {

struct TracePoint {
  double time_s = 0.0;
  double budget_kbps = 0.0;

  friend bool operator==(const TracePoint&, const TracePoint&) = default;
};

// Step function of available bandwidth. Before the first sample the first
// budget applies.
class BandwidthTrace {
 public:
  explicit BandwidthTrace(std::vector<TracePoint> points);
  static BandwidthTrace constant(double budget_kbps);

  double budget_at(double time_s) const noexcept;
  const std::vector<TracePoint>& points() const noexcept { return points_; }

  friend bool operator==(const BandwidthTrace&, const BandwidthTrace&) = default;

 private:
  std::vector<TracePoint> points_;
};

// Text form: one "time_s budget_kbps" pair per line; blank lines and
// lines starting with '#' are ignored.
BandwidthTrace parse_trace(std::string_view text);
std::string trace_to_text(const BandwidthTrace& trace);

// Per-granularity EWMA of the bits actually spent on inter-frame layers.
class CostEstimator {
 public:
  static constexpr double kAlpha = 0.2;

  explicit CostEstimator(GranularityLadder ladder);

  void observe(int g, double bits);

  // The EWMA itself, if g has been observed.
  std::optional<double> estimate(int g) const;

  // estimate(g), or for an unseen g the nearest observed level scaled by
  // g / g_known (smaller levels preferred). nullopt when nothing has been
  // observed yet.
  std::optional<double> predicted(int g) const;

  const GranularityLadder& ladder() const noexcept { return ladder_; }

 private:
  GranularityLadder ladder_;
  std::vector<std::optional<double>> ewma_;
};

// Largest g whose predicted cost fits the budget, else the smallest g.
int select_granularity(double budget_bits_per_frame, const CostEstimator& estimator,
                       const GranularityLadder& ladder);

// Causal per-frame controller: frame i is sent at time i / fps.
class RateController {
 public:
  RateController(BandwidthTrace trace, double fps, GranularityLadder ladder);

  double budget_bits(std::size_t frame_index) const noexcept;
  int choose(std::size_t frame_index) const;
  void record(int g, double bits) { estimator_.observe(g, bits); }

  const CostEstimator& estimator() const noexcept { return estimator_; }

 private:
  BandwidthTrace trace_;
  double fps_;
  GranularityLadder ladder_;
  CostEstimator estimator_;
};

struct ChannelResult {
  std::vector<int> granularities;      // per frame
  std::vector<double> frame_bits;      // per frame
  std::vector<double> window_kbps;     // per 1-second window of frames
  std::vector<double> window_budget;   // lowest trace budget inside each window
};

// costs[i][k] = bits of frame i coded at ladder level k.
ChannelResult simulate_channel(const std::vector<std::vector<double>>& costs, const BandwidthTrace& trace,
                               double fps, const GranularityLadder& ladder);

// kbps over consecutive windows of round(fps) frames; a short final window
// is scaled by its own duration.
std::vector<double> window_kbps(std::span<const double> frame_bits, double fps);

struct RdPoint {
  double rate_kbps = 0.0;
  double quality = 0.0;  // higher is better
  std::string label;

  friend bool operator==(const RdPoint&, const RdPoint&) = default;
};

// Upper-left frontier: sorted by rate, strictly increasing quality,
// strictly decreasing slope between consecutive points.
std::vector<RdPoint> convex_hull_rd(std::span<const RdPoint> points);

// Same frontier as indices into the input.
std::vector<std::size_t> convex_hull_indices(std::span<const RdPoint> points);

// CSV with header "rate_kbps,quality,label".
std::string rd_points_to_csv(std::span<const RdPoint> points);
std::vector<RdPoint> rd_points_from_csv(std::string_view text);

}  // namespace pfvc
