#include "pfvc/rate_adapt.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>

#include "pfvc/errors.hpp"

namespace pfvc {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(std::string_view s, const std::string& context) {
  s = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw InvalidArgument(context + ": cannot parse number '" + std::string(s) + "'");
  }
  return v;
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view line = trim(text.substr(0, nl));
    ++line_no;
    if (!line.empty() && line.front() != '#') fn(line, line_no);
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
}

std::string format_double(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

// > 0 when b lies strictly above the segment a -> c, for a.rate < c.rate.
double turn(const RdPoint& a, const RdPoint& b, const RdPoint& c) {
  return (b.quality - a.quality) * (c.rate_kbps - a.rate_kbps) -
         (c.quality - a.quality) * (b.rate_kbps - a.rate_kbps);
}

}  // namespace

BandwidthTrace::BandwidthTrace(std::vector<TracePoint> points) : points_(std::move(points)) {
  if (points_.empty()) throw InvalidArgument("bandwidth trace is empty");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!std::isfinite(points_[i].time_s) || !(points_[i].budget_kbps > 0.0) ||
        !std::isfinite(points_[i].budget_kbps)) {
      throw InvalidArgument("trace budgets must be positive and finite");
    }
    if (i > 0 && !(points_[i].time_s > points_[i - 1].time_s)) {
      throw InvalidArgument("trace times must be strictly increasing");
    }
  }
}

BandwidthTrace BandwidthTrace::constant(double budget_kbps) { return BandwidthTrace({{0.0, budget_kbps}}); }

double BandwidthTrace::budget_at(double time_s) const noexcept {
  const auto it = std::upper_bound(points_.begin(), points_.end(), time_s,
                                   [](double t, const TracePoint& p) { return t < p.time_s; });
  return it == points_.begin() ? points_.front().budget_kbps : std::prev(it)->budget_kbps;
}

BandwidthTrace parse_trace(std::string_view text) {
  std::vector<TracePoint> points;
  for_each_line(text, [&](std::string_view line, std::size_t n) {
    const std::string where = "trace line " + std::to_string(n);
    const auto sep = line.find_first_of(" \t");
    if (sep == std::string_view::npos) throw InvalidArgument(where + ": expected 'time_s budget_kbps'");
    points.push_back({parse_double(line.substr(0, sep), where), parse_double(line.substr(sep + 1), where)});
  });
  return BandwidthTrace(std::move(points));
}

std::string trace_to_text(const BandwidthTrace& trace) {
  std::string out;
  for (const TracePoint& p : trace.points()) out += format_double(p.time_s) + " " + format_double(p.budget_kbps) + "\n";
  return out;
}

CostEstimator::CostEstimator(GranularityLadder ladder)
    : ladder_(std::move(ladder)), ewma_(ladder_.levels().size()) {}

void CostEstimator::observe(int g, double bits) {
  if (!(bits > 0.0) || !std::isfinite(bits)) throw InvalidArgument("observed layer cost must be positive");
  auto& e = ewma_[ladder_.index_of(g)];
  e = e ? (1.0 - kAlpha) * *e + kAlpha * bits : bits;
}

std::optional<double> CostEstimator::estimate(int g) const { return ewma_[ladder_.index_of(g)]; }

std::optional<double> CostEstimator::predicted(int g) const {
  const auto i = static_cast<std::ptrdiff_t>(ladder_.index_of(g));
  if (ewma_[static_cast<std::size_t>(i)]) return ewma_[static_cast<std::size_t>(i)];
  const auto n = static_cast<std::ptrdiff_t>(ewma_.size());
  for (std::ptrdiff_t d = 1; d < n; ++d) {
    for (const std::ptrdiff_t j : {i - d, i + d}) {
      if (j < 0 || j >= n || !ewma_[static_cast<std::size_t>(j)]) continue;
      return *ewma_[static_cast<std::size_t>(j)] * g / ladder_.levels()[static_cast<std::size_t>(j)];
    }
  }
  return std::nullopt;
}

int select_granularity(double budget_bits_per_frame, const CostEstimator& estimator,
                       const GranularityLadder& ladder) {
  const auto& levels = ladder.levels();
  for (auto it = levels.rbegin(); it != levels.rend(); ++it) {
    const auto cost = estimator.predicted(*it);
    if (cost && *cost <= budget_bits_per_frame) return *it;
  }
  return levels.front();
}

RateController::RateController(BandwidthTrace trace, double fps, GranularityLadder ladder)
    : trace_(std::move(trace)), fps_(fps), ladder_(ladder), estimator_(std::move(ladder)) {
  if (!(fps_ > 0.0) || !std::isfinite(fps_)) throw InvalidArgument("fps must be positive");
}

double RateController::budget_bits(std::size_t frame_index) const noexcept {
  return trace_.budget_at(static_cast<double>(frame_index) / fps_) * 1000.0 / fps_;
}

int RateController::choose(std::size_t frame_index) const {
  return select_granularity(budget_bits(frame_index), estimator_, ladder_);
}

std::vector<double> window_kbps(std::span<const double> frame_bits, double fps) {
  if (!(fps > 0.0)) throw InvalidArgument("fps must be positive");
  const auto per = static_cast<std::size_t>(std::max(1L, std::lround(fps)));
  std::vector<double> out;
  for (std::size_t b = 0; b < frame_bits.size(); b += per) {
    const std::size_t e = std::min(frame_bits.size(), b + per);
    const double bits = std::accumulate(frame_bits.begin() + static_cast<std::ptrdiff_t>(b),
                                        frame_bits.begin() + static_cast<std::ptrdiff_t>(e), 0.0);
    out.push_back(bits * fps / static_cast<double>(e - b) / 1000.0);
  }
  return out;
}

ChannelResult simulate_channel(const std::vector<std::vector<double>>& costs, const BandwidthTrace& trace,
                               double fps, const GranularityLadder& ladder) {
  RateController ctl(trace, fps, ladder);
  ChannelResult r;
  for (std::size_t i = 0; i < costs.size(); ++i) {
    if (costs[i].size() != ladder.levels().size()) {
      throw InvalidArgument("cost table row " + std::to_string(i) + " does not match the ladder");
    }
    const int g = ctl.choose(i);
    const double bits = costs[i][ladder.index_of(g)];
    ctl.record(g, bits);
    r.granularities.push_back(g);
    r.frame_bits.push_back(bits);
  }
  r.window_kbps = window_kbps(r.frame_bits, fps);
  const auto per = static_cast<std::size_t>(std::max(1L, std::lround(fps)));
  for (std::size_t b = 0; b < costs.size(); b += per) {
    double lo = trace.budget_at(static_cast<double>(b) / fps);
    for (std::size_t i = b; i < std::min(costs.size(), b + per); ++i) {
      lo = std::min(lo, trace.budget_at(static_cast<double>(i) / fps));
    }
    r.window_budget.push_back(lo);
  }
  return r;
}

std::vector<std::size_t> convex_hull_indices(std::span<const RdPoint> points) {
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (points[a].rate_kbps != points[b].rate_kbps) return points[a].rate_kbps < points[b].rate_kbps;
    return points[a].quality > points[b].quality;
  });
  std::vector<std::size_t> hull;
  for (const std::size_t i : order) {
    const RdPoint& p = points[i];
    if (!hull.empty() && p.quality <= points[hull.back()].quality) continue;
    while (hull.size() >= 2 && turn(points[hull[hull.size() - 2]], points[hull.back()], p) <= 0.0) hull.pop_back();
    hull.push_back(i);
  }
  return hull;
}

std::vector<RdPoint> convex_hull_rd(std::span<const RdPoint> points) {
  std::vector<RdPoint> out;
  for (const std::size_t i : convex_hull_indices(points)) out.push_back(points[i]);
  return out;
}

std::string rd_points_to_csv(std::span<const RdPoint> points) {
  std::string out = "rate_kbps,quality,label\n";
  for (const RdPoint& p : points) out += format_double(p.rate_kbps) + "," + format_double(p.quality) + "," + p.label + "\n";
  return out;
}

std::vector<RdPoint> rd_points_from_csv(std::string_view text) {
  std::vector<RdPoint> out;
  bool header = true;
  for_each_line(text, [&](std::string_view line, std::size_t n) {
    if (header) {
      header = false;
      if (line.substr(0, 9) == "rate_kbps") return;
    }
    const std::string where = "RD csv line " + std::to_string(n);
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string_view::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string_view::npos) throw InvalidArgument(where + ": expected rate_kbps,quality,label");
    RdPoint p{parse_double(line.substr(0, c1), where), parse_double(line.substr(c1 + 1, c2 - c1 - 1), where),
              std::string(line.substr(c2 + 1))};
    if (!(p.rate_kbps > 0.0)) throw InvalidArgument(where + ": rate must be positive");
    out.push_back(std::move(p));
  });
  return out;
}

}  // namespace pfvc
