#include "pfvc/schedule.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "pfvc/errors.hpp"

namespace pfvc {

namespace {

constexpr double kSumTolerance = 1e-9;

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  char buf[32];
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s.append(buf, std::to_chars(buf, buf + sizeof buf, v[i]).ptr);
  }
  return s;
}

template <typename T>
std::vector<T> split_list(const std::string& field, const std::string& where) {
  std::vector<T> out;
  std::istringstream in(field);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::istringstream num(item);
    T v{};
    if (!(num >> v) || !(num >> std::ws).eof()) throw InvalidArgument(where + ": bad list item '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw InvalidArgument(where + ": empty list");
  return out;
}

}  // namespace

const ScheduleStage& TrainingSchedule::stage_for(int epoch) const {
  if (epoch < 1 || epoch > n_epochs) {
    throw InvalidArgument("epoch " + std::to_string(epoch) + " outside [1, " + std::to_string(n_epochs) + "]");
  }
  for (const ScheduleStage& s : stages) {
    if (epoch >= s.first_epoch && epoch <= s.last_epoch) return s;
  }
  throw InvalidArgument("no stage covers epoch " + std::to_string(epoch));
}

TrainingSchedule default_schedule() {
  TrainingSchedule s;
  s.n_epochs = 200;
  s.stages = {
      {1, 40, {256}, {1.0}},
      {41, 80, {144, 256}, {0.7, 0.3}},
      {81, 120, {64, 144, 256}, {0.5, 0.3, 0.2}},
      {121, 160, {16, 64, 144, 256}, {0.45, 0.25, 0.15, 0.15}},
      {161, 200, {16, 64, 144, 256}, {0.25, 0.25, 0.25, 0.25}},
  };
  return s;
}

GranularityDraw sample_granularity(const TrainingSchedule& schedule, int epoch, CounterRng rng) {
  const ScheduleStage& stage = schedule.stage_for(epoch);
  if (stage.granularities.empty() || stage.granularities.size() != stage.probabilities.size()) {
    throw InvalidArgument("malformed stage for epoch " + std::to_string(epoch));
  }
  const double u = rng.next_unit();
  double cum = 0.0;
  std::size_t pick = stage.granularities.size();
  for (std::size_t i = 0; i < stage.probabilities.size(); ++i) {
    cum += stage.probabilities[i];
    if (u < cum) {
      pick = i;
      break;
    }
  }
  if (pick == stage.granularities.size()) {
    // Rounding left u above the final cumulative sum: take the last
    // category with nonzero mass.
    for (std::size_t i = stage.probabilities.size(); i-- > 0;) {
      if (stage.probabilities[i] > 0.0) {
        pick = i;
        break;
      }
    }
  }
  return {stage.granularities[pick], rng};
}

std::vector<std::string> validate_schedule(const TrainingSchedule& schedule, const GranularityLadder& ladder) {
  std::vector<std::string> v;
  if (schedule.n_epochs < 1) v.push_back("n_epochs must be positive");
  if (schedule.stages.empty()) {
    v.push_back("schedule has no stages");
    return v;
  }

  std::set<int> seen;
  for (std::size_t k = 0; k < schedule.stages.size(); ++k) {
    const ScheduleStage& s = schedule.stages[k];
    const std::string name = "stage S" + std::to_string(k + 1);

    if (s.first_epoch > s.last_epoch) v.push_back(name + ": empty epoch range");
    const int expected_first = k == 0 ? 1 : schedule.stages[k - 1].last_epoch + 1;
    if (s.first_epoch > expected_first) {
      v.push_back(name + ": coverage gap before epoch " + std::to_string(s.first_epoch));
    } else if (s.first_epoch < expected_first) {
      v.push_back(name + ": overlaps the previous stage at epoch " + std::to_string(s.first_epoch));
    }

    if (s.granularities.empty()) v.push_back(name + ": no granularities");
    if (s.granularities.size() != s.probabilities.size()) {
      v.push_back(name + ": granularities and probabilities differ in length");
      continue;
    }
    const std::set<int> current(s.granularities.begin(), s.granularities.end());
    if (current.size() != s.granularities.size()) v.push_back(name + ": repeated granularity");
    for (int g : s.granularities) {
      if (!ladder.contains(g)) v.push_back(name + ": granularity " + std::to_string(g) + " not on the ladder");
    }
    bool negative = false;
    for (double p : s.probabilities) negative |= !(p >= 0.0);
    if (negative) v.push_back(name + ": negative or non-finite probability");
    const double sum = std::accumulate(s.probabilities.begin(), s.probabilities.end(), 0.0);
    if (!(std::abs(sum - 1.0) <= kSumTolerance)) v.push_back(name + ": probabilities sum to " + std::to_string(sum));

    if (!std::includes(current.begin(), current.end(), seen.begin(), seen.end())) {
      v.push_back(name + ": drops a granularity used by an earlier stage");
    }

    const bool final_stage = k + 1 == schedule.stages.size();
    const double max_p =
        s.probabilities.empty() ? 0.0 : *std::max_element(s.probabilities.begin(), s.probabilities.end());
    if (final_stage) {
      for (double p : s.probabilities) {
        if (std::abs(p - 1.0 / static_cast<double>(s.probabilities.size())) > kSumTolerance) {
          v.push_back(name + ": final stage is not uniform");
          break;
        }
      }
    } else {
      for (std::size_t i = 0; i < s.granularities.size(); ++i) {
        if (!seen.contains(s.granularities[i]) && s.probabilities[i] < max_p) {
          v.push_back(name + ": new granularity " + std::to_string(s.granularities[i]) +
                      " lacks the maximum probability");
        }
      }
    }
    seen.insert(current.begin(), current.end());
  }

  if (schedule.stages.back().last_epoch != schedule.n_epochs) {
    v.push_back("stages end at epoch " + std::to_string(schedule.stages.back().last_epoch) + ", expected " +
                std::to_string(schedule.n_epochs));
  }
  if (seen != std::set<int>(ladder.levels().begin(), ladder.levels().end())) {
    v.push_back("stages do not cover the whole ladder");
  }
  return v;
}

std::string schedule_to_text(const TrainingSchedule& schedule) {
  std::string out = "# stage epochs granularities probabilities\nepochs " + std::to_string(schedule.n_epochs) + "\n";
  for (std::size_t k = 0; k < schedule.stages.size(); ++k) {
    const ScheduleStage& s = schedule.stages[k];
    out += "S" + std::to_string(k + 1) + " " + std::to_string(s.first_epoch) + "-" + std::to_string(s.last_epoch) +
           " " + join(s.granularities) + " " + join(s.probabilities) + "\n";
  }
  return out;
}

TrainingSchedule parse_schedule(std::string_view text) {
  TrainingSchedule s;
  s.stages.clear();
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = "schedule line " + std::to_string(line_no);
    std::istringstream fields(line);
    std::string head;
    if (!(fields >> head) || head.front() == '#') continue;
    if (head == "epochs") {
      if (!(fields >> s.n_epochs)) throw InvalidArgument(where + ": bad epoch count");
      continue;
    }
    std::string range, gs, ps;
    if (!(fields >> range >> gs >> ps)) throw InvalidArgument(where + ": expected 'stage first-last G P'");
    const auto dash = range.find('-');
    if (dash == std::string::npos) throw InvalidArgument(where + ": bad epoch range '" + range + "'");
    ScheduleStage st;
    try {
      st.first_epoch = std::stoi(range.substr(0, dash));
      st.last_epoch = std::stoi(range.substr(dash + 1));
    } catch (const std::exception&) {
      throw InvalidArgument(where + ": bad epoch range '" + range + "'");
    }
    st.granularities = split_list<int>(gs, where);
    st.probabilities = split_list<double>(ps, where);
    s.stages.push_back(std::move(st));
  }
  if (s.stages.empty()) throw InvalidArgument("schedule text has no stages");
  return s;
}

double aggregate_loss(double l_per, double l_adv, double l_fea, const LossWeights& w) {
  if (!std::isfinite(l_per) || !std::isfinite(l_adv) || !std::isfinite(l_fea)) {
    throw InvalidArgument("loss terms must be finite");
  }
  if (!(w.per > 0.0) || !(w.adv > 0.0) || !(w.fea > 0.0)) throw InvalidArgument("loss weights must be positive");
  return w.per * l_per + w.adv * l_adv + w.fea * l_fea;
}

}  // namespace pfvc
