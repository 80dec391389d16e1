#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "pfvc/rng.hpp"
#include "pfvc/tokenizer.hpp"

namespace pfvc {

struct ScheduleStage {
  int first_epoch = 0;  // inclusive
  int last_epoch = 0;   // inclusive
  std::vector<int> granularities;
  std::vector<double> probabilities;

  friend bool operator==(const ScheduleStage&, const ScheduleStage&) = default;
};

struct TrainingSchedule {
  int n_epochs = 200;
  std::vector<ScheduleStage> stages;

  // Throws InvalidArgument when no stage covers the epoch.
  const ScheduleStage& stage_for(int epoch) const;

  friend bool operator==(const TrainingSchedule&, const TrainingSchedule&) = default;
};

// The five-stage progressive schedule over 200 epochs.
TrainingSchedule default_schedule();

struct GranularityDraw {
  int granularity = 0;
  CounterRng next;
};

GranularityDraw sample_granularity(const TrainingSchedule& schedule, int epoch, CounterRng rng);

// Empty when the schedule is valid; otherwise one message per violation.
std::vector<std::string> validate_schedule(const TrainingSchedule& schedule,
                                           const GranularityLadder& ladder = GranularityLadder{});

// Table form, one stage per line:
//   epochs 200
//   S1 1-40 256 1
//   S2 41-80 144,256 0.7,0.3
std::string schedule_to_text(const TrainingSchedule& schedule);
TrainingSchedule parse_schedule(std::string_view text);

struct LossWeights {
  double per = 10.0;
  double adv = 1.0;
  double fea = 10.0;
};

double aggregate_loss(double l_per, double l_adv, double l_fea, const LossWeights& w = {});

}  // namespace pfvc
