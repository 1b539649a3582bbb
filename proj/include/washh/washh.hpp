// Copyright 2026 The washh Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef WASHH_WASHH_HPP
#define WASHH_WASHH_HPP

#include <array>
#include <cstdint>
#include <optional>

#include "washh/core.hpp"
#include "washh/operators.hpp"

namespace washh {

/// Per-operator credit with exponential smoothing and an exploration floor.
struct RewardScores {
  std::array<double, kOperatorCount> score{};
  double alpha = 0.3;
  double floor = 0.05;

  static RewardScores uniform(double initial = 1.0, double alpha = 0.3, double floor = 0.05);

  double operator[](OperatorId op) const { return score[static_cast<std::size_t>(op)]; }
  /// Selection probabilities; AnchorMove gets zero when masked.
  std::array<double, kOperatorCount> probabilities(bool anchors_available) const;
};

/// Roulette-wheel draw proportional to the scores.
OperatorId select_operator(const RewardScores& scores, Rng& rng, bool anchors_available);

/// Uniform draw over the live operators.
OperatorId select_uniform(Rng& rng, bool anchors_available);

/// Credits `op` with reward_incumbent if the incumbent improved, else
/// reward_slot if the slot improved, else 0.  Every score is smoothed
/// (unselected operators receive 0) and floored.
void update_rewards(RewardScores& scores, OperatorId op, bool improved_slot,
                    bool improved_incumbent, double reward_slot = 0.5,
                    double reward_incumbent = 1.0);

enum class Selection { Adaptive, Uniform };

struct WashhConfig {
  std::size_t pop_size = 30;
  std::size_t budget = 12000;
  /// Defaults to default_reserve(dim, budget, pop_size).  Forced to zero
  /// when anchors are disabled.
  std::optional<std::size_t> reserve;
  double alpha = 0.3;
  double score_floor = 0.05;
  double initial_score = 1.0;
  double reward_slot = 0.5;
  double reward_incumbent = 1.0;
  OperatorParams operators;
  std::uint64_t seed = 0;

  Selection selection = Selection::Adaptive;
  /// When false the anchor set is empty: no anchor initialization, no
  /// AnchorMove, and no refinement reserve.
  bool use_anchors = true;
};

/// Throws std::invalid_argument on an inconsistent configuration and
/// PopulationTooSmall below four members.
void validate(const WashhConfig& config);

/// Adaptive selection hyper-heuristic run:
///   1. anchors (truncated to pop_size) then uniform samples fill the
///      population; every member is evaluated;
///   2. until only the reserve remains: pick an operator, propose for the
///      next slot in round-robin order, evaluate, replace greedily, credit
///      the operator;
///   3. spend the reserve in refinement_phase.
RunResult run_washh(const Problem& problem, const WashhConfig& config);

}  // namespace washh

#endif  // WASHH_WASHH_HPP
