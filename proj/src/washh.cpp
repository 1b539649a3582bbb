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

#include "washh/washh.hpp"

#include <algorithm>
#include <stdexcept>

#include "washh/anchors.hpp"

namespace washh {

namespace {
constexpr std::size_t kAnchorIndex = static_cast<std::size_t>(OperatorId::AnchorMove);
}

RewardScores RewardScores::uniform(double initial, double alpha, double floor) {
  RewardScores s;
  s.score.fill(std::max(initial, floor));
  s.alpha = alpha;
  s.floor = floor;
  return s;
}

std::array<double, kOperatorCount> RewardScores::probabilities(bool anchors_available) const {
  std::array<double, kOperatorCount> p = score;
  if (!anchors_available) p[kAnchorIndex] = 0.0;
  double total = 0.0;
  for (double v : p) total += v;
  for (double& v : p) v /= total;
  return p;
}

OperatorId select_operator(const RewardScores& scores, Rng& rng, bool anchors_available) {
  const std::size_t live = anchors_available ? kOperatorCount : kOperatorCount - 1;
  double total = 0.0;
  for (std::size_t k = 0; k < live; ++k) total += scores.score[k];
  const double target = rng.uniform() * total;
  double acc = 0.0;
  for (std::size_t k = 0; k < live; ++k) {
    acc += scores.score[k];
    if (target < acc) return static_cast<OperatorId>(k);
  }
  return static_cast<OperatorId>(live - 1);
}

OperatorId select_uniform(Rng& rng, bool anchors_available) {
  const std::size_t live = anchors_available ? kOperatorCount : kOperatorCount - 1;
  return static_cast<OperatorId>(rng.below(live));
}

void update_rewards(RewardScores& scores, OperatorId op, bool improved_slot,
                    bool improved_incumbent, double reward_slot, double reward_incumbent) {
  const double r = improved_incumbent ? reward_incumbent : (improved_slot ? reward_slot : 0.0);
  const auto selected = static_cast<std::size_t>(op);
  for (std::size_t k = 0; k < kOperatorCount; ++k) {
    const double raw = k == selected ? r : 0.0;
    scores.score[k] = std::max(scores.floor, (1.0 - scores.alpha) * scores.score[k] + scores.alpha * raw);
  }
}

void validate(const WashhConfig& c) {
  if (c.pop_size < 4) throw PopulationTooSmall(4, c.pop_size);
  if (!(c.alpha > 0.0 && c.alpha <= 1.0)) throw std::invalid_argument("alpha must lie in (0, 1]");
  if (!(c.score_floor > 0.0)) throw std::invalid_argument("score floor must be positive");
  if (!(c.reward_slot > 0.0 && c.reward_incumbent >= c.reward_slot)) {
    throw std::invalid_argument("rewards must satisfy reward_incumbent >= reward_slot > 0");
  }
  const std::size_t reserve = c.reserve.value_or(0);
  if (c.budget < c.pop_size + reserve) {
    throw std::invalid_argument("budget must cover the initial population and the reserve");
  }
}

RunResult run_washh(const Problem& problem, const WashhConfig& config) {
  validate(config);
  const std::size_t n = config.pop_size;
  std::size_t reserve = 0;
  if (config.use_anchors) {
    reserve = config.reserve.value_or(default_reserve(problem.dim, config.budget, n));
  }
  if (config.budget < n + reserve) {
    throw std::invalid_argument("budget must cover the initial population and the reserve");
  }

  const AnchorSet anchors = config.use_anchors ? derive_anchors(problem) : AnchorSet{};
  const bool anchors_available = !anchors.empty();
  BudgetedEvaluator evaluator(problem, config.budget, reserve);
  Rng rng(config.seed);

  std::vector<Vector> population;
  Vector fitness;
  population.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    Vector x = k < anchors.size() ? anchors.points[k] : uniform_in_box(rng, problem);
    fitness.push_back(evaluator.evaluate(x));
    population.push_back(std::move(x));
  }
  SearchState state = SearchState::from_population(std::move(population), std::move(fitness));

  RewardScores scores =
      RewardScores::uniform(config.initial_score, config.alpha, config.score_floor);
  RunResult result;
  const auto main_total = static_cast<double>(evaluator.budget().main_total());

  std::size_t step = 0;
  auto portfolio_step = [&] {
    state.progress = std::min(1.0, static_cast<double>(evaluator.used()) / main_total);
    const OperatorId op = config.selection == Selection::Adaptive
                              ? select_operator(scores, rng, anchors_available)
                              : select_uniform(rng, anchors_available);
    const std::size_t slot = step++ % n;
    const Vector candidate = propose(op, state, slot, problem, anchors, rng, config.operators);
    const Evaluation ev = evaluator.evaluate_candidate(candidate);
    const auto [slot_improved, incumbent_improved] = state.accept(slot, ev);
    if (config.selection == Selection::Adaptive) {
      update_rewards(scores, op, slot_improved, incumbent_improved, config.reward_slot,
                     config.reward_incumbent);
    }
    ++result.operator_counts[static_cast<std::size_t>(op)];
  };

  while (!evaluator.main_phase_done()) portfolio_step();

  if (reserve > 0) {
    const Incumbent refined =
        refinement_phase(evaluator, anchors, Incumbent{state.incumbent, state.incumbent_value});
    // A schedule that finishes early hands its leftover back to the
    // portfolio, seeded with the refined point in the worst slot.
    if (evaluator.remaining() > 0) {
      if (refined.value < state.incumbent_value) {
        const auto worst = static_cast<std::size_t>(
            std::max_element(state.fitness.begin(), state.fitness.end()) - state.fitness.begin());
        state.accept(worst, Evaluation{refined.x, refined.value});
      }
      while (evaluator.remaining() > 0) portfolio_step();
    }
  }

  auto counts = result.operator_counts;
  result = finish_run(evaluator);
  result.operator_counts = counts;
  return result;
}

}  // namespace washh
