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

#ifndef WASHH_ANCHORS_HPP
#define WASHH_ANCHORS_HPP

#include <array>
#include <span>
#include <vector>

#include "washh/core.hpp"

namespace washh {

/// Reference configurations used to bias the search.  Anchors are never
/// accepted without being evaluated like any other candidate.
struct AnchorSet {
  std::vector<Vector> points;

  bool empty() const { return points.empty(); }
  std::size_t size() const { return points.size(); }
};

/// Box center, zero vector and all-ones vector when feasible, upper / 2 for
/// wide symmetric boxes (lower = -upper, upper >= 100 everywhere), then the
/// problem's own anchors.  Exact duplicates are dropped; order is kept.
AnchorSet derive_anchors(const Problem& problem);

/// a + gamma * (incumbent - a) + noise, before clipping.  An empty noise
/// span means no perturbation.
Vector anchor_blend(std::span<const double> anchor, std::span<const double> incumbent,
                    double gamma, std::span<const double> noise = {});

/// gamma ~ U[0, 1], noise_i ~ N(0, (sigma * width_i)^2); result is clipped.
Vector anchor_proposal(Rng& rng, std::span<const double> anchor,
                       std::span<const double> incumbent, const Problem& problem,
                       double sigma = 0.01);

inline constexpr std::array<double, 3> kRefinementBlends = {0.25, 0.5, 0.75};
/// Coordinate probe steps as fractions of the box width, largest first.
inline constexpr std::array<double, 3> kRefinementSteps = {1e-2, 1e-4, 1e-6};

/// max(3 * dim, 5% of the budget), capped so pop_size initial evaluations
/// still fit.
std::size_t default_reserve(std::size_t dim, std::size_t budget, std::size_t pop_size);

struct Incumbent {
  Vector x;
  double value;
};

/// Deterministic end-of-budget intensification.  Spends whatever the
/// evaluator has left on, in order:
///   1. every anchor;
///   2. every anchor blended toward the current best at kRefinementBlends;
///   3. a compass search around the current best: for each step size in
///      kRefinementSteps, sweep the coordinates in index order trying
///      +step then -step; a successful direction is repeated until it stops
///      improving, and the sweep is repeated until it yields no improvement.
/// Stops as soon as the budget runs out or the schedule completes.  The
/// returned incumbent is never worse than the one passed in.
Incumbent refinement_phase(BudgetedEvaluator& evaluator, const AnchorSet& anchors,
                           Incumbent incumbent);

}  // namespace washh

#endif  // WASHH_ANCHORS_HPP
