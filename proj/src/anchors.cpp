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

#include "washh/anchors.hpp"

#include <algorithm>
#include <cmath>

namespace washh {

AnchorSet derive_anchors(const Problem& problem) {
  const std::size_t d = problem.dim;
  AnchorSet set;
  auto add = [&](const Vector& x) {
    Vector c = clip(x, problem);
    if (std::find(set.points.begin(), set.points.end(), c) == set.points.end()) {
      set.points.push_back(std::move(c));
    }
  };

  Vector center(d);
  for (std::size_t i = 0; i < d; ++i) center[i] = 0.5 * (problem.lower[i] + problem.upper[i]);
  add(center);

  const Vector zeros(d, 0.0);
  if (problem.contains(zeros)) add(zeros);
  const Vector ones(d, 1.0);
  if (problem.contains(ones)) add(ones);

  bool wide_symmetric = true;
  for (std::size_t i = 0; i < d; ++i) {
    if (problem.lower[i] != -problem.upper[i] || problem.upper[i] < 100.0) {
      wide_symmetric = false;
      break;
    }
  }
  if (wide_symmetric) {
    Vector half(d);
    for (std::size_t i = 0; i < d; ++i) half[i] = 0.5 * problem.upper[i];
    add(half);
  }

  for (const auto& a : problem.anchors) add(a);
  return set;
}

Vector anchor_blend(std::span<const double> anchor, std::span<const double> incumbent,
                    double gamma, std::span<const double> noise) {
  Vector x(anchor.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = anchor[i] + gamma * (incumbent[i] - anchor[i]);
    if (!noise.empty()) x[i] += noise[i];
  }
  return x;
}

Vector anchor_proposal(Rng& rng, std::span<const double> anchor,
                       std::span<const double> incumbent, const Problem& problem,
                       double sigma) {
  const double gamma = rng.uniform();
  Vector noise(problem.dim);
  for (std::size_t i = 0; i < problem.dim; ++i) noise[i] = sigma * problem.width(i) * rng.normal();
  return clip(anchor_blend(anchor, incumbent, gamma, noise), problem);
}

std::size_t default_reserve(std::size_t dim, std::size_t budget, std::size_t pop_size) {
  const std::size_t wanted = std::max<std::size_t>(3 * dim, (budget + 19) / 20);
  const std::size_t room = budget > pop_size ? budget - pop_size : 0;
  return std::min(wanted, room);
}

Incumbent refinement_phase(BudgetedEvaluator& evaluator, const AnchorSet& anchors,
                           Incumbent best) {
  const Problem& problem = evaluator.problem();
  auto consider = [&](std::span<const double> x) {
    Evaluation ev = evaluator.evaluate_candidate(x);
    if (!ev.x.empty() && ev.value < best.value) {
      best.x = std::move(ev.x);
      best.value = ev.value;
      return true;
    }
    return false;
  };

  try {
    for (const auto& a : anchors.points) consider(a);
    for (const auto& a : anchors.points) {
      for (double gamma : kRefinementBlends) consider(clip(anchor_blend(a, best.x, gamma), problem));
    }

    for (double h : kRefinementSteps) {
      bool improved_in_sweep = true;
      while (improved_in_sweep) {
        improved_in_sweep = false;
        for (std::size_t i = 0; i < problem.dim; ++i) {
          const double step = h * problem.width(i);
          for (double sign : {1.0, -1.0}) {
            bool moved = false;
            for (;;) {
              Vector probe = best.x;
              probe[i] = std::clamp(probe[i] + sign * step, problem.lower[i], problem.upper[i]);
              if (probe[i] == best.x[i]) break;
              if (!consider(probe)) break;
              moved = true;
            }
            if (moved) {
              improved_in_sweep = true;
              break;
            }
          }
        }
      }
    }
  } catch (const BudgetExhausted&) {
  }
  return best;
}

}  // namespace washh
