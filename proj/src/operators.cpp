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

#include "washh/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <fmt/core.h>

namespace washh {

std::string_view to_string(OperatorId op) {
  switch (op) {
    case OperatorId::WoaMove: return "woa";
    case OperatorId::PsoMemory: return "pso";
    case OperatorId::GwoLeaders: return "gwo";
    case OperatorId::DeVariation: return "de";
    case OperatorId::LocalCoordinate: return "local";
    case OperatorId::AnchorMove: return "anchor";
  }
  return "?";
}

std::optional<OperatorId> operator_from_code(int code) {
  if (code < 0 || code >= static_cast<int>(kOperatorCount)) return std::nullopt;
  return static_cast<OperatorId>(code);
}

PopulationTooSmall::PopulationTooSmall(std::size_t needed, std::size_t got)
    : std::invalid_argument(
          fmt::format("population of {} is too small (need at least {})", got, needed)) {}

// ---------------------------------------------------------------------------
// SearchState

SearchState SearchState::from_population(std::vector<Vector> population, Vector fitness) {
  SearchState s;
  s.personal_best = population;
  s.personal_best_value = fitness;
  s.velocity.assign(population.size(), Vector(population.empty() ? 0 : population[0].size(), 0.0));
  s.population = std::move(population);
  s.fitness = std::move(fitness);
  const auto best = static_cast<std::size_t>(
      std::min_element(s.fitness.begin(), s.fitness.end()) - s.fitness.begin());
  s.incumbent = s.population[best];
  s.incumbent_value = s.fitness[best];
  s.refresh_leaders();
  return s;
}

void SearchState::refresh_leaders() {
  std::vector<std::size_t> idx(population.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  const std::size_t k = std::min<std::size_t>(3, idx.size());
  // Stable on ties so equal-fitness leaders keep index order.
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(),
                    [&](std::size_t a, std::size_t b) {
                      return fitness[a] < fitness[b] || (fitness[a] == fitness[b] && a < b);
                    });
  idx.resize(k);
  leaders = std::move(idx);
}

std::pair<bool, bool> SearchState::accept(std::size_t slot, const Evaluation& ev) {
  if (ev.x.empty()) return {false, false};
  const bool slot_improved = ev.value < fitness[slot];
  const bool incumbent_improved = ev.value < incumbent_value;
  if (slot_improved) {
    population[slot] = ev.x;
    fitness[slot] = ev.value;
    if (ev.value < personal_best_value[slot]) {
      personal_best[slot] = ev.x;
      personal_best_value[slot] = ev.value;
    }
    refresh_leaders();
  }
  if (incumbent_improved) {
    incumbent = ev.x;
    incumbent_value = ev.value;
  }
  return {slot_improved, incumbent_improved};
}

// ---------------------------------------------------------------------------
// kernels

namespace kernels {

Vector woa_spiral(std::span<const double> incumbent, std::span<const double> x, double b,
                  double l) {
  const double factor = std::exp(b * l) * std::cos(2.0 * std::numbers::pi * l);
  Vector out(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    out[j] = std::abs(incumbent[j] - x[j]) * factor + incumbent[j];
  }
  return out;
}

Vector woa_encircle(std::span<const double> reference, std::span<const double> x, double A,
                    double C) {
  Vector out(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    out[j] = reference[j] - A * std::abs(C * reference[j] - x[j]);
  }
  return out;
}

Vector pso_step(std::span<const double> x, std::span<double> velocity,
                std::span<const double> personal_best, std::span<const double> global_best,
                double inertia, double c1, double c2, std::span<const double> r1,
                std::span<const double> r2) {
  Vector out(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    velocity[j] = inertia * velocity[j] + c1 * r1[j] * (personal_best[j] - x[j]) +
                  c2 * r2[j] * (global_best[j] - x[j]);
    out[j] = x[j] + velocity[j];
  }
  return out;
}

Vector gwo_step(const std::array<std::span<const double>, 3>& leaders, std::span<const double> x,
                const std::array<Vector, 3>& A, const std::array<Vector, 3>& C) {
  Vector out(x.size(), 0.0);
  for (std::size_t j = 0; j < x.size(); ++j) {
    double sum = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
      sum += leaders[k][j] - A[k][j] * std::abs(C[k][j] * leaders[k][j] - x[j]);
    }
    out[j] = sum / 3.0;
  }
  return out;
}

Vector de_mutant(std::span<const double> base, std::span<const double> a,
                 std::span<const double> b, double F) {
  Vector out(base.size());
  for (std::size_t j = 0; j < base.size(); ++j) out[j] = base[j] + F * (a[j] - b[j]);
  return out;
}

Vector binomial_crossover(std::span<const double> target, std::span<const double> mutant,
                          double cr, std::span<const double> uniforms, std::size_t forced) {
  Vector out(target.begin(), target.end());
  for (std::size_t j = 0; j < out.size(); ++j) {
    if (uniforms[j] < cr || j == forced) out[j] = mutant[j];
  }
  return out;
}

}  // namespace kernels

// ---------------------------------------------------------------------------
// proposals

std::vector<std::size_t> distinct_indices(Rng& rng, std::size_t n, std::size_t exclude,
                                          std::size_t count) {
  std::vector<std::size_t> out;
  out.reserve(count);
  while (out.size() < count) {
    const std::size_t r = rng.below(n);
    if (r == exclude || std::find(out.begin(), out.end(), r) != out.end()) continue;
    out.push_back(r);
  }
  return out;
}

Vector propose_woa(const SearchState& state, std::size_t i, Rng& rng,
                   const OperatorParams& params) {
  const Vector& x = state.population[i];
  const double a = woa_a(state.progress);
  const double r1 = rng.uniform();
  const double r2 = rng.uniform();
  const double p = rng.uniform();
  const double l = rng.uniform(-1.0, 1.0);
  if (p < params.woa_spiral_prob) return kernels::woa_spiral(state.incumbent, x, params.woa_spiral_b, l);

  const double A = 2.0 * a * r1 - a;
  const double C = 2.0 * r2;
  if (std::abs(A) >= 1.0) {
    const Vector& ref = state.population[rng.below(state.size())];
    return kernels::woa_encircle(ref, x, A, C);
  }
  return kernels::woa_encircle(state.incumbent, x, A, C);
}

Vector propose_pso(SearchState& state, std::size_t i, Rng& rng, const OperatorParams& params) {
  const std::size_t d = state.dim();
  Vector r1(d);
  Vector r2(d);
  for (std::size_t j = 0; j < d; ++j) {
    r1[j] = rng.uniform();
    r2[j] = rng.uniform();
  }
  return kernels::pso_step(state.population[i], state.velocity[i], state.personal_best[i],
                           state.incumbent, params.pso_inertia, params.pso_cognitive,
                           params.pso_social, r1, r2);
}

Vector propose_gwo(const SearchState& state, std::size_t i, Rng& rng, const OperatorParams&) {
  if (state.size() < 3) throw PopulationTooSmall(3, state.size());
  const std::size_t d = state.dim();
  const double a = woa_a(state.progress);
  std::array<Vector, 3> A;
  std::array<Vector, 3> C;
  for (std::size_t k = 0; k < 3; ++k) {
    A[k].resize(d);
    C[k].resize(d);
    for (std::size_t j = 0; j < d; ++j) {
      A[k][j] = 2.0 * a * rng.uniform() - a;
      C[k][j] = 2.0 * rng.uniform();
    }
  }
  const std::array<std::span<const double>, 3> leaders = {
      state.population[state.leaders[0]], state.population[state.leaders[1]],
      state.population[state.leaders[2]]};
  return kernels::gwo_step(leaders, state.population[i], A, C);
}

Vector propose_de(const SearchState& state, std::size_t i, Rng& rng,
                  const OperatorParams& params) {
  if (state.size() < 4) throw PopulationTooSmall(4, state.size());
  const auto r = distinct_indices(rng, state.size(), i, 3);
  const Vector mutant = kernels::de_mutant(state.population[r[0]], state.population[r[1]],
                                           state.population[r[2]], params.de_f);
  const std::size_t d = state.dim();
  Vector u(d);
  for (std::size_t j = 0; j < d; ++j) u[j] = rng.uniform();
  const std::size_t forced = rng.below(d);
  return kernels::binomial_crossover(state.population[i], mutant, params.de_cr, u, forced);
}

Vector propose_local(const SearchState& state, const Problem& problem, Rng& rng,
                     const OperatorParams& params) {
  Vector x = state.incumbent;
  const std::size_t j = rng.below(x.size());
  const double scale = kernels::local_step_scale(problem.width(j), state.progress,
                                                 params.local_sigma, params.local_floor);
  x[j] += scale * rng.normal();
  return x;
}

Vector propose_anchor(const SearchState& state, const AnchorSet& anchors, const Problem& problem,
                      Rng& rng, const OperatorParams& params) {
  if (anchors.empty()) throw NoAnchors();
  const Vector& a = anchors.points[rng.below(anchors.size())];
  return anchor_proposal(rng, a, state.incumbent, problem, params.anchor_sigma);
}

Vector propose(OperatorId op, SearchState& state, std::size_t i, const Problem& problem,
               const AnchorSet& anchors, Rng& rng, const OperatorParams& params) {
  switch (op) {
    case OperatorId::WoaMove: return propose_woa(state, i, rng, params);
    case OperatorId::PsoMemory: return propose_pso(state, i, rng, params);
    case OperatorId::GwoLeaders: return propose_gwo(state, i, rng, params);
    case OperatorId::DeVariation: return propose_de(state, i, rng, params);
    case OperatorId::LocalCoordinate: return propose_local(state, problem, rng, params);
    case OperatorId::AnchorMove: return propose_anchor(state, anchors, problem, rng, params);
  }
  throw std::logic_error("unknown operator");
}

}  // namespace washh
