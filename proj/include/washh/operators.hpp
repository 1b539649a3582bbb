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

#ifndef WASHH_OPERATORS_HPP
#define WASHH_OPERATORS_HPP

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "washh/anchors.hpp"
#include "washh/core.hpp"

namespace washh {

/// The six low-level behaviors.  Integer codes are stable.
enum class OperatorId : int {
  WoaMove = 0,
  PsoMemory = 1,
  GwoLeaders = 2,
  DeVariation = 3,
  LocalCoordinate = 4,
  AnchorMove = 5,
};

inline constexpr std::size_t kOperatorCount = 6;
inline constexpr std::array<OperatorId, kOperatorCount> kAllOperators = {
    OperatorId::WoaMove,     OperatorId::PsoMemory,       OperatorId::GwoLeaders,
    OperatorId::DeVariation, OperatorId::LocalCoordinate, OperatorId::AnchorMove};

std::string_view to_string(OperatorId op);
std::optional<OperatorId> operator_from_code(int code);

class PopulationTooSmall : public std::invalid_argument {
 public:
  PopulationTooSmall(std::size_t needed, std::size_t got);
};

class NoAnchors : public std::logic_error {
 public:
  NoAnchors() : std::logic_error("anchor move requested with an empty anchor set") {}
};

struct OperatorParams {
  double woa_spiral_prob = 0.5;
  double woa_spiral_b = 1.0;
  double pso_inertia = 0.729;
  double pso_cognitive = 1.494;
  double pso_social = 1.494;
  double de_f = 0.5;
  double de_cr = 0.9;
  double local_sigma = 0.1;
  double local_floor = 1e-6;
  double anchor_sigma = 0.01;
};

/// Shared WOA/GWO control parameter: a = 2 (1 - progress).
inline double woa_a(double progress) { return 2.0 * (1.0 - progress); }

/// Population, memories and incumbent seen by the proposal operators.
struct SearchState {
  std::vector<Vector> population;
  Vector fitness;
  Vector incumbent;
  double incumbent_value = 0.0;
  std::vector<Vector> personal_best;
  Vector personal_best_value;
  std::vector<Vector> velocity;
  /// Indices of the three best members, fitness ascending.
  std::vector<std::size_t> leaders;
  /// Fraction of the main budget consumed, in [0, 1].
  double progress = 0.0;

  /// Initializes memories from the population (velocities zero, personal
  /// bests = members) and computes incumbent and leaders.
  static SearchState from_population(std::vector<Vector> population, Vector fitness);

  std::size_t size() const { return population.size(); }
  std::size_t dim() const { return population.empty() ? 0 : population.front().size(); }
  void refresh_leaders();

  /// Greedy slot replacement plus memory bookkeeping.  Returns
  /// {slot improved, incumbent improved}.
  std::pair<bool, bool> accept(std::size_t slot, const Evaluation& ev);
};

// Update rules with every random draw passed in explicitly.  The propose_*
// functions below draw these numbers and delegate here.
namespace kernels {

/// x' = |x* - x| e^{b l} cos(2 pi l) + x*, coordinate-wise.
Vector woa_spiral(std::span<const double> incumbent, std::span<const double> x, double b,
                  double l);
/// x' = ref - A |C ref - x|, coordinate-wise with scalar A and C.
Vector woa_encircle(std::span<const double> reference, std::span<const double> x, double A,
                    double C);
/// Velocity update; writes the new velocity into `velocity` and returns
/// x + v'.
Vector pso_step(std::span<const double> x, std::span<double> velocity,
                std::span<const double> personal_best, std::span<const double> global_best,
                double inertia, double c1, double c2, std::span<const double> r1,
                std::span<const double> r2);
/// Mean over the three leaders of leader_k - A_k |C_k leader_k - x|, with
/// per-coordinate coefficients A[k][j], C[k][j].
Vector gwo_step(const std::array<std::span<const double>, 3>& leaders, std::span<const double> x,
                const std::array<Vector, 3>& A, const std::array<Vector, 3>& C);
Vector de_mutant(std::span<const double> base, std::span<const double> a,
                 std::span<const double> b, double F);
/// Coordinate j comes from the mutant when uniforms[j] < cr or j == forced.
Vector binomial_crossover(std::span<const double> target, std::span<const double> mutant,
                          double cr, std::span<const double> uniforms, std::size_t forced);
/// Standard deviation of the local coordinate step for a coordinate of the
/// given width.
inline double local_step_scale(double width, double progress, double sigma, double floor) {
  return sigma * width * (1.0 - progress) + floor * width;
}

}  // namespace kernels

Vector propose_woa(const SearchState& state, std::size_t i, Rng& rng,
                   const OperatorParams& params = {});
/// Updates state.velocity[i].
Vector propose_pso(SearchState& state, std::size_t i, Rng& rng,
                   const OperatorParams& params = {});
/// Throws PopulationTooSmall when the population has fewer than 3 members.
Vector propose_gwo(const SearchState& state, std::size_t i, Rng& rng,
                   const OperatorParams& params = {});
/// DE/rand/1/bin.  Throws PopulationTooSmall below 4 members.
Vector propose_de(const SearchState& state, std::size_t i, Rng& rng,
                  const OperatorParams& params = {});
Vector propose_local(const SearchState& state, const Problem& problem, Rng& rng,
                     const OperatorParams& params = {});
/// Throws NoAnchors if the set is empty.
Vector propose_anchor(const SearchState& state, const AnchorSet& anchors, const Problem& problem,
                      Rng& rng, const OperatorParams& params = {});

/// Dispatches to the proposal for `op` on slot i.
Vector propose(OperatorId op, SearchState& state, std::size_t i, const Problem& problem,
               const AnchorSet& anchors, Rng& rng, const OperatorParams& params = {});

/// Uniform draw of `count` distinct indices in [0, n) excluding `exclude`.
std::vector<std::size_t> distinct_indices(Rng& rng, std::size_t n, std::size_t exclude,
                                          std::size_t count);

}  // namespace washh

#endif  // WASHH_OPERATORS_HPP
