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

#ifndef WASHH_CORE_HPP
#define WASHH_CORE_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace washh {

using Vector = std::vector<double>;
using Objective = std::function<double(std::span<const double>)>;

/// Thrown by BudgetedEvaluator::evaluate once every evaluation is spent.
/// Optimizer loops catch it and terminate cleanly.
class BudgetExhausted : public std::runtime_error {
 public:
  BudgetExhausted() : std::runtime_error("evaluation budget exhausted") {}
};

class InvalidProblem : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NonFiniteCandidate : public std::domain_error {
 public:
  NonFiniteCandidate() : std::domain_error("candidate has a non-finite coordinate") {}
};

/// A box-constrained minimization problem.
///
/// The objective is treated as a black box; `anchors` carries reference
/// configurations known before the search starts (default
/// hyperparameters, for instance).  Box-derived anchors are added on top
/// of these by derive_anchors().
struct Problem {
  std::string name;
  std::size_t dim = 0;
  Vector lower;
  Vector upper;
  Objective objective;
  std::vector<Vector> anchors;

  double width(std::size_t i) const { return upper[i] - lower[i]; }
  bool contains(std::span<const double> x) const;
};

/// Throws InvalidProblem unless the box and anchors are consistent.
void validate(const Problem& problem);

/// Builds a problem whose box is [lo, hi]^dim.
Problem make_box_problem(std::string name, std::size_t dim, double lo, double hi,
                         Objective objective);

bool all_finite(std::span<const double> x);

/// Coordinate-wise projection onto the problem box.  Throws
/// NonFiniteCandidate when any coordinate is NaN or infinite.
Vector clip(std::span<const double> x, const Problem& problem);

/// xoshiro256** seeded through SplitMix64.
///
/// All draws are produced from integer arithmetic, so a seed yields the
/// same integer stream on every platform.  split(k) returns an independent
/// generator for stream k, derived only from the original seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t next_u64();
  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform();
  double uniform(double lo, double hi);
  /// Standard normal via Box-Muller (no cached second variate).
  double normal();
  /// Uniform integer in [0, n).  n must be positive.
  std::size_t below(std::size_t n);
  Rng split(std::uint64_t stream) const;

 private:
  std::uint64_t seed_;
  std::array<std::uint64_t, 4> s_;
};

Vector uniform_in_box(Rng& rng, const Problem& problem);

struct Budget {
  std::size_t total = 0;
  std::size_t used = 0;
  /// Evaluations held back for the final refinement phase; part of total.
  std::size_t reserve = 0;

  std::size_t remaining() const { return total - used; }
  std::size_t main_total() const { return total - reserve; }
};

/// Result of one budget-accounted evaluation.  `x` is the clipped point
/// that was actually evaluated; it is empty when the candidate was rejected
/// for a non-finite coordinate.
struct Evaluation {
  Vector x;
  double value;
};

/// Serial, budget-counting wrapper around a Problem's objective.
///
/// Non-finite objective values are recorded as +inf so they can never
/// become the incumbent.  One trace entry (the best-so-far value) is
/// appended per evaluation; trace()[k] belongs to evaluation k + 1.
class BudgetedEvaluator {
 public:
  BudgetedEvaluator(const Problem& problem, std::size_t total, std::size_t reserve = 0);

  /// Clips x, evaluates it, and records the outcome.  Throws BudgetExhausted
  /// when no evaluations remain.
  double evaluate(std::span<const double> x) { return evaluate_candidate(x).value; }
  Evaluation evaluate_candidate(std::span<const double> x);

  const Problem& problem() const { return *problem_; }
  const Budget& budget() const { return budget_; }
  std::size_t used() const { return budget_.used; }
  std::size_t remaining() const { return budget_.remaining(); }
  bool main_phase_done() const { return budget_.used >= budget_.main_total(); }

  bool has_best() const { return !best_x_.empty(); }
  const Vector& best_x() const { return best_x_; }
  double best_f() const { return best_f_; }
  const std::vector<double>& trace() const { return trace_; }
  std::vector<double> take_trace() { return std::move(trace_); }

 private:
  const Problem* problem_;
  Budget budget_;
  Vector best_x_;
  double best_f_;
  std::vector<double> trace_;
};

/// Outcome of a single optimizer run.
struct RunResult {
  double best_value = 0.0;
  Vector best_point;
  std::vector<double> trace;
  std::size_t evaluations = 0;
  /// Main-loop usage per operator; all zero for fixed-update methods.
  std::array<std::size_t, 6> operator_counts{};
};

/// Packages the evaluator state at the end of a run.
RunResult finish_run(BudgetedEvaluator& evaluator);

}  // namespace washh

#endif  // WASHH_CORE_HPP
