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

#include "washh/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/core.h>

namespace washh {

bool Problem::contains(std::span<const double> x) const {
  if (x.size() != dim) return false;
  for (std::size_t i = 0; i < dim; ++i) {
    if (!(x[i] >= lower[i] && x[i] <= upper[i])) return false;
  }
  return true;
}

void validate(const Problem& problem) {
  if (problem.dim == 0) throw InvalidProblem("problem dimension must be positive");
  if (problem.lower.size() != problem.dim || problem.upper.size() != problem.dim) {
    throw InvalidProblem(fmt::format("bounds must have {} entries (got {} and {})", problem.dim,
                                     problem.lower.size(), problem.upper.size()));
  }
  for (std::size_t i = 0; i < problem.dim; ++i) {
    if (!std::isfinite(problem.lower[i]) || !std::isfinite(problem.upper[i]) ||
        !(problem.lower[i] < problem.upper[i])) {
      throw InvalidProblem(fmt::format("invalid bounds at coordinate {}: [{}, {}]", i,
                                       problem.lower[i], problem.upper[i]));
    }
  }
  if (!problem.objective) throw InvalidProblem("problem has no objective");
  for (std::size_t k = 0; k < problem.anchors.size(); ++k) {
    if (!problem.contains(problem.anchors[k])) {
      throw InvalidProblem(fmt::format("anchor {} lies outside the box", k));
    }
  }
}

Problem make_box_problem(std::string name, std::size_t dim, double lo, double hi,
                         Objective objective) {
  Problem p;
  p.name = std::move(name);
  p.dim = dim;
  p.lower.assign(dim, lo);
  p.upper.assign(dim, hi);
  p.objective = std::move(objective);
  validate(p);
  return p;
}

bool all_finite(std::span<const double> x) {
  return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

Vector clip(std::span<const double> x, const Problem& problem) {
  if (!all_finite(x)) throw NonFiniteCandidate();
  Vector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = std::min(problem.upper[i], std::max(problem.lower[i], x[i]));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Rng

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Rng::Rng(std::uint64_t seed) : seed_(seed) {
  std::uint64_t sm = seed;
  for (auto& word : s_) word = splitmix64(sm);
}

std::uint64_t Rng::next_u64() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
  // 1 - u keeps the logarithm argument in (0, 1].
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::size_t Rng::below(std::size_t n) {
  // Lemire's multiply-shift with rejection; unbiased.
  const auto bound = static_cast<std::uint64_t>(n);
  std::uint64_t x = next_u64();
  __uint128_t m = static_cast<__uint128_t>(x) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = -bound % bound;
    while (low < threshold) {
      x = next_u64();
      m = static_cast<__uint128_t>(x) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::size_t>(m >> 64);
}

Rng Rng::split(std::uint64_t stream) const {
  std::uint64_t sm = seed_ ^ (0xd1b54a32d192ed03ULL * (stream + 1));
  return Rng(splitmix64(sm));
}

Vector uniform_in_box(Rng& rng, const Problem& problem) {
  Vector x(problem.dim);
  for (std::size_t i = 0; i < problem.dim; ++i) {
    x[i] = rng.uniform(problem.lower[i], problem.upper[i]);
  }
  return x;
}

// ---------------------------------------------------------------------------
// BudgetedEvaluator

BudgetedEvaluator::BudgetedEvaluator(const Problem& problem, std::size_t total,
                                     std::size_t reserve)
    : problem_(&problem),
      budget_{total, 0, reserve},
      best_f_(std::numeric_limits<double>::infinity()) {
  if (total == 0) throw std::invalid_argument("budget must be positive");
  if (reserve >= total) throw std::invalid_argument("refinement reserve must be below the budget");
  trace_.reserve(total);
}

Evaluation BudgetedEvaluator::evaluate_candidate(std::span<const double> x) {
  if (budget_.used >= budget_.total) throw BudgetExhausted();
  ++budget_.used;

  Evaluation ev{{}, std::numeric_limits<double>::infinity()};
  if (all_finite(x)) {
    ev.x = clip(x, *problem_);
    const double f = problem_->objective(ev.x);
    if (std::isfinite(f)) ev.value = f;
    if (ev.value < best_f_ || best_x_.empty()) {
      best_f_ = ev.value;
      best_x_ = ev.x;
    }
  }
  trace_.push_back(best_f_);
  return ev;
}

RunResult finish_run(BudgetedEvaluator& evaluator) {
  RunResult r;
  r.best_value = evaluator.best_f();
  r.best_point = evaluator.best_x();
  r.evaluations = evaluator.used();
  r.trace = evaluator.take_trace();
  return r;
}

}  // namespace washh
