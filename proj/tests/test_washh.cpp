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

#include <cmath>

#include <doctest.h>

#include "washh/benchmarks.hpp"
#include "washh/washh.hpp"

using namespace washh;

namespace {

// Empirical frequency of each operator over n draws.
std::array<double, kOperatorCount> frequencies(const RewardScores& s, bool anchors, int n,
                                               std::uint64_t seed) {
  Rng rng(seed);
  std::array<double, kOperatorCount> f{};
  for (int i = 0; i < n; ++i) f[static_cast<std::size_t>(select_operator(s, rng, anchors))] += 1.0;
  for (double& v : f) v /= n;
  return f;
}

double three_sigma(double p, int n) { return 3.0 * std::sqrt(p * (1.0 - p) / n); }

}  // namespace

TEST_SUITE("selection") {

TEST_CASE("equal scores select uniformly") {
  const int n = 100000;
  const auto f = frequencies(RewardScores::uniform(), true, n, 1);
  for (double v : f) CHECK(std::abs(v - 1.0 / 6.0) <= three_sigma(1.0 / 6.0, n));
}

TEST_CASE("one dominant score") {
  RewardScores s = RewardScores::uniform(0.05);
  s.score[2] = 5 * 0.05;
  CHECK(s.probabilities(true)[2] == doctest::Approx(0.5));
  const int n = 100000;
  const auto f = frequencies(s, true, n, 2);
  CHECK(std::abs(f[2] - 0.5) <= three_sigma(0.5, n));
  CHECK(std::abs(f[0] - 0.1) <= three_sigma(0.1, n));
}

TEST_CASE("masked anchor move") {
  const RewardScores s = RewardScores::uniform();
  const auto p = s.probabilities(false);
  CHECK(p[5] == 0.0);
  const int n = 100000;
  const auto f = frequencies(s, false, n, 3);
  CHECK(f[5] == 0.0);
  for (std::size_t k = 0; k < 5; ++k) {
    CHECK(p[k] == doctest::Approx(0.2));
    CHECK(std::abs(f[k] - 0.2) <= three_sigma(0.2, n));
  }
  Rng rng(4);
  for (int i = 0; i < 1000; ++i) CHECK(select_uniform(rng, false) != OperatorId::AnchorMove);
}

TEST_CASE("rewards decay monotonically to the floor") {
  RewardScores s = RewardScores::uniform(1.0, 0.3, 0.05);
  Rng rng(5);
  auto prev = s.score;
  for (int t = 0; t < 200; ++t) {
    update_rewards(s, select_operator(s, rng, true), false, false);
    for (std::size_t k = 0; k < kOperatorCount; ++k) {
      CHECK(s.score[k] <= prev[k]);
      CHECK(s.score[k] >= s.floor);
    }
    prev = s.score;
  }
  for (double v : s.score) CHECK(v == 0.05);
}

TEST_CASE("full replacement with alpha = 1") {
  RewardScores s = RewardScores::uniform(1.0, 1.0, 0.05);
  update_rewards(s, OperatorId::DeVariation, true, true, 0.5, 1.0);
  CHECK(s[OperatorId::DeVariation] == 1.0);
  update_rewards(s, OperatorId::DeVariation, true, false, 0.5, 1.0);
  CHECK(s[OperatorId::DeVariation] == 0.5);
}

TEST_CASE("smoothing fixed point") {
  RewardScores s = RewardScores::uniform(1.0, 0.1, 0.05);
  update_rewards(s, OperatorId::WoaMove, true, false, 1.0, 1.0);
  CHECK(s[OperatorId::WoaMove] == doctest::Approx(1.0));
  CHECK(s[OperatorId::PsoMemory] == doctest::Approx(0.9));
}

}  // TEST_SUITE

TEST_SUITE("washh") {

TEST_CASE("sphere in two dimensions") {
  const Problem p = bench::make_benchmark("sphere", 2);
  for (std::uint64_t seed : {0u, 1u, 2u, 3u, 4u}) {
    WashhConfig c;
    c.budget = 400;
    c.seed = seed;
    const RunResult r = run_washh(p, c);
    CHECK(r.best_value <= 1e-6);
    CHECK(r.evaluations == 400);
  }
}

TEST_CASE("sphere beats random search by four orders") {
  const Problem p = bench::make_benchmark("sphere", 2);
  // Uniformly sampled reference with the same budget.
  Rng rng(99);
  double rs = 1e300;
  for (int i = 0; i < 400; ++i) rs = std::min(rs, bench::sphere(uniform_in_box(rng, p)));
  WashhConfig c;
  c.budget = 400;
  c.seed = 99;
  c.use_anchors = false;
  const RunResult r = run_washh(p, c);
  CHECK(r.best_value <= rs * 1e-4);
}

TEST_CASE("budget equal to population returns the initialization best") {
  const Problem p = bench::make_benchmark("rastrigin", 5);
  WashhConfig c;
  c.pop_size = 10;
  c.budget = 10;
  c.reserve = 0;
  c.seed = 6;
  const RunResult r = run_washh(p, c);
  CHECK(r.evaluations == 10);
  std::size_t steps = 0;
  for (auto n : r.operator_counts) steps += n;
  CHECK(steps == 0);
  // Anchors first: the zero vector is the optimum of Rastrigin.
  CHECK(r.best_value == 0.0);

  WashhConfig plain = c;
  plain.use_anchors = false;
  const RunResult q = run_washh(p, plain);
  CHECK(q.trace.size() == 10);
  CHECK(q.best_value == q.trace.back());
  CHECK(q.best_value == doctest::Approx(p.objective(q.best_point)));
}

TEST_CASE("an anchor at the optimum wins regardless of seed") {
  Problem p = make_box_problem("shifted", 4, -10.0, 10.0, [](std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += (v - 3.0) * (v - 3.0);
    return s;
  });
  p.anchors = {Vector(4, 3.0)};
  for (std::uint64_t seed : {11u, 12u, 13u}) {
    WashhConfig c;
    c.budget = 200;
    c.seed = seed;
    CHECK(run_washh(p, c).best_value == 0.0);
  }
}

TEST_CASE("budget soundness, monotone trace and determinism") {
  for (const char* name : {"zakharov", "schwefel", "michalewicz"}) {
    const Problem p = bench::make_benchmark(name, 10);
    WashhConfig c;
    c.budget = 1500;
    c.seed = 21;
    const RunResult a = run_washh(p, c);
    const RunResult b = run_washh(p, c);
    CHECK(a.evaluations == 1500);
    REQUIRE(a.trace.size() == 1500);
    for (std::size_t k = 1; k < a.trace.size(); ++k) CHECK(a.trace[k] <= a.trace[k - 1]);
    CHECK(a.trace == b.trace);
    CHECK(a.best_point == b.best_point);
    CHECK(a.operator_counts == b.operator_counts);
  }
}

TEST_CASE("no anchors means no anchor moves") {
  const Problem p = bench::make_benchmark("levy", 5);
  WashhConfig c;
  c.budget = 600;
  c.use_anchors = false;
  const RunResult r = run_washh(p, c);
  CHECK(r.operator_counts[5] == 0);
  std::size_t steps = 0;
  for (auto n : r.operator_counts) steps += n;
  CHECK(steps == 600 - c.pop_size);
}

TEST_CASE("config validation") {
  const Problem p = bench::make_benchmark("sphere", 3);
  WashhConfig c;
  c.pop_size = 3;
  CHECK_THROWS_AS(run_washh(p, c), PopulationTooSmall);
  c.pop_size = 30;
  c.budget = 20;
  CHECK_THROWS_AS(run_washh(p, c), std::invalid_argument);
  c.budget = 100;
  c.reserve = 80;
  CHECK_THROWS_AS(run_washh(p, c), std::invalid_argument);
  c.reserve = 70;
  CHECK_NOTHROW(run_washh(p, c));
}

}  // TEST_SUITE
