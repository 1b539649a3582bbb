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

#include "washh/baselines.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "washh/washh.hpp"

namespace washh {

std::string_view method_name(MethodId m) {
  switch (m) {
    case MethodId::WASHH: return "WASHH";
    case MethodId::WOA: return "WOA";
    case MethodId::GWO: return "GWO";
    case MethodId::PSO: return "PSO";
    case MethodId::DE: return "DE";
    case MethodId::LWOA: return "LWOA";
    case MethodId::RandomHH: return "RandomHH";
  }
  return "?";
}

std::optional<MethodId> parse_method(std::string_view name) {
  auto lower = [](std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
  };
  const std::string key = lower(name);
  for (MethodId m : kAllMethods) {
    if (lower(method_name(m)) == key) return m;
  }
  return std::nullopt;
}

namespace {

struct Population {
  std::vector<Vector> x;
  Vector f;
};

Population initialize(BudgetedEvaluator& evaluator, Rng& rng, std::size_t n) {
  Population pop;
  for (std::size_t i = 0; i < n && evaluator.remaining() > 0; ++i) {
    Vector x = uniform_in_box(rng, evaluator.problem());
    pop.f.push_back(evaluator.evaluate(x));
    pop.x.push_back(std::move(x));
  }
  return pop;
}

std::size_t generation_count(std::size_t budget, std::size_t n) {
  return budget > n ? (budget - n + n - 1) / n : 0;
}

void store(Population& pop, std::size_t i, Evaluation ev) {
  if (ev.x.empty()) return;
  pop.x[i] = std::move(ev.x);
  pop.f[i] = ev.value;
}

void notify(const BaselineConfig& config, const Population& pop) {
  if (config.on_generation) config.on_generation(pop.x, pop.f);
}

RunResult run_woa(const Problem& problem, const BaselineConfig& config, bool long_jumps) {
  BudgetedEvaluator evaluator(problem, config.budget);
  Rng rng(config.seed);
  const std::size_t n = config.pop_size;
  Population pop = initialize(evaluator, rng, n);
  std::size_t best = static_cast<std::size_t>(std::min_element(pop.f.begin(), pop.f.end()) - pop.f.begin());
  Vector leader = pop.x[best];
  double leader_f = pop.f[best];
  const OperatorParams& op = config.operators;

  const std::size_t generations = generation_count(config.budget, n);
  for (std::size_t g = 0; g < generations && evaluator.remaining() > 0; ++g) {
    const double a = 2.0 * (1.0 - static_cast<double>(g) / static_cast<double>(generations));
    for (std::size_t i = 0; i < n && evaluator.remaining() > 0; ++i) {
      Vector candidate;
      if (long_jumps && rng.uniform() < config.lwoa_jump_prob) {
        candidate = uniform_in_box(rng, problem);
      } else {
        const double r1 = rng.uniform();
        const double r2 = rng.uniform();
        const double p = rng.uniform();
        const double l = rng.uniform(-1.0, 1.0);
        if (p < op.woa_spiral_prob) {
          candidate = kernels::woa_spiral(leader, pop.x[i], op.woa_spiral_b, l);
        } else {
          const double A = 2.0 * a * r1 - a;
          const double C = 2.0 * r2;
          const Vector& ref = std::abs(A) >= 1.0 ? pop.x[rng.below(n)] : leader;
          candidate = kernels::woa_encircle(ref, pop.x[i], A, C);
        }
      }
      Evaluation ev = evaluator.evaluate_candidate(candidate);
      if (!ev.x.empty() && ev.value < leader_f) {
        leader = ev.x;
        leader_f = ev.value;
      }
      store(pop, i, std::move(ev));
    }
    notify(config, pop);
  }
  return finish_run(evaluator);
}

RunResult run_gwo(const Problem& problem, const BaselineConfig& config) {
  BudgetedEvaluator evaluator(problem, config.budget);
  Rng rng(config.seed);
  const std::size_t n = config.pop_size;
  if (n < 3) throw PopulationTooSmall(3, n);
  Population pop = initialize(evaluator, rng, n);

  // Alpha, beta, delta: best three points seen, ascending.
  std::array<Vector, 3> wolves;
  std::array<double, 3> wolf_f;
  wolf_f.fill(std::numeric_limits<double>::infinity());
  auto offer = [&](const Vector& x, double f) {
    for (std::size_t k = 0; k < 3; ++k) {
      if (f < wolf_f[k]) {
        for (std::size_t m = 2; m > k; --m) {
          wolves[m] = wolves[m - 1];
          wolf_f[m] = wolf_f[m - 1];
        }
        wolves[k] = x;
        wolf_f[k] = f;
        return;
      }
    }
  };
  for (std::size_t i = 0; i < pop.x.size(); ++i) offer(pop.x[i], pop.f[i]);
  for (std::size_t k = 1; k < 3; ++k) {
    if (wolves[k].empty()) wolves[k] = wolves[0];
  }

  const std::size_t d = problem.dim;
  const std::size_t generations = generation_count(config.budget, n);
  for (std::size_t g = 0; g < generations && evaluator.remaining() > 0; ++g) {
    const double a = 2.0 * (1.0 - static_cast<double>(g) / static_cast<double>(generations));
    for (std::size_t i = 0; i < n && evaluator.remaining() > 0; ++i) {
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
      const std::array<std::span<const double>, 3> leaders = {wolves[0], wolves[1], wolves[2]};
      Evaluation ev = evaluator.evaluate_candidate(kernels::gwo_step(leaders, pop.x[i], A, C));
      if (!ev.x.empty()) offer(ev.x, ev.value);
      store(pop, i, std::move(ev));
    }
    notify(config, pop);
  }
  return finish_run(evaluator);
}

RunResult run_pso(const Problem& problem, const BaselineConfig& config) {
  BudgetedEvaluator evaluator(problem, config.budget);
  Rng rng(config.seed);
  const std::size_t n = config.pop_size;
  const std::size_t d = problem.dim;
  Population pop = initialize(evaluator, rng, n);
  std::vector<Vector> velocity(n, Vector(d, 0.0));
  std::vector<Vector> pbest = pop.x;
  Vector pbest_f = pop.f;
  std::size_t best = static_cast<std::size_t>(std::min_element(pop.f.begin(), pop.f.end()) - pop.f.begin());
  Vector gbest = pop.x[best];
  double gbest_f = pop.f[best];
  const OperatorParams& op = config.operators;

  Vector r1(d);
  Vector r2(d);
  const std::size_t generations = generation_count(config.budget, n);
  for (std::size_t g = 0; g < generations && evaluator.remaining() > 0; ++g) {
    for (std::size_t i = 0; i < n && evaluator.remaining() > 0; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        r1[j] = rng.uniform();
        r2[j] = rng.uniform();
      }
      const Vector candidate = kernels::pso_step(pop.x[i], velocity[i], pbest[i], gbest,
                                                 op.pso_inertia, op.pso_cognitive,
                                                 op.pso_social, r1, r2);
      Evaluation ev = evaluator.evaluate_candidate(candidate);
      if (!ev.x.empty()) {
        if (ev.value < pbest_f[i]) {
          pbest[i] = ev.x;
          pbest_f[i] = ev.value;
        }
        if (ev.value < gbest_f) {
          gbest = ev.x;
          gbest_f = ev.value;
        }
      }
      store(pop, i, std::move(ev));
    }
    notify(config, pop);
  }
  return finish_run(evaluator);
}

RunResult run_de(const Problem& problem, const BaselineConfig& config) {
  BudgetedEvaluator evaluator(problem, config.budget);
  Rng rng(config.seed);
  const std::size_t n = config.pop_size;
  if (n < 4) throw PopulationTooSmall(4, n);
  const std::size_t d = problem.dim;
  Population pop = initialize(evaluator, rng, n);
  const OperatorParams& op = config.operators;

  Vector u(d);
  const std::size_t generations = generation_count(config.budget, n);
  for (std::size_t g = 0; g < generations && evaluator.remaining() > 0; ++g) {
    Population next = pop;
    for (std::size_t i = 0; i < n && evaluator.remaining() > 0; ++i) {
      const auto r = distinct_indices(rng, n, i, 3);
      const Vector mutant = kernels::de_mutant(pop.x[r[0]], pop.x[r[1]], pop.x[r[2]], op.de_f);
      for (std::size_t j = 0; j < d; ++j) u[j] = rng.uniform();
      const std::size_t forced = rng.below(d);
      const Vector trial = kernels::binomial_crossover(pop.x[i], mutant, op.de_cr, u, forced);
      Evaluation ev = evaluator.evaluate_candidate(trial);
      if (!ev.x.empty() && ev.value < pop.f[i]) store(next, i, std::move(ev));
    }
    pop = std::move(next);
    notify(config, pop);
  }
  return finish_run(evaluator);
}

}  // namespace

RunResult run_baseline(MethodId method, const Problem& problem, const BaselineConfig& config) {
  if (config.pop_size == 0) throw PopulationTooSmall(1, 0);
  if (config.budget < config.pop_size) {
    throw std::invalid_argument("budget must cover the initial population");
  }
  switch (method) {
    case MethodId::WOA: return run_woa(problem, config, false);
    case MethodId::LWOA: return run_woa(problem, config, true);
    case MethodId::GWO: return run_gwo(problem, config);
    case MethodId::PSO: return run_pso(problem, config);
    case MethodId::DE: return run_de(problem, config);
    case MethodId::RandomHH: {
      WashhConfig c;
      c.pop_size = config.pop_size;
      c.budget = config.budget;
      c.seed = config.seed;
      c.operators = config.operators;
      c.selection = Selection::Uniform;
      c.use_anchors = false;
      return run_washh(problem, c);
    }
    case MethodId::WASHH: break;
  }
  throw std::invalid_argument("run_baseline does not run WASHH; use run_washh");
}

RunResult run_method(MethodId method, const Problem& problem, std::size_t pop_size,
                     std::size_t budget, std::uint64_t seed) {
  if (method == MethodId::WASHH) {
    WashhConfig c;
    c.pop_size = pop_size;
    c.budget = budget;
    c.seed = seed;
    return run_washh(problem, c);
  }
  BaselineConfig c;
  c.pop_size = pop_size;
  c.budget = budget;
  c.seed = seed;
  return run_baseline(method, problem, c);
}

}  // namespace washh
