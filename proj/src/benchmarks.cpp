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

#include "washh/benchmarks.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>

#include <fmt/core.h>

namespace washh::bench {

using std::numbers::pi;

UnknownBenchmark::UnknownBenchmark(std::string_view name)
    : std::invalid_argument(fmt::format("unknown benchmark '{}'", name)) {}

double sphere(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

double bent_cigar(std::span<const double> x) {
  double tail = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) tail += x[i] * x[i];
  return x[0] * x[0] + 1e6 * tail;
}

double zakharov(std::span<const double> x) {
  double s1 = 0.0;
  double s2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s1 += x[i] * x[i];
    s2 += 0.5 * static_cast<double>(i + 1) * x[i];
  }
  const double s2sq = s2 * s2;
  return s1 + s2sq + s2sq * s2sq;
}

double rosenbrock(std::span<const double> x) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double a = x[i + 1] - x[i] * x[i];
    const double b = x[i] - 1.0;
    s += 100.0 * a * a + b * b;
  }
  return s;
}

double rastrigin(std::span<const double> x) {
  double s = 10.0 * static_cast<double>(x.size());
  for (double v : x) s += v * v - 10.0 * std::cos(2.0 * pi * v);
  return s;
}

double ackley(std::span<const double> x) {
  const auto d = static_cast<double>(x.size());
  double sq = 0.0;
  double cs = 0.0;
  for (double v : x) {
    sq += v * v;
    cs += std::cos(2.0 * pi * v);
  }
  return -20.0 * std::exp(-0.2 * std::sqrt(sq / d)) - std::exp(cs / d) + 20.0 + std::numbers::e;
}

double griewank(std::span<const double> x) {
  double s = 0.0;
  double p = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s += x[i] * x[i];
    p *= std::cos(x[i] / std::sqrt(static_cast<double>(i + 1)));
  }
  return s / 4000.0 - p + 1.0;
}

double schwefel(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * std::sin(std::sqrt(std::abs(v)));
  return 418.9829 * static_cast<double>(x.size()) - s;
}

double levy(std::span<const double> x) {
  const std::size_t d = x.size();
  auto w = [&](std::size_t i) { return 1.0 + (x[i] - 1.0) / 4.0; };
  const double s0 = std::sin(pi * w(0));
  double s = s0 * s0;
  for (std::size_t i = 0; i + 1 < d; ++i) {
    const double wi = w(i);
    const double si = std::sin(pi * wi + 1.0);
    s += (wi - 1.0) * (wi - 1.0) * (1.0 + 10.0 * si * si);
  }
  const double wd = w(d - 1);
  const double sd = std::sin(2.0 * pi * wd);
  s += (wd - 1.0) * (wd - 1.0) * (1.0 + sd * sd);
  return s;
}

double michalewicz(std::span<const double> x) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double inner = std::sin(static_cast<double>(i + 1) * x[i] * x[i] / pi);
    s += std::sin(x[i]) * std::pow(inner, 20);
  }
  return -s;
}

namespace {

struct Entry {
  const char* name;
  const char* display;
  double lower;
  double upper;
  double (*fn)(std::span<const double>);
};

constexpr Entry kSuite[] = {
    {"sphere", "Sphere", -100.0, 100.0, &sphere},
    {"bent_cigar", "Bent Cigar", -100.0, 100.0, &bent_cigar},
    {"zakharov", "Zakharov", -5.0, 10.0, &zakharov},
    {"rosenbrock", "Rosenbrock", -30.0, 30.0, &rosenbrock},
    {"rastrigin", "Rastrigin", -5.12, 5.12, &rastrigin},
    {"ackley", "Ackley", -32.768, 32.768, &ackley},
    {"griewank", "Griewank", -600.0, 600.0, &griewank},
    {"schwefel", "Schwefel", -500.0, 500.0, &schwefel},
    {"levy", "Levy", -10.0, 10.0, &levy},
    {"michalewicz", "Michalewicz", 0.0, pi, &michalewicz},
};

std::string normalize(std::string_view name) {
  std::string out;
  out.reserve(name.size());
  for (char c : name) {
    if (c == ' ' || c == '-') c = '_';
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

const Entry* find_entry(std::string_view name) {
  const std::string key = normalize(name);
  for (const auto& e : kSuite) {
    if (key == e.name) return &e;
  }
  return nullptr;
}

}  // namespace

const std::vector<std::string>& benchmark_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& e : kSuite) v.emplace_back(e.name);
    return v;
  }();
  return names;
}

std::string display_name(std::string_view name) {
  const Entry* e = find_entry(name);
  return e ? e->display : std::string(name);
}

std::optional<std::string> canonical_name(std::string_view name) {
  const Entry* e = find_entry(name);
  if (!e) return std::nullopt;
  return std::string(e->name);
}

BenchmarkSpec benchmark_spec(std::string_view name, std::size_t dim) {
  const Entry* e = find_entry(name);
  if (!e) throw UnknownBenchmark(name);
  BenchmarkSpec spec{e->name, dim, e->lower, e->upper, std::nullopt, std::nullopt};
  const std::string key = e->name;
  if (key == "rosenbrock" || key == "levy") {
    spec.known_opt_point = Vector(dim, 1.0);
  } else if (key == "schwefel") {
    spec.known_opt_point = Vector(dim, 420.9687);
  } else if (key != "michalewicz") {
    spec.known_opt_point = Vector(dim, 0.0);
  }
  // Values are those of the formula at the optimizer in double precision,
  // so Ackley, Levy and Schwefel carry their small rounding residuals.
  if (spec.known_opt_point) spec.known_opt_value = e->fn(*spec.known_opt_point);
  return spec;
}

Problem make_benchmark(std::string_view name, std::size_t dim) {
  const Entry* e = find_entry(name);
  if (!e) throw UnknownBenchmark(name);
  if (dim < 2) throw std::invalid_argument("benchmark dimension must be at least 2");
  return make_box_problem(e->name, dim, e->lower, e->upper, e->fn);
}

}  // namespace washh::bench
