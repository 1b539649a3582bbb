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

#ifndef WASHH_BENCHMARKS_HPP
#define WASHH_BENCHMARKS_HPP

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "washh/core.hpp"

namespace washh::bench {

class UnknownBenchmark : public std::invalid_argument {
 public:
  explicit UnknownBenchmark(std::string_view name);
};

double sphere(std::span<const double> x);
double bent_cigar(std::span<const double> x);
double zakharov(std::span<const double> x);
double rosenbrock(std::span<const double> x);
double rastrigin(std::span<const double> x);
double ackley(std::span<const double> x);
double griewank(std::span<const double> x);
double schwefel(std::span<const double> x);
double levy(std::span<const double> x);
/// Steepness m = 10.
double michalewicz(std::span<const double> x);

struct BenchmarkSpec {
  std::string name;
  std::size_t dim = 0;
  double lower = 0.0;
  double upper = 0.0;
  std::optional<double> known_opt_value;
  std::optional<Vector> known_opt_point;
};

/// Lowercase names in table order: sphere, bent_cigar, zakharov, ...
const std::vector<std::string>& benchmark_names();

/// Display names as used in result tables ("Bent Cigar").
std::string display_name(std::string_view name);

/// Accepts the lowercase name, the display name, or either with '-'/' '
/// in place of '_'.  Returns the canonical lowercase name.
std::optional<std::string> canonical_name(std::string_view name);

BenchmarkSpec benchmark_spec(std::string_view name, std::size_t dim);

/// Throws UnknownBenchmark for names outside the suite and
/// std::invalid_argument when dim < 2.
Problem make_benchmark(std::string_view name, std::size_t dim);

}  // namespace washh::bench

#endif  // WASHH_BENCHMARKS_HPP
