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

#ifndef WASHH_BASELINES_HPP
#define WASHH_BASELINES_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "washh/core.hpp"
#include "washh/operators.hpp"

namespace washh {

enum class MethodId { WASHH, WOA, GWO, PSO, DE, LWOA, RandomHH };

inline constexpr std::array<MethodId, 7> kAllMethods = {
    MethodId::WASHH, MethodId::WOA,  MethodId::GWO,      MethodId::PSO,
    MethodId::DE,    MethodId::LWOA, MethodId::RandomHH};

std::string_view method_name(MethodId m);
/// Case-insensitive.
std::optional<MethodId> parse_method(std::string_view name);

struct BaselineConfig {
  std::size_t pop_size = 30;
  std::size_t budget = 12000;
  std::uint64_t seed = 0;
  OperatorParams operators;
  double lwoa_jump_prob = 0.1;
  /// Called after every completed generation with the population and its
  /// fitness.  Not used by RandomHH.
  std::function<void(const std::vector<Vector>&, const Vector&)> on_generation;
};

/// Runs one of the fixed-update comparison methods for exactly
/// `budget` evaluations.  Throws std::invalid_argument for WASHH.
RunResult run_baseline(MethodId method, const Problem& problem, const BaselineConfig& config);

/// Dispatches every method, WASHH included, with default parameters.
RunResult run_method(MethodId method, const Problem& problem, std::size_t pop_size,
                     std::size_t budget, std::uint64_t seed);

}  // namespace washh

#endif  // WASHH_BASELINES_HPP
