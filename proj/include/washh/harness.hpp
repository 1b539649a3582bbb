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

#ifndef WASHH_HARNESS_HPP
#define WASHH_HARNESS_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "washh/baselines.hpp"
#include "washh/core.hpp"

namespace washh {

/// One (method, function, seed) outcome.  A failed run keeps its labels
/// and carries the error message; its numeric fields are meaningless.
struct RunRecord {
  std::string method;
  std::string function;
  std::uint64_t seed = 0;
  double best_value = 0.0;
  Vector best_point;
  /// Best-so-far after each evaluation; entry k is evaluation k + 1.
  std::vector<double> trace;
  std::string error;

  bool ok() const { return error.empty(); }
};

/// run seed = base * 1e6 + method * 1e4 + function * 1e2 + seed index.
std::uint64_t derive_seed(std::uint64_t base_seed, std::size_t method_index,
                          std::size_t function_index, std::size_t seed_index);

/// Runs tasks[0..n) on `jobs` worker threads (0 = hardware concurrency).
/// Results are written by index, so output order never depends on
/// scheduling.
void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& task);

/// A labelled run.  `run` executes on a worker thread.
struct RunTask {
  std::string method;
  std::string function;
  std::uint64_t seed = 0;
  std::function<RunResult()> run;
};

/// Executes tasks on the worker pool; exceptions become RunRecord::error.
std::vector<RunRecord> run_tasks(const std::vector<RunTask>& tasks, std::size_t jobs,
                                 bool keep_traces = true);

struct ExperimentSpec {
  std::vector<MethodId> methods{kAllMethods.begin(), kAllMethods.end()};
  std::vector<std::string> functions;
  std::size_t dim = 30;
  std::size_t pop = 30;
  std::size_t budget = 12000;
  std::size_t n_seeds = 10;
  std::uint64_t base_seed = 42;
  std::size_t jobs = 0;
  bool keep_traces = true;
};

/// Every (method, function, seed) triple, sorted by (method, function,
/// seed index) in the order given by the spec.  Run failures are recorded,
/// never dropped.  Method and function indices used for seeding are the
/// positions in the full method list and the full benchmark suite, so a
/// filtered run reproduces the same cells as the full protocol.
std::vector<RunRecord> run_experiment(const ExperimentSpec& spec);

enum class AblationVariant { Full, NoAdaptiveSelection, NoAnchor };
std::string_view variant_name(AblationVariant v);
inline constexpr std::array<AblationVariant, 3> kAllVariants = {
    AblationVariant::Full, AblationVariant::NoAdaptiveSelection, AblationVariant::NoAnchor};

/// The three WASHH variants on identical (function, seed) run seeds.
std::vector<RunRecord> run_ablation(const ExperimentSpec& spec);

class IncompleteTable : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Method x function table of mean values.  Row and column order is the
/// insertion order.
class MeansTable {
 public:
  void set(const std::string& method, const std::string& function, double mean);
  const std::vector<std::string>& methods() const { return methods_; }
  const std::vector<std::string>& functions() const { return functions_; }
  const double* find(const std::string& method, const std::string& function) const;

 private:
  std::vector<std::string> methods_;
  std::vector<std::string> functions_;
  std::map<std::pair<std::string, std::string>, double> cells_;
};

struct RankRow {
  std::string method;
  double avg_rank = 0.0;
  std::size_t best_or_tied = 0;
};

struct RankTable {
  /// Same order as MeansTable::methods().
  std::vector<RankRow> rows;
  /// per_function[f][m]: rank of method m on function f.
  std::vector<std::vector<double>> per_function;
};

/// Per function, ascending by mean; exactly equal means share the average
/// of their rank positions.  Throws IncompleteTable on a missing cell.
RankTable exact_tie_ranks(const MeansTable& means);

struct CellStats {
  std::string method;
  std::string function;
  double mean = 0.0;
  /// Population standard deviation (divide by n).
  double std = 0.0;
  std::size_t n = 0;
};

struct ExperimentSummary {
  std::vector<CellStats> cells;
  RankTable ranks;
  std::size_t failed_runs = 0;
};

/// Aggregates successful records.  Methods and functions appear in order of
/// first occurrence after sorting records by (method, function, seed), so
/// the result does not depend on the input order.  Ranks are computed only
/// when the table is complete.
ExperimentSummary summarize(std::vector<RunRecord> records,
                            const std::vector<std::string>& method_order = {},
                            const std::vector<std::string>& function_order = {});

MeansTable means_of(const ExperimentSummary& summary);

class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// `method,function,seed,best_value`
void export_results_csv(const std::vector<RunRecord>& records, const std::filesystem::path& path);
/// `method,function,seed,eval_index,best_so_far`; eval_index is 1-based.
/// Failed runs with their error message, one row each.
void export_failures_csv(const std::vector<RunRecord>& records, const std::filesystem::path& path);
void export_trace_csv(const std::vector<RunRecord>& records, const std::filesystem::path& path);
/// `method,function,mean,std`
void export_summary_csv(const ExperimentSummary& summary, const std::filesystem::path& path);
/// `method,avg_rank,best_or_tied`
void export_ranks_csv(const RankTable& ranks, const std::filesystem::path& path);

/// Reads a summary CSV back.  Throws CsvError on malformed input.
std::vector<CellStats> read_summary_csv(const std::filesystem::path& path);
std::vector<RunRecord> read_results_csv(const std::filesystem::path& path);

/// Scientific notation with 17 significant digits, which round-trips every
/// finite double ("1.0000000000000000e+00").
std::string format_number(double v);

}  // namespace washh

#endif  // WASHH_HARNESS_HPP
