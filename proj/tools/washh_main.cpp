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

// washh command-line driver: bench, ablate, ranks, hpo.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/core.h>

#include "washh/baselines.hpp"
#include "washh/benchmarks.hpp"
#include "washh/extproc.hpp"
#include "washh/harness.hpp"

namespace fs = std::filesystem;
using namespace washh;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRunFailed = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<MethodId> parse_methods(const std::string& filter) {
  if (filter.empty()) return {kAllMethods.begin(), kAllMethods.end()};
  std::vector<MethodId> out;
  for (const auto& name : split_list(filter)) {
    const auto m = parse_method(name);
    if (!m) throw UsageError(fmt::format("unknown method '{}'", name));
    if (std::find(out.begin(), out.end(), *m) == out.end()) out.push_back(*m);
  }
  if (out.empty()) throw UsageError("empty method list");
  return out;
}

std::vector<std::string> parse_functions(const std::string& filter) {
  if (filter.empty()) return bench::benchmark_names();
  std::vector<std::string> out;
  for (const auto& name : split_list(filter)) {
    const auto f = bench::canonical_name(name);
    if (!f) throw UsageError(fmt::format("unknown function '{}'", name));
    if (std::find(out.begin(), out.end(), *f) == out.end()) out.push_back(*f);
  }
  if (out.empty()) throw UsageError("empty function list");
  return out;
}

std::vector<std::string> method_labels(const std::vector<MethodId>& methods) {
  std::vector<std::string> out;
  for (MethodId m : methods) out.emplace_back(method_name(m));
  return out;
}

void print_cells(const ExperimentSummary& summary, const std::vector<std::string>& methods,
                 const std::vector<std::string>& functions) {
  auto find_cell = [&](const std::string& m, const std::string& f) -> const CellStats* {
    for (const auto& c : summary.cells) {
      if (c.method == m && c.function == f) return &c;
    }
    return nullptr;
  };
  fmt::print("{:<14}{:<5}", "Function", "");
  for (const auto& m : methods) fmt::print("{:>14}", m);
  fmt::print("\n");
  for (const auto& f : functions) {
    for (const char* metric : {"Ave", "Std"}) {
      fmt::print("{:<14}{:<5}", metric[0] == 'A' ? bench::display_name(f) : "", metric);
      for (const auto& m : methods) {
        const CellStats* c = find_cell(m, f);
        if (!c) {
          fmt::print("{:>14}", "-");
        } else {
          fmt::print("{:>14.4E}", metric[0] == 'A' ? c->mean : c->std);
        }
      }
      fmt::print("\n");
    }
  }
}

void print_ranks(const RankTable& ranks) {
  std::vector<std::size_t> order(ranks.rows.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return ranks.rows[a].avg_rank < ranks.rows[b].avg_rank;
  });
  fmt::print("\n{:<22}{:>10}{:>12}\n", "Method", "Avg. rank", "Best/tied");
  for (std::size_t k : order) {
    fmt::print("{:<22}{:>10.2f}{:>12}\n", ranks.rows[k].method, ranks.rows[k].avg_rank,
               ranks.rows[k].best_or_tied);
  }
}

int report_failures(const std::vector<RunRecord>& records) {
  int failed = 0;
  for (const auto& r : records) {
    if (!r.ok()) {
      ++failed;
      std::cerr << fmt::format("run failed: {} / {} / seed {}: {}\n", r.method, r.function, r.seed, r.error);
    }
  }
  return failed;
}

void write_outputs(const std::vector<RunRecord>& records, const ExperimentSummary& summary,
                   const fs::path& dir, const std::string& prefix, bool with_trace) {
  export_results_csv(records, dir / (prefix + "results.csv"));
  export_summary_csv(summary, dir / (prefix + "summary.csv"));
  if (!summary.ranks.rows.empty()) export_ranks_csv(summary.ranks, dir / (prefix + "ranks.csv"));
  if (with_trace) export_trace_csv(records, dir / (prefix + "trace.csv"));
  const fs::path failures = dir / (prefix + "failures.csv");
  if (std::any_of(records.begin(), records.end(), [](const RunRecord& r) { return !r.ok(); })) {
    export_failures_csv(records, failures);
  } else {
    fs::remove(failures);
  }
}

struct CommonOptions {
  std::size_t dim = 30;
  std::size_t pop = 30;
  std::size_t budget = 12000;
  std::size_t seeds = 10;
  std::uint64_t base_seed = 42;
  std::string methods;
  std::string functions;
  std::string out_dir = "results";
  std::size_t jobs = 0;
  bool no_trace = false;
};

void add_protocol_options(CLI::App* cmd, CommonOptions& o, bool with_methods) {
  cmd->add_option("--dim", o.dim, "Problem dimension")->capture_default_str()->check(CLI::Range(2, 100000));
  cmd->add_option("--pop", o.pop, "Population size")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--budget", o.budget, "Evaluations per run")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--seeds", o.seeds, "Independent runs per cell")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--base-seed", o.base_seed, "Base seed")->capture_default_str();
  if (with_methods) cmd->add_option("--methods", o.methods, "Comma-separated methods (default: all)");
  cmd->add_option("--functions", o.functions, "Comma-separated functions (default: all)");
  cmd->add_option("--out-dir", o.out_dir, "Directory for CSV output")->capture_default_str();
  cmd->add_option("--jobs", o.jobs, "Worker threads (0 = available parallelism)")->capture_default_str();
  cmd->add_flag("--no-trace", o.no_trace, "Skip the per-evaluation trace CSV");
}

ExperimentSpec to_spec(const CommonOptions& o, bool with_methods) {
  ExperimentSpec spec;
  if (with_methods) spec.methods = parse_methods(o.methods);
  spec.functions = parse_functions(o.functions);
  spec.dim = o.dim;
  spec.pop = o.pop;
  spec.budget = o.budget;
  spec.n_seeds = o.seeds;
  spec.base_seed = o.base_seed;
  spec.jobs = o.jobs;
  spec.keep_traces = !o.no_trace;
  return spec;
}

int cmd_bench(const CommonOptions& o) {
  const ExperimentSpec spec = to_spec(o, true);
  const auto records = run_experiment(spec);
  const auto methods = method_labels(spec.methods);
  const auto summary = summarize(records, methods, spec.functions);
  write_outputs(records, summary, o.out_dir, "", !o.no_trace);
  print_cells(summary, methods, spec.functions);
  if (!summary.ranks.rows.empty()) print_ranks(summary.ranks);
  return report_failures(records) > 0 ? kExitRunFailed : kExitOk;
}

int cmd_ablate(const CommonOptions& o) {
  const ExperimentSpec spec = to_spec(o, false);
  const auto records = run_ablation(spec);
  std::vector<std::string> variants;
  for (auto v : kAllVariants) variants.emplace_back(variant_name(v));
  const auto summary = summarize(records, variants, spec.functions);
  write_outputs(records, summary, o.out_dir, "ablation_", !o.no_trace);
  print_cells(summary, variants, spec.functions);
  if (!summary.ranks.rows.empty()) print_ranks(summary.ranks);
  return report_failures(records) > 0 ? kExitRunFailed : kExitOk;
}

int cmd_ranks(const std::string& input) {
  std::vector<CellStats> cells;
  try {
    cells = read_summary_csv(input);
  } catch (const CsvError& e) {
    throw UsageError(e.what());
  }
  MeansTable means;
  for (const auto& c : cells) means.set(c.method, c.function, c.mean);
  RankTable ranks;
  try {
    ranks = exact_tie_ranks(means);
  } catch (const IncompleteTable& e) {
    throw UsageError(e.what());
  }
  print_ranks(ranks);
  return kExitOk;
}

struct HpoOptions {
  std::string evaluator_cmd;
  std::size_t pop = 30;
  std::size_t budget = 300;
  std::size_t seeds = 10;
  std::uint64_t base_seed = 42;
  std::string methods;
  std::string out_dir = "results";
  std::size_t jobs = 0;
  double timeout = 30.0;
  bool no_trace = false;
};

int cmd_hpo(const HpoOptions& o) {
  const auto methods = parse_methods(o.methods);
  extproc::EvaluatorOptions eo;
  eo.eval_timeout = std::chrono::milliseconds(static_cast<long long>(o.timeout * 1000.0));
  eo.handshake_timeout = eo.eval_timeout;

  std::vector<RunTask> tasks;
  for (MethodId m : methods) {
    const std::size_t mi = static_cast<std::size_t>(
        std::find(kAllMethods.begin(), kAllMethods.end(), m) - kAllMethods.begin());
    for (std::size_t s = 0; s < o.seeds; ++s) {
      const std::uint64_t seed = derive_seed(o.base_seed, mi, 0, s);
      tasks.push_back({std::string(method_name(m)), "hpo", seed, [=, &o] {
                         const Problem p = extproc::connect(o.evaluator_cmd, eo);
                         return run_method(m, p, o.pop, o.budget, seed);
                       }});
    }
  }
  const auto records = run_tasks(tasks, o.jobs, !o.no_trace);
  const auto labels = method_labels(methods);
  const auto summary = summarize(records, labels, {"hpo"});
  write_outputs(records, summary, o.out_dir, "hpo_", !o.no_trace);

  fmt::print("{:<12}{:>14}{:>14}\n", "Method", "Ave", "Std");
  for (const auto& c : summary.cells) fmt::print("{:<12}{:>14.6f}{:>14.6f}\n", c.method, c.mean, c.std);
  return report_failures(records) > 0 ? kExitRunFailed : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive selection hyper-heuristic benchmark and tuning driver"};
  app.require_subcommand(1);

  CommonOptions bench_opts;
  auto* bench = app.add_subcommand("bench", "Run the benchmark comparison");
  add_protocol_options(bench, bench_opts, true);

  CommonOptions ablate_opts;
  auto* ablate = app.add_subcommand("ablate", "Run the leave-one-component-out ablation");
  add_protocol_options(ablate, ablate_opts, false);

  std::string ranks_input;
  auto* ranks = app.add_subcommand("ranks", "Exact-tie average ranks from a summary CSV");
  ranks->add_option("input", ranks_input, "CSV with columns method,function,mean,std")->required();

  HpoOptions hpo_opts;
  auto* hpo = app.add_subcommand("hpo", "Tune an external evaluator");
  hpo->add_option("--evaluator-cmd", hpo_opts.evaluator_cmd, "Shell command starting the evaluator")->required();
  hpo->add_option("--pop", hpo_opts.pop, "Population size")->capture_default_str()->check(CLI::PositiveNumber);
  hpo->add_option("--budget", hpo_opts.budget, "Evaluations per run")->capture_default_str()->check(CLI::PositiveNumber);
  hpo->add_option("--seeds", hpo_opts.seeds, "Runs per method")->capture_default_str()->check(CLI::PositiveNumber);
  hpo->add_option("--base-seed", hpo_opts.base_seed, "Base seed")->capture_default_str();
  hpo->add_option("--methods", hpo_opts.methods, "Comma-separated methods (default: all)");
  hpo->add_option("--out-dir", hpo_opts.out_dir, "Directory for CSV output")->capture_default_str();
  hpo->add_option("--jobs", hpo_opts.jobs, "Worker threads (0 = available parallelism)")->capture_default_str();
  hpo->add_option("--timeout", hpo_opts.timeout, "Per-evaluation timeout in seconds")->capture_default_str()->check(CLI::PositiveNumber);
  hpo->add_flag("--no-trace", hpo_opts.no_trace, "Skip the per-evaluation trace CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*bench) return cmd_bench(bench_opts);
    if (*ablate) return cmd_ablate(ablate_opts);
    if (*ranks) return cmd_ranks(ranks_input);
    if (*hpo) return cmd_hpo(hpo_opts);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRunFailed;
  }
  return kExitUsage;
}
