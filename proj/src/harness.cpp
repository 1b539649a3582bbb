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

#include "washh/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include <fmt/core.h>

#include "washh/benchmarks.hpp"
#include "washh/washh.hpp"

namespace washh {

std::uint64_t derive_seed(std::uint64_t base_seed, std::size_t method_index,
                          std::size_t function_index, std::size_t seed_index) {
  return base_seed * 1000000ULL + method_index * 10000ULL + function_index * 100ULL + seed_index;
}

void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& task) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min(jobs, n);
  if (jobs <= 1) {
    for (std::size_t i = 0; i < n; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> workers;
  workers.reserve(jobs);
  for (std::size_t w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) task(i);
    });
  }
}

std::vector<RunRecord> run_tasks(const std::vector<RunTask>& tasks, std::size_t jobs,
                                 bool keep_traces) {
  std::vector<RunRecord> records(tasks.size());
  parallel_for(tasks.size(), jobs, [&](std::size_t k) {
    const RunTask& t = tasks[k];
    RunRecord& rec = records[k];
    rec.method = t.method;
    rec.function = t.function;
    rec.seed = t.seed;
    try {
      RunResult r = t.run();
      rec.best_value = r.best_value;
      rec.best_point = std::move(r.best_point);
      if (keep_traces) rec.trace = std::move(r.trace);
    } catch (const std::exception& e) {
      rec.error = e.what();
      if (rec.error.empty()) rec.error = "unknown error";
    }
  });
  return records;
}

namespace {

std::size_t method_index(MethodId m) {
  return static_cast<std::size_t>(std::find(kAllMethods.begin(), kAllMethods.end(), m) -
                                  kAllMethods.begin());
}

std::size_t function_index(const std::string& name) {
  const auto& names = bench::benchmark_names();
  const auto canon = bench::canonical_name(name);
  if (!canon) throw bench::UnknownBenchmark(name);
  return static_cast<std::size_t>(std::find(names.begin(), names.end(), *canon) - names.begin());
}

std::vector<std::string> resolved_functions(const ExperimentSpec& spec) {
  if (spec.functions.empty()) return bench::benchmark_names();
  std::vector<std::string> out;
  for (const auto& f : spec.functions) {
    const auto canon = bench::canonical_name(f);
    if (!canon) throw bench::UnknownBenchmark(f);
    out.push_back(*canon);
  }
  return out;
}

}  // namespace

std::vector<RunRecord> run_experiment(const ExperimentSpec& spec) {
  if (spec.n_seeds == 0) throw std::invalid_argument("n_seeds must be at least 1");
  const auto functions = resolved_functions(spec);
  std::vector<RunTask> tasks;
  for (MethodId m : spec.methods) {
    for (const auto& f : functions) {
      for (std::size_t s = 0; s < spec.n_seeds; ++s) {
        const std::uint64_t seed = derive_seed(spec.base_seed, method_index(m), function_index(f), s);
        tasks.push_back({std::string(method_name(m)), f, seed, [=, &spec] {
                           const Problem p = bench::make_benchmark(f, spec.dim);
                           return run_method(m, p, spec.pop, spec.budget, seed);
                         }});
      }
    }
  }
  return run_tasks(tasks, spec.jobs, spec.keep_traces);
}

std::string_view variant_name(AblationVariant v) {
  switch (v) {
    case AblationVariant::Full: return "Full";
    case AblationVariant::NoAdaptiveSelection: return "NoAdaptiveSelection";
    case AblationVariant::NoAnchor: return "NoAnchor";
  }
  return "?";
}

std::vector<RunRecord> run_ablation(const ExperimentSpec& spec) {
  if (spec.n_seeds == 0) throw std::invalid_argument("n_seeds must be at least 1");
  const auto functions = resolved_functions(spec);
  std::vector<RunTask> tasks;
  for (AblationVariant v : kAllVariants) {
    for (const auto& f : functions) {
      for (std::size_t s = 0; s < spec.n_seeds; ++s) {
        // Every variant reuses the WASHH seed of the cell.
        const std::uint64_t seed =
            derive_seed(spec.base_seed, method_index(MethodId::WASHH), function_index(f), s);
        tasks.push_back({std::string(variant_name(v)), f, seed, [=, &spec] {
                           const Problem p = bench::make_benchmark(f, spec.dim);
                           WashhConfig c;
                           c.pop_size = spec.pop;
                           c.budget = spec.budget;
                           c.seed = seed;
                           if (v == AblationVariant::NoAdaptiveSelection) c.selection = Selection::Uniform;
                           if (v == AblationVariant::NoAnchor) c.use_anchors = false;
                           return run_washh(p, c);
                         }});
      }
    }
  }
  return run_tasks(tasks, spec.jobs, spec.keep_traces);
}

// ---------------------------------------------------------------------------
// ranks and aggregation

void MeansTable::set(const std::string& method, const std::string& function, double mean) {
  if (std::find(methods_.begin(), methods_.end(), method) == methods_.end()) methods_.push_back(method);
  if (std::find(functions_.begin(), functions_.end(), function) == functions_.end()) {
    functions_.push_back(function);
  }
  cells_[{method, function}] = mean;
}

const double* MeansTable::find(const std::string& method, const std::string& function) const {
  const auto it = cells_.find({method, function});
  return it == cells_.end() ? nullptr : &it->second;
}

RankTable exact_tie_ranks(const MeansTable& means) {
  const auto& methods = means.methods();
  const std::size_t m = methods.size();
  RankTable table;
  table.rows.resize(m);
  for (std::size_t k = 0; k < m; ++k) table.rows[k].method = methods[k];
  if (means.functions().empty()) return table;

  std::vector<double> rank_sum(m, 0.0);
  for (const auto& f : means.functions()) {
    std::vector<std::pair<double, std::size_t>> col;
    for (std::size_t k = 0; k < m; ++k) {
      const double* v = means.find(methods[k], f);
      if (!v) throw IncompleteTable(fmt::format("missing mean for {} on {}", methods[k], f));
      col.emplace_back(*v, k);
    }
    std::sort(col.begin(), col.end());
    std::vector<double> ranks(m);
    for (std::size_t i = 0; i < m;) {
      std::size_t j = i;
      while (j + 1 < m && col[j + 1].first == col[i].first) ++j;
      // Positions i+1 .. j+1 share their mean.
      const double shared = 0.5 * static_cast<double>(i + j + 2);
      for (std::size_t t = i; t <= j; ++t) ranks[col[t].second] = shared;
      i = j + 1;
    }
    const double best = *std::min_element(ranks.begin(), ranks.end());
    for (std::size_t k = 0; k < m; ++k) {
      rank_sum[k] += ranks[k];
      if (ranks[k] == best) ++table.rows[k].best_or_tied;
    }
    table.per_function.push_back(std::move(ranks));
  }
  const auto nf = static_cast<double>(means.functions().size());
  for (std::size_t k = 0; k < m; ++k) table.rows[k].avg_rank = rank_sum[k] / nf;
  return table;
}

namespace {

std::size_t position_of(const std::vector<std::string>& order, const std::string& key) {
  const auto it = std::find(order.begin(), order.end(), key);
  return static_cast<std::size_t>(it - order.begin());
}

}  // namespace

ExperimentSummary summarize(std::vector<RunRecord> records,
                            const std::vector<std::string>& method_order,
                            const std::vector<std::string>& function_order) {
  auto key = [&](const RunRecord& r) {
    return std::make_tuple(position_of(method_order, r.method), r.method,
                           position_of(function_order, r.function), r.function, r.seed);
  };
  std::sort(records.begin(), records.end(),
            [&](const RunRecord& a, const RunRecord& b) { return key(a) < key(b); });

  ExperimentSummary summary;
  for (std::size_t i = 0; i < records.size();) {
    std::size_t j = i;
    std::vector<double> values;
    while (j < records.size() && records[j].method == records[i].method &&
           records[j].function == records[i].function) {
      if (records[j].ok()) {
        values.push_back(records[j].best_value);
      } else {
        ++summary.failed_runs;
      }
      ++j;
    }
    if (!values.empty()) {
      CellStats c{records[i].method, records[i].function, 0.0, 0.0, values.size()};
      double sum = 0.0;
      for (double v : values) sum += v;
      c.mean = sum / static_cast<double>(values.size());
      double sq = 0.0;
      for (double v : values) sq += (v - c.mean) * (v - c.mean);
      c.std = std::sqrt(sq / static_cast<double>(values.size()));
      summary.cells.push_back(std::move(c));
    }
    i = j;
  }
  try {
    summary.ranks = exact_tie_ranks(means_of(summary));
  } catch (const IncompleteTable&) {
    summary.ranks = {};
  }
  return summary;
}

MeansTable means_of(const ExperimentSummary& summary) {
  MeansTable t;
  for (const auto& c : summary.cells) t.set(c.method, c.function, c.mean);
  return t;
}

// ---------------------------------------------------------------------------
// CSV

std::string format_number(double v) { return fmt::format("{:.16e}", v); }

namespace {

/// Writes to a sibling temp file and renames it into place.
class AtomicFile {
 public:
  explicit AtomicFile(std::filesystem::path path) : path_(std::move(path)) {
    tmp_ = path_;
    tmp_ += ".tmp";
    if (path_.has_parent_path()) {
      std::error_code ec;
      std::filesystem::create_directories(path_.parent_path(), ec);
    }
    out_.open(tmp_, std::ios::binary | std::ios::trunc);
    if (!out_) throw CsvError(fmt::format("cannot open {} for writing", tmp_.string()));
  }
  AtomicFile(const AtomicFile&) = delete;
  AtomicFile& operator=(const AtomicFile&) = delete;
  ~AtomicFile() {
    if (!committed_) {
      out_.close();
      std::error_code ec;
      std::filesystem::remove(tmp_, ec);
    }
  }

  std::ofstream& stream() { return out_; }

  void commit() {
    out_.flush();
    if (!out_) throw CsvError(fmt::format("write failed for {}", tmp_.string()));
    out_.close();
    std::error_code ec;
    std::filesystem::rename(tmp_, path_, ec);
    if (ec) throw CsvError(fmt::format("cannot move {} into place: {}", path_.string(), ec.message()));
    committed_ = true;
  }

 private:
  std::filesystem::path path_;
  std::filesystem::path tmp_;
  std::ofstream out_;
  bool committed_ = false;
};

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s, const std::filesystem::path& path, std::size_t line) {
  if (s.empty()) throw CsvError(fmt::format("{}:{}: empty numeric field", path.string(), line));
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || (errno == ERANGE && std::abs(v) == HUGE_VAL)) {
    throw CsvError(fmt::format("{}:{}: bad number '{}'", path.string(), line, s));
  }
  return v;
}

std::vector<std::vector<std::string>> read_rows(const std::filesystem::path& path,
                                                const std::string& expected_header) {
  std::ifstream in(path);
  if (!in) throw CsvError(fmt::format("cannot open {}", path.string()));
  std::string line;
  if (!std::getline(in, line)) throw CsvError(fmt::format("{}: empty file", path.string()));
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != expected_header) {
    throw CsvError(fmt::format("{}: expected header '{}', got '{}'", path.string(), expected_header, line));
  }
  const std::size_t columns = split_row(expected_header).size();
  std::vector<std::vector<std::string>> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto row = split_row(line);
    if (row.size() != columns) {
      throw CsvError(fmt::format("{}:{}: expected {} fields, got {}", path.string(), lineno, columns,
                                 row.size()));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

void export_results_csv(const std::vector<RunRecord>& records, const std::filesystem::path& path) {
  AtomicFile file(path);
  auto& out = file.stream();
  out << "method,function,seed,best_value\n";
  for (const auto& r : records) {
    if (!r.ok()) continue;
    out << r.method << ',' << r.function << ',' << r.seed << ',' << format_number(r.best_value) << '\n';
  }
  file.commit();
}

void export_trace_csv(const std::vector<RunRecord>& records, const std::filesystem::path& path) {
  AtomicFile file(path);
  auto& out = file.stream();
  out << "method,function,seed,eval_index,best_so_far\n";
  for (const auto& r : records) {
    if (!r.ok()) continue;
    const std::string prefix = fmt::format("{},{},{},", r.method, r.function, r.seed);
    for (std::size_t k = 0; k < r.trace.size(); ++k) {
      out << prefix << (k + 1) << ',' << format_number(r.trace[k]) << '\n';
    }
  }
  file.commit();
}

void export_summary_csv(const ExperimentSummary& summary, const std::filesystem::path& path) {
  AtomicFile file(path);
  auto& out = file.stream();
  out << "method,function,mean,std\n";
  for (const auto& c : summary.cells) {
    out << c.method << ',' << c.function << ',' << format_number(c.mean) << ','
        << format_number(c.std) << '\n';
  }
  file.commit();
}

void export_ranks_csv(const RankTable& ranks, const std::filesystem::path& path) {
  AtomicFile file(path);
  auto& out = file.stream();
  out << "method,avg_rank,best_or_tied\n";
  for (const auto& r : ranks.rows) {
    out << r.method << ',' << format_number(r.avg_rank) << ',' << r.best_or_tied << '\n';
  }
  file.commit();
}

std::vector<CellStats> read_summary_csv(const std::filesystem::path& path) {
  std::vector<CellStats> out;
  std::size_t line = 1;
  for (const auto& row : read_rows(path, "method,function,mean,std")) {
    ++line;
    if (row[0].empty() || row[1].empty()) {
      throw CsvError(fmt::format("{}:{}: empty label", path.string(), line));
    }
    out.push_back({row[0], row[1], parse_double(row[2], path, line), parse_double(row[3], path, line), 0});
  }
  return out;
}

void export_failures_csv(const std::vector<RunRecord>& records, const std::filesystem::path& path) {
  AtomicFile file(path);
  auto& out = file.stream();
  out << "method,function,seed,error\n";
  for (const auto& r : records) {
    if (r.ok()) continue;
    std::string msg;
    for (char c : r.error) {
      if (c == '"') msg += "\"\"";
      else if (c == '\n' || c == '\r') msg += ' ';
      else msg += c;
    }
    out << r.method << ',' << r.function << ',' << r.seed << ",\"" << msg << "\"\n";
  }
  file.commit();
}

std::vector<RunRecord> read_results_csv(const std::filesystem::path& path) {
  std::vector<RunRecord> out;
  std::size_t line = 1;
  for (const auto& row : read_rows(path, "method,function,seed,best_value")) {
    ++line;
    RunRecord r;
    r.method = row[0];
    r.function = row[1];
    char* end = nullptr;
    r.seed = std::strtoull(row[2].c_str(), &end, 10);
    if (row[2].empty() || end != row[2].c_str() + row[2].size()) {
      throw CsvError(fmt::format("{}:{}: bad seed '{}'", path.string(), line, row[2]));
    }
    r.best_value = parse_double(row[3], path, line);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace washh
