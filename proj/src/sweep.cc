// Copyright 2026 The PAZO Authors.
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

#include "pazo/sweep.h"

#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "json.hpp"
#include "pazo/errors.h"
#include "pazo/format.h"

namespace pazo {
namespace {

using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string status_name(CellStatus status) {
  switch (status) {
    case CellStatus::kOk:
      return "ok";
    case CellStatus::kCalibrationFailed:
      return "fail";
    case CellStatus::kDiverged:
      return "diverged";
  }
  return "unknown";
}

json optional_number(const std::optional<double>& v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

json number_or_null(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

std::string csv_optional(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

}  // namespace

RunRecord run_cell(const ExperimentConfig& config, double epsilon,
                   std::uint64_t seed) {
  RunRecord rec;
  rec.config_text = serialize_config(config);
  rec.algorithm = algorithm_name(config.algorithm);
  rec.seed = seed;
  rec.delta = config.delta;
  rec.epsilon = is_private(config.algorithm) ? epsilon : kInf;

  BuiltProblem built = build_problem(config, seed);
  PrivacySpec spec = privacy_spec_for(config, rec.epsilon);
  spec.dataset_n = built.split.private_ids.size();
  if (is_private(config.algorithm)) {
    try {
      spec = complete_spec(spec);
    } catch (const PrivacyError& e) {
      rec.status = CellStatus::kCalibrationFailed;
      rec.message = e.what();
      return rec;
    }
  } else {
    spec.sigma = 0.0;
    spec.delta = 0.0;
  }
  rec.sigma = spec.sigma;

  TrainingOptions options;
  options.T = config.T;
  options.eval_every = config.eval_every;
  options.seed = seed;
  options.sampling = config.sampling;
  options.record_parameters = config.record_parameters;
  rec.training = run_training(*built.problem, built.split, config.algorithm,
                              spec, options);
  if (rec.training.status != TerminationStatus::kCompleted) {
    rec.status = CellStatus::kDiverged;
    rec.message = rec.training.message;
  }
  return rec;
}

std::string run_log_filename(const RunRecord& record) {
  return record.algorithm + "_eps" + format_double(record.epsilon) + "_seed" +
         std::to_string(record.seed) + ".jsonl";
}

std::string run_log_jsonl(const RunRecord& record) {
  std::ostringstream out;
  json header = {{"type", "header"},
                 {"algorithm", record.algorithm},
                 {"epsilon", number_or_null(record.epsilon)},
                 {"delta", record.delta},
                 {"seed", record.seed},
                 {"sigma", optional_number(record.sigma)},
                 {"config", record.config_text}};
  out << header.dump() << "\n";
  for (const Checkpoint& cp : record.training.checkpoints) {
    json line = {{"type", "checkpoint"},
                 {"iteration", cp.iteration},
                 {"train_loss", number_or_null(cp.train_loss)},
                 {"test_loss", number_or_null(cp.test_loss)},
                 {"test_accuracy", optional_number(cp.test_accuracy)},
                 {"grad_norm", number_or_null(cp.grad_norm)},
                 {"gamma", optional_number(cp.gamma)},
                 {"gamma_so_far", optional_number(cp.gamma_so_far)}};
    line["selected"] = cp.selected ? json(*cp.selected) : json(nullptr);
    if (cp.x) line["x"] = cp.x->values();
    out << line.dump() << "\n";
  }
  const TrainingRecord& tr = record.training;
  double total = 0.0;
  for (double s : tr.step_seconds) total += s;
  json ops = json::array();
  for (const OpCounts& c : tr.ops) {
    ops.push_back({c.private_forward, c.public_forward_backward,
                   c.private_backward});
  }
  json summary = {
      {"type", "summary"},
      {"status", status_name(record.status)},
      {"message", record.message},
      {"iterations", tr.step_seconds.size()},
      {"mean_step_seconds",
       tr.step_seconds.empty()
           ? json(nullptr)
           : json(total / static_cast<double>(tr.step_seconds.size()))},
      {"step_seconds", tr.step_seconds},
      {"ops", ops},
      {"selections", tr.selections}};
  out << summary.dump() << "\n";
  return out.str();
}

std::string summary_csv(const std::vector<RunRecord>& records) {
  std::ostringstream out;
  out << "algorithm,epsilon,delta,seed,sigma,status,final_accuracy,"
         "final_test_loss,final_train_loss,gamma,iterations\n";
  for (const RunRecord& r : records) {
    out << r.algorithm << "," << format_double(r.epsilon) << ","
        << format_double(r.delta) << "," << r.seed << ","
        << csv_optional(r.sigma) << "," << status_name(r.status) << ",";
    const auto& cps = r.training.checkpoints;
    if (cps.empty()) {
      out << ",,,,0\n";
      continue;
    }
    const Checkpoint& last = cps.back();
    out << csv_optional(last.test_accuracy) << ","
        << format_double(last.test_loss) << ","
        << format_double(last.train_loss) << ","
        << csv_optional(last.gamma_so_far) << ","
        << r.training.step_seconds.size() << "\n";
  }
  return out.str();
}

std::vector<TimingRow> timing_report(const std::vector<RunRecord>& records,
                                     std::vector<std::string>* warnings) {
  struct Acc {
    double seconds = 0.0;
    std::size_t timed = 0;
    double ops[3] = {0.0, 0.0, 0.0};
    std::size_t counted = 0;
  };
  std::map<std::string, Acc> by_name;  // sorted by algorithm name
  for (const RunRecord& r : records) {
    Acc& acc = by_name[r.algorithm];
    for (double s : r.training.step_seconds) {
      acc.seconds += s;
      ++acc.timed;
    }
    for (const OpCounts& c : r.training.ops) {
      acc.ops[0] += static_cast<double>(c.private_forward);
      acc.ops[1] += static_cast<double>(c.public_forward_backward);
      acc.ops[2] += static_cast<double>(c.private_backward);
      ++acc.counted;
    }
  }
  std::vector<TimingRow> rows;
  for (const auto& [name, acc] : by_name) {
    TimingRow row;
    row.algorithm = name;
    row.iterations = acc.timed;
    if (acc.timed > 0) {
      row.mean_seconds_per_iteration =
          acc.seconds / static_cast<double>(acc.timed);
    }
    if (acc.counted > 0) {
      const double n = static_cast<double>(acc.counted);
      row.private_forward = acc.ops[0] / n;
      row.public_forward_backward = acc.ops[1] / n;
      row.private_backward = acc.ops[2] / n;
    }
    if (acc.timed < 20 && warnings != nullptr) {
      warnings->push_back("timing for " + name + " averages only " +
                          std::to_string(acc.timed) +
                          " iterations (fewer than 20)");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string timing_csv(const std::vector<TimingRow>& rows) {
  std::ostringstream out;
  out << "algorithm,mean_seconds_per_iteration,iterations,private_forward,"
         "public_forward_backward,private_backward\n";
  for (const TimingRow& r : rows) {
    out << r.algorithm << "," << format_double(r.mean_seconds_per_iteration)
        << "," << r.iterations << "," << format_double(r.private_forward)
        << "," << format_double(r.public_forward_backward) << ","
        << format_double(r.private_backward) << "\n";
  }
  return out.str();
}

SweepResult run_sweep(const ExperimentConfig& config) {
  std::vector<double> epsilons = config.epsilons;
  if (!is_private(config.algorithm)) epsilons = {kInf};
  if (config.seeds.empty()) throw ConfigError("train.seeds: list is empty");

  const std::size_t n_cells = epsilons.size() * config.seeds.size();
  SweepResult result;
  result.records.resize(n_cells);
  std::vector<std::exception_ptr> errors(n_cells);

  const long long n = static_cast<long long>(n_cells);
#pragma omp parallel for schedule(dynamic, 1)
  for (long long i = 0; i < n; ++i) {
    const std::size_t cell = static_cast<std::size_t>(i);
    const double eps = epsilons[cell / config.seeds.size()];
    const std::uint64_t seed = config.seeds[cell % config.seeds.size()];
    try {
      result.records[cell] = run_cell(config, eps, seed);
    } catch (...) {
      errors[cell] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  const std::filesystem::path dir(config.output_dir);
  std::filesystem::create_directories(dir);
  for (const RunRecord& r : result.records) {
    write_file(dir / run_log_filename(r), run_log_jsonl(r));
  }
  result.summary = summary_csv(result.records);
  write_file(dir / "summary.csv", result.summary);
  const auto rows = timing_report(result.records, &result.warnings);
  write_file(dir / "timing.csv", timing_csv(rows));
  return result;
}

RunLog read_run_log(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open run log '" + path + "'");
  RunLog log;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": malformed JSON line");
    }
    const std::string type = j.value("type", "");
    if (type == "header") {
      log.config_text = j.at("config").get<std::string>();
      log.seed = j.at("seed").get<std::uint64_t>();
      have_header = true;
    } else if (type == "checkpoint" && j.contains("x")) {
      log.iterations.push_back(j.at("iteration").get<std::size_t>());
      log.trajectory.emplace_back(j.at("x").get<std::vector<double>>());
    }
  }
  if (!have_header) throw DataError(path + ": run log has no header line");
  if (log.trajectory.empty()) {
    throw DataError(path +
                    ": run log has no recorded parameters (set "
                    "train.record_parameters = true)");
  }
  return log;
}

GammaReport gamma_from_run_log(const ExperimentConfig& config,
                               const RunLog& log) {
  BuiltProblem built = build_problem(config, log.seed);
  if (built.split.public_ids.empty()) {
    throw ConfigError("gamma needs a public split (split.n_public > 0)");
  }
  for (const ParamVector& x : log.trajectory) {
    if (x.dim() != built.problem->dim()) {
      throw DataError("run log parameters have dimension " +
                      std::to_string(x.dim()) + ", problem has " +
                      std::to_string(built.problem->dim()));
    }
  }
  return gamma_similarity(*built.problem, log.trajectory,
                          built.split.private_ids, built.split.public_ids);
}

}  // namespace pazo
