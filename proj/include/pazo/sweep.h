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

#ifndef PAZO_SWEEP_H_
#define PAZO_SWEEP_H_

// Experiment sweeps over (epsilon, seed) cells, JSONL run logs, and the
// per-sweep CSV tables.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pazo/config.h"
#include "pazo/metrics.h"
#include "pazo/training.h"

namespace pazo {

enum class CellStatus { kOk, kCalibrationFailed, kDiverged };

struct RunRecord {
  std::string config_text;  // serialize_config of the sweep config
  std::string algorithm;
  // Target epsilon; +inf for non-private algorithms.
  double epsilon = 0.0;
  double delta = 0.0;
  std::uint64_t seed = 0;
  std::optional<double> sigma;
  CellStatus status = CellStatus::kOk;
  std::string message;
  TrainingRecord training;
};

// One cell: calibrate sigma (private algorithms only), build the problem for
// this seed, and train. Calibration failures are reported in the record.
RunRecord run_cell(const ExperimentConfig& config, double epsilon,
                   std::uint64_t seed);

// Header line, one line per checkpoint, summary line.
std::string run_log_jsonl(const RunRecord& record);
std::string run_log_filename(const RunRecord& record);

// Columns: algorithm, epsilon, delta, seed, sigma, status, final_accuracy,
// final_test_loss, final_train_loss, gamma, iterations. Wall-clock is kept
// out so that reruns produce identical bytes.
std::string summary_csv(const std::vector<RunRecord>& records);

struct TimingRow {
  std::string algorithm;
  double mean_seconds_per_iteration = 0.0;
  std::size_t iterations = 0;
  double private_forward = 0.0;  // per iteration
  double public_forward_backward = 0.0;
  double private_backward = 0.0;
};

// Rows sorted by algorithm name. Algorithms with fewer than 20 timed
// iterations get a warning appended to *warnings (when non-null).
std::vector<TimingRow> timing_report(const std::vector<RunRecord>& records,
                                     std::vector<std::string>* warnings =
                                         nullptr);
std::string timing_csv(const std::vector<TimingRow>& rows);

struct SweepResult {
  std::vector<RunRecord> records;  // epsilon-major, seed-minor
  std::string summary;             // summary.csv contents
  std::vector<std::string> warnings;
};

// Runs every (epsilon, seed) cell and writes run logs, summary.csv and
// timing.csv under config.output_dir.
SweepResult run_sweep(const ExperimentConfig& config);

struct RunLog {
  std::string config_text;
  std::uint64_t seed = 0;
  std::vector<std::size_t> iterations;
  std::vector<ParamVector> trajectory;
};

// Reads a run log. Throws DataError when the log has no recorded parameters.
RunLog read_run_log(const std::string& path);

// Gamma over the logged trajectory, on the problem rebuilt from config.
GammaReport gamma_from_run_log(const ExperimentConfig& config,
                               const RunLog& log);

}  // namespace pazo

#endif  // PAZO_SWEEP_H_
