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

#ifndef PAZO_PROBLEMS_H_
#define PAZO_PROBLEMS_H_

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "pazo/param_vector.h"
#include "pazo/problem.h"
#include "pazo/subspace.h"

namespace pazo {

// f(x; i) = 1/2 (x - c_i)^T A (x - c_i) with A = Q diag(eigenvalues) Q^T.
// When the basis is empty, A is the diagonal matrix of the eigenvalues.
class QuadraticProblem : public Problem {
 public:
  QuadraticProblem(std::vector<double> eigenvalues, ColumnMatrix basis,
                   std::vector<ParamVector> centers);

  std::size_t dim() const override { return eigenvalues_.size(); }
  std::size_t num_samples() const override { return centers_.size(); }
  double eval_one(std::span<const double> x, SampleId id) const override;
  void grad_one_into(std::span<const double> x, SampleId id,
                     std::span<double> out) const override;
  std::optional<double> smoothness_L() const override;

  const std::vector<double>& eigenvalues() const { return eigenvalues_; }
  const ColumnMatrix& basis() const { return basis_; }
  const std::vector<ParamVector>& centers() const { return centers_; }

  // A v.
  ParamVector apply_A(std::span<const double> v) const;

 private:
  std::vector<double> eigenvalues_;
  ColumnMatrix basis_;  // orthonormal eigenvectors, or empty for diagonal A
  std::vector<ParamVector> centers_;
};

// Random quadratic: orthogonal eigenbasis (identity when mu == L),
// log-uniform spectrum in [mu, L] containing both endpoints, and centers
// c_i = c_bar + spread * g_i with g_i standard normal.
QuadraticProblem make_quadratic(std::size_t d, double mu, double L,
                                std::size_t n_samples, double center_spread,
                                std::uint64_t seed);

// f(x; i) = log(1 + exp(-y_i x^T z_i)) + (mu_reg / 2) ||x||^2, y_i in {-1, 1}.
class LogisticProblem : public Problem {
 public:
  LogisticProblem(std::size_t dim, std::vector<double> features,
                  std::vector<int> labels, double mu_reg);

  std::size_t dim() const override { return dim_; }
  std::size_t num_samples() const override { return labels_.size(); }
  double eval_one(std::span<const double> x, SampleId id) const override;
  void grad_one_into(std::span<const double> x, SampleId id,
                     std::span<double> out) const override;
  std::optional<double> smoothness_L() const override;
  std::optional<double> lipschitz_M() const override;
  bool is_classifier() const override { return true; }
  bool predicts_correctly(std::span<const double> x,
                          SampleId id) const override;

  std::span<const double> features(SampleId id) const;
  int label(SampleId id) const { return labels_[id]; }  // -1 or +1
  double mu_reg() const { return mu_reg_; }

 private:
  std::size_t dim_;
  std::vector<double> features_;  // row-major n x dim
  std::vector<int> labels_;
  double mu_reg_;
};

// Sample index sets of one experiment. The three sets are disjoint.
struct DataSplit {
  std::vector<SampleId> private_ids;
  std::vector<SampleId> public_ids;
  std::vector<SampleId> test_ids;
};

enum class ShiftKind { kNone, kClassImbalance, kMeanShift };

struct SplitSpec {
  std::size_t n_private = 2000;
  // Unset: round(public_fraction * n_private).
  std::optional<std::size_t> n_public;
  double public_fraction = 0.04;
  std::size_t n_test = 1000;

  ShiftKind shift = ShiftKind::kNone;
  // kMeanShift: public features are translated by this much along a fixed
  // random unit direction.
  double shift_magnitude = 0.0;
  // kClassImbalance: relative public class weights {class -1, class +1}.
  std::vector<double> class_ratio = {1.0, 1.0};

  // Distance between the class means along the signal direction, in units
  // of the per-direction noise standard deviation.
  double class_separation = 2.0;
  // Features are multiplied by this factor after generation.
  double feature_scale = 1.0;
  double mu_reg = 1e-3;
  std::uint64_t seed = 0;

  std::size_t public_count() const;

  friend bool operator==(const SplitSpec&, const SplitSpec&) = default;
};

struct LogisticSplit {
  LogisticProblem problem;
  DataSplit split;
  ParamVector signal_direction;
  ParamVector shift_direction;
};

// Two Gaussian class clouds; the shift applies to the public subset only.
// Throws InvalidArgument when the public split ends up single-class without
// an explicit zero in class_ratio.
LogisticSplit make_logistic_split(std::size_t d, const SplitSpec& spec);

struct CsvDataset {
  std::size_t dim = 0;
  std::vector<double> features;  // row-major
  std::vector<int> labels;       // 0 / 1 as read
};

// Comma-separated reals, last column an integer label in {0, 1}. Rejects
// non-finite entries and ragged rows with DataError (naming the line).
CsvDataset read_csv_dataset(std::istream& in, bool has_header);
CsvDataset read_csv_dataset(const std::string& path, bool has_header);

// Logistic problem over a CSV dataset (labels mapped 0 -> -1, 1 -> +1).
LogisticProblem logistic_from_csv(const CsvDataset& data, double mu_reg);

}  // namespace pazo

#endif  // PAZO_PROBLEMS_H_
