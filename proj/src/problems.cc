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

#include "pazo/problems.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "pazo/errors.h"
#include "pazo/rng.h"
#include "pazo/sampling.h"

namespace pazo {

// ---------------------------------------------------------------------------
// QuadraticProblem

QuadraticProblem::QuadraticProblem(std::vector<double> eigenvalues,
                                   ColumnMatrix basis,
                                   std::vector<ParamVector> centers)
    : eigenvalues_(std::move(eigenvalues)),
      basis_(std::move(basis)),
      centers_(std::move(centers)) {
  const std::size_t d = eigenvalues_.size();
  if (d == 0) throw InvalidArgument("QuadraticProblem: empty spectrum");
  for (double e : eigenvalues_) {
    if (!(e > 0.0)) throw InvalidArgument("QuadraticProblem: A must be SPD");
  }
  if (!basis_.empty() && basis_.size() != d) {
    throw InvalidArgument("QuadraticProblem: basis must have d columns");
  }
  for (const auto& c : centers_) {
    if (c.dim() != d) throw InvalidArgument("QuadraticProblem: bad center");
  }
}

double QuadraticProblem::eval_one(std::span<const double> x,
                                  SampleId id) const {
  const ParamVector& c = centers_[id];
  const std::size_t d = dim();
  ParamVector r(d);
  for (std::size_t i = 0; i < d; ++i) r[i] = x[i] - c[i];
  double acc = 0.0;
  if (basis_.empty()) {
    for (std::size_t i = 0; i < d; ++i) acc += eigenvalues_[i] * r[i] * r[i];
  } else {
    for (std::size_t j = 0; j < d; ++j) {
      const double y = dot(basis_[j], r);
      acc += eigenvalues_[j] * y * y;
    }
  }
  return 0.5 * acc;
}

ParamVector QuadraticProblem::apply_A(std::span<const double> v) const {
  const std::size_t d = dim();
  ParamVector out(d);
  if (basis_.empty()) {
    for (std::size_t i = 0; i < d; ++i) out[i] = eigenvalues_[i] * v[i];
    return out;
  }
  for (std::size_t j = 0; j < d; ++j) {
    const double y = eigenvalues_[j] * dot(basis_[j], v);
    axpy(y, basis_[j], out.span());
  }
  return out;
}

void QuadraticProblem::grad_one_into(std::span<const double> x, SampleId id,
                                     std::span<double> out) const {
  const ParamVector& c = centers_[id];
  ParamVector r(dim());
  for (std::size_t i = 0; i < dim(); ++i) r[i] = x[i] - c[i];
  const ParamVector g = apply_A(r);
  std::copy(g.begin(), g.end(), out.begin());
}

std::optional<double> QuadraticProblem::smoothness_L() const {
  return *std::max_element(eigenvalues_.begin(), eigenvalues_.end());
}

QuadraticProblem make_quadratic(std::size_t d, double mu, double L,
                                std::size_t n_samples, double center_spread,
                                std::uint64_t seed) {
  if (d == 0) throw InvalidArgument("make_quadratic: d must be >= 1");
  if (!(mu > 0.0 && mu <= L)) {
    throw InvalidArgument("make_quadratic: need 0 < mu <= L");
  }
  if (n_samples == 0) throw InvalidArgument("make_quadratic: no samples");
  if (!(center_spread >= 0.0)) {
    throw InvalidArgument("make_quadratic: center_spread must be >= 0");
  }
  RngStream root(seed, "quadratic");

  std::vector<double> eig(d, L);
  ColumnMatrix basis;
  if (mu < L) {
    RngStream spectrum = root.child("spectrum");
    const double lo = std::log(mu), hi = std::log(L);
    for (std::size_t i = 0; i < d; ++i) {
      eig[i] = std::exp(lo + (hi - lo) * spectrum.next_uniform());
    }
    eig[0] = L;
    if (d > 1) eig[1] = mu;

    RngStream rot = root.child("basis");
    ColumnMatrix gaussian;
    for (std::size_t j = 0; j < d; ++j) {
      gaussian.push_back(gaussian_standard(rot, d));
    }
    OrthoResult q = orthonormalize_columns(gaussian, BasisMode::kOrthonormal);
    if (q.effective_k() != d) {
      throw NumericError("make_quadratic: degenerate random basis");
    }
    basis = std::move(q.columns);
  }

  RngStream centers_rng = root.child("centers");
  const ParamVector mean_center = gaussian_standard(centers_rng, d);
  std::vector<ParamVector> centers;
  centers.reserve(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    ParamVector c = mean_center;
    if (center_spread > 0.0) {
      RngStream own = centers_rng.child(i);
      for (std::size_t j = 0; j < d; ++j) {
        c[j] += center_spread * own.next_gaussian();
      }
    }
    centers.push_back(std::move(c));
  }
  return QuadraticProblem(std::move(eig), std::move(basis), std::move(centers));
}

// ---------------------------------------------------------------------------
// LogisticProblem

namespace {

// log(1 + exp(m)) without overflow.
double softplus(double m) {
  return std::max(m, 0.0) + std::log1p(std::exp(-std::abs(m)));
}

double sigmoid(double m) {
  if (m >= 0.0) return 1.0 / (1.0 + std::exp(-m));
  const double e = std::exp(m);
  return e / (1.0 + e);
}

}  // namespace

LogisticProblem::LogisticProblem(std::size_t dim, std::vector<double> features,
                                 std::vector<int> labels, double mu_reg)
    : dim_(dim),
      features_(std::move(features)),
      labels_(std::move(labels)),
      mu_reg_(mu_reg) {
  if (dim_ == 0) throw InvalidArgument("LogisticProblem: dim must be >= 1");
  if (features_.size() != dim_ * labels_.size()) {
    throw InvalidArgument("LogisticProblem: feature matrix shape mismatch");
  }
  for (int y : labels_) {
    if (y != 1 && y != -1) {
      throw InvalidArgument("LogisticProblem: labels must be -1 or +1");
    }
  }
  if (!(mu_reg_ >= 0.0)) {
    throw InvalidArgument("LogisticProblem: mu_reg must be >= 0");
  }
}

std::span<const double> LogisticProblem::features(SampleId id) const {
  return std::span<const double>(features_.data() + id * dim_, dim_);
}

double LogisticProblem::eval_one(std::span<const double> x,
                                 SampleId id) const {
  const double margin = labels_[id] * dot(x, features(id));
  double f = softplus(-margin);
  if (mu_reg_ > 0.0) f += 0.5 * mu_reg_ * squared_norm(x);
  return f;
}

void LogisticProblem::grad_one_into(std::span<const double> x, SampleId id,
                                    std::span<double> out) const {
  const auto z = features(id);
  const double y = labels_[id];
  const double coef = -y * sigmoid(-y * dot(x, z));
  for (std::size_t i = 0; i < dim_; ++i) out[i] = coef * z[i] + mu_reg_ * x[i];
}

std::optional<double> LogisticProblem::smoothness_L() const {
  double max_sq = 0.0;
  for (std::size_t i = 0; i < num_samples(); ++i) {
    max_sq = std::max(max_sq, squared_norm(features(i)));
  }
  return 0.25 * max_sq + mu_reg_;
}

std::optional<double> LogisticProblem::lipschitz_M() const {
  if (mu_reg_ > 0.0) return std::nullopt;
  double max_norm = 0.0;
  for (std::size_t i = 0; i < num_samples(); ++i) {
    max_norm = std::max(max_norm, norm(features(i)));
  }
  return max_norm;
}

bool LogisticProblem::predicts_correctly(std::span<const double> x,
                                         SampleId id) const {
  const int predicted = dot(x, features(id)) >= 0.0 ? 1 : -1;
  return predicted == labels_[id];
}

// ---------------------------------------------------------------------------
// Splits

std::size_t SplitSpec::public_count() const {
  if (n_public) return *n_public;
  return static_cast<std::size_t>(
      std::llround(public_fraction * static_cast<double>(n_private)));
}

LogisticSplit make_logistic_split(std::size_t d, const SplitSpec& spec) {
  if (d == 0) throw InvalidArgument("make_logistic_split: d must be >= 1");
  if (spec.n_private == 0) {
    throw InvalidArgument("make_logistic_split: n_private must be >= 1");
  }
  if (!(spec.public_fraction >= 0.0 && spec.public_fraction <= 1.0)) {
    throw InvalidArgument("make_logistic_split: public_fraction not in [0,1]");
  }
  if (spec.class_ratio.size() != 2 || spec.class_ratio[0] < 0.0 ||
      spec.class_ratio[1] < 0.0 ||
      spec.class_ratio[0] + spec.class_ratio[1] <= 0.0) {
    throw InvalidArgument(
        "make_logistic_split: class_ratio needs two non-negative weights");
  }
  if (!(spec.feature_scale > 0.0)) {
    throw InvalidArgument("make_logistic_split: feature_scale must be > 0");
  }
  const std::size_t n_pub = spec.public_count();
  const std::size_t n_total = spec.n_private + n_pub + spec.n_test;

  RngStream root(spec.seed, "logistic-split");
  RngStream dir_rng = root.child("directions");
  const ParamVector signal = sample_sphere({d, 1.0}, dir_rng);
  const ParamVector shift = sample_sphere({d, 1.0}, dir_rng);

  const bool imbalance = spec.shift == ShiftKind::kClassImbalance;
  const double p_positive_public =
      imbalance ? spec.class_ratio[1] / (spec.class_ratio[0] + spec.class_ratio[1])
                : 0.5;
  const double shift_amount =
      spec.shift == ShiftKind::kMeanShift ? spec.shift_magnitude : 0.0;

  std::vector<double> features(n_total * d);
  std::vector<int> labels(n_total);
  RngStream sample_rng = root.child("samples");
  for (std::size_t i = 0; i < n_total; ++i) {
    const bool is_public = i >= spec.n_private && i < spec.n_private + n_pub;
    RngStream own = sample_rng.child(i);
    const double p = is_public ? p_positive_public : 0.5;
    const int y = own.next_uniform() < p ? 1 : -1;
    labels[i] = y;
    double* row = features.data() + i * d;
    for (std::size_t j = 0; j < d; ++j) {
      double v = 0.5 * spec.class_separation * y * signal[j] +
                 own.next_gaussian();
      if (is_public) v += shift_amount * shift[j];
      row[j] = spec.feature_scale * v;
    }
  }

  DataSplit split;
  for (std::size_t i = 0; i < n_total; ++i) {
    if (i < spec.n_private) {
      split.private_ids.push_back(i);
    } else if (i < spec.n_private + n_pub) {
      split.public_ids.push_back(i);
    } else {
      split.test_ids.push_back(i);
    }
  }

  if (split.public_ids.size() > 1) {
    const int first = labels[split.public_ids.front()];
    const bool single_class = std::all_of(
        split.public_ids.begin(), split.public_ids.end(),
        [&](SampleId id) { return labels[id] == first; });
    const bool requested =
        imbalance && (spec.class_ratio[0] == 0.0 || spec.class_ratio[1] == 0.0);
    if (single_class && !requested) {
      throw InvalidArgument(
          "make_logistic_split: public split is single-class; enlarge "
          "n_public or change the seed");
    }
  }

  return LogisticSplit{
      LogisticProblem(d, std::move(features), std::move(labels), spec.mu_reg),
      std::move(split), signal, shift};
}

// ---------------------------------------------------------------------------
// CSV

CsvDataset read_csv_dataset(std::istream& in, bool has_header) {
  CsvDataset out;
  std::string line;
  std::size_t line_no = 0;
  bool header_pending = has_header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (header_pending) {
      header_pending = false;
      continue;
    }
    if (line.find_first_not_of(" \t") == std::string::npos) continue;

    std::vector<double> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      std::size_t used = 0;
      double v;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        throw DataError("csv line " + std::to_string(line_no) +
                        ": not a number: '" + cell + "'");
      }
      if (cell.find_first_not_of(" \t", used) != std::string::npos) {
        throw DataError("csv line " + std::to_string(line_no) +
                        ": trailing characters in '" + cell + "'");
      }
      if (!std::isfinite(v)) {
        throw DataError("csv line " + std::to_string(line_no) +
                        ": non-finite entry");
      }
      cells.push_back(v);
    }
    if (cells.size() < 2) {
      throw DataError("csv line " + std::to_string(line_no) +
                      ": need at least one feature and a label");
    }
    const std::size_t dim = cells.size() - 1;
    if (out.dim == 0) out.dim = dim;
    if (dim != out.dim) {
      throw DataError("csv line " + std::to_string(line_no) + ": expected " +
                      std::to_string(out.dim + 1) + " columns");
    }
    const double label = cells.back();
    if (label != 0.0 && label != 1.0) {
      throw DataError("csv line " + std::to_string(line_no) +
                      ": label must be 0 or 1");
    }
    out.features.insert(out.features.end(), cells.begin(), cells.end() - 1);
    out.labels.push_back(static_cast<int>(label));
  }
  if (out.labels.empty()) throw DataError("csv: no data rows");
  return out;
}

CsvDataset read_csv_dataset(const std::string& path, bool has_header) {
  std::ifstream in(path);
  if (!in) throw DataError("csv: cannot open " + path);
  return read_csv_dataset(in, has_header);
}

LogisticProblem logistic_from_csv(const CsvDataset& data, double mu_reg) {
  std::vector<int> labels;
  labels.reserve(data.labels.size());
  for (int y : data.labels) labels.push_back(y == 1 ? 1 : -1);
  return LogisticProblem(data.dim, data.features, std::move(labels), mu_reg);
}

}  // namespace pazo
