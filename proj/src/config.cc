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

#include "pazo/config.h"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "pazo/errors.h"
#include "pazo/format.h"
#include "pazo/rng.h"

namespace pazo {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& value, char sep) {
  std::vector<std::string> items;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, sep)) items.push_back(trim(item));
  return items;
}

// Consumes keys as they are read so that leftovers can be reported.
class KeyTable {
 public:
  void add(const std::string& key, const std::string& value, int line) {
    if (entries_.count(key)) {
      throw ConfigError("line " + std::to_string(line) + ": duplicate key '" +
                        key + "'");
    }
    entries_[key] = value;
  }

  std::optional<std::string> take(const std::string& key) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    std::string value = it->second;
    entries_.erase(it);
    return value;
  }

  void reject_leftovers(const std::string& context) const {
    if (entries_.empty()) return;
    std::string msg = "unknown keys";
    if (!context.empty()) msg += " for " + context;
    msg += ":";
    for (const auto& [key, value] : entries_) msg += " " + key;
    throw ConfigError(msg);
  }

 private:
  std::map<std::string, std::string> entries_;
};

double to_double(const std::string& key, const std::string& value) {
  if (value == "inf") return std::numeric_limits<double>::infinity();
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (value.empty() || end != value.c_str() + value.size() || errno != 0 ||
      std::isnan(v)) {
    throw ConfigError(key + ": expected a number, got '" + value + "'");
  }
  return v;
}

std::uint64_t to_u64(const std::string& key, const std::string& value) {
  if (value.empty() || value.find_first_not_of("0123456789") !=
                           std::string::npos) {
    throw ConfigError(key + ": expected a non-negative integer, got '" +
                      value + "'");
  }
  errno = 0;
  const unsigned long long v = std::strtoull(value.c_str(), nullptr, 10);
  if (errno != 0) throw ConfigError(key + ": integer out of range");
  return v;
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError(key + ": expected true or false, got '" + value + "'");
}

void read(KeyTable& keys, const std::string& key, double& out) {
  if (auto v = keys.take(key)) out = to_double(key, *v);
}

void read(KeyTable& keys, const std::string& key, std::size_t& out) {
  if (auto v = keys.take(key)) out = static_cast<std::size_t>(to_u64(key, *v));
}

void read(KeyTable& keys, const std::string& key, bool& out) {
  if (auto v = keys.take(key)) out = to_bool(key, *v);
}

void read(KeyTable& keys, const std::string& key, DirectionKind& out) {
  auto v = keys.take(key);
  if (!v) return;
  if (*v == "sphere") {
    out = DirectionKind::kSphere;
  } else if (*v == "gaussian") {
    out = DirectionKind::kGaussian;
  } else {
    throw ConfigError(key + ": expected sphere or gaussian, got '" + *v + "'");
  }
}

void require(bool ok, const std::string& key, const std::string& bound) {
  if (!ok) throw ConfigError(key + " out of range: must be " + bound);
}

void require_positive(const std::string& key, double v) {
  require(v > 0.0 && std::isfinite(v), key, "finite and > 0");
}

void require_at_least_one(const std::string& key, std::size_t v) {
  require(v >= 1, key, ">= 1");
}

ZoConfig read_zo(KeyTable& keys) {
  ZoConfig zo;
  read(keys, "algorithm.eta", zo.eta);
  read(keys, "algorithm.q", zo.q);
  read(keys, "algorithm.lambda", zo.lambda);
  if (auto v = keys.take("algorithm.radius")) {
    zo.radius = to_double("algorithm.radius", *v);
    require_positive("algorithm.radius", *zo.radius);
  }
  read(keys, "algorithm.direction", zo.direction);
  require_positive("algorithm.eta", zo.eta);
  require_at_least_one("algorithm.q", zo.q);
  require_positive("algorithm.lambda", zo.lambda);
  return zo;
}

AlgorithmConfig read_algorithm(KeyTable& keys, const std::string& name) {
  if (name == "sgd" || name == "dpsgd") {
    double eta = 0.1;
    read(keys, "algorithm.eta", eta);
    require_positive("algorithm.eta", eta);
    if (name == "sgd") return SgdConfig{eta};
    return DpSgdConfig{eta};
  }
  if (name == "mezo") return MezoConfig{read_zo(keys)};
  if (name == "dpzero") return DpZeroConfig{read_zo(keys)};
  if (name == "pazo-m") {
    PazoMConfig c;
    read(keys, "algorithm.eta", c.eta);
    read(keys, "algorithm.alpha", c.alpha);
    read(keys, "algorithm.q", c.q);
    read(keys, "algorithm.lambda", c.lambda);
    read(keys, "algorithm.public_batch", c.public_batch);
    read(keys, "algorithm.direction", c.direction);
    require_positive("algorithm.eta", c.eta);
    require(c.alpha >= 0.0 && c.alpha <= 1.0, "algorithm.alpha", "in [0, 1]");
    require_at_least_one("algorithm.q", c.q);
    require_positive("algorithm.lambda", c.lambda);
    require_at_least_one("algorithm.public_batch", c.public_batch);
    return c;
  }
  if (name == "pazo-p" || name == "pazo-pprime") {
    PazoPConfig c;
    c.orthonormalize = name == "pazo-p";
    read(keys, "algorithm.eta", c.eta);
    read(keys, "algorithm.k", c.k);
    read(keys, "algorithm.q", c.q);
    read(keys, "algorithm.lambda", c.lambda);
    read(keys, "algorithm.public_batch", c.public_batch);
    require_positive("algorithm.eta", c.eta);
    require_at_least_one("algorithm.k", c.k);
    require_at_least_one("algorithm.q", c.q);
    require_positive("algorithm.lambda", c.lambda);
    require_at_least_one("algorithm.public_batch", c.public_batch);
    return c;
  }
  if (name == "pazo-s") {
    PazoSConfig c;
    read(keys, "algorithm.eta", c.eta);
    read(keys, "algorithm.k", c.k);
    read(keys, "algorithm.public_batch", c.public_batch);
    read(keys, "algorithm.perturb_scale", c.perturb_scale);
    require_positive("algorithm.eta", c.eta);
    require_at_least_one("algorithm.k", c.k);
    require_at_least_one("algorithm.public_batch", c.public_batch);
    require(c.perturb_scale >= 0.0 && std::isfinite(c.perturb_scale),
            "algorithm.perturb_scale", "finite and >= 0");
    return c;
  }
  throw ConfigError(
      "algorithm.name: unknown algorithm '" + name +
      "' (expected sgd, mezo, dpsgd, dpzero, pazo-m, pazo-p, pazo-pprime, "
      "pazo-s)");
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string direction_name(DirectionKind kind) {
  return kind == DirectionKind::kSphere ? "sphere" : "gaussian";
}

std::string shift_name(ShiftKind kind) {
  switch (kind) {
    case ShiftKind::kNone:
      return "none";
    case ShiftKind::kClassImbalance:
      return "class_imbalance";
    case ShiftKind::kMeanShift:
      return "mean_shift";
  }
  return "none";
}

std::string kind_name(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::kLogistic:
      return "logistic";
    case ProblemKind::kQuadratic:
      return "quadratic";
    case ProblemKind::kCsv:
      return "csv";
  }
  return "logistic";
}

template <class T, class F>
std::string join(const std::vector<T>& items, F&& fmt, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += fmt(items[i]);
  }
  return out;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  KeyTable keys;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos
                                      ? raw
                                      : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) +
                        ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) {
      throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    }
    keys.add(key, trim(line.substr(eq + 1)), line_no);
  }

  ExperimentConfig c;

  // problem
  if (auto v = keys.take("problem.kind")) {
    if (*v == "logistic") {
      c.problem.kind = ProblemKind::kLogistic;
    } else if (*v == "quadratic") {
      c.problem.kind = ProblemKind::kQuadratic;
    } else if (*v == "csv") {
      c.problem.kind = ProblemKind::kCsv;
    } else {
      throw ConfigError("problem.kind: expected logistic, quadratic or csv, "
                        "got '" + *v + "'");
    }
  }
  read(keys, "problem.mu_reg", c.problem.mu_reg);
  require(c.problem.mu_reg >= 0.0 && std::isfinite(c.problem.mu_reg),
          "problem.mu_reg", "finite and >= 0");
  if (c.problem.kind != ProblemKind::kCsv) {
    read(keys, "problem.dim", c.problem.dim);
    require_at_least_one("problem.dim", c.problem.dim);
  }
  if (c.problem.kind == ProblemKind::kQuadratic) {
    read(keys, "problem.mu", c.problem.mu);
    read(keys, "problem.L", c.problem.L);
    read(keys, "problem.center_spread", c.problem.center_spread);
    require_positive("problem.mu", c.problem.mu);
    require(c.problem.L >= c.problem.mu && std::isfinite(c.problem.L),
            "problem.L", ">= problem.mu");
    require(c.problem.center_spread >= 0.0, "problem.center_spread", ">= 0");
  }
  if (c.problem.kind == ProblemKind::kCsv) {
    auto path = keys.take("problem.csv_path");
    if (!path || path->empty()) {
      throw ConfigError("problem.csv_path is required for problem.kind = csv");
    }
    c.problem.csv_path = *path;
    read(keys, "problem.csv_header", c.problem.csv_header);
  }

  // split
  read(keys, "split.n_private", c.split.n_private);
  require_at_least_one("split.n_private", c.split.n_private);
  if (auto v = keys.take("split.n_public")) {
    c.split.n_public = static_cast<std::size_t>(to_u64("split.n_public", *v));
  }
  read(keys, "split.public_fraction", c.split.public_fraction);
  require(c.split.public_fraction >= 0.0 && c.split.public_fraction <= 1.0,
          "split.public_fraction", "in [0, 1]");
  read(keys, "split.n_test", c.split.n_test);
  read(keys, "split.seed", c.split.seed);
  if (c.problem.kind == ProblemKind::kLogistic) {
    if (auto v = keys.take("split.shift")) {
      if (*v == "none") {
        c.split.shift = ShiftKind::kNone;
      } else if (*v == "class_imbalance") {
        c.split.shift = ShiftKind::kClassImbalance;
      } else if (*v == "mean_shift") {
        c.split.shift = ShiftKind::kMeanShift;
      } else {
        throw ConfigError("split.shift: expected none, class_imbalance or "
                          "mean_shift, got '" + *v + "'");
      }
    }
    read(keys, "split.shift_magnitude", c.split.shift_magnitude);
    require(c.split.shift_magnitude >= 0.0 &&
                std::isfinite(c.split.shift_magnitude),
            "split.shift_magnitude", "finite and >= 0");
    if (auto v = keys.take("split.class_ratio")) {
      const auto parts = split_list(*v, ':');
      if (parts.size() != 2) {
        throw ConfigError("split.class_ratio: expected 'a:b', got '" + *v +
                          "'");
      }
      c.split.class_ratio = {to_double("split.class_ratio", parts[0]),
                             to_double("split.class_ratio", parts[1])};
      require(c.split.class_ratio[0] >= 0 && c.split.class_ratio[1] >= 0 &&
                  c.split.class_ratio[0] + c.split.class_ratio[1] > 0 &&
                  std::isfinite(c.split.class_ratio[0]) &&
                  std::isfinite(c.split.class_ratio[1]),
              "split.class_ratio", "two finite weights >= 0, not both zero");
    }
    read(keys, "split.class_separation", c.split.class_separation);
    read(keys, "split.feature_scale", c.split.feature_scale);
    require(c.split.class_separation >= 0.0 &&
                std::isfinite(c.split.class_separation),
            "split.class_separation", "finite and >= 0");
    require_positive("split.feature_scale", c.split.feature_scale);
  }
  c.split.mu_reg = c.problem.mu_reg;

  // algorithm
  auto name = keys.take("algorithm.name");
  if (!name) throw ConfigError("algorithm.name is required");
  c.algorithm = read_algorithm(keys, *name);

  // privacy
  const bool priv = is_private(c.algorithm);
  if (priv) {
    if (auto v = keys.take("privacy.epsilon")) {
      c.epsilons.clear();
      for (const auto& item : split_list(*v, ',')) {
        const double eps = to_double("privacy.epsilon", item);
        require(eps > 0.0 && std::isfinite(eps), "privacy.epsilon",
                "finite and > 0");
        c.epsilons.push_back(eps);
      }
      if (c.epsilons.empty()) {
        throw ConfigError("privacy.epsilon: list is empty");
      }
    }
    if (auto v = keys.take("privacy.delta")) {
      c.delta = to_double("privacy.delta", *v);
      require(c.delta > 0.0 && c.delta < 1.0, "privacy.delta", "in (0, 1)");
    } else {
      c.delta = 1.0 / static_cast<double>(c.split.n_private);
    }
    read(keys, "privacy.clip", c.clip_C);
    require_positive("privacy.clip", c.clip_C);
  } else {
    c.epsilons.clear();
    c.delta = 0.0;
    c.clip_C = std::numeric_limits<double>::infinity();
  }
  read(keys, "privacy.batch", c.batch_b);
  require_at_least_one("privacy.batch", c.batch_b);
  require(c.batch_b <= c.split.n_private, "privacy.batch",
          "<= split.n_private");
  if (auto v = keys.take("privacy.sampling")) {
    if (*v == "poisson") {
      c.sampling = BatchSampling::kPoisson;
    } else if (*v == "shuffle") {
      c.sampling = BatchSampling::kShuffle;
    } else {
      throw ConfigError("privacy.sampling: expected poisson or shuffle, got '" +
                        *v + "'");
    }
  }

  // train
  read(keys, "train.T", c.T);
  require_at_least_one("train.T", c.T);
  read(keys, "train.eval_every", c.eval_every);
  require_at_least_one("train.eval_every", c.eval_every);
  if (auto v = keys.take("train.seeds")) {
    c.seeds.clear();
    for (const auto& item : split_list(*v, ',')) {
      c.seeds.push_back(to_u64("train.seeds", item));
    }
    if (c.seeds.empty()) throw ConfigError("train.seeds: list is empty");
  }
  read(keys, "train.record_parameters", c.record_parameters);

  if (auto v = keys.take("output.dir")) {
    if (v->empty()) throw ConfigError("output.dir: empty path");
    c.output_dir = *v;
  }

  keys.reject_leftovers("algorithm '" + *name + "' on problem '" +
                        kind_name(c.problem.kind) + "'");
  return c;
}

ExperimentConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str());
}

std::string serialize_config(const ExperimentConfig& c) {
  std::ostringstream out;
  auto kv = [&](const std::string& key, const std::string& value) {
    out << key << " = " << value << "\n";
  };
  auto num = [](double v) { return format_double(v); };
  auto uint = [](std::uint64_t v) { return std::to_string(v); };
  auto boolean = [](bool v) { return std::string(v ? "true" : "false"); };

  kv("problem.kind", kind_name(c.problem.kind));
  kv("problem.mu_reg", num(c.problem.mu_reg));
  if (c.problem.kind != ProblemKind::kCsv) kv("problem.dim", uint(c.problem.dim));
  if (c.problem.kind == ProblemKind::kQuadratic) {
    kv("problem.mu", num(c.problem.mu));
    kv("problem.L", num(c.problem.L));
    kv("problem.center_spread", num(c.problem.center_spread));
  }
  if (c.problem.kind == ProblemKind::kCsv) {
    kv("problem.csv_path", c.problem.csv_path);
    kv("problem.csv_header", boolean(c.problem.csv_header));
  }

  kv("split.n_private", uint(c.split.n_private));
  if (c.split.n_public) kv("split.n_public", uint(*c.split.n_public));
  kv("split.public_fraction", num(c.split.public_fraction));
  kv("split.n_test", uint(c.split.n_test));
  kv("split.seed", uint(c.split.seed));
  if (c.problem.kind == ProblemKind::kLogistic) {
    kv("split.shift", shift_name(c.split.shift));
    kv("split.shift_magnitude", num(c.split.shift_magnitude));
    kv("split.class_ratio",
       num(c.split.class_ratio.at(0)) + ":" + num(c.split.class_ratio.at(1)));
    kv("split.class_separation", num(c.split.class_separation));
    kv("split.feature_scale", num(c.split.feature_scale));
  }

  kv("algorithm.name", algorithm_name(c.algorithm));
  auto zo = [&](const ZoConfig& z) {
    kv("algorithm.eta", num(z.eta));
    kv("algorithm.q", uint(z.q));
    kv("algorithm.lambda", num(z.lambda));
    if (z.radius) kv("algorithm.radius", num(*z.radius));
    kv("algorithm.direction", direction_name(z.direction));
  };
  std::visit(Overloaded{
                 [&](const SgdConfig& a) { kv("algorithm.eta", num(a.eta)); },
                 [&](const DpSgdConfig& a) { kv("algorithm.eta", num(a.eta)); },
                 [&](const MezoConfig& a) { zo(a.zo); },
                 [&](const DpZeroConfig& a) { zo(a.zo); },
                 [&](const PazoMConfig& a) {
                   kv("algorithm.eta", num(a.eta));
                   kv("algorithm.alpha", num(a.alpha));
                   kv("algorithm.q", uint(a.q));
                   kv("algorithm.lambda", num(a.lambda));
                   kv("algorithm.public_batch", uint(a.public_batch));
                   kv("algorithm.direction", direction_name(a.direction));
                 },
                 [&](const PazoPConfig& a) {
                   kv("algorithm.eta", num(a.eta));
                   kv("algorithm.k", uint(a.k));
                   kv("algorithm.q", uint(a.q));
                   kv("algorithm.lambda", num(a.lambda));
                   kv("algorithm.public_batch", uint(a.public_batch));
                 },
                 [&](const PazoSConfig& a) {
                   kv("algorithm.eta", num(a.eta));
                   kv("algorithm.k", uint(a.k));
                   kv("algorithm.public_batch", uint(a.public_batch));
                   kv("algorithm.perturb_scale", num(a.perturb_scale));
                 },
             },
             c.algorithm);

  if (is_private(c.algorithm)) {
    kv("privacy.epsilon", join(c.epsilons, num, ", "));
    kv("privacy.delta", num(c.delta));
    kv("privacy.clip", num(c.clip_C));
  }
  kv("privacy.batch", uint(c.batch_b));
  kv("privacy.sampling",
     c.sampling == BatchSampling::kPoisson ? "poisson" : "shuffle");

  kv("train.T", uint(c.T));
  kv("train.eval_every", uint(c.eval_every));
  kv("train.seeds", join(c.seeds, uint, ", "));
  kv("train.record_parameters", boolean(c.record_parameters));
  kv("output.dir", c.output_dir);
  return out.str();
}

void apply_env_overrides(ExperimentConfig& config) {
  const char* seed = std::getenv("PAZO_SEED");
  if (seed == nullptr) return;
  config.seeds = {to_u64("PAZO_SEED", trim(seed))};
}

BuiltProblem build_problem(const ExperimentConfig& config,
                           std::uint64_t run_seed) {
  const std::uint64_t data_seed = config.split.seed + run_seed;
  BuiltProblem built;
  switch (config.problem.kind) {
    case ProblemKind::kLogistic: {
      SplitSpec spec = config.split;
      spec.seed = data_seed;
      spec.mu_reg = config.problem.mu_reg;
      LogisticSplit made = make_logistic_split(config.problem.dim, spec);
      built.problem =
          std::make_unique<LogisticProblem>(std::move(made.problem));
      built.split = std::move(made.split);
      return built;
    }
    case ProblemKind::kQuadratic: {
      const std::size_t n_public = config.split.public_count();
      const std::size_t n = config.split.n_private + n_public +
                            config.split.n_test;
      built.problem = std::make_unique<QuadraticProblem>(make_quadratic(
          config.problem.dim, config.problem.mu, config.problem.L, n,
          config.problem.center_spread, data_seed));
      std::size_t id = 0;
      for (std::size_t i = 0; i < config.split.n_private; ++i) {
        built.split.private_ids.push_back(id++);
      }
      for (std::size_t i = 0; i < n_public; ++i) {
        built.split.public_ids.push_back(id++);
      }
      for (std::size_t i = 0; i < config.split.n_test; ++i) {
        built.split.test_ids.push_back(id++);
      }
      return built;
    }
    case ProblemKind::kCsv: {
      const CsvDataset data =
          read_csv_dataset(config.problem.csv_path, config.problem.csv_header);
      const std::size_t rows = data.labels.size();
      std::vector<SampleId> order(rows);
      for (std::size_t i = 0; i < rows; ++i) order[i] = i;
      RngStream rng(data_seed, "csv-split");
      for (std::size_t i = rows; i > 1; --i) {
        std::swap(order[i - 1], order[rng.next_below(i)]);
      }
      const std::size_t n_test = std::min(config.split.n_test, rows);
      const std::size_t rest = rows - n_test;
      std::size_t n_public = config.split.n_public.value_or(
          static_cast<std::size_t>(std::llround(
              config.split.public_fraction * static_cast<double>(rest))));
      n_public = std::min(n_public, rest);
      if (rest - n_public == 0) {
        throw DataError("csv dataset '" + config.problem.csv_path +
                        "' leaves no private rows after the split");
      }
      built.split.test_ids.assign(order.begin(), order.begin() + n_test);
      built.split.public_ids.assign(order.begin() + n_test,
                                    order.begin() + n_test + n_public);
      built.split.private_ids.assign(order.begin() + n_test + n_public,
                                     order.end());
      built.problem = std::make_unique<LogisticProblem>(
          logistic_from_csv(data, config.problem.mu_reg));
      return built;
    }
  }
  throw ConfigError("unsupported problem kind");
}

PrivacySpec privacy_spec_for(const ExperimentConfig& config, double epsilon) {
  PrivacySpec spec;
  spec.epsilon = epsilon;
  spec.delta = config.delta;
  spec.clip_C = config.clip_C;
  spec.batch_b = config.batch_b;
  spec.dataset_n = config.split.n_private;
  spec.rounds_T = config.T;
  spec.queries_q = queries_per_iteration(config.algorithm);
  return spec;
}

}  // namespace pazo
