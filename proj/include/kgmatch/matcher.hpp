// Copyright 2026 The kgmatch Authors.
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

#pragma once

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <istream>
#include <numeric>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "kgmatch/binary_io.hpp"
#include "kgmatch/dataset.hpp"
#include "kgmatch/embedding_table.hpp"
#include "kgmatch/errors.hpp"
#include "kgmatch/random.hpp"
#include "kgmatch/ranking.hpp"

namespace kgmatch {

enum class ModelKind : std::uint8_t { kMlp = 0, kLogReg = 1 };

inline std::string to_string(ModelKind kind) { return kind == ModelKind::kMlp ? "mlp" : "logreg"; }

inline ModelKind parse_model_kind(std::string_view s) {
  if (s == "mlp") return ModelKind::kMlp;
  if (s == "logreg" || s == "lr") return ModelKind::kLogReg;
  throw ConfigError("unknown model kind '" + std::string(s) + "' (expected mlp or logreg)");
}

// [query || candidate], query half first.
inline std::vector<double> featurize(std::span<const float> query, std::span<const float> candidate) {
  if (query.size() != candidate.size()) throw std::invalid_argument("featurize: dimension mismatch");
  std::vector<double> x;
  x.reserve(query.size() * 2);
  x.insert(x.end(), query.begin(), query.end());
  x.insert(x.end(), candidate.begin(), candidate.end());
  return x;
}

// Two-logit match classifier. Parameters live in one flat row-major buffer:
//   MLP:    W1 (h x n), b1 (h), W2 (2 x h), b2 (2)
//   LogReg: w (n), b (1); logits are [0, w.x + b]
// so softmax yields (1 - s(w.x+b), s(w.x+b)) for logistic regression.
class MatcherModel {
 public:
  static MatcherModel mlp(std::size_t input_dim, std::size_t hidden) {
    if (input_dim == 0 || hidden == 0) throw std::invalid_argument("MLP dimensions must be positive");
    return MatcherModel(ModelKind::kMlp, input_dim, hidden);
  }
  static MatcherModel logreg(std::size_t input_dim) {
    if (input_dim == 0) throw std::invalid_argument("input dimension must be positive");
    return MatcherModel(ModelKind::kLogReg, input_dim, 0);
  }

  ModelKind kind() const { return kind_; }
  std::size_t input_dim() const { return input_; }
  std::size_t hidden() const { return hidden_; }
  std::span<double> params() { return params_; }
  std::span<const double> params() const { return params_; }

  std::span<double> w1() { return slice(0, hidden_ * input_); }
  std::span<double> b1() { return slice(hidden_ * input_, hidden_); }
  std::span<double> w2() { return slice(hidden_ * (input_ + 1), 2 * hidden_); }
  std::span<double> b2() { return slice(hidden_ * (input_ + 3), 2); }
  std::span<double> w() { return slice(0, input_); }
  std::span<double> b() { return slice(input_, 1); }

  // Parameter tensors as (name, offset, length), for gradient checks.
  struct Tensor {
    const char* name;
    std::size_t offset;
    std::size_t size;
  };
  std::vector<Tensor> tensors() const {
    if (kind_ == ModelKind::kLogReg) return {{"w", 0, input_}, {"b", input_, 1}};
    return {{"W1", 0, hidden_ * input_},
            {"b1", hidden_ * input_, hidden_},
            {"W2", hidden_ * (input_ + 1), 2 * hidden_},
            {"b2", hidden_ * (input_ + 3), 2}};
  }

  std::array<double, 2> logits(std::span<const double> x, std::vector<double>* hidden_pre = nullptr) const {
    check_input(x);
    if (kind_ == ModelKind::kLogReg) {
      double s = params_[input_];
      for (std::size_t i = 0; i < input_; ++i) s += params_[i] * x[i];
      return {0.0, s};
    }
    const double* W1 = params_.data();
    const double* B1 = W1 + hidden_ * input_;
    const double* W2 = B1 + hidden_;
    const double* B2 = W2 + 2 * hidden_;
    std::array<double, 2> z{B2[0], B2[1]};
    if (hidden_pre) hidden_pre->resize(hidden_);
    for (std::size_t j = 0; j < hidden_; ++j) {
      double a = B1[j];
      const double* row = W1 + j * input_;
      for (std::size_t i = 0; i < input_; ++i) a += row[i] * x[i];
      if (hidden_pre) (*hidden_pre)[j] = a;
      if (a > 0) {
        z[0] += W2[j] * a;
        z[1] += W2[hidden_ + j] * a;
      }
    }
    return z;
  }

  // (p_no_match, p_match) via a max-shifted softmax.
  std::array<double, 2> forward(std::span<const double> x) const { return softmax(logits(x)); }

  static std::array<double, 2> softmax(std::array<double, 2> z) {
    const double m = std::max(z[0], z[1]);
    const double e0 = std::exp(z[0] - m);
    const double e1 = std::exp(z[1] - m);
    return {e0 / (e0 + e1), e1 / (e0 + e1)};
  }

  // Negative log-likelihood of `label` (0 = no match, 1 = match); adds the
  // gradient to `grad` (same layout as params()) when given.
  double loss(std::span<const double> x, int label, std::span<double> grad = {}) const {
    std::vector<double> pre;
    const auto z = logits(x, grad.empty() ? nullptr : &pre);
    const double m = std::max(z[0], z[1]);
    const double lse = m + std::log(std::exp(z[0] - m) + std::exp(z[1] - m));
    const double nll = lse - z[label];
    if (grad.empty()) return nll;

    const auto p = softmax(z);
    const double d0 = p[0] - (label == 0 ? 1.0 : 0.0);
    const double d1 = p[1] - (label == 1 ? 1.0 : 0.0);
    if (kind_ == ModelKind::kLogReg) {
      // Only the second logit depends on the parameters.
      for (std::size_t i = 0; i < input_; ++i) grad[i] += d1 * x[i];
      grad[input_] += d1;
      return nll;
    }
    const double* W2 = params_.data() + hidden_ * (input_ + 1);
    double* gW1 = grad.data();
    double* gB1 = gW1 + hidden_ * input_;
    double* gW2 = gB1 + hidden_;
    double* gB2 = gW2 + 2 * hidden_;
    gB2[0] += d0;
    gB2[1] += d1;
    for (std::size_t j = 0; j < hidden_; ++j) {
      if (pre[j] <= 0) continue;
      gW2[j] += d0 * pre[j];
      gW2[hidden_ + j] += d1 * pre[j];
      const double dz = d0 * W2[j] + d1 * W2[hidden_ + j];
      gB1[j] += dz;
      double* row = gW1 + j * input_;
      for (std::size_t i = 0; i < input_; ++i) row[i] += dz * x[i];
    }
    return nll;
  }

  void xavier_init(Rng& rng) {
    std::fill(params_.begin(), params_.end(), 0.0);
    auto fill = [&](std::span<double> t, std::size_t fan_in, std::size_t fan_out) {
      const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
      for (double& v : t) v = rng.uniform(-limit, limit);
    };
    if (kind_ == ModelKind::kLogReg) {
      fill(w(), input_, 1);
    } else {
      fill(w1(), input_, hidden_);
      fill(w2(), hidden_, 2);
    }
  }

  void save(std::ostream& out, const nlohmann::json& metadata = nlohmann::json::object()) const {
    BinaryWriter wr(out);
    wr.magic("KGMMDL01");
    wr.u8(static_cast<std::uint8_t>(kind_));
    wr.u64(input_);
    wr.u64(hidden_);
    wr.u64(params_.size());
    for (double v : params_) wr.f64(v);
    wr.str(metadata.dump());
    wr.check();
  }

  static MatcherModel load(std::istream& in, nlohmann::json* metadata = nullptr) {
    BinaryReader r(in, "model checkpoint");
    r.expect_magic("KGMMDL01");
    const auto kind = r.u8();
    if (kind > 1) throw DataError("model checkpoint: unknown model kind");
    const auto input = r.count(std::uint64_t{1} << 24);
    const auto hidden = r.count(std::uint64_t{1} << 24);
    if (input == 0 || (kind == 0 && hidden == 0)) throw DataError("model checkpoint: bad dimensions");
    MatcherModel m = kind == 0 ? mlp(input, hidden) : logreg(input);
    if (r.count() != m.params_.size()) throw DataError("model checkpoint: parameter count mismatch");
    for (double& v : m.params_) {
      v = r.f64();
      if (!std::isfinite(v)) throw DataError("model checkpoint: non-finite parameter");
    }
    const std::string meta = r.str();
    if (metadata) *metadata = nlohmann::json::parse(meta);
    return m;
  }

  bool operator==(const MatcherModel&) const = default;

 private:
  MatcherModel(ModelKind kind, std::size_t input, std::size_t hidden)
      : kind_(kind),
        input_(input),
        hidden_(hidden),
        params_(kind == ModelKind::kLogReg ? input + 1 : hidden * (input + 3) + 2, 0.0) {}

  std::span<double> slice(std::size_t offset, std::size_t n) { return std::span(params_).subspan(offset, n); }

  void check_input(std::span<const double> x) const {
    if (x.size() != input_) throw std::invalid_argument("feature length does not match model input");
    for (double v : x) {
      if (!std::isfinite(v)) throw std::invalid_argument("non-finite feature value");
    }
  }

  ModelKind kind_;
  std::size_t input_;
  std::size_t hidden_;
  std::vector<double> params_;
};

// Scores candidates by p_match of a model over frozen embedding tables.
struct ModelScorer {
  const MatcherModel& model;
  const EmbeddingTable& source;
  const EmbeddingTable& target;

  std::vector<double> score(const MatchQuery& q) const {
    const Vector qv = source.get_vector(q.query);
    std::vector<double> scores;
    scores.reserve(q.size());
    for (const auto& c : q.candidates) scores.push_back(model.forward(featurize(qv, target.get_vector(c)))[1]);
    return scores;
  }
};

struct TrainConfig {
  ModelKind kind = ModelKind::kMlp;
  std::size_t hidden = 64;
  double learning_rate = 0.001;
  std::size_t batch_size = 64;
  std::size_t epochs = 20;
  std::size_t patience = 3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t seed = 1;

  void validate() const {
    if (!(learning_rate > 0)) throw ConfigError("learning rate must be > 0");
    if (batch_size < 1) throw ConfigError("batch size must be >= 1");
    if (epochs < 1) throw ConfigError("epochs must be >= 1");
    if (kind == ModelKind::kMlp && hidden < 1) throw ConfigError("hidden size must be >= 1");
  }
};

struct LabeledPair {
  std::string query;
  std::string candidate;
  int label = 0;
};

// One pair per candidate; every negative is kept.
inline std::vector<LabeledPair> expand_pairs(const MatchDataset& ds) {
  std::vector<LabeledPair> pairs;
  for (const MatchQuery& q : ds.queries) {
    for (std::size_t i = 0; i < q.size(); ++i) {
      pairs.push_back({q.query, q.candidates[i], i == q.positive ? 1 : 0});
    }
  }
  return pairs;
}

struct EpochLog {
  std::size_t epoch = 0;
  double mean_nll = 0.0;
  double valid_mrr = 0.0;  // NaN without a validation set
};

struct TrainResult {
  MatcherModel model;
  std::vector<EpochLog> log;
  std::size_t best_epoch = 0;
};

class Adam {
 public:
  Adam(std::size_t n, const TrainConfig& cfg) : cfg_(cfg), m_(n, 0.0), v_(n, 0.0) {}

  void step(std::span<double> params, std::span<const double> grad) {
    ++t_;
    const double c1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
    for (std::size_t i = 0; i < params.size(); ++i) {
      m_[i] = cfg_.beta1 * m_[i] + (1 - cfg_.beta1) * grad[i];
      v_[i] = cfg_.beta2 * v_[i] + (1 - cfg_.beta2) * grad[i] * grad[i];
      params[i] -= cfg_.learning_rate * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + cfg_.epsilon);
    }
  }

 private:
  TrainConfig cfg_;
  std::vector<double> m_;
  std::vector<double> v_;
  std::uint64_t t_ = 0;
};

// Mini-batch Adam on the mean NLL over shuffled pairs. After every epoch the
// validation MRR is measured; the best-scoring parameters are returned and
// training stops after `patience` epochs without improvement.
inline TrainResult train_matcher(std::span<const LabeledPair> pairs, const EmbeddingTable& source,
                                 const EmbeddingTable& target, const TrainConfig& cfg,
                                 const MatchDataset* valid = nullptr) {
  cfg.validate();
  if (pairs.empty()) throw std::invalid_argument("train_matcher: no training pairs");
  if (source.dimension() != target.dimension()) {
    throw std::invalid_argument("source and target embeddings differ in dimension");
  }
  const std::size_t n_in = 2 * source.dimension();
  std::vector<double> features;
  features.reserve(pairs.size() * n_in);
  std::vector<int> labels;
  for (const LabeledPair& p : pairs) {
    const auto x = featurize(source.get_vector(p.query), target.get_vector(p.candidate));
    features.insert(features.end(), x.begin(), x.end());
    labels.push_back(p.label);
  }

  Rng rng(cfg.seed);
  MatcherModel model = cfg.kind == ModelKind::kMlp ? MatcherModel::mlp(n_in, cfg.hidden) : MatcherModel::logreg(n_in);
  model.xavier_init(rng);
  Adam adam(model.params().size(), cfg);
  std::vector<double> grad(model.params().size());
  std::vector<std::size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  const bool use_valid = valid != nullptr && !valid->empty();
  TrainResult result{model, {}, 0};
  double best = -1.0;
  std::size_t stale = 0;
  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    rng.shuffle(order);
    double nll_sum = 0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), start + cfg.batch_size);
      std::fill(grad.begin(), grad.end(), 0.0);
      for (std::size_t k = start; k < end; ++k) {
        const std::size_t i = order[k];
        nll_sum += model.loss(std::span(features).subspan(i * n_in, n_in), labels[i], grad);
      }
      const double scale = 1.0 / static_cast<double>(end - start);
      for (double& g : grad) g *= scale;
      adam.step(model.params(), grad);
    }
    EpochLog entry{epoch, nll_sum / static_cast<double>(pairs.size()), std::nan("")};
    if (use_valid) entry.valid_mrr = mean_reciprocal_rank(ModelScorer{model, source, target}, *valid);
    result.log.push_back(entry);

    const double score = use_valid ? entry.valid_mrr : static_cast<double>(epoch);
    if (score > best) {
      best = score;
      result.model = model;
      result.best_epoch = epoch;
      stale = 0;
    } else if (use_valid && ++stale >= cfg.patience && cfg.patience > 0) {
      break;
    }
  }
  return result;
}

}  // namespace kgmatch
