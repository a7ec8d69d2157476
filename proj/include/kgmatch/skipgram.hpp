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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "kgmatch/embedding_table.hpp"
#include "kgmatch/errors.hpp"
#include "kgmatch/random.hpp"
#include "kgmatch/walks.hpp"

namespace kgmatch {

struct SkipgramConfig {
  std::size_t dim = 32;
  std::size_t window = 5;
  std::size_t negatives = 5;
  std::size_t epochs = 5;
  double learning_rate = 0.025;  // decays linearly towards zero
  double subsample = 0.0;        // 0 disables frequent-token subsampling
  std::uint64_t seed = 1;

  void validate() const {
    if (dim < 1) throw ConfigError("embedding dimension must be >= 1");
    if (window < 1) throw ConfigError("window must be >= 1");
    if (negatives < 1) throw ConfigError("negatives must be >= 1");
    if (epochs < 1) throw ConfigError("epochs must be >= 1");
    if (!(learning_rate > 0)) throw ConfigError("learning rate must be > 0");
    if (subsample < 0) throw ConfigError("subsample threshold must be >= 0");
  }
};

template <typename T>
T log_sigmoid(T z) {
  return -(std::max(-z, T(0)) + std::log1p(std::exp(-std::abs(z))));
}

template <typename T>
T sigmoid(T z) {
  if (z >= 0) return T(1) / (T(1) + std::exp(-z));
  const T e = std::exp(z);
  return e / (T(1) + e);
}

template <typename T>
T dot(std::span<const T> a, std::span<const T> b) {
  T s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Negative-sampling objective for one (center, context) pair, to minimise:
//   -log s(c.x) - sum_n log s(-c.n)
template <typename T>
T sgns_pair_loss(std::span<const T> center, std::span<const T> context,
                 std::span<const std::span<const T>> negatives) {
  T loss = -log_sigmoid(dot(center, context));
  for (auto neg : negatives) loss -= log_sigmoid(-dot(center, neg));
  return loss;
}

// Gradient of sgns_pair_loss. Outputs are overwritten.
template <typename T>
void sgns_pair_gradient(std::span<const T> center, std::span<const T> context,
                        std::span<const std::span<const T>> negatives, std::span<T> d_center,
                        std::span<T> d_context, std::span<const std::span<T>> d_negatives) {
  const std::size_t d = center.size();
  const T g_pos = sigmoid(dot(center, context)) - T(1);
  for (std::size_t i = 0; i < d; ++i) {
    d_center[i] = g_pos * context[i];
    d_context[i] = g_pos * center[i];
  }
  for (std::size_t k = 0; k < negatives.size(); ++k) {
    const T g_neg = sigmoid(dot(center, negatives[k]));
    for (std::size_t i = 0; i < d; ++i) {
      d_center[i] += g_neg * negatives[k][i];
      d_negatives[k][i] = g_neg * center[i];
    }
  }
}

struct SkipgramResult {
  EmbeddingTable table;
  std::vector<double> epoch_loss;  // mean pair objective per epoch
};

namespace detail {

// Cumulative unigram^0.75 distribution over tokens that occur in the corpus.
class NegativeSampler {
 public:
  explicit NegativeSampler(const std::vector<std::uint64_t>& counts) {
    double total = 0;
    for (std::uint32_t t = 0; t < counts.size(); ++t) {
      if (counts[t] == 0) continue;
      total += std::pow(static_cast<double>(counts[t]), 0.75);
      tokens_.push_back(t);
      cumulative_.push_back(total);
    }
    for (double& c : cumulative_) c /= total;
    cumulative_.back() = 1.0;
  }
  std::uint32_t sample(Rng& rng) const {
    const double u = rng.uniform();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    return tokens_[static_cast<std::size_t>(it - cumulative_.begin())];
  }

 private:
  std::vector<std::uint32_t> tokens_;
  std::vector<double> cumulative_;
};

}  // namespace detail

// Skip-gram with negative sampling over the walk corpus. Single-threaded and
// fully deterministic in (corpus, cfg). Returns the input-vector table for
// every token that occurs in the corpus.
inline SkipgramResult train_skipgram(const WalkCorpus& corpus, const SkipgramConfig& cfg) {
  cfg.validate();
  if (corpus.tokens.empty()) throw std::invalid_argument("train_skipgram: empty corpus");

  const std::size_t vocab = corpus.vocabulary.size();
  const std::size_t d = cfg.dim;
  std::vector<std::uint64_t> counts(vocab, 0);
  for (std::uint32_t t : corpus.tokens) ++counts.at(t);
  const detail::NegativeSampler sampler(counts);

  Rng rng(cfg.seed);
  std::vector<float> in(vocab * d);
  std::vector<float> out(vocab * d, 0.0f);
  for (float& x : in) x = static_cast<float>((rng.uniform() - 0.5) / static_cast<double>(d));

  std::vector<double> keep(vocab, 1.0);
  if (cfg.subsample > 0) {
    const double threshold = cfg.subsample * static_cast<double>(corpus.tokens.size());
    for (std::size_t t = 0; t < vocab; ++t) {
      if (counts[t] == 0) continue;
      const double f = static_cast<double>(counts[t]);
      keep[t] = std::min(1.0, (std::sqrt(f / threshold) + 1.0) * threshold / f);
    }
  }

  auto in_row = [&](std::uint32_t t) { return std::span<float>(in).subspan(std::size_t{t} * d, d); };
  auto out_row = [&](std::uint32_t t) { return std::span<float>(out).subspan(std::size_t{t} * d, d); };

  std::vector<float> grad_center(d);
  std::vector<float> grad_context(d);
  std::vector<float> grad_neg_storage(cfg.negatives * d);
  std::vector<std::uint32_t> neg_ids;
  std::vector<std::span<const float>> neg_views;
  std::vector<std::span<float>> neg_grads;
  std::vector<std::uint32_t> sentence;

  std::vector<std::size_t> order(corpus.walk_count());
  std::iota(order.begin(), order.end(), std::size_t{0});

  const double total_steps = static_cast<double>(cfg.epochs) * static_cast<double>(corpus.tokens.size());
  double processed = 0;
  SkipgramResult result{EmbeddingTable(d), {}};

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(order);
    double loss_sum = 0;
    std::uint64_t pairs = 0;
    for (std::size_t w : order) {
      const auto walk = corpus.walk(w);
      processed += static_cast<double>(walk.size());
      const float lr = static_cast<float>(cfg.learning_rate * std::max(1e-4, 1.0 - processed / total_steps));
      sentence.clear();
      for (std::uint32_t t : walk) {
        if (keep[t] >= 1.0 || rng.uniform() < keep[t]) sentence.push_back(t);
      }
      for (std::size_t i = 0; i < sentence.size(); ++i) {
        const std::size_t reach = cfg.window - rng.below(cfg.window);
        const std::size_t lo = i >= reach ? i - reach : 0;
        const std::size_t hi = std::min(sentence.size() - 1, i + reach);
        const std::uint32_t center = sentence[i];
        for (std::size_t j = lo; j <= hi; ++j) {
          if (j == i) continue;
          const std::uint32_t context = sentence[j];
          neg_ids.clear();
          for (std::size_t k = 0; k < cfg.negatives; ++k) {
            const std::uint32_t n = sampler.sample(rng);
            if (n != context) neg_ids.push_back(n);
          }
          neg_views.clear();
          neg_grads.clear();
          for (std::size_t k = 0; k < neg_ids.size(); ++k) {
            neg_views.push_back(out_row(neg_ids[k]));
            neg_grads.push_back(std::span<float>(grad_neg_storage).subspan(k * d, d));
          }
          const std::span<const float> c = in_row(center);
          const std::span<const float> x = out_row(context);
          loss_sum += sgns_pair_loss<float>(c, x, neg_views);
          sgns_pair_gradient<float>(c, x, neg_views, grad_center, grad_context, neg_grads);
          ++pairs;
          auto apply = [&](std::span<float> dst, std::span<const float> grad) {
            for (std::size_t q = 0; q < d; ++q) dst[q] -= lr * grad[q];
          };
          apply(out_row(context), grad_context);
          for (std::size_t k = 0; k < neg_ids.size(); ++k) apply(out_row(neg_ids[k]), neg_grads[k]);
          apply(in_row(center), grad_center);
        }
      }
    }
    result.epoch_loss.push_back(pairs > 0 ? loss_sum / static_cast<double>(pairs) : 0.0);
  }

  for (std::uint32_t t = 0; t < vocab; ++t) {
    if (counts[t] > 0) result.table.add(corpus.vocabulary[t], in_row(t));
  }
  return result;
}

}  // namespace kgmatch
