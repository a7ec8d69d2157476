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
#include <concepts>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "kgmatch/dataset.hpp"

namespace kgmatch {

// Anything that assigns a match score (higher = better) to every candidate
// of a query, in candidate order.
template <typename S>
concept CandidateScorer = requires(const S& s, const MatchQuery& q) {
  { s.score(q) } -> std::convertible_to<std::vector<double>>;
};

struct RankedCandidate {
  std::size_t index;  // position in MatchQuery::candidates
  double score;
};

struct Ranking {
  std::vector<RankedCandidate> order;
  std::size_t positive_rank = 0;  // 1-based
};

inline double reciprocal_rank(std::size_t rank) {
  if (rank < 1) throw std::invalid_argument("rank must be >= 1");
  return 1.0 / static_cast<double>(rank);
}

// Descending by score; equal scores keep the original candidate order.
// NaN scores sort last.
inline Ranking rank_by_scores(const MatchQuery& q, std::span<const double> scores) {
  if (scores.size() != q.candidates.size()) {
    throw std::invalid_argument("score count does not match candidate count");
  }
  Ranking r;
  r.order.reserve(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const double s = std::isnan(scores[i]) ? -std::numeric_limits<double>::infinity() : scores[i];
    r.order.push_back({i, s});
  }
  std::stable_sort(r.order.begin(), r.order.end(),
                   [](const RankedCandidate& a, const RankedCandidate& b) { return a.score > b.score; });
  for (std::size_t i = 0; i < r.order.size(); ++i) {
    if (r.order[i].index == q.positive) r.positive_rank = i + 1;
  }
  return r;
}

template <CandidateScorer S>
Ranking rank_candidates(const S& scorer, const MatchQuery& q) {
  const std::vector<double> scores = scorer.score(q);
  return rank_by_scores(q, scores);
}

template <CandidateScorer S>
double mean_reciprocal_rank(const S& scorer, const MatchDataset& ds) {
  if (ds.empty()) throw std::invalid_argument("mean_reciprocal_rank: empty dataset");
  double sum = 0;
  for (const MatchQuery& q : ds.queries) sum += reciprocal_rank(rank_candidates(scorer, q).positive_rank);
  return sum / static_cast<double>(ds.size());
}

}  // namespace kgmatch
