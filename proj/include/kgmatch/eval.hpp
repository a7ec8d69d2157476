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
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "kgmatch/dataset.hpp"
#include "kgmatch/random.hpp"
#include "kgmatch/ranking.hpp"

namespace kgmatch {

// Debug scorer that knows the ground truth.
struct OracleScorer {
  std::vector<double> score(const MatchQuery& q) const {
    std::vector<double> s(q.size(), 0.0);
    s[q.positive] = 1.0;
    return s;
  }
};

// Uniform scores hashed from (seed, query, candidate); stands in for a model
// that guesses at random but is reproducible.
struct RandomScorer {
  std::uint64_t seed = 0;

  std::vector<double> score(const MatchQuery& q) const {
    std::vector<double> s;
    s.reserve(q.size());
    const std::uint64_t qh = derive_seed(seed, fnv1a64(q.query));
    for (const auto& c : q.candidates) {
      s.push_back(static_cast<double>(derive_seed(qh, fnv1a64(c)) >> 11) * 0x1.0p-53);
    }
    return s;
  }
};

inline double harmonic(std::size_t n) {
  double h = 0;
  for (std::size_t k = 1; k <= n; ++k) h += 1.0 / static_cast<double>(k);
  return h;
}

// Expected MRR of a uniformly random ranking: mean over queries of H(n)/n.
inline double random_baseline_mrr_analytic(const MatchDataset& ds) {
  if (ds.empty()) throw std::invalid_argument("random baseline: empty dataset");
  double sum = 0;
  for (const MatchQuery& q : ds.queries) sum += harmonic(q.size()) / static_cast<double>(q.size());
  return sum / static_cast<double>(ds.size());
}

// Average reciprocal rank of the positive over `trials` uniformly shuffled
// candidate orders per query.
inline double random_baseline_mrr_monte_carlo(const MatchDataset& ds, std::size_t trials,
                                              std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("random baseline: trials must be >= 1");
  if (ds.empty()) throw std::invalid_argument("random baseline: empty dataset");
  Rng rng(seed);
  double sum = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    for (const MatchQuery& q : ds.queries) sum += 1.0 / static_cast<double>(rng.below(q.size()) + 1);
  }
  return sum / (static_cast<double>(trials) * static_cast<double>(ds.size()));
}

struct Summary {
  double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
};

// Linear-interpolation quantiles of `values` (sorted in place).
inline Summary summarize(std::vector<double> values) {
  Summary s;
  if (values.empty()) return s;
  std::sort(values.begin(), values.end());
  auto quantile = [&](double p) {
    const double pos = p * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(values.size() - 1, lo + 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
  };
  s.min = values.front();
  s.q1 = quantile(0.25);
  s.median = quantile(0.5);
  s.q3 = quantile(0.75);
  s.max = values.back();
  return s;
}

struct BucketRow {
  std::size_t lo = 0;
  std::size_t hi = 0;  // exclusive; 0 means unbounded
  std::size_t queries = 0;
  double mrr = 0.0;    // NaN when empty
  Summary rr;
};

struct TypeRow {
  std::string type;
  std::size_t queries = 0;
  double mrr = 0.0;
  double mean_candidates = 0.0;
};

struct Rank2SameType {
  std::optional<double> fraction;
  std::size_t cases = 0;
};

struct EvalOptions {
  const TypeMap* query_types = nullptr;      // for the per-type table
  const TypeMap* candidate_types = nullptr;  // for the rank-2 analysis
  std::vector<std::size_t> bucket_edges;     // empty: powers of two from 2
  unsigned threads = 1;
};

struct EvalReport {
  double mrr = 0.0;
  std::size_t queries = 0;
  std::map<std::size_t, std::size_t> rank_histogram;
  std::vector<BucketRow> buckets;
  std::vector<TypeRow> per_type;
  bool types_disjoint = true;
  std::optional<Rank2SameType> rank2;
  double random_baseline = 0.0;
  nlohmann::json metadata = nlohmann::json::object();
};

template <CandidateScorer S>
std::vector<Ranking> rank_all(const S& scorer, const MatchDataset& ds, unsigned threads = 1) {
  std::vector<Ranking> out(ds.size());
  const auto n = ds.size();
  threads = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(std::max<std::size_t>(1, n)));
  auto work = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) out[i] = rank_candidates(scorer, ds.queries[i]);
  };
  if (threads == 1) {
    work(0, n);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, n * t / threads, n * (t + 1) / threads);
    for (auto& th : pool) th.join();
  }
  return out;
}

inline std::vector<std::size_t> default_bucket_edges(const MatchDataset& ds) {
  std::size_t max_n = 2;
  for (const auto& q : ds.queries) max_n = std::max(max_n, q.size());
  std::vector<std::size_t> edges;
  for (std::size_t e = 2; e <= max_n; e *= 2) edges.push_back(e);
  return edges;
}

// Buckets [e_i, e_{i+1}) plus an open last bucket [e_last, inf). Queries
// below the first edge go to a leading [0, e_0) bucket, emitted only when
// populated.
inline std::vector<BucketRow> bucket_table(const MatchDataset& ds, std::span<const Ranking> ranks,
                                           std::vector<std::size_t> edges) {
  if (edges.empty()) edges = default_bucket_edges(ds);
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (edges[i] <= edges[i - 1]) throw std::invalid_argument("bucket edges must be strictly increasing");
  }
  std::vector<BucketRow> rows;
  rows.push_back({0, edges.front(), 0, 0.0, {}});
  for (std::size_t i = 0; i < edges.size(); ++i) {
    rows.push_back({edges[i], i + 1 < edges.size() ? edges[i + 1] : 0, 0, 0.0, {}});
  }
  std::vector<std::vector<double>> values(rows.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const std::size_t n = ds.queries[i].size();
    const auto b = static_cast<std::size_t>(std::upper_bound(edges.begin(), edges.end(), n) - edges.begin());
    values[b].push_back(reciprocal_rank(ranks[i].positive_rank));
  }
  for (std::size_t b = 0; b < rows.size(); ++b) {
    rows[b].queries = values[b].size();
    if (values[b].empty()) {
      rows[b].mrr = std::nan("");
      continue;
    }
    double sum = 0;
    for (double v : values[b]) sum += v;
    rows[b].mrr = sum / static_cast<double>(values[b].size());
    rows[b].rr = summarize(values[b]);
  }
  if (rows.front().queries == 0) rows.erase(rows.begin());
  return rows;
}

// Per query-type MRR; a query with several types counts towards each, and
// untyped queries are grouped under "unknown". Rows are sorted by type.
inline std::vector<TypeRow> type_table(const MatchDataset& ds, std::span<const Ranking> ranks,
                                       const TypeMap* types, bool* disjoint = nullptr) {
  std::map<std::string, TypeRow> rows;
  bool single = true;
  const std::vector<std::string> unknown{"unknown"};
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const MatchQuery& q = ds.queries[i];
    const auto* labels = types_of(types, q.query);
    if (labels && labels->size() > 1) single = false;
    for (const auto& label : labels ? *labels : unknown) {
      TypeRow& row = rows[label];
      row.type = label;
      ++row.queries;
      row.mrr += reciprocal_rank(ranks[i].positive_rank);
      row.mean_candidates += static_cast<double>(q.size());
    }
  }
  std::vector<TypeRow> out;
  for (auto& [label, row] : rows) {
    row.mrr /= static_cast<double>(row.queries);
    row.mean_candidates /= static_cast<double>(row.queries);
    out.push_back(row);
  }
  if (disjoint) *disjoint = single;
  return out;
}

// Over queries whose positive is ranked second, the fraction where the
// first-ranked candidate shares at least one type with the positive.
inline Rank2SameType rank2_table(const MatchDataset& ds, std::span<const Ranking> ranks,
                                 const TypeMap* candidate_types) {
  Rank2SameType out;
  std::size_t same = 0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (ranks[i].positive_rank != 2) continue;
    ++out.cases;
    const MatchQuery& q = ds.queries[i];
    const auto* top = types_of(candidate_types, q.candidates[ranks[i].order[0].index]);
    const auto* pos = types_of(candidate_types, q.positive_iri());
    if (!top || !pos) continue;
    const bool shared = std::any_of(top->begin(), top->end(), [&](const std::string& t) {
      return std::find(pos->begin(), pos->end(), t) != pos->end();
    });
    if (shared) ++same;
  }
  if (out.cases > 0) out.fraction = static_cast<double>(same) / static_cast<double>(out.cases);
  return out;
}

template <CandidateScorer S>
EvalReport evaluate(const S& scorer, const MatchDataset& ds, const EvalOptions& options = {}) {
  if (ds.empty()) throw std::invalid_argument("evaluate: empty dataset");
  const std::vector<Ranking> ranks = rank_all(scorer, ds, options.threads);
  EvalReport report;
  report.queries = ds.size();
  double sum = 0;
  for (const Ranking& r : ranks) {
    sum += reciprocal_rank(r.positive_rank);
    ++report.rank_histogram[r.positive_rank];
  }
  report.mrr = sum / static_cast<double>(ds.size());
  report.buckets = bucket_table(ds, ranks, options.bucket_edges);
  report.per_type = type_table(ds, ranks, options.query_types, &report.types_disjoint);
  if (options.candidate_types) report.rank2 = rank2_table(ds, ranks, options.candidate_types);
  report.random_baseline = random_baseline_mrr_analytic(ds);
  report.metadata["dataset"] = ds.direction;
  return report;
}

template <CandidateScorer S>
std::vector<BucketRow> mrr_by_candidate_bucket(const S& scorer, const MatchDataset& ds,
                                               std::vector<std::size_t> edges = {}) {
  return bucket_table(ds, rank_all(scorer, ds), std::move(edges));
}

template <CandidateScorer S>
std::vector<TypeRow> mrr_by_type(const S& scorer, const MatchDataset& ds, const TypeMap& types) {
  return type_table(ds, rank_all(scorer, ds), &types);
}

template <CandidateScorer S>
Rank2SameType rank2_same_type_fraction(const S& scorer, const MatchDataset& ds, const TypeMap& types) {
  return rank2_table(ds, rank_all(scorer, ds), &types);
}

inline nlohmann::json nullable(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); }

inline nlohmann::json to_json(const EvalReport& r) {
  nlohmann::json j;
  j["format"] = "kgmatch-eval/1";
  j["mrr"] = r.mrr;
  j["queries"] = r.queries;
  j["random_baseline_mrr"] = r.random_baseline;
  j["rank_histogram"] = nlohmann::json::array();
  for (const auto& [rank, count] : r.rank_histogram) j["rank_histogram"].push_back({{"rank", rank}, {"count", count}});
  j["buckets"] = nlohmann::json::array();
  for (const auto& b : r.buckets) {
    j["buckets"].push_back({{"lo", b.lo},
                            {"hi", b.hi == 0 ? nlohmann::json() : nlohmann::json(b.hi)},
                            {"queries", b.queries},
                            {"mrr", nullable(b.mrr)},
                            {"rr_min", b.rr.min},
                            {"rr_q1", b.rr.q1},
                            {"rr_median", b.rr.median},
                            {"rr_q3", b.rr.q3},
                            {"rr_max", b.rr.max}});
  }
  j["per_type"] = nlohmann::json::array();
  for (const auto& t : r.per_type) {
    j["per_type"].push_back(
        {{"type", t.type}, {"queries", t.queries}, {"mrr", t.mrr}, {"mean_candidates", t.mean_candidates}});
  }
  j["types_disjoint"] = r.types_disjoint;
  if (r.rank2) {
    j["rank2_same_type"] = {{"cases", r.rank2->cases},
                            {"fraction", r.rank2->fraction ? nlohmann::json(*r.rank2->fraction) : nlohmann::json()}};
  } else {
    j["rank2_same_type"] = nullptr;
  }
  j["metadata"] = r.metadata;
  return j;
}

inline void write_bucket_csv(std::ostream& out, const std::vector<BucketRow>& rows) {
  out << "lo,hi,queries,mrr,rr_min,rr_q1,rr_median,rr_q3,rr_max\n";
  for (const auto& b : rows) {
    out << b.lo << ',' << (b.hi == 0 ? std::string("inf") : std::to_string(b.hi)) << ',' << b.queries << ','
        << format_float(b.mrr) << ',' << format_float(b.rr.min) << ',' << format_float(b.rr.q1) << ','
        << format_float(b.rr.median) << ',' << format_float(b.rr.q3) << ',' << format_float(b.rr.max) << '\n';
  }
}

inline void write_type_csv(std::ostream& out, const std::vector<TypeRow>& rows) {
  out << "type,queries,mrr,mean_candidates\n";
  for (const auto& t : rows) {
    out << t.type << ',' << t.queries << ',' << format_float(t.mrr) << ',' << format_float(t.mean_candidates)
        << '\n';
  }
}

struct SweepPoint {
  double percent = 0.0;
  std::vector<double> values;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation
  double ci_low = 0.0;
  double ci_high = 0.0;
};

struct SweepCurve {
  std::vector<SweepPoint> points;
};

// Normal-approximation 95% interval: mean +- 1.96 s / sqrt(r).
inline SweepPoint summarize_repeats(double percent, std::vector<double> values) {
  SweepPoint p;
  p.percent = percent;
  p.values = std::move(values);
  const double r = static_cast<double>(p.values.size());
  for (double v : p.values) p.mean += v;
  p.mean /= r;
  if (p.values.size() > 1) {
    double ss = 0;
    for (double v : p.values) ss += (v - p.mean) * (v - p.mean);
    p.stddev = std::sqrt(ss / (r - 1));
  }
  const double half = 1.96 * p.stddev / std::sqrt(r);
  p.ci_low = p.mean - half;
  p.ci_high = p.mean + half;
  return p;
}

// Ten repeats for the four smallest fractions, five for the rest.
inline std::vector<std::size_t> default_sweep_repeats(const std::vector<double>& percents) {
  std::vector<double> sorted = percents;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::size_t> repeats;
  for (double p : percents) {
    const auto rank = static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), p) - sorted.begin());
    repeats.push_back(rank < 4 ? 10 : 5);
  }
  return repeats;
}

// Callback: train on split.train (selecting on split.valid) with `seed` and
// return the validation MRR.
using TrainAndScore = std::function<double(const DatasetSplit& split, std::uint64_t seed)>;

// For each percentage, subsample train+valid, retrain, and record validation
// MRR over the requested repeats. At 100% the base split is used as is.
inline SweepCurve training_size_sweep(const std::vector<double>& percents, const std::vector<std::size_t>& repeats,
                                      const DatasetSplit& base, const TrainAndScore& train_and_score,
                                      std::uint64_t seed) {
  if (repeats.size() != percents.size()) throw std::invalid_argument("one repeat count per fraction required");
  SweepCurve curve;
  for (std::size_t i = 0; i < percents.size(); ++i) {
    const double pct = percents[i];
    if (!(pct > 0.0 && pct <= 100.0)) throw std::invalid_argument("sweep percentages must lie in (0, 100]");
    if (repeats[i] < 1) throw std::invalid_argument("sweep repeats must be >= 1");
    std::vector<double> values;
    for (std::size_t r = 0; r < repeats[i]; ++r) {
      const std::uint64_t cell_seed = derive_seed(derive_seed(seed, fnv1a64(format_float(pct))), std::uint64_t{r});
      if (pct >= 100.0) {
        values.push_back(train_and_score(base, cell_seed));
      } else {
        values.push_back(train_and_score(subsample_training(base, pct / 100.0, cell_seed), cell_seed));
      }
    }
    curve.points.push_back(summarize_repeats(pct, std::move(values)));
  }
  return curve;
}

inline nlohmann::json to_json(const SweepCurve& c) {
  nlohmann::json j;
  j["format"] = "kgmatch-sweep/1";
  j["points"] = nlohmann::json::array();
  for (const auto& p : c.points) {
    j["points"].push_back({{"percent", p.percent},
                           {"values", p.values},
                           {"mean", p.mean},
                           {"stddev", p.stddev},
                           {"ci95_low", p.ci_low},
                           {"ci95_high", p.ci_high}});
  }
  return j;
}

// Comma-separated columns with a header row; gnuplot reads it with
// `set datafile separator ","`.
inline void write_curve_csv(std::ostream& out, const SweepCurve& c) {
  out << "percent,mean,ci95_low,ci95_high,repeats\n";
  for (const auto& p : c.points) {
    out << format_float(p.percent) << ',' << format_float(p.mean) << ',' << format_float(p.ci_low) << ','
        << format_float(p.ci_high) << ',' << p.values.size() << '\n';
  }
}

}  // namespace kgmatch
