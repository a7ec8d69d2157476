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
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "kgmatch/errors.hpp"
#include "kgmatch/graph.hpp"
#include "kgmatch/name_index.hpp"
#include "kgmatch/random.hpp"
#include "kgmatch/text.hpp"

namespace kgmatch {

// One ambiguous query: a source entity and the same-named target entities,
// exactly one of which is the aligned (positive) target.
struct MatchQuery {
  std::string query;
  std::string name;
  std::vector<std::string> candidates;
  std::size_t positive = 0;

  const std::string& positive_iri() const { return candidates.at(positive); }
  std::size_t size() const { return candidates.size(); }
  bool operator==(const MatchQuery&) const = default;
};

struct SkipCounts {
  std::size_t no_name = 0;
  std::size_t single_candidate = 0;
  std::size_t positive_not_found = 0;
};

struct Provenance {
  std::string source_dump;
  std::string target_dump;
  std::string policy;
  std::uint64_t seed = 0;
  SkipCounts skipped;
};

struct MatchDataset {
  std::string direction;
  std::vector<MatchQuery> queries;
  Provenance provenance;

  std::size_t size() const { return queries.size(); }
  bool empty() const { return queries.empty(); }
};

// Returns a description of the first structural violation, if any.
inline std::optional<std::string> check_query(const MatchQuery& q) {
  if (q.candidates.size() < 2) return "query " + q.query + " has fewer than two candidates";
  if (q.positive >= q.candidates.size()) return "query " + q.query + " has no positive candidate";
  std::unordered_set<std::string> seen;
  for (const auto& c : q.candidates) {
    if (!seen.insert(c).second) return "query " + q.query + " lists candidate " + c + " twice";
  }
  return std::nullopt;
}

// Emits one query per aligned source entity whose name retrieves the aligned
// target together with at least one other target entity. Names are tried in
// stored order and the first qualifying one is used; candidates keep the
// posting order of the index.
inline MatchDataset build_matching_dataset(const Kg& source, const EntityNames& source_names,
                                           const Kg& target, const NameIndex& target_index,
                                           const AlignmentSet& alignment,
                                           std::string direction = "S->T") {
  MatchDataset ds;
  ds.direction = std::move(direction);
  ds.provenance.policy = target_index.policy().describe();

  auto pairs = alignment.pairs;
  std::sort(pairs.begin(), pairs.end());
  for (const auto& [s, t] : pairs) {
    auto names = source_names.find(s);
    if (names == source_names.end() || names->second.empty()) {
      ++ds.provenance.skipped.no_name;
      continue;
    }
    bool emitted = false;
    bool seen_positive = false;
    for (const std::string& name : names->second) {
      const auto postings = target_index.lookup(name);
      const auto hit = std::find(postings.begin(), postings.end(), t);
      if (hit == postings.end()) continue;
      seen_positive = true;
      if (postings.size() < 2) continue;
      MatchQuery q;
      q.query = source.entity_iri(s);
      q.name = name;
      q.candidates.reserve(postings.size());
      for (EntityId c : postings) q.candidates.push_back(target.entity_iri(c));
      q.positive = static_cast<std::size_t>(hit - postings.begin());
      ds.queries.push_back(std::move(q));
      emitted = true;
      break;
    }
    if (!emitted) {
      ++(seen_positive ? ds.provenance.skipped.single_candidate
                       : ds.provenance.skipped.positive_not_found);
    }
  }
  return ds;
}

// Full invariant gate: structure plus name agreement of every candidate with
// the query name under `policy`. Throws DataError on the first violation.
inline void validate_dataset(const MatchDataset& ds, const Kg& target,
                             const EntityNames& target_names, const NormalizationPolicy& policy) {
  std::unordered_set<std::string> queries;
  for (const MatchQuery& q : ds.queries) {
    if (auto problem = check_query(q)) throw DataError(*problem);
    if (!queries.insert(q.query).second) throw DataError("duplicate query " + q.query);
    const std::string key = normalize_name(q.name, policy);
    for (const std::string& c : q.candidates) {
      auto id = target.find_entity(c);
      auto names = id ? target_names.find(*id) : target_names.end();
      const bool shares = names != target_names.end() &&
                          std::any_of(names->second.begin(), names->second.end(),
                                      [&](const std::string& n) { return normalize_name(n, policy) == key; });
      if (!shares) throw DataError("candidate " + c + " does not carry the name of query " + q.query);
    }
  }
}

struct SplitRatios {
  double train = 0.7;
  double valid = 0.1;
  double test = 0.2;
};

struct SplitSizes {
  std::size_t train = 0;
  std::size_t valid = 0;
  std::size_t test = 0;
};

// train = floor(train_ratio * n), test = floor(test_ratio * n), validation
// takes the remainder, so for N = 376065 the split is 263245/37607/75213.
inline SplitSizes split_sizes(std::size_t n, const SplitRatios& r) {
  const double sum = r.train + r.valid + r.test;
  if (std::abs(sum - 1.0) > 1e-9 || r.train < 0 || r.valid < 0 || r.test < 0) {
    throw std::invalid_argument("split ratios must be non-negative and sum to 1");
  }
  SplitSizes s;
  s.train = static_cast<std::size_t>(std::floor(r.train * static_cast<double>(n)));
  s.test = static_cast<std::size_t>(std::floor(r.test * static_cast<double>(n)));
  if (s.train + s.test > n) s.test = n - s.train;
  s.valid = n - s.train - s.test;
  return s;
}

struct DatasetSplit {
  MatchDataset train;
  MatchDataset valid;
  MatchDataset test;
  SplitRatios ratios;
  std::uint64_t seed = 0;
};

namespace detail {

inline MatchDataset empty_like(const MatchDataset& ds) {
  MatchDataset out;
  out.direction = ds.direction;
  out.provenance = ds.provenance;
  return out;
}

}  // namespace detail

// Fisher-Yates shuffle with `seed`, then contiguous train/valid/test slices.
inline DatasetSplit split_dataset(const MatchDataset& ds, const SplitRatios& ratios,
                                  std::uint64_t seed) {
  const SplitSizes sizes = split_sizes(ds.size(), ratios);
  std::vector<std::size_t> order(ds.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(seed);
  rng.shuffle(order);

  DatasetSplit split{detail::empty_like(ds), detail::empty_like(ds), detail::empty_like(ds), ratios, seed};
  for (auto* part : {&split.train, &split.valid, &split.test}) part->provenance.seed = seed;
  for (std::size_t i = 0; i < order.size(); ++i) {
    MatchDataset& dst = i < sizes.train                ? split.train
                        : i < sizes.train + sizes.valid ? split.valid
                                                        : split.test;
    dst.queries.push_back(ds.queries[order[i]]);
  }
  return split;
}

// Draws `fraction` of train+valid without replacement and re-splits it 7:1.
// The test set is carried over untouched.
inline DatasetSplit subsample_training(const DatasetSplit& split, double fraction,
                                       std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw std::invalid_argument("subsample fraction must lie in (0, 1]");
  }
  std::vector<const MatchQuery*> pool;
  for (const auto& q : split.train.queries) pool.push_back(&q);
  for (const auto& q : split.valid.queries) pool.push_back(&q);
  if (pool.size() < 2) throw std::invalid_argument("subsample needs at least two queries");

  const auto m = pool.size();
  std::size_t combined = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(m)));
  combined = std::clamp<std::size_t>(combined, 2, m);
  const std::size_t n_valid = std::max<std::size_t>(1, combined / 8);

  Rng rng(seed);
  rng.shuffle(pool);
  DatasetSplit out{detail::empty_like(split.train), detail::empty_like(split.valid), split.test,
                   split.ratios, seed};
  for (std::size_t i = 0; i < combined; ++i) {
    (i < combined - n_valid ? out.train : out.valid).queries.push_back(*pool[i]);
  }
  return out;
}

// Entity IRI -> type labels.
using TypeMap = std::unordered_map<std::string, std::vector<std::string>>;

inline const std::vector<std::string>* types_of(const TypeMap* types, const std::string& iri) {
  if (types == nullptr) return nullptr;
  auto it = types->find(iri);
  return it == types->end() || it->second.empty() ? nullptr : &it->second;
}

// `iri \t type1,type2,...` per line.
inline TypeMap read_type_map(std::istream& in) {
  TypeMap types;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split(line, '\t');
    if (fields.size() != 2) {
      throw DataError("type map line " + std::to_string(line_no) + ": expected 2 fields");
    }
    auto& labels = types[unescape_field(fields[0])];
    for (auto& label : split_escaped_list(fields[1])) {
      if (label.empty()) throw DataError("type map line " + std::to_string(line_no) + ": empty label");
      labels.push_back(std::move(label));
    }
  }
  return types;
}

inline void write_type_map(std::ostream& out, const std::vector<std::pair<std::string, std::string>>& rows) {
  for (const auto& [iri, label] : rows) out << escape_field(iri) << '\t' << escape_field(label) << '\n';
}

struct TypeSizeStats {
  std::size_t queries = 0;
  double mean_candidates = 0.0;
};

struct DatasetStats {
  std::size_t queries = 0;
  std::size_t unique_names = 0;
  std::size_t unique_candidates = 0;
  std::map<std::size_t, std::size_t> candidate_histogram;
  double mean_candidates = 0.0;
  std::map<std::string, TypeSizeStats> per_type;
};

inline DatasetStats dataset_stats(const MatchDataset& ds, const TypeMap* query_types = nullptr) {
  DatasetStats st;
  st.queries = ds.size();
  std::unordered_set<std::string> names;
  std::unordered_set<std::string> candidates;
  std::size_t total = 0;
  for (const MatchQuery& q : ds.queries) {
    names.insert(q.name);
    for (const auto& c : q.candidates) candidates.insert(c);
    ++st.candidate_histogram[q.size()];
    total += q.size();
    if (query_types != nullptr) {
      const auto* labels = types_of(query_types, q.query);
      const std::vector<std::string> unknown{"unknown"};
      for (const auto& label : labels ? *labels : unknown) {
        auto& row = st.per_type[label];
        row.mean_candidates += static_cast<double>(q.size());
        ++row.queries;
      }
    }
  }
  for (auto& [label, row] : st.per_type) row.mean_candidates /= static_cast<double>(row.queries);
  st.unique_names = names.size();
  st.unique_candidates = candidates.size();
  if (st.queries > 0) st.mean_candidates = static_cast<double>(total) / static_cast<double>(st.queries);
  return st;
}

// `query_iri \t query_name \t positive_iri \t cand_1,cand_2,...`
inline void write_dataset_tsv(std::ostream& out, const MatchDataset& ds) {
  for (const MatchQuery& q : ds.queries) {
    out << escape_field(q.query) << '\t' << escape_field(q.name) << '\t'
        << escape_field(q.positive_iri()) << '\t';
    for (std::size_t i = 0; i < q.candidates.size(); ++i) {
      if (i > 0) out << ',';
      out << escape_field(q.candidates[i]);
    }
    out << '\n';
  }
}

inline MatchDataset read_dataset_tsv(std::istream& in, std::string direction = {}) {
  MatchDataset ds;
  ds.direction = std::move(direction);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto where = [&] { return "dataset line " + std::to_string(line_no) + ": "; };
    const auto fields = split(line, '\t');
    if (fields.size() != 4) throw DataError(where() + "expected 4 tab-separated fields");
    MatchQuery q;
    q.query = unescape_field(fields[0]);
    q.name = unescape_field(fields[1]);
    const std::string positive = unescape_field(fields[2]);
    q.candidates = split_escaped_list(fields[3]);
    const auto hit = std::find(q.candidates.begin(), q.candidates.end(), positive);
    if (hit == q.candidates.end()) throw DataError(where() + "positive not among candidates");
    q.positive = static_cast<std::size_t>(hit - q.candidates.begin());
    if (auto problem = check_query(q)) throw DataError(where() + *problem);
    ds.queries.push_back(std::move(q));
  }
  return ds;
}

inline nlohmann::json split_metadata(const DatasetSplit& split) {
  const auto& p = split.train.provenance;
  return {
      {"format", "kgmatch-dataset/1"},
      {"direction", split.train.direction},
      {"counts",
       {{"train", split.train.size()},
        {"valid", split.valid.size()},
        {"test", split.test.size()},
        {"total", split.train.size() + split.valid.size() + split.test.size()}}},
      {"ratios", {split.ratios.train, split.ratios.valid, split.ratios.test}},
      {"seed", split.seed},
      {"policy", p.policy},
      {"source_dump", p.source_dump},
      {"target_dump", p.target_dump},
      {"skipped",
       {{"no_name", p.skipped.no_name},
        {"single_candidate", p.skipped.single_candidate},
        {"positive_not_found", p.skipped.positive_not_found}}},
  };
}

inline std::string split_path(const std::string& prefix, std::string_view part) {
  return prefix + "." + std::string(part) + ".tsv";
}

inline void write_split(const std::string& prefix, const DatasetSplit& split) {
  const std::pair<std::string_view, const MatchDataset*> parts[] = {
      {"train", &split.train}, {"valid", &split.valid}, {"test", &split.test}};
  for (const auto& [name, ds] : parts) {
    std::ofstream out(split_path(prefix, name), std::ios::binary);
    write_dataset_tsv(out, *ds);
    if (!out) throw std::runtime_error("cannot write " + split_path(prefix, name));
  }
  std::ofstream meta(prefix + ".meta.json", std::ios::binary);
  meta << split_metadata(split).dump(2) << '\n';
  if (!meta) throw std::runtime_error("cannot write " + prefix + ".meta.json");
}

inline MatchDataset read_dataset_file(const std::string& path, std::string direction = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open dataset " + path);
  return read_dataset_tsv(in, std::move(direction));
}

}  // namespace kgmatch
