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
#include <cstdint>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "kgmatch/errors.hpp"
#include "kgmatch/graph.hpp"
#include "kgmatch/random.hpp"

namespace kgmatch {

struct WalkConfig {
  std::size_t walks_per_entity = 20;  // k
  std::size_t depth = 4;              // l, hops per walk
  std::uint64_t seed = 1;

  void validate() const {
    if (walks_per_entity < 1) throw ConfigError("walks per entity (k) must be >= 1");
    if (depth < 1) throw ConfigError("walk depth (l) must be >= 1");
  }
};

// Predicates are written `<iri>` in the token vocabulary. A bare IRI can
// never contain angle brackets, so predicate and entity tokens never collide.
inline std::string predicate_token(std::string_view iri) { return "<" + std::string(iri) + ">"; }

// Walk sequences over a token vocabulary in which ids [0, entity_tokens)
// are entities (same ids as the graph) and the rest are predicates.
struct WalkCorpus {
  std::vector<std::string> vocabulary;
  std::size_t entity_tokens = 0;
  std::vector<std::uint32_t> tokens;
  std::vector<std::uint64_t> offsets{0};

  std::size_t walk_count() const { return offsets.size() - 1; }
  std::span<const std::uint32_t> walk(std::size_t i) const {
    return std::span(tokens).subspan(offsets[i], offsets[i + 1] - offsets[i]);
  }
  bool is_entity(std::uint32_t token) const { return token < entity_tokens; }

  void add_walk(std::span<const std::uint32_t> walk) {
    tokens.insert(tokens.end(), walk.begin(), walk.end());
    offsets.push_back(tokens.size());
  }

  // One walk per line, tokens separated by single spaces.
  void write_text(std::ostream& out) const {
    for (std::size_t w = 0; w < walk_count(); ++w) {
      bool first = true;
      for (std::uint32_t t : walk(w)) {
        if (!first) out << ' ';
        out << vocabulary[t];
        first = false;
      }
      out << '\n';
    }
  }
};

namespace detail {

inline void walks_from(const Kg& kg, const WalkConfig& cfg, std::uint32_t first, std::uint32_t last,
                       std::vector<std::uint32_t>& tokens, std::vector<std::uint64_t>& lengths) {
  const auto entity_tokens = static_cast<std::uint32_t>(kg.entity_count());
  for (std::uint32_t start = first; start < last; ++start) {
    Rng rng(derive_seed(cfg.seed, std::uint64_t{start}));
    for (std::size_t w = 0; w < cfg.walks_per_entity; ++w) {
      const std::size_t before = tokens.size();
      EntityId here{start};
      tokens.push_back(start);
      for (std::size_t hop = 0; hop < cfg.depth; ++hop) {
        const auto edges = kg.out_edges(here);
        if (edges.empty()) break;
        const Edge& e = edges[rng.below(edges.size())];
        tokens.push_back(entity_tokens + to_index(e.predicate));
        tokens.push_back(to_index(e.object));
        here = e.object;
      }
      lengths.push_back(tokens.size() - before);
    }
  }
}

}  // namespace detail

// k uniform random walks of up to l hops from every entity. Each start entity
// draws from its own seed, so the corpus does not depend on `threads`.
inline WalkCorpus generate_walks(const Kg& kg, const WalkConfig& cfg, unsigned threads = 1) {
  cfg.validate();
  if (kg.entity_count() == 0) throw std::invalid_argument("generate_walks: empty graph");

  WalkCorpus corpus;
  corpus.entity_tokens = kg.entity_count();
  corpus.vocabulary.reserve(kg.entity_count() + kg.predicate_count());
  for (std::uint32_t i = 0; i < kg.entity_count(); ++i) corpus.vocabulary.push_back(kg.entity_iri(EntityId{i}));
  for (std::uint32_t i = 0; i < kg.predicate_count(); ++i) {
    corpus.vocabulary.push_back(predicate_token(kg.predicate_iri(PredicateId{i})));
  }

  const auto n = static_cast<std::uint32_t>(kg.entity_count());
  threads = std::clamp<unsigned>(threads, 1, std::max<std::uint32_t>(1, n));
  std::vector<std::vector<std::uint32_t>> tokens(threads);
  std::vector<std::vector<std::uint64_t>> lengths(threads);
  auto range = [&](unsigned t) {
    return std::pair<std::uint32_t, std::uint32_t>(
        static_cast<std::uint32_t>(std::uint64_t{n} * t / threads),
        static_cast<std::uint32_t>(std::uint64_t{n} * (t + 1) / threads));
  };
  if (threads == 1) {
    detail::walks_from(kg, cfg, 0, n, tokens[0], lengths[0]);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        auto [first, last] = range(t);
        detail::walks_from(kg, cfg, first, last, tokens[t], lengths[t]);
      });
    }
    for (auto& th : pool) th.join();
  }
  for (unsigned t = 0; t < threads; ++t) {
    for (std::uint64_t len : lengths[t]) {
      corpus.offsets.push_back(corpus.offsets.back() + len);
    }
    corpus.tokens.insert(corpus.tokens.end(), tokens[t].begin(), tokens[t].end());
  }
  return corpus;
}

}  // namespace kgmatch
