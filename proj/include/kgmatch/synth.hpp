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
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "kgmatch/dataset.hpp"
#include "kgmatch/errors.hpp"
#include "kgmatch/graph.hpp"
#include "kgmatch/ntriples.hpp"
#include "kgmatch/random.hpp"

namespace kgmatch {

struct SyntheticSpec {
  std::size_t entities = 5000;
  double mean_out_degree = 6.0;
  std::size_t predicates = 12;
  std::size_t types = 8;
  std::size_t relations_per_type = 3;
  // Share of entities placed in name groups of size g is proportional to
  // g^-zipf_exponent, for g in [min_group, max_group].
  double zipf_exponent = 1.0;
  std::size_t min_group = 2;
  std::size_t max_group = 16;
  double noise = 0.1;  // per-copy edge drop rate
  std::uint64_t seed = 1;
  std::string source_namespace = "http://source.example/";
  std::string target_namespace = "http://target.example/";

  void validate() const {
    if (entities < 1 || predicates < 1 || types < 1 || relations_per_type < 1) {
      throw ConfigError("synthetic counts must be >= 1");
    }
    if (!(mean_out_degree >= 1.0)) throw ConfigError("mean out-degree must be >= 1");
    if (min_group < 1 || max_group < min_group) throw ConfigError("need 1 <= min_group <= max_group");
    if (!(noise >= 0.0 && noise < 1.0)) throw ConfigError("noise rate must lie in [0, 1)");
    if (source_namespace == target_namespace) throw ConfigError("namespaces must differ");
  }
};

struct SyntheticTwin {
  std::vector<Triple> source;
  std::vector<Triple> target;
  std::vector<Triple> alignment;  // source sameAs target
  std::vector<std::pair<std::string, std::string>> source_types;
  std::vector<std::pair<std::string, std::string>> target_types;
};

// Deterministic name-group sizes: entity share per size follows the power
// law, groups are rounded to whole groups, leftovers become singletons.
inline std::vector<std::size_t> synthetic_group_sizes(const SyntheticSpec& spec) {
  double total_weight = 0;
  for (std::size_t g = spec.min_group; g <= spec.max_group; ++g) total_weight += std::pow(double(g), -spec.zipf_exponent);
  std::vector<std::size_t> sizes;
  std::size_t remaining = spec.entities;
  for (std::size_t g = spec.max_group; g >= spec.min_group && g >= 1; --g) {
    const double share = std::pow(double(g), -spec.zipf_exponent) / total_weight;
    auto groups = static_cast<std::size_t>(std::llround(share * double(spec.entities) / double(g)));
    for (; groups > 0 && remaining >= g; --groups) {
      sizes.push_back(g);
      remaining -= g;
    }
    if (g == spec.min_group) break;
  }
  for (; remaining > 0; --remaining) sizes.push_back(1);
  return sizes;
}

inline SyntheticTwin generate_twin_graphs(const SyntheticSpec& spec) {
  spec.validate();
  Rng rng(derive_seed(spec.seed, "synth/base"));
  const std::size_t n = spec.entities;

  std::vector<std::size_t> type(n);
  std::vector<std::vector<std::uint32_t>> members(spec.types);
  for (std::size_t e = 0; e < n; ++e) {
    type[e] = rng.below(spec.types);
    members[type[e]].push_back(static_cast<std::uint32_t>(e));
  }
  struct Relation {
    std::size_t predicate;
    std::size_t target_type;
  };
  std::vector<std::vector<Relation>> relations(spec.types);
  for (auto& rel : relations) {
    for (std::size_t r = 0; r < spec.relations_per_type; ++r) rel.push_back({rng.below(spec.predicates), rng.below(spec.types)});
  }

  // Base edges: mostly schema-following relations, some uniform noise links.
  struct BaseEdge {
    std::uint32_t subject;
    std::uint32_t predicate;
    std::uint32_t object;
  };
  std::vector<BaseEdge> edges;
  const auto max_degree = static_cast<std::uint64_t>(std::max(1.0, 2.0 * spec.mean_out_degree - 1.0));
  for (std::size_t e = 0; e < n; ++e) {
    const std::uint64_t degree = 1 + rng.below(max_degree);
    for (std::uint64_t k = 0; k < degree; ++k) {
      std::size_t p = rng.below(spec.predicates);
      std::size_t o = rng.below(n);
      if (rng.uniform() < 0.8) {
        const Relation& rel = relations[type[e]][rng.below(relations[type[e]].size())];
        p = rel.predicate;
        if (!members[rel.target_type].empty()) {
          o = members[rel.target_type][rng.below(members[rel.target_type].size())];
        }
      }
      edges.push_back({static_cast<std::uint32_t>(e), static_cast<std::uint32_t>(p), static_cast<std::uint32_t>(o)});
    }
  }

  std::vector<std::uint32_t> by_name(n);
  for (std::size_t e = 0; e < n; ++e) by_name[e] = static_cast<std::uint32_t>(e);
  rng.shuffle(by_name);
  std::vector<std::string> name(n);
  {
    std::size_t cursor = 0;
    std::size_t group = 0;
    for (std::size_t g : synthetic_group_sizes(spec)) {
      const std::string label = g == 1 ? "Unique " + std::to_string(by_name[cursor]) : "Name " + std::to_string(group++);
      for (std::size_t i = 0; i < g; ++i) name[by_name[cursor++]] = label;
    }
  }

  // Target copy uses permuted local ids so interning orders differ.
  std::vector<std::uint32_t> perm(n);
  for (std::size_t e = 0; e < n; ++e) perm[e] = static_cast<std::uint32_t>(e);
  rng.shuffle(perm);
  std::vector<std::uint32_t> inverse(n);
  for (std::size_t e = 0; e < n; ++e) inverse[perm[e]] = static_cast<std::uint32_t>(e);

  std::vector<std::vector<std::uint32_t>> out_edges(n);
  for (std::uint32_t i = 0; i < edges.size(); ++i) out_edges[edges[i].subject].push_back(i);

  SyntheticTwin twin;
  auto emit_copy = [&](bool is_target, std::vector<Triple>& out,
                       std::vector<std::pair<std::string, std::string>>& types_out) {
    const std::string& ns = is_target ? spec.target_namespace : spec.source_namespace;
    const std::string name_predicate(is_target ? kRdfsLabel : kFoafName);
    auto local = [&](std::uint32_t e) { return is_target ? perm[e] : e; };
    auto entity = [&](std::uint32_t e) { return Term::iri(ns + "entity/E" + std::to_string(local(e))); };
    Rng drop(derive_seed(spec.seed, is_target ? "synth/target-noise" : "synth/source-noise"));
    for (std::uint32_t i = 0; i < n; ++i) {
      const std::uint32_t e = is_target ? inverse[i] : i;
      out.push_back({entity(e), Term::iri(std::string(kRdfType)),
                     Term::iri(ns + "class/T" + std::to_string(type[e]))});
      for (std::uint32_t idx : out_edges[e]) {
        if (drop.uniform() < spec.noise) continue;
        const BaseEdge& be = edges[idx];
        out.push_back({entity(e), Term::iri(ns + "prop/p" + std::to_string(be.predicate)), entity(be.object)});
      }
      out.push_back({entity(e), Term::iri(name_predicate), Term::literal(name[e], "en")});
      types_out.emplace_back(entity(e).value, "T" + std::to_string(type[e]));
    }
  };
  emit_copy(false, twin.source, twin.source_types);
  emit_copy(true, twin.target, twin.target_types);

  for (std::uint32_t e = 0; e < n; ++e) {
    twin.alignment.push_back({Term::iri(spec.source_namespace + "entity/E" + std::to_string(e)),
                              Term::iri(std::string(kOwlSameAs)),
                              Term::iri(spec.target_namespace + "entity/E" + std::to_string(perm[e]))});
  }
  return twin;
}

struct SyntheticFiles {
  std::string source;
  std::string target;
  std::string alignment;
  std::string source_types;
  std::string target_types;
};

inline SyntheticFiles synthetic_paths(const std::string& dir) {
  const std::filesystem::path d(dir);
  return {(d / "source.nt").string(), (d / "target.nt").string(), (d / "alignment.nt").string(),
          (d / "source.types.tsv").string(), (d / "target.types.tsv").string()};
}

inline SyntheticFiles write_twin_graphs(const SyntheticTwin& twin, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const SyntheticFiles files = synthetic_paths(dir);
  auto write_nt = [](const std::string& path, const std::vector<Triple>& triples) {
    std::ofstream out(path, std::ios::binary);
    for (const Triple& t : triples) write_ntriple(out, t);
    if (!out) throw std::runtime_error("cannot write " + path);
  };
  write_nt(files.source, twin.source);
  write_nt(files.target, twin.target);
  write_nt(files.alignment, twin.alignment);
  std::ofstream st(files.source_types, std::ios::binary);
  write_type_map(st, twin.source_types);
  std::ofstream tt(files.target_types, std::ios::binary);
  write_type_map(tt, twin.target_types);
  if (!st || !tt) throw std::runtime_error("cannot write type maps in " + dir);
  return files;
}

inline TypeMap to_type_map(const std::vector<std::pair<std::string, std::string>>& rows) {
  TypeMap m;
  for (const auto& [iri, label] : rows) m[iri].push_back(label);
  return m;
}

}  // namespace kgmatch
