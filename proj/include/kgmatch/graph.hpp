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
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "kgmatch/binary_io.hpp"
#include "kgmatch/errors.hpp"
#include "kgmatch/ntriples.hpp"

namespace kgmatch {

enum class EntityId : std::uint32_t {};
enum class PredicateId : std::uint32_t {};

constexpr std::uint32_t to_index(EntityId id) { return static_cast<std::uint32_t>(id); }
constexpr std::uint32_t to_index(PredicateId id) { return static_cast<std::uint32_t>(id); }

inline constexpr std::string_view kRdfType = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
inline constexpr std::string_view kOwlSameAs = "http://www.w3.org/2002/07/owl#sameAs";
inline constexpr std::string_view kFoafName = "http://xmlns.com/foaf/0.1/name";
inline constexpr std::string_view kRdfsLabel = "http://www.w3.org/2000/01/rdf-schema#label";

// Dense string <-> id table; ids are assigned in first-seen order.
class Interner {
 public:
  std::uint32_t intern(std::string_view key) {
    auto [it, inserted] = ids_.try_emplace(std::string(key), static_cast<std::uint32_t>(names_.size()));
    if (inserted) names_.push_back(it->first);
    return it->second;
  }
  std::optional<std::uint32_t> find(const std::string& key) const {
    auto it = ids_.find(key);
    if (it == ids_.end()) return std::nullopt;
    return it->second;
  }
  const std::string& name(std::uint32_t id) const { return names_.at(id); }
  std::size_t size() const { return names_.size(); }

 private:
  std::unordered_map<std::string, std::uint32_t> ids_;
  std::vector<std::string> names_;
};

struct Edge {
  PredicateId predicate;
  EntityId object;
  bool operator==(const Edge&) const = default;
};

struct LiteralFact {
  PredicateId predicate;
  std::string lexical;
  std::string language;
  std::string datatype;
};

// Immutable directed labeled multigraph. IRI-valued objects are edges;
// literal-valued objects live in a per-entity side store and are never
// graph nodes.
class Kg {
 public:
  std::size_t entity_count() const { return entities_.size(); }
  std::size_t predicate_count() const { return predicates_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  std::size_t literal_count() const { return literals_.size(); }
  std::size_t triple_count() const { return edges_.size() + literals_.size(); }

  const std::string& entity_iri(EntityId id) const { return entities_.name(to_index(id)); }
  const std::string& predicate_iri(PredicateId id) const { return predicates_.name(to_index(id)); }

  std::optional<EntityId> find_entity(const std::string& iri) const {
    auto id = entities_.find(iri);
    if (!id) return std::nullopt;
    return EntityId{*id};
  }
  std::optional<PredicateId> find_predicate(const std::string& iri) const {
    auto id = predicates_.find(iri);
    if (!id) return std::nullopt;
    return PredicateId{*id};
  }

  bool is_blank(EntityId id) const { return entity_iri(id).starts_with("_:"); }

  std::span<const Edge> out_edges(EntityId id) const {
    const auto i = to_index(id);
    return std::span(edges_).subspan(edge_offsets_[i], edge_offsets_[i + 1] - edge_offsets_[i]);
  }
  std::span<const LiteralFact> literals(EntityId id) const {
    const auto i = to_index(id);
    return std::span(literals_).subspan(literal_offsets_[i],
                                        literal_offsets_[i + 1] - literal_offsets_[i]);
  }

  void save(std::ostream& out) const;
  static Kg load(std::istream& in);

 private:
  friend class KgBuilder;

  Interner entities_;
  Interner predicates_;
  std::vector<std::uint64_t> edge_offsets_{0};
  std::vector<Edge> edges_;
  std::vector<std::uint64_t> literal_offsets_{0};
  std::vector<LiteralFact> literals_;
};

struct GraphConfig {
  // When non-empty only these predicates are kept.
  std::vector<std::string> keep_predicates;
  std::vector<std::string> drop_predicates;
};

class KgBuilder {
 public:
  explicit KgBuilder(const GraphConfig& config = {})
      : keep_(config.keep_predicates.begin(), config.keep_predicates.end()),
        drop_(config.drop_predicates.begin(), config.drop_predicates.end()) {}

  // Returns false when the predicate filter rejected the triple.
  bool add(const Triple& t) {
    if (!keep_.empty() && !keep_.contains(t.predicate.value)) return false;
    if (drop_.contains(t.predicate.value)) return false;
    const auto s = EntityId{kg_.entities_.intern(t.subject.value)};
    const auto p = PredicateId{kg_.predicates_.intern(t.predicate.value)};
    if (t.object.is_literal()) {
      literal_subjects_.push_back(s);
      pending_literals_.push_back({p, t.object.value, t.object.language, t.object.datatype});
    } else {
      const auto o = EntityId{kg_.entities_.intern(t.object.value)};
      edge_subjects_.push_back(s);
      pending_edges_.push_back({p, o});
    }
    return true;
  }

  Kg build() && {
    const std::size_t n = kg_.entities_.size();
    kg_.edges_ = bucket_by_subject(n, edge_subjects_, std::move(pending_edges_), kg_.edge_offsets_);
    kg_.literals_ =
        bucket_by_subject(n, literal_subjects_, std::move(pending_literals_), kg_.literal_offsets_);
    return std::move(kg_);
  }

 private:
  // Stable counting sort into CSR order; per-subject input order is kept.
  template <typename T>
  static std::vector<T> bucket_by_subject(std::size_t n, const std::vector<EntityId>& subjects,
                                          std::vector<T>&& items,
                                          std::vector<std::uint64_t>& offsets) {
    offsets.assign(n + 1, 0);
    for (EntityId s : subjects) ++offsets[to_index(s) + 1];
    for (std::size_t i = 0; i < n; ++i) offsets[i + 1] += offsets[i];
    std::vector<std::uint64_t> cursor(offsets.begin(), offsets.end() - 1);
    std::vector<std::optional<T>> slots(items.size());
    for (std::size_t i = 0; i < items.size(); ++i) {
      slots[cursor[to_index(subjects[i])]++] = std::move(items[i]);
    }
    std::vector<T> out;
    out.reserve(slots.size());
    for (auto& slot : slots) out.push_back(std::move(*slot));
    return out;
  }

  Kg kg_;
  std::unordered_set<std::string> keep_;
  std::unordered_set<std::string> drop_;
  std::vector<EntityId> edge_subjects_;
  std::vector<Edge> pending_edges_;
  std::vector<EntityId> literal_subjects_;
  std::vector<LiteralFact> pending_literals_;
};

inline Kg build_graph(std::span<const Triple> triples, const GraphConfig& config = {}) {
  KgBuilder builder(config);
  for (const Triple& t : triples) builder.add(t);
  return std::move(builder).build();
}

// Entity-ordered triples of `kg`: for each entity its edges, then its
// literals. Re-parsing yields an isomorphic graph.
inline std::vector<Triple> graph_triples(const Kg& kg) {
  std::vector<Triple> out;
  out.reserve(kg.triple_count());
  auto term_for = [&](EntityId e) {
    const std::string& v = kg.entity_iri(e);
    return v.starts_with("_:") ? Term::blank(v.substr(2)) : Term::iri(v);
  };
  for (std::uint32_t i = 0; i < kg.entity_count(); ++i) {
    const EntityId e{i};
    for (const Edge& edge : kg.out_edges(e)) {
      out.push_back({term_for(e), Term::iri(kg.predicate_iri(edge.predicate)), term_for(edge.object)});
    }
    for (const LiteralFact& lit : kg.literals(e)) {
      out.push_back({term_for(e), Term::iri(kg.predicate_iri(lit.predicate)),
                     Term::literal(lit.lexical, lit.language, lit.datatype)});
    }
  }
  return out;
}

inline void write_ntriples(std::ostream& out, const Kg& kg) {
  for (const Triple& t : graph_triples(kg)) write_ntriple(out, t);
}

inline void Kg::save(std::ostream& out) const {
  BinaryWriter w(out);
  w.magic("KGMKG001");
  w.u64(entities_.size());
  for (std::uint32_t i = 0; i < entities_.size(); ++i) w.str(entities_.name(i));
  w.u64(predicates_.size());
  for (std::uint32_t i = 0; i < predicates_.size(); ++i) w.str(predicates_.name(i));
  for (std::uint64_t off : edge_offsets_) w.u64(off);
  for (const Edge& e : edges_) {
    w.u32(to_index(e.predicate));
    w.u32(to_index(e.object));
  }
  for (std::uint64_t off : literal_offsets_) w.u64(off);
  for (const LiteralFact& lit : literals_) {
    w.u32(to_index(lit.predicate));
    w.str(lit.lexical);
    w.str(lit.language);
    w.str(lit.datatype);
  }
  w.check();
}

inline Kg Kg::load(std::istream& in) {
  BinaryReader r(in, "graph snapshot");
  r.expect_magic("KGMKG001");
  Kg kg;
  const std::uint64_t n = r.count();
  for (std::uint64_t i = 0; i < n; ++i) {
    if (kg.entities_.intern(r.str()) != i) throw DataError("graph snapshot: duplicate entity");
  }
  const std::uint64_t np = r.count();
  for (std::uint64_t i = 0; i < np; ++i) {
    if (kg.predicates_.intern(r.str()) != i) throw DataError("graph snapshot: duplicate predicate");
  }
  auto read_offsets = [&](std::vector<std::uint64_t>& offsets) {
    offsets.resize(n + 1);
    for (auto& off : offsets) off = r.u64();
    if (offsets.front() != 0 || !std::is_sorted(offsets.begin(), offsets.end()) ||
        offsets.back() > (std::uint64_t{1} << 36)) {
      throw DataError("graph snapshot: corrupt offsets");
    }
  };
  read_offsets(kg.edge_offsets_);
  kg.edges_.resize(kg.edge_offsets_.back());
  for (Edge& e : kg.edges_) {
    e.predicate = PredicateId{r.u32()};
    e.object = EntityId{r.u32()};
    if (to_index(e.predicate) >= np || to_index(e.object) >= n) {
      throw DataError("graph snapshot: edge id out of range");
    }
  }
  read_offsets(kg.literal_offsets_);
  kg.literals_.resize(kg.literal_offsets_.back());
  for (LiteralFact& lit : kg.literals_) {
    lit.predicate = PredicateId{r.u32()};
    if (to_index(lit.predicate) >= np) throw DataError("graph snapshot: literal predicate out of range");
    lit.lexical = r.str();
    lit.language = r.str();
    lit.datatype = r.str();
  }
  return kg;
}

using EntityNames = std::map<EntityId, std::vector<std::string>>;

// All literal values of `name_predicates`, per entity, in stored order.
// An empty `languages` list accepts every language tag (and untagged
// literals); otherwise only the listed tags are kept.
inline EntityNames extract_names(const Kg& kg, std::span<const std::string> name_predicates,
                                 std::span<const std::string> languages = {}) {
  if (name_predicates.empty()) throw std::invalid_argument("extract_names: no name predicates");
  std::unordered_set<std::uint32_t> wanted;
  for (const auto& iri : name_predicates) {
    if (auto p = kg.find_predicate(iri)) wanted.insert(to_index(*p));
  }
  EntityNames names;
  if (wanted.empty()) return names;
  for (std::uint32_t i = 0; i < kg.entity_count(); ++i) {
    const EntityId e{i};
    if (kg.is_blank(e)) continue;
    for (const LiteralFact& lit : kg.literals(e)) {
      if (!wanted.contains(to_index(lit.predicate))) continue;
      if (!languages.empty() &&
          std::find(languages.begin(), languages.end(), lit.language) == languages.end()) {
        continue;
      }
      names[e].push_back(lit.lexical);
    }
  }
  return names;
}

// Flags entities that stand for disambiguation pages: either typed with one
// of `class_iris` or with an IRI containing one of `iri_substrings`.
struct DisambiguationFilter {
  std::vector<std::string> class_iris;
  std::vector<std::string> iri_substrings;
  std::string type_predicate = std::string(kRdfType);

  bool operator()(const Kg& kg, EntityId e) const {
    const std::string& iri = kg.entity_iri(e);
    for (const auto& needle : iri_substrings) {
      if (!needle.empty() && iri.find(needle) != std::string::npos) return true;
    }
    if (class_iris.empty()) return false;
    const auto type_p = kg.find_predicate(type_predicate);
    if (!type_p) return false;
    for (const Edge& edge : kg.out_edges(e)) {
      if (edge.predicate != *type_p) continue;
      const std::string& cls = kg.entity_iri(edge.object);
      if (std::find(class_iris.begin(), class_iris.end(), cls) != class_iris.end()) return true;
    }
    return false;
  }
};

struct AlignmentConflict {
  std::string source;
  std::string kept_target;
  std::string rejected_target;
};

struct AlignmentSet {
  // (source, target) in first-encountered order; each source at most once.
  std::vector<std::pair<EntityId, EntityId>> pairs;
  std::vector<AlignmentConflict> conflicts;
  std::size_t missing = 0;         // an endpoint absent from its graph
  std::size_t disambiguation = 0;  // removed by the filter

  std::optional<EntityId> target_of(EntityId source) const {
    for (const auto& [s, t] : pairs) {
      if (s == source) return t;
    }
    return std::nullopt;
  }
};

// Builds the source->target alignment from sameAs-style triples. Links may
// be stated in either direction; a link whose subject lives in the target
// graph and object in the source graph is flipped.
template <typename Filter = DisambiguationFilter>
AlignmentSet extract_alignment(std::span<const Triple> links, const Kg& source, const Kg& target,
                               const Filter& is_disambiguation = {},
                               std::span<const std::string> alignment_predicates = {}) {
  const std::vector<std::string> default_predicates{std::string(kOwlSameAs)};
  if (alignment_predicates.empty()) alignment_predicates = default_predicates;
  AlignmentSet out;
  std::unordered_map<std::uint32_t, EntityId> chosen;
  for (const Triple& t : links) {
    if (t.object.is_literal()) continue;
    if (std::find(alignment_predicates.begin(), alignment_predicates.end(), t.predicate.value) ==
        alignment_predicates.end()) {
      continue;
    }
    std::optional<EntityId> s = source.find_entity(t.subject.value);
    std::optional<EntityId> o = target.find_entity(t.object.value);
    if (!s || !o) {
      s = source.find_entity(t.object.value);
      o = target.find_entity(t.subject.value);
    }
    if (!s || !o) {
      ++out.missing;
      continue;
    }
    if (is_disambiguation(source, *s) || is_disambiguation(target, *o)) {
      ++out.disambiguation;
      continue;
    }
    auto [it, inserted] = chosen.try_emplace(to_index(*s), *o);
    if (!inserted) {
      if (it->second != *o) {
        out.conflicts.push_back(
            {source.entity_iri(*s), target.entity_iri(it->second), target.entity_iri(*o)});
      }
      continue;
    }
    out.pairs.emplace_back(*s, *o);
  }
  return out;
}

}  // namespace kgmatch
