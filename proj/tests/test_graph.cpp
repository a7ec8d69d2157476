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

#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>
#include <tuple>

#include "kgmatch/graph.hpp"
#include "test_support.hpp"

namespace kgmatch {
namespace {

using testing::entity;
using testing::graph_from;

const std::string kName(kFoafName);
const std::string kLabel(kRdfsLabel);

// Id-level triples mapped back to strings, as a sorted multiset.
std::vector<std::tuple<std::string, std::string, std::string, std::string>> canonical(const Kg& kg) {
  std::vector<std::tuple<std::string, std::string, std::string, std::string>> out;
  for (std::uint32_t i = 0; i < kg.entity_count(); ++i) {
    const EntityId s{i};
    for (const Edge& e : kg.out_edges(s)) {
      out.emplace_back(kg.entity_iri(s), kg.predicate_iri(e.predicate), kg.entity_iri(e.object), "");
    }
    for (const LiteralFact& l : kg.literals(s)) {
      out.emplace_back(kg.entity_iri(s), kg.predicate_iri(l.predicate), l.lexical, "@" + l.language + "^" + l.datatype);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

TEST(BuildGraph, ThreeEntities) {
  const Kg kg = graph_from(
      "<http://a> <http://p> <http://b> .\n<http://b> <http://p> <http://c> .\n<http://a> <http://q> <http://c> .\n");
  EXPECT_EQ(kg.entity_count(), 3u);
  EXPECT_EQ(kg.triple_count(), 3u);
  EXPECT_EQ(kg.out_edges(entity(kg, "http://a")).size(), 2u);
  EXPECT_EQ(kg.out_edges(entity(kg, "http://b")).size(), 1u);
  EXPECT_EQ(kg.out_edges(entity(kg, "http://c")).size(), 0u);
}

TEST(BuildGraph, EmptyInput) {
  const Kg kg = build_graph({});
  EXPECT_EQ(kg.entity_count(), 0u);
  EXPECT_EQ(kg.triple_count(), 0u);
}

TEST(BuildGraph, DuplicatesAreKept) {
  const Kg kg = graph_from("<http://a> <http://p> <http://b> .\n<http://a> <http://p> <http://b> .\n");
  EXPECT_EQ(kg.edge_count(), 2u);
  EXPECT_EQ(kg.out_edges(entity(kg, "http://a")).size(), 2u);
}

TEST(BuildGraph, LiteralsAreNotNodes) {
  const Kg kg = graph_from("<http://a> <http://p> \"b\" .\n");
  EXPECT_EQ(kg.entity_count(), 1u);
  EXPECT_EQ(kg.literal_count(), 1u);
  EXPECT_EQ(kg.edge_count(), 0u);
}

TEST(BuildGraph, IdsFollowFirstSeenOrder) {
  const Kg kg = graph_from("<http://z> <http://p> <http://y> .\n<http://x> <http://p> <http://z> .\n");
  EXPECT_EQ(kg.entity_iri(EntityId{0}), "http://z");
  EXPECT_EQ(kg.entity_iri(EntityId{1}), "http://y");
  EXPECT_EQ(kg.entity_iri(EntityId{2}), "http://x");
  for (std::uint32_t i = 0; i < kg.entity_count(); ++i) EXPECT_EQ(entity(kg, kg.entity_iri(EntityId{i})), EntityId{i});
}

TEST(BuildGraph, PredicateFilters) {
  const std::string text = "<http://a> <http://p> <http://b> .\n<http://a> <http://q> <http://c> .\n";
  const Kg keep = graph_from(text, {{"http://p"}, {}});
  EXPECT_EQ(keep.edge_count(), 1u);
  EXPECT_FALSE(keep.find_entity("http://c"));
  const Kg drop = graph_from(text, {{}, {"http://p"}});
  EXPECT_EQ(drop.edge_count(), 1u);
  EXPECT_FALSE(drop.find_entity("http://b"));
}

// Property: serialise, re-parse, rebuild gives the same id-level multiset.
TEST(BuildGraph, NTriplesRoundTripIsIsomorphic) {
  Rng rng(99);
  for (int round = 0; round < 20; ++round) {
    std::vector<Triple> triples;
    const auto n = 2 + rng.below(30);
    for (int i = 0; i < 200; ++i) {
      Triple t;
      t.subject = rng.below(10) == 0 ? Term::blank("b" + std::to_string(rng.below(n)))
                                     : Term::iri("http://e/" + std::to_string(rng.below(n)));
      t.predicate = Term::iri("http://p/" + std::to_string(rng.below(4)));
      switch (rng.below(3)) {
        case 0: t.object = Term::literal("name \"" + std::to_string(rng.below(9)) + "\"\n", rng.below(2) ? "en" : ""); break;
        case 1: t.object = Term::literal(std::to_string(rng.below(9)), "", "http://www.w3.org/2001/XMLSchema#int"); break;
        default: t.object = Term::iri("http://e/" + std::to_string(rng.below(n))); break;
      }
      triples.push_back(t);
    }
    const Kg kg = build_graph(triples);
    std::ostringstream out;
    write_ntriples(out, kg);
    const auto parsed = parse_ntriples(out.str());
    ASSERT_EQ(parsed.stats.malformed, 0u);
    const Kg back = build_graph(parsed.triples);
    EXPECT_EQ(back.entity_count(), kg.entity_count());
    EXPECT_EQ(canonical(back), canonical(kg));
  }
}

TEST(BuildGraph, SnapshotRoundTrip) {
  const Kg kg = graph_from(
      "<http://a> <http://p> <http://b> .\n<http://a> <http://n> \"A\"@en .\n_:x <http://p> <http://a> .\n");
  std::stringstream ss;
  kg.save(ss);
  const Kg back = Kg::load(ss);
  EXPECT_EQ(back.entity_count(), kg.entity_count());
  EXPECT_EQ(back.predicate_count(), kg.predicate_count());
  EXPECT_EQ(canonical(back), canonical(kg));

  std::istringstream junk("not a snapshot");
  EXPECT_THROW(Kg::load(junk), DataError);
}

TEST(ExtractNames, SingleName) {
  const Kg kg = graph_from("<http://e> <" + kName + "> \"Adam Smith\"@en .\n");
  const std::vector<std::string> preds{kName};
  const auto names = extract_names(kg, preds);
  ASSERT_EQ(names.size(), 1u);
  EXPECT_EQ(names.at(entity(kg, "http://e")), std::vector<std::string>{"Adam Smith"});
}

TEST(ExtractNames, TwoNamesKeepInputOrder) {
  const Kg kg = graph_from("<http://e> <" + kName + "> \"B\" .\n<http://e> <" + kName + "> \"A\" .\n");
  const std::vector<std::string> preds{kName};
  EXPECT_EQ(extract_names(kg, preds).at(entity(kg, "http://e")), (std::vector<std::string>{"B", "A"}));
}

TEST(ExtractNames, IriValuedNameIsIgnored) {
  const Kg kg = graph_from("<http://e> <" + kName + "> <http://other> .\n");
  const std::vector<std::string> preds{kName};
  EXPECT_TRUE(extract_names(kg, preds).empty());
}

TEST(ExtractNames, RejectsEmptyPredicateList) {
  const Kg kg = graph_from("<http://e> <" + kName + "> \"x\" .\n");
  EXPECT_THROW(extract_names(kg, {}), std::invalid_argument);
}

TEST(ExtractNames, LanguageFilterAndBlankNodes) {
  const Kg kg = graph_from("<http://e> <" + kName + "> \"Hallo\"@de .\n<http://e> <" + kName +
                           "> \"Hello\"@en .\n_:b <" + kName + "> \"anon\" .\n");
  const std::vector<std::string> preds{kName};
  const std::vector<std::string> en{"en"};
  EXPECT_EQ(extract_names(kg, preds).at(entity(kg, "http://e")).size(), 2u);
  EXPECT_EQ(extract_names(kg, preds, en).at(entity(kg, "http://e")), std::vector<std::string>{"Hello"});
  EXPECT_FALSE(extract_names(kg, preds).contains(entity(kg, "_:b")));
}

// Property: adding predicates never removes names.
TEST(ExtractNames, MonotoneInPredicateSet) {
  Rng rng(4);
  const std::vector<std::string> all{kName, kLabel, "http://alt"};
  for (int round = 0; round < 20; ++round) {
    std::string text;
    for (int i = 0; i < 60; ++i) {
      text += "<http://e/" + std::to_string(rng.below(15)) + "> <" + all[rng.below(3)] + "> \"n" +
              std::to_string(rng.below(5)) + "\" .\n";
    }
    const Kg kg = graph_from(text);
    const std::vector<std::string> p1{all[rng.below(3)]};
    std::vector<std::string> p12 = p1;
    p12.push_back(all[rng.below(3)]);
    const auto small = extract_names(kg, p1);
    const auto big = extract_names(kg, p12);
    for (const auto& [e, names] : small) {
      ASSERT_TRUE(big.contains(e));
      for (const auto& n : names) {
        EXPECT_NE(std::find(big.at(e).begin(), big.at(e).end(), n), big.at(e).end());
      }
    }
  }
}

struct AlignmentFixture {
  Kg source = graph_from("<http://s/a> <http://p> <http://s/b> .\n<http://s/c> <http://p> <http://s/a> .\n");
  Kg target = graph_from(
      "<http://t/x> <http://p> <http://t/y> .\n<http://t/y> <" + std::string(kRdfType) + "> <http://t/Disambig> .\n" +
      "<http://t/z_(disambiguation)> <http://p> <http://t/x> .\n");

  AlignmentSet align(const std::string& links, const DisambiguationFilter& filter = {{"http://t/Disambig"}, {"(disambiguation)"}}) {
    const auto parsed = parse_ntriples(links);
    return extract_alignment(parsed.triples, source, target, filter);
  }
};

std::string same_as(const std::string& s, const std::string& o) {
  return "<" + s + "> <" + std::string(kOwlSameAs) + "> <" + o + "> .\n";
}

TEST(ExtractAlignment, PlainLink) {
  AlignmentFixture f;
  const auto a = f.align(same_as("http://s/a", "http://t/x"));
  ASSERT_EQ(a.pairs.size(), 1u);
  EXPECT_EQ(a.pairs[0], std::make_pair(entity(f.source, "http://s/a"), entity(f.target, "http://t/x")));
}

TEST(ExtractAlignment, DisambiguationTargetsAreDropped) {
  AlignmentFixture f;
  const auto by_type = f.align(same_as("http://s/a", "http://t/y"));
  EXPECT_TRUE(by_type.pairs.empty());
  EXPECT_EQ(by_type.disambiguation, 1u);
  const auto by_iri = f.align(same_as("http://s/a", "http://t/z_(disambiguation)"));
  EXPECT_TRUE(by_iri.pairs.empty());
  EXPECT_EQ(by_iri.disambiguation, 1u);
}

TEST(ExtractAlignment, FirstTargetWinsAndConflictIsRecorded) {
  AlignmentFixture f;
  const auto a = f.align(same_as("http://s/a", "http://t/x") + same_as("http://s/a", "http://t/z_(disambiguation)") +
                         same_as("http://s/a", "http://t/x") + same_as("http://s/a", "http://t/y"),
                         {});
  ASSERT_EQ(a.pairs.size(), 1u);
  EXPECT_EQ(f.target.entity_iri(a.pairs[0].second), "http://t/x");
  ASSERT_EQ(a.conflicts.size(), 2u);
  EXPECT_EQ(a.conflicts[0].rejected_target, "http://t/z_(disambiguation)");
}

TEST(ExtractAlignment, MissingEndpointsAndReversedLinks) {
  AlignmentFixture f;
  const auto a = f.align(same_as("http://s/nowhere", "http://t/x") + same_as("http://t/x", "http://s/c") +
                         "<http://s/b> <http://other> <http://t/x> .\n");
  EXPECT_EQ(a.missing, 1u);
  ASSERT_EQ(a.pairs.size(), 1u);
  EXPECT_EQ(f.source.entity_iri(a.pairs[0].first), "http://s/c");
}

}  // namespace
}  // namespace kgmatch
