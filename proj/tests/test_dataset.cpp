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
#include <set>
#include <sstream>

#include "kgmatch/dataset.hpp"
#include "kgmatch/pipeline.hpp"
#include "kgmatch/synth.hpp"
#include "test_support.hpp"

namespace kgmatch {
namespace {

using testing::TempDir;

// Two graphs given as (iri, name) rows plus sameAs links, run through the
// same ingest path the command-line tool uses.
struct Scenario {
  IngestedGraph source;
  IngestedGraph target;
  AlignmentSet alignment;

  Scenario(const std::vector<std::pair<std::string, std::string>>& src,
           const std::vector<std::pair<std::string, std::string>>& tgt,
           const std::vector<std::pair<std::string, std::string>>& links)
      : source(ingest(src, std::string(kFoafName))), target(ingest(tgt, std::string(kRdfsLabel))) {
    std::vector<Triple> triples;
    for (const auto& [s, t] : links) triples.push_back({Term::iri(s), Term::iri(std::string(kOwlSameAs)), Term::iri(t)});
    alignment = extract_alignment(triples, source.kg, target.kg);
  }

  MatchDataset build() const {
    return build_matching_dataset(source.kg, source.names, target.kg, target.index, alignment);
  }

  static IngestedGraph ingest(const std::vector<std::pair<std::string, std::string>>& rows, const std::string& pred) {
    std::vector<Triple> triples;
    for (const auto& [iri, name] : rows) {
      triples.push_back({Term::iri(iri), Term::iri(pred), Term::literal(name, "en")});
    }
    return ingest_triples(triples, {});
  }
};

TEST(BuildDataset, FourJohnBurts) {
  const Scenario s({{"http://s/jb", "John Burt"}},
                   {{"http://t/1", "John Burt"}, {"http://t/2", "John Burt"}, {"http://t/3", "John Burt"},
                    {"http://t/4", "John Burt"}, {"http://t/5", "Jane Burt"}},
                   {{"http://s/jb", "http://t/3"}});
  const MatchDataset ds = s.build();
  ASSERT_EQ(ds.size(), 1u);
  const MatchQuery& q = ds.queries[0];
  EXPECT_EQ(q.query, "http://s/jb");
  EXPECT_EQ(q.name, "John Burt");
  EXPECT_EQ(q.candidates, (std::vector<std::string>{"http://t/1", "http://t/2", "http://t/3", "http://t/4"}));
  EXPECT_EQ(q.positive_iri(), "http://t/3");
}

TEST(BuildDataset, UniqueNameIsNotAQuery) {
  const Scenario s({{"http://s/a", "Only One"}}, {{"http://t/a", "Only One"}}, {{"http://s/a", "http://t/a"}});
  const MatchDataset ds = s.build();
  EXPECT_TRUE(ds.empty());
  EXPECT_EQ(ds.provenance.skipped.single_candidate, 1u);
}

TEST(BuildDataset, NameMismatchIsNotAQuery) {
  const Scenario s({{"http://s/a", "Alpha"}}, {{"http://t/a", "Beta"}, {"http://t/b", "Alpha"}, {"http://t/c", "Alpha"}},
                   {{"http://s/a", "http://t/a"}});
  const MatchDataset ds = s.build();
  EXPECT_TRUE(ds.empty());
  EXPECT_EQ(ds.provenance.skipped.positive_not_found, 1u);
}

TEST(BuildDataset, FirstQualifyingNameWins) {
  const Scenario s({{"http://s/a", "Solo"}, {"http://s/a", "Pair"}, {"http://s/a", "Also"}},
                   {{"http://t/a", "Solo"}, {"http://t/a", "Pair"}, {"http://t/b", "Pair"}, {"http://t/a", "Also"},
                    {"http://t/c", "Also"}},
                   {{"http://s/a", "http://t/a"}});
  const MatchDataset ds = s.build();
  ASSERT_EQ(ds.size(), 1u);
  EXPECT_EQ(ds.queries[0].name, "Pair");
}

TEST(BuildDataset, UnnamedSourceIsCounted) {
  const std::vector<Triple> src{{Term::iri("http://s/a"), Term::iri("http://p"), Term::iri("http://s/b")}};
  const IngestedGraph source = ingest_triples(src, {});
  const Scenario s({}, {{"http://t/a", "A"}, {"http://t/b", "A"}}, {});
  const std::vector<Triple> links{{Term::iri("http://s/a"), Term::iri(std::string(kOwlSameAs)), Term::iri("http://t/a")}};
  const AlignmentSet align = extract_alignment(links, source.kg, s.target.kg);
  const MatchDataset ds = build_matching_dataset(source.kg, source.names, s.target.kg, s.target.index, align);
  EXPECT_TRUE(ds.empty());
  EXPECT_EQ(ds.provenance.skipped.no_name, 1u);
}

TEST(SplitSizes, LargeReferenceTotals) {
  const SplitSizes a = split_sizes(376065, {});
  EXPECT_EQ(a.train, 263245u);
  EXPECT_EQ(a.valid, 37607u);
  EXPECT_EQ(a.test, 75213u);
  const SplitSizes b = split_sizes(329320, {});
  EXPECT_EQ(b.train, 230523u);
  EXPECT_EQ(b.valid, 32933u);
  EXPECT_EQ(b.test, 65864u);
}

TEST(SplitSizes, TenQueries) {
  const SplitSizes s = split_sizes(10, {});
  EXPECT_EQ(s.train, 7u);
  EXPECT_EQ(s.valid, 1u);
  EXPECT_EQ(s.test, 2u);
}

TEST(SplitSizes, RatiosMustSumToOne) {
  EXPECT_THROW(split_sizes(10, {0.7, 0.1, 0.1}), std::invalid_argument);
  EXPECT_THROW(split_sizes(10, {0.7, 0.4, -0.1}), std::invalid_argument);
  EXPECT_NO_THROW(split_sizes(10, {0.7, 0.1, 0.2 + 1e-12}));
}

// Train and test are floored, so each sits less than one query below its
// exact share; validation absorbs both remainders.
TEST(SplitSizes, CloseToExactShare) {
  for (std::size_t n = 0; n < 3000; n += 7) {
    const SplitSizes s = split_sizes(n, {});
    EXPECT_EQ(s.train + s.valid + s.test, n);
    const double train_gap = 0.7 * double(n) - double(s.train);
    const double test_gap = 0.2 * double(n) - double(s.test);
    const double valid_gap = double(s.valid) - 0.1 * double(n);
    EXPECT_TRUE(train_gap >= 0 && train_gap < 1) << n;
    EXPECT_TRUE(test_gap >= 0 && test_gap < 1) << n;
    EXPECT_TRUE(valid_gap > -1e-9 && valid_gap < 2) << n;
  }
}

MatchDataset numbered(std::size_t n) {
  MatchDataset ds;
  for (std::size_t i = 0; i < n; ++i) ds.queries.push_back(testing::make_query("q" + std::to_string(i), 2, i % 2));
  return ds;
}

std::multiset<std::string> ids_of(std::initializer_list<const MatchDataset*> parts) {
  std::multiset<std::string> out;
  for (const auto* ds : parts) {
    for (const auto& q : ds->queries) out.insert(q.query);
  }
  return out;
}

TEST(SplitDataset, DisjointCoverAndDeterministic) {
  const MatchDataset ds = numbered(101);
  const DatasetSplit a = split_dataset(ds, {}, 5);
  const DatasetSplit b = split_dataset(ds, {}, 5);
  const DatasetSplit c = split_dataset(ds, {}, 6);
  EXPECT_EQ(ids_of({&a.train, &a.valid, &a.test}), ids_of({&ds}));
  std::set<std::string> unique;
  for (const auto& id : ids_of({&a.train, &a.valid, &a.test})) EXPECT_TRUE(unique.insert(id).second);
  EXPECT_EQ(a.train.size(), 70u);
  EXPECT_EQ(a.test.size(), 20u);
  EXPECT_EQ(a.valid.size(), 11u);
  std::ostringstream sa, sb, sc;
  write_dataset_tsv(sa, a.train);
  write_dataset_tsv(sb, b.train);
  write_dataset_tsv(sc, c.train);
  EXPECT_EQ(sa.str(), sb.str());
  EXPECT_NE(sa.str(), sc.str());
}

TEST(DatasetStats, SingleQuery) {
  MatchDataset ds;
  ds.queries.push_back(testing::make_query("q", 3, 0));
  const DatasetStats st = dataset_stats(ds);
  EXPECT_EQ(st.candidate_histogram, (std::map<std::size_t, std::size_t>{{3, 1}}));
  EXPECT_DOUBLE_EQ(st.mean_candidates, 3.0);
  EXPECT_EQ(st.unique_names, 1u);
  EXPECT_EQ(st.unique_candidates, 3u);
}

TEST(DatasetStats, PerTypeMeans) {
  MatchDataset ds;
  ds.queries.push_back(testing::make_query("a", 2, 0, "x"));
  ds.queries.push_back(testing::make_query("b", 4, 0, "x"));
  ds.queries.push_back(testing::make_query("c", 9, 0, "y"));
  const TypeMap types{{"a", {"Album"}}, {"b", {"Album"}}};
  const DatasetStats st = dataset_stats(ds, &types);
  EXPECT_EQ(st.unique_names, 2u);
  EXPECT_EQ(st.per_type.at("Album").queries, 2u);
  EXPECT_DOUBLE_EQ(st.per_type.at("Album").mean_candidates, 3.0);
  EXPECT_DOUBLE_EQ(st.per_type.at("unknown").mean_candidates, 9.0);
  EXPECT_DOUBLE_EQ(st.mean_candidates, 5.0);
}

TEST(Subsample, FullFractionKeepsMembership) {
  const DatasetSplit base = split_dataset(numbered(50), {}, 1);
  const DatasetSplit sub = subsample_training(base, 1.0, 9);
  EXPECT_EQ(ids_of({&sub.train, &sub.valid}), ids_of({&base.train, &base.valid}));
  EXPECT_EQ(ids_of({&sub.test}), ids_of({&base.test}));
}

TEST(Subsample, HalfPercentOfALargeTrainingPool) {
  // 263,245 + 37,607 training and validation queries.
  const std::size_t pool = 263245 + 37607;
  DatasetSplit base;
  base.train = numbered(263245);
  for (std::size_t i = 0; i < 37607; ++i) base.valid.queries.push_back(testing::make_query("v" + std::to_string(i), 2, 0));
  const DatasetSplit sub = subsample_training(base, 0.005, 3);
  const std::size_t combined = pool * 5 / 1000;  // integer oracle: 1504
  EXPECT_EQ(combined, 1504u);
  EXPECT_EQ(sub.train.size() + sub.valid.size(), combined);
  EXPECT_EQ(sub.valid.size(), combined / 8);
  EXPECT_EQ(sub.train.size(), 1316u);
  EXPECT_EQ(sub.valid.size(), 188u);
}

TEST(Subsample, FractionMustBeInRange) {
  const DatasetSplit base = split_dataset(numbered(20), {}, 1);
  EXPECT_THROW(subsample_training(base, 0.0, 1), std::invalid_argument);
  EXPECT_THROW(subsample_training(base, 1.5, 1), std::invalid_argument);
  EXPECT_THROW(subsample_training(base, -0.1, 1), std::invalid_argument);
}

TEST(Subsample, TinyFractionsStillLeaveTrainAndValid) {
  const DatasetSplit base = split_dataset(numbered(200), {}, 1);
  const DatasetSplit sub = subsample_training(base, 0.0001, 2);
  EXPECT_EQ(sub.train.size(), 1u);
  EXPECT_EQ(sub.valid.size(), 1u);
}

TEST(DatasetIo, TsvRoundTripWithAwkwardCharacters) {
  MatchDataset ds;
  MatchQuery q;
  q.query = "http://s/a,b";
  q.name = "Tab\there, comma";
  q.candidates = {"http://t/1", "http://t/2,x"};
  q.positive = 1;
  ds.queries.push_back(q);
  std::stringstream ss;
  write_dataset_tsv(ss, ds);
  const MatchDataset back = read_dataset_tsv(ss);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back.queries[0].query, q.query);
  EXPECT_EQ(back.queries[0].name, q.name);
  EXPECT_EQ(back.queries[0].candidates, q.candidates);
  EXPECT_EQ(back.queries[0].positive, 1u);
}

TEST(DatasetIo, ReaderRejectsBrokenRows) {
  for (std::string bad : {"a\tn\tx\tx\n", "a\tn\tz\tx,y\n", "a\tn\tx\n", "a\tn\tx\tx,x\n"}) {
    std::istringstream in(bad);
    EXPECT_THROW(read_dataset_tsv(in), DataError) << bad;
  }
}

TEST(DatasetIo, SplitFilesAndMetadata) {
  TempDir dir("split");
  const DatasetSplit split = split_dataset(numbered(30), {}, 42);
  write_split(dir.file("ds"), split);
  EXPECT_EQ(read_dataset_file(dir.file("ds.train.tsv")).size(), 21u);
  EXPECT_EQ(read_dataset_file(dir.file("ds.valid.tsv")).size(), 3u);
  EXPECT_EQ(read_dataset_file(dir.file("ds.test.tsv")).size(), 6u);
  const auto meta = nlohmann::json::parse(testing::read_file(dir.file("ds.meta.json")));
  EXPECT_EQ(meta["format"], "kgmatch-dataset/1");
  EXPECT_EQ(meta["counts"]["total"], 30);
  EXPECT_EQ(meta["seed"], 42);
  EXPECT_THROW(read_dataset_file(dir.file("missing.tsv")), DataError);
}

TEST(TypeMapIo, ReadsMultiValuedRows) {
  std::istringstream in("http://a\tX,Y\nhttp://b\tZ\n\n");
  const TypeMap types = read_type_map(in);
  EXPECT_EQ(types.at("http://a"), (std::vector<std::string>{"X", "Y"}));
  std::istringstream bad("http://a\n");
  EXPECT_THROW(read_type_map(bad), DataError);
}

// Property over synthetic twins: every query passes the invariant gate and
// rebuilding is byte-identical.
TEST(BuildDatasetProperties, SyntheticTwinsSatisfyInvariants) {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    SyntheticSpec spec;
    spec.entities = 300;
    spec.max_group = 6;
    spec.seed = seed;
    const SyntheticTwin twin = generate_twin_graphs(spec);
    const IngestedGraph src = ingest_triples(twin.source, {});
    const IngestedGraph tgt = ingest_triples(twin.target, {});
    const AlignmentSet align = extract_alignment(twin.alignment, src.kg, tgt.kg);
    const MatchDataset ds = build_matching_dataset(src.kg, src.names, tgt.kg, tgt.index, align);
    ASSERT_FALSE(ds.empty());
    EXPECT_NO_THROW(validate_dataset(ds, tgt.kg, tgt.names, tgt.index.policy()));
    for (const auto& q : ds.queries) {
      EXPECT_FALSE(check_query(q).has_value());
      const auto t = tgt.kg.find_entity(q.positive_iri());
      ASSERT_TRUE(t);
      const auto& names = tgt.names.at(*t);
      EXPECT_NE(std::find(names.begin(), names.end(), q.name), names.end());
    }
    const MatchDataset again = build_matching_dataset(src.kg, src.names, tgt.kg, tgt.index, align);
    std::ostringstream a, b;
    write_dataset_tsv(a, ds);
    write_dataset_tsv(b, again);
    EXPECT_EQ(a.str(), b.str());
  }
}

TEST(ValidateDataset, CatchesForeignCandidates) {
  const Scenario s({{"http://s/a", "A"}}, {{"http://t/a", "A"}, {"http://t/b", "A"}, {"http://t/c", "C"}},
                   {{"http://s/a", "http://t/a"}});
  MatchDataset ds = s.build();
  ASSERT_EQ(ds.size(), 1u);
  EXPECT_NO_THROW(validate_dataset(ds, s.target.kg, s.target.names, {}));
  ds.queries[0].candidates.push_back("http://t/c");
  EXPECT_THROW(validate_dataset(ds, s.target.kg, s.target.names, {}), DataError);
  ds.queries[0].candidates.pop_back();
  ds.queries.push_back(ds.queries[0]);
  EXPECT_THROW(validate_dataset(ds, s.target.kg, s.target.names, {}), DataError);
}

}  // namespace
}  // namespace kgmatch
