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

#include <fstream>
#include <future>
#include <span>
#include <string>
#include <vector>

#include "kgmatch/dataset.hpp"
#include "kgmatch/embedding_table.hpp"
#include "kgmatch/graph.hpp"
#include "kgmatch/name_index.hpp"
#include "kgmatch/ntriples.hpp"
#include "kgmatch/random.hpp"
#include "kgmatch/skipgram.hpp"
#include "kgmatch/walks.hpp"

namespace kgmatch {

// Stage seeds fan out from one global seed by stable hashing, so each stage
// can be rerun on its own and still reproduce.
inline std::uint64_t stage_seed(std::uint64_t global, std::string_view stage) {
  return derive_seed(global, stage);
}

inline std::vector<std::string> default_name_predicates() {
  return {std::string(kFoafName), std::string(kRdfsLabel)};
}

struct IngestOptions {
  GraphConfig graph;
  std::vector<std::string> name_predicates = default_name_predicates();
  std::vector<std::string> languages;
  NormalizationPolicy policy;
  unsigned threads = 1;
};

struct IngestedGraph {
  Kg kg;
  EntityNames names;
  NameIndex index;
  ParseStats stats;
};

inline IngestedGraph index_graph(Kg kg, const IngestOptions& options, ParseStats stats = {}) {
  IngestedGraph g{std::move(kg), {}, NameIndex(options.policy), std::move(stats)};
  g.names = extract_names(g.kg, options.name_predicates, options.languages);
  g.index = build_index(g.names, options.policy);
  return g;
}

inline IngestedGraph ingest_triples(std::span<const Triple> triples, const IngestOptions& options) {
  return index_graph(build_graph(triples, options.graph), options);
}

// Parses every file (in parallel when threads > 1) and merges them in the
// given file order, so interning is independent of the thread count.
inline IngestedGraph ingest_files(const std::vector<std::string>& paths, const IngestOptions& options) {
  std::vector<ParsedTriples> parsed(paths.size());
  if (options.threads > 1 && paths.size() > 1) {
    std::vector<std::future<ParsedTriples>> jobs;
    for (const auto& p : paths) jobs.push_back(std::async(std::launch::async, [&p] { return parse_ntriples_file(p); }));
    for (std::size_t i = 0; i < jobs.size(); ++i) parsed[i] = jobs[i].get();
  } else {
    for (std::size_t i = 0; i < paths.size(); ++i) parsed[i] = parse_ntriples_file(paths[i]);
  }
  KgBuilder builder(options.graph);
  ParseStats total;
  for (auto& file : parsed) {
    for (const Triple& t : file.triples) builder.add(t);
    total.lines += file.stats.lines;
    total.triples += file.stats.triples;
    total.malformed += file.stats.malformed;
    for (auto& err : file.stats.errors) {
      if (total.errors.size() < ParseStats::kMaxRecordedErrors) total.errors.push_back(err);
    }
    file.triples.clear();
  }
  return index_graph(std::move(builder).build(), options, std::move(total));
}

struct EmbeddingOptions {
  WalkConfig walks;
  SkipgramConfig skipgram;
  unsigned threads = 1;
};

inline SkipgramResult embed_graph(const Kg& kg, const EmbeddingOptions& options) {
  const WalkCorpus corpus = generate_walks(kg, options.walks, options.threads);
  return train_skipgram(corpus, options.skipgram);
}

}  // namespace kgmatch
