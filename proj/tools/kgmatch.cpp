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

// kgmatch: command-line driver for the entity matching pipeline.
//
//   synth -> ingest (x2) -> build-dataset -> train-embeddings (x2)
//         -> train-matcher -> evaluate / sweep
//
// Exit codes: 0 success, 1 usage or configuration error, 2 data error.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <system_error>
#include <thread>
#include <vector>

#include "kgmatch/kgmatch.hpp"

namespace {

using namespace kgmatch;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  return in;
}

std::ofstream open_output(const std::string& path) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

Kg load_graph(const std::string& prefix) {
  auto in = open_input(prefix + ".kg");
  return Kg::load(in);
}

NameIndex load_index(const std::string& prefix) {
  auto in = open_input(prefix + ".idx");
  return NameIndex::load(in);
}

EmbeddingTable load_table(const std::string& path, std::uint64_t fallback_seed) {
  auto in = open_input(path);
  return EmbeddingTable::load(in, fallback_seed);
}

TypeMap load_types(const std::string& path) {
  auto in = open_input(path);
  return read_type_map(in);
}

std::string basename(const std::string& path) { return std::filesystem::path(path).filename().string(); }

struct Globals {
  std::uint64_t seed = 1;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
};

// ---------------------------------------------------------------- synth

struct SynthArgs {
  SyntheticSpec spec;
  std::string out_dir;
};

void add_synth(CLI::App& app, SynthArgs& a) {
  auto* cmd = app.add_subcommand("synth", "Generate noisy twin graphs with a known alignment");
  cmd->add_option("--out-dir", a.out_dir, "Output directory")->required();
  cmd->add_option("--entities", a.spec.entities, "Entities per graph")->capture_default_str();
  cmd->add_option("--degree", a.spec.mean_out_degree, "Mean out-degree")->capture_default_str();
  cmd->add_option("--predicates", a.spec.predicates, "Relation predicates")->capture_default_str();
  cmd->add_option("--types", a.spec.types, "Latent entity types")->capture_default_str();
  cmd->add_option("--relations", a.spec.relations_per_type, "Relations per type")->capture_default_str();
  cmd->add_option("--zipf", a.spec.zipf_exponent, "Name-collision power-law exponent")->capture_default_str();
  cmd->add_option("--min-group", a.spec.min_group, "Smallest name group")->capture_default_str();
  cmd->add_option("--max-group", a.spec.max_group, "Largest name group")->capture_default_str();
  cmd->add_option("--noise", a.spec.noise, "Per-copy edge drop rate")->capture_default_str();
  cmd->add_option("--source-ns", a.spec.source_namespace, "Source IRI namespace")->capture_default_str();
  cmd->add_option("--target-ns", a.spec.target_namespace, "Target IRI namespace")->capture_default_str();
}

int run_synth(SynthArgs a, const Globals& g) {
  a.spec.seed = stage_seed(g.seed, "synth");
  const SyntheticTwin twin = generate_twin_graphs(a.spec);
  const SyntheticFiles files = write_twin_graphs(twin, a.out_dir);
  std::cerr << "synth: " << twin.source.size() << " source triples, " << twin.target.size()
            << " target triples, " << twin.alignment.size() << " links -> " << a.out_dir << "\n";
  std::cerr << "synth: wrote " << files.source << ", " << files.target << ", " << files.alignment << "\n";
  return 0;
}

// ---------------------------------------------------------------- ingest

struct IngestArgs {
  std::vector<std::string> inputs;
  std::string out;
  IngestOptions options;
};

void add_ingest(CLI::App& app, IngestArgs& a) {
  auto* cmd = app.add_subcommand("ingest", "Parse N-Triples into a graph snapshot and name index");
  cmd->add_option("--input", a.inputs, "N-Triples file(s), optionally gzip-compressed")->required();
  cmd->add_option("--out", a.out, "Output prefix (<out>.kg, <out>.idx, <out>.names.tsv)")->required();
  cmd->add_option("--name-predicate", a.options.name_predicates, "Name predicate IRI(s)")->capture_default_str();
  cmd->add_option("--language", a.options.languages, "Accepted name language tags (default: all)");
  cmd->add_option("--keep-predicate", a.options.graph.keep_predicates, "Keep only these predicates");
  cmd->add_option("--drop-predicate", a.options.graph.drop_predicates, "Drop these predicates");
  cmd->add_flag("--casefold", a.options.policy.casefold, "Case-fold names in the index");
}

int run_ingest(IngestArgs a, const Globals& g) {
  a.options.threads = g.threads;
  const IngestedGraph graph = ingest_files(a.inputs, a.options);
  for (const auto& err : graph.stats.errors) {
    std::cerr << "ingest: malformed line " << err.line << ": " << err.message << "\n";
  }
  {
    auto out = open_output(a.out + ".kg");
    graph.kg.save(out);
  }
  {
    auto out = open_output(a.out + ".idx");
    graph.index.save(out);
  }
  {
    auto out = open_output(a.out + ".names.tsv");
    graph.index.write_tsv(out);
  }
  std::cerr << "ingest: " << graph.kg.entity_count() << " entities, " << graph.kg.triple_count() << " triples ("
            << graph.kg.edge_count() << " edges, " << graph.kg.literal_count() << " literals), "
            << graph.names.size() << " named entities, " << graph.index.name_count() << " distinct names, "
            << graph.stats.malformed << " malformed lines\n";
  return 0;
}

// ---------------------------------------------------------------- build-dataset

struct BuildArgs {
  std::string source;
  std::string target;
  std::vector<std::string> alignment;
  std::string out;
  std::string direction;
  bool reverse = false;
  std::vector<std::string> name_predicates = default_name_predicates();
  std::vector<std::string> languages;
  std::vector<std::string> alignment_predicates{std::string(kOwlSameAs)};
  DisambiguationFilter filter{{}, {"(disambiguation)"}};
  std::vector<double> ratios{0.7, 0.1, 0.2};
};

void add_build(CLI::App& app, BuildArgs& a) {
  auto* cmd = app.add_subcommand("build-dataset", "Build and split an ambiguous matching dataset");
  cmd->add_option("--source", a.source, "Source graph prefix (from ingest)")->required();
  cmd->add_option("--target", a.target, "Target graph prefix (from ingest)")->required();
  cmd->add_option("--alignment", a.alignment, "N-Triples file(s) with sameAs links")->required();
  cmd->add_option("--out", a.out, "Output prefix for .train/.valid/.test.tsv and .meta.json")->required();
  cmd->add_option("--direction", a.direction, "Direction label stored in the metadata");
  cmd->add_flag("--reverse", a.reverse, "Swap source and target roles");
  cmd->add_option("--name-predicate", a.name_predicates, "Name predicate IRI(s)")->capture_default_str();
  cmd->add_option("--language", a.languages, "Accepted name language tags (default: all)");
  cmd->add_option("--alignment-predicate", a.alignment_predicates, "Alignment predicate IRI(s)")
      ->capture_default_str();
  cmd->add_option("--disambiguation-class", a.filter.class_iris, "rdf:type marking disambiguation pages");
  cmd->add_option("--disambiguation-substring", a.filter.iri_substrings, "IRI substring marking disambiguation pages")
      ->capture_default_str();
  cmd->add_option("--ratios", a.ratios, "train valid test ratios")->expected(3)->capture_default_str();
}

int run_build(BuildArgs a, const Globals& g) {
  if (a.reverse) std::swap(a.source, a.target);
  const Kg source = load_graph(a.source);
  const Kg target = load_graph(a.target);
  const NameIndex target_index = load_index(a.target);

  std::vector<Triple> links;
  for (const auto& path : a.alignment) {
    ParsedTriples parsed = parse_ntriples_file(path);
    links.insert(links.end(), std::make_move_iterator(parsed.triples.begin()),
                 std::make_move_iterator(parsed.triples.end()));
  }
  const AlignmentSet alignment = extract_alignment(links, source, target, a.filter, a.alignment_predicates);
  for (const auto& c : alignment.conflicts) {
    std::cerr << "build-dataset: " << c.source << " maps to both " << c.kept_target << " and " << c.rejected_target
              << "; keeping the first\n";
  }
  if (alignment.pairs.empty()) std::cerr << "build-dataset: warning: empty alignment, dataset will be empty\n";

  const EntityNames source_names = extract_names(source, a.name_predicates, a.languages);
  const EntityNames target_names = extract_names(target, a.name_predicates, a.languages);
  const std::string direction =
      a.direction.empty() ? basename(a.source) + "->" + basename(a.target) : a.direction;
  MatchDataset ds = build_matching_dataset(source, source_names, target, target_index, alignment, direction);
  ds.provenance.source_dump = basename(a.source);
  ds.provenance.target_dump = basename(a.target);
  validate_dataset(ds, target, target_names, target_index.policy());

  const DatasetSplit split = split_dataset(ds, {a.ratios[0], a.ratios[1], a.ratios[2]}, stage_seed(g.seed, "split"));
  const auto out_dir = std::filesystem::path(a.out).parent_path();
  if (!out_dir.empty()) std::filesystem::create_directories(out_dir);
  write_split(a.out, split);
  std::cerr << "build-dataset: " << alignment.pairs.size() << " aligned pairs (" << alignment.missing
            << " missing, " << alignment.disambiguation << " disambiguation, " << alignment.conflicts.size()
            << " conflicts) -> " << ds.size() << " queries; split " << split.train.size() << "/"
            << split.valid.size() << "/" << split.test.size() << "; skipped: " << ds.provenance.skipped.no_name
            << " unnamed, " << ds.provenance.skipped.single_candidate << " unambiguous, "
            << ds.provenance.skipped.positive_not_found << " name mismatch\n";
  return 0;
}

// ---------------------------------------------------------------- train-embeddings

struct EmbedArgs {
  std::string graph;
  std::string out;
  std::string walks_out;
  EmbeddingOptions options;
};

void add_embed(CLI::App& app, EmbedArgs& a) {
  auto* cmd = app.add_subcommand("train-embeddings", "Random-walk corpus + skip-gram embeddings for one graph");
  cmd->add_option("--graph", a.graph, "Graph prefix (from ingest)")->required();
  cmd->add_option("--out", a.out, "Embedding table (word2vec text format)")->required();
  cmd->add_option("--walks-out", a.walks_out, "Also write the walk corpus as text");
  cmd->add_option("--walks", a.options.walks.walks_per_entity, "Walks per entity (k)")->capture_default_str();
  cmd->add_option("--depth", a.options.walks.depth, "Hops per walk (l)")->capture_default_str();
  cmd->add_option("--dim", a.options.skipgram.dim, "Embedding dimension (d)")->capture_default_str();
  cmd->add_option("--window", a.options.skipgram.window, "Context window")->capture_default_str();
  cmd->add_option("--negatives", a.options.skipgram.negatives, "Negative samples per pair")->capture_default_str();
  cmd->add_option("--epochs", a.options.skipgram.epochs, "Training epochs")->capture_default_str();
  cmd->add_option("--lr", a.options.skipgram.learning_rate, "Initial learning rate")->capture_default_str();
  cmd->add_option("--subsample", a.options.skipgram.subsample, "Subsampling threshold (0 = off)")
      ->capture_default_str();
}

int run_embed(EmbedArgs a, const Globals& g) {
  a.options.walks.validate();
  a.options.skipgram.validate();
  a.options.threads = g.threads;
  a.options.walks.seed = stage_seed(g.seed, "walks");
  a.options.skipgram.seed = stage_seed(g.seed, "skipgram");
  const Kg kg = load_graph(a.graph);
  const WalkCorpus corpus = generate_walks(kg, a.options.walks, a.options.threads);
  if (!a.walks_out.empty()) {
    auto out = open_output(a.walks_out);
    corpus.write_text(out);
  }
  const SkipgramResult result = train_skipgram(corpus, a.options.skipgram);
  for (std::size_t e = 0; e < result.epoch_loss.size(); ++e) {
    std::cerr << "train-embeddings: epoch " << e + 1 << " mean loss " << result.epoch_loss[e] << "\n";
  }
  auto out = open_output(a.out);
  result.table.save(out);
  std::cerr << "train-embeddings: " << corpus.walk_count() << " walks, " << result.table.size() << " vectors of dim "
            << result.table.dimension() << " -> " << a.out << "\n";
  return 0;
}

// ---------------------------------------------------------------- train-matcher / sweep

struct MatcherArgs {
  std::string train;
  std::string valid;
  std::string source_emb;
  std::string target_emb;
  std::string kind = "mlp";
  TrainConfig cfg;
};

void add_matcher_options(CLI::App* cmd, MatcherArgs& a) {
  cmd->add_option("--train", a.train, "Training split (TSV)")->required();
  cmd->add_option("--valid", a.valid, "Validation split (TSV)")->required();
  cmd->add_option("--source-emb", a.source_emb, "Source embedding table")->required();
  cmd->add_option("--target-emb", a.target_emb, "Target embedding table")->required();
  cmd->add_option("--kind", a.kind, "mlp or logreg")->capture_default_str();
  cmd->add_option("--hidden", a.cfg.hidden, "Hidden units")->capture_default_str();
  cmd->add_option("--lr", a.cfg.learning_rate, "Adam learning rate")->capture_default_str();
  cmd->add_option("--batch", a.cfg.batch_size, "Mini-batch size")->capture_default_str();
  cmd->add_option("--epochs", a.cfg.epochs, "Maximum epochs")->capture_default_str();
  cmd->add_option("--patience", a.cfg.patience, "Early-stopping patience (0 = off)")->capture_default_str();
}

struct LoadedMatcherInputs {
  MatchDataset train;
  MatchDataset valid;
  EmbeddingTable source;
  EmbeddingTable target;
};

LoadedMatcherInputs load_matcher_inputs(MatcherArgs& a, const Globals& g) {
  a.cfg.kind = parse_model_kind(a.kind);
  a.cfg.seed = stage_seed(g.seed, "matcher");
  a.cfg.validate();
  const std::uint64_t fallback = stage_seed(g.seed, "fallback");
  return {read_dataset_file(a.train), read_dataset_file(a.valid), load_table(a.source_emb, fallback),
          load_table(a.target_emb, fallback)};
}

struct TrainMatcherArgs {
  MatcherArgs m;
  std::string out;
  std::string log;
};

void add_train_matcher(CLI::App& app, TrainMatcherArgs& a) {
  auto* cmd = app.add_subcommand("train-matcher", "Train the point-wise match classifier");
  add_matcher_options(cmd, a.m);
  cmd->add_option("--out", a.out, "Model checkpoint")->required();
  cmd->add_option("--log", a.log, "Per-epoch training log (TSV)");
}

int run_train_matcher(TrainMatcherArgs a, const Globals& g) {
  LoadedMatcherInputs in = load_matcher_inputs(a.m, g);
  const auto pairs = expand_pairs(in.train);
  std::cerr << "train-matcher: " << in.train.size() << " queries, " << pairs.size() << " pairs, kind "
            << to_string(a.m.cfg.kind) << "\n";
  const TrainResult result = train_matcher(pairs, in.source, in.target, a.m.cfg, &in.valid);
  std::ofstream log;
  if (!a.log.empty()) {
    log = open_output(a.log);
    log << "epoch\tmean_nll\tvalid_mrr\n";
  }
  for (const EpochLog& e : result.log) {
    std::cerr << "train-matcher: epoch " << e.epoch << " nll " << e.mean_nll << " valid MRR " << e.valid_mrr << "\n";
    if (log.is_open()) log << e.epoch << '\t' << format_float(e.mean_nll) << '\t' << format_float(e.valid_mrr) << '\n';
  }
  nlohmann::json meta = {{"kind", to_string(a.m.cfg.kind)},
                         {"hidden", a.m.cfg.hidden},
                         {"learning_rate", a.m.cfg.learning_rate},
                         {"batch_size", a.m.cfg.batch_size},
                         {"best_epoch", result.best_epoch},
                         {"train", basename(a.m.train)},
                         {"valid", basename(a.m.valid)},
                         {"seed", g.seed}};
  auto out = open_output(a.out);
  result.model.save(out, meta);
  std::cerr << "train-matcher: best epoch " << result.best_epoch << " -> " << a.out << "\n";
  return 0;
}

struct SweepArgs {
  MatcherArgs m;
  std::vector<double> percents{0.01, 0.05, 0.1, 0.5, 1, 5, 10, 50, 100};
  std::size_t repeats = 0;
  std::string out;
  std::string csv;
};

void add_sweep(CLI::App& app, SweepArgs& a) {
  auto* cmd = app.add_subcommand("sweep", "Validation MRR as a function of training-set size");
  add_matcher_options(cmd, a.m);
  cmd->add_option("--percents", a.percents, "Training percentages in (0, 100]")->capture_default_str();
  cmd->add_option("--repeats", a.repeats, "Repeats per point (0 = 10 for the four smallest, 5 otherwise)")
      ->capture_default_str();
  cmd->add_option("--out", a.out, "Curve JSON (stdout when omitted)");
  cmd->add_option("--csv", a.csv, "Curve CSV");
}

int run_sweep(SweepArgs a, const Globals& g) {
  LoadedMatcherInputs in = load_matcher_inputs(a.m, g);
  DatasetSplit base{std::move(in.train), std::move(in.valid), {}, {}, 0};
  const auto repeats =
      a.repeats == 0 ? default_sweep_repeats(a.percents) : std::vector<std::size_t>(a.percents.size(), a.repeats);
  const TrainConfig cfg = a.m.cfg;
  auto train_and_score = [&](const DatasetSplit& split, std::uint64_t seed) {
    TrainConfig c = cfg;
    c.seed = seed;
    const auto pairs = expand_pairs(split.train);
    const TrainResult r = train_matcher(pairs, in.source, in.target, c, &split.valid);
    return mean_reciprocal_rank(ModelScorer{r.model, in.source, in.target}, split.valid);
  };
  const SweepCurve curve = training_size_sweep(a.percents, repeats, base, train_and_score, stage_seed(g.seed, "sweep"));
  for (const auto& p : curve.points) {
    std::cerr << "sweep: " << p.percent << "% mean MRR " << p.mean << " [" << p.ci_low << ", " << p.ci_high << "] over "
              << p.values.size() << " runs\n";
  }
  const std::string json = to_json(curve).dump(2);
  if (a.out.empty()) {
    std::cout << json << "\n";
  } else {
    auto out = open_output(a.out);
    out << json << "\n";
  }
  if (!a.csv.empty()) {
    auto out = open_output(a.csv);
    write_curve_csv(out, curve);
  }
  return 0;
}

// ---------------------------------------------------------------- evaluate

struct EvalArgs {
  std::string dataset;
  std::string model;
  std::string source_emb;
  std::string target_emb;
  bool oracle = false;
  bool random_model = false;
  std::string source_types;
  std::string target_types;
  std::vector<std::size_t> buckets;
  std::string out;
  std::string csv_prefix;
};

void add_evaluate(CLI::App& app, EvalArgs& a) {
  auto* cmd = app.add_subcommand("evaluate", "Rank candidates and report MRR with breakdowns");
  cmd->add_option("--dataset", a.dataset, "Dataset split to evaluate (TSV)")->required();
  cmd->add_option("--model", a.model, "Model checkpoint");
  cmd->add_option("--source-emb", a.source_emb, "Source embedding table");
  cmd->add_option("--target-emb", a.target_emb, "Target embedding table");
  auto* oracle = cmd->add_flag("--oracle", a.oracle, "Debug: rank with the ground truth");
  auto* random = cmd->add_flag("--random-model", a.random_model, "Debug: rank with random scores");
  oracle->excludes(random);
  cmd->add_option("--source-types", a.source_types, "Type map for query entities (TSV)");
  cmd->add_option("--target-types", a.target_types, "Type map for candidate entities (TSV)");
  cmd->add_option("--buckets", a.buckets, "Candidate-count bucket edges (default powers of two)");
  cmd->add_option("--out", a.out, "Report JSON (stdout when omitted)");
  cmd->add_option("--csv-prefix", a.csv_prefix, "Also write <prefix>.buckets.csv and <prefix>.types.csv");
}

int run_evaluate(EvalArgs a, const Globals& g) {
  const MatchDataset ds = read_dataset_file(a.dataset, basename(a.dataset));
  if (ds.empty()) throw DataError("dataset " + a.dataset + " is empty");
  TypeMap source_types;
  TypeMap target_types;
  EvalOptions options;
  options.threads = g.threads;
  options.bucket_edges = a.buckets;
  if (!a.source_types.empty()) {
    source_types = load_types(a.source_types);
    options.query_types = &source_types;
  }
  if (!a.target_types.empty()) {
    target_types = load_types(a.target_types);
    options.candidate_types = &target_types;
  }

  EvalReport report;
  std::string model_id;
  if (a.oracle) {
    report = evaluate(OracleScorer{}, ds, options);
    model_id = "oracle";
  } else if (a.random_model) {
    report = evaluate(RandomScorer{stage_seed(g.seed, "random-model")}, ds, options);
    model_id = "random";
  } else {
    if (a.model.empty() || a.source_emb.empty() || a.target_emb.empty()) {
      throw ConfigError("evaluate needs --model, --source-emb and --target-emb (or --oracle / --random-model)");
    }
    auto in = open_input(a.model);
    const MatcherModel model = MatcherModel::load(in);
    const std::uint64_t fallback = stage_seed(g.seed, "fallback");
    const EmbeddingTable source = load_table(a.source_emb, fallback);
    const EmbeddingTable target = load_table(a.target_emb, fallback);
    if (model.input_dim() != 2 * source.dimension()) {
      throw DataError("model input dimension does not match the embedding tables");
    }
    report = evaluate(ModelScorer{model, source, target}, ds, options);
    model_id = basename(a.model);
  }
  report.metadata = {{"model", model_id}, {"dataset", basename(a.dataset)}, {"seed", g.seed}};
  const std::string json = to_json(report).dump(2);
  if (a.out.empty()) {
    std::cout << json << "\n";
  } else {
    auto out = open_output(a.out);
    out << json << "\n";
  }
  if (!a.csv_prefix.empty()) {
    auto buckets = open_output(a.csv_prefix + ".buckets.csv");
    write_bucket_csv(buckets, report.buckets);
    auto types = open_output(a.csv_prefix + ".types.csv");
    write_type_csv(types, report.per_type);
  }
  std::cerr << "evaluate: " << report.queries << " queries, MRR " << report.mrr << " (random baseline "
            << report.random_baseline << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kgmatch: entity matching across knowledge graphs"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI config file; command-line flags take precedence");
  Globals globals;
  app.add_option("--seed", globals.seed, "Global seed")->capture_default_str();
  app.add_option("--threads", globals.threads, "Worker threads (1 = deterministic)")->check(CLI::PositiveNumber);

  SynthArgs synth;
  IngestArgs ingest;
  BuildArgs build;
  EmbedArgs embed;
  TrainMatcherArgs train;
  EvalArgs eval;
  SweepArgs sweep;
  add_synth(app, synth);
  add_ingest(app, ingest);
  add_build(app, build);
  add_embed(app, embed);
  add_train_matcher(app, train);
  add_evaluate(app, eval);
  add_sweep(app, sweep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (app.got_subcommand("synth")) return run_synth(synth, globals);
    if (app.got_subcommand("ingest")) return run_ingest(ingest, globals);
    if (app.got_subcommand("build-dataset")) return run_build(build, globals);
    if (app.got_subcommand("train-embeddings")) return run_embed(embed, globals);
    if (app.got_subcommand("train-matcher")) return run_train_matcher(train, globals);
    if (app.got_subcommand("evaluate")) return run_evaluate(eval, globals);
    if (app.got_subcommand("sweep")) return run_sweep(sweep, globals);
  } catch (const std::invalid_argument& e) {
    std::cerr << "kgmatch: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "kgmatch: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
