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

// Shared fixtures for the test suites.

#pragma once

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "kgmatch/kgmatch.hpp"

namespace kgmatch::testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("kgmatch-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

inline Kg graph_from(std::string_view ntriples, const GraphConfig& cfg = {}) {
  const ParsedTriples parsed = parse_ntriples(ntriples);
  return build_graph(parsed.triples, cfg);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline EntityId entity(const Kg& kg, const std::string& iri) { return kg.find_entity(iri).value(); }

inline MatchQuery make_query(std::string id, std::size_t n, std::size_t positive, std::string name = "N") {
  MatchQuery q;
  q.query = std::move(id);
  q.name = std::move(name);
  for (std::size_t i = 0; i < n; ++i) q.candidates.push_back(q.query + "/c" + std::to_string(i));
  q.positive = positive;
  return q;
}

// Scores looked up by (query, candidate index); handy for hand-built fixtures.
struct TableScorer {
  std::map<std::string, std::vector<double>> scores;
  std::vector<double> score(const MatchQuery& q) const { return scores.at(q.query); }
};

// Runs the command-line tool and returns its exit status.
inline int run_cli(const std::string& args, const std::string& log = "/dev/null") {
  const std::string cmd = std::string(KGMATCH_CLI) + " " + args + " >" + log + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace kgmatch::testing
