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

#include <cmath>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "kgmatch/errors.hpp"
#include "kgmatch/random.hpp"
#include "kgmatch/text.hpp"

namespace kgmatch {

using Vector = std::vector<float>;

// token -> d-dimensional vector. Tokens missing from the table get a
// deterministic small random vector derived from (token, fallback seed).
class EmbeddingTable {
 public:
  explicit EmbeddingTable(std::size_t dim, std::uint64_t fallback_seed = 0)
      : dim_(dim), fallback_seed_(fallback_seed) {
    if (dim == 0) throw std::invalid_argument("embedding dimension must be >= 1");
  }

  std::size_t dimension() const { return dim_; }
  std::size_t size() const { return tokens_.size(); }
  std::uint64_t fallback_seed() const { return fallback_seed_; }
  void set_fallback_seed(std::uint64_t seed) { fallback_seed_ = seed; }

  const std::string& token(std::size_t row) const { return tokens_[row]; }
  std::span<const float> row(std::size_t r) const { return std::span(values_).subspan(r * dim_, dim_); }

  void add(std::string token, std::span<const float> vec) {
    if (vec.size() != dim_) throw std::invalid_argument("vector for '" + token + "' has wrong dimension");
    for (float v : vec) {
      if (!std::isfinite(v)) throw std::invalid_argument("non-finite component for '" + token + "'");
    }
    if (!index_.try_emplace(token, tokens_.size()).second) {
      throw std::invalid_argument("duplicate token '" + token + "'");
    }
    tokens_.push_back(std::move(token));
    values_.insert(values_.end(), vec.begin(), vec.end());
  }

  bool contains(const std::string& token) const { return index_.contains(token); }

  std::optional<std::span<const float>> find(const std::string& token) const {
    auto it = index_.find(token);
    if (it == index_.end()) return std::nullopt;
    return row(it->second);
  }

  Vector get_vector(const std::string& token) const {
    if (auto v = find(token)) return Vector(v->begin(), v->end());
    return fallback_vector(token);
  }

  Vector fallback_vector(const std::string& token) const {
    Rng rng(derive_seed(fallback_seed_, fnv1a64(token)));
    const double half = 0.5 / static_cast<double>(dim_);
    Vector v(dim_);
    for (float& x : v) x = static_cast<float>(rng.uniform(-half, half));
    return v;
  }

  // word2vec text format: `count dim` header, then `token v1 ... vd`.
  void save(std::ostream& out) const {
    out << tokens_.size() << ' ' << dim_ << '\n';
    for (std::size_t r = 0; r < tokens_.size(); ++r) {
      out << tokens_[r];
      for (float v : row(r)) out << ' ' << format_float(v);
      out << '\n';
    }
    if (!out) throw std::runtime_error("embedding table write failed");
  }

  static EmbeddingTable load(std::istream& in, std::uint64_t fallback_seed = 0) {
    std::string line;
    if (!std::getline(in, line)) throw DataError("embedding table: missing header");
    const auto header = split(line, ' ');
    std::size_t count = 0;
    std::size_t dim = 0;
    if (header.size() != 2 || !parse_int(header[0], count) || !parse_int(header[1], dim) || dim == 0) {
      throw DataError("embedding table line 1: malformed header");
    }
    EmbeddingTable table(dim, fallback_seed);
    std::vector<float> vec(dim);
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      auto where = [&] { return "embedding table line " + std::to_string(line_no) + ": "; };
      std::vector<std::string_view> fields;
      for (auto f : split(line, ' ')) {
        if (!f.empty()) fields.push_back(f);
      }
      if (fields.size() != dim + 1) {
        throw DataError(where() + "expected " + std::to_string(dim) + " values, got " +
                        std::to_string(fields.size() - 1));
      }
      for (std::size_t i = 0; i < dim; ++i) {
        if (!parse_float(fields[i + 1], vec[i]) || !std::isfinite(vec[i])) {
          throw DataError(where() + "bad number '" + std::string(fields[i + 1]) + "'");
        }
      }
      try {
        table.add(std::string(fields[0]), vec);
      } catch (const std::invalid_argument& e) {
        throw DataError(where() + e.what());
      }
    }
    if (table.size() != count) {
      throw DataError("embedding table: header announces " + std::to_string(count) + " rows, found " +
                      std::to_string(table.size()));
    }
    return table;
  }

 private:
  std::size_t dim_;
  std::uint64_t fallback_seed_;
  std::vector<std::string> tokens_;
  std::vector<float> values_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace kgmatch
