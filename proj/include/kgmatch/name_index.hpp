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

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "kgmatch/binary_io.hpp"
#include "kgmatch/graph.hpp"
#include "kgmatch/text.hpp"

namespace kgmatch {

struct NormalizationPolicy {
  bool casefold = false;

  std::string describe() const { return casefold ? "nfc+ws+casefold" : "nfc+ws"; }
  bool operator==(const NormalizationPolicy&) const = default;
};

// NFC, trimmed, internal whitespace runs collapsed to one space. Case is
// preserved unless the policy asks for Unicode case folding.
inline std::string normalize_name(std::string_view raw, const NormalizationPolicy& policy = {}) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw std::runtime_error("ICU NFC normalizer unavailable");

  icu::UnicodeString text = icu::UnicodeString::fromUTF8(
      icu::StringPiece(raw.data(), static_cast<std::int32_t>(raw.size())));
  if (policy.casefold) text.foldCase();
  icu::UnicodeString normalized = nfc->normalize(text, status);
  if (U_FAILURE(status)) throw std::runtime_error("ICU normalization failed");

  icu::UnicodeString collapsed;
  bool pending_space = false;
  for (std::int32_t i = 0; i < normalized.length();) {
    const UChar32 cp = normalized.char32At(i);
    i += U16_LENGTH(cp);
    if (u_isUWhiteSpace(cp)) {
      pending_space = !collapsed.isEmpty();
      continue;
    }
    if (pending_space) collapsed.append(static_cast<UChar>(' '));
    pending_space = false;
    collapsed.append(cp);
  }
  std::string out;
  collapsed.toUTF8String(out);
  return out;
}

// Inverted index: normalized name -> sorted, duplicate-free entity ids.
class NameIndex {
 public:
  explicit NameIndex(NormalizationPolicy policy = {}) : policy_(policy) {}

  const NormalizationPolicy& policy() const { return policy_; }
  std::size_t name_count() const { return postings_.size(); }
  std::size_t posting_count() const {
    std::size_t n = 0;
    for (const auto& [name, ids] : postings_) n += ids.size();
    return n;
  }

  std::span<const EntityId> lookup(std::string_view name) const {
    return lookup_normalized(normalize_name(name, policy_));
  }
  std::span<const EntityId> lookup_normalized(const std::string& key) const {
    auto it = postings_.find(key);
    if (it == postings_.end()) return {};
    return it->second;
  }

  // Keys in byte order, for deterministic output.
  std::vector<std::string> sorted_names() const {
    std::vector<std::string> keys;
    keys.reserve(postings_.size());
    for (const auto& [name, ids] : postings_) keys.push_back(name);
    std::sort(keys.begin(), keys.end());
    return keys;
  }

  // `name \t id,id,...` per line, names sorted.
  void write_tsv(std::ostream& out) const {
    for (const std::string& name : sorted_names()) {
      out << escape_field(name) << '\t';
      bool first = true;
      for (EntityId id : postings_.at(name)) {
        if (!first) out << ',';
        out << to_index(id);
        first = false;
      }
      out << '\n';
    }
  }

  void save(std::ostream& out) const {
    BinaryWriter w(out);
    w.magic("KGMNIX01");
    w.u8(policy_.casefold ? 1 : 0);
    const auto names = sorted_names();
    w.u64(names.size());
    for (const std::string& name : names) {
      const auto& ids = postings_.at(name);
      w.str(name);
      w.u64(ids.size());
      for (EntityId id : ids) w.u32(to_index(id));
    }
    w.check();
  }

  static NameIndex load(std::istream& in) {
    BinaryReader r(in, "name index snapshot");
    r.expect_magic("KGMNIX01");
    NameIndex index(NormalizationPolicy{r.u8() != 0});
    const std::uint64_t n = r.count();
    for (std::uint64_t i = 0; i < n; ++i) {
      std::string name = r.str();
      std::vector<EntityId> ids(r.count());
      for (EntityId& id : ids) id = EntityId{r.u32()};
      if (!std::is_sorted(ids.begin(), ids.end()) ||
          std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
        throw DataError("name index snapshot: unsorted postings for '" + name + "'");
      }
      index.postings_.emplace(std::move(name), std::move(ids));
    }
    return index;
  }

 private:
  friend NameIndex build_index(const EntityNames&, const NormalizationPolicy&);

  NormalizationPolicy policy_;
  std::unordered_map<std::string, std::vector<EntityId>> postings_;
};

inline NameIndex build_index(const EntityNames& names, const NormalizationPolicy& policy = {}) {
  NameIndex index(policy);
  for (const auto& [entity, list] : names) {
    for (const std::string& name : list) {
      index.postings_[normalize_name(name, policy)].push_back(entity);
    }
  }
  for (auto& [name, ids] : index.postings_) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  }
  return index;
}

}  // namespace kgmatch
