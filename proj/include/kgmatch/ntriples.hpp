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

#include <zlib.h>

#include <cctype>
#include <cerrno>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "kgmatch/errors.hpp"

namespace kgmatch {

enum class TermKind : std::uint8_t { kIri, kBlank, kLiteral };

// One RDF term. IRIs are stored without angle brackets and with escapes
// decoded; blank nodes keep their "_:" prefix so they can be interned in the
// same table as IRIs without colliding.
struct Term {
  TermKind kind = TermKind::kIri;
  std::string value;
  std::string language;  // literals only
  std::string datatype;  // literals only, uninterpreted

  static Term iri(std::string v) { return {TermKind::kIri, std::move(v), {}, {}}; }
  static Term blank(std::string label) { return {TermKind::kBlank, "_:" + std::move(label), {}, {}}; }
  static Term literal(std::string lexical, std::string lang = {}, std::string type = {}) {
    return {TermKind::kLiteral, std::move(lexical), std::move(lang), std::move(type)};
  }

  bool is_literal() const { return kind == TermKind::kLiteral; }
  bool operator==(const Term&) const = default;
};

struct Triple {
  Term subject;
  Term predicate;
  Term object;
  bool operator==(const Triple&) const = default;
};

struct ParseError {
  std::uint64_t line = 0;
  std::string message;
};

struct ParseStats {
  std::uint64_t lines = 0;
  std::uint64_t triples = 0;
  std::uint64_t malformed = 0;
  std::vector<ParseError> errors;  // first kMaxRecordedErrors only

  static constexpr std::size_t kMaxRecordedErrors = 100;
};

namespace detail {

class LineParser {
 public:
  explicit LineParser(std::string_view line) : s_(line) {}

  // Returns false for blank/comment lines, true for a triple; throws
  // std::string on syntax errors.
  bool parse(Triple& out) {
    skip_ws();
    if (at_end() || peek() == '#') return false;
    out.subject = subject();
    skip_ws();
    if (at_end() || peek() != '<') fail("predicate must be an IRI");
    out.predicate = Term::iri(iri());
    skip_ws();
    out.object = object();
    skip_ws();
    if (at_end() || peek() != '.') fail("expected '.' after object");
    ++pos_;
    skip_ws();
    if (!at_end() && peek() != '#') fail("trailing characters after '.'");
    return true;
  }

 private:
  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return s_[pos_]; }
  void skip_ws() {
    while (!at_end() && (peek() == ' ' || peek() == '\t')) ++pos_;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw what + " at column " + std::to_string(pos_ + 1);
  }

  Term subject() {
    if (at_end()) fail("missing subject");
    if (peek() == '<') return Term::iri(iri());
    if (peek() == '_') return blank();
    fail("subject must be an IRI or blank node");
  }

  Term object() {
    if (at_end()) fail("missing object");
    switch (peek()) {
      case '<': return Term::iri(iri());
      case '_': return blank();
      case '"': return literal();
      default: fail("object must be an IRI, blank node or literal");
    }
  }

  std::string iri() {
    ++pos_;  // '<'
    std::string out;
    for (;;) {
      if (at_end()) fail("unterminated IRI");
      const char c = s_[pos_++];
      if (c == '>') break;
      if (c == '\\') {
        if (at_end() || (peek() != 'u' && peek() != 'U')) fail("invalid IRI escape");
        append_codepoint(out, unicode_escape());
        continue;
      }
      const auto u = static_cast<unsigned char>(c);
      if (u <= 0x20 || c == '<' || c == '"' || c == '{' || c == '}' || c == '|' || c == '^' ||
          c == '`') {
        fail("illegal character in IRI");
      }
      out += c;
    }
    if (out.empty() || !std::isalpha(static_cast<unsigned char>(out.front())) ||
        out.find(':') == std::string::npos) {
      fail("IRI is not absolute");
    }
    return out;
  }

  Term blank() {
    if (s_.substr(pos_, 2) != "_:") fail("malformed blank node");
    pos_ += 2;
    const std::size_t start = pos_;
    while (!at_end()) {
      const auto u = static_cast<unsigned char>(peek());
      if (std::isalnum(u) || u == '_' || u == '-' || u == '.' || u >= 0x80) {
        ++pos_;
      } else {
        break;
      }
    }
    while (pos_ > start && s_[pos_ - 1] == '.') --pos_;
    if (pos_ == start) fail("empty blank node label");
    return Term::blank(std::string(s_.substr(start, pos_ - start)));
  }

  Term literal() {
    ++pos_;  // opening quote
    std::string lexical;
    for (;;) {
      if (at_end()) fail("unterminated literal");
      const char c = s_[pos_++];
      if (c == '"') break;
      if (c != '\\') {
        lexical += c;
        continue;
      }
      if (at_end()) fail("dangling escape in literal");
      switch (s_[pos_++]) {
        case 't': lexical += '\t'; break;
        case 'b': lexical += '\b'; break;
        case 'n': lexical += '\n'; break;
        case 'r': lexical += '\r'; break;
        case 'f': lexical += '\f'; break;
        case '"': lexical += '"'; break;
        case '\'': lexical += '\''; break;
        case '\\': lexical += '\\'; break;
        case 'u':
        case 'U':
          --pos_;
          append_codepoint(lexical, unicode_escape());
          break;
        default: fail("unknown literal escape");
      }
    }
    std::string lang;
    std::string type;
    if (!at_end() && peek() == '@') {
      ++pos_;
      const std::size_t start = pos_;
      bool after_dash = false;
      while (!at_end()) {
        const auto u = static_cast<unsigned char>(peek());
        if (std::isalpha(u) || (after_dash && std::isdigit(u))) {
          ++pos_;
        } else if (u == '-' && pos_ > start && s_[pos_ - 1] != '-') {
          after_dash = true;
          ++pos_;
        } else {
          break;
        }
      }
      if (pos_ == start || s_[pos_ - 1] == '-') fail("malformed language tag");
      lang = std::string(s_.substr(start, pos_ - start));
    } else if (s_.substr(pos_, 2) == "^^") {
      pos_ += 2;
      if (at_end() || peek() != '<') fail("datatype must be an IRI");
      type = iri();
    }
    return Term::literal(std::move(lexical), std::move(lang), std::move(type));
  }

  // Positioned on 'u' or 'U'.
  char32_t unicode_escape() {
    const std::size_t digits = s_[pos_] == 'u' ? 4 : 8;
    ++pos_;
    if (pos_ + digits > s_.size()) fail("truncated unicode escape");
    char32_t cp = 0;
    for (std::size_t i = 0; i < digits; ++i) {
      const char c = s_[pos_++];
      int v;
      if (c >= '0' && c <= '9') v = c - '0';
      else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
      else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
      else fail("invalid hex digit in unicode escape");
      cp = cp * 16 + static_cast<char32_t>(v);
    }
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) fail("invalid code point");
    return cp;
  }

  static void append_codepoint(std::string& out, char32_t cp) {
    if (cp < 0x80) {
      out += static_cast<char>(cp);
    } else if (cp < 0x800) {
      out += static_cast<char>(0xC0 | (cp >> 6));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
      out += static_cast<char>(0xE0 | (cp >> 12));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
      out += static_cast<char>(0xF0 | (cp >> 18));
      out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    }
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

enum class LineStatus { kTriple, kSkipped, kMalformed };

// Parses a single N-Triples line (without the newline).
inline LineStatus parse_ntriples_line(std::string_view line, Triple& out, std::string& error) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  try {
    return detail::LineParser(line).parse(out) ? LineStatus::kTriple : LineStatus::kSkipped;
  } catch (const std::string& what) {
    error = what;
    return LineStatus::kMalformed;
  }
}

// Line source over any std::istream.
class StreamLines {
 public:
  explicit StreamLines(std::istream& in) : in_(in) {}
  bool next(std::string& line) {
    if (std::getline(in_, line)) return true;
    if (in_.bad()) throw std::runtime_error("stream read error");
    return false;
  }

 private:
  std::istream& in_;
};

// Line source over a file on disk; gzip input is recognised by its magic
// bytes (1f 8b) and decompressed transparently.
class FileLines {
 public:
  explicit FileLines(const std::string& path) : path_(path) {
    std::FILE* probe = std::fopen(path.c_str(), "rb");
    if (probe == nullptr) {
      throw std::system_error(errno, std::generic_category(), "cannot open " + path);
    }
    unsigned char magic[2] = {0, 0};
    const std::size_t got = std::fread(magic, 1, 2, probe);
    gzipped_ = got == 2 && magic[0] == 0x1f && magic[1] == 0x8b;
    if (gzipped_) {
      std::fclose(probe);
      gz_ = gzopen(path.c_str(), "rb");
      if (gz_ == nullptr) throw std::runtime_error("cannot open gzip stream " + path);
      gzbuffer(gz_, 1 << 18);
    } else {
      std::rewind(probe);
      file_ = probe;
    }
  }
  FileLines(const FileLines&) = delete;
  FileLines& operator=(const FileLines&) = delete;
  ~FileLines() {
    if (gz_ != nullptr) gzclose(gz_);
    if (file_ != nullptr) std::fclose(file_);
  }

  bool gzipped() const { return gzipped_; }

  bool next(std::string& line) {
    line.clear();
    for (;;) {
      if (pos_ == len_) {
        if (!refill()) return !line.empty();
      }
      const char* begin = buf_.data() + pos_;
      const char* nl = static_cast<const char*>(std::memchr(begin, '\n', len_ - pos_));
      if (nl != nullptr) {
        line.append(begin, nl);
        pos_ = static_cast<std::size_t>(nl - buf_.data()) + 1;
        return true;
      }
      line.append(begin, len_ - pos_);
      pos_ = len_;
    }
  }

 private:
  bool refill() {
    pos_ = 0;
    if (gz_ != nullptr) {
      const int n = gzread(gz_, buf_.data(), static_cast<unsigned>(buf_.size()));
      if (n < 0) {
        int code = 0;
        throw std::runtime_error("gzip read error in " + path_ + ": " + gzerror(gz_, &code));
      }
      len_ = static_cast<std::size_t>(n);
    } else {
      len_ = std::fread(buf_.data(), 1, buf_.size(), file_);
      if (len_ == 0 && std::ferror(file_)) throw std::runtime_error("read error in " + path_);
    }
    return len_ > 0;
  }

  std::string path_;
  bool gzipped_ = false;
  gzFile gz_ = nullptr;
  std::FILE* file_ = nullptr;
  std::vector<char> buf_ = std::vector<char>(1 << 18);
  std::size_t pos_ = 0;
  std::size_t len_ = 0;
};

// Streams every well-formed triple of `lines` into `sink`. Malformed lines
// are counted (the first few recorded with their line number) and skipped.
template <typename Lines, typename Sink>
ParseStats parse_ntriples(Lines& lines, Sink&& sink) {
  ParseStats stats;
  std::string line;
  std::string error;
  Triple triple;
  while (lines.next(line)) {
    ++stats.lines;
    switch (parse_ntriples_line(line, triple, error)) {
      case LineStatus::kTriple:
        ++stats.triples;
        sink(std::move(triple));
        break;
      case LineStatus::kSkipped:
        break;
      case LineStatus::kMalformed:
        ++stats.malformed;
        if (stats.errors.size() < ParseStats::kMaxRecordedErrors) {
          stats.errors.push_back({stats.lines, error});
        }
        break;
    }
  }
  return stats;
}

struct ParsedTriples {
  std::vector<Triple> triples;
  ParseStats stats;
};

inline ParsedTriples parse_ntriples(std::string_view text) {
  std::istringstream in{std::string(text)};
  StreamLines lines(in);
  ParsedTriples out;
  out.stats = parse_ntriples(lines, [&](Triple&& t) { out.triples.push_back(std::move(t)); });
  return out;
}

inline ParsedTriples parse_ntriples_file(const std::string& path) {
  FileLines lines(path);
  ParsedTriples out;
  out.stats = parse_ntriples(lines, [&](Triple&& t) { out.triples.push_back(std::move(t)); });
  return out;
}

namespace detail {

inline void write_iri(std::ostream& out, std::string_view iri) {
  out << '<';
  for (char c : iri) {
    const auto u = static_cast<unsigned char>(c);
    if (u <= 0x20 || c == '<' || c == '>' || c == '"' || c == '{' || c == '}' || c == '|' ||
        c == '^' || c == '`' || c == '\\') {
      char buf[8];
      std::snprintf(buf, sizeof(buf), "\\u%04X", u);
      out << buf;
    } else {
      out << c;
    }
  }
  out << '>';
}

inline void write_term(std::ostream& out, const Term& term) {
  switch (term.kind) {
    case TermKind::kIri: write_iri(out, term.value); return;
    case TermKind::kBlank: out << term.value; return;
    case TermKind::kLiteral: break;
  }
  out << '"';
  for (char c : term.value) {
    switch (c) {
      case '"': out << "\\\""; break;
      case '\\': out << "\\\\"; break;
      case '\n': out << "\\n"; break;
      case '\r': out << "\\r"; break;
      case '\t': out << "\\t"; break;
      default: out << c;
    }
  }
  out << '"';
  if (!term.language.empty()) {
    out << '@' << term.language;
  } else if (!term.datatype.empty()) {
    out << "^^";
    write_iri(out, term.datatype);
  }
}

}  // namespace detail

inline void write_ntriple(std::ostream& out, const Triple& t) {
  detail::write_term(out, t.subject);
  out << ' ';
  detail::write_term(out, t.predicate);
  out << ' ';
  detail::write_term(out, t.object);
  out << " .\n";
}

}  // namespace kgmatch
