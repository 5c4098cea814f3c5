/*
Copyright 2026 The k2ts Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#ifndef K2TS_NTRIPLES_HPP_
#define K2TS_NTRIPLES_HPP_

#include <cctype>
#include <cstdint>
#include <functional>
#include <istream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace k2ts {

// A parsed triple. Terms keep their raw N-Triples surface form: IRIs with
// angle brackets, blank nodes with the _: prefix, literals with quotes and
// any @lang / ^^<datatype> suffix. Comparison is byte-exact.
struct RawTriple {
  std::string subject;
  std::string predicate;
  std::string object;
  uint64_t line_no = 0;

  friend bool operator==(const RawTriple& a, const RawTriple& b) {
    return a.subject == b.subject && a.predicate == b.predicate &&
           a.object == b.object;
  }
};

struct ParseError {
  uint64_t line_no = 0;
  std::string reason;
};

struct ParseResult {
  std::vector<RawTriple> triples;
  std::vector<ParseError> errors;
};

namespace detail {

inline void skip_ws(std::string_view line, size_t& i) {
  while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
}

inline bool scan_iri(std::string_view line, size_t& i, std::string& out,
                     std::string& reason) {
  const size_t start = i;
  ++i;  // consume '<'
  while (i < line.size() && line[i] != '>') {
    if (line[i] == ' ' || line[i] == '\t') {
      reason = "whitespace inside IRI";
      return false;
    }
    ++i;
  }
  if (i == line.size()) {
    reason = "unterminated IRI";
    return false;
  }
  ++i;  // consume '>'
  out.assign(line.substr(start, i - start));
  return true;
}

inline bool scan_blank(std::string_view line, size_t& i, std::string& out,
                       std::string& reason) {
  const size_t start = i;
  i += 2;  // consume '_:'
  const size_t label_start = i;
  while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
  if (i == label_start) {
    reason = "blank node without label";
    return false;
  }
  out.assign(line.substr(start, i - start));
  return true;
}

inline bool scan_literal(std::string_view line, size_t& i, std::string& out,
                         std::string& reason) {
  const size_t start = i;
  ++i;  // consume opening quote
  while (i < line.size()) {
    if (line[i] == '\\') {
      if (i + 1 >= line.size()) {
        reason = "dangling escape in literal";
        return false;
      }
      i += 2;
      continue;
    }
    if (line[i] == '"') break;
    ++i;
  }
  if (i == line.size()) {
    reason = "unterminated literal";
    return false;
  }
  ++i;  // consume closing quote
  if (i < line.size() && line[i] == '@') {
    ++i;
    const size_t tag_start = i;
    while (i < line.size() &&
           (std::isalnum(static_cast<unsigned char>(line[i])) ||
            line[i] == '-')) {
      ++i;
    }
    if (i == tag_start) {
      reason = "empty language tag";
      return false;
    }
  } else if (i + 1 < line.size() && line[i] == '^' && line[i + 1] == '^') {
    i += 2;
    if (i >= line.size() || line[i] != '<') {
      reason = "datatype suffix without IRI";
      return false;
    }
    std::string ignored;
    if (!scan_iri(line, i, ignored, reason)) return false;
  }
  out.assign(line.substr(start, i - start));
  return true;
}

// Parses one line already known to be non-blank and non-comment.
inline bool parse_line(std::string_view line, RawTriple& out,
                       std::string& reason) {
  size_t i = 0;
  skip_ws(line, i);

  if (i < line.size() && line[i] == '"') {
    reason = "literal not allowed in subject position";
    return false;
  }
  if (i < line.size() && line[i] == '<') {
    if (!scan_iri(line, i, out.subject, reason)) return false;
  } else if (i + 1 < line.size() && line[i] == '_' && line[i + 1] == ':') {
    if (!scan_blank(line, i, out.subject, reason)) return false;
  } else {
    reason = "expected IRI or blank node in subject position";
    return false;
  }

  skip_ws(line, i);
  if (i >= line.size() || line[i] != '<') {
    reason = "expected IRI in predicate position";
    return false;
  }
  if (!scan_iri(line, i, out.predicate, reason)) return false;

  skip_ws(line, i);
  if (i < line.size() && line[i] == '<') {
    if (!scan_iri(line, i, out.object, reason)) return false;
  } else if (i < line.size() && line[i] == '"') {
    if (!scan_literal(line, i, out.object, reason)) return false;
  } else if (i + 1 < line.size() && line[i] == '_' && line[i + 1] == ':') {
    if (!scan_blank(line, i, out.object, reason)) return false;
  } else {
    reason = "expected IRI, blank node or literal in object position";
    return false;
  }

  skip_ws(line, i);
  if (i >= line.size() || line[i] != '.') {
    reason = "missing terminating '.'";
    return false;
  }
  ++i;
  skip_ws(line, i);
  if (i < line.size() && line[i] != '#') {
    reason = "unexpected content after terminating '.'";
    return false;
  }
  return true;
}

}  // namespace detail

// Streaming parser. Well-formed lines are handed to on_triple as they are
// read; malformed lines are reported through on_error with their line
// number. In strict mode parsing stops at the first malformed line.
// Returns false if any error was seen.
inline bool parse_ntriples(
    std::istream& in, const std::function<void(RawTriple&&)>& on_triple,
    const std::function<void(const ParseError&)>& on_error,
    bool strict = false) {
  std::string line;
  uint64_t line_no = 0;
  bool clean = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    size_t i = 0;
    detail::skip_ws(line, i);
    if (i == line.size() || line[i] == '#') continue;
    RawTriple triple;
    triple.line_no = line_no;
    std::string reason;
    if (detail::parse_line(line, triple, reason)) {
      on_triple(std::move(triple));
    } else {
      clean = false;
      on_error(ParseError{line_no, reason});
      if (strict) return false;
    }
  }
  return clean;
}

inline ParseResult parse_ntriples(std::istream& in, bool strict = false) {
  ParseResult result;
  parse_ntriples(
      in, [&](RawTriple&& t) { result.triples.push_back(std::move(t)); },
      [&](const ParseError& e) { result.errors.push_back(e); }, strict);
  return result;
}

// Drops exact duplicates, keeping the first occurrence and the relative
// order of survivors.
inline std::vector<RawTriple> deduplicate(std::vector<RawTriple> triples) {
  std::unordered_set<std::string> seen;
  std::vector<RawTriple> out;
  out.reserve(triples.size());
  for (RawTriple& t : triples) {
    std::string key;
    key.reserve(t.subject.size() + t.predicate.size() + t.object.size() + 2);
    key.append(t.subject);
    key.push_back('\n');
    key.append(t.predicate);
    key.push_back('\n');
    key.append(t.object);
    if (seen.insert(std::move(key)).second) out.push_back(std::move(t));
  }
  return out;
}

// Re-emits a triple in N-Triples syntax.
inline std::string to_ntriples_line(const RawTriple& t) {
  return t.subject + " " + t.predicate + " " + t.object + " .";
}

}  // namespace k2ts

#endif  // K2TS_NTRIPLES_HPP_
