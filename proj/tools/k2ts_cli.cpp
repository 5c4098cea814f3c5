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

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <CLI11.hpp>

#include "k2ts/dictionary.hpp"
#include "k2ts/joins.hpp"
#include "k2ts/ntriples.hpp"
#include "k2ts/stats.hpp"
#include "k2ts/triple_store.hpp"

namespace {

// Exit codes: 0 success, 1 usage, 2 I/O, 3 corrupt store.
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitCorrupt = 3;

struct PatternText {
  // One parsed position: ?var, #id, or a dictionary term.
  struct Part {
    enum class Kind { variable, raw_id, term } kind = Kind::term;
    std::string text;
    uint64_t id = 0;
  };
  Part s, p, o;
};

// Splits "(a, b, c)" on top-level commas, respecting <...> and "..."
// with backslash escapes inside literals.
std::vector<std::string> split_pattern(const std::string& text) {
  size_t begin = text.find_first_not_of(" \t");
  size_t end = text.find_last_not_of(" \t");
  if (begin == std::string::npos || text[begin] != '(' || text[end] != ')') {
    throw std::invalid_argument("pattern must be parenthesized: " + text);
  }
  std::vector<std::string> parts;
  std::string current;
  bool in_iri = false;
  bool in_literal = false;
  for (size_t i = begin + 1; i < end; ++i) {
    const char c = text[i];
    if (in_literal) {
      if (c == '\\' && i + 1 < end) {
        current += c;
        current += text[++i];
        continue;
      }
      if (c == '"') in_literal = false;
    } else if (in_iri) {
      if (c == '>') in_iri = false;
    } else if (c == '"') {
      in_literal = true;
    } else if (c == '<') {
      in_iri = true;
    } else if (c == ',') {
      parts.push_back(current);
      current.clear();
      continue;
    }
    current += c;
  }
  parts.push_back(current);
  if (parts.size() != 3) {
    throw std::invalid_argument("pattern needs exactly 3 components: " + text);
  }
  return parts;
}

std::string trim(const std::string& s) {
  const size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

PatternText::Part parse_part(const std::string& raw) {
  PatternText::Part part;
  const std::string text = trim(raw);
  if (text.empty()) {
    throw std::invalid_argument("empty pattern component");
  }
  if (text[0] == '?') {
    if (text.size() == 1) {
      throw std::invalid_argument("variables must be named: " + text);
    }
    part.kind = PatternText::Part::Kind::variable;
    part.text = text.substr(1);
    return part;
  }
  if (text[0] == '#') {
    part.kind = PatternText::Part::Kind::raw_id;
    try {
      size_t used = 0;
      part.id = std::stoull(text.substr(1), &used);
      if (used != text.size() - 1) throw std::invalid_argument(text);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad raw ID: " + text);
    }
    return part;
  }
  part.kind = PatternText::Part::Kind::term;
  part.text = text;
  return part;
}

PatternText parse_pattern_text(const std::string& text) {
  const std::vector<std::string> parts = split_pattern(text);
  PatternText p;
  p.s = parse_part(parts[0]);
  p.p = parse_part(parts[1]);
  p.o = parse_part(parts[2]);
  return p;
}

// Resolves terms through the dictionary. A term missing from the
// dictionary in its role makes the pattern unsatisfiable; that is
// reported with a warning, not an error.
struct ResolvedPattern {
  k2ts::TriplePattern pattern;
  bool satisfiable = true;
};

k2ts::PatternTerm resolve_part(const PatternText::Part& part,
                               k2ts::TermRole role,
                               const k2ts::TermDictionary& dict,
                               bool& satisfiable) {
  using Kind = PatternText::Part::Kind;
  switch (part.kind) {
    case Kind::variable:
      return k2ts::PatternTerm::var(part.text);
    case Kind::raw_id:
      return k2ts::PatternTerm::bound(part.id);
    case Kind::term: {
      const auto id = dict.id_for(part.text, role);
      if (!id) {
        std::cerr << "warning: term " << part.text
                  << " not found in dictionary for this role\n";
        satisfiable = false;
        return k2ts::PatternTerm::bound(0);
      }
      return k2ts::PatternTerm::bound(*id);
    }
  }
  return k2ts::PatternTerm::bound(0);
}

ResolvedPattern resolve_pattern(const PatternText& text,
                                const k2ts::TermDictionary& dict) {
  ResolvedPattern r;
  r.pattern.s = resolve_part(text.s, k2ts::TermRole::subject, dict,
                             r.satisfiable);
  r.pattern.p = resolve_part(text.p, k2ts::TermRole::predicate, dict,
                             r.satisfiable);
  r.pattern.o = resolve_part(text.o, k2ts::TermRole::object, dict,
                             r.satisfiable);
  return r;
}

int run_build(const std::string& input, const std::string& output, uint32_t k,
              bool strict) {
  std::ifstream in(input);
  if (!in) {
    std::cerr << "error: cannot open " << input << "\n";
    return kExitIo;
  }

  // Pass 1: role classification. Errors are reported once, here.
  k2ts::TermDictionary::Builder builder;
  bool had_errors = false;
  k2ts::parse_ntriples(
      in,
      [&](k2ts::RawTriple&& t) { builder.add(t.subject, t.predicate, t.object); },
      [&](const k2ts::ParseError& e) {
        had_errors = true;
        std::cerr << "line:" << e.line_no << " " << e.reason << "\n";
      },
      strict);
  if (strict && had_errors) {
    std::cerr << "error: aborting on malformed input (strict mode)\n";
    return kExitIo;
  }
  const k2ts::TermDictionary dict = builder.finish();

  // Pass 2: ID assignment. Duplicate triples collapse at the ID level.
  in.clear();
  in.seekg(0);
  std::vector<k2ts::IdTriple> triples;
  k2ts::parse_ntriples(
      in,
      [&](k2ts::RawTriple&& t) {
        triples.push_back(k2ts::IdTriple{
            *dict.id_for(t.subject, k2ts::TermRole::subject),
            *dict.id_for(t.predicate, k2ts::TermRole::predicate),
            *dict.id_for(t.object, k2ts::TermRole::object)});
      },
      [](const k2ts::ParseError&) {});
  std::sort(triples.begin(), triples.end());
  triples.erase(std::unique(triples.begin(), triples.end()), triples.end());

  const k2ts::StoreSizes sizes{dict.so_count(), dict.s_count(), dict.o_count(),
                               dict.p_count()};
  k2ts::StoreFile file;
  file.store = k2ts::TripleStore::build(triples, sizes, k);
  file.dictionary = dict;
  file.save(output);
  k2ts::print_stats(std::cout, k2ts::compute_stats(file));
  return kExitOk;
}

std::unordered_map<std::string, k2ts::TermRole> variable_roles(
    const std::vector<k2ts::TriplePattern*>& patterns) {
  std::unordered_map<std::string, k2ts::TermRole> roles;
  for (const k2ts::TriplePattern* p : patterns) {
    if (p->s.is_variable) roles.emplace(p->s.name, k2ts::TermRole::subject);
  }
  for (const k2ts::TriplePattern* p : patterns) {
    if (p->o.is_variable) roles.emplace(p->o.name, k2ts::TermRole::object);
    if (p->p.is_variable) roles.emplace(p->p.name, k2ts::TermRole::predicate);
  }
  return roles;
}

int run_query(const std::string& store_path, const std::string& pattern_text,
              bool ids, bool count_only, bool timed) {
  const k2ts::StoreFile file = k2ts::StoreFile::load(store_path);
  const PatternText text = parse_pattern_text(pattern_text);
  const ResolvedPattern resolved = resolve_pattern(text, file.dictionary);

  bool satisfiable = resolved.satisfiable;
  const k2ts::TriplePattern& pat = resolved.pattern;
  if (!pat.p.is_variable &&
      (pat.p.id < 1 || pat.p.id > file.store.predicate_count())) {
    if (text.p.kind == PatternText::Part::Kind::raw_id) {
      std::cerr << "warning: predicate ID " << pat.p.id
                << " outside valid range\n";
      satisfiable = false;
    }
  }

  const auto start = std::chrono::steady_clock::now();
  std::vector<k2ts::IdTriple> results;
  if (satisfiable) {
    results = k2ts::solve_pattern_all(file.store, pat);
  }
  const auto elapsed = std::chrono::steady_clock::now() - start;

  if (count_only) {
    std::cout << results.size() << "\n";
  } else {
    for (const k2ts::IdTriple& t : results) {
      if (ids) {
        std::cout << t.s << " " << t.p << " " << t.o << "\n";
      } else {
        std::cout << file.dictionary.term_for(t.s, k2ts::TermRole::subject)
                  << " "
                  << file.dictionary.term_for(t.p, k2ts::TermRole::predicate)
                  << " "
                  << file.dictionary.term_for(t.o, k2ts::TermRole::object)
                  << "\n";
      }
    }
  }
  if (timed) {
    std::cerr << "time_us "
              << std::chrono::duration_cast<std::chrono::microseconds>(elapsed)
                     .count()
              << "\n";
  }
  return kExitOk;
}

int run_join(const std::string& store_path, const std::string& left_text,
             const std::string& right_text, bool ids, bool count_only,
             bool timed, bool explain) {
  const k2ts::StoreFile file = k2ts::StoreFile::load(store_path);
  const PatternText lt = parse_pattern_text(left_text);
  const PatternText rt = parse_pattern_text(right_text);
  ResolvedPattern left = resolve_pattern(lt, file.dictionary);
  ResolvedPattern right = resolve_pattern(rt, file.dictionary);

  k2ts::JoinQuery query{left.pattern, right.pattern};
  const k2ts::JoinPlan plan = k2ts::classify(query);
  if (explain) {
    std::cout << k2ts::to_string(plan.axis) << " / "
              << k2ts::to_string(plan.category) << "\n";
  }

  const bool satisfiable = left.satisfiable && right.satisfiable;
  const auto start = std::chrono::steady_clock::now();
  k2ts::BindingSet bindings;
  bindings.vars = plan.vars;
  if (satisfiable) {
    bindings = k2ts::execute(file.store, query);
  }
  const auto elapsed = std::chrono::steady_clock::now() - start;

  if (count_only) {
    std::cout << bindings.rows.size() << "\n";
  } else {
    for (size_t i = 0; i < bindings.vars.size(); ++i) {
      std::cout << (i ? " " : "") << "?" << bindings.vars[i];
    }
    std::cout << "\n";
    const auto roles =
        variable_roles({&query.left, &query.right});
    for (const std::vector<k2ts::Id>& row : bindings.rows) {
      for (size_t i = 0; i < row.size(); ++i) {
        if (i) std::cout << " ";
        if (ids) {
          std::cout << row[i];
        } else {
          std::cout << file.dictionary.term_for(row[i],
                                                roles.at(bindings.vars[i]));
        }
      }
      std::cout << "\n";
    }
  }
  if (timed) {
    std::cerr << "time_us "
              << std::chrono::duration_cast<std::chrono::microseconds>(elapsed)
                     .count()
              << "\n";
  }
  return kExitOk;
}

int run_stats(const std::string& store_path) {
  const k2ts::StoreFile file = k2ts::StoreFile::load(store_path);
  k2ts::print_stats(std::cout, k2ts::compute_stats(file));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "k2ts: compressed in-memory RDF triple store on per-predicate "
      "k^2-trees"};
  app.require_subcommand(1);

  std::string input, output, store_path, pattern, left, right;
  uint32_t k = 2;
  bool strict = false, ids = false, count_only = false, timed = false,
       explain = false;

  CLI::App* build = app.add_subcommand(
      "build", "Parse N-Triples input and write a store file");
  build->add_option("input", input, "N-Triples input file")->required();
  build->add_option("output", output, "store file to write")->required();
  build->add_option("--k", k, "k^2-tree branching factor")->default_val(2);
  build->add_flag("--strict", strict, "abort on the first malformed line");

  CLI::App* query = app.add_subcommand(
      "query", "Resolve one triple pattern, e.g. '(<s>, ?p, ?o)'");
  query->add_option("store", store_path, "store file")->required();
  query->add_option("pattern", pattern, "triple pattern")->required();
  query->add_flag("--ids", ids, "print raw IDs instead of terms");
  query->add_flag("--count", count_only, "print only the result count");
  query->add_flag("--time", timed, "print wall-clock microseconds to stderr");

  CLI::App* join = app.add_subcommand(
      "join", "Resolve a two-pattern join sharing one variable");
  join->add_option("store", store_path, "store file")->required();
  join->add_option("pattern1", left, "first triple pattern")->required();
  join->add_option("pattern2", right, "second triple pattern")->required();
  join->add_flag("--ids", ids, "print raw IDs instead of terms");
  join->add_flag("--count", count_only, "print only the row count");
  join->add_flag("--time", timed, "print wall-clock microseconds to stderr");
  join->add_flag("--explain", explain, "print join axis and category first");

  CLI::App* stats =
      app.add_subcommand("stats", "Print size statistics of a store file");
  stats->add_option("store", store_path, "store file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*build) return run_build(input, output, k, strict);
    if (*query) return run_query(store_path, pattern, ids, count_only, timed);
    if (*join)
      return run_join(store_path, left, right, ids, count_only, timed,
                      explain);
    if (*stats) return run_stats(store_path);
  } catch (const k2ts::corrupt_store_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCorrupt;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitUsage;
}
