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

// End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
// the process exits with the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "k2ts/joins.hpp"
#include "k2ts/ntriples.hpp"
#include "k2ts/stats.hpp"
#include "k2ts/triple_store.hpp"
#include "test_util.hpp"

using k2ts::BindingSet;
using k2ts::Id;
using k2ts::IdTriple;
using k2ts::JoinAxis;
using k2ts::JoinCategory;
using k2ts::JoinQuery;
using k2ts::PatternTerm;
using k2ts::StoreSizes;
using k2ts::TriplePattern;
using k2ts::TripleStore;
namespace testutil = k2ts::testutil;

namespace {

struct Check {
  bool ok = true;
  std::string detail;

  void expect(bool cond, const std::string& message) {
    if (!cond && ok) {
      ok = false;
      detail = message;
    }
  }
};

TriplePattern pattern(std::optional<Id> s, std::optional<Id> p,
                      std::optional<Id> o) {
  TriplePattern pat;
  pat.s = s ? PatternTerm::bound(*s) : PatternTerm::var("s");
  pat.p = p ? PatternTerm::bound(*p) : PatternTerm::var("p");
  pat.o = o ? PatternTerm::bound(*o) : PatternTerm::var("o");
  return pat;
}

k2ts::StoreFile build_wiki_store(uint32_t k) {
  std::istringstream in(testutil::wiki_ntriples());
  const k2ts::ParseResult parsed = k2ts::parse_ntriples(in);
  k2ts::TermDictionary::Builder builder;
  for (const k2ts::RawTriple& t : parsed.triples) {
    builder.add(t.subject, t.predicate, t.object);
  }
  k2ts::StoreFile file;
  file.dictionary = builder.finish();
  std::vector<IdTriple> ids;
  for (const k2ts::RawTriple& t : parsed.triples) {
    ids.push_back(IdTriple{
        *file.dictionary.id_for(t.subject, k2ts::TermRole::subject),
        *file.dictionary.id_for(t.predicate, k2ts::TermRole::predicate),
        *file.dictionary.id_for(t.object, k2ts::TermRole::object)});
  }
  const StoreSizes sizes{file.dictionary.so_count(), file.dictionary.s_count(),
                         file.dictionary.o_count(), file.dictionary.p_count()};
  file.store = TripleStore::build(ids, sizes, k);
  return file;
}

// Golden checks shared by criteria 1 and 8.
void check_wiki_store(const k2ts::StoreFile& file, Check& check) {
  const k2ts::TermDictionary& dict = file.dictionary;
  const TripleStore& store = file.store;
  check.expect(dict.so_count() == 1, "|SO| != 1");
  check.expect(dict.p_count() == 3, "|P| != 3");
  check.expect(dict.subject_range() == 3, "subject IDs are not {1,2,3}");
  check.expect(dict.object_range() == 6, "object IDs are not {1..6}");
  for (Id s = 1; s <= 3; ++s) {
    check.expect(!dict.term_for(s, k2ts::TermRole::subject).empty(),
                 "subject ID unmapped");
  }
  for (Id o = 1; o <= 6; ++o) {
    check.expect(!dict.term_for(o, k2ts::TermRole::object).empty(),
                 "object ID unmapped");
  }

  // Predicate 2 holds exactly the ID cells (2,4), (1,5), (3,6).
  const std::set<std::pair<Id, Id>> cells{{2, 4}, {1, 5}, {3, 6}};
  for (Id s = 1; s <= 3; ++s) {
    for (Id o = 1; o <= 6; ++o) {
      const bool expected = cells.count({s, o}) > 0;
      const auto got = k2ts::solve_pattern_all(store, pattern(s, 2, o));
      check.expect(got.size() == (expected ? 1u : 0u),
                   "contains mismatch at (" + std::to_string(s) + ",2," +
                       std::to_string(o) + ")");
    }
  }

  const auto row = k2ts::solve_pattern_all(store, pattern(1, 2, {}));
  check.expect(row.size() == 1 && row[0] == IdTriple{1, 2, 5},
               "direct neighbors of subject 1 != [5]");
  const auto col = k2ts::solve_pattern_all(store, pattern({}, 2, 6));
  check.expect(col.size() == 1 && col[0] == IdTriple{3, 2, 6},
               "reverse neighbors of object 6 != [3]");
  const auto all = k2ts::solve_pattern_all(store, pattern({}, 2, {}));
  const std::vector<IdTriple> expected{{1, 2, 5}, {2, 2, 4}, {3, 2, 6}};
  check.expect(all == expected, "full range of predicate 2 mismatch");
}

// Criterion 1: the six-triple golden dataset reproduces the documented
// dictionary layout and predicate-2 tree, in under a second.
bool criterion_1(std::string& detail) {
  const auto start = std::chrono::steady_clock::now();
  Check check;
  for (uint32_t k : {2u, 4u}) {
    const k2ts::StoreFile file = build_wiki_store(k);
    check_wiki_store(file, check);
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  check.expect(secs < 1.0, "golden checks took " + std::to_string(secs) + "s");
  detail = check.detail;
  return check.ok;
}

// Criterion 2: eight pattern forms against a linear-scan oracle on 20
// random stores.
bool criterion_2(std::string& detail) {
  std::mt19937_64 rng(220);
  Check check;
  const uint64_t p_choices[3] = {1, 5, 50};
  for (int store_idx = 0; store_idx < 20 && check.ok; ++store_idx) {
    const StoreSizes sizes{50 + rng() % 50, 150 + rng() % 150,
                           150 + rng() % 150, p_choices[store_idx % 3]};
    const size_t n_triples = 2000 + rng() % 8001;
    const uint32_t k = store_idx % 4 == 3 ? 4 : 2;
    const testutil::TestStore ts =
        testutil::make_random_store(rng, n_triples, sizes, k);
    for (int form = 0; form < 8 && check.ok; ++form) {
      for (int round = 0; round < 200; ++round) {
        const TriplePattern pat = pattern(
            (form & 1) ? std::optional<Id>(testutil::pick_subject(rng, ts))
                       : std::nullopt,
            (form & 2) ? std::optional<Id>(testutil::pick_predicate(rng, ts))
                       : std::nullopt,
            (form & 4) ? std::optional<Id>(testutil::pick_object(rng, ts))
                       : std::nullopt);
        const auto got = k2ts::solve_pattern_all(ts.store, pat);
        const auto expected = testutil::oracle_pattern(ts.triples, pat);
        if (got != expected) {
          check.expect(false, "store " + std::to_string(store_idx) + " form " +
                                  std::to_string(form) + " mismatch");
          break;
        }
      }
    }
  }
  detail = check.detail;
  return check.ok;
}

// Criterion 3: joins against the nested-loop oracle for every category
// and axis.
bool criterion_3(std::string& detail) {
  std::mt19937_64 rng(330);
  Check check;
  const testutil::TestStore small = testutil::make_random_store(
      rng, 1000, StoreSizes{30, 40, 60, 4}, 2);
  const testutil::TestStore large = testutil::make_random_store(
      rng, 10000, StoreSizes{80, 150, 250, 8}, 2);

  for (JoinCategory cat : {JoinCategory::A, JoinCategory::B, JoinCategory::C,
                           JoinCategory::D, JoinCategory::E, JoinCategory::F}) {
    for (JoinAxis axis : {JoinAxis::SS, JoinAxis::OO, JoinAxis::SO}) {
      for (int round = 0; round < 10 && check.ok; ++round) {
        const testutil::TestStore& ts = round % 2 == 0 ? small : large;
        const JoinQuery q = testutil::make_join_query(rng, ts, cat, axis);
        const BindingSet got = k2ts::execute(ts.store, q);
        const testutil::OracleJoin expected =
            testutil::oracle_join(ts.triples, q, ts.sizes.so);
        if (got.vars != expected.vars || got.rows != expected.rows) {
          check.expect(false, std::string("mismatch for category ") +
                                  k2ts::to_string(cat) + " axis " +
                                  k2ts::to_string(axis));
        }
      }
    }
  }
  detail = check.detail;
  return check.ok;
}

// Criterion 4: every side-4 binary matrix round-trips through build and
// full-range enumeration (k = 2).
bool criterion_4(std::string& detail) {
  Check check;
  for (uint32_t mask = 0; mask < (1u << 16); ++mask) {
    std::vector<k2ts::Cell> cells;
    for (uint32_t bit = 0; bit < 16; ++bit) {
      if (mask & (1u << bit)) {
        cells.push_back(k2ts::Cell{bit / 4, bit % 4});
      }
    }
    std::sort(cells.begin(), cells.end());
    const k2ts::K2Tree tree = k2ts::K2Tree::build(cells, 4, 2);
    if (tree.range(0, 3, 0, 3) != cells || tree.ones() != cells.size()) {
      check.expect(false, "round-trip failed for mask " + std::to_string(mask));
      break;
    }
  }
  detail = check.detail;
  return check.ok;
}

// Criterion 5: bounded-predicate patterns touch exactly one tree,
// unbounded-predicate patterns touch exactly |P|.
bool criterion_5(std::string& detail) {
  std::mt19937_64 rng(550);
  Check check;
  const StoreSizes sizes{20, 40, 60, 7};
  const testutil::TestStore ts = testutil::make_random_store(rng, 2000, sizes);
  for (int form = 0; form < 8; ++form) {
    for (int round = 0; round < 50; ++round) {
      const TriplePattern pat = pattern(
          (form & 1) ? std::optional<Id>(testutil::pick_subject(rng, ts))
                     : std::nullopt,
          (form & 2) ? std::optional<Id>(testutil::pick_predicate(rng, ts))
                     : std::nullopt,
          (form & 4) ? std::optional<Id>(testutil::pick_object(rng, ts))
                     : std::nullopt);
      const uint64_t expected = (form & 2) ? 1 : sizes.p;
      if (k2ts::tree_access_count(ts.store, pat) != expected) {
        check.expect(false, "tree access count mismatch for form " +
                                std::to_string(form));
      }
    }
  }
  detail = check.detail;
  return check.ok;
}

std::vector<IdTriple> power_law_triples(std::mt19937_64& rng, size_t count,
                                        const StoreSizes& sizes) {
  auto weights = [](uint64_t n) {
    std::vector<double> w(n);
    for (uint64_t i = 0; i < n; ++i) w[i] = 1.0 / std::pow(i + 1.0, 0.9);
    return w;
  };
  const auto sw = weights(sizes.subject_range());
  const auto ow = weights(sizes.object_range());
  const auto pw = weights(sizes.p);
  std::discrete_distribution<uint64_t> s_dist(sw.begin(), sw.end());
  std::discrete_distribution<uint64_t> o_dist(ow.begin(), ow.end());
  std::discrete_distribution<uint64_t> p_dist(pw.begin(), pw.end());
  std::set<IdTriple> seen;
  size_t guard = 0;
  while (seen.size() < count && ++guard < count * 200) {
    seen.insert(IdTriple{s_dist(rng) + 1, p_dist(rng) + 1, o_dist(rng) + 1});
  }
  return {seen.begin(), seen.end()};
}

// Criterion 6: serialized size versus a flat 3 x 64-bit triple list, for a
// power-law dataset (< 25%) and a block-clustered one (< 10%).
bool criterion_6(std::string& detail) {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(660);
  Check check;
  const size_t n = 100000;
  const double flat_bytes = static_cast<double>(n) * 24.0;

  std::ostringstream note;
  {
    const StoreSizes sizes{5000, 10000, 10000, 20};
    const std::vector<IdTriple> triples = power_law_triples(rng, n, sizes);
    check.expect(triples.size() == n, "generator fell short of 100k triples");
    k2ts::StoreFile file;
    file.store = TripleStore::build(triples, sizes, 2);
    const double bytes = static_cast<double>(file.serialized().size());
    note << "power-law " << (100.0 * bytes / flat_bytes) << "% of flat";
    check.expect(bytes < 0.25 * flat_bytes, note.str());
  }

  {
    // 1-cells packed into dense 32x32 blocks.
    const StoreSizes sizes{5000, 10000, 10000, 20};
    std::set<IdTriple> seen;
    std::uniform_int_distribution<Id> origin(0, sizes.subject_range() - 33);
    std::uniform_int_distribution<Id> pred(1, sizes.p);
    while (seen.size() < n) {
      const Id r0 = origin(rng), c0 = origin(rng), p = pred(rng);
      for (Id dr = 0; dr < 32 && seen.size() < n; ++dr) {
        for (Id dc = 0; dc < 32 && seen.size() < n; ++dc) {
          seen.insert(IdTriple{r0 + dr + 1, p, c0 + dc + 1});
        }
      }
    }
    const std::vector<IdTriple> triples(seen.begin(), seen.end());
    k2ts::StoreFile file;
    file.store = TripleStore::build(triples, sizes, 2);
    const double bytes = static_cast<double>(file.serialized().size());
    note << ", clustered " << (100.0 * bytes / flat_bytes) << "% of flat";
    check.expect(bytes < 0.10 * flat_bytes, note.str());
  }
  if (check.ok) check.detail = note.str();

  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  check.expect(secs < 30.0, "build took " + std::to_string(secs) + "s");
  detail = check.detail;
  return check.ok;
}

// Criterion 7: on one million triples and |P| = 50, an unbounded-predicate
// row retrieval costs about |P| bounded ones (within 2x), and the full
// existence probe (S,P,O) is the fastest form.
bool criterion_7(std::string& detail) {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(770);
  Check check;

  const StoreSizes sizes{2000, 8000, 38000, 50};
  std::set<IdTriple> seen;
  std::uniform_int_distribution<Id> s_dist(1, sizes.subject_range());
  std::uniform_int_distribution<Id> o_dist(1, sizes.object_range());
  std::uniform_int_distribution<Id> p_dist(1, sizes.p);
  while (seen.size() < 1000000) {
    seen.insert(IdTriple{s_dist(rng), p_dist(rng), o_dist(rng)});
  }
  const std::vector<IdTriple> triples(seen.begin(), seen.end());
  const TripleStore store = TripleStore::build(triples, sizes, 2);

  std::uniform_int_distribution<size_t> pick(0, triples.size() - 1);
  static volatile uint64_t result_sink;
  uint64_t sink = 0;
  const auto mean_latency = [&](int form, int samples) {
    const auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < samples; ++i) {
      const IdTriple& t = triples[pick(rng)];
      const TriplePattern pat = pattern(
          (form & 1) ? std::optional<Id>(t.s) : std::nullopt,
          (form & 2) ? std::optional<Id>(t.p) : std::nullopt,
          (form & 4) ? std::optional<Id>(t.o) : std::nullopt);
      k2ts::TripleCursor cursor(store, pat);
      while (auto r = cursor.next()) sink += r->s + r->o;
    }
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
               .count() /
           samples;
  };

  // Forms indexed by bound positions: s=1, p=2, o=4.
  double mean[8];
  const int samples[8] = {20, 100, 50, 400, 100, 400, 200, 2000};
  for (int form = 0; form < 8; ++form) {
    mean[form] = mean_latency(form, samples[form]);
  }
  result_sink = sink;
  const double bounded_row = mean[1 | 2];       // (S, P, ?O)
  const double unbounded_row = mean[1];         // (S, ?P, ?O)
  const double full_probe = mean[1 | 2 | 4];    // (S, P, O)

  std::ostringstream note;
  note << "(S,P,?O) " << bounded_row * 1e6 << "us, (S,?P,?O) "
       << unbounded_row * 1e6 << "us, (S,P,O) " << full_probe * 1e6 << "us";
  check.expect(bounded_row < unbounded_row / static_cast<double>(sizes.p) * 2.0,
               "bounded-P row scan too slow vs unbounded: " + note.str());
  for (int form = 0; form < 8; ++form) {
    if (form != (1 | 2 | 4)) {
      check.expect(full_probe < mean[form],
                   "(S,P,O) not fastest: " + note.str());
    }
  }
  if (check.ok) detail = note.str();

  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  check.expect(secs < 300.0, "criterion took " + std::to_string(secs) + "s");
  if (!check.ok) detail = check.detail;
  return check.ok;
}

// Criterion 8: build -> serialize -> load -> re-serialize is
// byte-identical and the loaded store answers like the original.
bool criterion_8(std::string& detail) {
  std::mt19937_64 rng(880);
  Check check;

  {
    const k2ts::StoreFile file = build_wiki_store(4);
    const std::string bytes = file.serialized();
    std::istringstream is(bytes, std::ios::binary);
    const k2ts::StoreFile loaded = k2ts::StoreFile::read(is);
    check.expect(loaded.serialized() == bytes,
                 "golden store round-trip not byte-identical");
    check_wiki_store(loaded, check);
  }

  {
    const StoreSizes sizes{40, 80, 120, 6};
    const testutil::TestStore ts =
        testutil::make_random_store(rng, 5000, sizes);
    k2ts::StoreFile file;
    file.store = TripleStore::build(ts.triples, sizes, 2);
    const std::string bytes = file.serialized();
    std::istringstream is(bytes, std::ios::binary);
    const k2ts::StoreFile loaded = k2ts::StoreFile::read(is);
    check.expect(loaded.serialized() == bytes,
                 "random store round-trip not byte-identical");

    // The loaded store answers patterns and joins identically.
    for (int form = 0; form < 8 && check.ok; ++form) {
      for (int round = 0; round < 40; ++round) {
        const TriplePattern pat = pattern(
            (form & 1) ? std::optional<Id>(testutil::pick_subject(rng, ts))
                       : std::nullopt,
            (form & 2) ? std::optional<Id>(testutil::pick_predicate(rng, ts))
                       : std::nullopt,
            (form & 4) ? std::optional<Id>(testutil::pick_object(rng, ts))
                       : std::nullopt);
        if (k2ts::solve_pattern_all(loaded.store, pat) !=
            testutil::oracle_pattern(ts.triples, pat)) {
          check.expect(false, "loaded store pattern mismatch");
          break;
        }
      }
    }
    for (JoinCategory cat :
         {JoinCategory::A, JoinCategory::B, JoinCategory::C, JoinCategory::D,
          JoinCategory::E, JoinCategory::F}) {
      for (JoinAxis axis : {JoinAxis::SS, JoinAxis::OO, JoinAxis::SO}) {
        const JoinQuery q = testutil::make_join_query(rng, ts, cat, axis);
        const BindingSet got = k2ts::execute(loaded.store, q);
        const testutil::OracleJoin expected =
            testutil::oracle_join(ts.triples, q, sizes.so);
        if (got.rows != expected.rows) {
          check.expect(false, "loaded store join mismatch");
        }
      }
    }
  }
  detail = check.detail;
  return check.ok;
}

struct Criterion {
  int id;
  const char* name;
  bool (*fn)(std::string&);
};

const Criterion kCriteria[] = {
    {1, "golden dataset reproduces dictionary and predicate-2 tree",
     criterion_1},
    {2, "pattern forms match linear-scan oracle", criterion_2},
    {3, "join categories match nested-loop oracle", criterion_3},
    {4, "exhaustive side-4 matrices round-trip", criterion_4},
    {5, "tree access counts are exact", criterion_5},
    {6, "serialized store beats flat encoding bounds", criterion_6},
    {7, "latency scaling across pattern forms", criterion_7},
    {8, "persistence round-trip is byte-identical", criterion_8},
};

}  // namespace

int main(int argc, char** argv) {
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const Criterion& c : kCriteria) {
    if (!wanted.empty() && !wanted.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = c.fn(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << c.id << ": "
              << c.name;
    if (!detail.empty()) std::cout << " [" << detail << "]";
    std::cout << " (" << secs << "s)" << std::endl;
    if (!ok) ++failures;
  }
  return failures;
}
