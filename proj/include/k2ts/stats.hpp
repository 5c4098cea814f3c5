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

#ifndef K2TS_STATS_HPP_
#define K2TS_STATS_HPP_

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "k2ts/triple_store.hpp"

namespace k2ts {

struct PredicateStats {
  uint64_t ones = 0;
  K2TreeBits bits;
};

struct StoreStats {
  uint64_t triples = 0;
  StoreSizes sizes;
  uint64_t k = 0;
  uint64_t matrix_side = 0;
  std::vector<PredicateStats> per_predicate;
  uint64_t structure_bits = 0;   // all trees, wire form plus rank overhead
  uint64_t serialized_bytes = 0; // whole store file, dictionary included
  // structure_bits / triples; only meaningful when triples > 0
  double bits_per_triple = 0.0;
};

inline StoreStats compute_stats(const StoreFile& file) {
  const TripleStore& store = file.store;
  StoreStats stats;
  stats.sizes = store.sizes();
  stats.k = store.k();
  stats.per_predicate.reserve(store.predicate_count());
  for (Id p = 1; p <= store.predicate_count(); ++p) {
    const K2Tree& tree = store.tree(p);
    stats.matrix_side = tree.side();
    PredicateStats ps;
    ps.ones = tree.ones();
    ps.bits = tree.bit_size();
    stats.triples += ps.ones;
    stats.structure_bits += ps.bits.total_bits();
    stats.per_predicate.push_back(ps);
  }
  stats.serialized_bytes = file.serialized().size();
  if (stats.triples > 0) {
    stats.bits_per_triple = static_cast<double>(stats.structure_bits) /
                            static_cast<double>(stats.triples);
  }
  return stats;
}

// Key-value rendering, one fact per line.
inline void print_stats(std::ostream& os, const StoreStats& stats) {
  os << "triples " << stats.triples << "\n";
  os << "so " << stats.sizes.so << "\n";
  os << "s " << stats.sizes.s << "\n";
  os << "o " << stats.sizes.o << "\n";
  os << "p " << stats.sizes.p << "\n";
  os << "k " << stats.k << "\n";
  os << "matrix_side " << stats.matrix_side << "\n";
  os << "serialized_bytes " << stats.serialized_bytes << "\n";
  os << "structure_bits " << stats.structure_bits << "\n";
  if (stats.triples > 0) {
    os << "bits_per_triple " << stats.bits_per_triple << "\n";
  } else {
    os << "bits_per_triple n/a\n";
  }
  for (size_t i = 0; i < stats.per_predicate.size(); ++i) {
    const PredicateStats& ps = stats.per_predicate[i];
    os << "predicate " << (i + 1) << " ones " << ps.ones << " t_bits "
       << ps.bits.t_bits << " l_bits " << ps.bits.l_bits << " total_bits "
       << ps.bits.total_bits() << "\n";
  }
}

}  // namespace k2ts

#endif  // K2TS_STATS_HPP_
