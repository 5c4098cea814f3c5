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

#ifndef K2TS_TRIPLE_STORE_HPP_
#define K2TS_TRIPLE_STORE_HPP_

#include <algorithm>
#include <compare>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "k2ts/dictionary.hpp"
#include "k2ts/io.hpp"
#include "k2ts/k2_tree.hpp"

namespace k2ts {

using Id = uint64_t;

struct IdTriple {
  Id s = 0;
  Id p = 0;
  Id o = 0;
  friend auto operator<=>(const IdTriple&, const IdTriple&) = default;
};

struct StoreSizes {
  uint64_t so = 0;
  uint64_t s = 0;
  uint64_t o = 0;
  uint64_t p = 0;

  uint64_t subject_range() const { return so + s; }
  uint64_t object_range() const { return so + o; }
  uint64_t side() const { return so + std::max(s, o); }
  friend bool operator==(const StoreSizes&, const StoreSizes&) = default;
};

// One position of a triple pattern: either a bound ID or a named variable.
struct PatternTerm {
  bool is_variable = false;
  Id id = 0;
  std::string name;

  static PatternTerm bound(Id id) { return PatternTerm{false, id, {}}; }
  static PatternTerm var(std::string name = "") {
    return PatternTerm{true, 0, std::move(name)};
  }
};

struct TriplePattern {
  PatternTerm s;
  PatternTerm p;
  PatternTerm o;
};

/*
 * Vertically partitioned triple index: one k^2-tree per predicate over the
 * shared subject x object matrix. IDs are 1-based; matrix coordinates are
 * 0-based, so triple (s,p,o) lives at cell (s-1, o-1) of tree p-1. Every
 * tree uses the same k and the same matrix side |SO| + max(|S|, |O|),
 * rounded up to a power of k, which keeps row and column IDs comparable
 * across predicates.
 */
class TripleStore {
public:
  TripleStore() = default;

  static TripleStore build(const std::vector<IdTriple>& triples,
                           const StoreSizes& sizes, uint32_t k = 2) {
    TripleStore store;
    store.sizes_ = sizes;
    store.k_ = k;
    std::vector<std::vector<Cell>> cells(sizes.p);
    for (const IdTriple& t : triples) {
      if (t.s < 1 || t.s > sizes.subject_range() || t.p < 1 ||
          t.p > sizes.p || t.o < 1 || t.o > sizes.object_range()) {
        throw std::out_of_range(
            "TripleStore::build: triple (" + std::to_string(t.s) + ", " +
            std::to_string(t.p) + ", " + std::to_string(t.o) +
            ") has an ID outside the dictionary ranges");
      }
      cells[t.p - 1].push_back(Cell{t.s - 1, t.o - 1});
    }
    store.trees_.reserve(sizes.p);
    for (auto& tree_cells : cells) {
      store.trees_.push_back(
          K2Tree::build(std::move(tree_cells), sizes.side(), k));
    }
    return store;
  }

  const StoreSizes& sizes() const { return sizes_; }
  uint32_t k() const { return k_; }
  uint64_t predicate_count() const { return trees_.size(); }

  const K2Tree& tree(Id predicate) const {
    if (predicate < 1 || predicate > trees_.size()) {
      throw std::out_of_range("predicate ID " + std::to_string(predicate) +
                              " outside valid range [1, " +
                              std::to_string(trees_.size()) + "]");
    }
    return trees_[predicate - 1];
  }

  uint64_t triple_count() const {
    uint64_t total = 0;
    for (const K2Tree& t : trees_) total += t.ones();
    return total;
  }

  bool contains(const IdTriple& t) const {
    if (!subject_valid(t.s) || !object_valid(t.o)) return false;
    if (t.p < 1 || t.p > trees_.size()) return false;
    return trees_[t.p - 1].contains(t.s - 1, t.o - 1);
  }

  bool subject_valid(Id s) const {
    return s >= 1 && s <= sizes_.subject_range();
  }
  bool object_valid(Id o) const { return o >= 1 && o <= sizes_.object_range(); }

  void write(std::ostream& os) const {
    for (const K2Tree& tree : trees_) {
      const std::string bytes = tree.serialized();
      io::write_u64(os, bytes.size());
      os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    }
  }

private:
  friend struct StoreFile;

  StoreSizes sizes_;
  uint32_t k_ = 2;
  std::vector<K2Tree> trees_;
};

/*
 * One resolved triple pattern, materialized lazily: per-predicate results
 * are produced only as the consumer advances, so a partially drained
 * pattern with an unbounded predicate never touches the remaining trees.
 * Results follow the declared order: pattern-native within one predicate,
 * predicate-major across predicates.
 */
class TripleCursor {
public:
  TripleCursor(const TripleStore& store, TriplePattern pattern)
      : store_(&store), pattern_(std::move(pattern)) {
    if (!pattern_.p.is_variable) {
      if (pattern_.p.id < 1 || pattern_.p.id > store.predicate_count()) {
        throw std::out_of_range(
            "bounded predicate " + std::to_string(pattern_.p.id) +
            " outside valid range [1, " +
            std::to_string(store.predicate_count()) + "]");
      }
      next_pred_ = pattern_.p.id;
      last_pred_ = pattern_.p.id;
    } else {
      next_pred_ = 1;
      last_pred_ = store.predicate_count();
    }
  }

  std::optional<IdTriple> next() {
    while (buffer_pos_ == buffer_.size()) {
      if (next_pred_ > last_pred_) return std::nullopt;
      fill(next_pred_);
      ++next_pred_;
    }
    return buffer_[buffer_pos_++];
  }

  std::vector<IdTriple> drain() {
    std::vector<IdTriple> all;
    while (auto t = next()) all.push_back(*t);
    return all;
  }

private:
  void fill(Id p) {
    buffer_.clear();
    buffer_pos_ = 0;
    const K2Tree& tree = store_->tree(p);
    const bool s_bound = !pattern_.s.is_variable;
    const bool o_bound = !pattern_.o.is_variable;
    // Bound IDs that are valid only in the other role (or not at all)
    // yield empty results rather than errors, so join-generated probes
    // with foreign IDs degrade gracefully.
    if (s_bound && !store_->subject_valid(pattern_.s.id)) return;
    if (o_bound && !store_->object_valid(pattern_.o.id)) return;
    if (s_bound && o_bound) {
      if (tree.contains(pattern_.s.id - 1, pattern_.o.id - 1)) {
        buffer_.push_back(IdTriple{pattern_.s.id, p, pattern_.o.id});
      }
    } else if (s_bound) {
      for (uint64_t col : tree.direct_neighbors(pattern_.s.id - 1)) {
        buffer_.push_back(IdTriple{pattern_.s.id, p, col + 1});
      }
    } else if (o_bound) {
      for (uint64_t row : tree.reverse_neighbors(pattern_.o.id - 1)) {
        buffer_.push_back(IdTriple{row + 1, p, pattern_.o.id});
      }
    } else {
      const uint64_t side = tree.side();
      for (const Cell& cell : tree.range(0, side - 1, 0, side - 1)) {
        buffer_.push_back(IdTriple{cell.row + 1, p, cell.col + 1});
      }
    }
  }

  const TripleStore* store_;
  TriplePattern pattern_;
  Id next_pred_ = 1;
  Id last_pred_ = 0;
  std::vector<IdTriple> buffer_;
  size_t buffer_pos_ = 0;
};

inline TripleCursor solve_pattern(const TripleStore& store,
                                  TriplePattern pattern) {
  return TripleCursor(store, std::move(pattern));
}

inline std::vector<IdTriple> solve_pattern_all(const TripleStore& store,
                                               TriplePattern pattern) {
  return TripleCursor(store, std::move(pattern)).drain();
}

// Number of distinct k^2-trees a pattern resolution touches: one for a
// bounded predicate, all of them otherwise.
inline uint64_t tree_access_count(const TripleStore& store,
                                  const TriplePattern& pattern) {
  if (!pattern.p.is_variable) {
    if (pattern.p.id < 1 || pattern.p.id > store.predicate_count()) {
      throw std::out_of_range(
          "bounded predicate " + std::to_string(pattern.p.id) +
          " outside valid range [1, " +
          std::to_string(store.predicate_count()) + "]");
    }
    return 1;
  }
  return store.predicate_count();
}

// Store file: magic "K2TS", format version, the four dictionary sizes,
// k, the per-predicate trees (each length-prefixed), then the dictionary.
struct StoreFile {
  TripleStore store;
  TermDictionary dictionary;

  static constexpr char kMagic[4] = {'K', '2', 'T', 'S'};
  static constexpr uint32_t kVersion = 1;

  void write(std::ostream& os) const {
    os.write(kMagic, 4);
    io::write_u32(os, kVersion);
    io::write_u64(os, store.sizes().so);
    io::write_u64(os, store.sizes().s);
    io::write_u64(os, store.sizes().o);
    io::write_u64(os, store.sizes().p);
    io::write_u16(os, static_cast<uint16_t>(store.k()));
    store.write(os);
    dictionary.write(os);
  }

  static StoreFile read(std::istream& is) {
    char magic[4];
    io::read_exact(is, magic, 4, "store magic");
    if (!std::equal(magic, magic + 4, kMagic)) {
      throw corrupt_store_error("bad store magic");
    }
    const uint32_t version = io::read_u32(is, "store version");
    if (version != kVersion) {
      throw corrupt_store_error("unsupported store version " +
                                std::to_string(version));
    }
    StoreFile file;
    TripleStore& store = file.store;
    store.sizes_.so = io::read_u64(is, "|SO|");
    store.sizes_.s = io::read_u64(is, "|S|");
    store.sizes_.o = io::read_u64(is, "|O|");
    store.sizes_.p = io::read_u64(is, "|P|");
    store.k_ = io::read_u16(is, "k");
    if (store.k_ < 2) throw corrupt_store_error("store k < 2");
    store.trees_.reserve(store.sizes_.p);
    for (uint64_t i = 0; i < store.sizes_.p; ++i) {
      const uint64_t len = io::read_u64(is, "tree byte length");
      std::string bytes(len, '\0');
      if (len > 0) io::read_exact(is, bytes.data(), len, "tree bytes");
      std::istringstream tree_in(bytes, std::ios::binary);
      K2Tree tree = K2Tree::read(tree_in);
      if (static_cast<uint64_t>(tree_in.tellg()) != len) {
        throw corrupt_store_error("tree length prefix does not match tree");
      }
      if (tree.k() != store.k_) {
        throw corrupt_store_error("tree k differs from store k");
      }
      if (!store.trees_.empty() &&
          tree.side() != store.trees_.front().side()) {
        throw corrupt_store_error("trees do not share one matrix side");
      }
      store.trees_.push_back(std::move(tree));
    }
    if (!store.trees_.empty()) {
      uint64_t expected = store.k_;
      while (expected < store.sizes_.side()) expected *= store.k_;
      if (store.trees_.front().side() != expected) {
        throw corrupt_store_error(
            "matrix side does not match dictionary sizes");
      }
    }
    file.dictionary = TermDictionary::read(is);
    return file;
  }

  void save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    write(out);
    out.flush();
    if (!out) throw std::runtime_error("write to " + path + " failed");
  }

  static StoreFile load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read(in);
  }

  std::string serialized() const {
    std::ostringstream os(std::ios::binary);
    write(os);
    return os.str();
  }
};

}  // namespace k2ts

#endif  // K2TS_TRIPLE_STORE_HPP_
