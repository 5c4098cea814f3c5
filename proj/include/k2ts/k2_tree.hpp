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

#ifndef K2TS_K2_TREE_HPP_
#define K2TS_K2_TREE_HPP_

#include <algorithm>
#include <compare>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "k2ts/bit_sequence.hpp"
#include "k2ts/io.hpp"

namespace k2ts {

struct Cell {
  uint64_t row = 0;
  uint64_t col = 0;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

struct K2TreeBits {
  uint64_t t_bits = 0;
  uint64_t l_bits = 0;
  uint64_t serialized_bits = 0;    // exact size of the wire form
  uint64_t rank_overhead_bits = 0; // in-memory rank directories
  uint64_t total_bits() const { return serialized_bits + rank_overhead_bits; }
};

/*
 * Static k^2-tree over an n x n binary matrix, n = k^height.
 *
 * The matrix is split recursively into k x k sub-blocks. One bit per
 * sub-block records whether it contains any 1; all-zero sub-blocks collapse
 * to that single 0-bit. Bits of the internal levels are concatenated
 * (level by level, row-major within a block) into T, the last level into L.
 * Children of the 1-bit at position p of T start at offset rank1(T, p+1)*k^2
 * of the conceptual concatenation T:L.
 *
 * A tree built from an empty point set keeps T and L empty; there is no
 * all-zero root block.
 */
class K2Tree {
public:
  K2Tree() = default;

  // Builds a tree over points in [0, side)^2. The logical side is rounded
  // up to the next power of k and the extension padded with 0s; padded
  // regions collapse, so they add no significant space.
  static K2Tree build(std::vector<Cell> points, uint64_t side, uint32_t k = 2) {
    if (k < 2) {
      throw std::invalid_argument("K2Tree::build: k must be >= 2, got " +
                                  std::to_string(k));
    }
    K2Tree tree;
    tree.k_ = k;
    tree.height_ = 1;
    tree.n_ = k;
    while (tree.n_ < side) {
      if (tree.n_ > (uint64_t{1} << 57)) {
        throw std::invalid_argument("K2Tree::build: side too large");
      }
      tree.n_ *= k;
      ++tree.height_;
    }
    for (const Cell& c : points) {
      if (c.row >= side || c.col >= side) {
        throw std::out_of_range("K2Tree::build: point (" +
                                std::to_string(c.row) + ", " +
                                std::to_string(c.col) +
                                ") outside side " + std::to_string(side));
      }
    }

    // Level-wise quadrant order: lexicographic on the per-level child
    // digits. Sorting once makes every level partition a contiguous scan.
    std::vector<uint64_t> child_sides(tree.height_);
    uint64_t cs = tree.n_;
    for (uint32_t level = 0; level < tree.height_; ++level) {
      cs /= k;
      child_sides[level] = cs;
    }
    auto digit = [k](const Cell& c, uint64_t child_side) -> uint64_t {
      return (c.row / child_side % k) * k + (c.col / child_side % k);
    };
    std::sort(points.begin(), points.end(),
              [&](const Cell& a, const Cell& b) {
                for (uint64_t side_l : child_sides) {
                  const uint64_t da = digit(a, side_l);
                  const uint64_t db = digit(b, side_l);
                  if (da != db) return da < db;
                }
                return false;
              });
    points.erase(std::unique(points.begin(), points.end()), points.end());
    tree.ones_ = points.size();

    BitSequence::Builder t_builder;
    BitSequence::Builder l_builder;
    if (!points.empty()) {
      const uint64_t square = uint64_t{k} * k;
      std::vector<std::pair<size_t, size_t>> groups{{0, points.size()}};
      std::vector<std::pair<size_t, size_t>> next;
      for (uint32_t level = 0; level < tree.height_; ++level) {
        const bool leaf_level = level + 1 == tree.height_;
        BitSequence::Builder& out = leaf_level ? l_builder : t_builder;
        const uint64_t side_l = child_sides[level];
        next.clear();
        for (const auto& [begin, end] : groups) {
          size_t pos = begin;
          for (uint64_t d = 0; d < square; ++d) {
            const size_t sub_begin = pos;
            while (pos < end && digit(points[pos], side_l) == d) ++pos;
            out.push_back(pos != sub_begin);
            if (pos != sub_begin && !leaf_level) {
              next.emplace_back(sub_begin, pos);
            }
          }
        }
        groups.swap(next);
      }
    }
    tree.t_ = t_builder.finish();
    tree.l_ = l_builder.finish();
    return tree;
  }

  uint32_t k() const { return k_; }
  uint32_t height() const { return height_; }
  uint64_t side() const { return n_; }
  uint64_t ones() const { return ones_; }

  bool contains(uint64_t row, uint64_t col) const {
    check_coord(row, "row");
    check_coord(col, "col");
    if (ones_ == 0) return false;
    uint64_t block_side = n_;
    uint64_t base = 0;
    uint64_t r = row;
    uint64_t c = col;
    while (true) {
      block_side /= k_;
      const uint64_t p = base + (r / block_side) * k_ + (c / block_side);
      if (p >= t_.size()) return l_.access(p - t_.size());
      if (!t_.access(p)) return false;
      base = t_.rank1(p + 1) * k_ * k_;
      r %= block_side;
      c %= block_side;
    }
  }

  // All columns c with contains(row, c), strictly ascending.
  std::vector<uint64_t> direct_neighbors(uint64_t row) const {
    check_coord(row, "row");
    std::vector<uint64_t> cols;
    if (ones_ == 0) return cols;
    walk_row(0, n_, row, 0, cols);
    return cols;
  }

  // All rows r with contains(r, col), strictly ascending.
  std::vector<uint64_t> reverse_neighbors(uint64_t col) const {
    check_coord(col, "col");
    std::vector<uint64_t> rows;
    if (ones_ == 0) return rows;
    walk_col(0, n_, col, 0, rows);
    return rows;
  }

  // All 1-cells inside the inclusive rectangle, row-major ascending.
  std::vector<Cell> range(uint64_t row_lo, uint64_t row_hi, uint64_t col_lo,
                          uint64_t col_hi) const {
    if (row_lo > row_hi || col_lo > col_hi) {
      throw std::out_of_range("K2Tree::range: inverted bounds");
    }
    check_coord(row_hi, "row_hi");
    check_coord(col_hi, "col_hi");
    std::vector<Cell> cells;
    if (ones_ == 0) return cells;
    walk_range(0, n_, 0, 0, row_lo, row_hi, col_lo, col_hi, cells);
    std::sort(cells.begin(), cells.end());
    return cells;
  }

  K2TreeBits bit_size() const {
    K2TreeBits bits;
    bits.t_bits = t_.size();
    bits.l_bits = l_.size();
    bits.serialized_bits =
        8 * (2 + 2 + 8 + t_.serialized_bytes() + l_.serialized_bytes());
    bits.rank_overhead_bits =
        t_.rank_overhead_bits() + l_.rank_overhead_bits();
    return bits;
  }

  // Wire form: k (u16), height (u16), ones (u64), then T and L.
  void write(std::ostream& os) const {
    io::write_u16(os, static_cast<uint16_t>(k_));
    io::write_u16(os, static_cast<uint16_t>(height_));
    io::write_u64(os, ones_);
    t_.write(os);
    l_.write(os);
  }

  static K2Tree read(std::istream& is) {
    K2Tree tree;
    tree.k_ = io::read_u16(is, "k");
    tree.height_ = io::read_u16(is, "height");
    tree.ones_ = io::read_u64(is, "ones");
    if (tree.k_ < 2) throw corrupt_store_error("k2-tree with k < 2");
    if (tree.height_ < 1) throw corrupt_store_error("k2-tree with height 0");
    tree.n_ = 1;
    for (uint32_t i = 0; i < tree.height_; ++i) {
      if (tree.n_ > (uint64_t{1} << 57)) {
        throw corrupt_store_error("k2-tree height overflows matrix side");
      }
      tree.n_ *= tree.k_;
    }
    tree.t_ = BitSequence::read(is);
    tree.l_ = BitSequence::read(is);
    tree.validate();
    return tree;
  }

  std::string serialized() const {
    std::ostringstream os(std::ios::binary);
    write(os);
    return os.str();
  }

  friend bool operator==(const K2Tree& a, const K2Tree& b) {
    return a.k_ == b.k_ && a.height_ == b.height_ && a.ones_ == b.ones_ &&
           a.t_ == b.t_ && a.l_ == b.l_;
  }

private:
  void check_coord(uint64_t v, const char* name) const {
    if (v >= n_) {
      throw std::out_of_range(std::string("K2Tree: ") + name + " " +
                              std::to_string(v) + " >= matrix side " +
                              std::to_string(n_));
    }
  }

  void walk_row(uint64_t base, uint64_t block_side, uint64_t r,
                uint64_t col_origin, std::vector<uint64_t>& out) const {
    const uint64_t child_side = block_side / k_;
    const uint64_t i = r / child_side;
    for (uint64_t j = 0; j < k_; ++j) {
      const uint64_t p = base + i * k_ + j;
      if (p >= t_.size()) {
        if (l_.access(p - t_.size())) out.push_back(col_origin + j);
      } else if (t_.access(p)) {
        walk_row(t_.rank1(p + 1) * k_ * k_, child_side, r % child_side,
                 col_origin + j * child_side, out);
      }
    }
  }

  void walk_col(uint64_t base, uint64_t block_side, uint64_t c,
                uint64_t row_origin, std::vector<uint64_t>& out) const {
    const uint64_t child_side = block_side / k_;
    const uint64_t j = c / child_side;
    for (uint64_t i = 0; i < k_; ++i) {
      const uint64_t p = base + i * k_ + j;
      if (p >= t_.size()) {
        if (l_.access(p - t_.size())) out.push_back(row_origin + i);
      } else if (t_.access(p)) {
        walk_col(t_.rank1(p + 1) * k_ * k_, child_side, c % child_side,
                 row_origin + i * child_side, out);
      }
    }
  }

  void walk_range(uint64_t base, uint64_t block_side, uint64_t row_origin,
                  uint64_t col_origin, uint64_t row_lo, uint64_t row_hi,
                  uint64_t col_lo, uint64_t col_hi,
                  std::vector<Cell>& out) const {
    const uint64_t child_side = block_side / k_;
    for (uint64_t i = 0; i < k_; ++i) {
      const uint64_t r0 = row_origin + i * child_side;
      if (r0 > row_hi || r0 + child_side <= row_lo) continue;
      for (uint64_t j = 0; j < k_; ++j) {
        const uint64_t c0 = col_origin + j * child_side;
        if (c0 > col_hi || c0 + child_side <= col_lo) continue;
        const uint64_t p = base + i * k_ + j;
        if (p >= t_.size()) {
          if (l_.access(p - t_.size())) out.push_back(Cell{r0, c0});
        } else if (t_.access(p)) {
          walk_range(t_.rank1(p + 1) * k_ * k_, child_side, r0, c0, row_lo,
                     row_hi, col_lo, col_hi, out);
        }
      }
    }
  }

  // Checks the level structure: each 1-bit of an internal level owns
  // exactly k^2 bits at the next level, and L hangs off the last one.
  void validate() const {
    const uint64_t square = uint64_t{k_} * k_;
    if (ones_ == 0) {
      if (t_.size() != 0 || l_.size() != 0) {
        throw corrupt_store_error("empty k2-tree with nonempty bitmaps");
      }
      return;
    }
    uint64_t offset = 0;
    uint64_t level_size = square;
    for (uint32_t level = 0; level + 1 < height_; ++level) {
      if (offset + level_size > t_.size()) {
        throw corrupt_store_error("k2-tree T bitmap shorter than its levels");
      }
      const uint64_t ones_in_level =
          t_.rank1(offset + level_size) - t_.rank1(offset);
      offset += level_size;
      level_size = ones_in_level * square;
    }
    if (offset != t_.size()) {
      throw corrupt_store_error("k2-tree T bitmap longer than its levels");
    }
    if (level_size != l_.size()) {
      throw corrupt_store_error("k2-tree L bitmap does not match last level");
    }
    if (l_.ones() != ones_) {
      throw corrupt_store_error("k2-tree ones count does not match L");
    }
  }

  uint32_t k_ = 2;
  uint32_t height_ = 1;
  uint64_t n_ = 2;
  uint64_t ones_ = 0;
  BitSequence t_;
  BitSequence l_;
};

}  // namespace k2ts

#endif  // K2TS_K2_TREE_HPP_
