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

#ifndef K2TS_BIT_SEQUENCE_HPP_
#define K2TS_BIT_SEQUENCE_HPP_

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "k2ts/io.hpp"

namespace k2ts {

/*
 * Static bit sequence with rank support.
 *
 * Bits are addressed most-significant-first within each payload byte, so
 * the packed bytes double as the wire format. rank1 uses a single-level
 * directory of absolute 1-counts sampled every `sample` bits plus in-word
 * population counts; the directory is rebuilt on load and never serialized.
 * The sample step must be a positive multiple of 64 bits so directory
 * blocks stay word-aligned.
 */
class BitSequence {
public:
  static constexpr uint64_t kDefaultSample = 512;  // bits per directory entry

  class Builder {
  public:
    explicit Builder(uint64_t sample = kDefaultSample) : sample_(sample) {
      if (sample == 0 || sample % 64 != 0) {
        throw std::invalid_argument(
            "BitSequence: sample must be a positive multiple of 64");
      }
    }

    void push_back(bool bit) {
      if ((size_ & 7) == 0) bytes_.push_back(0);
      if (bit) bytes_.back() |= static_cast<uint8_t>(0x80u >> (size_ & 7));
      ++size_;
    }

    BitSequence finish() {
      BitSequence seq;
      seq.sample_ = sample_;
      seq.size_ = size_;
      seq.bytes_ = std::move(bytes_);
      seq.build_rank_dir();
      bytes_.clear();
      size_ = 0;
      return seq;
    }

  private:
    uint64_t sample_;
    std::vector<uint8_t> bytes_;
    uint64_t size_ = 0;
  };

  BitSequence() { rank_dir_.push_back(0); }

  static BitSequence from_bits(const std::vector<bool>& bits,
                               uint64_t sample = kDefaultSample) {
    Builder b(sample);
    for (bool bit : bits) b.push_back(bit);
    return b.finish();
  }

  uint64_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  bool access(uint64_t i) const {
    if (i >= size_) {
      throw std::out_of_range("BitSequence::access: index " +
                              std::to_string(i) + " >= length " +
                              std::to_string(size_));
    }
    return (bytes_[i >> 3] >> (7 - (i & 7))) & 1u;
  }

  bool operator[](uint64_t i) const { return access(i); }

  // Number of 1-bits in positions [0, i).
  uint64_t rank1(uint64_t i) const {
    if (i > size_) {
      throw std::out_of_range("BitSequence::rank1: index " + std::to_string(i) +
                              " > length " + std::to_string(size_));
    }
    const uint64_t block = i / sample_;
    uint64_t count = rank_dir_[block];
    uint64_t byte = block * (sample_ / 8);
    const uint64_t last_byte = i >> 3;
    while (byte + 8 <= last_byte) {
      count += popcount_word(byte);
      byte += 8;
    }
    while (byte < last_byte) {
      count += static_cast<uint64_t>(std::popcount(bytes_[byte]));
      ++byte;
    }
    const unsigned rem = static_cast<unsigned>(i & 7);
    if (rem != 0) {
      count += static_cast<uint64_t>(
          std::popcount(static_cast<uint8_t>(bytes_[last_byte] >> (8 - rem))));
    }
    return count;
  }

  uint64_t ones() const { return rank1(size_); }

  uint64_t rank_overhead_bits() const { return rank_dir_.size() * 64; }

  // Wire form: length (u64), then ceil(length/8) payload bytes.
  void write(std::ostream& os) const {
    io::write_u64(os, size_);
    os.write(reinterpret_cast<const char*>(bytes_.data()),
             static_cast<std::streamsize>(bytes_.size()));
  }

  static BitSequence read(std::istream& is) {
    BitSequence seq;
    seq.size_ = io::read_u64(is, "bit sequence length");
    const uint64_t nbytes = (seq.size_ + 7) / 8;
    seq.bytes_.resize(nbytes);
    if (nbytes > 0) {
      io::read_exact(is, reinterpret_cast<char*>(seq.bytes_.data()), nbytes,
                     "bit sequence payload");
      const unsigned pad = static_cast<unsigned>((8 - (seq.size_ & 7)) & 7);
      if (pad != 0 &&
          (seq.bytes_.back() & static_cast<uint8_t>((1u << pad) - 1)) != 0) {
        throw corrupt_store_error("bit sequence has nonzero padding bits");
      }
    }
    seq.rank_dir_.clear();
    seq.build_rank_dir();
    return seq;
  }

  uint64_t serialized_bytes() const { return 8 + bytes_.size(); }

  friend bool operator==(const BitSequence& a, const BitSequence& b) {
    return a.size_ == b.size_ && a.bytes_ == b.bytes_;
  }

private:
  uint64_t popcount_word(uint64_t byte_index) const {
    uint64_t w;
    std::memcpy(&w, bytes_.data() + byte_index, 8);
    return static_cast<uint64_t>(std::popcount(w));
  }

  void build_rank_dir() {
    const uint64_t entries = size_ / sample_ + 1;
    rank_dir_.assign(entries, 0);
    const uint64_t bytes_per_sample = sample_ / 8;
    for (uint64_t j = 1; j < entries; ++j) {
      uint64_t count = rank_dir_[j - 1];
      const uint64_t begin = (j - 1) * bytes_per_sample;
      for (uint64_t b = begin; b < begin + bytes_per_sample; b += 8) {
        count += popcount_word(b);
      }
      rank_dir_[j] = count;
    }
  }

  uint64_t sample_ = kDefaultSample;
  uint64_t size_ = 0;
  std::vector<uint8_t> bytes_;
  std::vector<uint64_t> rank_dir_;
};

}  // namespace k2ts

#endif  // K2TS_BIT_SEQUENCE_HPP_
