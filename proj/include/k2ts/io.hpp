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

#ifndef K2TS_IO_HPP_
#define K2TS_IO_HPP_

#include <cstdint>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace k2ts {

// Thrown when a serialized structure fails validation on load.
class corrupt_store_error : public std::runtime_error {
public:
  explicit corrupt_store_error(const std::string& what)
      : std::runtime_error(what) {}
};

namespace io {

// All integers on the wire are little-endian, independent of host order.

inline void write_u16(std::ostream& os, uint16_t v) {
  char b[2] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff)};
  os.write(b, 2);
}

inline void write_u32(std::ostream& os, uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  os.write(b, 4);
}

inline void write_u64(std::ostream& os, uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  os.write(b, 8);
}

inline void read_exact(std::istream& is, char* buf, size_t n,
                       const char* what) {
  is.read(buf, static_cast<std::streamsize>(n));
  if (static_cast<size_t>(is.gcount()) != n) {
    throw corrupt_store_error(std::string("truncated input while reading ") +
                              what);
  }
}

inline uint16_t read_u16(std::istream& is, const char* what = "u16") {
  char b[2];
  read_exact(is, b, 2, what);
  return static_cast<uint16_t>(static_cast<uint8_t>(b[0])) |
         static_cast<uint16_t>(static_cast<uint8_t>(b[1])) << 8;
}

inline uint32_t read_u32(std::istream& is, const char* what = "u32") {
  char b[4];
  read_exact(is, b, 4, what);
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i)
    v |= static_cast<uint32_t>(static_cast<uint8_t>(b[i])) << (8 * i);
  return v;
}

inline uint64_t read_u64(std::istream& is, const char* what = "u64") {
  char b[8];
  read_exact(is, b, 8, what);
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i)
    v |= static_cast<uint64_t>(static_cast<uint8_t>(b[i])) << (8 * i);
  return v;
}

}  // namespace io
}  // namespace k2ts

#endif  // K2TS_IO_HPP_
