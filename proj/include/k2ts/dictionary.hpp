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

#ifndef K2TS_DICTIONARY_HPP_
#define K2TS_DICTIONARY_HPP_

#include <algorithm>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "k2ts/io.hpp"

namespace k2ts {

enum class TermRole { subject, predicate, object };

/*
 * Four-partition term dictionary. Terms playing both subject and object
 * roles share one ID space [1, |SO|]; subject-only terms continue at
 * |SO|+1 in the subject space, object-only terms at |SO|+1 in the object
 * space, and predicates live in their own space [1, |P|]. Within each
 * partition IDs follow ascending lexicographic byte order, which makes the
 * mapping deterministic regardless of input order.
 */
class TermDictionary {
public:
  class Builder {
  public:
    void add(std::string_view subject, std::string_view predicate,
             std::string_view object) {
      subjects_.emplace(subject);
      predicates_.emplace(predicate);
      objects_.emplace(object);
    }

    TermDictionary finish() {
      TermDictionary dict;
      for (const std::string& term : subjects_) {
        if (objects_.count(term)) {
          dict.so_.push_back(term);
        } else {
          dict.s_.push_back(term);
        }
      }
      for (const std::string& term : objects_) {
        if (!subjects_.count(term)) dict.o_.push_back(term);
      }
      dict.p_.assign(predicates_.begin(), predicates_.end());
      std::sort(dict.so_.begin(), dict.so_.end());
      std::sort(dict.s_.begin(), dict.s_.end());
      std::sort(dict.o_.begin(), dict.o_.end());
      std::sort(dict.p_.begin(), dict.p_.end());
      return dict;
    }

  private:
    std::unordered_set<std::string> subjects_;
    std::unordered_set<std::string> predicates_;
    std::unordered_set<std::string> objects_;
  };

  uint64_t so_count() const { return so_.size(); }
  uint64_t s_count() const { return s_.size(); }
  uint64_t o_count() const { return o_.size(); }
  uint64_t p_count() const { return p_.size(); }

  uint64_t subject_range() const { return so_.size() + s_.size(); }
  uint64_t object_range() const { return so_.size() + o_.size(); }

  std::optional<uint64_t> id_for(std::string_view term, TermRole role) const {
    switch (role) {
      case TermRole::subject: {
        if (auto id = find(so_, term, 0)) return id;
        return find(s_, term, so_.size());
      }
      case TermRole::object: {
        if (auto id = find(so_, term, 0)) return id;
        return find(o_, term, so_.size());
      }
      case TermRole::predicate:
        return find(p_, term, 0);
    }
    return std::nullopt;
  }

  const std::string& term_for(uint64_t id, TermRole role) const {
    switch (role) {
      case TermRole::subject:
        if (id >= 1 && id <= so_.size()) return so_[id - 1];
        if (id > so_.size() && id <= subject_range())
          return s_[id - so_.size() - 1];
        throw std::out_of_range("subject ID " + std::to_string(id) +
                                " outside valid range [1, " +
                                std::to_string(subject_range()) + "]");
      case TermRole::object:
        if (id >= 1 && id <= so_.size()) return so_[id - 1];
        if (id > so_.size() && id <= object_range())
          return o_[id - so_.size() - 1];
        throw std::out_of_range("object ID " + std::to_string(id) +
                                " outside valid range [1, " +
                                std::to_string(object_range()) + "]");
      case TermRole::predicate:
        if (id >= 1 && id <= p_.size()) return p_[id - 1];
        throw std::out_of_range("predicate ID " + std::to_string(id) +
                                " outside valid range [1, " +
                                std::to_string(p_.size()) + "]");
    }
    throw std::out_of_range("invalid term role");
  }

  // Wire form: the four term lists in SO, S, O, P order. Each list is a
  // u64 term count followed by u32-length-prefixed UTF-8 terms.
  void write(std::ostream& os) const {
    for (const auto* part : {&so_, &s_, &o_, &p_}) {
      io::write_u64(os, part->size());
      for (const std::string& term : *part) {
        io::write_u32(os, static_cast<uint32_t>(term.size()));
        os.write(term.data(), static_cast<std::streamsize>(term.size()));
      }
    }
  }

  static TermDictionary read(std::istream& is) {
    TermDictionary dict;
    for (auto* part : {&dict.so_, &dict.s_, &dict.o_, &dict.p_}) {
      const uint64_t count = io::read_u64(is, "dictionary partition size");
      part->reserve(count);
      for (uint64_t i = 0; i < count; ++i) {
        const uint32_t len = io::read_u32(is, "term length");
        std::string term(len, '\0');
        if (len > 0) io::read_exact(is, term.data(), len, "term bytes");
        part->push_back(std::move(term));
      }
      if (!std::is_sorted(part->begin(), part->end()) ||
          std::adjacent_find(part->begin(), part->end()) != part->end()) {
        throw corrupt_store_error("dictionary partition not strictly sorted");
      }
    }
    return dict;
  }

  friend bool operator==(const TermDictionary& a, const TermDictionary& b) {
    return a.so_ == b.so_ && a.s_ == b.s_ && a.o_ == b.o_ && a.p_ == b.p_;
  }

private:
  static std::optional<uint64_t> find(const std::vector<std::string>& part,
                                      std::string_view term, uint64_t base) {
    auto it = std::lower_bound(part.begin(), part.end(), term);
    if (it != part.end() && *it == term) {
      return base + static_cast<uint64_t>(it - part.begin()) + 1;
    }
    return std::nullopt;
  }

  std::vector<std::string> so_;
  std::vector<std::string> s_;
  std::vector<std::string> o_;
  std::vector<std::string> p_;
};

}  // namespace k2ts

#endif  // K2TS_DICTIONARY_HPP_
