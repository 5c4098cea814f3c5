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

#ifndef K2TS_JOINS_HPP_
#define K2TS_JOINS_HPP_

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "k2ts/triple_store.hpp"

namespace k2ts {

// Role of the shared variable in the two patterns: subject in both,
// object in both, or subject in one and object in the other (cross join).
enum class JoinAxis { SS, OO, SO };

/*
 * Two-pattern joins fall into six categories by how much of the patterns
 * is unbounded:
 *   A - both predicates bounded, only the join variable unbounded
 *   B - as A with one unbounded predicate
 *   C - as A with both predicates unbounded
 *   D - both predicates bounded, plus a non-join subject/object variable
 *   E - as D with one unbounded predicate
 *   F - as D with both predicates unbounded
 * A/B/C intersect two sorted join-value lists; D/E/F seed from one side
 * and substitute each join value into the other pattern. B/C/E/F repeat
 * the bounded-predicate algorithm across all predicates.
 */
enum class JoinCategory { A, B, C, D, E, F };

inline const char* to_string(JoinAxis axis) {
  switch (axis) {
    case JoinAxis::SS: return "SS";
    case JoinAxis::OO: return "OO";
    case JoinAxis::SO: return "SO";
  }
  return "?";
}

inline const char* to_string(JoinCategory cat) {
  switch (cat) {
    case JoinCategory::A: return "A";
    case JoinCategory::B: return "B";
    case JoinCategory::C: return "C";
    case JoinCategory::D: return "D";
    case JoinCategory::E: return "E";
    case JoinCategory::F: return "F";
  }
  return "?";
}

struct JoinQuery {
  TriplePattern left;
  TriplePattern right;
};

struct JoinPlan {
  JoinAxis axis = JoinAxis::SS;
  JoinCategory category = JoinCategory::A;
  std::string join_var;
  bool join_in_left_subject = true;
  bool join_in_right_subject = true;
  // Output variable order: join variable first, then the remaining
  // variables in pattern order (left s,p,o then right s,p,o).
  std::vector<std::string> vars;
};

// Solution rows, sorted ascending by join-variable ID with ties broken by
// the remaining variables in pattern order; no duplicate rows.
struct BindingSet {
  std::vector<std::string> vars;
  std::vector<std::vector<Id>> rows;
};

// Distinct k^2-trees touched while executing a join.
struct JoinTrace {
  std::set<Id> trees_touched;
};

namespace detail {

inline void collect_vars(const TriplePattern& p,
                         std::vector<std::string>& names) {
  for (const PatternTerm* t : {&p.s, &p.p, &p.o}) {
    if (t->is_variable) {
      if (t->name.empty()) {
        throw std::invalid_argument("join patterns require named variables");
      }
      if (std::find(names.begin(), names.end(), t->name) != names.end()) {
        throw std::invalid_argument("variable ?" + t->name +
                                    " repeated within one pattern");
      }
      names.push_back(t->name);
    }
  }
}

}  // namespace detail

inline JoinPlan classify(const JoinQuery& q) {
  std::vector<std::string> left_vars;
  std::vector<std::string> right_vars;
  detail::collect_vars(q.left, left_vars);
  detail::collect_vars(q.right, right_vars);

  std::vector<std::string> shared;
  for (const std::string& name : left_vars) {
    if (std::find(right_vars.begin(), right_vars.end(), name) !=
        right_vars.end()) {
      shared.push_back(name);
    }
  }
  if (shared.size() != 1) {
    throw std::invalid_argument(
        "join queries must share exactly one variable, found " +
        std::to_string(shared.size()));
  }
  JoinPlan plan;
  plan.join_var = shared.front();

  auto position = [&](const TriplePattern& p, bool& in_subject) {
    if (p.p.is_variable && p.p.name == plan.join_var) {
      throw std::invalid_argument(
          "join variable in predicate position is not supported");
    }
    in_subject = p.s.is_variable && p.s.name == plan.join_var;
  };
  position(q.left, plan.join_in_left_subject);
  position(q.right, plan.join_in_right_subject);

  if (plan.join_in_left_subject && plan.join_in_right_subject) {
    plan.axis = JoinAxis::SS;
  } else if (!plan.join_in_left_subject && !plan.join_in_right_subject) {
    plan.axis = JoinAxis::OO;
  } else {
    plan.axis = JoinAxis::SO;
  }

  const int unbounded_preds = static_cast<int>(q.left.p.is_variable) +
                              static_cast<int>(q.right.p.is_variable);
  auto has_nonjoin_var = [&](const TriplePattern& p) {
    return (p.s.is_variable && p.s.name != plan.join_var) ||
           (p.o.is_variable && p.o.name != plan.join_var);
  };
  const bool with_nonjoin = has_nonjoin_var(q.left) || has_nonjoin_var(q.right);
  static constexpr JoinCategory kBare[3] = {JoinCategory::A, JoinCategory::B,
                                            JoinCategory::C};
  static constexpr JoinCategory kVar[3] = {JoinCategory::D, JoinCategory::E,
                                           JoinCategory::F};
  plan.category = with_nonjoin ? kVar[unbounded_preds] : kBare[unbounded_preds];

  plan.vars.push_back(plan.join_var);
  for (const std::string& name : left_vars) {
    if (name != plan.join_var) plan.vars.push_back(name);
  }
  for (const std::string& name : right_vars) {
    if (name != plan.join_var) plan.vars.push_back(name);
  }
  return plan;
}

// Merge-intersection of two strictly ascending ID lists in one pass.
inline std::vector<Id> intersect_sorted(std::span<const Id> a,
                                        std::span<const Id> b) {
  assert(std::is_sorted(a.begin(), a.end()) &&
         std::adjacent_find(a.begin(), a.end()) == a.end());
  assert(std::is_sorted(b.begin(), b.end()) &&
         std::adjacent_find(b.begin(), b.end()) == b.end());
  std::vector<Id> out;
  size_t i = 0;
  size_t j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      out.push_back(a[i]);
      ++i;
      ++j;
    }
  }
  return out;
}

namespace detail {

// Execution state for one side of a join: the pattern with the join
// variable factored out.
struct JoinSide {
  const TriplePattern* pattern = nullptr;
  bool join_in_subject = true;   // join var position within this pattern
  bool other_is_var = false;     // non-join s/o position is a variable
  std::string other_var;         // its name when variable
  Id other_id = 0;               // its ID when bound
};

inline JoinSide make_side(const TriplePattern& pattern, bool join_in_subject) {
  JoinSide side;
  side.pattern = &pattern;
  side.join_in_subject = join_in_subject;
  const PatternTerm& other = join_in_subject ? pattern.o : pattern.s;
  side.other_is_var = other.is_variable;
  if (other.is_variable) {
    side.other_var = other.name;
  } else {
    side.other_id = other.id;
  }
  return side;
}

class JoinExecutor {
public:
  JoinExecutor(const TripleStore& store, const JoinPlan& plan,
               JoinTrace* trace)
      : store_(store), plan_(plan), trace_(trace) {}

  BindingSet run(const JoinQuery& q) {
    BindingSet result;
    result.vars = plan_.vars;

    const JoinSide left = make_side(q.left, plan_.join_in_left_subject);
    const JoinSide right = make_side(q.right, plan_.join_in_right_subject);

    // Output slots per semantic position.
    const size_t width = plan_.vars.size();
    const auto slot = [&](const std::string& name) {
      return static_cast<size_t>(
          std::find(plan_.vars.begin(), plan_.vars.end(), name) -
          plan_.vars.begin());
    };
    const size_t left_pred_slot =
        q.left.p.is_variable ? slot(q.left.p.name) : width;
    const size_t right_pred_slot =
        q.right.p.is_variable ? slot(q.right.p.name) : width;
    const size_t left_other_slot =
        left.other_is_var ? slot(left.other_var) : width;
    const size_t right_other_slot =
        right.other_is_var ? slot(right.other_var) : width;

    const uint64_t pred_count = store_.predicate_count();
    const auto pred_range = [&](const PatternTerm& p) -> std::pair<Id, Id> {
      if (p.is_variable) return {1, pred_count};
      if (p.id < 1 || p.id > pred_count) {
        throw std::out_of_range("bounded predicate " + std::to_string(p.id) +
                                " outside valid range [1, " +
                                std::to_string(pred_count) + "]");
      }
      return {p.id, p.id};
    };
    const auto [lp_first, lp_last] = pred_range(q.left.p);
    const auto [rp_first, rp_last] = pred_range(q.right.p);

    std::vector<Id> row(width, 0);
    for (Id lp = lp_first; lp <= lp_last; ++lp) {
      if (left_pred_slot < width) row[left_pred_slot] = lp;
      for (Id rp = rp_first; rp <= rp_last; ++rp) {
        if (right_pred_slot < width) row[right_pred_slot] = rp;

        if (!left.other_is_var && !right.other_is_var) {
          // A/B/C shape: two sorted join-value lists, merge-intersected.
          const std::vector<Id>& lv = candidates(left, lp, 0);
          const std::vector<Id>& rv = candidates(right, rp, 1);
          for (Id v : intersect_sorted(lv, rv)) {
            row[0] = v;
            rows_.push_back(row);
          }
          continue;
        }

        // D/E/F shape: seed from the side whose non-join position is a
        // constant; when both carry variables, from the shorter
        // candidate list. Each join value is then substituted into the
        // other pattern.
        const JoinSide* seed = nullptr;
        if (!left.other_is_var) {
          seed = &left;
        } else if (!right.other_is_var) {
          seed = &right;
        } else {
          const std::vector<Id>& lv = candidates(left, lp, 0);
          const std::vector<Id>& rv = candidates(right, rp, 1);
          seed = lv.size() <= rv.size() ? &left : &right;
        }
        const bool seed_is_left = seed == &left;
        const Id seed_pred = seed_is_left ? lp : rp;
        const std::vector<Id>& seed_vals =
            candidates(*seed, seed_pred, seed_is_left ? 0 : 1);

        const JoinSide& other = seed_is_left ? right : left;
        const Id other_pred = seed_is_left ? rp : lp;
        for (Id v : seed_vals) {
          row[0] = v;
          const std::vector<Id> other_vals =
              solve_with_join_value(other, other_pred, v);
          if (other_vals.empty()) continue;
          const std::vector<Id> seed_vars =
              seed->other_is_var ? solve_with_join_value(*seed, seed_pred, v)
                                 : std::vector<Id>{};
          const size_t other_slot =
              seed_is_left ? right_other_slot : left_other_slot;
          const size_t seed_slot =
              seed_is_left ? left_other_slot : right_other_slot;
          emit_cross(row, seed_vars, seed_slot, other_vals, other_slot,
                     other.other_is_var);
        }
      }
    }

    std::sort(rows_.begin(), rows_.end());
    rows_.erase(std::unique(rows_.begin(), rows_.end()), rows_.end());
    result.rows = std::move(rows_);
    return result;
  }

private:
  void touch(Id pred) {
    if (trace_) trace_->trees_touched.insert(pred);
  }

  // Sorted list of join-variable values that can satisfy one side under a
  // fixed predicate. With a bound non-join position this is one row or
  // column of the tree; with a variable it is the projection of the whole
  // tree onto the join axis. For SO joins the list is clipped at |SO|:
  // IDs above |SO| name different terms in subject and object space, so
  // they can never produce a cross match.
  const std::vector<Id>& candidates(const JoinSide& side, Id pred,
                                    int side_key) {
    const auto key = std::make_pair(side_key, pred);
    auto it = candidate_memo_.find(key);
    if (it != candidate_memo_.end()) return it->second;

    touch(pred);
    const K2Tree& tree = store_.tree(pred);
    std::vector<Id> vals;
    if (!side.other_is_var) {
      const Id c = side.other_id;
      if (side.join_in_subject) {
        if (store_.object_valid(c)) {
          for (uint64_t r : tree.reverse_neighbors(c - 1)) vals.push_back(r + 1);
        }
      } else {
        if (store_.subject_valid(c)) {
          for (uint64_t col : tree.direct_neighbors(c - 1)) vals.push_back(col + 1);
        }
      }
    } else {
      const uint64_t side_len = tree.side();
      if (tree.ones() > 0) {
        if (side.join_in_subject) {
          // range output is row-major, so rows arrive sorted.
          for (const Cell& cell : tree.range(0, side_len - 1, 0, side_len - 1)) {
            if (vals.empty() || vals.back() != cell.row + 1) {
              vals.push_back(cell.row + 1);
            }
          }
        } else {
          for (const Cell& cell : tree.range(0, side_len - 1, 0, side_len - 1)) {
            vals.push_back(cell.col + 1);
          }
          std::sort(vals.begin(), vals.end());
          vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
        }
      }
    }
    if (plan_.axis == JoinAxis::SO) {
      const uint64_t so = store_.sizes().so;
      vals.erase(std::upper_bound(vals.begin(), vals.end(), so), vals.end());
    }
    return candidate_memo_.emplace(key, std::move(vals)).first->second;
  }

  // Solutions of one side once the join variable is bound to v. With a
  // variable non-join position the result lists that variable's values;
  // with a constant it is an existence check encoded as zero or one
  // (empty) solution.
  std::vector<Id> solve_with_join_value(const JoinSide& side, Id pred, Id v) {
    touch(pred);
    const K2Tree& tree = store_.tree(pred);
    std::vector<Id> vals;
    if (side.join_in_subject) {
      if (!store_.subject_valid(v)) return vals;
      if (side.other_is_var) {
        for (uint64_t col : tree.direct_neighbors(v - 1)) vals.push_back(col + 1);
      } else {
        if (store_.object_valid(side.other_id) &&
            tree.contains(v - 1, side.other_id - 1)) {
          vals.push_back(kSatisfied);
        }
      }
    } else {
      if (!store_.object_valid(v)) return vals;
      if (side.other_is_var) {
        for (uint64_t r : tree.reverse_neighbors(v - 1)) vals.push_back(r + 1);
      } else {
        if (store_.subject_valid(side.other_id) &&
            tree.contains(side.other_id - 1, v - 1)) {
          vals.push_back(kSatisfied);
        }
      }
    }
    return vals;
  }

  void emit_cross(std::vector<Id>& row, const std::vector<Id>& seed_vars,
                  size_t seed_slot, const std::vector<Id>& other_vals,
                  size_t other_slot, bool other_is_var) {
    if (seed_vars.empty()) {
      for (Id w : other_vals) {
        if (other_is_var) row[other_slot] = w;
        rows_.push_back(row);
      }
      return;
    }
    for (Id u : seed_vars) {
      row[seed_slot] = u;
      for (Id w : other_vals) {
        if (other_is_var) row[other_slot] = w;
        rows_.push_back(row);
      }
    }
  }

  // Marker for "pattern satisfied, no variable to bind".
  static constexpr Id kSatisfied = 0;

  const TripleStore& store_;
  const JoinPlan& plan_;
  JoinTrace* trace_;
  std::map<std::pair<int, Id>, std::vector<Id>> candidate_memo_;
  std::vector<std::vector<Id>> rows_;
};

}  // namespace detail

inline BindingSet execute(const TripleStore& store, const JoinQuery& q,
                          JoinTrace* trace = nullptr) {
  const JoinPlan plan = classify(q);
  detail::JoinExecutor executor(store, plan, trace);
  return executor.run(q);
}

}  // namespace k2ts

#endif  // K2TS_JOINS_HPP_
