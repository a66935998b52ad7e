// Copyright 2026 The incluster Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "incluster/core.hpp"
#include "incluster/search_control.hpp"

namespace incluster {

/// Integer program with bounded variables and 0/1 coefficients. A
/// constraint lists the variables whose coefficient is 1.
struct IlpInstance {
  struct Variable {
    std::int64_t lower = 0;
    std::optional<std::int64_t> upper;
  };
  struct Constraint {
    std::vector<std::size_t> vars;
    std::int64_t rhs = 0;
  };

  std::vector<Variable> variables;
  std::vector<Constraint> eq_constraints;
  std::vector<Constraint> le_constraints;

  std::size_t add_variable(std::int64_t lower,
                           std::optional<std::int64_t> upper) {
    variables.push_back({lower, upper});
    return variables.size() - 1;
  }
  void add_eq(std::vector<std::size_t> vars, std::int64_t rhs) {
    eq_constraints.push_back({std::move(vars), rhs});
  }
  void add_le(std::vector<std::size_t> vars, std::int64_t rhs) {
    le_constraints.push_back({std::move(vars), rhs});
  }

  bool satisfied_by(const std::vector<std::int64_t>& x) const {
    if (x.size() != variables.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] < variables[i].lower) return false;
      if (variables[i].upper && x[i] > *variables[i].upper) return false;
    }
    auto sum = [&](const Constraint& c) {
      std::int64_t s = 0;
      for (auto v : c.vars) s += x[v];
      return s;
    };
    for (const auto& c : eq_constraints) {
      if (sum(c) != c.rhs) return false;
    }
    for (const auto& c : le_constraints) {
      if (sum(c) > c.rhs) return false;
    }
    return true;
  }
};

namespace detail {

class IlpSearch {
 public:
  IlpSearch(const IlpInstance& ilp, SearchControl* ctl) : ilp_(ilp), ctl_(ctl) {
    const std::size_t n = ilp.variables.size();
    lo_.resize(n);
    hi_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& v = ilp.variables[i];
      if (!v.upper) throw UsageError("ILP variable without an upper bound");
      lo_[i] = v.lower;
      hi_[i] = *v.upper;
    }
    eq_of_.resize(n);
    le_of_.resize(n);
    for (std::size_t c = 0; c < ilp.eq_constraints.size(); ++c) {
      for (auto v : ilp.eq_constraints[c].vars) eq_of_[v].push_back(c);
    }
    for (std::size_t c = 0; c < ilp.le_constraints.size(); ++c) {
      for (auto v : ilp.le_constraints[c].vars) le_of_[v].push_back(c);
    }
    eq_sum_.assign(ilp.eq_constraints.size(), 0);
    le_sum_.assign(ilp.le_constraints.size(), 0);
    // Free lower/upper mass of still-unassigned variables per constraint.
    eq_free_lo_.assign(ilp.eq_constraints.size(), 0);
    eq_free_hi_.assign(ilp.eq_constraints.size(), 0);
    le_free_lo_.assign(ilp.le_constraints.size(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      for (auto c : eq_of_[i]) {
        eq_free_lo_[c] += lo_[i];
        eq_free_hi_[c] += hi_[i];
      }
      for (auto c : le_of_[i]) le_free_lo_[c] += lo_[i];
    }
    // When equality groups are disjoint and lower bounds are zero, the part
    // of a group's remaining rhs that cannot go outside a <= constraint is
    // forced into it.
    group_of_.assign(n, kNoGroup);
    groups_disjoint_ = true;
    for (std::size_t c = 0; c < ilp.eq_constraints.size(); ++c) {
      for (auto v : ilp.eq_constraints[c].vars) {
        if (group_of_[v] != kNoGroup || lo_[v] != 0) groups_disjoint_ = false;
        group_of_[v] = c;
      }
    }
    in_le_.assign(ilp.le_constraints.size(), std::vector<char>(n, 0));
    for (std::size_t c = 0; c < ilp.le_constraints.size(); ++c) {
      for (auto v : ilp.le_constraints[c].vars) in_le_[c][v] = 1;
    }
    x_.assign(n, 0);
    assigned_.assign(n, 0);
  }

  std::optional<std::vector<std::int64_t>> run() {
    if (!consistent()) return std::nullopt;
    if (dfs(0)) return x_;
    return std::nullopt;
  }

 private:
  static constexpr std::size_t kNoGroup = std::numeric_limits<std::size_t>::max();

  bool consistent() const {
    for (std::size_t c = 0; c < eq_sum_.size(); ++c) {
      const auto rhs = ilp_.eq_constraints[c].rhs;
      if (eq_sum_[c] + eq_free_lo_[c] > rhs) return false;
      if (eq_sum_[c] + eq_free_hi_[c] < rhs) return false;
    }
    for (std::size_t c = 0; c < le_sum_.size(); ++c) {
      if (le_sum_[c] + le_free_lo_[c] > ilp_.le_constraints[c].rhs) {
        return false;
      }
    }
    if (groups_disjoint_) {
      for (std::size_t l = 0; l < le_sum_.size(); ++l) {
        std::int64_t forced = le_sum_[l];
        for (std::size_t g = 0; g < eq_sum_.size(); ++g) {
          std::int64_t outside = 0;
          bool touches = false;
          for (auto v : ilp_.eq_constraints[g].vars) {
            if (assigned_[v]) continue;
            if (in_le_[l][v]) {
              touches = true;
            } else {
              outside += hi_[v];
            }
          }
          if (!touches) continue;
          const auto need = ilp_.eq_constraints[g].rhs - eq_sum_[g] - outside;
          if (need > 0) forced += need;
        }
        if (forced > ilp_.le_constraints[l].rhs) return false;
      }
    }
    return true;
  }

  void assign(std::size_t v, std::int64_t value) {
    x_[v] = value;
    assigned_[v] = 1;
    for (auto c : eq_of_[v]) {
      eq_sum_[c] += value;
      eq_free_lo_[c] -= lo_[v];
      eq_free_hi_[c] -= hi_[v];
    }
    for (auto c : le_of_[v]) {
      le_sum_[c] += value;
      le_free_lo_[c] -= lo_[v];
    }
  }
  void unassign(std::size_t v) {
    for (auto c : eq_of_[v]) {
      eq_sum_[c] -= x_[v];
      eq_free_lo_[c] += lo_[v];
      eq_free_hi_[c] += hi_[v];
    }
    for (auto c : le_of_[v]) {
      le_sum_[c] -= x_[v];
      le_free_lo_[c] += lo_[v];
    }
    assigned_[v] = 0;
    x_[v] = 0;
  }

  bool dfs(std::size_t v) {
    checkpoint(ctl_);
    if (v == x_.size()) return true;
    // Tighten the domain of v from the constraints it appears in.
    std::int64_t lo = lo_[v];
    std::int64_t hi = hi_[v];
    for (auto c : eq_of_[v]) {
      const auto rest = ilp_.eq_constraints[c].rhs - eq_sum_[c];
      hi = std::min(hi, rest - (eq_free_lo_[c] - lo_[v]));
      lo = std::max(lo, rest - (eq_free_hi_[c] - hi_[v]));
    }
    for (auto c : le_of_[v]) {
      const auto rest = ilp_.le_constraints[c].rhs - le_sum_[c];
      hi = std::min(hi, rest - (le_free_lo_[c] - lo_[v]));
    }
    for (std::int64_t value = lo; value <= hi; ++value) {
      assign(v, value);
      if (consistent() && dfs(v + 1)) return true;
      unassign(v);
    }
    return false;
  }

  const IlpInstance& ilp_;
  SearchControl* ctl_;
  std::vector<std::int64_t> lo_, hi_;
  std::vector<std::vector<std::size_t>> eq_of_, le_of_;
  std::vector<std::int64_t> eq_sum_, le_sum_;
  std::vector<std::int64_t> eq_free_lo_, eq_free_hi_, le_free_lo_;
  std::vector<std::size_t> group_of_;
  bool groups_disjoint_ = false;
  std::vector<std::vector<char>> in_le_;
  std::vector<std::int64_t> x_;
  std::vector<char> assigned_;
};

}  // namespace detail

/// Exact feasibility by depth-first search in declaration order, trying
/// values in ascending order.
inline std::optional<std::vector<std::int64_t>> feasible(
    const IlpInstance& ilp, SearchControl* ctl = nullptr) {
  detail::IlpSearch search(ilp, ctl);
  auto result = search.run();
  if (result && !ilp.satisfied_by(*result)) {
    throw std::logic_error("ILP search returned an infeasible assignment");
  }
  return result;
}

}  // namespace incluster
