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
#include <map>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "incluster/coord_set.hpp"
#include "incluster/core.hpp"

namespace incluster {

/// Multiset of subsets of [d].
struct SetFamily {
  std::size_t d = 0;
  std::vector<CoordSet> members;

  SetFamily() = default;
  explicit SetFamily(std::size_t dim) : d(dim) {}
  SetFamily(std::size_t dim, std::vector<CoordSet> m)
      : d(dim), members(std::move(m)) {}

  std::size_t size() const noexcept { return members.size(); }
  bool contains(const CoordSet& s) const {
    return std::find(members.begin(), members.end(), s) != members.end();
  }
  /// Members of cardinality exactly t.
  SetFamily of_cardinality(std::size_t t) const {
    SetFamily out(d);
    for (const auto& s : members) {
      if (s.count() == t) out.members.push_back(s);
    }
    return out;
  }
};

/// One entry of a core representation: the core and the member cardinality.
struct CoreEntry {
  CoordSet core;
  std::size_t cardinality = 0;

  friend bool operator==(const CoreEntry&, const CoreEntry&) = default;
  friend auto operator<=>(const CoreEntry& a, const CoreEntry& b) {
    if (auto c = a.cardinality <=> b.cardinality; c != 0) return c;
    return a.core <=> b.core;
  }
};

using CoreRepresentation = std::vector<CoreEntry>;

/// Greedy sunflower with the given core, scanning members by index. A member
/// joins when it contains the core and its part outside the core misses the
/// parts already taken.
inline std::vector<std::size_t> maximal_sunflower(const SetFamily& f,
                                                  const CoordSet& core) {
  std::vector<std::size_t> out;
  CoordSet used(f.d);
  for (std::size_t i = 0; i < f.members.size(); ++i) {
    const auto& s = f.members[i];
    if (!core.is_subset_of(s)) continue;
    CoordSet residue = s - core;
    if (residue.intersects(used)) continue;
    used |= residue;
    out.push_back(i);
  }
  return out;
}

namespace detail {

// Maximum packing of pairwise disjoint sets, stopping once `goal` is reached.
inline bool pack_disjoint(const std::vector<CoordSet>& sets, std::size_t from,
                          CoordSet& used, std::size_t have, std::size_t goal) {
  if (have >= goal) return true;
  if (have + (sets.size() - from) < goal) return false;
  for (std::size_t i = from; i < sets.size(); ++i) {
    if (have + (sets.size() - i) < goal) return false;
    if (sets[i].intersects(used)) continue;
    used |= sets[i];
    const bool ok = pack_disjoint(sets, i + 1, used, have + 1, goal);
    used.subtract(sets[i]);
    if (ok) return true;
  }
  return false;
}

}  // namespace detail

/// Exact test for a sunflower with the given core and at least `petals`
/// members. Members equal to the core have an empty residue and always fit.
inline bool has_fat_sunflower(const SetFamily& f, const CoordSet& core,
                              std::size_t petals) {
  if (petals == 0) throw UsageError("petals must be positive");
  std::size_t free_members = 0;
  std::vector<CoordSet> residues;
  for (const auto& s : f.members) {
    if (!core.is_subset_of(s)) continue;
    CoordSet residue = s - core;
    if (residue.none()) {
      ++free_members;
    } else {
      residues.push_back(std::move(residue));
    }
  }
  if (free_members >= petals) return true;
  // Small residues first makes the packing search find answers sooner.
  std::stable_sort(residues.begin(), residues.end(),
                   [](const CoordSet& a, const CoordSet& b) {
                     return a.count() < b.count();
                   });
  CoordSet used(f.d);
  return detail::pack_disjoint(residues, 0, used, 0, petals - free_members);
}

inline bool is_sub_multiset(const SetFamily& a, const SetFamily& b) {
  std::map<CoordSet, std::ptrdiff_t> count;
  for (const auto& s : b.members) ++count[s];
  for (const auto& s : a.members) {
    if (--count[s] < 0) return false;
  }
  return true;
}

/// Bound on the size of one cardinality class of a core representation.
/// The r = 0 case yields at most the single empty core.
inline std::uint64_t core_representation_bound(std::size_t r,
                                               std::size_t r_prime) {
  return std::max<std::uint64_t>(1, sat_pow(r * r_prime, r_prime));
}

namespace detail {

inline void core_search(const SetFamily& a, std::size_t r, std::size_t r_prime,
                        const CoordSet& x, std::set<CoordSet>& found) {
  if (found.count(x) != 0) return;
  if ((x.count() == r_prime && a.contains(x)) ||
      has_fat_sunflower(a, x, r + 1)) {
    found.insert(x);
    return;
  }
  bool any = false;
  for (const auto& s : a.members) {
    if (x.is_subset_of(s)) {
      any = true;
      break;
    }
  }
  if (!any || x.count() >= r_prime) return;
  CoordSet hitting(a.d);
  for (auto i : maximal_sunflower(a, x)) hitting |= a.members[i] - x;
  hitting.for_each([&](std::size_t h) {
    CoordSet child = x;
    child.set(h);
    core_search(a, r, r_prime, child, found);
  });
}

}  // namespace detail

/// Cores describing an r-saturated subfamily `a` of `b` whose members all
/// have cardinality r_prime: a set of b belongs to a exactly when it
/// contains one of the returned cores.
inline CoreRepresentation core_representation(const SetFamily& a,
                                              const SetFamily& b,
                                              std::size_t r,
                                              std::size_t r_prime) {
  if (!is_sub_multiset(a, b)) throw UsageError("a is not contained in b");
  for (const auto& s : b.members) {
    if (s.count() != r_prime) {
      throw UsageError("family members must have cardinality r_prime");
    }
  }
  CoreRepresentation out;
  if (a.members.empty()) return out;
  std::set<CoordSet> found;
  detail::core_search(a, r, r_prime, CoordSet(a.d), found);
  // Only minimal cores matter for the membership test; supersets of another
  // found core are dropped.
  for (const auto& c : found) {
    bool minimal = true;
    for (const auto& o : found) {
      if (o != c && o.is_subset_of(c)) {
        minimal = false;
        break;
      }
    }
    if (minimal) out.push_back({c, r_prime});
  }
  if (out.size() > core_representation_bound(r, r_prime)) {
    throw std::logic_error("core representation exceeds its size bound");
  }
  return out;
}

/// Candidate sunflower cores among members of one cardinality: pairwise
/// intersections, plus every member itself (a core shared by copies).
inline std::set<CoordSet> candidate_cores(const SetFamily& same_card) {
  std::set<CoordSet> cores;
  const auto& ms = same_card.members;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    cores.insert(ms[i]);
    for (std::size_t j = i + 1; j < ms.size(); ++j) cores.insert(ms[i] & ms[j]);
  }
  return cores;
}

/// Exhaustive check that `a` contains every same-cardinality member of `b`
/// that contains the core of a sunflower of at least r + 1 members of `a`.
inline bool is_saturated(const SetFamily& a, const SetFamily& b,
                         std::size_t r) {
  std::set<std::size_t> cards;
  for (const auto& s : a.members) cards.insert(s.count());
  for (auto t : cards) {
    const SetFamily at = a.of_cardinality(t);
    const SetFamily bt = b.of_cardinality(t);
    std::set<CoordSet> cores;
    if (r == 0) {
      // A single member is a sunflower with any core it contains, and the
      // empty core is contained in everything.
      cores.insert(CoordSet(a.d));
    } else {
      cores = candidate_cores(at);
    }
    for (const auto& c : cores) {
      if (!has_fat_sunflower(at, c, r + 1)) continue;
      for (const auto& s : bt.members) {
        if (c.is_subset_of(s) && !at.contains(s)) return false;
      }
    }
  }
  return true;
}

/// Grows `a` inside `b` until it is r-saturated. Members of b are added by
/// value, all copies at once.
inline SetFamily saturate(SetFamily a, const SetFamily& b, std::size_t r) {
  while (true) {
    bool changed = false;
    std::set<std::size_t> cards;
    for (const auto& s : a.members) cards.insert(s.count());
    for (auto t : cards) {
      const SetFamily at = a.of_cardinality(t);
      std::set<CoordSet> cores;
      if (r == 0) {
        cores.insert(CoordSet(a.d));
      } else {
        cores = candidate_cores(at);
      }
      for (const auto& c : cores) {
        if (!has_fat_sunflower(at, c, r + 1)) continue;
        for (const auto& s : b.members) {
          if (s.count() == t && c.is_subset_of(s) && !a.contains(s)) {
            for (const auto& copy : b.members) {
              if (copy == s) a.members.push_back(copy);
            }
            changed = true;
          }
        }
        if (changed) break;
      }
      if (changed) break;
    }
    if (!changed) return a;
  }
}

}  // namespace incluster
