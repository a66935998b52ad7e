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
#include <cstdlib>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "incluster/core.hpp"
#include "incluster/search_control.hpp"

namespace incluster {

/// Guardrails for the exhaustive solvers.
struct OracleLimits {
  std::size_t max_rows = 24;
  std::size_t max_dim = 24;
  std::size_t max_missing = 24;
  std::uint64_t budget = std::uint64_t{1} << 28;

  /// Defaults, with the budget taken from INCLUSTER_ORACLE_BUDGET if set.
  static OracleLimits from_env() {
    OracleLimits l;
    if (const char* env = std::getenv("INCLUSTER_ORACLE_BUDGET")) {
      char* end = nullptr;
      const auto v = std::strtoull(env, &end, 10);
      if (end != env && *end == '\0' && v > 0) l.budget = v;
    }
    return l;
  }

  std::uint64_t diam_work(const IncompleteMatrix& m) const {
    return sat_mul(sat_pow(2, m.total_missing()),
                   sat_mul(m.size() + 1, m.size() + 1));
  }
  std::uint64_t rad_work(const IncompleteMatrix& m) const {
    return sat_mul(sat_pow(2, m.dim()), m.size() + 1);
  }

  void check_diam(const IncompleteMatrix& m) const {
    if (m.size() > max_rows || m.dim() > max_dim ||
        m.total_missing() > max_missing || diam_work(m) > budget) {
      throw SizingError("instance exceeds the diam oracle limits");
    }
  }
  void check_rad(const IncompleteMatrix& m) const {
    if (m.size() > max_rows || m.dim() > max_dim || rad_work(m) > budget) {
      throw SizingError("instance exceeds the rad oracle limits");
    }
  }
  bool fits_diam(const IncompleteMatrix& m) const {
    try {
      check_diam(m);
      return true;
    } catch (const SizingError&) {
      return false;
    }
  }
  bool fits_rad(const IncompleteMatrix& m) const {
    try {
      check_rad(m);
      return true;
    } catch (const SizingError&) {
      return false;
    }
  }
};

namespace detail {

// Maximum-weight clique over distinct completed vectors, where weight is the
// number of rows completed to that vector. Plain branch and bound with a
// weight-sum bound.
class WeightedClique {
 public:
  WeightedClique(const std::vector<CompleteVector>& nodes,
                 const std::vector<std::size_t>& weight, std::size_t r)
      : weight_(weight), adj_(nodes.size(), CoordSet(nodes.size())) {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      for (std::size_t j = i + 1; j < nodes.size(); ++j) {
        if (distance(nodes[i], nodes[j]) <= r) {
          adj_[i].set(j);
          adj_[j].set(i);
        }
      }
    }
  }

  /// Best clique, stopping early once its weight reaches `enough`.
  std::vector<std::size_t> solve(std::size_t enough) {
    enough_ = enough;
    best_weight_ = 0;
    best_.clear();
    std::vector<std::size_t> current;
    expand(CoordSet::full(weight_.size()), current, 0);
    return best_;
  }
  std::size_t best_weight() const { return best_weight_; }

 private:
  void expand(CoordSet cand, std::vector<std::size_t>& current,
              std::size_t w) {
    if (w > best_weight_) {
      best_weight_ = w;
      best_ = current;
    }
    if (best_weight_ >= enough_) return;
    std::size_t bound = w;
    cand.for_each([&](std::size_t i) { bound += weight_[i]; });
    if (bound <= best_weight_) return;
    for (std::size_t i = cand.first(); i != CoordSet::kNpos;
         i = cand.next(i + 1)) {
      std::size_t rest = w;
      cand.for_each([&](std::size_t j) { rest += weight_[j]; });
      if (rest <= best_weight_) return;
      current.push_back(i);
      expand(cand & adj_[i], current, w + weight_[i]);
      current.pop_back();
      if (best_weight_ >= enough_) return;
      cand.reset(i);
    }
  }

  const std::vector<std::size_t>& weight_;
  std::vector<CoordSet> adj_;
  std::size_t enough_ = 0;
  std::size_t best_weight_ = 0;
  std::vector<std::size_t> best_;
};

// Largest Diam cluster found over all joint completions, stopping once one
// of size `enough` is seen.
inline ClusterCertificate oracle_diam_search(const IncompleteMatrix& m,
                                             std::size_t r, std::size_t enough,
                                             const OracleLimits& limits) {
  limits.check_diam(m);
  ClusterCertificate best;
  best.kind = ClusterKind::Diam;
  best.bound = r;
  if (m.empty() || enough == 0) return best;
  // Positions of every missing entry, row by row.
  std::vector<std::pair<std::size_t, std::size_t>> holes;
  for (std::size_t i = 0; i < m.size(); ++i) {
    m[i].missing().for_each([&](std::size_t c) { holes.emplace_back(i, c); });
  }
  std::vector<CompleteVector> rows;
  for (const auto& w : m.rows()) rows.push_back(w.ones());
  const std::uint64_t total = std::uint64_t{1} << holes.size();
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    for (std::size_t h = 0; h < holes.size(); ++h) {
      rows[holes[h].first].set(holes[h].second, (mask >> h) & 1U);
    }
    std::map<CompleteVector, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < rows.size(); ++i) groups[rows[i]].push_back(i);
    std::vector<CompleteVector> nodes;
    std::vector<std::size_t> weight;
    std::vector<const std::vector<std::size_t>*> members;
    for (const auto& [v, ids] : groups) {
      nodes.push_back(v);
      weight.push_back(ids.size());
      members.push_back(&ids);
    }
    WeightedClique clique(nodes, weight, r);
    const auto pick = clique.solve(enough);
    if (clique.best_weight() > best.size()) {
      best.rows.clear();
      best.completions.clear();
      for (auto node : pick) {
        for (auto id : *members[node]) {
          best.rows.push_back(id);
          best.completions.push_back(nodes[node]);
        }
      }
      if (best.size() >= enough) break;
    }
  }
  best.canonicalize();
  return best;
}

inline ClusterCertificate oracle_rad_search(const IncompleteMatrix& m,
                                            std::size_t r, std::size_t enough,
                                            const OracleLimits& limits) {
  limits.check_rad(m);
  ClusterCertificate best;
  best.kind = ClusterKind::Rad;
  best.bound = r;
  best.center = CompleteVector(m.dim());
  if (m.empty() || enough == 0) return best;
  const std::uint64_t total = std::uint64_t{1} << m.dim();
  CompleteVector s(m.dim());
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    for (std::size_t c = 0; c < m.dim(); ++c) s.set(c, (mask >> c) & 1U);
    std::size_t covered = 0;
    for (const auto& w : m.rows()) covered += distance(w, s) <= r ? 1 : 0;
    if (covered > best.size()) {
      best.rows.clear();
      best.completions.clear();
      for (std::size_t i = 0; i < m.size(); ++i) {
        if (distance(m[i], s) <= r) {
          best.rows.push_back(i);
          best.completions.push_back(complete_like(m[i], s));
        }
      }
      best.center = s;
      if (best.size() >= enough) break;
    }
  }
  return best;
}

}  // namespace detail

/// Exhaustive Diam decision: every joint completion, then a clique search
/// over the distance-≤r graph with identical vectors folded together.
inline std::optional<ClusterCertificate> oracle_diam(
    const IncompleteMatrix& m, std::size_t k, std::size_t r,
    const OracleLimits& limits = OracleLimits::from_env()) {
  if (k > m.size()) {
    limits.check_diam(m);
    return std::nullopt;
  }
  auto best = detail::oracle_diam_search(m, r, k, limits);
  if (best.size() >= k) return best;
  return std::nullopt;
}

/// Exhaustive Rad decision over every center in {0,1}^d.
inline std::optional<ClusterCertificate> oracle_rad(
    const IncompleteMatrix& m, std::size_t k, std::size_t r,
    const OracleLimits& limits = OracleLimits::from_env()) {
  if (k > m.size()) {
    limits.check_rad(m);
    return std::nullopt;
  }
  auto best = detail::oracle_rad_search(m, r, k, limits);
  if (best.size() >= k) return best;
  return std::nullopt;
}

/// Size of the largest Diam cluster, with a witness.
inline ClusterCertificate oracle_diam_max(
    const IncompleteMatrix& m, std::size_t r,
    const OracleLimits& limits = OracleLimits::from_env()) {
  return detail::oracle_diam_search(m, r, m.size(), limits);
}

inline ClusterCertificate oracle_rad_max(
    const IncompleteMatrix& m, std::size_t r,
    const OracleLimits& limits = OracleLimits::from_env()) {
  return detail::oracle_rad_search(m, r, m.size(), limits);
}

}  // namespace incluster
