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
#include <optional>
#include <set>
#include <vector>

#include "incluster/core.hpp"
#include "incluster/search_control.hpp"

namespace incluster {

/// One reduced instance of a Turing kernel, with the maps back to the
/// original row ids and coordinates.
struct SubInstance {
  IncompleteMatrix matrix;
  std::vector<std::size_t> row_map;
  std::vector<std::size_t> coord_map;
  int kernel_case = 0;
};

struct KernelBatch {
  std::vector<SubInstance> instances;
  /// Set when the construction already found a cluster in the original
  /// instance; the batch is then answered YES without further queries.
  std::optional<ClusterCertificate> shortcut;
  std::uint64_t row_bound = 0;
  std::uint64_t coord_bound = 0;
};

/// Rows of M outside the deletion set that can still share a cluster with v
/// and u when those two are the farthest pair at distance exactly t.
inline std::vector<std::size_t> prune_pair(const IncompleteMatrix& m,
                                           std::size_t v, std::size_t u,
                                           std::size_t t,
                                           const DeletionSet& deletion) {
  if (v >= m.size() || u >= m.size()) throw UsageError("row out of range");
  if (deletion.contains(v) || deletion.contains(u)) {
    throw UsageError("anchor rows must lie outside the deletion set");
  }
  const std::size_t dvu = distance(m[v], m[u]);
  const std::size_t slack = (m[v].missing() | m[u].missing()).count();
  if (t < dvu || t > dvu + slack) {
    throw UsageError("t outside the admissible range for this pair");
  }
  std::vector<std::size_t> out;
  for (std::size_t w = 0; w < m.size(); ++w) {
    if (deletion.contains(w)) continue;
    const CoordSet dv = delta_set(m[v], m[w]);
    const CoordSet du = delta_set(m[u], m[w]);
    if (dv.count() > t || du.count() > t) continue;
    if (2 * dv.count_and(du) > t) continue;
    out.push_back(w);
  }
  return out;
}

namespace detail {

inline std::size_t ceil_half(std::size_t t) { return (t + 1) / 2; }

}  // namespace detail

/// Groups `candidates` by their known ones on P = Δ(v,u) ∪ ME(v) ∪ ME(u)
/// and returns the first group with at least k rows, completed identically
/// on P and like v elsewhere. Any such group is a cluster of diameter t and
/// radius ⌈t/2⌉ as long as every candidate survived prune_pair for t.
inline std::optional<ClusterCertificate> bucket_cluster(
    const IncompleteMatrix& m, const std::vector<std::size_t>& candidates,
    std::size_t v, std::size_t u, std::size_t t, std::size_t k,
    ClusterKind kind) {
  if (k == 0) return std::nullopt;
  const CoordSet p = delta_set(m[v], m[u]) | m[v].missing() | m[u].missing();
  std::map<CoordSet, std::vector<std::size_t>> buckets;
  std::vector<CoordSet> order;
  for (auto w : candidates) {
    CoordSet key = m[w].ones() & p;
    auto& b = buckets[key];
    if (b.empty()) order.push_back(key);
    b.push_back(w);
  }
  for (const auto& key : order) {
    const auto& rows = buckets[key];
    if (rows.size() < k) continue;
    ClusterCertificate c;
    c.kind = kind;
    c.bound = kind == ClusterKind::Diam ? t : detail::ceil_half(t);
    const CoordSet vfill = m[v].ones() - p;
    for (auto w : rows) {
      const auto& row = m[w];
      CoordSet comp = (row.ones() | (vfill - row.known())) - p;
      comp |= key;
      c.rows.push_back(w);
      c.completions.push_back(std::move(comp));
    }
    c.center = vfill | key;
    c.canonicalize();
    return c;
  }
  return std::nullopt;
}

/// The pigeonhole shortcut: with more than k·3^(2λ+t) survivors besides v
/// and u, some k of them agree on P and form a cluster.
inline std::optional<ClusterCertificate> cheap_yes_check(
    const IncompleteMatrix& m, const std::vector<std::size_t>& survivors,
    std::size_t v, std::size_t u, std::size_t t,
    const DeletionSet& deletion, std::size_t k,
    ClusterKind kind = ClusterKind::Diam) {
  std::vector<std::size_t> rest;
  for (auto w : survivors) {
    if (w != v && w != u && !deletion.contains(w)) rest.push_back(w);
  }
  const std::uint64_t threshold =
      sat_mul(k, sat_pow(3, 2 * deletion.lambda + t));
  if (rest.size() <= threshold) return std::nullopt;
  auto c = bucket_cluster(m, rest, v, u, t, k, kind);
  if (!c) throw std::logic_error("pigeonhole bucket missing");
  return c;
}

inline std::uint64_t kernel_row_bound(ClusterKind kind, std::size_t k,
                                      std::size_t lambda, std::size_t r) {
  const std::uint64_t exp = kind == ClusterKind::Diam ? 2 * lambda + r
                                                      : lambda + 2 * r;
  return sat_add(sat_mul(k, sat_pow(3, exp)), lambda + 2);
}

inline std::uint64_t kernel_coord_bound(ClusterKind kind, std::size_t k,
                                        std::size_t lambda, std::size_t r) {
  const std::uint64_t n = kernel_row_bound(kind, k, lambda, r);
  const std::uint64_t reach = kind == ClusterKind::Diam ? r : 2 * r;
  const std::uint64_t pairs = lambda * (lambda == 0 ? 0 : lambda - 1) / 2;
  return std::max(sat_add(sat_mul(reach, n - 1), lambda),
                  sat_mul(pairs, reach + 1));
}

namespace detail {

inline SubInstance make_sub(const IncompleteMatrix& m,
                            std::vector<std::size_t> rows,
                            const std::vector<std::size_t>& coords,
                            int kernel_case) {
  std::sort(rows.begin(), rows.end());
  SubInstance s;
  s.matrix = restrict_coords(m.select(rows), coords);
  s.row_map = std::move(rows);
  s.coord_map = coords;
  s.kernel_case = kernel_case;
  return s;
}

inline SubInstance make_sub_z(const IncompleteMatrix& m,
                              std::vector<std::size_t> rows, int kernel_case) {
  std::sort(rows.begin(), rows.end());
  const auto z = important_coords(m.select(rows)).indices();
  return make_sub(m, std::move(rows), z, kernel_case);
}

}  // namespace detail

/// Three-case Turing kernel shared by both problems. The reach of a cluster
/// member from another is r for Diam and 2r for Rad.
inline KernelBatch turing_kernel(const IncompleteMatrix& m, std::size_t k,
                                 std::size_t r, ClusterKind kind,
                                 SearchControl* ctl = nullptr) {
  KernelBatch batch;
  const DeletionSet ds = compute_deletion_set(m);
  batch.row_bound = kernel_row_bound(kind, k, ds.lambda, r);
  batch.coord_bound = kernel_coord_bound(kind, k, ds.lambda, r);
  if (k == 0) {
    ClusterCertificate c;
    c.kind = kind;
    c.bound = r;
    if (kind == ClusterKind::Rad) c.center = CompleteVector(m.dim());
    batch.shortcut = c;
    return batch;
  }
  const std::size_t reach = kind == ClusterKind::Diam ? r : 2 * r;
  const auto kept = kept_rows(m, ds);
  std::set<std::vector<std::size_t>> seen;
  auto emit = [&](SubInstance s) {
    if (seen.insert(s.row_map).second) batch.instances.push_back(std::move(s));
  };

  // Case 1: at least two cluster rows outside D_M.
  for (auto v : kept) {
    for (auto u : kept) {
      if (u == v) continue;
      const std::size_t dvu = distance(m[v], m[u]);
      const std::size_t slack = (m[v].missing() | m[u].missing()).count();
      const std::size_t top = std::min(reach, dvu + slack);
      for (std::size_t t = dvu; t <= top; ++t) {
        checkpoint(ctl);
        const auto surv = prune_pair(m, v, u, t, ds);
        std::vector<std::size_t> rest;
        for (auto w : surv) {
          if (w != v && w != u) rest.push_back(w);
        }
        if (auto c = bucket_cluster(m, rest, v, u, t, k, kind)) {
          batch.shortcut = std::move(c);
          batch.instances.clear();
          return batch;
        }
        std::vector<std::size_t> rows = surv;
        for (auto d : ds.deleted_rows) {
          if (distance(m[d], m[v]) <= reach) rows.push_back(d);
        }
        emit(detail::make_sub_z(m, std::move(rows), 1));
      }
    }
  }
  // Case 2: exactly one cluster row outside D_M.
  for (auto x : kept) {
    std::vector<std::size_t> rows{x};
    for (auto d : ds.deleted_rows) {
      if (distance(m[d], m[x]) <= reach) rows.push_back(d);
    }
    emit(detail::make_sub_z(m, std::move(rows), 2));
  }
  // Case 3: the cluster lies inside D_M. Keep every pairwise difference of
  // size at most `reach`, and reach+1 witnesses (lowest ids) of larger ones.
  if (!ds.deleted_rows.empty()) {
    CoordSet keep(m.dim());
    const auto& dm = ds.deleted_rows;
    for (std::size_t i = 0; i < dm.size(); ++i) {
      for (std::size_t j = i + 1; j < dm.size(); ++j) {
        const CoordSet diff = delta_set(m[dm[i]], m[dm[j]]);
        if (diff.count() <= reach) {
          keep |= diff;
        } else {
          std::size_t taken = 0;
          for (std::size_t c = diff.first(); taken <= reach;
               c = diff.next(c + 1), ++taken) {
            keep.set(c);
          }
        }
      }
    }
    emit(detail::make_sub(m, dm, keep.indices(), 3));
  }
  return batch;
}

inline KernelBatch diam_turing_kernel(const IncompleteMatrix& m, std::size_t k,
                                      std::size_t r,
                                      SearchControl* ctl = nullptr) {
  return turing_kernel(m, k, r, ClusterKind::Diam, ctl);
}

inline KernelBatch rad_turing_kernel(const IncompleteMatrix& m, std::size_t k,
                                     std::size_t r,
                                     SearchControl* ctl = nullptr) {
  return turing_kernel(m, k, r, ClusterKind::Rad, ctl);
}

/// Maps a certificate for a sub-instance back to the original matrix.
/// Dropped coordinates take the value the cluster rows agree on there (or 0
/// when all of them are missing); the Rad center gets the same fill.
inline ClusterCertificate lift_certificate(const IncompleteMatrix& m,
                                           const SubInstance& sub,
                                           const ClusterCertificate& c) {
  ClusterCertificate out;
  out.kind = c.kind;
  out.bound = c.bound;
  CoordSet dropped = CoordSet::full(m.dim());
  for (auto j : sub.coord_map) dropped.reset(j);
  CoordSet fill(m.dim());
  for (auto local : c.rows) fill |= m[sub.row_map[local]].ones() & dropped;
  for (std::size_t i = 0; i < c.rows.size(); ++i) {
    const std::size_t id = sub.row_map[c.rows[i]];
    CoordSet comp = fill;
    c.completions[i].for_each(
        [&](std::size_t j) { comp.set(sub.coord_map[j]); });
    out.rows.push_back(id);
    out.completions.push_back(std::move(comp));
  }
  if (c.center) {
    CoordSet center = fill;
    c.center->for_each([&](std::size_t j) { center.set(sub.coord_map[j]); });
    out.center = std::move(center);
  }
  out.canonicalize();
  return out;
}

}  // namespace incluster
