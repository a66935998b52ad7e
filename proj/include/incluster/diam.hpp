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
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "incluster/coord_set.hpp"
#include "incluster/core.hpp"
#include "incluster/ilp.hpp"
#include "incluster/kernel.hpp"
#include "incluster/search_control.hpp"

namespace incluster {

/// (S_i, r_i): members compatible with it have exactly r_i ones, S_i among
/// them.
struct RCenter {
  CoordSet core;
  std::size_t weight = 0;

  friend bool operator==(const RCenter&, const RCenter&) = default;
  friend auto operator<=>(const RCenter& a, const RCenter& b) {
    if (auto c = a.core <=> b.core; c != 0) return c;
    return a.weight <=> b.weight;
  }
};

using RCenterSet = std::vector<RCenter>;

struct CompatibilityWitness {
  std::size_t row = 0;
  CompleteVector completion;
  RCenter matched;
};

/// Cluster under construction in normalized coordinates. `rows[i]` is
/// completed to `members[i]`; the first two entries are the anchors.
struct PartialCluster {
  std::vector<std::size_t> rows;
  std::vector<CompleteVector> members;
  RCenterSet centers;

  std::size_t size() const noexcept { return rows.size(); }
};

/// r^(2r+1), the cap on the number of centers that properly define a
/// cluster; saturates for large r.
inline std::uint64_t center_cap(std::size_t r) {
  return sat_pow(r, 2 * r + 1);
}

/// True iff some completion of w lies within r_max of every member.
inline bool lambda_nonempty(const IncompleteVector& w,
                            const std::vector<CompleteVector>& members,
                            std::size_t r_max) {
  for (const auto& c : members) {
    if (distance(w, c) > r_max) return false;
  }
  if (w.is_complete()) return true;
  return !for_each_completion(w, [&](const CompleteVector& x) {
    for (const auto& c : members) {
      if (distance(x, c) > r_max) return true;
    }
    return false;
  });
}

/// Completions x of w with core ⊆ Δ(x), |Δ(x)| = weight, and within r_max of
/// every member of `against`, in ascending lexicographic order.
inline std::vector<CompleteVector> compat_completions(
    const IncompleteVector& w, const RCenter& c,
    const std::vector<CompleteVector>& against, std::size_t r_max) {
  std::vector<CompleteVector> out;
  if (!c.core.is_subset_of(w.ones() | w.missing())) return out;
  if (w.ones().count() > c.weight) return out;
  for (const auto& a : against) {
    if (distance(w, a) > r_max) return out;
  }
  for_each_completion(w, [&](const CompleteVector& x) {
    if (x.count() != c.weight || !c.core.is_subset_of(x)) return true;
    for (const auto& a : against) {
      if (distance(x, a) > r_max) return true;
    }
    out.push_back(x);
    return true;
  });
  return out;
}

inline std::vector<CompleteVector> compat_completions(
    const IncompleteVector& w, const RCenter& c, const PartialCluster& against,
    std::size_t r_max) {
  return compat_completions(w, c, against.members, r_max);
}

/// Options for the cluster enumeration. `wide_threshold` swaps 2^r_max for
/// 2^r in the two size tests.
struct FindClustersOptions {
  bool wide_threshold = false;
};

namespace detail {

class ClusterHarvest {
 public:
  using Visitor = std::function<bool(const PartialCluster&)>;

  ClusterHarvest(const IncompleteMatrix& normalized,
                 const std::vector<std::size_t>& pool, std::size_t dm_size,
                 std::size_t r, std::size_t r_max, SearchControl* ctl,
                 FindClustersOptions opts, Visitor visit)
      : m_(normalized),
        pool_(pool),
        dm_size_(dm_size),
        r_(r),
        r_max_(r_max),
        cap_(center_cap(r)),
        pow_(std::uint64_t{1} << (opts.wide_threshold ? r : r_max)),
        ctl_(ctl),
        visit_(std::move(visit)) {}

  /// Returns true if the visitor asked to stop.
  bool run(const PartialCluster& anchor) { return node(anchor); }

 private:
  bool node(const PartialCluster& cl) {
    checkpoint(ctl_);
    if (cl.centers.size() > cap_) return false;
    // Nothing below depends on which centers were used: reusing one adds no
    // rows, since compatibility only shrinks as members grow. States with
    // the same members behave alike and a smaller center count dominates.
    std::vector<std::uint64_t> key;
    {
      std::vector<std::pair<std::size_t, const CompleteVector*>> entries;
      for (std::size_t i = 0; i < cl.size(); ++i) {
        entries.emplace_back(cl.rows[i], &cl.members[i]);
      }
      std::sort(entries.begin(), entries.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      for (const auto& [row, vec] : entries) {
        key.push_back(row);
        key.insert(key.end(), vec->words().begin(), vec->words().end());
      }
    }
    auto it = memo_.find(key);
    if (it != memo_.end() && it->second <= cl.centers.size()) return false;
    memo_[key] = cl.centers.size();

    std::vector<char> in_c(m_.size(), 0);
    for (auto row : cl.rows) in_c[row] = 1;
    std::vector<std::size_t> rest;
    for (auto w : pool_) {
      if (!in_c[w] && lambda_nonempty(m_[w], cl.members, r_max_)) {
        rest.push_back(w);
      }
    }
    if (rest.size() <= pow_ * dm_size_ + 1) {
      if (visit_(cl)) return true;
    }
    if (r_ == 0 || rest.empty()) return false;

    std::set<RCenter> candidates;
    for (auto w : rest) {
      const CoordSet base = m_[w].ones() | m_[w].missing();
      for_each_subset_up_to(base, r_max_, [&](const CoordSet& s) {
        for (std::size_t rp = std::max<std::size_t>(s.count(), 1);
             rp <= r_max_; ++rp) {
          candidates.insert({s, rp});
        }
      });
    }
    for (const auto& center : candidates) {
      if (std::find(cl.centers.begin(), cl.centers.end(), center) !=
          cl.centers.end()) {
        continue;
      }
      PartialCluster next = cl;
      for (auto w : rest) {
        auto comps = compat_completions(m_[w], center, cl.members, r_max_);
        if (comps.empty()) continue;
        next.rows.push_back(w);
        next.members.push_back(std::move(comps.front()));
      }
      const std::uint64_t added = next.size() - cl.size();
      if (added == 0) continue;
      // |V'| >= (|M'|/2^x - |D_M|) / r^(2r+1), compared without division.
      const std::uint64_t lhs = sat_mul(sat_mul(added, pow_), cap_);
      const std::uint64_t sub = sat_mul(pow_, dm_size_);
      if (rest.size() > sub && lhs < rest.size() - sub) continue;
      next.centers.push_back(center);
      if (node(next)) return true;
    }
    return false;
  }

  const IncompleteMatrix& m_;
  const std::vector<std::size_t>& pool_;
  std::size_t dm_size_;
  std::size_t r_;
  std::size_t r_max_;
  std::uint64_t cap_;
  std::uint64_t pow_;
  SearchControl* ctl_;
  Visitor visit_;
  std::map<std::vector<std::uint64_t>, std::size_t> memo_;
};

}  // namespace detail

/// Enumerates candidate clusters grown from the anchor by harvesting
/// r_i-centers. `normalized` is the instance after normalizing by the first
/// anchor; `pool` lists the rows outside D_M that may join. The visitor
/// sees every recorded cluster and returns true to stop.
inline void find_clusters(const PartialCluster& anchor,
                          const IncompleteMatrix& normalized,
                          const std::vector<std::size_t>& pool,
                          std::size_t dm_size, std::size_t r,
                          std::size_t r_max,
                          const std::function<bool(const PartialCluster&)>& visit,
                          SearchControl* ctl = nullptr,
                          FindClustersOptions opts = {}) {
  detail::ClusterHarvest h(normalized, pool, dm_size, r, r_max, ctl, opts,
                           visit);
  h.run(anchor);
}

inline std::vector<PartialCluster> find_clusters(
    const PartialCluster& anchor, const IncompleteMatrix& normalized,
    const std::vector<std::size_t>& pool, std::size_t dm_size, std::size_t r,
    std::size_t r_max, SearchControl* ctl = nullptr,
    FindClustersOptions opts = {}) {
  std::vector<PartialCluster> out;
  find_clusters(
      anchor, normalized, pool, dm_size, r, r_max,
      [&](const PartialCluster& c) {
        out.push_back(c);
        return false;
      },
      ctl, opts);
  return out;
}

/// Exact Diam solver over k-subsets, one ILP per subset.
inline std::optional<ClusterCertificate> solve_diam_xp_k(
    const IncompleteMatrix& m, std::size_t k, std::size_t r,
    SearchControl* ctl = nullptr) {
  ClusterCertificate cert;
  cert.kind = ClusterKind::Diam;
  cert.bound = r;
  if (k == 0) return cert;
  if (k > m.size()) return std::nullopt;
  if (k >= 63) throw SizingError("k too large for column-type enumeration");
  const std::size_t n = m.size();
  std::vector<std::size_t> pick(k);
  for (std::size_t i = 0; i < k; ++i) pick[i] = i;
  while (true) {
    checkpoint(ctl);
    bool plausible = true;
    for (std::size_t i = 0; i < k && plausible; ++i) {
      for (std::size_t j = i + 1; j < k && plausible; ++j) {
        if (distance(m[pick[i]], m[pick[j]]) > r) plausible = false;
      }
    }
    if (plausible) {
      // Column type: (known mask, ones mask) over the k picked rows.
      std::map<std::pair<std::uint64_t, std::uint64_t>,
               std::vector<std::size_t>>
          types;
      for (std::size_t c = 0; c < m.dim(); ++c) {
        std::uint64_t known = 0;
        std::uint64_t ones = 0;
        for (std::size_t i = 0; i < k; ++i) {
          const Trit t = m[pick[i]].get(c);
          if (t != Trit::Missing) known |= std::uint64_t{1} << i;
          if (t == Trit::One) ones |= std::uint64_t{1} << i;
        }
        types[{known, ones}].push_back(c);
      }
      IlpInstance ilp;
      struct Var {
        const std::vector<std::size_t>* cols;
        std::uint64_t pattern;
      };
      std::vector<Var> vars;
      std::vector<std::vector<std::size_t>> pair_vars(k * k);
      for (const auto& [type, cols] : types) {
        const std::uint64_t known = type.first;
        const std::uint64_t ones = type.second;
        const std::uint64_t free = ~known & ((std::uint64_t{1} << k) - 1);
        std::vector<std::size_t> group;
        // Completions of the column pattern, ascending over the free bits.
        std::uint64_t sub = 0;
        while (true) {
          const std::uint64_t f = ones | sub;
          const auto id = ilp.add_variable(
              0, static_cast<std::int64_t>(cols.size()));
          vars.push_back({&cols, f});
          group.push_back(id);
          for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = i + 1; j < k; ++j) {
              if (((f >> i) ^ (f >> j)) & 1U) pair_vars[i * k + j].push_back(id);
            }
          }
          if (sub == free) break;
          sub = (sub - free) & free;
        }
        ilp.add_eq(std::move(group), static_cast<std::int64_t>(cols.size()));
      }
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
          ilp.add_le(pair_vars[i * k + j], static_cast<std::int64_t>(r));
        }
      }
      if (auto x = feasible(ilp, ctl)) {
        std::vector<CompleteVector> comps(k, CompleteVector(m.dim()));
        std::map<const std::vector<std::size_t>*, std::size_t> used;
        for (std::size_t v = 0; v < vars.size(); ++v) {
          auto& next = used[vars[v].cols];
          for (std::int64_t c = 0; c < (*x)[v]; ++c) {
            const std::size_t col = (*vars[v].cols)[next++];
            for (std::size_t i = 0; i < k; ++i) {
              if ((vars[v].pattern >> i) & 1U) comps[i].set(col);
            }
          }
        }
        for (std::size_t i = 0; i < k; ++i) {
          cert.rows.push_back(pick[i]);
          cert.completions.push_back(std::move(comps[i]));
        }
        if (!verify_certificate(m, cert, k, r)) {
          throw std::logic_error("ILP reconstruction failed verification");
        }
        return cert;
      }
    }
    std::size_t i = k;
    while (i > 0 && pick[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }
  return std::nullopt;
}

/// Kernel route: build the Turing kernel and query each sub-instance with
/// the subset/ILP solver.
inline std::optional<ClusterCertificate> solve_diam_kernel(
    const IncompleteMatrix& m, std::size_t k, std::size_t r,
    SearchControl* ctl = nullptr) {
  if (k > m.size()) return std::nullopt;
  const KernelBatch batch = diam_turing_kernel(m, k, r, ctl);
  if (batch.shortcut) {
    auto c = *batch.shortcut;
    c.bound = r;
    return c;
  }
  for (const auto& sub : batch.instances) {
    if (auto c = solve_diam_xp_k(sub.matrix, k, r, ctl)) {
      auto lifted = lift_certificate(m, sub, *c);
      if (!verify_certificate(m, lifted, k, r)) {
        throw std::logic_error("lifted kernel certificate failed");
      }
      return lifted;
    }
  }
  return std::nullopt;
}

namespace detail {

// Chooses completions for rows of D_M so that, together with the harvested
// cluster, at least `need` of them join. Missing coordinates outside
// `spread` are completed to 0.
class DeletedRowExtension {
 public:
  DeletedRowExtension(const IncompleteMatrix& normalized,
                      const std::vector<std::size_t>& candidates,
                      const CoordSet& spread, std::size_t r,
                      std::vector<CompleteVector> fixed, SearchControl* ctl)
      : m_(normalized),
        cand_(candidates),
        spread_(spread),
        r_(r),
        chosen_(std::move(fixed)),
        ctl_(ctl) {}

  bool run(std::size_t need) {
    need_ = need;
    return dfs(0, 0);
  }
  const std::vector<std::size_t>& rows() const { return rows_; }
  const std::vector<CompleteVector>& completions() const { return comps_; }

 private:
  bool dfs(std::size_t idx, std::size_t have) {
    checkpoint(ctl_);
    if (have >= need_) return true;
    if (have + (cand_.size() - idx) < need_) return false;
    const auto& w = m_[cand_[idx]];
    bool fits = true;
    for (const auto& c : chosen_) {
      if (distance(w, c) > r_) {
        fits = false;
        break;
      }
    }
    if (fits) {
      IncompleteVector narrowed = IncompleteVector::from_masks(
          w.ones(), w.known() | (w.missing() - spread_));
      bool done = false;
      for_each_completion(narrowed, [&](const CompleteVector& x) {
        for (const auto& c : chosen_) {
          if (distance(x, c) > r_) return true;
        }
        chosen_.push_back(x);
        rows_.push_back(cand_[idx]);
        comps_.push_back(x);
        if (dfs(idx + 1, have + 1)) {
          done = true;
          return false;
        }
        chosen_.pop_back();
        rows_.pop_back();
        comps_.pop_back();
        return true;
      });
      if (done) return true;
    }
    return dfs(idx + 1, have);
  }

  const IncompleteMatrix& m_;
  const std::vector<std::size_t>& cand_;
  CoordSet spread_;
  std::size_t r_;
  std::vector<CompleteVector> chosen_;
  std::vector<std::size_t> rows_;
  std::vector<CompleteVector> comps_;
  SearchControl* ctl_;
  std::size_t need_ = 0;
};

struct DiamAnchor {
  std::size_t v, u;
  CompleteVector vs, us;
};

}  // namespace detail

/// Driver for Diam parameterized by r and λ: small k goes through the
/// kernel, otherwise anchors + cluster harvesting + completion of D_M rows.
inline std::optional<ClusterCertificate> solve_diam_fpt(
    const IncompleteMatrix& m, std::size_t k, std::size_t r,
    SearchControl* ctl = nullptr, FindClustersOptions opts = {}) {
  if (k == 0) {
    ClusterCertificate c;
    c.kind = ClusterKind::Diam;
    c.bound = r;
    return c;
  }
  if (k > m.size()) return std::nullopt;
  const DeletionSet ds = compute_deletion_set(m);
  if (k <= ds.lambda + 2) return solve_diam_kernel(m, k, r, ctl);

  const auto kept = kept_rows(m, ds);
  std::vector<detail::DiamAnchor> anchors;
  for (auto v : kept) {
    for (auto u : kept) {
      if (u == v || distance(m[v], m[u]) > r) continue;
      for (const auto& vs : completions(m[v])) {
        for (const auto& us : completions(m[u])) {
          if (distance(vs, us) <= r) anchors.push_back({v, u, vs, us});
        }
      }
    }
  }

  std::vector<std::optional<ClusterCertificate>> found(anchors.size());
  const unsigned workers = ctl ? ctl->workers() : 1;
  const auto best = first_success(anchors.size(), workers, [&](std::size_t a) {
    const auto& an = anchors[a];
    const IncompleteMatrix nm = normalize(m, an.vs);
    const CompleteVector zero(m.dim());
    const CompleteVector un = an.us ^ an.vs;
    const std::size_t r_max = un.count();

    // Rows that can be completed to either anchor are attached as copies.
    std::vector<std::size_t> dup_rows;
    std::vector<CompleteVector> dup_comps;
    std::vector<char> is_dup(m.size(), 0);
    for (std::size_t w = 0; w < m.size(); ++w) {
      if (w == an.v || w == an.u) continue;
      if (m[w].is_completed_by(an.vs)) {
        dup_rows.push_back(w);
        dup_comps.push_back(zero);
        is_dup[w] = 1;
      } else if (m[w].is_completed_by(an.us)) {
        dup_rows.push_back(w);
        dup_comps.push_back(un);
        is_dup[w] = 1;
      }
    }
    const std::vector<CompleteVector> anchor_members{zero, un};
    std::vector<std::size_t> pool;
    for (auto w : kept) {
      if (w == an.v || w == an.u || is_dup[w]) continue;
      if (lambda_nonempty(nm[w], anchor_members, r_max)) pool.push_back(w);
    }
    std::vector<std::size_t> dm_rest;
    for (auto d : ds.deleted_rows) {
      if (!is_dup[d]) dm_rest.push_back(d);
    }
    PartialCluster anchor;
    anchor.rows = {an.v, an.u};
    anchor.members = anchor_members;

    find_clusters(
        anchor, nm, pool, ds.deleted_rows.size(), r, r_max,
        [&](const PartialCluster& cl) {
          const std::size_t base = cl.size() + dup_rows.size();
          if (base + dm_rest.size() < k) return false;
          for (std::size_t i = 0; i < cl.size(); ++i) {
            for (std::size_t j = i + 1; j < cl.size(); ++j) {
              if (distance(cl.members[i], cl.members[j]) > r) return false;
            }
          }
          CoordSet spread = un;
          for (const auto& c : cl.centers) spread |= c.core;
          detail::DeletedRowExtension ext(nm, dm_rest, spread, r, cl.members,
                                          ctl);
          if (!ext.run(base >= k ? 0 : k - base)) return false;
          ClusterCertificate cert;
          cert.kind = ClusterKind::Diam;
          cert.bound = r;
          auto add = [&](std::size_t row, const CompleteVector& x) {
            cert.rows.push_back(row);
            cert.completions.push_back(x ^ an.vs);
          };
          for (std::size_t i = 0; i < cl.size(); ++i) {
            add(cl.rows[i], cl.members[i]);
          }
          for (std::size_t i = 0; i < dup_rows.size(); ++i) {
            add(dup_rows[i], dup_comps[i]);
          }
          for (std::size_t i = 0; i < ext.rows().size(); ++i) {
            add(ext.rows()[i], ext.completions()[i]);
          }
          cert.canonicalize();
          if (!verify_certificate(m, cert, k, r)) {
            throw std::logic_error("assembled cluster failed verification");
          }
          found[a] = std::move(cert);
          return true;
        },
        ctl, opts);
    return found[a].has_value();
  });
  if (best) return found[*best];
  return std::nullopt;
}

}  // namespace incluster
