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
#include <optional>
#include <set>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

#include "incluster/coord_set.hpp"
#include "incluster/core.hpp"
#include "incluster/kernel.hpp"
#include "incluster/search_control.hpp"

namespace incluster {

/// A guess at a center: agrees with it on `fixed` and differs from it on at
/// most `budget` coordinates outside `fixed`.
struct Seed {
  CompleteVector v;
  CoordSet fixed;
  std::size_t budget = 0;
};

/// ε as the exact fraction num/den.
struct ApproxParams {
  std::uint64_t num = 1;
  std::uint64_t den = 2;

  void validate() const {
    if (num == 0 || den == 0 || num >= den) {
      throw UsageError("epsilon must lie strictly between 0 and 1");
    }
  }
  /// ⌈(1-ε)k⌉.
  std::size_t target(std::size_t k) const {
    const std::uint64_t a = sat_mul(den - num, k);
    return static_cast<std::size_t>((a + den - 1) / den);
  }
};

/// Counters filled by find_center. Depth counts edges from the root.
struct CenterSearchStats {
  std::size_t max_depth = 0;
  std::size_t max_arity = 0;
  std::uint64_t nodes = 0;

  void merge(const CenterSearchStats& o) {
    max_depth = std::max(max_depth, o.max_depth);
    max_arity = std::max(max_arity, o.max_arity);
    nodes += o.nodes;
  }
};

/// Every row that can be completed within r of s, each completed by copying
/// s into its missing entries. YES when there are at least k of them.
inline std::optional<ClusterCertificate> is_center(const IncompleteMatrix& m,
                                                   const CompleteVector& s,
                                                   std::size_t k,
                                                   std::size_t r) {
  if (s.size() != m.dim()) throw UsageError("center dimension mismatch");
  ClusterCertificate c;
  c.kind = ClusterKind::Rad;
  c.bound = r;
  c.center = s;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (distance(m[i], s) <= r) {
      c.rows.push_back(i);
      c.completions.push_back(complete_like(m[i], s));
    }
  }
  if (c.size() < k) return std::nullopt;
  return c;
}

inline std::size_t rows_within(const IncompleteMatrix& m,
                               const CompleteVector& s, std::size_t r) {
  std::size_t n = 0;
  for (const auto& w : m.rows()) n += distance(w, s) <= r ? 1 : 0;
  return n;
}

namespace detail {

class CenterSearch {
 public:
  CenterSearch(const IncompleteMatrix& m, std::size_t k, std::size_t r,
               SearchControl* ctl, CenterSearchStats* stats)
      : m_(m), k_(k), r_(r), ctl_(ctl), stats_(stats) {}

  std::optional<CompleteVector> run(const Seed& s) {
    return node(s.v, s.fixed, s.budget, 0);
  }

 private:
  std::optional<CompleteVector> node(const CompleteVector& v,
                                     const CoordSet& fixed, std::size_t t,
                                     std::size_t depth) {
    checkpoint(ctl_);
    if (stats_) {
      ++stats_->nodes;
      stats_->max_depth = std::max(stats_->max_depth, depth);
    }
    if (rows_within(m_, v, r_) >= k_) return v;
    if (t == 0) return std::nullopt;
    auto key = std::make_tuple(v, fixed, t);
    if (failed_.count(key) != 0) return std::nullopt;

    // A cluster row w outside the ball of v must be reached by flipping
    // some of Δ(v,w) \ F and guessing where the center leaves v on the
    // unknown entries of w.
    std::set<std::pair<CoordSet, CoordSet>> children;
    for (const auto& w : m_.rows()) {
      const CoordSet diff = delta_set(w, v);
      const std::size_t dist = diff.count();
      if (dist <= r_ || dist > r_ + t) continue;
      const CoordSet open = diff - fixed;
      const CoordSet unknown = w.missing() - fixed;
      const CoordSet next_fixed = fixed | diff | w.missing();
      const std::size_t least = dist - r_;
      if (open.count() < least) continue;
      for_each_subset_up_to(open, t, [&](const CoordSet& c) {
        if (c.count() < least) return;
        for_each_subset_up_to(unknown, t - c.count(), [&](const CoordSet& x) {
          children.emplace(v ^ c ^ x, next_fixed);
        });
      });
    }
    if (stats_) stats_->max_arity = std::max(stats_->max_arity, children.size());
    for (const auto& [cv, cf] : children) {
      if (auto found = node(cv, cf, t / 2, depth + 1)) return found;
    }
    failed_.insert(std::move(key));
    return std::nullopt;
  }

  const IncompleteMatrix& m_;
  std::size_t k_;
  std::size_t r_;
  SearchControl* ctl_;
  CenterSearchStats* stats_;
  std::set<std::tuple<CoordSet, CoordSet, std::size_t>> failed_;
};

}  // namespace detail

/// Seed-halving search for a center covering at least k rows of m.
inline std::optional<CompleteVector> find_center(
    const IncompleteMatrix& m, const Seed& seed, std::size_t k, std::size_t r,
    SearchControl* ctl = nullptr, CenterSearchStats* stats = nullptr) {
  if (seed.v.size() != m.dim() || seed.fixed.size() != m.dim()) {
    throw UsageError("seed dimension mismatch");
  }
  if (seed.budget > r) throw UsageError("seed budget exceeds r");
  detail::CenterSearch search(m, k, r, ctl, stats);
  return search.run(seed);
}

inline ClusterCertificate empty_rad_certificate(std::size_t d, std::size_t r) {
  ClusterCertificate c;
  c.kind = ClusterKind::Rad;
  c.bound = r;
  c.center = CompleteVector(d);
  return c;
}

namespace detail {

// Runs find_center from every seed in order; the first center found wins.
inline std::optional<CompleteVector> center_from_seeds(
    const IncompleteMatrix& m, const std::vector<CompleteVector>& seeds,
    std::size_t k, std::size_t r, SearchControl* ctl,
    CenterSearchStats* stats) {
  std::vector<std::optional<CompleteVector>> found(seeds.size());
  std::vector<CenterSearchStats> local(seeds.size());
  const unsigned workers = ctl ? ctl->workers() : 1;
  const auto best = first_success(seeds.size(), workers, [&](std::size_t i) {
    Seed s{seeds[i], CoordSet(m.dim()), r};
    found[i] = find_center(m, s, k, r, ctl, &local[i]);
    return found[i].has_value();
  });
  if (stats) {
    for (const auto& l : local) stats->merge(l);
  }
  if (best) return found[*best];
  return std::nullopt;
}

inline std::vector<CompleteVector> seeds_of(
    const IncompleteMatrix& m, const std::vector<std::size_t>& rows) {
  std::vector<CompleteVector> out;
  std::set<CompleteVector> seen;
  for (auto i : rows) {
    for_each_completion(m[i], [&](const CompleteVector& x) {
      if (seen.insert(x).second) out.push_back(x);
      return true;
    });
  }
  return out;
}

// Exact solve of one kernel sub-instance: all 2^d' centers when that is no
// more work than seeding from every completion, seeded search otherwise.
inline std::optional<CompleteVector> solve_small_rad(
    const IncompleteMatrix& m, std::size_t k, std::size_t r,
    SearchControl* ctl, CenterSearchStats* stats) {
  std::uint64_t seeds = 0;
  for (const auto& w : m.rows()) {
    seeds = sat_add(seeds, sat_pow(2, w.missing_count()));
  }
  if (m.dim() < 63 && (std::uint64_t{1} << m.dim()) <= seeds) {
    const std::uint64_t total = std::uint64_t{1} << m.dim();
    CompleteVector s(m.dim());
    for (std::uint64_t mask = 0; mask < total; ++mask) {
      checkpoint(ctl);
      for (std::size_t c = 0; c < m.dim(); ++c) s.set(c, (mask >> c) & 1U);
      if (rows_within(m, s, r) >= k) return s;
    }
    return std::nullopt;
  }
  std::vector<std::size_t> all(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) all[i] = i;
  return center_from_seeds(m, seeds_of(m, all), k, r, ctl, stats);
}

}  // namespace detail

/// Kernel route: every sub-instance of the Rad Turing kernel is solved
/// exactly and a hit is lifted back to m.
inline std::optional<ClusterCertificate> solve_rad_kernel(
    const IncompleteMatrix& m, std::size_t k, std::size_t r,
    SearchControl* ctl = nullptr, CenterSearchStats* stats = nullptr) {
  if (k == 0) return empty_rad_certificate(m.dim(), r);
  if (k > m.size()) return std::nullopt;
  const KernelBatch batch = rad_turing_kernel(m, k, r, ctl);
  if (batch.shortcut) {
    auto c = *batch.shortcut;
    c.bound = r;
    if (!verify_certificate(m, c, k, r)) {
      throw std::logic_error("kernel shortcut failed verification");
    }
    return c;
  }
  for (const auto& sub : batch.instances) {
    if (sub.matrix.size() < k) continue;
    auto center = detail::solve_small_rad(sub.matrix, k, r, ctl, stats);
    if (!center) continue;
    auto local = is_center(sub.matrix, *center, k, r);
    if (!local) throw std::logic_error("sub-instance center lost its rows");
    auto lifted = lift_certificate(m, sub, *local);
    if (!verify_certificate(m, lifted, k, r)) {
      throw std::logic_error("lifted kernel certificate failed");
    }
    return lifted;
  }
  return std::nullopt;
}

/// Rad solver for parameter r (XP): kernel when k ≤ λ, otherwise a center
/// search seeded by every completion of every row outside D_M.
inline std::optional<ClusterCertificate> solve_rad_xp(
    const IncompleteMatrix& m, std::size_t k, std::size_t r,
    SearchControl* ctl = nullptr, CenterSearchStats* stats = nullptr) {
  if (k == 0) return empty_rad_certificate(m.dim(), r);
  if (k > m.size()) return std::nullopt;
  const DeletionSet ds = compute_deletion_set(m);
  if (k <= ds.lambda) return solve_rad_kernel(m, k, r, ctl, stats);
  const auto seeds = detail::seeds_of(m, kept_rows(m, ds));
  auto center = detail::center_from_seeds(m, seeds, k, r, ctl, stats);
  if (!center) return std::nullopt;
  auto cert = is_center(m, *center, k, r);
  if (!cert) throw std::logic_error("found center does not cover k rows");
  return cert;
}

/// Rad solver for parameter k: every k-subset is searched on its own,
/// seeded from the row with the fewest missing entries.
inline std::optional<ClusterCertificate> solve_rad_subsets(
    const IncompleteMatrix& m, std::size_t k, std::size_t r,
    SearchControl* ctl = nullptr, CenterSearchStats* stats = nullptr) {
  if (k == 0) return empty_rad_certificate(m.dim(), r);
  if (k > m.size()) return std::nullopt;
  const std::size_t n = m.size();
  std::vector<std::size_t> pick(k);
  for (std::size_t i = 0; i < k; ++i) pick[i] = i;
  while (true) {
    checkpoint(ctl);
    bool plausible = true;
    for (std::size_t i = 0; i < k && plausible; ++i) {
      for (std::size_t j = i + 1; j < k && plausible; ++j) {
        if (distance(m[pick[i]], m[pick[j]]) > 2 * r) plausible = false;
      }
    }
    if (plausible) {
      std::size_t anchor = pick[0];
      for (auto i : pick) {
        if (m[i].missing_count() < m[anchor].missing_count()) anchor = i;
      }
      const IncompleteMatrix sub = m.select(pick);
      const auto seeds = detail::seeds_of(m, {anchor});
      if (auto center =
              detail::center_from_seeds(sub, seeds, k, r, ctl, stats)) {
        auto cert = is_center(m, *center, k, r);
        if (!cert) throw std::logic_error("subset center lost its rows");
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

namespace detail {

// Whether w (normalized so the first anchor is 0) has a completion within
// r_max of both 0 and u. Missing entries outside Δ(u) are best set to 0;
// inside Δ(u) only the number of ones matters.
inline bool fits_both_anchors(const IncompleteVector& w, const CoordSet& u,
                              std::size_t r_max) {
  const std::size_t a = (w.ones() - u).count();
  const std::size_t p = w.ones().count_and(u);
  const std::size_t e = w.missing().count_and(u);
  if (a > r_max) return false;
  return std::max(p, a) <= std::min(p + e, r_max - a);
}

class GreedyCenters {
 public:
  GreedyCenters(const IncompleteMatrix& rows, std::size_t r, std::size_t r_max,
                std::size_t target, const ApproxParams& eps,
                SearchControl* ctl, std::vector<CompleteVector>& out)
      : m_(rows),
        r_(r),
        r_max_(r_max),
        target_(target),
        eps_(eps),
        ctl_(ctl),
        out_(out) {}

  void run() { step(CompleteVector(m_.dim()), 0); }

 private:
  void step(const CompleteVector& s, std::size_t i) {
    checkpoint(ctl_);
    if (!seen_.insert(s).second) return;
    std::vector<std::size_t> far;
    for (std::size_t w = 0; w < m_.size(); ++w) {
      if (distance(m_[w], s) > r_) far.push_back(w);
    }
    if (m_.size() - far.size() >= target_) {
      out_.push_back(s);
      return;
    }
    if (i >= r_) return;
    // Branch on c when |W| ≥ ε'|M|/(2^r_max·r), with ε' = ε/2.
    const std::uint64_t scale =
        sat_mul(sat_mul(sat_pow(2, r_max_), r_), 2 * eps_.den);
    const std::uint64_t need = sat_mul(eps_.num, m_.size());
    for (std::size_t c = 0; c < m_.dim(); ++c) {
      if (s.test(c)) continue;
      std::uint64_t hits = 0;
      for (auto w : far) hits += m_[w].get(c) == Trit::One ? 1 : 0;
      if (sat_mul(hits, scale) < need || hits == 0) continue;
      CompleteVector next = s;
      next.set(c);
      step(next, i + 1);
    }
  }

  const IncompleteMatrix& m_;
  std::size_t r_;
  std::size_t r_max_;
  std::size_t target_;
  ApproxParams eps_;
  SearchControl* ctl_;
  std::vector<CompleteVector>& out_;
  std::set<CompleteVector> seen_;
};

}  // namespace detail

/// Rows surviving the two-anchor filter of the approximation scheme, in the
/// coordinates normalized by `vs`.
inline std::vector<std::size_t> approx_filter(const IncompleteMatrix& m,
                                              const CompleteVector& vs,
                                              const CompleteVector& us) {
  const CoordSet u = us ^ vs;
  const std::size_t r_max = u.count();
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const IncompleteVector w = normalize(m[i], vs);
    if (!detail::fits_both_anchors(w, u, r_max)) continue;
    if (2 * (w.ones() - u).count() > r_max) {
      throw std::logic_error("filtered row has too many ones outside Δ(u)");
    }
    out.push_back(i);
  }
  return out;
}

/// FPT approximation for Rad: a certificate with at least ⌈(1-ε)k⌉ rows, or
/// NO, which then means there is no cluster of size k.
inline std::optional<ClusterCertificate> approx_rad(
    const IncompleteMatrix& m, std::size_t k, std::size_t r,
    const ApproxParams& eps, SearchControl* ctl = nullptr) {
  eps.validate();
  if (k == 0) return empty_rad_certificate(m.dim(), r);
  if (k > m.size()) return std::nullopt;
  const DeletionSet ds = compute_deletion_set(m);
  // k < 2λ/ε + 2, multiplied through by den.
  if (sat_mul(k, eps.num) <
      sat_add(sat_mul(2 * ds.lambda, eps.den), 2 * eps.num)) {
    return solve_rad_kernel(m, k, r, ctl);
  }
  const std::size_t target = eps.target(k);
  const auto kept = kept_rows(m, ds);

  struct Anchor {
    CompleteVector vs, us;
  };
  std::vector<Anchor> anchors;
  std::set<std::pair<CompleteVector, CompleteVector>> seen;
  for (auto v : kept) {
    for (auto u : kept) {
      if (u == v || distance(m[v], m[u]) > 2 * r) continue;
      for (const auto& vs : completions(m[v])) {
        for (const auto& us : completions(m[u])) {
          if (distance(vs, us) <= 2 * r && seen.emplace(vs, us).second) {
            anchors.push_back({vs, us});
          }
        }
      }
    }
  }

  std::vector<std::optional<ClusterCertificate>> best(anchors.size());
  const unsigned workers = ctl ? ctl->workers() : 1;
  for_all(anchors.size(), workers, [&](std::size_t a) {
    const auto& an = anchors[a];
    const CoordSet u = an.us ^ an.vs;
    const std::size_t r_max = u.count();
    const auto rows = approx_filter(m, an.vs, an.us);
    const IncompleteMatrix filtered = normalize(m.select(rows), an.vs);
    std::vector<CompleteVector> centers;
    for_each_subset(u, [&](const CoordSet& t) { centers.push_back(t); });
    detail::GreedyCenters(filtered, r, r_max, target, eps, ctl, centers).run();
    for (const auto& s : centers) {
      const CompleteVector orig = s ^ an.vs;
      if (best[a] && rows_within(m, orig, r) <= best[a]->size()) continue;
      best[a] = is_center(m, orig, 0, r);
    }
  });
  std::optional<ClusterCertificate> out;
  for (auto& b : best) {
    if (b && (!out || b->size() > out->size())) out = std::move(b);
  }
  if (!out || out->size() < target) return std::nullopt;
  if (!verify_certificate(m, *out, target, r)) {
    throw std::logic_error("approximate certificate failed verification");
  }
  return out;
}

}  // namespace incluster
