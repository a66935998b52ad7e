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

// Acceptance suite. Prints one [PASS]/[FAIL] line per criterion and exits
// nonzero if any fails. Instance counts and bounds are fixed below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "brute.hpp"
#include "incluster/diam.hpp"
#include "incluster/instances.hpp"
#include "incluster/kernel.hpp"
#include "incluster/oracle.hpp"
#include "incluster/rad.hpp"
#include "incluster/sunflower.hpp"

namespace {

using namespace incluster;

constexpr std::size_t kGridInstances = 2240;
constexpr std::size_t kGraphs = 240;
constexpr std::size_t kKernelInstances = 600;
constexpr std::size_t kApproxYes = 520;
constexpr std::size_t kApproxNo = 520;
constexpr std::size_t kFamilies = 240;
constexpr std::size_t kStructural = 300;

struct Outcome {
  bool pass = true;
  std::string detail;
  std::vector<std::string> failures;

  void fail(const std::string& why) {
    pass = false;
    if (failures.size() < 5) failures.push_back(why);
  }
};

struct GridCase {
  std::vector<std::string> rows;
  std::size_t d = 0;
  std::size_t k = 0;
  std::size_t r = 0;
  IncompleteMatrix m;
};

// The seeded grid: |M| ≤ 7, d ≤ 8, total missing ≤ 5, k ≤ 7, r ≤ 4.
std::vector<GridCase> make_grid(std::uint64_t seed, std::optional<std::size_t> fixed_r) {
  brute::Rng rng(seed);
  std::vector<GridCase> out;
  for (std::size_t i = 0; i < kGridInstances; ++i) {
    GridCase c;
    const std::size_t n = 1 + i % 7;
    c.d = 1 + (i / 7) % 8;
    c.r = fixed_r ? *fixed_r : (i / 56) % 5;
    c.k = 1 + rng.below(7);
    const std::size_t missing = rng.below(6);
    c.rows = brute::clustered_rows(rng, n, c.d, missing, std::max<std::size_t>(c.r, 1));
    c.m = brute::to_matrix(c.rows, c.d);
    out.push_back(std::move(c));
  }
  return out;
}

std::string describe(const GridCase& c) {
  std::ostringstream os;
  os << "k=" << c.k << " r=" << c.r << " rows=";
  for (const auto& s : c.rows) os << s << ';';
  return os.str();
}

using Solver = std::function<std::optional<ClusterCertificate>(
    const IncompleteMatrix&, std::size_t, std::size_t)>;

Outcome oracle_equivalence(ClusterKind kind,
                           const std::vector<std::pair<std::string, Solver>>& solvers) {
  Outcome o;
  const auto grid = make_grid(kind == ClusterKind::Diam ? 1001 : 2002, std::nullopt);
  std::size_t yes = 0;
  for (const auto& c : grid) {
    const auto truth = kind == ClusterKind::Diam ? oracle_diam(c.m, c.k, c.r)
                                                 : oracle_rad(c.m, c.k, c.r);
    yes += truth ? 1 : 0;
    for (const auto& [name, solve] : solvers) {
      const auto got = solve(c.m, c.k, c.r);
      if (got.has_value() != truth.has_value()) {
        o.fail(name + " answered " + (got ? "YES" : "NO") + " on " + describe(c));
      } else if (got && (got->kind != kind || !verify_certificate(c.m, *got, c.k, c.r))) {
        o.fail(name + " certificate rejected on " + describe(c));
      }
    }
  }
  o.detail = std::to_string(grid.size()) + " instances, " + std::to_string(yes) + " YES";
  return o;
}

Outcome ac1() {
  return oracle_equivalence(
      ClusterKind::Diam,
      {{"fpt", [](const auto& m, auto k, auto r) { return solve_diam_fpt(m, k, r); }},
       {"xp-k", [](const auto& m, auto k, auto r) { return solve_diam_xp_k(m, k, r); }},
       {"kernel", [](const auto& m, auto k, auto r) { return solve_diam_kernel(m, k, r); }}});
}

Outcome ac2() {
  return oracle_equivalence(
      ClusterKind::Rad,
      {{"xp", [](const auto& m, auto k, auto r) { return solve_rad_xp(m, k, r); }},
       {"subsets", [](const auto& m, auto k, auto r) { return solve_rad_subsets(m, k, r); }},
       {"kernel", [](const auto& m, auto k, auto r) { return solve_rad_kernel(m, k, r); }}});
}

Outcome ac3() {
  Outcome o;
  const auto grid = make_grid(3003, 0);
  std::size_t yes = 0;
  for (const auto& c : grid) {
    const std::vector<bool> answers{
        solve_diam_fpt(c.m, c.k, 0).has_value(),
        solve_diam_xp_k(c.m, c.k, 0).has_value(),
        solve_diam_kernel(c.m, c.k, 0).has_value(),
        solve_rad_xp(c.m, c.k, 0).has_value(),
        solve_rad_subsets(c.m, c.k, 0).has_value(),
        solve_rad_kernel(c.m, c.k, 0).has_value(),
        oracle_diam(c.m, c.k, 0).has_value(),
        oracle_rad(c.m, c.k, 0).has_value()};
    yes += answers[0] ? 1 : 0;
    if (std::adjacent_find(answers.begin(), answers.end(), std::not_equal_to<>()) !=
        answers.end()) {
      o.fail("answers differ on " + describe(c));
    }
  }
  o.detail = std::to_string(grid.size()) + " instances at r=0, " + std::to_string(yes) + " YES";
  return o;
}

Outcome ac4() {
  Outcome o;
  brute::Rng rng(4004);
  std::size_t queries = 0;
  for (std::size_t g_i = 0; g_i < kGraphs; ++g_i) {
    const auto g = brute::random_graph(rng, 1 + g_i % 6);
    const auto probe = reduce_clique(g, 1);
    for (std::size_t u = 0; u < g.n; ++u) {
      for (std::size_t v = u + 1; v < g.n; ++v) {
        const std::size_t want = g.has_edge(u, v) ? 2 * g.n - 4 : 2 * g.n - 2;
        if (distance(probe.matrix[u], probe.matrix[v]) != want) {
          o.fail("distance mismatch on graph " + std::to_string(g_i));
        }
      }
    }
    for (std::size_t k = 1; k <= g.n; ++k) {
      const auto red = reduce_clique(g, k);
      const bool truth = brute::has_clique(g, k);
      ++queries;
      const auto f = solve_diam_fpt(red.matrix, red.k, red.r);
      const auto x = solve_diam_xp_k(red.matrix, red.k, red.r);
      if (f.has_value() != truth || x.has_value() != truth) {
        o.fail("graph " + std::to_string(g_i) + " k=" + std::to_string(k));
      }
    }
  }
  o.detail = std::to_string(kGraphs) + " graphs, " + std::to_string(queries) + " queries";
  return o;
}

Outcome ac5() {
  Outcome o;
  brute::Rng rng(5005);
  std::size_t queries = 0;
  for (std::size_t g_i = 0; g_i < kGraphs; ++g_i) {
    const auto g = brute::random_graph(rng, 1 + g_i % 6);
    for (std::size_t k = 1; k <= g.n; ++k) {
      const auto red = reduce_independent_set(g, k);
      if (red.r != 0) o.fail("r is not 0");
      const bool truth = brute::has_independent_set(g, k);
      ++queries;
      const auto f = solve_diam_fpt(red.matrix, red.k, red.r);
      const auto x = solve_diam_xp_k(red.matrix, red.k, red.r);
      if (f.has_value() != truth || x.has_value() != truth) {
        o.fail("graph " + std::to_string(g_i) + " k=" + std::to_string(k));
      }
    }
  }
  o.detail = std::to_string(kGraphs) + " graphs, " + std::to_string(queries) + " queries";
  return o;
}

std::uint64_t ipow(std::uint64_t b, std::uint64_t e) {
  std::uint64_t x = 1;
  while (e-- > 0) x *= b;
  return x;
}

Outcome ac6() {
  Outcome o;
  brute::Rng rng(6006);
  std::size_t subs = 0;
  std::size_t shortcuts = 0;
  for (std::size_t i = 0; i < kKernelInstances; ++i) {
    const std::size_t n = 2 + rng.below(9);
    const std::size_t d = 2 + rng.below(8);
    const std::size_t r = rng.below(4);
    const std::size_t k = 1 + rng.below(5);
    const auto rows = brute::clustered_rows(rng, n, d, rng.below(7), std::max<std::size_t>(r, 1));
    const auto m = brute::to_matrix(rows, d);
    const std::uint64_t lambda = compute_deletion_set(m).lambda;
    const std::uint64_t pairs = lambda * (lambda == 0 ? 0 : lambda - 1) / 2;
    for (const auto kind : {ClusterKind::Diam, ClusterKind::Rad}) {
      const bool diam = kind == ClusterKind::Diam;
      const std::uint64_t nb = k * ipow(3, diam ? 2 * lambda + r : lambda + 2 * r) + lambda + 2;
      const std::uint64_t reach = diam ? r : 2 * r;
      const std::uint64_t cb = std::max(reach * (nb - 1) + lambda, pairs * (reach + 1));
      const auto batch = diam ? diam_turing_kernel(m, k, r) : rad_turing_kernel(m, k, r);
      const auto truth = diam ? oracle_diam(m, k, r) : oracle_rad(m, k, r);
      if (batch.shortcut) {
        ++shortcuts;
        if (!truth) o.fail("shortcut YES on a NO instance");
        continue;
      }
      bool any = false;
      for (const auto& sub : batch.instances) {
        ++subs;
        if (sub.matrix.size() > nb || sub.matrix.dim() > cb) {
          o.fail(std::string(to_string(kind)) + " sub-instance " +
                 std::to_string(sub.matrix.size()) + "x" + std::to_string(sub.matrix.dim()) +
                 " exceeds " + std::to_string(nb) + "x" + std::to_string(cb));
        }
        if (sub.matrix.size() >= k) {
          any = any || (diam ? oracle_diam(sub.matrix, k, r) : oracle_rad(sub.matrix, k, r));
        }
      }
      if (any != truth.has_value()) o.fail("sub-instances disagree with the original");
    }
  }
  o.detail = std::to_string(kKernelInstances) + " instances, " + std::to_string(subs) +
             " sub-instances, " + std::to_string(shortcuts) + " shortcuts";
  return o;
}

Outcome ac7() {
  Outcome o;
  InstanceRng rng(7007);
  std::size_t yes_runs = 0;
  std::size_t no_runs = 0;
  std::size_t attempts = 0;
  while (yes_runs < kApproxYes) {
    const ApproxParams eps = yes_runs % 2 == 0 ? ApproxParams{1, 2} : ApproxParams{1, 4};
    RandomSpec spec;
    spec.seed = 70000 + yes_runs;
    const std::size_t k = 2 + rng.below(7);
    const std::size_t r = 1 + rng.below(3);
    spec.rows = k + rng.below(5);
    spec.dim = 6 + rng.below(5);
    spec.missing_rate = 0.1;
    spec.max_missing = 3;
    spec.planted = PlantedCluster{k, r, ClusterKind::Rad};
    const auto m = random_instance(spec);
    if (compute_deletion_set(m).lambda > 3) continue;
    ++yes_runs;
    if (!oracle_rad(m, k, r)) o.fail("planted instance is not YES");
    const auto c = approx_rad(m, k, r, eps);
    if (!c) {
      o.fail("NO on planted seed " + std::to_string(spec.seed));
    } else if (c->size() < eps.target(k) || !verify_certificate(m, *c, c->size(), r)) {
      o.fail("short or invalid certificate on seed " + std::to_string(spec.seed));
    }
  }
  while (no_runs < kApproxNo && attempts < 50 * kApproxNo) {
    ++attempts;
    const ApproxParams eps = no_runs % 2 == 0 ? ApproxParams{1, 2} : ApproxParams{1, 4};
    RandomSpec spec;
    spec.seed = 170000 + attempts;
    spec.rows = 4 + rng.below(9);
    spec.dim = 6 + rng.below(5);
    spec.missing_rate = 0.1;
    spec.max_missing = 3;
    const std::size_t r = 1 + rng.below(3);
    const auto m = random_instance(spec);
    if (compute_deletion_set(m).lambda > 3) continue;
    const std::size_t best = oracle_rad_max(m, r).size();
    std::size_t k = 1;
    while (eps.target(k) <= best) ++k;
    if (k > m.size() || k > 8) continue;
    ++no_runs;
    if (approx_rad(m, k, r, eps)) o.fail("YES on oracle-NO seed " + std::to_string(spec.seed));
  }
  if (no_runs < kApproxNo) o.fail("could not generate enough oracle-NO instances");
  o.detail = std::to_string(yes_runs) + " planted, " + std::to_string(no_runs) + " oracle-NO";
  return o;
}

// r+1 members of `sets` whose parts outside `core` are pairwise disjoint.
bool petals(const std::vector<CoordSet>& sets, const CoordSet& core, std::size_t need,
            std::size_t from, CoordSet used) {
  if (need == 0) return true;
  for (std::size_t i = from; i < sets.size(); ++i) {
    const CoordSet p = sets[i] - core;
    if (p.intersects(used)) continue;
    if (petals(sets, core, need - 1, i + 1, used | p)) return true;
  }
  return false;
}

// Saturation by enumerating every possible core.
bool brute_saturated(const std::vector<CoordSet>& a, const std::vector<CoordSet>& b,
                     std::size_t r, std::size_t d) {
  for (std::size_t t = 0; t <= d; ++t) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << d); ++mask) {
      CoordSet x(d);
      for (std::size_t j = 0; j < d; ++j) {
        if ((mask >> j) & 1U) x.set(j);
      }
      if (x.count() > t) continue;
      std::vector<CoordSet> holders;
      for (const auto& s : a) {
        if (s.count() == t && x.is_subset_of(s)) holders.push_back(s);
      }
      if (holders.size() <= r || !petals(holders, x, r + 1, 0, CoordSet(d))) continue;
      for (const auto& s : b) {
        if (s.count() == t && x.is_subset_of(s) &&
            std::find(a.begin(), a.end(), s) == a.end()) {
          return false;
        }
      }
    }
  }
  return true;
}

CoordSet random_set(brute::Rng& rng, std::size_t d, std::size_t card) {
  CoordSet s(d);
  while (s.count() < card) s.set(rng.below(d));
  return s;
}

Outcome ac8() {
  Outcome o;
  brute::Rng rng(8008);
  std::size_t done = 0;
  std::size_t largest = 0;
  while (done < kFamilies) {
    const std::size_t d = 3 + rng.below(8);
    const std::size_t r = 1 + rng.below(3);
    const std::size_t rp = 1 + rng.below(std::min<std::size_t>(4, d));
    SetFamily b(d);
    const std::size_t size = 1 + rng.below(20);
    // A few planted sunflowers so saturation is not vacuous.
    const CoordSet core = random_set(rng, d, rng.below(rp));
    while (b.size() < size) {
      CoordSet s = rng.coin() ? core : CoordSet(d);
      while (s.count() < rp) s.set(rng.below(d));
      b.members.push_back(s);
    }
    SetFamily a(d);
    for (const auto& s : b.members) {
      if (rng.below(3) == 0) a.members.push_back(s);
    }
    a = saturate(a, b, r);
    if (a.members.empty()) continue;
    ++done;
    if (!brute_saturated(a.members, b.members, r, d)) {
      o.fail("saturate produced an unsaturated family");
      continue;
    }
    const auto rep = core_representation(a, b, r, rp);
    largest = std::max(largest, rep.size());
    if (rep.size() > ipow(r * rp, rp)) o.fail("representation too large");
    for (const auto& s : b.members) {
      const bool in_a = a.contains(s);
      bool covered = false;
      for (const auto& e : rep) covered = covered || e.core.is_subset_of(s);
      if (in_a != covered) o.fail("membership biconditional fails");
    }
  }
  o.detail = std::to_string(done) + " families, largest representation " + std::to_string(largest);
  return o;
}

std::vector<CoordSet> all_vectors(std::size_t d) {
  std::vector<CoordSet> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << d); ++mask) {
    CoordSet s(d);
    for (std::size_t j = 0; j < d; ++j) {
      if ((mask >> j) & 1U) s.set(j);
    }
    out.push_back(s);
  }
  return out;
}

// Largest set of rows of a complete matrix with pairwise distance ≤ r.
std::vector<std::size_t> max_diam_rows(const std::vector<CoordSet>& rows, std::size_t r) {
  std::vector<std::size_t> best;
  const std::size_t n = rows.size();
  for (std::uint64_t sub = 1; sub < (std::uint64_t{1} << n); ++sub) {
    std::vector<std::size_t> pick;
    for (std::size_t i = 0; i < n; ++i) {
      if ((sub >> i) & 1U) pick.push_back(i);
    }
    if (pick.size() <= best.size()) continue;
    bool ok = true;
    for (std::size_t i = 0; i < pick.size() && ok; ++i) {
      for (std::size_t j = i + 1; j < pick.size() && ok; ++j) {
        ok = (rows[pick[i]] ^ rows[pick[j]]).count() <= r;
      }
    }
    if (ok) best = pick;
  }
  return best;
}

Outcome ac9() {
  Outcome o;
  brute::Rng rng(9009);

  // Max-distance petal.
  std::size_t petal_cases = 0;
  while (petal_cases < kStructural) {
    const std::size_t d = 2 + rng.below(7);
    const std::size_t r = 1 + rng.below(3);
    const std::size_t c = rng.below(d);
    const std::size_t free = d - c;
    const std::size_t width = rng.below(free / (r + 1) + 1);
    const std::size_t count = r + 1 + rng.below(2);
    if (count * width > free) continue;
    std::vector<std::size_t> perm(d);
    for (std::size_t i = 0; i < d; ++i) perm[i] = i;
    for (std::size_t i = d; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
    CoordSet core(d);
    for (std::size_t i = 0; i < c; ++i) core.set(perm[i]);
    std::vector<CoordSet> family;
    for (std::size_t p = 0; p < count; ++p) {
      CoordSet s = core;
      for (std::size_t w = 0; w < width; ++w) s.set(perm[c + p * width + w]);
      family.push_back(s);
    }
    const std::size_t t = c + width;
    const CoordSet a = random_set(rng, d, rng.below(std::min(r, d) + 1));
    std::size_t in_family = 0;
    for (const auto& s : family) in_family = std::max(in_family, (s ^ a).count());
    std::size_t overall = 0;
    for (const auto& s : all_vectors(d)) {
      if (s.count() == t && core.is_subset_of(s)) overall = std::max(overall, (s ^ a).count());
    }
    if (in_family != overall) o.fail("petal lemma fails");
    ++petal_cases;
  }

  // Saturation of maximum clusters and pairwise closeness of compatible
  // vectors.
  std::size_t cluster_cases = 0;
  std::size_t compatible_pairs = 0;
  while (cluster_cases < kStructural) {
    const std::size_t d = 2 + rng.below(7);
    const std::size_t n = 2 + rng.below(7);
    const std::size_t r = 1 + rng.below(3);
    auto text = brute::clustered_rows(rng, n, d, 0, r);
    std::vector<CoordSet> rows;
    for (const auto& s : text) rows.push_back(complete_from_string(s));
    const auto pstar = max_diam_rows(rows, r);
    const CoordSet pivot = rows[pstar[0]];
    for (auto& s : rows) s ^= pivot;
    std::vector<bool> dropped(n, false);
    for (std::size_t i = 0; i < n; ++i) dropped[i] = rng.below(4) == 0;
    std::vector<CoordSet> a;
    std::vector<CoordSet> b;
    for (std::size_t i = 0; i < n; ++i) {
      if (dropped[i]) continue;
      b.push_back(rows[i]);
      if (std::find(pstar.begin(), pstar.end(), i) != pstar.end()) a.push_back(rows[i]);
    }
    ++cluster_cases;
    if (!brute_saturated(a, b, r, d)) {
      o.fail("maximum cluster is not saturated");
      continue;
    }
    if (!is_saturated(SetFamily(d, a), SetFamily(d, b), r)) {
      o.fail("is_saturated disagrees with enumeration");
    }
    std::vector<CoreEntry> centers;
    for (std::size_t rp = 0; rp <= r; ++rp) {
      SetFamily at = SetFamily(d, a).of_cardinality(rp);
      if (at.members.empty()) continue;
      const SetFamily bt = SetFamily(d, b).of_cardinality(rp);
      for (const auto& e : core_representation(at, bt, r, rp)) centers.push_back(e);
    }
    std::vector<CoordSet> compatible;
    for (const auto& s : all_vectors(d)) {
      for (const auto& e : centers) {
        if (s.count() == e.cardinality && e.core.is_subset_of(s)) {
          compatible.push_back(s);
          break;
        }
      }
    }
    for (std::size_t i = 0; i < compatible.size(); ++i) {
      for (std::size_t j = i + 1; j < compatible.size(); ++j) {
        ++compatible_pairs;
        if ((compatible[i] ^ compatible[j]).count() > r) {
          o.fail("compatible vectors " + compatible[i].to_string() + " and " +
                 compatible[j].to_string() + " are farther than r");
        }
      }
    }
  }

  // Rows surviving the two-anchor filter stay within r of Δ(u*).
  std::size_t filter_cases = 0;
  std::size_t filtered_rows = 0;
  while (filter_cases < kStructural) {
    const std::size_t d = 2 + rng.below(7);
    const std::size_t n = 2 + rng.below(6);
    const std::size_t r = 1 + rng.below(3);
    const auto text = brute::clustered_rows(rng, n, d, rng.below(5), r);
    const auto m = brute::to_matrix(text, d);
    const std::size_t vi = rng.below(n);
    const std::size_t ui = rng.below(n);
    const auto vcs = completions(m[vi]);
    const auto ucs = completions(m[ui]);
    const CoordSet vs = vcs[rng.below(vcs.size())];
    const CoordSet us = ucs[rng.below(ucs.size())];
    const std::size_t r_max = (vs ^ us).count();
    if (r_max > 2 * r) continue;
    ++filter_cases;
    const auto kept = approx_filter(m, vs, us);
    for (std::size_t i = 0; i < n; ++i) {
      bool fits = false;
      for (const auto& c : completions(m[i])) {
        fits = fits || ((c ^ vs).count() <= r_max && (c ^ us).count() <= r_max);
      }
      const bool in = std::find(kept.begin(), kept.end(), i) != kept.end();
      if (in != fits) o.fail("filter keeps the wrong rows");
      if (!in) continue;
      ++filtered_rows;
      const IncompleteVector w = normalize(m[i], vs);
      if ((w.ones() - (us ^ vs)).count() > r) o.fail("|Δ(w)\\Δ(u*)| exceeds r");
    }
  }

  o.detail = std::to_string(petal_cases) + " sunflowers, " + std::to_string(cluster_cases) +
             " maximum clusters (" + std::to_string(compatible_pairs) + " compatible pairs), " +
             std::to_string(filter_cases) + " anchor pairs (" + std::to_string(filtered_rows) +
             " rows)";
  return o;
}

Outcome ac10() {
  Outcome o;
  const auto grid = make_grid(10010, std::nullopt);
  std::size_t runs = 0;
  std::size_t worst_depth = 0;
  std::size_t worst_arity = 0;
  for (const auto& c : grid) {
    if (c.r == 0) continue;
    const std::size_t depth_bound =
        static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(c.r)))) + 1;
    const std::uint64_t arity_bound = c.m.size() * ipow(2, 2 * c.r);
    const auto check = [&](const CenterSearchStats& s, const char* what) {
      worst_depth = std::max(worst_depth, s.max_depth);
      worst_arity = std::max(worst_arity, s.max_arity);
      if (s.max_depth > depth_bound) {
        o.fail(std::string(what) + " depth " + std::to_string(s.max_depth) + " > " +
               std::to_string(depth_bound) + " on " + describe(c));
      }
      if (s.max_arity > arity_bound) {
        o.fail(std::string(what) + " arity " + std::to_string(s.max_arity) + " > " +
               std::to_string(arity_bound) + " on " + describe(c));
      }
    };
    CenterSearchStats stats;
    if (solve_rad_xp(c.m, c.k, c.r, nullptr, &stats)) {
      ++runs;
      check(stats, "solver");
    }
    // Direct searches seeded by each completion of each row.
    const std::size_t best = oracle_rad_max(c.m, c.r).size();
    for (std::size_t i = 0; i < c.m.size(); ++i) {
      for (const auto& v : completions(c.m[i])) {
        CenterSearchStats direct;
        if (find_center(c.m, {v, CoordSet(c.d), c.r}, best, c.r, nullptr, &direct)) {
          ++runs;
          check(direct, "seeded");
        }
      }
    }
  }
  o.detail = std::to_string(runs) + " YES runs, max depth " + std::to_string(worst_depth) +
             ", max arity " + std::to_string(worst_arity);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"AC1 diam solvers match the oracle", ac1},
      {"AC2 rad solvers match the oracle", ac2},
      {"AC3 diam and rad coincide at r=0", ac3},
      {"AC4 clique reduction", ac4},
      {"AC5 independent-set reduction", ac5},
      {"AC6 kernel size bounds", ac6},
      {"AC7 approximation guarantee", ac7},
      {"AC8 core representation", ac8},
      {"AC9 structural lemmas", ac9},
      {"AC10 center search depth and arity", ac10},
  };
  bool all = true;
  for (const auto& [name, run] : criteria) {
    // Optional filter: acceptance AC1 AC7 ...
    bool wanted = argc < 2;
    for (int i = 1; i < argc; ++i) {
      wanted = wanted || name.rfind(std::string(argv[i]) + " ", 0) == 0;
    }
    if (!wanted) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = run();
    } catch (const std::exception& e) {
      out.fail(std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    all = all && out.pass;
    std::printf("[%s] %s: %s (%.1f s)\n", out.pass ? "PASS" : "FAIL", name.c_str(),
                out.detail.c_str(), secs);
    for (const auto& f : out.failures) std::printf("    %s\n", f.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
