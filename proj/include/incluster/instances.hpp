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
#include <istream>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "incluster/core.hpp"

namespace incluster {

/// Simple undirected graph. Edges keep their input order, which fixes the
/// coordinate order of the reductions; vertices are ordered by id.
struct Graph {
  std::size_t n = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;

  Graph() = default;
  explicit Graph(std::size_t vertices) : n(vertices) {}

  void add_edge(std::size_t u, std::size_t v) {
    if (u >= n || v >= n) throw UsageError("edge endpoint out of range");
    if (u == v) throw UsageError("self-loops are not allowed");
    if (has_edge(u, v)) throw UsageError("parallel edges are not allowed");
    edges.emplace_back(u, v);
  }
  bool has_edge(std::size_t u, std::size_t v) const {
    for (const auto& [a, b] : edges) {
      if ((a == u && b == v) || (a == v && b == u)) return true;
    }
    return false;
  }
  std::size_t degree(std::size_t v) const {
    std::size_t d = 0;
    for (const auto& [a, b] : edges) d += (a == v || b == v) ? 1 : 0;
    return d;
  }
};

/// Reduced instance together with its parameters.
struct ReducedInstance {
  IncompleteMatrix matrix;
  std::size_t k = 0;
  std::size_t r = 0;
};

namespace detail {

inline std::string strip(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Next non-blank, non-comment line; false at end of input.
inline bool next_line(std::istream& in, std::string& out, std::size_t& line) {
  std::string raw;
  while (std::getline(in, raw)) {
    ++line;
    out = strip(raw);
    if (out.empty() || out[0] == '#') continue;
    return true;
  }
  return false;
}

inline std::pair<std::size_t, std::size_t> parse_pair(const std::string& s,
                                                      std::size_t line) {
  std::istringstream is(s);
  long long a = -1;
  long long b = -1;
  std::string extra;
  if (!(is >> a >> b) || (is >> extra) || a < 0 || b < 0) {
    throw ParseError(line, "expected two non-negative integers");
  }
  return {static_cast<std::size_t>(a), static_cast<std::size_t>(b)};
}

}  // namespace detail

/// Reads "d n" then n rows over {0,1,?}. Lines starting with '#' are
/// comments.
inline IncompleteMatrix parse_instance(std::istream& in) {
  std::size_t line = 0;
  std::string s;
  if (!detail::next_line(in, s, line)) throw ParseError(line, "missing header");
  const auto [d, n] = detail::parse_pair(s, line);
  IncompleteMatrix m(d);
  for (std::size_t i = 0; i < n; ++i) {
    if (!detail::next_line(in, s, line)) {
      throw ParseError(line, "expected " + std::to_string(n) + " rows, got " +
                                 std::to_string(i));
    }
    if (s.size() != d) {
      throw ParseError(line, "row has " + std::to_string(s.size()) +
                                 " entries, expected " + std::to_string(d));
    }
    for (char c : s) {
      if (c != '0' && c != '1' && c != '?') {
        throw ParseError(line, std::string("bad character '") + c + "'");
      }
    }
    m.add_row(IncompleteVector::from_string(s));
  }
  if (detail::next_line(in, s, line)) {
    throw ParseError(line, "more rows than the header declares");
  }
  return m;
}

inline IncompleteMatrix parse_instance(const std::string& text) {
  std::istringstream in(text);
  return parse_instance(in);
}

inline void serialize_instance(const IncompleteMatrix& m, std::ostream& out) {
  out << m.dim() << ' ' << m.size() << '\n';
  for (const auto& w : m.rows()) out << w.to_string() << '\n';
}

inline std::string serialize_instance(const IncompleteMatrix& m) {
  std::ostringstream out;
  serialize_instance(m, out);
  return out.str();
}

/// Reads "n m" then m lines "u v" with 0-based endpoints.
inline Graph parse_graph(std::istream& in) {
  std::size_t line = 0;
  std::string s;
  if (!detail::next_line(in, s, line)) throw ParseError(line, "missing header");
  const auto [n, m] = detail::parse_pair(s, line);
  Graph g(n);
  for (std::size_t i = 0; i < m; ++i) {
    if (!detail::next_line(in, s, line)) {
      throw ParseError(line, "expected " + std::to_string(m) + " edges");
    }
    const auto [u, v] = detail::parse_pair(s, line);
    try {
      g.add_edge(u, v);
    } catch (const UsageError& e) {
      throw ParseError(line, e.what());
    }
  }
  if (detail::next_line(in, s, line)) {
    throw ParseError(line, "more edges than the header declares");
  }
  return g;
}

inline Graph parse_graph(const std::string& text) {
  std::istringstream in(text);
  return parse_graph(in);
}

inline void serialize_graph(const Graph& g, std::ostream& out) {
  out << g.n << ' ' << g.edges.size() << '\n';
  for (const auto& [u, v] : g.edges) out << u << ' ' << v << '\n';
}

/// Diam instance whose k-clusters of diameter 2n-4 are exactly the
/// k-cliques of g. Each vertex gets its incident edges plus n-1-deg private
/// ones, so every row has n-1 ones.
inline ReducedInstance reduce_clique(const Graph& g, std::size_t k) {
  const std::size_t n = g.n;
  const std::size_t m = g.edges.size();
  const std::size_t priv = n == 0 ? 0 : n - 1;
  ReducedInstance out;
  out.k = k;
  out.r = n >= 2 ? 2 * n - 4 : 0;
  out.matrix = IncompleteMatrix(m + n * priv);
  for (std::size_t i = 0; i < n; ++i) {
    CompleteVector row(m + n * priv);
    for (std::size_t e = 0; e < m; ++e) {
      if (g.edges[e].first == i || g.edges[e].second == i) row.set(e);
    }
    const std::size_t x = priv - g.degree(i);
    for (std::size_t j = 0; j < x; ++j) row.set(m + i * priv + j);
    out.matrix.add_row(IncompleteVector::from_complete(row));
  }
  return out;
}

/// Diam instance with r = 0 whose k-clusters are the independent sets of
/// size k: each edge is a coordinate where its endpoints are 0 (lower id)
/// and 1, everything else missing.
inline ReducedInstance reduce_independent_set(const Graph& g, std::size_t k) {
  const std::size_t d = g.edges.empty() ? 1 : g.edges.size();
  ReducedInstance out;
  out.k = k;
  out.r = 0;
  out.matrix = IncompleteMatrix(d);
  for (std::size_t i = 0; i < g.n; ++i) {
    IncompleteVector row(d);
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      const auto [a, b] = g.edges[e];
      const std::size_t lo = std::min(a, b);
      const std::size_t hi = std::max(a, b);
      if (i == lo) row.set(e, Trit::Zero);
      if (i == hi) row.set(e, Trit::One);
    }
    out.matrix.add_row(std::move(row));
  }
  return out;
}

/// Deterministic source for the generators: std::mt19937_64 with our own
/// integer and probability mapping, so output does not depend on the
/// standard library's distributions.
class InstanceRng {
 public:
  explicit InstanceRng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform in [0, bound) by rejection.
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw UsageError("empty range");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    while (true) {
      const std::uint64_t x = gen_();
      if (x < limit) return x % bound;
    }
  }
  /// True with probability p, using the top 53 bits.
  bool chance(double p) {
    const double u = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    return u < p;
  }
  bool bit() { return (gen_() >> 63) != 0; }

 private:
  std::mt19937_64 gen_;
};

/// A cluster embedded before the missing entries are punched.
struct PlantedCluster {
  std::size_t k = 0;
  std::size_t r = 0;
  ClusterKind kind = ClusterKind::Diam;
};

struct RandomSpec {
  std::uint64_t seed = 0;
  std::size_t rows = 0;
  std::size_t dim = 0;
  double missing_rate = 0.0;
  /// Cap on the total number of missing entries.
  std::optional<std::size_t> max_missing;
  std::optional<PlantedCluster> planted;
};

inline IncompleteMatrix random_instance(const RandomSpec& spec) {
  if (!(spec.missing_rate >= 0.0 && spec.missing_rate <= 1.0)) {
    throw UsageError("missing rate must lie in [0,1]");
  }
  if (spec.planted && spec.planted->k > spec.rows) {
    throw UsageError("planted cluster larger than the instance");
  }
  InstanceRng rng(spec.seed);
  const std::size_t d = spec.dim;
  std::vector<CompleteVector> full;
  if (spec.planted) {
    const auto& p = spec.planted.value();
    // Rad members sit within r of the center; Diam members within ⌊r/2⌋,
    // so any two are within r of each other.
    const std::size_t reach = p.kind == ClusterKind::Rad ? p.r : p.r / 2;
    CompleteVector center(d);
    for (std::size_t c = 0; c < d; ++c) center.set(c, rng.bit());
    for (std::size_t i = 0; i < p.k; ++i) {
      CompleteVector v = center;
      const std::size_t flips = d == 0 ? 0 : rng.below(std::min(reach, d) + 1);
      for (std::size_t f = 0; f < flips; ++f) v.flip(rng.below(d));
      full.push_back(std::move(v));
    }
  }
  while (full.size() < spec.rows) {
    CompleteVector v(d);
    for (std::size_t c = 0; c < d; ++c) v.set(c, rng.bit());
    full.push_back(std::move(v));
  }
  for (std::size_t i = full.size(); i > 1; --i) {
    std::swap(full[i - 1], full[rng.below(i)]);
  }
  IncompleteMatrix m(d);
  std::size_t punched = 0;
  for (const auto& v : full) {
    IncompleteVector w = IncompleteVector::from_complete(v);
    for (std::size_t c = 0; c < d; ++c) {
      if (spec.max_missing && punched >= *spec.max_missing) break;
      if (rng.chance(spec.missing_rate)) {
        w.set(c, Trit::Missing);
        ++punched;
      }
    }
    m.add_row(std::move(w));
  }
  return m;
}

inline IncompleteMatrix random_instance(std::uint64_t seed, std::size_t n,
                                        std::size_t d, double missing_rate,
                                        std::optional<PlantedCluster> planted =
                                            std::nullopt) {
  RandomSpec spec;
  spec.seed = seed;
  spec.rows = n;
  spec.dim = d;
  spec.missing_rate = missing_rate;
  spec.planted = planted;
  return random_instance(spec);
}

/// Random simple graph with each pair present with probability p, edges
/// listed in lexicographic order.
inline Graph random_graph(std::uint64_t seed, std::size_t n, double p) {
  InstanceRng rng(seed);
  Graph g(n);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      if (rng.chance(p)) g.edges.emplace_back(u, v);
    }
  }
  return g;
}

}  // namespace incluster
