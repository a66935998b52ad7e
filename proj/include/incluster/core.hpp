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
#include <bit>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "incluster/coord_set.hpp"

namespace incluster {

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Raised when an exhaustive procedure would exceed its configured budget.
class SizingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Trit : std::uint8_t { Zero, One, Missing };

/// A complete binary vector is represented by the set of its one-coordinates.
using CompleteVector = CoordSet;

inline CompleteVector complete_from_string(std::string_view bits) {
  CompleteVector v(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      v.set(i);
    } else if (bits[i] != '0') {
      throw UsageError("complete vector expects only 0/1");
    }
  }
  return v;
}

inline std::string complete_to_string(const CompleteVector& v) {
  std::string s(v.size(), '0');
  v.for_each([&](std::size_t i) { s[i] = '1'; });
  return s;
}

/// Lexicographic order on equal-length complete vectors: at the first
/// coordinate where they differ, the vector holding 0 is smaller.
inline bool lex_less(const CompleteVector& a, const CompleteVector& b) {
  const std::size_t i = (a ^ b).first();
  return i != CoordSet::kNpos && b.test(i);
}

/// Vector over {0,1,?}. Stored as a value mask and a known mask, with the
/// value mask always a subset of the known mask.
class IncompleteVector {
 public:
  IncompleteVector() = default;
  explicit IncompleteVector(std::size_t d) : value_(d), known_(d) {}

  static IncompleteVector from_complete(const CompleteVector& v) {
    IncompleteVector w;
    w.value_ = v;
    w.known_ = CoordSet::full(v.size());
    return w;
  }
  static IncompleteVector from_masks(CoordSet value, CoordSet known) {
    if (value.size() != known.size()) {
      throw UsageError("mask dimension mismatch");
    }
    value &= known;
    IncompleteVector w;
    w.value_ = std::move(value);
    w.known_ = std::move(known);
    return w;
  }
  /// Characters '0', '1', and '?' (or '*') for a missing entry.
  static IncompleteVector from_string(std::string_view s) {
    IncompleteVector w(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      switch (s[i]) {
        case '0':
          w.set(i, Trit::Zero);
          break;
        case '1':
          w.set(i, Trit::One);
          break;
        case '?':
        case '*':
          break;
        default:
          throw UsageError(std::string("bad trit character '") + s[i] + "'");
      }
    }
    return w;
  }

  std::size_t dim() const noexcept { return known_.size(); }

  Trit get(std::size_t i) const noexcept {
    if (!known_.test(i)) return Trit::Missing;
    return value_.test(i) ? Trit::One : Trit::Zero;
  }
  void set(std::size_t i, Trit t) noexcept {
    known_.set(i, t != Trit::Missing);
    value_.set(i, t == Trit::One);
  }

  /// Known one-coordinates; Δ of the vector when it is complete.
  const CoordSet& ones() const noexcept { return value_; }
  const CoordSet& known() const noexcept { return known_; }
  CoordSet zeros() const { return known_ - value_; }
  CoordSet missing() const { return known_.complement(); }
  std::size_t missing_count() const noexcept {
    return dim() - known_.count();
  }
  bool is_complete() const noexcept { return missing_count() == 0; }

  /// True iff `c` agrees with this vector on every known entry.
  bool is_completed_by(const CompleteVector& c) const {
    return c.size() == dim() && (c & known_) == value_;
  }

  std::string to_string() const {
    std::string s(dim(), '?');
    for (std::size_t i = 0; i < dim(); ++i) {
      const Trit t = get(i);
      if (t != Trit::Missing) s[i] = t == Trit::One ? '1' : '0';
    }
    return s;
  }

  friend bool operator==(const IncompleteVector&,
                         const IncompleteVector&) = default;

 private:
  CoordSet value_;
  CoordSet known_;
};

/// Ordered multiset of rows sharing one dimension; row ids are positions.
class IncompleteMatrix {
 public:
  IncompleteMatrix() = default;
  explicit IncompleteMatrix(std::size_t d) : d_(d) {}
  IncompleteMatrix(std::size_t d, std::vector<IncompleteVector> rows)
      : d_(d) {
    for (auto& r : rows) add_row(std::move(r));
  }

  static IncompleteMatrix from_strings(const std::vector<std::string>& rows,
                                       std::size_t d = 0) {
    if (!rows.empty()) d = rows.front().size();
    IncompleteMatrix m(d);
    for (const auto& r : rows) m.add_row(IncompleteVector::from_string(r));
    return m;
  }

  std::size_t dim() const noexcept { return d_; }
  std::size_t size() const noexcept { return rows_.size(); }
  bool empty() const noexcept { return rows_.empty(); }
  const IncompleteVector& row(std::size_t i) const { return rows_.at(i); }
  const IncompleteVector& operator[](std::size_t i) const { return rows_[i]; }
  const std::vector<IncompleteVector>& rows() const noexcept { return rows_; }

  void add_row(IncompleteVector r) {
    if (r.dim() != d_) throw UsageError("row dimension mismatch");
    rows_.push_back(std::move(r));
  }

  std::size_t total_missing() const {
    std::size_t c = 0;
    for (const auto& r : rows_) c += r.missing_count();
    return c;
  }

  /// Sub-multiset made of the given rows, in the given order.
  IncompleteMatrix select(const std::vector<std::size_t>& ids) const {
    IncompleteMatrix m(d_);
    for (auto i : ids) m.rows_.push_back(rows_.at(i));
    return m;
  }

  friend bool operator==(const IncompleteMatrix&,
                         const IncompleteMatrix&) = default;

 private:
  std::size_t d_ = 0;
  std::vector<IncompleteVector> rows_;
};

// Distances count only coordinates where both entries are known and differ.

inline CoordSet delta_set(const IncompleteVector& a,
                          const IncompleteVector& b) {
  if (a.dim() != b.dim()) throw UsageError("dimension mismatch");
  return (a.ones() ^ b.ones()) & a.known() & b.known();
}
inline CoordSet delta_set(const IncompleteVector& a, const CompleteVector& b) {
  if (a.dim() != b.size()) throw UsageError("dimension mismatch");
  return (a.ones() ^ b) & a.known();
}
inline std::size_t distance(const IncompleteVector& a,
                            const IncompleteVector& b) {
  if (a.dim() != b.dim()) throw UsageError("dimension mismatch");
  const auto& ao = a.ones().words();
  const auto& bo = b.ones().words();
  const auto& ak = a.known().words();
  const auto& bk = b.known().words();
  std::size_t c = 0;
  for (std::size_t i = 0; i < ao.size(); ++i) {
    c += static_cast<std::size_t>(
        std::popcount((ao[i] ^ bo[i]) & ak[i] & bk[i]));
  }
  return c;
}
inline std::size_t distance(const IncompleteVector& a,
                            const CompleteVector& b) {
  if (a.dim() != b.size()) throw UsageError("dimension mismatch");
  const auto& ao = a.ones().words();
  const auto& ak = a.known().words();
  const auto& bw = b.words();
  std::size_t c = 0;
  for (std::size_t i = 0; i < ao.size(); ++i) {
    c += static_cast<std::size_t>(std::popcount((ao[i] ^ bw[i]) & ak[i]));
  }
  return c;
}
inline std::size_t distance(const CompleteVector& a, const CompleteVector& b) {
  if (a.size() != b.size()) throw UsageError("dimension mismatch");
  const auto& aw = a.words();
  const auto& bw = b.words();
  std::size_t c = 0;
  for (std::size_t i = 0; i < aw.size(); ++i) {
    c += static_cast<std::size_t>(std::popcount(aw[i] ^ bw[i]));
  }
  return c;
}

/// Completion of `w` that copies `s` on the missing coordinates.
inline CompleteVector complete_like(const IncompleteVector& w,
                                    const CompleteVector& s) {
  return w.ones() | (s - w.known());
}

/// Visits every completion of `w` in ascending lexicographic order. The
/// callback may return false to stop early; for_each_completion then
/// returns false as well.
template <typename Fn>
bool for_each_completion(const IncompleteVector& w, Fn&& fn) {
  const auto miss = w.missing().indices();
  const std::size_t n = miss.size();
  if (n >= 63) throw SizingError("too many missing entries to enumerate");
  CompleteVector c = w.ones();
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    // Bit (n-1-j) of mask drives miss[j]: the lowest coordinate is the most
    // significant digit, which yields lexicographic order.
    for (std::size_t j = 0; j < n; ++j) {
      c.set(miss[j], (mask >> (n - 1 - j)) & 1U);
    }
    if (!fn(static_cast<const CompleteVector&>(c))) return false;
  }
  return true;
}

inline std::vector<CompleteVector> completions(const IncompleteVector& w) {
  std::vector<CompleteVector> out;
  for_each_completion(w, [&](const CompleteVector& c) {
    out.push_back(c);
    return true;
  });
  return out;
}

struct DeletionSet {
  std::size_t lambda = 0;
  /// Sorted ascending.
  std::vector<std::size_t> deleted_rows;

  bool contains(std::size_t row) const {
    return std::binary_search(deleted_rows.begin(), deleted_rows.end(), row);
  }
};

inline DeletionSet compute_deletion_set(const IncompleteMatrix& m) {
  std::vector<std::size_t> order(m.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<std::size_t> miss(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) miss[i] = m[i].missing_count();
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return miss[a] > miss[b];
                   });
  // Rows with more than p missing entries form a prefix of `order`; lambda
  // is the least p for which that prefix has at most p rows.
  DeletionSet ds;
  std::size_t p = 0;
  while (true) {
    std::size_t above = 0;
    while (above < order.size() && miss[order[above]] > p) ++above;
    if (above <= p) {
      ds.lambda = p;
      ds.deleted_rows.assign(order.begin(), order.begin() + above);
      break;
    }
    ++p;
  }
  std::sort(ds.deleted_rows.begin(), ds.deleted_rows.end());
  return ds;
}

/// Rows not in the deletion set, ascending.
inline std::vector<std::size_t> kept_rows(const IncompleteMatrix& m,
                                          const DeletionSet& ds) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (!ds.contains(i)) out.push_back(i);
  }
  return out;
}

inline IncompleteVector normalize(const IncompleteVector& w,
                                  const CompleteVector& pivot) {
  return IncompleteVector::from_masks(w.ones() ^ pivot, w.known());
}

inline IncompleteMatrix normalize(const IncompleteMatrix& m,
                                  const CompleteVector& pivot) {
  if (pivot.size() != m.dim()) throw UsageError("pivot dimension mismatch");
  IncompleteMatrix out(m.dim());
  for (const auto& r : m.rows()) out.add_row(normalize(r, pivot));
  return out;
}

inline CoordSet important_coords(const IncompleteMatrix& m) {
  CoordSet any_one(m.dim());
  CoordSet any_zero(m.dim());
  for (const auto& r : m.rows()) {
    any_one |= r.ones();
    any_zero |= r.zeros();
  }
  return any_one & any_zero;
}

/// Projection of every row onto `coords` (ascending order of coordinates).
inline IncompleteMatrix restrict_coords(const IncompleteMatrix& m,
                                        const std::vector<std::size_t>& coords) {
  IncompleteMatrix out(coords.size());
  for (const auto& r : m.rows()) {
    IncompleteVector w(coords.size());
    for (std::size_t j = 0; j < coords.size(); ++j) w.set(j, r.get(coords[j]));
    out.add_row(std::move(w));
  }
  return out;
}

enum class ClusterKind { Diam, Rad };

inline const char* to_string(ClusterKind k) {
  return k == ClusterKind::Diam ? "diam" : "rad";
}

struct ClusterCertificate {
  ClusterKind kind = ClusterKind::Diam;
  /// Row ids, parallel to `completions`.
  std::vector<std::size_t> rows;
  std::vector<CompleteVector> completions;
  std::optional<CompleteVector> center;
  std::size_t bound = 0;

  std::size_t size() const noexcept { return rows.size(); }

  /// Sorts entries by row id, keeping completions aligned.
  void canonicalize() {
    std::vector<std::size_t> idx(rows.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return rows[a] < rows[b]; });
    std::vector<std::size_t> r2;
    std::vector<CompleteVector> c2;
    for (auto i : idx) {
      r2.push_back(rows[i]);
      c2.push_back(completions[i]);
    }
    rows = std::move(r2);
    completions = std::move(c2);
  }
};

inline bool verify_certificate(const IncompleteMatrix& m,
                               const ClusterCertificate& c, std::size_t k,
                               std::size_t r) {
  for (auto id : c.rows) {
    if (id >= m.size()) throw UsageError("certificate row id out of range");
  }
  if (c.rows.size() != c.completions.size()) return false;
  if (c.rows.size() < k || c.bound > r) return false;
  std::vector<std::size_t> sorted = c.rows;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    return false;
  }
  for (std::size_t i = 0; i < c.rows.size(); ++i) {
    if (!m[c.rows[i]].is_completed_by(c.completions[i])) return false;
  }
  if (c.kind == ClusterKind::Diam) {
    for (std::size_t i = 0; i < c.completions.size(); ++i) {
      for (std::size_t j = i + 1; j < c.completions.size(); ++j) {
        if (distance(c.completions[i], c.completions[j]) > c.bound) {
          return false;
        }
      }
    }
  } else {
    if (!c.center || c.center->size() != m.dim()) return false;
    for (const auto& comp : c.completions) {
      if (distance(*c.center, comp) > c.bound) return false;
    }
  }
  return true;
}

/// Saturating arithmetic for the closed-form kernel bounds.
inline std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > UINT64_MAX / a) return UINT64_MAX;
  return a * b;
}
inline std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  return a > UINT64_MAX - b ? UINT64_MAX : a + b;
}
inline std::uint64_t sat_pow(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < exp; ++i) r = sat_mul(r, base);
  return r;
}

}  // namespace incluster
