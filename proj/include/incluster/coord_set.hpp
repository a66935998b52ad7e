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
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <string>
#include <vector>

namespace incluster {

/// A set of coordinates drawn from a fixed universe [0, size), packed into
/// 64-bit words. Every distance computation in the library reduces to
/// popcounts over these.
class CoordSet {
 public:
  static constexpr std::size_t kNpos = static_cast<std::size_t>(-1);

  CoordSet() = default;
  explicit CoordSet(std::size_t size)
      : size_(size), words_((size + 63) / 64, 0) {}
  CoordSet(std::size_t size, std::initializer_list<std::size_t> members)
      : CoordSet(size) {
    for (auto i : members) set(i);
  }

  static CoordSet from_indices(std::size_t size,
                               const std::vector<std::size_t>& members) {
    CoordSet s(size);
    for (auto i : members) s.set(i);
    return s;
  }

  static CoordSet full(std::size_t size) {
    CoordSet s(size);
    for (auto& w : s.words_) w = ~std::uint64_t{0};
    s.trim();
    return s;
  }

  std::size_t size() const noexcept { return size_; }

  bool test(std::size_t i) const noexcept {
    return (words_[i >> 6] >> (i & 63)) & 1U;
  }
  void set(std::size_t i, bool value = true) noexcept {
    const std::uint64_t bit = std::uint64_t{1} << (i & 63);
    if (value) {
      words_[i >> 6] |= bit;
    } else {
      words_[i >> 6] &= ~bit;
    }
  }
  void reset(std::size_t i) noexcept { set(i, false); }
  void flip(std::size_t i) noexcept {
    words_[i >> 6] ^= std::uint64_t{1} << (i & 63);
  }

  std::size_t count() const noexcept {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool any() const noexcept {
    return std::any_of(words_.begin(), words_.end(),
                       [](std::uint64_t w) { return w != 0; });
  }
  bool none() const noexcept { return !any(); }

  /// First member at or after `from`, or kNpos.
  std::size_t next(std::size_t from) const noexcept {
    if (from >= size_) return kNpos;
    std::size_t wi = from >> 6;
    std::uint64_t w = words_[wi] & (~std::uint64_t{0} << (from & 63));
    while (true) {
      if (w != 0) {
        const std::size_t i =
            (wi << 6) + static_cast<std::size_t>(std::countr_zero(w));
        return i < size_ ? i : kNpos;
      }
      if (++wi >= words_.size()) return kNpos;
      w = words_[wi];
    }
  }
  std::size_t first() const noexcept { return next(0); }

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t wi = 0; wi < words_.size(); ++wi) {
      std::uint64_t w = words_[wi];
      while (w != 0) {
        fn((wi << 6) + static_cast<std::size_t>(std::countr_zero(w)));
        w &= w - 1;
      }
    }
  }

  std::vector<std::size_t> indices() const {
    std::vector<std::size_t> out;
    out.reserve(count());
    for_each([&](std::size_t i) { out.push_back(i); });
    return out;
  }

  bool is_subset_of(const CoordSet& other) const noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      if (words_[i] & ~other.words_[i]) return false;
    }
    return true;
  }
  bool intersects(const CoordSet& other) const noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      if (words_[i] & other.words_[i]) return true;
    }
    return false;
  }

  /// |this ∩ other| without materialising the intersection.
  std::size_t count_and(const CoordSet& other) const noexcept {
    std::size_t c = 0;
    for (std::size_t i = 0; i < words_.size(); ++i) {
      c += static_cast<std::size_t>(std::popcount(words_[i] & other.words_[i]));
    }
    return c;
  }

  CoordSet& operator&=(const CoordSet& o) noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  CoordSet& operator|=(const CoordSet& o) noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  CoordSet& operator^=(const CoordSet& o) noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= o.words_[i];
    return *this;
  }
  /// Set difference in place.
  CoordSet& subtract(const CoordSet& o) noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
    return *this;
  }
  CoordSet complement() const {
    CoordSet c(size_);
    for (std::size_t i = 0; i < words_.size(); ++i) c.words_[i] = ~words_[i];
    c.trim();
    return c;
  }

  friend CoordSet operator&(CoordSet a, const CoordSet& b) { return a &= b; }
  friend CoordSet operator|(CoordSet a, const CoordSet& b) { return a |= b; }
  friend CoordSet operator^(CoordSet a, const CoordSet& b) { return a ^= b; }
  friend CoordSet operator-(CoordSet a, const CoordSet& b) {
    return a.subtract(b);
  }

  friend bool operator==(const CoordSet&, const CoordSet&) = default;

  /// Total order: universe size first, then the member list compared
  /// lexicographically (so {0} < {0,1} < {1}).
  friend std::strong_ordering operator<=>(const CoordSet& a,
                                          const CoordSet& b) {
    if (auto c = a.size_ <=> b.size_; c != 0) return c;
    std::size_t ia = a.first();
    std::size_t ib = b.first();
    while (ia != kNpos && ib != kNpos) {
      if (ia != ib) return ia <=> ib;
      ia = a.next(ia + 1);
      ib = b.next(ib + 1);
    }
    if (ia == ib) return std::strong_ordering::equal;
    return ia == kNpos ? std::strong_ordering::less
                       : std::strong_ordering::greater;
  }

  std::size_t hash() const noexcept {
    std::size_t h = std::hash<std::size_t>{}(size_);
    for (auto w : words_) {
      h ^= std::hash<std::uint64_t>{}(w) + 0x9e3779b97f4a7c15ULL + (h << 6) +
           (h >> 2);
    }
    return h;
  }

  /// Renders as "{0,3,5}".
  std::string to_string() const {
    std::string s = "{";
    bool first_item = true;
    for_each([&](std::size_t i) {
      if (!first_item) s += ',';
      s += std::to_string(i);
      first_item = false;
    });
    s += '}';
    return s;
  }

  const std::vector<std::uint64_t>& words() const noexcept { return words_; }

 private:
  void trim() noexcept {
    if (size_ % 64 != 0 && !words_.empty()) {
      words_.back() &= (std::uint64_t{1} << (size_ % 64)) - 1;
    }
  }

  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

struct CoordSetHash {
  std::size_t operator()(const CoordSet& s) const noexcept { return s.hash(); }
};

/// Calls fn(subset) for every subset of `base`, including the empty set and
/// `base` itself. Enumeration order is by binary counter over the members.
template <typename Fn>
void for_each_subset(const CoordSet& base, Fn&& fn) {
  const auto members = base.indices();
  const std::size_t n = members.size();
  CoordSet current(base.size());
  // Gray-code walk: one flip per step.
  fn(static_cast<const CoordSet&>(current));
  if (n == 0) return;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t step = 1; step < total; ++step) {
    const auto bit = static_cast<std::size_t>(std::countr_zero(step));
    current.flip(members[bit]);
    fn(static_cast<const CoordSet&>(current));
  }
}

/// Subsets of `base` with at most `max_size` members, in order of increasing
/// size, and lexicographic within one size.
template <typename Fn>
void for_each_subset_up_to(const CoordSet& base, std::size_t max_size,
                           Fn&& fn) {
  const auto members = base.indices();
  const std::size_t n = members.size();
  max_size = std::min(max_size, n);
  std::vector<std::size_t> pick;
  for (std::size_t size = 0; size <= max_size; ++size) {
    pick.assign(size, 0);
    for (std::size_t i = 0; i < size; ++i) pick[i] = i;
    while (true) {
      CoordSet s(base.size());
      for (auto p : pick) s.set(members[p]);
      fn(static_cast<const CoordSet&>(s));
      // advance combination
      std::size_t i = size;
      while (i > 0 && pick[i - 1] == n - size + (i - 1)) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < size; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
}

}  // namespace incluster
