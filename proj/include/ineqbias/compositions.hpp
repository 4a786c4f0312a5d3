#pragma once

// Weak compositions k_1 + ... + k_m = n, enumerated in descending
// lexicographic order: (n,0,..,0), (n-1,1,0,..), ..., (0,..,0,n).

#include <cstdint>
#include <iterator>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "ineqbias/error.hpp"

namespace ineqbias {

inline constexpr std::uint64_t kDefaultCompositionLimit = 10'000'000;

/// Binomial coefficient C(total, choose), saturating at UINT64_MAX.
inline std::uint64_t binomial_saturating(std::uint64_t total, std::uint64_t choose) {
  if (choose > total) return 0;
  choose = std::min(choose, total - choose);
  unsigned __int128 value = 1;
  for (std::uint64_t i = 0; i < choose; ++i) {
    // value * (total - i) / (i + 1) is exact at every step.
    value = value * (total - i) / (i + 1);
    if (value > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(value);
}

/// Number of compositions of n into m nonnegative parts, C(n + m - 1, m - 1).
inline std::uint64_t composition_count(unsigned n, std::size_t m) {
  if (m == 0) return 0;
  return binomial_saturating(static_cast<std::uint64_t>(n) + m - 1, m - 1);
}

/// Advances k to the next composition; returns false after the last one.
inline bool next_composition(std::span<unsigned> k) {
  if (k.size() < 2) return false;
  std::size_t i = k.size() - 1;
  while (i-- > 0) {
    if (k[i] != 0) break;
    if (i == 0) return false;
  }
  if (k[i] == 0) return false;
  unsigned rest = 0;
  for (std::size_t j = i + 1; j < k.size(); ++j) {
    rest += k[j];
    k[j] = 0;
  }
  --k[i];
  k[i + 1] = rest + 1;
  return true;
}

/// The composition at position `rank` of the enumeration order.
inline std::vector<unsigned> unrank_composition(unsigned n, std::size_t m, std::uint64_t rank) {
  if (rank >= composition_count(n, m)) {
    throw Error(ErrorCode::invalid_argument, "composition rank out of range", std::to_string(rank));
  }
  std::vector<unsigned> k(m, 0);
  unsigned remaining = n;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const std::size_t tail_parts = m - i - 1;
    unsigned part = remaining;
    for (;; --part) {
      const std::uint64_t block = composition_count(remaining - part, tail_parts);
      if (rank < block) break;
      rank -= block;
    }
    k[i] = part;
    remaining -= part;
  }
  k[m - 1] = remaining;
  return k;
}

/// Forward range over every composition of n into m parts.
class CompositionRange {
 public:
  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = std::vector<unsigned>;
    using difference_type = std::ptrdiff_t;
    using pointer = const value_type*;
    using reference = const value_type&;

    iterator() = default;
    explicit iterator(std::vector<unsigned> start) : k_(std::move(start)), done_(false) {}

    reference operator*() const { return k_; }
    pointer operator->() const { return &k_; }
    iterator& operator++() {
      done_ = !next_composition(k_);
      return *this;
    }
    void operator++(int) { ++*this; }
    bool operator==(const iterator& other) const { return done_ && other.done_; }

   private:
    std::vector<unsigned> k_;
    bool done_ = true;
  };

  CompositionRange(unsigned n, std::size_t m) : n_(n), m_(m) {}

  iterator begin() const {
    std::vector<unsigned> first(m_, 0);
    first[0] = n_;
    return iterator(std::move(first));
  }
  iterator end() const { return {}; }
  std::uint64_t size() const { return composition_count(n_, m_); }

 private:
  unsigned n_;
  std::size_t m_;
};

inline void check_composition_limit(unsigned n, std::size_t m, std::uint64_t limit) {
  const std::uint64_t count = composition_count(n, m);
  if (count > limit) {
    throw Error(ErrorCode::composition_limit_exceeded,
                "exact sum needs " + (count == std::numeric_limits<std::uint64_t>::max()
                                          ? std::string("more than 2^64")
                                          : std::to_string(count)) +
                    " compositions, above the limit of " + std::to_string(limit),
                "n = " + std::to_string(n) + ", m = " + std::to_string(m));
  }
}

/// All compositions of n into m parts; refuses when there are more than `limit`.
inline CompositionRange enumerate_compositions(unsigned n, std::size_t m,
                                               std::uint64_t limit = kDefaultCompositionLimit) {
  if (n < 1 || m < 1) throw Error(ErrorCode::invalid_argument, "compositions need n >= 1 and m >= 1");
  check_composition_limit(n, m, limit);
  return CompositionRange(n, m);
}

}  // namespace ineqbias
