#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

namespace melonica {

// A bijection on {0..n-1} stored as its image list. Validity is not checked
// here; ColoredGraph construction is where inputs are validated.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<int> images) : images_(std::move(images)) {}
  Permutation(std::initializer_list<int> images) : images_(images) {}

  static Permutation identity(std::size_t n) {
    std::vector<int> v(n);
    std::iota(v.begin(), v.end(), 0);
    return Permutation(std::move(v));
  }

  /// Transposition of a and b on n points.
  static Permutation swap(std::size_t n, int a, int b) {
    auto s = identity(n);
    std::swap(s.images_[a], s.images_[b]);
    return s;
  }

  std::size_t size() const noexcept { return images_.size(); }
  int operator[](std::size_t i) const { return images_[i]; }
  int& operator[](std::size_t i) { return images_[i]; }
  std::span<const int> images() const noexcept { return images_; }

  bool is_identity() const {
    for (std::size_t i = 0; i < images_.size(); ++i)
      if (images_[i] != static_cast<int>(i)) return false;
    return true;
  }

  Permutation inverse() const {
    std::vector<int> inv(images_.size());
    for (std::size_t i = 0; i < images_.size(); ++i) inv[images_[i]] = static_cast<int>(i);
    return Permutation(std::move(inv));
  }

  /// Cycles in order of their smallest element, each starting from it.
  std::vector<std::vector<int>> cycles() const {
    std::vector<std::vector<int>> out;
    std::vector<char> seen(images_.size(), 0);
    for (std::size_t s = 0; s < images_.size(); ++s) {
      if (seen[s]) continue;
      std::vector<int> cyc;
      for (int x = static_cast<int>(s); !seen[x]; x = images_[x]) {
        seen[x] = 1;
        cyc.push_back(x);
      }
      out.push_back(std::move(cyc));
    }
    return out;
  }

  std::size_t cycle_count() const {
    std::size_t count = 0;
    std::vector<char> seen(images_.size(), 0);
    for (std::size_t s = 0; s < images_.size(); ++s) {
      if (seen[s]) continue;
      ++count;
      for (int x = static_cast<int>(s); !seen[x]; x = images_[x]) seen[x] = 1;
    }
    return count;
  }

  /// Sorted cycle lengths, descending.
  std::vector<int> cycle_type() const {
    std::vector<int> t;
    for (const auto& c : cycles()) t.push_back(static_cast<int>(c.size()));
    std::sort(t.begin(), t.end(), std::greater<>());
    return t;
  }

  friend auto operator<=>(const Permutation&, const Permutation&) = default;
  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<int> images_;
};

/// (a * b)(x) = a(b(x)).
inline Permutation operator*(const Permutation& a, const Permutation& b) {
  std::vector<int> v(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) v[i] = a[b[i]];
  return Permutation(std::move(v));
}

/// pi * tau * pi^-1
inline Permutation conjugate(const Permutation& tau, const Permutation& pi) {
  std::vector<int> v(tau.size());
  for (std::size_t x = 0; x < tau.size(); ++x) v[pi[x]] = pi[tau[x]];
  return Permutation(std::move(v));
}

/// All permutations of n points in lexicographic order.
inline std::vector<Permutation> all_permutations(std::size_t n) {
  std::vector<Permutation> out;
  auto p = Permutation::identity(n);
  std::vector<int> v(p.images().begin(), p.images().end());
  do {
    out.emplace_back(v);
  } while (std::next_permutation(v.begin(), v.end()));
  return out;
}

/// Lexicographically smallest permutation with the given cycle type: fixed
/// points first, then cycles by increasing length, each written a -> a+1.
inline Permutation minimal_of_cycle_type(std::vector<int> lengths) {
  std::sort(lengths.begin(), lengths.end());
  int n = std::accumulate(lengths.begin(), lengths.end(), 0);
  std::vector<int> v(n);
  int base = 0;
  for (int len : lengths) {
    for (int k = 0; k < len; ++k) v[base + k] = base + (k + 1) % len;
    base += len;
  }
  return Permutation(std::move(v));
}

/// Integer partitions of n, each in non-increasing order.
inline std::vector<std::vector<int>> partitions(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int remaining, int max_part) -> void {
    if (remaining == 0) {
      out.push_back(cur);
      return;
    }
    for (int k = std::min(remaining, max_part); k >= 1; --k) {
      cur.push_back(k);
      self(self, remaining - k, k);
      cur.pop_back();
    }
  };
  rec(rec, n, n);
  return out;
}

/// One lexicographically minimal representative per conjugacy class of S_n,
/// sorted ascending.
inline std::vector<Permutation> conjugacy_representatives(std::size_t n) {
  std::vector<Permutation> reps;
  for (const auto& part : partitions(static_cast<int>(n))) reps.push_back(minimal_of_cycle_type(part));
  std::sort(reps.begin(), reps.end());
  return reps;
}

}  // namespace melonica
