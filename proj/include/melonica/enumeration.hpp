#pragma once

#include <melonica/canonical.hpp>
#include <melonica/degree.hpp>
#include <melonica/error.hpp>
#include <melonica/graph.hpp>
#include <melonica/guard.hpp>
#include <melonica/parallel.hpp>
#include <melonica/permutation.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace melonica {

inline constexpr int kDefaultEnumerationMaxP = 6;

struct CatalogEntry {
  ColoredGraph graph;  // canonical representative
  std::uint64_t aut_order = 1;
  int omega = 0;
};

struct BubbleCatalog {
  int rank = 0;  // D, the number of colors of each bubble
  int p = 0;
  std::vector<CatalogEntry> classes;
};

/// Every connected graph with `num_colors` colors and p white vertices, one
/// canonical representative per isomorphism class, in ascending order.
///
/// Representatives have perm(0) = id and perm(1) lexicographically minimal
/// in its conjugacy class, so only those tuples are generated; each
/// candidate is kept iff it is its own canonical form.
inline std::vector<CatalogEntry> enumerate_connected_classes(int num_colors, int p, int jobs = 1) {
  if (num_colors < 2) throw Error(ErrorCode::TooFewColors, "need at least 2 colors");
  if (p < 1) throw Error(ErrorCode::InconsistentSize, "p must be at least 1");
  check_size_guard(p, kDefaultEnumerationMaxP, "graph enumeration");
  const auto reps = conjugacy_representatives(static_cast<std::size_t>(p));
  const auto group = all_permutations(static_cast<std::size_t>(p));
  const int free_colors = num_colors - 2;
  check_candidate_guard(static_cast<double>(reps.size()) * std::pow(static_cast<double>(group.size()), free_colors),
                        "graph enumeration");

  auto per_rep = parallel_tasks(reps.size(), jobs, [&](std::size_t r) {
    std::vector<CatalogEntry> found;
    std::vector<std::size_t> digits(free_colors, 0);
    while (true) {
      std::vector<Permutation> perms{Permutation::identity(p), reps[r]};
      for (int d : digits) perms.push_back(group[d]);
      ColoredGraph g(std::move(perms));
      if (is_connected(g)) {
        auto cf = canonical_form(g);
        if (cf.graph == g) found.push_back(CatalogEntry{std::move(g), cf.aut_order, degree_of(cf.graph)});
      }
      int k = free_colors - 1;
      while (k >= 0 && ++digits[k] == group.size()) digits[k--] = 0;
      if (k < 0) break;
    }
    return found;
  });
  std::vector<CatalogEntry> out;
  for (auto& chunk : per_rep)
    for (auto& e : chunk) out.push_back(std::move(e));
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.graph < b.graph; });
  return out;
}

inline BubbleCatalog enumerate_bubbles(int rank, int p, int jobs = 1) {
  if (rank < 2) throw Error(ErrorCode::TooFewColors, "bubbles need D >= 2 colors");
  return BubbleCatalog{rank, p, enumerate_connected_classes(rank, p, jobs)};
}

struct ClosureClass {
  ColoredGraph graph;               // canonical representative with D+1 colors
  std::uint64_t multiplicity = 0;   // labeled color-0 pairings giving this class
  std::uint64_t aut_order = 1;
  bool connected = true;
  std::optional<int> omega;         // only for connected classes
};

struct ClosureCatalog {
  std::vector<ColoredGraph> bubbles;
  std::vector<ClosureClass> classes;
  std::uint64_t labeled_total = 0;  // pairings counted in `classes`
};

/// The bubbles side by side, each contributing colors 1..D after closure.
inline ColoredGraph bubble_union(const std::vector<ColoredGraph>& bubbles) {
  if (bubbles.empty()) throw Error(ErrorCode::MismatchedVertexCounts, "no bubbles given");
  for (const auto& b : bubbles) {
    if (b.num_colors() != bubbles.front().num_colors())
      throw Error(ErrorCode::ColorCountMismatch, "bubbles of different rank cannot be closed together");
    if (!is_connected(b)) throw Error(ErrorCode::Disconnected, "bubbles must be connected");
  }
  return disjoint_union(bubbles);
}

/// Calls fn(pairing) for every color-0 pairing of p points whose image of
/// white 0 is `first`, in lexicographic order.
template <typename Fn>
void for_each_pairing_starting_with(int p, int first, Fn&& fn) {
  std::vector<int> v;
  v.push_back(first);
  for (int x = 0; x < p; ++x)
    if (x != first) v.push_back(x);
  do {
    fn(Permutation(v));
  } while (std::next_permutation(v.begin() + 1, v.end()));
}

/// All Wick closures of a multiset of bubbles, grouped into isomorphism
/// classes with the number of labeled pairings producing each class.
inline ClosureCatalog enumerate_closures(const std::vector<ColoredGraph>& bubbles, bool connected_only, int jobs = 1) {
  const auto u = bubble_union(bubbles);
  const int p = u.p();
  check_size_guard(p, kDefaultEnumerationMaxP, "closure enumeration");

  struct Tally {
    std::uint64_t count = 0;
    std::uint64_t aut = 1;
    bool connected = true;
  };
  auto partial = parallel_tasks(static_cast<std::size_t>(p), jobs, [&](std::size_t first) {
    std::map<ColoredGraph, Tally> local;
    for_each_pairing_starting_with(p, static_cast<int>(first), [&](const Permutation& sigma) {
      auto g = close_with(u, sigma);
      const bool connected = is_connected(g);
      if (connected_only && !connected) return;
      auto cf = canonical_form(g);
      auto& t = local[cf.graph];
      ++t.count;
      t.aut = cf.aut_order;
      t.connected = connected;
    });
    return local;
  });
  std::map<ColoredGraph, Tally> merged;
  for (auto& m : partial)
    for (auto& [g, t] : m) {
      auto& dst = merged[g];
      dst.count += t.count;
      dst.aut = t.aut;
      dst.connected = t.connected;
    }
  ClosureCatalog cat;
  cat.bubbles = bubbles;
  for (auto& [g, t] : merged) {
    ClosureClass cls{g, t.count, t.aut, t.connected, std::nullopt};
    if (t.connected) cls.omega = degree_of(g);
    cat.labeled_total += t.count;
    cat.classes.push_back(std::move(cls));
  }
  return cat;
}

}  // namespace melonica
