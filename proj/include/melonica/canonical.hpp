#pragma once

#include <melonica/graph.hpp>
#include <melonica/permutation.hpp>

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

namespace melonica {

// Isomorphism keeps colors fixed: G ~ G' iff there are relabelings pi_w of the
// white and pi_b of the black vertices with perm'(i) = pi_b * perm(i) * pi_w^-1
// for every color i.
struct CanonicalForm {
  ColoredGraph graph;          // representative, perm(0) is always the identity
  std::uint64_t aut_order = 1; // number of (pi_w, pi_b) pairs fixing the graph

  friend bool operator==(const CanonicalForm& a, const CanonicalForm& b) { return a.graph == b.graph; }
  friend auto operator<=>(const CanonicalForm& a, const CanonicalForm& b) { return a.graph <=> b.graph; }
};

enum class CanonicalMethod {
  Automatic,   // exhaustive up to kExhaustiveCanonicalMaxP, refinement above
  Exhaustive,  // lexicographic minimum over all white relabelings
  Refinement,  // per-component traversal labelings
};

inline constexpr int kExhaustiveCanonicalMaxP = 8;

namespace detail {

// Face permutations relative to color 0. Relabeling blacks by perm(0)^-1
// maps g onto (id, tau_1, ..., tau_k); the remaining freedom is a
// simultaneous conjugation of all tau_i.
inline std::vector<Permutation> normalized_taus(const ColoredGraph& g) {
  std::vector<Permutation> taus;
  const auto& inv0 = g.inverse(0);
  for (Color c = 1; c < g.num_colors(); ++c) taus.push_back(inv0 * g.perm(c));
  return taus;
}

inline ColoredGraph from_taus(std::size_t p, std::vector<Permutation> taus) {
  std::vector<Permutation> perms{Permutation::identity(p)};
  for (auto& t : taus) perms.push_back(std::move(t));
  return ColoredGraph(std::move(perms));
}

inline CanonicalForm canonical_exhaustive(const ColoredGraph& g) {
  const std::size_t p = static_cast<std::size_t>(g.p());
  const auto taus = normalized_taus(g);
  std::vector<int> pi(p), pi_inv(p);
  std::iota(pi.begin(), pi.end(), 0);
  std::vector<Permutation> best = taus;
  std::uint64_t ties = 0;
  do {
    for (std::size_t x = 0; x < p; ++x) pi_inv[pi[x]] = static_cast<int>(x);
    // Compare pi * tau * pi^-1 with best entry by entry, stopping early.
    int cmp = 0;
    for (std::size_t t = 0; t < taus.size() && cmp == 0; ++t) {
      const auto& tau = taus[t];
      const auto& cur = best[t];
      for (std::size_t x = 0; x < p; ++x) {
        const int v = pi[tau[pi_inv[x]]];
        if (v != cur[x]) {
          cmp = v < cur[x] ? -1 : 1;
          break;
        }
      }
    }
    if (cmp == 0) {
      ++ties;
    } else if (cmp < 0) {
      const Permutation pi_perm{std::vector<int>(pi)};
      for (std::size_t t = 0; t < taus.size(); ++t) best[t] = conjugate(taus[t], pi_perm);
      ties = 1;
    }
  } while (std::next_permutation(pi.begin(), pi.end()));
  return CanonicalForm{from_taus(p, std::move(best)), ties};
}

// Labels the white vertices of a connected component in breadth-first order
// from `start`, following colors in increasing order.
inline std::vector<int> traversal_labels(const std::vector<Permutation>& taus, int start, std::size_t p) {
  std::vector<int> label(p, -1);
  std::vector<int> order{start};
  label[start] = 0;
  for (std::size_t head = 0; head < order.size(); ++head) {
    const int x = order[head];
    for (const auto& tau : taus) {
      const int y = tau[x];
      if (label[y] < 0) {
        label[y] = static_cast<int>(order.size());
        order.push_back(y);
      }
    }
  }
  return label;
}

struct ComponentForm {
  std::vector<Permutation> taus;  // on 0..k-1
  std::uint64_t aut = 0;
  friend auto operator<=>(const ComponentForm& a, const ComponentForm& b) {
    if (a.taus.front().size() != b.taus.front().size())
      return a.taus.front().size() <=> b.taus.front().size();
    return a.taus <=> b.taus;
  }
  friend bool operator==(const ComponentForm& a, const ComponentForm& b) { return a.taus == b.taus; }
};

inline CanonicalForm canonical_refinement(const ColoredGraph& g) {
  const std::size_t p = static_cast<std::size_t>(g.p());
  const auto taus = normalized_taus(g);
  std::vector<ComponentForm> forms;
  for (const auto& members : white_components(g, all_colors(g))) {
    ComponentForm best;
    for (int start : members) {
      const auto label = traversal_labels(taus, start, p);
      std::vector<Permutation> local;
      for (const auto& tau : taus) {
        std::vector<int> v(members.size());
        for (int x : members) v[label[x]] = label[tau[x]];
        local.emplace_back(std::move(v));
      }
      if (best.aut == 0 || local < best.taus) {
        best.taus = std::move(local);
        best.aut = 1;
      } else if (local == best.taus) {
        ++best.aut;
      }
    }
    forms.push_back(std::move(best));
  }
  std::sort(forms.begin(), forms.end());
  std::uint64_t aut = 1;
  std::vector<std::vector<int>> images(taus.size());
  int offset = 0;
  for (std::size_t k = 0; k < forms.size(); ++k) {
    aut *= forms[k].aut;
    for (std::size_t t = 0; t < taus.size(); ++t)
      for (int v : forms[k].taus[t].images()) images[t].push_back(v + offset);
    offset += static_cast<int>(forms[k].taus.front().size());
  }
  // Identical components can be swapped wholesale.
  for (std::size_t k = 0; k < forms.size();) {
    std::size_t run = 1;
    while (k + run < forms.size() && forms[k + run] == forms[k]) ++run;
    for (std::size_t m = 2; m <= run; ++m) aut *= m;
    k += run;
  }
  std::vector<Permutation> out;
  for (auto& v : images) out.emplace_back(std::move(v));
  return CanonicalForm{from_taus(p, std::move(out)), aut};
}

}  // namespace detail

/// Canonical representative of the color-fixing isomorphism class together
/// with the order of the automorphism group. For p up to
/// kExhaustiveCanonicalMaxP the representative is the lexicographic minimum
/// over all relabelings; above that, components are labeled by traversal.
inline CanonicalForm canonical_form(const ColoredGraph& g, CanonicalMethod method = CanonicalMethod::Automatic) {
  if (method == CanonicalMethod::Automatic)
    method = g.p() <= kExhaustiveCanonicalMaxP ? CanonicalMethod::Exhaustive : CanonicalMethod::Refinement;
  return method == CanonicalMethod::Exhaustive ? detail::canonical_exhaustive(g)
                                               : detail::canonical_refinement(g);
}

inline bool is_canonical(const ColoredGraph& g) { return canonical_form(g).graph == g; }

inline std::uint64_t automorphism_order(const ColoredGraph& g) { return canonical_form(g).aut_order; }

inline bool isomorphic(const ColoredGraph& a, const ColoredGraph& b) {
  if (a.num_colors() != b.num_colors() || a.p() != b.p()) return false;
  return canonical_form(a).graph == canonical_form(b).graph;
}

/// Representative when colors may also be permuted. Only used for reporting.
inline ColoredGraph canonical_form_color_permuting(const ColoredGraph& g) {
  std::vector<Color> order = all_colors(g);
  ColoredGraph best = canonical_form(g).graph;
  while (std::next_permutation(order.begin(), order.end())) {
    auto candidate = canonical_form(permute_colors(g, order)).graph;
    if (candidate < best) best = std::move(candidate);
  }
  return best;
}

}  // namespace melonica
