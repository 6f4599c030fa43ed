#pragma once

#include <melonica/canonical.hpp>
#include <melonica/degree.hpp>
#include <melonica/enumeration.hpp>
#include <melonica/error.hpp>
#include <melonica/exact.hpp>
#include <melonica/graph.hpp>
#include <melonica/guard.hpp>

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace melonica {

// One D-dipole removal. Vertex numbers refer to the input graph. The two
// color-`carrier` lines that left the pair are merged into the single line
// carrier_white -> carrier_black.
struct ReductionStep {
  int white = 0;
  int black = 0;
  int shared_colors = 0;
  Color carrier = 0;
  int carrier_white = 0;
  int carrier_black = 0;
};

struct ReductionTrace {
  std::vector<ReductionStep> steps;
  ColoredGraph terminal;
  int terminal_white = 0;  // input labels of the terminal vertices when p = 1
  int terminal_black = 0;
  bool melonic = false;
};

namespace detail {

inline void require_melonic_rank(const ColoredGraph& g) {
  if (g.num_colors() < 4)
    throw Error(ErrorCode::UnsupportedRank, "dipole reduction characterizes degree zero only for D >= 3, got D = " +
                                                std::to_string(g.num_colors() - 1));
  if (!is_connected(g)) throw Error(ErrorCode::Disconnected, "melonic recognition needs a connected graph");
}

// Black vertex sharing exactly num_colors-1 lines with white w, if any,
// together with the one color it does not share.
inline std::optional<std::pair<int, Color>> dipole_partner(const ColoredGraph& g, int w) {
  const int c = g.num_colors();
  std::map<int, int> hits;
  for (Color i = 0; i < c; ++i) ++hits[g.black_of(i, w)];
  for (const auto& [b, n] : hits) {
    if (n == c - 1) {
      for (Color i = 0; i < c; ++i)
        if (g.black_of(i, w) != b) return std::pair{b, i};
    }
  }
  return std::nullopt;
}

}  // namespace detail

/// Removable pairs (white, black, carrier color) in lexicographic order.
inline std::vector<std::tuple<int, int, Color>> removable_dipoles(const ColoredGraph& g) {
  std::vector<std::tuple<int, int, Color>> out;
  if (g.p() < 2) return out;
  for (int w = 0; w < g.p(); ++w)
    if (auto hit = detail::dipole_partner(g, w)) out.emplace_back(w, hit->first, hit->second);
  return out;
}

/// Deletes the pair (w, b) joined by every color but `carrier` and reconnects
/// the two carrier lines. Remaining vertices keep their relative order.
inline ColoredGraph remove_dipole(const ColoredGraph& g, int w, int b, Color carrier) {
  const int p = g.p();
  const int carrier_white = g.white_of(carrier, b);
  const int carrier_black = g.black_of(carrier, w);
  auto shift = [](int x, int removed) { return x > removed ? x - 1 : x; };
  std::vector<Permutation> perms;
  for (Color c = 0; c < g.num_colors(); ++c) {
    std::vector<int> v;
    for (int x = 0; x < p; ++x) {
      if (x == w) continue;
      int target = g.black_of(c, x);
      if (c == carrier && x == carrier_white) target = carrier_black;
      v.push_back(shift(target, b));
    }
    perms.emplace_back(std::move(v));
  }
  return ColoredGraph(std::move(perms));
}

/// Repeatedly removes the lexicographically smallest D-dipole. The input is
/// melonic iff this ends at the two-vertex graph.
inline ReductionTrace reduce_dipoles(const ColoredGraph& g) {
  detail::require_melonic_rank(g);
  ReductionTrace trace;
  ColoredGraph cur = g;
  std::vector<int> white_label(g.p()), black_label(g.p());
  std::iota(white_label.begin(), white_label.end(), 0);
  std::iota(black_label.begin(), black_label.end(), 0);
  while (cur.p() > 1) {
    const auto pairs = removable_dipoles(cur);
    if (pairs.empty()) break;
    const auto [w, b, k] = pairs.front();
    trace.steps.push_back(ReductionStep{white_label[w], black_label[b], cur.num_colors() - 1, k,
                                        white_label[cur.white_of(k, b)], black_label[cur.black_of(k, w)]});
    cur = remove_dipole(cur, w, b, k);
    white_label.erase(white_label.begin() + w);
    black_label.erase(black_label.begin() + b);
  }
  trace.melonic = cur.p() == 1;
  trace.terminal_white = white_label.front();
  trace.terminal_black = black_label.front();
  trace.terminal = std::move(cur);
  return trace;
}

inline bool is_melonic(const ColoredGraph& g) { return reduce_dipoles(g).melonic; }

/// True iff every maximal sequence of dipole removals ends at the
/// two-vertex graph. Exponential; meant for small graphs.
inline bool every_reduction_reaches_dipole(const ColoredGraph& g) {
  if (g.p() == 1) return true;
  const auto pairs = removable_dipoles(g);
  if (pairs.empty()) return false;
  for (const auto& [w, b, k] : pairs)
    if (!every_reduction_reaches_dipole(remove_dipole(g, w, b, k))) return false;
  return true;
}

/// Inserts a D-dipole on the line of color c leaving white w.
inline ColoredGraph insert_melon(const ColoredGraph& g, Color c, int w) {
  const int p = g.p();
  std::vector<Permutation> perms;
  for (Color i = 0; i < g.num_colors(); ++i) {
    std::vector<int> v(g.perm(i).images().begin(), g.perm(i).images().end());
    if (i == c) {
      v.push_back(v[w]);
      v[w] = p;
    } else {
      v.push_back(p);
    }
    perms.emplace_back(std::move(v));
  }
  return ColoredGraph(std::move(perms));
}

// Rooted tree of melon insertions. Node 0 is the root, i.e. the surviving
// (D+1)-dipole; every node has D+1 slots indexed by color. A child in slot c
// was inserted on a line of color c: its own slots c' != c hold what sits on
// its D inner lines and its slot c holds what follows it on the same line.
struct MelonTree {
  struct Node {
    int parent = -1;
    Color color = -1;            // slot in the parent, -1 for the root
    std::vector<int> children;   // size D+1, -1 for an empty slot
  };
  int rank = 0;
  std::vector<Node> nodes;

  int size() const noexcept { return static_cast<int>(nodes.size()); }
};

/// Bracket notation of the shape, e.g. "[3[]]" for a root with one child in
/// slot 3. Equal strings iff equal trees.
inline std::string to_string(const MelonTree& t) {
  std::string out;
  auto rec = [&](auto&& self, int n) -> void {
    out += '[';
    for (std::size_t c = 0; c < t.nodes[n].children.size(); ++c) {
      const int child = t.nodes[n].children[c];
      if (child < 0) continue;
      out += std::to_string(c);
      self(self, child);
    }
    out += ']';
  };
  rec(rec, 0);
  return out;
}

inline MelonTree melon_to_tree(const ColoredGraph& g) {
  const auto trace = reduce_dipoles(g);
  if (!trace.melonic) throw Error(ErrorCode::NotMelonic, "graph does not reduce to the dipole");
  const int colors = g.num_colors();
  MelonTree tree;
  tree.rank = colors - 1;
  tree.nodes.push_back(MelonTree::Node{-1, -1, std::vector<int>(colors, -1)});

  // Line ownership while replaying insertions: a free slot of some node, or
  // a tree edge from the parent's white to the child's black.
  struct Owner {
    int node = -1;  // -1 marks a tree edge
    Color slot = -1;
  };
  std::map<std::pair<Color, int>, std::pair<int, Owner>> lines;  // (color, white) -> (black, owner)
  std::vector<int> node_of_black(g.p(), -1);
  node_of_black[trace.terminal_black] = 0;
  for (Color c = 0; c < colors; ++c) lines[{c, trace.terminal_white}] = {trace.terminal_black, Owner{0, c}};

  for (auto it = trace.steps.rbegin(); it != trace.steps.rend(); ++it) {
    const auto& s = *it;
    const Color k = s.carrier;
    auto found = lines.find({k, s.carrier_white});
    if (found == lines.end() || found->second.first != s.carrier_black)
      throw Error(ErrorCode::FormulaMismatch, "reduction trace does not replay");
    const Owner owner = found->second.second;
    const int m = tree.size();
    tree.nodes.push_back(MelonTree::Node{-1, k, std::vector<int>(colors, -1)});
    node_of_black[s.black] = m;
    if (owner.node >= 0) {
      tree.nodes[m].parent = owner.node;
      tree.nodes[owner.node].children[k] = m;
      lines[{k, s.white}] = {s.carrier_black, Owner{m, k}};
    } else {
      const int q = node_of_black[s.carrier_black];
      const int n = tree.nodes[q].parent;
      tree.nodes[n].children[k] = m;
      tree.nodes[m].parent = n;
      tree.nodes[m].children[k] = q;
      tree.nodes[q].parent = m;
      lines[{k, s.white}] = {s.carrier_black, Owner{}};
    }
    lines[{k, s.carrier_white}] = {s.black, Owner{}};
    for (Color c = 0; c < colors; ++c)
      if (c != k) lines[{c, s.white}] = {s.black, Owner{m, c}};
  }
  return tree;
}

inline void validate_tree(const MelonTree& t) {
  const int colors = t.rank + 1;
  if (t.rank < 3) throw Error(ErrorCode::UnsupportedRank, "melon trees need D >= 3");
  if (t.nodes.empty() || t.nodes[0].parent != -1)
    throw Error(ErrorCode::InconsistentSize, "malformed tree: missing root");
  std::vector<int> seen(t.nodes.size(), 0);
  seen[0] = 1;
  for (std::size_t n = 0; n < t.nodes.size(); ++n) {
    const auto& node = t.nodes[n];
    if (static_cast<int>(node.children.size()) != colors)
      throw Error(ErrorCode::InconsistentSize, "malformed tree: node needs " + std::to_string(colors) + " slots");
    for (int c = 0; c < colors; ++c) {
      const int child = node.children[c];
      if (child < 0) continue;
      if (child >= t.size() || seen[child] || t.nodes[child].parent != static_cast<int>(n) ||
          t.nodes[child].color != c)
        throw Error(ErrorCode::InconsistentSize, "malformed tree: bad child link");
      seen[child] = 1;
    }
  }
  if (std::count(seen.begin(), seen.end(), 1) != t.size())
    throw Error(ErrorCode::InconsistentSize, "malformed tree: unreachable nodes");
}

/// Rebuilds a graph from a tree; node n becomes white n and black n.
inline ColoredGraph tree_to_melon(const MelonTree& t) {
  validate_tree(t);
  const int colors = t.rank + 1;
  std::vector<std::vector<int>> images(colors, std::vector<int>(t.size(), -1));
  auto attach = [&](auto&& self, int n, Color c, int from_white, int to_black) -> void {
    const int m = t.nodes[n].children[c];
    if (m < 0) {
      images[c][from_white] = to_black;
      return;
    }
    images[c][from_white] = m;
    for (Color i = 0; i < colors; ++i)
      if (i != c) self(self, m, i, m, m);
    self(self, m, c, m, to_black);
  };
  for (Color c = 0; c < colors; ++c) attach(attach, 0, c, 0, 0);
  std::vector<Permutation> perms;
  for (auto& v : images) perms.emplace_back(std::move(v));
  return ColoredGraph(std::move(perms));
}

inline constexpr int kDefaultMelonCountMaxP = 4;

/// Isomorphism classes of connected degree-zero graphs with D+1 colors and
/// 2p vertices, by exhaustive generation and a degree filter.
inline std::vector<ColoredGraph> melon_classes_exhaustive(int rank, int p, int jobs = 1) {
  check_size_guard(p, kDefaultMelonCountMaxP, "melon counting");
  std::vector<ColoredGraph> out;
  for (auto& e : enumerate_connected_classes(rank + 1, p, jobs))
    if (e.omega == 0) out.push_back(std::move(e.graph));
  return out;
}

/// The same classes generated from the dipole by repeated insertions.
inline std::vector<ColoredGraph> melon_classes_by_insertion(int rank, int p) {
  check_size_guard(p, kDefaultMelonCountMaxP + 2, "melon insertion closure");
  std::set<ColoredGraph> level{dipole(rank + 1)};
  for (int size = 1; size < p; ++size) {
    std::set<ColoredGraph> next;
    for (const auto& g : level)
      for (Color c = 0; c <= rank; ++c)
        for (int w = 0; w < g.p(); ++w) next.insert(canonical_form(insert_melon(g, c, w)).graph);
    level = std::move(next);
  }
  return {level.begin(), level.end()};
}

inline std::size_t count_melons_exhaustive(int rank, int p, int jobs = 1) {
  return melon_classes_exhaustive(rank, p, jobs).size();
}

/// Rooted (D+1)-ary trees with p nodes, from T = 1 + z T^{D+1}.
inline std::vector<BigInt> colored_tree_counts(int rank, int max_p) {
  const int arity = rank + 1;
  std::vector<BigInt> t(max_p + 1, 0);
  t[0] = 1;
  // powers[j][n] = [z^n] T^j, filled one degree at a time.
  std::vector<std::vector<BigInt>> powers(arity + 1, std::vector<BigInt>(max_p + 1, 0));
  powers[0][0] = 1;
  for (int n = 0; n <= max_p; ++n) {
    if (n > 0) t[n] = powers[arity][n - 1];
    for (int j = 1; j <= arity; ++j) {
      BigInt acc = 0;
      for (int a = 0; a <= n; ++a) acc += t[a] * powers[j - 1][n - a];
      powers[j][n] = acc;
    }
  }
  return t;
}

inline BigInt count_colored_trees(int rank, int p) { return colored_tree_counts(rank, p).back(); }

/// Fuss-Catalan closed form binomial((D+1)p, p) / (Dp + 1).
inline BigInt fuss_catalan(int rank, int p) {
  return binomial(static_cast<unsigned>((rank + 1) * p), static_cast<unsigned>(p)) / (rank * p + 1);
}

struct CriticalEstimate {
  Rational lower;
  Rational upper;
  Rational estimate;  // Richardson-extrapolated ratio at max_p
  bool contains(const Rational& x) const { return lower <= x && x <= upper; }
};

/// Radius of convergence of the tree series by the ratio test. With
/// r_q = t_{q-1}/t_q and one Richardson step R_q = q r_q - (q-1) r_{q-1},
/// the interval is [max_q R_q, min_q r_q] over q <= max_p, so a larger max_p
/// can only shrink it.
inline CriticalEstimate estimate_critical_point(int rank, int max_p) {
  if (max_p < 10) throw Error(ErrorCode::InconsistentSize, "max_p must be at least 10");
  if (rank < 1) throw Error(ErrorCode::TooFewColors, "rank must be positive");
  const auto t = colored_tree_counts(rank, max_p);
  std::vector<Rational> ratio(max_p + 1);
  for (int q = 1; q <= max_p; ++q) ratio[q] = Rational(t[q - 1], t[q]);
  CriticalEstimate est;
  est.upper = ratio[1];
  for (int q = 2; q <= max_p; ++q) {
    est.upper = std::min(est.upper, ratio[q]);
    const Rational extrapolated = Rational(q) * ratio[q] - Rational(q - 1) * ratio[q - 1];
    est.lower = q == 2 ? extrapolated : std::max(est.lower, extrapolated);
    est.estimate = extrapolated;
  }
  return est;
}

}  // namespace melonica
