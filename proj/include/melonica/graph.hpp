#pragma once

#include <melonica/error.hpp>
#include <melonica/permutation.hpp>

#include <algorithm>
#include <compare>
#include <cstddef>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

namespace melonica {

using Color = int;

// A closed bipartite edge-colored graph. White and black vertices are both
// numbered 0..p-1 and perm(i)[w] is the black vertex reached from white w
// along its line of color i. Every vertex carries exactly one line of each
// color, so the graph is fully described by num_colors permutations.
//
// Values are immutable once constructed.
class ColoredGraph {
 public:
  ColoredGraph() = default;

  /// Validating constructor over 0-based permutations.
  explicit ColoredGraph(std::vector<Permutation> perms) : perms_(std::move(perms)) {
    if (perms_.size() < 2)
      throw Error(ErrorCode::TooFewColors,
                  "a colored graph needs at least 2 colors, got " + std::to_string(perms_.size()));
    const std::size_t p = perms_.front().size();
    if (p < 1) throw Error(ErrorCode::InconsistentSize, "graphs need at least one white vertex");
    for (std::size_t c = 0; c < perms_.size(); ++c) {
      const auto& perm = perms_[c];
      if (perm.size() != p)
        throw Error(ErrorCode::InconsistentSize,
                    "color " + std::to_string(c) + " has " + std::to_string(perm.size()) +
                        " images, expected " + std::to_string(p));
      std::vector<char> hit(p, 0);
      for (std::size_t w = 0; w < p; ++w) {
        const int b = perm[w];
        if (b < 0 || static_cast<std::size_t>(b) >= p)
          throw Error(ErrorCode::NotAPermutation, "color " + std::to_string(c) + ": image " +
                                                      std::to_string(b + 1) + " out of range 1.." +
                                                      std::to_string(p));
        if (hit[b])
          throw Error(ErrorCode::NotAPermutation,
                      "color " + std::to_string(c) + ": duplicate image " + std::to_string(b + 1));
        hit[b] = 1;
      }
    }
    inverses_.reserve(perms_.size());
    for (const auto& perm : perms_) inverses_.push_back(perm.inverse());
  }

  /// build_graph: 1-based image lists, as they appear in files.
  static ColoredGraph build(int num_colors, const std::vector<std::vector<int>>& images) {
    if (num_colors < 2)
      throw Error(ErrorCode::TooFewColors,
                  "a colored graph needs at least 2 colors, got " + std::to_string(num_colors));
    if (images.size() != static_cast<std::size_t>(num_colors))
      throw Error(ErrorCode::InconsistentSize, "num_colors is " + std::to_string(num_colors) +
                                                   " but " + std::to_string(images.size()) +
                                                   " permutations were given");
    std::vector<Permutation> perms;
    perms.reserve(images.size());
    for (const auto& list : images) {
      std::vector<int> zero_based(list.size());
      std::transform(list.begin(), list.end(), zero_based.begin(), [](int x) { return x - 1; });
      perms.emplace_back(std::move(zero_based));
    }
    return ColoredGraph(std::move(perms));
  }

  int num_colors() const noexcept { return static_cast<int>(perms_.size()); }
  int p() const noexcept { return perms_.empty() ? 0 : static_cast<int>(perms_.front().size()); }
  int vertex_count() const noexcept { return 2 * p(); }
  int line_count() const noexcept { return num_colors() * p(); }

  const Permutation& perm(Color c) const { return perms_.at(c); }
  const Permutation& inverse(Color c) const { return inverses_.at(c); }
  const std::vector<Permutation>& perms() const noexcept { return perms_; }

  int black_of(Color c, int white) const { return perms_[c][white]; }
  int white_of(Color c, int black) const { return inverses_[c][black]; }

  friend bool operator==(const ColoredGraph& a, const ColoredGraph& b) { return a.perms_ == b.perms_; }
  friend std::strong_ordering operator<=>(const ColoredGraph& a, const ColoredGraph& b) {
    if (a.perms_.size() != b.perms_.size()) return a.perms_.size() <=> b.perms_.size();
    if (a.p() != b.p()) return a.p() <=> b.p();
    return a.perms_ <=> b.perms_;
  }

 private:
  std::vector<Permutation> perms_;
  std::vector<Permutation> inverses_;
};

/// The graph with two vertices joined by one line of every color.
inline ColoredGraph dipole(int num_colors) {
  return ColoredGraph(std::vector<Permutation>(num_colors, Permutation::identity(1)));
}

struct Face {
  std::pair<Color, Color> color_pair;
  std::vector<int> white_cycle;
  int length() const noexcept { return static_cast<int>(white_cycle.size()); }
};

inline void check_color_pair(const ColoredGraph& g, Color i, Color j) {
  if (i == j || i < 0 || j < 0 || i >= g.num_colors() || j >= g.num_colors())
    throw Error(ErrorCode::BadColor, "invalid color pair {" + std::to_string(i) + "," +
                                         std::to_string(j) + "} for a graph with " +
                                         std::to_string(g.num_colors()) + " colors");
}

/// Bicolored cycles of colors {i,j}: the cycles of perm(j)^-1 * perm(i) on
/// white vertices.
inline std::vector<Face> faces(const ColoredGraph& g, Color i, Color j) {
  check_color_pair(g, i, j);
  const auto step = g.inverse(j) * g.perm(i);
  std::vector<Face> out;
  for (auto& cyc : step.cycles()) out.push_back(Face{{std::min(i, j), std::max(i, j)}, std::move(cyc)});
  return out;
}

inline int face_count(const ColoredGraph& g, Color i, Color j) {
  check_color_pair(g, i, j);
  return static_cast<int>((g.inverse(j) * g.perm(i)).cycle_count());
}

inline int total_faces(const ColoredGraph& g) {
  int total = 0;
  for (Color i = 0; i < g.num_colors(); ++i)
    for (Color j = i + 1; j < g.num_colors(); ++j) total += face_count(g, i, j);
  return total;
}

/// Partition of the white vertices into connected components of the
/// subgraph spanned by `colors` (at least one color). Components are listed
/// by smallest white vertex, each sorted ascending.
inline std::vector<std::vector<int>> white_components(const ColoredGraph& g,
                                                      const std::vector<Color>& colors) {
  const int p = g.p();
  std::vector<int> comp(p, -1);
  std::vector<std::vector<int>> out;
  const Color base = colors.front();
  std::vector<Permutation> moves;
  for (std::size_t k = 1; k < colors.size(); ++k) moves.push_back(g.inverse(base) * g.perm(colors[k]));
  for (int s = 0; s < p; ++s) {
    if (comp[s] >= 0) continue;
    const int id = static_cast<int>(out.size());
    std::vector<int> members{s};
    comp[s] = id;
    for (std::size_t head = 0; head < members.size(); ++head) {
      const int x = members[head];
      for (const auto& m : moves) {
        const int y = m[x];
        if (comp[y] < 0) {
          comp[y] = id;
          members.push_back(y);
        }
      }
    }
    std::sort(members.begin(), members.end());
    out.push_back(std::move(members));
  }
  return out;
}

inline std::vector<Color> all_colors(const ColoredGraph& g) {
  std::vector<Color> c(g.num_colors());
  std::iota(c.begin(), c.end(), 0);
  return c;
}

/// True iff the graph is a single component: the group generated by the
/// face permutations acts transitively on white vertices.
inline bool is_connected(const ColoredGraph& g) { return white_components(g, all_colors(g)).size() == 1; }

// A connected piece of a colored graph restricted to a subset of colors,
// relabeled to 0..k-1 in ascending order of the original vertex numbers.
struct Subgraph {
  std::vector<Color> colors;
  std::vector<int> whites;
  std::vector<int> blacks;
  ColoredGraph graph;
};

/// Connected components of the subgraph spanned by `colors` (at least two).
inline std::vector<Subgraph> components(const ColoredGraph& g, const std::vector<Color>& colors) {
  if (colors.size() < 2) throw Error(ErrorCode::TooFewColors, "components need at least 2 colors");
  for (Color c : colors)
    if (c < 0 || c >= g.num_colors()) throw Error(ErrorCode::BadColor, "color " + std::to_string(c));
  std::vector<Subgraph> out;
  for (auto& whites : white_components(g, colors)) {
    std::vector<int> blacks;
    for (int w : whites) blacks.push_back(g.black_of(colors.front(), w));
    std::sort(blacks.begin(), blacks.end());
    std::vector<int> white_index(g.p(), -1), black_index(g.p(), -1);
    for (std::size_t k = 0; k < whites.size(); ++k) white_index[whites[k]] = static_cast<int>(k);
    for (std::size_t k = 0; k < blacks.size(); ++k) black_index[blacks[k]] = static_cast<int>(k);
    std::vector<Permutation> perms;
    for (Color c : colors) {
      std::vector<int> v(whites.size());
      for (std::size_t k = 0; k < whites.size(); ++k) v[k] = black_index[g.black_of(c, whites[k])];
      perms.emplace_back(std::move(v));
    }
    out.push_back(Subgraph{colors, std::move(whites), std::move(blacks), ColoredGraph(std::move(perms))});
  }
  return out;
}

/// The colors of g except `removed`, in increasing order.
inline std::vector<Color> colors_without(const ColoredGraph& g, Color removed) {
  std::vector<Color> out;
  for (Color c = 0; c < g.num_colors(); ++c)
    if (c != removed) out.push_back(c);
  return out;
}

/// Disjoint union; vertices of later graphs are shifted past earlier ones.
inline ColoredGraph disjoint_union(const std::vector<ColoredGraph>& parts) {
  if (parts.empty()) throw Error(ErrorCode::InconsistentSize, "empty disjoint union");
  const int colors = parts.front().num_colors();
  std::vector<std::vector<int>> images(colors);
  int offset = 0;
  for (const auto& part : parts) {
    if (part.num_colors() != colors)
      throw Error(ErrorCode::ColorCountMismatch, "disjoint union of graphs with different color counts");
    for (Color c = 0; c < colors; ++c)
      for (int w = 0; w < part.p(); ++w) images[c].push_back(part.black_of(c, w) + offset);
    offset += part.p();
  }
  std::vector<Permutation> perms;
  for (auto& v : images) perms.emplace_back(std::move(v));
  return ColoredGraph(std::move(perms));
}

/// Adds `line_zero` as a new color 0, shifting the colors of `bubbles` up by
/// one. This is the Wick closure of a product of trace invariants.
inline ColoredGraph close_with(const ColoredGraph& bubbles, const Permutation& line_zero) {
  if (line_zero.size() != static_cast<std::size_t>(bubbles.p()))
    throw Error(ErrorCode::MismatchedVertexCounts, "closure pairing has " + std::to_string(line_zero.size()) +
                                                       " points but the bubbles have " +
                                                       std::to_string(bubbles.p()) + " white vertices");
  std::vector<Permutation> perms{line_zero};
  for (const auto& perm : bubbles.perms()) perms.push_back(perm);
  return ColoredGraph(std::move(perms));
}

/// Relabels colors: color c of the result is color order[c] of g.
inline ColoredGraph permute_colors(const ColoredGraph& g, const std::vector<Color>& order) {
  std::vector<Permutation> perms;
  for (Color c : order) perms.push_back(g.perm(c));
  return ColoredGraph(std::move(perms));
}

/// Applies a vertex relabeling: perm(i) -> black_map * perm(i) * white_map^-1.
inline ColoredGraph relabel(const ColoredGraph& g, const Permutation& white_map, const Permutation& black_map) {
  const auto white_inv = white_map.inverse();
  std::vector<Permutation> perms;
  for (const auto& perm : g.perms()) perms.push_back(black_map * perm * white_inv);
  return ColoredGraph(std::move(perms));
}

}  // namespace melonica
