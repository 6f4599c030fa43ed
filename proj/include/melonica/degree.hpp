#pragma once

#include <melonica/error.hpp>
#include <melonica/exact.hpp>
#include <melonica/graph.hpp>

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

namespace melonica {

// A jacket is the ribbon graph obtained by keeping only the faces whose two
// colors are neighbours in a cyclic order of the colors. `cycle` starts at
// color 0 and has cycle[1] < cycle.back(), which picks one of the two
// orientations.
struct Jacket {
  std::vector<Color> cycle;
  int face_count = 0;
  int genus = 0;
};

struct DegreeReport {
  int omega = 0;
  std::vector<int> jacket_genera;
  int face_total = 0;
  Rational formula_face_total;
};

struct AmplitudeExponent {
  Rational value;
  friend bool operator==(const AmplitudeExponent&, const AmplitudeExponent&) = default;
};

namespace detail {

inline std::vector<std::vector<int>> face_matrix(const ColoredGraph& g) {
  const int c = g.num_colors();
  std::vector<std::vector<int>> f(c, std::vector<int>(c, 0));
  for (Color i = 0; i < c; ++i)
    for (Color j = i + 1; j < c; ++j) f[i][j] = f[j][i] = face_count(g, i, j);
  return f;
}

inline void require_connected(const ColoredGraph& g, const char* what) {
  if (!is_connected(g))
    throw Error(ErrorCode::Disconnected, std::string(what) + " is only defined for connected graphs");
}

}  // namespace detail

/// Color cycles up to reversal, in lexicographic order. (c-1)!/2 of them for
/// c >= 3 colors, none for c = 2.
inline std::vector<std::vector<Color>> jacket_cycles(int num_colors) {
  std::vector<std::vector<Color>> out;
  std::vector<Color> rest(num_colors - 1);
  std::iota(rest.begin(), rest.end(), 1);
  do {
    if (rest.size() >= 2 && rest.front() < rest.back()) {
      std::vector<Color> cyc{0};
      cyc.insert(cyc.end(), rest.begin(), rest.end());
      out.push_back(std::move(cyc));
    }
  } while (std::next_permutation(rest.begin(), rest.end()));
  return out;
}

inline std::vector<Jacket> jackets(const ColoredGraph& g) {
  detail::require_connected(g, "jacket genus");
  const auto f = detail::face_matrix(g);
  const int c = g.num_colors();
  std::vector<Jacket> out;
  for (auto& cyc : jacket_cycles(c)) {
    int faces_j = 0;
    for (int k = 0; k < c; ++k) faces_j += f[cyc[k]][cyc[(k + 1) % c]];
    // A jacket keeps every vertex and line of g.
    const int twice_genus = 2 - (faces_j - g.line_count() + g.vertex_count());
    if (twice_genus < 0 || twice_genus % 2 != 0)
      throw Error(ErrorCode::FormulaMismatch, "jacket with non-integral or negative genus");
    out.push_back(Jacket{std::move(cyc), faces_j, twice_genus / 2});
  }
  return out;
}

/// Face count predicted by the degree for a connected graph with c colors:
///   F = (c-1)(c-2)/2 p + (c-1) - 2 omega / (c-2)!
inline Rational formula_face_count(int num_colors, int p, int omega) {
  const long long c = num_colors;
  return Rational((c - 1) * (c - 2) * p, 2) + Rational(c - 1) -
         Rational(2 * omega, small_factorial(num_colors - 2));
}

inline DegreeReport degree(const ColoredGraph& g) {
  DegreeReport r;
  for (const auto& j : jackets(g)) {
    r.jacket_genera.push_back(j.genus);
    r.omega += j.genus;
  }
  r.face_total = total_faces(g);
  r.formula_face_total = formula_face_count(g.num_colors(), g.p(), r.omega);
  if (r.formula_face_total != r.face_total)
    throw Error(ErrorCode::FormulaMismatch, "face count " + std::to_string(r.face_total) +
                                                " disagrees with the degree formula value " +
                                                to_compact_string(r.formula_face_total));
  return r;
}

inline int degree_of(const ColoredGraph& g) { return degree(g).omega; }

/// Faces of a connected trivalent ribbon graph, checked against F = p + 2 - 2g.
inline int ribbon_face_check(const ColoredGraph& g, int genus) {
  if (g.num_colors() != 3)
    throw Error(ErrorCode::NotRibbon, "ribbon graphs are encoded with 3 colors, got " +
                                          std::to_string(g.num_colors()));
  detail::require_connected(g, "ribbon face count");
  const int f = total_faces(g);
  if (f != g.p() + 2 - 2 * genus)
    throw Error(ErrorCode::FormulaMismatch, "F = " + std::to_string(f) + " but p + 2 - 2g = " +
                                                std::to_string(g.p() + 2 - 2 * genus));
  return f;
}

/// N-exponent of the amplitude from the degree: D - 2 omega / (D-1)!.
inline AmplitudeExponent amplitude_exponent(const ColoredGraph& g, int rank) {
  if (g.num_colors() != rank + 1)
    throw Error(ErrorCode::ColorCountMismatch, "rank " + std::to_string(rank) + " needs " +
                                                   std::to_string(rank + 1) + " colors, graph has " +
                                                   std::to_string(g.num_colors()));
  const int omega = degree(g).omega;
  return {Rational(rank) - Rational(2 * omega, small_factorial(rank - 1))};
}

/// Effective vertices of a Feynman graph: the connected components of the
/// subgraph with colors 1..D, ordered by smallest white vertex.
inline std::vector<Subgraph> bubbles_of(const ColoredGraph& g) {
  if (g.num_colors() < 3)
    throw Error(ErrorCode::TooFewColors, "Feynman graphs need at least 3 colors (D >= 2)");
  return components(g, colors_without(g, 0));
}

/// N-exponent obtained by counting index loops directly: one factor N per
/// face of colors {0,i}, 1/N^{D-1} per color-0 line and
/// N^{D-1 - 2 omega(B)/(D-2)!} per bubble. Defined for any closure, connected
/// or not; for connected graphs it must equal amplitude_exponent.
inline AmplitudeExponent amplitude_exponent_bruteforce(const ColoredGraph& g, const std::vector<int>& bubble_degrees) {
  if (g.num_colors() < 3)
    throw Error(ErrorCode::ColorCountMismatch, "Feynman graphs need at least 3 colors");
  const int rank = g.num_colors() - 1;
  const auto pieces = bubbles_of(g);
  if (pieces.size() != bubble_degrees.size())
    throw Error(ErrorCode::ColorCountMismatch, "graph has " + std::to_string(pieces.size()) +
                                                   " bubbles but " + std::to_string(bubble_degrees.size()) +
                                                   " bubble degrees were given");
  long long loops = 0;
  for (Color i = 1; i <= rank; ++i) loops += face_count(g, 0, i);
  Rational exponent = Rational(loops) - Rational(static_cast<long long>(rank - 1) * g.p());
  const long long scale = small_factorial(rank - 2);
  for (int omega : bubble_degrees) exponent += Rational(rank - 1) - Rational(2 * omega, scale);
  return {exponent};
}

inline AmplitudeExponent amplitude_exponent_bruteforce(const ColoredGraph& g) {
  std::vector<int> degrees;
  for (const auto& b : bubbles_of(g)) degrees.push_back(degree_of(b.graph));
  return amplitude_exponent_bruteforce(g, degrees);
}

}  // namespace melonica
