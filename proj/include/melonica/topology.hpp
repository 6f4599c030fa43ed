#pragma once

#include <melonica/error.hpp>
#include <melonica/graph.hpp>

#include <string>
#include <vector>

namespace melonica {

// Cell counts of the gluing of tetrahedra dual to a 4-colored graph:
// tetrahedra = vertices, triangles = lines, edges = bicolored faces and
// triangulation vertices = connected 3-colored subgraphs.
struct CellComplexSummary {
  int c0 = 0;
  int c1 = 0;
  int c2 = 0;
  int c3 = 0;
  int chi = 0;
};

struct SurfaceReport {
  std::vector<Color> colors;
  std::vector<int> whites;  // white vertices of the parent graph, when known
  int vertices = 0;
  int lines = 0;
  int faces = 0;
  int genus = 0;
};

struct LinkReport {
  std::vector<SurfaceReport> bubbles;
  bool is_manifold = true;
};

namespace detail {

inline void require_rank3(const ColoredGraph& g) {
  if (g.num_colors() != 4)
    throw Error(ErrorCode::WrongRank, "topology is implemented for 4-colored graphs, got " +
                                          std::to_string(g.num_colors()) + " colors");
  if (!is_connected(g)) throw Error(ErrorCode::Disconnected, "topology needs a connected graph");
}

}  // namespace detail

inline CellComplexSummary cell_complex(const ColoredGraph& g) {
  detail::require_rank3(g);
  CellComplexSummary s;
  s.c3 = g.vertex_count();
  s.c2 = g.line_count();
  s.c1 = total_faces(g);
  for (Color removed = 0; removed < 4; ++removed)
    s.c0 += static_cast<int>(white_components(g, colors_without(g, removed)).size());
  s.chi = s.c0 - s.c1 + s.c2 - s.c3;
  return s;
}

/// Surface of a connected 3-colored graph, genus from 2 - 2g = V - L + F.
inline SurfaceReport bubble_surface(const ColoredGraph& b) {
  if (b.num_colors() != 3)
    throw Error(ErrorCode::WrongRank, "surfaces come from 3-colored graphs, got " +
                                          std::to_string(b.num_colors()) + " colors");
  if (!is_connected(b)) throw Error(ErrorCode::Disconnected, "surface of a disconnected graph");
  SurfaceReport r;
  r.colors = {0, 1, 2};
  r.vertices = b.vertex_count();
  r.lines = b.line_count();
  r.faces = total_faces(b);
  const int euler = r.vertices - r.lines + r.faces;
  if (euler > 2 || (2 - euler) % 2 != 0)
    throw Error(ErrorCode::FormulaMismatch, "non-orientable or invalid surface");
  r.genus = (2 - euler) / 2;
  return r;
}

/// Genus of every connected 3-colored subgraph, over all four color triples.
inline LinkReport is_manifold(const ColoredGraph& g) {
  detail::require_rank3(g);
  LinkReport report;
  for (Color removed = 3; removed >= 0; --removed) {
    for (auto& piece : components(g, colors_without(g, removed))) {
      auto s = bubble_surface(piece.graph);
      s.colors = piece.colors;
      s.whites = piece.whites;
      if (s.genus != 0) report.is_manifold = false;
      report.bubbles.push_back(std::move(s));
    }
  }
  return report;
}

}  // namespace melonica
