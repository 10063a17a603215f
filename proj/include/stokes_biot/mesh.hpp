/**
 * @file mesh.hpp
 * @brief Structured triangulations of axis-aligned rectangles and interface traces.
 */
#pragma once

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace stokes_biot {

using Point = Eigen::Vector2d;

/// Physical location of a boundary edge. Which boundary condition type a
/// poroelastic side carries is decided by the scenario, not the mesh.
enum class BoundaryTag : std::uint8_t {
  None,
  FluidLeft,
  FluidTop,
  FluidRight,
  Interface,
  PoroLeft,
  PoroRight,
  PoroBottom,
};

const char* to_string(BoundaryTag tag);

struct Rect {
  double x0 = 0.0;
  double x1 = 1.0;
  double y0 = 0.0;
  double y1 = 1.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
};

/// Tags applied to the four sides of a rectangle.
struct SideTags {
  BoundaryTag bottom = BoundaryTag::None;
  BoundaryTag right = BoundaryTag::None;
  BoundaryTag top = BoundaryTag::None;
  BoundaryTag left = BoundaryTag::None;
};

struct Edge {
  std::array<int, 2> v;  // v[0] < v[1]
};

/// Conforming triangulation. Immutable after construction.
///
/// Edges are stored low-to-high global vertex index. The canonical edge
/// normal is the right-hand normal of that direction; `edge_sign(t, k)` is +1
/// when it points out of triangle t across its local edge k.
class Mesh {
 public:
  Mesh(std::vector<Point> vertices, std::vector<std::array<int, 3>> triangles,
       const std::vector<std::pair<std::array<int, 2>, BoundaryTag>>& tagged_edges);

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_triangles() const { return static_cast<int>(triangles_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  const Point& vertex(int i) const { return vertices_[i]; }
  const std::array<int, 3>& triangle(int t) const { return triangles_[t]; }
  const Edge& edge(int e) const { return edges_[e]; }

  /// Global edge of local edge k (opposite local vertex k).
  int triangle_edge(int t, int k) const { return tri_edges_[t][k]; }
  int edge_sign(int t, int k) const { return tri_edge_signs_[t][k]; }

  /// Triangles incident to an edge; second entry is -1 on the boundary.
  const std::array<int, 2>& edge_triangles(int e) const { return edge_tris_[e]; }

  BoundaryTag edge_tag(int e) const { return edge_tags_[e]; }
  bool is_boundary_edge(int e) const { return edge_tris_[e][1] < 0; }

  double signed_area(int t) const;
  double edge_length(int e) const;
  Point edge_midpoint(int e) const;
  /// Unit right-hand normal of the canonical low-to-high direction.
  Point edge_normal(int e) const;
  Point triangle_centroid(int t) const;

  /// Local vertex pair (a < b) spanning local edge k.
  static std::array<int, 2> local_edge_vertices(int k);

 private:
  std::vector<Point> vertices_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<Edge> edges_;
  std::vector<std::array<int, 3>> tri_edges_;
  std::vector<std::array<int, 3>> tri_edge_signs_;
  std::vector<std::array<int, 2>> edge_tris_;
  std::vector<BoundaryTag> edge_tags_;
};

/// Uniform nx-by-ny grid of squares, each split along its lower-left to
/// upper-right diagonal. Throws std::invalid_argument on bad input.
Mesh build_rect_mesh(const Rect& domain, int nx, int ny, const SideTags& tags);

enum class Side : std::uint8_t { Fluid, Poro };

struct TraceSegment {
  double xa = 0.0;
  double xb = 0.0;
  int edge = -1;      // owning mesh edge
  int triangle = -1;  // triangle containing that edge

  double length() const { return xb - xa; }
};

/// Interface edges of one mesh, sorted by x; they tile the interface y = y_interface.
struct InterfaceTrace {
  Side side = Side::Fluid;
  double y = 0.0;
  std::vector<TraceSegment> segments;

  double x_begin() const { return segments.front().xa; }
  double x_end() const { return segments.back().xb; }
  double total_length() const;
  std::vector<double> breakpoints() const;
};

InterfaceTrace extract_interface_trace(const Mesh& mesh, Side side);

/// Common refinement of a fluid trace and a poro trace.
struct MergedSegment {
  double xa = 0.0;
  double xb = 0.0;
  int fluid_segment = -1;  // index into MergedTrace::fluid.segments
  int poro_segment = -1;   // index into MergedTrace::poro.segments

  double length() const { return xb - xa; }
};

struct MergedTrace {
  InterfaceTrace fluid;
  InterfaceTrace poro;
  std::vector<MergedSegment> segments;

  std::vector<double> breakpoints() const;
};

/// Breakpoints closer than 1e-12 times the interface length are identified.
MergedTrace merge_traces(const InterfaceTrace& fluid, const InterfaceTrace& poro);

}  // namespace stokes_biot
