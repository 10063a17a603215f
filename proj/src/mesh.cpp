/**
 * @file mesh.cpp
 */
#include "stokes_biot/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace stokes_biot {

const char* to_string(BoundaryTag tag) {
  switch (tag) {
    case BoundaryTag::None: return "none";
    case BoundaryTag::FluidLeft: return "fluid-left";
    case BoundaryTag::FluidTop: return "fluid-top";
    case BoundaryTag::FluidRight: return "fluid-right";
    case BoundaryTag::Interface: return "interface";
    case BoundaryTag::PoroLeft: return "poro-left";
    case BoundaryTag::PoroRight: return "poro-right";
    case BoundaryTag::PoroBottom: return "poro-bottom";
  }
  return "unknown";
}

std::array<int, 2> Mesh::local_edge_vertices(int k) {
  static constexpr std::array<std::array<int, 2>, 3> kEdges{{{1, 2}, {0, 2}, {0, 1}}};
  return kEdges[k];
}

Mesh::Mesh(std::vector<Point> vertices, std::vector<std::array<int, 3>> triangles,
           const std::vector<std::pair<std::array<int, 2>, BoundaryTag>>& tagged_edges)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)) {
  std::map<std::pair<int, int>, int> lookup;
  tri_edges_.resize(triangles_.size());
  tri_edge_signs_.resize(triangles_.size());

  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    if (signed_area(static_cast<int>(t)) <= 0.0) {
      throw std::invalid_argument("triangle " + std::to_string(t) + " is not counter-clockwise");
    }
    const auto& tri = triangles_[t];
    for (int k = 0; k < 3; ++k) {
      // Counter-clockwise traversal of the edge opposite vertex k.
      const int from = tri[(k + 1) % 3];
      const int to = tri[(k + 2) % 3];
      const auto key = std::minmax(from, to);
      auto [it, inserted] = lookup.try_emplace({key.first, key.second}, num_edges());
      if (inserted) {
        edges_.push_back(Edge{{key.first, key.second}});
        edge_tris_.push_back({static_cast<int>(t), -1});
      } else {
        auto& tris = edge_tris_[it->second];
        if (tris[1] >= 0) throw std::invalid_argument("non-manifold edge");
        tris[1] = static_cast<int>(t);
      }
      tri_edges_[t][k] = it->second;
      tri_edge_signs_[t][k] = from < to ? 1 : -1;
    }
  }

  edge_tags_.assign(edges_.size(), BoundaryTag::None);
  for (const auto& [verts, tag] : tagged_edges) {
    const auto key = std::minmax(verts[0], verts[1]);
    auto it = lookup.find({key.first, key.second});
    if (it == lookup.end()) throw std::invalid_argument("tagged edge not in mesh");
    if (!is_boundary_edge(it->second)) throw std::invalid_argument("tagged edge is interior");
    edge_tags_[it->second] = tag;
  }
}

double Mesh::signed_area(int t) const {
  const auto& tri = triangles_[t];
  const Point a = vertices_[tri[1]] - vertices_[tri[0]];
  const Point b = vertices_[tri[2]] - vertices_[tri[0]];
  return 0.5 * (a.x() * b.y() - a.y() * b.x());
}

double Mesh::edge_length(int e) const {
  return (vertices_[edges_[e].v[1]] - vertices_[edges_[e].v[0]]).norm();
}

Point Mesh::edge_midpoint(int e) const {
  return 0.5 * (vertices_[edges_[e].v[0]] + vertices_[edges_[e].v[1]]);
}

Point Mesh::edge_normal(int e) const {
  const Point t = (vertices_[edges_[e].v[1]] - vertices_[edges_[e].v[0]]).normalized();
  return Point(t.y(), -t.x());
}

Point Mesh::triangle_centroid(int t) const {
  const auto& tri = triangles_[t];
  return (vertices_[tri[0]] + vertices_[tri[1]] + vertices_[tri[2]]) / 3.0;
}

Mesh build_rect_mesh(const Rect& domain, int nx, int ny, const SideTags& tags) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("mesh counts must be positive");
  if (!(domain.x0 < domain.x1) || !(domain.y0 < domain.y1)) {
    throw std::invalid_argument("degenerate rectangle");
  }
  const double hx = domain.width() / nx;
  const double hy = domain.height() / ny;
  auto id = [nx](int i, int j) { return j * (nx + 1) + i; };

  std::vector<Point> vertices;
  vertices.reserve(static_cast<std::size_t>((nx + 1) * (ny + 1)));
  for (int j = 0; j <= ny; ++j) {
    // Pin the last row/column to the exact rectangle bounds.
    const double y = j == ny ? domain.y1 : domain.y0 + j * hy;
    for (int i = 0; i <= nx; ++i) {
      const double x = i == nx ? domain.x1 : domain.x0 + i * hx;
      vertices.emplace_back(x, y);
    }
  }

  std::vector<std::array<int, 3>> triangles;
  triangles.reserve(static_cast<std::size_t>(2 * nx * ny));
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int v00 = id(i, j), v10 = id(i + 1, j), v01 = id(i, j + 1), v11 = id(i + 1, j + 1);
      triangles.push_back({v00, v10, v11});
      triangles.push_back({v00, v11, v01});
    }
  }

  std::vector<std::pair<std::array<int, 2>, BoundaryTag>> tagged;
  for (int i = 0; i < nx; ++i) {
    tagged.push_back({{id(i, 0), id(i + 1, 0)}, tags.bottom});
    tagged.push_back({{id(i, ny), id(i + 1, ny)}, tags.top});
  }
  for (int j = 0; j < ny; ++j) {
    tagged.push_back({{id(0, j), id(0, j + 1)}, tags.left});
    tagged.push_back({{id(nx, j), id(nx, j + 1)}, tags.right});
  }
  return Mesh(std::move(vertices), std::move(triangles), tagged);
}

double InterfaceTrace::total_length() const {
  double sum = 0.0;
  for (const auto& s : segments) sum += s.length();
  return sum;
}

std::vector<double> InterfaceTrace::breakpoints() const {
  std::vector<double> pts;
  pts.reserve(segments.size() + 1);
  for (const auto& s : segments) pts.push_back(s.xa);
  if (!segments.empty()) pts.push_back(segments.back().xb);
  return pts;
}

std::vector<double> MergedTrace::breakpoints() const {
  std::vector<double> pts;
  for (const auto& s : segments) pts.push_back(s.xa);
  if (!segments.empty()) pts.push_back(segments.back().xb);
  return pts;
}

InterfaceTrace extract_interface_trace(const Mesh& mesh, Side side) {
  InterfaceTrace trace;
  trace.side = side;
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (mesh.edge_tag(e) != BoundaryTag::Interface) continue;
    const Point& a = mesh.vertex(mesh.edge(e).v[0]);
    const Point& b = mesh.vertex(mesh.edge(e).v[1]);
    TraceSegment seg;
    seg.xa = std::min(a.x(), b.x());
    seg.xb = std::max(a.x(), b.x());
    seg.edge = e;
    seg.triangle = mesh.edge_triangles(e)[0];
    trace.y = a.y();
    trace.segments.push_back(seg);
  }
  if (trace.segments.empty()) throw std::invalid_argument("mesh has no interface edges");
  std::sort(trace.segments.begin(), trace.segments.end(),
            [](const TraceSegment& l, const TraceSegment& r) { return l.xa < r.xa; });
  return trace;
}

MergedTrace merge_traces(const InterfaceTrace& fluid, const InterfaceTrace& poro) {
  if (fluid.segments.empty() || poro.segments.empty()) {
    throw std::invalid_argument("cannot merge an empty trace");
  }
  const double length = fluid.x_end() - fluid.x_begin();
  const double tol = 1e-12 * length;
  if (std::abs(fluid.x_begin() - poro.x_begin()) > tol ||
      std::abs(fluid.x_end() - poro.x_end()) > tol) {
    throw std::invalid_argument("interface traces cover different intervals");
  }

  std::vector<double> pts = fluid.breakpoints();
  const auto other = poro.breakpoints();
  pts.insert(pts.end(), other.begin(), other.end());
  std::sort(pts.begin(), pts.end());
  std::vector<double> unique;
  for (double p : pts) {
    if (unique.empty() || p - unique.back() > tol) unique.push_back(p);
  }

  MergedTrace merged{fluid, poro, {}};
  std::size_t fi = 0, pi = 0;
  for (std::size_t k = 0; k + 1 < unique.size(); ++k) {
    const double xa = unique[k], xb = unique[k + 1];
    const double mid = 0.5 * (xa + xb);
    while (fi + 1 < fluid.segments.size() && fluid.segments[fi].xb <= mid) ++fi;
    while (pi + 1 < poro.segments.size() && poro.segments[pi].xb <= mid) ++pi;
    merged.segments.push_back(
        MergedSegment{xa, xb, static_cast<int>(fi), static_cast<int>(pi)});
  }
  return merged;
}

}  // namespace stokes_biot
