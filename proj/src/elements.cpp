/**
 * @file elements.cpp
 */
#include "stokes_biot/elements.hpp"

#include "stokes_biot/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace stokes_biot {
namespace {

const std::array<Vec2, 3>& reference_vertices() {
  static const std::array<Vec2, 3> v{Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)};
  return v;
}

// Monomial spanning sets: RT0 = {(1,0), (0,1), (x,y)}; BDM1 = P1^2.
int num_monomials(HdivKind kind) { return kind == HdivKind::RT0 ? 3 : 6; }

void eval_monomials(HdivKind kind, const Vec2& p, std::array<Vec2, 6>& val,
                    std::array<double, 6>& div) {
  const double x = p.x(), y = p.y();
  if (kind == HdivKind::RT0) {
    val[0] = Vec2(1, 0);
    val[1] = Vec2(0, 1);
    val[2] = Vec2(x, y);
    div[0] = 0;
    div[1] = 0;
    div[2] = 2;
    return;
  }
  val[0] = Vec2(1, 0);
  val[1] = Vec2(0, 1);
  val[2] = Vec2(x, 0);
  val[3] = Vec2(y, 0);
  val[4] = Vec2(0, x);
  val[5] = Vec2(0, y);
  div = {0, 0, 1, 0, 0, 1};
}

// Coefficients of the dual reference basis in the monomial set: column k
// holds basis function k.
Eigen::MatrixXd dual_coefficients(HdivKind kind) {
  const int n = num_monomials(kind);
  const int moments = kind == HdivKind::RT0 ? 1 : 2;
  const auto& verts = reference_vertices();
  const auto& gauss = quadrature_rule(CellKind::Segment, 3);
  Eigen::MatrixXd dofs = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < 3; ++k) {
    const auto [a, b] = Mesh::local_edge_vertices(k);
    const Vec2 tangent = verts[b] - verts[a];
    const double len = tangent.norm();
    // Outward normal: right-hand normal of the counter-clockwise traversal.
    const Vec2 ccw = verts[(k + 2) % 3] - verts[(k + 1) % 3];
    const Vec2 normal = Vec2(ccw.y(), -ccw.x()).normalized();
    for (std::size_t q = 0; q < gauss.size(); ++q) {
      const double s = gauss.points[q].x();
      const Vec2 p = verts[a] + s * tangent;
      std::array<Vec2, 6> val;
      std::array<double, 6> div;
      eval_monomials(kind, p, val, div);
      for (int m = 0; m < moments; ++m) {
        const double weight = gauss.weights[q] * len * std::pow(s, m);
        for (int j = 0; j < n; ++j) dofs(moments * k + m, j) += weight * val[j].dot(normal);
      }
    }
  }
  return dofs.inverse();
}

}  // namespace

int num_local_basis(LagrangeKind kind) {
  switch (kind) {
    case LagrangeKind::P0: return 1;
    case LagrangeKind::P1: return 3;
    case LagrangeKind::P1Bubble: return 4;
  }
  return 0;
}

int num_local_basis(HdivKind kind) { return kind == HdivKind::RT0 ? 3 : 6; }

GeometryMap GeometryMap::of(const std::array<Vec2, 3>& v) {
  GeometryMap g;
  g.B.col(0) = v[1] - v[0];
  g.B.col(1) = v[2] - v[0];
  g.b = v[0];
  g.det = g.B.determinant();
  if (!(g.det > 0.0)) throw std::invalid_argument("degenerate or inverted triangle");
  g.inv_transpose = g.B.inverse().transpose();
  return g;
}

GeometryMap GeometryMap::of(const Mesh& mesh, int triangle) {
  const auto& tri = mesh.triangle(triangle);
  return of({mesh.vertex(tri[0]), mesh.vertex(tri[1]), mesh.vertex(tri[2])});
}

LagrangeEval eval_lagrange_basis(LagrangeKind kind, const Vec2& xhat) {
  LagrangeEval out;
  out.size = num_local_basis(kind);
  if (kind == LagrangeKind::P0) {
    out.value[0] = 1.0;
    out.grad[0] = Vec2::Zero();
    return out;
  }
  const auto l = barycentric(xhat);
  out.value[0] = l[0];
  out.value[1] = l[1];
  out.value[2] = l[2];
  out.grad[0] = Vec2(-1, -1);
  out.grad[1] = Vec2(1, 0);
  out.grad[2] = Vec2(0, 1);
  if (kind == LagrangeKind::P1Bubble) {
    out.value[3] = 27.0 * l[0] * l[1] * l[2];
    out.grad[3] = 27.0 * (l[1] * l[2] * out.grad[0] + l[0] * l[2] * out.grad[1] +
                          l[0] * l[1] * out.grad[2]);
  }
  return out;
}

HdivRefEval eval_hdiv_reference(HdivKind kind, const Vec2& xhat) {
  static const Eigen::MatrixXd rt0 = dual_coefficients(HdivKind::RT0);
  static const Eigen::MatrixXd bdm1 = dual_coefficients(HdivKind::BDM1);
  const Eigen::MatrixXd& coeff = kind == HdivKind::RT0 ? rt0 : bdm1;
  const int n = num_monomials(kind);

  std::array<Vec2, 6> val;
  std::array<double, 6> div;
  eval_monomials(kind, xhat, val, div);

  HdivRefEval out;
  out.size = n;
  for (int k = 0; k < n; ++k) {
    Vec2 v = Vec2::Zero();
    double d = 0.0;
    for (int j = 0; j < n; ++j) {
      v += coeff(j, k) * val[j];
      d += coeff(j, k) * div[j];
    }
    out.value[k] = v;
    out.div[k] = d;
  }
  return out;
}

HdivEval eval_hdiv_basis(HdivKind kind, const GeometryMap& map, const Vec2& xhat) {
  const HdivRefEval ref = eval_hdiv_reference(kind, xhat);
  HdivEval out;
  out.size = ref.size;
  const double inv_det = 1.0 / map.det;
  for (int k = 0; k < ref.size; ++k) {
    out.value[k] = inv_det * (map.B * ref.value[k]);
    out.div[k] = inv_det * ref.div[k];
  }
  return out;
}

HdivOrientation HdivOrientation::of(HdivKind kind, const Mesh& mesh, int triangle) {
  HdivOrientation o;
  o.size = num_local_basis(kind);
  o.coeff.setZero();
  const auto& tri = mesh.triangle(triangle);
  for (int k = 0; k < 3; ++k) {
    const double sign = mesh.edge_sign(triangle, k);
    if (kind == HdivKind::RT0) {
      o.coeff(k, k) = sign;
      continue;
    }
    const auto [a, b] = Mesh::local_edge_vertices(k);
    const int i0 = 2 * k, i1 = 2 * k + 1;
    if (tri[a] < tri[b]) {
      o.coeff(i0, i0) = sign;
      o.coeff(i1, i1) = sign;
    } else {
      // Global parameter runs opposite: s_global = 1 - s_local.
      o.coeff(i0, i0) = sign;
      o.coeff(i0, i1) = sign;
      o.coeff(i1, i1) = -sign;
    }
  }
  return o;
}

HdivEval HdivOrientation::apply(const HdivEval& local) const {
  HdivEval out;
  out.size = size;
  for (int i = 0; i < size; ++i) {
    Vec2 v = Vec2::Zero();
    double d = 0.0;
    for (int j = 0; j < size; ++j) {
      const double c = coeff(i, j);
      if (c == 0.0) continue;
      v += c * local.value[j];
      d += c * local.div[j];
    }
    out.value[i] = v;
    out.div[i] = d;
  }
  return out;
}

HdivEval eval_hdiv_global(HdivKind kind, const GeometryMap& map,
                          const HdivOrientation& orientation, const Vec2& xhat) {
  return orientation.apply(eval_hdiv_basis(kind, map, xhat));
}

}  // namespace stokes_biot
