/**
 * @file elements.hpp
 * @brief Reference bases, affine maps and the contravariant Piola transform.
 *
 * Reference triangle vertices are (0,0), (1,0), (0,1); local edge k is
 * opposite local vertex k and is parametrized from its lower to its higher
 * local vertex. H(div) reference basis functions are dual to the edge
 * functionals  v -> int_e (v . n_out) s^m ds,  m = 0 (RT0) or m = 0, 1 (BDM1),
 * with n_out the outward unit normal and s in [0,1] the edge parameter.
 */
#pragma once

#include "stokes_biot/mesh.hpp"

#include <Eigen/Core>
#include <Eigen/LU>

#include <array>
#include <span>
#include <vector>

namespace stokes_biot {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

enum class LagrangeKind { P0, P1, P1Bubble };
enum class HdivKind { RT0, BDM1 };

int num_local_basis(LagrangeKind kind);
int num_local_basis(HdivKind kind);

/// x = B xhat + b for one triangle.
struct GeometryMap {
  Mat2 B;
  Vec2 b;
  double det = 0.0;
  Mat2 inv_transpose;

  static GeometryMap of(const Mesh& mesh, int triangle);
  static GeometryMap of(const std::array<Vec2, 3>& vertices);

  Vec2 to_physical(const Vec2& xhat) const { return B * xhat + b; }
  Vec2 to_reference(const Vec2& x) const { return B.inverse() * (x - b); }
};

/// Values and reference gradients of a scalar Lagrange basis at one point.
/// P1Bubble lists the three vertex functions followed by 27 l0 l1 l2.
struct LagrangeEval {
  std::array<double, 4> value{};
  std::array<Vec2, 4> grad{};
  int size = 0;
};

LagrangeEval eval_lagrange_basis(LagrangeKind kind, const Vec2& xhat);

/// Reference H(div) basis (local orientation) at one point.
struct HdivRefEval {
  std::array<Vec2, 6> value{};
  std::array<double, 6> div{};
  int size = 0;
};

HdivRefEval eval_hdiv_reference(HdivKind kind, const Vec2& xhat);

/// Physical H(div) basis values and divergences at one point.
struct HdivEval {
  std::array<Vec2, 6> value{};
  std::array<double, 6> div{};
  int size = 0;
};

/// Contravariant Piola transform v = B vhat / det B, div v = divhat vhat / det B.
HdivEval eval_hdiv_basis(HdivKind kind, const GeometryMap& map, const Vec2& xhat);

/// Local-to-global change of basis for H(div) functions of one triangle.
///
/// Row i of `coeff` expresses the i-th globally oriented basis function as a
/// combination of the locally oriented (Piola-mapped reference) ones. It is
/// block diagonal with one block per edge.
struct HdivOrientation {
  Eigen::Matrix<double, 6, 6> coeff = Eigen::Matrix<double, 6, 6>::Identity();
  int size = 0;

  static HdivOrientation of(HdivKind kind, const Mesh& mesh, int triangle);
  HdivEval apply(const HdivEval& local) const;
};

/// Globally oriented physical H(div) basis of a triangle at reference point xhat.
HdivEval eval_hdiv_global(HdivKind kind, const GeometryMap& map,
                          const HdivOrientation& orientation, const Vec2& xhat);

/// Barycentric coordinates of a reference point.
inline std::array<double, 3> barycentric(const Vec2& xhat) {
  return {1.0 - xhat.x() - xhat.y(), xhat.x(), xhat.y()};
}

}  // namespace stokes_biot
