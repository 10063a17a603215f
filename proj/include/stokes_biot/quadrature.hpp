/**
 * @file quadrature.hpp
 * @brief Quadrature on the reference triangle {(0,0),(1,0),(0,1)} and the unit segment [0,1].
 */
#pragma once

#include <Eigen/Core>

#include <vector>

namespace stokes_biot {

enum class CellKind { Triangle, Segment };

struct QuadratureRule {
  CellKind cell = CellKind::Triangle;
  int degree = 0;  // exact for polynomials up to this total degree
  std::vector<Eigen::Vector2d> points;  // segment rules use points[i].x()
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
};

/// Smallest tabulated rule exact to `degree`. Triangles go up to degree 6,
/// segments up to degree 7; anything beyond throws std::invalid_argument.
const QuadratureRule& quadrature_rule(CellKind cell, int degree);

inline constexpr int kVolumeQuadratureDegree = 5;
inline constexpr int kInterfaceQuadratureDegree = 3;

}  // namespace stokes_biot
