/**
 * @file quadrature.cpp
 * @brief Gauss-Legendre segment rules and symmetric Dunavant/Strang-Fix triangle rules.
 */
#include "stokes_biot/quadrature.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace stokes_biot {
namespace {

QuadratureRule make_segment(int npoints) {
  QuadratureRule rule;
  rule.cell = CellKind::Segment;
  rule.degree = 2 * npoints - 1;
  std::vector<double> x, w;
  switch (npoints) {
    case 1:
      x = {0.0};
      w = {2.0};
      break;
    case 2:
      x = {-1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0)};
      w = {1.0, 1.0};
      break;
    case 3:
      x = {-std::sqrt(0.6), 0.0, std::sqrt(0.6)};
      w = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
      break;
    case 4: {
      const double a = std::sqrt(3.0 / 7.0 - 2.0 / 7.0 * std::sqrt(1.2));
      const double b = std::sqrt(3.0 / 7.0 + 2.0 / 7.0 * std::sqrt(1.2));
      const double wa = (18.0 + std::sqrt(30.0)) / 36.0;
      const double wb = (18.0 - std::sqrt(30.0)) / 36.0;
      x = {-b, -a, a, b};
      w = {wb, wa, wa, wb};
      break;
    }
    default:
      throw std::logic_error("unsupported Gauss rule");
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    rule.points.emplace_back(0.5 * (x[i] + 1.0), 0.0);
    rule.weights.push_back(0.5 * w[i]);
  }
  return rule;
}

// Orbit helpers for symmetric rules; weights are given normalized to unit
// area and scaled by the reference area 1/2.
void add_centroid(QuadratureRule& r, double w) {
  r.points.emplace_back(1.0 / 3.0, 1.0 / 3.0);
  r.weights.push_back(0.5 * w);
}

void add_orbit3(QuadratureRule& r, double a, double w) {
  const double b = 1.0 - 2.0 * a;
  for (const auto& p : std::array<Eigen::Vector2d, 3>{{{a, a}, {b, a}, {a, b}}}) {
    r.points.push_back(p);
    r.weights.push_back(0.5 * w);
  }
}

void add_orbit6(QuadratureRule& r, double a, double b, double w) {
  const double c = 1.0 - a - b;
  for (const auto& p :
       std::array<Eigen::Vector2d, 6>{{{a, b}, {b, a}, {a, c}, {c, a}, {b, c}, {c, b}}}) {
    r.points.push_back(p);
    r.weights.push_back(0.5 * w);
  }
}

QuadratureRule make_triangle(int degree) {
  QuadratureRule r;
  r.cell = CellKind::Triangle;
  r.degree = degree;
  switch (degree) {
    case 1:
      add_centroid(r, 1.0);
      break;
    case 2:
      add_orbit3(r, 1.0 / 6.0, 1.0 / 3.0);
      break;
    case 4:
      add_orbit3(r, 0.445948490915965, 0.223381589678011);
      add_orbit3(r, 0.091576213509771, 0.109951743655322);
      break;
    case 5: {
      const double s = std::sqrt(15.0);
      add_centroid(r, 0.225);
      add_orbit3(r, (6.0 - s) / 21.0, (155.0 - s) / 1200.0);
      add_orbit3(r, (6.0 + s) / 21.0, (155.0 + s) / 1200.0);
      break;
    }
    case 6:
      add_orbit3(r, 0.249286745170910, 0.116786275726379);
      add_orbit3(r, 0.063089014491502, 0.050844906370207);
      add_orbit6(r, 0.053145049844817, 0.310352451033784, 0.082851075618374);
      break;
    default:
      throw std::logic_error("unsupported triangle rule");
  }
  return r;
}

}  // namespace

const QuadratureRule& quadrature_rule(CellKind cell, int degree) {
  if (degree < 0) throw std::invalid_argument("quadrature degree must be non-negative");
  if (cell == CellKind::Segment) {
    static const std::array<QuadratureRule, 4> rules{make_segment(1), make_segment(2),
                                                     make_segment(3), make_segment(4)};
    if (degree > 7) {
      throw std::invalid_argument("segment quadrature degree " + std::to_string(degree) +
                                  " exceeds 7");
    }
    return rules[static_cast<std::size_t>(degree / 2)];
  }
  static const std::array<QuadratureRule, 5> rules{make_triangle(1), make_triangle(2),
                                                   make_triangle(4), make_triangle(5),
                                                   make_triangle(6)};
  switch (degree) {
    case 0:
    case 1: return rules[0];
    case 2: return rules[1];
    case 3:
    case 4: return rules[2];
    case 5: return rules[3];
    case 6: return rules[4];
    default:
      throw std::invalid_argument("triangle quadrature degree " + std::to_string(degree) +
                                  " exceeds 6");
  }
}

}  // namespace stokes_biot
