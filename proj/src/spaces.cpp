/**
 * @file spaces.cpp
 */
#include "stokes_biot/spaces.hpp"

#include "stokes_biot/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stokes_biot {

const char* to_string(Field field) {
  switch (field) {
    case Field::Uf: return "u_f";
    case Field::Theta: return "theta";
    case Field::Up: return "u_p";
    case Field::SigmaP: return "sigma_p";
    case Field::Pp: return "p_p";
    case Field::Pf: return "p_f";
    case Field::Us: return "u_s";
    case Field::GammaP: return "gamma_p";
    case Field::Lambda: return "lambda";
  }
  return "unknown";
}

SpaceSpec SpaceSpec::standard(Field field) {
  switch (field) {
    case Field::Uf: return {field, ElementKind::P1BubbleVector, 2, Side::Fluid, false};
    case Field::Pf: return {field, ElementKind::P1, 1, Side::Fluid, false};
    case Field::SigmaP: return {field, ElementKind::BDM1Tensor, 4, Side::Poro, false};
    case Field::Us: return {field, ElementKind::P0Vector, 2, Side::Poro, false};
    case Field::GammaP: return {field, ElementKind::P1, 1, Side::Poro, false};
    case Field::Up: return {field, ElementKind::RT0, 2, Side::Poro, false};
    case Field::Pp: return {field, ElementKind::P0, 1, Side::Poro, false};
    case Field::Lambda: return {field, ElementKind::EdgeP0, 1, Side::Poro, true};
    case Field::Theta: return {field, ElementKind::EdgeP1DiscVector, 2, Side::Poro, true};
  }
  throw std::invalid_argument("unknown field");
}

DofMap::DofMap(const Mesh& mesh, const SpaceSpec& spec) : spec_(spec) {
  const int nv = mesh.num_vertices();
  const int nt = mesh.num_triangles();
  const int ne = mesh.num_edges();
  num_cells_ = nt;

  auto fill = [&](int local, int total, auto&& index) {
    local_size_ = local;
    num_dofs_ = total;
    dofs_.resize(static_cast<std::size_t>(num_cells_) * local);
    for (int c = 0; c < num_cells_; ++c) {
      for (int k = 0; k < local; ++k) dofs_[static_cast<std::size_t>(c) * local + k] = index(c, k);
    }
  };

  switch (spec.kind) {
    case ElementKind::P0:
      fill(1, nt, [](int t, int) { return t; });
      break;
    case ElementKind::P0Vector:
      fill(2, 2 * nt, [nt](int t, int c) { return c * nt + t; });
      break;
    case ElementKind::P1:
      fill(3, nv, [&](int t, int k) { return mesh.triangle(t)[k]; });
      break;
    case ElementKind::P1Disc:
      fill(3, 3 * nt, [](int t, int k) { return 3 * t + k; });
      break;
    case ElementKind::P1BubbleVector:
      fill(8, 2 * nv + 2 * nt, [&](int t, int local) {
        const int c = local / 4, k = local % 4;
        return k < 3 ? c * nv + mesh.triangle(t)[k] : 2 * nv + c * nt + t;
      });
      break;
    case ElementKind::RT0:
      fill(3, ne, [&](int t, int k) { return mesh.triangle_edge(t, k); });
      break;
    case ElementKind::BDM1Tensor:
      fill(12, 4 * ne, [&](int t, int local) {
        const int row = local / 6, k = (local % 6) / 2, m = local % 2;
        return row * 2 * ne + 2 * mesh.triangle_edge(t, k) + m;
      });
      break;
    case ElementKind::EdgeP0:
    case ElementKind::EdgeP1DiscVector: {
      if (!spec.multiplier) throw std::invalid_argument("edge spaces must be multipliers");
      trace_ = extract_interface_trace(mesh, Side::Poro);
      num_cells_ = static_cast<int>(trace_.segments.size());
      const int ng = num_cells_;
      if (spec.kind == ElementKind::EdgeP0) {
        fill(1, ng, [](int j, int) { return j; });
      } else {
        fill(4, 4 * ng, [ng](int j, int local) {
          const int c = local / 2, node = local % 2;
          return c * 2 * ng + 2 * j + node;
        });
      }
      break;
    }
  }
  if (spec.multiplier && spec.kind != ElementKind::EdgeP0 &&
      spec.kind != ElementKind::EdgeP1DiscVector) {
    throw std::invalid_argument("multiplier spaces must live on interface edges");
  }

  if (spec.kind == ElementKind::RT0 || spec.kind == ElementKind::BDM1Tensor) {
    const HdivKind hk = spec.kind == ElementKind::RT0 ? HdivKind::RT0 : HdivKind::BDM1;
    orientation_.reserve(static_cast<std::size_t>(nt));
    for (int t = 0; t < nt; ++t) orientation_.push_back(HdivOrientation::of(hk, mesh, t));
  }
}

DofMap build_dofmap(const Mesh& mesh, const SpaceSpec& spec) { return DofMap(mesh, spec); }

std::vector<bool> DofMap::boundary_mask(const Mesh& mesh,
                                        const std::vector<BoundaryTag>& tags) const {
  std::vector<bool> mask(static_cast<std::size_t>(num_dofs_), false);
  const int nv = mesh.num_vertices();
  const int ne = mesh.num_edges();
  for (int e = 0; e < ne; ++e) {
    if (std::find(tags.begin(), tags.end(), mesh.edge_tag(e)) == tags.end()) continue;
    switch (spec_.kind) {
      case ElementKind::P1BubbleVector:
        for (int v : mesh.edge(e).v) {
          mask[v] = true;
          mask[nv + v] = true;
        }
        break;
      case ElementKind::P1:
        for (int v : mesh.edge(e).v) mask[v] = true;
        break;
      case ElementKind::RT0:
        mask[e] = true;
        break;
      case ElementKind::BDM1Tensor:
        for (int row = 0; row < 2; ++row) {
          for (int m = 0; m < 2; ++m) mask[row * 2 * ne + 2 * e + m] = true;
        }
        break;
      default:
        break;
    }
  }
  return mask;
}

namespace {

// Normal moments int_e (f_row . n_e) s^m ds along edge e, with n_e the
// canonical normal and s running from the lower to the higher vertex index.
std::array<double, 4> edge_moments(const Mesh& mesh, int e, const AnalyticField& f, double t,
                                   int rows, int moments) {
  const auto& gauss = quadrature_rule(CellKind::Segment, 7);
  const Point& a = mesh.vertex(mesh.edge(e).v[0]);
  const Point& b = mesh.vertex(mesh.edge(e).v[1]);
  const double len = mesh.edge_length(e);
  const Point n = mesh.edge_normal(e);
  std::array<double, 4> out{};
  for (std::size_t q = 0; q < gauss.size(); ++q) {
    const double s = gauss.points[q].x();
    const FieldValue v = f(a + s * (b - a), t);
    for (int r = 0; r < rows; ++r) {
      const double flux = v[2 * r] * n.x() + v[2 * r + 1] * n.y();
      for (int m = 0; m < moments; ++m) {
        out[r * moments + m] += gauss.weights[q] * len * flux * (m == 0 ? 1.0 : s);
      }
    }
  }
  return out;
}

FieldValue cell_mean(const Mesh& mesh, int tri, const AnalyticField& f, double t) {
  const auto& rule = quadrature_rule(CellKind::Triangle, kVolumeQuadratureDegree);
  const GeometryMap map = GeometryMap::of(mesh, tri);
  FieldValue sum = FieldValue::Zero();
  for (std::size_t q = 0; q < rule.size(); ++q) {
    sum += rule.weights[q] * f(map.to_physical(rule.points[q]), t);
  }
  return sum / 0.5;
}

}  // namespace

FieldConstraints apply_essential_bcs(const Mesh& mesh, const DofMap& dofmap,
                                     const std::vector<EssentialBC>& bcs, double t) {
  FieldConstraints out;
  const auto& spec = dofmap.spec();
  const int nv = mesh.num_vertices();
  const int ne = mesh.num_edges();
  auto assign = [&](int dof, double value) {
    auto [it, inserted] = out.values.emplace(dof, value);
    if (!inserted && std::abs(it->second - value) > 1e-12 * std::max(1.0, std::abs(value))) {
      throw std::invalid_argument(std::string("conflicting essential values for ") +
                                  to_string(spec.field) + " dof " + std::to_string(dof));
    }
  };

  for (const auto& bc : bcs) {
    if (bc.field != spec.field) continue;
    if (spec.kind != ElementKind::P1BubbleVector && spec.kind != ElementKind::RT0 &&
        spec.kind != ElementKind::BDM1Tensor) {
      throw std::invalid_argument(std::string("field ") + to_string(spec.field) +
                                  " admits no essential boundary data");
    }
    for (int e = 0; e < ne; ++e) {
      if (std::find(bc.tags.begin(), bc.tags.end(), mesh.edge_tag(e)) == bc.tags.end()) continue;
      switch (spec.kind) {
        case ElementKind::P1BubbleVector:
          for (int v : mesh.edge(e).v) {
            const FieldValue val = bc.value(mesh.vertex(v), t);
            assign(v, val[0]);
            assign(nv + v, val[1]);
          }
          break;
        case ElementKind::RT0:
          assign(e, edge_moments(mesh, e, bc.value, t, 1, 1)[0]);
          break;
        case ElementKind::BDM1Tensor: {
          const auto m = edge_moments(mesh, e, bc.value, t, 2, 2);
          for (int row = 0; row < 2; ++row) {
            assign(row * 2 * ne + 2 * e, m[2 * row]);
            assign(row * 2 * ne + 2 * e + 1, m[2 * row + 1]);
          }
          break;
        }
        default:
          break;
      }
    }
  }
  return out;
}

Eigen::VectorXd interpolate(const Mesh& mesh, const DofMap& dofmap, const AnalyticField& f,
                            double t) {
  const auto& spec = dofmap.spec();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dofmap.num_dofs());
  const int nv = mesh.num_vertices();
  const int nt = mesh.num_triangles();
  const int ne = mesh.num_edges();

  switch (spec.kind) {
    case ElementKind::P0:
      for (int c = 0; c < nt; ++c) out[c] = cell_mean(mesh, c, f, t)[0];
      break;
    case ElementKind::P0Vector:
      for (int c = 0; c < nt; ++c) {
        const FieldValue m = cell_mean(mesh, c, f, t);
        out[c] = m[0];
        out[nt + c] = m[1];
      }
      break;
    case ElementKind::P1:
      for (int v = 0; v < nv; ++v) out[v] = f(mesh.vertex(v), t)[0];
      break;
    case ElementKind::P1Disc:
      for (int c = 0; c < nt; ++c) {
        for (int k = 0; k < 3; ++k) out[3 * c + k] = f(mesh.vertex(mesh.triangle(c)[k]), t)[0];
      }
      break;
    case ElementKind::P1BubbleVector: {
      for (int v = 0; v < nv; ++v) {
        const FieldValue val = f(mesh.vertex(v), t);
        out[v] = val[0];
        out[nv + v] = val[1];
      }
      for (int c = 0; c < nt; ++c) {
        const FieldValue centre = f(mesh.triangle_centroid(c), t);
        const auto& tri = mesh.triangle(c);
        for (int comp = 0; comp < 2; ++comp) {
          const double linear =
              (out[comp * nv + tri[0]] + out[comp * nv + tri[1]] + out[comp * nv + tri[2]]) / 3.0;
          out[2 * nv + comp * nt + c] = centre[comp] - linear;
        }
      }
      break;
    }
    case ElementKind::RT0:
      for (int e = 0; e < ne; ++e) out[e] = edge_moments(mesh, e, f, t, 1, 1)[0];
      break;
    case ElementKind::BDM1Tensor:
      for (int e = 0; e < ne; ++e) {
        const auto m = edge_moments(mesh, e, f, t, 2, 2);
        for (int row = 0; row < 2; ++row) {
          out[row * 2 * ne + 2 * e] = m[2 * row];
          out[row * 2 * ne + 2 * e + 1] = m[2 * row + 1];
        }
      }
      break;
    case ElementKind::EdgeP0: {
      const auto& gauss = quadrature_rule(CellKind::Segment, 7);
      const auto& trace = dofmap.trace();
      for (int j = 0; j < dofmap.num_cells(); ++j) {
        const auto& seg = trace.segments[j];
        double sum = 0.0;
        for (std::size_t q = 0; q < gauss.size(); ++q) {
          const double x = seg.xa + gauss.points[q].x() * seg.length();
          sum += gauss.weights[q] * f(Point(x, trace.y), t)[0];
        }
        out[j] = sum;
      }
      break;
    }
    case ElementKind::EdgeP1DiscVector: {
      const auto& trace = dofmap.trace();
      const int ng = dofmap.num_cells();
      for (int j = 0; j < ng; ++j) {
        const auto& seg = trace.segments[j];
        for (int node = 0; node < 2; ++node) {
          const FieldValue val = f(Point(node == 0 ? seg.xa : seg.xb, trace.y), t);
          out[2 * j + node] = val[0];
          out[2 * ng + 2 * j + node] = val[1];
        }
      }
      break;
    }
  }
  return out;
}

FieldValue evaluate(const Mesh& mesh, const DofMap& dofmap, const Eigen::VectorXd& coeffs,
                    int cell, const Vec2& xhat) {
  const auto& spec = dofmap.spec();
  const auto dofs = dofmap.cell_dofs(cell);
  FieldValue out = FieldValue::Zero();
  switch (spec.kind) {
    case ElementKind::P0:
      out[0] = coeffs[dofs[0]];
      break;
    case ElementKind::P0Vector:
      out[0] = coeffs[dofs[0]];
      out[1] = coeffs[dofs[1]];
      break;
    case ElementKind::P1:
    case ElementKind::P1Disc: {
      const auto basis = eval_lagrange_basis(LagrangeKind::P1, xhat);
      for (int k = 0; k < 3; ++k) out[0] += coeffs[dofs[k]] * basis.value[k];
      break;
    }
    case ElementKind::P1BubbleVector: {
      const auto basis = eval_lagrange_basis(LagrangeKind::P1Bubble, xhat);
      for (int c = 0; c < 2; ++c) {
        for (int k = 0; k < 4; ++k) out[c] += coeffs[dofs[4 * c + k]] * basis.value[k];
      }
      break;
    }
    case ElementKind::RT0:
    case ElementKind::BDM1Tensor: {
      const bool rt = spec.kind == ElementKind::RT0;
      const HdivKind hk = rt ? HdivKind::RT0 : HdivKind::BDM1;
      const auto basis =
          eval_hdiv_global(hk, GeometryMap::of(mesh, cell), dofmap.orientation(cell), xhat);
      const int rows = rt ? 1 : 2;
      for (int r = 0; r < rows; ++r) {
        for (int k = 0; k < basis.size; ++k) {
          const double c = coeffs[dofs[r * basis.size + k]];
          out[2 * r] += c * basis.value[k].x();
          out[2 * r + 1] += c * basis.value[k].y();
        }
      }
      break;
    }
    case ElementKind::EdgeP0:
    case ElementKind::EdgeP1DiscVector:
      throw std::invalid_argument("use evaluate_on_edge for interface fields");
  }
  return out;
}

FieldValue evaluate_gradient(const Mesh& mesh, const DofMap& dofmap, const Eigen::VectorXd& coeffs,
                             int cell, const Vec2& xhat) {
  const auto& spec = dofmap.spec();
  const auto dofs = dofmap.cell_dofs(cell);
  const Mat2 jt = GeometryMap::of(mesh, cell).inv_transpose;
  FieldValue out = FieldValue::Zero();
  switch (spec.kind) {
    case ElementKind::P0:
    case ElementKind::P0Vector:
      break;
    case ElementKind::P1:
    case ElementKind::P1Disc: {
      const auto basis = eval_lagrange_basis(LagrangeKind::P1, xhat);
      for (int k = 0; k < 3; ++k) out.head<2>() += coeffs[dofs[k]] * (jt * basis.grad[k]);
      break;
    }
    case ElementKind::P1BubbleVector: {
      const auto basis = eval_lagrange_basis(LagrangeKind::P1Bubble, xhat);
      for (int c = 0; c < 2; ++c) {
        for (int k = 0; k < 4; ++k) {
          out.segment<2>(2 * c) += coeffs[dofs[4 * c + k]] * (jt * basis.grad[k]);
        }
      }
      break;
    }
    default:
      throw std::invalid_argument("gradient defined for Lagrange spaces only");
  }
  return out;
}

FieldValue evaluate_divergence(const Mesh& mesh, const DofMap& dofmap,
                               const Eigen::VectorXd& coeffs, int cell, const Vec2& xhat) {
  const auto& spec = dofmap.spec();
  if (spec.kind != ElementKind::RT0 && spec.kind != ElementKind::BDM1Tensor) {
    throw std::invalid_argument("divergence defined for H(div) spaces only");
  }
  const bool rt = spec.kind == ElementKind::RT0;
  const auto dofs = dofmap.cell_dofs(cell);
  const auto basis = eval_hdiv_global(rt ? HdivKind::RT0 : HdivKind::BDM1,
                                      GeometryMap::of(mesh, cell), dofmap.orientation(cell), xhat);
  FieldValue out = FieldValue::Zero();
  for (int r = 0; r < (rt ? 1 : 2); ++r) {
    for (int k = 0; k < basis.size; ++k) out[r] += coeffs[dofs[r * basis.size + k]] * basis.div[k];
  }
  return out;
}

FieldValue evaluate_on_edge(const DofMap& dofmap, const Eigen::VectorXd& coeffs, int cell,
                            double x) {
  const auto dofs = dofmap.cell_dofs(cell);
  FieldValue out = FieldValue::Zero();
  if (dofmap.spec().kind == ElementKind::EdgeP0) {
    out[0] = coeffs[dofs[0]];
    return out;
  }
  if (dofmap.spec().kind != ElementKind::EdgeP1DiscVector) {
    throw std::invalid_argument("evaluate_on_edge needs an interface space");
  }
  const auto& seg = dofmap.trace().segments[cell];
  const double s = (x - seg.xa) / seg.length();
  for (int c = 0; c < 2; ++c) {
    out[c] = (1.0 - s) * coeffs[dofs[2 * c]] + s * coeffs[dofs[2 * c + 1]];
  }
  return out;
}

}  // namespace stokes_biot
