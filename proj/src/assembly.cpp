/**
 * @file assembly.cpp
 */
#include "stokes_biot/assembly.hpp"

#include "stokes_biot/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace stokes_biot {

namespace {
int g_threads = -1;
}

int assembly_threads() {
  if (g_threads < 0) {
    g_threads = 1;
    if (const char* env = std::getenv("SOLVER_THREADS")) {
      const int n = std::atoi(env);
      if (n > 0) g_threads = n;
    }
  }
  return g_threads;
}

void set_assembly_threads(int threads) { g_threads = threads > 0 ? threads : 1; }

void PhysicalParams::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument(what); };
  if (!(mu > 0)) fail("mu must be positive");
  if (!(alpha > 0 && alpha <= 1)) fail("alpha must lie in (0, 1]");
  if (!(alpha_bjs >= 0)) fail("alpha_bjs must be non-negative");
  if (!(s0 >= 0)) fail("s0 must be non-negative");
  if (!(lambda_p > 0)) fail("lambda_p must be positive");
  if (!(mu_p > 0)) fail("mu_p must be positive");
  if (std::abs(K(0, 1) - K(1, 0)) > 1e-14 * K.norm()) fail("K must be symmetric");
  Eigen::SelfAdjointEigenSolver<Mat2> eig(K);
  if (!(eig.eigenvalues().minCoeff() > 0)) fail("K must be positive definite");
}

Mat2 PhysicalParams::compliance(const Mat2& tau) const {
  const double c = lambda_p / (2.0 * mu_p + 2.0 * lambda_p);
  return (tau - c * tau.trace() * Mat2::Identity()) / (2.0 * mu_p);
}

double PhysicalParams::bjs_coefficient() const {
  return mu * alpha_bjs / std::sqrt(K(0, 0));
}

Vec2 reference_point(const Mesh& mesh, int tri, const Point& x) {
  return GeometryMap::of(mesh, tri).to_reference(x);
}

namespace {

const QuadratureRule& volume_rule() {
  return quadrature_rule(CellKind::Triangle, kVolumeQuadratureDegree);
}

auto dofs_of(const DofMap& map) {
  return [&map](int cell) { return map.cell_dofs(cell); };
}

// Tensor basis e_row (x) phi as a matrix.
Mat2 row_tensor(int row, const Vec2& phi) {
  Mat2 m = Mat2::Zero();
  m.row(row) = phi.transpose();
  return m;
}

double frobenius(const Mat2& a, const Mat2& b) { return (a.array() * b.array()).sum(); }

}  // namespace

SparseOperator assemble_af(const Mesh& fluid, const DofMap& uf, double mu, ExecPolicy policy) {
  const auto& rule = volume_rule();
  auto kernel = [&](int t, Eigen::Ref<Eigen::MatrixXd> local) {
    const GeometryMap map = GeometryMap::of(fluid, t);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto basis = eval_lagrange_basis(LagrangeKind::P1Bubble, rule.points[q]);
      const double w = rule.weights[q] * map.det;
      std::array<Vec2, 4> g;
      for (int k = 0; k < 4; ++k) g[k] = map.inv_transpose * basis.grad[k];
      // D(e_c g) : D(e_d h) = (delta_cd g.h + g_d h_c) / 2
      for (int c = 0; c < 2; ++c) {
        for (int k = 0; k < 4; ++k) {
          for (int d = 0; d < 2; ++d) {
            for (int l = 0; l < 4; ++l) {
              const double dd = (c == d ? g[k].dot(g[l]) : 0.0) + g[k][d] * g[l][c];
              local(4 * c + k, 4 * d + l) += w * mu * dd;
            }
          }
        }
      }
    }
  };
  return {Field::Uf, Field::Uf,
          assemble_cells(fluid.num_triangles(), uf.num_dofs(), uf.num_dofs(), 8, 8, dofs_of(uf),
                         dofs_of(uf), kernel, policy)};
}

SparseOperator assemble_bf(const Mesh& fluid, const DofMap& uf, const DofMap& pf,
                           ExecPolicy policy) {
  const auto& rule = volume_rule();
  auto kernel = [&](int t, Eigen::Ref<Eigen::MatrixXd> local) {
    const GeometryMap map = GeometryMap::of(fluid, t);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto vel = eval_lagrange_basis(LagrangeKind::P1Bubble, rule.points[q]);
      const auto pre = eval_lagrange_basis(LagrangeKind::P1, rule.points[q]);
      const double w = rule.weights[q] * map.det;
      for (int k = 0; k < 4; ++k) {
        const Vec2 g = map.inv_transpose * vel.grad[k];
        for (int c = 0; c < 2; ++c) {
          for (int j = 0; j < 3; ++j) local(j, 4 * c + k) -= w * g[c] * pre.value[j];
        }
      }
    }
  };
  return {Field::Pf, Field::Uf,
          assemble_cells(fluid.num_triangles(), pf.num_dofs(), uf.num_dofs(), 3, 8, dofs_of(pf),
                         dofs_of(uf), kernel, policy)};
}

SparseOperator assemble_ap(const Mesh& poro, const DofMap& up, double mu, const Mat2& K,
                           ExecPolicy policy) {
  Eigen::SelfAdjointEigenSolver<Mat2> eig(K);
  if (std::abs(K(0, 1) - K(1, 0)) > 1e-14 * K.norm() || !(eig.eigenvalues().minCoeff() > 0)) {
    throw std::invalid_argument("permeability must be symmetric positive definite");
  }
  const Mat2 kinv = mu * K.inverse();
  const auto& rule = volume_rule();
  auto kernel = [&](int t, Eigen::Ref<Eigen::MatrixXd> local) {
    const GeometryMap map = GeometryMap::of(poro, t);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto phi = eval_hdiv_global(HdivKind::RT0, map, up.orientation(t), rule.points[q]);
      const double w = rule.weights[q] * map.det;
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) local(i, j) += w * phi.value[i].dot(kinv * phi.value[j]);
      }
    }
  };
  return {Field::Up, Field::Up,
          assemble_cells(poro.num_triangles(), up.num_dofs(), up.num_dofs(), 3, 3, dofs_of(up),
                         dofs_of(up), kernel, policy)};
}

SparseOperator assemble_bp(const Mesh& poro, const DofMap& up, const DofMap& pp,
                           ExecPolicy policy) {
  const auto& rule = volume_rule();
  auto kernel = [&](int t, Eigen::Ref<Eigen::MatrixXd> local) {
    const GeometryMap map = GeometryMap::of(poro, t);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto phi = eval_hdiv_global(HdivKind::RT0, map, up.orientation(t), rule.points[q]);
      const double w = rule.weights[q] * map.det;
      for (int j = 0; j < 3; ++j) local(0, j) -= w * phi.div[j];
    }
  };
  return {Field::Pp, Field::Up,
          assemble_cells(poro.num_triangles(), pp.num_dofs(), up.num_dofs(), 1, 3, dofs_of(pp),
                         dofs_of(up), kernel, policy)};
}

ElasticStorageBlocks assemble_ae_app(const Mesh& poro, const DofMap& sigma, const DofMap& pp,
                                     const PhysicalParams& params, ExecPolicy policy) {
  const auto& rule = volume_rule();
  const int nt = poro.num_triangles();
  const Mat2 aI = params.compliance(params.alpha * Mat2::Identity());

  auto tensor_basis = [&](int t, const GeometryMap& map, std::size_t q) {
    const auto phi = eval_hdiv_global(HdivKind::BDM1, map, sigma.orientation(t), rule.points[q]);
    std::array<Mat2, 12> tau;
    for (int r = 0; r < 2; ++r) {
      for (int k = 0; k < 6; ++k) tau[6 * r + k] = row_tensor(r, phi.value[k]);
    }
    return tau;
  };

  auto ss_kernel = [&](int t, Eigen::Ref<Eigen::MatrixXd> local) {
    const GeometryMap map = GeometryMap::of(poro, t);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto tau = tensor_basis(t, map, q);
      const double w = rule.weights[q] * map.det;
      for (int j = 0; j < 12; ++j) {
        const Mat2 a = params.compliance(tau[j]);
        for (int i = 0; i < 12; ++i) local(i, j) += w * frobenius(a, tau[i]);
      }
    }
  };
  auto sp_kernel = [&](int t, Eigen::Ref<Eigen::MatrixXd> local) {
    const GeometryMap map = GeometryMap::of(poro, t);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto tau = tensor_basis(t, map, q);
      const double w = rule.weights[q] * map.det;
      for (int i = 0; i < 12; ++i) local(i, 0) += w * frobenius(aI, tau[i]);
    }
  };
  auto ps_kernel = [&](int t, Eigen::Ref<Eigen::MatrixXd> local) {
    const GeometryMap map = GeometryMap::of(poro, t);
    const Mat2 alphaI = params.alpha * Mat2::Identity();
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto tau = tensor_basis(t, map, q);
      const double w = rule.weights[q] * map.det;
      for (int j = 0; j < 12; ++j) local(0, j) += w * frobenius(params.compliance(tau[j]), alphaI);
    }
  };
  auto pp_kernel = [&](int t, Eigen::Ref<Eigen::MatrixXd> local) {
    const double area = poro.signed_area(t);
    local(0, 0) = area * (frobenius(aI, params.alpha * Mat2::Identity()) + params.s0);
  };

  const int ns = sigma.num_dofs(), np = pp.num_dofs();
  ElasticStorageBlocks out;
  out.ss = {Field::SigmaP, Field::SigmaP,
            assemble_cells(nt, ns, ns, 12, 12, dofs_of(sigma), dofs_of(sigma), ss_kernel, policy)};
  out.sp = {Field::SigmaP, Field::Pp,
            assemble_cells(nt, ns, np, 12, 1, dofs_of(sigma), dofs_of(pp), sp_kernel, policy)};
  out.ps = {Field::Pp, Field::SigmaP,
            assemble_cells(nt, np, ns, 1, 12, dofs_of(pp), dofs_of(sigma), ps_kernel, policy)};
  out.pp = {Field::Pp, Field::Pp,
            assemble_cells(nt, np, np, 1, 1, dofs_of(pp), dofs_of(pp), pp_kernel, policy)};
  return out;
}

StressCouplingBlocks assemble_bs_bsk(const Mesh& poro, const DofMap& sigma, const DofMap& us,
                                     const DofMap& gamma, ExecPolicy policy) {
  const auto& rule = volume_rule();
  const int nt = poro.num_triangles();
  const bool disc = gamma.spec().kind == ElementKind::P1Disc;
  if (!disc && gamma.spec().kind != ElementKind::P1) {
    throw std::invalid_argument("rotation space must be P1 or discontinuous P1");
  }

  auto bs_kernel = [&](int t, Eigen::Ref<Eigen::MatrixXd> local) {
    const GeometryMap map = GeometryMap::of(poro, t);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto phi = eval_hdiv_global(HdivKind::BDM1, map, sigma.orientation(t), rule.points[q]);
      const double w = rule.weights[q] * map.det;
      for (int r = 0; r < 2; ++r) {
        for (int k = 0; k < 6; ++k) local(r, 6 * r + k) += w * phi.div[k];
      }
    }
  };
  // tau : [[0, r], [-r, 0]] = r (tau_12 - tau_21)
  auto bsk_kernel = [&](int t, Eigen::Ref<Eigen::MatrixXd> local) {
    const GeometryMap map = GeometryMap::of(poro, t);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto phi = eval_hdiv_global(HdivKind::BDM1, map, sigma.orientation(t), rule.points[q]);
      const auto rot = eval_lagrange_basis(LagrangeKind::P1, rule.points[q]);
      const double w = rule.weights[q] * map.det;
      for (int i = 0; i < 3; ++i) {
        for (int k = 0; k < 6; ++k) {
          local(i, k) += w * rot.value[i] * phi.value[k].y();
          local(i, 6 + k) -= w * rot.value[i] * phi.value[k].x();
        }
      }
    }
  };

  StressCouplingBlocks out;
  out.bs = {Field::Us, Field::SigmaP,
            assemble_cells(nt, us.num_dofs(), sigma.num_dofs(), 2, 12, dofs_of(us),
                           dofs_of(sigma), bs_kernel, policy)};
  out.bsk = {Field::GammaP, Field::SigmaP,
             assemble_cells(nt, gamma.num_dofs(), sigma.num_dofs(), 3, 12, dofs_of(gamma),
                            dofs_of(sigma), bsk_kernel, policy)};
  return out;
}

InterfaceBlocks assemble_interface(const MergedTrace& trace, const Mesh& fluid,
                                   const Mesh& poro, const DofMap& uf, const DofMap& up,
                                   const DofMap& sigma, const DofMap& theta,
                                   const DofMap& lambda, const PhysicalParams& params,
                                   int quadrature_degree) {
  if (theta.num_cells() != static_cast<int>(trace.poro.segments.size()) ||
      lambda.num_cells() != theta.num_cells()) {
    throw std::invalid_argument("multiplier spaces do not match the poro trace");
  }
  const auto& gauss = quadrature_rule(CellKind::Segment, quadrature_degree);
  const double beta = params.bjs_coefficient();
  const Vec2 n_p(0.0, 1.0);

  Triplets bnp, ff, sf, ss, gf, gs, gp;
  for (const auto& seg : trace.segments) {
    if (seg.fluid_segment < 0 || seg.poro_segment < 0) {
      throw std::invalid_argument("merged interface segment without an owner");
    }
    const auto& fseg = trace.fluid.segments[seg.fluid_segment];
    const auto& pseg = trace.poro.segments[seg.poro_segment];
    const int ft = fseg.triangle, pt = pseg.triangle;
    const int j = seg.poro_segment;
    const GeometryMap fmap = GeometryMap::of(fluid, ft);
    const GeometryMap pmap = GeometryMap::of(poro, pt);
    const auto fdofs = uf.cell_dofs(ft);
    const auto udofs = up.cell_dofs(pt);
    const auto sdofs = sigma.cell_dofs(pt);
    const auto tdofs = theta.cell_dofs(j);
    const int xi = lambda.cell_dofs(j)[0];

    for (std::size_t q = 0; q < gauss.size(); ++q) {
      const double x = seg.xa + gauss.points[q].x() * seg.length();
      const double w = gauss.weights[q] * seg.length();
      const Point pt_f(x, trace.fluid.y), pt_p(x, trace.poro.y);

      const auto vf = eval_lagrange_basis(LagrangeKind::P1Bubble, fmap.to_reference(pt_f));
      const auto rt = eval_hdiv_global(HdivKind::RT0, pmap, up.orientation(pt),
                                       pmap.to_reference(pt_p));
      const auto bdm = eval_hdiv_global(HdivKind::BDM1, pmap, sigma.orientation(pt),
                                        pmap.to_reference(pt_p));
      const double s = (x - pseg.xa) / pseg.length();
      const std::array<double, 2> node{1.0 - s, s};

      for (int k = 0; k < 4; ++k) {
        // v_f . n_f with n_f = (0, -1): only the second component.
        gf.emplace_back(xi, fdofs[4 + k], -w * vf.value[k]);
        for (int l = 0; l < 4; ++l) {
          ff.emplace_back(fdofs[k], fdofs[l], w * beta * vf.value[k] * vf.value[l]);
        }
        for (int a = 0; a < 2; ++a) {
          sf.emplace_back(tdofs[a], fdofs[k], -w * beta * node[a] * vf.value[k]);
        }
      }
      for (int a = 0; a < 2; ++a) {
        gs.emplace_back(xi, tdofs[2 + a], w * node[a]);
        for (int b = 0; b < 2; ++b) ss.emplace_back(tdofs[a], tdofs[b], w * beta * node[a] * node[b]);
      }
      for (int k = 0; k < 3; ++k) gp.emplace_back(xi, udofs[k], w * rt.value[k].dot(n_p));
      // (tau n_p) . phi for tau = e_r (x) psi: row r of tau n_p pairs with component r of phi.
      for (int r = 0; r < 2; ++r) {
        for (int k = 0; k < 6; ++k) {
          const double flux = bdm.value[k].dot(n_p);
          for (int a = 0; a < 2; ++a) {
            bnp.emplace_back(tdofs[2 * r + a], sdofs[6 * r + k], w * flux * node[a]);
          }
        }
      }
    }
  }

  auto build = [](Field rf, Field cf, int rows, int cols, const Triplets& t) {
    SparseOperator op{rf, cf, Eigen::SparseMatrix<double>(rows, cols)};
    op.matrix.setFromTriplets(t.begin(), t.end());
    return op;
  };
  const int nu = uf.num_dofs(), nth = theta.num_dofs(), nl = lambda.num_dofs();
  InterfaceBlocks out;
  out.bnp = build(Field::Theta, Field::SigmaP, nth, sigma.num_dofs(), bnp);
  out.bjs_ff = build(Field::Uf, Field::Uf, nu, nu, ff);
  out.bjs_sf = build(Field::Theta, Field::Uf, nth, nu, sf);
  out.bjs_ss = build(Field::Theta, Field::Theta, nth, nth, ss);
  out.bgf = build(Field::Lambda, Field::Uf, nl, nu, gf);
  out.bgs = build(Field::Lambda, Field::Theta, nl, nth, gs);
  out.bgp = build(Field::Lambda, Field::Up, nl, up.num_dofs(), gp);
  return out;
}

Eigen::VectorXd assemble_load(const Mesh& mesh, const DofMap& dofmap, const AnalyticField& f,
                              double t) {
  const auto& rule = volume_rule();
  const auto& spec = dofmap.spec();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dofmap.num_dofs());
  for (int c = 0; c < mesh.num_triangles(); ++c) {
    const GeometryMap map = GeometryMap::of(mesh, c);
    const auto dofs = dofmap.cell_dofs(c);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double w = rule.weights[q] * map.det;
      const FieldValue val = f(map.to_physical(rule.points[q]), t);
      switch (spec.kind) {
        case ElementKind::P0:
          out[dofs[0]] += w * val[0];
          break;
        case ElementKind::P0Vector:
          out[dofs[0]] += w * val[0];
          out[dofs[1]] += w * val[1];
          break;
        case ElementKind::P1:
        case ElementKind::P1Disc: {
          const auto b = eval_lagrange_basis(LagrangeKind::P1, rule.points[q]);
          for (int k = 0; k < 3; ++k) out[dofs[k]] += w * val[0] * b.value[k];
          break;
        }
        case ElementKind::P1BubbleVector: {
          const auto b = eval_lagrange_basis(LagrangeKind::P1Bubble, rule.points[q]);
          for (int comp = 0; comp < 2; ++comp) {
            for (int k = 0; k < 4; ++k) out[dofs[4 * comp + k]] += w * val[comp] * b.value[k];
          }
          break;
        }
        default:
          throw std::invalid_argument("volume load not defined for this space");
      }
    }
  }
  return out;
}

namespace {

template <class Visit>
void for_each_boundary_point(const Mesh& mesh, const std::vector<BoundaryTag>& tags,
                             Visit&& visit) {
  const auto& gauss = quadrature_rule(CellKind::Segment, 7);
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (std::find(tags.begin(), tags.end(), mesh.edge_tag(e)) == tags.end()) continue;
    const int tri = mesh.edge_triangles(e)[0];
    int k = 0;
    while (mesh.triangle_edge(tri, k) != e) ++k;
    const Point n_out = mesh.edge_sign(tri, k) * mesh.edge_normal(e);
    const GeometryMap map = GeometryMap::of(mesh, tri);
    const Point& a = mesh.vertex(mesh.edge(e).v[0]);
    const Point& b = mesh.vertex(mesh.edge(e).v[1]);
    const double len = mesh.edge_length(e);
    for (std::size_t q = 0; q < gauss.size(); ++q) {
      const Point x = a + gauss.points[q].x() * (b - a);
      visit(tri, map, map.to_reference(x), x, n_out, gauss.weights[q] * len);
    }
  }
}

}  // namespace

Eigen::VectorXd assemble_pressure_boundary_load(const Mesh& poro, const DofMap& up,
                                                const std::vector<BoundaryTag>& tags,
                                                const AnalyticField& g, double t) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(up.num_dofs());
  for_each_boundary_point(poro, tags, [&](int tri, const GeometryMap& map, const Vec2& xhat,
                                          const Point& x, const Point& n, double w) {
    const auto phi = eval_hdiv_global(HdivKind::RT0, map, up.orientation(tri), xhat);
    const double gv = g(x, t)[0];
    const auto dofs = up.cell_dofs(tri);
    for (int k = 0; k < 3; ++k) out[dofs[k]] -= w * phi.value[k].dot(n) * gv;
  });
  return out;
}

Eigen::VectorXd assemble_velocity_boundary_load(const Mesh& poro, const DofMap& sigma,
                                                const std::vector<BoundaryTag>& tags,
                                                const AnalyticField& g, double t) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(sigma.num_dofs());
  for_each_boundary_point(poro, tags, [&](int tri, const GeometryMap& map, const Vec2& xhat,
                                          const Point& x, const Point& n, double w) {
    const auto phi = eval_hdiv_global(HdivKind::BDM1, map, sigma.orientation(tri), xhat);
    const FieldValue gv = g(x, t);
    const auto dofs = sigma.cell_dofs(tri);
    for (int r = 0; r < 2; ++r) {
      for (int k = 0; k < 6; ++k) out[dofs[6 * r + k]] += w * phi.value[k].dot(n) * gv[r];
    }
  });
  return out;
}

}  // namespace stokes_biot
