#include "stokes_biot/assembly.hpp"

#include "oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace stokes_biot;

namespace {

constexpr double kTol = 1e-12;

const SideTags kFluidTags{BoundaryTag::Interface, BoundaryTag::FluidRight, BoundaryTag::FluidTop,
                          BoundaryTag::FluidLeft};
const SideTags kPoroTags{BoundaryTag::PoroBottom, BoundaryTag::PoroRight, BoundaryTag::Interface,
                         BoundaryTag::PoroLeft};

DofMap space(const Mesh& m, Field f) { return build_dofmap(m, SpaceSpec::standard(f)); }

// Eight triangles, stretched so that no entry is accidentally symmetric.
Mesh small_fluid() { return build_rect_mesh({0, 1.5, 0, 0.7}, 2, 2, kFluidTags); }
Mesh small_poro() { return build_rect_mesh({0, 1.5, -0.9, 0}, 2, 2, kPoroTags); }

PhysicalParams skewed_params() {
  PhysicalParams p;
  p.mu = 1.7;
  p.K << 2.0, 0.3, 0.3, 0.5;
  p.alpha = 0.8;
  p.alpha_bjs = 1.3;
  p.s0 = 0.25;
  p.lambda_p = 3.0;
  p.mu_p = 0.6;
  return p;
}

}  // namespace

TEST(Oracle, StokesForms) {
  const Mesh m = small_fluid();
  const DofMap uf = space(m, Field::Uf), pf = space(m, Field::Pf);
  EXPECT_LT(oracle::max_abs_diff(assemble_af(m, uf, 1.7).matrix, oracle::af(m, uf, 1.7)), kTol);
  EXPECT_LT(oracle::max_abs_diff(assemble_bf(m, uf, pf).matrix, oracle::bf(m, uf, pf)), kTol);
}

TEST(Oracle, DarcyForms) {
  const Mesh m = small_poro();
  const PhysicalParams p = skewed_params();
  const DofMap up = space(m, Field::Up), pp = space(m, Field::Pp);
  EXPECT_LT(oracle::max_abs_diff(assemble_ap(m, up, p.mu, p.K).matrix,
                                 oracle::ap(m, up, p.mu, p.K)),
            kTol);
  EXPECT_LT(oracle::max_abs_diff(assemble_bp(m, up, pp).matrix, oracle::bp(m, up, pp)), kTol);
}

TEST(Oracle, ElasticAndStorageForms) {
  const Mesh m = small_poro();
  const PhysicalParams p = skewed_params();
  const DofMap sigma = space(m, Field::SigmaP), pp = space(m, Field::Pp);
  const auto got = assemble_ae_app(m, sigma, pp, p);
  const auto want = oracle::elastic(m, sigma, pp, p);
  EXPECT_LT(oracle::max_abs_diff(got.ss.matrix, want.ss), kTol);
  EXPECT_LT(oracle::max_abs_diff(got.sp.matrix, want.sp), kTol);
  EXPECT_LT(oracle::max_abs_diff(got.ps.matrix, want.ps), kTol);
  EXPECT_LT(oracle::max_abs_diff(got.pp.matrix, want.pp), kTol);
}

TEST(Oracle, StressCouplingForms) {
  const Mesh m = small_poro();
  const DofMap sigma = space(m, Field::SigmaP), us = space(m, Field::Us);
  for (ElementKind kind : {ElementKind::P1, ElementKind::P1Disc}) {
    const DofMap gamma = build_dofmap(m, {Field::GammaP, kind, 1, Side::Poro, false});
    const auto got = assemble_bs_bsk(m, sigma, us, gamma);
    const auto want = oracle::stress(m, sigma, us, gamma);
    EXPECT_LT(oracle::max_abs_diff(got.bs.matrix, want.bs), kTol);
    EXPECT_LT(oracle::max_abs_diff(got.bsk.matrix, want.bsk), kTol);
  }
}

TEST(Oracle, InterfaceFormsMatchingAndNonMatching) {
  const PhysicalParams p = skewed_params();
  for (auto [nf, np] : {std::pair{2, 2}, std::pair{2, 3}, std::pair{4, 1}}) {
    const Mesh fluid = build_rect_mesh({0, 1.5, 0, 0.7}, nf, 1, kFluidTags);
    const Mesh poro = build_rect_mesh({0, 1.5, -0.9, 0}, np, 1, kPoroTags);
    const DofMap uf = space(fluid, Field::Uf), up = space(poro, Field::Up),
                 sigma = space(poro, Field::SigmaP), theta = space(poro, Field::Theta),
                 lambda = space(poro, Field::Lambda);
    const MergedTrace tr = merge_traces(extract_interface_trace(fluid, Side::Fluid),
                                        extract_interface_trace(poro, Side::Poro));
    const auto got = assemble_interface(tr, fluid, poro, uf, up, sigma, theta, lambda, p);
    const auto want = oracle::interface(fluid, poro, uf, up, sigma, theta, lambda, p);
    EXPECT_LT(oracle::max_abs_diff(got.bnp.matrix, want.bnp), kTol) << nf << "/" << np;
    EXPECT_LT(oracle::max_abs_diff(got.bjs_ff.matrix, want.ff), kTol) << nf << "/" << np;
    EXPECT_LT(oracle::max_abs_diff(got.bjs_sf.matrix, want.sf), kTol) << nf << "/" << np;
    EXPECT_LT(oracle::max_abs_diff(got.bjs_ss.matrix, want.ss), kTol) << nf << "/" << np;
    EXPECT_LT(oracle::max_abs_diff(got.bgf.matrix, want.gf), kTol) << nf << "/" << np;
    EXPECT_LT(oracle::max_abs_diff(got.bgs.matrix, want.gs), kTol) << nf << "/" << np;
    EXPECT_LT(oracle::max_abs_diff(got.bgp.matrix, want.gp), kTol) << nf << "/" << np;
  }
}

TEST(Oracle, LoadVectors) {
  const Mesh m = small_poro();
  auto f = [](const Point& x, double t) {
    return FieldValue(std::sin(x.x()) + t, x.y() * x.x(), 0, 0);
  };
  for (Field fld : {Field::Pp, Field::Us}) {
    const DofMap s = space(m, fld);
    const Eigen::VectorXd got = assemble_load(m, s, f, 0.3);
    for (int i = 0; i < s.num_dofs(); ++i) {
      const Eigen::VectorXd e = oracle::unit(s.num_dofs(), i);
      const double want = oracle::integrate(m, [&](int t, const Vec2& xhat, const Point& x) {
        const FieldValue v = evaluate(m, s, e, t, xhat);
        const FieldValue g = f(x, 0.3);
        return g[0] * v[0] + g[1] * v[1];
      });
      // Quadrature error of the smooth load only.
      EXPECT_NEAR(got[i], want, 1e-6) << to_string(fld) << " " << i;
    }
  }
}

TEST(Oracle, BoundaryLoads) {
  const Mesh m = small_poro();
  const DofMap up = space(m, Field::Up), sigma = space(m, Field::SigmaP);
  auto g = [](const Point& x, double) { return FieldValue(1 + x.x(), 2 - x.y(), 0, 0); };
  const std::vector<BoundaryTag> tags{BoundaryTag::PoroLeft, BoundaryTag::PoroBottom};
  const Eigen::VectorXd lp = assemble_pressure_boundary_load(m, up, tags, g, 0.0);
  const Eigen::VectorXd lv = assemble_velocity_boundary_load(m, sigma, tags, g, 0.0);

  // Boundary integrals from the 4-point Gauss rule on each tagged edge.
  const double gs[4] = {0.069431844202974, 0.330009478207572, 0.669990521792428,
                        0.930568155797026};
  const double gw[4] = {0.173927422568727, 0.326072577431273, 0.326072577431273,
                        0.173927422568727};
  auto boundary = [&](const DofMap& s, auto&& integrand) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(s.num_dofs());
    for (int e = 0; e < m.num_edges(); ++e) {
      if (std::find(tags.begin(), tags.end(), m.edge_tag(e)) == tags.end()) continue;
      const int t = m.edge_triangles(e)[0];
      const Point a = m.vertex(m.edge(e).v[0]), b = m.vertex(m.edge(e).v[1]);
      Point n = m.edge_normal(e);
      if (n.dot(m.edge_midpoint(e) - m.triangle_centroid(t)) < 0) n = -n;
      for (int i = 0; i < s.num_dofs(); ++i) {
        const Eigen::VectorXd u = oracle::unit(s.num_dofs(), i);
        for (int q = 0; q < 4; ++q) {
          const Point x = a + gs[q] * (b - a);
          const FieldValue v = evaluate(m, s, u, t, GeometryMap::of(m, t).to_reference(x));
          out[i] += gw[q] * m.edge_length(e) * integrand(v, n, g(x, 0.0));
        }
      }
    }
    return out;
  };
  const Eigen::VectorXd wp = boundary(up, [](const FieldValue& v, const Point& n, const FieldValue& gv) {
    return -(v[0] * n.x() + v[1] * n.y()) * gv[0];
  });
  const Eigen::VectorXd wv = boundary(sigma, [](const FieldValue& v, const Point& n, const FieldValue& gv) {
    return (v[0] * n.x() + v[1] * n.y()) * gv[0] + (v[2] * n.x() + v[3] * n.y()) * gv[1];
  });
  EXPECT_LT((lp - wp).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((lv - wv).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Forms, StrainEnergyOfAPureShearField) {
  // u = (x, -y): D(u) = diag(1, -1), so (2 mu D u, D u) = 4 mu |Omega| = 2 for mu = 1/2.
  const Mesh m = build_rect_mesh({0, 1, 0, 1}, 3, 3, kFluidTags);
  const DofMap uf = space(m, Field::Uf);
  const Eigen::VectorXd u = interpolate(
      m, uf, [](const Point& x, double) { return FieldValue(x.x(), -x.y(), 0, 0); }, 0.0);
  const auto a = assemble_af(m, uf, 0.5).matrix;
  EXPECT_NEAR(u.dot(a * u), 2.0, 1e-12);
}

TEST(Forms, DivergenceOfAUnitExpansion) {
  // v = (x, 0), w = 1: b_f = -(1, 1) = -1 on the unit square.
  const Mesh m = build_rect_mesh({0, 1, 0, 1}, 2, 3, kFluidTags);
  const DofMap uf = space(m, Field::Uf), pf = space(m, Field::Pf);
  const Eigen::VectorXd v = interpolate(
      m, uf, [](const Point& x, double) { return FieldValue(x.x(), 0, 0, 0); }, 0.0);
  const Eigen::VectorXd w = Eigen::VectorXd::Ones(pf.num_dofs());
  EXPECT_NEAR(w.dot(assemble_bf(m, uf, pf).matrix * v), -1.0, 1e-12);

  const Mesh p = build_rect_mesh({0, 1, -1, 0}, 2, 3, kPoroTags);
  const DofMap up = space(p, Field::Up), pp = space(p, Field::Pp);
  const Eigen::VectorXd vp = interpolate(
      p, up, [](const Point& x, double) { return FieldValue(x.x(), 0, 0, 0); }, 0.0);
  EXPECT_NEAR(Eigen::VectorXd::Ones(pp.num_dofs()).dot(assemble_bp(p, up, pp).matrix * vp), -1.0,
              1e-12);
}

TEST(Forms, DarcyMatrixScalesWithInversePermeability) {
  const Mesh m = small_poro();
  const DofMap up = space(m, Field::Up);
  const auto a1 = assemble_ap(m, up, 1.0, Mat2::Identity()).matrix;
  const auto a2 = assemble_ap(m, up, 1.0, 1e-4 * Mat2::Identity()).matrix;
  EXPECT_LT((Eigen::MatrixXd(a2) - 1e4 * Eigen::MatrixXd(a1)).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_THROW(assemble_ap(m, up, 1.0, Mat2::Zero()), std::invalid_argument);
}

TEST(Forms, ComplianceIsIdentityWithoutVolumetricStiffness) {
  PhysicalParams p;
  p.lambda_p = 0.0;
  p.mu_p = 0.5;
  p.s0 = 2.0;
  p.alpha = 0.0;
  const Mesh m = small_poro();
  const DofMap sigma = space(m, Field::SigmaP), pp = space(m, Field::Pp);
  const auto blocks = assemble_ae_app(m, sigma, pp, p);
  // (A sigma, tau) becomes the plain L2 product.
  const Eigen::MatrixXd mass = Eigen::MatrixXd(blocks.ss.matrix);
  const auto tab = oracle::tabulate(m, sigma, false, false);
  const Eigen::MatrixXd l2 = oracle::volume_form(
      m, sigma.num_dofs(), sigma.num_dofs(), [&](int i, int j, int t, int q) {
        return tab.value[i][t][q].dot(tab.value[j][t][q]);
      });
  EXPECT_LT((mass - l2).cwiseAbs().maxCoeff(), 1e-12);
  // Storage block is s0 times the cell areas.
  const Eigen::MatrixXd st = Eigen::MatrixXd(blocks.pp.matrix);
  for (int t = 0; t < m.num_triangles(); ++t) {
    EXPECT_NEAR(st(t, t), 2.0 * m.signed_area(t), 1e-14);
  }
  EXPECT_NEAR((st - Eigen::MatrixXd(st.diagonal().asDiagonal())).norm(), 0.0, 1e-14);
}

TEST(Forms, SymmetryOfTheSelfAdjointBlocks) {
  const Mesh f = small_fluid();
  const Mesh m = small_poro();
  const PhysicalParams p = skewed_params();
  const DofMap uf = space(f, Field::Uf), up = space(m, Field::Up),
               sigma = space(m, Field::SigmaP), pp = space(m, Field::Pp);
  auto sym_err = [](const Eigen::SparseMatrix<double>& a) {
    return (Eigen::MatrixXd(a) - Eigen::MatrixXd(a).transpose()).cwiseAbs().maxCoeff();
  };
  EXPECT_LT(sym_err(assemble_af(f, uf, 2.0).matrix), 1e-13);
  EXPECT_LT(sym_err(assemble_ap(m, up, p.mu, p.K).matrix), 1e-13);
  const auto e = assemble_ae_app(m, sigma, pp, p);
  EXPECT_LT(sym_err(e.ss.matrix), 1e-13);
  EXPECT_LT(sym_err(e.pp.matrix), 1e-13);
  EXPECT_LT((Eigen::MatrixXd(e.sp.matrix) - Eigen::MatrixXd(e.ps.matrix).transpose())
                .cwiseAbs()
                .maxCoeff(),
            1e-13);
}

TEST(Params, ValidationNamesTheParameter) {
  PhysicalParams p;
  EXPECT_NO_THROW(p.validate());
  p.s0 = -1;
  try {
    p.validate();
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("s0"), std::string::npos);
  }
  p = PhysicalParams{};
  p.mu_p = 0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = PhysicalParams{};
  p.K << 1, 2, 2, 1;
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(Params, ComplianceBounds) {
  PhysicalParams p;
  p.lambda_p = 1e6;
  p.mu_p = 1.0;
  Mat2 dev;
  dev << 1, 0.5, 0.5, -1;
  // Deviatoric tensors see 1/(2 mu), spherical ones 1/(2 mu + 2 lambda).
  EXPECT_TRUE(p.compliance(dev).isApprox(dev / 2.0));
  EXPECT_TRUE(p.compliance(Mat2::Identity()).isApprox(Mat2::Identity() * p.a_min(), 1e-8));
  EXPECT_NEAR(p.a_max(), 0.5, 1e-15);
  EXPECT_NEAR(p.bjs_coefficient(), 1.0, 1e-15);
}

TEST(Parallel, SerialAndParallelAssemblyAreBitwiseEqual) {
  const Mesh m = build_rect_mesh({0, 1, -1, 0}, 12, 12, kPoroTags);
  const Mesh f = build_rect_mesh({0, 1, 0, 1}, 12, 12, kFluidTags);
  const PhysicalParams p = skewed_params();
  const DofMap sigma = space(m, Field::SigmaP), pp = space(m, Field::Pp), us = space(m, Field::Us),
               gamma = space(m, Field::GammaP), up = space(m, Field::Up), uf = space(f, Field::Uf),
               pf = space(f, Field::Pf);
  const int before = assembly_threads();
  set_assembly_threads(4);
  auto same = [](const Eigen::SparseMatrix<double>& a, const Eigen::SparseMatrix<double>& b) {
    if (a.nonZeros() != b.nonZeros()) return false;
    for (int k = 0; k <= a.outerSize(); ++k) {
      if (a.outerIndexPtr()[k] != b.outerIndexPtr()[k]) return false;
    }
    for (Eigen::Index k = 0; k < a.nonZeros(); ++k) {
      if (a.innerIndexPtr()[k] != b.innerIndexPtr()[k]) return false;
      if (a.valuePtr()[k] != b.valuePtr()[k]) return false;
    }
    return true;
  };
  const auto es = assemble_ae_app(m, sigma, pp, p, ExecPolicy::Serial);
  const auto ep = assemble_ae_app(m, sigma, pp, p, ExecPolicy::Parallel);
  EXPECT_TRUE(same(es.ss.matrix, ep.ss.matrix));
  EXPECT_TRUE(same(es.pp.matrix, ep.pp.matrix));
  const auto ss = assemble_bs_bsk(m, sigma, us, gamma, ExecPolicy::Serial);
  const auto sp = assemble_bs_bsk(m, sigma, us, gamma, ExecPolicy::Parallel);
  EXPECT_TRUE(same(ss.bs.matrix, sp.bs.matrix));
  EXPECT_TRUE(same(ss.bsk.matrix, sp.bsk.matrix));
  EXPECT_TRUE(same(assemble_af(f, uf, 1.3, ExecPolicy::Serial).matrix,
                   assemble_af(f, uf, 1.3, ExecPolicy::Parallel).matrix));
  EXPECT_TRUE(same(assemble_bf(f, uf, pf, ExecPolicy::Serial).matrix,
                   assemble_bf(f, uf, pf, ExecPolicy::Parallel).matrix));
  EXPECT_TRUE(same(assemble_ap(m, up, 1.0, p.K, ExecPolicy::Serial).matrix,
                   assemble_ap(m, up, 1.0, p.K, ExecPolicy::Parallel).matrix));
  set_assembly_threads(before);
}
