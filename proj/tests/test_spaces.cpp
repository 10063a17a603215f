#include "stokes_biot/spaces.hpp"

#include "oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace stokes_biot;

namespace {

const SideTags kFluidTags{BoundaryTag::Interface, BoundaryTag::FluidRight, BoundaryTag::FluidTop,
                          BoundaryTag::FluidLeft};
const SideTags kPoroTags{BoundaryTag::PoroBottom, BoundaryTag::PoroRight, BoundaryTag::Interface,
                         BoundaryTag::PoroLeft};

Mesh two_triangles() { return build_rect_mesh({0, 1, 0, 1}, 1, 1, kFluidTags); }

DofMap space(const Mesh& m, Field f) { return build_dofmap(m, SpaceSpec::standard(f)); }

Eigen::VectorXd random_vector(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1, 1);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}

// Discrete field as an analytic field, located by brute force.
AnalyticField as_field(const Mesh& m, const DofMap& s, const Eigen::VectorXd& c) {
  return [&m, &s, c](const Point& x, double) {
    const auto loc = oracle::locate(m, x);
    if (!loc) throw std::runtime_error("point outside mesh");
    return evaluate(m, s, c, loc->first, loc->second);
  };
}

}  // namespace

TEST(DofMap, CountsOnTwoTriangles) {
  const Mesh m = two_triangles();
  EXPECT_EQ(space(m, Field::Up).num_dofs(), 5);
  EXPECT_EQ(space(m, Field::Uf).num_dofs(), 12);
  EXPECT_EQ(space(m, Field::Pf).num_dofs(), 4);
  EXPECT_EQ(space(m, Field::Pp).num_dofs(), 2);
  EXPECT_EQ(space(m, Field::Us).num_dofs(), 4);
  EXPECT_EQ(space(m, Field::SigmaP).num_dofs(), 20);
  EXPECT_EQ(space(m, Field::GammaP).num_dofs(), 4);
  EXPECT_EQ(build_dofmap(m, {Field::GammaP, ElementKind::P1Disc, 1, Side::Poro, false}).num_dofs(),
            6);
}

TEST(DofMap, InterfaceSpacesFollowTheTrace) {
  const Mesh poro = build_rect_mesh({0, 1, -1, 0}, 5, 3, kPoroTags);
  const DofMap theta = space(poro, Field::Theta);
  const DofMap lambda = space(poro, Field::Lambda);
  EXPECT_EQ(theta.num_dofs(), 20);
  EXPECT_EQ(lambda.num_dofs(), 5);
  EXPECT_EQ(theta.num_cells(), 5);
  EXPECT_EQ(theta.local_size(), 4);
  for (int c = 1; c < 5; ++c) {
    EXPECT_LT(theta.trace().segments[c - 1].xa, theta.trace().segments[c].xa);
  }
  EXPECT_THROW(build_dofmap(poro, {Field::Lambda, ElementKind::EdgeP0, 1, Side::Poro, false}),
               std::invalid_argument);
  EXPECT_THROW(build_dofmap(poro, {Field::Pp, ElementKind::P0, 1, Side::Poro, true}),
               std::invalid_argument);
}

TEST(DofMap, EveryDofIsUsed) {
  const Mesh poro = build_rect_mesh({0, 1, -1, 0}, 3, 2, kPoroTags);
  for (Field f : kAllFields) {
    const DofMap s = space(poro, f);
    std::vector<int> seen(s.num_dofs(), 0);
    for (int c = 0; c < s.num_cells(); ++c) {
      for (int d : s.cell_dofs(c)) {
        ASSERT_GE(d, 0);
        ASSERT_LT(d, s.num_dofs());
        ++seen[d];
      }
    }
    for (int d = 0; d < s.num_dofs(); ++d) EXPECT_GT(seen[d], 0) << to_string(f) << " dof " << d;
  }
}

TEST(Essential, ParabolicInflowAtMidHeight) {
  const Mesh m = build_rect_mesh({0, 1, 0, 1}, 2, 2, kFluidTags);
  const DofMap uf = space(m, Field::Uf);
  const std::vector<EssentialBC> bcs{
      {Field::Uf, {BoundaryTag::FluidLeft}, [](const Point& x, double) {
         return FieldValue(-40 * x.y() * (x.y() - 1), 0, 0, 0);
       }}};
  const auto c = apply_essential_bcs(m, uf, bcs, 0.0);
  // Three vertices on the left side, two components each.
  EXPECT_EQ(c.values.size(), 6u);
  int mid = -1;
  for (int v = 0; v < m.num_vertices(); ++v) {
    if (m.vertex(v).isApprox(Point(0, 0.5))) mid = v;
  }
  ASSERT_GE(mid, 0);
  EXPECT_NEAR(c.values.at(mid), 10.0, 1e-14);
  EXPECT_NEAR(c.values.at(m.num_vertices() + mid), 0.0, 1e-14);
}

TEST(Essential, ConflictingCornerValuesThrow) {
  const Mesh m = build_rect_mesh({0, 1, 0, 1}, 2, 2, kFluidTags);
  const DofMap uf = space(m, Field::Uf);
  auto constant = [](double v) {
    return [v](const Point&, double) { return FieldValue(v, 0, 0, 0); };
  };
  const std::vector<EssentialBC> conflict{{Field::Uf, {BoundaryTag::FluidLeft}, constant(1.0)},
                                          {Field::Uf, {BoundaryTag::FluidTop}, constant(0.0)}};
  EXPECT_THROW(apply_essential_bcs(m, uf, conflict, 0.0), std::invalid_argument);
  const std::vector<EssentialBC> agree{{Field::Uf, {BoundaryTag::FluidLeft}, constant(1.0)},
                                       {Field::Uf, {BoundaryTag::FluidTop}, constant(1.0)}};
  EXPECT_NO_THROW(apply_essential_bcs(m, uf, agree, 0.0));
}

TEST(Essential, RejectedForFieldsWithoutTraces) {
  const Mesh m = build_rect_mesh({0, 1, -1, 0}, 2, 2, kPoroTags);
  const DofMap pp = space(m, Field::Pp);
  const std::vector<EssentialBC> bcs{{Field::Pp, {BoundaryTag::PoroBottom},
                                      [](const Point&, double) { return FieldValue::Zero().eval(); }}};
  EXPECT_THROW(apply_essential_bcs(m, pp, bcs, 0.0), std::invalid_argument);
}

TEST(Essential, FluxAndStressMomentsOnTaggedEdges) {
  const Mesh m = build_rect_mesh({0, 1, -1, 0}, 2, 2, kPoroTags);
  const DofMap up = space(m, Field::Up);
  const DofMap sigma = space(m, Field::SigmaP);
  const std::vector<EssentialBC> bcs{
      {Field::Up, {BoundaryTag::PoroLeft, BoundaryTag::PoroRight},
       [](const Point&, double) { return FieldValue(2, 7, 0, 0); }},
      {Field::SigmaP, {BoundaryTag::PoroBottom},
       [](const Point&, double) { return FieldValue(1, 3, 5, 9); }}};
  const auto cu = apply_essential_bcs(m, up, bcs, 0.0);
  EXPECT_EQ(cu.values.size(), 4u);
  for (const auto& [e, flux] : cu.values) {
    EXPECT_NEAR(std::abs(flux), 2.0 * m.edge_length(e), 1e-14);
  }
  const auto cs = apply_essential_bcs(m, sigma, bcs, 0.0);
  // Two bottom edges, two rows, two moments.
  EXPECT_EQ(cs.values.size(), 8u);
}

TEST(Interpolate, ReproducesDiscreteFields) {
  const Mesh m = build_rect_mesh({0, 1, -1, 0}, 3, 2, kPoroTags);
  int seed = 1;
  for (Field f : {Field::Uf, Field::Pf, Field::Up, Field::SigmaP, Field::Pp, Field::Us,
                  Field::GammaP}) {
    const DofMap s = space(m, f);
    const Eigen::VectorXd c = random_vector(s.num_dofs(), seed++);
    const Eigen::VectorXd back = interpolate(m, s, as_field(m, s, c), 0.0);
    EXPECT_LT((back - c).cwiseAbs().maxCoeff(), 1e-12) << to_string(f);
  }
}

TEST(Interpolate, IsIdempotent) {
  const Mesh m = build_rect_mesh({0, 1, -1, 0}, 2, 2, kPoroTags);
  auto smooth = [](const Point& x, double) {
    return FieldValue(std::sin(x.x()) + x.y(), std::exp(x.y()), x.x() * x.y(), std::cos(x.x()));
  };
  for (Field f : {Field::Up, Field::SigmaP, Field::Pp, Field::Us, Field::GammaP}) {
    const DofMap s = space(m, f);
    const Eigen::VectorXd once = interpolate(m, s, smooth, 0.0);
    const Eigen::VectorXd twice = interpolate(m, s, as_field(m, s, once), 0.0);
    EXPECT_LT((twice - once).cwiseAbs().maxCoeff(), 1e-12) << to_string(f);
  }
}

TEST(Interpolate, MiniVertexValuesOfTheManufacturedVelocity) {
  const Mesh m = build_rect_mesh({0, 1, 0, 1}, 2, 2, kFluidTags);
  const DofMap uf = space(m, Field::Uf);
  auto u = [](const Point& x, double t) {
    const double a = M_PI * std::cos(M_PI * t);
    return FieldValue(a * (-3 * x.x() + std::cos(x.y())), a * (x.y() + 1), 0, 0);
  };
  const Eigen::VectorXd c = interpolate(m, uf, u, 0.0);
  const int nv = m.num_vertices();
  for (int v = 0; v < nv; ++v) {
    const Point& x = m.vertex(v);
    EXPECT_NEAR(c[v], M_PI * (-3 * x.x() + std::cos(x.y())), 1e-14);
    EXPECT_NEAR(c[nv + v], M_PI * (x.y() + 1), 1e-14);
  }
  // Exact at centroids thanks to the bubble.
  for (int t = 0; t < m.num_triangles(); ++t) {
    const FieldValue got = evaluate(m, uf, c, t, Vec2(1.0 / 3, 1.0 / 3));
    const FieldValue want = u(m.triangle_centroid(t), 0.0);
    EXPECT_NEAR(got[0], want[0], 1e-13);
    EXPECT_NEAR(got[1], want[1], 1e-13);
  }
}

TEST(Interpolate, Rt0ReproducesItsLinearFields) {
  const Mesh m = build_rect_mesh({0, 1, -1, 0}, 2, 2, kPoroTags);
  const DofMap up = space(m, Field::Up);
  auto v = [](const Point& x, double) { return FieldValue(1 + x.x(), 2 + x.y(), 0, 0); };
  const Eigen::VectorXd c = interpolate(m, up, v, 0.0);
  for (int t = 0; t < m.num_triangles(); ++t) {
    for (const Vec2& xhat : {Vec2(0.2, 0.2), Vec2(0.6, 0.1), Vec2(1.0 / 3, 1.0 / 3)}) {
      const Point x = GeometryMap::of(m, t).to_physical(xhat);
      const FieldValue got = evaluate(m, up, c, t, xhat);
      EXPECT_NEAR(got[0], 1 + x.x(), 1e-13);
      EXPECT_NEAR(got[1], 2 + x.y(), 1e-13);
      EXPECT_NEAR(evaluate_divergence(m, up, c, t, xhat)[0], 2.0, 1e-12);
    }
  }
}

TEST(Interpolate, Bdm1ReproducesLinearTensors) {
  const Mesh m = build_rect_mesh({0, 1, -1, 0}, 2, 2, kPoroTags);
  const DofMap sigma = space(m, Field::SigmaP);
  auto s = [](const Point& x, double) {
    return FieldValue(1 + 2 * x.x(), 3 * x.y() - 1, x.x() - x.y(), 0.5 + x.y());
  };
  const Eigen::VectorXd c = interpolate(m, sigma, s, 0.0);
  for (int t = 0; t < m.num_triangles(); ++t) {
    const Vec2 xhat(0.3, 0.45);
    const Point x = GeometryMap::of(m, t).to_physical(xhat);
    EXPECT_LT((evaluate(m, sigma, c, t, xhat) - s(x, 0)).cwiseAbs().maxCoeff(), 1e-13);
    const FieldValue div = evaluate_divergence(m, sigma, c, t, xhat);
    EXPECT_NEAR(div[0], 2 + 3, 1e-12);
    EXPECT_NEAR(div[1], 1 + 1, 1e-12);
  }
}

TEST(Interpolate, InterfaceSpaces) {
  const Mesh m = build_rect_mesh({0, 1, -1, 0}, 4, 2, kPoroTags);
  const DofMap theta = space(m, Field::Theta);
  const DofMap lambda = space(m, Field::Lambda);
  auto lin = [](const Point& x, double) { return FieldValue(2 * x.x() - 1, 3 - x.x(), 0, 0); };
  const Eigen::VectorXd ct = interpolate(m, theta, lin, 0.0);
  const Eigen::VectorXd cl = interpolate(m, lambda, lin, 0.0);
  for (int c = 0; c < 4; ++c) {
    const auto& seg = theta.trace().segments[c];
    const double x = seg.xa + 0.3 * seg.length();
    const FieldValue v = evaluate_on_edge(theta, ct, c, x);
    EXPECT_NEAR(v[0], 2 * x - 1, 1e-14);
    EXPECT_NEAR(v[1], 3 - x, 1e-14);
    // Edge mean of the linear function.
    EXPECT_NEAR(evaluate_on_edge(lambda, cl, c, x)[0], 2 * 0.5 * (seg.xa + seg.xb) - 1, 1e-14);
  }
}

TEST(Spaces, ConformingTracesAcrossInteriorEdges) {
  const Mesh m = build_rect_mesh({0, 1, -1, 0}, 3, 3, kPoroTags);
  int seed = 40;
  for (Field f : {Field::Uf, Field::Pf, Field::Up, Field::SigmaP, Field::GammaP}) {
    const DofMap s = space(m, f);
    const Eigen::VectorXd c = random_vector(s.num_dofs(), seed++);
    const bool hdiv = f == Field::Up || f == Field::SigmaP;
    for (int e = 0; e < m.num_edges(); ++e) {
      const auto& tris = m.edge_triangles(e);
      if (tris[1] < 0) continue;
      const Point a = m.vertex(m.edge(e).v[0]), b = m.vertex(m.edge(e).v[1]);
      const Point n = m.edge_normal(e);
      for (double sp : {0.1, 0.5, 0.8}) {
        const Point x = a + sp * (b - a);
        const FieldValue l = evaluate(m, s, c, tris[0], GeometryMap::of(m, tris[0]).to_reference(x));
        const FieldValue r = evaluate(m, s, c, tris[1], GeometryMap::of(m, tris[1]).to_reference(x));
        if (hdiv) {
          EXPECT_NEAR(l[0] * n.x() + l[1] * n.y(), r[0] * n.x() + r[1] * n.y(), 1e-12);
          EXPECT_NEAR(l[2] * n.x() + l[3] * n.y(), r[2] * n.x() + r[3] * n.y(), 1e-12);
        } else {
          EXPECT_LT((l - r).cwiseAbs().maxCoeff(), 1e-12) << to_string(f);
        }
      }
    }
  }
}
