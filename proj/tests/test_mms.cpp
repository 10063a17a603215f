#include "stokes_biot/mms.hpp"

#include "stokes_biot/scenarios.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace stokes_biot;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kH = 1e-5;

// Central differences in x, y and t.
template <class F>
auto dx(F&& f, const Point& x, double t) {
  return (f(x + Point(kH, 0), t) - f(x - Point(kH, 0), t)) / (2 * kH);
}
template <class F>
auto dy(F&& f, const Point& x, double t) {
  return (f(x + Point(0, kH), t) - f(x - Point(0, kH), t)) / (2 * kH);
}
template <class F>
auto dt(F&& f, const Point& x, double t) {
  return (f(x, t + kH) - f(x, t - kH)) / (2 * kH);
}

// Row divergence of a tensor field.
template <class F>
Vec2 row_div(F&& sigma, const Point& x, double t) {
  const Mat2 a = dx(sigma, x, t), b = dy(sigma, x, t);
  return Vec2(a(0, 0) + b(0, 1), a(1, 0) + b(1, 1));
}

struct Sample {
  Point x;
  double t;
};

std::vector<Sample> samples(double y0, double y1, int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> ux(0.05, 0.95), uy(y0, y1), ut(0.0, 0.01);
  std::vector<Sample> out;
  for (int k = 0; k < n; ++k) out.push_back({Point(ux(rng), uy(rng)), ut(rng)});
  return out;
}

PhysicalParams general_params() {
  PhysicalParams p;
  p.mu = 1.4;
  p.K << 0.7, 0.1, 0.1, 1.3;
  p.alpha = 0.6;
  p.s0 = 0.3;
  p.lambda_p = 2.5;
  p.mu_p = 0.9;
  return p;
}

}  // namespace

TEST(Exact, ValuesAtTheOrigin) {
  const ExactSolution ex(PhysicalParams{});
  EXPECT_TRUE(ex.uf(Point(0, 0), 0.0).isApprox(Vec2(kPi, kPi)));
  for (const Point& x : {Point(0.3, -0.2), Point(0.9, -1.0)}) {
    EXPECT_EQ(ex.eta(x, 0.0).norm(), 0.0);
  }
  const Sources s = mms_sources(ex);
  for (double t : {0.0, 0.003, 0.4}) {
    EXPECT_NEAR(s.q_f(Point(0.2, 0.7), t)[0], -2 * kPi * std::cos(kPi * t), 1e-14);
  }
}

TEST(Exact, DerivedFieldsMatchFiniteDifferences) {
  const PhysicalParams p = general_params();
  const ExactSolution ex(p);
  auto uf = [&](const Point& x, double t) { return ex.uf(x, t); };
  auto eta = [&](const Point& x, double t) { return ex.eta(x, t); };
  auto pp = [&](const Point& x, double t) { return ex.pp(x, t); };
  for (const auto& s : samples(-0.95, 0.95, 20, 5)) {
    const Point& x = s.x;
    const double t = s.t;
    Mat2 g;
    g.col(0) = dx(uf, x, t);
    g.col(1) = dy(uf, x, t);
    EXPECT_LT((ex.grad_uf(x, t) - g).cwiseAbs().maxCoeff(), 1e-8);
    Mat2 ge;
    ge.col(0) = dx(eta, x, t);
    ge.col(1) = dy(eta, x, t);
    EXPECT_LT((ex.grad_eta(x, t) - ge).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_LT((ex.grad_pp(x, t) - Vec2(dx(pp, x, t), dy(pp, x, t))).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_LT((ex.us(x, t) - dt(eta, x, t)).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_NEAR(ex.pp(x, t, 1), dt(pp, x, t), 1e-8);

    // Constitutive laws written out from their definitions.
    const Mat2 D = 0.5 * (g + g.transpose());
    EXPECT_LT((ex.sigma_f(x, t) - (-ex.pf(x, t) * Mat2::Identity() + 2 * p.mu * D))
                  .cwiseAbs()
                  .maxCoeff(),
              1e-8);
    const Mat2 e = 0.5 * (ge + ge.transpose());
    const Mat2 sp = 2 * p.mu_p * e + p.lambda_p * e.trace() * Mat2::Identity() -
                    p.alpha * ex.pp(x, t) * Mat2::Identity();
    EXPECT_LT((ex.sigma_p(x, t) - sp).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_LT((ex.up(x, t) + p.K * Vec2(dx(pp, x, t), dy(pp, x, t)) / p.mu).cwiseAbs().maxCoeff(),
              1e-8);

    auto up = [&](const Point& y, double tt) { return ex.up(y, tt); };
    EXPECT_NEAR(ex.div_up(x, t), dx(up, x, t).x() + dy(up, x, t).y(), 1e-8);
    auto sg = [&](const Point& y, double tt) { return ex.sigma_p(y, tt); };
    EXPECT_LT((ex.div_sigma_p(x, t) - row_div(sg, x, t)).cwiseAbs().maxCoeff(), 1e-8);

    auto us = [&](const Point& y, double tt) { return ex.us(y, tt); };
    Mat2 gs;
    gs.col(0) = dx(us, x, t);
    gs.col(1) = dy(us, x, t);
    EXPECT_NEAR(ex.gamma(x, t), 0.5 * (gs(0, 1) - gs(1, 0)), 1e-8);
  }
}

TEST(Sources, MatchFiniteDifferencePdeResiduals) {
  for (const PhysicalParams& p : {PhysicalParams{}, general_params()}) {
    const ExactSolution ex(p);
    const Sources src = mms_sources(ex);
    auto sf = [&](const Point& y, double t) { return ex.sigma_f(y, t); };
    auto sp = [&](const Point& y, double t) { return ex.sigma_p(y, t); };
    auto uf = [&](const Point& y, double t) { return ex.uf(y, t); };
    auto up = [&](const Point& y, double t) { return ex.up(y, t); };
    auto pp = [&](const Point& y, double t) { return ex.pp(y, t); };
    // d_t eta = u_s is checked against a time difference above.
    auto us = [&](const Point& y, double t) { return ex.us(y, t); };
    for (const auto& s : samples(0.05, 0.95, 20, 17)) {
      const Vec2 ff = -row_div(sf, s.x, s.t);
      EXPECT_LT((src.f_f(s.x, s.t).head<2>() - ff).cwiseAbs().maxCoeff(), 1e-8);
      EXPECT_NEAR(src.q_f(s.x, s.t)[0], dx(uf, s.x, s.t).x() + dy(uf, s.x, s.t).y(), 1e-8);
    }
    for (const auto& s : samples(-0.95, -0.05, 20, 23)) {
      const Vec2 fp = -row_div(sp, s.x, s.t);
      EXPECT_LT((src.f_p(s.x, s.t).head<2>() - fp).cwiseAbs().maxCoeff(), 1e-8);
      const double qp = p.s0 * dt(pp, s.x, s.t) +
                        p.alpha * (dx(us, s.x, s.t).x() + dy(us, s.x, s.t).y()) +
                        dx(up, s.x, s.t).x() + dy(up, s.x, s.t).y();
      EXPECT_NEAR(src.q_p(s.x, s.t)[0], qp, 1e-8);
    }
  }
}

TEST(Sources, PoroMomentumSourceAtTimeZero) {
  // eta(0) = 0, so f_p(0) = alpha grad p_p(0).
  PhysicalParams p;
  p.alpha = 0.7;
  const ExactSolution ex(p);
  const Sources s = mms_sources(ex);
  for (const Point& x : {Point(0.1, -0.3), Point(0.8, -0.9)}) {
    EXPECT_LT((s.f_p(x, 0.0).head<2>() - p.alpha * ex.grad_pp(x, 0.0)).norm(), 1e-14);
  }
}

TEST(Exact, InterfaceConditionsHoldOnTheInterface) {
  const PhysicalParams p;  // lambda_p = mu_p, alpha = 1
  const ExactSolution ex(p);
  const Vec2 nf(0, -1), np(0, 1), tau(1, 0);
  const double beta = p.mu * p.alpha_bjs / std::sqrt(tau.dot(p.K * tau));
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> ux(0, 1);
  for (double t : {0.0, 0.005, 0.01}) {
    for (int k = 0; k < 50; ++k) {
      const Point x(ux(rng), 0.0);
      // Mass: u_f . n_f + (d_t eta + u_p) . n_p = 0.
      EXPECT_NEAR(ex.uf(x, t).dot(nf) + (ex.us(x, t) + ex.up(x, t)).dot(np), 0.0, 1e-10);
      // Normal stress equals the pore pressure.
      EXPECT_NEAR(-(ex.sigma_f(x, t) * nf).dot(nf), ex.pp(x, t), 1e-10);
      // Traction balance.
      EXPECT_LT((ex.sigma_f(x, t) * nf + ex.sigma_p(x, t) * np).cwiseAbs().maxCoeff(), 1e-10);
      // Slip with friction.
      EXPECT_NEAR(-(ex.sigma_f(x, t) * nf).dot(tau), beta * (ex.uf(x, t) - ex.us(x, t)).dot(tau),
                  1e-10);
      // The multipliers are the traces.
      EXPECT_NEAR(ex.field(Field::Lambda)(x, t)[0], ex.pp(x, t), 1e-15);
      EXPECT_LT((ex.field(Field::Theta)(x, t).head<2>() - ex.us(x, t)).norm(), 1e-15);
    }
  }
}

TEST(Rates, ObservedRates) {
  EXPECT_NEAR(*observed_rate(4e-3, 2e-3), 1.0, 1e-12);
  EXPECT_NEAR(*observed_rate(1e-2, 2.5e-3), 2.0, 1e-12);
  EXPECT_NEAR(*observed_rate(7.731e-3, 3.860e-3), 1.0, 0.01);
  EXPECT_FALSE(observed_rate(0.0, 1e-3).has_value());
  EXPECT_FALSE(observed_rate(1e-3, -1.0).has_value());
  EXPECT_NEAR(*observed_rate(1.0, 0.5 * 0.5 * 0.5, 8.0), 1.0, 1e-12);
}

TEST(Rates, OnePerConsecutivePair) {
  std::vector<ErrorReport> reports(3);
  for (int k = 0; k < 3; ++k) {
    reports[k].n = 8 << k;
    for (int j = 0; j < kNormCount; ++j) reports[k].errors[j] = std::pow(2.0, -(j % 3) * k);
  }
  reports[2].errors[4] = 0.0;
  const auto rates = convergence_rates(reports);
  ASSERT_EQ(rates.size(), 2u);
  EXPECT_NEAR(*rates[0][0], 0.0, 1e-14);
  EXPECT_NEAR(*rates[1][1], 1.0, 1e-14);
  EXPECT_NEAR(*rates[1][2], 2.0, 1e-14);
  EXPECT_FALSE(rates[1][4].has_value());
  EXPECT_TRUE(convergence_rates({reports[0]}).empty());
}

TEST(Norms, TimeReductions) {
  std::vector<NormArray> steps(3);
  for (int n = 0; n < 3; ++n) steps[n].fill(n + 1.0);
  steps[0][static_cast<int>(Norm::SigmaP)] = 10.0;
  const NormArray r = time_norms(steps, 0.5);
  // l2 skips the initial state; sigma takes the maximum including it.
  EXPECT_NEAR(r[static_cast<int>(Norm::Uf)], std::sqrt(0.5 * (4 + 9)), 1e-14);
  EXPECT_EQ(r[static_cast<int>(Norm::SigmaP)], 10.0);
  EXPECT_EQ(column_name(Norm::Uf), "e_uf");
  EXPECT_EQ(column_name(Norm::Theta), "e_theta");
}

TEST(Norms, InterpolantErrorsAreSmallButNotZero) {
  PhysicalParams p;
  const ExactSolution ex(p);
  NormArray prev{};
  for (int n : {4, 8}) {
    const Discretization d = make_two_block_discretization(1.0, n, n);
    const BlockSystem sys = build_block_system(d, assemble_operators(d, p), 0.1, {});
    const SolutionState s = exact_state(d, sys, ex, 0.005);
    SolutionState zero;
    zero.t = 0.005;
    zero.x = Eigen::VectorXd::Zero(sys.size());
    const NormArray e = spatial_errors(d, sys, s, ex);
    const NormArray e0 = spatial_errors(d, sys, zero, ex);
    for (int k = 0; k < kNormCount; ++k) {
      EXPECT_GT(e[k], 0.0) << to_string(static_cast<Norm>(k));
      EXPECT_LT(e[k], 0.5 * e0[k]) << to_string(static_cast<Norm>(k));
      if (n == 8) EXPECT_LT(e[k], prev[k]) << to_string(static_cast<Norm>(k));
    }
    prev = e;
  }
}
