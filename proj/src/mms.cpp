/**
 * @file mms.cpp
 */
#include "stokes_biot/mms.hpp"

#include "stokes_biot/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace stokes_biot {

namespace {

constexpr double kPi = std::numbers::pi;

// Time profiles pi cos(pi t), e^t and sin(pi t), or their derivatives.
struct TimeFactors {
  double pc, e, s;
};

TimeFactors factors(double t, int order) {
  switch (order) {
    case 0: return {kPi * std::cos(kPi * t), std::exp(t), std::sin(kPi * t)};
    case 1: return {-kPi * kPi * std::sin(kPi * t), std::exp(t), kPi * std::cos(kPi * t)};
    case 2: return {-kPi * kPi * kPi * std::cos(kPi * t), std::exp(t), -kPi * kPi * std::sin(kPi * t)};
    default: throw std::invalid_argument("time derivative order must be 0, 1 or 2");
  }
}

FieldValue scalar(double v) { return FieldValue(v, 0.0, 0.0, 0.0); }
FieldValue vector(const Vec2& v) { return FieldValue(v.x(), v.y(), 0.0, 0.0); }
FieldValue tensor(const Mat2& m) { return FieldValue(m(0, 0), m(0, 1), m(1, 0), m(1, 1)); }

}  // namespace

ExactSolution::ExactSolution(const PhysicalParams& params) : params_(params) { params_.validate(); }

Vec2 ExactSolution::uf(const Point& x, double t, int order) const {
  const double pc = factors(t, order).pc;
  return pc * Vec2(-3.0 * x.x() + std::cos(x.y()), x.y() + 1.0);
}

Mat2 ExactSolution::grad_uf(const Point& x, double t, int order) const {
  const double pc = factors(t, order).pc;
  Mat2 g;
  g << -3.0, -std::sin(x.y()), 0.0, 1.0;
  return pc * g;
}

double ExactSolution::pf(const Point& x, double t, int order) const {
  const auto f = factors(t, order);
  return f.e * std::sin(kPi * x.x()) * std::cos(kPi * x.y() / 2.0) + 2.0 * f.pc;
}

Mat2 ExactSolution::sigma_f(const Point& x, double t, int order) const {
  const Mat2 g = grad_uf(x, t, order);
  return -pf(x, t, order) * Mat2::Identity() + params_.mu * (g + g.transpose());
}

double ExactSolution::pp(const Point& x, double t, int order) const {
  return factors(t, order).e * std::sin(kPi * x.x()) * std::cos(kPi * x.y() / 2.0);
}

Vec2 ExactSolution::grad_pp(const Point& x, double t, int order) const {
  const double e = factors(t, order).e;
  return e * Vec2(kPi * std::cos(kPi * x.x()) * std::cos(kPi * x.y() / 2.0),
                  -0.5 * kPi * std::sin(kPi * x.x()) * std::sin(kPi * x.y() / 2.0));
}

Vec2 ExactSolution::up(const Point& x, double t, int order) const {
  return -params_.K * grad_pp(x, t, order) / params_.mu;
}

double ExactSolution::div_up(const Point& x, double t, int order) const {
  const double e = factors(t, order).e;
  const double sx = std::sin(kPi * x.x()), cx = std::cos(kPi * x.x());
  const double sy = std::sin(kPi * x.y() / 2.0), cy = std::cos(kPi * x.y() / 2.0);
  const double pxx = -kPi * kPi * sx * cy;
  const double pyy = -0.25 * kPi * kPi * sx * cy;
  const double pxy = -0.5 * kPi * kPi * cx * sy;
  const Mat2& K = params_.K;
  return -e * (K(0, 0) * pxx + (K(0, 1) + K(1, 0)) * pxy + K(1, 1) * pyy) / params_.mu;
}

Vec2 ExactSolution::eta(const Point& x, double t, int order) const {
  return factors(t, order).s * Vec2(-3.0 * x.x() + std::cos(x.y()), x.y() + 1.0);
}

Mat2 ExactSolution::grad_eta(const Point& x, double t, int order) const {
  Mat2 g;
  g << -3.0, -std::sin(x.y()), 0.0, 1.0;
  return factors(t, order).s * g;
}

Mat2 ExactSolution::sigma_p(const Point& x, double t, int order) const {
  const Mat2 g = grad_eta(x, t, order);
  const Mat2 strain = 0.5 * (g + g.transpose());
  const Mat2 elastic =
      2.0 * params_.mu_p * strain + params_.lambda_p * strain.trace() * Mat2::Identity();
  return elastic - params_.alpha * pp(x, t, order) * Mat2::Identity();
}

Vec2 ExactSolution::div_sigma_p(const Point& x, double t, int order) const {
  // mu_p lap(eta) + (mu_p + lambda_p) grad div(eta) - alpha grad p_p;
  // div(eta) is constant in space.
  const double s = factors(t, order).s;
  const Vec2 lap(-s * std::cos(x.y()), 0.0);
  return params_.mu_p * lap - params_.alpha * grad_pp(x, t, order);
}

double ExactSolution::gamma(const Point& x, double t) const {
  const Mat2 g = grad_eta(x, t, 1);
  return 0.5 * (g(0, 1) - g(1, 0));
}

AnalyticField ExactSolution::field(Field f) const {
  const ExactSolution self = *this;
  switch (f) {
    case Field::Uf: return [self](const Point& x, double t) { return vector(self.uf(x, t)); };
    case Field::Pf: return [self](const Point& x, double t) { return scalar(self.pf(x, t)); };
    case Field::Up: return [self](const Point& x, double t) { return vector(self.up(x, t)); };
    case Field::Pp: return [self](const Point& x, double t) { return scalar(self.pp(x, t)); };
    case Field::SigmaP:
      return [self](const Point& x, double t) { return tensor(self.sigma_p(x, t)); };
    case Field::Us: return [self](const Point& x, double t) { return vector(self.us(x, t)); };
    case Field::GammaP:
      return [self](const Point& x, double t) { return scalar(self.gamma(x, t)); };
    case Field::Lambda:
      return [self](const Point& x, double t) { return scalar(self.pp(Point(x.x(), 0.0), t)); };
    case Field::Theta:
      return [self](const Point& x, double t) { return vector(self.us(Point(x.x(), 0.0), t)); };
  }
  throw std::invalid_argument("unknown field");
}

Sources mms_sources(const ExactSolution& exact) {
  const ExactSolution ex = exact;
  const PhysicalParams p = exact.params();
  Sources s;
  s.f_f = [ex, p](const Point& x, double t) {
    // -div(-p I + 2 mu D(u)) with div u constant: grad p - mu lap u
    const double pc = factors(t, 0).pc;
    const Vec2 lap(-pc * std::cos(x.y()), 0.0);
    const Vec2 gp = ex.grad_pp(x, t);  // p_f - p_p depends on t only
    return vector(gp - p.mu * lap);
  };
  s.q_f = [ex](const Point& x, double t) { return scalar(ex.grad_uf(x, t).trace()); };
  s.f_p = [ex](const Point& x, double t) { return vector(-ex.div_sigma_p(x, t)); };
  s.q_p = [ex, p](const Point& x, double t) {
    return scalar(p.s0 * ex.pp(x, t, 1) + p.alpha * ex.grad_eta(x, t, 1).trace() +
                  ex.div_up(x, t));
  };
  return s;
}

const char* to_string(Norm norm) {
  switch (norm) {
    case Norm::Uf: return "uf";
    case Norm::Pf: return "pf";
    case Norm::SigmaP: return "sigma_p";
    case Norm::DivSigmaP: return "div_sigma_p";
    case Norm::Us: return "us";
    case Norm::GammaP: return "gamma_p";
    case Norm::Up: return "up";
    case Norm::DivUp: return "div_up";
    case Norm::Pp: return "pp";
    case Norm::Lambda: return "lambda";
    case Norm::Theta: return "theta";
  }
  return "?";
}

std::string column_name(Norm norm) { return std::string("e_") + to_string(norm); }

NormArray spatial_errors(const Discretization& d, const BlockSystem& sys,
                         const SolutionState& state, const ExactSolution& ex) {
  const auto& rule = quadrature_rule(CellKind::Triangle, kVolumeQuadratureDegree);
  const double t = state.t;
  NormArray sq{};
  auto add = [&sq](Norm n, double v) { sq[static_cast<int>(n)] += v; };

  const Eigen::VectorXd uf = state.field(sys, Field::Uf);
  const Eigen::VectorXd pf = state.field(sys, Field::Pf);
  for (int c = 0; c < d.fluid.num_triangles(); ++c) {
    const GeometryMap map = GeometryMap::of(d.fluid, c);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double w = rule.weights[q] * map.det;
      const Vec2& xh = rule.points[q];
      const Point x = map.to_physical(xh);
      const FieldValue u = evaluate(d.fluid, d.space(Field::Uf), uf, c, xh);
      const FieldValue g = evaluate_gradient(d.fluid, d.space(Field::Uf), uf, c, xh);
      const Mat2 ge = ex.grad_uf(x, t);
      const FieldValue gx(ge(0, 0), ge(0, 1), ge(1, 0), ge(1, 1));
      add(Norm::Uf, w * ((u.head<2>() - ex.uf(x, t)).squaredNorm() + (g - gx).squaredNorm()));
      const double p = evaluate(d.fluid, d.space(Field::Pf), pf, c, xh)[0];
      add(Norm::Pf, w * std::pow(p - ex.pf(x, t), 2));
    }
  }

  const Eigen::VectorXd sg = state.field(sys, Field::SigmaP);
  const Eigen::VectorXd us = state.field(sys, Field::Us);
  const Eigen::VectorXd ga = state.field(sys, Field::GammaP);
  const Eigen::VectorXd up = state.field(sys, Field::Up);
  const Eigen::VectorXd pp = state.field(sys, Field::Pp);
  for (int c = 0; c < d.poro.num_triangles(); ++c) {
    const GeometryMap map = GeometryMap::of(d.poro, c);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double w = rule.weights[q] * map.det;
      const Vec2& xh = rule.points[q];
      const Point x = map.to_physical(xh);
      const Mat2 se = ex.sigma_p(x, t);
      const FieldValue sv = evaluate(d.poro, d.space(Field::SigmaP), sg, c, xh);
      add(Norm::SigmaP, w * (sv - FieldValue(se(0, 0), se(0, 1), se(1, 0), se(1, 1))).squaredNorm());
      const FieldValue dv = evaluate_divergence(d.poro, d.space(Field::SigmaP), sg, c, xh);
      add(Norm::DivSigmaP, w * (dv.head<2>() - ex.div_sigma_p(x, t)).squaredNorm());
      const FieldValue uv = evaluate(d.poro, d.space(Field::Us), us, c, xh);
      add(Norm::Us, w * (uv.head<2>() - ex.us(x, t)).squaredNorm());
      // tensor norm of [[0, r], [-r, 0]]
      const double r = evaluate(d.poro, d.space(Field::GammaP), ga, c, xh)[0];
      add(Norm::GammaP, w * 2.0 * std::pow(r - ex.gamma(x, t), 2));
      const FieldValue vp = evaluate(d.poro, d.space(Field::Up), up, c, xh);
      add(Norm::Up, w * (vp.head<2>() - ex.up(x, t)).squaredNorm());
      const double dvp = evaluate_divergence(d.poro, d.space(Field::Up), up, c, xh)[0];
      add(Norm::DivUp, w * std::pow(dvp - ex.div_up(x, t), 2));
      const double pv = evaluate(d.poro, d.space(Field::Pp), pp, c, xh)[0];
      add(Norm::Pp, w * std::pow(pv - ex.pp(x, t), 2));
    }
  }

  const auto& gauss = quadrature_rule(CellKind::Segment, 7);
  const Eigen::VectorXd la = state.field(sys, Field::Lambda);
  const Eigen::VectorXd th = state.field(sys, Field::Theta);
  const DofMap& lmap = d.space(Field::Lambda);
  const DofMap& tmap = d.space(Field::Theta);
  const auto& segs = lmap.trace().segments;
  for (int j = 0; j < lmap.num_cells(); ++j) {
    for (std::size_t q = 0; q < gauss.size(); ++q) {
      const double x = segs[j].xa + gauss.points[q].x() * segs[j].length();
      const double w = gauss.weights[q] * segs[j].length();
      const Point xi(x, lmap.trace().y);
      add(Norm::Lambda, w * std::pow(evaluate_on_edge(lmap, la, j, x)[0] - ex.pp(xi, t), 2));
      add(Norm::Theta,
          w * (evaluate_on_edge(tmap, th, j, x).head<2>() - ex.us(xi, t)).squaredNorm());
    }
  }

  NormArray out;
  for (int k = 0; k < kNormCount; ++k) out[k] = std::sqrt(sq[k]);
  return out;
}

NormArray time_norms(const std::vector<NormArray>& per_step, double dt) {
  NormArray out{};
  for (std::size_t n = 0; n < per_step.size(); ++n) {
    for (int k = 0; k < kNormCount; ++k) {
      if (k == static_cast<int>(Norm::SigmaP)) {
        out[k] = std::max(out[k], per_step[n][k]);
      } else if (n >= 1) {
        out[k] += dt * per_step[n][k] * per_step[n][k];
      }
    }
  }
  for (int k = 0; k < kNormCount; ++k) {
    if (k != static_cast<int>(Norm::SigmaP)) out[k] = std::sqrt(out[k]);
  }
  return out;
}

ErrorReport compute_errors(const Discretization& disc, const BlockSystem& sys,
                           const std::vector<SolutionState>& states, const ExactSolution& exact,
                           int n) {
  std::vector<NormArray> per_step;
  per_step.reserve(states.size());
  for (const auto& s : states) per_step.push_back(spatial_errors(disc, sys, s, exact));
  return {n, time_norms(per_step, sys.dt)};
}

std::optional<double> observed_rate(double coarse, double fine, double ratio) {
  if (!(coarse > 0) || !(fine > 0) || !(ratio > 1)) return std::nullopt;
  return std::log(coarse / fine) / std::log(ratio);
}

std::vector<RateArray> convergence_rates(const std::vector<ErrorReport>& reports) {
  std::vector<RateArray> out;
  for (std::size_t k = 1; k < reports.size(); ++k) {
    const double ratio = static_cast<double>(reports[k].n) / reports[k - 1].n;
    RateArray r;
    for (int j = 0; j < kNormCount; ++j) {
      r[j] = observed_rate(reports[k - 1].errors[j], reports[k].errors[j], ratio);
    }
    out.push_back(r);
  }
  return out;
}

}  // namespace stokes_biot
