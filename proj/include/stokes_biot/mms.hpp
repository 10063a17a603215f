/**
 * @file mms.hpp
 * @brief Manufactured solution of the convergence test, its sources, and space-time error norms.
 */
#pragma once

#include "stokes_biot/assembly.hpp"
#include "stokes_biot/system.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace stokes_biot {

/// Closed-form solution on the fluid block (0,1)x(0,1) and the poro block
/// (0,1)x(-1,0). Every evaluator takes a time-derivative order (0 or 1).
///
/// The Darcy velocity is -K grad(p_p) / mu and the stresses come from the
/// given Lame parameters, so the fields satisfy the poro equations for any
/// admissible params. The interface conditions hold for lambda_p = mu_p.
class ExactSolution {
 public:
  explicit ExactSolution(const PhysicalParams& params);

  const PhysicalParams& params() const { return params_; }

  Vec2 uf(const Point& x, double t, int order = 0) const;
  Mat2 grad_uf(const Point& x, double t, int order = 0) const;  // (i, j) = d_j u_i
  double pf(const Point& x, double t, int order = 0) const;
  Mat2 sigma_f(const Point& x, double t, int order = 0) const;

  double pp(const Point& x, double t, int order = 0) const;
  Vec2 grad_pp(const Point& x, double t, int order = 0) const;
  Vec2 up(const Point& x, double t, int order = 0) const;
  double div_up(const Point& x, double t, int order = 0) const;
  Vec2 eta(const Point& x, double t, int order = 0) const;
  Mat2 grad_eta(const Point& x, double t, int order = 0) const;
  Mat2 sigma_p(const Point& x, double t, int order = 0) const;
  Vec2 div_sigma_p(const Point& x, double t, int order = 0) const;
  Vec2 us(const Point& x, double t) const { return eta(x, t, 1); }
  /// r of the skew part [[0, r], [-r, 0]] of grad u_s.
  double gamma(const Point& x, double t) const;

  /// Exact field in the FieldValue layout used by interpolate/evaluate.
  /// Theta is u_s and lambda is p_p, both restricted to y = 0.
  AnalyticField field(Field f) const;

 private:
  PhysicalParams params_;
};

/// f_f = -div sigma_f, q_f = div u_f, f_p = -div sigma_p,
/// q_p = d_t(s0 p_p + alpha div eta) + div u_p.
struct Sources {
  AnalyticField f_f, q_f, f_p, q_p;
};

Sources mms_sources(const ExactSolution& exact);

/// Norms in table order.
enum class Norm : std::uint8_t {
  Uf, Pf, SigmaP, DivSigmaP, Us, GammaP, Up, DivUp, Pp, Lambda, Theta
};
inline constexpr int kNormCount = 11;
const char* to_string(Norm norm);
/// Column header used in CSV output, e.g. "e_uf".
std::string column_name(Norm norm);

using NormArray = std::array<double, kNormCount>;

/// Errors of one state against the exact solution at state.t (degree-5 quadrature).
NormArray spatial_errors(const Discretization& disc, const BlockSystem& system,
                         const SolutionState& state, const ExactSolution& exact);

struct ErrorReport {
  int n = 0;
  NormArray errors{};  // l2 in time, except sigma_p which is l-infinity in time
};

/// l2 in time is sqrt(dt sum_{k>=1} e_k^2); the l-infinity maximum includes k = 0.
ErrorReport compute_errors(const Discretization& disc, const BlockSystem& system,
                           const std::vector<SolutionState>& states, const ExactSolution& exact,
                           int n);

/// Same reduction applied to per-step spatial errors.
NormArray time_norms(const std::vector<NormArray>& per_step, double dt);

using RateArray = std::array<std::optional<double>, kNormCount>;

/// log2(e_k / e_{k+1}) for consecutive reports; absent where an error is not positive.
std::vector<RateArray> convergence_rates(const std::vector<ErrorReport>& reports);

std::optional<double> observed_rate(double coarse, double fine, double ratio = 2.0);

}  // namespace stokes_biot
