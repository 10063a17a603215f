/**
 * @file scenarios.hpp
 * @brief The manufactured-solution convergence study and the surface/subsurface flow runs.
 */
#pragma once

#include "stokes_biot/config.hpp"
#include "stokes_biot/mms.hpp"
#include "stokes_biot/system.hpp"

#include <functional>
#include <string>
#include <vector>

namespace stokes_biot {

/// Fluid block above y = 0, poro block below, each of unit height and the
/// given width; `n_fluid` / `n_poro` cells per unit length.
Discretization make_two_block_discretization(double width, int n_fluid, int n_poro,
                                             ElementKind rotation = SpaceSpec::standard(Field::GammaP).kind);

/// Cells per unit length (fluid, poro) for level n. fine-stokes refines the
/// fluid side (poro gets 5n/8), fine-biot the poro side.
std::pair<int, int> subdomain_divisions(GridCase grid, int n);

/// Sources, natural data on the three exterior poro sides and the fluid
/// velocity on the three exterior fluid sides, all from the exact solution.
ProblemData convergence_problem(const ExactSolution& exact);

/// Interpolant of the exact solution at time t; eta from the exact displacement.
SolutionState exact_state(const Discretization& disc, const BlockSystem& system,
                          const ExactSolution& exact, double t);

struct StepCheck {
  ConstraintResiduals residuals;
  double solve_residual = 0.0;
};

struct ConvergenceLevel {
  ErrorReport report;
  int unknowns = 0;
  ConstraintResiduals worst;     // componentwise maximum over steps
  double worst_solve_residual = 0.0;
};

ConvergenceLevel run_convergence_level(GridCase grid, int n, double dt, double T,
                                       const PhysicalParams& params,
                                       ElementKind rotation = SpaceSpec::standard(Field::GammaP).kind);

/// Runs every level of the config, in order.
std::vector<ConvergenceLevel> run_convergence(const RunConfig& config,
                                              const std::function<void(const ConvergenceLevel&)>& on_level = {});

/// Parabolic inflow on the left fluid side, no slip on top/right, p_p = 0 and
/// sigma_p n = 0 on the bottom, u_p . n = 0 and u_s = 0 on the poro sides.
ProblemData hydro_problem();

/// Domain (0,2) x (-1,1) with n cells per unit length.
Discretization hydro_discretization(int n);

struct HydroSummary {
  int steps = 0;
  bool finite = true;
  double max_oscillation = 0.0;        // over all steps
  double interface_mismatch = 0.0;     // at the final step
  ConstraintResiduals worst;
  double worst_solve_residual = 0.0;
  SolutionState final_state;
};

/// Max |p_p jump| over interior poro edges divided by the p_p range (0 if flat).
double pressure_oscillation(const Discretization& disc, const BlockSystem& system,
                            const SolutionState& state);

/// ||avg_e(-sigma_22) - p_p(adjacent cell)||_{L2(Gamma)} / ||p_p||_{L2(Gamma)}.
double interface_stress_pressure_mismatch(const Discretization& disc, const BlockSystem& system,
                                          const SolutionState& state);

/// Runs the config's hydro case; writes VTK files for steps 1..N when out_dir is non-empty.
HydroSummary run_hydro(const RunConfig& config);

}  // namespace stokes_biot
