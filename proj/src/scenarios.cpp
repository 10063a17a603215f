/**
 * @file scenarios.cpp
 */
#include "stokes_biot/scenarios.hpp"

#include "stokes_biot/output.hpp"
#include "stokes_biot/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stokes_biot {

Discretization make_two_block_discretization(double width, int n_fluid, int n_poro,
                                             ElementKind rotation) {
  const int wf = static_cast<int>(std::lround(width * n_fluid));
  const int wp = static_cast<int>(std::lround(width * n_poro));
  Mesh fluid = build_rect_mesh({0.0, width, 0.0, 1.0}, wf, n_fluid,
                               {BoundaryTag::Interface, BoundaryTag::FluidRight,
                                BoundaryTag::FluidTop, BoundaryTag::FluidLeft});
  Mesh poro = build_rect_mesh({0.0, width, -1.0, 0.0}, wp, n_poro,
                              {BoundaryTag::PoroBottom, BoundaryTag::PoroRight,
                               BoundaryTag::Interface, BoundaryTag::PoroLeft});
  return make_discretization(std::move(fluid), std::move(poro), rotation);
}

std::pair<int, int> subdomain_divisions(GridCase grid, int n) {
  if (n <= 0) throw std::invalid_argument("n must be positive");
  switch (grid) {
    case GridCase::Matching: return {n, n};
    case GridCase::FineStokes:
      if (n % 8) throw std::invalid_argument("non-matching levels must be multiples of 8");
      return {n, 5 * n / 8};
    case GridCase::FineBiot:
      if (n % 8) throw std::invalid_argument("non-matching levels must be multiples of 8");
      return {5 * n / 8, n};
  }
  throw std::invalid_argument("unknown grid case");
}

ProblemData convergence_problem(const ExactSolution& exact) {
  const Sources s = mms_sources(exact);
  ProblemData d;
  d.f_f = s.f_f;
  d.q_f = s.q_f;
  d.f_p = s.f_p;
  d.q_p = s.q_p;
  const std::vector<BoundaryTag> poro_sides{BoundaryTag::PoroLeft, BoundaryTag::PoroRight,
                                            BoundaryTag::PoroBottom};
  d.pressure_tags = poro_sides;
  d.pressure = exact.field(Field::Pp);
  d.displacement_tags = poro_sides;
  d.structure_velocity = exact.field(Field::Us);
  d.essential.push_back(
      {Field::Uf, {BoundaryTag::FluidLeft, BoundaryTag::FluidTop, BoundaryTag::FluidRight},
       exact.field(Field::Uf)});
  return d;
}

SolutionState exact_state(const Discretization& d, const BlockSystem& sys,
                          const ExactSolution& exact, double t) {
  SolutionState s;
  s.t = t;
  s.x = Eigen::VectorXd::Zero(sys.size());
  for (Field f : kAllFields) {
    s.x.segment(sys.offset(f), sys.field_size(f)) =
        interpolate(d.mesh_of(f), d.space(f), exact.field(f), t);
  }
  const ExactSolution ex = exact;
  s.eta = interpolate(d.poro, d.space(Field::Us),
                      [ex](const Point& x, double tt) {
                        const Vec2 e = ex.eta(x, tt);
                        return FieldValue(e.x(), e.y(), 0.0, 0.0);
                      },
                      t);
  return s;
}

namespace {

void accumulate(ConstraintResiduals& worst, const ConstraintResiduals& r) {
  worst.weak_symmetry = std::max(worst.weak_symmetry, r.weak_symmetry);
  worst.interface = std::max(worst.interface, r.interface);
  worst.momentum = std::max(worst.momentum, r.momentum);
}

}  // namespace

ConvergenceLevel run_convergence_level(GridCase grid, int n, double dt, double T,
                                       const PhysicalParams& params, ElementKind rotation) {
  const auto [nf, np] = subdomain_divisions(grid, n);
  const Discretization disc = make_two_block_discretization(1.0, nf, np, rotation);
  const ExactSolution exact(params);
  const TransientSolver solver(disc, params, convergence_problem(exact), dt);
  const BlockSystem& sys = solver.system();
  const int steps = step_count(T, dt);

  ConvergenceLevel level;
  level.unknowns = sys.size();
  std::vector<NormArray> per_step;
  SolutionState state = exact_state(disc, sys, exact, 0.0);
  per_step.push_back(spatial_errors(disc, sys, state, exact));
  for (int k = 1; k <= steps; ++k) {
    const Eigen::VectorXd rhs = solver.step_rhs(state);
    state = solver.step(state);
    accumulate(level.worst, constraint_residuals(sys, state, rhs));
    level.worst_solve_residual = std::max(level.worst_solve_residual, state.residual);
    per_step.push_back(spatial_errors(disc, sys, state, exact));
  }
  level.report = {n, time_norms(per_step, dt)};
  return level;
}

std::vector<ConvergenceLevel> run_convergence(
    const RunConfig& config, const std::function<void(const ConvergenceLevel&)>& on_level) {
  validate(config);
  std::vector<ConvergenceLevel> out;
  for (int n : config.levels) {
    out.push_back(run_convergence_level(config.grid, n, config.dt, config.T, config.params));
    if (on_level) on_level(out.back());
  }
  return out;
}

ProblemData hydro_problem() {
  ProblemData d;
  auto zero = [](const Point&, double) { return FieldValue::Zero().eval(); };
  d.essential.push_back({Field::Uf, {BoundaryTag::FluidLeft}, [](const Point& x, double) {
                           return FieldValue(-40.0 * x.y() * (x.y() - 1.0), 0.0, 0.0, 0.0);
                         }});
  d.essential.push_back({Field::Uf, {BoundaryTag::FluidTop, BoundaryTag::FluidRight}, zero});
  d.essential.push_back({Field::SigmaP, {BoundaryTag::PoroBottom}, zero});
  d.essential.push_back({Field::Up, {BoundaryTag::PoroLeft, BoundaryTag::PoroRight}, zero});
  // p_p = 0 on the bottom and u_s = 0 on the sides are natural with zero data.
  return d;
}

Discretization hydro_discretization(int n) { return make_two_block_discretization(2.0, n, n); }

double pressure_oscillation(const Discretization& d, const BlockSystem& sys,
                            const SolutionState& s) {
  const Eigen::VectorXd p = s.field(sys, Field::Pp);
  if (p.size() == 0) return 0.0;
  const double range = p.maxCoeff() - p.minCoeff();
  if (!(range > 0)) return 0.0;
  double jump = 0.0;
  for (int e = 0; e < d.poro.num_edges(); ++e) {
    const auto& tris = d.poro.edge_triangles(e);
    if (tris[1] < 0) continue;
    jump = std::max(jump, std::abs(p[tris[0]] - p[tris[1]]));
  }
  return jump / range;
}

double interface_stress_pressure_mismatch(const Discretization& d, const BlockSystem& sys,
                                          const SolutionState& s) {
  const Eigen::VectorXd sg = s.field(sys, Field::SigmaP);
  const Eigen::VectorXd pp = s.field(sys, Field::Pp);
  const auto& gauss = quadrature_rule(CellKind::Segment, 3);
  const InterfaceTrace& tr = d.trace.poro;
  double diff = 0.0, ref = 0.0;
  for (const auto& seg : tr.segments) {
    const GeometryMap map = GeometryMap::of(d.poro, seg.triangle);
    double avg = 0.0;
    for (std::size_t q = 0; q < gauss.size(); ++q) {
      const Point x(seg.xa + gauss.points[q].x() * seg.length(), tr.y);
      avg -= gauss.weights[q] *
             evaluate(d.poro, d.space(Field::SigmaP), sg, seg.triangle, map.to_reference(x))[3];
    }
    const double p = pp[d.space(Field::Pp).cell_dofs(seg.triangle)[0]];
    diff += seg.length() * (avg - p) * (avg - p);
    ref += seg.length() * p * p;
  }
  if (!(ref > 0)) return diff > 0 ? std::numeric_limits<double>::infinity() : 0.0;
  return std::sqrt(diff / ref);
}

HydroSummary run_hydro(const RunConfig& config) {
  validate(config);
  const Discretization disc = hydro_discretization(config.hydro_n);
  const TransientSolver solver(disc, config.params, hydro_problem(), config.dt);
  const BlockSystem& sys = solver.system();

  HydroSummary out;
  out.steps = step_count(config.T, config.dt);
  SolutionState state;
  state.x = Eigen::VectorXd::Zero(sys.size());
  state.eta = Eigen::VectorXd::Zero(sys.field_size(Field::Us));
  for (int k = 1; k <= out.steps; ++k) {
    const Eigen::VectorXd rhs = solver.step_rhs(state);
    state = solver.step(state);
    out.finite = out.finite && state.x.allFinite() && state.eta.allFinite();
    accumulate(out.worst, constraint_residuals(sys, state, rhs));
    out.worst_solve_residual = std::max(out.worst_solve_residual, state.residual);
    out.max_oscillation = std::max(out.max_oscillation, pressure_oscillation(disc, sys, state));
    if (!config.out_dir.empty()) write_vtk_step(config.out_dir, disc, sys, state);
  }
  out.interface_mismatch = interface_stress_pressure_mismatch(disc, sys, state);
  out.final_state = std::move(state);
  return out;
}

}  // namespace stokes_biot
