/**
 * @file system.cpp
 */
#include "stokes_biot/system.hpp"

#include <Eigen/UmfPackSupport>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace stokes_biot {

Discretization make_discretization(Mesh fluid, Mesh poro, ElementKind rotation) {
  if (rotation != ElementKind::P1 && rotation != ElementKind::P1Disc) {
    throw std::invalid_argument("rotation space must be P1 or discontinuous P1");
  }
  MergedTrace trace = merge_traces(extract_interface_trace(fluid, Side::Fluid),
                                   extract_interface_trace(poro, Side::Poro));
  std::vector<DofMap> spaces;
  spaces.reserve(kAllFields.size());
  for (Field f : kAllFields) {
    SpaceSpec spec = SpaceSpec::standard(f);
    if (f == Field::GammaP) spec.kind = rotation;
    spaces.emplace_back(spec.side == Side::Fluid ? fluid : poro, spec);
  }
  return {std::move(fluid), std::move(poro), std::move(trace), std::move(spaces)};
}

AssembledOperators assemble_operators(const Discretization& d, const PhysicalParams& params,
                                      ExecPolicy policy) {
  params.validate();
  AssembledOperators ops;
  ops.af = assemble_af(d.fluid, d.space(Field::Uf), params.mu, policy);
  ops.bf = assemble_bf(d.fluid, d.space(Field::Uf), d.space(Field::Pf), policy);
  ops.ap = assemble_ap(d.poro, d.space(Field::Up), params.mu, params.K, policy);
  ops.bp = assemble_bp(d.poro, d.space(Field::Up), d.space(Field::Pp), policy);
  ops.elastic = assemble_ae_app(d.poro, d.space(Field::SigmaP), d.space(Field::Pp), params, policy);
  ops.stress = assemble_bs_bsk(d.poro, d.space(Field::SigmaP), d.space(Field::Us),
                               d.space(Field::GammaP), policy);
  ops.interface = assemble_interface(d.trace, d.fluid, d.poro, d.space(Field::Uf),
                                     d.space(Field::Up), d.space(Field::SigmaP),
                                     d.space(Field::Theta), d.space(Field::Lambda), params);
  return ops;
}

Field BlockSystem::field_of(int global) const {
  for (int f = 0; f < 9; ++f) {
    if (global < offsets[f + 1]) return kAllFields[f];
  }
  throw std::out_of_range("global index outside the system");
}

class Factorization {
 public:
  Eigen::UmfPackLU<Eigen::SparseMatrix<double>> lu;
};

namespace {

void add_block(Triplets& out, const BlockSystem& sys, const SparseOperator& op, double scale,
               bool transpose) {
  const Field rf = transpose ? op.col_field : op.row_field;
  const Field cf = transpose ? op.row_field : op.col_field;
  const int rows = transpose ? op.cols() : op.rows();
  const int cols = transpose ? op.rows() : op.cols();
  if (rows != sys.field_size(rf) || cols != sys.field_size(cf)) {
    throw std::invalid_argument(std::string("block ") + to_string(rf) + "/" + to_string(cf) +
                                " does not match the space dimensions");
  }
  const int r0 = sys.offset(rf), c0 = sys.offset(cf);
  for (int k = 0; k < op.matrix.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(op.matrix, k); it; ++it) {
      const int r = static_cast<int>(transpose ? it.col() : it.row());
      const int c = static_cast<int>(transpose ? it.row() : it.col());
      out.emplace_back(r0 + r, c0 + c, scale * it.value());
    }
  }
}

double inf_norm(const Eigen::VectorXd& v) { return v.size() ? v.lpNorm<Eigen::Infinity>() : 0.0; }

}  // namespace

BlockSystem build_block_system(const Discretization& disc, const AssembledOperators& ops,
                               double dt, const std::vector<int>& constrained) {
  if (!(dt > 0)) throw std::invalid_argument("dt must be positive");
  BlockSystem sys;
  sys.dt = dt;
  sys.offsets[0] = 0;
  for (int f = 0; f < 9; ++f) {
    sys.offsets[f + 1] = sys.offsets[f] + disc.space(kAllFields[f]).num_dofs();
  }
  const int n = sys.size();
  const double inv_dt = 1.0 / dt;
  const auto& ifc = ops.interface;
  const auto& el = ops.elastic;

  Triplets t;
  add_block(t, sys, ops.af, 1.0, false);
  add_block(t, sys, ifc.bjs_ff, 1.0, false);
  add_block(t, sys, ifc.bjs_sf, 1.0, true);
  add_block(t, sys, ops.bf, 1.0, true);
  add_block(t, sys, ifc.bgf, 1.0, true);

  add_block(t, sys, ifc.bjs_sf, 1.0, false);
  add_block(t, sys, ifc.bjs_ss, 1.0, false);
  add_block(t, sys, ifc.bnp, 1.0, false);
  add_block(t, sys, ifc.bgs, 1.0, true);

  add_block(t, sys, ops.ap, 1.0, false);
  add_block(t, sys, ops.bp, 1.0, true);
  add_block(t, sys, ifc.bgp, 1.0, true);

  add_block(t, sys, el.ss, inv_dt, false);
  add_block(t, sys, el.sp, inv_dt, false);
  add_block(t, sys, ifc.bnp, -1.0, true);
  add_block(t, sys, ops.stress.bs, 1.0, true);
  add_block(t, sys, ops.stress.bsk, 1.0, true);

  add_block(t, sys, el.ps, inv_dt, false);
  add_block(t, sys, el.pp, inv_dt, false);
  add_block(t, sys, ops.bp, -1.0, false);

  add_block(t, sys, ops.bf, -1.0, false);
  add_block(t, sys, ops.stress.bs, -1.0, false);
  add_block(t, sys, ops.stress.bsk, -1.0, false);
  add_block(t, sys, ifc.bgf, -1.0, false);
  add_block(t, sys, ifc.bgs, -1.0, false);
  add_block(t, sys, ifc.bgp, -1.0, false);

  sys.matrix.resize(n, n);
  sys.matrix.setFromTriplets(t.begin(), t.end());

  Triplets e;
  add_block(e, sys, el.ss, 1.0, false);
  add_block(e, sys, el.sp, 1.0, false);
  add_block(e, sys, el.ps, 1.0, false);
  add_block(e, sys, el.pp, 1.0, false);
  sys.e1.resize(n, n);
  sys.e1.setFromTriplets(e.begin(), e.end());

  sys.constrained = constrained;
  std::sort(sys.constrained.begin(), sys.constrained.end());
  sys.constrained.erase(std::unique(sys.constrained.begin(), sys.constrained.end()),
                        sys.constrained.end());
  for (int g : sys.constrained) {
    if (g < 0 || g >= n) throw std::invalid_argument("constrained index out of range");
  }
  std::vector<int> cons_index(n, -1);
  for (std::size_t k = 0; k < sys.constrained.size(); ++k) cons_index[sys.constrained[k]] = k;
  sys.reduced_index.assign(n, -1);
  for (int g = 0; g < n; ++g) {
    if (cons_index[g] < 0) {
      sys.reduced_index[g] = static_cast<int>(sys.free_dofs.size());
      sys.free_dofs.push_back(g);
    }
  }

  Triplets rt, ct;
  for (int k = 0; k < sys.matrix.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(sys.matrix, k); it; ++it) {
      const int r = sys.reduced_index[it.row()];
      if (r < 0) continue;
      const int c = static_cast<int>(it.col());
      if (sys.reduced_index[c] >= 0) {
        rt.emplace_back(r, sys.reduced_index[c], it.value());
      } else {
        ct.emplace_back(r, cons_index[c], it.value());
      }
    }
  }
  const int nf = sys.reduced_size();
  sys.reduced.resize(nf, nf);
  sys.reduced.setFromTriplets(rt.begin(), rt.end());
  sys.coupling.resize(nf, static_cast<int>(sys.constrained.size()));
  sys.coupling.setFromTriplets(ct.begin(), ct.end());
  return sys;
}

namespace {

// Names the block of the first free unknown whose row or column is empty,
// or else the column of the smallest pivot of U.
Field deficient_block(const BlockSystem& sys, const Factorization* f) {
  const Eigen::SparseMatrix<double>& m = sys.reduced;
  std::vector<int> row_nnz(m.rows(), 0), col_nnz(m.cols(), 0);
  for (int k = 0; k < m.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(m, k); it; ++it) {
      if (it.value() != 0.0) {
        ++row_nnz[it.row()];
        ++col_nnz[it.col()];
      }
    }
  }
  for (int i = 0; i < m.rows(); ++i) {
    if (row_nnz[i] == 0 || col_nnz[i] == 0) return sys.field_of(sys.free_dofs[i]);
  }
  if (f) {
    try {
      const auto u = f->lu.matrixU();
      const auto q = f->lu.permutationQ();
      Eigen::VectorXd diag = Eigen::VectorXd::Zero(m.cols());
      for (int k = 0; k < u.outerSize(); ++k) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(u, k); it; ++it) {
          if (it.row() == it.col()) diag[k] = std::abs(it.value());
        }
      }
      Eigen::Index at = 0;
      diag.minCoeff(&at);
      return sys.field_of(sys.free_dofs[q[at]]);
    } catch (...) {
    }
  }
  return Field::Uf;
}

}  // namespace

void factorize(BlockSystem& sys) {
  auto f = std::make_shared<Factorization>();
  if (sys.reduced_size() == 0) {
    sys.factor = f;
    return;
  }
  f->lu.compute(sys.reduced);
  const bool ok = f->lu.info() == Eigen::Success;
  if (!ok) {
    const Field bad = deficient_block(sys, f.get());
    throw SingularSystemError(bad, std::string("singular system: first deficient block is ") +
                                       to_string(bad));
  }
  sys.factor = f;
}

Eigen::VectorXd solve(const BlockSystem& sys, const Eigen::VectorXd& rhs,
                      const std::map<int, double>& fixed, SolveReport* report) {
  if (!sys.factor) throw std::logic_error("system is not factorized");
  if (rhs.size() != sys.size()) throw std::invalid_argument("rhs size mismatch");
  Eigen::VectorXd g = Eigen::VectorXd::Zero(static_cast<int>(sys.constrained.size()));
  for (std::size_t k = 0; k < sys.constrained.size(); ++k) {
    auto it = fixed.find(sys.constrained[k]);
    if (it != fixed.end()) g[k] = it->second;
  }
  for (const auto& [dof, value] : fixed) {
    if (dof < 0 || dof >= sys.size() || sys.reduced_index[dof] >= 0) {
      throw std::invalid_argument("essential value on an unconstrained unknown");
    }
    (void)value;
  }
  Eigen::VectorXd b(sys.reduced_size());
  for (int i = 0; i < sys.reduced_size(); ++i) b[i] = rhs[sys.free_dofs[i]];
  if (g.size()) b -= sys.coupling * g;

  Eigen::VectorXd y = Eigen::VectorXd::Zero(sys.reduced_size());
  if (sys.reduced_size() > 0) {
    y = sys.factor->lu.solve(b);
    // one step of iterative refinement
    const Eigen::VectorXd r = b - sys.reduced * y;
    if (inf_norm(r) > 0) y += sys.factor->lu.solve(r);
  }

  Eigen::VectorXd x(sys.size());
  for (int i = 0; i < sys.reduced_size(); ++i) x[sys.free_dofs[i]] = y[i];
  for (std::size_t k = 0; k < sys.constrained.size(); ++k) x[sys.constrained[k]] = g[k];

  if (report) {
    const Eigen::VectorXd r = b - sys.reduced * y;
    const Eigen::VectorXd scale = sys.reduced.cwiseAbs() * y.cwiseAbs();
    const double denom = inf_norm(scale) + inf_norm(b);
    report->residual = denom > 0 ? inf_norm(r) / denom : 0.0;
  }
  if (!x.allFinite()) {
    throw SingularSystemError(deficient_block(sys, sys.factor.get()),
                              "solve produced non-finite values");
  }
  return x;
}

Eigen::VectorXd assemble_rhs(const Discretization& d, const BlockSystem& sys,
                             const ProblemData& data, double t) {
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(sys.size());
  auto put = [&](Field f, const Eigen::VectorXd& v) { rhs.segment(sys.offset(f), v.size()) += v; };
  if (data.f_f) put(Field::Uf, assemble_load(d.fluid, d.space(Field::Uf), data.f_f, t));
  if (data.q_f) put(Field::Pf, assemble_load(d.fluid, d.space(Field::Pf), data.q_f, t));
  if (data.f_p) put(Field::Us, assemble_load(d.poro, d.space(Field::Us), data.f_p, t));
  if (data.q_p) put(Field::Pp, assemble_load(d.poro, d.space(Field::Pp), data.q_p, t));
  if (data.pressure && !data.pressure_tags.empty()) {
    put(Field::Up, assemble_pressure_boundary_load(d.poro, d.space(Field::Up),
                                                   data.pressure_tags, data.pressure, t));
  }
  if (data.structure_velocity && !data.displacement_tags.empty()) {
    put(Field::SigmaP,
        assemble_velocity_boundary_load(d.poro, d.space(Field::SigmaP), data.displacement_tags,
                                        data.structure_velocity, t));
  }
  return rhs;
}

std::map<int, double> essential_values(const Discretization& d, const BlockSystem& sys,
                                       const ProblemData& data, double t) {
  std::map<int, double> out;
  for (Field f : kAllFields) {
    const bool any = std::any_of(data.essential.begin(), data.essential.end(),
                                 [f](const EssentialBC& bc) { return bc.field == f; });
    if (!any) continue;
    const auto c = apply_essential_bcs(d.mesh_of(f), d.space(f), data.essential, t);
    for (const auto& [dof, value] : c.values) out.emplace(sys.offset(f) + dof, value);
  }
  return out;
}

ConstraintResiduals constraint_residuals(const BlockSystem& sys, const SolutionState& state,
                                         const Eigen::VectorXd& rhs) {
  const Eigen::VectorXd r = sys.matrix * state.x - rhs;
  const Eigen::VectorXd scale = sys.matrix.cwiseAbs() * state.x.cwiseAbs() + rhs.cwiseAbs();
  auto rel = [&](std::initializer_list<Field> fields) {
    double num = 0.0, den = 0.0;
    for (Field f : fields) {
      num = std::max(num, inf_norm(r.segment(sys.offset(f), sys.field_size(f))));
      den = std::max(den, inf_norm(scale.segment(sys.offset(f), sys.field_size(f))));
    }
    return den > 0 ? num / den : 0.0;
  };
  return {rel({Field::GammaP}), rel({Field::Lambda}), rel({Field::Us})};
}

int step_count(double T, double dt) {
  if (!(dt > 0)) throw std::invalid_argument("dt must be positive");
  if (!(T >= 0)) throw std::invalid_argument("T must be non-negative");
  const double ratio = T / dt;
  const double n = std::round(ratio);
  if (std::abs(ratio - n) > 1e-9 * std::max(1.0, ratio)) {
    throw std::invalid_argument("T must be an integer multiple of dt");
  }
  return static_cast<int>(n);
}

TransientSolver::TransientSolver(const Discretization& disc, const PhysicalParams& params,
                                 ProblemData data, double dt, ExecPolicy policy)
    : disc_(&disc), data_(std::move(data)), ops_(assemble_operators(disc, params, policy)) {
  BlockSystem probe;
  probe.offsets[0] = 0;
  for (int f = 0; f < 9; ++f) {
    probe.offsets[f + 1] = probe.offsets[f] + disc.space(kAllFields[f]).num_dofs();
  }
  std::vector<int> constrained;
  for (const auto& [dof, value] : essential_values(disc, probe, data_, 0.0)) {
    constrained.push_back(dof);
    (void)value;
  }
  system_ = build_block_system(disc, ops_, dt, constrained);
  factorize(system_);
}

Eigen::VectorXd TransientSolver::step_rhs(const SolutionState& prev) const {
  const double t = prev.t + system_.dt;
  Eigen::VectorXd rhs = assemble_rhs(*disc_, system_, data_, t);
  rhs += (system_.e1 * prev.x) / system_.dt;
  return rhs;
}

SolutionState TransientSolver::step(const SolutionState& prev) const {
  if (prev.x.size() != system_.size()) throw std::invalid_argument("state size mismatch");
  SolutionState next;
  next.step = prev.step + 1;
  next.t = next.step * system_.dt;
  SolveReport report;
  next.x = solve(system_, step_rhs(prev), essential_values(*disc_, system_, data_, next.t),
                 &report);
  next.residual = report.residual;
  next.eta = prev.eta + system_.dt * next.field(system_, Field::Us);
  return next;
}

std::vector<SolutionState> run_transient(const TransientSolver& solver, SolutionState initial,
                                         int steps, const StepCallback& callback) {
  if (steps < 0) throw std::invalid_argument("step count must be non-negative");
  const BlockSystem& sys = solver.system();
  if (initial.eta.size() == 0) initial.eta = Eigen::VectorXd::Zero(sys.field_size(Field::Us));
  std::vector<SolutionState> states;
  states.reserve(steps + 1);
  states.push_back(std::move(initial));
  if (callback) callback(states.back());
  for (int n = 1; n <= steps; ++n) {
    states.push_back(solver.step(states.back()));
    if (callback) callback(states.back());
  }
  return states;
}

void recover_displacement(std::vector<SolutionState>& states, const BlockSystem& sys) {
  if (states.empty()) return;
  const int n = sys.field_size(Field::Us);
  if (states[0].eta.size() == 0) states[0].eta = Eigen::VectorXd::Zero(n);
  for (std::size_t k = 1; k < states.size(); ++k) {
    states[k].eta = states[k - 1].eta + sys.dt * states[k].field(sys, Field::Us);
  }
}

double energy_functional(const BlockSystem& sys, const SolutionState& state) {
  return 0.5 * state.x.dot(sys.e1 * state.x);
}

}  // namespace stokes_biot
