/**
 * @file system.hpp
 * @brief Monolithic backward Euler system, direct solve, displacement recovery and energy.
 *
 * Unknowns are stacked field by field as (u_f, theta, u_p, sigma_p, p_p | p_f, u_s,
 * gamma_p, lambda). The matrix  E1/dt + A  (with the constraint blocks) does not
 * depend on time, so a run factors it once.
 */
#pragma once

#include "stokes_biot/assembly.hpp"
#include "stokes_biot/mesh.hpp"
#include "stokes_biot/spaces.hpp"

#include <Eigen/SparseCore>

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <vector>

namespace stokes_biot {

/// Meshes, the merged interface partition and the nine spaces of one run.
struct Discretization {
  Mesh fluid;
  Mesh poro;
  MergedTrace trace;
  std::vector<DofMap> spaces;  // indexed by Field

  const DofMap& space(Field f) const { return spaces[static_cast<int>(f)]; }
  const Mesh& mesh_of(Field f) const {
    return space(f).spec().side == Side::Fluid ? fluid : poro;
  }
};

/// `rotation` selects P1 (continuous) or P1Disc for gamma_p.
Discretization make_discretization(Mesh fluid, Mesh poro,
                                   ElementKind rotation = SpaceSpec::standard(Field::GammaP).kind);

struct AssembledOperators {
  SparseOperator af, bf, ap, bp;
  ElasticStorageBlocks elastic;
  StressCouplingBlocks stress;
  InterfaceBlocks interface;
};

AssembledOperators assemble_operators(const Discretization& disc, const PhysicalParams& params,
                                      ExecPolicy policy = ExecPolicy::Parallel);

/// Raised when the factorization breaks down; `field` is the first deficient block.
class SingularSystemError : public std::runtime_error {
 public:
  SingularSystemError(Field field, const std::string& what)
      : std::runtime_error(what), field_(field) {}
  Field field() const { return field_; }

 private:
  Field field_;
};

class Factorization;

struct BlockSystem {
  std::array<int, 10> offsets{};  // offsets[f] .. offsets[f+1] hold field f
  double dt = 0.0;
  Eigen::SparseMatrix<double> matrix;  // full size, before elimination
  Eigen::SparseMatrix<double> e1;      // full size, unscaled storage operator
  std::vector<int> constrained;        // sorted global indices fixed by essential data
  std::vector<int> reduced_index;      // global -> index among free unknowns, or -1
  std::vector<int> free_dofs;          // reduced -> global
  Eigen::SparseMatrix<double> reduced;   // free x free
  Eigen::SparseMatrix<double> coupling;  // free x constrained
  std::shared_ptr<Factorization> factor;

  int size() const { return offsets[9]; }
  int reduced_size() const { return static_cast<int>(free_dofs.size()); }
  int offset(Field f) const { return offsets[static_cast<int>(f)]; }
  int field_size(Field f) const {
    return offsets[static_cast<int>(f) + 1] - offsets[static_cast<int>(f)];
  }
  Field field_of(int global) const;
};

/// Throws std::invalid_argument on dimension mismatch or dt <= 0.
BlockSystem build_block_system(const Discretization& disc, const AssembledOperators& ops,
                               double dt, const std::vector<int>& constrained);

/// LU with pivoting of the reduced matrix. Throws SingularSystemError.
void factorize(BlockSystem& system);

struct SolveReport {
  double residual = 0.0;  // ||r||_inf / (|| |M| |x| ||_inf + ||b||_inf)
};

/// Solve M x = rhs with x fixed to `fixed` on the constrained set.
Eigen::VectorXd solve(const BlockSystem& system, const Eigen::VectorXd& rhs,
                      const std::map<int, double>& fixed, SolveReport* report = nullptr);

/// Data of the right-hand side. Empty fields are zero.
struct ProblemData {
  AnalyticField f_f, q_f, f_p, q_p;
  std::vector<BoundaryTag> pressure_tags;  // natural p_p on these poro sides
  AnalyticField pressure;
  std::vector<BoundaryTag> displacement_tags;  // natural u_s on these poro sides
  AnalyticField structure_velocity;
  std::vector<EssentialBC> essential;
};

/// F(t): loads and natural boundary terms, without the history term.
Eigen::VectorXd assemble_rhs(const Discretization& disc, const BlockSystem& system,
                             const ProblemData& data, double t);

/// Global index -> value for all essential conditions at time t.
std::map<int, double> essential_values(const Discretization& disc, const BlockSystem& system,
                                       const ProblemData& data, double t);

struct SolutionState {
  int step = 0;
  double t = 0.0;
  Eigen::VectorXd x;    // all nine fields
  Eigen::VectorXd eta;  // displacement, P0 vector like u_s
  double residual = 0.0;

  Eigen::VectorXd field(const BlockSystem& system, Field f) const {
    return x.segment(system.offset(f), system.field_size(f));
  }
};

/// Residuals of rows that must hold exactly at every step, each relative to
/// the size of the terms in those rows.
struct ConstraintResiduals {
  double weak_symmetry = 0.0;  // B_sk sigma
  double interface = 0.0;      // b_Gamma row
  double momentum = 0.0;       // B_s sigma + (f_p, v_s)
};

ConstraintResiduals constraint_residuals(const BlockSystem& system, const SolutionState& state,
                                         const Eigen::VectorXd& rhs);

/// Number of steps T / dt; throws unless it is a non-negative integer.
int step_count(double T, double dt);

class TransientSolver {
 public:
  TransientSolver(const Discretization& disc, const PhysicalParams& params, ProblemData data,
                  double dt, ExecPolicy policy = ExecPolicy::Parallel);

  const Discretization& discretization() const { return *disc_; }
  const AssembledOperators& operators() const { return ops_; }
  const BlockSystem& system() const { return system_; }
  const ProblemData& data() const { return data_; }
  double dt() const { return system_.dt; }

  /// Backward Euler step from `prev` to t = prev.t + dt.
  SolutionState step(const SolutionState& prev) const;
  /// F(t_n) plus E1 p^{n-1} / dt.
  Eigen::VectorXd step_rhs(const SolutionState& prev) const;

 private:
  const Discretization* disc_;
  ProblemData data_;
  AssembledOperators ops_;
  BlockSystem system_;
};

using StepCallback = std::function<void(const SolutionState&)>;

/// Returns steps + 1 states starting with `initial`. The displacement is
/// recovered along the way.
std::vector<SolutionState> run_transient(const TransientSolver& solver, SolutionState initial,
                                         int steps, const StepCallback& callback = {});

/// eta^n = eta^{n-1} + dt u_s^n, starting from states[0].eta.
void recover_displacement(std::vector<SolutionState>& states, const BlockSystem& system);

/// 1/2 || A^{1/2} (sigma + alpha p I) ||^2 + 1/2 s0 || p ||^2.
double energy_functional(const BlockSystem& system, const SolutionState& state);

}  // namespace stokes_biot
