/**
 * @file spaces.hpp
 * @brief The nine discrete field spaces, their DOF maps, essential conditions and interpolation.
 */
#pragma once

#include "stokes_biot/elements.hpp"
#include "stokes_biot/mesh.hpp"

#include <Eigen/Core>

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace stokes_biot {

/// Unknowns, in the order they are stacked in the monolithic system.
enum class Field : std::uint8_t { Uf, Theta, Up, SigmaP, Pp, Pf, Us, GammaP, Lambda };

inline constexpr std::array<Field, 9> kAllFields{Field::Uf, Field::Theta, Field::Up,
                                                 Field::SigmaP, Field::Pp, Field::Pf,
                                                 Field::Us, Field::GammaP, Field::Lambda};

const char* to_string(Field field);

enum class ElementKind : std::uint8_t {
  P0,                // cellwise constant scalar
  P0Vector,          // cellwise constant 2-vector
  P1,                // continuous piecewise linear scalar
  P1Disc,            // discontinuous piecewise linear scalar
  P1BubbleVector,    // MINI velocity: continuous P1 plus 27*l0*l1*l2 per component
  RT0,               // lowest-order Raviart-Thomas
  BDM1Tensor,        // two independent BDM1 rows
  EdgeP0,            // constant per interface edge
  EdgeP1DiscVector,  // discontinuous linear 2-vector per interface edge
};

struct SpaceSpec {
  Field field = Field::Uf;
  ElementKind kind = ElementKind::P0;
  int components = 1;
  Side side = Side::Fluid;
  bool multiplier = false;

  /// Element choice of the MINI / RT0-P0 / BDM1-P0-P1 discretization.
  static SpaceSpec standard(Field field);
};

/// Local-to-global numbering of one space.
///
/// Cells are mesh triangles, or for multiplier spaces the poro-side
/// interface edges sorted by x. Vector kinds are numbered component-major,
/// both locally and globally. H(div) kinds additionally store the change of
/// basis that makes the local functions globally oriented.
class DofMap {
 public:
  DofMap(const Mesh& mesh, const SpaceSpec& spec);

  const SpaceSpec& spec() const { return spec_; }
  int num_dofs() const { return num_dofs_; }
  int num_cells() const { return num_cells_; }
  int local_size() const { return local_size_; }

  std::span<const int> cell_dofs(int cell) const {
    return {dofs_.data() + static_cast<std::size_t>(cell) * local_size_,
            static_cast<std::size_t>(local_size_)};
  }
  const HdivOrientation& orientation(int triangle) const { return orientation_[triangle]; }

  /// For multiplier spaces: the interface trace whose segments are the cells.
  const InterfaceTrace& trace() const { return trace_; }

  /// Mask of the DOFs whose functionals live on edges carrying one of `tags`.
  std::vector<bool> boundary_mask(const Mesh& mesh, const std::vector<BoundaryTag>& tags) const;

 private:
  SpaceSpec spec_;
  int num_dofs_ = 0;
  int num_cells_ = 0;
  int local_size_ = 0;
  std::vector<int> dofs_;
  std::vector<HdivOrientation> orientation_;
  InterfaceTrace trace_;
};

DofMap build_dofmap(const Mesh& mesh, const SpaceSpec& spec);

/// Field components: scalar -> [0]; vector -> [0..1]; tensor row-major
/// [s11, s12, s21, s22]; rotation -> the r of [[0, r], [-r, 0]].
using FieldValue = Eigen::Vector4d;
using AnalyticField = std::function<FieldValue(const Point&, double)>;

struct EssentialBC {
  Field field = Field::Uf;
  std::vector<BoundaryTag> tags;
  AnalyticField value;
};

/// Constrained DOFs of one space with their prescribed values.
struct FieldConstraints {
  std::map<int, double> values;
};

/// Essential data is legal for the fluid velocity (nodal), the Darcy flux
/// (RT0 edge flux) and the poroelastic stress (BDM1 normal moments).
/// Throws std::invalid_argument on a conflicting double assignment.
FieldConstraints apply_essential_bcs(const Mesh& mesh, const DofMap& dofmap,
                                     const std::vector<EssentialBC>& bcs, double t);

/// Canonical interpolant: nodal values, edge normal moments or cell means.
Eigen::VectorXd interpolate(const Mesh& mesh, const DofMap& dofmap, const AnalyticField& f,
                            double t);

/// Value of a discrete field at reference point `xhat` of `cell`.
FieldValue evaluate(const Mesh& mesh, const DofMap& dofmap, const Eigen::VectorXd& coeffs,
                    int cell, const Vec2& xhat);

/// Gradient of a Lagrange field; vector fields give [d1 u1, d2 u1, d1 u2, d2 u2].
FieldValue evaluate_gradient(const Mesh& mesh, const DofMap& dofmap, const Eigen::VectorXd& coeffs,
                             int cell, const Vec2& xhat);

/// Divergence of an H(div) field; tensor fields give the row divergences in [0], [1].
FieldValue evaluate_divergence(const Mesh& mesh, const DofMap& dofmap,
                               const Eigen::VectorXd& coeffs, int cell, const Vec2& xhat);

/// Value of an interface field (multiplier space) at abscissa x of trace cell `cell`.
FieldValue evaluate_on_edge(const DofMap& dofmap, const Eigen::VectorXd& coeffs, int cell,
                            double x);

}  // namespace stokes_biot
