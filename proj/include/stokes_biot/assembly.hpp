/**
 * @file assembly.hpp
 * @brief Sparse assembly of the Stokes, Darcy, elasticity and interface bilinear forms.
 *
 * Every operator is stored as [test dof, trial dof]. Interface normals are
 * fixed for the flat interface y = 0: n_p = (0, 1), n_f = (0, -1), and the
 * single tangent is t = (1, 0).
 */
#pragma once

#include "stokes_biot/mesh.hpp"
#include "stokes_biot/parallel.hpp"
#include "stokes_biot/quadrature.hpp"
#include "stokes_biot/spaces.hpp"

#include <Eigen/SparseCore>

namespace stokes_biot {

struct PhysicalParams {
  double mu = 1.0;                  // fluid viscosity
  Mat2 K = Mat2::Identity();        // permeability
  double alpha = 1.0;               // Biot-Willis constant
  double alpha_bjs = 1.0;           // slip friction coefficient
  double s0 = 1.0;                  // storativity
  double lambda_p = 1.0;            // Lame parameters of the skeleton
  double mu_p = 1.0;

  /// Throws std::invalid_argument naming the first offending parameter.
  void validate() const;

  /// Compliance A applied to a full 2x2 matrix; on skew inputs it is tau / (2 mu_p).
  Mat2 compliance(const Mat2& tau) const;
  /// Bounds a_min, a_max of A on symmetric matrices.
  double a_min() const { return 1.0 / (2.0 * mu_p + 2.0 * lambda_p); }
  double a_max() const { return 1.0 / (2.0 * mu_p); }
  /// mu * alpha_BJS / sqrt(t . K t) for t = (1, 0).
  double bjs_coefficient() const;
};

struct SparseOperator {
  Field row_field = Field::Uf;
  Field col_field = Field::Uf;
  Eigen::SparseMatrix<double> matrix;

  int rows() const { return static_cast<int>(matrix.rows()); }
  int cols() const { return static_cast<int>(matrix.cols()); }
};

/// a_f(u, v) = (2 mu D(u), D(v)).
SparseOperator assemble_af(const Mesh& fluid, const DofMap& uf, double mu,
                           ExecPolicy policy = ExecPolicy::Parallel);
/// b_f(v, w) = -(div v, w), stored [w, v].
SparseOperator assemble_bf(const Mesh& fluid, const DofMap& uf, const DofMap& pf,
                           ExecPolicy policy = ExecPolicy::Parallel);
/// a_p(u, v) = (mu K^-1 u, v).
SparseOperator assemble_ap(const Mesh& poro, const DofMap& up, double mu, const Mat2& K,
                           ExecPolicy policy = ExecPolicy::Parallel);
/// b_p(v, w) = -(div v, w), stored [w, v].
SparseOperator assemble_bp(const Mesh& poro, const DofMap& up, const DofMap& pp,
                           ExecPolicy policy = ExecPolicy::Parallel);

/// a_e(sigma, p; tau, w) + a_p^p(p, w) split into its four blocks.
struct ElasticStorageBlocks {
  SparseOperator ss;  // (A sigma, tau)
  SparseOperator sp;  // (A alpha p I, tau)          [tau, p]
  SparseOperator ps;  // (A sigma, alpha w I)        [w, sigma]
  SparseOperator pp;  // (A alpha p I, alpha w I) + (s0 p, w)
};

ElasticStorageBlocks assemble_ae_app(const Mesh& poro, const DofMap& sigma, const DofMap& pp,
                                     const PhysicalParams& params,
                                     ExecPolicy policy = ExecPolicy::Parallel);

struct StressCouplingBlocks {
  SparseOperator bs;   // (div tau, v_s)   [v_s, tau]
  SparseOperator bsk;  // (tau, chi)       [chi, tau]
};

StressCouplingBlocks assemble_bs_bsk(const Mesh& poro, const DofMap& sigma, const DofMap& us,
                                     const DofMap& gamma,
                                     ExecPolicy policy = ExecPolicy::Parallel);

struct InterfaceBlocks {
  SparseOperator bnp;      // <tau n_p, phi>               [theta, sigma]
  SparseOperator bjs_ff;   // a_BJS(u, 0; v, 0)            [u_f, u_f]
  SparseOperator bjs_sf;   // a_BJS(u, 0; 0, phi)          [theta, u_f]
  SparseOperator bjs_ss;   // a_BJS(0, theta; 0, phi)      [theta, theta]
  SparseOperator bgf;      // <v_f . n_f, xi>              [lambda, u_f]
  SparseOperator bgs;      // <phi . n_p, xi>              [lambda, theta]
  SparseOperator bgp;      // <v_p . n_p, xi>              [lambda, u_p]
};

/// Mortar forms integrated segment by segment on the merged trace partition.
InterfaceBlocks assemble_interface(const MergedTrace& trace, const Mesh& fluid,
                                   const Mesh& poro, const DofMap& uf, const DofMap& up,
                                   const DofMap& sigma, const DofMap& theta,
                                   const DofMap& lambda, const PhysicalParams& params,
                                   int quadrature_degree = kInterfaceQuadratureDegree);

/// (f, v) for the volume spaces (vector fields use components [0], [1]).
Eigen::VectorXd assemble_load(const Mesh& mesh, const DofMap& dofmap, const AnalyticField& f,
                              double t);

/// -<v_p . n, g> over boundary edges with the given tags (natural pressure data).
Eigen::VectorXd assemble_pressure_boundary_load(const Mesh& poro, const DofMap& up,
                                                const std::vector<BoundaryTag>& tags,
                                                const AnalyticField& g, double t);

/// <tau n, g> over boundary edges with the given tags (natural structure velocity data).
Eigen::VectorXd assemble_velocity_boundary_load(const Mesh& poro, const DofMap& sigma,
                                                const std::vector<BoundaryTag>& tags,
                                                const AnalyticField& g, double t);

/// Locate x on edge `edge` of triangle `tri`: reference coordinates of x.
Vec2 reference_point(const Mesh& mesh, int tri, const Point& x);

}  // namespace stokes_biot
