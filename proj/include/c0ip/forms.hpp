// The C0 interior penalty bilinear form, mass and load assembly, and the
// mesh-dependent norms on the quadratic Lagrange space.
#pragma once

#include <vector>

#include <Eigen/Core>

#include "c0ip/fem.hpp"
#include "c0ip/linalg.hpp"
#include "c0ip/mesh.hpp"

namespace c0ip {

/// Sign in front of the two edge terms pairing {Δ·} with [∂·/∂n].
/// With the jump taken as the sum of outward normal derivatives, `minus`
/// is the choice consistent with the biharmonic operator; `plus` keeps
/// both terms positive.
enum class ConsistencySign { plus = 1, minus = -1 };

struct C0ipParams {
  /// Penalty parameter, σ >= 1.
  double sigma = 5.0;
  ConsistencySign consistency = ConsistencySign::minus;

  double consistency_factor() const { return static_cast<double>(static_cast<int>(consistency)); }
};

/// Throws std::invalid_argument when σ < 1.
void validate(const C0ipParams& params);

/// Jump and mean data of every basis function touching one edge.
///
/// Interior edges: jump(q, i) = ∇N_i|T+ · n+ + ∇N_i|T- · n-, mean(i) is the
/// average of the two constant Laplacians. Boundary edges use the one-sided
/// values ∇N_i · n_e and ΔN_i. Quadrature points run from the lower to the
/// higher vertex id; weights include the edge length.
struct EdgeStencil {
  std::vector<int> dofs;
  Eigen::MatrixXd jump;
  Eigen::VectorXd mean;
  std::vector<Point> points;
  std::vector<double> weights;
};

EdgeStencil edge_stencil(const Triangulation& mesh, const DofMap& dofs, int edge);

/// a_h on Q_h x Q_h. Requires edges to be built.
SparseMatrix assemble_a_h(const Triangulation& mesh, const DofMap& dofs, const C0ipParams& params);

SparseMatrix assemble_mass(const Triangulation& mesh, const DofMap& dofs);

/// b_i = ∫_Ω f N_i.
Vector assemble_load(const Triangulation& mesh, const DofMap& dofs, const ScalarField& f);

/// b_i = Σ over boundary edges of ∫_e g N_i ds.
Vector assemble_boundary_load(const Triangulation& mesh, const DofMap& dofs, const ScalarField& g);

/// ‖v‖_h² = Σ_T ‖Δv‖²_T + Σ_e σ/|e| ‖[∂v/∂n]‖²_e
double norm_h(const Vector& v, const Triangulation& mesh, const DofMap& dofs, const C0ipParams& params);

/// sqrt(‖v‖_h² + ‖v‖²_{L2})
double norm_energy(const Vector& v, const Triangulation& mesh, const DofMap& dofs, const C0ipParams& params);

/// ‖v‖_h² plus Σ_e |e| ‖{Δv}‖²_e
double norm_Qh(const Vector& v, const Triangulation& mesh, const DofMap& dofs, const C0ipParams& params);

struct AssembledForms {
  SparseMatrix a;
  SparseMatrix mass;
  int level = 0;
  double sigma = 0.0;
  int n_dofs = 0;
};

AssembledForms assemble_forms(const Triangulation& mesh, const DofMap& dofs, const C0ipParams& params);

}  // namespace c0ip
