// Discrete optimality system of the energy-space Dirichlet boundary control
// problem, solved in reduced space by conjugate gradients on the control.
#pragma once

#include <memory>

#include "c0ip/fem.hpp"
#include "c0ip/forms.hpp"
#include "c0ip/linalg.hpp"
#include "c0ip/mesh.hpp"

namespace c0ip {

struct ControlProblem {
  ScalarField f;
  ScalarField u_d;
  double alpha = 0.1;
  C0ipParams params;
};

/// Relative defects of the state, adjoint and gradient equations.
struct KktResiduals {
  double state = 0.0;
  double adjoint = 0.0;
  double gradient = 0.0;

  double max() const { return std::max({state, adjoint, gradient}); }
};

struct KktSolution {
  Vector u_f_h;  ///< V_h
  Vector q_h;    ///< Q_h
  Vector phi_h;  ///< V_h
  Vector u_h;    ///< u_f_h + q_h
  double j_h = 0.0;
  KktResiduals residuals;
  SolveReport report;
};

struct KktOptions {
  double tolerance = 1e-10;
  int max_iterations = 20000;
  /// Precondition the reduced operator with α a_h + mass on Q_h.
  bool precondition = true;
};

/// Clamped plate: a_h(u, w) = (f, w) for all w in V_h. Returns a Q_h-length
/// vector with zero boundary entries.
std::pair<Vector, SolveReport> solve_clamped_plate(const Triangulation& mesh, const DofMap& dofs,
                                                   const ScalarField& f, const C0ipParams& params);

/// Owns the assembled forms and one Cholesky factor of a_h restricted to
/// V_h, which every state, lift and adjoint solve reuses.
class DirichletControl {
 public:
  /// Throws std::invalid_argument for α <= 0 or σ < 1, DefinitenessError
  /// when a_h is not positive definite on V_h.
  DirichletControl(Triangulation mesh, ControlProblem problem);
  ~DirichletControl();
  DirichletControl(DirichletControl&&) noexcept;
  DirichletControl& operator=(DirichletControl&&) noexcept;

  const Triangulation& mesh() const { return mesh_; }
  const DofMap& dofs() const { return dofs_; }
  const AssembledForms& forms() const { return forms_; }
  const ControlProblem& problem() const { return problem_; }

  /// v_h(f, p): a_h(v, w) = (f, w) - a_h(p, w) for all w in V_h.
  Vector forward_solve(const Vector& p) const;
  /// w_h + p with a_h(w_h, v) = -a_h(p, v) for all v in V_h.
  Vector lift(const Vector& p) const;
  /// φ_h: a_h(φ, v) = (u - u_d, v) for all v in V_h.
  Vector adjoint_solve(const Vector& u) const;

  /// ½ ‖u - u_d‖² + (α/2) a_h(p, p) with u = v_h(f, p) + p.
  double objective(const Vector& p) const;
  /// Defect of the gradient equation as a vector on Q_h; it is the
  /// gradient of `objective`.
  Vector reduced_gradient(const Vector& p) const;
  /// Reduced Hessian applied to a direction; two V_h solves.
  Vector apply_reduced_hessian(const Vector& direction) const;

  KktSolution solve(const KktOptions& options = {}) const;
  /// Assembles the full block system and solves it by sparse LU.
  KktSolution solve_monolithic() const;

  KktResiduals residuals(const Vector& u_f, const Vector& phi, const Vector& q) const;

 private:
  Vector solve_vh(const Vector& rhs) const;
  KktSolution finish(Vector u_f, Vector phi, Vector q, SolveReport report) const;

  Triangulation mesh_;
  ControlProblem problem_;
  DofMap dofs_;
  AssembledForms forms_;
  std::vector<int> interior_;
  std::unique_ptr<CholeskyFactor> vh_factor_;
  std::unique_ptr<CholeskyFactor> preconditioner_;
  Vector load_;      ///< (f, N_i)
  Vector tracking_;  ///< (u_d, N_i)
  double u_d_squared_ = 0.0;
};

}  // namespace c0ip
