// Elliptic fourth-order problem with Cahn-Hilliard type boundary conditions
//   Δ²ψ = g1 in Ω,  ∂ψ/∂n = 0 and ∂(Δψ)/∂n = g2 on ∂Ω,
// solved on the quadratic space with the value at one corner pinned to 0.
#pragma once

#include <optional>
#include <stdexcept>

#include "c0ip/fem.hpp"
#include "c0ip/forms.hpp"
#include "c0ip/linalg.hpp"
#include "c0ip/mesh.hpp"

namespace c0ip {

class CompatibilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ChProblem {
  ScalarField g1;
  ScalarField g2;
  /// Mesh vertex id of the pinned corner; defaults to the lexicographically
  /// smallest polygon corner.
  std::optional<int> pinned_corner;
  C0ipParams params;
};

struct ChSolution {
  Vector psi_h;
  int pinned_dof = -1;
  /// Relative residual against every unpinned basis function.
  double residual = 0.0;
  SolveReport report;
};

/// ∫_Ω g1 - ∫_∂Ω g2 by quadrature.
double check_compatibility(const Triangulation& mesh, const ScalarField& g1, const ScalarField& g2);

/// Corner vertex with the smallest (x, y), compared lexicographically.
int default_pinned_corner(const Triangulation& mesh);

class CahnHilliard {
 public:
  /// Throws CompatibilityError when |∫g1 - ∫g2| > 1e-8 (‖g1‖ + ‖g2‖ + 1).
  CahnHilliard(Triangulation mesh, ChProblem problem);

  double compatibility_defect() const { return defect_; }
  /// Defect lies in [1e-10, 1e-8] of the tolerance scale.
  bool compatibility_warning() const { return warning_; }
  int pinned_dof() const { return pinned_; }
  const Triangulation& mesh() const { return mesh_; }
  const DofMap& dofs() const { return dofs_; }

  /// Throws DefinitenessError when the pinned system is not positive definite.
  ChSolution solve() const;

 private:
  Triangulation mesh_;
  ChProblem problem_;
  DofMap dofs_;
  double defect_ = 0.0;
  bool warning_ = false;
  int pinned_ = -1;
};

}  // namespace c0ip
