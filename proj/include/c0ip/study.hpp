// Manufactured solutions, error norms against exact fields and estimated
// orders of convergence over uniformly refined mesh hierarchies.
#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "c0ip/fem.hpp"
#include "c0ip/forms.hpp"
#include "c0ip/mesh.hpp"

namespace c0ip {

/// Smooth field with the derivatives the error norms need.
struct ExactField {
  std::function<double(const Point&)> value;
  std::function<Eigen::Vector2d(const Point&)> gradient;
  std::function<Eigen::Matrix2d(const Point&)> hessian;
};

/// ‖v_h - u‖ in L2 by degree-6 quadrature.
double error_L2(const Triangulation& mesh, const DofMap& dofs, const Vector& v, const ScalarField& exact);

/// Broken ‖v_h - u‖_h: element Laplacian defects plus penalized normal
/// derivative jumps. The exact field only contributes on boundary edges.
double error_h(const Triangulation& mesh, const DofMap& dofs, const Vector& v, const ExactField& exact,
               const C0ipParams& params);

double error_energy(const Triangulation& mesh, const DofMap& dofs, const Vector& v, const ExactField& exact,
                    const C0ipParams& params);

/// error_h plus the edge term Σ_e |e| ‖{Δ(v_h - u)}‖²_e.
double error_Qh(const Triangulation& mesh, const DofMap& dofs, const Vector& v, const ExactField& exact,
                const C0ipParams& params);

/// rate_i = log(e_i / e_{i+1}) / log(h_i / h_{i+1}); NaN where an error is
/// not positive.
std::vector<double> eoc(const std::vector<double>& errors, const std::vector<double>& hs);

enum class ProblemKind { clamped_plate, dirichlet_control, cahn_hilliard };
enum class Norm { l2, h, energy, qh };

std::string_view to_string(ProblemKind kind);
std::string_view to_string(Norm norm);
ProblemKind parse_problem(std::string_view name);
Norm parse_norm(std::string_view name);

/// Data of one manufactured case on a given domain.
struct CaseData {
  /// Exact solution; absent for reference-solution studies.
  std::optional<ExactField> solution;
  ScalarField f;
  ScalarField u_d;
  ScalarField g1;
  ScalarField g2;
};

struct ManufacturedCase {
  std::string name;
  ProblemKind problem;
  std::string description;
  /// Domains the case is valid on; empty means any convex polygon.
  std::vector<std::string> domains;
  /// Expected order per norm on smooth domains, for reporting.
  std::vector<std::pair<Norm, double>> expected_eoc;
  std::function<CaseData(const Polygon&)> build;
};

const std::vector<ManufacturedCase>& manufactured_cases();
/// Throws std::invalid_argument for an unknown name.
const ManufacturedCase& find_case(std::string_view name);
std::string_view default_case(ProblemKind kind);

/// Π_i d_i(x)², d_i the distance to the line through polygon side i. Vanishes
/// with its gradient on the whole boundary.
ExactField boundary_bubble(const Polygon& polygon);

/// Outward unit normal of the polygon side nearest to x.
Point polygon_normal(const Polygon& polygon, const Point& x);

struct StudyOptions {
  int first_level = 1;
  int last_level = 4;
  C0ipParams params;
  double alpha = 0.1;
  /// Level of the reference solution for control self-convergence.
  int reference_level = 6;
  /// Cahn-Hilliard pin; defaults to the lexicographically smallest corner.
  std::optional<int> pinned_corner;
  std::vector<Norm> norms{Norm::l2, Norm::h, Norm::energy, Norm::qh};
};

struct ConvergenceRow {
  int level = 0;
  double h = 0.0;
  int n_dofs = 0;
  std::vector<double> errors;
  /// NaN on the first row.
  std::vector<double> eoc;
  int solver_iterations = 0;
  double seconds = 0.0;
  std::optional<double> compatibility_defect;
};

struct ConvergenceReport {
  std::string case_name;
  std::string domain;
  ProblemKind problem = ProblemKind::clamped_plate;
  std::vector<Norm> norms;
  std::vector<ConvergenceRow> rows;

  std::vector<double> errors(Norm norm) const;
  /// EOC between the last two rows.
  double final_eoc(Norm norm) const;
};

ConvergenceReport run_study(const ManufacturedCase& c, const Polygon& domain, const StudyOptions& options);

/// Header comment lines, then
/// level,h,ndofs,err_<norm>...,eoc_<norm>...,solver_iters,seconds
void write_csv(std::ostream& out, const ConvergenceReport& report, const std::vector<std::string>& comments);

}  // namespace c0ip
