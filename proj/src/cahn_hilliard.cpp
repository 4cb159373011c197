#include "c0ip/cahn_hilliard.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace c0ip {

namespace {

struct Integrals {
  double interior = 0.0;
  double boundary = 0.0;
  double interior_l2 = 0.0;
  double boundary_l2 = 0.0;
};

Integrals integrate(const Triangulation& mesh, const ScalarField& g1, const ScalarField& g2) {
  Integrals s;
  const auto& tri = triangle_rule_high_order();
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const CellGeometry cell(mesh, t);
    for (std::size_t q = 0; q < tri.points.size(); ++q) {
      const double v = g1(cell.map(tri.points[q]));
      const double w = 2.0 * cell.area * tri.weights[q];
      s.interior += w * v;
      s.interior_l2 += w * v * v;
    }
  }
  const auto& line = interval_rule_degree9();
  for (const Edge& e : mesh.edges) {
    if (!e.is_boundary()) continue;
    const Point a = mesh.vertices[e.vertices[0]];
    const Point d = mesh.vertices[e.vertices[1]] - a;
    for (std::size_t q = 0; q < line.points.size(); ++q) {
      const double v = g2(a + line.points[q].x() * d);
      const double w = line.weights[q] * e.length;
      s.boundary += w * v;
      s.boundary_l2 += w * v * v;
    }
  }
  s.interior_l2 = std::sqrt(s.interior_l2);
  s.boundary_l2 = std::sqrt(s.boundary_l2);
  return s;
}

}  // namespace

double check_compatibility(const Triangulation& mesh, const ScalarField& g1, const ScalarField& g2) {
  const Integrals s = integrate(mesh, g1, g2);
  return s.interior - s.boundary;
}

int default_pinned_corner(const Triangulation& mesh) {
  if (mesh.corner_vertices.empty()) throw MeshError("mesh has no corner vertices");
  return *std::min_element(mesh.corner_vertices.begin(), mesh.corner_vertices.end(), [&](int a, int b) {
    const Point& pa = mesh.vertices[a];
    const Point& pb = mesh.vertices[b];
    return std::pair(pa.x(), pa.y()) < std::pair(pb.x(), pb.y());
  });
}

CahnHilliard::CahnHilliard(Triangulation mesh, ChProblem problem)
    : mesh_(std::move(mesh)), problem_(std::move(problem)) {
  validate(problem_.params);
  dofs_ = build_dofmap(mesh_, SpaceKind::Qh);
  pinned_ = problem_.pinned_corner.value_or(default_pinned_corner(mesh_));
  if (std::find(mesh_.corner_vertices.begin(), mesh_.corner_vertices.end(), pinned_) == mesh_.corner_vertices.end())
    throw MeshError("pinned vertex " + std::to_string(pinned_) + " is not a corner of the domain");

  const Integrals s = integrate(mesh_, problem_.g1, problem_.g2);
  defect_ = s.interior - s.boundary;
  const double scale = s.interior_l2 + s.boundary_l2 + 1.0;
  if (std::abs(defect_) > 1e-8 * scale) {
    std::ostringstream msg;
    msg << "incompatible data: integral of g1 minus boundary integral of g2 is " << defect_;
    throw CompatibilityError(msg.str());
  }
  warning_ = std::abs(defect_) >= 1e-10 * scale;
}

ChSolution CahnHilliard::solve() const {
  const SparseMatrix a = assemble_a_h(mesh_, dofs_, problem_.params);
  const Vector rhs = assemble_load(mesh_, dofs_, problem_.g1) - assemble_boundary_load(mesh_, dofs_, problem_.g2);
  const ConstrainedSystem sys = constrain(a, rhs, {pinned_}, Vector::Zero(1));

  ChSolution sol;
  auto [x, report] = cholesky_solve(sys.matrix, sys.rhs);
  sol.psi_h = sys.expand(x);
  sol.pinned_dof = pinned_;
  const Vector defect = sys.restrict(a * sol.psi_h - rhs);
  const double scale = sys.rhs.norm();
  sol.residual = scale > 0.0 ? defect.norm() / scale : defect.norm();
  sol.report = std::move(report);
  return sol;
}

}  // namespace c0ip
