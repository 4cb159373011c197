#include "c0ip/control.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/SparseLU>

namespace c0ip {

namespace {

double integrate_square(const Triangulation& mesh, const ScalarField& g) {
  const auto& rule = triangle_rule_degree6();
  double s = 0.0;
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const CellGeometry cell(mesh, t);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const double v = g(cell.map(rule.points[q]));
      s += 2.0 * cell.area * rule.weights[q] * v * v;
    }
  }
  return s;
}

double ratio(double defect, double scale) { return scale > 0.0 ? defect / scale : defect; }

}  // namespace

std::pair<Vector, SolveReport> solve_clamped_plate(const Triangulation& mesh, const DofMap& dofs,
                                                   const ScalarField& f, const C0ipParams& params) {
  const SparseMatrix a = assemble_a_h(mesh, dofs, params);
  const Vector b = assemble_load(mesh, dofs, f);
  const std::vector<int> fixed = build_dofmap(mesh, SpaceKind::Vh).boundary_dofs;
  const ConstrainedSystem sys = constrain(a, b, fixed, Vector::Zero(static_cast<Eigen::Index>(fixed.size())));
  auto [x, report] = cholesky_solve(sys.matrix, sys.rhs);
  return {sys.expand(x), report};
}

DirichletControl::DirichletControl(Triangulation mesh, ControlProblem problem)
    : mesh_(std::move(mesh)), problem_(std::move(problem)) {
  validate(problem_.params);
  if (!(problem_.alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");
  dofs_ = build_dofmap(mesh_, SpaceKind::Qh);
  forms_ = assemble_forms(mesh_, dofs_, problem_.params);
  interior_ = build_dofmap(mesh_, SpaceKind::Vh).free_dofs();
  vh_factor_ = std::make_unique<CholeskyFactor>(submatrix(forms_.a, interior_, interior_));
  preconditioner_ = std::make_unique<CholeskyFactor>(SparseMatrix(problem_.alpha * forms_.a + forms_.mass));
  load_ = assemble_load(mesh_, dofs_, problem_.f);
  tracking_ = assemble_load(mesh_, dofs_, problem_.u_d);
  u_d_squared_ = integrate_square(mesh_, problem_.u_d);
}

DirichletControl::~DirichletControl() = default;
DirichletControl::DirichletControl(DirichletControl&&) noexcept = default;
DirichletControl& DirichletControl::operator=(DirichletControl&&) noexcept = default;

Vector DirichletControl::solve_vh(const Vector& rhs) const {
  Vector reduced(static_cast<Eigen::Index>(interior_.size()));
  for (std::size_t k = 0; k < interior_.size(); ++k) reduced[static_cast<Eigen::Index>(k)] = rhs[interior_[k]];
  const Vector x = vh_factor_->solve(reduced);
  Vector full = Vector::Zero(dofs_.n_dofs());
  for (std::size_t k = 0; k < interior_.size(); ++k) full[interior_[k]] = x[static_cast<Eigen::Index>(k)];
  return full;
}

Vector DirichletControl::forward_solve(const Vector& p) const { return solve_vh(load_ - forms_.a * p); }

Vector DirichletControl::lift(const Vector& p) const { return p + solve_vh(-(forms_.a * p)); }

Vector DirichletControl::adjoint_solve(const Vector& u) const { return solve_vh(forms_.mass * u - tracking_); }

double DirichletControl::objective(const Vector& p) const {
  const Vector u = forward_solve(p) + p;
  const double tracking = u.dot(forms_.mass * u) - 2.0 * u.dot(tracking_) + u_d_squared_;
  return 0.5 * tracking + 0.5 * problem_.alpha * p.dot(forms_.a * p);
}

Vector DirichletControl::reduced_gradient(const Vector& p) const {
  const Vector u = forward_solve(p) + p;
  const Vector phi = adjoint_solve(u);
  return problem_.alpha * (forms_.a * p) - forms_.a * phi + (forms_.mass * u - tracking_);
}

Vector DirichletControl::apply_reduced_hessian(const Vector& direction) const {
  const Vector w = lift(direction);
  const Vector mw = forms_.mass * w;
  const Vector phi = solve_vh(mw);
  return problem_.alpha * (forms_.a * direction) - forms_.a * phi + mw;
}

KktResiduals DirichletControl::residuals(const Vector& u_f, const Vector& phi, const Vector& q) const {
  const SparseMatrix& a = forms_.a;
  const Vector u = u_f + q;
  auto interior_norm = [&](const Vector& v) {
    double s = 0.0;
    for (int i : interior_) s += v[i] * v[i];
    return std::sqrt(s);
  };
  const Vector a_uf = a * u_f, a_q = a * q, a_phi = a * phi, m_u = forms_.mass * u;
  KktResiduals r;
  r.state = ratio(interior_norm(a_uf + a_q - load_),
                  interior_norm(a_uf) + interior_norm(a_q) + interior_norm(load_));
  r.adjoint = ratio(interior_norm(a_phi - m_u + tracking_),
                    interior_norm(a_phi) + interior_norm(m_u) + interior_norm(tracking_));
  const Vector gradient = problem_.alpha * a_q - a_phi + m_u - tracking_;
  r.gradient = ratio(gradient.norm(), problem_.alpha * a_q.norm() + a_phi.norm() + m_u.norm() + tracking_.norm());
  return r;
}

KktSolution DirichletControl::finish(Vector u_f, Vector phi, Vector q, SolveReport report) const {
  KktSolution s;
  s.residuals = residuals(u_f, phi, q);
  s.u_h = u_f + q;
  s.u_f_h = std::move(u_f);
  s.phi_h = std::move(phi);
  s.q_h = std::move(q);
  s.j_h = objective(s.q_h);
  s.report = std::move(report);
  return s;
}

KktSolution DirichletControl::solve(const KktOptions& options) const {
  // The gradient is affine in q: g(q) = H q + g(0).
  const Vector rhs = -reduced_gradient(Vector::Zero(dofs_.n_dofs()));
  CgOptions cg;
  cg.tolerance = options.tolerance;
  cg.max_iterations = options.max_iterations;
  if (options.precondition)
    cg.preconditioner = [this](const Vector& r) { return preconditioner_->solve(r); };
  auto [q, report] = cg_solve([this](const Vector& d) { return apply_reduced_hessian(d); }, rhs, cg);
  if (!report.success)
    throw SolverError("reduced KKT conjugate gradients stalled at relative residual " +
                      std::to_string(report.relative_residual) + " after " + std::to_string(report.iterations) +
                      " iterations");
  Vector u_f = forward_solve(q);
  Vector phi = adjoint_solve(u_f + q);
  return finish(std::move(u_f), std::move(phi), std::move(q), std::move(report));
}

KktSolution DirichletControl::solve_monolithic() const {
  // Unknowns: [u_f on interior dofs | φ on interior dofs | q on all dofs].
  const int ni = static_cast<int>(interior_.size());
  const int nq = dofs_.n_dofs();
  std::vector<int> interior_slot(nq, -1);
  for (int k = 0; k < ni; ++k) interior_slot[interior_[k]] = k;
  const int state_row = 0, adjoint_row = ni, gradient_row = 2 * ni;
  const int uf_col = 0, phi_col = ni, q_col = 2 * ni;

  std::vector<Eigen::Triplet<double>> entries;
  auto add_block = [&](const SparseMatrix& m, double scale, int row0, bool rows_interior, int col0, bool cols_interior) {
    for (int i = 0; i < m.outerSize(); ++i) {
      const int r = rows_interior ? interior_slot[i] : i;
      if (r < 0) continue;
      for (SparseMatrix::InnerIterator it(m, i); it; ++it) {
        const int c = cols_interior ? interior_slot[it.col()] : static_cast<int>(it.col());
        if (c >= 0) entries.emplace_back(row0 + r, col0 + c, scale * it.value());
      }
    }
  };
  const SparseMatrix& a = forms_.a;
  const SparseMatrix& m = forms_.mass;
  add_block(a, 1.0, state_row, true, uf_col, true);
  add_block(a, 1.0, state_row, true, q_col, false);
  add_block(a, 1.0, adjoint_row, true, phi_col, true);
  add_block(m, -1.0, adjoint_row, true, uf_col, true);
  add_block(m, -1.0, adjoint_row, true, q_col, false);
  add_block(a, problem_.alpha, gradient_row, false, q_col, false);
  add_block(a, -1.0, gradient_row, false, phi_col, true);
  add_block(m, 1.0, gradient_row, false, uf_col, true);
  add_block(m, 1.0, gradient_row, false, q_col, false);

  const int n = 2 * ni + nq;
  Eigen::SparseMatrix<double> block(n, n);
  block.setFromTriplets(entries.begin(), entries.end());
  Vector rhs = Vector::Zero(n);
  for (int k = 0; k < ni; ++k) {
    rhs[state_row + k] = load_[interior_[k]];
    rhs[adjoint_row + k] = -tracking_[interior_[k]];
  }
  rhs.segment(gradient_row, nq) = tracking_;

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(block);
  if (lu.info() != Eigen::Success) throw SolverError("monolithic KKT factorization failed");
  const Vector x = lu.solve(rhs);

  Vector u_f = Vector::Zero(nq), phi = Vector::Zero(nq);
  for (int k = 0; k < ni; ++k) {
    u_f[interior_[k]] = x[uf_col + k];
    phi[interior_[k]] = x[phi_col + k];
  }
  Vector q = x.segment(q_col, nq);
  SolveReport report;
  report.method = SolveReport::Method::cholesky;
  report.relative_residual = rhs.norm() > 0 ? (block * x - rhs).norm() / rhs.norm() : 0.0;
  report.success = true;
  return finish(std::move(u_f), std::move(phi), std::move(q), std::move(report));
}

}  // namespace c0ip
