#include "c0ip/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <ostream>
#include <random>

#include <Eigen/SparseCholesky>

namespace c0ip {

std::vector<int> reverse_cuthill_mckee(const SparseMatrix& pattern) {
  const int n = static_cast<int>(pattern.rows());
  std::vector<std::vector<int>> adj(n);
  for (int i = 0; i < n; ++i)
    for (SparseMatrix::InnerIterator it(pattern, i); it; ++it)
      if (it.col() != i) adj[i].push_back(static_cast<int>(it.col()));
  auto degree = [&](int i) { return adj[i].size(); };

  std::vector<int> order;
  order.reserve(n);
  std::vector<bool> seen(n, false);
  auto bfs = [&](int root, std::vector<int>& visit, std::vector<int>& depth) {
    visit.clear();
    depth.assign(n, -1);
    std::deque<int> queue{root};
    depth[root] = 0;
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop_front();
      visit.push_back(v);
      std::vector<int> next;
      for (int w : adj[v])
        if (depth[w] < 0) {
          depth[w] = depth[v] + 1;
          next.push_back(w);
        }
      std::stable_sort(next.begin(), next.end(), [&](int a, int b) { return degree(a) < degree(b); });
      queue.insert(queue.end(), next.begin(), next.end());
    }
  };

  std::vector<int> visit, depth;
  for (int start = 0; start < n; ++start) {
    if (seen[start]) continue;
    // Pseudo-peripheral root: repeatedly jump to a minimum-degree node of
    // the deepest level until eccentricity stops growing.
    int root = start;
    bfs(root, visit, depth);
    int eccentricity = depth[visit.back()];
    for (int sweep = 0; sweep < 8; ++sweep) {
      int candidate = visit.back();
      for (int v : visit)
        if (depth[v] == eccentricity && degree(v) < degree(candidate)) candidate = v;
      std::vector<int> trial_visit, trial_depth;
      bfs(candidate, trial_visit, trial_depth);
      const int trial_ecc = trial_depth[trial_visit.back()];
      if (trial_ecc <= eccentricity) break;
      root = candidate;
      eccentricity = trial_ecc;
      visit.swap(trial_visit);
      depth.swap(trial_depth);
    }
    for (int v : visit) {
      seen[v] = true;
      order.push_back(v);
    }
  }
  std::reverse(order.begin(), order.end());
  return order;
}

struct CholeskyFactor::Impl {
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>, Eigen::Lower, RcmOrdering<int>> llt;
};

CholeskyFactor::CholeskyFactor(const SparseMatrix& a) : impl_(std::make_unique<Impl>()), n_(a.rows()) {
  if (a.rows() != a.cols()) throw SolverError("Cholesky factorization needs a square matrix");
  if (n_ == 0) return;
  impl_->llt.compute(Eigen::SparseMatrix<double>(a));
  if (impl_->llt.info() != Eigen::Success)
    throw DefinitenessError("Cholesky factorization met a non-positive pivot; the matrix is not positive definite");
}

CholeskyFactor::~CholeskyFactor() = default;
CholeskyFactor::CholeskyFactor(CholeskyFactor&&) noexcept = default;
CholeskyFactor& CholeskyFactor::operator=(CholeskyFactor&&) noexcept = default;

Vector CholeskyFactor::solve(const Vector& b) const {
  if (n_ == 0) return Vector(0);
  if (b.isZero(0.0)) return Vector::Zero(n_);
  return impl_->llt.solve(b);
}

Eigen::Index CholeskyFactor::factor_nonzeros() const {
  if (n_ == 0) return 0;
  return Eigen::SparseMatrix<double>(impl_->llt.matrixL()).nonZeros();
}

std::pair<Vector, SolveReport> cholesky_solve(const SparseMatrix& a, const Vector& b) {
  const CholeskyFactor factor(a);
  Vector x = factor.solve(b);
  SolveReport report;
  report.method = SolveReport::Method::cholesky;
  const double bnorm = b.norm();
  report.relative_residual = bnorm > 0 ? (a * x - b).norm() / bnorm : 0.0;
  report.success = report.relative_residual <= 1e-10;
  return {std::move(x), report};
}

std::pair<Vector, SolveReport> cg_solve(const LinearOperator& apply, const Vector& b, const CgOptions& options) {
  SolveReport report;
  report.method = SolveReport::Method::cg;
  Vector x = Vector::Zero(b.size());
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    report.success = true;
    return {x, report};
  }
  if (options.check_symmetry) {
    std::mt19937 rng(12345);
    std::normal_distribution<double> normal;
    Vector u(b.size()), v(b.size());
    for (auto& c : u) c = normal(rng);
    for (auto& c : v) c = normal(rng);
    const Vector au = apply(u), av = apply(v);
    const double defect = std::abs(au.dot(v) - u.dot(av));
    if (defect > 1e-8 * au.norm() * v.norm())
      throw SolverError("conjugate gradients: operator is not symmetric (defect " + std::to_string(defect) + ")");
  }

  auto precondition = [&](const Vector& r) { return options.preconditioner ? options.preconditioner(r) : r; };
  Vector r = b;
  Vector z = precondition(r);
  Vector p = z;
  double rz = r.dot(z);
  report.relative_residual = 1.0;
  while (report.iterations < options.max_iterations) {
    const Vector ap = apply(p);
    const double curvature = p.dot(ap);
    if (!(curvature > 0.0))
      throw SolverError("conjugate gradients: non-positive curvature at iteration " +
                        std::to_string(report.iterations));
    const double step = rz / curvature;
    x += step * p;
    r -= step * ap;
    ++report.iterations;
    report.relative_residual = r.norm() / bnorm;
    report.history.push_back(report.relative_residual);
    if (report.relative_residual <= options.tolerance) break;
    z = precondition(r);
    const double rz_next = r.dot(z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
  }
  report.success = report.relative_residual <= options.tolerance;
  return {std::move(x), report};
}

SparseMatrix submatrix(const SparseMatrix& a, const std::vector<int>& rows, const std::vector<int>& cols) {
  std::vector<int> col_map(a.cols(), -1);
  for (std::size_t j = 0; j < cols.size(); ++j) col_map[cols[j]] = static_cast<int>(j);
  std::vector<Eigen::Triplet<double>> entries;
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (SparseMatrix::InnerIterator it(a, rows[i]); it; ++it)
      if (const int j = col_map[it.col()]; j >= 0) entries.emplace_back(static_cast<int>(i), j, it.value());
  SparseMatrix s(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  s.setFromTriplets(entries.begin(), entries.end());
  return s;
}

ConstrainedSystem constrain(const SparseMatrix& a, const Vector& b, const std::vector<int>& fixed_dofs,
                            const Vector& fixed_values) {
  if (fixed_values.size() != static_cast<Eigen::Index>(fixed_dofs.size()))
    throw SolverError("constrain: one value per fixed dof required");
  ConstrainedSystem sys;
  sys.full_size = a.rows();
  std::vector<bool> is_fixed(a.rows(), false);
  for (int d : fixed_dofs) is_fixed.at(d) = true;
  for (int i = 0; i < a.rows(); ++i)
    if (is_fixed[i]) sys.fixed_dofs.push_back(i);
    else sys.free_dofs.push_back(i);
  // Fixed values follow the sorted order of fixed_dofs.
  sys.fixed_values.resize(static_cast<Eigen::Index>(sys.fixed_dofs.size()));
  for (std::size_t k = 0; k < fixed_dofs.size(); ++k) {
    const auto pos = std::lower_bound(sys.fixed_dofs.begin(), sys.fixed_dofs.end(), fixed_dofs[k]);
    sys.fixed_values[pos - sys.fixed_dofs.begin()] = fixed_values[static_cast<Eigen::Index>(k)];
  }
  sys.matrix = submatrix(a, sys.free_dofs, sys.free_dofs);
  sys.rhs = sys.restrict(b);
  if (!sys.fixed_dofs.empty())
    sys.rhs -= submatrix(a, sys.free_dofs, sys.fixed_dofs) * sys.fixed_values;
  return sys;
}

Vector ConstrainedSystem::expand(const Vector& reduced) const {
  Vector full(full_size);
  for (std::size_t k = 0; k < free_dofs.size(); ++k) full[free_dofs[k]] = reduced[static_cast<Eigen::Index>(k)];
  for (std::size_t k = 0; k < fixed_dofs.size(); ++k) full[fixed_dofs[k]] = fixed_values[static_cast<Eigen::Index>(k)];
  return full;
}

Vector ConstrainedSystem::restrict(const Vector& full) const {
  Vector r(static_cast<Eigen::Index>(free_dofs.size()));
  for (std::size_t k = 0; k < free_dofs.size(); ++k) r[static_cast<Eigen::Index>(k)] = full[free_dofs[k]];
  return r;
}

void write_coordinate(std::ostream& out, const SparseMatrix& a) {
  const auto precision = out.precision(17);
  for (int i = 0; i < a.outerSize(); ++i)
    for (SparseMatrix::InnerIterator it(a, i); it; ++it) out << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
  out.precision(precision);
}

}  // namespace c0ip
