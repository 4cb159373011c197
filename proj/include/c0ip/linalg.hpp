// Sparse symmetric linear algebra: storage, Cholesky with reverse
// Cuthill-McKee ordering, conjugate gradients and constraint elimination.
#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace c0ip {

using Vector = Eigen::VectorXd;
/// Compressed-row storage.
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// A non-positive pivot appeared during Cholesky factorization.
class DefinitenessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolveReport {
  enum class Method { cholesky, cg };
  Method method = Method::cholesky;
  int iterations = 0;
  double relative_residual = 0.0;
  bool success = false;
  /// Relative residual after each CG iteration.
  std::vector<double> history;
};

/// Reverse Cuthill-McKee permutation of a structurally symmetric pattern.
/// `order[k]` is the original index placed at position k.
std::vector<int> reverse_cuthill_mckee(const SparseMatrix& pattern);

/// Orders a symmetric matrix by reverse Cuthill-McKee; usable as the
/// ordering policy of Eigen's simplicial Cholesky factorizations.
template <typename StorageIndex>
struct RcmOrdering {
  using PermutationType = Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic, StorageIndex>;

  template <typename MatrixType>
  void operator()(const MatrixType& mat, PermutationType& perm) {
    const std::vector<int> order = reverse_cuthill_mckee(SparseMatrix(mat));
    perm.resize(static_cast<Eigen::Index>(order.size()));
    for (std::size_t k = 0; k < order.size(); ++k) perm.indices()[k] = static_cast<StorageIndex>(order[k]);
  }
};

/// Sparse LLT factorization of an SPD matrix, reusable across right-hand sides.
class CholeskyFactor {
 public:
  /// Throws DefinitenessError on a non-positive pivot.
  explicit CholeskyFactor(const SparseMatrix& a);
  ~CholeskyFactor();
  CholeskyFactor(CholeskyFactor&&) noexcept;
  CholeskyFactor& operator=(CholeskyFactor&&) noexcept;

  Vector solve(const Vector& b) const;
  Eigen::Index rows() const { return n_; }
  /// Nonzeros of the factor, a fill measure.
  Eigen::Index factor_nonzeros() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  Eigen::Index n_ = 0;
};

/// Direct solve; b == 0 returns exactly x == 0.
std::pair<Vector, SolveReport> cholesky_solve(const SparseMatrix& a, const Vector& b);

using LinearOperator = std::function<Vector(const Vector&)>;

struct CgOptions {
  double tolerance = 1e-12;
  int max_iterations = 10000;
  /// Optional preconditioner z = P^{-1} r (SPD).
  LinearOperator preconditioner;
  /// Probe <A x, y> == <x, A y> on one random pair before iterating.
  bool check_symmetry = false;
};

/// Conjugate gradients on an SPD operator, starting from x = 0. The report
/// is flagged unsuccessful when max_iterations is exhausted.
std::pair<Vector, SolveReport> cg_solve(const LinearOperator& apply, const Vector& b, const CgOptions& options = {});

/// System with some dofs eliminated. Fixed values are moved to the
/// right-hand side, preserving symmetry of the reduced matrix.
struct ConstrainedSystem {
  SparseMatrix matrix;
  Vector rhs;
  std::vector<int> free_dofs;
  std::vector<int> fixed_dofs;
  Vector fixed_values;
  Eigen::Index full_size = 0;

  /// Full-length vector from reduced unknowns and the fixed values.
  Vector expand(const Vector& reduced) const;
  /// Free components of a full-length vector.
  Vector restrict(const Vector& full) const;
};

ConstrainedSystem constrain(const SparseMatrix& a, const Vector& b, const std::vector<int>& fixed_dofs,
                            const Vector& fixed_values);

/// Submatrix a(rows, cols) for sorted index lists.
SparseMatrix submatrix(const SparseMatrix& a, const std::vector<int>& rows, const std::vector<int>& cols);

/// Coordinate-format text, one `i j value` line per stored entry.
void write_coordinate(std::ostream& out, const SparseMatrix& a);

}  // namespace c0ip
