// Dense bivariate polynomials, used to derive manufactured data exactly.
#pragma once

#include <Eigen/Core>

namespace c0ip {

/// p(x, y) = Σ c(i, j) x^i y^j.
template <typename Scalar>
class Polynomial2 {
 public:
  using Coefficients = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Coord = Eigen::Matrix<Scalar, 2, 1>;

  Polynomial2() : c_(Coefficients::Zero(1, 1)) {}
  explicit Polynomial2(Coefficients c) : c_(std::move(c)) {}

  static Polynomial2 constant(Scalar v) {
    Coefficients c(1, 1);
    c(0, 0) = v;
    return Polynomial2(c);
  }
  /// a + b x + c y
  static Polynomial2 linear(Scalar a, Scalar b, Scalar c) {
    Coefficients k = Coefficients::Zero(2, 2);
    k(0, 0) = a;
    k(1, 0) = b;
    k(0, 1) = c;
    return Polynomial2(k);
  }

  const Coefficients& coefficients() const { return c_; }

  Scalar operator()(const Coord& p) const {
    // Horner in x for each power of y, then in y.
    Scalar result(0);
    for (Eigen::Index j = c_.cols() - 1; j >= 0; --j) {
      Scalar row(0);
      for (Eigen::Index i = c_.rows() - 1; i >= 0; --i) row = row * p.x() + c_(i, j);
      result = result * p.y() + row;
    }
    return result;
  }

  Polynomial2 dx() const {
    if (c_.rows() == 1) return Polynomial2(Coefficients::Zero(1, c_.cols()));
    Coefficients d(c_.rows() - 1, c_.cols());
    for (Eigen::Index i = 1; i < c_.rows(); ++i) d.row(i - 1) = Scalar(i) * c_.row(i);
    return Polynomial2(d);
  }

  Polynomial2 dy() const {
    if (c_.cols() == 1) return Polynomial2(Coefficients::Zero(c_.rows(), 1));
    Coefficients d(c_.rows(), c_.cols() - 1);
    for (Eigen::Index j = 1; j < c_.cols(); ++j) d.col(j - 1) = Scalar(j) * c_.col(j);
    return Polynomial2(d);
  }

  Polynomial2 laplacian() const { return dx().dx() + dy().dy(); }

  friend Polynomial2 operator+(const Polynomial2& a, const Polynomial2& b) {
    Coefficients c = Coefficients::Zero(std::max(a.c_.rows(), b.c_.rows()), std::max(a.c_.cols(), b.c_.cols()));
    c.topLeftCorner(a.c_.rows(), a.c_.cols()) += a.c_;
    c.topLeftCorner(b.c_.rows(), b.c_.cols()) += b.c_;
    return Polynomial2(c);
  }

  friend Polynomial2 operator*(const Polynomial2& a, const Polynomial2& b) {
    Coefficients c = Coefficients::Zero(a.c_.rows() + b.c_.rows() - 1, a.c_.cols() + b.c_.cols() - 1);
    for (Eigen::Index i = 0; i < a.c_.rows(); ++i)
      for (Eigen::Index j = 0; j < a.c_.cols(); ++j)
        if (a.c_(i, j) != Scalar(0)) c.block(i, j, b.c_.rows(), b.c_.cols()) += a.c_(i, j) * b.c_;
    return Polynomial2(c);
  }

  friend Polynomial2 operator*(Scalar s, const Polynomial2& p) { return Polynomial2(s * p.c_); }

 private:
  Coefficients c_;
};

}  // namespace c0ip
