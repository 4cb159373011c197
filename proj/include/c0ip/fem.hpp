// Quadratic Lagrange element, quadrature rules and degree-of-freedom maps.
#pragma once

#include <array>
#include <functional>
#include <vector>

#include <Eigen/Core>
#include <Eigen/LU>

#include "c0ip/mesh.hpp"

namespace c0ip {

using Vector = Eigen::VectorXd;
using ScalarField = std::function<double(const Point&)>;

/// Nodal P2 basis on the reference triangle (0,0), (1,0), (0,1).
/// Local order: the three vertices, then the midpoints of edges
/// (0,1), (1,2), (2,0).
template <typename Scalar>
struct P2Basis {
  using Coord = Eigen::Matrix<Scalar, 2, 1>;
  using Values = Eigen::Matrix<Scalar, 6, 1>;
  using Gradients = Eigen::Matrix<Scalar, 6, 2>;
  using Hessian = Eigen::Matrix<Scalar, 2, 2>;

  static constexpr int n_nodes = 6;

  static Coord node(int i) {
    constexpr double xy[6][2] = {{0, 0}, {1, 0}, {0, 1}, {0.5, 0}, {0.5, 0.5}, {0, 0.5}};
    return Coord(Scalar(xy[i][0]), Scalar(xy[i][1]));
  }

  static Values values(const Coord& p) {
    const Scalar l0 = Scalar(1) - p.x() - p.y(), l1 = p.x(), l2 = p.y();
    Values n;
    n << l0 * (Scalar(2) * l0 - Scalar(1)), l1 * (Scalar(2) * l1 - Scalar(1)),
        l2 * (Scalar(2) * l2 - Scalar(1)), Scalar(4) * l0 * l1, Scalar(4) * l1 * l2,
        Scalar(4) * l2 * l0;
    return n;
  }

  static Gradients gradients(const Coord& p) {
    const Scalar l0 = Scalar(1) - p.x() - p.y(), l1 = p.x(), l2 = p.y();
    Gradients g;
    g << -(Scalar(4) * l0 - Scalar(1)), -(Scalar(4) * l0 - Scalar(1)),
        Scalar(4) * l1 - Scalar(1), Scalar(0),
        Scalar(0), Scalar(4) * l2 - Scalar(1),
        Scalar(4) * (l0 - l1), Scalar(-4) * l1,
        Scalar(4) * l2, Scalar(4) * l1,
        Scalar(-4) * l2, Scalar(4) * (l0 - l2);
    return g;
  }

  /// Reference Hessians; constant over the element.
  static std::array<Hessian, 6> hessians() {
    std::array<Hessian, 6> h;
    h[0] << 4, 4, 4, 4;
    h[1] << 4, 0, 0, 0;
    h[2] << 0, 0, 0, 4;
    h[3] << -8, -4, -4, 0;
    h[4] << 0, 4, 4, 0;
    h[5] << 0, -4, -4, -8;
    return h;
  }
};

using ReferenceElement = P2Basis<double>;

/// Quadrature on the reference triangle (weights sum to 1/2) or on [0, 1].
struct QuadratureRule {
  std::vector<Point> points;
  std::vector<double> weights;
};

/// 12-point symmetric rule, exact for total degree <= 6.
const QuadratureRule& triangle_rule_degree6();
/// 10 x 10 collapsed Gauss product rule, exact for total degree <= 18. Used
/// where data fields are integrated rather than assembled.
const QuadratureRule& triangle_rule_high_order();
/// 5-point Gauss-Legendre on [0, 1] (points stored in x), exact for degree <= 9.
const QuadratureRule& interval_rule_degree9();

/// Affine map x = origin + jacobian * xref of one mesh triangle.
struct CellGeometry {
  Point origin;
  Eigen::Matrix2d jacobian;
  Eigen::Matrix2d inverse;
  double area = 0.0;

  CellGeometry(const Triangulation& mesh, int t);

  Point map(const Point& ref) const { return origin + jacobian * ref; }
  Point pull_back(const Point& x) const { return inverse * (x - origin); }

  /// Physical gradients (one row per basis function) at a reference point.
  Eigen::Matrix<double, 6, 2> gradients(const Point& ref) const {
    return ReferenceElement::gradients(ref) * inverse;
  }
  /// Physical Laplacians of the six basis functions.
  Eigen::Matrix<double, 6, 1> laplacians() const;
  /// Physical Hessians of the six basis functions.
  std::array<Eigen::Matrix2d, 6> hessians() const;
};

enum class SpaceKind { Qh, Vh };

/// Global numbering: vertices first, then edge midpoints in edge order.
/// V_h shares the Q_h numbering; its boundary dofs are constrained to zero.
struct DofMap {
  SpaceKind kind = SpaceKind::Qh;
  std::vector<Point> nodes;
  std::vector<std::array<int, 6>> cell_dofs;
  std::vector<int> boundary_dofs;
  std::vector<int> corner_dofs;
  std::vector<bool> on_boundary;

  int n_dofs() const { return static_cast<int>(nodes.size()); }
  /// Unconstrained dofs: all of them for Q_h, interior ones for V_h.
  std::vector<int> free_dofs() const;
  std::vector<int> constrained_dofs() const;
};

DofMap build_dofmap(const Triangulation& mesh, SpaceKind kind);

/// Nodal interpolant; for V_h the boundary entries are exactly zero.
Vector interpolate(const DofMap& dofs, const ScalarField& f);

/// Evaluates a finite element function at a physical point inside triangle t.
double evaluate(const Triangulation& mesh, const DofMap& dofs, const Vector& v, int t, const Point& x);

}  // namespace c0ip
