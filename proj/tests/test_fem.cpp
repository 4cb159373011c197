#include <cmath>
#include <random>

#include <Eigen/Core>
#include <gtest/gtest.h>
#include <unsupported/Eigen/AutoDiff>

#include "c0ip/fem.hpp"

using namespace c0ip;

namespace {

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

/// ∫ x^a y^b over the reference triangle.
double monomial_integral(int a, int b) { return factorial(a) * factorial(b) / factorial(a + b + 2); }

double integrate(const QuadratureRule& rule, int a, int b) {
  double s = 0.0;
  for (std::size_t q = 0; q < rule.points.size(); ++q)
    s += rule.weights[q] * std::pow(rule.points[q].x(), a) * std::pow(rule.points[q].y(), b);
  return s;
}

}  // namespace

TEST(Quadrature, Degree6RuleIsExactForMonomials) {
  const auto& rule = triangle_rule_degree6();
  EXPECT_EQ(rule.points.size(), 12u);
  for (int a = 0; a <= 6; ++a)
    for (int b = 0; a + b <= 6; ++b) EXPECT_NEAR(integrate(rule, a, b), monomial_integral(a, b), 1e-14) << a << "," << b;
  EXPECT_GT(std::abs(integrate(rule, 7, 0) - monomial_integral(7, 0)), 1e-8);
}

TEST(Quadrature, HighOrderRuleIsExactToDegree18) {
  const auto& rule = triangle_rule_high_order();
  for (int a = 0; a <= 18; ++a)
    for (int b = 0; a + b <= 18; ++b) EXPECT_NEAR(integrate(rule, a, b), monomial_integral(a, b), 1e-15) << a << "," << b;
  for (const auto& p : rule.points) {
    EXPECT_GT(p.x(), 0.0);
    EXPECT_GT(p.y(), 0.0);
    EXPECT_LT(p.x() + p.y(), 1.0);
  }
}

TEST(Quadrature, IntervalRuleIsExactToDegree9) {
  const auto& rule = interval_rule_degree9();
  for (int k = 0; k <= 9; ++k) {
    double s = 0.0;
    for (std::size_t q = 0; q < rule.points.size(); ++q) s += rule.weights[q] * std::pow(rule.points[q].x(), k);
    EXPECT_NEAR(s, 1.0 / (k + 1), 1e-15) << k;
  }
}

TEST(Basis, NodalAndPartitionOfUnity) {
  for (int i = 0; i < 6; ++i) {
    const auto n = ReferenceElement::values(ReferenceElement::node(i));
    for (int j = 0; j < 6; ++j) EXPECT_EQ(n[j], i == j ? 1.0 : 0.0);
  }
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> u(0.0, 0.5);
  for (int k = 0; k < 20; ++k) {
    const Point p(u(rng), u(rng));
    EXPECT_NEAR(ReferenceElement::values(p).sum(), 1.0, 1e-15);
    EXPECT_NEAR(ReferenceElement::gradients(p).colwise().sum().norm(), 0.0, 1e-14);
  }
}

TEST(Basis, DerivativesMatchAutomaticDifferentiation) {
  using Ad = Eigen::AutoDiffScalar<Eigen::Vector2d>;
  using Ad2 = Eigen::AutoDiffScalar<Eigen::Matrix<Ad, 2, 1>>;
  const Point p(0.23, 0.41);

  const Eigen::Matrix<Ad, 2, 1> x(Ad(p.x(), 2, 0), Ad(p.y(), 2, 1));
  const auto values = P2Basis<Ad>::values(x);
  const auto g = ReferenceElement::gradients(p);
  for (int i = 0; i < 6; ++i) EXPECT_NEAR((values[i].derivatives() - g.row(i).transpose()).norm(), 0.0, 1e-14);

  // Second derivatives through nested forward mode.
  Eigen::Matrix<Ad2, 2, 1> y;
  for (int d = 0; d < 2; ++d) {
    y[d].value() = Ad(p[d], 2, d);
    y[d].derivatives() = Eigen::Matrix<Ad, 2, 1>::Zero();
    y[d].derivatives()[d] = Ad(1.0, Eigen::Vector2d::Zero());
  }
  const auto values2 = P2Basis<Ad2>::values(y);
  const auto h = ReferenceElement::hessians();
  for (int i = 0; i < 6; ++i)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) EXPECT_NEAR(values2[i].derivatives()[a].derivatives()[b], h[i](a, b), 1e-13);
}

TEST(Geometry, PhysicalDerivativesOfAQuadratic) {
  // u = 1 + 2x - y + 3x² - xy + 0.5y², Δu = 7.
  const auto u = [](const Point& p) {
    return 1 + 2 * p.x() - p.y() + 3 * p.x() * p.x() - p.x() * p.y() + 0.5 * p.y() * p.y();
  };
  Triangulation mesh;
  mesh.vertices = {{0.2, 0.1}, {1.3, 0.4}, {0.5, 1.7}};
  mesh.triangles = {{0, 1, 2}};
  build_edges(mesh);
  const CellGeometry cell(mesh, 0);
  EXPECT_NEAR(cell.area, mesh.area(0), 1e-15);

  Eigen::Matrix<double, 6, 1> local;
  for (int i = 0; i < 6; ++i) local[i] = u(cell.map(ReferenceElement::node(i)));
  EXPECT_NEAR(cell.laplacians().dot(local), 7.0, 1e-12);
  Eigen::Matrix2d hess = Eigen::Matrix2d::Zero();
  const auto hs = cell.hessians();
  for (int i = 0; i < 6; ++i) hess += local[i] * hs[i];
  EXPECT_NEAR((hess - (Eigen::Matrix2d() << 6, -1, -1, 1).finished()).norm(), 0.0, 1e-12);
  const Point ref(0.3, 0.2), x = cell.map(ref);
  const Eigen::Vector2d grad = cell.gradients(ref).transpose() * local;
  EXPECT_NEAR(grad.x(), 2 + 6 * x.x() - x.y(), 1e-12);
  EXPECT_NEAR(grad.y(), -1 - x.x() + x.y(), 1e-12);
  EXPECT_NEAR((cell.pull_back(x) - ref).norm(), 0.0, 1e-15);
}

TEST(DofMap, NumberingAndBoundary) {
  const Triangulation mesh = make_mesh(builtin_domain("hexagon"), 2);
  const DofMap q = build_dofmap(mesh, SpaceKind::Qh);
  const DofMap v = build_dofmap(mesh, SpaceKind::Vh);
  EXPECT_EQ(q.n_dofs(), mesh.n_vertices() + mesh.n_edges());
  int boundary_edges = 0;
  for (const auto& e : mesh.edges) boundary_edges += e.is_boundary();
  EXPECT_EQ(static_cast<int>(q.boundary_dofs.size()), 2 * boundary_edges);
  EXPECT_EQ(static_cast<int>(q.free_dofs().size()), q.n_dofs());
  EXPECT_EQ(static_cast<int>(v.free_dofs().size() + v.constrained_dofs().size()), v.n_dofs());
  EXPECT_EQ(q.corner_dofs.size(), 6u);
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const CellGeometry cell(mesh, t);
    for (int i = 0; i < 6; ++i)
      EXPECT_NEAR((q.nodes[q.cell_dofs[t][i]] - cell.map(ReferenceElement::node(i))).norm(), 0.0, 1e-15);
  }
}

TEST(DofMap, InterpolationReproducesQuadratics) {
  const auto u = [](const Point& p) { return 0.5 - p.x() + 2 * p.y() * p.y() + 3 * p.x() * p.y(); };
  const Triangulation mesh = make_mesh(builtin_domain("pentagon150"), 2);
  const DofMap dofs = build_dofmap(mesh, SpaceKind::Qh);
  const Vector v = interpolate(dofs, u);
  for (int t = 0; t < mesh.n_triangles(); t += 7) {
    const Point x = mesh.centroid(t) + Point(0.01, -0.02) * mesh.mesh_size();
    EXPECT_NEAR(evaluate(mesh, dofs, v, t, x), u(x), 1e-13);
  }
  const Vector vh = interpolate(build_dofmap(mesh, SpaceKind::Vh), u);
  for (int i : dofs.boundary_dofs) EXPECT_EQ(vh[i], 0.0);
}
