#include "c0ip/fem.hpp"

#include <algorithm>

#include <boost/math/quadrature/gauss.hpp>

namespace c0ip {

const QuadratureRule& triangle_rule_degree6() {
  static const QuadratureRule rule = [] {
    // Dunavant's degree-6 rule in barycentric coordinates, weights summing to 1.
    struct Orbit {
      double a, b, c, w;
    };
    const Orbit orbits[] = {
        {0.501426509658179, 0.249286745170910, 0.249286745170910, 0.116786275726379},
        {0.873821971016996, 0.063089014491502, 0.063089014491502, 0.050844906370207},
        {0.053145049844817, 0.310352451033784, 0.636502499121399, 0.082851075618374},
    };
    QuadratureRule r;
    for (const auto& o : orbits) {
      std::array<double, 3> l{o.a, o.b, o.c};
      std::sort(l.begin(), l.end());
      do {
        r.points.emplace_back(l[1], l[2]);
        r.weights.push_back(0.5 * o.w);
      } while (std::next_permutation(l.begin(), l.end()));
    }
    return r;
  }();
  return rule;
}

namespace {

/// Gauss-Legendre nodes and weights mapped to [0, 1].
template <unsigned N>
std::vector<std::pair<double, double>> gauss_unit_interval() {
  using Rule = boost::math::quadrature::gauss<double, N>;
  std::vector<std::pair<double, double>> nodes;
  for (std::size_t i = 0; i < Rule::abscissa().size(); ++i) {
    const double x = Rule::abscissa()[i], w = Rule::weights()[i];
    nodes.emplace_back(0.5 * (1.0 + x), 0.5 * w);
    if (x != 0.0) nodes.emplace_back(0.5 * (1.0 - x), 0.5 * w);
  }
  std::sort(nodes.begin(), nodes.end());
  return nodes;
}

}  // namespace

const QuadratureRule& triangle_rule_high_order() {
  static const QuadratureRule rule = [] {
    // Duffy map (u, v) -> (u, v (1 - u)) with Jacobian 1 - u.
    const auto g = gauss_unit_interval<10>();
    QuadratureRule r;
    for (const auto& [u, wu] : g)
      for (const auto& [v, wv] : g) {
        r.points.emplace_back(u, v * (1.0 - u));
        r.weights.push_back(wu * wv * (1.0 - u));
      }
    return r;
  }();
  return rule;
}

const QuadratureRule& interval_rule_degree9() {
  static const QuadratureRule rule = [] {
    const double x[] = {0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640,
                        0.9061798459386640};
    const double w[] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                        0.2369268850561891, 0.2369268850561891};
    QuadratureRule r;
    for (int i = 0; i < 5; ++i) {
      r.points.emplace_back(0.5 * (x[i] + 1.0), 0.0);
      r.weights.push_back(0.5 * w[i]);
    }
    return r;
  }();
  return rule;
}

CellGeometry::CellGeometry(const Triangulation& mesh, int t) {
  const auto& tri = mesh.triangles[t];
  origin = mesh.vertices[tri[0]];
  jacobian.col(0) = mesh.vertices[tri[1]] - origin;
  jacobian.col(1) = mesh.vertices[tri[2]] - origin;
  inverse = jacobian.inverse();
  area = 0.5 * jacobian.determinant();
}

std::array<Eigen::Matrix2d, 6> CellGeometry::hessians() const {
  const auto ref = ReferenceElement::hessians();
  std::array<Eigen::Matrix2d, 6> h;
  for (int i = 0; i < 6; ++i) h[i] = inverse.transpose() * ref[i] * inverse;
  return h;
}

Eigen::Matrix<double, 6, 1> CellGeometry::laplacians() const {
  const auto h = hessians();
  Eigen::Matrix<double, 6, 1> lap;
  for (int i = 0; i < 6; ++i) lap[i] = h[i].trace();
  return lap;
}

std::vector<int> DofMap::free_dofs() const {
  std::vector<int> ids;
  for (int i = 0; i < n_dofs(); ++i)
    if (kind == SpaceKind::Qh || !on_boundary[i]) ids.push_back(i);
  return ids;
}

std::vector<int> DofMap::constrained_dofs() const {
  return kind == SpaceKind::Vh ? boundary_dofs : std::vector<int>{};
}

DofMap build_dofmap(const Triangulation& mesh, SpaceKind kind) {
  DofMap dofs;
  dofs.kind = kind;
  const int nv = mesh.n_vertices();
  dofs.nodes = mesh.vertices;
  dofs.on_boundary = mesh.boundary_vertex;
  for (const auto& e : mesh.edges) {
    dofs.nodes.push_back(e.midpoint);
    dofs.on_boundary.push_back(e.is_boundary());
  }
  dofs.cell_dofs.reserve(mesh.triangles.size());
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    const auto& te = mesh.triangle_edges[t];
    dofs.cell_dofs.push_back({tri[0], tri[1], tri[2], nv + te[0], nv + te[1], nv + te[2]});
  }
  for (int i = 0; i < dofs.n_dofs(); ++i)
    if (dofs.on_boundary[i]) dofs.boundary_dofs.push_back(i);
  dofs.corner_dofs = mesh.corner_vertices;
  return dofs;
}

Vector interpolate(const DofMap& dofs, const ScalarField& f) {
  Vector v(dofs.n_dofs());
  for (int i = 0; i < dofs.n_dofs(); ++i)
    v[i] = (dofs.kind == SpaceKind::Vh && dofs.on_boundary[i]) ? 0.0 : f(dofs.nodes[i]);
  return v;
}

double evaluate(const Triangulation& mesh, const DofMap& dofs, const Vector& v, int t, const Point& x) {
  const CellGeometry cell(mesh, t);
  const auto n = ReferenceElement::values(cell.pull_back(x));
  double s = 0.0;
  for (int i = 0; i < 6; ++i) s += n[i] * v[dofs.cell_dofs[t][i]];
  return s;
}

}  // namespace c0ip
