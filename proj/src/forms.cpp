#include "c0ip/forms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace c0ip {

void validate(const C0ipParams& params) {
  if (!(params.sigma >= 1.0)) throw std::invalid_argument("sigma must be >= 1");
}

EdgeStencil edge_stencil(const Triangulation& mesh, const DofMap& dofs, int edge) {
  const Edge& e = mesh.edges.at(static_cast<std::size_t>(edge));
  const Point a = mesh.vertices[e.vertices[0]];
  const Point b = mesh.vertices[e.vertices[1]];
  const auto& rule = interval_rule_degree9();
  const int nq = static_cast<int>(rule.points.size());

  EdgeStencil s;
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    s.points.push_back(a + rule.points[q].x() * (b - a));
    s.weights.push_back(rule.weights[q] * e.length);
  }

  struct Side {
    int triangle;
    Point outward;
  };
  std::vector<Side> sides{{e.t_minus, e.normal}};
  if (!e.is_boundary()) sides.push_back({e.t_plus, -e.normal});
  const double mean_weight = 1.0 / static_cast<double>(sides.size());

  for (const auto& side : sides)
    for (int d : dofs.cell_dofs[side.triangle])
      if (std::find(s.dofs.begin(), s.dofs.end(), d) == s.dofs.end()) s.dofs.push_back(d);
  const int n = static_cast<int>(s.dofs.size());
  s.jump = Eigen::MatrixXd::Zero(nq, n);
  s.mean = Eigen::VectorXd::Zero(n);

  for (const auto& side : sides) {
    const CellGeometry cell(mesh, side.triangle);
    const auto lap = cell.laplacians();
    const auto& local = dofs.cell_dofs[side.triangle];
    std::array<int, 6> slot{};
    for (int i = 0; i < 6; ++i)
      slot[i] = static_cast<int>(std::find(s.dofs.begin(), s.dofs.end(), local[i]) - s.dofs.begin());
    for (int i = 0; i < 6; ++i) s.mean[slot[i]] += mean_weight * lap[i];
    for (int q = 0; q < nq; ++q) {
      const auto grad = cell.gradients(cell.pull_back(s.points[q]));
      const Eigen::Matrix<double, 6, 1> dn = grad * side.outward;
      for (int i = 0; i < 6; ++i) s.jump(q, slot[i]) += dn[i];
    }
  }
  return s;
}

SparseMatrix assemble_a_h(const Triangulation& mesh, const DofMap& dofs, const C0ipParams& params) {
  validate(params);
  if (mesh.edges.empty() || mesh.triangle_edges.size() != mesh.triangles.size())
    throw MeshError("assemble_a_h: edge topology has not been built");
  std::vector<Eigen::Triplet<double>> entries;

  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const CellGeometry cell(mesh, t);
    const auto lap = cell.laplacians();
    const auto& local = dofs.cell_dofs[t];
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) entries.emplace_back(local[i], local[j], cell.area * lap[i] * lap[j]);
  }

  const double consistency = params.consistency_factor();
  for (int k = 0; k < mesh.n_edges(); ++k) {
    const EdgeStencil s = edge_stencil(mesh, dofs, k);
    const double penalty = params.sigma / mesh.edges[k].length;
    Eigen::MatrixXd jump_jump = Eigen::MatrixXd::Zero(s.dofs.size(), s.dofs.size());
    Eigen::VectorXd jump_integral = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(s.dofs.size()));
    for (std::size_t q = 0; q < s.weights.size(); ++q) {
      const Eigen::VectorXd jq = s.jump.row(static_cast<Eigen::Index>(q)).transpose();
      jump_jump += s.weights[q] * jq * jq.transpose();
      jump_integral += s.weights[q] * jq;
    }
    const Eigen::MatrixXd mean_jump = s.mean * jump_integral.transpose();
    const Eigen::MatrixXd local =
        consistency * (mean_jump + mean_jump.transpose()) + penalty * jump_jump;
    for (std::size_t i = 0; i < s.dofs.size(); ++i)
      for (std::size_t j = 0; j < s.dofs.size(); ++j)
        entries.emplace_back(s.dofs[i], s.dofs[j], local(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
  }

  SparseMatrix a(dofs.n_dofs(), dofs.n_dofs());
  a.setFromTriplets(entries.begin(), entries.end());
  return a;
}

SparseMatrix assemble_mass(const Triangulation& mesh, const DofMap& dofs) {
  const auto& rule = triangle_rule_degree6();
  std::vector<Eigen::Triplet<double>> entries;
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const CellGeometry cell(mesh, t);
    Eigen::Matrix<double, 6, 6> local = Eigen::Matrix<double, 6, 6>::Zero();
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const auto n = ReferenceElement::values(rule.points[q]);
      local += (2.0 * cell.area * rule.weights[q]) * n * n.transpose();
    }
    const auto& ids = dofs.cell_dofs[t];
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) entries.emplace_back(ids[i], ids[j], local(i, j));
  }
  SparseMatrix m(dofs.n_dofs(), dofs.n_dofs());
  m.setFromTriplets(entries.begin(), entries.end());
  return m;
}

Vector assemble_load(const Triangulation& mesh, const DofMap& dofs, const ScalarField& f) {
  const auto& rule = triangle_rule_degree6();
  Vector b = Vector::Zero(dofs.n_dofs());
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const CellGeometry cell(mesh, t);
    const auto& ids = dofs.cell_dofs[t];
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const auto n = ReferenceElement::values(rule.points[q]);
      const double fw = f(cell.map(rule.points[q])) * 2.0 * cell.area * rule.weights[q];
      for (int i = 0; i < 6; ++i) b[ids[i]] += fw * n[i];
    }
  }
  return b;
}

Vector assemble_boundary_load(const Triangulation& mesh, const DofMap& dofs, const ScalarField& g) {
  const auto& rule = interval_rule_degree9();
  Vector b = Vector::Zero(dofs.n_dofs());
  for (const Edge& e : mesh.edges) {
    if (!e.is_boundary()) continue;
    const CellGeometry cell(mesh, e.t_minus);
    const auto& ids = dofs.cell_dofs[e.t_minus];
    const Point a = mesh.vertices[e.vertices[0]];
    const Point d = mesh.vertices[e.vertices[1]] - a;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Point x = a + rule.points[q].x() * d;
      const auto n = ReferenceElement::values(cell.pull_back(x));
      const double gw = g(x) * rule.weights[q] * e.length;
      for (int i = 0; i < 6; ++i) b[ids[i]] += gw * n[i];
    }
  }
  return b;
}

namespace {

struct NormParts {
  double volume = 0.0;
  double mean = 0.0;
  double jump = 0.0;
};

NormParts norm_parts(const Vector& v, const Triangulation& mesh, const DofMap& dofs, const C0ipParams& params) {
  NormParts parts;
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const CellGeometry cell(mesh, t);
    const auto lap = cell.laplacians();
    double lap_v = 0.0;
    for (int i = 0; i < 6; ++i) lap_v += lap[i] * v[dofs.cell_dofs[t][i]];
    parts.volume += cell.area * lap_v * lap_v;
  }
  for (int k = 0; k < mesh.n_edges(); ++k) {
    const EdgeStencil s = edge_stencil(mesh, dofs, k);
    Eigen::VectorXd local(static_cast<Eigen::Index>(s.dofs.size()));
    for (std::size_t i = 0; i < s.dofs.size(); ++i) local[static_cast<Eigen::Index>(i)] = v[s.dofs[i]];
    const double length = mesh.edges[k].length;
    const double mean = s.mean.dot(local);
    parts.mean += length * length * mean * mean;
    const Eigen::VectorXd jumps = s.jump * local;
    double jump2 = 0.0;
    for (std::size_t q = 0; q < s.weights.size(); ++q) jump2 += s.weights[q] * jumps[static_cast<Eigen::Index>(q)] * jumps[static_cast<Eigen::Index>(q)];
    parts.jump += params.sigma / length * jump2;
  }
  return parts;
}

}  // namespace

double norm_h(const Vector& v, const Triangulation& mesh, const DofMap& dofs, const C0ipParams& params) {
  const auto p = norm_parts(v, mesh, dofs, params);
  return std::sqrt(p.volume + p.jump);
}

double norm_energy(const Vector& v, const Triangulation& mesh, const DofMap& dofs, const C0ipParams& params) {
  const auto p = norm_parts(v, mesh, dofs, params);
  const SparseMatrix m = assemble_mass(mesh, dofs);
  return std::sqrt(p.volume + p.jump + v.dot(m * v));
}

double norm_Qh(const Vector& v, const Triangulation& mesh, const DofMap& dofs, const C0ipParams& params) {
  const auto p = norm_parts(v, mesh, dofs, params);
  return std::sqrt(p.volume + p.mean + p.jump);
}

AssembledForms assemble_forms(const Triangulation& mesh, const DofMap& dofs, const C0ipParams& params) {
  AssembledForms forms;
  forms.a = assemble_a_h(mesh, dofs, params);
  forms.mass = assemble_mass(mesh, dofs);
  forms.level = mesh.level;
  forms.sigma = params.sigma;
  forms.n_dofs = dofs.n_dofs();
  return forms;
}

}  // namespace c0ip
