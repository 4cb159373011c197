#include "c0ip/study.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "c0ip/cahn_hilliard.hpp"
#include "c0ip/control.hpp"
#include "c0ip/polynomial.hpp"

namespace c0ip {

using Poly = Polynomial2<double>;

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

/// Per-element value and Laplacian of a P2 function at quadrature points.
struct ElementError {
  double l2 = 0.0;
  double laplacian = 0.0;
};

ElementError element_errors(const Triangulation& mesh, const DofMap& dofs, const Vector& v,
                            const ScalarField& value, const std::function<Eigen::Matrix2d(const Point&)>* hessian) {
  const auto& rule = triangle_rule_high_order();
  ElementError e;
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const CellGeometry cell(mesh, t);
    const auto& ids = dofs.cell_dofs[t];
    const auto lap = cell.laplacians();
    double lap_v = 0.0;
    for (int i = 0; i < 6; ++i) lap_v += lap[i] * v[ids[i]];
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Point x = cell.map(rule.points[q]);
      const double w = 2.0 * cell.area * rule.weights[q];
      const auto n = ReferenceElement::values(rule.points[q]);
      double vh = 0.0;
      for (int i = 0; i < 6; ++i) vh += n[i] * v[ids[i]];
      const double d = vh - value(x);
      e.l2 += w * d * d;
      if (hessian) {
        const double dl = lap_v - (*hessian)(x).trace();
        e.laplacian += w * dl * dl;
      }
    }
  }
  return e;
}

struct EdgeError {
  double jump = 0.0;
  double mean = 0.0;
};

EdgeError edge_errors(const Triangulation& mesh, const DofMap& dofs, const Vector& v, const ExactField& exact,
                      const C0ipParams& params) {
  EdgeError e;
  for (int k = 0; k < mesh.n_edges(); ++k) {
    const Edge& edge = mesh.edges[k];
    const EdgeStencil s = edge_stencil(mesh, dofs, k);
    Eigen::VectorXd local(static_cast<Eigen::Index>(s.dofs.size()));
    for (std::size_t i = 0; i < s.dofs.size(); ++i) local[static_cast<Eigen::Index>(i)] = v[s.dofs[i]];
    const Eigen::VectorXd jumps = s.jump * local;
    const double mean_v = s.mean.dot(local);
    double jump2 = 0.0, mean2 = 0.0;
    for (std::size_t q = 0; q < s.points.size(); ++q) {
      double j = jumps[static_cast<Eigen::Index>(q)];
      if (edge.is_boundary()) j -= exact.gradient(s.points[q]).dot(edge.normal);
      jump2 += s.weights[q] * j * j;
      const double m = mean_v - exact.hessian(s.points[q]).trace();
      mean2 += s.weights[q] * m * m;
    }
    e.jump += params.sigma / edge.length * jump2;
    e.mean += edge.length * mean2;
  }
  return e;
}

Poly bubble_polynomial(const Polygon& polygon) {
  Poly p = Poly::constant(1.0);
  const auto& v = polygon.vertices;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point d = v[(i + 1) % v.size()] - v[i];
    const double len = d.norm();
    // Signed distance to the side, positive inside.
    const Poly dist = Poly::linear((d.y() * v[i].x() - d.x() * v[i].y()) / len, -d.y() / len, d.x() / len);
    p = p * dist * dist;
  }
  return p;
}

ExactField field_of(const Poly& p) {
  const Poly px = p.dx(), py = p.dy();
  const Poly pxx = px.dx(), pxy = px.dy(), pyy = py.dy();
  ExactField f;
  f.value = [p](const Point& x) { return p(x); };
  f.gradient = [px, py](const Point& x) { return Eigen::Vector2d(px(x), py(x)); };
  f.hessian = [pxx, pxy, pyy](const Point& x) {
    Eigen::Matrix2d h;
    h << pxx(x), pxy(x), pxy(x), pyy(x);
    return h;
  };
  return f;
}

ExactField shifted(const ExactField& f, double offset) {
  ExactField g = f;
  g.value = [v = f.value, offset](const Point& x) { return v(x) - offset; };
  return g;
}

ExactField zero_field() {
  ExactField f;
  f.value = [](const Point&) { return 0.0; };
  f.gradient = [](const Point&) { return Eigen::Vector2d::Zero().eval(); };
  f.hessian = [](const Point&) { return Eigen::Matrix2d::Zero().eval(); };
  return f;
}

double discrete_norm(Norm norm, const Vector& d, const Triangulation& mesh, const DofMap& dofs,
                     const SparseMatrix& mass, const C0ipParams& params) {
  switch (norm) {
    case Norm::l2: return std::sqrt(std::max(0.0, d.dot(mass * d)));
    case Norm::h: return norm_h(d, mesh, dofs, params);
    case Norm::energy: {
      const double h = norm_h(d, mesh, dofs, params);
      return std::sqrt(h * h + std::max(0.0, d.dot(mass * d)));
    }
    case Norm::qh: return norm_Qh(d, mesh, dofs, params);
  }
  return nan;
}

double exact_norm(Norm norm, const Vector& v, const Triangulation& mesh, const DofMap& dofs, const ExactField& exact,
                  const C0ipParams& params) {
  switch (norm) {
    case Norm::l2: return error_L2(mesh, dofs, v, exact.value);
    case Norm::h: return error_h(mesh, dofs, v, exact, params);
    case Norm::energy: return error_energy(mesh, dofs, v, exact, params);
    case Norm::qh: return error_Qh(mesh, dofs, v, exact, params);
  }
  return nan;
}

}  // namespace

double error_L2(const Triangulation& mesh, const DofMap& dofs, const Vector& v, const ScalarField& exact) {
  return std::sqrt(element_errors(mesh, dofs, v, exact, nullptr).l2);
}

double error_h(const Triangulation& mesh, const DofMap& dofs, const Vector& v, const ExactField& exact,
               const C0ipParams& params) {
  const auto el = element_errors(mesh, dofs, v, exact.value, &exact.hessian);
  const auto ed = edge_errors(mesh, dofs, v, exact, params);
  return std::sqrt(el.laplacian + ed.jump);
}

double error_energy(const Triangulation& mesh, const DofMap& dofs, const Vector& v, const ExactField& exact,
                    const C0ipParams& params) {
  const auto el = element_errors(mesh, dofs, v, exact.value, &exact.hessian);
  const auto ed = edge_errors(mesh, dofs, v, exact, params);
  return std::sqrt(el.laplacian + ed.jump + el.l2);
}

double error_Qh(const Triangulation& mesh, const DofMap& dofs, const Vector& v, const ExactField& exact,
                const C0ipParams& params) {
  const auto el = element_errors(mesh, dofs, v, exact.value, &exact.hessian);
  const auto ed = edge_errors(mesh, dofs, v, exact, params);
  return std::sqrt(el.laplacian + ed.mean + ed.jump);
}

std::vector<double> eoc(const std::vector<double>& errors, const std::vector<double>& hs) {
  if (errors.size() != hs.size()) throw std::invalid_argument("eoc: errors and mesh sizes differ in length");
  std::vector<double> rates;
  for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
    if (!(errors[i] > 0.0) || !(errors[i + 1] > 0.0)) {
      rates.push_back(nan);
      continue;
    }
    rates.push_back(std::log(errors[i] / errors[i + 1]) / std::log(hs[i] / hs[i + 1]));
  }
  return rates;
}

std::string_view to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::clamped_plate: return "clamped-plate";
    case ProblemKind::dirichlet_control: return "dirichlet-control";
    case ProblemKind::cahn_hilliard: return "cahn-hilliard";
  }
  return "?";
}

std::string_view to_string(Norm norm) {
  switch (norm) {
    case Norm::l2: return "l2";
    case Norm::h: return "h";
    case Norm::energy: return "energy";
    case Norm::qh: return "qh";
  }
  return "?";
}

ProblemKind parse_problem(std::string_view name) {
  for (auto k : {ProblemKind::clamped_plate, ProblemKind::dirichlet_control, ProblemKind::cahn_hilliard})
    if (to_string(k) == name) return k;
  throw std::invalid_argument("unknown problem '" + std::string(name) + "'");
}

Norm parse_norm(std::string_view name) {
  for (auto n : {Norm::l2, Norm::h, Norm::energy, Norm::qh})
    if (to_string(n) == name) return n;
  throw std::invalid_argument("unknown norm '" + std::string(name) + "'");
}

ExactField boundary_bubble(const Polygon& polygon) { return field_of(bubble_polynomial(polygon)); }

Point polygon_normal(const Polygon& polygon, const Point& x) {
  const auto& v = polygon.vertices;
  double best = std::numeric_limits<double>::infinity();
  Point normal = Point::Zero();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point d = v[(i + 1) % v.size()] - v[i];
    const Point n = Point(d.y(), -d.x()) / d.norm();
    const double dist = std::abs(n.dot(x - v[i]));
    if (dist < best) {
      best = dist;
      normal = n;
    }
  }
  return normal;
}

const std::vector<ManufacturedCase>& manufactured_cases() {
  static const std::vector<ManufacturedCase> cases = [] {
    std::vector<ManufacturedCase> c;
    auto rates = [](double l2, double h) {
      return std::vector<std::pair<Norm, double>>{{Norm::l2, l2}, {Norm::h, h}, {Norm::energy, h}, {Norm::qh, h}};
    };

    c.push_back({"plate-bubble", ProblemKind::clamped_plate,
                 "u = product of squared side distances (x²(1-x)²y²(1-y)² on the unit square), f = Δ²u",
                 {}, rates(2.0, 1.0), [](const Polygon& polygon) {
                   const Poly u = bubble_polynomial(polygon);
                   const Poly f = u.laplacian().laplacian();
                   CaseData d;
                   d.solution = field_of(u);
                   d.f = [f](const Point& x) { return f(x); };
                   return d;
                 }});

    c.push_back({"ch-cosine", ProblemKind::cahn_hilliard,
                 "ψ = cos(πx)cos(πy) - 1, g1 = 4π⁴cos(πx)cos(πy), g2 = 0", {"unit-square"}, rates(2.0, 1.0),
                 [](const Polygon&) {
                   using std::cos, std::sin;
                   constexpr double pi = std::numbers::pi;
                   CaseData d;
                   ExactField psi;
                   psi.value = [](const Point& x) { return cos(pi * x.x()) * cos(pi * x.y()) - 1.0; };
                   psi.gradient = [](const Point& x) {
                     return Eigen::Vector2d(-pi * sin(pi * x.x()) * cos(pi * x.y()),
                                            -pi * cos(pi * x.x()) * sin(pi * x.y()));
                   };
                   psi.hessian = [](const Point& x) {
                     const double c = pi * pi * cos(pi * x.x()) * cos(pi * x.y());
                     const double s = pi * pi * sin(pi * x.x()) * sin(pi * x.y());
                     Eigen::Matrix2d h;
                     h << -c, s, s, -c;
                     return h;
                   };
                   d.solution = psi;
                   d.g1 = [](const Point& x) { return 4.0 * std::pow(pi, 4) * cos(pi * x.x()) * cos(pi * x.y()); };
                   d.g2 = [](const Point&) { return 0.0; };
                   return d;
                 }});

    c.push_back({"ch-bubble", ProblemKind::cahn_hilliard,
                 "ψ = product of squared side distances, g1 = Δ²ψ, g2 = ∂(Δψ)/∂n", {}, rates(2.0, 1.0),
                 [](const Polygon& polygon) {
                   const Poly psi = bubble_polynomial(polygon);
                   const Poly lap = psi.laplacian();
                   const Poly g1 = lap.laplacian(), lx = lap.dx(), ly = lap.dy();
                   CaseData d;
                   d.solution = field_of(psi);
                   d.g1 = [g1](const Point& x) { return g1(x); };
                   d.g2 = [lx, ly, polygon](const Point& x) {
                     return Eigen::Vector2d(lx(x), ly(x)).dot(polygon_normal(polygon, x));
                   };
                   return d;
                 }});

    c.push_back({"control-reference", ProblemKind::dirichlet_control,
                 "f = 1, u_d = x(1-x)y(1-y); errors of q_h against a fine reference solution", {},
                 rates(2.0, 1.0), [](const Polygon&) {
                   CaseData d;
                   d.f = [](const Point&) { return 1.0; };
                   d.u_d = [](const Point& x) { return x.x() * (1 - x.x()) * x.y() * (1 - x.y()); };
                   return d;
                 }});

    c.push_back({"control-zero", ProblemKind::dirichlet_control, "f = u_d = 0; the exact discrete control is 0", {},
                 {}, [](const Polygon&) {
                   CaseData d;
                   d.solution = zero_field();
                   d.f = [](const Point&) { return 0.0; };
                   d.u_d = [](const Point&) { return 0.0; };
                   return d;
                 }});
    return c;
  }();
  return cases;
}

const ManufacturedCase& find_case(std::string_view name) {
  for (const auto& c : manufactured_cases())
    if (c.name == name) return c;
  throw std::invalid_argument("unknown case '" + std::string(name) + "'");
}

std::string_view default_case(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::clamped_plate: return "plate-bubble";
    case ProblemKind::dirichlet_control: return "control-reference";
    case ProblemKind::cahn_hilliard: return "ch-cosine";
  }
  return "";
}

std::vector<double> ConvergenceReport::errors(Norm norm) const {
  const auto it = std::find(norms.begin(), norms.end(), norm);
  if (it == norms.end()) throw std::invalid_argument("norm not in report");
  const auto k = static_cast<std::size_t>(it - norms.begin());
  std::vector<double> e;
  for (const auto& r : rows) e.push_back(r.errors[k]);
  return e;
}

double ConvergenceReport::final_eoc(Norm norm) const {
  const auto it = std::find(norms.begin(), norms.end(), norm);
  if (it == norms.end() || rows.size() < 2) return nan;
  return rows.back().eoc[static_cast<std::size_t>(it - norms.begin())];
}

ConvergenceReport run_study(const ManufacturedCase& c, const Polygon& domain, const StudyOptions& options) {
  validate(options.params);
  if (options.first_level < 0 || options.last_level < options.first_level + 1)
    throw std::invalid_argument("a study needs at least two levels");
  if (!c.domains.empty() && std::find(c.domains.begin(), c.domains.end(), domain.name) == c.domains.end())
    throw std::invalid_argument("case '" + c.name + "' is not defined on domain '" + domain.name + "'");

  using Clock = std::chrono::steady_clock;
  const CaseData data = c.build(domain);
  ConvergenceReport report;
  report.case_name = c.name;
  report.domain = domain.name;
  report.problem = c.problem;
  report.norms = options.norms;

  // Control studies without an exact solution compare against a fine solve.
  Vector reference;
  std::vector<Point> reference_nodes;
  if (c.problem == ProblemKind::dirichlet_control && !data.solution) {
    if (options.reference_level <= options.last_level)
      throw std::invalid_argument("reference level must exceed the last study level");
    const DirichletControl fine(make_mesh(domain, options.reference_level),
                                {data.f, data.u_d, options.alpha, options.params});
    reference = fine.solve().q_h;
    reference_nodes = fine.dofs().nodes;
  }

  Triangulation mesh = make_mesh(domain, options.first_level);
  // Red refinement halves every edge, so h is exactly h0 / 2^level; taking
  // the measured maximum would wobble in the last bit.
  const double h0 = triangulate_initial(domain).mesh_size();
  for (int level = options.first_level; level <= options.last_level; ++level) {
    if (level > options.first_level) mesh = refine_uniform(mesh);
    const auto start = Clock::now();
    ConvergenceRow row;
    row.level = level;
    row.h = std::ldexp(h0, -level);
    const DofMap dofs = build_dofmap(mesh, SpaceKind::Qh);
    row.n_dofs = dofs.n_dofs();
    try {
      switch (c.problem) {
        case ProblemKind::clamped_plate: {
          const auto [u, rep] = solve_clamped_plate(mesh, dofs, data.f, options.params);
          for (Norm n : options.norms) row.errors.push_back(exact_norm(n, u, mesh, dofs, *data.solution, options.params));
          break;
        }
        case ProblemKind::cahn_hilliard: {
          const CahnHilliard ch(mesh, {data.g1, data.g2, options.pinned_corner, options.params});
          const ChSolution sol = ch.solve();
          row.compatibility_defect = ch.compatibility_defect();
          const double offset = data.solution->value(mesh.vertices[ch.pinned_dof()]);
          const ExactField exact = shifted(*data.solution, offset);
          for (Norm n : options.norms) row.errors.push_back(exact_norm(n, sol.psi_h, mesh, dofs, exact, options.params));
          break;
        }
        case ProblemKind::dirichlet_control: {
          const DirichletControl control(mesh, {data.f, data.u_d, options.alpha, options.params});
          const KktSolution sol = control.solve();
          row.solver_iterations = sol.report.iterations;
          Vector target = Vector::Zero(dofs.n_dofs());
          if (!data.solution) {
            // Coarse Q_h nodes are fine-mesh vertices with the same ids.
            for (int i = 0; i < dofs.n_dofs(); ++i) {
              if (reference_nodes[i] != dofs.nodes[i]) throw std::logic_error("reference transfer: node mismatch");
              target[i] = reference[i];
            }
          } else {
            target = interpolate(dofs, data.solution->value);
          }
          const Vector diff = sol.q_h - target;
          for (Norm n : options.norms)
            row.errors.push_back(discrete_norm(n, diff, mesh, dofs, control.forms().mass, options.params));
          break;
        }
      }
    } catch (const std::exception& e) {
      throw std::runtime_error("level " + std::to_string(level) + ": " + e.what());
    }
    row.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    report.rows.push_back(std::move(row));
  }

  std::vector<double> hs;
  for (const auto& r : report.rows) hs.push_back(r.h);
  for (auto& r : report.rows) r.eoc.assign(options.norms.size(), nan);
  for (std::size_t k = 0; k < options.norms.size(); ++k) {
    std::vector<double> e;
    for (const auto& r : report.rows) e.push_back(r.errors[k]);
    const auto rates = eoc(e, hs);
    for (std::size_t i = 0; i < rates.size(); ++i) report.rows[i + 1].eoc[k] = rates[i];
  }
  return report;
}

void write_csv(std::ostream& out, const ConvergenceReport& report, const std::vector<std::string>& comments) {
  for (const auto& c : comments) out << "# " << c << '\n';
  out << "level,h,ndofs";
  for (Norm n : report.norms) out << ",err_" << to_string(n);
  for (Norm n : report.norms) out << ",eoc_" << to_string(n);
  out << ",solver_iters,seconds\n";
  char buf[64];
  auto number = [&](double v) {
    if (std::isnan(v)) return std::string("nan");
    std::snprintf(buf, sizeof buf, "%.12e", v);
    return std::string(buf);
  };
  for (const auto& r : report.rows) {
    out << r.level << ',' << number(r.h) << ',' << r.n_dofs;
    for (double e : r.errors) out << ',' << number(e);
    for (double e : r.eoc) {
      if (std::isnan(e)) {
        out << ",nan";
      } else {
        std::snprintf(buf, sizeof buf, "%.6f", e);
        out << ',' << buf;
      }
    }
    std::snprintf(buf, sizeof buf, "%.3f", r.seconds);
    out << ',' << r.solver_iterations << ',' << buf << '\n';
  }
}

}  // namespace c0ip
