// Acceptance run: one PASS/FAIL line per criterion, then a summary.
//
//   acceptance [--known-red 1,5]
//
// Exit status is 0 when every failing criterion is listed as known red.
// Lines starting with "info" are measurements that do not decide anything.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "c0ip/cahn_hilliard.hpp"
#include "c0ip/control.hpp"
#include "c0ip/study.hpp"
#include "oracle.hpp"

using namespace c0ip;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

/// Collects the sub-checks of one criterion.
class Criterion {
 public:
  explicit Criterion(int id) : id_(id) {}

  void check(bool ok, const std::string& what) {
    std::printf("  %s  %s\n", ok ? "ok  " : "FAIL", what.c_str());
    ok_ = ok_ && ok;
  }
  bool ok() const { return ok_; }
  int id() const { return id_; }

 private:
  int id_;
  bool ok_ = true;
};

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return true;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (double x : v) s += (s.empty() ? "" : " ") + fmt("%.3e", x);
  return s;
}

C0ipParams sigma(double s) {
  C0ipParams p;
  p.sigma = s;
  return p;
}

StudyOptions levels(int first, int last, double s) {
  StudyOptions o;
  o.first_level = first;
  o.last_level = last;
  o.params = sigma(s);
  return o;
}

Vector random_vector(int n, std::mt19937& rng) {
  std::normal_distribution<double> normal;
  Vector v(n);
  for (auto& x : v) x = normal(rng);
  return v;
}

// --- 1 -----------------------------------------------------------------------

void plate(Criterion& c) {
  const auto start = Clock::now();
  const auto r = run_study(find_case("plate-bubble"), builtin_domain("unit-square"), levels(2, 5, 5.0));
  const double t = seconds_since(start);
  const double e = r.final_eoc(Norm::energy), l2 = r.final_eoc(Norm::l2);
  c.check(e >= 0.85 && e <= 1.15, fmt("energy eoc 4->5 = %.4f in [0.85, 1.15] (sigma 5)", e));
  c.check(l2 >= 1.8 && l2 <= 2.2, fmt("l2 eoc 4->5 = %.4f in [1.8, 2.2] (sigma 5)", l2));
  c.check(t <= 60.0, fmt("runtime %.2f s <= 60 s", t));

  const auto longer = run_study(find_case("plate-bubble"), builtin_domain("unit-square"), levels(2, 7, 5.0));
  const auto eo = eoc(longer.errors(Norm::energy), [&] {
    std::vector<double> h;
    for (const auto& row : longer.rows) h.push_back(row.h);
    return h;
  }());
  std::printf("  info  sigma 5, levels 2..7: energy eoc %s, l2 eoc 6->7 = %.4f\n", join(eo).c_str(),
              longer.final_eoc(Norm::l2));
  const auto s10 = run_study(find_case("plate-bubble"), builtin_domain("unit-square"), levels(2, 5, 10.0));
  std::printf("  info  sigma 10, levels 2..5: energy eoc %.4f, l2 eoc %.4f\n", s10.final_eoc(Norm::energy),
              s10.final_eoc(Norm::l2));
}

// --- 2 -----------------------------------------------------------------------

constexpr double kStudySigma = 10.0;

void cahn_hilliard(Criterion& c) {
  const auto square = run_study(find_case("ch-cosine"), builtin_domain("unit-square"), levels(2, 5, kStudySigma));
  const double e = square.final_eoc(Norm::h);
  c.check(e >= 0.85 && e <= 1.15, fmt("unit-square h eoc 4->5 = %.4f in [0.85, 1.15] (sigma 10)", e));
  double defect = 0.0;
  for (const auto& row : square.rows) defect = std::max(defect, std::abs(row.compatibility_defect.value_or(NAN)));
  c.check(defect <= 1e-10, fmt("max compatibility defect %.2e <= 1e-10", defect));

  const auto pent = run_study(find_case("ch-bubble"), builtin_domain("pentagon150"), levels(2, 5, kStudySigma));
  const auto errs = pent.errors(Norm::h);
  c.check(strictly_decreasing(errs), "pentagon150 h errors strictly decrease: " + join(errs));
  c.check(pent.final_eoc(Norm::h) >= 0.5, fmt("pentagon150 h eoc 4->5 = %.4f >= 0.5", pent.final_eoc(Norm::h)));

  const auto sq5 = run_study(find_case("ch-cosine"), builtin_domain("unit-square"), levels(2, 5, 5.0));
  const auto pent5 = run_study(find_case("ch-bubble"), builtin_domain("pentagon150"), levels(2, 5, 5.0));
  std::printf("  info  sigma 5: unit-square h eoc %.4f; pentagon150 h errors %s, eoc %.4f\n", sq5.final_eoc(Norm::h),
              join(pent5.errors(Norm::h)).c_str(), pent5.final_eoc(Norm::h));
}

// --- 3 -----------------------------------------------------------------------

ControlProblem smooth_control() {
  ControlProblem p;
  p.f = [](const Point&) { return 1.0; };
  p.u_d = [](const Point& x) { return x.x() * (1 - x.x()) * x.y() * (1 - x.y()); };
  return p;
}

void kkt(Criterion& c) {
  {
    ControlProblem p;
    p.f = p.u_d = [](const Point&) { return 0.0; };
    const KktSolution s = DirichletControl(make_mesh(builtin_domain("unit-square"), 3), p).solve();
    const double m = std::max({s.u_f_h.lpNorm<Eigen::Infinity>(), s.q_h.lpNorm<Eigen::Infinity>(),
                               s.phi_h.lpNorm<Eigen::Infinity>()});
    c.check(m == 0.0, fmt("(a) zero data: max |u_f|, |q|, |phi| = %g", m));
  }

  double worst = 0.0;
  for (const char* domain : {"unit-square", "pentagon150"})
    for (int level = 1; level <= 3; ++level) {
      const DirichletControl dc(make_mesh(builtin_domain(domain), level), smooth_control());
      const KktSolution r = dc.solve(), m = dc.solve_monolithic();
      worst = std::max({worst, (r.q_h - m.q_h).norm() / m.q_h.norm(), (r.u_f_h - m.u_f_h).norm() / m.u_f_h.norm(),
                        (r.phi_h - m.phi_h).norm() / m.phi_h.norm()});
    }
  c.check(worst <= 1e-8, fmt("(b) reduced vs monolithic, levels 1..3: max relative difference %.2e <= 1e-8", worst));

  const DirichletControl dc(make_mesh(builtin_domain("unit-square"), 3), smooth_control());
  const int n = dc.dofs().n_dofs();
  std::mt19937 rng(2024);
  const Vector p = random_vector(n, rng);
  const Vector g = dc.reduced_gradient(p);
  double grad = 0.0;
  for (int k = 0; k < 10; ++k) {
    const Vector d = random_vector(n, rng);
    const double step = 1e-5;
    const double fd = (dc.objective(p + step * d) - dc.objective(p - step * d)) / (2 * step);
    grad = std::max(grad, std::abs(fd - g.dot(d)) / std::abs(g.dot(d)));
  }
  c.check(grad <= 1e-6, fmt("(c) gradient vs central differences, 10 directions: max relative %.2e <= 1e-6", grad));

  double sym = 0.0;
  for (int k = 0; k < 10; ++k) {
    const Vector x = random_vector(n, rng), y = random_vector(n, rng);
    const double xhy = x.dot(dc.apply_reduced_hessian(y)), yhx = y.dot(dc.apply_reduced_hessian(x));
    sym = std::max(sym, std::abs(xhy - yhx) / std::max(std::abs(xhy), std::abs(yhx)));
  }
  c.check(sym <= 1e-9, fmt("(d) reduced Hessian symmetry, 10 pairs: max relative %.2e <= 1e-9", sym));
}

// --- 4 -----------------------------------------------------------------------

void control_convergence(Criterion& c) {
  StudyOptions o = levels(1, 4, kStudySigma);
  o.reference_level = 6;
  const auto start = Clock::now();
  const auto r = run_study(find_case("control-reference"), builtin_domain("unit-square"), o);
  const double t = seconds_since(start);
  const auto errs = r.errors(Norm::l2);
  c.check(strictly_decreasing(errs), "l2 errors vs level 6 strictly decrease (sigma 10): " + join(errs));
  c.check(r.final_eoc(Norm::l2) >= 1.5, fmt("l2 eoc 3->4 = %.4f >= 1.5", r.final_eoc(Norm::l2)));
  c.check(t <= 600.0, fmt("runtime %.2f s <= 600 s", t));

  o.params = sigma(5.0);
  const auto r5 = run_study(find_case("control-reference"), builtin_domain("unit-square"), o);
  std::printf("  info  sigma 5: l2 errors %s, eoc %.4f\n", join(r5.errors(Norm::l2)).c_str(),
              r5.final_eoc(Norm::l2));
}

// --- 5 -----------------------------------------------------------------------

/// Matrices of the ||.||_h form and of the edge-mean term of ||.||_Qh, built
/// from the same element and edge data the norms use.
std::pair<SparseMatrix, SparseMatrix> norm_matrices(const Triangulation& mesh, const DofMap& dofs,
                                                    const C0ipParams& params) {
  std::vector<Eigen::Triplet<double>> h, m;
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const CellGeometry cell(mesh, t);
    const auto lap = cell.laplacians();
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) h.emplace_back(dofs.cell_dofs[t][i], dofs.cell_dofs[t][j], cell.area * lap[i] * lap[j]);
  }
  for (int k = 0; k < mesh.n_edges(); ++k) {
    const EdgeStencil s = edge_stencil(mesh, dofs, k);
    const double length = mesh.edges[k].length;
    Eigen::MatrixXd jj = Eigen::MatrixXd::Zero(s.jump.cols(), s.jump.cols());
    for (std::size_t q = 0; q < s.weights.size(); ++q) {
      const Eigen::VectorXd row = s.jump.row(static_cast<Eigen::Index>(q)).transpose();
      jj += s.weights[q] * row * row.transpose();
    }
    for (std::size_t i = 0; i < s.dofs.size(); ++i)
      for (std::size_t j = 0; j < s.dofs.size(); ++j) {
        const auto a = static_cast<Eigen::Index>(i), b = static_cast<Eigen::Index>(j);
        h.emplace_back(s.dofs[i], s.dofs[j], params.sigma / length * jj(a, b));
        m.emplace_back(s.dofs[i], s.dofs[j], length * length * s.mean[a] * s.mean[b]);
      }
  }
  SparseMatrix hm(dofs.n_dofs(), dofs.n_dofs()), mm(dofs.n_dofs(), dofs.n_dofs());
  hm.setFromTriplets(h.begin(), h.end());
  mm.setFromTriplets(m.begin(), m.end());
  return {hm, mm};
}

bool factors(const SparseMatrix& a) {
  try {
    CholeskyFactor f(a);
    return true;
  } catch (const DefinitenessError&) {
    return false;
  }
}

void form_properties(Criterion& c) {
  const C0ipParams params = sigma(5.0);
  double asym = 0.0;
  std::vector<std::string> indefinite;
  for (const auto& name : builtin_domain_names()) {
    const Polygon poly = builtin_domain(name);
    Triangulation mesh = make_mesh(poly, 1);
    for (int level = 1; level <= 5; ++level, mesh = refine_uniform(mesh)) {
      const DofMap dofs = build_dofmap(mesh, SpaceKind::Qh);
      const SparseMatrix a = assemble_a_h(mesh, dofs, params);
      asym = std::max(asym, SparseMatrix(a - SparseMatrix(a.transpose())).norm() / a.norm());

      std::vector<int> interior, pinned;
      const int pin = default_pinned_corner(mesh);
      for (int i = 0; i < dofs.n_dofs(); ++i) {
        if (!dofs.on_boundary[i]) interior.push_back(i);
        if (i != pin) pinned.push_back(i);
      }
      if (!factors(submatrix(a, interior, interior))) indefinite.push_back(name + " V_h L" + std::to_string(level));
      if (!factors(submatrix(a, pinned, pinned))) indefinite.push_back(name + " Q_h* L" + std::to_string(level));
    }
  }
  c.check(asym <= 1e-12, fmt("a_h symmetry, all domains, levels 1..5: max relative %.2e <= 1e-12", asym));
  std::string list;
  for (const auto& s : indefinite) list += (list.empty() ? "" : ", ") + s;
  c.check(indefinite.empty(), "Cholesky of V_h and Q_h* systems at sigma 5, levels 1..5" +
                                  (indefinite.empty() ? std::string() : ": not positive definite on " + list));

  // Empirical constants of ||.||_Qh / ||.||_h on Q_h*. Random samples seed a
  // Rayleigh-quotient iteration, so the extremes are sampled where they live.
  for (const auto& name : builtin_domain_names()) {
    const Polygon poly = builtin_domain(name);
    std::vector<double> lo, hi;
    double mismatch = 0.0;
    std::mt19937 rng(7);
    Triangulation mesh = make_mesh(poly, 1);
    for (int level = 1; level <= 5; ++level, mesh = refine_uniform(mesh)) {
      const DofMap dofs = build_dofmap(mesh, SpaceKind::Qh);
      const auto [h, mean] = norm_matrices(mesh, dofs, params);
      std::vector<int> keep;
      for (int i = 0; i < dofs.n_dofs(); ++i)
        if (i != default_pinned_corner(mesh)) keep.push_back(i);
      const SparseMatrix hs = submatrix(h, keep, keep), qs = submatrix(SparseMatrix(h + mean), keep, keep);

      // The matrices reproduce the library norms.
      Vector probe = random_vector(dofs.n_dofs(), rng);
      probe[default_pinned_corner(mesh)] = 0.0;
      const double nh = norm_h(probe, mesh, dofs, params), nq = norm_Qh(probe, mesh, dofs, params);
      mismatch = std::max({mismatch, std::abs(probe.dot(h * probe) / (nh * nh) - 1),
                           std::abs(probe.dot((h + mean) * probe) / (nq * nq) - 1)});

      const CholeskyFactor hf(hs), qf(qs);
      const auto extreme = [&](const SparseMatrix& num, const SparseMatrix& den, const CholeskyFactor& den_f) {
        Vector x = random_vector(static_cast<int>(keep.size()), rng);
        for (int it = 0; it < 200; ++it) x = den_f.solve(num * x).normalized();
        return x.dot(num * x) / x.dot(den * x);
      };
      hi.push_back(std::sqrt(extreme(qs, hs, hf)));
      lo.push_back(1.0 / std::sqrt(extreme(hs, qs, qf)));
    }
    const auto drift = [](const std::vector<double>& v) {
      const auto [a, b] = std::minmax_element(v.begin(), v.end());
      return (*b - *a) / *a;
    };
    c.check(mismatch <= 1e-10, fmt("%s norm matrices reproduce norm_h and norm_Qh: %.1e", name.c_str(), mismatch));
    c.check(drift(lo) <= 0.2 && drift(hi) <= 0.2,
            fmt("%s norm equivalence, levels 1..5: c = %s, C = %s, drift %.1f%% / %.1f%% <= 20%%", name.c_str(),
                join(lo).c_str(), join(hi).c_str(), 100 * drift(lo), 100 * drift(hi)));
  }

  for (const auto& name : builtin_domain_names()) {
    const Triangulation mesh = make_mesh(builtin_domain(name), 2);
    const DofMap dofs = build_dofmap(mesh, SpaceKind::Qh);
    const Eigen::MatrixXd a(assemble_a_h(mesh, dofs, params));
    const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(a, Eigen::EigenvaluesOnly).eigenvalues();
    const double scale = ev.cwiseAbs().maxCoeff();
    const long zeros = (ev.array().abs() <= 1e-10 * scale).count();
    const Vector ones = Vector::Ones(dofs.n_dofs());
    const double kernel = (a * ones).norm() / (scale * ones.norm());
    c.check(zeros == 1 && kernel <= 1e-12,
            fmt("%s level 2: %ld zero eigenvalue(s) of a_h on Q_h, |a_h 1| / |a_h| = %.1e", name.c_str(), zeros, kernel));
  }
}

// --- 6 -----------------------------------------------------------------------

// Frozen from the per-edge oracle on the two-triangle square at sigma 5.
constexpr double kAhXSquared = 32.0;
constexpr double kNormHXSquared = 24.0;

void hand_values(Criterion& c) {
  const Triangulation mesh = make_mesh(builtin_domain("unit-square"), 0);
  const DofMap dofs = build_dofmap(mesh, SpaceKind::Qh);
  const Vector u = interpolate(dofs, [](const Point& x) { return x.x() * x.x(); });
  C0ipParams printed = sigma(5.0);
  printed.consistency = ConsistencySign::plus;

  const double oracle_a = oracle::a_h(mesh, dofs, u, u, printed);
  const double oracle_n = oracle::norm_parts(mesh, dofs, u, 5.0).h2;
  c.check(std::abs(oracle_a - kAhXSquared) <= 1e-12, fmt("oracle a_h(x^2, x^2) = %.15g", oracle_a));
  c.check(std::abs(oracle_n - kNormHXSquared) <= 1e-12, fmt("oracle ||x^2||_h^2 = %.15g", oracle_n));

  const double a = u.dot(assemble_a_h(mesh, dofs, printed) * u);
  const double n2 = std::pow(norm_h(u, mesh, dofs, printed), 2);
  c.check(std::abs(a - kAhXSquared) <= 1e-12, fmt("assembled a_h(x^2, x^2) = %.15g vs 32", a));
  c.check(std::abs(n2 - kNormHXSquared) <= 1e-12, fmt("assembled ||x^2||_h^2 = %.15g vs 24", n2));
  std::printf("  info  default consistency sign: a_h(x^2, x^2) = %.15g\n", u.dot(assemble_a_h(mesh, dofs, sigma(5)) * u));
}

std::set<int> parse_list(const std::string& s) {
  std::set<int> out;
  std::stringstream in(s);
  for (std::string item; std::getline(in, item, ',');) out.insert(std::stoi(item));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> known_red;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--known-red" && i + 1 < argc) {
      known_red = parse_list(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--known-red 1,5]\n", argv[0]);
      return 2;
    }
  }

  const std::vector<std::pair<const char*, std::function<void(Criterion&)>>> criteria = {
      {"clamped plate rates", plate},
      {"Cahn-Hilliard rates and compatibility", cahn_hilliard},
      {"discrete KKT system", kkt},
      {"control self-convergence", control_convergence},
      {"form-level properties", form_properties},
      {"hand-computed values", hand_values},
  };

  std::vector<int> failed, unexpected;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Criterion c(static_cast<int>(k) + 1);
    std::printf("[%d] %s\n", c.id(), criteria[k].first);
    std::fflush(stdout);
    try {
      criteria[k].second(c);
    } catch (const std::exception& e) {
      c.check(false, std::string("exception: ") + e.what());
    }
    std::printf("%s %d %s%s\n", c.ok() ? "PASS" : "FAIL", c.id(), criteria[k].first,
                !c.ok() && known_red.count(c.id()) ? " (known red)" : "");
    std::fflush(stdout);
    if (!c.ok()) {
      failed.push_back(c.id());
      if (!known_red.count(c.id())) unexpected.push_back(c.id());
    } else if (known_red.count(c.id())) {
      std::printf("note: criterion %d is listed as known red but passed\n", c.id());
    }
  }

  std::printf("summary: %zu/%zu pass", criteria.size() - failed.size(), criteria.size());
  if (!failed.empty()) {
    std::printf("; failing:");
    for (int id : failed) std::printf(" %d", id);
  }
  std::printf("; unexpected failures: %zu\n", unexpected.size());
  return unexpected.empty() ? 0 : 1;
}
