// Command-line front end: run studies from a config file, list the
// manufactured cases, check refined meshes of a domain.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "c0ip/config.hpp"
#include "c0ip/mesh.hpp"
#include "c0ip/study.hpp"

namespace {

using namespace c0ip;

std::string format(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

int run(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config '" + path + "'");
  std::stringstream text;
  text << in.rdbuf();

  RunConfig config;
  try {
    config = parse_config(text.str());
  } catch (const ConfigError& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  const ManufacturedCase& c = config.manufactured_case();
  const Polygon domain = load_domain(config.domain);
  const ConvergenceReport report = run_study(c, domain, config.study_options());

  std::vector<std::string> comments{
      "c0ip " C0IP_BUILD_ID,
      "problem = " + std::string(to_string(config.problem)),
      "case = " + c.name,
      "domain = " + domain.name,
      "levels = " + std::to_string(config.first_level) + ".." + std::to_string(config.last_level),
      "sigma = " + format_double(config.sigma),
      "alpha = " + format_double(config.alpha),
      std::string("consistency = ") + (config.consistency == ConsistencySign::minus ? "minus" : "plus"),
  };
  if (config.problem == ProblemKind::dirichlet_control && c.name == "control-reference")
    comments.push_back("reference_level = " + std::to_string(config.reference_level));
  for (const auto& row : report.rows)
    if (row.compatibility_defect)
      comments.push_back("compatibility_defect level " + std::to_string(row.level) + " = " +
                         format("%.3e", *row.compatibility_defect));

  const std::string output = config.output.empty() ? c.name + ".csv" : config.output;
  std::ofstream out(output);
  if (!out) throw std::runtime_error("cannot write '" + output + "'");
  write_csv(out, report, comments);
  out.close();
  if (!out) throw std::runtime_error("failed writing '" + output + "'");

  for (const auto& row : report.rows)
    if (row.compatibility_defect)
      std::cout << "compatibility defect, level " << row.level << ": " << format("%.3e", *row.compatibility_defect)
                << "\n";
  const auto& last = report.rows.back();
  std::cout << "final eoc (levels " << last.level - 1 << "->" << last.level << "):";
  for (std::size_t k = 0; k < report.norms.size(); ++k)
    std::cout << " " << to_string(report.norms[k]) << "=" << format("%.4f", last.eoc[k]);
  std::cout << "\nwrote " << output << "\n";
  return 0;
}

int list_cases() {
  for (const auto& c : manufactured_cases()) {
    std::string domains;
    for (const auto& d : c.domains) domains += (domains.empty() ? "" : ",") + d;
    std::cout << c.name << "  [" << to_string(c.problem) << "; " << (domains.empty() ? "any domain" : domains)
              << "]\n    " << c.description << "\n";
  }
  return 0;
}

int check(const std::string& name, int levels) {
  const Polygon domain = load_domain(name);
  Triangulation mesh = triangulate_initial(domain);
  std::printf("%5s %9s %9s %9s %9s %14s\n", "level", "vertices", "edges", "triangles", "boundary", "h");
  for (int level = 0;; ++level) {
    int boundary = 0;
    for (const auto& e : mesh.edges) boundary += e.is_boundary();
    std::printf("%5d %9d %9d %9d %9d %14.6e\n", level, mesh.n_vertices(), mesh.n_edges(), mesh.n_triangles(),
                boundary, mesh.mesh_size());
    if (const std::string err = check_mesh(mesh, domain); !err.empty()) {
      std::fprintf(stderr, "level %d: %s\n", level, err.c_str());
      return 1;
    }
    if (mesh.n_vertices() - mesh.n_edges() + mesh.n_triangles() != 1) {
      std::fprintf(stderr, "level %d: Euler characteristic is not 1\n", level);
      return 1;
    }
    if (level == levels) break;
    mesh = refine_uniform(mesh);
  }
  std::printf("ok\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"C0 interior penalty solvers for fourth-order problems"};
  app.set_version_flag("--version", C0IP_BUILD_ID);
  app.require_subcommand(1);

  std::string config_path;
  auto* run_cmd = app.add_subcommand("run", "Run a convergence study described by a config file");
  run_cmd->add_option("config", config_path, "Config file")->required();

  auto* list_cmd = app.add_subcommand("list-cases", "List manufactured cases");

  std::string domain;
  int levels = 0;
  auto* mesh_cmd = app.add_subcommand("check-mesh", "Refine a domain and verify mesh invariants");
  mesh_cmd->add_option("domain", domain, "Built-in domain name or vertex file")->required();
  mesh_cmd->add_option("levels", levels, "Number of refinements")->required()->check(CLI::Range(0, 9));

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run_cmd) return run(config_path);
    if (*list_cmd) return list_cases();
    if (*mesh_cmd) return check(domain, levels);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
