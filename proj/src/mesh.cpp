#include "c0ip/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numbers>
#include <sstream>

namespace c0ip {

namespace {

double cross(const Point& a, const Point& b) { return a.x() * b.y() - a.y() * b.x(); }

double signed_area(const Point& a, const Point& b, const Point& c) {
  return 0.5 * cross(b - a, c - a);
}

}  // namespace

Polygon make_polygon(std::vector<Point> vertices, std::string name) {
  const std::size_t n = vertices.size();
  if (n < 3) throw MeshError("polygon '" + name + "' needs at least 3 vertices");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if ((vertices[i] - vertices[j]).norm() == 0.0)
        throw MeshError("polygon '" + name + "' repeats vertex " + std::to_string(i));
  double scale = 0.0;
  for (const auto& v : vertices) scale = std::max(scale, v.norm());
  const double tol = 1e-14 * std::max(1.0, scale * scale);
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = vertices[i];
    const Point& b = vertices[(i + 1) % n];
    const Point& c = vertices[(i + 2) % n];
    if (cross(b - a, c - b) <= tol)
      throw MeshError("polygon '" + name + "' is not strictly convex and counter-clockwise at vertex " +
                      std::to_string((i + 1) % n));
  }
  return Polygon{std::move(vertices), std::move(name)};
}

std::vector<std::string> builtin_domain_names() {
  return {"unit-square", "right-triangle", "hexagon", "pentagon150"};
}

Polygon builtin_domain(std::string_view name) {
  if (name == "unit-square")
    return make_polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, "unit-square");
  if (name == "right-triangle")
    return make_polygon({{0, 0}, {1, 0}, {0, 1}}, "right-triangle");
  if (name == "hexagon") {
    std::vector<Point> v;
    for (int k = 0; k < 6; ++k) {
      const double t = k * std::numbers::pi / 3.0;
      v.emplace_back(std::cos(t), std::sin(t));
    }
    return make_polygon(std::move(v), "hexagon");
  }
  if (name == "pentagon150") {
    // Interior angle of 150 degrees at (1,0). That corner comes first so the
    // fan triangulation splits the obtuse angle.
    return make_polygon(
        {{1, 0}, {1 + std::sqrt(3.0) / 2, 0.5}, {1, 1.5}, {0, 1}, {0, 0}}, "pentagon150");
  }
  throw MeshError("unknown built-in domain '" + std::string(name) + "'");
}

Polygon read_polygon(std::istream& in, std::string name) {
  std::vector<Point> v;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    double x, y;
    if (!(ls >> x)) continue;
    if (!(ls >> y)) throw MeshError("line " + std::to_string(line_no) + ": expected 'x y'");
    std::string rest;
    if (ls >> rest) throw MeshError("line " + std::to_string(line_no) + ": trailing input '" + rest + "'");
    v.emplace_back(x, y);
  }
  return make_polygon(std::move(v), std::move(name));
}

Polygon load_domain(const std::string& name_or_path) {
  const auto names = builtin_domain_names();
  if (std::find(names.begin(), names.end(), name_or_path) != names.end())
    return builtin_domain(name_or_path);
  std::ifstream in(name_or_path);
  if (!in) throw MeshError("'" + name_or_path + "' is neither a built-in domain nor a readable file");
  return read_polygon(in, name_or_path);
}

double polygon_area(const Polygon& polygon) {
  const auto& v = polygon.vertices;
  double twice = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) twice += cross(v[i], v[(i + 1) % v.size()]);
  return 0.5 * twice;
}

double polygon_perimeter(const Polygon& polygon) {
  const auto& v = polygon.vertices;
  double length = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) length += (v[(i + 1) % v.size()] - v[i]).norm();
  return length;
}

double Triangulation::area(int t) const {
  const auto& tri = triangles[t];
  return signed_area(vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]);
}

Point Triangulation::centroid(int t) const {
  const auto& tri = triangles[t];
  return (vertices[tri[0]] + vertices[tri[1]] + vertices[tri[2]]) / 3.0;
}

double Triangulation::mesh_size() const {
  double h = 0.0;
  for (const auto& e : edges) h = std::max(h, e.length);
  return h;
}

double Triangulation::total_area() const {
  double a = 0.0;
  for (int t = 0; t < n_triangles(); ++t) a += area(t);
  return a;
}

double Triangulation::boundary_length() const {
  double l = 0.0;
  for (const auto& e : edges)
    if (e.is_boundary()) l += e.length;
  return l;
}

void build_edges(Triangulation& mesh) {
  std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> incidence;  // (t, local edge)
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int k = 0; k < 3; ++k) {
      const int a = tri[k], b = tri[(k + 1) % 3];
      incidence[{std::min(a, b), std::max(a, b)}].emplace_back(t, k);
    }
  }

  mesh.edges.clear();
  mesh.edges.reserve(incidence.size());
  mesh.triangle_edges.assign(mesh.triangles.size(), {-1, -1, -1});
  mesh.boundary_vertex.assign(mesh.vertices.size(), false);

  for (const auto& [key, adjacent] : incidence) {
    if (adjacent.size() > 2)
      throw MeshError("non-conforming mesh: edge (" + std::to_string(key.first) + ", " +
                      std::to_string(key.second) + ") is shared by " +
                      std::to_string(adjacent.size()) + " triangles");
    Edge e;
    e.vertices = {key.first, key.second};
    const Point& a = mesh.vertices[key.first];
    const Point& b = mesh.vertices[key.second];
    e.length = (b - a).norm();
    e.midpoint = 0.5 * (a + b);

    // T- is the adjacent triangle with the smaller index.
    auto [t_minus, local_minus] = adjacent.front();
    if (adjacent.size() == 2 && adjacent[1].first < t_minus) std::tie(t_minus, local_minus) = adjacent[1];
    e.t_minus = t_minus;
    if (adjacent.size() == 2) {
      e.kind = EdgeKind::interior;
      e.t_plus = adjacent[0].first == t_minus ? adjacent[1].first : adjacent[0].first;
    } else {
      e.kind = EdgeKind::boundary;
      mesh.boundary_vertex[key.first] = true;
      mesh.boundary_vertex[key.second] = true;
    }

    // Counter-clockwise triangles have their outward normal to the right of
    // each directed local edge.
    const auto& tri = mesh.triangles[t_minus];
    const Point d = mesh.vertices[tri[(local_minus + 1) % 3]] - mesh.vertices[tri[local_minus]];
    e.normal = Point(d.y(), -d.x()) / d.norm();

    const int id = static_cast<int>(mesh.edges.size());
    for (const auto& [t, k] : adjacent) mesh.triangle_edges[t][k] = id;
    mesh.edges.push_back(e);
  }
}

Triangulation triangulate_initial(const Polygon& polygon) {
  Triangulation mesh;
  mesh.vertices = polygon.vertices;
  const int n = static_cast<int>(polygon.vertices.size());
  for (int i = 1; i + 1 < n; ++i) mesh.triangles.push_back({0, i, i + 1});
  for (int i = 0; i < n; ++i) mesh.corner_vertices.push_back(i);
  mesh.level = 0;
  build_edges(mesh);
  return mesh;
}

Triangulation refine_uniform(const Triangulation& mesh) {
  Triangulation fine;
  const int nv = mesh.n_vertices();
  fine.vertices = mesh.vertices;
  fine.vertices.reserve(nv + mesh.edges.size());
  for (const auto& e : mesh.edges)
    fine.vertices.push_back(0.5 * (mesh.vertices[e.vertices[0]] + mesh.vertices[e.vertices[1]]));

  fine.triangles.reserve(4 * mesh.triangles.size());
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const auto& [a, b, c] = mesh.triangles[t];
    const auto& te = mesh.triangle_edges[t];
    const int ab = nv + te[0], bc = nv + te[1], ca = nv + te[2];
    fine.triangles.push_back({a, ab, ca});
    fine.triangles.push_back({ab, b, bc});
    fine.triangles.push_back({ca, bc, c});
    fine.triangles.push_back({ab, bc, ca});
  }
  fine.corner_vertices = mesh.corner_vertices;
  fine.level = mesh.level + 1;
  build_edges(fine);
  return fine;
}

Triangulation make_mesh(const Polygon& polygon, int levels) {
  Triangulation mesh = triangulate_initial(polygon);
  for (int l = 0; l < levels; ++l) mesh = refine_uniform(mesh);
  return mesh;
}

std::string check_mesh(const Triangulation& mesh, const Polygon& polygon) {
  std::ostringstream err;
  for (int t = 0; t < mesh.n_triangles(); ++t)
    if (!(mesh.area(t) > 0.0)) {
      err << "triangle " << t << " has non-positive signed area";
      return err.str();
    }
  const double area = polygon_area(polygon);
  if (std::abs(mesh.total_area() - area) > 1e-12 * area) {
    err << "triangle areas sum to " << mesh.total_area() << ", polygon area is " << area;
    return err.str();
  }
  const double perimeter = polygon_perimeter(polygon);
  if (std::abs(mesh.boundary_length() - perimeter) > 1e-12 * perimeter) {
    err << "boundary edges sum to " << mesh.boundary_length() << ", perimeter is " << perimeter;
    return err.str();
  }
  for (int k = 0; k < mesh.n_edges(); ++k) {
    const Edge& e = mesh.edges[k];
    if (std::abs(e.normal.norm() - 1.0) > 1e-14) {
      err << "edge " << k << " normal is not unit";
      return err.str();
    }
    if (e.kind == EdgeKind::interior) {
      if (e.t_plus == e.t_minus || e.t_plus < 0 ||
          !(e.normal.dot(mesh.centroid(e.t_plus) - mesh.centroid(e.t_minus)) > 0.0)) {
        err << "interior edge " << k << " has inconsistent T-/T+ orientation";
        return err.str();
      }
    } else {
      // Outward: the polygon lies on the inner side of its boundary edges.
      if (!(e.normal.dot(e.midpoint - mesh.centroid(e.t_minus)) > 0.0)) {
        err << "boundary edge " << k << " normal points inward";
        return err.str();
      }
      const Point& a = mesh.vertices[e.vertices[0]];
      const Point& b = mesh.vertices[e.vertices[1]];
      bool on_boundary = false;
      const auto& pv = polygon.vertices;
      for (std::size_t i = 0; i < pv.size() && !on_boundary; ++i) {
        const Point& p = pv[i];
        const Point d = pv[(i + 1) % pv.size()] - p;
        const double tol = 1e-12 * d.squaredNorm();
        on_boundary = std::abs(cross(d, a - p)) <= tol && std::abs(cross(d, b - p)) <= tol;
      }
      if (!on_boundary) {
        err << "boundary edge " << k << " is not on the polygon boundary";
        return err.str();
      }
    }
  }
  for (std::size_t i = 0; i < polygon.vertices.size(); ++i) {
    const int c = mesh.corner_vertices.at(i);
    if ((mesh.vertices[c] - polygon.vertices[i]).norm() != 0.0) {
      err << "corner " << i << " is not a mesh vertex";
      return err.str();
    }
  }
  return {};
}

}  // namespace c0ip
