// Triangulations of convex polygons with uniform red refinement and the
// oriented edge topology used by the interior penalty forms.
#pragma once

#include <array>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace c0ip {

using Point = Eigen::Vector2d;

class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Strictly convex polygon, vertices in counter-clockwise order.
struct Polygon {
  std::vector<Point> vertices;
  std::string name;
};

/// Validates and returns a polygon. Throws MeshError for fewer than three
/// vertices, repeated vertices, clockwise order or a non-convex corner.
Polygon make_polygon(std::vector<Point> vertices, std::string name);

/// Built-in domains: unit-square, right-triangle, hexagon, pentagon150.
Polygon builtin_domain(std::string_view name);
std::vector<std::string> builtin_domain_names();

/// Reads `x y` pairs, one per line. Blank lines and `#` comments are skipped.
Polygon read_polygon(std::istream& in, std::string name);

/// Resolves a built-in name first, then falls back to a vertex file path.
Polygon load_domain(const std::string& name_or_path);

double polygon_area(const Polygon& polygon);
double polygon_perimeter(const Polygon& polygon);

enum class EdgeKind { interior, boundary };

/// Mesh edge. `vertices` is sorted (lower index first), which fixes the
/// parameterization used for edge quadrature. For interior edges `normal`
/// points from t_minus into t_plus; for boundary edges t_plus is -1 and
/// `normal` is the outward unit normal.
struct Edge {
  std::array<int, 2> vertices{};
  double length = 0.0;
  EdgeKind kind = EdgeKind::boundary;
  int t_plus = -1;
  int t_minus = -1;
  Point normal = Point::Zero();
  Point midpoint = Point::Zero();

  bool is_boundary() const { return kind == EdgeKind::boundary; }
};

struct Triangulation {
  std::vector<Point> vertices;
  /// Counter-clockwise vertex triples.
  std::vector<std::array<int, 3>> triangles;
  std::vector<Edge> edges;
  /// Global edge ids of the local edges (v0,v1), (v1,v2), (v2,v0).
  std::vector<std::array<int, 3>> triangle_edges;
  std::vector<bool> boundary_vertex;
  /// Vertex ids that coincide with polygon vertices, in polygon order.
  std::vector<int> corner_vertices;
  int level = 0;

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_triangles() const { return static_cast<int>(triangles.size()); }
  int n_edges() const { return static_cast<int>(edges.size()); }

  double area(int t) const;
  Point centroid(int t) const;
  /// Largest triangle diameter.
  double mesh_size() const;
  double total_area() const;
  double boundary_length() const;
};

/// Fan triangulation from polygon vertex 0, with edges built. For the unit
/// square this is the split along the diagonal (0,0)-(1,1).
Triangulation triangulate_initial(const Polygon& polygon);

/// Splits every triangle into four similar children through its edge
/// midpoints. Existing vertex ids are kept; the midpoint of edge k becomes
/// vertex n_vertices + k.
Triangulation refine_uniform(const Triangulation& mesh);

/// Rebuilds `edges` and `triangle_edges` from `triangles`. Throws MeshError
/// when an edge is shared by more than two triangles.
void build_edges(Triangulation& mesh);

/// Coarse mesh refined `levels` times.
Triangulation make_mesh(const Polygon& polygon, int levels);

/// Checks every Triangulation invariant against the polygon; returns an
/// empty string when all hold, otherwise a description of the first failure.
std::string check_mesh(const Triangulation& mesh, const Polygon& polygon);

}  // namespace c0ip
