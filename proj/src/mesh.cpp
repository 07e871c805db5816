#include <psfeec/mesh.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace psfeec {

namespace {

[[noreturn]] void parse_fail(int line, const std::string & what)
{
  throw Error("mesh parse error at line " + std::to_string(line) + ": " + what);
}

std::istream & next_data_line(std::istream & in, std::string & line, int & lineno)
{
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r\n") != std::string::npos) return in;
  }
  return in;
}

} // namespace

double MacroMesh::mesh_size() const
{
  double h = 0.0;
  for (const auto & e : edges) h = std::max(h, (vertices[e.b] - vertices[e.a]).norm());
  return h;
}

void MacroMesh::finalize()
{
  // duplicate vertices
  for (std::size_t i = 0; i < vertices.size(); ++i)
    for (std::size_t j = i + 1; j < vertices.size(); ++j)
      if ((vertices[i] - vertices[j]).norm() == 0.0)
        throw Error("duplicate vertex: indices " + std::to_string(i) + " and " + std::to_string(j));

  double scale2 = 0.0;
  for (const auto & tri : triangles)
    for (int l = 0; l < 3; ++l)
      scale2 = std::max(scale2, (vertices[tri[(l + 1) % 3]] - vertices[tri[l]]).squaredNorm());

  for (std::size_t t = 0; t < triangles.size(); ++t) {
    auto & tri = triangles[t];
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2])
      throw Error("degenerate triangle " + std::to_string(t) + ": repeated vertex index");
    double area = signed_area(vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]);
    if (area < 0.0) {
      std::swap(tri[1], tri[2]);
      area = -area;
    }
    if (!(area > 1e-14 * scale2))
      throw Error("degenerate triangle " + std::to_string(t) + ": area " + std::to_string(area));
  }

  edges.clear();
  triangle_edges.assign(triangles.size(), {-1, -1, -1});
  std::map<std::pair<int, int>, int> edge_of;
  for (std::size_t t = 0; t < triangles.size(); ++t) {
    for (int l = 0; l < 3; ++l) {
      int va = triangles[t][(l + 1) % 3];
      int vb = triangles[t][(l + 2) % 3];
      bool ccw = va < vb; // triangle sees the canonical edge (min,max) in CCW order
      auto key = std::minmax(va, vb);
      auto it = edge_of.find(key);
      if (it == edge_of.end()) {
        MacroEdge e;
        e.a = key.first;
        e.b = key.second;
        (ccw ? e.tri_left : e.tri_right) = int(t);
        it = edge_of.emplace(key, int(edges.size())).first;
        edges.push_back(e);
      } else {
        MacroEdge & e = edges[it->second];
        int & slot = ccw ? e.tri_left : e.tri_right;
        if (slot != -1)
          throw Error("non-manifold edge (" + std::to_string(key.first) + "," +
                      std::to_string(key.second) + "): more than two incident triangles");
        slot = int(t);
      }
      triangle_edges[t][l] = it->second;
    }
  }
  for (auto & e : edges) e.boundary = (e.tri_left == -1 || e.tri_right == -1);
}

MacroMesh load_macro_mesh(std::istream & in)
{
  MacroMesh mesh;
  std::string line;
  int lineno = 0;
  if (!next_data_line(in, line, lineno)) parse_fail(lineno, "empty input");
  std::istringstream hdr(line);
  long nv = -1, nt = -1;
  if (!(hdr >> nv >> nt) || nv < 3 || nt < 1) parse_fail(lineno, "expected header 'nv nt'");
  mesh.vertices.reserve(nv);
  for (long i = 0; i < nv; ++i) {
    if (!next_data_line(in, line, lineno)) parse_fail(lineno, "unexpected end of vertex list");
    std::istringstream ls(line);
    double x, y;
    if (!(ls >> x >> y)) parse_fail(lineno, "expected 'x y'");
    mesh.vertices.emplace_back(x, y);
  }
  for (long t = 0; t < nt; ++t) {
    if (!next_data_line(in, line, lineno)) parse_fail(lineno, "unexpected end of triangle list");
    std::istringstream ls(line);
    long i, j, k;
    if (!(ls >> i >> j >> k)) parse_fail(lineno, "expected 'i j k'");
    for (long v : {i, j, k})
      if (v < 0 || v >= nv) parse_fail(lineno, "vertex index out of range");
    mesh.triangles.push_back({int(i), int(j), int(k)});
  }
  mesh.finalize();
  return mesh;
}

namespace {

// Triangle-style .node/.ele pair; 0- or 1-based indexing is detected from
// the first index of the .node file.
MacroMesh load_node_ele(const std::string & node_path)
{
  std::string ele_path = node_path;
  auto dot = ele_path.rfind(".node");
  if (dot != std::string::npos)
    ele_path.replace(dot, 5, ".ele");
  else
    ele_path += ".ele";

  std::ifstream node(node_path);
  if (!node) throw Error("cannot open " + node_path);
  std::ifstream ele(ele_path);
  if (!ele) throw Error("cannot open " + ele_path);

  MacroMesh mesh;
  std::string line;
  int lineno = 0;
  if (!next_data_line(node, line, lineno)) parse_fail(lineno, "empty .node file");
  std::istringstream hdr(line);
  long nv, dim = 2, nattr = 0, nmark = 0;
  if (!(hdr >> nv)) parse_fail(lineno, "bad .node header");
  hdr >> dim >> nattr >> nmark;
  if (dim != 2) parse_fail(lineno, ".node dimension must be 2");
  long base = 0;
  for (long i = 0; i < nv; ++i) {
    if (!next_data_line(node, line, lineno)) parse_fail(lineno, "unexpected end of .node");
    std::istringstream ls(line);
    long idx;
    double x, y;
    if (!(ls >> idx >> x >> y)) parse_fail(lineno, "expected 'index x y'");
    if (i == 0) base = idx;
    mesh.vertices.emplace_back(x, y);
  }

  lineno = 0;
  if (!next_data_line(ele, line, lineno)) parse_fail(lineno, "empty .ele file");
  std::istringstream ehdr(line);
  long nt, npt = 3;
  if (!(ehdr >> nt)) parse_fail(lineno, "bad .ele header");
  ehdr >> npt;
  if (npt != 3) parse_fail(lineno, ".ele must list 3 nodes per triangle");
  for (long t = 0; t < nt; ++t) {
    if (!next_data_line(ele, line, lineno)) parse_fail(lineno, "unexpected end of .ele");
    std::istringstream ls(line);
    long idx, i, j, k;
    if (!(ls >> idx >> i >> j >> k)) parse_fail(lineno, "expected 'index i j k'");
    for (long v : {i - base, j - base, k - base})
      if (v < 0 || v >= nv) parse_fail(lineno, "vertex index out of range");
    mesh.triangles.push_back({int(i - base), int(j - base), int(k - base)});
  }
  mesh.finalize();
  return mesh;
}

} // namespace

MacroMesh load_macro_mesh(const std::string & path, MeshFormat format)
{
  if (format == MeshFormat::NodeEle) return load_node_ele(path);
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return load_macro_mesh(in);
}

Vec2 incenter(const Vec2 & p1, const Vec2 & p2, const Vec2 & p3)
{
  double a = (p3 - p2).norm();
  double b = (p1 - p3).norm();
  double c = (p2 - p1).norm();
  double area = std::abs(signed_area(p1, p2, p3));
  if (!(area > 1e-14 * (a + b + c) * (a + b + c)))
    throw Error("incenter: degenerate triangle");
  return (a * p1 + b * p2 + c * p3) / (a + b + c);
}

MacroMesh reference_triangle_mesh()
{
  return from_vertices_triangles({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}});
}

MacroMesh two_triangle_square_mesh()
{
  return from_vertices_triangles({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{0, 1, 2}, {0, 2, 3}});
}

MacroMesh structured_square_mesh(int n)
{
  std::vector<Vec2> verts;
  verts.reserve((n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) verts.emplace_back(double(i) / n, double(j) / n);
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  std::vector<TriangleIndices> tris;
  tris.reserve(2 * n * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      tris.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      tris.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return from_vertices_triangles(std::move(verts), std::move(tris));
}

MacroMesh from_vertices_triangles(std::vector<Vec2> vertices, std::vector<TriangleIndices> triangles)
{
  MacroMesh mesh;
  mesh.vertices = std::move(vertices);
  mesh.triangles = std::move(triangles);
  mesh.finalize();
  return mesh;
}

MacroMesh random_triangle_mesh(std::mt19937_64 & rng, double min_angle_deg)
{
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double min_angle = min_angle_deg * M_PI / 180.0;
  for (int attempt = 0; attempt < 10000; ++attempt) {
    Vec2 a(unif(rng), unif(rng)), b(unif(rng), unif(rng)), c(unif(rng), unif(rng));
    if (std::abs(signed_area(a, b, c)) < 0.02) continue;
    bool ok = true;
    std::array<Vec2, 3> p{a, b, c};
    for (int l = 0; l < 3; ++l) {
      Vec2 u = (p[(l + 1) % 3] - p[l]).normalized();
      Vec2 v = (p[(l + 2) % 3] - p[l]).normalized();
      if (std::acos(std::clamp(u.dot(v), -1.0, 1.0)) < min_angle) ok = false;
    }
    if (ok) return from_vertices_triangles({a, b, c}, {{0, 1, 2}});
  }
  throw Error("random_triangle_mesh: rejection sampling failed");
}

} // namespace psfeec
