// Coarse (macro) triangulations: loading, derived edge tables, boundary
// flags, and the incenter rule used by the Powell-Sabin refinement.

#ifndef PSFEEC_MESH_HPP
#define PSFEEC_MESH_HPP

#include <psfeec/types.hpp>
#include <array>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

namespace psfeec {

/// A triangle of the coarse mesh, vertices counter-clockwise.
using TriangleIndices = std::array<int, 3>;

/// An (unordered) edge of the coarse mesh, stored with a < b.
struct MacroEdge
{
  int a = -1;
  int b = -1;
  int tri_left = -1;  ///< incident triangle with (a,b) counter-clockwise
  int tri_right = -1; ///< the other incident triangle, -1 on the boundary
  bool boundary = false;
};

/// Coarse triangulation with derived connectivity.
///
/// Invariants (established by finalize()): every triangle has positive
/// signed area; each edge is shared by at most two triangles and the
/// boundary flag marks exactly the edges with one incident triangle.
struct MacroMesh
{
  std::vector<Vec2> vertices;
  std::vector<TriangleIndices> triangles;
  std::vector<MacroEdge> edges;
  std::vector<std::array<int, 3>> triangle_edges; ///< edge opposite local vertex l

  int n_vertices() const { return int(vertices.size()); }
  int n_triangles() const { return int(triangles.size()); }
  int n_edges() const { return int(edges.size()); }

  /// V - E + T; equals 1 for a triangulated simply connected domain.
  int euler_characteristic() const { return n_vertices() - n_edges() + n_triangles(); }

  double triangle_area(int t) const
  {
    const auto & tri = triangles[t];
    return signed_area(vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]);
  }

  /// Longest edge over the mesh.
  double mesh_size() const;

  /// Orients triangles counter-clockwise (swapping indices where needed),
  /// builds the edge table and boundary flags, and validates the mesh.
  /// Throws Error on degenerate triangles, duplicate vertices or
  /// non-manifold edges.
  void finalize();
};

enum class MeshFormat { SingleBlock, NodeEle };

/// Parse the single-block text format:
///   line 1: "nv nt"; nv lines "x y"; nt lines "i j k" (0-based).
MacroMesh load_macro_mesh(std::istream & in);

/// Load a mesh from file(s). For NodeEle, `path` names the .node file and
/// the matching .ele file is looked up next to it.
MacroMesh load_macro_mesh(const std::string & path, MeshFormat format = MeshFormat::SingleBlock);

/// Incenter of a non-degenerate triangle: the side-length weighted vertex
/// average (a p1 + b p2 + c p3)/(a+b+c).
Vec2 incenter(const Vec2 & p1, const Vec2 & p2, const Vec2 & p3);

//------------------------------------------------------------------------------
// Built-in meshes used by tests and the command line tools
//------------------------------------------------------------------------------

/// One triangle (0,0), (1,0), (0,1).
MacroMesh reference_triangle_mesh();

/// The unit square split into two triangles along the main diagonal.
MacroMesh two_triangle_square_mesh();

/// Structured n x n grid on the unit square, each cell split into two.
MacroMesh structured_square_mesh(int n);

MacroMesh from_vertices_triangles(std::vector<Vec2> vertices,
                                  std::vector<TriangleIndices> triangles);

/// One random triangle with all angles above min_angle_deg, vertices drawn
/// from the unit square (rejection sampling; used by randomized trials).
MacroMesh random_triangle_mesh(std::mt19937_64 & rng, double min_angle_deg = 25.0);

} // namespace psfeec

#endif
