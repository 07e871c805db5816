// Powell-Sabin refinement of a macro triangulation.
//
// Each macro triangle T with corners z_1,z_2,z_3 (counter-clockwise) gets an
// interior point z_0 and one split point z_{3+i} on each edge e_i =
// [z_{i+1}, z_{i+2}] (edge i opposite corner i). Connecting z_0 to all six
// boundary points partitions T into six subtriangles, indexed so that fan i
// (the two subtriangles touching edge i) is {2i, 2i+1}:
//
//   sub[2i]   = (z_{i+1}, z_{3+i}, z_0)
//   sub[2i+1] = (z_{3+i}, z_{i+2}, z_0)
//
// Split points of interior macro edges are the intersection of the segment
// joining the two adjacent interior points with the edge (the refinement is
// rejected if that intersection does not exist strictly inside both
// segments); boundary edges are split at the midpoint. Every split point is
// then a singular vertex: its incident edges lie on exactly two lines.

#ifndef PSFEEC_SPLIT_HPP
#define PSFEEC_SPLIT_HPP

#include <psfeec/mesh.hpp>
#include <array>
#include <utility>
#include <vector>

namespace psfeec {

enum class InteriorRule { Incenter, Barycenter };

/// Geometry and combinatorics of one refined macro triangle.
struct MacroSplit
{
  std::array<int, 3> corner_ids;  ///< global vertex indices, CCW
  std::array<Vec2, 3> corner;     ///< z_1, z_2, z_3
  Vec2 center;                    ///< z_0
  std::array<int, 3> edge_ids;    ///< global macro edge index of e_i
  std::array<Vec2, 3> split;      ///< z_{3+i}
  std::array<Vec2, 3> normal;     ///< outward unit normal n_i of e_i
  std::array<Vec2, 3> tangent;    ///< unit tangent t_i of e_i (z_{i+1} -> z_{i+2})
  std::array<Vec2, 3> s_dir;      ///< unit tangent of [z_0, z_{3+i}], from z_{3+i} toward z_0
  std::array<Vec2, 3> grad_mu;    ///< gradient of mu on fan i
  std::array<Vec2, 3> jump_m1;    ///< outward normal of sub[2i] perpendicular to [z_0, z_{3+i}]
  std::array<double, 3> jump_sign; ///< +-1: sign(jump_m1 . canonical edge tangent)
  std::array<double, 3> edge_length;
  double area = 0.0;

  std::array<std::array<Vec2, 3>, 6> sub;        ///< subtriangle vertices
  std::array<double, 6> sub_area;
  std::array<std::array<Vec2, 3>, 6> grad_lambda; ///< barycentric gradients per subtriangle

  /// Local subtriangle hosting each canonical half of edge i
  /// (half 0 = [a, m], half 1 = [m, b] with a < b the global edge ends).
  std::array<std::array<int, 2>, 3> half_host;

  /// Barycentric coordinates of x in subtriangle s.
  Eigen::Vector3d lambda(int s, const Vec2 & x) const
  {
    const auto & tri = sub[s];
    double a0 = signed_area(x, tri[1], tri[2]);
    double a1 = signed_area(tri[0], x, tri[2]);
    double a2 = signed_area(tri[0], tri[1], x);
    return Eigen::Vector3d(a0, a1, a2) / sub_area[s];
  }

  /// Subtriangle containing x (ties resolved to the lowest index).
  int locate(const Vec2 & x) const;
};

/// One point of M(T_h^ps); there is exactly one per macro edge.
struct SplitPoint
{
  int macro_edge = -1;
  Vec2 position;
  bool interior = false; ///< split point of an interior macro edge
};

/// One of the 2E elements of E^b(T_h^ps), with canonical orientation
/// p0 -> p1 running along the canonical direction of the macro edge
/// (lower vertex index toward higher).
struct BoundaryHalfEdge
{
  int macro_edge = -1;
  int half = 0; ///< 0: [a, split], 1: [split, b]
  Vec2 p0, p1;
  double length = 0.0;
};

/// Cyclically ordered subtriangles around a split point, counter-clockwise,
/// starting so that the subtriangles of the lower-indexed macro triangle
/// come first. Interior points have four entries, boundary points two.
struct SingularFan
{
  std::vector<std::pair<int, int>> tris; ///< (macro index, local subtriangle)
};

class SplitComplex
{
public:
  const MacroMesh & mesh() const { return m_mesh; }
  int n_macro() const { return int(m_macros.size()); }
  const MacroSplit & macro(int t) const { return m_macros[t]; }
  const std::vector<SplitPoint> & split_points() const { return m_split_points; }
  const std::vector<BoundaryHalfEdge> & boundary_half_edges() const { return m_half_edges; }
  const BoundaryHalfEdge & half_edge(int macro_edge, int half) const
  {
    return m_half_edges[2 * macro_edge + half];
  }
  const SingularFan & fan(int split_point) const { return m_fans[split_point]; }

  /// Canonical unit tangent of a macro edge (lower index -> higher).
  Vec2 canonical_tangent(int macro_edge) const;
  /// Canonical normal: the tangent rotated by -pi/2.
  Vec2 canonical_normal(int macro_edge) const { return -perp(canonical_tangent(macro_edge)); }

  int n_subtriangles() const { return 6 * n_macro(); }

  /// Largest corner-to-corner distance over the mesh (scaling for tolerances).
  double scale() const { return m_scale; }

  /// Re-checks all geometric invariants: positive subtriangle areas,
  /// split points on their host segments, and the two-line (singular
  /// vertex) property at every split point. Throws Error on violation.
  void verify() const;

  friend SplitComplex powell_sabin_refine(const MacroMesh &, InteriorRule);

  // Mutable access for perturbation tests.
  MacroSplit & mutable_macro(int t) { return m_macros[t]; }
  std::vector<SplitPoint> & mutable_split_points() { return m_split_points; }

private:
  MacroMesh m_mesh;
  std::vector<MacroSplit> m_macros;
  std::vector<SplitPoint> m_split_points; ///< indexed by macro edge
  std::vector<BoundaryHalfEdge> m_half_edges; ///< indexed 2*edge + half
  std::vector<SingularFan> m_fans;        ///< indexed by macro edge
  double m_scale = 0.0;
};

/// Build the Powell-Sabin refinement. Throws Error when the interior-point
/// rule violates the well-definedness condition on some shared edge.
SplitComplex powell_sabin_refine(const MacroMesh & mesh,
                                 InteriorRule rule = InteriorRule::Incenter);

/// The fan map z in M(T_h^ps) -> ordered incident subtriangles, re-validating
/// the singular-vertex property (throws on non-singular configurations).
std::vector<SingularFan> singular_fans(const SplitComplex & sc);

} // namespace psfeec

#endif
