#include <psfeec/split.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace psfeec {

int MacroSplit::locate(const Vec2 & x) const
{
  int best = 0;
  double best_min = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < 6; ++s) {
    Eigen::Vector3d l = lambda(s, x);
    double m = l.minCoeff();
    if (m > best_min + 1e-14) {
      best_min = m;
      best = s;
    }
  }
  return best;
}

Vec2 SplitComplex::canonical_tangent(int macro_edge) const
{
  const MacroEdge & e = m_mesh.edges[macro_edge];
  return (m_mesh.vertices[e.b] - m_mesh.vertices[e.a]).normalized();
}

namespace {

Vec2 interior_point(const MacroMesh & mesh, int t, InteriorRule rule)
{
  const auto & tri = mesh.triangles[t];
  const Vec2 & p1 = mesh.vertices[tri[0]];
  const Vec2 & p2 = mesh.vertices[tri[1]];
  const Vec2 & p3 = mesh.vertices[tri[2]];
  if (rule == InteriorRule::Barycenter) return (p1 + p2 + p3) / 3.0;
  return incenter(p1, p2, p3);
}

// Intersection of segments [p,q] and [a,b]; returns parameters (s,u) with
// x = p + s(q-p) = a + u(b-a).
bool intersect_segments(const Vec2 & p, const Vec2 & q, const Vec2 & a, const Vec2 & b,
                        double & s, double & u)
{
  Vec2 d1 = q - p, d2 = b - a;
  double det = d1.x() * d2.y() - d1.y() * d2.x();
  double scale = d1.norm() * d2.norm();
  if (std::abs(det) < 1e-14 * scale) return false;
  Vec2 rhs = a - p;
  s = (rhs.x() * d2.y() - rhs.y() * d2.x()) / det;
  u = (rhs.x() * d1.y() - rhs.y() * d1.x()) / det;
  return true;
}

} // namespace

SplitComplex powell_sabin_refine(const MacroMesh & mesh, InteriorRule rule)
{
  SplitComplex sc;
  sc.m_mesh = mesh;
  const MacroMesh & m = sc.m_mesh;

  std::vector<Vec2> centers(m.n_triangles());
  for (int t = 0; t < m.n_triangles(); ++t) centers[t] = interior_point(m, t, rule);

  sc.m_scale = m.mesh_size();

  // Split point of every macro edge: boundary -> midpoint, interior ->
  // intersection of the segment joining the adjacent interior points with
  // the edge (the well-definedness condition of the construction).
  sc.m_split_points.resize(m.n_edges());
  for (int e = 0; e < m.n_edges(); ++e) {
    const MacroEdge & edge = m.edges[e];
    const Vec2 & a = m.vertices[edge.a];
    const Vec2 & b = m.vertices[edge.b];
    SplitPoint sp;
    sp.macro_edge = e;
    if (edge.boundary) {
      sp.position = 0.5 * (a + b);
      sp.interior = false;
    } else {
      double s, u;
      bool ok = intersect_segments(centers[edge.tri_left], centers[edge.tri_right], a, b, s, u);
      double tol = 1e-12;
      if (!ok || s <= tol || s >= 1.0 - tol || u <= tol || u >= 1.0 - tol)
        throw Error("powell_sabin_refine: well-definedness violation on edge (" +
                    std::to_string(edge.a) + "," + std::to_string(edge.b) +
                    "): the segment joining the interior points of triangles " +
                    std::to_string(edge.tri_left) + " and " + std::to_string(edge.tri_right) +
                    " does not cross the open edge");
      sp.position = a + u * (b - a);
      sp.interior = true;
    }
    sc.m_split_points[e] = sp;
  }

  sc.m_half_edges.resize(2 * m.n_edges());
  for (int e = 0; e < m.n_edges(); ++e) {
    const MacroEdge & edge = m.edges[e];
    const Vec2 & a = m.vertices[edge.a];
    const Vec2 & b = m.vertices[edge.b];
    const Vec2 & mid = sc.m_split_points[e].position;
    sc.m_half_edges[2 * e] = {e, 0, a, mid, (mid - a).norm()};
    sc.m_half_edges[2 * e + 1] = {e, 1, mid, b, (b - mid).norm()};
  }

  sc.m_macros.resize(m.n_triangles());
  for (int t = 0; t < m.n_triangles(); ++t) {
    MacroSplit & ms = sc.m_macros[t];
    ms.corner_ids = m.triangles[t];
    for (int l = 0; l < 3; ++l) ms.corner[l] = m.vertices[ms.corner_ids[l]];
    ms.center = centers[t];
    ms.area = signed_area(ms.corner[0], ms.corner[1], ms.corner[2]);

    for (int i = 0; i < 3; ++i) {
      int e = m.triangle_edges[t][i];
      ms.edge_ids[i] = e;
      ms.split[i] = sc.m_split_points[e].position;
      const Vec2 & za = ms.corner[(i + 1) % 3];
      const Vec2 & zb = ms.corner[(i + 2) % 3];
      ms.edge_length[i] = (zb - za).norm();
      ms.tangent[i] = (zb - za) / ms.edge_length[i];
      ms.normal[i] = -perp(ms.tangent[i]); // outward for CCW triangles
      ms.s_dir[i] = (ms.center - ms.split[i]).normalized();

      // mu is linear on the fan, 0 on the line of e_i and 1 at the center
      double dist = (ms.center - za).dot(-ms.normal[i]);
      ms.grad_mu[i] = -ms.normal[i] / dist;

      const MacroEdge & edge = m.edges[e];
      bool is_left = (edge.tri_left == t); // local traversal z_{i+1} -> z_{i+2} equals a -> b
      ms.half_host[i] = is_left ? std::array<int, 2>{2 * i, 2 * i + 1}
                                : std::array<int, 2>{2 * i + 1, 2 * i};

      ms.sub[2 * i] = {za, ms.split[i], ms.center};
      ms.sub[2 * i + 1] = {ms.split[i], zb, ms.center};

      // jump orientation at z_{3+i}: outward normal of sub[2i] on the
      // interior edge [z_0, z_{3+i}]
      Vec2 interior_dir = (ms.center - ms.split[i]).normalized();
      Vec2 m1 = perp(interior_dir);
      Vec2 towards_k2 = zb - ms.split[i];
      if (m1.dot(towards_k2) < 0) m1 = -m1;
      ms.jump_m1[i] = m1;
      ms.jump_sign[i] = m1.dot(sc.canonical_tangent(e)) >= 0 ? 1.0 : -1.0;
    }

    for (int s = 0; s < 6; ++s) {
      const auto & tri = ms.sub[s];
      ms.sub_area[s] = signed_area(tri[0], tri[1], tri[2]);
      if (!(ms.sub_area[s] > 0))
        throw Error("powell_sabin_refine: non-positive subtriangle in macro " + std::to_string(t));
      for (int l = 0; l < 3; ++l)
        ms.grad_lambda[s][l] = perp(tri[(l + 2) % 3] - tri[(l + 1) % 3]) / (2.0 * ms.sub_area[s]);
    }
  }

  // Singular fans around every split point, cyclic CCW, lower macro first.
  sc.m_fans.resize(m.n_edges());
  for (int e = 0; e < m.n_edges(); ++e) {
    const MacroEdge & edge = m.edges[e];
    const Vec2 & z = sc.m_split_points[e].position;
    std::vector<std::pair<int, int>> tris;
    for (int t : {edge.tri_left, edge.tri_right}) {
      if (t < 0) continue;
      int i = int(std::find(m.triangle_edges[t].begin(), m.triangle_edges[t].end(), e) -
                  m.triangle_edges[t].begin());
      tris.emplace_back(t, 2 * i);
      tris.emplace_back(t, 2 * i + 1);
    }
    std::sort(tris.begin(), tris.end(), [&](const auto & A, const auto & B) {
      auto angle = [&](const std::pair<int, int> & p) {
        const auto & tri = sc.m_macros[p.first].sub[p.second];
        Vec2 c = (tri[0] + tri[1] + tri[2]) / 3.0 - z;
        return std::atan2(c.y(), c.x());
      };
      return angle(A) < angle(B);
    });
    if (tris.size() == 4) {
      int lo_macro = std::min(edge.tri_left, edge.tri_right);
      // rotate so that both leading entries belong to the lower-indexed macro
      int guard = 0;
      while (tris.front().first != lo_macro || tris.back().first == lo_macro) {
        std::rotate(tris.begin(), tris.begin() + 1, tris.end());
        if (++guard > 4) throw Error("powell_sabin_refine: inconsistent fan around edge " +
                                     std::to_string(e));
      }
    }
    sc.m_fans[e].tris = tris;
  }

  sc.verify();
  return sc;
}

void SplitComplex::verify() const
{
  double tol = 1e-12 * m_scale;
  for (int t = 0; t < n_macro(); ++t) {
    const MacroSplit & ms = m_macros[t];
    for (int s = 0; s < 6; ++s)
      if (!(ms.sub_area[s] > 0))
        throw Error("SplitComplex: non-positive subtriangle area in macro " + std::to_string(t));
    for (int i = 0; i < 3; ++i) {
      // split point on the edge line
      const Vec2 & za = ms.corner[(i + 1) % 3];
      const Vec2 & zb = ms.corner[(i + 2) % 3];
      double off = std::abs(signed_area(za, zb, ms.split[i])) * 2.0 / ms.edge_length[i];
      if (off > tol)
        throw Error("SplitComplex: split point off its macro edge in macro " + std::to_string(t));
      // (mun): grad mu / |grad mu| = -n_i, and (mut): grad mu . t_i = 0
      Vec2 gm = ms.grad_mu[i];
      if ((gm.normalized() + ms.normal[i]).norm() > 1e-12)
        throw Error("SplitComplex: (mun) violated in macro " + std::to_string(t));
      if (std::abs(gm.dot(ms.tangent[i])) > 1e-12 * gm.norm())
        throw Error("SplitComplex: (mut) violated in macro " + std::to_string(t));
    }
  }
  // singular vertices: edges at each split point lie on exactly two lines
  for (std::size_t e = 0; e < m_split_points.size(); ++e) {
    const SplitPoint & sp = m_split_points[e];
    const MacroEdge & edge = m_mesh.edges[e];
    const Vec2 & a = m_mesh.vertices[edge.a];
    const Vec2 & b = m_mesh.vertices[edge.b];
    double off = std::abs(signed_area(a, b, sp.position)) * 2.0 / (b - a).norm();
    if (off > tol)
      throw Error("SplitComplex: split point " + std::to_string(e) + " off its macro edge");
    double s = (sp.position - a).dot(b - a) / (b - a).squaredNorm();
    if (s <= 0.0 || s >= 1.0)
      throw Error("SplitComplex: split point " + std::to_string(e) + " outside the open edge");
    if (sp.interior) {
      const Vec2 & cl = m_macros[edge.tri_left].center;
      const Vec2 & cr = m_macros[edge.tri_right].center;
      double coll = std::abs(signed_area(cl, cr, sp.position)) * 2.0 / (cr - cl).norm();
      if (coll > tol)
        throw Error("SplitComplex: interior points and split point not collinear on edge " +
                    std::to_string(e) + " (residual " + std::to_string(coll) + ")");
    }
  }
}

std::vector<SingularFan> singular_fans(const SplitComplex & sc)
{
  sc.verify();
  std::vector<SingularFan> fans;
  fans.reserve(sc.split_points().size());
  for (std::size_t e = 0; e < sc.split_points().size(); ++e) fans.push_back(sc.fan(int(e)));
  return fans;
}

} // namespace psfeec
