#include <psfeec/rows.hpp>

namespace psfeec {

namespace {

// d/du of all degree-r basis functions at lambda, on subtriangle s
Vector deriv_block(const CoeffLayout & L, int s, const Eigen::Vector3d & lam, const Vec2 & u)
{
  Matrix D = bb_lambda_derivatives(L.degree, lam);
  const auto & gl = L.ms().grad_lambda[s];
  Eigen::Vector3d a(gl[0].dot(u), gl[1].dot(u), gl[2].dot(u));
  return D * a;
}

} // namespace

Vector row_point_value(const CoeffLayout & L, int s, int comp, const Vec2 & x)
{
  Vector row = Vector::Zero(L.size());
  row.segment(L.offset(s, comp), L.block()) = bb_values(L.degree, L.ms().lambda(s, x));
  return row;
}

Vector row_point_dir_deriv(const CoeffLayout & L, int s, int comp, const Vec2 & x, const Vec2 & u)
{
  Vector row = Vector::Zero(L.size());
  row.segment(L.offset(s, comp), L.block()) = deriv_block(L, s, L.ms().lambda(s, x), u);
  return row;
}

Vector row_point_vector_dot(const CoeffLayout & L, int s, const Vec2 & x, const Vec2 & d)
{
  Vector row = Vector::Zero(L.size());
  Vector vals = bb_values(L.degree, L.ms().lambda(s, x));
  row.segment(L.offset(s, 0), L.block()) = d.x() * vals;
  row.segment(L.offset(s, 1), L.block()) = d.y() * vals;
  return row;
}

Vector row_point_divergence(const CoeffLayout & L, int s, const Vec2 & x)
{
  Vector row = Vector::Zero(L.size());
  Eigen::Vector3d lam = L.ms().lambda(s, x);
  row.segment(L.offset(s, 0), L.block()) = deriv_block(L, s, lam, Vec2(1, 0));
  row.segment(L.offset(s, 1), L.block()) = deriv_block(L, s, lam, Vec2(0, 1));
  return row;
}

Vector row_total_integral(const CoeffLayout & L)
{
  Vector row = Vector::Zero(L.size());
  for (int s = 0; s < 6; ++s)
    row.segment(L.offset(s, 0), L.block())
      .setConstant(L.ms().sub_area[s] / L.block());
  return row;
}

Vector row_half_edge_moment(const CoeffLayout & L, int macro_edge, int half,
                            EdgeQuantity quantity, const Vec2 & frame,
                            const Vector & p_at_gauss, const SegmentRule & rule)
{
  const MacroSplit & ms = L.ms();
  int i = -1;
  for (int k = 0; k < 3; ++k)
    if (ms.edge_ids[k] == macro_edge) i = k;
  if (i < 0) throw Error("row_half_edge_moment: edge not on this macro triangle");
  int s = ms.half_host[i][half];
  const BoundaryHalfEdge & he = L.sc->half_edge(macro_edge, half);

  Vector row = Vector::Zero(L.size());
  for (std::size_t g = 0; g < rule.nodes.size(); ++g) {
    Vec2 x = he.p0 + rule.nodes[g] * (he.p1 - he.p0);
    double w = he.length * rule.weights[g] * p_at_gauss(g);
    switch (quantity) {
    case EdgeQuantity::Value:
      row += w * row_point_value(L, s, 0, x);
      break;
    case EdgeQuantity::VectorDot:
      row += w * row_point_vector_dot(L, s, x, frame);
      break;
    case EdgeQuantity::NormalDerivative:
      row += w * row_point_dir_deriv(L, s, 0, x, frame);
      break;
    case EdgeQuantity::Divergence:
      row += w * row_point_divergence(L, s, x);
      break;
    }
  }
  return row;
}

Vector row_interior_moment(const CoeffLayout & L, const PiecewisePolynomial & w, Pairing pairing,
                           int exactness)
{
  const TriangleRule & rule = triangle_rule(exactness);
  const MacroSplit & ms = L.ms();
  Vector row = Vector::Zero(L.size());
  for (int s = 0; s < 6; ++s) {
    const auto & tri = ms.sub[s];
    for (std::size_t g = 0; g < rule.nodes.size(); ++g) {
      const auto & lam = rule.nodes[g];
      Vec2 x = lam(0) * tri[0] + lam(1) * tri[1] + lam(2) * tri[2];
      double wq = ms.sub_area[s] * rule.weights[g];
      switch (pairing) {
      case Pairing::ScalarScalar:
        row += (wq * w.value(s, x)) * row_point_value(L, s, 0, x);
        break;
      case Pairing::VectorVector: {
        Vec2 wv = w.vector_value(s, x);
        row += wq * row_point_vector_dot(L, s, x, wv);
        break;
      }
      case Pairing::VectorRotScalar: {
        Vec2 gw = w.gradient(s, x);
        row += wq * row_point_vector_dot(L, s, x, Vec2(gw.y(), -gw.x()));
        break;
      }
      case Pairing::DivScalar:
        row += (wq * w.value(s, x)) * row_point_divergence(L, s, x);
        break;
      case Pairing::RotRot: {
        // rot q . rot p = grad q . grad p
        Vec2 gw = w.gradient(s, x);
        row += wq * row_point_dir_deriv(L, s, 0, x, gw);
        break;
      }
      }
    }
  }
  return row;
}

} // namespace psfeec
