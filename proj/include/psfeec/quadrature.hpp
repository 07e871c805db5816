// Quadrature rules: Gauss-Legendre on segments, collapsed product rules
// on triangles. Rules are exact (up to roundoff) for polynomials of the
// requested degree and cached per degree.

#ifndef PSFEEC_QUADRATURE_HPP
#define PSFEEC_QUADRATURE_HPP

#include <psfeec/types.hpp>
#include <vector>

namespace psfeec {

/// Nodes in [0,1] with weights summing to 1:  int_a^b f = (b-a) * sum w_q f(x(t_q)).
struct SegmentRule
{
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Barycentric nodes on a triangle with weights summing to 1:
/// int_S f = |S| * sum w_q f(x(lambda_q)).
struct TriangleRule
{
  std::vector<Eigen::Vector3d> nodes; // barycentric coordinates
  std::vector<double> weights;
};

/// Gauss-Legendre rule exact for 1D polynomials of degree <= exactness.
const SegmentRule & segment_rule(int exactness);

/// Product rule exact for bivariate polynomials of total degree <= exactness.
/// Throws if exactness exceeds the tabulated maximum (40).
const TriangleRule & triangle_rule(int exactness);

constexpr int kMaxQuadratureExactness = 40;

} // namespace psfeec

#endif
