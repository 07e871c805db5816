// Bernstein-Bezier calculus on a single triangle (and on segments).
//
// A degree-r polynomial is stored as the vector of its BB coefficients in
// lexicographic index order: multi-indices (i,j,k) with i+j+k = r are
// listed with (i,j) ascending, i.e. (0,0,r), (0,1,r-1), ..., (r,0,0).
// Index l refers to the barycentric coordinate of vertex l of the triangle.

#ifndef PSFEEC_BERNSTEIN_HPP
#define PSFEEC_BERNSTEIN_HPP

#include <psfeec/types.hpp>
#include <array>
#include <vector>

namespace psfeec {

/// Dimension of P_r on a triangle: (r+1)(r+2)/2 (0 for r < 0).
inline int bb_dim(int r) { return r < 0 ? 0 : (r + 1) * (r + 2) / 2; }

/// Multi-indices (i,j,k), i+j+k = r, in lexicographic order.
const std::vector<std::array<int, 3>> & bb_indices(int r);

/// Position of (i,j,k) in the lexicographic list.
int bb_position(int r, int i, int j, int k);

/// Values of all degree-r BB basis functions at barycentric point lambda.
Vector bb_values(int r, const Eigen::Vector3d & lambda);

/// Partial derivatives of all basis functions with respect to the three
/// barycentric coordinates: rows = basis index, columns = d/d lambda_l.
/// (Degree-r basis; the result combines with grad(lambda_l) for Cartesian
/// gradients.)
Matrix bb_lambda_derivatives(int r, const Eigen::Vector3d & lambda);

/// de Casteljau evaluation of coefficient vector c (degree r) at lambda.
double bb_eval(const Vector & c, int r, const Eigen::Vector3d & lambda);

/// Directional derivative in BB form. `a` holds grad(lambda_l) . u for the
/// direction u; the result has degree r-1.
Vector bb_dir_deriv(const Vector & c, int r, const Eigen::Vector3d & a);

/// Degree raising r -> r+1.
Vector bb_raise(const Vector & c, int r);

/// Product of degree-r1 and degree-r2 polynomials (degree r1+r2).
Vector bb_multiply(const Vector & c1, int r1, const Vector & c2, int r2);

/// Exact integral over a triangle of area `area`.
inline double bb_integral(const Vector & c, int r, double area)
{
  return area * c.sum() / bb_dim(r);
}

/// Divide by the barycentric coordinate lambda_l (the polynomial must
/// vanish on the opposite edge). Coefficients with index_l = 0 are ignored;
/// the caller is responsible for checking them. Result has degree r-1.
Vector bb_divide_by_lambda(const Vector & c, int r, int l);

/// Restriction to the edge where lambda_l = 0, as 1D BB coefficients of
/// degree r running from the lower- to the higher-numbered remaining vertex
/// (e.g. l = 2: from vertex 0 to vertex 1).
Vector bb_edge_trace(const Vector & c, int r, int l);

/// Inverse of the collocation matrix B_alpha(xi_beta) at the domain points
/// (cached per degree; geometry independent).
const Matrix & bb_domain_point_inverse(int r);

/// Coefficients of the degree-r interpolant matching f at the domain points
/// alpha/r (barycentric); exact when f is a polynomial of degree <= r.
/// `f` is called with barycentric coordinates.
template <typename F>
Vector bb_interpolate(int r, F && f)
{
  const auto & idx = bb_indices(r);
  Vector vals(idx.size());
  for (std::size_t p = 0; p < idx.size(); ++p) {
    Eigen::Vector3d lambda = r == 0
      ? Eigen::Vector3d(1.0 / 3, 1.0 / 3, 1.0 / 3)
      : Eigen::Vector3d(idx[p][0], idx[p][1], idx[p][2]) / double(r);
    vals(p) = f(lambda);
  }
  const Matrix & Vinv = bb_domain_point_inverse(r);
  return Vinv * vals;
}

//------------------------------------------------------------------------------
// 1D Bernstein polynomials on a segment, coefficients b_0..b_r with
// b(t) = sum b_j C(r,j) (1-t)^(r-j) t^j.
//------------------------------------------------------------------------------

double bb1_eval(const Vector & c, int r, double t);

/// Values of the r+1 1D Bernstein basis functions at t.
Vector bb1_values(int r, double t);

/// Derivative with respect to t (degree r-1), on the unit parameter.
Vector bb1_derivative(const Vector & c, int r);

const Matrix & bb1_node_inverse(int r);

/// 1D interpolation at the points j/r; exact for polynomials of degree <= r.
template <typename F>
Vector bb1_interpolate(int r, F && f)
{
  Vector vals(r + 1);
  for (int j = 0; j <= r; ++j) vals(j) = f(r == 0 ? 0.5 : double(j) / r);
  const Matrix & Vinv = bb1_node_inverse(r);
  return Vinv * vals;
}

} // namespace psfeec

#endif
