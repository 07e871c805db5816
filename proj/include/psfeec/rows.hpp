// Linear functionals as rows over the flattened BB coefficient space of
// piecewise polynomial fields on one macro triangle. Shared by the space
// constraint assembly and the degree-of-freedom machinery.

#ifndef PSFEEC_ROWS_HPP
#define PSFEEC_ROWS_HPP

#include <psfeec/piecewise.hpp>

namespace psfeec {

/// Shape of the coefficient space: fields of given degree/rank on macro t.
struct CoeffLayout
{
  const SplitComplex * sc = nullptr;
  int macro = -1;
  int degree = 0;
  Rank rank = Rank::Scalar;

  int block() const { return bb_dim(degree); }
  int size() const { return 6 * n_components(rank) * block(); }
  int offset(int s, int comp) const { return (s * n_components(rank) + comp) * block(); }
  const MacroSplit & ms() const { return sc->macro(macro); }

  PiecewisePolynomial field(const Vector & flat) const
  {
    PiecewisePolynomial f(*sc, macro, degree, rank);
    f.flat() = flat;
    return f;
  }
};

/// value of component comp at x, one-sided on subtriangle s
Vector row_point_value(const CoeffLayout & L, int s, int comp, const Vec2 & x);

/// directional derivative u . grad of component comp at x on subtriangle s
Vector row_point_dir_deriv(const CoeffLayout & L, int s, int comp, const Vec2 & x, const Vec2 & u);

/// v(x) . d on subtriangle s (vector rank)
Vector row_point_vector_dot(const CoeffLayout & L, int s, const Vec2 & x, const Vec2 & d);

/// div v (x) on subtriangle s (vector rank)
Vector row_point_divergence(const CoeffLayout & L, int s, const Vec2 & x);

/// integral of the scalar field over the macro triangle
Vector row_total_integral(const CoeffLayout & L);

/// Moment of a trace quantity against a 1D polynomial on one canonical
/// boundary half-edge: int_e quantity(f) p(t) dt, with p given by values at
/// Gauss points of `rule` along the canonical parametrization, and the
/// quantity evaluated one-sided on the hosting subtriangle. `frame` is the
/// direction vector for dot-quantities (ignored otherwise).
enum class EdgeQuantity { Value, VectorDot, NormalDerivative, Divergence };
Vector row_half_edge_moment(const CoeffLayout & L, int macro_edge, int half,
                            EdgeQuantity quantity, const Vec2 & frame,
                            const Vector & p_at_gauss, const SegmentRule & rule);

/// Interior moment rows: pairings of the coefficient field with a supplied
/// test field w (a PiecewisePolynomial on the same macro triangle).
enum class Pairing { ScalarScalar, VectorVector, VectorRotScalar, DivScalar, RotRot };
Vector row_interior_moment(const CoeffLayout & L, const PiecewisePolynomial & w, Pairing pairing,
                           int exactness);

} // namespace psfeec

#endif
