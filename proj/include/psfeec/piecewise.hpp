// Piecewise polynomials on the six subtriangles of one refined macro
// triangle, stored in Bernstein-Bezier form, together with the exact
// calculus used everywhere else: rot, div, traces, integration, the
// mu bubble and factoring out mu.
//
// No inter-subtriangle continuity is implied by the container; continuity
// is a constraint imposed by the space construction.

#ifndef PSFEEC_PIECEWISE_HPP
#define PSFEEC_PIECEWISE_HPP

#include <psfeec/bernstein.hpp>
#include <psfeec/quadrature.hpp>
#include <psfeec/split.hpp>
#include <functional>
#include <random>

namespace psfeec {

enum class Rank { Scalar = 1, Vector2 = 2 };

inline int n_components(Rank rank) { return rank == Rank::Scalar ? 1 : 2; }

class PiecewisePolynomial
{
public:
  PiecewisePolynomial() = default;

  /// Zero field of the given degree and rank on macro triangle t.
  PiecewisePolynomial(const SplitComplex & sc, int t, int degree, Rank rank);

  int degree() const { return m_degree; }
  Rank rank() const { return m_rank; }
  int macro_index() const { return m_macro; }
  const SplitComplex & complex() const { return *m_sc; }
  const MacroSplit & macro() const { return m_sc->macro(m_macro); }

  /// BB coefficients of component `comp` on subtriangle `s`.
  Eigen::Ref<Vector> coeffs(int s, int comp = 0);
  Eigen::Ref<const Vector> coeffs(int s, int comp = 0) const;

  /// All coefficients as one vector, ordered (subtriangle, component, index).
  const Vector & flat() const { return m_c; }
  Vector & flat() { return m_c; }
  int flat_size() const { return int(m_c.size()); }

  double value(int s, const Vec2 & x) const;       ///< scalar rank
  Vec2 gradient(int s, const Vec2 & x) const;      ///< scalar rank
  Vec2 vector_value(int s, const Vec2 & x) const;  ///< vector rank
  Mat2 jacobian(int s, const Vec2 & x) const;      ///< vector rank; row = component
  double divergence_value(int s, const Vec2 & x) const;

  /// Value at x, locating the subtriangle first (for continuous fields).
  double value(const Vec2 & x) const;
  Vec2 vector_value(const Vec2 & x) const;

  /// Largest coefficient magnitude (bounds the sup norm).
  double coeff_norm() const { return m_c.size() ? m_c.cwiseAbs().maxCoeff() : 0.0; }

  /// Sup of |f| over a dense per-subtriangle sample grid (45 points each).
  double sample_sup() const;

  /// Sup of the boundary trace over the six boundary half-edges.
  double boundary_trace_sup() const;

  PiecewisePolynomial & operator+=(const PiecewisePolynomial & other);
  PiecewisePolynomial & operator-=(const PiecewisePolynomial & other);
  PiecewisePolynomial & operator*=(double a);

private:
  const SplitComplex * m_sc = nullptr;
  int m_macro = -1;
  int m_degree = 0;
  Rank m_rank = Rank::Scalar;
  Vector m_c;
};

PiecewisePolynomial operator+(PiecewisePolynomial a, const PiecewisePolynomial & b);
PiecewisePolynomial operator-(PiecewisePolynomial a, const PiecewisePolynomial & b);
PiecewisePolynomial operator*(double a, PiecewisePolynomial f);

/// rot q = (dq/dx2, -dq/dx1); degree r-1 (r = 0 gives the zero vector field).
PiecewisePolynomial rot_scalar(const PiecewisePolynomial & q);

/// div v = dv1/dx1 + dv2/dx2; degree r-1.
PiecewisePolynomial divergence(const PiecewisePolynomial & v);

/// The piecewise linear bubble: mu(z_0) = 1, mu = 0 on the macro boundary.
PiecewisePolynomial mu_field(const SplitComplex & sc, int t);

/// Product of a scalar with a scalar or vector field (degrees add).
PiecewisePolynomial multiply(const PiecewisePolynomial & scalar, const PiecewisePolynomial & f);

/// Representation of the same polynomial at a higher degree.
PiecewisePolynomial raise_degree(const PiecewisePolynomial & f, int new_degree);

/// Subtriangle-wise interpolation of a closed-form field at the BB domain
/// points; exact when the field is a polynomial of degree <= r.
PiecewisePolynomial pw_from_scalar(const SplitComplex & sc, int t, int r,
                                   const std::function<double(const Vec2 &)> & f);
PiecewisePolynomial pw_from_vector(const SplitComplex & sc, int t, int r,
                                   const std::function<Vec2(const Vec2 &)> & f);

/// Factor q = mu * p for q vanishing on the macro boundary (trace checked
/// against 1e-10 * |q|; the division residual is verified on samples).
/// Works componentwise on vector fields.
PiecewisePolynomial factor_out_mu(const PiecewisePolynomial & q);

/// Integral of a scalar field over its macro triangle (exact).
double integrate(const PiecewisePolynomial & f);

/// Integral over one subtriangle (exact).
double integrate_sub(const PiecewisePolynomial & f, int s);

/// Quadrature of an arbitrary integrand over the subtriangles of macro t.
/// The callback receives (subtriangle, point); `exactness` must dominate the
/// polynomial degree of the integrand for exact results.
double integrate_over_macro(const SplitComplex & sc, int t, int exactness,
                            const std::function<double(int, const Vec2 &)> & f);

//------------------------------------------------------------------------------
// Edge traces
//------------------------------------------------------------------------------

/// Scalar function on a split macro edge: two 1D polynomial halves in the
/// local arc-length parameter (running from z_{i+1} to z_{i+2}).
struct EdgePolynomial
{
  int degree = 0;
  double h0 = 0.0, h1 = 0.0; ///< lengths of [z_{i+1}, z_{3+i}] and [z_{3+i}, z_{i+2}]
  Vector c0, c1;             ///< 1D BB coefficients per half

  /// Evaluate at arc length s in [0, h0 + h1].
  double eval_arclength(double s) const;
  /// Evaluate on half 0 or 1 at the unit parameter t.
  double eval(int half, double t) const;
  /// Sup of the control net (bounds the sup norm).
  double coeff_norm() const;
};

enum class TraceQuantity { Value, NormalComponent, TangentialComponent, NormalDerivative, Divergence };

/// One-sided trace data on macro edge i of f's triangle, taken from the two
/// fan subtriangles adjacent to the edge.
EdgePolynomial edge_trace(const PiecewisePolynomial & f, int i, TraceQuantity which);

/// Jump (K1 value minus K2 value, K1 = sub[2i]) of a scalar field at the
/// split point z_{3+i}.
double jump_value(const PiecewisePolynomial & q, int i);

/// The vector-valued jump [[q]](z_{3+i}) = (q|K1 - q|K2)(z) m_1 of the paper.
Vec2 jump_vector(const PiecewisePolynomial & q, int i);

//------------------------------------------------------------------------------
// Smooth input fields (closed-form samplers used by the projections)
//------------------------------------------------------------------------------

struct ScalarField
{
  std::function<double(const Vec2 &)> value;
  std::function<Vec2(const Vec2 &)> grad;
  std::function<Mat2(const Vec2 &)> hessian; ///< needed only when the field feeds rot_field
};

struct VectorField
{
  std::function<Vec2(const Vec2 &)> value;
  std::function<Mat2(const Vec2 &)> jacobian; ///< row = component, column = direction
  double divergence(const Vec2 & x) const
  {
    Mat2 J = jacobian(x);
    return J(0, 0) + J(1, 1);
  }
};

/// rot of a scalar field as a VectorField (for chaining commuting tests).
VectorField rot_field(const ScalarField & f);

/// Bivariate polynomial in monomial form, the stock of smooth test inputs.
struct Poly2
{
  int degree = 0;
  Matrix coeff; ///< coeff(i, j) multiplies x^i y^j, i + j <= degree

  double value(const Vec2 & x) const;
  Vec2 grad(const Vec2 & x) const;
  Mat2 hessian(const Vec2 & x) const;
  ScalarField field() const;

  static Poly2 random(int degree, std::mt19937_64 & rng);
};

/// Vector field with components given by two polynomials.
VectorField vector_field(const Poly2 & u, const Poly2 & v);

} // namespace psfeec

#endif
