// Degrees of freedom for the local spaces, unisolvence checks, dual bases
// and the induced projections.
//
// All point/edge functionals are expressed in canonical frames attached to
// the macro edges (tangent from the lower-indexed vertex to the higher,
// normal the tangent rotated by -pi/2, half edges parametrized along the
// tangent, jumps oriented by the sign of m_1 . tangent). DOF sets stay
// unisolvent under these fixed sign choices, and shared functionals then
// agree across neighbouring macro triangles without sign bookkeeping.

#ifndef PSFEEC_DOFS_HPP
#define PSFEEC_DOFS_HPP

#include <psfeec/spaces.hpp>
#include <memory>

namespace psfeec {

//------------------------------------------------------------------------------
// 1D pieces: the psi polynomial and C1 degrees of freedom on {a, m, b}
//------------------------------------------------------------------------------

/// Monomial coefficients (c_0 + c_1 x + ...) of the unique degree-r
/// polynomial on [0,1] with psi(0) = 1, psi(1) = 0 that is L2-orthogonal to
/// P_{r-2}. Its derivative at 0 never vanishes (asserted).
Vector psi_polynomial(int r);

/// C1 two-piece polynomials on {a, m, b}: coefficient layout is the 1D BB
/// coefficients of the left piece followed by the right piece (2(r+1)
/// entries); the space W_r itself has dimension 2r.
struct W1Space
{
  double a, m, b;
  int degree;
  Matrix basis; ///< 2(r+1) x 2r, orthonormal columns (nullspace of the C1 constraints)
};

W1Space w1_space(double a, double m, double b, int r);

enum class EdgeDofVariant { EndpointDerivatives, Moments };

/// Functional rows over the two-piece coefficient layout, one per DOF:
/// EndpointDerivatives = values/derivatives at a, b (and m for r >= 3) plus
/// P_{r-4} moments per piece; Moments = endpoint values plus P_{r-2}
/// moments per piece. Both lists have exactly 2r entries for r >= 1.
struct W1DofSet
{
  std::vector<Vector> rows;
  std::vector<std::string> labels;
};

W1DofSet edge_c1_dofs(double a, double m, double b, int r, EdgeDofVariant variant);

//------------------------------------------------------------------------------
// 2D functionals
//------------------------------------------------------------------------------

enum class DofKind {
  PointValue,          ///< component value at a point, one-sided
  PointDeriv,          ///< directional derivative of a scalar at a point
  PointVectorDot,      ///< v(x) . dir
  PointDivergence,     ///< div v at a point, one-sided
  JumpValue,           ///< oriented jump of a scalar across [z_0, z_{3+i}]
  JumpDivergence,      ///< oriented jump of div v
  HalfEdgeMoment,      ///< moment of a trace quantity on a boundary half-edge
  FullEdgeNormalMoment,///< int over a whole macro edge of v . n
  InteriorMoment,      ///< pairing against a stored test field
  TotalIntegral
};

/// Identification of a functional across macro triangles (for the global
/// assembly): functionals with equal keys are the same global DOF.
struct GlobalAnchor
{
  enum class Kind { Vertex, SplitPoint, HalfEdge, FullEdge, Interior } kind = Kind::Interior;
  int id = -1;      ///< vertex id / macro edge id / 2*edge+half / macro id
  int payload = 0;  ///< disambiguates functionals sharing an anchor

  friend bool operator<(const GlobalAnchor & x, const GlobalAnchor & y)
  {
    return std::tie(x.kind, x.id, x.payload) < std::tie(y.kind, y.id, y.payload);
  }
};

struct LinearFunctional
{
  DofKind kind = DofKind::PointValue;
  const SplitComplex * sc = nullptr;
  int macro = -1;
  int sub = -1;   ///< one-sided evaluation subtriangle
  int sub2 = -1;  ///< the second subtriangle for jumps
  int comp = 0;
  Vec2 point = Vec2::Zero();
  Vec2 dir = Vec2::Zero();
  int macro_edge = -1;
  int half = -1;
  EdgeQuantity equant = EdgeQuantity::Value;
  int test_k = -1;                ///< Legendre index of the 1D test polynomial
  std::shared_ptr<const PiecewisePolynomial> test_field;
  Pairing pairing = Pairing::ScalarScalar;
  double scale = 1.0;             ///< canonical orientation sign
  GlobalAnchor anchor;
  std::string label;

  /// The functional as a row over the coefficient space L (exact).
  Vector row(const CoeffLayout & L) const;

  /// Apply to closed-form fields; `degree_hint` controls quadrature
  /// exactness for the moment functionals.
  double apply(const ScalarField & f, int degree_hint) const;
  double apply(const VectorField & f, int degree_hint) const;
  /// Apply exactly to a piecewise polynomial on the same macro triangle.
  double apply(const PiecewisePolynomial & f) const;
};

struct DofSet
{
  Family family = Family::V2;
  int degree = 0;
  const SplitComplex * sc = nullptr;
  int macro = -1;
  std::vector<LinearFunctional> dofs;

  int size() const { return int(dofs.size()); }
  CoeffLayout layout() const { return {sc, macro, degree, family_rank(family)}; }

  Vector apply(const ScalarField & f, int degree_hint) const;
  Vector apply(const VectorField & f, int degree_hint) const;
  Vector apply(const PiecewisePolynomial & f) const;
};

/// The DOF displays for the five families carrying them. Admissible degrees:
/// S0: r >= 2; L1, S1, L2: r >= 1; V2: r >= 0. At r = 1 the S1 list drops
/// the (redundant) vertex divergence values so the count matches the
/// space dimension 6r^2+3 = 9.
DofSet build_dofs(const SplitComplex & sc, int macro, Family family, int r);

/// Expected functional count of the display (closed form, no spaces built).
long dof_count_formula(Family family, int r);

//------------------------------------------------------------------------------
// Unisolvence and projections
//------------------------------------------------------------------------------

/// M[j][k] = phi_j(basis_k).
Matrix dof_matrix(const DofSet & ds, const FESpace & sp);

struct UnisolvenceReport
{
  double sigma_max = 0.0;
  double sigma_min = 0.0;
  double condition = 0.0;
  bool pass = false;
};

/// Pass iff the DOF matrix is square with sigma_min > tol * sigma_max.
UnisolvenceReport unisolvence_report(const FESpace & sp, const DofSet & ds, double tol = 1e-9);

/// Projection induced by a unisolvent DOF set: the unique member of the
/// space matching all DOF values of the input.
class Projector
{
public:
  Projector(FESpace space, DofSet dofs);

  const FESpace & space() const { return m_space; }
  const DofSet & dofs() const { return m_dofs; }

  /// Dual basis: column k is the coefficient vector of the field with
  /// phi_j = delta_jk.
  const Matrix & dual_basis() const { return m_dual; }

  PiecewisePolynomial from_dof_values(const Vector & values) const;
  PiecewisePolynomial project(const ScalarField & f, int degree_hint) const;
  PiecewisePolynomial project(const VectorField & f, int degree_hint) const;
  PiecewisePolynomial project(const PiecewisePolynomial & f) const;

private:
  FESpace m_space;
  DofSet m_dofs;
  Matrix m_dual;
};

/// The projection chains of the commuting diagrams. For rpair = r the
/// chains are Pi0 -> S0 at r, Pi1 -> L1 at r-1, Pi2 -> V2 at r-2,
/// Varpi1 -> S1 at r-1, Varpi2 -> L2 at r-2. Varpi2 at r = 2 projects onto
/// the constants through the mean value (the display starts at degree 1).
enum class ProjectionChain { Pi0, Pi1, Pi2, Varpi1, Varpi2 };

Projector make_chain_projector(const SplitComplex & sc, int macro, ProjectionChain chain, int r);

} // namespace psfeec

#endif
