// Local finite element spaces on one split macro triangle, built as
// nullspaces of explicit continuity/boundary constraints on BB coefficients.
//
// Families (k = 0, 1, 2 along the rot/div sequence):
//   V^0 = continuous scalars, V^1 = H(div) vectors (normal component
//   continuous), V^2 = unconstrained scalars;
//   L^0 = V^0, L^1 = [L^0]^2, L^2 = L^0;
//   S^0 = C^1 scalars, S^1 = continuous vectors with continuous divergence,
//   S^2 = L^2;
//   CalV^2 = scalars continuous at the three edge split points only.
// Ring variants impose the matching boundary conditions (zero trace, zero
// normal trace, zero rot/div trace) and zero mean for the k = 2 families.

#ifndef PSFEEC_SPACES_HPP
#define PSFEEC_SPACES_HPP

#include <psfeec/rows.hpp>
#include <optional>
#include <string>

namespace psfeec {

enum class Family { V0, V1, V2, L0, L1, L2, S0, S1, S2, CalV2 };

Rank family_rank(Family f);
std::string family_name(Family f, bool ring = false);
std::optional<Family> parse_family(const std::string & name);

struct FESpace
{
  Family family = Family::V2;
  bool ring = false;
  int degree = 0;
  const SplitComplex * sc = nullptr;
  int macro = -1;
  Matrix basis; ///< orthonormal columns spanning the space inside P_r(T^ps)
  std::string constraint_log;

  int dim() const { return int(basis.cols()); }
  Rank rank() const { return family_rank(family); }
  CoeffLayout layout() const { return {sc, macro, degree, rank()}; }

  /// Expand coordinates into a field.
  PiecewisePolynomial field(const Vector & coords) const;
  /// The k-th basis column as a field.
  PiecewisePolynomial column(int k) const;
};

/// Build the family's coefficient basis by a rank-revealing SVD of the
/// stacked constraint matrix. Throws on unknown inputs and when a singular
/// value falls into the forbidden ambiguity band (rank decision unclear).
FESpace build_space(const SplitComplex & sc, int macro, Family family, bool ring, int r,
                    const Tolerances & tol = Tolerances::from_env());

/// Closed-form dimension where the paper provides one (plus the derived
/// CalV^2 count); nullopt otherwise or below the formula's degree range.
std::optional<long> dimension_formula(Family family, bool ring, int r);

struct Membership
{
  bool member = false;
  Vector coords;
  double residual = 0.0;
};

/// Least-squares coordinates of f in sp; member iff the relative residual
/// is below tol. Throws on mismatched complex/degree/rank.
Membership check_membership(const PiecewisePolynomial & f, const FESpace & sp, double tol = 1e-9);

} // namespace psfeec

#endif
