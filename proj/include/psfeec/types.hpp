// Common scalar/vector aliases, tolerances and the error type used
// throughout the library.

#ifndef PSFEEC_TYPES_HPP
#define PSFEEC_TYPES_HPP

#include <Eigen/Dense>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace psfeec {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Thrown on contract violations (bad input, failed residual checks,
/// ambiguous rank decisions).
class Error : public std::runtime_error
{
public:
  explicit Error(const std::string & what) : std::runtime_error(what) {}
};

/// Numerical thresholds. The rank cutoff and residual tolerance can be
/// overridden from the environment (PSFEEC_TOL_RANK, PSFEEC_TOL_RESIDUAL).
struct Tolerances
{
  double rank = 1e-9;        ///< relative SVD cutoff for rank/nullspace decisions
  double rank_band_lo = 1e-11; ///< ambiguity band: singular values in
  double rank_band_hi = 1e-7;  ///< (lo, hi)*sigma_max trigger a hard error
  double residual = 1e-10;   ///< relative residual for coordinate fits / factorings
  double geometry = 1e-12;   ///< relative tolerance for geometric predicates

  static Tolerances from_env()
  {
    Tolerances tol;
    if (const char * s = std::getenv("PSFEEC_TOL_RANK")) tol.rank = std::atof(s);
    if (const char * s = std::getenv("PSFEEC_TOL_RESIDUAL")) tol.residual = std::atof(s);
    return tol;
  }
};

/// Rotate a vector by +pi/2.
inline Vec2 perp(const Vec2 & v) { return Vec2(-v.y(), v.x()); }

/// Signed area of triangle (a,b,c), positive when counter-clockwise.
inline double signed_area(const Vec2 & a, const Vec2 & b, const Vec2 & c)
{
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

} // namespace psfeec

#endif
