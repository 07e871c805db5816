// Matrix representations of rot and div between local spaces, exactness
// certification of the six local sequences, and the constructive
// divergence preimage.
//
// The preimage recursion follows the inductive proof shape: at each step a
// boundary-matching corrector (edge linears b_i, fan-supported extensions
// a_i, a lowest-order Nedelec interpolant w_1 and tangential corrections)
// reduces mu^j p_j to mu^{j+1} p_{j+1} plus an exact divergence, and the
// base case is a two-unknown solve on the constant vector fields. Every
// intermediate object is retained in a step trace.

#ifndef PSFEEC_EXACTNESS_HPP
#define PSFEEC_EXACTNESS_HPP

#include <psfeec/spaces.hpp>

namespace psfeec {

enum class DiffOp { Rot, Div };

/// rot (scalar -> vector) or div (vector -> scalar) of a field.
PiecewisePolynomial apply_diff(DiffOp op, const PiecewisePolynomial & f);

struct OperatorMatrix
{
  DiffOp op = DiffOp::Div;
  FESpace src;
  FESpace dst;
  Matrix matrix;          ///< coordinates of op(src basis) in the dst basis
  int rank = 0;
  int nullity = 0;
  double fit_residual = 0.0; ///< worst image-containment residual (relative)
};

/// Computes the operator matrix; throws when some image column fails the
/// containment test (that would falsify the sequence).
OperatorMatrix operator_matrix(DiffOp op, const FESpace & src, const FESpace & dst,
                               const Tolerances & tol = Tolerances::from_env());

/// Minimal-norm preimage through the pseudo-inverse; throws when the target
/// is not in the range.
PiecewisePolynomial preimage_algebraic(const OperatorMatrix & M, const PiecewisePolynomial & target,
                                       double tol = 1e-10);

//------------------------------------------------------------------------------
// Sequence verification
//------------------------------------------------------------------------------

/// One of the three family chains F0 -rot-> F1 -div-> F2 (the ring flag
/// selects the boundary-condition variant, with calV2 in place of V2 for
/// the middle ring chain).
struct ChainSpec
{
  Family f0, f1, f2;
  const char * name;
};

/// The six sequences: plain {L0,V1,V2}, {S0,L1,V2}, {S0,S1,L2} and ring
/// {L0,V1,V2}, {S0,L1,CalV2}, {S0,S1,L2}.
std::vector<ChainSpec> remark_chains(bool ring);

struct SequenceReport
{
  std::string chain;
  bool ring = false;
  int r = 0;
  int dim0 = 0, dim1 = 0, dim2 = 0;
  int ker_rot = 0, expected_ker_rot = 0;
  int rank_rot = 0, rank_div = 0;
  int middle_defect = 0;        ///< nullity(div) - rank(rot)
  int surjectivity_deficit = 0; ///< dim2 - rank(div)
  double compose_norm = 0.0;    ///< |div o rot| (should be ~0)
  double containment_residual = 0.0;
  bool exact = false;
};

/// Certify one chain at degrees (r, r-1, r-2) on one macro triangle.
SequenceReport verify_sequence(const SplitComplex & sc, int macro, const ChainSpec & chain,
                               bool ring, int r, const Tolerances & tol = Tolerances::from_env());

//------------------------------------------------------------------------------
// Constructive divergence preimage
//------------------------------------------------------------------------------

struct PreimageStep
{
  int degree = 0;              ///< degree of the input p_j of this step
  PiecewisePolynomial input;   ///< p_j
  std::array<double, 2> b_endpoints[3]; ///< the edge linear b_i (endpoint values)
  PiecewisePolynomial a_ext[3];         ///< fan-supported boundary extensions
  PiecewisePolynomial w_nedelec;        ///< w_1
  PiecewisePolynomial w_fan;            ///< w_2 = sum a_i l_i / (s+1)
  PiecewisePolynomial mu_factor;        ///< v with mu v = (s+1) w . grad mu - p_j
  PiecewisePolynomial g;                ///< output of the first reduction
  PiecewisePolynomial psi_tangential;   ///< sum a_i t_i of the jump correction
  PiecewisePolynomial w_step;           ///< accumulated w for this power of mu
  PiecewisePolynomial next;             ///< p_{j+1}
  double identity_residual = 0.0; ///< |div(mu^{j+1} w) - (mu^j p_j - mu^{j+1} p_{j+1})|
};

struct PreimageTrace
{
  std::vector<PreimageStep> steps;
  Vec2 base_w0 = Vec2::Zero();
  double base_residual = 0.0;
  double base_mean = 0.0; ///< int mu^r p_0 (should vanish)
  double div_residual = 0.0;
  double boundary_trace = 0.0;
};

/// For p in ring calV^2_r returns v in ring L^1_{r+1} with div v = p,
/// following the inductive construction; per-step identities are checked
/// against 1e-10 relative and the final divergence against 1e-8.
PiecewisePolynomial div_preimage_constructive(const PiecewisePolynomial & p,
                                              PreimageTrace * trace = nullptr,
                                              const Tolerances & tol = Tolerances::from_env());

} // namespace psfeec

#endif
