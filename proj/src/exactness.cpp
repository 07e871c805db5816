#include <psfeec/exactness.hpp>

#include <cmath>

namespace psfeec {

PiecewisePolynomial apply_diff(DiffOp op, const PiecewisePolynomial & f)
{
  return op == DiffOp::Rot ? rot_scalar(f) : divergence(f);
}

OperatorMatrix operator_matrix(DiffOp op, const FESpace & src, const FESpace & dst,
                               const Tolerances & tol)
{
  if (src.sc != dst.sc || src.macro != dst.macro)
    throw Error("operator_matrix: spaces live on different macro triangles");
  if (dst.degree != src.degree - 1)
    throw Error("operator_matrix: target degree must be source degree - 1");
  OperatorMatrix om;
  om.op = op;
  om.src = src;
  om.dst = dst;
  om.matrix = Matrix::Zero(dst.dim(), src.dim());
  for (int k = 0; k < src.dim(); ++k) {
    PiecewisePolynomial img = apply_diff(op, src.column(k));
    Membership m = check_membership(img, dst, 1e-8);
    if (!m.member)
      throw Error("operator_matrix: image of basis column " + std::to_string(k) +
                  " is not in the target space (residual " + std::to_string(m.residual) + ")");
    om.fit_residual = std::max(om.fit_residual, m.residual);
    om.matrix.col(k) = m.coords;
  }
  if (src.dim() > 0 && dst.dim() > 0) {
    Eigen::BDCSVD<Matrix> svd(om.matrix);
    double smax = svd.singularValues()(0);
    om.rank = 0;
    if (smax > 0)
      for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > tol.rank * smax) ++om.rank;
  }
  om.nullity = src.dim() - om.rank;
  return om;
}

PiecewisePolynomial preimage_algebraic(const OperatorMatrix & M, const PiecewisePolynomial & target,
                                       double tol)
{
  Membership tm = check_membership(target, M.dst, 1e-8);
  if (!tm.member)
    throw Error("preimage_algebraic: target is not a member of the destination space");
  Eigen::BDCSVD<Matrix> svd(M.matrix, Eigen::ComputeThinU | Eigen::ComputeThinV);
  double smax = svd.singularValues()(0);
  Vector x = Vector::Zero(M.src.dim());
  Vector uty = svd.matrixU().transpose() * tm.coords;
  for (int i = 0; i < svd.singularValues().size(); ++i) {
    double s = svd.singularValues()(i);
    if (s > 1e-9 * smax) x += (uty(i) / s) * svd.matrixV().col(i);
  }
  double norm = tm.coords.norm();
  double res = (M.matrix * x - tm.coords).norm();
  if (res > tol * std::max(norm, 1e-300))
    throw Error("preimage_algebraic: target outside the operator range (residual " +
                std::to_string(res) + ")");
  return M.src.field(x);
}

std::vector<ChainSpec> remark_chains(bool ring)
{
  if (!ring)
    return {{Family::L0, Family::V1, Family::V2, "L0-V1-V2"},
            {Family::S0, Family::L1, Family::V2, "S0-L1-V2"},
            {Family::S0, Family::S1, Family::L2, "S0-S1-L2"}};
  return {{Family::L0, Family::V1, Family::V2, "L0o-V1o-V2o"},
          {Family::S0, Family::L1, Family::CalV2, "S0o-L1o-calV2o"},
          {Family::S0, Family::S1, Family::L2, "S0o-S1o-L2o"}};
}

SequenceReport verify_sequence(const SplitComplex & sc, int macro, const ChainSpec & chain,
                               bool ring, int r, const Tolerances & tol)
{
  if (r < 2) throw Error("verify_sequence: need r >= 2 for the chain degrees (r, r-1, r-2)");
  SequenceReport rep;
  rep.chain = chain.name;
  rep.ring = ring;
  rep.r = r;

  FESpace F0 = build_space(sc, macro, chain.f0, ring, r, tol);
  FESpace F1 = build_space(sc, macro, chain.f1, ring, r - 1, tol);
  FESpace F2 = build_space(sc, macro, chain.f2, ring, r - 2, tol);
  rep.dim0 = F0.dim();
  rep.dim1 = F1.dim();
  rep.dim2 = F2.dim();

  OperatorMatrix rotM = operator_matrix(DiffOp::Rot, F0, F1, tol);
  OperatorMatrix divM = operator_matrix(DiffOp::Div, F1, F2, tol);
  rep.containment_residual = std::max(rotM.fit_residual, divM.fit_residual);

  rep.rank_rot = rotM.rank;
  rep.rank_div = divM.rank;
  rep.ker_rot = F0.dim() - rotM.rank;
  rep.expected_ker_rot = ring ? 0 : 1;
  rep.middle_defect = divM.nullity - rotM.rank;
  rep.surjectivity_deficit = F2.dim() - divM.rank;
  if (F0.dim() > 0 && F1.dim() > 0 && F2.dim() > 0)
    rep.compose_norm = (divM.matrix * rotM.matrix).cwiseAbs().maxCoeff();
  rep.exact = (rep.ker_rot == rep.expected_ker_rot) && (rep.middle_defect == 0) &&
              (rep.surjectivity_deficit == 0) && rep.compose_norm < 1e-9;
  return rep;
}

//------------------------------------------------------------------------------
// Constructive preimage
//------------------------------------------------------------------------------

namespace {

// Extension into a fan subtriangle: the 1D BB trace coefficients (running
// v0 -> v1 of the subtriangle) are placed on the lambda_2 = 0 edge row, all
// other coefficients zero. The extension vanishes on the [corner, z_0]
// edge whenever the first trace coefficient is zero, and the two
// single-subtriangle extensions agree along the fan's interior edge.
void place_edge_row(PiecewisePolynomial & f, int s, const Vector & trace1d)
{
  int r = f.degree();
  auto block = f.coeffs(s, 0);
  for (int j = 0; j <= r; ++j) block(bb_position(r, r - j, j, 0)) = trace1d(j);
}

// degree-d 1D BB coefficients of the linear with values v0, v1 at t = 0, 1
Vector linear_trace(double v0, double v1, int d)
{
  Vector c(d + 1);
  for (int j = 0; j <= d; ++j) c(j) = v0 + (v1 - v0) * double(j) / d;
  return c;
}

// lowest-order Nedelec interpolant: the unique w in [P_1]^2 whose edge
// normal moments against {1, t} match the given values
PiecewisePolynomial nedelec_from_normal_moments(const SplitComplex & sc, int t,
                                                const std::array<std::array<double, 2>, 3> & rhs,
                                                int degree)
{
  const MacroSplit & ms = sc.macro(t);
  Matrix A(6, 6);
  Vector b(6);
  const SegmentRule & rule = segment_rule(4);
  auto phi = [](int k, const Vec2 & x) {
    switch (k) {
    case 0: return Vec2(1, 0);
    case 1: return Vec2(x.x(), 0);
    case 2: return Vec2(x.y(), 0);
    case 3: return Vec2(0, 1);
    case 4: return Vec2(0, x.x());
    default: return Vec2(0, x.y());
    }
  };
  for (int i = 0; i < 3; ++i) {
    const Vec2 & pa = ms.corner[(i + 1) % 3];
    const Vec2 & pb = ms.corner[(i + 2) % 3];
    double len = ms.edge_length[i];
    for (int m = 0; m < 2; ++m) {
      for (int k = 0; k < 6; ++k) {
        double sum = 0.0;
        for (std::size_t g = 0; g < rule.nodes.size(); ++g) {
          double tt = rule.nodes[g];
          Vec2 x = pa + tt * (pb - pa);
          double kappa = m == 0 ? 1.0 : tt;
          sum += len * rule.weights[g] * kappa * phi(k, x).dot(ms.normal[i]);
        }
        A(2 * i + m, k) = sum;
      }
      b(2 * i + m) = rhs[i][m];
    }
  }
  Vector c = A.fullPivLu().solve(b);
  return pw_from_vector(sc, t, degree, [&](const Vec2 & x) {
    return Vec2(c(0) + c(1) * x.x() + c(2) * x.y(), c(3) + c(4) * x.x() + c(5) * x.y());
  });
}

} // namespace

PiecewisePolynomial div_preimage_constructive(const PiecewisePolynomial & p, PreimageTrace * trace,
                                              const Tolerances & tol)
{
  const SplitComplex & sc = p.complex();
  int t = p.macro_index();
  int r = p.degree();
  const MacroSplit & ms = sc.macro(t);

  {
    FESpace cv = build_space(sc, t, Family::CalV2, true, r, tol);
    Membership m = check_membership(p, cv);
    if (!m.member)
      throw Error("div_preimage_constructive: input is not in the ring calV2 space (residual " +
                  std::to_string(m.residual) + ")");
  }

  PiecewisePolynomial mu = mu_field(sc, t);
  double pscale = std::max(p.sample_sup(), 1e-300);

  std::vector<PiecewisePolynomial> w_steps; // w_{r-j} of step j, degree r-j
  PiecewisePolynomial q = p;

  for (int j = 0; j < r; ++j) {
    int d = r - j;
    int s = j;
    PreimageStep step;
    step.degree = d;
    step.input = q;

    // --- first reduction: edge data matched by a Nedelec field plus
    //     fan-supported extensions scaled by l_i = grad mu / |grad mu|^2
    std::array<std::array<double, 2>, 3> moments{};
    PiecewisePolynomial w2(sc, t, d, Rank::Vector2);
    for (int i = 0; i < 3; ++i) {
      double qa = q.value(2 * i, ms.corner[(i + 1) % 3]);
      double qb = q.value(2 * i + 1, ms.corner[(i + 2) % 3]);
      step.b_endpoints[i] = {qa, qb};

      double h0 = (ms.split[i] - ms.corner[(i + 1) % 3]).norm();
      double h1 = (ms.corner[(i + 2) % 3] - ms.split[i]).norm();
      double frac = h0 / (h0 + h1);
      Vector tr0 = bb_edge_trace(q.coeffs(2 * i, 0), d, 2) -
                   linear_trace(qa, qa + (qb - qa) * frac, d);
      Vector tr1 = bb_edge_trace(q.coeffs(2 * i + 1, 0), d, 2) -
                   linear_trace(qa + (qb - qa) * frac, qb, d);

      PiecewisePolynomial a_i(sc, t, d, Rank::Scalar);
      place_edge_row(a_i, 2 * i, tr0);
      place_edge_row(a_i, 2 * i + 1, tr1);
      step.a_ext[i] = a_i;

      // (s+1) w1 . grad mu_i = b_i on e_i means w1 . n_i = -b_i/((s+1)|grad mu_i|)
      double gnorm = ms.grad_mu[i].norm();
      double len = ms.edge_length[i];
      double m0 = len * 0.5 * (qa + qb);
      double m1 = len * (qa / 6.0 + qb / 3.0);
      moments[i][0] = -m0 / ((s + 1.0) * gnorm);
      moments[i][1] = -m1 / ((s + 1.0) * gnorm);

      Vec2 li = ms.grad_mu[i] / (gnorm * gnorm);
      for (int sub : {2 * i, 2 * i + 1}) {
        w2.coeffs(sub, 0) += a_i.coeffs(sub, 0) * (li.x() / (s + 1.0));
        w2.coeffs(sub, 1) += a_i.coeffs(sub, 0) * (li.y() / (s + 1.0));
      }
    }
    PiecewisePolynomial w1 = nedelec_from_normal_moments(sc, t, moments, d);
    step.w_nedelec = w1;
    step.w_fan = w2;
    PiecewisePolynomial w = w1 + w2;

    // rho = (s+1) w . grad mu - q vanishes on the boundary; factor out mu
    PiecewisePolynomial rho(sc, t, d, Rank::Scalar);
    for (int i = 0; i < 3; ++i) {
      const Vec2 & gm = ms.grad_mu[i];
      for (int sub : {2 * i, 2 * i + 1})
        rho.coeffs(sub, 0) =
          (s + 1.0) * (w.coeffs(sub, 0) * gm.x() + w.coeffs(sub, 1) * gm.y()) - q.coeffs(sub, 0);
    }
    PiecewisePolynomial vfac = factor_out_mu(rho);
    step.mu_factor = vfac;
    PiecewisePolynomial g = -1.0 * (divergence(w) + vfac);
    step.g = g;

    // --- second reduction: remove the split-point jumps of g with the
    //     tangential piecewise linear correction
    PiecewisePolynomial psi(sc, t, 1, Rank::Vector2);
    for (int i = 0; i < 3; ++i) {
      double J = g.value(2 * i, ms.split[i]) - g.value(2 * i + 1, ms.split[i]);
      Vec2 grad_hat_1 = ms.grad_lambda[2 * i][1];     // hat of the split point, sub 2i
      Vec2 grad_hat_2 = ms.grad_lambda[2 * i + 1][0]; // and sub 2i+1
      double slope = (grad_hat_1 - grad_hat_2).dot(ms.tangent[i]);
      double c = J / slope;
      for (int sub : {2 * i, 2 * i + 1}) {
        int pos = sub == 2 * i ? bb_position(1, 0, 1, 0) : bb_position(1, 1, 0, 0);
        psi.coeffs(sub, 0)(pos) += c * ms.tangent[i].x();
        psi.coeffs(sub, 1)(pos) += c * ms.tangent[i].y();
      }
    }
    step.psi_tangential = psi;
    PiecewisePolynomial gamma = g - raise_degree(divergence(psi), d - 1);
    PiecewisePolynomial w_step = w + raise_degree(psi, d);
    step.w_step = w_step;
    step.next = gamma;

    // exact identity: div(mu^{j+1} w_step) = mu^j q - mu^{j+1} gamma
    PiecewisePolynomial mupow = pw_from_scalar(sc, t, 0, [](const Vec2 &) { return 1.0; });
    for (int k = 0; k < j; ++k) mupow = multiply(mu, mupow);
    PiecewisePolynomial lhs = divergence(multiply(mu, multiply(mupow, w_step)));
    PiecewisePolynomial rhs = multiply(mupow, q) - multiply(multiply(mu, mupow), gamma);
    double step_scale = std::max({lhs.coeff_norm(), rhs.coeff_norm(), 1.0});
    step.identity_residual = (lhs.flat() - rhs.flat()).cwiseAbs().maxCoeff();
    if (step.identity_residual > 1e-10 * step_scale)
      throw Error("div_preimage_constructive: step " + std::to_string(j) + " identity residual " +
                  std::to_string(step.identity_residual));

    w_steps.push_back(w_step);
    q = gamma;
    if (trace) trace->steps.push_back(std::move(step));
  }

  // base case: q is constant on each fan and continuous at the split
  // points; solve (r+1) grad mu_i . w0 = q_i in least squares (the system
  // is consistent exactly when the mu^r-weighted mean of q vanishes)
  Matrix A(3, 2);
  Vector bvec(3);
  for (int i = 0; i < 3; ++i) {
    A(i, 0) = (r + 1.0) * ms.grad_mu[i].x();
    A(i, 1) = (r + 1.0) * ms.grad_mu[i].y();
    Vec2 centroid = (ms.sub[2 * i][0] + ms.sub[2 * i][1] + ms.sub[2 * i][2]) / 3.0;
    bvec(i) = q.value(2 * i, centroid);
  }
  Vec2 w0v = A.colPivHouseholderQr().solve(bvec);
  double base_res = (A * Eigen::Vector2d(w0v) - bvec).norm();
  double base_scale = std::max(1.0, bvec.cwiseAbs().maxCoeff());
  if (base_res > 1e-8 * base_scale)
    throw Error("div_preimage_constructive: base-case solve residual " + std::to_string(base_res) +
                " (the weighted mean of p_0 should vanish)");

  // assemble v = sum_j mu^{j+1} w_{r-j} + mu^{r+1} w0
  PiecewisePolynomial v(sc, t, r + 1, Rank::Vector2);
  PiecewisePolynomial mupow = mu;
  for (int j = 0; j < r; ++j) {
    v += raise_degree(multiply(mupow, w_steps[j]), r + 1);
    mupow = multiply(mu, mupow);
  }
  PiecewisePolynomial w0f(sc, t, 0, Rank::Vector2);
  for (int sub = 0; sub < 6; ++sub) {
    w0f.coeffs(sub, 0)(0) = w0v.x();
    w0f.coeffs(sub, 1)(0) = w0v.y();
  }
  v += raise_degree(multiply(mupow, w0f), r + 1);

  PiecewisePolynomial diff = divergence(v) - raise_degree(p, r);
  double div_res = diff.sample_sup();
  double btrace = v.boundary_trace_sup();
  if (trace) {
    trace->base_w0 = w0v;
    trace->base_residual = base_res;
    PiecewisePolynomial mur = pw_from_scalar(sc, t, 0, [](const Vec2 &) { return 1.0; });
    for (int k = 0; k < r; ++k) mur = multiply(mu, mur);
    trace->base_mean = integrate(multiply(mur, q));
    trace->div_residual = div_res;
    trace->boundary_trace = btrace;
  }
  if (div_res > 1e-8 * pscale)
    throw Error("div_preimage_constructive: final divergence residual " + std::to_string(div_res) +
                " against input scale " + std::to_string(pscale));
  return v;
}

} // namespace psfeec
