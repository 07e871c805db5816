#include <doctest.h>
#include <psfeec/piecewise.hpp>
#include <random>

using namespace psfeec;

namespace {

SplitComplex reference_split() { return powell_sabin_refine(reference_triangle_mesh()); }

PiecewisePolynomial random_pw(const SplitComplex & sc, int t, int r, Rank rank,
                              std::mt19937_64 & rng)
{
  PiecewisePolynomial f(sc, t, r, rank);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int k = 0; k < f.flat_size(); ++k) f.flat()(k) = unif(rng);
  return f;
}

} // namespace

TEST_CASE("de Casteljau evaluation matches monomial evaluation")
{
  SplitComplex sc = reference_split();
  std::mt19937_64 rng(5);
  for (int r = 1; r <= 6; ++r) {
    Poly2 p = Poly2::random(r, rng);
    PiecewisePolynomial f =
      pw_from_scalar(sc, 0, r, [&](const Vec2 & x) { return p.value(x); });
    for (int s = 0; s < 6; ++s) {
      const auto & tri = sc.macro(0).sub[s];
      Vec2 x = (tri[0] + 2.0 * tri[1] + 3.0 * tri[2]) / 6.0;
      CHECK(f.value(s, x) == doctest::Approx(p.value(x)).epsilon(1e-13));
      CHECK((f.gradient(s, x) - p.grad(x)).norm() < 1e-12);
    }
  }
}

TEST_CASE("rot examples")
{
  SplitComplex sc = reference_split();
  PiecewisePolynomial q = pw_from_scalar(sc, 0, 1, [](const Vec2 & x) { return x.y(); });
  PiecewisePolynomial v = rot_scalar(q);
  CHECK(v.degree() == 0);
  for (int s = 0; s < 6; ++s) {
    Vec2 c = (sc.macro(0).sub[s][0] + sc.macro(0).sub[s][1] + sc.macro(0).sub[s][2]) / 3.0;
    CHECK((v.vector_value(s, c) - Vec2(1.0, 0.0)).norm() < 1e-14);
  }

  PiecewisePolynomial constant = pw_from_scalar(sc, 0, 2, [](const Vec2 &) { return 3.5; });
  CHECK(rot_scalar(constant).coeff_norm() < 1e-13);

  // div(rot q) = 0 identically for random degree-4 q
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    PiecewisePolynomial rq = random_pw(sc, 0, 4, Rank::Scalar, rng);
    CHECK(divergence(rot_scalar(rq)).coeff_norm() < 1e-13 * std::max(1.0, rq.coeff_norm()));
  }
}

TEST_CASE("divergence examples")
{
  SplitComplex sc = reference_split();
  PiecewisePolynomial v = pw_from_vector(sc, 0, 1, [](const Vec2 & x) { return x; });
  PiecewisePolynomial d = divergence(v);
  for (int s = 0; s < 6; ++s) {
    Vec2 c = (sc.macro(0).sub[s][0] + sc.macro(0).sub[s][1] + sc.macro(0).sub[s][2]) / 3.0;
    CHECK(d.value(s, c) == doctest::Approx(2.0).epsilon(1e-14));
  }

  // psi = (mean of g) * x/2 has div = mean and integral = |T| * mean
  double mean = 0.7;
  PiecewisePolynomial psi =
    pw_from_vector(sc, 0, 1, [&](const Vec2 & x) { return Vec2(0.5 * mean * x); });
  PiecewisePolynomial dpsi = divergence(psi);
  CHECK(integrate(dpsi) == doctest::Approx(sc.macro(0).area * mean).epsilon(1e-13));
}

TEST_CASE("linearity of rot and div")
{
  SplitComplex sc = reference_split();
  std::mt19937_64 rng(23);
  PiecewisePolynomial a = random_pw(sc, 0, 3, Rank::Scalar, rng);
  PiecewisePolynomial b = random_pw(sc, 0, 3, Rank::Scalar, rng);
  PiecewisePolynomial lhs = rot_scalar(2.0 * a - 3.0 * b);
  PiecewisePolynomial rhs = 2.0 * rot_scalar(a) - 3.0 * rot_scalar(b);
  CHECK((lhs.flat() - rhs.flat()).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("mu field")
{
  SplitComplex sc = powell_sabin_refine(two_triangle_square_mesh());
  for (int t = 0; t < sc.n_macro(); ++t) {
    PiecewisePolynomial mu = mu_field(sc, t);
    const MacroSplit & ms = sc.macro(t);
    CHECK(mu.value(0, ms.center) == doctest::Approx(1.0).epsilon(1e-14));
    for (int i = 0; i < 3; ++i) {
      CHECK(std::abs(mu.value(2 * i, ms.corner[(i + 1) % 3])) < 1e-14);
      CHECK(std::abs(mu.value(2 * i, ms.split[i])) < 1e-14);
    }
    // gradient constant on each fan and matching the stored grad_mu
    for (int i = 0; i < 3; ++i) {
      Vec2 g0 = mu.gradient(2 * i, ms.split[i]);
      Vec2 g1 = mu.gradient(2 * i + 1, ms.split[i]);
      CHECK((g0 - g1).norm() < 1e-12);
      CHECK((g0 - ms.grad_mu[i]).norm() < 1e-12);
      CHECK(std::abs(g0.dot(ms.tangent[i])) < 1e-12 * g0.norm());
      CHECK((g0.normalized() + ms.normal[i]).norm() < 1e-12);
    }
    // trace of mu on any macro edge is the zero edge polynomial
    for (int i = 0; i < 3; ++i)
      CHECK(edge_trace(mu, i, TraceQuantity::Value).coeff_norm() < 1e-14);
  }
}

TEST_CASE("factor_out_mu")
{
  SplitComplex sc = reference_split();
  PiecewisePolynomial mu = mu_field(sc, 0);

  PiecewisePolynomial one = factor_out_mu(mu);
  CHECK(one.degree() == 0);
  for (int s = 0; s < 6; ++s) CHECK(one.coeffs(s, 0)(0) == doctest::Approx(1.0));

  PiecewisePolynomial mu2 = multiply(mu, mu);
  PiecewisePolynomial back = factor_out_mu(mu2);
  CHECK((back.flat() - mu.flat()).cwiseAbs().maxCoeff() < 1e-13);

  // right inverse on a generic field vanishing on the boundary
  std::mt19937_64 rng(31);
  PiecewisePolynomial g = random_pw(sc, 0, 3, Rank::Scalar, rng);
  PiecewisePolynomial q = multiply(mu, g);
  PiecewisePolynomial p = factor_out_mu(q);
  PiecewisePolynomial recomposed = multiply(mu, p);
  double scale = q.sample_sup();
  const MacroSplit & ms = sc.macro(0);
  for (int s = 0; s < 6; ++s) {
    for (int i = 0; i <= 8; ++i) {
      for (int j = 0; j <= 8 - i; ++j) {
        Eigen::Vector3d lam(i / 8.0, j / 8.0, (8.0 - i - j) / 8.0);
        Vec2 x = lam(0) * ms.sub[s][0] + lam(1) * ms.sub[s][1] + lam(2) * ms.sub[s][2];
        CHECK(std::abs(recomposed.value(s, x) - q.value(s, x)) <= 1e-10 * scale);
      }
    }
  }

  // nonzero boundary trace must be rejected
  PiecewisePolynomial bad = pw_from_scalar(sc, 0, 2, [](const Vec2 & x) { return 1.0 + x.x(); });
  CHECK_THROWS_AS(factor_out_mu(bad), Error);
}

TEST_CASE("integration")
{
  SplitComplex sc = reference_split();
  PiecewisePolynomial one = pw_from_scalar(sc, 0, 0, [](const Vec2 &) { return 1.0; });
  CHECK(integrate(one) == doctest::Approx(0.5).epsilon(1e-14));

  // BB coefficient average oracle: integral of a linear field over a
  // subtriangle is area times the mean of its vertex values
  PiecewisePolynomial mu = mu_field(sc, 0);
  double oracle = 0.0;
  for (int s = 0; s < 6; ++s) oracle += sc.macro(0).sub_area[s] * (0.0 + 0.0 + 1.0) / 3.0;
  CHECK(integrate(mu) == doctest::Approx(oracle).epsilon(1e-13));

  // degree-6 monomial against the iterated symbolic integral
  PiecewisePolynomial m6 =
    pw_from_scalar(sc, 0, 6, [](const Vec2 & x) { return std::pow(x.x(), 4) * x.y() * x.y(); });
  double exact = (24.0 * 6.0 / 40320.0) / 3.0; // B(5,4)/3
  CHECK(integrate(m6) == doctest::Approx(exact).epsilon(1e-14));

  // quadrature path agrees
  double viaquad = integrate_over_macro(sc, 0, 6, [&](int s, const Vec2 & x) {
    return m6.value(s, x);
  });
  CHECK(viaquad == doctest::Approx(exact).epsilon(1e-13));
}

TEST_CASE("edge traces of rot")
{
  SplitComplex sc = reference_split();
  std::mt19937_64 rng(41);
  Poly2 p = Poly2::random(4, rng);
  PiecewisePolynomial q = pw_from_scalar(sc, 0, 4, [&](const Vec2 & x) { return p.value(x); });
  PiecewisePolynomial v = rot_scalar(q);
  const MacroSplit & ms = sc.macro(0);
  for (int i = 0; i < 3; ++i) {
    EdgePolynomial vn = edge_trace(v, i, TraceQuantity::NormalComponent);
    EdgePolynomial vt = edge_trace(v, i, TraceQuantity::TangentialComponent);
    EdgePolynomial qn = edge_trace(q, i, TraceQuantity::NormalDerivative);
    for (double s01 : {0.15, 0.5, 0.85}) {
      for (int half = 0; half < 2; ++half) {
        Vec2 a = half == 0 ? ms.corner[(i + 1) % 3] : ms.split[i];
        Vec2 b = half == 0 ? ms.split[i] : ms.corner[(i + 2) % 3];
        Vec2 x = a + s01 * (b - a);
        // rot q . n = d_t q,  rot q . t = -d_n q
        CHECK(vn.eval(half, s01) == doctest::Approx(p.grad(x).dot(ms.tangent[i])).epsilon(1e-12));
        CHECK(vt.eval(half, s01) == doctest::Approx(-qn.eval(half, s01)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("jump functional antisymmetry")
{
  SplitComplex sc = reference_split();
  std::mt19937_64 rng(43);
  PiecewisePolynomial q = random_pw(sc, 0, 2, Rank::Scalar, rng);
  const MacroSplit & ms = sc.macro(0);
  for (int i = 0; i < 3; ++i) {
    double scalar = jump_value(q, i);
    Vec2 jv = jump_vector(q, i);
    Vec2 m1 = ms.jump_m1[i];
    Vec2 m2 = -m1; // outward normals of the two fan triangles are opposite
    CHECK((jv - scalar * m1).norm() < 1e-13);
    CHECK((jv + scalar * m2).norm() < 1e-13);
  }
  // continuity at the split point makes the jump vanish
  PiecewisePolynomial cont = pw_from_scalar(sc, 0, 2, [](const Vec2 & x) { return x.x() * x.y(); });
  for (int i = 0; i < 3; ++i) CHECK(std::abs(jump_value(cont, i)) < 1e-13);
}

TEST_CASE("raise_degree preserves values")
{
  SplitComplex sc = reference_split();
  std::mt19937_64 rng(47);
  PiecewisePolynomial f = random_pw(sc, 0, 2, Rank::Vector2, rng);
  PiecewisePolynomial g = raise_degree(f, 5);
  for (int s = 0; s < 6; ++s) {
    Vec2 c = (sc.macro(0).sub[s][0] + sc.macro(0).sub[s][1] + sc.macro(0).sub[s][2]) / 3.0;
    CHECK((g.vector_value(s, c) - f.vector_value(s, c)).norm() < 1e-13);
  }
}
