#include <doctest.h>
#include <psfeec/spaces.hpp>
#include <random>

using namespace psfeec;

namespace {

SplitComplex reference_split() { return powell_sabin_refine(reference_triangle_mesh()); }

// samples all continuity/boundary conditions of a family on one basis column
double conformity_residual(const FESpace & sp, const PiecewisePolynomial & f)
{
  const MacroSplit & ms = sp.sc->macro(sp.macro);
  double res = 0.0;
  auto probe_pair = [&](const Vec2 & a, const Vec2 & b, int s1, int s2, auto && quantity) {
    for (int j = 1; j <= 10; ++j) {
      Vec2 x = a + (j / 11.0) * (b - a);
      res = std::max(res, std::abs(quantity(s1, x) - quantity(s2, x)));
    }
  };
  auto probe_zero = [&](const Vec2 & a, const Vec2 & b, int s, auto && quantity) {
    for (int j = 1; j <= 10; ++j) {
      Vec2 x = a + (j / 11.0) * (b - a);
      res = std::max(res, std::abs(quantity(s, x)));
    }
  };
  struct Edge { Vec2 a, b; int s1, s2; };
  std::vector<Edge> interior;
  for (int i = 0; i < 3; ++i) interior.push_back({ms.split[i], ms.center, 2 * i, 2 * i + 1});
  for (int k = 0; k < 3; ++k)
    interior.push_back({ms.corner[k], ms.center, 2 * ((k + 2) % 3), 2 * ((k + 1) % 3) + 1});

  auto value0 = [&](int s, const Vec2 & x) { return f.value(s, x); };
  auto value1 = [&](int s, const Vec2 & x) { return f.vector_value(s, x).sum(); };
  auto divv = [&](int s, const Vec2 & x) { return f.divergence_value(s, x); };
  auto gradsum = [&](int s, const Vec2 & x) { return f.gradient(s, x).sum(); };

  bool vector = sp.rank() == Rank::Vector2;
  for (const auto & e : interior) {
    switch (sp.family) {
    case Family::V0:
    case Family::L0:
    case Family::L2:
    case Family::S2:
      probe_pair(e.a, e.b, e.s1, e.s2, value0);
      break;
    case Family::S0:
      probe_pair(e.a, e.b, e.s1, e.s2, value0);
      probe_pair(e.a, e.b, e.s1, e.s2, gradsum);
      break;
    case Family::L1:
      probe_pair(e.a, e.b, e.s1, e.s2, value1);
      break;
    case Family::S1:
      probe_pair(e.a, e.b, e.s1, e.s2, value1);
      probe_pair(e.a, e.b, e.s1, e.s2, divv);
      break;
    case Family::V1: {
      Vec2 nu = perp((e.b - e.a).normalized());
      auto vn = [&](int s, const Vec2 & x) { return f.vector_value(s, x).dot(nu); };
      probe_pair(e.a, e.b, e.s1, e.s2, vn);
      break;
    }
    case Family::V2:
      break;
    case Family::CalV2:
      break;
    }
  }
  if (sp.family == Family::CalV2)
    for (int i = 0; i < 3; ++i)
      res = std::max(res, std::abs(f.value(2 * i, ms.split[i]) - f.value(2 * i + 1, ms.split[i])));

  if (sp.ring) {
    for (int i = 0; i < 3; ++i) {
      for (int half = 0; half < 2; ++half) {
        int s = 2 * i + half;
        Vec2 a = half == 0 ? ms.corner[(i + 1) % 3] : ms.split[i];
        Vec2 b = half == 0 ? ms.split[i] : ms.corner[(i + 2) % 3];
        switch (sp.family) {
        case Family::V0:
        case Family::L0:
        case Family::L2:
        case Family::S2:
          probe_zero(a, b, s, value0);
          break;
        case Family::S0:
          probe_zero(a, b, s, value0);
          probe_zero(a, b, s, gradsum);
          break;
        case Family::L1:
          probe_zero(a, b, s, value1);
          break;
        case Family::S1:
          probe_zero(a, b, s, value1);
          probe_zero(a, b, s, divv);
          break;
        case Family::V1: {
          auto vn = [&](int ss, const Vec2 & x) { return f.vector_value(ss, x).dot(ms.normal[i]); };
          probe_zero(a, b, s, vn);
          break;
        }
        default:
          break;
        }
      }
    }
    if (sp.family == Family::V2 || sp.family == Family::CalV2 || sp.family == Family::L2 ||
        sp.family == Family::S2) {
      PiecewisePolynomial g = f;
      res = std::max(res, std::abs(integrate(g)));
    }
  }
  (void)vector;
  return res;
}

} // namespace

TEST_CASE("headline dimensions")
{
  SplitComplex sc = reference_split();
  CHECK(build_space(sc, 0, Family::S0, false, 2).dim() == 9);
  CHECK(build_space(sc, 0, Family::V2, false, 0).dim() == 6);
  CHECK(build_space(sc, 0, Family::L0, false, 1).dim() == 7);
  CHECK(build_space(sc, 0, Family::CalV2, false, 0).dim() == 3);
  CHECK(build_space(sc, 0, Family::CalV2, true, 0).dim() == 2);
  CHECK(build_space(sc, 0, Family::S0, true, 4).dim() == 6);
  CHECK(build_space(sc, 0, Family::S1, false, 2).dim() == 27);
}

TEST_CASE("dimension formulas")
{
  CHECK(dimension_formula(Family::V1, false, 1) == 24);
  CHECK(dimension_formula(Family::S1, true, 3) == 12);
  CHECK(dimension_formula(Family::S2, true, 2) == 6);
  CHECK(!dimension_formula(Family::S0, false, 0).has_value());
  CHECK(!dimension_formula(Family::L1, true, 2).has_value());
}

TEST_CASE("computed dimensions match formulas, r = 0..4")
{
  SplitComplex sc = reference_split();
  for (Family f : {Family::V0, Family::V1, Family::V2, Family::L0, Family::L1, Family::L2,
                   Family::S0, Family::S1, Family::S2, Family::CalV2}) {
    for (bool ring : {false, true}) {
      for (int r = 0; r <= 4; ++r) {
        auto formula = dimension_formula(f, ring, r);
        if (!formula) continue;
        FESpace sp = build_space(sc, 0, f, ring, r);
        INFO(family_name(f, ring), " r=", r);
        CHECK(sp.dim() == *formula);
      }
    }
  }
}

TEST_CASE("basis columns satisfy their constraints")
{
  SplitComplex sc = reference_split();
  for (Family f : {Family::S0, Family::S1, Family::V1, Family::L1, Family::CalV2}) {
    for (bool ring : {false, true}) {
      FESpace sp = build_space(sc, 0, f, ring, 3);
      if (sp.dim() == 0) continue;
      double scale = 0.0;
      for (int k = 0; k < sp.dim(); ++k) scale = std::max(scale, sp.column(k).coeff_norm());
      for (int k = 0; k < sp.dim(); ++k) {
        INFO(family_name(f, ring), " column ", k);
        CHECK(conformity_residual(sp, sp.column(k)) <= 1e-9 * scale);
      }
      // orthonormal basis: smallest singular value is 1
      Eigen::BDCSVD<Matrix> svd(sp.basis);
      CHECK(svd.singularValues()(sp.dim() - 1) > 1e-8 * svd.singularValues()(0));
    }
  }
}

TEST_CASE("membership examples")
{
  SplitComplex sc = reference_split();
  PiecewisePolynomial mu = mu_field(sc, 0);

  FESpace L01 = build_space(sc, 0, Family::L0, false, 1);
  CHECK(check_membership(mu, L01).member);

  // mu^2 is continuous but not C^1: grad(mu^2) = 2 mu grad(mu) jumps across
  // the interior edges [z_k, z_0] where mu does not vanish
  FESpace S02 = build_space(sc, 0, Family::S0, false, 2);
  FESpace L02deg2 = build_space(sc, 0, Family::L0, false, 2);
  PiecewisePolynomial mu2 = multiply(mu, mu);
  CHECK(check_membership(mu2, L02deg2).member);
  CHECK(!check_membership(mu2, S02).member);

  // generic discontinuous piecewise constants are not continuous
  FESpace L02 = build_space(sc, 0, Family::L2, false, 0);
  PiecewisePolynomial pc(sc, 0, 0, Rank::Scalar);
  for (int s = 0; s < 6; ++s) pc.coeffs(s, 0)(0) = double(s + 1);
  CHECK(!check_membership(pc, L02).member);

  CHECK_THROWS_AS(check_membership(mu, S02), Error); // degree mismatch
}

TEST_CASE("nesting of the families")
{
  SplitComplex sc = reference_split();
  int r = 3;
  auto contained = [&](const FESpace & inner, const FESpace & outer) {
    for (int k = 0; k < inner.dim(); ++k) {
      PiecewisePolynomial f = inner.column(k);
      if (!check_membership(f, outer).member) return false;
    }
    return true;
  };
  FESpace S0 = build_space(sc, 0, Family::S0, false, r);
  FESpace L0 = build_space(sc, 0, Family::L0, false, r);
  FESpace V0 = build_space(sc, 0, Family::V0, false, r);
  CHECK(contained(S0, L0));
  CHECK(contained(L0, V0));
  CHECK(contained(V0, L0));
  CHECK(L0.dim() == V0.dim());

  FESpace S1 = build_space(sc, 0, Family::S1, false, r);
  FESpace L1 = build_space(sc, 0, Family::L1, false, r);
  FESpace V1 = build_space(sc, 0, Family::V1, false, r);
  CHECK(contained(S1, L1));
  CHECK(contained(L1, V1));

  FESpace L2 = build_space(sc, 0, Family::L2, false, r);
  FESpace calV2 = build_space(sc, 0, Family::CalV2, false, r);
  FESpace V2 = build_space(sc, 0, Family::V2, false, r);
  CHECK(contained(L2, calV2));
  CHECK(contained(calV2, V2));
}

TEST_CASE("rot and div map between the right families")
{
  SplitComplex sc = reference_split();
  int r = 3;
  auto maps_into = [&](const FESpace & src, Family dstf, bool dst_ring, bool use_rot) {
    FESpace dst = build_space(sc, 0, dstf, dst_ring, r - 1);
    for (int k = 0; k < src.dim(); ++k) {
      PiecewisePolynomial img = use_rot ? rot_scalar(src.column(k)) : divergence(src.column(k));
      if (!check_membership(img, dst).member) return false;
    }
    return true;
  };
  CHECK(maps_into(build_space(sc, 0, Family::S0, false, r), Family::L1, false, true));
  CHECK(maps_into(build_space(sc, 0, Family::L0, false, r), Family::V1, false, true));
  CHECK(maps_into(build_space(sc, 0, Family::S1, false, r), Family::L2, false, false));
  CHECK(maps_into(build_space(sc, 0, Family::V1, false, r), Family::V2, false, false));
  // the singular-vertex property: for fields vanishing on the macro boundary
  // the divergence is continuous at the split points (and has zero mean)
  CHECK(maps_into(build_space(sc, 0, Family::L1, true, r), Family::CalV2, true, false));
  // the plain divergence image is generally discontinuous at the split points
  CHECK(!maps_into(build_space(sc, 0, Family::L1, false, r), Family::CalV2, false, false));
}

TEST_CASE("mu-factoring a smooth ring element")
{
  // random element of the ring S0 space at r = 4: the factor is continuous
  // and C^1 on each fan
  SplitComplex sc = reference_split();
  FESpace S04o = build_space(sc, 0, Family::S0, true, 4);
  REQUIRE(S04o.dim() == 6);
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Vector coords(S04o.dim());
  for (int k = 0; k < coords.size(); ++k) coords(k) = unif(rng);
  PiecewisePolynomial q = S04o.field(coords);
  PiecewisePolynomial p = factor_out_mu(q);

  // residual of the factorization
  PiecewisePolynomial mu = mu_field(sc, 0);
  PiecewisePolynomial back = multiply(mu, p);
  double scale = std::max(q.sample_sup(), 1e-12);
  CHECK((back.flat() - raise_degree(q, q.degree()).flat()).cwiseAbs().maxCoeff() <= 1e-10 * scale);

  // p continuous across all interior edges, gradient continuous inside fans
  const MacroSplit & ms = sc.macro(0);
  for (int i = 0; i < 3; ++i) {
    for (int j = 1; j < 10; ++j) {
      Vec2 x = ms.split[i] + (j / 10.0) * (ms.center - ms.split[i]);
      CHECK(std::abs(p.value(2 * i, x) - p.value(2 * i + 1, x)) < 1e-9 * scale);
      CHECK((p.gradient(2 * i, x) - p.gradient(2 * i + 1, x)).norm() < 1e-8 * scale);
    }
  }
  for (int k = 0; k < 3; ++k) {
    int s1 = 2 * ((k + 2) % 3), s2 = 2 * ((k + 1) % 3) + 1;
    for (int j = 1; j < 10; ++j) {
      Vec2 x = ms.corner[k] + (j / 10.0) * (ms.center - ms.corner[k]);
      CHECK(std::abs(p.value(s1, x) - p.value(s2, x)) < 1e-9 * scale);
    }
  }
}

TEST_CASE("invalid input")
{
  SplitComplex sc = reference_split();
  CHECK_THROWS_AS(build_space(sc, 0, Family::S0, false, -1), Error);
}
