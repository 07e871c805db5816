#include <doctest.h>
#include <psfeec/bernstein.hpp>
#include <psfeec/quadrature.hpp>
#include <random>

using namespace psfeec;

TEST_CASE("index bookkeeping")
{
  CHECK(bb_dim(0) == 1);
  CHECK(bb_dim(3) == 10);
  CHECK(bb_dim(-1) == 0);
  const auto & idx = bb_indices(4);
  for (std::size_t q = 0; q < idx.size(); ++q)
    CHECK(bb_position(4, idx[q][0], idx[q][1], idx[q][2]) == int(q));
}

TEST_CASE("partition of unity and de Casteljau against direct values")
{
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int r = 0; r <= 6; ++r) {
    Vector c = Vector::Random(bb_dim(r));
    for (int trial = 0; trial < 10; ++trial) {
      double a = unif(rng), b = unif(rng) * (1.0 - a);
      Eigen::Vector3d lam(a, b, 1.0 - a - b);
      Vector vals = bb_values(r, lam);
      CHECK(vals.sum() == doctest::Approx(1.0).epsilon(1e-13));
      CHECK(bb_eval(c, r, lam) == doctest::Approx(vals.dot(c)).epsilon(1e-12));
    }
  }
}

TEST_CASE("degree raise, multiply, divide are consistent")
{
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  int r = 4;
  Vector c = Vector::Random(bb_dim(r));
  Vector raised = bb_raise(c, r);
  // lambda_2 in BB form at degree 1
  Vector lin = Vector::Zero(3);
  lin(bb_position(1, 0, 0, 1)) = 1.0;
  Vector prod = bb_multiply(lin, 1, c, r);
  Vector back = bb_divide_by_lambda(prod, r + 1, 2);
  CHECK((back - c).cwiseAbs().maxCoeff() < 1e-12);
  for (int trial = 0; trial < 20; ++trial) {
    double a = unif(rng), b = unif(rng) * (1.0 - a);
    Eigen::Vector3d lam(a, b, 1.0 - a - b);
    CHECK(bb_eval(raised, r + 1, lam) == doctest::Approx(bb_eval(c, r, lam)).epsilon(1e-12));
    CHECK(bb_eval(prod, r + 1, lam) ==
          doctest::Approx(lam(2) * bb_eval(c, r, lam)).epsilon(1e-12));
  }
}

TEST_CASE("interpolation reproduces polynomials")
{
  auto f = [](const Eigen::Vector3d & lam) {
    // a degree-3 polynomial expressed through barycentric coordinates
    return lam(0) * lam(0) * lam(1) - 2.0 * lam(2) * lam(2) * lam(2) + lam(1);
  };
  Vector c = bb_interpolate(3, f);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    double a = unif(rng), b = unif(rng) * (1.0 - a);
    Eigen::Vector3d lam(a, b, 1.0 - a - b);
    CHECK(bb_eval(c, 3, lam) == doctest::Approx(f(lam)).epsilon(1e-12));
  }
}

TEST_CASE("quadrature exactness")
{
  // int over reference triangle of 1 = 1/2 handled by the |S| * sum w convention
  const TriangleRule & rule = triangle_rule(6);
  double w = 0.0;
  for (double wq : rule.weights) w += wq;
  CHECK(w == doctest::Approx(1.0).epsilon(1e-13));

  // degree-6 monomial x^4 y^2 over the reference triangle against the exact
  // iterated integral: int_0^1 int_0^{1-x} x^4 y^2 dy dx = 1/630... computed
  // symbolically: int x^4 (1-x)^3 / 3 dx = B(5,4)/3 = (4!3!)/(8!)/3
  double exact = (24.0 * 6.0 / 40320.0) / 3.0;
  double got = 0.0;
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const auto & lam = rule.nodes[q];
    double x = lam(1), y = lam(2); // vertices (0,0),(1,0),(0,1)
    got += rule.weights[q] * std::pow(x, 4) * std::pow(y, 2);
  }
  got *= 0.5;
  CHECK(got == doctest::Approx(exact).epsilon(1e-13));

  const SegmentRule & seg = segment_rule(9);
  double m = 0.0;
  for (std::size_t q = 0; q < seg.nodes.size(); ++q)
    m += seg.weights[q] * std::pow(seg.nodes[q], 9);
  CHECK(m == doctest::Approx(0.1).epsilon(1e-13));
}

TEST_CASE("1d bernstein")
{
  Vector c = bb1_interpolate(3, [](double t) { return t * t * t - 2 * t + 1; });
  CHECK(bb1_eval(c, 3, 0.3) == doctest::Approx(0.3 * 0.3 * 0.3 - 0.6 + 1).epsilon(1e-13));
  Vector d = bb1_derivative(c, 3);
  CHECK(bb1_eval(d, 2, 0.3) == doctest::Approx(3 * 0.3 * 0.3 - 2).epsilon(1e-12));
}
