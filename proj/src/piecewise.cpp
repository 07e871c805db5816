#include <psfeec/piecewise.hpp>

#include <cmath>

namespace psfeec {

PiecewisePolynomial::PiecewisePolynomial(const SplitComplex & sc, int t, int degree, Rank rank)
  : m_sc(&sc), m_macro(t), m_degree(degree), m_rank(rank)
{
  m_c = Vector::Zero(6 * n_components(rank) * bb_dim(degree));
}

Eigen::Ref<Vector> PiecewisePolynomial::coeffs(int s, int comp)
{
  int n = bb_dim(m_degree);
  return m_c.segment((s * n_components(m_rank) + comp) * n, n);
}

Eigen::Ref<const Vector> PiecewisePolynomial::coeffs(int s, int comp) const
{
  int n = bb_dim(m_degree);
  return m_c.segment((s * n_components(m_rank) + comp) * n, n);
}

double PiecewisePolynomial::value(int s, const Vec2 & x) const
{
  return bb_eval(coeffs(s, 0), m_degree, macro().lambda(s, x));
}

Vec2 PiecewisePolynomial::gradient(int s, const Vec2 & x) const
{
  const auto & gl = macro().grad_lambda[s];
  Eigen::Vector3d lam = macro().lambda(s, x);
  Eigen::Vector3d ax(gl[0].x(), gl[1].x(), gl[2].x());
  Eigen::Vector3d ay(gl[0].y(), gl[1].y(), gl[2].y());
  Vector c = coeffs(s, 0);
  return Vec2(bb_eval(bb_dir_deriv(c, m_degree, ax), m_degree - 1, lam),
              bb_eval(bb_dir_deriv(c, m_degree, ay), m_degree - 1, lam));
}

Vec2 PiecewisePolynomial::vector_value(int s, const Vec2 & x) const
{
  Eigen::Vector3d lam = macro().lambda(s, x);
  return Vec2(bb_eval(coeffs(s, 0), m_degree, lam), bb_eval(coeffs(s, 1), m_degree, lam));
}

Mat2 PiecewisePolynomial::jacobian(int s, const Vec2 & x) const
{
  const auto & gl = macro().grad_lambda[s];
  Eigen::Vector3d lam = macro().lambda(s, x);
  Eigen::Vector3d ax(gl[0].x(), gl[1].x(), gl[2].x());
  Eigen::Vector3d ay(gl[0].y(), gl[1].y(), gl[2].y());
  Mat2 J;
  for (int comp = 0; comp < 2; ++comp) {
    Vector c = coeffs(s, comp);
    J(comp, 0) = bb_eval(bb_dir_deriv(c, m_degree, ax), m_degree - 1, lam);
    J(comp, 1) = bb_eval(bb_dir_deriv(c, m_degree, ay), m_degree - 1, lam);
  }
  return J;
}

double PiecewisePolynomial::divergence_value(int s, const Vec2 & x) const
{
  Mat2 J = jacobian(s, x);
  return J(0, 0) + J(1, 1);
}

double PiecewisePolynomial::value(const Vec2 & x) const
{
  return value(macro().locate(x), x);
}

Vec2 PiecewisePolynomial::vector_value(const Vec2 & x) const
{
  return vector_value(macro().locate(x), x);
}

double PiecewisePolynomial::sample_sup() const
{
  // 45 = T(9) interior-leaning barycentric grid points per subtriangle
  double sup = 0.0;
  const int n = 8;
  for (int s = 0; s < 6; ++s) {
    const auto & tri = macro().sub[s];
    for (int i = 0; i <= n; ++i) {
      for (int j = 0; j <= n - i; ++j) {
        Eigen::Vector3d lam(double(i) / n, double(j) / n, double(n - i - j) / n);
        Vec2 x = lam(0) * tri[0] + lam(1) * tri[1] + lam(2) * tri[2];
        if (m_rank == Rank::Scalar)
          sup = std::max(sup, std::abs(value(s, x)));
        else
          sup = std::max(sup, vector_value(s, x).norm());
      }
    }
  }
  return sup;
}

double PiecewisePolynomial::boundary_trace_sup() const
{
  double sup = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int comp = 0; comp < n_components(m_rank); ++comp) {
      for (int half = 0; half < 2; ++half) {
        int s = 2 * i + half; // local half ordering along the local edge direction
        // the boundary edge of each fan subtriangle is its (v0, v1) edge
        Vector tr = bb_edge_trace(coeffs(s, comp), m_degree, 2);
        sup = std::max(sup, tr.cwiseAbs().maxCoeff());
      }
    }
  }
  return sup;
}

PiecewisePolynomial & PiecewisePolynomial::operator+=(const PiecewisePolynomial & other)
{
  m_c += other.m_c;
  return *this;
}

PiecewisePolynomial & PiecewisePolynomial::operator-=(const PiecewisePolynomial & other)
{
  m_c -= other.m_c;
  return *this;
}

PiecewisePolynomial & PiecewisePolynomial::operator*=(double a)
{
  m_c *= a;
  return *this;
}

PiecewisePolynomial operator+(PiecewisePolynomial a, const PiecewisePolynomial & b) { return a += b; }
PiecewisePolynomial operator-(PiecewisePolynomial a, const PiecewisePolynomial & b) { return a -= b; }
PiecewisePolynomial operator*(double a, PiecewisePolynomial f) { return f *= a; }

PiecewisePolynomial rot_scalar(const PiecewisePolynomial & q)
{
  const SplitComplex & sc = q.complex();
  int t = q.macro_index();
  int r = q.degree();
  PiecewisePolynomial out(sc, t, std::max(r - 1, 0), Rank::Vector2);
  if (r == 0) return out;
  const MacroSplit & ms = sc.macro(t);
  for (int s = 0; s < 6; ++s) {
    const auto & gl = ms.grad_lambda[s];
    Eigen::Vector3d ax(gl[0].x(), gl[1].x(), gl[2].x());
    Eigen::Vector3d ay(gl[0].y(), gl[1].y(), gl[2].y());
    Vector c = q.coeffs(s, 0);
    out.coeffs(s, 0) = bb_dir_deriv(c, r, ay);
    out.coeffs(s, 1) = -bb_dir_deriv(c, r, ax);
  }
  return out;
}

PiecewisePolynomial divergence(const PiecewisePolynomial & v)
{
  const SplitComplex & sc = v.complex();
  int t = v.macro_index();
  int r = v.degree();
  PiecewisePolynomial out(sc, t, std::max(r - 1, 0), Rank::Scalar);
  if (r == 0) return out;
  const MacroSplit & ms = sc.macro(t);
  for (int s = 0; s < 6; ++s) {
    const auto & gl = ms.grad_lambda[s];
    Eigen::Vector3d ax(gl[0].x(), gl[1].x(), gl[2].x());
    Eigen::Vector3d ay(gl[0].y(), gl[1].y(), gl[2].y());
    out.coeffs(s, 0) = bb_dir_deriv(v.coeffs(s, 0), r, ax) + bb_dir_deriv(v.coeffs(s, 1), r, ay);
  }
  return out;
}

PiecewisePolynomial mu_field(const SplitComplex & sc, int t)
{
  PiecewisePolynomial mu(sc, t, 1, Rank::Scalar);
  for (int s = 0; s < 6; ++s) {
    // vertex 2 of every subtriangle is the interior point z_0
    mu.coeffs(s, 0)(bb_position(1, 0, 0, 1)) = 1.0;
  }
  return mu;
}

PiecewisePolynomial multiply(const PiecewisePolynomial & scalar, const PiecewisePolynomial & f)
{
  if (scalar.rank() != Rank::Scalar) throw Error("multiply: first factor must be scalar");
  int r = scalar.degree() + f.degree();
  PiecewisePolynomial out(f.complex(), f.macro_index(), r, f.rank());
  for (int s = 0; s < 6; ++s)
    for (int comp = 0; comp < n_components(f.rank()); ++comp)
      out.coeffs(s, comp) =
        bb_multiply(scalar.coeffs(s, 0), scalar.degree(), f.coeffs(s, comp), f.degree());
  return out;
}

PiecewisePolynomial raise_degree(const PiecewisePolynomial & f, int new_degree)
{
  if (new_degree < f.degree()) throw Error("raise_degree: target below current degree");
  PiecewisePolynomial out = f;
  for (int r = f.degree(); r < new_degree; ++r) {
    PiecewisePolynomial next(f.complex(), f.macro_index(), r + 1, f.rank());
    for (int s = 0; s < 6; ++s)
      for (int comp = 0; comp < n_components(f.rank()); ++comp)
        next.coeffs(s, comp) = bb_raise(out.coeffs(s, comp), r);
    out = next;
  }
  return out;
}

PiecewisePolynomial pw_from_scalar(const SplitComplex & sc, int t, int r,
                                   const std::function<double(const Vec2 &)> & f)
{
  PiecewisePolynomial out(sc, t, r, Rank::Scalar);
  const MacroSplit & ms = sc.macro(t);
  for (int s = 0; s < 6; ++s) {
    const auto & tri = ms.sub[s];
    out.coeffs(s, 0) = bb_interpolate(r, [&](const Eigen::Vector3d & lam) {
      return f(lam(0) * tri[0] + lam(1) * tri[1] + lam(2) * tri[2]);
    });
  }
  return out;
}

PiecewisePolynomial pw_from_vector(const SplitComplex & sc, int t, int r,
                                   const std::function<Vec2(const Vec2 &)> & f)
{
  PiecewisePolynomial out(sc, t, r, Rank::Vector2);
  const MacroSplit & ms = sc.macro(t);
  for (int s = 0; s < 6; ++s) {
    const auto & tri = ms.sub[s];
    for (int comp = 0; comp < 2; ++comp) {
      out.coeffs(s, comp) = bb_interpolate(r, [&](const Eigen::Vector3d & lam) {
        return f(lam(0) * tri[0] + lam(1) * tri[1] + lam(2) * tri[2])(comp);
      });
    }
  }
  return out;
}

PiecewisePolynomial factor_out_mu(const PiecewisePolynomial & q)
{
  int r = q.degree();
  if (r < 1) throw Error("factor_out_mu: degree must be >= 1");
  double scale = q.coeff_norm();
  if (q.boundary_trace_sup() > 1e-10 * std::max(scale, 1e-300))
    throw Error("factor_out_mu: nonzero boundary trace (sup " +
                std::to_string(q.boundary_trace_sup()) + " vs scale " + std::to_string(scale) + ")");
  PiecewisePolynomial p(q.complex(), q.macro_index(), r - 1, q.rank());
  for (int s = 0; s < 6; ++s)
    for (int comp = 0; comp < n_components(q.rank()); ++comp)
      p.coeffs(s, comp) = bb_divide_by_lambda(q.coeffs(s, comp), r, 2);
  return p;
}

double integrate(const PiecewisePolynomial & f)
{
  if (f.rank() != Rank::Scalar) throw Error("integrate: scalar fields only");
  double sum = 0.0;
  for (int s = 0; s < 6; ++s) sum += integrate_sub(f, s);
  return sum;
}

double integrate_sub(const PiecewisePolynomial & f, int s)
{
  return bb_integral(f.coeffs(s, 0), f.degree(), f.macro().sub_area[s]);
}

double integrate_over_macro(const SplitComplex & sc, int t, int exactness,
                            const std::function<double(int, const Vec2 &)> & f)
{
  const TriangleRule & rule = triangle_rule(exactness);
  const MacroSplit & ms = sc.macro(t);
  double sum = 0.0;
  for (int s = 0; s < 6; ++s) {
    const auto & tri = ms.sub[s];
    double part = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const auto & lam = rule.nodes[q];
      Vec2 x = lam(0) * tri[0] + lam(1) * tri[1] + lam(2) * tri[2];
      part += rule.weights[q] * f(s, x);
    }
    sum += ms.sub_area[s] * part;
  }
  return sum;
}

//------------------------------------------------------------------------------

double EdgePolynomial::eval_arclength(double s) const
{
  if (s <= h0) return bb1_eval(c0, degree, h0 > 0 ? s / h0 : 0.0);
  return bb1_eval(c1, degree, h1 > 0 ? (s - h0) / h1 : 0.0);
}

double EdgePolynomial::eval(int half, double t) const
{
  return bb1_eval(half == 0 ? c0 : c1, degree, t);
}

double EdgePolynomial::coeff_norm() const
{
  double a = c0.size() ? c0.cwiseAbs().maxCoeff() : 0.0;
  double b = c1.size() ? c1.cwiseAbs().maxCoeff() : 0.0;
  return std::max(a, b);
}

namespace {

// BB coefficients (degree r or r-1) of the requested quantity on one
// subtriangle.
Vector quantity_coeffs(const PiecewisePolynomial & f, int s, int i, TraceQuantity which, int & deg)
{
  const MacroSplit & ms = f.macro();
  const auto & gl = ms.grad_lambda[s];
  int r = f.degree();
  auto dir_coeffs = [&](const Vector & c, const Vec2 & d) {
    Eigen::Vector3d a(gl[0].dot(d), gl[1].dot(d), gl[2].dot(d));
    return bb_dir_deriv(c, r, a);
  };
  switch (which) {
  case TraceQuantity::Value:
    deg = r;
    return f.coeffs(s, 0);
  case TraceQuantity::NormalComponent:
    deg = r;
    return ms.normal[i].x() * f.coeffs(s, 0) + ms.normal[i].y() * f.coeffs(s, 1);
  case TraceQuantity::TangentialComponent:
    deg = r;
    return ms.tangent[i].x() * f.coeffs(s, 0) + ms.tangent[i].y() * f.coeffs(s, 1);
  case TraceQuantity::NormalDerivative:
    deg = std::max(r - 1, 0);
    if (r == 0) return Vector::Zero(1);
    return dir_coeffs(f.coeffs(s, 0), ms.normal[i]);
  case TraceQuantity::Divergence:
  default:
    deg = std::max(r - 1, 0);
    if (r == 0) return Vector::Zero(1);
    {
      Eigen::Vector3d ax(gl[0].x(), gl[1].x(), gl[2].x());
      Eigen::Vector3d ay(gl[0].y(), gl[1].y(), gl[2].y());
      return bb_dir_deriv(f.coeffs(s, 0), r, ax) + bb_dir_deriv(f.coeffs(s, 1), r, ay);
    }
  }
}

} // namespace

EdgePolynomial edge_trace(const PiecewisePolynomial & f, int i, TraceQuantity which)
{
  const MacroSplit & ms = f.macro();
  EdgePolynomial out;
  int deg = 0;
  // half 0 in the local direction is hosted by sub[2i], half 1 by sub[2i+1];
  // both have their boundary edge as the (v0, v1) edge (lambda_2 = 0)
  Vector q0 = quantity_coeffs(f, 2 * i, i, which, deg);
  Vector q1 = quantity_coeffs(f, 2 * i + 1, i, which, deg);
  out.degree = deg;
  out.c0 = bb_edge_trace(q0, deg, 2);
  out.c1 = bb_edge_trace(q1, deg, 2);
  out.h0 = (ms.split[i] - ms.corner[(i + 1) % 3]).norm();
  out.h1 = (ms.corner[(i + 2) % 3] - ms.split[i]).norm();
  return out;
}

double jump_value(const PiecewisePolynomial & q, int i)
{
  const MacroSplit & ms = q.macro();
  const Vec2 & z = ms.split[i];
  return q.value(2 * i, z) - q.value(2 * i + 1, z);
}

Vec2 jump_vector(const PiecewisePolynomial & q, int i)
{
  return jump_value(q, i) * q.macro().jump_m1[i];
}

//------------------------------------------------------------------------------

VectorField rot_field(const ScalarField & f)
{
  if (!f.hessian) throw Error("rot_field: the scalar field must carry a hessian");
  VectorField v;
  v.value = [f](const Vec2 & x) {
    Vec2 g = f.grad(x);
    return Vec2(g.y(), -g.x());
  };
  v.jacobian = [f](const Vec2 & x) {
    Mat2 H = f.hessian(x);
    Mat2 J;
    J(0, 0) = H(1, 0);
    J(0, 1) = H(1, 1);
    J(1, 0) = -H(0, 0);
    J(1, 1) = -H(0, 1);
    return J;
  };
  return v;
}

double Poly2::value(const Vec2 & x) const
{
  double sum = 0.0;
  for (int i = 0; i <= degree; ++i)
    for (int j = 0; j <= degree - i; ++j)
      sum += coeff(i, j) * std::pow(x.x(), i) * std::pow(x.y(), j);
  return sum;
}

Vec2 Poly2::grad(const Vec2 & x) const
{
  Vec2 g(0.0, 0.0);
  for (int i = 0; i <= degree; ++i) {
    for (int j = 0; j <= degree - i; ++j) {
      if (i > 0) g.x() += i * coeff(i, j) * std::pow(x.x(), i - 1) * std::pow(x.y(), j);
      if (j > 0) g.y() += j * coeff(i, j) * std::pow(x.x(), i) * std::pow(x.y(), j - 1);
    }
  }
  return g;
}

Mat2 Poly2::hessian(const Vec2 & x) const
{
  Mat2 H = Mat2::Zero();
  for (int i = 0; i <= degree; ++i) {
    for (int j = 0; j <= degree - i; ++j) {
      double c = coeff(i, j);
      if (c == 0.0) continue;
      if (i >= 2) H(0, 0) += i * (i - 1) * c * std::pow(x.x(), i - 2) * std::pow(x.y(), j);
      if (i >= 1 && j >= 1) H(0, 1) += i * j * c * std::pow(x.x(), i - 1) * std::pow(x.y(), j - 1);
      if (j >= 2) H(1, 1) += j * (j - 1) * c * std::pow(x.x(), i) * std::pow(x.y(), j - 2);
    }
  }
  H(1, 0) = H(0, 1);
  return H;
}

ScalarField Poly2::field() const
{
  Poly2 self = *this;
  return {[self](const Vec2 & x) { return self.value(x); },
          [self](const Vec2 & x) { return self.grad(x); },
          [self](const Vec2 & x) { return self.hessian(x); }};
}

Poly2 Poly2::random(int degree, std::mt19937_64 & rng)
{
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Poly2 p;
  p.degree = degree;
  p.coeff = Matrix::Zero(degree + 1, degree + 1);
  for (int i = 0; i <= degree; ++i)
    for (int j = 0; j <= degree - i; ++j) p.coeff(i, j) = unif(rng);
  return p;
}

VectorField vector_field(const Poly2 & u, const Poly2 & v)
{
  VectorField f;
  f.value = [u, v](const Vec2 & x) { return Vec2(u.value(x), v.value(x)); };
  f.jacobian = [u, v](const Vec2 & x) {
    Mat2 J;
    J.row(0) = u.grad(x).transpose();
    J.row(1) = v.grad(x).transpose();
    return J;
  };
  return f;
}

} // namespace psfeec
