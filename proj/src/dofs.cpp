#include <psfeec/dofs.hpp>

#include <cmath>

namespace psfeec {

namespace {

// Legendre polynomial shifted to [0,1]
double shifted_legendre(int k, double t)
{
  double x = 2.0 * t - 1.0;
  if (k == 0) return 1.0;
  double pm1 = 1.0, p = x;
  for (int n = 1; n < k; ++n) {
    double next = ((2.0 * n + 1.0) * x * p - n * pm1) / (n + 1.0);
    pm1 = p;
    p = next;
  }
  return p;
}

} // namespace

Vector psi_polynomial(int r)
{
  if (r < 1) throw Error("psi_polynomial: degree must be >= 1");
  // monomial coefficients of the shifted Legendre polynomials up to degree r
  std::vector<Vector> leg(r + 1);
  leg[0] = Vector::Zero(r + 1);
  leg[0](0) = 1.0;
  leg[1] = Vector::Zero(r + 1);
  leg[1](0) = -1.0;
  leg[1](1) = 2.0;
  for (int n = 1; n < r; ++n) {
    Vector next = Vector::Zero(r + 1);
    // (n+1) L_{n+1} = (2n+1)(2x-1) L_n - n L_{n-1}
    for (int j = 0; j <= r; ++j) {
      double c = leg[n](j);
      if (c != 0.0) {
        if (j + 1 <= r) next(j + 1) += (2.0 * n + 1.0) * 2.0 * c;
        next(j) -= (2.0 * n + 1.0) * c;
      }
      next(j) -= n * leg[n - 1](j);
    }
    leg[n + 1] = next / (n + 1.0);
  }
  // psi is orthogonal to P_{r-2}, hence a combination of L_{r-1} and L_r;
  // the endpoint values L_n(1) = 1 and L_n(0) = (-1)^n pin it down
  double sgn = (r % 2 == 0) ? 1.0 : -1.0;
  Vector psi = 0.5 * sgn * (leg[r] - leg[r - 1]);
  if (std::abs(psi(1)) < 1e-12) throw Error("psi_polynomial: vanishing derivative at 0");
  return psi;
}

W1Space w1_space(double a, double m, double b, int r)
{
  if (!(a < m && m < b)) throw Error("w1_space: need a < m < b");
  if (r < 1) throw Error("w1_space: degree must be >= 1");
  double h0 = m - a, h1 = b - m;
  int n = r + 1;
  Matrix C = Matrix::Zero(2, 2 * n);
  // continuity of value and first derivative at m
  C(0, n - 1) = 1.0;
  C(0, n) = -1.0;
  C(1, n - 1) = r / h0;
  C(1, n - 2) = -r / h0;
  C(1, n + 1) = -r / h1;
  C(1, n) = r / h1;
  Eigen::BDCSVD<Matrix> svd(C, Eigen::ComputeFullV);
  return {a, m, b, r, svd.matrixV().rightCols(2 * n - 2)};
}

W1DofSet edge_c1_dofs(double a, double m, double b, int r, EdgeDofVariant variant)
{
  if (r < 1) throw Error("edge_c1_dofs: degree must be >= 1");
  double h0 = m - a, h1 = b - m;
  int n = r + 1;
  W1DofSet out;
  auto zero_row = [&]() { return Vector::Zero(2 * n); };

  auto moment_rows = [&](int piece, int maxdeg) {
    const SegmentRule & rule = segment_rule(r + maxdeg + 2);
    double h = piece == 0 ? h0 : h1;
    for (int k = 0; k <= maxdeg; ++k) {
      Vector rw = zero_row();
      for (std::size_t g = 0; g < rule.nodes.size(); ++g) {
        double t = rule.nodes[g];
        rw.segment(piece * n, n) += h * rule.weights[g] * shifted_legendre(k, t) * bb1_values(r, t);
      }
      out.rows.push_back(rw);
      out.labels.push_back("moment[" + std::to_string(k) + "] piece " + std::to_string(piece));
    }
  };

  Vector rw = zero_row();
  rw(0) = 1.0;
  out.rows.push_back(rw);
  out.labels.push_back("z(a)");
  rw = zero_row();
  rw(2 * n - 1) = 1.0;
  out.rows.push_back(rw);
  out.labels.push_back("z(b)");

  if (variant == EdgeDofVariant::EndpointDerivatives) {
    if (r >= 2) {
      rw = zero_row();
      rw(0) = -r / h0;
      rw(1) = r / h0;
      out.rows.push_back(rw);
      out.labels.push_back("z'(a)");
      rw = zero_row();
      rw(2 * n - 2) = -r / h1;
      rw(2 * n - 1) = r / h1;
      out.rows.push_back(rw);
      out.labels.push_back("z'(b)");
    }
    if (r >= 3) {
      rw = zero_row();
      rw(n - 1) = 1.0;
      out.rows.push_back(rw);
      out.labels.push_back("z(m)");
      rw = zero_row();
      rw(n - 2) = -r / h0;
      rw(n - 1) = r / h0;
      out.rows.push_back(rw);
      out.labels.push_back("z'(m)");
    }
    if (r >= 4) {
      moment_rows(0, r - 4);
      moment_rows(1, r - 4);
    }
  } else {
    if (r >= 2) {
      moment_rows(0, r - 2);
      moment_rows(1, r - 2);
    }
  }
  return out;
}

//------------------------------------------------------------------------------

Vector LinearFunctional::row(const CoeffLayout & L) const
{
  switch (kind) {
  case DofKind::PointValue:
    return scale * row_point_value(L, sub, comp, point);
  case DofKind::PointDeriv:
    return scale * row_point_dir_deriv(L, sub, comp, point, dir);
  case DofKind::PointVectorDot:
    return scale * row_point_vector_dot(L, sub, point, dir);
  case DofKind::PointDivergence:
    return scale * row_point_divergence(L, sub, point);
  case DofKind::JumpValue:
    return scale *
           Vector(row_point_value(L, sub, comp, point) - row_point_value(L, sub2, comp, point));
  case DofKind::JumpDivergence:
    return scale *
           Vector(row_point_divergence(L, sub, point) - row_point_divergence(L, sub2, point));
  case DofKind::HalfEdgeMoment: {
    const SegmentRule & rule = segment_rule(L.degree + std::max(test_k, 0) + 2);
    Vector p(rule.nodes.size());
    for (std::size_t g = 0; g < rule.nodes.size(); ++g)
      p(g) = shifted_legendre(test_k, rule.nodes[g]);
    return scale * row_half_edge_moment(L, macro_edge, half, equant, dir, p, rule);
  }
  case DofKind::FullEdgeNormalMoment: {
    const SegmentRule & rule = segment_rule(L.degree + 2);
    Vector ones = Vector::Ones(rule.nodes.size());
    Vector r0 = row_half_edge_moment(L, macro_edge, 0, EdgeQuantity::VectorDot, dir, ones, rule);
    Vector r1 = row_half_edge_moment(L, macro_edge, 1, EdgeQuantity::VectorDot, dir, ones, rule);
    return scale * Vector(r0 + r1);
  }
  case DofKind::InteriorMoment:
    return scale *
           row_interior_moment(L, *test_field, pairing, L.degree + test_field->degree() + 2);
  case DofKind::TotalIntegral:
  default:
    return scale * row_total_integral(L);
  }
}

namespace {

double half_edge_quadrature(const SplitComplex & sc, int macro_edge, int half, int test_k,
                            int exactness, const std::function<double(const Vec2 &)> & f)
{
  const BoundaryHalfEdge & he = sc.half_edge(macro_edge, half);
  const SegmentRule & rule = segment_rule(exactness);
  double sum = 0.0;
  for (std::size_t g = 0; g < rule.nodes.size(); ++g) {
    Vec2 x = he.p0 + rule.nodes[g] * (he.p1 - he.p0);
    double p = test_k >= 0 ? shifted_legendre(test_k, rule.nodes[g]) : 1.0;
    sum += he.length * rule.weights[g] * p * f(x);
  }
  return sum;
}

} // namespace

double LinearFunctional::apply(const ScalarField & f, int degree_hint) const
{
  switch (kind) {
  case DofKind::PointValue:
    return scale * f.value(point);
  case DofKind::PointDeriv:
    return scale * f.grad(point).dot(dir);
  case DofKind::JumpValue:
    return 0.0;
  case DofKind::HalfEdgeMoment: {
    int ex = degree_hint + std::max(test_k, 0) + 2;
    if (equant == EdgeQuantity::Value)
      return scale * half_edge_quadrature(*sc, macro_edge, half, test_k, ex,
                                          [&](const Vec2 & x) { return f.value(x); });
    if (equant == EdgeQuantity::NormalDerivative)
      return scale * half_edge_quadrature(*sc, macro_edge, half, test_k, ex,
                                          [&](const Vec2 & x) { return f.grad(x).dot(dir); });
    break;
  }
  case DofKind::InteriorMoment: {
    int ex = degree_hint + test_field->degree() + 2;
    if (pairing == Pairing::ScalarScalar)
      return scale * integrate_over_macro(*sc, macro, ex, [&](int s, const Vec2 & x) {
               return f.value(x) * test_field->value(s, x);
             });
    if (pairing == Pairing::RotRot)
      return scale * integrate_over_macro(*sc, macro, ex, [&](int s, const Vec2 & x) {
               return f.grad(x).dot(test_field->gradient(s, x));
             });
    break;
  }
  case DofKind::TotalIntegral:
    return scale * integrate_over_macro(*sc, macro, degree_hint + 1,
                                        [&](int, const Vec2 & x) { return f.value(x); });
  default:
    break;
  }
  throw Error("LinearFunctional::apply(ScalarField): kind not applicable");
}

double LinearFunctional::apply(const VectorField & f, int degree_hint) const
{
  switch (kind) {
  case DofKind::PointValue:
    return scale * f.value(point)(comp);
  case DofKind::PointVectorDot:
    return scale * f.value(point).dot(dir);
  case DofKind::PointDivergence:
    return scale * f.divergence(point);
  case DofKind::JumpDivergence:
    return 0.0;
  case DofKind::HalfEdgeMoment: {
    int ex = degree_hint + std::max(test_k, 0) + 2;
    if (equant == EdgeQuantity::VectorDot)
      return scale * half_edge_quadrature(*sc, macro_edge, half, test_k, ex,
                                          [&](const Vec2 & x) { return f.value(x).dot(dir); });
    if (equant == EdgeQuantity::Divergence)
      return scale * half_edge_quadrature(*sc, macro_edge, half, test_k, ex,
                                          [&](const Vec2 & x) { return f.divergence(x); });
    break;
  }
  case DofKind::FullEdgeNormalMoment: {
    int ex = degree_hint + 2;
    double m0 = half_edge_quadrature(*sc, macro_edge, 0, -1, ex,
                                     [&](const Vec2 & x) { return f.value(x).dot(dir); });
    double m1 = half_edge_quadrature(*sc, macro_edge, 1, -1, ex,
                                     [&](const Vec2 & x) { return f.value(x).dot(dir); });
    return scale * (m0 + m1);
  }
  case DofKind::InteriorMoment: {
    int ex = degree_hint + test_field->degree() + 2;
    if (pairing == Pairing::VectorVector)
      return scale * integrate_over_macro(*sc, macro, ex, [&](int s, const Vec2 & x) {
               return f.value(x).dot(test_field->vector_value(s, x));
             });
    if (pairing == Pairing::VectorRotScalar)
      return scale * integrate_over_macro(*sc, macro, ex, [&](int s, const Vec2 & x) {
               Vec2 g = test_field->gradient(s, x);
               return f.value(x).dot(Vec2(g.y(), -g.x()));
             });
    if (pairing == Pairing::DivScalar)
      return scale * integrate_over_macro(*sc, macro, ex, [&](int s, const Vec2 & x) {
               return f.divergence(x) * test_field->value(s, x);
             });
    break;
  }
  default:
    break;
  }
  throw Error("LinearFunctional::apply(VectorField): kind not applicable");
}

double LinearFunctional::apply(const PiecewisePolynomial & f) const
{
  CoeffLayout L{&f.complex(), f.macro_index(), f.degree(), f.rank()};
  return row(L).dot(f.flat());
}

Vector DofSet::apply(const ScalarField & f, int degree_hint) const
{
  Vector out(size());
  for (int j = 0; j < size(); ++j) out(j) = dofs[j].apply(f, degree_hint);
  return out;
}

Vector DofSet::apply(const VectorField & f, int degree_hint) const
{
  Vector out(size());
  for (int j = 0; j < size(); ++j) out(j) = dofs[j].apply(f, degree_hint);
  return out;
}

Vector DofSet::apply(const PiecewisePolynomial & f) const
{
  Vector out(size());
  for (int j = 0; j < size(); ++j) out(j) = dofs[j].apply(f);
  return out;
}

//------------------------------------------------------------------------------

namespace {

// payload encoding for half-edge moments: kind block + frame + Legendre index
int edge_payload(int kindcode, int frame, int k) { return kindcode * 1000 + frame * 100 + k; }

struct DofBuilder
{
  const SplitComplex & sc;
  int macro;
  DofSet & out;

  const MacroSplit & ms() const { return sc.macro(macro); }

  LinearFunctional base(DofKind kind)
  {
    LinearFunctional phi;
    phi.kind = kind;
    phi.sc = &sc;
    phi.macro = macro;
    return phi;
  }

  // subtriangle having corner l as a vertex
  int corner_sub(int l) const { return 2 * ((l + 2) % 3); }

  void add(LinearFunctional phi, std::string label)
  {
    phi.label = std::move(label);
    out.dofs.push_back(std::move(phi));
  }

  void point_value(int l, int comp_)
  {
    LinearFunctional phi = base(DofKind::PointValue);
    phi.sub = corner_sub(l);
    phi.comp = comp_;
    phi.point = ms().corner[l];
    phi.anchor = {GlobalAnchor::Kind::Vertex, ms().corner_ids[l], comp_};
    add(phi, "value[" + std::to_string(comp_) + "](z" + std::to_string(l + 1) + ")");
  }

  void vertex_gradient(int l)
  {
    for (int d = 0; d < 2; ++d) {
      LinearFunctional phi = base(DofKind::PointDeriv);
      phi.sub = corner_sub(l);
      phi.point = ms().corner[l];
      phi.dir = d == 0 ? Vec2(1, 0) : Vec2(0, 1);
      phi.anchor = {GlobalAnchor::Kind::Vertex, ms().corner_ids[l], 1 + d};
      add(phi, std::string("grad_") + (d == 0 ? "x" : "y") + "(z" + std::to_string(l + 1) + ")");
    }
  }

  void vertex_divergence(int l)
  {
    LinearFunctional phi = base(DofKind::PointDivergence);
    phi.sub = corner_sub(l);
    phi.point = ms().corner[l];
    phi.anchor = {GlobalAnchor::Kind::Vertex, ms().corner_ids[l], 2};
    add(phi, "div(z" + std::to_string(l + 1) + ")");
  }

  void split_value(int i, int payload)
  {
    LinearFunctional phi = base(DofKind::PointValue);
    phi.sub = 2 * i;
    phi.point = ms().split[i];
    phi.anchor = {GlobalAnchor::Kind::SplitPoint, ms().edge_ids[i], payload};
    add(phi, "value(z" + std::to_string(4 + i) + ")");
  }

  void split_tangential_deriv(int i, int payload)
  {
    LinearFunctional phi = base(DofKind::PointDeriv);
    phi.sub = 2 * i;
    phi.point = ms().split[i];
    phi.dir = sc.canonical_tangent(ms().edge_ids[i]);
    phi.anchor = {GlobalAnchor::Kind::SplitPoint, ms().edge_ids[i], payload};
    add(phi, "d_t(z" + std::to_string(4 + i) + ")");
  }

  void split_normal_component(int i, int payload)
  {
    LinearFunctional phi = base(DofKind::PointVectorDot);
    phi.sub = 2 * i;
    phi.point = ms().split[i];
    phi.dir = sc.canonical_normal(ms().edge_ids[i]);
    phi.anchor = {GlobalAnchor::Kind::SplitPoint, ms().edge_ids[i], payload};
    add(phi, "v.n(z" + std::to_string(4 + i) + ")");
  }

  void split_divergence(int i, int payload)
  {
    LinearFunctional phi = base(DofKind::PointDivergence);
    phi.sub = 2 * i;
    phi.point = ms().split[i];
    phi.anchor = {GlobalAnchor::Kind::SplitPoint, ms().edge_ids[i], payload};
    add(phi, "div(z" + std::to_string(4 + i) + ")");
  }

  void jump(int i, DofKind kind, int payload)
  {
    LinearFunctional phi = base(kind);
    phi.sub = 2 * i;
    phi.sub2 = 2 * i + 1;
    phi.point = ms().split[i];
    phi.scale = ms().jump_sign[i];
    phi.anchor = {GlobalAnchor::Kind::SplitPoint, ms().edge_ids[i], payload};
    add(phi, std::string(kind == DofKind::JumpValue ? "jump" : "jump_div") + "(z" +
               std::to_string(4 + i) + ")");
  }

  void half_edge_moments(int i, EdgeQuantity quant, int frame, int maxdeg, int kindcode)
  {
    if (maxdeg < 0) return;
    int e = ms().edge_ids[i];
    Vec2 f = frame == 0 ? sc.canonical_tangent(e) : sc.canonical_normal(e);
    for (int half = 0; half < 2; ++half) {
      for (int k = 0; k <= maxdeg; ++k) {
        LinearFunctional phi = base(DofKind::HalfEdgeMoment);
        phi.macro_edge = e;
        phi.half = half;
        phi.equant = quant;
        phi.dir = f;
        phi.test_k = k;
        phi.anchor = {GlobalAnchor::Kind::HalfEdge, 2 * e + half, edge_payload(kindcode, frame, k)};
        add(phi, "edge" + std::to_string(i) + "/" + std::to_string(half) + " moment[" +
                   std::to_string(k) + "] code " + std::to_string(kindcode * 10 + frame));
      }
    }
  }

  void full_edge_normal_moment(int i)
  {
    int e = ms().edge_ids[i];
    LinearFunctional phi = base(DofKind::FullEdgeNormalMoment);
    phi.macro_edge = e;
    phi.dir = sc.canonical_normal(e);
    phi.anchor = {GlobalAnchor::Kind::FullEdge, e, 0};
    add(phi, "int_e v.n (edge " + std::to_string(i) + ")");
  }

  void interior_moments(const FESpace & test_space, Pairing pairing, int block)
  {
    for (int k = 0; k < test_space.dim(); ++k) {
      LinearFunctional phi = base(DofKind::InteriorMoment);
      phi.test_field = std::make_shared<PiecewisePolynomial>(test_space.column(k));
      phi.pairing = pairing;
      phi.anchor = {GlobalAnchor::Kind::Interior, macro, block * 10000 + k};
      add(phi, "interior[" + std::to_string(block) + "," + std::to_string(k) + "]");
    }
  }

  void total_integral()
  {
    LinearFunctional phi = base(DofKind::TotalIntegral);
    phi.anchor = {GlobalAnchor::Kind::Interior, macro, 0};
    add(phi, "int_T");
  }
};

void require_dim(const FESpace & sp, long expected, const char * what)
{
  if (sp.dim() != expected)
    throw Error(std::string("build_dofs: interior test space ") + what + " has dimension " +
                std::to_string(sp.dim()) + " but the display annotates " +
                std::to_string(expected) + "; mismatch reported, not patched");
}

} // namespace

long dof_count_formula(Family family, int r)
{
  long R = r;
  switch (family) {
  case Family::S0:
    return 3 * R * R - 3 * R + 3;
  case Family::L1:
    return 6 * R * R + 6 * R + 2;
  case Family::V2:
    return 3 * (R + 1) * (R + 2);
  case Family::S1:
    return 6 * R * R + 3;
  case Family::L2:
    return 3 * R * R + 3 * R + 1;
  default:
    throw Error("dof_count_formula: no DOF display for family " + family_name(family));
  }
}

DofSet build_dofs(const SplitComplex & sc, int macro, Family family, int r)
{
  DofSet ds;
  ds.family = family;
  ds.degree = r;
  ds.sc = &sc;
  ds.macro = macro;
  DofBuilder B{sc, macro, ds};

  switch (family) {
  case Family::S0: {
    if (r < 2) throw Error("build_dofs(S0): degree must be >= 2");
    for (int l = 0; l < 3; ++l) {
      B.point_value(l, 0);
      B.vertex_gradient(l);
    }
    if (r >= 3)
      for (int i = 0; i < 3; ++i) {
        B.split_value(i, 0);
        B.split_tangential_deriv(i, 1);
      }
    for (int i = 0; i < 3; ++i) {
      B.half_edge_moments(i, EdgeQuantity::NormalDerivative, 1, r - 3, 1);
      B.half_edge_moments(i, EdgeQuantity::Value, 0, r - 4, 0);
    }
    FESpace ring = build_space(sc, macro, Family::S0, true, r);
    require_dim(ring, 3l * (r - 2) * (r - 3), "ring S0_r");
    B.interior_moments(ring, Pairing::RotRot, 4);
    break;
  }
  case Family::L1: {
    if (r < 1) throw Error("build_dofs(L1): degree must be >= 1");
    for (int l = 0; l < 3; ++l)
      for (int comp = 0; comp < 2; ++comp) B.point_value(l, comp);
    if (r == 1)
      for (int i = 0; i < 3; ++i) B.full_edge_normal_moment(i);
    for (int i = 0; i < 3; ++i) B.jump(i, DofKind::JumpDivergence, 0);
    if (r >= 2) {
      for (int i = 0; i < 3; ++i) B.split_normal_component(i, 1);
      for (int i = 0; i < 3; ++i) {
        B.half_edge_moments(i, EdgeQuantity::VectorDot, 0, r - 2, 2);
        B.half_edge_moments(i, EdgeQuantity::VectorDot, 1, r - 2, 2);
      }
    }
    FESpace s0ring = build_space(sc, macro, Family::S0, true, r + 1);
    require_dim(s0ring, 3l * (r - 1) * (r - 2), "ring S0_{r+1}");
    B.interior_moments(s0ring, Pairing::VectorRotScalar, 4);
    FESpace cv = build_space(sc, macro, Family::CalV2, true, r - 1);
    require_dim(cv, 3l * r * (r + 1) - 4, "ring calV2_{r-1}");
    B.interior_moments(cv, Pairing::DivScalar, 5);
    break;
  }
  case Family::V2: {
    if (r < 0) throw Error("build_dofs(V2): degree must be >= 0");
    for (int i = 0; i < 3; ++i) B.jump(i, DofKind::JumpValue, 0);
    B.total_integral();
    FESpace cv = build_space(sc, macro, Family::CalV2, true, r);
    require_dim(cv, 3l * (r + 1) * (r + 2) - 4, "ring calV2_r");
    B.interior_moments(cv, Pairing::ScalarScalar, 4);
    break;
  }
  case Family::S1: {
    if (r < 1) throw Error("build_dofs(S1): degree must be >= 1");
    if (r == 1) {
      // the divergence of a piecewise linear member is a single constant
      // already determined by the edge fluxes, so the vertex divergence
      // values are dropped to keep the set square (count 6r^2+3 = 9)
      for (int l = 0; l < 3; ++l)
        for (int comp = 0; comp < 2; ++comp) B.point_value(l, comp);
      for (int i = 0; i < 3; ++i) B.full_edge_normal_moment(i);
      break;
    }
    for (int l = 0; l < 3; ++l) {
      for (int comp = 0; comp < 2; ++comp) B.point_value(l, comp);
      B.vertex_divergence(l);
    }
    for (int i = 0; i < 3; ++i) {
      B.split_normal_component(i, 0);
      B.split_divergence(i, 1);
    }
    for (int i = 0; i < 3; ++i) {
      B.half_edge_moments(i, EdgeQuantity::VectorDot, 0, r - 2, 2);
      B.half_edge_moments(i, EdgeQuantity::VectorDot, 1, r - 2, 2);
      B.half_edge_moments(i, EdgeQuantity::Divergence, 0, r - 3, 3);
    }
    FESpace s0ring = build_space(sc, macro, Family::S0, true, r + 1);
    require_dim(s0ring, 3l * (r - 1) * (r - 2), "ring S0_{r+1}");
    B.interior_moments(s0ring, Pairing::VectorRotScalar, 4);
    FESpace l2ring = build_space(sc, macro, Family::L2, true, r - 1);
    require_dim(l2ring, 3l * (r - 1) * (r - 2), "ring L2_{r-1}");
    B.interior_moments(l2ring, Pairing::DivScalar, 5);
    break;
  }
  case Family::L2: {
    if (r < 1) throw Error("build_dofs(L2): degree must be >= 1");
    for (int l = 0; l < 3; ++l) B.point_value(l, 0);
    for (int i = 0; i < 3; ++i) B.split_value(i, 0);
    for (int i = 0; i < 3; ++i) B.half_edge_moments(i, EdgeQuantity::Value, 0, r - 2, 0);
    B.total_integral();
    FESpace l2ring = build_space(sc, macro, Family::L2, true, r);
    require_dim(l2ring, 3l * r * (r - 1), "ring L2_r");
    B.interior_moments(l2ring, Pairing::ScalarScalar, 4);
    break;
  }
  default:
    throw Error("build_dofs: no DOF display for family " + family_name(family));
  }

  long expected = dof_count_formula(family, r);
  if (ds.size() != expected)
    throw Error("build_dofs(" + family_name(family) + ", r=" + std::to_string(r) +
                "): display count " + std::to_string(ds.size()) + " does not match the annotated total " +
                std::to_string(expected));
  return ds;
}

//------------------------------------------------------------------------------

Matrix dof_matrix(const DofSet & ds, const FESpace & sp)
{
  if (ds.sc != sp.sc || ds.macro != sp.macro)
    throw Error("dof_matrix: DOF set and space live on different macro triangles");
  if (ds.degree != sp.degree || family_rank(ds.family) != sp.rank())
    throw Error("dof_matrix: degree or rank mismatch");
  CoeffLayout L = sp.layout();
  Matrix M(ds.size(), sp.dim());
  for (int j = 0; j < ds.size(); ++j) M.row(j) = (ds.dofs[j].row(L).transpose() * sp.basis);
  return M;
}

UnisolvenceReport unisolvence_report(const FESpace & sp, const DofSet & ds, double tol)
{
  if (ds.size() != sp.dim())
    throw Error("unisolvence_report: " + std::to_string(ds.size()) + " functionals vs dimension " +
                std::to_string(sp.dim()));
  Matrix M = dof_matrix(ds, sp);
  Eigen::BDCSVD<Matrix> svd(M);
  UnisolvenceReport rep;
  rep.sigma_max = svd.singularValues()(0);
  rep.sigma_min = svd.singularValues()(svd.singularValues().size() - 1);
  rep.condition = rep.sigma_min > 0 ? rep.sigma_max / rep.sigma_min
                                    : std::numeric_limits<double>::infinity();
  rep.pass = rep.sigma_min > tol * rep.sigma_max;
  return rep;
}

Projector::Projector(FESpace space, DofSet dofs) : m_space(std::move(space)), m_dofs(std::move(dofs))
{
  UnisolvenceReport rep = unisolvence_report(m_space, m_dofs);
  if (!rep.pass)
    throw Error("Projector: DOF set is not unisolvent on " +
                family_name(m_space.family, m_space.ring) + " r=" + std::to_string(m_space.degree) +
                " (sigma_min/sigma_max = " + std::to_string(rep.sigma_min / rep.sigma_max) + ")");
  Matrix M = dof_matrix(m_dofs, m_space);
  m_dual = m_space.basis * M.partialPivLu().inverse();
}

PiecewisePolynomial Projector::from_dof_values(const Vector & values) const
{
  return m_space.layout().field(m_dual * values);
}

PiecewisePolynomial Projector::project(const ScalarField & f, int degree_hint) const
{
  return from_dof_values(m_dofs.apply(f, degree_hint));
}

PiecewisePolynomial Projector::project(const VectorField & f, int degree_hint) const
{
  return from_dof_values(m_dofs.apply(f, degree_hint));
}

PiecewisePolynomial Projector::project(const PiecewisePolynomial & f) const
{
  return from_dof_values(m_dofs.apply(f));
}

Projector make_chain_projector(const SplitComplex & sc, int macro, ProjectionChain chain, int r)
{
  switch (chain) {
  case ProjectionChain::Pi0:
    return Projector(build_space(sc, macro, Family::S0, false, r), build_dofs(sc, macro, Family::S0, r));
  case ProjectionChain::Pi1:
    return Projector(build_space(sc, macro, Family::L1, false, r - 1),
                     build_dofs(sc, macro, Family::L1, r - 1));
  case ProjectionChain::Pi2:
    return Projector(build_space(sc, macro, Family::V2, false, r - 2),
                     build_dofs(sc, macro, Family::V2, r - 2));
  case ProjectionChain::Varpi1:
    return Projector(build_space(sc, macro, Family::S1, false, r - 1),
                     build_dofs(sc, macro, Family::S1, r - 1));
  case ProjectionChain::Varpi2:
  default: {
    if (r - 2 >= 1)
      return Projector(build_space(sc, macro, Family::L2, false, r - 2),
                       build_dofs(sc, macro, Family::L2, r - 2));
    // degree 0: project onto the constants through the mean value
    DofSet ds;
    ds.family = Family::L2;
    ds.degree = 0;
    ds.sc = &sc;
    ds.macro = macro;
    LinearFunctional phi;
    phi.kind = DofKind::TotalIntegral;
    phi.sc = &sc;
    phi.macro = macro;
    phi.anchor = {GlobalAnchor::Kind::Interior, macro, 0};
    phi.label = "int_T";
    ds.dofs.push_back(phi);
    return Projector(build_space(sc, macro, Family::L2, false, 0), ds);
  }
  }
}

} // namespace psfeec
