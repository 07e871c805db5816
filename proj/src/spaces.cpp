#include <psfeec/spaces.hpp>

#include <cmath>
#include <sstream>

namespace psfeec {

Rank family_rank(Family f)
{
  switch (f) {
  case Family::V1:
  case Family::L1:
  case Family::S1:
    return Rank::Vector2;
  default:
    return Rank::Scalar;
  }
}

std::string family_name(Family f, bool ring)
{
  std::string base;
  switch (f) {
  case Family::V0: base = "V0"; break;
  case Family::V1: base = "V1"; break;
  case Family::V2: base = "V2"; break;
  case Family::L0: base = "L0"; break;
  case Family::L1: base = "L1"; break;
  case Family::L2: base = "L2"; break;
  case Family::S0: base = "S0"; break;
  case Family::S1: base = "S1"; break;
  case Family::S2: base = "S2"; break;
  case Family::CalV2: base = "calV2"; break;
  }
  return ring ? base + "o" : base;
}

std::optional<Family> parse_family(const std::string & name)
{
  if (name == "V0") return Family::V0;
  if (name == "V1") return Family::V1;
  if (name == "V2") return Family::V2;
  if (name == "L0") return Family::L0;
  if (name == "L1") return Family::L1;
  if (name == "L2") return Family::L2;
  if (name == "S0") return Family::S0;
  if (name == "S1") return Family::S1;
  if (name == "S2") return Family::S2;
  if (name == "calV2" || name == "CalV2") return Family::CalV2;
  return std::nullopt;
}

PiecewisePolynomial FESpace::field(const Vector & coords) const
{
  return layout().field(basis * coords);
}

PiecewisePolynomial FESpace::column(int k) const
{
  return layout().field(basis.col(k));
}

namespace {

// Chebyshev points strictly inside (0,1)
std::vector<double> chebyshev_points(int n)
{
  std::vector<double> pts(n);
  for (int j = 0; j < n; ++j)
    pts[j] = 0.5 * (1.0 + std::cos((2.0 * j + 1.0) * M_PI / (2.0 * n)));
  return pts;
}

struct ConstraintSet
{
  const CoeffLayout & L;
  std::vector<Vector> rows;

  void add(Vector row)
  {
    double norm = row.norm();
    if (norm > 0) rows.push_back(row / norm);
  }
};

// interior edges of the split: the three [z_{3+i}, z_0] shared by the fan
// pairs, and the three [c_k, z_0] between fans
struct InteriorEdge
{
  Vec2 a, b;
  int s1, s2;
};

std::vector<InteriorEdge> interior_edges(const MacroSplit & ms)
{
  std::vector<InteriorEdge> out;
  for (int i = 0; i < 3; ++i)
    out.push_back({ms.split[i], ms.center, 2 * i, 2 * i + 1});
  for (int k = 0; k < 3; ++k)
    out.push_back({ms.corner[k], ms.center, 2 * ((k + 2) % 3), 2 * ((k + 1) % 3) + 1});
  return out;
}

void add_value_continuity(ConstraintSet & cs, int npts)
{
  auto pts = chebyshev_points(npts);
  for (const auto & e : interior_edges(cs.L.ms())) {
    for (double t : pts) {
      Vec2 x = e.a + t * (e.b - e.a);
      for (int comp = 0; comp < n_components(cs.L.rank); ++comp)
        cs.add(row_point_value(cs.L, e.s1, comp, x) - row_point_value(cs.L, e.s2, comp, x));
    }
  }
}

void add_gradient_continuity(ConstraintSet & cs, int npts)
{
  if (cs.L.degree == 0) return;
  auto pts = chebyshev_points(npts);
  for (const auto & e : interior_edges(cs.L.ms())) {
    for (double t : pts) {
      Vec2 x = e.a + t * (e.b - e.a);
      for (const Vec2 & u : {Vec2(1, 0), Vec2(0, 1)})
        cs.add(row_point_dir_deriv(cs.L, e.s1, 0, x, u) -
               row_point_dir_deriv(cs.L, e.s2, 0, x, u));
    }
  }
}

void add_normal_continuity(ConstraintSet & cs, int npts)
{
  auto pts = chebyshev_points(npts);
  for (const auto & e : interior_edges(cs.L.ms())) {
    Vec2 nu = perp((e.b - e.a).normalized());
    for (double t : pts) {
      Vec2 x = e.a + t * (e.b - e.a);
      cs.add(row_point_vector_dot(cs.L, e.s1, x, nu) - row_point_vector_dot(cs.L, e.s2, x, nu));
    }
  }
}

void add_divergence_continuity(ConstraintSet & cs, int npts)
{
  if (cs.L.degree == 0) return;
  auto pts = chebyshev_points(npts);
  for (const auto & e : interior_edges(cs.L.ms())) {
    for (double t : pts) {
      Vec2 x = e.a + t * (e.b - e.a);
      cs.add(row_point_divergence(cs.L, e.s1, x) - row_point_divergence(cs.L, e.s2, x));
    }
  }
}

void add_split_point_continuity(ConstraintSet & cs)
{
  const MacroSplit & ms = cs.L.ms();
  for (int i = 0; i < 3; ++i)
    cs.add(row_point_value(cs.L, 2 * i, 0, ms.split[i]) -
           row_point_value(cs.L, 2 * i + 1, 0, ms.split[i]));
}

enum class BoundaryCondition { Value, VectorValue, NormalTrace, GradientZero, DivergenceZero };

void add_boundary(ConstraintSet & cs, BoundaryCondition bc, int npts)
{
  const MacroSplit & ms = cs.L.ms();
  auto pts = chebyshev_points(npts);
  for (int i = 0; i < 3; ++i) {
    for (int halfpos = 0; halfpos < 2; ++halfpos) {
      int s = 2 * i + halfpos;
      Vec2 a = halfpos == 0 ? ms.corner[(i + 1) % 3] : ms.split[i];
      Vec2 b = halfpos == 0 ? ms.split[i] : ms.corner[(i + 2) % 3];
      for (double t : pts) {
        Vec2 x = a + t * (b - a);
        switch (bc) {
        case BoundaryCondition::Value:
          cs.add(row_point_value(cs.L, s, 0, x));
          break;
        case BoundaryCondition::VectorValue:
          cs.add(row_point_value(cs.L, s, 0, x));
          cs.add(row_point_value(cs.L, s, 1, x));
          break;
        case BoundaryCondition::NormalTrace:
          cs.add(row_point_vector_dot(cs.L, s, x, ms.normal[i]));
          break;
        case BoundaryCondition::GradientZero:
          if (cs.L.degree > 0) {
            cs.add(row_point_dir_deriv(cs.L, s, 0, x, Vec2(1, 0)));
            cs.add(row_point_dir_deriv(cs.L, s, 0, x, Vec2(0, 1)));
          }
          break;
        case BoundaryCondition::DivergenceZero:
          if (cs.L.degree > 0) cs.add(row_point_divergence(cs.L, s, x));
          break;
        }
      }
    }
  }
}

} // namespace

FESpace build_space(const SplitComplex & sc, int macro, Family family, bool ring, int r,
                    const Tolerances & tol)
{
  if (r < 0) throw Error("build_space: degree must be >= 0");
  FESpace sp;
  sp.family = family;
  sp.ring = ring;
  sp.degree = r;
  sp.sc = &sc;
  sp.macro = macro;

  CoeffLayout L{&sc, macro, r, family_rank(family)};
  ConstraintSet cs{L, {}};
  int npts = r + 1;

  switch (family) {
  case Family::V0:
  case Family::L0:
  case Family::L2:
  case Family::S2:
    add_value_continuity(cs, npts);
    break;
  case Family::S0:
    add_value_continuity(cs, npts);
    add_gradient_continuity(cs, npts);
    break;
  case Family::V1:
    add_normal_continuity(cs, npts);
    break;
  case Family::L1:
    add_value_continuity(cs, npts);
    break;
  case Family::S1:
    add_value_continuity(cs, npts);
    add_divergence_continuity(cs, npts);
    break;
  case Family::V2:
    break;
  case Family::CalV2:
    add_split_point_continuity(cs);
    break;
  }

  if (ring) {
    switch (family) {
    case Family::V0:
    case Family::L0:
      add_boundary(cs, BoundaryCondition::Value, npts);
      break;
    case Family::S0:
      add_boundary(cs, BoundaryCondition::Value, npts);
      add_boundary(cs, BoundaryCondition::GradientZero, npts);
      break;
    case Family::V1:
      add_boundary(cs, BoundaryCondition::NormalTrace, npts);
      break;
    case Family::L1:
      add_boundary(cs, BoundaryCondition::VectorValue, npts);
      break;
    case Family::S1:
      add_boundary(cs, BoundaryCondition::VectorValue, npts);
      add_boundary(cs, BoundaryCondition::DivergenceZero, npts);
      break;
    case Family::V2:
    case Family::CalV2:
      cs.add(row_total_integral(L));
      break;
    case Family::L2:
    case Family::S2:
      add_boundary(cs, BoundaryCondition::Value, npts);
      cs.add(row_total_integral(L));
      break;
    }
  }

  int n = L.size();
  if (cs.rows.empty()) {
    sp.basis = Matrix::Identity(n, n);
    sp.constraint_log = family_name(family, ring) + " r=" + std::to_string(r) +
                        ": unconstrained, dim " + std::to_string(n);
    return sp;
  }

  Matrix C(int(cs.rows.size()), n);
  for (std::size_t k = 0; k < cs.rows.size(); ++k) C.row(int(k)) = cs.rows[k];

  Eigen::BDCSVD<Matrix> svd(C, Eigen::ComputeFullV);
  const Vector & sig = svd.singularValues();
  double smax = sig.size() ? sig(0) : 0.0;
  int rank = 0;
  for (int k = 0; k < sig.size(); ++k) {
    double s = sig(k);
    if (s > tol.rank_band_lo * smax && s < tol.rank_band_hi * smax)
      throw Error("build_space(" + family_name(family, ring) + ", r=" + std::to_string(r) +
                  "): ambiguous rank decision, singular value " + std::to_string(s) +
                  " inside the forbidden band relative to " + std::to_string(smax));
    if (s > tol.rank * smax) ++rank;
  }
  sp.basis = svd.matrixV().rightCols(n - rank);

  std::ostringstream log;
  log << family_name(family, ring) << " r=" << r << ": " << cs.rows.size()
      << " constraint rows, rank " << rank << ", dim " << (n - rank) << ", sigma_max " << smax
      << ", smallest kept " << (rank > 0 ? sig(rank - 1) : 0.0) << ", largest dropped "
      << (rank < sig.size() ? sig(rank) : 0.0);
  sp.constraint_log = log.str();
  return sp;
}

std::optional<long> dimension_formula(Family family, bool ring, int r)
{
  if (r < 0) return std::nullopt;
  long R = r;
  if (!ring) {
    switch (family) {
    case Family::V0:
    case Family::L0:
    case Family::L2:
    case Family::S2:
      return 3 * R * R + 3 * R + 1;
    case Family::L1:
      return 2 * (3 * R * R + 3 * R + 1);
    case Family::V1:
      return 6 * R * R + 12 * R + 6;
    case Family::V2:
      return 3 * R * R + 9 * R + 6;
    case Family::S0:
      return R >= 1 ? std::optional<long>(3 * R * R - 3 * R + 3) : std::nullopt;
    case Family::S1:
      return R >= 1 ? std::optional<long>(6 * R * R + 3) : std::nullopt;
    case Family::CalV2:
      return 3 * (R + 1) * (R + 2) - 3;
    }
  } else {
    switch (family) {
    case Family::S0:
      return R >= 2 ? std::optional<long>(3 * (R - 2) * (R - 3)) : std::nullopt;
    case Family::S1:
      return R >= 1 ? std::optional<long>(6 * (R - 1) * (R - 2)) : std::nullopt;
    case Family::S2:
      return 3 * R * (R - 1);
    case Family::CalV2:
      return 3 * (R + 1) * (R + 2) - 4;
    default:
      return std::nullopt;
    }
  }
  return std::nullopt;
}

Membership check_membership(const PiecewisePolynomial & f, const FESpace & sp, double tol)
{
  if (f.macro_index() != sp.macro || &f.complex() != sp.sc)
    throw Error("check_membership: field lives on a different macro triangle");
  if (f.degree() != sp.degree || f.rank() != sp.rank())
    throw Error("check_membership: degree or rank mismatch");
  Membership m;
  m.coords = sp.basis.transpose() * f.flat();
  double norm = f.flat().norm();
  m.residual = (sp.basis * m.coords - f.flat()).norm();
  m.member = m.residual <= tol * std::max(norm, 1e-300);
  return m;
}

} // namespace psfeec
