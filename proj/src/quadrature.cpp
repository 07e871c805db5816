#include <psfeec/quadrature.hpp>

#include <map>
#include <mutex>

namespace psfeec {

namespace {

// Golub-Welsch: nodes/weights of the n-point Gauss-Legendre rule on [-1,1]
// from the eigendecomposition of the Jacobi matrix.
void gauss_legendre(int n, std::vector<double> & x, std::vector<double> & w)
{
  Matrix J = Matrix::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    double b = k / std::sqrt(4.0 * k * k - 1.0);
    J(k, k - 1) = J(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(J);
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    x[i] = es.eigenvalues()(i);
    double v0 = es.eigenvectors()(0, i);
    w[i] = 2.0 * v0 * v0;
  }
}

SegmentRule make_segment_rule(int exactness)
{
  int n = exactness / 2 + 1; // exact for degree 2n-1 >= exactness
  std::vector<double> x, w;
  gauss_legendre(n, x, w);
  SegmentRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = 0.5 * (x[i] + 1.0);
    rule.weights[i] = 0.5 * w[i];
  }
  return rule;
}

// Collapsed product rule on the reference triangle via the substitution
// x = u, y = v(1-u), Jacobian (1-u): the u-integrand picks up one extra
// degree, so the u-rule is taken one order higher.
TriangleRule make_triangle_rule(int exactness)
{
  const SegmentRule & ru = segment_rule(exactness + 1);
  const SegmentRule & rv = segment_rule(exactness);
  TriangleRule rule;
  rule.nodes.reserve(ru.nodes.size() * rv.nodes.size());
  rule.weights.reserve(ru.nodes.size() * rv.nodes.size());
  for (std::size_t i = 0; i < ru.nodes.size(); ++i) {
    double u = ru.nodes[i];
    for (std::size_t j = 0; j < rv.nodes.size(); ++j) {
      double v = rv.nodes[j];
      double x = u;
      double y = v * (1.0 - u);
      // weight normalized so the weights sum to 1 over the triangle
      rule.nodes.emplace_back(1.0 - x - y, x, y);
      rule.weights.push_back(2.0 * ru.weights[i] * rv.weights[j] * (1.0 - u));
    }
  }
  return rule;
}

std::mutex g_segment_mutex;
std::mutex g_triangle_mutex;

} // namespace

const SegmentRule & segment_rule(int exactness)
{
  if (exactness < 0) exactness = 0;
  if (exactness > kMaxQuadratureExactness + 1)
    throw Error("segment_rule: requested exactness " + std::to_string(exactness) +
                " exceeds the rule table (max " + std::to_string(kMaxQuadratureExactness) + ")");
  static std::map<int, SegmentRule> cache;
  std::lock_guard<std::mutex> lock(g_segment_mutex);
  auto it = cache.find(exactness);
  if (it == cache.end()) it = cache.emplace(exactness, make_segment_rule(exactness)).first;
  return it->second;
}

const TriangleRule & triangle_rule(int exactness)
{
  if (exactness < 0) exactness = 0;
  if (exactness > kMaxQuadratureExactness)
    throw Error("triangle_rule: requested exactness " + std::to_string(exactness) +
                " exceeds the rule table (max " + std::to_string(kMaxQuadratureExactness) + ")");
  static std::map<int, TriangleRule> cache;
  std::lock_guard<std::mutex> lock(g_triangle_mutex);
  auto it = cache.find(exactness);
  if (it == cache.end()) it = cache.emplace(exactness, make_triangle_rule(exactness)).first;
  return it->second;
}

} // namespace psfeec
