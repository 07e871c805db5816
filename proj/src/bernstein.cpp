#include <psfeec/bernstein.hpp>

#include <map>
#include <mutex>

namespace psfeec {

namespace {

std::mutex g_cache_mutex;

double binomial(int n, int k)
{
  if (k < 0 || k > n) return 0.0;
  double b = 1.0;
  for (int i = 0; i < k; ++i) b = b * (n - i) / (i + 1);
  return b;
}

} // namespace

const std::vector<std::array<int, 3>> & bb_indices(int r)
{
  static std::map<int, std::vector<std::array<int, 3>>> cache;
  std::lock_guard<std::mutex> lock(g_cache_mutex);
  auto it = cache.find(r);
  if (it == cache.end()) {
    std::vector<std::array<int, 3>> idx;
    idx.reserve(bb_dim(r));
    for (int i = 0; i <= r; ++i)
      for (int j = 0; j <= r - i; ++j)
        idx.push_back({i, j, r - i - j});
    it = cache.emplace(r, std::move(idx)).first;
  }
  return it->second;
}

int bb_position(int r, int i, int j, int k)
{
  (void)k;
  return i * (r + 1) - i * (i - 1) / 2 + j;
}

Vector bb_values(int r, const Eigen::Vector3d & lambda)
{
  const auto & idx = bb_indices(r);
  // powers of each barycentric coordinate
  Matrix pw(3, r + 1);
  pw.col(0).setOnes();
  for (int p = 1; p <= r; ++p)
    for (int l = 0; l < 3; ++l) pw(l, p) = pw(l, p - 1) * lambda(l);
  Vector out(idx.size());
  for (std::size_t q = 0; q < idx.size(); ++q) {
    int i = idx[q][0], j = idx[q][1], k = idx[q][2];
    double multi = binomial(r, i) * binomial(r - i, j);
    out(q) = multi * pw(0, i) * pw(1, j) * pw(2, k);
  }
  return out;
}

Matrix bb_lambda_derivatives(int r, const Eigen::Vector3d & lambda)
{
  const auto & idx = bb_indices(r);
  Matrix out = Matrix::Zero(idx.size(), 3);
  if (r == 0) return out;
  Vector lower = bb_values(r - 1, lambda);
  for (std::size_t q = 0; q < idx.size(); ++q) {
    int i = idx[q][0], j = idx[q][1], k = idx[q][2];
    if (i > 0) out(q, 0) = r * lower(bb_position(r - 1, i - 1, j, k));
    if (j > 0) out(q, 1) = r * lower(bb_position(r - 1, i, j - 1, k));
    if (k > 0) out(q, 2) = r * lower(bb_position(r - 1, i, j, k - 1));
  }
  return out;
}

double bb_eval(const Vector & c, int r, const Eigen::Vector3d & lambda)
{
  Vector work = c;
  for (int d = r; d >= 1; --d) {
    // combine level-d coefficients into level d-1
    for (int i = 0; i <= d - 1; ++i) {
      for (int j = 0; j <= d - 1 - i; ++j) {
        int k = d - 1 - i - j;
        double v = lambda(0) * work(bb_position(d, i + 1, j, k)) +
                   lambda(1) * work(bb_position(d, i, j + 1, k)) +
                   lambda(2) * work(bb_position(d, i, j, k + 1));
        work(bb_position(d - 1, i, j, k)) = v;
      }
    }
  }
  return work(0);
}

Vector bb_dir_deriv(const Vector & c, int r, const Eigen::Vector3d & a)
{
  if (r == 0) return Vector::Zero(1);
  const auto & idx = bb_indices(r - 1);
  Vector out(idx.size());
  for (std::size_t q = 0; q < idx.size(); ++q) {
    int i = idx[q][0], j = idx[q][1], k = idx[q][2];
    out(q) = r * (a(0) * c(bb_position(r, i + 1, j, k)) +
                  a(1) * c(bb_position(r, i, j + 1, k)) +
                  a(2) * c(bb_position(r, i, j, k + 1)));
  }
  return out;
}

Vector bb_raise(const Vector & c, int r)
{
  const auto & idx = bb_indices(r + 1);
  Vector out(idx.size());
  for (std::size_t q = 0; q < idx.size(); ++q) {
    int i = idx[q][0], j = idx[q][1], k = idx[q][2];
    double v = 0.0;
    if (i > 0) v += i * c(bb_position(r, i - 1, j, k));
    if (j > 0) v += j * c(bb_position(r, i, j - 1, k));
    if (k > 0) v += k * c(bb_position(r, i, j, k - 1));
    out(q) = v / (r + 1);
  }
  return out;
}

Vector bb_multiply(const Vector & c1, int r1, const Vector & c2, int r2)
{
  const auto & idx1 = bb_indices(r1);
  const auto & idx2 = bb_indices(r2);
  int r = r1 + r2;
  Vector out = Vector::Zero(bb_dim(r));
  double denom = binomial(r, r1);
  for (std::size_t a = 0; a < idx1.size(); ++a) {
    if (c1(a) == 0.0) continue;
    for (std::size_t b = 0; b < idx2.size(); ++b) {
      int i = idx1[a][0] + idx2[b][0];
      int j = idx1[a][1] + idx2[b][1];
      int k = idx1[a][2] + idx2[b][2];
      double scale = binomial(i, idx1[a][0]) * binomial(j, idx1[a][1]) *
                     binomial(k, idx1[a][2]) / denom;
      out(bb_position(r, i, j, k)) += scale * c1(a) * c2(b);
    }
  }
  return out;
}

Vector bb_divide_by_lambda(const Vector & c, int r, int l)
{
  const auto & idx = bb_indices(r - 1);
  Vector out(idx.size());
  for (std::size_t q = 0; q < idx.size(); ++q) {
    std::array<int, 3> up = idx[q];
    up[l] += 1;
    out(q) = c(bb_position(r, up[0], up[1], up[2])) * double(r) / double(idx[q][l] + 1);
  }
  return out;
}

Vector bb_edge_trace(const Vector & c, int r, int l)
{
  Vector out(r + 1);
  for (int j = 0; j <= r; ++j) {
    switch (l) {
    case 0: out(j) = c(bb_position(r, 0, r - j, j)); break;
    case 1: out(j) = c(bb_position(r, r - j, 0, j)); break;
    default: out(j) = c(bb_position(r, r - j, j, 0)); break;
    }
  }
  return out;
}

const Matrix & bb_domain_point_inverse(int r)
{
  static std::map<int, Matrix> cache;
  std::lock_guard<std::mutex> lock(g_cache_mutex);
  auto it = cache.find(r);
  if (it == cache.end()) {
    int n = bb_dim(r);
    std::vector<std::array<int, 3>> idx;
    for (int i = 0; i <= r; ++i)
      for (int j = 0; j <= r - i; ++j) idx.push_back({i, j, r - i - j});
    Matrix V(n, n);
    for (int p = 0; p < n; ++p) {
      Eigen::Vector3d lambda = r == 0
        ? Eigen::Vector3d(1.0 / 3, 1.0 / 3, 1.0 / 3)
        : Eigen::Vector3d(idx[p][0], idx[p][1], idx[p][2]) / double(r);
      // inline bb_values to avoid recursive locking
      Matrix pw(3, r + 1);
      pw.col(0).setOnes();
      for (int q = 1; q <= r; ++q)
        for (int l = 0; l < 3; ++l) pw(l, q) = pw(l, q - 1) * lambda(l);
      for (int q = 0; q < n; ++q) {
        double multi = binomial(r, idx[q][0]) * binomial(r - idx[q][0], idx[q][1]);
        V(p, q) = multi * pw(0, idx[q][0]) * pw(1, idx[q][1]) * pw(2, idx[q][2]);
      }
    }
    it = cache.emplace(r, V.partialPivLu().inverse()).first;
  }
  return it->second;
}

double bb1_eval(const Vector & c, int r, double t)
{
  Vector work = c;
  for (int d = r; d >= 1; --d)
    for (int j = 0; j < d; ++j) work(j) = (1.0 - t) * work(j) + t * work(j + 1);
  return work(0);
}

Vector bb1_values(int r, double t)
{
  Vector out(r + 1);
  for (int j = 0; j <= r; ++j)
    out(j) = binomial(r, j) * std::pow(1.0 - t, r - j) * std::pow(t, j);
  return out;
}

Vector bb1_derivative(const Vector & c, int r)
{
  if (r == 0) return Vector::Zero(1);
  Vector out(r);
  for (int j = 0; j < r; ++j) out(j) = r * (c(j + 1) - c(j));
  return out;
}

const Matrix & bb1_node_inverse(int r)
{
  static std::map<int, Matrix> cache;
  std::lock_guard<std::mutex> lock(g_cache_mutex);
  auto it = cache.find(r);
  if (it == cache.end()) {
    int n = r + 1;
    Matrix V(n, n);
    for (int p = 0; p < n; ++p) {
      double t = r == 0 ? 0.5 : double(p) / r;
      for (int j = 0; j < n; ++j)
        V(p, j) = binomial(r, j) * std::pow(1.0 - t, r - j) * std::pow(t, j);
    }
    it = cache.emplace(r, V.partialPivLu().inverse()).first;
  }
  return it->second;
}

} // namespace psfeec
