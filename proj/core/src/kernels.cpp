#include "quasiform/kernels.hpp"

#include <array>

#include "quasiform/schottky.hpp"

namespace qf {

namespace {

constexpr int kBinomMax = 256;

const std::vector<std::vector<double>>& pascal() {
  static const std::vector<std::vector<double>> table = [] {
    std::vector<std::vector<double>> t(kBinomMax + 1);
    for (int n = 0; n <= kBinomMax; ++n) {
      t[n].assign(static_cast<std::size_t>(n) + 1, 1.0);
      for (int k = 1; k < n; ++k) t[n][k] = t[n - 1][k - 1] + t[n - 1][k];
    }
    return t;
  }();
  return table;
}

using Series = std::vector<cplx>;

Series series_mul(const Series& a, const Series& b, int len) {
  Series out(static_cast<std::size_t>(len), cplx{0.0});
  for (int i = 0; i < len && i < static_cast<int>(a.size()); ++i) {
    if (a[i] == cplx{0.0}) continue;
    for (int j = 0; i + j < len && j < static_cast<int>(b.size()); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

}  // namespace

double binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0.0;
  if (n <= kBinomMax) return pascal()[n][k];
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double F_coeff(int N, int m) { return binomial(m + 2 * N - 1, m); }

KernelConfig KernelConfig::make(int N, std::vector<cplx> limit_points) {
  if (N < 1) throw Error(ErrorKind::InvalidConfig, "weight N must be at least 1");
  if (static_cast<int>(limit_points.size()) != 2 * N - 1) {
    throw Error(ErrorKind::InvalidConfig, "need exactly 2N-1 limit points");
  }
  for (std::size_t i = 0; i < limit_points.size(); ++i)
    for (std::size_t j = i + 1; j < limit_points.size(); ++j)
      if (limit_points[i] == limit_points[j]) throw Error(ErrorKind::InvalidConfig, "limit points must be distinct");

  KernelConfig cfg;
  cfg.N = N;
  cfg.limit_points = std::move(limit_points);
  const int L = cfg.num_points();
  cfg.lagrange.assign(static_cast<std::size_t>(L), {});
  for (int i = 0; i < L; ++i) {
    Series p{cplx{1.0}};
    for (int j = 0; j < L; ++j) {
      if (j == i) continue;
      const cplx denom = cfg.limit_points[i] - cfg.limit_points[j];
      Series factor{-cfg.limit_points[j] / denom, 1.0 / denom};
      p = series_mul(p, factor, static_cast<int>(p.size()) + 1);
    }
    p.resize(static_cast<std::size_t>(L));
    cfg.lagrange[i] = std::move(p);
  }
  return cfg;
}

std::vector<cplx> default_limit_points(const SchottkyData& s, int N) {
  const std::size_t need = static_cast<std::size_t>(2 * N - 1);
  std::vector<cplx> pts;
  auto add = [&](cplx z) {
    if (pts.size() >= need || !is_finite(z)) return;
    for (cplx p : pts)
      if (std::abs(p - z) < 1e-10 * std::max(1.0, std::abs(z))) return;
    pts.push_back(z);
  };
  for (int a : index_set(s.genus())) add(s.W(a));
  for (int len = 2; pts.size() < need && len <= 4; ++len) {
    for_each_reduced_word(s, len, [&](const GroupWord& w) {
      if (pts.size() >= need || !w.cyclically_reduced() || is_proper_power(w.letters)) return;
      const FixedPoints fp = fixed_points(w.map);
      add(fp.attracting);
      add(fp.repelling);
    });
  }
  if (pts.size() < need) {
    throw Error(ErrorKind::InvalidConfig, "not enough distinct limit points for this weight; supply limit_points explicitly");
  }
  return pts;
}

KernelConfig default_kernel(const SchottkyData& s, int N) { return KernelConfig::make(N, default_limit_points(s, N)); }

cplx poly_taylor(const std::vector<cplx>& c, int n, cplx y) {
  cplx acc{0.0};
  // Horner on the n-th scaled derivative.
  for (int k = static_cast<int>(c.size()) - 1; k >= n; --k) acc = acc * y + binomial(k, n) * c[k];
  return acc;
}

cplx lagrange_derivative(const KernelConfig& cfg, int i, int n, cplx y) {
  return poly_taylor(cfg.lagrange[static_cast<std::size_t>(i)], n, y);
}

cplx pi_N(const KernelConfig& cfg, int m, int n, cplx x, cplx y) {
  if (x == y) throw Error(ErrorKind::PoleEvaluation, "pi_N evaluated on the diagonal");
  const double sm = sign_pow(m);
  cplx out = sm * binomial(m + n, n) * ipow(x - y, -1 - m - n);
  for (int i = 0; i < cfg.num_points(); ++i) {
    const cplx dx = x - cfg.limit_points[i];
    if (dx == cplx{0.0}) throw Error(ErrorKind::PoleEvaluation, "pi_N evaluated at a limit point");
    out -= sm * ipow(dx, -1 - m) * lagrange_derivative(cfg, i, n, y);
  }
  return out;
}

cplx f_ell(const KernelConfig& cfg, int ell, cplx x, int m) {
  const double sm = sign_pow(m);
  cplx out{0.0};
  for (int i = 0; i < cfg.num_points(); ++i) {
    const cplx dx = x - cfg.limit_points[i];
    if (dx == cplx{0.0}) throw Error(ErrorKind::PoleEvaluation, "f_ell evaluated at a limit point");
    out -= sm * ipow(dx, -1 - m) * cfg.lagrange[i][static_cast<std::size_t>(ell)];
  }
  return out;
}

cplx e_mn(const KernelConfig& cfg, int m, int n, cplx y) {
  cplx out{0.0};
  for (int ell = n; ell < cfg.num_points(); ++ell) out += binomial(ell, n) * f_ell(cfg, ell, y, m) * ipow(y, ell - n);
  return out;
}

cplx M_N(int N, cplx x, cplx y) {
  if (x == y) throw Error(ErrorKind::PoleEvaluation, "M_N evaluated on the diagonal");
  return ipow(x - y, -2 * N);
}

MatrixC D_matrix(const MobiusMap& gamma, int N, int M) {
  MatrixC D = MatrixC::Zero(M, M);
  if (gamma.d == cplx{0.0}) return D;  // gamma(0) = infinity
  Series inv(static_cast<std::size_t>(M));
  const cplx r = -gamma.c / gamma.d;
  cplx pw = 1.0 / gamma.d;
  for (int k = 0; k < M; ++k) {
    inv[k] = pw;
    pw *= r;
  }
  const Series yg = series_mul(Series{gamma.b, gamma.a}, inv, M);
  const Series yp = series_mul(inv, inv, M);  // unit determinant
  Series Q{cplx{1.0}};
  for (int i = 0; i < N; ++i) Q = series_mul(Q, yp, M);
  Series P{cplx{1.0}};
  for (int m = 0; m < M; ++m) {
    const Series row = series_mul(P, Q, M);
    for (int n = 0; n < M; ++n) D(m, n) = F_coeff(N, m) / F_coeff(N, n) * row[n];
    P = series_mul(P, yg, M);
  }
  return D;
}

RowVectorC B_vector(cplx x, int N, int M) {
  RowVectorC B(M);
  const cplx inv = 1.0 / x;
  cplx pw = ipow(inv, 2 * N);
  for (int n = 0; n < M; ++n) {
    B(n) = pw;
    pw *= inv;
  }
  return B;
}

VectorC C_vector(cplx y, int N, int M) {
  VectorC C(M);
  cplx pw{1.0};
  for (int m = 0; m < M; ++m) {
    C(m) = F_coeff(N, m) * pw;
    pw *= y;
  }
  return C;
}

}  // namespace qf
