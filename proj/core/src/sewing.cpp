#include "quasiform/sewing.hpp"

#include <algorithm>
#include <limits>

namespace qf {

namespace {

// s^{m+1} pi^{(m,j)}(x, y) for the Cauchy kernel, optionally with the limit
// point terms of pi_N. Ratios s/(x - .) keep high modes in range.
cplx scaled_pi(const KernelConfig* cfg, int m, int j, cplx x, cplx y, cplx s) {
  if (x == y) throw Error(ErrorKind::PoleEvaluation, "pi_N evaluated on the diagonal");
  const double sm = sign_pow(m);
  const cplx dxy = x - y;
  cplx out = sm * binomial(m + j, j) * ipow(s / dxy, m + 1) * ipow(dxy, -j);
  if (cfg == nullptr) return out;
  for (int i = 0; i < cfg->num_points(); ++i) {
    const cplx dx = x - cfg->limit_points[i];
    if (dx == cplx{0.0}) throw Error(ErrorKind::PoleEvaluation, "pi_N evaluated at a limit point");
    out -= sm * ipow(s / dx, m + 1) * lagrange_derivative(*cfg, i, j, y);
  }
  return out;
}

int disk_containing(const SchottkyData& s, cplx z) {
  for (int a : index_set(s.genus())) {
    const Disk d = disk(s, a);
    if (std::abs(z - d.center) < d.radius) return a;
  }
  return 0;
}

}  // namespace

std::vector<cplx> mobius_cocycle_coeffs(const std::vector<cplx>& p, const HandleParams& h, int N) {
  const int L = 2 * N - 1;
  if (static_cast<int>(p.size()) > L) throw Error(ErrorKind::InvalidConfig, "polynomial degree exceeds 2N-2");
  std::vector<cplx> out(static_cast<std::size_t>(L));
  const cplx scale = ipow(-h.rho, 1 - N);
  for (int ell = 0; ell < L; ++ell) {
    const int k = 2 * N - 2 - ell;
    out[ell] = poly_taylor(p, k, h.w_minus) * ipow(h.rho, k) * scale - poly_taylor(p, ell, h.w_plus);
  }
  return out;
}

QuasiformEngine QuasiformEngine::assemble(const SchottkyData& s, const KernelConfig& cfg, int modes,
                                          std::vector<bool> flips) {
  const int N = cfg.N;
  if (modes < 2 * N) throw Error(ErrorKind::InvalidConfig, "mode cutoff must be at least 2N");
  const int g = s.genus();
  QuasiformEngine e;
  e.surface_ = s;
  e.kernel_ = cfg;
  e.modes_ = modes;
  flips.resize(static_cast<std::size_t>(2 * g), false);
  e.flips_ = flips;
  const auto idx = index_set(g);
  e.branch_.resize(idx.size());
  for (int a : idx) {
    const auto p = static_cast<std::size_t>(index_position(a));
    e.branch_[p] = flips[p] ? -s.sqrt_rho(a) : s.sqrt_rho(a);
  }

  const int D = 2 * g * modes;
  e.Atilde_ = MatrixC::Zero(D, D);
  for (int a : idx) {
    for (int b : idx) {
      if (a == -b) continue;
      const cplx d = s.w(-a) - s.w(b);
      const cplx ra = e.branch(a) / d;
      const cplx rb = e.branch(b) / d;
      for (int m = 0; m < modes; ++m) {
        const cplx pa = sign_pow(m + N) * ipow(ra, m + 1);
        for (int n = 0; n < modes; ++n) {
          e.Atilde_(e.row(a, m), e.row(b, n)) = pa * binomial(m + n + 2 * N - 1, m) * ipow(rb, n + 2 * N - 1);
        }
      }
    }
  }

  Eigen::PartialPivLU<MatrixC> lu(MatrixC::Identity(D, D) - e.Atilde_);
  e.rcond_ = lu.rcond();
  if (!(e.rcond_ > 1e-13)) throw Error(ErrorKind::SingularSystem, "I - Atilde is numerically singular");
  e.K_ = lu.inverse();
  e.spectral_radius_ = power_iteration_radius(e.Atilde_);

  // Taylor coefficients at w_b of the Cauchy R_c(y). The block c = -b has its
  // pole at w_b and contributes only negative powers.
  const int L = cfg.num_points();
  auto Ahat_col = [&](int b, int k) {
    VectorC col = VectorC::Zero(D);
    for (int c : idx) {
      if (c == -b) continue;
      for (int m = 0; m < modes; ++m)
        col(e.row(c, m)) = sign_pow(N) * scaled_pi(nullptr, m, k, s.w(-c), s.w(b), e.branch(c));
    }
    return col;
  };
  const auto rat_index = [L](int b, int k) { return index_position(b) * L + k; };
  e.theta0_.assign(static_cast<std::size_t>(g * L), {});
  for (int a = 1; a <= g; ++a) {
    for (int ell = 0; ell < L; ++ell) {
      const int k = 2 * N - 2 - ell;
      const cplx c = sign_pow(N) * ipow(s.rho(a), N - 1 - ell);
      HoloCombo t{Ahat_col(a, ell) + c * Ahat_col(-a, k), VectorC::Zero(2 * g * L)};
      t.rat(rat_index(a, ell)) += 1.0;
      t.rat(rat_index(-a, k)) += c;
      e.theta0_[static_cast<std::size_t>((a - 1) * L + ell)] = std::move(t);
    }
  }
  e.theta_ = e.theta0_;
  if (N >= 2) {
    for (int j = 0; j < L; ++j) e.h_.push_back(e.psi0_at_limit_point(cfg.limit_points[j]));
    for (int a = 1; a <= g; ++a) {
      for (int j = 0; j < L; ++j) {
        const auto pc = mobius_cocycle_coeffs(cfg.lagrange[j], s.handle(a), N);
        for (int ell = 0; ell < L; ++ell) {
          auto& t = e.theta_[static_cast<std::size_t>((a - 1) * L + ell)];
          t.vec += pc[ell] * e.h_[j].vec;
          t.rat += pc[ell] * e.h_[j].rat;
        }
      }
    }
  }
  return e;
}

HoloCombo QuasiformEngine::cocycle0(int c, cplx y) const {
  const int N = kernel_.N;
  const int L = kernel_.num_points();
  if (c > 0) {
    HoloCombo out{VectorC::Zero(dim()), VectorC::Zero(2 * surface_.genus() * L)};
    const cplx ya = y - surface_.w(c);
    cplx pw{1.0};
    for (int ell = 0; ell < L; ++ell) {
      const auto& t = theta0_[static_cast<std::size_t>((c - 1) * L + ell)];
      out.vec -= pw * t.vec;
      out.rat -= pw * t.rat;
      pw *= ya;
    }
    return out;
  }
  // Xi[g^{-1}](y) = -Xi[g](g^{-1} y) ((g^{-1})'(y))^{1-N}
  const MobiusMap ginv = surface_.generator(c);
  HoloCombo out = cocycle0(-c, ginv(y));
  const cplx f = -ipow(ginv.derivative(y), 1 - N);
  out.vec *= f;
  out.rat *= f;
  return out;
}

HoloCombo QuasiformEngine::psi0_at_limit_point(cplx A) const {
  const int N = kernel_.N;
  HoloCombo out{VectorC::Zero(dim()), VectorC::Zero(2 * surface_.genus() * kernel_.num_points())};
  // A = gamma_c B with A in disk -c: Psi0(x, A) = gamma_c'(B)^{N-1} (Psi0(x, B) + Xi[gamma_c](B)).
  // Orbits of word fixed points are periodic and are summed in closed form; the
  // map is expanding on the disks, so the orbit of any other point eventually
  // drifts out and is cut off once the weight is negligible.
  struct Visit {
    cplx point;
    cplx weight;
    HoloCombo partial;
  };
  std::vector<Visit> history;
  cplx P{1.0};
  // Roundoff in A grows with the expansion of the orbit map, which is about 1/|q| per step.
  double expansion = 1.0;
  for (int step = 0; step < 5000; ++step) {
    const int d = disk_containing(surface_, A);
    if (d == 0) {
      if (std::abs(P) < 1e-12) return out;
      throw Error(ErrorKind::InvalidConfig, "limit point does not lie inside the disks");
    }
    if (history.size() < 8) history.push_back({A, P, out});
    const int c = -d;
    const MobiusMap gd = surface_.generator(d);
    const cplx B = gd(A);
    expansion *= std::abs(gd.derivative(A));
    P *= ipow(surface_.generator(c).derivative(B), N - 1);
    const HoloCombo xi = cocycle0(c, B);
    out.vec += P * xi.vec;
    out.rat += P * xi.rat;
    if (std::abs(P) < 1e-18) return out;
    A = B;
    for (const Visit& v : history) {
      const double tol = std::max(1e-9, 1e3 * std::numeric_limits<double>::epsilon() * expansion) * std::max(1.0, std::abs(A));
      if (std::abs(A - v.point) > tol) continue;
      const cplx ratio = P / v.weight;
      const cplx scale = 1.0 / (1.0 - ratio);
      out.vec = v.partial.vec + (out.vec - v.partial.vec) * scale;
      out.rat = v.partial.rat + (out.rat - v.partial.rat) * scale;
      return out;
    }
  }
  throw Error(ErrorKind::NonConvergent, "limit point resummation did not converge");
}

RowVectorC QuasiformEngine::Ltilde(cplx x) const {
  const int N = kernel_.N;
  RowVectorC L(dim());
  for (int b : index_set(surface_.genus())) {
    const cplx dx = x - surface_.w(b);
    if (dx == cplx{0.0}) throw Error(ErrorKind::PoleEvaluation, "Ltilde evaluated at a disk center");
    const cplx t = branch(b) / dx;
    cplx v = ipow(t, 2 * N - 1) / dx;
    for (int n = 0; n < modes_; ++n) {
      L(row(b, n)) = v;
      v *= t;
    }
  }
  return L;
}

RowVectorC QuasiformEngine::left(cplx x) const { return Ltilde(x) * K_; }

VectorC QuasiformEngine::R(cplx y, int j) const {
  VectorC r(dim());
  const double sN = sign_pow(kernel_.N);
  for (int a : index_set(surface_.genus()))
    for (int m = 0; m < modes_; ++m) r(row(a, m)) = sN * scaled_pi(nullptr, m, j, surface_.w(-a), y, branch(a));
  return r;
}

VectorC QuasiformEngine::R_closed(cplx y) const {
  VectorC r(dim());
  const double sN = sign_pow(kernel_.N);
  for (int a : index_set(surface_.genus()))
    for (int m = 0; m < modes_; ++m) r(row(a, m)) = sN * scaled_pi(&kernel_, m, 0, surface_.w(-a), y, branch(a));
  return r;
}

VectorC QuasiformEngine::Rtilde(cplx y) const {
  const int N = kernel_.N;
  VectorC r(dim());
  for (int a : index_set(surface_.genus())) {
    const cplx d = surface_.w(-a) - y;
    if (d == cplx{0.0}) throw Error(ErrorKind::PoleEvaluation, "Rtilde evaluated at a disk center");
    const cplx t = branch(a) / d;
    cplx v = sign_pow(N) * t / ipow(d, 2 * N - 1);
    for (int m = 0; m < modes_; ++m) {
      r(row(a, m)) = F_coeff(N, m) * v;
      v *= -t;
    }
  }
  return r;
}

cplx QuasiformEngine::eval(const HoloCombo& h, cplx x) const { return eval(h, x, left(x)); }

cplx QuasiformEngine::eval(const HoloCombo& h, cplx x, const RowVectorC& left_x) const {
  cplx out = (left_x * h.vec)(0);
  const int L = kernel_.num_points();
  for (int b : index_set(surface_.genus())) {
    const cplx inv = 1.0 / (x - surface_.w(b));
    cplx pw = inv;
    for (int k = 0; k < L; ++k) {
      out += h.rat(index_position(b) * L + k) * pw;
      pw *= inv;
    }
  }
  return out;
}

cplx QuasiformEngine::psi_coeff(cplx x, cplx y, int j) const { return psi_coeff(left(x), x, y, j); }

cplx QuasiformEngine::psi_coeff(const RowVectorC& left_x, cplx x, cplx y, int j) const {
  if (x == y) throw Error(ErrorKind::PoleEvaluation, "psi evaluated on the diagonal");
  cplx out = ipow(x - y, -1 - j) + (left_x * R(y, j))(0);
  for (std::size_t i = 0; i < h_.size(); ++i)
    out -= lagrange_derivative(kernel_, static_cast<int>(i), j, y) * eval(h_[i], x, left_x);
  return out;
}

cplx QuasiformEngine::psi0_coeff(cplx x, cplx y) const {
  if (x == y) throw Error(ErrorKind::PoleEvaluation, "psi evaluated on the diagonal");
  return 1.0 / (x - y) + (left(x) * R(y))(0);
}

cplx QuasiformEngine::omega_coeff(cplx x, cplx y) const {
  return M_N(kernel_.N, x, y) + (left(x) * Rtilde(y))(0);
}

cplx QuasiformEngine::omega_regular_diag(cplx x) const { return (left(x) * Rtilde(x))(0); }

const HoloCombo& QuasiformEngine::theta_combo(int a, int ell) const {
  return theta_.at(static_cast<std::size_t>((a - 1) * kernel_.num_points() + ell));
}

cplx QuasiformEngine::theta_coeff(int a, int ell, cplx x) const { return eval(theta_combo(a, ell), x); }

cplx QuasiformEngine::shell_cauchy(int k, cplx x, cplx y) const {
  if (k <= 0) return 1.0 / (x - y);
  RowVectorC v = Ltilde(x);
  for (int i = 1; i < k; ++i) v = v * Atilde_;
  return (v * R(y))(0);
}

cplx QuasiformEngine::shell_closed(int k, cplx x, cplx y) const {
  if (k <= 0) return pi_N(kernel_, 0, 0, x, y);
  RowVectorC v = Ltilde(x);
  for (int i = 1; i < k; ++i) v = v * Atilde_;
  return (v * R_closed(y))(0);
}

QuasiformEngine assemble_adaptive(const SchottkyData& s, const KernelConfig& cfg, int start, double tol,
                                  int max_modes) {
  int M = std::max(start, 2 * cfg.N);
  QuasiformEngine e = QuasiformEngine::assemble(s, cfg, M);
  // Probes just outside the first disks, where truncation error is largest.
  std::vector<std::pair<cplx, cplx>> probes;
  const auto idx = index_set(s.genus());
  for (std::size_t i = 0; i + 1 < idx.size() && probes.size() < 3; ++i) {
    const Disk da = disk(s, idx[i]);
    const Disk db = disk(s, idx[i + 1]);
    probes.emplace_back(da.center + 1.05 * da.radius * std::polar(1.0, 0.3),
                        db.center + 1.05 * db.radius * std::polar(1.0, 2.1));
  }
  auto sample = [&](const QuasiformEngine& eng) {
    std::vector<cplx> v;
    for (auto [x, y] : probes) v.push_back(eng.psi_coeff(x, y));
    return v;
  };
  auto prev = sample(e);
  while (2 * M <= max_modes) {
    QuasiformEngine next = QuasiformEngine::assemble(s, cfg, 2 * M);
    auto cur = sample(next);
    double diff = 0.0;
    for (std::size_t i = 0; i < cur.size(); ++i)
      diff = std::max(diff, std::abs(cur[i] - prev[i]) / std::max(1.0, std::abs(cur[i])));
    e = std::move(next);
    M *= 2;
    if (diff < tol) return e;
    prev = std::move(cur);
  }
  return e;
}

double power_iteration_radius(const MatrixC& A, int iterations) {
  if (A.rows() == 0 || A.norm() == 0.0) return 0.0;
  VectorC v = VectorC::Ones(A.rows()).normalized();
  // Geometric mean of the growth over the second half of the iterations.
  double log_growth = 0.0;
  int counted = 0;
  for (int i = 0; i < iterations; ++i) {
    VectorC w = A * v;
    const double nrm = w.norm();
    if (nrm == 0.0) return 0.0;
    if (i >= iterations / 2) {
      log_growth += std::log(nrm);
      ++counted;
    }
    v = w / nrm;
  }
  return std::exp(log_growth / std::max(1, counted));
}

namespace {

struct Reduced {
  cplx point;
  cplx derivative;
};

Reduced reduce(const SchottkyData& s, cplx z) {
  const Reduction r = reduce_to_fundamental(s, z);
  if (r.word.letters.empty()) return {z, cplx{1.0}};
  return {r.point, r.word.map.derivative(z)};
}

}  // namespace

FormValue psi(const QuasiformEngine& e, cplx x, cplx y) { return psi_dy(e, x, y, 0); }

FormValue psi_dy(const QuasiformEngine& e, cplx x, cplx y, int j) {
  const int N = e.N();
  const Reduced rx = reduce(e.surface(), x);
  if (rx.point == y) throw Error(ErrorKind::PoleEvaluation, "psi evaluated on the diagonal");
  return {e.psi_coeff(rx.point, y, j) * ipow(rx.derivative, N), {N, 1 - N - j}};
}

FormValue omega(const QuasiformEngine& e, cplx x, cplx y) {
  const int N = e.N();
  const Reduced rx = reduce(e.surface(), x);
  const Reduced ry = reduce(e.surface(), y);
  if (rx.point == ry.point) throw Error(ErrorKind::PoleEvaluation, "omega evaluated on the diagonal");
  return {e.omega_coeff(rx.point, ry.point) * ipow(rx.derivative, N) * ipow(ry.derivative, N), {N, N}};
}

FormValue theta(const QuasiformEngine& e, int a, int ell, cplx x) {
  const int N = e.N();
  if (a <= 0 || a > e.surface().genus()) throw Error(ErrorKind::InvalidConfig, "theta needs a positive handle index");
  if (ell < 0 || ell > 2 * N - 2) throw Error(ErrorKind::InvalidConfig, "theta index l out of range");
  const Reduced rx = reduce(e.surface(), x);
  return {e.theta_coeff(a, ell, rx.point) * ipow(rx.derivative, N), {N}};
}

PoincareSum poincare_sum_oracle(const SchottkyData& s, const KernelConfig& cfg, cplx x, cplx y, int K) {
  PoincareSum out;
  out.shells.assign(static_cast<std::size_t>(K) + 1, cplx{0.0});
  const int N = cfg.N;
  for (int k = 0; k <= K; ++k) {
    for_each_reduced_word(s, k, [&](const GroupWord& w) {
      out.shells[k] += pi_N(cfg, 0, 0, w.map(x), y) * ipow(w.map.derivative(x), N);
    });
    out.value += out.shells[k];
  }
  out.tail_estimate = std::abs(out.shells.back());
  return out;
}

PoincareSum poincare_cauchy_oracle(const SchottkyData& s, int N, cplx x, cplx y, int K) {
  PoincareSum out;
  out.shells.assign(static_cast<std::size_t>(K) + 1, cplx{0.0});
  for (int k = 0; k <= K; ++k) {
    for_each_reduced_word(s, k, [&](const GroupWord& w) {
      out.shells[k] += ipow(w.map.derivative(x), N) / (w.map(x) - y);
    });
    out.value += out.shells[k];
  }
  out.tail_estimate = std::abs(out.shells.back());
  return out;
}

PoincareSum poincare_omega_oracle(const SchottkyData& s, int N, cplx x, cplx y, int K) {
  PoincareSum out;
  out.shells.assign(static_cast<std::size_t>(K) + 1, cplx{0.0});
  for (int k = 0; k <= K; ++k) {
    for_each_reduced_word(s, k, [&](const GroupWord& w) {
      out.shells[k] += M_N(N, w.map(x), y) * ipow(w.map.derivative(x), N);
    });
    out.value += out.shells[k];
  }
  out.tail_estimate = std::abs(out.shells.back());
  return out;
}

}  // namespace qf
