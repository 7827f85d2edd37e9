#include <doctest.h>

#include <Eigen/SVD>

#include "fixtures.hpp"
#include "quasiform/sewing.hpp"

using namespace qf;
using fixtures::rel;

namespace {

QuasiformEngine engine(const SchottkyData& s, int N, int M) { return QuasiformEngine::assemble(s, default_kernel(s, N), M); }

cplx on_circle(const SchottkyData& s, int a, double t) {
  const Disk d = disk(s, a);
  return d.center + std::polar(d.radius, t);
}

}  // namespace

TEST_CASE("small rho gives Atilde of order q^N and psi close to Pi_N") {
  // At q below about 1e-16 the fixed points and disk centers agree to roundoff.
  const double q = 1e-12;
  SchottkyData s;
  s.handles.push_back(derive_handle({1.0, 0.2}, {-1.0, 0.1}, {q, 0.0}));
  s.handles.push_back(derive_handle({0.1, 1.5}, {-0.2, -1.4}, {0.0, q}));
  const QuasiformEngine e = engine(s, 2, 8);
  CHECK(e.Atilde().cwiseAbs().maxCoeff() < 1e3 * q * q);
  CHECK((e.resolvent() - MatrixC::Identity(e.dim(), e.dim())).cwiseAbs().maxCoeff() < 1e3 * q * q);
  const cplx x{0.3, 0.4}, y{-0.5, 0.6};
  CHECK(rel(e.psi_coeff(x, y), pi_N(e.kernel(), 0, 0, x, y)) < 1e2 * q);
  CHECK(rel(e.omega_coeff(x, y), M_N(2, x, y)) < 1e2 * q);
  CHECK(std::abs(e.omega_regular_diag(x)) < 1e2 * q);
}

TEST_CASE("Atilde for one handle at N = 1 matches hand-evaluated entries") {
  const SchottkyData s = fixtures::genus1({0.05, 0.02});
  const QuasiformEngine e = engine(s, 1, 4);
  const cplx r = s.sqrt_rho(1), d = s.w(-1) - s.w(1);
  // a = b = 1: (-1)^(m+1) C(m+n+1, m) r^(m+1) r^(n+1) / d^(m+n+2)
  CHECK(rel(e.Atilde()(e.row(1, 0), e.row(1, 0)), -r * r / (d * d)) < 1e-14);
  CHECK(rel(e.Atilde()(e.row(1, 1), e.row(1, 0)), 2.0 * ipow(r, 3) / ipow(d, 3)) < 1e-14);
  CHECK(rel(e.Atilde()(e.row(1, 1), e.row(1, 2)), 4.0 * ipow(r, 5) / ipow(d, 5)) < 1e-14);
  const cplx r2 = s.sqrt_rho(-1), d2 = s.w(1) - s.w(-1);
  CHECK(rel(e.Atilde()(e.row(-1, 2), e.row(-1, 1)), -6.0 * ipow(r2, 5) / ipow(d2, 5)) < 1e-14);
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n) {
      CHECK(e.Atilde()(e.row(1, m), e.row(-1, n)) == cplx{0.0});
      CHECK(e.Atilde()(e.row(-1, m), e.row(1, n)) == cplx{0.0});
    }
}

TEST_CASE("spectral radius is small and power iteration agrees") {
  const QuasiformEngine e = engine(fixtures::genus2(), 2, 16);
  CHECK(e.spectral_radius() < 0.1);
  CHECK(std::abs(power_iteration_radius(e.Atilde()) - e.spectral_radius()) < 1e-6);
}

TEST_CASE("psi agrees with the word-sum oracle at N = 2") {
  const SchottkyData s = fixtures::genus2();
  const QuasiformEngine e = engine(s, 2, 16);
  const auto pts = fixtures::domain_points(s, 10);
  for (int i = 0; i + 1 < 10; i += 2) {
    const PoincareSum ps = poincare_sum_oracle(s, e.kernel(), pts[i], pts[i + 1], 8);
    CHECK(rel(e.psi_coeff(pts[i], pts[i + 1]), ps.value) < 1e-8);
  }
}

TEST_CASE("oracle at K = 0 is Pi_N") {
  const SchottkyData s = fixtures::genus2();
  const KernelConfig cfg = default_kernel(s, 2);
  const cplx x{0.3, 0.4}, y{-0.5, 0.6};
  CHECK(poincare_sum_oracle(s, cfg, x, y, 0).value == pi_N(cfg, 0, 0, x, y));
}

TEST_CASE("Cauchy-kernel shells match Ltilde Atilde^(k-1) R") {
  const SchottkyData s = fixtures::genus2();
  for (int N : {1, 2}) {
    const QuasiformEngine e = engine(s, N, 20);
    const cplx x{0.3, 0.4}, y{-0.5, 0.6};
    const PoincareSum pc = poincare_cauchy_oracle(s, N, x, y, 4);
    for (int k = 1; k <= 4; ++k)
      CHECK(std::abs(e.shell_cauchy(k, x, y) - pc.shells[static_cast<std::size_t>(k)]) <
            1e-9 * std::max(1.0, std::abs(pc.shells[static_cast<std::size_t>(k)])));
    CHECK(rel(e.psi0_coeff(x, y), poincare_cauchy_oracle(s, N, x, y, 8).value) < 1e-8);
  }
}

TEST_CASE("omega agrees with the word sum of M_N and is symmetric") {
  const SchottkyData s = fixtures::genus2();
  for (int N : {1, 2}) {
    const QuasiformEngine e = engine(s, N, 16);
    const auto pts = fixtures::domain_points(s, 8, 3);
    for (int i = 0; i + 1 < 8; i += 2) {
      const PoincareSum po = poincare_omega_oracle(s, N, pts[i], pts[i + 1], 8);
      CHECK(rel(e.omega_coeff(pts[i], pts[i + 1]), po.value) < 1e-8);
      CHECK(rel(e.omega_coeff(pts[i], pts[i + 1]), e.omega_coeff(pts[i + 1], pts[i])) < 1e-9);
    }
  }
}

TEST_CASE("automorphy in x and quasiperiodicity in y") {
  const SchottkyData s = fixtures::genus2();
  for (int N : {1, 2}) {
    const QuasiformEngine e = engine(s, N, 32);
    const cplx x{0.3, 0.4}, y{-0.5, 0.6};
    for (int b = 1; b <= 2; ++b) {
      const MobiusMap g = s.generator(b);
      for (double t : {0.7, 2.0, 4.1}) {
        const cplx z = on_circle(s, b, t);
        const cplx aut = e.psi_coeff(g(z), y) * ipow(g.derivative(z), N) - e.psi_coeff(z, y);
        CHECK(std::abs(aut) < 1e-8);
        const cplx lhs = e.psi_coeff(x, g(z)) * ipow(g.derivative(z), 1 - N) - e.psi_coeff(x, z);
        cplx rhs{0.0};
        for (int l = 0; l < 2 * N - 1; ++l) rhs -= e.theta_coeff(b, l, x) * ipow(z - s.w(b), l);
        CHECK(std::abs(lhs - rhs) < 1e-8);
      }
    }
  }
}

TEST_CASE("psi has a simple pole of residue one on the diagonal") {
  const QuasiformEngine e = engine(fixtures::genus2(), 2, 16);
  const cplx x{0.3, 0.4};
  for (double h : {1e-5, 1e-6}) {
    const cplx y = x + std::polar(h, 0.4);
    CHECK(std::abs((x - y) * e.psi_coeff(x, y) - 1.0) < 1e-4 * h / 1e-5);
  }
}

TEST_CASE("omega_N is the (2N - 1)-th scaled y-derivative of psi") {
  const QuasiformEngine e = engine(fixtures::genus2(), 2, 16);
  const cplx x{0.3, 0.4}, y{-0.5, 0.6};
  CHECK(rel(e.psi_coeff(x, y, 3), e.omega_coeff(x, y)) < 1e-12);
  // Finite-difference check of the first scaled derivative.
  const double h = 1e-3;
  auto d = [&](double s) { return (e.psi_coeff(x, y + s) - e.psi_coeff(x, y - s)) / (2.0 * s); };
  CHECK(rel((4.0 * d(h / 2) - d(h)) / 3.0, e.psi_coeff(x, y, 1)) < 1e-7);
}

TEST_CASE("numerical rank of the Theta forms") {
  for (auto [g, N] : std::vector<std::pair<int, int>>{{2, 2}, {3, 2}, {2, 3}}) {
    const SchottkyData s = g == 2 ? fixtures::genus2() : fixtures::genus3();
    const QuasiformEngine e = engine(s, N, 24);
    const auto pts = fixtures::domain_points(s, 40, 19);
    const int L = 2 * N - 1;
    MatrixC A(40, g * L);
    for (int i = 0; i < 40; ++i)
      for (int a = 1; a <= g; ++a)
        for (int l = 0; l < L; ++l) A(i, (a - 1) * L + l) = e.theta_coeff(a, l, pts[static_cast<std::size_t>(i)]);
    const auto sv = Eigen::JacobiSVD<MatrixC>(A).singularValues();
    const int d = (g - 1) * L;
    CHECK(sv(d - 1) / sv(d) > 1e6);
  }
}

TEST_CASE("flipping a rho^(1/2) branch changes Atilde but no output") {
  const SchottkyData s = fixtures::genus2();
  const QuasiformEngine e = engine(s, 2, 16);
  const cplx x{0.3, 0.4}, y{-0.5, 0.6};
  for (std::size_t p = 0; p < 4; ++p) {
    std::vector<bool> flips(4, false);
    flips[p] = true;
    const QuasiformEngine f = QuasiformEngine::assemble(s, e.kernel(), 16, flips);
    CHECK((f.Atilde() - e.Atilde()).norm() > 1e-6);
    CHECK(std::abs(f.psi_coeff(x, y) - e.psi_coeff(x, y)) < 1e-12);
    CHECK(std::abs(f.omega_coeff(x, y) - e.omega_coeff(x, y)) < 1e-12);
    for (int a = 1; a <= 2; ++a)
      for (int l = 0; l < 3; ++l) CHECK(std::abs(f.theta_coeff(a, l, x) - e.theta_coeff(a, l, x)) < 1e-12);
  }
}

TEST_CASE("doubling the cutoff changes psi geometrically little") {
  const SchottkyData s = fixtures::genus2();
  const cplx x{0.3, 0.4}, y{-0.5, 0.6};
  const cplx p8 = engine(s, 2, 8).psi_coeff(x, y);
  const cplx p16 = engine(s, 2, 16).psi_coeff(x, y);
  const cplx p32 = engine(s, 2, 32).psi_coeff(x, y);
  CHECK(std::abs(p16 - p32) < std::abs(p8 - p16));
  CHECK(std::abs(p16 - p32) < 1e-12);
  const QuasiformEngine ad = assemble_adaptive(s, default_kernel(s, 2), 4, 1e-12);
  CHECK(std::abs(ad.psi_coeff(x, y) - p32) < 1e-11);
}

TEST_CASE("evaluators reduce points into the fundamental domain") {
  const SchottkyData s = fixtures::genus2();
  const QuasiformEngine e = engine(s, 2, 32);
  const cplx x0{0.3, 0.4}, y{-0.5, 0.6};
  const MobiusMap g = s.generator(-1);
  const cplx x = g(x0);  // inside disk 1
  const FormValue v = psi(e, x, y);
  CHECK(v.weights == std::vector<int>{2, -1});
  CHECK(rel(v.value * ipow(g.derivative(x0), 2), e.psi_coeff(x0, y)) < 1e-10);
  const FormValue w = omega(e, x, y);
  CHECK(rel(w.value * ipow(g.derivative(x0), 2), e.omega_coeff(x0, y)) < 1e-10);
}

TEST_CASE("psi_N differs between limit point choices only by a term in y") {
  // omega_N is independent of the limit points.
  const SchottkyData s = fixtures::genus2();
  const KernelConfig other = KernelConfig::make(2, {s.W(2), s.W(-2), s.W(-1)});
  const QuasiformEngine e1 = engine(s, 2, 24);
  const QuasiformEngine e2 = QuasiformEngine::assemble(s, other, 24);
  const cplx x{0.3, 0.4}, y{-0.5, 0.6};
  CHECK(rel(e1.omega_coeff(x, y), e2.omega_coeff(x, y)) < 1e-10);
}

TEST_CASE("Moebius cocycle coefficients expand p(gamma z) (gamma' z)^(1 - N) - p(z)") {
  const SchottkyData s = fixtures::genus2();
  const std::vector<cplx> p = {{0.3, 0.1}, {-0.2, 0.5}, {0.7, -0.4}};
  const int N = 2;
  for (int a = 1; a <= 2; ++a) {
    const auto c = mobius_cocycle_coeffs(p, s.handle(a), N);
    const MobiusMap g = s.generator(a);
    for (double t : {0.3, 1.9}) {
      const cplx z = s.w(a) + std::polar(0.8, t);
      const cplx lhs = poly_taylor(p, 0, g(z)) * ipow(g.derivative(z), 1 - N) - poly_taylor(p, 0, z);
      cplx rhs{0.0};
      for (int l = 0; l < 2 * N - 1; ++l) rhs += c[static_cast<std::size_t>(l)] * ipow(z - s.w(a), l);
      CHECK(rel(lhs, rhs) < 1e-12);
    }
  }
}
