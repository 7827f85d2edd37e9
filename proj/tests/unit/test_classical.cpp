#include <doctest.h>

#include "fixtures.hpp"
#include "quasiform/classical.hpp"

using namespace qf;
using fixtures::rel;

namespace {

QuasiformEngine engine1(const SchottkyData& s, int M = 32) { return QuasiformEngine::assemble(s, default_kernel(s, 1), M); }

}  // namespace

TEST_CASE("circle quadrature basics") {
  const Circle unit{0.0, 1.0};
  CHECK(std::abs(circle_integral([](cplx z) { return 1.0 / z; }, unit) - kTwoPiI) < 1e-14);
  for (int k = -5; k <= 5; ++k) {
    if (k == -1) continue;
    CHECK(std::abs(circle_integral([k](cplx z) { return ipow(z, k); }, unit)) < 1e-13);
  }
  const KernelConfig cfg = default_kernel(fixtures::genus2(), 2);
  const cplx y{0.2, -0.1};
  const cplx res = circle_integral([&](cplx x) { return pi_N(cfg, 0, 0, x, y); }, Circle{y, 0.05}) / kTwoPiI;
  CHECK(std::abs(res - 1.0) < 1e-12);
}

TEST_CASE("circle quadrature reports non-convergence") {
  QuadratureConfig qc;
  qc.circle_nodes = 4;
  qc.max_doublings = 1;
  try {
    circle_integral([](cplx z) { return 1.0 / (z - 0.999); }, Circle{0.0, 1.0}, qc);
    FAIL("expected NonConvergent");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonConvergent);
  }
}

TEST_CASE("segment and routed path quadrature") {
  CHECK(std::abs(segment_integral([](cplx z) { return z * z; }, 0.0, cplx{1.0, 1.0}) - ipow(cplx{1.0, 1.0}, 3) / 3.0) <
        1e-14);
  // Routing around a disk keeps the integral of an entire function.
  const Path p = route_path(cplx{-2.0, 0.0}, cplx{2.0, 0.0}, {Circle{0.0, 0.5}});
  CHECK(p.distance_to(0.0) >= 0.5 - 1e-12);
  CHECK(std::abs(path_integral([](cplx z) { return std::exp(z); }, p) - (std::exp(2.0) - std::exp(-2.0))) < 1e-12);
}

TEST_CASE("path through a pole is rejected") {
  try {
    route_path(cplx{-1.0, 0.0}, cplx{1.0, 0.0}, {}, {cplx{0.0, 0.0}}, 1e-3);
    FAIL("expected PathThroughPole");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::PathThroughPole);
  }
}

TEST_CASE("nu closed form against quadrature, normalization and holomorphy") {
  const SchottkyData s = fixtures::genus2();
  const QuasiformEngine e = engine1(s);
  const cplx x{0.3, 0.4};
  for (int a = 1; a <= 2; ++a) {
    CHECK(nu(e, a, x).weights == std::vector<int>{1});
    CHECK(rel(nu(e, a, x).value, nu_quadrature(e, a, x).value) < 1e-9);
    for (int b = 1; b <= 2; ++b) {
      const cplx per = circle_integral([&](cplx z) { return nu(e, a, z).value; }, alpha_circle(s, -b));
      CHECK(std::abs(per - (a == b ? 1.0 : 0.0)) < 1e-8);
    }
    CHECK(std::abs(circle_integral([&](cplx z) { return nu(e, a, z).value; }, Circle{x, 0.1})) < 1e-12);
  }
}

TEST_CASE("genus one nu is close to the rational third-kind differential") {
  const SchottkyData s = fixtures::genus1({0.001, 0.0});
  const QuasiformEngine e = engine1(s);
  const cplx x{0.3, 0.4};
  const cplx approx = (1.0 / (x - s.W(1)) - 1.0 / (x - s.W(-1))) / kTwoPiI;
  // The sign follows the alpha-period normalization around C_{-1}.
  CHECK(std::abs(std::abs(nu(e, 1, x).value) - std::abs(approx)) < 5e-3 * std::abs(approx));
}

TEST_CASE("period matrix is symmetric, normalized and Moebius invariant") {
  const SchottkyData s = fixtures::genus2();
  const PeriodMatrix P = period_matrix(engine1(s));
  CHECK(P.symmetry_residual < 1e-8);
  CHECK(P.normalization_residual < 1e-8);
  const MobiusMap m = MobiusMap::normalized({1.2, 0.3}, {0.1, -0.2}, {0.0, 0.0}, {1.0, 0.0});
  const PeriodMatrix Q = period_matrix(engine1(mobius_act_params(m, s)));
  CHECK((P.omega - Q.omega).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("genus one period is log q / 2 pi i") {
  const cplx q{0.01, 0.0};
  const PeriodMatrix P = period_matrix(engine1(fixtures::genus1(q)));
  CHECK(std::abs(kTwoPiI * P.omega(0, 0) - std::log(q)) < 1e-8);
}

TEST_CASE("omega has vanishing alpha periods") {
  const SchottkyData s = fixtures::genus2();
  const QuasiformEngine e = engine1(s);
  for (int a = 1; a <= 2; ++a) CHECK(std::abs(omega_alpha_period(e, a, cplx{0.3, 0.4})) < 1e-9);
}

TEST_CASE("omega_diff: closed form, residues, antisymmetry and the rational limit") {
  const SchottkyData s = fixtures::genus2();
  const QuasiformEngine e = engine1(s);
  const cplx x{0.3, 0.4}, y{-0.5, 0.6}, z{0.6, -0.7};
  CHECK(omega_diff(e, y, z, x).weights == std::vector<int>{1, 0, 0});
  CHECK(rel(omega_diff(e, y, z, x).value, omega_diff_quadrature(e, y, z, x).value) < 1e-9);
  CHECK(std::abs(omega_diff(e, y, z, x).value + omega_diff(e, z, y, x).value) < 1e-10);
  auto around = [&](cplx p, cplx other) {
    return circle_integral([&](cplx w) { return omega_diff(e, y, z, w).value; }, residue_circle(s, p, {other})) / kTwoPiI;
  };
  CHECK(std::abs(around(y, z) - 1.0) < 1e-9);
  CHECK(std::abs(around(z, y) + 1.0) < 1e-9);

  const SchottkyData flat = fixtures::genus1({1e-30, 0.0});
  const QuasiformEngine ef = engine1(flat, 8);
  CHECK(rel(omega_diff(ef, y, z, x).value, 1.0 / (x - y) - 1.0 / (x - z)) < 1e-12);
}

TEST_CASE("projective connection") {
  const SchottkyData s = fixtures::genus2();
  const QuasiformEngine e = engine1(s);
  const cplx x{0.3, 0.4};
  const cplx sx = proj_connection(e, x).value;
  auto lim = [&](double h) {
    const cplx y = x + h;
    return 6.0 * (e.omega_coeff(x, y) - 1.0 / ((x - y) * (x - y)));
  };
  // The regular part is O(h), so one first-order Richardson step suffices.
  const cplx extrap = 2.0 * lim(1e-4 / 2.0) - lim(1e-4);
  CHECK(rel(extrap, sx) < 1e-7);
  CHECK(std::abs(circle_integral([&](cplx w) { return proj_connection(e, w).value; }, Circle{x, 0.1})) < 1e-9);
  CHECK(std::abs(proj_connection(engine1(fixtures::genus1({1e-30, 0.0}), 8), x).value) < 1e-12);
}

TEST_CASE("log prime form") {
  const SchottkyData s = fixtures::genus2();
  const QuasiformEngine e = engine1(s);
  const cplx y{-0.5, 0.6}, z{0.6, -0.7};
  CHECK(std::abs(log_prime_form(e, y, z) - log_prime_form_quadrature(e, y, z)) < 1e-9);
  const cplx anti = (log_prime_form(e, y, z) - log_prime_form(e, z, y) - cplx{0.0, kPi}) / kTwoPiI;
  CHECK(std::abs(anti - std::round(anti.real())) < 1e-10);

  const double h = 1e-3;
  auto L = [&](cplx a, cplx b) { return log_prime_form(e, a, b); };
  const cplx mixed = (L(y + h, z + h) - L(y + h, z - h) - L(y - h, z + h) + L(y - h, z - h)) / (4.0 * h * h);
  CHECK(rel(mixed, e.omega_coeff(y, z)) < 1e-6);

  const QuasiformEngine flat = engine1(fixtures::genus1({1e-30, 0.0}), 8);
  CHECK(std::abs(log_prime_form(flat, y, z) - std::log(y - z)) < 1e-12);
}

TEST_CASE("prime form reproduces the integral of omega_{y-z} between two points") {
  const SchottkyData s = fixtures::genus2();
  const QuasiformEngine e = engine1(s);
  const cplx y{-0.5, 0.6}, z{0.6, -0.7}, p{-0.3, -0.2}, q{0.2, 0.9};
  const cplx lhs = segment_integral([&](cplx w) { return omega_diff(e, y, z, w).value; }, p, q);
  const cplx rhs = log_prime_form(e, y, q) + log_prime_form(e, p, z) - log_prime_form(e, q, z) - log_prime_form(e, y, p);
  const cplx k = (lhs - rhs) / kTwoPiI;
  CHECK(std::abs(k - std::round(k.real())) < 1e-9);
}

TEST_CASE("abel integral against quadrature of nu") {
  const SchottkyData s = fixtures::genus2();
  const QuasiformEngine e = engine1(s);
  const cplx y{-0.5, 0.6}, z{0.2, -0.3};
  for (int a = 1; a <= 2; ++a) {
    const cplx q = segment_integral([&](cplx w) { return nu(e, a, w).value; }, z, y);
    // Paths in different homotopy classes differ by alpha periods, which are integers.
    const cplx k = abel_integral(e, a, y, z) - q;
    CHECK(std::abs(k - std::round(k.real())) < 1e-10);
  }
}
