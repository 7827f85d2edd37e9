#pragma once

#include "quasiform/quadrature.hpp"
#include "quasiform/sewing.hpp"

namespace qf {

// Classical differentials on a weight-one engine. Closed forms from the sewing
// expansion are the default; the *_quadrature variants integrate along explicit
// contours and serve as independent checks.

// Holomorphic differentials normalized by the alpha-periods: the integral of
// nu_b around C_{-a} is delta_ab. nu_a = (2 pi i)^{-1} times the beta_a integral
// of omega(x, .), which the quasiperiodicity of Psi_1 turns into -Theta_{1,a}^0 / (2 pi i).
FormValue nu(const QuasiformEngine& e, int a, cplx x);
FormValue nu_quadrature(const QuasiformEngine& e, int a, cplx x, const QuadratureConfig& qc = {});

struct PeriodMatrix {
  MatrixC omega;            // Omega_ab = integral of nu_b over beta_a; q_a ~ exp(2 pi i Omega_aa)
  MatrixC normalization;    // integral of nu_b around C_{-a}, should be the identity
  double symmetry_residual = 0.0;
  double normalization_residual = 0.0;
};

PeriodMatrix period_matrix(const QuasiformEngine& e, const QuadratureConfig& qc = {});

// omega_{y-z}(x): integral of omega(x, .) from z to y, weight (1, 0, 0).
// Closed form Psi_1(x, y) - Psi_1(x, z).
FormValue omega_diff(const QuasiformEngine& e, cplx y, cplx z, cplx x);
FormValue omega_diff_quadrature(const QuasiformEngine& e, cplx y, cplx z, cplx x, const QuadratureConfig& qc = {});

// Integral of nu_a from z to y in closed form; the simple poles of Theta at the
// disk centers contribute principal-branch logarithms.
cplx abel_integral(const QuasiformEngine& e, int a, cplx y, cplx z);

// s(x) = 6 Ltilde(x) K Rtilde(x) at weight one.
FormValue proj_connection(const QuasiformEngine& e, cplx x);

// log E(y, z) modulo i pi. log(y - z) plus one half of the integral from y to
// z of the regular part of omega_{y-z}(w), done in closed form.
cplx log_prime_form(const QuasiformEngine& e, cplx y, cplx z);
cplx log_prime_form_quadrature(const QuasiformEngine& e, cplx y, cplx z, const QuadratureConfig& qc = {});

// Contour integral of omega(x, .) around an alpha circle of C_{-a}.
cplx omega_alpha_period(const QuasiformEngine& e, int a, cplx x, const QuadratureConfig& qc = {});

}  // namespace qf
