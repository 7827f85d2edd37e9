#pragma once

#include <iosfwd>
#include <vector>

#include "quasiform/kernels.hpp"
#include "quasiform/schottky.hpp"

namespace qf {

// N-form in x written as Ltilde(x) (I - Atilde)^{-1} vec plus poles of order
// l + 1 <= 2N - 1 at the disk centers: sum rat[(a, l)] (x - w_a)^{-l-1}.
struct HoloCombo {
  VectorC vec;
  VectorC rat;
};

// Truncated sewing solution for one surface, weight and mode cutoff. Rows and
// columns of the block matrices are indexed by (a, m) -> index_position(a) * M + m.
//
// The engine splits Pi_N into the Cauchy kernel 1/(x - y) and the limit point
// terms p_j(y)/(x - A_j). The Cauchy part Psi0 has the convergent sewing form
// 1/(x - y) + Ltilde(x) K R(y). Since each A_j sits inside a disk its Taylor
// expansion about the disk centers diverges, so the limit point terms are
// resummed instead: Psi_N = Psi0(x, y) - sum_j p_j(y) Psi0(x, A_j) with
// Psi0(x, A_j) obtained from the y-cocycle of Psi0 (N >= 2). For N = 1 the word
// sum diverges at a limit point and Psi_1 is taken as Psi0.
// Immutable after assembly.
class QuasiformEngine {
 public:
  // flips[index_position(a)] negates the cached branch of rho_a^{1/2}.
  static QuasiformEngine assemble(const SchottkyData& s, const KernelConfig& cfg, int modes,
                                  std::vector<bool> flips = {});

  const SchottkyData& surface() const { return surface_; }
  const KernelConfig& kernel() const { return kernel_; }
  int N() const { return kernel_.N; }
  int modes() const { return modes_; }
  int dim() const { return static_cast<int>(Atilde_.rows()); }
  int row(int a, int m) const { return index_position(a) * modes_ + m; }
  cplx branch(int a) const { return branch_[static_cast<std::size_t>(index_position(a))]; }
  const std::vector<bool>& flips() const { return flips_; }

  const MatrixC& Atilde() const { return Atilde_; }
  // (I - Atilde)^{-1}
  const MatrixC& resolvent() const { return K_; }
  double spectral_radius() const { return spectral_radius_; }
  double rcond() const { return rcond_; }

  RowVectorC Ltilde(cplx x) const;
  // Ltilde(x) (I - Atilde)^{-1}
  RowVectorC left(cplx x) const;
  // j-th scaled y-derivative of R for the Cauchy kernel.
  VectorC R(cplx y, int j = 0) const;
  // R with the full Pi_N Taylor coefficients about w_{-a}, limit point terms
  // included. Only meaningful when no A_j lies inside the disks.
  VectorC R_closed(cplx y) const;
  VectorC Rtilde(cplx y) const;

  cplx eval(const HoloCombo& h, cplx x) const;
  cplx eval(const HoloCombo& h, cplx x, const RowVectorC& left_x) const;

  // Raw coefficients with no reduction to the fundamental domain.
  cplx psi_coeff(cplx x, cplx y, int j = 0) const;
  cplx psi_coeff(const RowVectorC& left_x, cplx x, cplx y, int j = 0) const;
  cplx psi0_coeff(cplx x, cplx y) const;
  cplx omega_coeff(cplx x, cplx y) const;
  cplx theta_coeff(int a, int ell, cplx x) const;
  const HoloCombo& theta_combo(int a, int ell) const;
  // Psi0(x, A_j); empty for N = 1.
  const std::vector<HoloCombo>& limit_point_forms() const { return h_; }
  // Regular part of omega on the diagonal: Ltilde(x) K Rtilde(x).
  cplx omega_regular_diag(cplx x) const;

  // Ltilde(x) Atilde^{k-1} R(y) for the Cauchy kernel and for the closed-form R.
  cplx shell_cauchy(int k, cplx x, cplx y) const;
  cplx shell_closed(int k, cplx x, cplx y) const;

 private:
  friend void save_engine(const QuasiformEngine& e, std::ostream& out);
  friend QuasiformEngine load_engine(std::istream& in);

  HoloCombo cocycle0(int c, cplx y) const;
  HoloCombo psi0_at_limit_point(cplx A) const;

  SchottkyData surface_;
  KernelConfig kernel_;
  int modes_ = 0;
  std::vector<bool> flips_;
  std::vector<cplx> branch_;
  MatrixC Atilde_;
  MatrixC K_;
  double spectral_radius_ = 0.0;
  double rcond_ = 0.0;
  std::vector<HoloCombo> theta0_;  // Cauchy-kernel Theta, index (a-1)*L + l
  std::vector<HoloCombo> theta_;   // Theta_{N,a}^l of Psi_N
  std::vector<HoloCombo> h_;
};

// Doubles the mode cutoff from start until psi at a few probe points changes by
// less than tol, up to max_modes.
QuasiformEngine assemble_adaptive(const SchottkyData& s, const KernelConfig& cfg, int start, double tol,
                                  int max_modes = 128);

// Largest |eigenvalue| estimate by power iteration.
double power_iteration_radius(const MatrixC& A, int iterations = 200);

// Coefficients p_a^l of p(gamma_a z) (gamma_a' z)^{1-N} - p(z) = sum_l p_a^l (z - w_a)^l
// for a polynomial p of degree <= 2N - 2 given by its monomial coefficients.
std::vector<cplx> mobius_cocycle_coeffs(const std::vector<cplx>& p, const HandleParams& h, int N);

// Evaluators with automatic reduction of x (and y for omega) into the
// fundamental domain, applying the weight factor of the reducing word.
FormValue psi(const QuasiformEngine& e, cplx x, cplx y);
// j-th scaled y-derivative of psi.
FormValue psi_dy(const QuasiformEngine& e, cplx x, cplx y, int j);
FormValue omega(const QuasiformEngine& e, cplx x, cplx y);
FormValue theta(const QuasiformEngine& e, int a, int ell, cplx x);

struct PoincareSum {
  cplx value{};
  std::vector<cplx> shells;  // shells[k] = contribution of words of length k
  double tail_estimate = 0.0;
};

// Direct word sum of Pi_N(gamma x, y) (gamma' x)^N over reduced words of length <= K.
PoincareSum poincare_sum_oracle(const SchottkyData& s, const KernelConfig& cfg, cplx x, cplx y, int K);
// Same for the Cauchy kernel (gamma' x)^N / (gamma x - y).
PoincareSum poincare_cauchy_oracle(const SchottkyData& s, int N, cplx x, cplx y, int K);
// Same for M_N, giving omega_N.
PoincareSum poincare_omega_oracle(const SchottkyData& s, int N, cplx x, cplx y, int K);

}  // namespace qf
