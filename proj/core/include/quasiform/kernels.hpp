#pragma once

#include <Eigen/Dense>
#include <vector>

#include "quasiform/mobius.hpp"

namespace qf {

using MatrixC = Eigen::MatrixXcd;
using VectorC = Eigen::VectorXcd;
using RowVectorC = Eigen::RowVectorXcd;

double binomial(int n, int k);
// F_m = C(m + 2N - 1, m)
double F_coeff(int N, int m);

// Weight N and 2N-1 distinct limit points A_j. Holds the Lagrange basis
// p_i(y) = prod_{j != i} (y - A_j)/(A_i - A_j) as coefficient vectors.
struct KernelConfig {
  int N = 1;
  std::vector<cplx> limit_points;
  std::vector<std::vector<cplx>> lagrange;  // lagrange[i][k] = coefficient of y^k in p_i

  static KernelConfig make(int N, std::vector<cplx> limit_points);
  int num_points() const { return 2 * N - 1; }
};

// 2N-1 limit points: generator fixed points W_1, W_-1, W_2, ... followed, when
// those run out, by fixed points of the length-two words gamma_a gamma_b.
std::vector<cplx> default_limit_points(const SchottkyData& s, int N);
KernelConfig default_kernel(const SchottkyData& s, int N);

// Scaled partial derivative pi_N^{(m,n)}(x, y) with the 1/i! convention.
cplx pi_N(const KernelConfig& cfg, int m, int n, cplx x, cplx y);
// n-th scaled derivative at y of the polynomial sum_k c[k] y^k.
cplx poly_taylor(const std::vector<cplx>& c, int n, cplx y);
// p_i^{(n)}(y), scaled Taylor coefficient of the Lagrange polynomial.
cplx lagrange_derivative(const KernelConfig& cfg, int i, int n, cplx y);
// f_ell^{(m)}(x) = -sum_i p_i^{(ell)}(0) (x - A_i)^{-1} differentiated m times (scaled).
cplx f_ell(const KernelConfig& cfg, int ell, cplx x, int m = 0);
cplx e_mn(const KernelConfig& cfg, int m, int n, cplx y);

// M_N(x, y) = (x - y)^{-2N}
cplx M_N(int N, cplx x, cplx y);

// D^{mn}(gamma) = F_m/F_n [y_gamma^m y_gamma'^N]^{(n)}(0); zero when gamma(0) = infinity.
MatrixC D_matrix(const MobiusMap& gamma, int N, int M);

RowVectorC B_vector(cplx x, int N, int M);
VectorC C_vector(cplx y, int N, int M);

}  // namespace qf
