#pragma once

#include <vector>

#include "quasiform/sewing.hpp"

namespace qf {

// log det(I - Atilde) of the truncated matrix as sum_i log(1 - lambda_i) over
// the eigenvalues of Atilde. Principal logs are the branch continuous from
// Atilde = 0 while the spectral radius stays below one.
cplx logdet_truncated(const QuasiformEngine& e);

struct ProductDetail {
  cplx value{};
  std::vector<cplx> per_length;  // per_length[k-1] = contribution of classes of word length k
  std::vector<double> max_abs_q;  // largest |q| among classes of each length
  int m_max = 0;
  int classes = 0;
};

// Smallest m_max with |q_max|^{m_max + N} < 1e-14.
int auto_m_max(double q_max, int N);

// sum_{m=0}^{m_max} sum_{gamma_p, |gamma_p| <= max_len} log(1 - q_p^{m+N}).
// m_max <= 0 selects auto_m_max from the largest class multiplier.
ProductDetail logdet_product_detail(const SchottkyData& s, int N, int max_len, int m_max = 0);
cplx logdet_product(const SchottkyData& s, int N, int max_len, int m_max = 0);

// tr Atilde^k for k = 1..kmax.
std::vector<cplx> trace_powers(const MatrixC& A, int kmax);

// sum over cyclically reduced words of length k of q^N / (1 - q).
cplx cr_multiplier_trace(const SchottkyData& s, int N, int k);
// sum over cyclically reduced words gamma_{a_1}...gamma_{a_k} of
// tr D(lambda_{a_1} gamma_{-a_1} ... gamma_{-a_k} lambda_{a_1}^{-1}) at M modes.
cplx cr_D_trace(const SchottkyData& s, int N, int k, int M);

struct DetReport {
  cplx logdet_matrix{};
  cplx logdet_product{};
  int max_len = 0;
  int modes = 0;
  int m_max = 0;
  std::vector<cplx> per_length;
  cplx difference() const { return logdet_matrix - logdet_product; }
};

DetReport determinant_report(const QuasiformEngine& e, int max_len, int m_max = 0);

}  // namespace qf
