#include "quasiform/zeta.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>

namespace qf {

cplx logdet_truncated(const QuasiformEngine& e) {
  Eigen::ComplexEigenSolver<MatrixC> solver(e.Atilde(), false);
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::SingularSystem, "eigenvalue solve of Atilde failed");
  cplx sum{0.0};
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const cplx f = 1.0 - solver.eigenvalues()(i);
    if (f == cplx{0.0}) throw Error(ErrorKind::SingularSystem, "I - Atilde is singular");
    sum += std::log(f);
  }
  return sum;
}

int auto_m_max(double q_max, int N) {
  if (!(q_max > 0.0)) return 1;
  if (q_max >= 1.0) throw Error(ErrorKind::MultiplierOutOfRange, "class multiplier with |q| >= 1");
  const double need = std::log(1e-14) / std::log(q_max) - N;
  return std::max(1, static_cast<int>(std::ceil(need)));
}

ProductDetail logdet_product_detail(const SchottkyData& s, int N, int max_len, int m_max) {
  if (max_len < 1) throw Error(ErrorKind::InvalidConfig, "max_len must be at least 1");
  const auto reps = primitive_class_reps(s, max_len);
  std::vector<cplx> qs;
  qs.reserve(reps.size());
  double qmax = 0.0;
  for (const auto& w : reps) {
    const cplx q = multiplier(w.map);
    if (!(std::abs(q) < 1.0)) throw Error(ErrorKind::MultiplierOutOfRange, "class multiplier with |q| >= 1");
    qs.push_back(q);
    qmax = std::max(qmax, std::abs(q));
  }
  ProductDetail out;
  out.m_max = m_max > 0 ? m_max : auto_m_max(qmax, N);
  out.classes = static_cast<int>(reps.size());
  out.per_length.assign(static_cast<std::size_t>(max_len), cplx{0.0});
  out.max_abs_q.assign(static_cast<std::size_t>(max_len), 0.0);
  for (std::size_t i = 0; i < reps.size(); ++i) {
    const auto k = static_cast<std::size_t>(reps[i].length() - 1);
    cplx qp = ipow(qs[i], N);
    cplx part{0.0};
    for (int m = 0; m <= out.m_max; ++m) {
      part += std::log(1.0 - qp);
      qp *= qs[i];
    }
    out.per_length[k] += part;
    out.max_abs_q[k] = std::max(out.max_abs_q[k], std::abs(qs[i]));
  }
  for (cplx c : out.per_length) out.value += c;
  return out;
}

cplx logdet_product(const SchottkyData& s, int N, int max_len, int m_max) {
  return logdet_product_detail(s, N, max_len, m_max).value;
}

std::vector<cplx> trace_powers(const MatrixC& A, int kmax) {
  std::vector<cplx> out;
  MatrixC P = A;
  for (int k = 1; k <= kmax; ++k) {
    out.push_back(P.trace());
    if (k < kmax) P = P * A;
  }
  return out;
}

cplx cr_multiplier_trace(const SchottkyData& s, int N, int k) {
  cplx sum{0.0};
  for_each_reduced_word(s, k, [&](const GroupWord& w) {
    if (!w.cyclically_reduced()) return;
    const cplx q = multiplier(w.map);
    sum += ipow(q, N) / (1.0 - q);
  });
  return sum;
}

cplx cr_D_trace(const SchottkyData& s, int N, int k, int M) {
  cplx sum{0.0};
  for_each_reduced_word(s, k, [&](const GroupWord& w) {
    if (!w.cyclically_reduced()) return;
    std::vector<int> inv(w.letters.size());
    std::transform(w.letters.begin(), w.letters.end(), inv.begin(), [](int a) { return -a; });
    const int a1 = w.letters.front();
    const MobiusMap lam = lambda_mu(s.handle(a1), a1 > 0 ? 1 : -1).lambda;
    const MobiusMap g = lam * word_map(s, inv) * lam.inverse();
    sum += D_matrix(g, N, M).trace();
  });
  return sum;
}

DetReport determinant_report(const QuasiformEngine& e, int max_len, int m_max) {
  DetReport r;
  r.logdet_matrix = logdet_truncated(e);
  const ProductDetail p = logdet_product_detail(e.surface(), e.N(), max_len, m_max);
  r.logdet_product = p.value;
  r.max_len = max_len;
  r.modes = e.modes();
  r.m_max = p.m_max;
  r.per_length = p.per_length;
  return r;
}

}  // namespace qf
