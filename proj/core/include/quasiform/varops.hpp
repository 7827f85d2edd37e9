#pragma once

#include <functional>
#include <string>
#include <vector>

#include "quasiform/cache.hpp"
#include "quasiform/classical.hpp"

namespace qf {

struct VariationConfig {
  enum class Scheme { Central2, Central4 };
  Scheme scheme = Scheme::Central2;
  double h_w = 1e-4;      // absolute step for w_a and w_{-a}
  double h_rho = 1e-4;    // relative step for rho_a
  double h_point = 1e-3;  // absolute step for derivatives in the form variables
  int richardson_levels = 2;
  double tol = 1e-6;  // NonConvergentDerivative when the last two levels differ by more (relative)
};

using ModuliFunction = std::function<cplx(const SchottkyData&)>;
using ModuliVectorFunction = std::function<VectorC(const SchottkyData&)>;
// A form coefficient depending on the surface and on the points y_1..y_n.
using FormFunction = std::function<cplx(const SchottkyData&, const std::vector<cplx>&)>;

// Sewing-coordinate perturbation: ell = 0 moves w_a, ell = 1 scales rho_a by
// exp(eps), ell = 2 moves w_{-a}. Other coordinates are held fixed.
SchottkyData perturb(const SchottkyData& s, int a, int ell, double eps);

// Derivative at zero of a vector function of one real step, with the
// configured stencil and Richardson levels.
VectorC fd_derivative(const std::function<VectorC(double)>& f, double h, const VariationConfig& vc);

// partial_a^l F: partial_{w_a}, rho_a partial_{rho_a}, rho_a partial_{w_{-a}}.
cplx schottky_derivative(const ModuliFunction& F, int a, int ell, const SchottkyData& s, const VariationConfig& vc);
// All partial_a^l of every component; result(i, (a-1)*3 + l).
MatrixC moduli_gradient(const ModuliVectorFunction& F, const SchottkyData& s, const VariationConfig& vc);

// nabla(x) applied to a gradient from moduli_gradient: sum Theta_{2,a}^l(x) partial_a^l.
VectorC nabla_from_gradient(const MatrixC& grad, const QuasiformEngine& e2, cplx x);
cplx nabla(const ModuliFunction& F, cplx x, const QuasiformEngine& e2, const VariationConfig& vc);

// nabla_{m,y}(x) H = nabla(x) H + sum_k (Psi_2(x, y_k) d_{y_k} H + m_k d_{y_k}Psi_2(x, y_k) H).
// e2 must be the weight-two engine of s.
cplx nabla_forms(const FormFunction& H, const std::vector<int>& m, const std::vector<cplx>& ys, cplx x,
                 const SchottkyData& s, const QuasiformEngine& e2, const VariationConfig& vc);

// p(z) as monomial coefficients, degree at most 2N - 2.
using MobiusPolynomial = std::vector<cplx>;

// D^P F along the Moebius flow, moving every W_a by p(W_a) with multipliers fixed.
cplx mobius_flow_derivative(const ModuliFunction& F, const MobiusPolynomial& p, const SchottkyData& s,
                            const VariationConfig& vc);
// The same derivative through the tangent basis: -sum_a sum_l p_a^l partial_a^l F
// with p_a^l the cocycle coefficients of P at weight two.
cplx mobius_cocycle_derivative(const ModuliFunction& F, const MobiusPolynomial& p, const SchottkyData& s,
                               const VariationConfig& vc);
// D^P_y H = D^P H + sum_k (p(y_k) d_{y_k} H + m_k p'(y_k) H).
cplx mobius_annihilator(const FormFunction& H, const std::vector<int>& m, const std::vector<cplx>& ys,
                        const MobiusPolynomial& p, const SchottkyData& s, const VariationConfig& vc);

// Contour moments of an N-form H given by its coefficient in one variable.
struct PoleSpec {
  cplx point;
  int order;  // pole order at point
};

// Res_{w_a}^l H for a in I_+ and l < 2N - 1 on circles homotopic to C_a, and
// Res_{y_k}^j H for j < order.
struct ResidueData {
  std::vector<cplx> disk;               // index (a-1)*(2N-1) + l
  std::vector<std::vector<cplx>> pole;  // pole[k][j]
};

ResidueData residue_data(const std::function<cplx(cplx)>& H, const std::vector<PoleSpec>& poles,
                         const QuasiformEngine& e, const QuadratureConfig& qc = {});
// Right side of the expansion of H in Theta_{N,a}^l and Psi_N^{(0,j)}(x, y_k).
cplx residue_expansion(const ResidueData& r, const std::vector<PoleSpec>& poles, const QuasiformEngine& e, cplx x);
// Max over probes of |H(x) - expansion(x)| / max(1, |H(x)|).
double residue_expansion_residual(const std::function<cplx(cplx)>& H, const std::vector<PoleSpec>& poles,
                                  const QuasiformEngine& e, const std::vector<cplx>& probes,
                                  const QuadratureConfig& qc = {});
// -sum_a sum_l p_a^l Res_{w_a}^l H + sum_k sum_l p^{(l)}(y_k) Res_{y_k}^l H.
cplx coboundary_sum(const ResidueData& r, const std::vector<PoleSpec>& poles, const MobiusPolynomial& p,
                    const QuasiformEngine& e);

struct IdentityResult {
  std::string name;
  std::vector<double> residuals;  // relative, one per probe
  double max_residual = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::string error;  // set when evaluation threw
};

struct Probe {
  cplx x, y, z, w;
};

struct SuiteConfig {
  VariationConfig vc;
  std::vector<Probe> probes;
  std::vector<int> modes = {32, 16};
  double threshold = 0.0;  // 0 selects the |q|-scaled default
};

// Names: nabla_omega, nabla_s, nabla_omega_diff, nabla_nu, nabla_abel, rauch, nabla_prime_form.
const std::vector<std::string>& identity_names();
// 1e-5 at max |q| <= 0.03, ten times looser per doubling of max |q|.
double default_identity_threshold(const SchottkyData& s);
// Default probes: five points of the fundamental domain away from the disks.
std::vector<Probe> default_probes(const SchottkyData& s, int count = 5);
std::vector<IdentityResult> identity_suite(const SchottkyData& s, const std::vector<std::string>& names,
                                           const SuiteConfig& cfg);

// Commutativity residual of the second-order nabla on H = omega(z1, z2):
// nabla_{2,1,1;x,z}(y) nabla_{1,1;z}(x) H - (x <-> y), with a fixed fourth-order
// stencil of step h for all parameter and point derivatives.
struct CommutatorResult {
  cplx lhs, rhs;
  double residual = 0.0;  // |lhs - rhs| / max(|lhs|, |rhs|)
};
CommutatorResult commutator_check(const SchottkyData& s, cplx x, cplx y, cplx z1, cplx z2, double h,
                                  EngineCache& cache);

}  // namespace qf
