#include "quasiform/classical.hpp"

namespace qf {

namespace {

constexpr int kBetaCrossingSign = -1;

void require_weight_one(const QuasiformEngine& e) {
  if (e.N() != 1) throw Error(ErrorKind::InvalidConfig, "classical differentials need a weight-one engine");
}

void require_domain(const QuasiformEngine& e, cplx z) {
  if (!in_fundamental_domain(e.surface(), z))
    throw Error(ErrorKind::OutsideDomain, "point lies inside a Schottky disk");
}

struct Reduced {
  cplx point;
  cplx derivative;
};

Reduced reduce(const SchottkyData& s, cplx z) {
  const Reduction r = reduce_to_fundamental(s, z);
  if (r.word.letters.empty()) return {z, cplx{1.0}};
  return {r.point, r.word.map.derivative(z)};
}

// Antiderivative of Ltilde(w) at weight one: -t^{n+1}/(n+1), t = s_b/(w - w_b).
RowVectorC Ltilde_primitive(const QuasiformEngine& e, cplx w) {
  RowVectorC out(e.dim());
  for (int b : index_set(e.surface().genus())) {
    const cplx t = e.branch(b) / (w - e.surface().w(b));
    cplx pw = t;
    for (int n = 0; n < e.modes(); ++n) {
      out(e.row(b, n)) = -pw / static_cast<double>(n + 1);
      pw *= t;
    }
  }
  return out;
}

// Integral from z to y of a weight-one HoloCombo, principal logs for the simple poles.
cplx combo_integral(const QuasiformEngine& e, const HoloCombo& h, cplx y, cplx z) {
  const MatrixC& K = e.resolvent();
  cplx out = ((Ltilde_primitive(e, y) - Ltilde_primitive(e, z)) * (K * h.vec))(0);
  for (int b : index_set(e.surface().genus())) {
    const cplx wb = e.surface().w(b);
    out += h.rat(index_position(b)) * (std::log(y - wb) - std::log(z - wb));
  }
  return out;
}

std::vector<cplx> densify(const Path& p) {
  std::vector<cplx> pts;
  for (const PathPiece& piece : p.pieces)
    for (int i = 0; i <= 512; ++i) pts.push_back(piece.point(i / 512.0));
  return pts;
}

// Signed count of transversal crossings of two polylines.
int intersection_number(const std::vector<cplx>& u, const std::vector<cplx>& v) {
  auto cross = [](cplx a, cplx b) { return (std::conj(a) * b).imag(); };
  int count = 0;
  for (std::size_t i = 0; i + 1 < u.size(); ++i) {
    const cplx p = u[i], r = u[i + 1] - u[i];
    for (std::size_t j = 0; j + 1 < v.size(); ++j) {
      const cplx q = v[j], sv = v[j + 1] - v[j];
      const double den = cross(r, sv);
      if (den == 0.0) continue;
      const double t = cross(q - p, sv) / den;
      const double w = cross(q - p, r) / den;
      if (t >= 0.0 && t < 1.0 && w >= 0.0 && w < 1.0) count += den > 0.0 ? 1 : -1;
    }
  }
  return count;
}

}  // namespace

FormValue nu(const QuasiformEngine& e, int a, cplx x) {
  require_weight_one(e);
  FormValue t = theta(e, a, 0, x);
  t.value /= -kTwoPiI;
  return t;
}

FormValue nu_quadrature(const QuasiformEngine& e, int a, cplx x, const QuadratureConfig& qc) {
  require_weight_one(e);
  const Reduced rx = reduce(e.surface(), x);
  const RowVectorC lx = e.left(rx.point);
  const Path p = beta_path(e.surface(), a, {rx.point});
  const cplx v = path_integral(
      [&](cplx y) { return M_N(1, rx.point, y) + (lx * e.Rtilde(y))(0); }, p, qc);
  return {v / kTwoPiI * rx.derivative, {1}};
}

PeriodMatrix period_matrix(const QuasiformEngine& e, const QuadratureConfig& qc) {
  require_weight_one(e);
  const int g = e.surface().genus();
  PeriodMatrix out;
  out.omega = MatrixC::Zero(g, g);
  out.normalization = MatrixC::Zero(g, g);
  std::vector<Path> betas;
  std::vector<std::vector<cplx>> dense;
  for (int a = 1; a <= g; ++a) {
    betas.push_back(beta_path(e.surface(), a));
    dense.push_back(densify(betas.back()));
  }
  for (int a = 1; a <= g; ++a) {
    const Circle alpha = alpha_circle(e.surface(), -a);
    for (int b = 1; b <= g; ++b) {
      const HoloCombo& h = e.theta_combo(b, 0);
      const ComplexFn nu_b = [&](cplx x) { return -e.eval(h, x) / kTwoPiI; };
      cplx integral = path_integral(nu_b, betas[a - 1], qc);
      // Routed beta paths may cross; adding alpha cycles to beta_a for a < b
      // removes the crossings so the basis is canonical.
      if (a < b) integral += static_cast<double>(kBetaCrossingSign * intersection_number(dense[a - 1], dense[b - 1]));
      out.omega(a - 1, b - 1) = integral;
      out.normalization(a - 1, b - 1) = circle_integral(nu_b, alpha, qc);
    }
  }
  out.symmetry_residual = (out.omega - out.omega.transpose()).cwiseAbs().maxCoeff();
  out.normalization_residual = (out.normalization - MatrixC::Identity(g, g)).cwiseAbs().maxCoeff();
  return out;
}

FormValue omega_diff(const QuasiformEngine& e, cplx y, cplx z, cplx x) {
  require_weight_one(e);
  require_domain(e, y);
  require_domain(e, z);
  const Reduced rx = reduce(e.surface(), x);
  if (rx.point == y || rx.point == z) throw Error(ErrorKind::PoleEvaluation, "omega_diff evaluated at an endpoint");
  const RowVectorC lx = e.left(rx.point);
  const cplx v = e.psi_coeff(lx, rx.point, y) - e.psi_coeff(lx, rx.point, z);
  return {v * rx.derivative, {1, 0, 0}};
}

FormValue omega_diff_quadrature(const QuasiformEngine& e, cplx y, cplx z, cplx x, const QuadratureConfig& qc) {
  require_weight_one(e);
  const Reduced rx = reduce(e.surface(), x);
  const RowVectorC lx = e.left(rx.point);
  auto obstacles = disk_obstacles(e.surface(), 0.02);
  obstacles.push_back(residue_circle(e.surface(), rx.point, {y, z}));
  const Path p = route_path(z, y, obstacles, {rx.point}, 0.0);
  const cplx v = path_integral([&](cplx w) { return M_N(1, rx.point, w) + (lx * e.Rtilde(w))(0); }, p, qc);
  return {v * rx.derivative, {1, 0, 0}};
}

cplx abel_integral(const QuasiformEngine& e, int a, cplx y, cplx z) {
  require_weight_one(e);
  require_domain(e, y);
  require_domain(e, z);
  return -combo_integral(e, e.theta_combo(a, 0), y, z) / kTwoPiI;
}

FormValue proj_connection(const QuasiformEngine& e, cplx x) {
  require_weight_one(e);
  const Reduced rx = reduce(e.surface(), x);
  return {6.0 * e.omega_regular_diag(rx.point) * rx.derivative * rx.derivative, {2}};
}

cplx log_prime_form(const QuasiformEngine& e, cplx y, cplx z) {
  require_weight_one(e);
  require_domain(e, y);
  require_domain(e, z);
  if (y == z) throw Error(ErrorKind::PoleEvaluation, "prime form evaluated on the diagonal");
  const VectorC dR = e.R(y) - e.R(z);
  const cplx reg = ((Ltilde_primitive(e, z) - Ltilde_primitive(e, y)) * (e.resolvent() * dR))(0);
  return std::log(y - z) + 0.5 * reg;
}

cplx log_prime_form_quadrature(const QuasiformEngine& e, cplx y, cplx z, const QuadratureConfig& qc) {
  require_weight_one(e);
  if (y == z) throw Error(ErrorKind::PoleEvaluation, "prime form evaluated on the diagonal");
  const Path p = route_path(y, z, disk_obstacles(e.surface(), 0.02));
  const cplx reg = path_integral(
      [&](cplx w) { return omega_diff(e, y, z, w).value - 1.0 / (w - y) + 1.0 / (w - z); }, p, qc);
  return std::log(y - z) + 0.5 * reg;
}

cplx omega_alpha_period(const QuasiformEngine& e, int a, cplx x, const QuadratureConfig& qc) {
  require_weight_one(e);
  const Reduced rx = reduce(e.surface(), x);
  const RowVectorC lx = e.left(rx.point);
  const Circle c = alpha_circle(e.surface(), -a, {rx.point});
  return circle_integral([&](cplx y) { return M_N(1, rx.point, y) + (lx * e.Rtilde(y))(0); }, c, qc) *
         rx.derivative;
}

}  // namespace qf
