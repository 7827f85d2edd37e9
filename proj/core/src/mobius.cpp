#include "quasiform/mobius.hpp"

#include <algorithm>

namespace qf {

MobiusMap MobiusMap::normalized(cplx a, cplx b, cplx c, cplx d) {
  const cplx det = a * d - b * c;
  if (det == cplx{0.0}) throw Error(ErrorKind::DegenerateHandle, "singular Mobius matrix");
  const cplx s = std::sqrt(det);
  return {a / s, b / s, c / s, d / s};
}

cplx MobiusMap::operator()(cplx z) const {
  if (is_infinite(z)) {
    if (c == cplx{0.0}) return kInfinity;
    return a / c;
  }
  const cplx den = c * z + d;
  if (den == cplx{0.0}) return kInfinity;
  return (a * z + b) / den;
}

// Entries of long words are large and a d - b c cancels badly, so the unit
// determinant is used as given rather than recomputed.
cplx MobiusMap::derivative(cplx z) const {
  const cplx den = c * z + d;
  return 1.0 / (den * den);
}

MobiusMap MobiusMap::operator*(const MobiusMap& r) const {
  return {a * r.a + b * r.c, a * r.b + b * r.d, c * r.a + d * r.c, c * r.b + d * r.d};
}

bool same_map(const MobiusMap& x, const MobiusMap& y, double tol) {
  auto close = [tol](const MobiusMap& p, const MobiusMap& q) {
    return std::abs(p.a - q.a) < tol && std::abs(p.b - q.b) < tol && std::abs(p.c - q.c) < tol &&
           std::abs(p.d - q.d) < tol;
  };
  const MobiusMap neg{-y.a, -y.b, -y.c, -y.d};
  return close(x, y) || close(x, neg);
}

cplx multiplier(const MobiusMap& m) {
  // q^2 + (2 - t^2) q + 1 = 0 for the normalized trace t.
  const cplx t = m.trace();
  const cplx p = 2.0 - t * t;
  const cplx disc = std::sqrt(p * p - 4.0);
  const cplx q1 = (-p + disc) / 2.0;
  const cplx q2 = (-p - disc) / 2.0;
  // The two roots are reciprocal; take the smaller one and rebuild from the
  // larger to avoid cancellation.
  if (std::abs(q1) >= std::abs(q2)) return 1.0 / q1;
  return 1.0 / q2;
}

FixedPoints fixed_points(const MobiusMap& m) {
  if (m.c == cplx{0.0}) {
    if (m.a == m.d) throw Error(ErrorKind::DegenerateHandle, "parabolic or identity map has no distinct fixed points");
    const cplx z = m.b / (m.d - m.a);
    const cplx deriv = m.a / m.d;
    if (std::abs(deriv) < 1.0) return {kInfinity, z};
    return {z, kInfinity};
  }
  const cplx amd = m.a - m.d;
  const cplx disc = std::sqrt(amd * amd + 4.0 * m.b * m.c);
  const cplx z1 = (amd + disc) / (2.0 * m.c);
  const cplx z2 = (amd - disc) / (2.0 * m.c);
  const cplx d1 = m.c * z1 + m.d;
  // |gamma'(z1)| = 1 / |c z1 + d|^2
  if (std::norm(d1) > 1.0) return {z2, z1};
  return {z1, z2};
}

HandleParams derive_handle(cplx W_plus, cplx W_minus, cplx q) {
  if (W_plus == W_minus) throw Error(ErrorKind::DegenerateHandle, "coincident fixed points");
  const double aq = std::abs(q);
  if (!(aq > 0.0 && aq < 1.0)) throw Error(ErrorKind::DegenerateHandle, "multiplier modulus outside (0,1)");
  HandleParams h;
  h.W_plus = W_plus;
  h.W_minus = W_minus;
  h.q = q;
  h.w_plus = (W_plus - q * W_minus) / (1.0 - q);
  h.w_minus = (W_minus - q * W_plus) / (1.0 - q);
  const cplx diff = W_plus - W_minus;
  h.rho = -q * diff * diff / ((1.0 - q) * (1.0 - q));
  h.sqrt_rho = std::sqrt(h.rho);
  return h;
}

HandleParams handle_from_sewing(cplx w_plus, cplx w_minus, cplx rho) {
  if (rho == cplx{0.0} || w_plus == w_minus) throw Error(ErrorKind::DegenerateHandle, "degenerate sewing parameters");
  HandleParams h;
  h.w_plus = w_plus;
  h.w_minus = w_minus;
  h.rho = rho;
  h.sqrt_rho = std::sqrt(rho);
  // Fixed points solve (z - w_-)(z - w_+) = rho.
  const cplx sum = w_plus + w_minus;
  const cplx disc = std::sqrt((w_plus - w_minus) * (w_plus - w_minus) + 4.0 * rho);
  const cplx z1 = (sum + disc) / 2.0;
  const cplx z2 = (sum - disc) / 2.0;
  // The repelling point sits inside the isometric circle around w_plus.
  if (std::abs(z1 - w_plus) <= std::abs(z2 - w_plus)) {
    h.W_plus = z1;
    h.W_minus = z2;
  } else {
    h.W_plus = z2;
    h.W_minus = z1;
  }
  h.q = multiplier(generator_map(h, 1));
  return h;
}

MobiusMap generator_map(const HandleParams& h, int sign) {
  // The determinant is -rho exactly; computing it from the entries cancels badly as rho -> 0.
  const cplx s = std::sqrt(-h.rho);
  const MobiusMap g{h.w_minus / s, (h.rho - h.w_plus * h.w_minus) / s, 1.0 / s, -h.w_plus / s};
  return sign > 0 ? g : g.inverse();
}

LambdaMu lambda_mu(const HandleParams& h, int sign) {
  const cplx wa = h.w(sign);
  const cplx wma = h.w(-sign);
  const cplx s = h.sqrt_rho;
  LambdaMu out;
  out.lambda = MobiusMap::normalized(1.0 / s, -wa / s, 0.0, 1.0);
  out.mu = MobiusMap::normalized(0.0, s, 1.0, -wma);
  return out;
}

int index_position(int a) { return a > 0 ? 2 * (a - 1) : 2 * (-a - 1) + 1; }

int index_at(int pos) { return pos % 2 == 0 ? pos / 2 + 1 : -(pos / 2 + 1); }

std::vector<int> index_set(int genus) {
  std::vector<int> out;
  for (int p = 0; p < 2 * genus; ++p) out.push_back(index_at(p));
  return out;
}

HandleParams mobius_act_handle(const MobiusMap& gamma, const HandleParams& h) {
  const MobiusMap g = MobiusMap::normalized(gamma.a, gamma.b, gamma.c, gamma.d);
  const cplx A = g.a, B = g.b, C = g.c, D = g.d;
  const cplx den = (C * h.w_plus + D) * (C * h.w_minus + D) - h.rho * C * C;
  if (den == cplx{0.0} || !is_finite(den)) {
    throw Error(ErrorKind::InfiniteImage, "transformed sewing parameter at infinity");
  }
  const cplx wp = ((A * h.w_plus + B) * (C * h.w_minus + D) - h.rho * A * C) / den;
  const cplx wm = ((A * h.w_minus + B) * (C * h.w_plus + D) - h.rho * A * C) / den;
  const cplx r = h.rho / (den * den);
  if (!is_finite(wp) || !is_finite(wm) || !is_finite(r)) {
    throw Error(ErrorKind::InfiniteImage, "transformed sewing parameter not finite");
  }
  return handle_from_sewing(wp, wm, r);
}

SchottkyData mobius_act_params(const MobiusMap& gamma, const SchottkyData& s) {
  SchottkyData out;
  out.handles.reserve(s.handles.size());
  for (const auto& h : s.handles) out.handles.push_back(mobius_act_handle(gamma, h));
  return out;
}

}  // namespace qf
