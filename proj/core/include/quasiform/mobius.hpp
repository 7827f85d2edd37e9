#pragma once

#include <utility>
#include <vector>

#include "quasiform/types.hpp"

namespace qf {

// Element of SL2(C) acting on the extended plane. Entries are kept at unit
// determinant by the factory and by composition.
struct MobiusMap {
  cplx a{1.0}, b{0.0}, c{0.0}, d{1.0};

  static MobiusMap identity() { return {}; }
  static MobiusMap normalized(cplx a, cplx b, cplx c, cplx d);

  cplx det() const { return a * d - b * c; }
  cplx trace() const { return a + d; }

  // Returns kInfinity at the pole; accepts kInfinity as input.
  cplx operator()(cplx z) const;
  cplx derivative(cplx z) const;

  MobiusMap inverse() const { return {d, -b, -c, a}; }
  // Composition: (lhs * rhs)(z) = lhs(rhs(z)).
  MobiusMap operator*(const MobiusMap& rhs) const;
};

// True if the two maps agree entrywise up to an overall sign.
bool same_map(const MobiusMap& lhs, const MobiusMap& rhs, double tol);

// Root of q + 1/q + 2 = tr^2 with |q| <= 1.
cplx multiplier(const MobiusMap& m);

struct FixedPoints {
  cplx repelling;
  cplx attracting;
};
FixedPoints fixed_points(const MobiusMap& m);

// One loxodromic generator gamma_a. W_plus is repelling, W_minus attracting;
// (w_plus, w_minus, rho) are the sewing coordinates with
// gamma_a z = w_minus + rho / (z - w_plus).
struct HandleParams {
  cplx W_plus, W_minus, q;
  cplx w_plus, w_minus, rho;
  cplx sqrt_rho;  // principal branch, fixed once

  cplx w(int sign) const { return sign > 0 ? w_plus : w_minus; }
  cplx W(int sign) const { return sign > 0 ? W_plus : W_minus; }
};

HandleParams derive_handle(cplx W_plus, cplx W_minus, cplx q);
HandleParams handle_from_sewing(cplx w_plus, cplx w_minus, cplx rho);

// sign = +1 gives gamma_a, sign = -1 gives its inverse.
MobiusMap generator_map(const HandleParams& h, int sign);

struct LambdaMu {
  MobiusMap lambda;
  MobiusMap mu;
};
// lambda z = rho^{-1/2} (z - w_a), mu z = rho^{1/2} / (z - w_{-a}); sign picks a or -a.
LambdaMu lambda_mu(const HandleParams& h, int sign = 1);

// Marked Schottky data. Handle indices run over {-g..-1, 1..g}.
struct SchottkyData {
  std::vector<HandleParams> handles;

  int genus() const { return static_cast<int>(handles.size()); }
  const HandleParams& handle(int a) const { return handles.at(static_cast<std::size_t>(a > 0 ? a - 1 : -a - 1)); }
  cplx w(int a) const { return handle(a).w(a > 0 ? 1 : -1); }
  cplx W(int a) const { return handle(a).W(a > 0 ? 1 : -1); }
  cplx rho(int a) const { return handle(a).rho; }
  cplx sqrt_rho(int a) const { return handle(a).sqrt_rho; }
  MobiusMap generator(int a) const { return generator_map(handle(a), a > 0 ? 1 : -1); }
};

// Fixed ordering of the index set: 1, -1, 2, -2, ...
int index_position(int a);
int index_at(int pos);
std::vector<int> index_set(int genus);

HandleParams mobius_act_handle(const MobiusMap& gamma, const HandleParams& h);
SchottkyData mobius_act_params(const MobiusMap& gamma, const SchottkyData& s);

}  // namespace qf
