#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace qf {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline const cplx kTwoPiI{0.0, 2.0 * kPi};

// Extended-plane point at infinity.
inline const cplx kInfinity{std::numeric_limits<double>::infinity(), 0.0};

inline bool is_infinite(cplx z) { return std::isinf(z.real()) || std::isinf(z.imag()); }
inline bool is_finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Integer power by repeated squaring; negative exponents invert.
inline cplx ipow(cplx z, int n) {
  if (n < 0) return cplx{1.0} / ipow(z, -n);
  cplx result{1.0};
  cplx base = z;
  while (n > 0) {
    if (n & 1) result *= base;
    base *= base;
    n >>= 1;
  }
  return result;
}

inline double sign_pow(int n) { return (n % 2 == 0) ? 1.0 : -1.0; }

enum class ErrorKind {
  DegenerateHandle,
  InfiniteImage,
  IterationCapExceeded,
  PoleEvaluation,
  SingularSystem,
  MultiplierOutOfRange,
  NonConvergent,
  PathThroughPole,
  NonConvergentDerivative,
  InvalidConfig,
  OutsideDomain,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Coefficient of a differential form together with its weight in each variable,
// e.g. {N, 1-N} for a quasiform Psi_N(x, y).
struct FormValue {
  cplx value{};
  std::vector<int> weights;
};

// Product of forms in the same variables: values multiply, weights add.
FormValue operator*(const FormValue& lhs, const FormValue& rhs);

}  // namespace qf
