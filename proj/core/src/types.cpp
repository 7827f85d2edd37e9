#include "quasiform/types.hpp"

namespace qf {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DegenerateHandle: return "DegenerateHandle";
    case ErrorKind::InfiniteImage: return "InfiniteImage";
    case ErrorKind::IterationCapExceeded: return "IterationCapExceeded";
    case ErrorKind::PoleEvaluation: return "PoleEvaluation";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::MultiplierOutOfRange: return "MultiplierOutOfRange";
    case ErrorKind::NonConvergent: return "NonConvergent";
    case ErrorKind::PathThroughPole: return "PathThroughPole";
    case ErrorKind::NonConvergentDerivative: return "NonConvergentDerivative";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::OutsideDomain: return "OutsideDomain";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

FormValue operator*(const FormValue& lhs, const FormValue& rhs) {
  if (lhs.weights.size() != rhs.weights.size()) {
    throw std::invalid_argument("FormValue product over different variable sets");
  }
  FormValue out{lhs.value * rhs.value, lhs.weights};
  for (std::size_t i = 0; i < out.weights.size(); ++i) out.weights[i] += rhs.weights[i];
  return out;
}

}  // namespace qf
