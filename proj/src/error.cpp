#include "hyprec/error.hpp"

namespace hyprec {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Pole: return "pole";
    case ErrorKind::Overflow: return "overflow";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::NoConvergence: return "no_convergence";
    case ErrorKind::DegenerateBase: return "degenerate_base";
    case ErrorKind::CoefficientPole: return "coefficient_pole";
    case ErrorKind::CollapsedIndex: return "collapsed_index";
    case ErrorKind::InvalidArgument: return "invalid_argument";
  }
  return "unknown";
}

}  // namespace hyprec
