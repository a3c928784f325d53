#include "xplain/error.hpp"

namespace xplain {

std::string_view error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::parse: return "ParseError";
    case ErrorKind::validation: return "ValidationError";
    case ErrorKind::undefined_feature: return "UndefinedFeature";
    case ErrorKind::even_ensemble: return "EvenEnsemble";
    case ErrorKind::not_ordered: return "NotOrdered";
    case ErrorKind::too_large: return "TooLarge";
    case ErrorKind::homogeneous: return "Homogeneous";
    case ErrorKind::budget_exceeded: return "BudgetExceeded";
    case ErrorKind::shared_feature: return "SharedFeature";
    case ErrorKind::unassigned_input: return "UnassignedInput";
  }
  return "Error";
}

}  // namespace xplain
