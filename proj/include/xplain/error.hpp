#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace xplain {

enum class ErrorKind {
  parse,
  validation,
  undefined_feature,
  even_ensemble,
  not_ordered,
  too_large,
  homogeneous,
  budget_exceeded,
  shared_feature,
  unassigned_input,
};

std::string_view error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace xplain
