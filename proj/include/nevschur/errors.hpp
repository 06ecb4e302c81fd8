#pragma once

#include <stdexcept>
#include <string>

namespace nevschur {

enum class ErrorKind {
  InvalidArgument,
  DimensionMismatch,
  NonFinite,
  NotContraction,
  NotSelfadjoint,
  NotPSD,
  NearSingular,
  IllConditioned,
  NonMinimal,
  InfeasibleCoupler,
  BranchCut,
  Parse,
  Io,
};

const char* to_string(ErrorKind kind) noexcept;

/// Domain failure raised by every library operation. The kind is stable and
/// is what the command-line reports serialize.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace nevschur
