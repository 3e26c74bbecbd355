#ifndef NLSYS_ERRORS_HPP
#define NLSYS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace nlsys {

enum class FailureKind {
  NonConvergence,
  Divergence,
  SemitrivialCollapse,
  Bracketing,
};

std::string to_string(FailureKind kind);

/// A numerical procedure ran but did not deliver its contract.
class SolverError : public std::runtime_error {
 public:
  SolverError(FailureKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  FailureKind kind() const { return kind_; }

 private:
  FailureKind kind_;
};

}  // namespace nlsys

#endif  // NLSYS_ERRORS_HPP
