#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace riplab {

// Combinatorial enumeration would exceed the configured budget.
struct budget_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Iterative kernel failed to converge within its cap.
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input file.
struct format_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Vector lies outside the polytope it was claimed to belong to.
struct membership_error : std::domain_error {
  using std::domain_error::domain_error;
};

// The requested error bound does not apply at the given isometry constant.
struct guarantee_void_error : std::domain_error {
  using std::domain_error::domain_error;
};

// Constraint set is empty; carries a certificate (a Farkas ray for LPs,
// the least-squares residual direction for ball constraints).
struct infeasible_error : std::runtime_error {
  std::vector<double> certificate;

  infeasible_error(const std::string& what, std::vector<double> cert)
      : std::runtime_error(what), certificate(std::move(cert)) {}
};

}  // namespace riplab
