#pragma once

#include <stdexcept>
#include <string>

namespace lagbill {

/// Vector lengths that do not match the ambient dimension of a space form.
class DimensionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Inputs outside the domain of an operation: off-surface points, points
/// outside the Klein ball, inconsistent wall parameters.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

enum class SingularityKind {
  Collision,  // Kepler center (or its antipode)
  Equator,    // q_{n+1} = 0, where the chart and the hatted quantities blow up
  IdealBoundary,  // Klein-ball boundary in the hyperbolic chart
  Grazing,    // tangential wall hit
  StepUnderflow,
};

const char* to_string(SingularityKind kind) noexcept;

/// Raised when an evaluation hits a singular point of the potential, the
/// projection, or the reflection law.
class SingularityError : public std::runtime_error {
public:
  SingularityError(SingularityKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  SingularityKind kind() const noexcept { return kind_; }

private:
  SingularityKind kind_;
};

}  // namespace lagbill
