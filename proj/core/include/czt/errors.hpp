#pragma once

#include <stdexcept>
#include <string>

namespace czt {

// Process exit codes used by the command-line front end. Library errors carry
// the code they map to so callers do not need a translation table.
enum class ExitCode : int {
  kPass = 0,
  kThresholdFail = 1,
  kConfig = 2,
  kGeometry = 3,
  kQuadrature = 4,
  kReflection = 5,
  kPartition = 6,
  kSeminorm = 7,
  kCapability = 8,
  kInternal = 9,
};

class Error : public std::runtime_error {
 public:
  Error(ExitCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ExitCode code() const noexcept { return code_; }

 private:
  ExitCode code_;
};

// Argument outside the mathematical domain of an operation (x <= 0 for a
// modulus, a window anchor off the boundary, ...).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ExitCode::kGeometry, what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ExitCode::kConfig, what) {}
};

class GeometryError : public Error {
 public:
  explicit GeometryError(const std::string& what) : Error(ExitCode::kGeometry, what) {}
};

class QuadratureFailure : public Error {
 public:
  QuadratureFailure(const std::string& what, double estimate, double error_bound, double lo = 0.0,
                    double hi = 0.0)
      : Error(ExitCode::kQuadrature, what),
        estimate_(estimate),
        error_bound_(error_bound),
        lo_(lo),
        hi_(hi) {}
  double estimate() const noexcept { return estimate_; }
  double error_bound() const noexcept { return error_bound_; }
  // Last bracket that failed to converge (1-D integrals only).
  double bracket_lo() const noexcept { return lo_; }
  double bracket_hi() const noexcept { return hi_; }

 private:
  double estimate_;
  double error_bound_;
  double lo_;
  double hi_;
};

// Non-finite sample inside a quadrature.
class PoisonedValue : public Error {
 public:
  explicit PoisonedValue(const std::string& what) : Error(ExitCode::kQuadrature, what) {}
};

class ReflectionFailure : public Error {
 public:
  explicit ReflectionFailure(const std::string& what) : Error(ExitCode::kReflection, what) {}
};

class PartitionGap : public Error {
 public:
  explicit PartitionGap(const std::string& what) : Error(ExitCode::kPartition, what) {}
};

class DegenerateDomain : public Error {
 public:
  explicit DegenerateDomain(const std::string& what) : Error(ExitCode::kGeometry, what) {}
};

class EmptyReport : public Error {
 public:
  explicit EmptyReport(const std::string& what) : Error(ExitCode::kSeminorm, what) {}
};

class CapabilityError : public Error {
 public:
  explicit CapabilityError(const std::string& what) : Error(ExitCode::kCapability, what) {}
};

class RoughnessError : public Error {
 public:
  explicit RoughnessError(const std::string& what) : Error(ExitCode::kQuadrature, what) {}
};

class OverflowError : public Error {
 public:
  explicit OverflowError(const std::string& what) : Error(ExitCode::kInternal, what) {}
};

}  // namespace czt
