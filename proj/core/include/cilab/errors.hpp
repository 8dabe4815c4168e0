#pragma once

#include <stdexcept>
#include <string>

namespace cilab {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Right-hand side handed to an antidivergence has a non-negligible mean.
struct NonZeroMeanError : Error {
  double mean;
  explicit NonZeroMeanError(double m)
      : Error("antidivergence input has nonzero mean " + std::to_string(m)), mean(m) {}
};

/// Oscillation frequency too close to the grid Nyquist band.
struct AliasRiskError : Error {
  explicit AliasRiskError(long freq, int n)
      : Error("frequency " + std::to_string(freq) + " exceeds alias-safe bound n/4 = " +
              std::to_string(n / 4)) {}
};

/// Concentration scale not representable on the grid (support under 4 cells).
struct UnresolvableConcentrationError : Error {
  explicit UnresolvableConcentrationError(const std::string& what) : Error(what) {}
};

struct SupportOverlapError : Error {
  explicit SupportOverlapError(const std::string& what) : Error(what) {}
};

struct GridMismatchError : Error {
  GridMismatchError() : Error("operands live on different grids") {}
};

struct NotASubsolutionError : Error {
  double margin;
  explicit NotASubsolutionError(double m)
      : Error("admissibility margin " + std::to_string(m) + " is not positive"), margin(m) {}
};

struct BandViolationError : Error {
  explicit BandViolationError(const std::string& what) : Error(what) {}
};

struct OracleInconsistentError : Error {
  explicit OracleInconsistentError(const std::string& what) : Error(what) {}
};

struct DiagnosedStallError : Error {
  explicit DiagnosedStallError(const std::string& what) : Error(what) {}
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& what) : Error(what) {}
};

}  // namespace cilab
