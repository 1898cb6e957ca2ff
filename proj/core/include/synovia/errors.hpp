#ifndef SYNOVIA_ERRORS_HPP
#define SYNOVIA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace synovia {

/// Base class for everything thrown by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct InvalidGrid : Error {
    explicit InvalidGrid(const std::string& msg) : Error(msg) {}
};

struct InvalidParameter : Error {
    explicit InvalidParameter(const std::string& msg) : Error(msg) {}
};

struct GridMismatch : Error {
    explicit GridMismatch(const std::string& msg) : Error(msg) {}
};

/// A field contains NaN or Inf where a finite value is required.
struct NonFinite : Error {
    explicit NonFinite(const std::string& msg) : Error(msg) {}
};

/// Exponent function is clamped (non-differentiable) at the requested point.
struct NonDifferentiable : Error {
    explicit NonDifferentiable(const std::string& msg) : Error(msg) {}
};

/// A monitored norm crossed the blow-up threshold or turned non-finite.
/// Expected past the local existence horizon; callers turn this into a
/// graceful termination, never a crash.
struct BlowUpDetected : Error {
    explicit BlowUpDetected(const std::string& msg) : Error(msg) {}
    double time = 0.0;
    BlowUpDetected(const std::string& msg, double t) : Error(msg), time(t) {}
};

/// Grönwall bracket 1 - alpha*c0*Phi^alpha*t reached zero before t.
struct BlowUpBeforeT : Error {
    explicit BlowUpBeforeT(const std::string& msg) : Error(msg) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

struct EmptyRun : Error {
    explicit EmptyRun(const std::string& msg) : Error(msg) {}
};

/// Spectral tail of a field is too energetic for a resolved-field check.
struct UnderResolved : Error {
    explicit UnderResolved(const std::string& msg) : Error(msg) {}
};

struct FitFailure : Error {
    explicit FitFailure(const std::string& msg) : Error(msg) {}
};

struct IoError : Error {
    explicit IoError(const std::string& msg) : Error(msg) {}
};

}  // namespace synovia

#endif
