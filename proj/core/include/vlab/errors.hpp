#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace vlab {

/// Base class for all errors raised by the library.
class error : public std::runtime_error {
  public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid configuration or scenario input (bad sizes, unknown keys, range
/// violations). Maps to exit code 2 in the CLI.
class config_error : public error {
  public:
    explicit config_error(const std::string& what) : error(what) {}
};

/// Argument outside the mathematical domain of an operation (e.g. the
/// inverse advection map evaluated at |w| >= c).
class domain_error : public error {
  public:
    explicit domain_error(const std::string& what) : error(what) {}
};

/// Base class for numerical-horizon failures: the requested time span
/// exceeds the range where the discrete construction is valid. Maps to
/// exit code 3 in the CLI.
class horizon_error : public error {
  public:
    explicit horizon_error(const std::string& what) : error(what) {}
};

/// Characteristic crossing detected while re-gridding (Burgers shock).
class shock_error : public horizon_error {
  public:
    shock_error(const std::string& what, double when) : horizon_error(what), time(when) {}
    double time; ///< first failure time of the monitor
};

/// A traced state left the velocity region certified by the decay invariant.
class escape_error : public horizon_error {
  public:
    explicit escape_error(const std::string& what) : horizon_error(what) {}
};

/// A sampled map that must be inverted is not monotone (not a diffeomorphism).
class diffeo_error : public horizon_error {
  public:
    explicit diffeo_error(const std::string& what) : horizon_error(what) {}
};

/// Picard iteration failed to contract within the sweep budget. Carries the
/// measured contraction ratios so callers can inspect how far from the
/// contractive regime the run was.
class convergence_error : public horizon_error {
  public:
    convergence_error(const std::string& what, std::vector<double> ratio_history)
        : horizon_error(what), ratios(std::move(ratio_history)) {}
    std::vector<double> ratios;
};

/// File I/O failure.
class io_error : public error {
  public:
    explicit io_error(const std::string& what) : error(what) {}
};

} // namespace vlab
