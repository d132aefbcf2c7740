#pragma once

#include <stdexcept>
#include <string>

namespace fvporous {

/// Raised when a configuration file or key-value text cannot be turned into a
/// run configuration. Carries the 1-based source line when one is known.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

/// Raised by the solvers when a state or step cannot be computed
/// (corrupted state, Newton breakdown, step size underflow).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace fvporous
