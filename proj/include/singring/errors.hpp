#pragma once

#include <stdexcept>
#include <string>

namespace singring {

// Invalid user input: bad config files, malformed measures, flag misuse.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A numeric routine failed in a detectable way.  Never silent: callers that
// cannot recover should surface this as a distinct exit status.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

class ConvergenceError : public NumericError {
public:
    ConvergenceError(const std::string& what, double residual)
        : NumericError(what), residual(residual) {}
    double residual;
};

}  // namespace singring
