#ifndef DPZO_ERRORS_HPP
#define DPZO_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dpzo {

// Rejected input: dimension mismatch, invalid configuration, bad file.
// The CLI maps this to exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// Numeric failure during evaluation or optimization (non-finite values).
// The CLI maps this to exit code 3.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dpzo

#endif  // DPZO_ERRORS_HPP
