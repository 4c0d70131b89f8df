#pragma once

#include <stdexcept>
#include <string>

namespace hent {

/// Raised when a numerical procedure cannot meet its contract (a PSD matrix
/// with a significantly negative eigenvalue, quadrature that does not
/// converge, Jacobi sweeps that do not terminate).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hent
