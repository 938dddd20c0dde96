#ifndef NLILAB_ERRORS_HPP
#define NLILAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace nlilab {

// Error categories map to CLI exit codes: ConfigError/InputError -> 2,
// MissingArtifact/FormatError -> 3, NumericalError -> 4.

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& m) : std::runtime_error(m) {}
};

struct InputError : std::runtime_error {
  explicit InputError(const std::string& m) : std::runtime_error(m) {}
};

struct FormatError : std::runtime_error {
  explicit FormatError(const std::string& m) : std::runtime_error(m) {}
};

struct MissingArtifact : std::runtime_error {
  explicit MissingArtifact(const std::string& m) : std::runtime_error(m) {}
};

struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& m) : std::runtime_error(m) {}
};

}  // namespace nlilab

#endif
