#ifndef NLSYS_CONFIG_HPP
#define NLSYS_CONFIG_HPP

#include <filesystem>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlsys/sweep.hpp"

namespace nlsys {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat `key = value` run description. `#` starts a comment.
struct RunConfig {
  RunManifest manifest;
  /// Coupling used by `solve` when no --beta is given.
  double beta = 0.0;
  /// User-supplied Sobolev constant for the (V0) check; computed otherwise.
  std::optional<double> sobolev_S;
  /// "key = value" for every key that took its default.
  std::vector<std::string> defaulted;
};

/// Rejects unknown keys, duplicate keys, unparsable values and missing
/// required keys (dim, p). Model parameters are validated.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::filesystem::path& path);

}  // namespace nlsys

#endif  // NLSYS_CONFIG_HPP
