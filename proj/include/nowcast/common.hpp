#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace nowcast {

using Index = std::int64_t;

// Invalid configuration (bad hyperparameters, malformed config files,
// violated structural constraints). CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid data fed to an otherwise well-configured operation (shape
// mismatches, out-of-range values, missing keys). CLI maps this to exit
// code 3.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

inline void config_check(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

inline void data_check(bool ok, const std::string& msg) {
  if (!ok) throw DataError(msg);
}

}  // namespace nowcast
