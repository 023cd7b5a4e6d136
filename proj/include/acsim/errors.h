// Copyright 2026 The acsim Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef ACSIM_ERRORS_H_
#define ACSIM_ERRORS_H_

#include <stdexcept>
#include <string>

namespace acsim {

// Invalid configuration, argument range, or unsatisfiable request.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// Malformed or unreadable input data (audio, manifests, metadata).
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Lookup of an asset that is not in the catalog.
class CatalogError : public DataError {
 public:
  explicit CatalogError(const std::string& what) : DataError(what) {}
};

}  // namespace acsim

#endif  // ACSIM_ERRORS_H_
