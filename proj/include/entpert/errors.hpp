#pragma once
#include <stdexcept>
#include <string>

namespace entpert {

//! Internal cross-check failure (numerical corruption, not a user error).
class ConsistencyError : public std::runtime_error {
 public:
  explicit ConsistencyError(const std::string& what) : std::runtime_error(what) {}
};

//! The 5x5 closed form degenerates (|C2 +- d*R| below tolerance).
class SingularClosedForm : public std::runtime_error {
 public:
  explicit SingularClosedForm(const std::string& what) : std::runtime_error(what) {}
};

//! Adiabatic tracking of a degenerate level became ambiguous during a sweep.
class TrackingError : public std::runtime_error {
 public:
  explicit TrackingError(const std::string& what) : std::runtime_error(what) {}
};

//! Bad run configuration (CLI flags or config file).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace entpert
