// Error taxonomy: callers can distinguish bad math arguments, bad user input,
// bad configuration, and numerical failures.
#pragma once

#include <stdexcept>
#include <string>

namespace gamchain {

// A mathematical function was called outside its domain (x <= 0, unsupported
// order, non-finite argument).
class domain_error : public std::domain_error {
 public:
  explicit domain_error(const std::string& what) : std::domain_error(what) {}
};

// User-supplied data is unusable (malformed file, too-short series, bad index).
class input_error : public std::invalid_argument {
 public:
  explicit input_error(const std::string& what) : std::invalid_argument(what) {}
};

// A configuration value is out of range or inconsistent.
class config_error : public std::invalid_argument {
 public:
  explicit config_error(const std::string& what) : std::invalid_argument(what) {}
};

// A numerical procedure failed to converge or produced a non-finite result.
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gamchain
