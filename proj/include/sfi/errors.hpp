#pragma once

#include <stdexcept>
#include <string>

namespace sfi {

// All pipeline failures derive from Error so the CLI can map them to exit codes.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct NonFiniteIntegrand : Error {
  explicit NonFiniteIntegrand(const std::string& msg) : Error("non-finite integrand: " + msg) {}
};

struct TailUnbounded : Error {
  explicit TailUnbounded(const std::string& msg) : Error("tail-unbounded integrand: " + msg) {}
};

struct GridMismatch : Error {
  explicit GridMismatch(const std::string& msg) : Error("grid mismatch: " + msg) {}
};

struct NotADensity : Error {
  explicit NotADensity(const std::string& msg) : Error("not a density: " + msg) {}
};

struct NotIntegrable : Error {
  explicit NotIntegrable(const std::string& msg) : Error("not integrable: " + msg) {}
};

struct ExtremalLaw : Error {
  explicit ExtremalLaw(const std::string& msg) : Error("extremal law: " + msg) {}
};

struct FitFailed : Error {
  explicit FitFailed(const std::string& msg) : Error("fit failed: " + msg) {}
};

struct ParseError : Error {
  explicit ParseError(const std::string& msg) : Error("parse error: " + msg) {}
};

struct ValidationError : Error {
  explicit ValidationError(const std::string& msg) : Error("validation error: " + msg) {}
};

}  // namespace sfi
