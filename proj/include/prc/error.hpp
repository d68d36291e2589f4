#pragma once

#include <stdexcept>
#include <string>

namespace prc {

// Base of every error raised by the library. `kind()` is a stable
// machine-readable tag used by the CLI's JSON error lines.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

// A required dataset/attribute is missing or has the wrong shape.
class SchemaError : public Error {
 public:
  SchemaError(std::string path, const std::string& what)
      : Error("schema_violation", what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error("io", what) {}
};

class ParameterError : public Error {
 public:
  explicit ParameterError(const std::string& what) : Error("parameter", what) {}
};

class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string& what) : Error("shape", what) {}
};

// A bar of (near) zero length, a hinge with a collapsed face, and similar.
class SingularConfiguration : public Error {
 public:
  SingularConfiguration(std::string element, const std::string& what)
      : Error("singular_configuration", what), element_(std::move(element)) {}
  const std::string& element() const noexcept { return element_; }

 private:
  std::string element_;
};

class DivergenceError : public Error {
 public:
  DivergenceError(double time, const std::string& what)
      : Error("divergence", what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

// An extractor asked for a channel the record does not carry.
class CapabilityError : public Error {
 public:
  explicit CapabilityError(const std::string& what) : Error("capability", what) {}
};

class RankDeficiency : public Error {
 public:
  explicit RankDeficiency(const std::string& what) : Error("rank_deficiency", what) {}
};

class ConfigurationError : public Error {
 public:
  explicit ConfigurationError(const std::string& what) : Error("configuration", what) {}
};

// An experiment bundle failed validation; the message lists every entry.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error("validation", what) {}
};

class StabilityError : public Error {
 public:
  explicit StabilityError(const std::string& what) : Error("stability", what) {}
};

class DegeneracyError : public Error {
 public:
  explicit DegeneracyError(const std::string& what) : Error("degeneracy", what) {}
};

// Operation would overwrite existing state without permission.
class RefusalError : public Error {
 public:
  explicit RefusalError(const std::string& what) : Error("refusal", what) {}
};

}  // namespace prc
