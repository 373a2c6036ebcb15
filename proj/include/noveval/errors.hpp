#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace noveval {

// Root of every error thrown by the library. Callers that only need a
// message can catch this; the CLI maps the concrete types to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A class label that is not part of the split (or taxonomy) it was checked
// against.
class UnknownLabel : public InvalidArgument {
 public:
  explicit UnknownLabel(std::string label)
      : InvalidArgument("unknown class label '" + label + "'"),
        label_(std::move(label)) {}

  const std::string& label() const noexcept { return label_; }

 private:
  std::string label_;
};

class NotFound : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed bytes on disk: bad magic, version, truncation, checksum, sidecar.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Well-formed data that violates a content invariant (NaN rows, zero-norm
// rows, duplicate ids). Carries the offending row when there is one.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what,
                           std::optional<std::size_t> row = std::nullopt)
      : Error(what), row_(row) {}

  std::optional<std::size_t> row() const noexcept { return row_; }

 private:
  std::optional<std::size_t> row_;
};

class UndefinedMetric : public Error {
 public:
  using Error::Error;
};

}  // namespace noveval
