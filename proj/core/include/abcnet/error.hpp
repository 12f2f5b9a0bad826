// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace abcnet {

/// Coarse classification used by the CLI to pick an exit code.
enum class ErrorKind {
  Validation,  // bad arguments, schema violations, shape mismatches
  Io,          // unreadable/unwritable files, corrupt binary payloads
  Numeric,     // degenerate geometry, singular systems, overflow
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::Validation, what) {}
};

/// Inconsistent tensor shapes or vector dimensions.
class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what) : Error(ErrorKind::Validation, what) {}
};

/// Malformed JSON document or tensor header.
class FormatError : public Error {
 public:
  explicit FormatError(const std::string& what) : Error(ErrorKind::Validation, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::Io, what) {}
};

/// Geometry collapsed (zero-length polyline, zero-area quad, ...).
class DegenerateError : public Error {
 public:
  explicit DegenerateError(const std::string& what) : Error(ErrorKind::Numeric, what) {}
};

class RankDeficientError : public Error {
 public:
  explicit RankDeficientError(const std::string& what) : Error(ErrorKind::Numeric, what) {}
};

class OverflowError : public Error {
 public:
  explicit OverflowError(const std::string& what) : Error(ErrorKind::Numeric, what) {}
};

}  // namespace abcnet
