// Copyright 2026 The tsnpdc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace tsnpdc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TimeOverflow : public Error {
 public:
  using Error::Error;
};

class PastEvent : public Error {
 public:
  using Error::Error;
};

class MissingTag : public Error {
 public:
  using Error::Error;
};

class QueueOverflow : public Error {
 public:
  using Error::Error;
};

class ModeMismatch : public Error {
 public:
  using Error::Error;
};

class BadParams : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Histogram CSV problems. `kind` distinguishes the three failure classes.
class HistogramError : public Error {
 public:
  enum class Kind { MalformedRow, NonMonotoneEdges, BadMass };
  HistogramError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line, int column)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> violations)
      : Error(join(violations)), violations_(std::move(violations)) {}
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out = "scenario validation failed";
    for (const auto& s : v) out += "\n  - " + s;
    return out;
  }
  std::vector<std::string> violations_;
};

}  // namespace tsnpdc
