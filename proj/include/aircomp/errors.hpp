// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace aircomp {

// Base of every error the library throws. kind() is a short machine-readable
// tag used by the CLI error prefix.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "error"; }
};

class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  const char* kind() const noexcept override { return "validation"; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class InvalidGeometry : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "geometry"; }
};

class DegenerateChannel : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "degenerate-channel"; }
};

class ProjectionUndefined : public Error {
 public:
  ProjectionUndefined(std::size_t pair)
      : Error("unimodular projection undefined for zero pair " + std::to_string(pair)),
        pair_(pair) {}
  const char* kind() const noexcept override { return "projection"; }
  std::size_t pair() const noexcept { return pair_; }

 private:
  std::size_t pair_;
};

class DivergenceError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "divergence"; }
};

class FormatError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "format"; }
};

class IoError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "io"; }
};

}  // namespace aircomp
