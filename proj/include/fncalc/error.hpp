#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fncalc {

/// Base of every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ZeroDenominator : public Error {
 public:
  ZeroDenominator() : Error("zero denominator") {}
};

class PoleError : public Error {
 public:
  PoleError() : Error("pole at evaluation point") {}
};

class IndexError : public Error {
 public:
  using Error::Error;
};

class ChartMismatch : public Error {
 public:
  ChartMismatch() : Error("chart mismatch") {}
};

class DegreeMismatch : public Error {
 public:
  using Error::Error;
};

class NotInvertible : public Error {
 public:
  NotInvertible() : Error("endomorphism not invertible") {}
};

class NotDerivation : public Error {
 public:
  NotDerivation() : Error("input is not a graded derivation") {}
};

class PreconditionViolation : public Error {
 public:
  using Error::Error;
};

class RankDeficient : public Error {
 public:
  using Error::Error;
};

class NotStabilized : public Error {
 public:
  using Error::Error;
};

class NoRealPoints : public Error {
 public:
  NoRealPoints() : Error("no real points located") {}
};

/// Syntax or resolution failure with a 1-based source location.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(what + " at " + std::to_string(line) + ":" + std::to_string(column)),
        reason_(what),
        line_(line),
        column_(column) {}

  /// Message without the location suffix.
  const std::string& reason() const { return reason_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::string reason_;
  std::size_t line_;
  std::size_t column_;
};

}  // namespace fncalc
