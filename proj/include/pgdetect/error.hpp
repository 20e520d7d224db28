#pragma once

#include <stdexcept>
#include <string>

namespace pgdetect {

/// Precondition violated by a caller-supplied value.
class InvalidInput : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A training-set denominator ordinate is zero (or underflowed to zero).
class DegenerateTraining : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A test statistic has a zero denominator.
class DegenerateInput : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Series truncation or root bracketing failed.
class NumericError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Experiment configuration is malformed or inconsistent.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A series file could not be parsed.
class IngestionError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace pgdetect
