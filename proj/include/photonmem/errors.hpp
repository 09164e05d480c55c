#pragma once

#include <stdexcept>
#include <string>

namespace photonmem {

// Base class for all domain errors raised by this library. Argument/contract
// violations use std::invalid_argument directly.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A metric (visibility, similarity) is undefined for the given data,
// e.g. an all-zero profile or image.
class UndefinedMetricError : public Error {
public:
    using Error::Error;
};

// Normalization of a correlation requires nonzero singles rates and duration.
class NormalizationError : public Error {
public:
    using Error::Error;
};

// A calibration target cannot be met with the given fixed parameters.
class NoSolutionError : public Error {
public:
    using Error::Error;
};

// A counting statistic has an empty denominator (no coincidences recorded).
class InsufficientStatisticsError : public Error {
public:
    using Error::Error;
};

// Fit cannot constrain one or more parameters; message names the parameter.
class IllConditionedFitError : public Error {
public:
    using Error::Error;
};

// Tomographic inversion failed (degenerate or incomplete measurement data).
class IllConditionedReconstructionError : public Error {
public:
    using Error::Error;
};

// Fringe or profile data violates the model preconditions (e.g. non-positive
// mean count level).
class InvalidDataError : public Error {
public:
    using Error::Error;
};

// Malformed input file; carries the 1-based line number of the offending row.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// Input stream file is not time-ordered; callers must sort explicitly.
class UnsortedStreamError : public Error {
public:
    using Error::Error;
};

// Bad configuration file; carries the 1-based line number when known.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(what), line_(0) {}
    ConfigError(const std::string& what, std::size_t line)
        : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

} // namespace photonmem
