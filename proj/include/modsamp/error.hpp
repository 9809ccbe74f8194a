#pragma once

#include <stdexcept>
#include <string>

namespace modsamp {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid parameters or configuration. The CLI maps this to exit code 2.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A closed-form bound has no solution for the requested parameters.
class InfeasibleError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

/// Malformed or out-of-contract input data. The CLI maps this to exit code 3.
class DataError : public Error {
public:
    using Error::Error;
};

class RankDeficientError : public DataError {
public:
    using DataError::DataError;
};

/// Raised only by strict-mode callers when an unwrap fails its consistency check.
class ContractViolation : public Error {
public:
    using Error::Error;
};

}  // namespace modsamp
