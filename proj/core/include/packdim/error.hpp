#pragma once

#include <stdexcept>
#include <string>

namespace packdim {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A law, option set or config value is malformed.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A node or sample cap was exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// E[sum T_i^0] <= 1: the construction dies out almost surely.
class SubcriticalError : public Error {
 public:
  using Error::Error;
};

/// Interval geometry violated (overlap, or no root below the ambient dimension).
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the domain of a function (gauge evaluated off its table, etc).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A caller broke a documented precondition.
class ContractError : public Error {
 public:
  using Error::Error;
};

/// The integral test cannot decide from the supplied data.
class UndeterminedIntegralError : public Error {
 public:
  using Error::Error;
};

/// The law violates a premise the covariance audit relies on (M1 >= 1).
class PremiseError : public Error {
 public:
  using Error::Error;
};

}  // namespace packdim
