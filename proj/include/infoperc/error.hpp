#pragma once

#include <map>
#include <stdexcept>
#include <string>

namespace infoperc {

enum class ErrorKind {
  InvalidArgument,
  InvalidGraph,
  Capacity,
  BudgetExceeded,
  Supercritical,
  Integrity,
  InvalidConfig,
};

const char* to_string(ErrorKind kind) noexcept;

// Base of every error raised by the library. `details` is a machine-readable
// payload (partial estimates, offending sizes) that the CLI echoes verbatim.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what,
        std::map<std::string, double> details = {})
      : std::runtime_error(what), kind_(kind), details_(std::move(details)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::map<std::string, double>& details() const noexcept { return details_; }

 private:
  ErrorKind kind_;
  std::map<std::string, double> details_;
};

#define INFOPERC_DEFINE_ERROR(Name, Kind)                                        \
  class Name : public Error {                                                    \
   public:                                                                       \
    explicit Name(const std::string& what,                                       \
                  std::map<std::string, double> details = {})                    \
        : Error(ErrorKind::Kind, what, std::move(details)) {}                    \
  };

INFOPERC_DEFINE_ERROR(InvalidArgument, InvalidArgument)
INFOPERC_DEFINE_ERROR(InvalidGraph, InvalidGraph)
INFOPERC_DEFINE_ERROR(CapacityError, Capacity)
INFOPERC_DEFINE_ERROR(BudgetExceeded, BudgetExceeded)
INFOPERC_DEFINE_ERROR(IntegrityError, Integrity)
INFOPERC_DEFINE_ERROR(ConfigError, InvalidConfig)

#undef INFOPERC_DEFINE_ERROR

// SupercriticalError lives in history.hpp since it carries a partial History.

}  // namespace infoperc
