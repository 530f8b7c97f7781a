#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace embq {

/// Failure category. The numeric values double as CLI exit codes.
enum class ErrorKind : int {
  usage = 1,   // bad flags or arguments
  data = 2,    // malformed or non-finite input
  domain = 3,  // quantity mathematically undefined for this input
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what) : Error(ErrorKind::usage, what) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(ErrorKind::data, what) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::domain, what) {}
};

struct UndefinedMetric {
  std::string metric;
  std::string reason;
};

/// Raised by full_report when one or more metrics cannot be evaluated.
/// Carries every failing metric, not only the first.
class MetricsError : public DomainError {
 public:
  explicit MetricsError(std::vector<UndefinedMetric> failures);

  const std::vector<UndefinedMetric>& failures() const noexcept { return failures_; }

 private:
  std::vector<UndefinedMetric> failures_;
};

}  // namespace embq
