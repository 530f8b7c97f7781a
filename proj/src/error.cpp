#include "embq/error.hpp"

namespace embq {
namespace {

std::string describe(const std::vector<UndefinedMetric>& failures) {
  std::string out = "undefined metrics:";
  for (const auto& f : failures) {
    out += "\n  ";
    out += f.metric;
    out += ": ";
    out += f.reason;
  }
  return out;
}

}  // namespace

MetricsError::MetricsError(std::vector<UndefinedMetric> failures)
    : DomainError(describe(failures)), failures_(std::move(failures)) {}

}  // namespace embq
