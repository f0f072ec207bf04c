#pragma once

#include <stdexcept>
#include <string>

namespace hyperion {

// Bad input data: malformed configs, invalid partitions, nonpositive costs.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// No partition satisfies the per-tier memory capacities, even ignoring latency.
class InfeasibleMemoryError : public std::runtime_error {
 public:
  InfeasibleMemoryError(int tier, const std::string& msg)
      : std::runtime_error(msg), tier_(tier) {}
  // 1-based index of the first tier at which no feasible prefix exists.
  int tier() const { return tier_; }

 private:
  int tier_;
};

// Every node in the tier is either down or lacks memory for the activation.
class NoFeasibleNodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Brute-force enumeration would exceed the configured candidate cap.
class EnumerationCapError : public std::runtime_error {
 public:
  EnumerationCapError(unsigned long long count, const std::string& msg)
      : std::runtime_error(msg), count_(count) {}
  unsigned long long count() const { return count_; }

 private:
  unsigned long long count_;
};

}  // namespace hyperion
