#pragma once

#include <stdexcept>
#include <string>

namespace etalerep {

// Error taxonomy mirrors the CLI exit-code contract:
// input_error -> exit 3, check failures are report-level (exit 1),
// inconclusive norm schedules are report-level (exit 2).

struct input_error : std::runtime_error {
  explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

struct domain_error : std::runtime_error {
  explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

// Carries the minimal sufficient value when a depth/headroom budget is too small.
struct resource_error : std::runtime_error {
  resource_error(const std::string& what, long required_value)
      : std::runtime_error(what), required(required_value) {}
  long required;
};

struct degenerate_input_error : std::runtime_error {
  explicit degenerate_input_error(const std::string& what) : std::runtime_error(what) {}
};

// An ActionSpec rule broke a groupoid-action axiom; names the axiom.
struct action_spec_error : std::runtime_error {
  explicit action_spec_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace etalerep
