#pragma once

#include <stdexcept>
#include <string>

namespace rcap {

// Bad user input: parse failures, invalid networks, out-of-range parameters.
struct input_error : std::runtime_error {
  explicit input_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A configured enumeration/row cap was exceeded.
struct resource_error : std::runtime_error {
  explicit resource_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Violated internal invariant (never expected on any input).
struct internal_error : std::logic_error {
  explicit internal_error(const std::string& msg) : std::logic_error(msg) {}
};

}  // namespace rcap
