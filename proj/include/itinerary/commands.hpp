#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>

#include "itinerary/error.hpp"

namespace itinerary {

struct CommandOptions {
  std::string command;  // validate, facts, weights, plan, simulate, dot
  std::string scenario;
  std::optional<std::size_t> depth;
  std::optional<std::size_t> max_steps;
  std::optional<std::string> eq1_mode;
  std::string target;  // dot only
};

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int validation_failure = 1;
inline constexpr int parse_error = 2;
inline constexpr int limit_exceeded = 3;
}  // namespace exit_code

int exit_code_for(ErrorCode code) noexcept;

/// Runs one command, writing results to `out` and diagnostics to `err`, and
/// returns the process exit status.
int run_command(const CommandOptions& options, std::ostream& out, std::ostream& err);

}  // namespace itinerary
