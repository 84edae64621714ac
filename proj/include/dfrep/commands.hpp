#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dfrep/scenario.hpp"

namespace dfrep::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitInputError = 2;

enum class OutputFormat { json, csv };

struct Flags {
  std::optional<std::uint64_t> seed;
  std::optional<Index> samples;
  std::vector<Index> dims;
  std::optional<Index> block_rank;
  std::optional<double> tolerance;
  OutputFormat format = OutputFormat::json;
  // Wall-clock fields are zero unless requested, so default output is
  // byte-for-byte reproducible.
  bool timings = false;
};

struct CommandResult {
  int exit_code = kExitPass;
  std::string output;
};

const std::vector<std::string_view>& command_names();

// Input problems (unknown command, validation, dimension exclusion) are
// thrown; axiom and condition violations become exit code 1 records.
CommandResult run_command(std::string_view command, const Scenario& scenario, const Flags& flags,
                          std::string_view scenario_text);

// %.17g
std::string format_double(double v);
// FNV-1a 64 of the scenario bytes, as 16 hex digits.
std::string scenario_hash(std::string_view text);

}  // namespace dfrep::cli
