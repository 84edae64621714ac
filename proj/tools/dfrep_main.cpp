#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "dfrep/commands.hpp"
#include "dfrep/errors.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw dfrep::ValidationError("--scenario: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
  using dfrep::cli::Flags;
  using dfrep::cli::OutputFormat;

  CLI::App app{"Decoherence functional representations: axiom checks, ILS extraction, tracial operators, probes"};
  std::string command, scenario_path, out_path, format = "json";
  std::uint64_t seed = 0;
  dfrep::Index samples = 0, block_rank = 0;
  double tolerance = 0.0;
  Flags flags;

  std::string names;
  for (auto n : dfrep::cli::command_names()) names += (names.empty() ? "" : ", ") + std::string(n);
  app.add_option("command", command, "One of: " + names)->required();
  app.add_option("--scenario", scenario_path, "Scenario JSON file")->required();
  app.add_option("--out", out_path, "Write output here instead of stdout");
  auto* seed_opt = app.add_option("--seed", seed, "Override the scenario seed");
  auto* samples_opt = app.add_option("--samples", samples, "Sample count for probes and fidelity checks");
  app.add_option("--dims", flags.dims, "Sweep dimensions, e.g. 2,3,4,6")->delimiter(',');
  auto* block_opt = app.add_option("--block-rank", block_rank, "Block rank for the tracial double sum");
  auto* tol_opt = app.add_option("--tolerance", tolerance, "Override the command tolerance");
  app.add_option("--format", format, "json or csv (csv: sweep only)")->check(CLI::IsMember({"json", "csv"}));
  app.add_flag("--timings", flags.timings, "Record wall-clock timings");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return dfrep::cli::kExitInputError;
  }

  if (*seed_opt) flags.seed = seed;
  if (*samples_opt) flags.samples = samples;
  if (*block_opt) flags.block_rank = block_rank;
  if (*tol_opt) flags.tolerance = tolerance;
  flags.format = format == "csv" ? OutputFormat::csv : OutputFormat::json;

  dfrep::cli::CommandResult result;
  try {
    if (flags.samples && *flags.samples < 1) throw dfrep::ValidationError("--samples: must be >= 1");
    const std::string text = read_file(scenario_path);
    const auto scenario = dfrep::cli::parse_scenario(text);
    result = dfrep::cli::run_command(command, scenario, flags, text);
  } catch (const dfrep::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return dfrep::cli::kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return dfrep::cli::kExitInputError;
  }

  if (out_path.empty()) {
    std::cout << result.output;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::cerr << "error: --out: cannot open '" << out_path << "'\n";
      return dfrep::cli::kExitInputError;
    }
    out << result.output;
  }
  return result.exit_code;
}
