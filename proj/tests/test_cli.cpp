#include <doctest.h>

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dfrep/commands.hpp"
#include "dfrep/scenario.hpp"
#include "support/fixtures.hpp"

using namespace dfrep;
using namespace dfrep::cli;

namespace {

std::string fixture(const std::string& name) {
  std::ifstream in(std::string(DFREP_FIXTURE_DIR) + "/" + name, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

CommandResult run(const std::string& cmd, const std::string& file, const Flags& flags = {}) {
  const std::string text = fixture(file);
  return run_command(cmd, parse_scenario(text), flags, text);
}

}  // namespace

TEST_CASE("parse a minimal pure-state scenario") {
  const auto sc = parse_scenario(R"({"dimension": 3, "functional": {"kind": "pure_state", "psi": {"re": [1, 0, 0]}}})");
  CHECK(sc.dimension == 3);
  CHECK(sc.kind == FunctionalKind::pure_state);
  CHECK(sc.psi == fx::basis(3, 0));
  CHECK(sc.seed == 0);
  CHECK(sc.tolerances == Tolerances{});
}

TEST_CASE("operator scenario feeds the functional") {
  const auto sc = parse_scenario(fixture("operator_rho_half.json"));
  const auto d = build_functional(sc);
  const Projection e1 = linalg::rank_one_proj(fx::basis(3, 0));
  CHECK(std::abs(d.evaluate(e1, e1) - 0.25) < 1e-15);
}

TEST_CASE("scenario round trip") {
  for (const char* name : {"pure_state_dim3.json", "operator_rho_half.json", "form_symmetrized.json",
                           "class_trivial.json", "class_interfering.json"}) {
    CAPTURE(name);
    const auto sc = parse_scenario(fixture(name));
    const std::string text = serialize_scenario(sc);
    CHECK(parse_scenario(text) == sc);
    CHECK(serialize_scenario(parse_scenario(text)) == text);
  }
}

TEST_CASE("parse errors name the field") {
  CHECK_THROWS_WITH_AS(parse_scenario(fixture("class_bad_trace.json")), doctest::Contains("rho: trace"), ValidationError);
  CHECK_THROWS_WITH_AS(parse_scenario(fixture("malformed.json")), doctest::Contains("malformed JSON"), ValidationError);
  CHECK_THROWS_WITH_AS(parse_scenario(R"({"dimension": 3, "functional": {"kind": "pure_state", "psi": {"re": [1, 1, 0]}}})"),
                       doctest::Contains("functional.psi"), ValidationError);
  CHECK_THROWS_WITH_AS(parse_scenario(R"({"dimension": 2, "functional": {"kind": "pure_state", "psi": {"re": [1, 0, 0]}}})"),
                       doctest::Contains("functional.psi"), ValidationError);
  CHECK_THROWS_WITH_AS(parse_scenario(R"({"dimension": 2, "functional": {"kind": "wavefunction"}})"),
                       doctest::Contains("functional.kind"), ValidationError);
  CHECK_THROWS_WITH_AS(parse_scenario(R"({"functional": {"kind": "pure_state"}})"), doctest::Contains("dimension"),
                       ValidationError);
  CHECK_THROWS_WITH_AS(parse_scenario(R"({"dimension": 1, "functional": {"kind": "operator", "operator": {"re": [[1, 0]]}}})"),
                       doctest::Contains("functional.operator"), ValidationError);
}

TEST_CASE("non-Hermitian rho is rejected") {
  auto doc = nlohmann::json::parse(fixture("class_trivial.json"));
  doc["functional"]["model"]["rho"]["im"][0][1] = 0.1;
  CHECK_THROWS_WITH_AS(parse_scenario(doc.dump()), doctest::Contains("rho: not Hermitian"), ValidationError);
}

TEST_CASE("exit codes per command") {
  CHECK(run("check-axioms", "pure_state_dim3.json").exit_code == kExitPass);
  CHECK(run("check-axioms", "operator_trace2.json").exit_code == kExitViolation);
  CHECK(run("extract-ils", "form_symmetrized.json").exit_code == kExitPass);
  CHECK(run("verify-conditions", "operator_negative.json").exit_code == kExitViolation);
  CHECK(run("decompose", "operator_swap.json").exit_code == kExitViolation);
  CHECK(run("tracial", "operator_rho_half.json").exit_code == kExitPass);
  CHECK(run("consistency", "class_interfering.json").exit_code == kExitViolation);
  CHECK(run("reconstruct", "form_symmetrized.json").exit_code == kExitPass);
  CHECK_THROWS_WITH_AS(run("extract-ils", "pure_state_dim2.json"), doctest::Contains("dimension >= 3"),
                       DimensionExclusionError);
  CHECK_THROWS_AS(run("teleport", "pure_state_dim3.json"), ValidationError);
  CHECK_THROWS_AS(run("demo-pure-state", "operator_rho_half.json"), ValidationError);
  CHECK_THROWS_AS(run("consistency", "pure_state_dim3.json"), ValidationError);
  Flags csv;
  csv.format = OutputFormat::csv;
  CHECK_THROWS_AS(run("check-axioms", "pure_state_dim3.json", csv), ValidationError);
  CHECK_THROWS_AS(run("sweep", "form_symmetrized.json"), ValidationError);
}

TEST_CASE("JSON summary keys and echoed seed") {
  Flags flags;
  flags.seed = 99;
  const auto doc = nlohmann::json::parse(run("check-axioms", "pure_state_dim3.json", flags).output);
  for (const char* key : {"command", "verdict", "seed", "records", "scenario_hash"}) CHECK(doc.contains(key));
  CHECK(doc["seed"] == 99);
  CHECK(doc["command"] == "check-axioms");
  CHECK(doc["records"][0]["hermiticity_residual"].get<double>() <= 1e-9);
  CHECK_FALSE(doc.contains("timings"));
}

TEST_CASE("sweep CSV") {
  Flags flags;
  flags.format = OutputFormat::csv;
  const auto result = run("sweep", "pure_state_dim3.json", flags);
  CHECK(result.exit_code == kExitPass);
  std::istringstream lines(result.output);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "dim,trace_norm,sup_beta_rank_one,elapsed_ms");
  Index expected_dim = 2;
  while (std::getline(lines, line)) {
    std::istringstream cells(line);
    std::string dim, trace_norm;
    std::getline(cells, dim, ',');
    std::getline(cells, trace_norm, ',');
    CHECK(std::stol(dim) == expected_dim);
    CHECK(std::abs(std::stod(trace_norm) - static_cast<double>(expected_dim)) <= 1e-8);
    ++expected_dim;
  }
  CHECK(expected_dim == 9);

  const auto doc = nlohmann::json::parse(run("sweep", "pure_state_dim3.json").output);
  CHECK(doc["verdict"] == "divergence_evidence");
}

TEST_CASE("identical inputs give identical bytes") {
  for (const auto& cmd : command_names()) {
    const std::string file = cmd == "consistency" ? "class_trivial.json" : "pure_state_dim3.json";
    CHECK(run(std::string(cmd), file).output == run(std::string(cmd), file).output);
  }
}

TEST_CASE("format_double and scenario_hash") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(2.0) == "2");
  CHECK(scenario_hash("") == "cbf29ce484222325");
  CHECK(scenario_hash("a") == "af63dc4c8601ec8c");
}
