#pragma once

// Scenario files: JSON objects with explicit re/im arrays.
//
//   {
//     "dimension": 3,
//     "seed": 7,
//     "tolerances": {"axiom": 1e-9, "condition": 1e-8, "consistency": 1e-9, "fidelity": 1e-9},
//     "sweep_dims": [2, 3, 4],
//     "functional": {"kind": "pure_state", "psi": {"re": [1, 0, 0], "im": [0, 0, 0]}}
//   }
//
// Other kinds: "operator" (key "operator", dim^2 x dim^2), "form" (key
// "gram", dim^2 x dim^2) and "class_operator" (key "model" with "rho",
// "hamiltonian", "times" and "schedules", a list of lists of projections).

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dfrep/decoherence.hpp"
#include "dfrep/histories.hpp"

namespace dfrep::cli {

struct Tolerances {
  double axiom = 1e-9;
  double condition = 1e-8;
  double consistency = 1e-9;
  double fidelity = 1e-9;

  bool operator==(const Tolerances&) const = default;
};

enum class FunctionalKind { operator_backed, pure_state, form_backed, class_operator };

std::string_view to_string(FunctionalKind kind);

struct Scenario {
  Index dimension = 0;
  FunctionalKind kind = FunctionalKind::pure_state;
  Matrix operator_entries;  // operator_backed
  Vector psi;               // pure_state
  Matrix gram;              // form_backed
  histories::ClassOperatorModel model;  // class_operator
  std::uint64_t seed = 0;
  Tolerances tolerances;
  std::vector<Index> sweep_dims;

  bool operator==(const Scenario& other) const;
};

// Throws ValidationError whose message starts with the offending field path.
Scenario parse_scenario(std::string_view text);
std::string serialize_scenario(const Scenario& scenario);

DecoherenceFunctional build_functional(const Scenario& scenario);

}  // namespace dfrep::cli
