#pragma once

#include <json.hpp>
#include <variant>

#include "dimwit/behaviour.hpp"
#include "dimwit/linalg.hpp"
#include "dimwit/noise.hpp"
#include "dimwit/search.hpp"
#include "dimwit/strategy.hpp"
#include "dimwit/witness.hpp"

namespace dimwit {

using json = nlohmann::json;

using AnyBehaviour = std::variant<PMBehaviour, BellBehaviour>;
using AnyStrategy = std::variant<ClassicalPMStrategy, QuantumPMStrategy, BellQuantumStrategy>;

// Behaviour files:
//   {"kind": "pm",   "scenario": {"n_inputs_a": X, "n_inputs_b": Y, "n_outputs": 2},
//    "probs": [b][x][y]}
//   {"kind": "bell", "scenario": {"m": m, "n": n}, "probs": [a][b][x][y]}
// Numbers are JSON numbers (floating) or strings "p/q" (exact); one file uses one form.

json scalar_to_json(const Scalar& s);
Scalar scalar_from_json(const json& j);

json to_json(const PMBehaviour& beh);
json to_json(const BellBehaviour& beh);
json to_json(const AnyBehaviour& beh);

/// Throws StructuralError on malformed input, shape mismatch, general-output PM
/// scenarios and files mixing float and rational numbers.
AnyBehaviour behaviour_from_json(const json& j);

// Strategy files mirror the strategy structs; complex entries are [re, im] pairs.
//   {"kind": "classical_pm", "d", "scenario", "sender": [x][m], "responder": [m][y][b]}
//   {"kind": "quantum_pm", "d", "scenario", "states": [x], "povms": [y][b], "povm_law"}
//   {"kind": "bell_quantum", "dA", "dB", "scenario", "state", "meas_a": [x][a],
//    "meas_b": [y][b], "povm_law"}
json to_json(const ClassicalPMStrategy& st);
json to_json(const QuantumPMStrategy& st);
json to_json(const BellQuantumStrategy& st);
AnyStrategy strategy_from_json(const json& j);

json cmatrix_to_json(const CMatrix& m);
CMatrix cmatrix_from_json(const json& j);

// Noise files:
//   {"kind": "pm_measurement", "table": [y][b]}
//   {"kind": "bell_product", "alice": [x][a], "bob": [y][b]}
json to_json(const NoiseModel& model);
NoiseModel noise_from_json(const json& j);

json to_json(const ValidationReport& r);
json to_json(const RankResult& r);
json to_json(const WitnessVerdict& v);
json to_json(const AppendixRelation& r);
json to_json(const FactorizationResult& r);
json to_json(const MembershipCertificate& c);
json to_json(const SeparationReport& r);
json to_json(const RobustnessReport& r);

json matrix_to_json(const Matrix& m);

/// Parses an eta or weight given as text: "p/q" or a decimal literal, both exact.
Scalar parse_exact_decimal(const std::string& text);

}  // namespace dimwit
