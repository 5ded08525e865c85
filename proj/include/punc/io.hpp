#pragma once

#include <optional>
#include <string_view>
#include <variant>

#include "punc/generate.hpp"

namespace punc {

class ParseError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Family {
  kSdPunc,
  kPsdCircuit,
  kProbCircuitPT,
  kDPunc,
  kDProbCircuit,
  kNoisePunc,
};

const char* family_name(Family f);
std::optional<Family> family_from_name(std::string_view name);

using CircuitValue =
    std::variant<SdPunc, PsdCircuit, ProbCircuitPT, DPunc, DProbCircuit, NoisePunc>;

struct CircuitFile {
  Family family = Family::kSdPunc;
  CircuitValue value;
};

// Parses and validates a circuit file. Unknown fields are rejected under
// strict mode; validation failures surface as ParseError with the node id.
// Passing run_validators = false skips the family validator (structural
// checks still apply), so callers can collect violations themselves.
CircuitFile parse_circuit(const std::string& text, bool strict = true,
                          double tol = kDefaultTol, bool run_validators = true);

// Deterministic output: sorted keys, shortest round-trip decimals, complex
// scalars always as [re, im] pairs.
std::string write_circuit(const CircuitFile& file);

CircuitFile generate_circuit(const GeneratorConfig& cfg);

// Family-generic helpers used by the CLI and the test harness.
std::vector<std::size_t> circuit_cardinalities(const CircuitFile& file);
ValidationReport validate_circuit(const CircuitFile& file, double tol = kDefaultTol);
double circuit_probability(const CircuitFile& file, const Assignment& x);
double circuit_marginal(const CircuitFile& file, const MarginalQuery& q);

}  // namespace punc
