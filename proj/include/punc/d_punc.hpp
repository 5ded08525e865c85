#pragma once

#include "punc/sd_punc.hpp"

namespace punc {

enum class UnitKind { kLeaf, kProduct, kSum };

struct SumInput {
  std::size_t unit = 0;
  double weight = 0.0;
  QuantumOperation op;
};

// One unit of a decomposable PUnC DAG. Leaves carry a variable and its
// POVM, products combine exactly two inputs with a Kronecker product, sums
// form convex combinations of unital operations applied to their inputs.
struct DPuncUnit {
  std::size_t id = 0;
  UnitKind kind = UnitKind::kLeaf;
  // leaf
  std::size_t variable = 0;
  Povm povm;
  // product
  std::size_t left = 0;
  std::size_t right = 0;
  // sum
  std::vector<SumInput> inputs;
};

struct DPunc {
  std::vector<DPuncUnit> units;  // dense ids: units[i].id == i
  std::size_t root = 0;
  std::vector<std::size_t> cardinalities;
  DensityMatrix rho;
};

// Scalar probabilistic circuit over the same DAG shape.
struct DProbUnit {
  std::size_t id = 0;
  UnitKind kind = UnitKind::kLeaf;
  std::size_t variable = 0;
  std::vector<double> table;  // leaf: one value per variable value
  std::size_t left = 0;
  std::size_t right = 0;
  std::vector<std::pair<std::size_t, double>> inputs;  // sum: (unit, weight)
};

struct DProbCircuit {
  std::vector<DProbUnit> units;
  std::size_t root = 0;
  std::vector<std::size_t> cardinalities;
};

// Scope per unit id (sorted variable indices). Throws on cycles or
// malformed references; scope of a sum is the union of its input scopes.
std::vector<std::vector<std::size_t>> compute_scopes(const DPunc& c);

// Output dimension per unit id.
std::vector<std::size_t> compute_out_dims(const DPunc& c);

// Reports cycles, decomposability/smoothness violations, non-unital
// operations, invalid leaf POVMs, weight violations and dimension breaks.
ValidationReport validate(const DPunc& c, double tol = kDefaultTol);

// Every pair of equal-scope products splits into the same unordered pair
// of child scopes.
bool is_structured_decomposable(const DPunc& c);

// Memoized evaluation; each reachable unit is computed exactly once.
ComplexMatrix evaluate(const DPunc& c, const Assignment& x, EvalStats* stats = nullptr);

double probability(const DPunc& c, const Assignment& x);

double marginal(const DPunc& c, const MarginalQuery& q, EvalStats* stats = nullptr);

// Embeds a structured-decomposable circuit: every internal tree node
// becomes a product unit feeding a single-input sum unit of weight one
// carrying the node's operation. Hadamard nodes are rewritten first.
DPunc embed_sd(const SdPunc& c);

// For circuits whose dimensions are all one: the scalar circuit with the
// same DAG shape; leaf tables from the 1x1 POVM entries, operations dropped.
DProbCircuit scalar_shadow(const DPunc& c);

ValidationReport validate_dprob_circuit(const DProbCircuit& c, double tol = kDefaultTol);
double eval_dprob_circuit(const DProbCircuit& c, const Assignment& x);
double dprob_marginal(const DProbCircuit& c, const MarginalQuery& q);

}  // namespace punc
