#pragma once

#include <map>
#include <set>

#include "punc/partition.hpp"
#include "punc/quantum.hpp"

namespace punc {

// Variable index -> value index. Partial assignments are allowed where noted.
using Assignment = std::map<std::size_t, std::size_t>;

// Builds {0: values[0], 1: values[1], ...}.
Assignment assignment_from_values(const std::vector<std::size_t>& values);

struct MarginalQuery {
  Assignment evidence;
  std::set<std::size_t> marginalized;
};

// Structured-decomposable positive unital circuit: a partition tree whose
// leaves carry one POVM per variable, whose internal nodes carry unital
// quantum operations, plus a root density matrix.
struct SdPunc {
  PartitionCircuit tree;
  std::map<std::size_t, Povm> leaf_povms;             // keyed by leaf node id
  std::map<std::size_t, QuantumOperation> internal_ops;  // keyed by internal node id
  DensityMatrix rho;
};

// Output dimension of a node's operator.
std::size_t node_out_dim(const SdPunc& c, std::size_t id);

// Checks POVM validity per leaf, unitality and dimension chaining per
// internal node, and the density matrix. Violations name the node id.
ValidationReport validate(const SdPunc& c, double tol = kDefaultTol);

struct EvalStats {
  std::size_t node_evaluations = 0;
};

// Operator value O(x) of the root for a total assignment.
ComplexMatrix evaluate(const SdPunc& c, const Assignment& x, EvalStats* stats = nullptr);

// Operator value of every node, indexed by node id.
std::vector<ComplexMatrix> evaluate_nodes(const SdPunc& c, const Assignment& x);

// Tr[O(x) rho], clamped to [0, 1].
double probability(const SdPunc& c, const Assignment& x);

// Marginal probability in a single forward pass: marginalized leaves emit
// the identity of the leaf dimension, evidence leaves emit their element.
double marginal(const SdPunc& c, const MarginalQuery& q, EvalStats* stats = nullptr);

// Rewrites every Hadamard-mode node to Kronecker mode by folding the
// principal-submatrix selection into the node's Kraus operators.
SdPunc to_kronecker_form(const SdPunc& c);

}  // namespace punc
