#pragma once

#include "punc/sd_punc.hpp"

namespace punc {

// Raised when a circuit cannot be converted to the requested family.
class ConversionError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Partition circuit whose units are semi-unitary matrices acting on
// vectors: leaves map basis vectors, internal units map the Kronecker
// product of their children. Probability is the quadratic form with rho.
struct PsdCircuit {
  PartitionCircuit tree;
  std::map<std::size_t, ComplexMatrix> leaf_mats;       // leaf id -> U (out x cardinality)
  std::map<std::size_t, ComplexMatrix> internal_mats;   // node id -> U (out x dl*dr)
  DensityMatrix rho;
};

// Partition-tree probabilistic circuit: nonnegative leaf vectors that sum
// (over values) to the all-ones vector, and row-stochastic weight matrices.
// The circuit's distribution reads entry 0 of the root vector.
struct ProbCircuitPT {
  PartitionCircuit tree;
  // leaf id -> one vector per variable value
  std::map<std::size_t, std::vector<std::vector<double>>> leaf_tables;
  // internal id -> weight matrix as rows
  std::map<std::size_t, std::vector<std::vector<double>>> internal_weights;
};

// Unital operation whose Kraus operators are J_j D_j: D_j a diagonal factor
// with Tr[D_j D_j*] = 1 and J_j the matrix that is all ones in row j and
// zero elsewhere. One factor per output dimension.
struct DiagonalOperation {
  std::vector<std::vector<cplx>> diag_factors;  // diag_factors[j] has length in_dim

  std::size_t out_dim() const { return diag_factors.size(); }
  std::size_t in_dim() const { return diag_factors.empty() ? 0 : diag_factors.front().size(); }
};

// Product of a [0,1]-valued circuit q and a PUnC o over the same partition
// tree; induces the sub-complete distribution pi(x) = q(x) Tr[O(x) rho].
struct NoisePunc {
  ProbCircuitPT q;
  SdPunc o;
};

// --- PSD circuits --------------------------------------------------------

struct PsdEval {
  ComplexMatrix root_vector;
  double probability = 0.0;
};

ValidationReport validate_psd_circuit(const PsdCircuit& c, double tol = kDefaultTol);
PsdEval eval_psd_circuit(const PsdCircuit& c, const Assignment& x);

// Single-Kraus SdPunc with K_k = U_k and projector-image leaves; encodes
// the same distribution and propagates rank-one operators only.
SdPunc psd_to_pure_punc(const PsdCircuit& c, double tol = kDefaultTol);

// --- Probabilistic circuits in partition-tree form ------------------------

ValidationReport validate_prob_circuit(const ProbCircuitPT& c, double tol = kDefaultTol);
std::vector<double> eval_prob_circuit(const ProbCircuitPT& c, const Assignment& x);
// Vector value of every node, indexed by node id.
std::vector<std::vector<double>> eval_prob_circuit_nodes(const ProbCircuitPT& c,
                                                         const Assignment& x);
double pc_probability(const ProbCircuitPT& c, const Assignment& x);
// One-pass marginal: marginalized leaves contribute the all-ones vector.
double pc_marginal(const ProbCircuitPT& c, const MarginalQuery& q);

// The all-ones-row selector J_j (rows x cols, ones in row j).
ComplexMatrix row_selector(std::size_t j, std::size_t rows, std::size_t cols);

QuantumOperation make_diagonal_operation(const DiagonalOperation& d, double tol = kDefaultTol);

// Diagonal PUnC with leaves diag(P), operations from sqrt of weight rows,
// and rho = diag(1, 0, ..., 0).
SdPunc pc_to_diagonal_punc(const ProbCircuitPT& c, double tol = kDefaultTol);

// Inverse direction; detects diagonal structure numerically (off-diagonal
// magnitudes <= 1e-10) and rejects circuits that do not qualify.
ProbCircuitPT diagonal_punc_to_pc(const SdPunc& c);

// --- NoisePUnCs -----------------------------------------------------------

ValidationReport validate_noise_punc(const NoisePunc& c, double tol = kDefaultTol);

// pi(x) = q(x) * Tr[O(x) rho], in [0, 1].
double noisy_punc_unnormalized(const NoisePunc& c, const Assignment& x);

// Sum of pi over completions of the evidence, computed in one joint pass
// over the shared tree.
double noisy_punc_marginal(const NoisePunc& c, const MarginalQuery& q);

// Z = sum_x pi(x).
double noisy_punc_normalizer(const NoisePunc& c);

// pi(x) / Z. Throws NumericalError when Z is (numerically) zero.
double noisy_punc_conditional(const NoisePunc& c, const Assignment& x,
                              double zero_tol = 1e-12);

struct OperatorMixture {
  std::vector<double> weights;
  std::vector<ComplexMatrix> summands;  // PSD, one per mixture component
  ComplexMatrix mixture;                // weighted sum; equals q_ki(x) O_k(x)
};

// Expands output index i of internal node `o_node_id` (id in the o-circuit
// tree) into its operator mixture for the given total assignment.
OperatorMixture expand_operator_mixture(const NoisePunc& c, std::size_t o_node_id,
                                        std::size_t i, const Assignment& x);

}  // namespace punc
