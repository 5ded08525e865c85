#pragma once

#include "punc/d_punc.hpp"
#include "punc/families.hpp"
#include "punc/rng.hpp"

namespace punc {

struct GeneratorConfig {
  std::uint64_t seed = 1;
  std::size_t num_vars = 4;
  std::size_t cardinality = 2;
  std::size_t leaf_dim = 2;
  std::size_t max_internal_dim = 4;
  std::size_t kraus_count = 2;
  std::string family = "sd_punc";
  bool structured = true;  // d_punc: single split structure vs mixed splits
  bool hadamard = false;   // sd_punc: mix Hadamard-mode internal nodes in
};

// Parameter building blocks. Everything is driven by the deterministic Rng
// so a fixed seed reproduces the same values on every run.

ComplexMatrix random_gaussian_matrix(Rng& rng, std::size_t rows, std::size_t cols);

// Orthonormal rows via modified Gram-Schmidt on complex Gaussian draws.
ComplexMatrix random_semi_unitary(Rng& rng, std::size_t rows, std::size_t cols);

// Slices a semi-unitary [K_1 ... K_D] (out x D*in) into Kraus blocks, so
// sum_j K_j K_j* is the identity by construction.
QuantumOperation random_unital_operation(Rng& rng, std::size_t in_dim, std::size_t out_dim,
                                         std::size_t kraus_count);

// Gram blocks of a semi-unitary: elements A_i A_i* summing to the identity.
Povm random_povm(Rng& rng, std::size_t dim, std::size_t outcomes);

NoisyPovm random_noisy_povm(Rng& rng, std::size_t dim, std::size_t outcomes);

DensityMatrix random_density(Rng& rng, std::size_t dim);

// Normalized exponentials of Gaussian draws.
std::vector<double> random_stochastic_row(Rng& rng, std::size_t n);

// Random binary partition tree over variables 0..num_vars-1.
std::unique_ptr<TreeSpec> random_tree_spec(Rng& rng, std::size_t num_vars);

SdPunc generate_sd_punc(const GeneratorConfig& cfg);
// Same parameters drawn onto a caller-provided tree shape.
SdPunc generate_sd_punc_on(const PartitionCircuit& tree, const GeneratorConfig& cfg, Rng& rng);

PsdCircuit generate_psd_circuit(const GeneratorConfig& cfg);
ProbCircuitPT generate_prob_circuit(const GeneratorConfig& cfg);
DPunc generate_d_punc(const GeneratorConfig& cfg);
DProbCircuit generate_d_prob_circuit(const GeneratorConfig& cfg);
NoisePunc generate_noise_punc(const GeneratorConfig& cfg);

}  // namespace punc
