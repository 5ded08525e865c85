#pragma once

#include <string>
#include <vector>

#include "punc/eig.hpp"
#include "punc/matrix.hpp"

namespace punc {

// A single invariant violation. Violations are data, not exceptions: a
// validator returns every problem it found so the CLI can print them all.
struct Violation {
  std::string kind;      // e.g. "povm-sum", "non-unital", "dim-mismatch"
  std::string where;     // node/unit id or field name, empty for global
  double residual = 0.0; // magnitude of the violation where meaningful
  std::string message;
};

using ValidationReport = std::vector<Violation>;

// Set of PSD matrices, one per outcome, summing to the identity.
struct Povm {
  std::size_t dim = 0;
  std::vector<ComplexMatrix> elements;

  std::size_t outcomes() const { return elements.size(); }
};

// POVM whose elements sum to some M <= identity instead of the identity.
struct NoisyPovm {
  std::size_t dim = 0;
  std::vector<ComplexMatrix> elements;
  ComplexMatrix bound;        // the sum M
  bool strictly_noisy = false; // identity - M has all eigenvalues > tol
};

// PSD matrix of trace one.
struct DensityMatrix {
  ComplexMatrix mat;

  std::size_t dim() const { return mat.rows(); }
};

// Map on PSD matrices given by a finite Kraus set: e -> sum_j K_j e K_j*.
// All Kraus operators share the shape out_dim x in_dim.
struct QuantumOperation {
  std::vector<ComplexMatrix> kraus;

  std::size_t in_dim() const { return kraus.empty() ? 0 : kraus.front().cols(); }
  std::size_t out_dim() const { return kraus.empty() ? 0 : kraus.front().rows(); }
};

ValidationReport validate_povm(const Povm& p, double tol = kDefaultTol);
ValidationReport validate_density(const DensityMatrix& rho, double tol = kDefaultTol);

NoisyPovm make_noisy_povm(std::size_t dim, std::vector<ComplexMatrix> elements,
                          double tol = kDefaultTol);
ValidationReport validate_noisy_povm(const NoisyPovm& p, double tol = kDefaultTol);

// Tr[rho e], real part, clamped to [0, 1]. Checks that e is PSD, that the
// dimensions agree and that the imaginary residual stays below 1e-10.
double event_probability(const DensityMatrix& rho, const ComplexMatrix& e,
                         double tol = kDefaultTol);

ComplexMatrix apply_operation(const QuantumOperation& phi, const ComplexMatrix& e);

// Maps the identity to the identity.
bool is_unital(const QuantumOperation& phi, double tol = kDefaultTol);

// Kraus validity: sum_j K_j* K_j <= identity in the Loewner order.
bool check_validity(const QuantumOperation& phi, double tol = kDefaultTol);

// Convex combination of operations: Kraus union of sqrt(w_j) K over each op.
QuantumOperation compose_convex(const std::vector<double>& weights,
                                const std::vector<QuantumOperation>& ops,
                                double tol = kDefaultTol);

}  // namespace punc
