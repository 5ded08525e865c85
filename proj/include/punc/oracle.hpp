#pragma once

#include <functional>
#include <string>

#include "punc/sd_punc.hpp"

namespace punc {

// Exhaustive assignment -> probability table in lexicographic order with
// variable 0 slowest. Ground truth for every circuit equivalence check.
struct CircuitDistribution {
  std::vector<std::size_t> cardinalities;
  std::vector<double> probabilities;

  double mass() const;
};

inline constexpr std::size_t kMaxOracleStates = std::size_t{1} << 20;

std::size_t state_space_size(const std::vector<std::size_t>& cardinalities);

// Calls `visit` with every total assignment in lexicographic order.
void for_each_assignment(const std::vector<std::size_t>& cardinalities,
                         const std::function<void(const Assignment&)>& visit);

CircuitDistribution enumerate_distribution(
    const std::function<double(const Assignment&)>& prob_fn,
    const std::vector<std::size_t>& cardinalities);

// Sum of eval_fn over all assignments; the operator-closure check.
ComplexMatrix operator_sum(const std::function<ComplexMatrix(const Assignment&)>& eval_fn,
                           const std::vector<std::size_t>& cardinalities);

struct DistComparison {
  bool equal = false;
  double max_deviation = 0.0;
};

DistComparison distributions_equal(const CircuitDistribution& a, const CircuitDistribution& b,
                                   double atol);

// One row "x0 x1 ... p" per assignment, probabilities with 17 significant digits.
std::string to_table(const CircuitDistribution& d);

}  // namespace punc
