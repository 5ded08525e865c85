#include "punc/oracle.hpp"

#include <cstdio>

namespace punc {

double CircuitDistribution::mass() const {
  double m = 0.0;
  for (double p : probabilities) m += p;
  return m;
}

std::size_t state_space_size(const std::vector<std::size_t>& cardinalities) {
  std::size_t total = 1;
  for (std::size_t c : cardinalities) {
    if (c == 0) throw std::invalid_argument("oracle: zero cardinality");
    if (total > kMaxOracleStates / c)
      throw std::invalid_argument("oracle: state space too large");
    total *= c;
  }
  return total;
}

void for_each_assignment(const std::vector<std::size_t>& cardinalities,
                         const std::function<void(const Assignment&)>& visit) {
  state_space_size(cardinalities);
  const std::size_t n = cardinalities.size();
  std::vector<std::size_t> values(n, 0);
  while (true) {
    visit(assignment_from_values(values));
    // Odometer with the last variable fastest, so variable 0 is slowest.
    std::size_t i = n;
    while (i > 0) {
      --i;
      if (++values[i] < cardinalities[i]) break;
      values[i] = 0;
      if (i == 0) return;
    }
    if (n == 0) return;
  }
}

CircuitDistribution enumerate_distribution(
    const std::function<double(const Assignment&)>& prob_fn,
    const std::vector<std::size_t>& cardinalities) {
  CircuitDistribution d;
  d.cardinalities = cardinalities;
  d.probabilities.reserve(state_space_size(cardinalities));
  for_each_assignment(cardinalities,
                      [&](const Assignment& x) { d.probabilities.push_back(prob_fn(x)); });
  return d;
}

ComplexMatrix operator_sum(const std::function<ComplexMatrix(const Assignment&)>& eval_fn,
                           const std::vector<std::size_t>& cardinalities) {
  ComplexMatrix sum;
  bool first = true;
  for_each_assignment(cardinalities, [&](const Assignment& x) {
    ComplexMatrix v = eval_fn(x);
    if (first) {
      sum = std::move(v);
      first = false;
    } else {
      sum = add(sum, v);
    }
  });
  return sum;
}

DistComparison distributions_equal(const CircuitDistribution& a, const CircuitDistribution& b,
                                   double atol) {
  if (a.cardinalities != b.cardinalities)
    throw std::invalid_argument("distributions_equal: domain mismatch");
  DistComparison cmp;
  for (std::size_t i = 0; i < a.probabilities.size(); ++i)
    cmp.max_deviation =
        std::max(cmp.max_deviation, std::abs(a.probabilities[i] - b.probabilities[i]));
  cmp.equal = cmp.max_deviation <= atol;
  return cmp;
}

std::string to_table(const CircuitDistribution& d) {
  std::string out;
  std::size_t row = 0;
  for_each_assignment(d.cardinalities, [&](const Assignment& x) {
    for (const auto& [var, val] : x) {
      (void)var;
      out += std::to_string(val);
      out += ' ';
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", d.probabilities[row++]);
    out += buf;
    out += '\n';
  });
  return out;
}

}  // namespace punc
