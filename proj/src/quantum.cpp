#include "punc/quantum.hpp"

#include <cmath>

namespace punc {

ValidationReport validate_povm(const Povm& p, double tol) {
  ValidationReport report;
  if (p.elements.empty()) {
    report.push_back({"povm-empty", "", 0.0, "POVM has no elements"});
    return report;
  }
  ComplexMatrix sum(p.dim, p.dim);
  for (std::size_t i = 0; i < p.elements.size(); ++i) {
    const ComplexMatrix& e = p.elements[i];
    if (e.rows() != p.dim || e.cols() != p.dim) {
      report.push_back({"povm-dim", std::to_string(i), 0.0,
                        "element shape does not match POVM dimension"});
      continue;
    }
    if (!is_psd(e, tol)) {
      report.push_back({"povm-psd", std::to_string(i), -min_eigenvalue(e),
                        "element is not PSD"});
    }
    sum = add(sum, e);
  }
  const double residual = max_abs_diff(sum, ComplexMatrix::identity(p.dim));
  if (residual > tol)
    report.push_back({"povm-sum", "", residual, "elements do not sum to the identity"});
  return report;
}

ValidationReport validate_density(const DensityMatrix& rho, double tol) {
  ValidationReport report;
  if (!rho.mat.is_square()) {
    report.push_back({"density-shape", "", 0.0, "density matrix is not square"});
    return report;
  }
  if (!is_psd(rho.mat, tol))
    report.push_back({"density-psd", "", -min_eigenvalue(rho.mat),
                      "density matrix is not PSD"});
  const double tr_residual = std::abs(trace(rho.mat) - cplx{1.0, 0.0});
  if (tr_residual > tol)
    report.push_back({"density-trace", "", tr_residual, "trace differs from one"});
  return report;
}

NoisyPovm make_noisy_povm(std::size_t dim, std::vector<ComplexMatrix> elements, double tol) {
  NoisyPovm p;
  p.dim = dim;
  p.elements = std::move(elements);
  p.bound = ComplexMatrix(dim, dim);
  for (const auto& e : p.elements) p.bound = add(p.bound, e);
  const ComplexMatrix gap = subtract(ComplexMatrix::identity(dim), p.bound);
  p.strictly_noisy = is_psd(gap, tol) && min_eigenvalue(gap) > tol;
  return p;
}

ValidationReport validate_noisy_povm(const NoisyPovm& p, double tol) {
  ValidationReport report;
  ComplexMatrix sum(p.dim, p.dim);
  for (std::size_t i = 0; i < p.elements.size(); ++i) {
    const ComplexMatrix& e = p.elements[i];
    if (e.rows() != p.dim || e.cols() != p.dim) {
      report.push_back({"povm-dim", std::to_string(i), 0.0,
                        "element shape does not match dimension"});
      continue;
    }
    if (!is_psd(e, tol))
      report.push_back({"povm-psd", std::to_string(i), -min_eigenvalue(e),
                        "element is not PSD"});
    sum = add(sum, e);
  }
  const double bound_residual = max_abs_diff(sum, p.bound);
  if (bound_residual > tol)
    report.push_back({"noisy-bound", "", bound_residual,
                      "recorded bound differs from element sum"});
  if (!loewner_leq(p.bound, ComplexMatrix::identity(p.dim), tol))
    report.push_back({"noisy-exceeds-identity", "", 0.0,
                      "element sum exceeds the identity in the Loewner order"});
  return report;
}

double event_probability(const DensityMatrix& rho, const ComplexMatrix& e, double tol) {
  if (e.rows() != rho.dim() || e.cols() != rho.dim())
    throw DimensionError("event_probability: event/state dimension mismatch");
  if (!is_psd(e, tol))
    throw std::invalid_argument("event_probability: event matrix is not PSD");
  const cplx t = trace_of_product(rho.mat, e);
  if (std::abs(t.imag()) > 1e-10)
    throw NumericalError("event_probability: imaginary residual exceeds 1e-10");
  double p = t.real();
  if (p < 0.0) p = 0.0;
  if (p > 1.0) p = 1.0;
  return p;
}

ComplexMatrix apply_operation(const QuantumOperation& phi, const ComplexMatrix& e) {
  if (phi.kraus.empty()) throw DimensionError("apply_operation: empty Kraus set");
  if (!e.is_square() || e.rows() != phi.in_dim())
    throw DimensionError("apply_operation: input dimension mismatch");
  ComplexMatrix out(phi.out_dim(), phi.out_dim());
  for (const ComplexMatrix& k : phi.kraus)
    out = add(out, multiply(multiply(k, e), conj_transpose(k)));
  return out;
}

bool is_unital(const QuantumOperation& phi, double tol) {
  if (phi.kraus.empty()) return false;
  const ComplexMatrix image = apply_operation(phi, ComplexMatrix::identity(phi.in_dim()));
  return max_abs_diff(image, ComplexMatrix::identity(phi.out_dim())) <= tol;
}

bool check_validity(const QuantumOperation& phi, double tol) {
  if (phi.kraus.empty()) return false;
  ComplexMatrix gram(phi.in_dim(), phi.in_dim());
  for (const ComplexMatrix& k : phi.kraus)
    gram = add(gram, multiply(conj_transpose(k), k));
  return loewner_leq(gram, ComplexMatrix::identity(phi.in_dim()), tol);
}

QuantumOperation compose_convex(const std::vector<double>& weights,
                                const std::vector<QuantumOperation>& ops, double tol) {
  if (weights.size() != ops.size() || ops.empty())
    throw std::invalid_argument("compose_convex: weights and operations must pair up");
  double sum = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw std::invalid_argument("compose_convex: negative weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > tol)
    throw std::invalid_argument("compose_convex: weights do not sum to one");
  const std::size_t in = ops.front().in_dim();
  const std::size_t out = ops.front().out_dim();
  QuantumOperation combined;
  for (std::size_t j = 0; j < ops.size(); ++j) {
    if (ops[j].in_dim() != in || ops[j].out_dim() != out)
      throw DimensionError("compose_convex: operation dimensions differ");
    const double root = std::sqrt(weights[j]);
    for (const ComplexMatrix& k : ops[j].kraus)
      combined.kraus.push_back(scale(root, k));
  }
  return combined;
}

}  // namespace punc
