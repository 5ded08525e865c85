#include "punc/sd_punc.hpp"

#include <functional>

namespace punc {

Assignment assignment_from_values(const std::vector<std::size_t>& values) {
  Assignment x;
  for (std::size_t v = 0; v < values.size(); ++v) x[v] = values[v];
  return x;
}

std::size_t node_out_dim(const SdPunc& c, std::size_t id) {
  const PartitionNode& nd = c.tree.node(id);
  if (nd.is_leaf) {
    auto it = c.leaf_povms.find(id);
    if (it == c.leaf_povms.end()) throw std::invalid_argument("sd_punc: leaf POVM missing");
    return it->second.dim;
  }
  auto it = c.internal_ops.find(id);
  if (it == c.internal_ops.end()) throw std::invalid_argument("sd_punc: internal op missing");
  return it->second.out_dim();
}

ValidationReport validate(const SdPunc& c, double tol) {
  ValidationReport report;
  for (const PartitionNode& nd : c.tree.nodes()) {
    const std::string where = std::to_string(nd.id);
    if (nd.is_leaf) {
      auto it = c.leaf_povms.find(nd.id);
      if (it == c.leaf_povms.end()) {
        report.push_back({"missing-povm", where, 0.0, "leaf has no POVM"});
        continue;
      }
      const Povm& p = it->second;
      if (p.outcomes() != nd.cardinality)
        report.push_back({"povm-cardinality", where, 0.0,
                          "POVM outcome count differs from variable cardinality"});
      for (Violation v : validate_povm(p, tol)) {
        v.where = where + (v.where.empty() ? "" : ":" + v.where);
        report.push_back(std::move(v));
      }
    } else {
      auto it = c.internal_ops.find(nd.id);
      if (it == c.internal_ops.end()) {
        report.push_back({"missing-op", where, 0.0, "internal node has no operation"});
        continue;
      }
      const QuantumOperation& op = it->second;
      std::size_t expected_in = 0;
      try {
        const std::size_t dl = node_out_dim(c, nd.left);
        const std::size_t dr = node_out_dim(c, nd.right);
        if (nd.combine == CombineMode::kHadamard) {
          if (dl != dr) {
            report.push_back({"hadamard-dims", where, 0.0,
                              "hadamard children must share a dimension"});
            continue;
          }
          expected_in = dl;
        } else {
          expected_in = dl * dr;
        }
      } catch (const std::invalid_argument&) {
        continue;  // child problem already reported
      }
      if (op.in_dim() != expected_in) {
        report.push_back({"op-dims", where, 0.0,
                          "operation input dimension does not match children"});
        continue;
      }
      if (!is_unital(op, tol)) {
        const ComplexMatrix image =
            apply_operation(op, ComplexMatrix::identity(op.in_dim()));
        report.push_back({"non-unital", where,
                          max_abs_diff(image, ComplexMatrix::identity(op.out_dim())),
                          "operation is not unital"});
      }
    }
  }
  try {
    const std::size_t root_dim = node_out_dim(c, c.tree.root());
    if (c.rho.dim() != root_dim)
      report.push_back({"rho-dim", "", 0.0, "density matrix dimension differs from root"});
  } catch (const std::invalid_argument&) {
  }
  for (Violation v : validate_density(c.rho, tol)) report.push_back(std::move(v));
  return report;
}

namespace {

// Single forward pass; `leaf_value` decides what each leaf emits.
ComplexMatrix forward_pass(const SdPunc& c,
                           const std::function<ComplexMatrix(const PartitionNode&)>& leaf_value,
                           EvalStats* stats, std::vector<ComplexMatrix>* all_nodes) {
  std::vector<ComplexMatrix> slots(c.tree.nodes().size());
  for (std::size_t id : c.tree.eval_order()) {
    const PartitionNode& nd = c.tree.node(id);
    if (nd.is_leaf) {
      slots[id] = leaf_value(nd);
    } else {
      const ComplexMatrix& l = slots[nd.left];
      const ComplexMatrix& r = slots[nd.right];
      const ComplexMatrix input =
          nd.combine == CombineMode::kKronecker ? kron(l, r) : hadamard(l, r);
      slots[id] = apply_operation(c.internal_ops.at(nd.id), input);
    }
    if (stats) stats->node_evaluations++;
  }
  ComplexMatrix root = slots[c.tree.root()];
  if (all_nodes) *all_nodes = std::move(slots);
  return root;
}

ComplexMatrix leaf_element(const SdPunc& c, const PartitionNode& nd, const Assignment& x) {
  auto it = x.find(nd.variable);
  if (it == x.end())
    throw std::invalid_argument("sd_punc: partial assignment (variable " +
                                std::to_string(nd.variable) + " missing)");
  const Povm& p = c.leaf_povms.at(nd.id);
  if (it->second >= p.outcomes())
    throw std::invalid_argument("sd_punc: assignment value out of range");
  return p.elements[it->second];
}

}  // namespace

ComplexMatrix evaluate(const SdPunc& c, const Assignment& x, EvalStats* stats) {
  return forward_pass(
      c, [&](const PartitionNode& nd) { return leaf_element(c, nd, x); }, stats, nullptr);
}

std::vector<ComplexMatrix> evaluate_nodes(const SdPunc& c, const Assignment& x) {
  std::vector<ComplexMatrix> all;
  forward_pass(
      c, [&](const PartitionNode& nd) { return leaf_element(c, nd, x); }, nullptr, &all);
  return all;
}

double probability(const SdPunc& c, const Assignment& x) {
  return event_probability(c.rho, evaluate(c, x));
}

double marginal(const SdPunc& c, const MarginalQuery& q, EvalStats* stats) {
  for (std::size_t v = 0; v < c.tree.num_vars(); ++v) {
    const bool in_evidence = q.evidence.count(v) > 0;
    const bool in_marginal = q.marginalized.count(v) > 0;
    if (in_evidence == in_marginal)
      throw std::invalid_argument(
          "sd_punc: evidence and marginalized sets must partition the variables");
  }
  for (const auto& [v, val] : q.evidence)
    if (v >= c.tree.num_vars())
      throw std::invalid_argument("sd_punc: evidence variable out of range");

  const ComplexMatrix result = forward_pass(
      c,
      [&](const PartitionNode& nd) -> ComplexMatrix {
        if (q.marginalized.count(nd.variable))
          return ComplexMatrix::identity(c.leaf_povms.at(nd.id).dim);
        return leaf_element(c, nd, q.evidence);
      },
      stats, nullptr);
  return event_probability(c.rho, result);
}

SdPunc to_kronecker_form(const SdPunc& c) {
  SdPunc out = c;
  std::vector<PartitionNode> nodes = c.tree.nodes();
  for (PartitionNode& nd : nodes) {
    if (nd.is_leaf || nd.combine != CombineMode::kHadamard) continue;
    const std::size_t d = node_out_dim(c, nd.left);
    const ComplexMatrix p = diagonal_selection(d).to_matrix();
    QuantumOperation rewritten;
    for (const ComplexMatrix& k : c.internal_ops.at(nd.id).kraus)
      rewritten.kraus.push_back(multiply(k, p));
    out.internal_ops[nd.id] = std::move(rewritten);
    nd.combine = CombineMode::kKronecker;
  }
  out.tree = PartitionCircuit::create(std::move(nodes), c.tree.root(),
                                      c.tree.cardinalities());
  return out;
}

}  // namespace punc
