#include "punc/d_punc.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>

namespace punc {

namespace {

void check_structure(const DPunc& c) {
  if (c.units.empty()) throw std::invalid_argument("d_punc: no units");
  for (std::size_t i = 0; i < c.units.size(); ++i)
    if (c.units[i].id != i)
      throw std::invalid_argument("d_punc: unit ids must be dense 0..n-1");
  if (c.root >= c.units.size()) throw std::invalid_argument("d_punc: root id out of range");
  for (const DPuncUnit& u : c.units) {
    if (u.kind == UnitKind::kProduct) {
      if (u.left >= c.units.size() || u.right >= c.units.size())
        throw std::invalid_argument("d_punc: product child out of range");
    } else if (u.kind == UnitKind::kSum) {
      if (u.inputs.empty()) throw std::invalid_argument("d_punc: sum unit has no inputs");
      for (const SumInput& in : u.inputs)
        if (in.unit >= c.units.size())
          throw std::invalid_argument("d_punc: sum input out of range");
    }
  }
}

// Children-before-parent order over all units; throws on cycles.
std::vector<std::size_t> topological_order(const DPunc& c) {
  std::vector<int> state(c.units.size(), 0);
  std::vector<std::size_t> order;
  order.reserve(c.units.size());
  std::function<void(std::size_t)> visit = [&](std::size_t id) {
    if (state[id] == 2) return;
    if (state[id] == 1) throw std::invalid_argument("d_punc: cycle detected");
    state[id] = 1;
    const DPuncUnit& u = c.units[id];
    if (u.kind == UnitKind::kProduct) {
      visit(u.left);
      visit(u.right);
    } else if (u.kind == UnitKind::kSum) {
      for (const SumInput& in : u.inputs) visit(in.unit);
    }
    state[id] = 2;
    order.push_back(id);
  };
  for (std::size_t i = 0; i < c.units.size(); ++i) visit(i);
  return order;
}

}  // namespace

std::vector<std::vector<std::size_t>> compute_scopes(const DPunc& c) {
  check_structure(c);
  const auto order = topological_order(c);
  std::vector<std::vector<std::size_t>> scopes(c.units.size());
  for (std::size_t id : order) {
    const DPuncUnit& u = c.units[id];
    switch (u.kind) {
      case UnitKind::kLeaf:
        scopes[id] = {u.variable};
        break;
      case UnitKind::kProduct: {
        std::vector<std::size_t> merged;
        std::set_union(scopes[u.left].begin(), scopes[u.left].end(), scopes[u.right].begin(),
                       scopes[u.right].end(), std::back_inserter(merged));
        scopes[id] = std::move(merged);
        break;
      }
      case UnitKind::kSum: {
        std::vector<std::size_t> merged;
        for (const SumInput& in : u.inputs) {
          std::vector<std::size_t> next;
          std::set_union(merged.begin(), merged.end(), scopes[in.unit].begin(),
                         scopes[in.unit].end(), std::back_inserter(next));
          merged = std::move(next);
        }
        scopes[id] = std::move(merged);
        break;
      }
    }
  }
  return scopes;
}

std::vector<std::size_t> compute_out_dims(const DPunc& c) {
  check_structure(c);
  const auto order = topological_order(c);
  std::vector<std::size_t> dims(c.units.size(), 0);
  for (std::size_t id : order) {
    const DPuncUnit& u = c.units[id];
    switch (u.kind) {
      case UnitKind::kLeaf:
        dims[id] = u.povm.dim;
        break;
      case UnitKind::kProduct:
        dims[id] = dims[u.left] * dims[u.right];
        break;
      case UnitKind::kSum:
        dims[id] = u.inputs.front().op.out_dim();
        break;
    }
  }
  return dims;
}

ValidationReport validate(const DPunc& c, double tol) {
  ValidationReport report;
  std::vector<std::vector<std::size_t>> scopes;
  std::vector<std::size_t> dims;
  try {
    scopes = compute_scopes(c);
    dims = compute_out_dims(c);
  } catch (const std::invalid_argument& e) {
    report.push_back({"structure", "", 0.0, e.what()});
    return report;
  }

  for (const DPuncUnit& u : c.units) {
    const std::string where = std::to_string(u.id);
    switch (u.kind) {
      case UnitKind::kLeaf: {
        if (u.variable >= c.cardinalities.size()) {
          report.push_back({"leaf-variable", where, 0.0, "leaf variable out of range"});
          break;
        }
        if (u.povm.outcomes() != c.cardinalities[u.variable])
          report.push_back({"povm-cardinality", where, 0.0,
                            "POVM outcome count differs from variable cardinality"});
        for (Violation v : validate_povm(u.povm, tol)) {
          v.where = where + (v.where.empty() ? "" : ":" + v.where);
          report.push_back(std::move(v));
        }
        break;
      }
      case UnitKind::kProduct: {
        std::vector<std::size_t> overlap;
        std::set_intersection(scopes[u.left].begin(), scopes[u.left].end(),
                              scopes[u.right].begin(), scopes[u.right].end(),
                              std::back_inserter(overlap));
        if (!overlap.empty())
          report.push_back({"decomposability", where, double(overlap.size()),
                            "product inputs share random variables"});
        break;
      }
      case UnitKind::kSum: {
        double weight_sum = 0.0;
        bool bad_weight = false;
        for (const SumInput& in : u.inputs) {
          if (in.weight < 0.0) bad_weight = true;
          weight_sum += in.weight;
        }
        if (bad_weight)
          report.push_back({"negative-weight", where, 0.0, "sum weight is negative"});
        if (std::abs(weight_sum - 1.0) > tol)
          report.push_back({"weight-sum", where, std::abs(weight_sum - 1.0),
                            "sum weights do not sum to one"});
        for (std::size_t j = 1; j < u.inputs.size(); ++j)
          if (scopes[u.inputs[j].unit] != scopes[u.inputs[0].unit]) {
            report.push_back({"smoothness", where, 0.0,
                              "sum inputs range over different variables"});
            break;
          }
        const std::size_t out = u.inputs.front().op.out_dim();
        for (const SumInput& in : u.inputs) {
          if (in.op.kraus.empty()) {
            report.push_back({"missing-op", where, 0.0, "sum edge has no operation"});
            continue;
          }
          if (in.op.in_dim() != dims[in.unit])
            report.push_back({"op-dims", where, 0.0,
                              "operation input dimension differs from input unit"});
          if (in.op.out_dim() != out)
            report.push_back({"op-dims", where, 0.0,
                              "sum edges map to different output dimensions"});
          if (!is_unital(in.op, tol))
            report.push_back({"non-unital", where, 0.0, "edge operation is not unital"});
        }
        break;
      }
    }
  }

  std::vector<std::size_t> all_vars(c.cardinalities.size());
  for (std::size_t v = 0; v < all_vars.size(); ++v) all_vars[v] = v;
  if (scopes[c.root] != all_vars)
    report.push_back({"root-scope", std::to_string(c.root), 0.0,
                      "root scope does not cover all variables"});

  if (c.rho.dim() != dims[c.root])
    report.push_back({"rho-dim", "", 0.0, "density matrix dimension differs from root"});
  for (Violation v : validate_density(c.rho, tol)) report.push_back(std::move(v));
  return report;
}

bool is_structured_decomposable(const DPunc& c) {
  const auto scopes = compute_scopes(c);
  // scope -> the unordered child-scope pair of the first product seen
  std::map<std::vector<std::size_t>,
           std::pair<std::vector<std::size_t>, std::vector<std::size_t>>>
      splits;
  for (const DPuncUnit& u : c.units) {
    if (u.kind != UnitKind::kProduct) continue;
    auto lo = scopes[u.left];
    auto hi = scopes[u.right];
    if (hi < lo) std::swap(lo, hi);
    auto [it, inserted] = splits.emplace(scopes[u.id], std::make_pair(lo, hi));
    if (!inserted && (it->second.first != lo || it->second.second != hi)) return false;
  }
  return true;
}

namespace {

ComplexMatrix eval_unit(const DPunc& c, std::size_t id,
                        const std::function<ComplexMatrix(const DPuncUnit&)>& leaf_value,
                        std::vector<std::optional<ComplexMatrix>>& memo, EvalStats* stats) {
  if (memo[id]) return *memo[id];
  const DPuncUnit& u = c.units[id];
  ComplexMatrix result;
  switch (u.kind) {
    case UnitKind::kLeaf:
      result = leaf_value(u);
      break;
    case UnitKind::kProduct:
      result = kron(eval_unit(c, u.left, leaf_value, memo, stats),
                    eval_unit(c, u.right, leaf_value, memo, stats));
      break;
    case UnitKind::kSum: {
      const std::size_t out = u.inputs.front().op.out_dim();
      result = ComplexMatrix(out, out);
      for (const SumInput& in : u.inputs) {
        const ComplexMatrix val = eval_unit(c, in.unit, leaf_value, memo, stats);
        result = add(result, scale(in.weight, apply_operation(in.op, val)));
      }
      break;
    }
  }
  if (stats) stats->node_evaluations++;
  memo[id] = result;
  return result;
}

ComplexMatrix leaf_povm_element(const DPuncUnit& u, const Assignment& x) {
  auto it = x.find(u.variable);
  if (it == x.end())
    throw std::invalid_argument("d_punc: partial assignment (variable " +
                                std::to_string(u.variable) + " missing)");
  if (it->second >= u.povm.outcomes())
    throw std::invalid_argument("d_punc: assignment value out of range");
  return u.povm.elements[it->second];
}

}  // namespace

ComplexMatrix evaluate(const DPunc& c, const Assignment& x, EvalStats* stats) {
  check_structure(c);
  std::vector<std::optional<ComplexMatrix>> memo(c.units.size());
  return eval_unit(
      c, c.root, [&](const DPuncUnit& u) { return leaf_povm_element(u, x); }, memo, stats);
}

double probability(const DPunc& c, const Assignment& x) {
  return event_probability(c.rho, evaluate(c, x));
}

double marginal(const DPunc& c, const MarginalQuery& q, EvalStats* stats) {
  check_structure(c);
  for (std::size_t v = 0; v < c.cardinalities.size(); ++v) {
    const bool in_evidence = q.evidence.count(v) > 0;
    const bool in_marginal = q.marginalized.count(v) > 0;
    if (in_evidence == in_marginal)
      throw std::invalid_argument(
          "d_punc: evidence and marginalized sets must partition the variables");
  }
  std::vector<std::optional<ComplexMatrix>> memo(c.units.size());
  const ComplexMatrix result = eval_unit(
      c, c.root,
      [&](const DPuncUnit& u) -> ComplexMatrix {
        if (q.marginalized.count(u.variable)) return ComplexMatrix::identity(u.povm.dim);
        return leaf_povm_element(u, q.evidence);
      },
      memo, stats);
  return event_probability(c.rho, result);
}

DPunc embed_sd(const SdPunc& c) {
  const SdPunc kform = to_kronecker_form(c);
  DPunc out;
  out.cardinalities = kform.tree.cardinalities();
  out.rho = kform.rho;
  std::vector<std::size_t> unit_of(kform.tree.nodes().size());
  for (std::size_t id : kform.tree.eval_order()) {
    const PartitionNode& nd = kform.tree.node(id);
    if (nd.is_leaf) {
      DPuncUnit leaf;
      leaf.id = out.units.size();
      leaf.kind = UnitKind::kLeaf;
      leaf.variable = nd.variable;
      leaf.povm = kform.leaf_povms.at(id);
      unit_of[id] = leaf.id;
      out.units.push_back(std::move(leaf));
    } else {
      DPuncUnit prod;
      prod.id = out.units.size();
      prod.kind = UnitKind::kProduct;
      prod.left = unit_of[nd.left];
      prod.right = unit_of[nd.right];
      out.units.push_back(prod);

      DPuncUnit sum;
      sum.id = out.units.size();
      sum.kind = UnitKind::kSum;
      sum.inputs.push_back({prod.id, 1.0, kform.internal_ops.at(id)});
      unit_of[id] = sum.id;
      out.units.push_back(std::move(sum));
    }
  }
  out.root = unit_of[kform.tree.root()];
  return out;
}

DProbCircuit scalar_shadow(const DPunc& c) {
  const auto dims = compute_out_dims(c);
  for (std::size_t d : dims)
    if (d != 1)
      throw std::invalid_argument("scalar_shadow: circuit has units of dimension > 1");
  DProbCircuit out;
  out.cardinalities = c.cardinalities;
  out.root = c.root;
  for (const DPuncUnit& u : c.units) {
    DProbUnit s;
    s.id = u.id;
    s.kind = u.kind;
    switch (u.kind) {
      case UnitKind::kLeaf:
        s.variable = u.variable;
        for (const ComplexMatrix& e : u.povm.elements) s.table.push_back(e(0, 0).real());
        break;
      case UnitKind::kProduct:
        s.left = u.left;
        s.right = u.right;
        break;
      case UnitKind::kSum:
        for (const SumInput& in : u.inputs) s.inputs.emplace_back(in.unit, in.weight);
        break;
    }
    out.units.push_back(std::move(s));
  }
  return out;
}

namespace {

double eval_dprob_unit(const DProbCircuit& c, std::size_t id,
                       const std::function<double(const DProbUnit&)>& leaf_value,
                       std::vector<std::optional<double>>& memo) {
  if (memo[id]) return *memo[id];
  const DProbUnit& u = c.units[id];
  double result = 0.0;
  switch (u.kind) {
    case UnitKind::kLeaf:
      result = leaf_value(u);
      break;
    case UnitKind::kProduct:
      result = eval_dprob_unit(c, u.left, leaf_value, memo) *
               eval_dprob_unit(c, u.right, leaf_value, memo);
      break;
    case UnitKind::kSum:
      for (const auto& [unit, weight] : u.inputs)
        result += weight * eval_dprob_unit(c, unit, leaf_value, memo);
      break;
  }
  memo[id] = result;
  return result;
}

}  // namespace

ValidationReport validate_dprob_circuit(const DProbCircuit& c, double tol) {
  ValidationReport report;
  if (c.units.empty()) {
    report.push_back({"structure", "", 0.0, "no units"});
    return report;
  }
  for (std::size_t i = 0; i < c.units.size(); ++i)
    if (c.units[i].id != i) {
      report.push_back({"structure", std::to_string(i), 0.0, "unit ids must be dense"});
      return report;
    }
  for (const DProbUnit& u : c.units) {
    const std::string where = std::to_string(u.id);
    if (u.kind == UnitKind::kLeaf) {
      if (u.variable >= c.cardinalities.size() ||
          u.table.size() != c.cardinalities[u.variable]) {
        report.push_back({"leaf-table", where, 0.0, "table does not match cardinality"});
        continue;
      }
      double sum = 0.0;
      for (double f : u.table) {
        if (f < -tol)
          report.push_back({"negative-entry", where, -f, "leaf value is negative"});
        sum += f;
      }
      if (std::abs(sum - 1.0) > tol)
        report.push_back({"leaf-normalization", where, std::abs(sum - 1.0),
                          "leaf values do not sum to one"});
    } else if (u.kind == UnitKind::kProduct) {
      if (u.left >= c.units.size() || u.right >= c.units.size())
        report.push_back({"structure", where, 0.0, "product child out of range"});
    } else {
      double sum = 0.0;
      for (const auto& [unit, weight] : u.inputs) {
        if (unit >= c.units.size())
          report.push_back({"structure", where, 0.0, "sum input out of range"});
        if (weight < 0.0)
          report.push_back({"negative-weight", where, -weight, "sum weight is negative"});
        sum += weight;
      }
      if (std::abs(sum - 1.0) > tol)
        report.push_back({"weight-sum", where, std::abs(sum - 1.0),
                          "sum weights do not sum to one"});
    }
  }
  return report;
}

double eval_dprob_circuit(const DProbCircuit& c, const Assignment& x) {
  std::vector<std::optional<double>> memo(c.units.size());
  return eval_dprob_unit(
      c, c.root,
      [&](const DProbUnit& u) -> double {
        auto it = x.find(u.variable);
        if (it == x.end()) throw std::invalid_argument("d_prob_circuit: partial assignment");
        if (it->second >= u.table.size())
          throw std::invalid_argument("d_prob_circuit: assignment value out of range");
        return u.table[it->second];
      },
      memo);
}

double dprob_marginal(const DProbCircuit& c, const MarginalQuery& q) {
  for (std::size_t v = 0; v < c.cardinalities.size(); ++v) {
    const bool in_evidence = q.evidence.count(v) > 0;
    const bool in_marginal = q.marginalized.count(v) > 0;
    if (in_evidence == in_marginal)
      throw std::invalid_argument(
          "d_prob_circuit: evidence and marginalized sets must partition the variables");
  }
  std::vector<std::optional<double>> memo(c.units.size());
  return eval_dprob_unit(
      c, c.root,
      [&](const DProbUnit& u) -> double {
        if (q.marginalized.count(u.variable)) return 1.0;
        auto it = q.evidence.find(u.variable);
        if (it == q.evidence.end())
          throw std::invalid_argument("d_prob_circuit: partial assignment");
        return u.table[it->second];
      },
      memo);
}

}  // namespace punc
