#include "punc/families.hpp"

#include <cmath>
#include <functional>

namespace punc {

namespace {

double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

double real_checked(const cplx& v, const char* what) {
  if (std::abs(v.imag()) > 1e-10)
    throw NumericalError(std::string(what) + ": imaginary residual exceeds 1e-10");
  return v.real();
}

}  // namespace

// --- PSD circuits ---------------------------------------------------------

ValidationReport validate_psd_circuit(const PsdCircuit& c, double tol) {
  ValidationReport report;
  for (const PartitionNode& nd : c.tree.nodes()) {
    const std::string where = std::to_string(nd.id);
    if (nd.is_leaf) {
      auto it = c.leaf_mats.find(nd.id);
      if (it == c.leaf_mats.end()) {
        report.push_back({"missing-matrix", where, 0.0, "leaf has no parameter matrix"});
        continue;
      }
      if (it->second.cols() != nd.cardinality)
        report.push_back({"leaf-dims", where, 0.0,
                          "leaf matrix columns differ from variable cardinality"});
      if (it->second.rows() > it->second.cols())
        report.push_back({"orientation", where, 0.0, "leaf matrix has more rows than columns"});
      else if (!is_semi_unitary(it->second, tol))
        report.push_back({"not-semi-unitary", where, 0.0, "leaf matrix is not semi-unitary"});
    } else {
      if (nd.combine != CombineMode::kKronecker) {
        report.push_back({"combine-mode", where, 0.0,
                          "PSD circuits support Kronecker combination only"});
        continue;
      }
      auto it = c.internal_mats.find(nd.id);
      if (it == c.internal_mats.end()) {
        report.push_back({"missing-matrix", where, 0.0, "internal node has no matrix"});
        continue;
      }
      auto dim_of = [&](std::size_t id) -> std::size_t {
        const PartitionNode& child = c.tree.node(id);
        if (child.is_leaf) {
          auto lit = c.leaf_mats.find(id);
          return lit == c.leaf_mats.end() ? 0 : lit->second.rows();
        }
        auto iit = c.internal_mats.find(id);
        return iit == c.internal_mats.end() ? 0 : iit->second.rows();
      };
      const std::size_t expected = dim_of(nd.left) * dim_of(nd.right);
      if (expected == 0) continue;
      if (it->second.cols() != expected)
        report.push_back({"internal-dims", where, 0.0,
                          "matrix columns differ from product of child dimensions"});
      else if (it->second.rows() > it->second.cols())
        report.push_back({"orientation", where, 0.0, "matrix has more rows than columns"});
      else if (!is_semi_unitary(it->second, tol))
        report.push_back({"not-semi-unitary", where, 0.0, "matrix is not semi-unitary"});
    }
  }
  for (Violation v : validate_density(c.rho, tol)) report.push_back(std::move(v));
  auto root_it = c.tree.node(c.tree.root()).is_leaf ? c.leaf_mats.find(c.tree.root())
                                                    : c.internal_mats.find(c.tree.root());
  if (root_it != (c.tree.node(c.tree.root()).is_leaf ? c.leaf_mats.end()
                                                     : c.internal_mats.end()) &&
      c.rho.dim() != root_it->second.rows())
    report.push_back({"rho-dim", "", 0.0, "density matrix dimension differs from root"});
  return report;
}

PsdEval eval_psd_circuit(const PsdCircuit& c, const Assignment& x) {
  std::vector<ComplexMatrix> slots(c.tree.nodes().size());
  for (std::size_t id : c.tree.eval_order()) {
    const PartitionNode& nd = c.tree.node(id);
    if (nd.is_leaf) {
      auto it = x.find(nd.variable);
      if (it == x.end()) throw std::invalid_argument("psd_circuit: partial assignment");
      const ComplexMatrix& u = c.leaf_mats.at(id);
      if (it->second >= u.cols())
        throw std::invalid_argument("psd_circuit: assignment value out of range");
      slots[id] = multiply(u, ComplexMatrix::basis_vector(u.cols(), it->second));
    } else {
      slots[id] = multiply(c.internal_mats.at(id), kron(slots[nd.left], slots[nd.right]));
    }
  }
  PsdEval result;
  result.root_vector = slots[c.tree.root()];
  const ComplexMatrix quad = multiply(conj_transpose(result.root_vector),
                                      multiply(c.rho.mat, result.root_vector));
  result.probability = clamp01(real_checked(quad(0, 0), "eval_psd_circuit"));
  return result;
}

SdPunc psd_to_pure_punc(const PsdCircuit& c, double tol) {
  SdPunc out;
  out.tree = c.tree;
  out.rho = c.rho;
  for (const PartitionNode& nd : c.tree.nodes()) {
    if (nd.is_leaf) {
      const ComplexMatrix& u = c.leaf_mats.at(nd.id);
      if (u.rows() > u.cols() || !is_semi_unitary(u, tol))
        throw std::invalid_argument("psd_to_pure_punc: leaf matrix is not semi-unitary");
      Povm p;
      p.dim = u.rows();
      for (std::size_t v = 0; v < nd.cardinality; ++v) {
        const ComplexMatrix col = multiply(u, ComplexMatrix::basis_vector(u.cols(), v));
        p.elements.push_back(multiply(col, conj_transpose(col)));
      }
      out.leaf_povms[nd.id] = std::move(p);
    } else {
      const ComplexMatrix& u = c.internal_mats.at(nd.id);
      if (u.rows() > u.cols() || !is_semi_unitary(u, tol))
        throw std::invalid_argument("psd_to_pure_punc: internal matrix is not semi-unitary");
      out.internal_ops[nd.id] = QuantumOperation{{u}};
    }
  }
  return out;
}

// --- Probabilistic circuits ------------------------------------------------

namespace {

std::size_t pc_node_dim(const ProbCircuitPT& c, std::size_t id) {
  const PartitionNode& nd = c.tree.node(id);
  if (nd.is_leaf) {
    const auto& table = c.leaf_tables.at(id);
    return table.empty() ? 0 : table.front().size();
  }
  return c.internal_weights.at(id).size();
}

std::vector<double> pc_forward(
    const ProbCircuitPT& c,
    const std::function<std::vector<double>(const PartitionNode&)>& leaf_value,
    std::vector<std::vector<double>>* all_nodes) {
  std::vector<std::vector<double>> slots(c.tree.nodes().size());
  for (std::size_t id : c.tree.eval_order()) {
    const PartitionNode& nd = c.tree.node(id);
    if (nd.is_leaf) {
      slots[id] = leaf_value(nd);
    } else {
      const std::vector<double>& l = slots[nd.left];
      const std::vector<double>& r = slots[nd.right];
      std::vector<double> input;
      if (nd.combine == CombineMode::kKronecker) {
        input.reserve(l.size() * r.size());
        for (double lv : l)
          for (double rv : r) input.push_back(lv * rv);
      } else {
        if (l.size() != r.size())
          throw DimensionError("prob_circuit: hadamard children dimension mismatch");
        input.resize(l.size());
        for (std::size_t i = 0; i < l.size(); ++i) input[i] = l[i] * r[i];
      }
      const auto& w = c.internal_weights.at(id);
      std::vector<double> outv(w.size(), 0.0);
      for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i].size() != input.size())
          throw DimensionError("prob_circuit: weight row length mismatch");
        for (std::size_t j = 0; j < input.size(); ++j) outv[i] += w[i][j] * input[j];
      }
      slots[id] = std::move(outv);
    }
  }
  std::vector<double> root = slots[c.tree.root()];
  if (all_nodes) *all_nodes = std::move(slots);
  return root;
}

std::vector<double> pc_leaf_value(const ProbCircuitPT& c, const PartitionNode& nd,
                                  const Assignment& x) {
  auto it = x.find(nd.variable);
  if (it == x.end()) throw std::invalid_argument("prob_circuit: partial assignment");
  const auto& table = c.leaf_tables.at(nd.id);
  if (it->second >= table.size())
    throw std::invalid_argument("prob_circuit: assignment value out of range");
  return table[it->second];
}

}  // namespace

ValidationReport validate_prob_circuit(const ProbCircuitPT& c, double tol) {
  ValidationReport report;
  for (const PartitionNode& nd : c.tree.nodes()) {
    const std::string where = std::to_string(nd.id);
    if (nd.is_leaf) {
      auto it = c.leaf_tables.find(nd.id);
      if (it == c.leaf_tables.end()) {
        report.push_back({"missing-table", where, 0.0, "leaf has no table"});
        continue;
      }
      const auto& table = it->second;
      if (table.size() != nd.cardinality) {
        report.push_back({"table-cardinality", where, 0.0,
                          "table size differs from variable cardinality"});
        continue;
      }
      const std::size_t m = table.front().size();
      std::vector<double> colsum(m, 0.0);
      bool ragged = false;
      for (const auto& vec : table) {
        if (vec.size() != m) {
          ragged = true;
          break;
        }
        for (std::size_t i = 0; i < m; ++i) {
          if (vec[i] < -tol)
            report.push_back({"negative-entry", where, -vec[i], "leaf entry is negative"});
          colsum[i] += vec[i];
        }
      }
      if (ragged) {
        report.push_back({"table-ragged", where, 0.0, "leaf vectors have differing lengths"});
        continue;
      }
      for (std::size_t i = 0; i < m; ++i)
        if (std::abs(colsum[i] - 1.0) > tol) {
          report.push_back({"leaf-completeness", where, std::abs(colsum[i] - 1.0),
                            "leaf vectors do not sum to the all-ones vector"});
          break;
        }
    } else {
      auto it = c.internal_weights.find(nd.id);
      if (it == c.internal_weights.end()) {
        report.push_back({"missing-weights", where, 0.0, "internal node has no weights"});
        continue;
      }
      std::size_t expected = 0;
      try {
        const std::size_t dl = pc_node_dim(c, nd.left);
        const std::size_t dr = pc_node_dim(c, nd.right);
        if (nd.combine == CombineMode::kHadamard) {
          if (dl != dr) {
            report.push_back({"hadamard-dims", where, 0.0,
                              "hadamard children must share a dimension"});
            continue;
          }
          expected = dl;
        } else {
          expected = dl * dr;
        }
      } catch (const std::out_of_range&) {
        continue;
      }
      for (const auto& rowv : it->second) {
        if (rowv.size() != expected) {
          report.push_back({"weight-dims", where, 0.0,
                            "weight row length does not match children"});
          break;
        }
        double sum = 0.0;
        for (double w : rowv) {
          if (w < -tol)
            report.push_back({"negative-weight", where, -w, "weight entry is negative"});
          sum += w;
        }
        if (std::abs(sum - 1.0) > tol)
          report.push_back({"row-normalization", where, std::abs(sum - 1.0),
                            "weight row does not sum to one"});
      }
    }
  }
  return report;
}

std::vector<double> eval_prob_circuit(const ProbCircuitPT& c, const Assignment& x) {
  return pc_forward(
      c, [&](const PartitionNode& nd) { return pc_leaf_value(c, nd, x); }, nullptr);
}

std::vector<std::vector<double>> eval_prob_circuit_nodes(const ProbCircuitPT& c,
                                                         const Assignment& x) {
  std::vector<std::vector<double>> all;
  pc_forward(
      c, [&](const PartitionNode& nd) { return pc_leaf_value(c, nd, x); }, &all);
  return all;
}

double pc_probability(const ProbCircuitPT& c, const Assignment& x) {
  return eval_prob_circuit(c, x).front();
}

double pc_marginal(const ProbCircuitPT& c, const MarginalQuery& q) {
  for (std::size_t v = 0; v < c.tree.num_vars(); ++v) {
    const bool in_evidence = q.evidence.count(v) > 0;
    const bool in_marginal = q.marginalized.count(v) > 0;
    if (in_evidence == in_marginal)
      throw std::invalid_argument(
          "prob_circuit: evidence and marginalized sets must partition the variables");
  }
  return pc_forward(
             c,
             [&](const PartitionNode& nd) -> std::vector<double> {
               if (q.marginalized.count(nd.variable))
                 return std::vector<double>(pc_node_dim(c, nd.id), 1.0);
               return pc_leaf_value(c, nd, q.evidence);
             },
             nullptr)
      .front();
}

// --- Diagonal operations ----------------------------------------------------

ComplexMatrix row_selector(std::size_t j, std::size_t rows, std::size_t cols) {
  if (j >= rows) throw DimensionError("row_selector: row index out of range");
  ComplexMatrix m(rows, cols);
  for (std::size_t c = 0; c < cols; ++c) m(j, c) = 1.0;
  return m;
}

QuantumOperation make_diagonal_operation(const DiagonalOperation& d, double tol) {
  if (d.diag_factors.empty())
    throw std::invalid_argument("make_diagonal_operation: no diagonal factors");
  const std::size_t in = d.in_dim();
  const std::size_t out = d.out_dim();
  QuantumOperation op;
  for (std::size_t j = 0; j < out; ++j) {
    const auto& factor = d.diag_factors[j];
    if (factor.size() != in)
      throw DimensionError("make_diagonal_operation: factor lengths differ");
    double tr = 0.0;
    for (const cplx& v : factor) tr += std::norm(v);
    if (std::abs(tr - 1.0) > tol)
      throw std::invalid_argument(
          "make_diagonal_operation: factor violates the trace-one condition");
    // K_j = J_j D_j: row j carries the diagonal of D_j, all other rows zero.
    ComplexMatrix k(out, in);
    for (std::size_t c = 0; c < in; ++c) k(j, c) = factor[c];
    op.kraus.push_back(std::move(k));
  }
  return op;
}

SdPunc pc_to_diagonal_punc(const ProbCircuitPT& c, double tol) {
  ValidationReport problems = validate_prob_circuit(c, tol);
  if (!problems.empty())
    throw std::invalid_argument("pc_to_diagonal_punc: invalid probabilistic circuit (" +
                                problems.front().kind + " at node " + problems.front().where +
                                ")");
  SdPunc out;
  out.tree = c.tree;
  for (const PartitionNode& nd : c.tree.nodes()) {
    if (nd.is_leaf) {
      const auto& table = c.leaf_tables.at(nd.id);
      Povm p;
      p.dim = table.front().size();
      for (const auto& vec : table) {
        std::vector<cplx> delta(vec.size());
        for (std::size_t i = 0; i < vec.size(); ++i)
          delta[i] = std::sqrt(std::max(0.0, vec[i]));
        const ComplexMatrix d = ComplexMatrix::diagonal(delta);
        p.elements.push_back(multiply(d, conj_transpose(d)));
      }
      out.leaf_povms[nd.id] = std::move(p);
    } else {
      const auto& w = c.internal_weights.at(nd.id);
      DiagonalOperation diag;
      for (const auto& rowv : w) {
        std::vector<cplx> factor(rowv.size());
        for (std::size_t j = 0; j < rowv.size(); ++j)
          factor[j] = std::sqrt(std::max(0.0, rowv[j]));
        diag.diag_factors.push_back(std::move(factor));
      }
      out.internal_ops[nd.id] = make_diagonal_operation(diag, tol);
    }
  }
  const std::size_t root_dim = node_out_dim(out, out.tree.root());
  ComplexMatrix rho(root_dim, root_dim);
  rho(0, 0) = 1.0;
  out.rho = DensityMatrix{std::move(rho)};
  return out;
}

ProbCircuitPT diagonal_punc_to_pc(const SdPunc& c) {
  constexpr double kDiagTol = 1e-10;
  ProbCircuitPT out;
  out.tree = c.tree;
  for (const PartitionNode& nd : c.tree.nodes()) {
    if (nd.is_leaf) {
      const Povm& p = c.leaf_povms.at(nd.id);
      std::vector<std::vector<double>> table;
      for (const ComplexMatrix& e : p.elements) {
        if (max_offdiag_abs(e) > kDiagTol)
          throw ConversionError("diagonal_punc_to_pc: leaf element is not diagonal (node " +
                                std::to_string(nd.id) + ")");
        std::vector<double> vec(e.rows());
        for (std::size_t i = 0; i < e.rows(); ++i) {
          if (std::abs(e(i, i).imag()) > kDiagTol)
            throw ConversionError("diagonal_punc_to_pc: complex diagonal entry");
          vec[i] = std::max(0.0, e(i, i).real());
        }
        table.push_back(std::move(vec));
      }
      out.leaf_tables[nd.id] = std::move(table);
    } else {
      const QuantumOperation& op = c.internal_ops.at(nd.id);
      const std::size_t in = op.in_dim();
      const std::size_t outd = op.out_dim();
      std::vector<std::vector<double>> w(outd, std::vector<double>(in, 0.0));
      for (std::size_t j = 0; j < in; ++j) {
        ComplexMatrix basis(in, in);
        basis(j, j) = 1.0;
        const ComplexMatrix image = apply_operation(op, basis);
        if (max_offdiag_abs(image) > kDiagTol)
          throw ConversionError(
              "diagonal_punc_to_pc: operation is not closed over diagonal matrices (node " +
              std::to_string(nd.id) + ")");
        for (std::size_t i = 0; i < outd; ++i) {
          if (std::abs(image(i, i).imag()) > kDiagTol)
            throw ConversionError("diagonal_punc_to_pc: complex weight recovered");
          w[i][j] = std::max(0.0, image(i, i).real());
        }
      }
      out.internal_weights[nd.id] = std::move(w);
    }
  }

  // rho = diag(1, 0, ..., 0) matches the entry-0 readout convention; any
  // other density folds its diagonal into the root parameter.
  const std::size_t root = c.tree.root();
  const std::size_t root_dim = node_out_dim(c, root);
  ComplexMatrix selector(root_dim, root_dim);
  selector(0, 0) = 1.0;
  if (max_abs_diff(c.rho.mat, selector) > kDiagTol) {
    std::vector<double> d(root_dim);
    for (std::size_t i = 0; i < root_dim; ++i) d[i] = std::max(0.0, c.rho.mat(i, i).real());
    if (c.tree.node(root).is_leaf) {
      auto& table = out.leaf_tables.at(root);
      for (auto& vec : table) {
        double folded = 0.0;
        for (std::size_t i = 0; i < vec.size(); ++i) folded += d[i] * vec[i];
        vec = {folded};
      }
    } else {
      auto& w = out.internal_weights.at(root);
      std::vector<double> folded(w.front().size(), 0.0);
      for (std::size_t i = 0; i < w.size(); ++i)
        for (std::size_t j = 0; j < w[i].size(); ++j) folded[j] += d[i] * w[i][j];
      w = {std::move(folded)};
    }
  }
  return out;
}

// --- NoisePUnCs -------------------------------------------------------------

namespace {

void pair_trees(const PartitionCircuit& o, std::size_t oid, const PartitionCircuit& q,
                std::size_t qid, std::map<std::size_t, std::size_t>& pairing) {
  pairing[oid] = qid;
  const PartitionNode& on = o.node(oid);
  const PartitionNode& qn = q.node(qid);
  if (!on.is_leaf) {
    pair_trees(o, on.left, q, qn.left, pairing);
    pair_trees(o, on.right, q, qn.right, pairing);
  }
}

std::map<std::size_t, std::size_t> o_to_q_pairing(const NoisePunc& c) {
  if (!same_vtree(c.o.tree, c.q.tree))
    throw std::invalid_argument("noise_punc: q and o are not over the same partition tree");
  std::map<std::size_t, std::size_t> pairing;
  pair_trees(c.o.tree, c.o.tree.root(), c.q.tree, c.q.tree.root(), pairing);
  return pairing;
}

}  // namespace

ValidationReport validate_noise_punc(const NoisePunc& c, double tol) {
  ValidationReport report;
  if (!same_vtree(c.o.tree, c.q.tree)) {
    report.push_back({"tree-mismatch", "", 0.0,
                      "q and o circuits are not over the same partition tree"});
    return report;
  }
  for (Violation v : validate(c.o, tol)) {
    v.where = "o:" + v.where;
    report.push_back(std::move(v));
  }
  // The q side only needs [0,1]-bounded parameters and row sums at most one.
  // Leaf completeness is not required: constant circuits like q = 1 have
  // all-ones leaf tables.
  for (const PartitionNode& nd : c.q.tree.nodes()) {
    const std::string where = "q:" + std::to_string(nd.id);
    if (nd.is_leaf) {
      auto it = c.q.leaf_tables.find(nd.id);
      if (it == c.q.leaf_tables.end()) {
        report.push_back({"missing-table", where, 0.0, "q leaf has no table"});
        continue;
      }
      if (it->second.size() != nd.cardinality)
        report.push_back({"table-cardinality", where, 0.0,
                          "q table size differs from variable cardinality"});
      for (const auto& vec : it->second)
        for (double v : vec)
          if (v < -tol || v > 1.0 + tol)
            report.push_back({"unit-interval", where, v, "q leaf entry outside [0,1]"});
    } else {
      auto it = c.q.internal_weights.find(nd.id);
      if (it == c.q.internal_weights.end()) {
        report.push_back({"missing-weights", where, 0.0, "q node has no weights"});
        continue;
      }
      for (const auto& rowv : it->second) {
        double sum = 0.0;
        for (double v : rowv) {
          if (v < -tol || v > 1.0 + tol)
            report.push_back({"unit-interval", where, v, "q weight outside [0,1]"});
          sum += v;
        }
        if (sum > 1.0 + tol)
          report.push_back({"row-mass", where, sum - 1.0, "q weight row sums past one"});
      }
    }
  }
  return report;
}

double noisy_punc_unnormalized(const NoisePunc& c, const Assignment& x) {
  const double q = pc_probability(c.q, x);
  const double p = probability(c.o, x);
  return clamp01(q * p);
}

namespace {

// Per-node joint values T[i] = sum over leaf completions of q_i(x) O(x).
std::vector<ComplexMatrix> joint_pass(const NoisePunc& c,
                                      const std::map<std::size_t, std::size_t>& pairing,
                                      std::size_t oid, const MarginalQuery& query) {
  const PartitionNode& on = c.o.tree.node(oid);
  const PartitionNode& qn = c.q.tree.node(pairing.at(oid));
  if (on.is_leaf) {
    const Povm& povm = c.o.leaf_povms.at(on.id);
    const auto& table = c.q.leaf_tables.at(qn.id);
    const std::size_t m = table.front().size();
    std::vector<ComplexMatrix> joint(m, ComplexMatrix(povm.dim, povm.dim));
    if (query.marginalized.count(on.variable)) {
      for (std::size_t v = 0; v < table.size(); ++v)
        for (std::size_t i = 0; i < m; ++i)
          joint[i] = add(joint[i], scale(table[v][i], povm.elements[v]));
    } else {
      auto it = query.evidence.find(on.variable);
      if (it == query.evidence.end())
        throw std::invalid_argument("noise_punc: variable missing from query");
      for (std::size_t i = 0; i < m; ++i)
        joint[i] = scale(table[it->second][i], povm.elements[it->second]);
    }
    return joint;
  }

  const auto left = joint_pass(c, pairing, on.left, query);
  const auto right = joint_pass(c, pairing, on.right, query);
  const QuantumOperation& op = c.o.internal_ops.at(on.id);
  const auto& w = c.q.internal_weights.at(qn.id);
  const std::size_t inputs = w.front().size();

  std::vector<ComplexMatrix> joint(w.size(), ComplexMatrix(op.out_dim(), op.out_dim()));
  for (std::size_t j = 0; j < inputs; ++j) {
    std::size_t a, b;
    if (qn.combine == CombineMode::kKronecker) {
      a = j / right.size();
      b = j % right.size();
    } else {
      a = b = j;
    }
    const ComplexMatrix combined = on.combine == CombineMode::kKronecker
                                       ? kron(left[a], right[b])
                                       : hadamard(left[a], right[b]);
    const ComplexMatrix image = apply_operation(op, combined);
    for (std::size_t i = 0; i < w.size(); ++i)
      if (w[i][j] != 0.0) joint[i] = add(joint[i], scale(w[i][j], image));
  }
  return joint;
}

}  // namespace

double noisy_punc_marginal(const NoisePunc& c, const MarginalQuery& q) {
  for (std::size_t v = 0; v < c.o.tree.num_vars(); ++v) {
    const bool in_evidence = q.evidence.count(v) > 0;
    const bool in_marginal = q.marginalized.count(v) > 0;
    if (in_evidence == in_marginal)
      throw std::invalid_argument(
          "noise_punc: evidence and marginalized sets must partition the variables");
  }
  const auto pairing = o_to_q_pairing(c);
  const auto joint = joint_pass(c, pairing, c.o.tree.root(), q);
  const cplx t = trace_of_product(c.o.rho.mat, joint.front());
  return clamp01(real_checked(t, "noisy_punc_marginal"));
}

double noisy_punc_normalizer(const NoisePunc& c) {
  MarginalQuery all;
  for (std::size_t v = 0; v < c.o.tree.num_vars(); ++v) all.marginalized.insert(v);
  return noisy_punc_marginal(c, all);
}

double noisy_punc_conditional(const NoisePunc& c, const Assignment& x, double zero_tol) {
  const double z = noisy_punc_normalizer(c);
  if (z <= zero_tol)
    throw NumericalError("noisy_punc_conditional: zero normalizer");
  return noisy_punc_unnormalized(c, x) / z;
}

OperatorMixture expand_operator_mixture(const NoisePunc& c, std::size_t o_node_id,
                                        std::size_t i, const Assignment& x) {
  const PartitionNode& on = c.o.tree.node(o_node_id);
  if (on.is_leaf)
    throw std::invalid_argument("expand_operator_mixture: node is not internal");
  const auto pairing = o_to_q_pairing(c);
  const PartitionNode& qn = c.q.tree.node(pairing.at(o_node_id));
  const auto& w = c.q.internal_weights.at(qn.id);
  if (i >= w.size())
    throw std::invalid_argument("expand_operator_mixture: output index out of range");

  const auto o_vals = evaluate_nodes(c.o, x);
  const auto q_vals = eval_prob_circuit_nodes(c.q, x);
  const std::vector<double>& ql = q_vals[qn.left];
  const std::vector<double>& qr = q_vals[qn.right];
  const QuantumOperation& op = c.o.internal_ops.at(on.id);
  const ComplexMatrix base = apply_operation(
      op, on.combine == CombineMode::kKronecker ? kron(o_vals[on.left], o_vals[on.right])
                                                : hadamard(o_vals[on.left], o_vals[on.right]));

  OperatorMixture mix;
  mix.mixture = ComplexMatrix(op.out_dim(), op.out_dim());
  for (std::size_t j = 0; j < w[i].size(); ++j) {
    std::size_t a, b;
    if (qn.combine == CombineMode::kKronecker) {
      a = j / qr.size();
      b = j % qr.size();
    } else {
      a = b = j;
    }
    mix.weights.push_back(w[i][j]);
    mix.summands.push_back(scale(ql[a] * qr[b], base));
    mix.mixture = add(mix.mixture, scale(w[i][j], mix.summands.back()));
  }
  return mix;
}

}  // namespace punc
