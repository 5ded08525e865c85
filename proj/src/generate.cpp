#include "punc/generate.hpp"

#include <algorithm>
#include <cmath>

namespace punc {

ComplexMatrix random_gaussian_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
  ComplexMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.complex_normal();
  return m;
}

ComplexMatrix random_semi_unitary(Rng& rng, std::size_t rows, std::size_t cols) {
  if (rows > cols)
    throw DimensionError("random_semi_unitary: rows must not exceed cols");
  ComplexMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    while (true) {
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.complex_normal();
      // Modified Gram-Schmidt against the rows already placed.
      for (std::size_t k = 0; k < i; ++k) {
        cplx proj{0.0, 0.0};
        for (std::size_t j = 0; j < cols; ++j) proj += std::conj(m(k, j)) * m(i, j);
        for (std::size_t j = 0; j < cols; ++j) m(i, j) -= proj * m(k, j);
      }
      double norm2 = 0.0;
      for (std::size_t j = 0; j < cols; ++j) norm2 += std::norm(m(i, j));
      if (norm2 > 1e-12) {
        const double inv = 1.0 / std::sqrt(norm2);
        for (std::size_t j = 0; j < cols; ++j) m(i, j) *= inv;
        break;
      }
    }
  }
  return m;
}

QuantumOperation random_unital_operation(Rng& rng, std::size_t in_dim, std::size_t out_dim,
                                         std::size_t kraus_count) {
  if (kraus_count == 0) throw std::invalid_argument("random_unital_operation: no Kraus slots");
  if (out_dim > in_dim)
    throw DimensionError(
        "random_unital_operation: out_dim exceeds in_dim (no such operation is both "
        "unital and valid)");
  // Convex mixture of co-isometries: K_j = sqrt(w_j) V_j with V_j V_j* = I.
  // Then sum K_j K_j* = I (unital) and sum K_j* K_j = sum w_j V_j* V_j is a
  // mixture of projections, hence below the identity (valid).
  const std::vector<double> weights = random_stochastic_row(rng, kraus_count);
  QuantumOperation op;
  for (std::size_t j = 0; j < kraus_count; ++j)
    op.kraus.push_back(
        scale(std::sqrt(weights[j]), random_semi_unitary(rng, out_dim, in_dim)));
  return op;
}

Povm random_povm(Rng& rng, std::size_t dim, std::size_t outcomes) {
  if (outcomes == 0) throw std::invalid_argument("random_povm: no outcomes");
  const ComplexMatrix blocks = random_semi_unitary(rng, dim, outcomes * dim);
  Povm p;
  p.dim = dim;
  for (std::size_t i = 0; i < outcomes; ++i) {
    ComplexMatrix a(dim, dim);
    for (std::size_t r = 0; r < dim; ++r)
      for (std::size_t c = 0; c < dim; ++c) a(r, c) = blocks(r, i * dim + c);
    p.elements.push_back(multiply(a, conj_transpose(a)));
  }
  return p;
}

NoisyPovm random_noisy_povm(Rng& rng, std::size_t dim, std::size_t outcomes) {
  Povm base = random_povm(rng, dim, outcomes);
  std::vector<ComplexMatrix> elements;
  for (ComplexMatrix& e : base.elements) elements.push_back(scale(rng.uniform(), e));
  return make_noisy_povm(dim, std::move(elements));
}

DensityMatrix random_density(Rng& rng, std::size_t dim) {
  const ComplexMatrix g = random_gaussian_matrix(rng, dim, dim);
  ComplexMatrix m = multiply(g, conj_transpose(g));
  const double tr = trace(m).real();
  return DensityMatrix{scale(1.0 / tr, m)};
}

std::vector<double> random_stochastic_row(Rng& rng, std::size_t n) {
  std::vector<double> row(n);
  double sum = 0.0;
  for (double& v : row) {
    v = std::exp(rng.normal());
    sum += v;
  }
  for (double& v : row) v /= sum;
  return row;
}

namespace {

std::unique_ptr<TreeSpec> random_split(Rng& rng, const std::vector<std::size_t>& vars) {
  if (vars.size() == 1) return TreeSpec::leaf(vars.front());
  const std::size_t cut = 1 + rng.uniform_index(vars.size() - 1);
  std::vector<std::size_t> left(vars.begin(), vars.begin() + cut);
  std::vector<std::size_t> right(vars.begin() + cut, vars.end());
  return TreeSpec::internal(random_split(rng, left), random_split(rng, right));
}

}  // namespace

std::unique_ptr<TreeSpec> random_tree_spec(Rng& rng, std::size_t num_vars) {
  if (num_vars == 0) throw std::invalid_argument("random_tree_spec: no variables");
  std::vector<std::size_t> vars(num_vars);
  for (std::size_t v = 0; v < num_vars; ++v) vars[v] = v;
  // Fisher-Yates off the deterministic stream.
  for (std::size_t i = num_vars; i > 1; --i)
    std::swap(vars[i - 1], vars[rng.uniform_index(i)]);
  return random_split(rng, vars);
}

namespace {

PartitionCircuit with_hadamard_modes(const PartitionCircuit& base, Rng& rng, bool mix) {
  std::vector<PartitionNode> nodes = base.nodes();
  bool any = false;
  std::size_t last_internal = base.root();
  for (PartitionNode& nd : nodes) {
    if (nd.is_leaf) continue;
    last_internal = nd.id;
    if (!mix || rng.coin()) {
      nd.combine = CombineMode::kHadamard;
      any = true;
    }
  }
  if (mix && !any && !nodes[last_internal].is_leaf)
    nodes[last_internal].combine = CombineMode::kHadamard;
  return PartitionCircuit::create(std::move(nodes), base.root(), base.cardinalities());
}

}  // namespace

SdPunc generate_sd_punc_on(const PartitionCircuit& tree, const GeneratorConfig& cfg, Rng& rng) {
  bool any_hadamard = false;
  for (const PartitionNode& nd : tree.nodes())
    if (!nd.is_leaf && nd.combine == CombineMode::kHadamard) any_hadamard = true;

  SdPunc c;
  c.tree = tree;
  std::vector<std::size_t> dims(tree.nodes().size(), 0);
  for (std::size_t id : tree.eval_order()) {
    const PartitionNode& nd = tree.node(id);
    if (nd.is_leaf) {
      dims[id] = cfg.leaf_dim;
      c.leaf_povms[id] = random_povm(rng, dims[id], nd.cardinality);
    } else if (nd.combine == CombineMode::kHadamard) {
      const std::size_t in = dims[nd.left];
      dims[id] = in;  // uniform dimensions keep every Hadamard node well-formed
      c.internal_ops[id] = random_unital_operation(rng, in, dims[id], cfg.kraus_count);
    } else {
      const std::size_t in = dims[nd.left] * dims[nd.right];
      if (any_hadamard) {
        dims[id] = cfg.leaf_dim;
      } else {
        dims[id] = 1 + rng.uniform_index(std::min(cfg.max_internal_dim, in));
      }
      c.internal_ops[id] = random_unital_operation(rng, in, dims[id], cfg.kraus_count);
    }
  }
  c.rho = random_density(rng, dims[tree.root()]);
  return c;
}

SdPunc generate_sd_punc(const GeneratorConfig& cfg) {
  Rng rng(cfg.seed);
  auto spec = random_tree_spec(rng, cfg.num_vars);
  PartitionCircuit tree = PartitionCircuit::build(
      *spec, std::vector<std::size_t>(cfg.num_vars, cfg.cardinality));
  if (cfg.hadamard) tree = with_hadamard_modes(tree, rng, /*mix=*/true);
  return generate_sd_punc_on(tree, cfg, rng);
}

PsdCircuit generate_psd_circuit(const GeneratorConfig& cfg) {
  Rng rng(cfg.seed);
  auto spec = random_tree_spec(rng, cfg.num_vars);
  PartitionCircuit tree = PartitionCircuit::build(
      *spec, std::vector<std::size_t>(cfg.num_vars, cfg.cardinality));

  PsdCircuit c;
  c.tree = tree;
  std::vector<std::size_t> dims(tree.nodes().size(), 0);
  for (std::size_t id : tree.eval_order()) {
    const PartitionNode& nd = tree.node(id);
    if (nd.is_leaf) {
      dims[id] = std::min(cfg.leaf_dim, nd.cardinality);
      c.leaf_mats[id] = random_semi_unitary(rng, dims[id], nd.cardinality);
    } else {
      const std::size_t in = dims[nd.left] * dims[nd.right];
      dims[id] = 1 + rng.uniform_index(std::min(cfg.max_internal_dim, in));
      c.internal_mats[id] = random_semi_unitary(rng, dims[id], in);
    }
  }
  c.rho = random_density(rng, dims[tree.root()]);
  return c;
}

ProbCircuitPT generate_prob_circuit(const GeneratorConfig& cfg) {
  Rng rng(cfg.seed);
  auto spec = random_tree_spec(rng, cfg.num_vars);
  PartitionCircuit tree = PartitionCircuit::build(
      *spec, std::vector<std::size_t>(cfg.num_vars, cfg.cardinality));

  ProbCircuitPT c;
  c.tree = tree;
  std::vector<std::size_t> dims(tree.nodes().size(), 0);
  for (std::size_t id : tree.eval_order()) {
    const PartitionNode& nd = tree.node(id);
    if (nd.is_leaf) {
      dims[id] = cfg.leaf_dim;
      std::vector<std::vector<double>> table(nd.cardinality,
                                             std::vector<double>(dims[id], 0.0));
      for (std::size_t i = 0; i < dims[id]; ++i) {
        const std::vector<double> over_values = random_stochastic_row(rng, nd.cardinality);
        for (std::size_t v = 0; v < nd.cardinality; ++v) table[v][i] = over_values[v];
      }
      c.leaf_tables[id] = std::move(table);
    } else {
      const std::size_t in = dims[nd.left] * dims[nd.right];
      dims[id] = 1 + rng.uniform_index(cfg.max_internal_dim);
      std::vector<std::vector<double>> w;
      for (std::size_t i = 0; i < dims[id]; ++i) w.push_back(random_stochastic_row(rng, in));
      c.internal_weights[id] = std::move(w);
    }
  }
  return c;
}

namespace {

// Scope-block construction: every block holds two same-scope sum units and
// merging two blocks goes through two product units feeding both sums.
struct DPuncBuilder {
  DPunc circuit;
  Rng& rng;
  const GeneratorConfig& cfg;
  std::size_t dim;

  std::size_t add_leaf(std::size_t variable) {
    DPuncUnit u;
    u.id = circuit.units.size();
    u.kind = UnitKind::kLeaf;
    u.variable = variable;
    u.povm = random_povm(rng, dim, cfg.cardinality);
    circuit.units.push_back(std::move(u));
    return circuit.units.size() - 1;
  }

  std::size_t add_product(std::size_t l, std::size_t r) {
    DPuncUnit u;
    u.id = circuit.units.size();
    u.kind = UnitKind::kProduct;
    u.left = l;
    u.right = r;
    circuit.units.push_back(std::move(u));
    return circuit.units.size() - 1;
  }

  std::size_t add_sum(const std::vector<std::size_t>& inputs, std::size_t in_dim,
                      std::size_t out_dim) {
    DPuncUnit u;
    u.id = circuit.units.size();
    u.kind = UnitKind::kSum;
    const std::vector<double> weights = random_stochastic_row(rng, inputs.size());
    for (std::size_t j = 0; j < inputs.size(); ++j)
      u.inputs.push_back({inputs[j], weights[j],
                          random_unital_operation(rng, in_dim, out_dim, cfg.kraus_count)});
    circuit.units.push_back(std::move(u));
    return circuit.units.size() - 1;
  }

  // Two sum units over the merged scope of two blocks.
  std::vector<std::size_t> merge(const std::vector<std::size_t>& left,
                                 const std::vector<std::size_t>& right) {
    const std::size_t p0 = add_product(left[0], right[0]);
    const std::size_t p1 = add_product(left[1 % left.size()], right[1 % right.size()]);
    std::vector<std::size_t> block;
    for (int s = 0; s < 2; ++s) block.push_back(add_sum({p0, p1}, dim * dim, dim));
    return block;
  }

  std::vector<std::size_t> build_tree(const std::vector<std::size_t>& vars,
                                      const std::vector<std::vector<std::size_t>>& leaf_banks,
                                      bool interleave) {
    if (vars.size() == 1) return leaf_banks[vars.front()];
    std::vector<std::size_t> lvars, rvars;
    if (interleave) {
      for (std::size_t i = 0; i < vars.size(); ++i)
        (i % 2 == 0 ? lvars : rvars).push_back(vars[i]);
    } else {
      const std::size_t mid = vars.size() / 2;
      lvars.assign(vars.begin(), vars.begin() + mid);
      rvars.assign(vars.begin() + mid, vars.end());
    }
    return merge(build_tree(lvars, leaf_banks, interleave),
                 build_tree(rvars, leaf_banks, interleave));
  }
};

}  // namespace

DPunc generate_d_punc(const GeneratorConfig& cfg) {
  Rng rng(cfg.seed);
  DPuncBuilder b{DPunc{}, rng, cfg, cfg.leaf_dim};
  b.circuit.cardinalities.assign(cfg.num_vars, cfg.cardinality);

  std::vector<std::vector<std::size_t>> leaf_banks;
  for (std::size_t v = 0; v < cfg.num_vars; ++v) {
    const std::size_t leaf = b.add_leaf(v);
    std::vector<std::size_t> bank;
    for (int s = 0; s < 2; ++s) bank.push_back(b.add_sum({leaf}, b.dim, b.dim));
    leaf_banks.push_back(std::move(bank));
  }

  std::vector<std::size_t> vars(cfg.num_vars);
  for (std::size_t v = 0; v < cfg.num_vars; ++v) vars[v] = v;

  std::vector<std::size_t> tops = b.build_tree(vars, leaf_banks, /*interleave=*/false);
  if (!cfg.structured && cfg.num_vars >= 3) {
    // A second full-scope branch whose products split the variables
    // differently, so equal scopes no longer decompose identically.
    const std::vector<std::size_t> other = b.build_tree(vars, leaf_banks, /*interleave=*/true);
    tops.insert(tops.end(), other.begin(), other.end());
  }

  const std::size_t root_dim =
      1 + rng.uniform_index(std::min(cfg.max_internal_dim, b.dim));
  b.circuit.root = b.add_sum(tops, b.dim, root_dim);
  b.circuit.rho = random_density(rng, root_dim);
  return b.circuit;
}

DProbCircuit generate_d_prob_circuit(const GeneratorConfig& cfg) {
  GeneratorConfig scalar = cfg;
  scalar.leaf_dim = 1;
  scalar.max_internal_dim = 1;
  return scalar_shadow(generate_d_punc(scalar));
}

NoisePunc generate_noise_punc(const GeneratorConfig& cfg) {
  Rng rng(cfg.seed);
  auto spec = random_tree_spec(rng, cfg.num_vars);
  const std::vector<std::size_t> cards(cfg.num_vars, cfg.cardinality);
  PartitionCircuit o_tree = PartitionCircuit::build(*spec, cards);
  if (cfg.hadamard) o_tree = with_hadamard_modes(o_tree, rng, /*mix=*/true);
  PartitionCircuit q_tree = with_hadamard_modes(PartitionCircuit::build(*spec, cards), rng,
                                                /*mix=*/false);

  NoisePunc c;
  c.o = generate_sd_punc_on(o_tree, cfg, rng);

  const std::size_t m = std::max<std::size_t>(1, std::min<std::size_t>(3, cfg.max_internal_dim));
  c.q.tree = q_tree;
  for (std::size_t id : q_tree.eval_order()) {
    const PartitionNode& nd = q_tree.node(id);
    if (nd.is_leaf) {
      std::vector<std::vector<double>> table(nd.cardinality, std::vector<double>(m, 0.0));
      for (auto& vec : table)
        for (double& v : vec) v = rng.uniform(0.05, 1.0);
      c.q.leaf_tables[id] = std::move(table);
    } else {
      std::vector<std::vector<double>> w;
      for (std::size_t i = 0; i < m; ++i) w.push_back(random_stochastic_row(rng, m));
      c.q.internal_weights[id] = std::move(w);
    }
  }
  return c;
}

}  // namespace punc
