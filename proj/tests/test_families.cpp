#include <doctest.h>

#include "punc/families.hpp"
#include "punc/generate.hpp"
#include "punc/oracle.hpp"

using namespace punc;

namespace {

GeneratorConfig small_cfg(std::uint64_t seed, std::size_t num_vars = 4) {
  GeneratorConfig cfg;
  cfg.seed = seed;
  cfg.num_vars = num_vars;
  cfg.cardinality = 2;
  cfg.leaf_dim = 2;
  cfg.max_internal_dim = 3;
  cfg.kraus_count = 2;
  return cfg;
}

PartitionCircuit hadamard_copy(const PartitionCircuit& tree) {
  std::vector<PartitionNode> nodes = tree.nodes();
  for (auto& nd : nodes)
    if (!nd.is_leaf) nd.combine = CombineMode::kHadamard;
  return PartitionCircuit::create(std::move(nodes), tree.root(), tree.cardinalities());
}

// q of vector dimension one over the o tree: q(x) = c for the all-variables
// function (one leaf carries c, the rest carry 1).
NoisePunc constant_noise(const SdPunc& o, double c) {
  NoisePunc n;
  n.o = o;
  n.q.tree = hadamard_copy(o.tree);
  bool first = true;
  for (std::size_t id : n.q.tree.leaf_ids()) {
    const auto& nd = n.q.tree.node(id);
    const double value = first ? c : 1.0;
    first = false;
    n.q.leaf_tables[id] =
        std::vector<std::vector<double>>(nd.cardinality, std::vector<double>{value});
  }
  for (const auto& nd : n.q.tree.nodes())
    if (!nd.is_leaf) n.q.internal_weights[nd.id] = {{1.0}};
  return n;
}

}  // namespace

TEST_SUITE_BEGIN("families");

// --- PSD circuits ---------------------------------------------------------

TEST_CASE("identity-parameter psd circuit is uniform") {
  PsdCircuit c;
  c.tree = PartitionCircuit::build(*parse_tree_spec("(0,1)"), {2, 2});
  for (std::size_t id : c.tree.leaf_ids()) c.leaf_mats[id] = ComplexMatrix::identity(2);
  c.internal_mats[c.tree.root()] = ComplexMatrix::identity(4);
  c.rho = DensityMatrix{scale(0.25, ComplexMatrix::identity(4))};
  CHECK(validate_psd_circuit(c).empty());
  for (std::size_t v0 = 0; v0 < 2; ++v0)
    for (std::size_t v1 = 0; v1 < 2; ++v1)
      CHECK(eval_psd_circuit(c, assignment_from_values({v0, v1})).probability ==
            doctest::Approx(0.25));
}

TEST_CASE("single-variable psd circuit unfolds to a quadratic form") {
  GeneratorConfig cfg = small_cfg(3, 1);
  const auto c = generate_psd_circuit(cfg);
  const std::size_t leaf = c.tree.root();
  const auto& u = c.leaf_mats.at(leaf);
  for (std::size_t v = 0; v < 2; ++v) {
    const auto col = multiply(u, ComplexMatrix::basis_vector(u.cols(), v));
    const auto quad = multiply(conj_transpose(col), multiply(c.rho.mat, col));
    CHECK(eval_psd_circuit(c, assignment_from_values({v})).probability ==
          doctest::Approx(quad(0, 0).real()).epsilon(1e-12));
  }
}

TEST_CASE("random psd circuits normalize") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const auto c = generate_psd_circuit(small_cfg(seed));
    CHECK(validate_psd_circuit(c).empty());
    const auto d = enumerate_distribution(
        [&](const Assignment& x) { return eval_psd_circuit(c, x).probability; },
        c.tree.cardinalities());
    CHECK(std::abs(d.mass() - 1.0) <= 1e-8);
  }
}

TEST_CASE("psd_to_pure_punc preserves the distribution with rank-one operators") {
  for (std::uint64_t seed = 5; seed <= 7; ++seed) {
    const auto c = generate_psd_circuit(small_cfg(seed));
    const auto punc = psd_to_pure_punc(c);
    CHECK(validate(punc).empty());
    for_each_assignment(c.tree.cardinalities(), [&](const Assignment& x) {
      const auto psd = eval_psd_circuit(c, x);
      CHECK(std::abs(psd.probability - probability(punc, x)) <= 1e-10);

      const auto o = evaluate(punc, x);
      const auto v = psd.root_vector;
      CHECK(max_abs_diff(o, multiply(v, conj_transpose(v))) <= 1e-10);
      if (o.rows() > 1) {
        const auto spectrum = hermitian_eig(hermitize(o), 1e-8);
        CHECK(spectrum.eigenvalues[1] <= 1e-9);  // rank one
      }
    });
  }
}

TEST_CASE("psd_to_pure_punc with identity parameters is exact") {
  PsdCircuit c;
  c.tree = PartitionCircuit::build(*parse_tree_spec("(0,1)"), {2, 2});
  for (std::size_t id : c.tree.leaf_ids()) c.leaf_mats[id] = ComplexMatrix::identity(2);
  c.internal_mats[c.tree.root()] = ComplexMatrix::identity(4);
  c.rho = DensityMatrix{scale(0.25, ComplexMatrix::identity(4))};
  const auto punc = psd_to_pure_punc(c);
  for (std::size_t id : punc.tree.leaf_ids()) {
    const auto& povm = punc.leaf_povms.at(id);
    CHECK(max_abs_diff(povm.elements[0], ComplexMatrix::diagonal({1.0, 0.0})) == 0.0);
    CHECK(max_abs_diff(povm.elements[1], ComplexMatrix::diagonal({0.0, 1.0})) == 0.0);
  }
  for_each_assignment({2, 2}, [&](const Assignment& x) {
    CHECK(probability(punc, x) == eval_psd_circuit(c, x).probability);
  });
}

TEST_CASE("psd_to_pure_punc rejects non-semi-unitary parameters") {
  PsdCircuit c;
  c.tree = PartitionCircuit::build(*parse_tree_spec("0"), {2});
  c.leaf_mats[c.tree.root()] = scale(2.0, ComplexMatrix::identity(2));
  c.rho = DensityMatrix{scale(0.5, ComplexMatrix::identity(2))};
  CHECK_THROWS_AS((void)psd_to_pure_punc(c), std::invalid_argument);
}

// --- Probabilistic circuits -------------------------------------------------

TEST_CASE("scalar-chain probabilistic circuit multiplies leaves") {
  ProbCircuitPT c;
  c.tree = PartitionCircuit::build(*parse_tree_spec("(0,1)"), {2, 2});
  for (std::size_t id : c.tree.leaf_ids()) {
    const double p = c.tree.node(id).variable == 0 ? 0.3 : 0.8;
    c.leaf_tables[id] = {{p}, {1.0 - p}};
  }
  c.internal_weights[c.tree.root()] = {{1.0}};
  CHECK(validate_prob_circuit(c).empty());
  CHECK(pc_probability(c, assignment_from_values({0, 0})) == doctest::Approx(0.3 * 0.8));
  CHECK(pc_probability(c, assignment_from_values({1, 1})) == doctest::Approx(0.7 * 0.2));
}

TEST_CASE("summing circuit outputs over assignments gives all-ones") {
  for (std::uint64_t seed = 11; seed <= 14; ++seed) {
    const auto c = generate_prob_circuit(small_cfg(seed));
    CHECK(validate_prob_circuit(c).empty());
    std::vector<double> total;
    for_each_assignment(c.tree.cardinalities(), [&](const Assignment& x) {
      const auto v = eval_prob_circuit(c, x);
      if (total.empty()) total.assign(v.size(), 0.0);
      for (std::size_t i = 0; i < v.size(); ++i) {
        CHECK(v[i] >= 0.0);
        CHECK(v[i] <= 1.0 + 1e-12);
        total[i] += v[i];
      }
    });
    for (double t : total) CHECK(std::abs(t - 1.0) <= 1e-10);
  }
}

TEST_CASE("one-hot leaves select weight columns") {
  ProbCircuitPT c;
  c.tree = PartitionCircuit::build(*parse_tree_spec("(0,1)"), {2, 2});
  for (std::size_t id : c.tree.leaf_ids())
    c.leaf_tables[id] = {{1.0, 0.0}, {0.0, 1.0}};
  Rng rng(19);
  c.internal_weights[c.tree.root()] = {random_stochastic_row(rng, 4),
                                       random_stochastic_row(rng, 4)};
  const auto& w = c.internal_weights.at(c.tree.root());
  for_each_assignment({2, 2}, [&](const Assignment& x) {
    const std::size_t col = x.at(0) * 2 + x.at(1);
    const auto v = eval_prob_circuit(c, x);
    CHECK(v[0] == doctest::Approx(w[0][col]));
    CHECK(v[1] == doctest::Approx(w[1][col]));
  });
}

TEST_CASE("pc_marginal pushes sums to the leaves") {
  const auto c = generate_prob_circuit(small_cfg(15));
  MarginalQuery all;
  for (std::size_t v = 0; v < 4; ++v) all.marginalized.insert(v);
  CHECK(pc_marginal(c, all) == doctest::Approx(1.0).epsilon(1e-10));

  MarginalQuery half;
  half.evidence[0] = 1;
  half.evidence[2] = 0;
  half.marginalized = {1, 3};
  double brute = 0.0;
  for_each_assignment(c.tree.cardinalities(), [&](const Assignment& x) {
    if (x.at(0) == 1 && x.at(2) == 0) brute += pc_probability(c, x);
  });
  CHECK(pc_marginal(c, half) == doctest::Approx(brute).epsilon(1e-12));
}

// --- Diagonal operations ------------------------------------------------------

TEST_CASE("trivial diagonal operation is the identity") {
  DiagonalOperation d{{{cplx{1.0, 0.0}}}};
  const auto op = make_diagonal_operation(d);
  REQUIRE(op.kraus.size() == 1);
  CHECK(max_abs_diff(op.kraus[0], ComplexMatrix::identity(1)) == 0.0);
  CHECK(is_unital(op));
}

TEST_CASE("row selector matches the displayed 3x3 pattern") {
  const auto j2 = row_selector(1, 3, 3);
  const auto expected =
      ComplexMatrix::from_rows({{0, 0, 0}, {1, 1, 1}, {0, 0, 0}});
  CHECK(max_abs_diff(j2, expected) == 0.0);
}

TEST_CASE("diagonal operations stay diagonal and unital") {
  Rng rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t in = 2 + rng.uniform_index(3);
    const std::size_t out = 1 + rng.uniform_index(3);
    DiagonalOperation d;
    for (std::size_t i = 0; i < out; ++i) {
      const auto row = random_stochastic_row(rng, in);
      std::vector<cplx> factor(in);
      for (std::size_t j = 0; j < in; ++j) factor[j] = std::sqrt(row[j]);
      d.diag_factors.push_back(std::move(factor));
    }
    const auto op = make_diagonal_operation(d);
    CHECK(is_unital(op, 1e-9));

    const auto g = random_gaussian_matrix(rng, in, in);
    const auto image = apply_operation(op, multiply(g, conj_transpose(g)));
    CHECK(max_offdiag_abs(image) <= 1e-12);
  }
}

TEST_CASE("trace-one violation is rejected") {
  DiagonalOperation d{{{cplx{1.0, 0.0}, cplx{1.0, 0.0}}}};
  CHECK_THROWS_AS((void)make_diagonal_operation(d), std::invalid_argument);
}

// --- PC <-> diagonal PUnC ------------------------------------------------------

TEST_CASE("uniform Bernoulli leaf becomes diag(0.5)") {
  ProbCircuitPT c;
  c.tree = PartitionCircuit::build(*parse_tree_spec("0"), {2});
  c.leaf_tables[c.tree.root()] = {{0.5}, {0.5}};
  const auto punc = pc_to_diagonal_punc(c);
  const auto& povm = punc.leaf_povms.at(punc.tree.root());
  CHECK(povm.elements[0](0, 0).real() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(max_abs_diff(punc.rho.mat, ComplexMatrix::from_rows({{1.0}})) == 0.0);
}

TEST_CASE("pc_to_diagonal_punc preserves the distribution with diagonal operators") {
  for (std::uint64_t seed = 21; seed <= 24; ++seed) {
    const auto pc = generate_prob_circuit(small_cfg(seed, 5));
    const auto punc = pc_to_diagonal_punc(pc);
    CHECK(validate(punc).empty());
    for_each_assignment(pc.tree.cardinalities(), [&](const Assignment& x) {
      CHECK(std::abs(pc_probability(pc, x) - probability(punc, x)) <= 1e-10);
      for (const auto& node_value : evaluate_nodes(punc, x))
        CHECK(max_offdiag_abs(node_value) <= 1e-12);
    });
  }
}

TEST_CASE("round trip recovers the original parameters") {
  const auto pc = generate_prob_circuit(small_cfg(31, 4));
  const auto punc = pc_to_diagonal_punc(pc);
  const auto back = diagonal_punc_to_pc(punc);
  CHECK(same_vtree(back.tree, pc.tree));
  for (const auto& [id, table] : pc.leaf_tables) {
    const auto& rec = back.leaf_tables.at(id);
    for (std::size_t v = 0; v < table.size(); ++v)
      for (std::size_t i = 0; i < table[v].size(); ++i)
        CHECK(std::abs(table[v][i] - rec[v][i]) <= 1e-12);
  }
  for (const auto& [id, w] : pc.internal_weights) {
    const auto& rec = back.internal_weights.at(id);
    for (std::size_t i = 0; i < w.size(); ++i)
      for (std::size_t j = 0; j < w[i].size(); ++j)
        CHECK(std::abs(w[i][j] - rec[i][j]) <= 1e-12);
  }
}

TEST_CASE("identity one-dimensional circuit converts to a trivial pc") {
  SdPunc c;
  c.tree = PartitionCircuit::build(*parse_tree_spec("0"), {2});
  c.leaf_povms[c.tree.root()] =
      Povm{1, {ComplexMatrix::from_rows({{0.4}}), ComplexMatrix::from_rows({{0.6}})}};
  c.rho = DensityMatrix{ComplexMatrix::from_rows({{1.0}})};
  const auto pc = diagonal_punc_to_pc(c);
  CHECK(pc.leaf_tables.at(pc.tree.root())[0][0] == doctest::Approx(0.4));
  CHECK(pc.leaf_tables.at(pc.tree.root())[1][0] == doctest::Approx(0.6));
}

TEST_CASE("pure punc input is rejected as non-diagonal") {
  PsdCircuit psd;
  psd.tree = PartitionCircuit::build(*parse_tree_spec("0"), {2});
  const double s = 1.0 / std::sqrt(2.0);
  psd.leaf_mats[psd.tree.root()] = ComplexMatrix::from_rows({{s, s}, {s, -s}});
  psd.rho = DensityMatrix{scale(0.5, ComplexMatrix::identity(2))};
  const auto punc = psd_to_pure_punc(psd);
  CHECK_THROWS_AS((void)diagonal_punc_to_pc(punc), ConversionError);
}

TEST_CASE("general diagonal rho folds into the root weights") {
  const auto pc = generate_prob_circuit(small_cfg(37, 3));
  auto punc = pc_to_diagonal_punc(pc);
  const std::size_t dim = punc.rho.dim();
  Rng rng(39);
  std::vector<cplx> diag(dim);
  double total = 0.0;
  for (auto& v : diag) {
    const double d = rng.uniform(0.1, 1.0);
    v = d;
    total += d;
  }
  for (auto& v : diag) v /= total;
  punc.rho = DensityMatrix{ComplexMatrix::diagonal(diag)};

  const auto back = diagonal_punc_to_pc(punc);
  CHECK(validate_prob_circuit(back).empty());
  for_each_assignment(pc.tree.cardinalities(), [&](const Assignment& x) {
    CHECK(std::abs(pc_probability(back, x) - probability(punc, x)) <= 1e-10);
  });
}

// --- NoisePUnCs ------------------------------------------------------------------

TEST_CASE("unit q reduces to the plain circuit distribution") {
  const auto o = generate_sd_punc(small_cfg(41));
  const auto noise = constant_noise(o, 1.0);
  CHECK(validate_noise_punc(noise).empty());
  double total = 0.0;
  for_each_assignment(o.tree.cardinalities(), [&](const Assignment& x) {
    const double pi = noisy_punc_unnormalized(noise, x);
    CHECK(pi == doctest::Approx(probability(o, x)).epsilon(1e-12));
    total += pi;
  });
  CHECK(std::abs(total - 1.0) <= 1e-10);
}

TEST_CASE("constant q scales the total mass and cancels in the conditional") {
  const auto o = generate_sd_punc(small_cfg(43));
  const auto noise = constant_noise(o, 0.5);
  double total = 0.0;
  for_each_assignment(o.tree.cardinalities(), [&](const Assignment& x) {
    total += noisy_punc_unnormalized(noise, x);
  });
  CHECK(total == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(noisy_punc_normalizer(noise) == doctest::Approx(0.5).epsilon(1e-10));

  for_each_assignment(o.tree.cardinalities(), [&](const Assignment& x) {
    CHECK(noisy_punc_conditional(noise, x) ==
          doctest::Approx(probability(o, x)).epsilon(1e-9));
  });
}

TEST_CASE("random noise circuits are sub-complete with a tractable normalizer") {
  for (std::uint64_t seed = 51; seed <= 54; ++seed) {
    const auto noise = generate_noise_punc(small_cfg(seed));
    CHECK(validate_noise_punc(noise).empty());
    double brute = 0.0;
    for_each_assignment(noise.o.tree.cardinalities(), [&](const Assignment& x) {
      brute += noisy_punc_unnormalized(noise, x);
    });
    CHECK(brute >= -1e-10);
    CHECK(brute <= 1.0 + 1e-10);
    CHECK(std::abs(noisy_punc_normalizer(noise) - brute) <= 1e-9);

    double conditional_mass = 0.0;
    for_each_assignment(noise.o.tree.cardinalities(), [&](const Assignment& x) {
      conditional_mass += noisy_punc_conditional(noise, x);
    });
    CHECK(std::abs(conditional_mass - 1.0) <= 1e-9);
  }
}

TEST_CASE("partial-evidence marginals of the unnormalized mass match brute force") {
  const auto noise = generate_noise_punc(small_cfg(55));
  MarginalQuery q;
  q.evidence[0] = 1;
  q.marginalized = {1, 2, 3};
  double brute = 0.0;
  for_each_assignment(noise.o.tree.cardinalities(), [&](const Assignment& x) {
    if (x.at(0) == 1) brute += noisy_punc_unnormalized(noise, x);
  });
  CHECK(std::abs(noisy_punc_marginal(noise, q) - brute) <= 1e-9);
}

TEST_CASE("zero q has no conditional") {
  const auto o = generate_sd_punc(small_cfg(57));
  const auto noise = constant_noise(o, 0.0);
  CHECK_THROWS_AS((void)noisy_punc_conditional(noise, assignment_from_values({0, 0, 0, 0})),
                  NumericalError);
}

TEST_CASE("a zero leaf row zeroes its events and the rest renormalizes") {
  const auto o = generate_sd_punc(small_cfg(59));
  auto noise = constant_noise(o, 1.0);
  const std::size_t leaf = noise.q.tree.leaf_ids().front();
  const std::size_t var = noise.q.tree.node(leaf).variable;
  noise.q.leaf_tables[leaf][0] = {0.0};  // value 0 of this variable is ruled out

  double conditional_mass = 0.0;
  for_each_assignment(o.tree.cardinalities(), [&](const Assignment& x) {
    const double c = noisy_punc_conditional(noise, x);
    if (x.at(var) == 0) CHECK(c == 0.0);
    conditional_mass += c;
  });
  CHECK(std::abs(conditional_mass - 1.0) <= 1e-9);
}

TEST_CASE("operator mixtures reconstruct the scaled node operator") {
  for (std::uint64_t seed = 61; seed <= 62; ++seed) {
    const auto noise = generate_noise_punc(small_cfg(seed));
    const auto x = assignment_from_values({0, 1, 0, 1});
    const auto o_vals = evaluate_nodes(noise.o, x);
    // The generator builds q and o from one tree spec, so node ids coincide.
    const auto q_vals = eval_prob_circuit_nodes(noise.q, x);

    for (const auto& nd : noise.o.tree.nodes()) {
      if (nd.is_leaf) continue;
      const std::size_t rows = noise.q.internal_weights.at(nd.id).size();
      for (std::size_t i = 0; i < rows; ++i) {
        const auto mix = expand_operator_mixture(noise, nd.id, i, x);
        for (const auto& summand : mix.summands) CHECK(is_psd(summand, 1e-9));
        for (double wv : mix.weights) CHECK(wv >= 0.0);
        CHECK(max_abs_diff(mix.mixture, scale(q_vals[nd.id][i], o_vals[nd.id])) <= 1e-10);
      }
    }
  }
}

TEST_CASE("single-input mixture is the summand itself") {
  const auto o = generate_sd_punc(small_cfg(63));
  const auto noise = constant_noise(o, 0.7);
  const auto x = assignment_from_values({1, 0, 1, 0});
  std::size_t internal = 0;
  for (const auto& nd : noise.o.tree.nodes())
    if (!nd.is_leaf) internal = nd.id;
  const auto mix = expand_operator_mixture(noise, internal, 0, x);
  REQUIRE(mix.weights.size() == 1);
  CHECK(mix.weights[0] == doctest::Approx(1.0));
  CHECK(max_abs_diff(mix.mixture, mix.summands[0]) <= 1e-15);
}

TEST_CASE("scalar mixture for one-dimensional circuits") {
  GeneratorConfig cfg = small_cfg(65);
  cfg.leaf_dim = 1;
  cfg.max_internal_dim = 1;
  const auto noise = generate_noise_punc(cfg);
  const auto x = assignment_from_values({0, 0, 1, 1});
  std::size_t internal = 0;
  for (const auto& nd : noise.o.tree.nodes())
    if (!nd.is_leaf) internal = nd.id;
  const auto mix = expand_operator_mixture(noise, internal, 0, x);
  for (const auto& s : mix.summands) CHECK(s.rows() == 1);
  double recomposed = 0.0;
  for (std::size_t j = 0; j < mix.weights.size(); ++j)
    recomposed += mix.weights[j] * mix.summands[j](0, 0).real();
  CHECK(mix.mixture(0, 0).real() == doctest::Approx(recomposed).epsilon(1e-12));
}

TEST_CASE("mismatched trees are reported") {
  const auto o = generate_sd_punc(small_cfg(67));
  auto noise = constant_noise(o, 1.0);
  NoisePunc broken;
  broken.o = o;
  broken.q = constant_noise(generate_sd_punc(small_cfg(68, 5)), 1.0).q;
  const auto report = validate_noise_punc(broken);
  REQUIRE_FALSE(report.empty());
  CHECK(report.front().kind == "tree-mismatch");
}

TEST_SUITE_END();
