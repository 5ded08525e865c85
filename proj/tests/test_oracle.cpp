#include <doctest.h>

#include <sstream>

#include "punc/generate.hpp"
#include "punc/oracle.hpp"

using namespace punc;

TEST_SUITE_BEGIN("oracle");

TEST_CASE("constant function over two binary variables has unit mass") {
  const auto d = enumerate_distribution([](const Assignment&) { return 0.25; }, {2, 2});
  CHECK(d.probabilities.size() == 4);
  CHECK(d.mass() == doctest::Approx(1.0));
}

TEST_CASE("product distribution matches the analytic table") {
  const double p0 = 0.3, p1 = 0.8;
  const auto d = enumerate_distribution(
      [&](const Assignment& x) {
        return (x.at(0) == 0 ? p0 : 1.0 - p0) * (x.at(1) == 0 ? p1 : 1.0 - p1);
      },
      {2, 2});
  // Lexicographic order, variable 0 slowest: 00, 01, 10, 11.
  CHECK(d.probabilities[0] == doctest::Approx(p0 * p1));
  CHECK(d.probabilities[1] == doctest::Approx(p0 * (1 - p1)));
  CHECK(d.probabilities[2] == doctest::Approx((1 - p0) * p1));
  CHECK(d.probabilities[3] == doctest::Approx((1 - p0) * (1 - p1)));
}

TEST_CASE("state space cap sits at 2^20") {
  CHECK(state_space_size(std::vector<std::size_t>(20, 2)) == std::size_t{1} << 20);
  CHECK_THROWS_AS(
      (void)enumerate_distribution([](const Assignment&) { return 0.0; },
                                   std::vector<std::size_t>(21, 2)),
      std::invalid_argument);
}

TEST_CASE("operator_sum of a projector leaf is the identity") {
  Povm p{2, {ComplexMatrix::diagonal({1.0, 0.0}), ComplexMatrix::diagonal({0.0, 1.0})}};
  const auto total =
      operator_sum([&](const Assignment& x) { return p.elements[x.at(0)]; }, {2});
  CHECK(max_abs_diff(total, ComplexMatrix::identity(2)) == 0.0);
}

TEST_CASE("operator_sum of a noisy povm stays below the identity") {
  Rng rng(83);
  const auto noisy = random_noisy_povm(rng, 3, 4);
  const auto total =
      operator_sum([&](const Assignment& x) { return noisy.elements[x.at(0)]; }, {4});
  CHECK(max_abs_diff(total, noisy.bound) <= 1e-12);
  CHECK(loewner_leq(total, ComplexMatrix::identity(3), 1e-9));
}

TEST_CASE("distributions_equal") {
  CircuitDistribution a{{2, 2}, {0.1, 0.2, 0.3, 0.4}};
  const auto same = distributions_equal(a, a, 1e-12);
  CHECK(same.equal);
  CHECK(same.max_deviation == 0.0);

  CircuitDistribution b = a;
  b.probabilities[2] += 1e-6;
  const auto diff = distributions_equal(a, b, 1e-9);
  CHECK_FALSE(diff.equal);
  CHECK(diff.max_deviation == doctest::Approx(1e-6));

  CircuitDistribution other{{2, 3}, {0, 0, 0, 0, 0, 0}};
  CHECK_THROWS_AS((void)distributions_equal(a, other, 1e-9), std::invalid_argument);
}

TEST_CASE("table export uses one row per assignment") {
  CircuitDistribution d{{2, 2}, {0.25, 0.125, 0.5, 0.125}};
  const std::string table = to_table(d);
  std::istringstream lines(table);
  std::string line;
  std::vector<std::string> rows;
  while (std::getline(lines, line)) rows.push_back(line);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == "0 0 0.25");
  CHECK(rows[2] == "1 0 0.5");
}

TEST_CASE("enumerated mass cross-checks against the full marginal") {
  GeneratorConfig cfg;
  cfg.seed = 12;
  cfg.num_vars = 4;
  cfg.cardinality = 2;
  cfg.leaf_dim = 2;
  cfg.max_internal_dim = 3;
  cfg.kraus_count = 2;
  const auto c = generate_sd_punc(cfg);
  const auto d = enumerate_distribution(
      [&](const Assignment& x) { return probability(c, x); }, c.tree.cardinalities());
  CHECK(std::abs(d.mass() - 1.0) <= 1e-8);

  MarginalQuery all;
  for (std::size_t v = 0; v < 4; ++v) all.marginalized.insert(v);
  CHECK(std::abs(d.mass() - marginal(c, all)) <= 1e-8);
}

TEST_CASE("seventeen significant digits survive the round trip") {
  const double p = 0.12345678901234567;
  CircuitDistribution d{{1}, {p}};
  const std::string table = to_table(d);
  std::istringstream row(table);
  std::string v;
  double parsed = 0.0;
  row >> v >> parsed;
  CHECK(parsed == p);
}

TEST_SUITE_END();
