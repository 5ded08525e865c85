#include <doctest.h>

#include "punc/generate.hpp"
#include "punc/partition.hpp"

using namespace punc;

TEST_SUITE_BEGIN("partition");

TEST_CASE("balanced four-variable tree") {
  const auto spec = parse_tree_spec("((0,1),(2,3))");
  const auto c = PartitionCircuit::build(*spec, {2, 2, 2, 2});
  CHECK(c.leaf_count() == 4);
  CHECK(c.nodes().size() == 7);  // 3 internal nodes
  CHECK(c.scope_of(c.root()) == std::vector<std::size_t>{0, 1, 2, 3});
  const auto& root = c.node(c.root());
  CHECK(c.scope_of(root.left) == std::vector<std::size_t>{0, 1});
  CHECK(c.scope_of(root.right) == std::vector<std::size_t>{2, 3});
}

TEST_CASE("single-variable tree is a lone leaf") {
  const auto c = PartitionCircuit::build(*parse_tree_spec("0"), {3});
  CHECK(c.nodes().size() == 1);
  CHECK(c.node(c.root()).is_leaf);
  CHECK(c.scope_of(c.root()) == std::vector<std::size_t>{0});
}

TEST_CASE("duplicate variable is rejected") {
  CHECK_THROWS_WITH_AS(
      (void)PartitionCircuit::build(*parse_tree_spec("((0,1),(0,2))"), {2, 2, 2}),
      "partition circuit: duplicate variable", std::invalid_argument);
}

TEST_CASE("empty or malformed specs are rejected") {
  CHECK_THROWS_AS((void)parse_tree_spec(""), std::invalid_argument);
  CHECK_THROWS_AS((void)parse_tree_spec("((0,1)"), std::invalid_argument);
  CHECK_THROWS_AS((void)parse_tree_spec("(0,1) junk"), std::invalid_argument);
}

TEST_CASE("leaf scopes") {
  const auto c = PartitionCircuit::build(*parse_tree_spec("((0,1),(2,3))"), {2, 2, 2, 2});
  for (std::size_t id : c.leaf_ids())
    CHECK(c.scope_of(id) == std::vector<std::size_t>{c.node(id).variable});
  CHECK_THROWS_AS((void)c.scope_of(99), std::out_of_range);
}

TEST_CASE("scopes split disjointly and internal count is leaves minus one") {
  Rng rng(67);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 2 + rng.uniform_index(6);
    const auto spec = random_tree_spec(rng, n);
    const auto c = PartitionCircuit::build(*spec, std::vector<std::size_t>(n, 2));
    std::size_t internals = 0;
    for (const auto& nd : c.nodes()) {
      if (nd.is_leaf) continue;
      ++internals;
      const auto& l = c.scope_of(nd.left);
      const auto& r = c.scope_of(nd.right);
      std::vector<std::size_t> overlap;
      std::set_intersection(l.begin(), l.end(), r.begin(), r.end(),
                            std::back_inserter(overlap));
      CHECK(overlap.empty());
      CHECK(l.size() + r.size() == c.scope_of(nd.id).size());
    }
    CHECK(internals == c.leaf_count() - 1);
  }
}

TEST_CASE("same_vtree") {
  const auto a = PartitionCircuit::build(*parse_tree_spec("((0,1),(2,3))"), {2, 2, 2, 2});
  CHECK(same_vtree(a, a));

  const auto b = PartitionCircuit::build(*parse_tree_spec("((0,2),(1,3))"), {2, 2, 2, 2});
  CHECK_FALSE(same_vtree(a, b));

  // Structurally equal copies get fresh ids via a different build path but
  // still compare equal.
  auto spec = TreeSpec::internal(
      TreeSpec::internal(TreeSpec::leaf(0), TreeSpec::leaf(1)),
      TreeSpec::internal(TreeSpec::leaf(2), TreeSpec::leaf(3)));
  const auto c = PartitionCircuit::build(*spec, {2, 2, 2, 2});
  CHECK(same_vtree(a, c));

  const auto d = PartitionCircuit::build(*parse_tree_spec("((0,1),(2,3))"), {2, 2, 2, 3});
  CHECK_FALSE(same_vtree(a, d));
}

TEST_SUITE_END();
