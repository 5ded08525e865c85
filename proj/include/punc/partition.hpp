#pragma once

#include <memory>
#include <vector>

#include "punc/matrix.hpp"

namespace punc {

enum class CombineMode { kKronecker, kHadamard };

struct PartitionNode {
  std::size_t id = 0;
  bool is_leaf = true;
  // leaf fields
  std::size_t variable = 0;
  std::size_t cardinality = 0;
  // internal fields
  std::size_t left = 0;
  std::size_t right = 0;
  CombineMode combine = CombineMode::kKronecker;
};

// Nested-pair description of a partition tree, e.g. ((0,1),(2,3)).
struct TreeSpec {
  bool is_leaf = true;
  std::size_t variable = 0;
  std::unique_ptr<TreeSpec> left;
  std::unique_ptr<TreeSpec> right;
  CombineMode combine = CombineMode::kKronecker;

  static std::unique_ptr<TreeSpec> leaf(std::size_t variable);
  static std::unique_ptr<TreeSpec> internal(std::unique_ptr<TreeSpec> left,
                                            std::unique_ptr<TreeSpec> right,
                                            CombineMode combine = CombineMode::kKronecker);
};

// Parses "((0,1),(2,3))" style nested pairs of variable indices.
std::unique_ptr<TreeSpec> parse_tree_spec(const std::string& text);

// Binary tree over a variable set. Leaves carry one variable each; every
// variable 0..N-1 appears in exactly one leaf. Node ids are dense and
// children always precede their parent, so evaluation is one forward pass.
class PartitionCircuit {
 public:
  // Empty placeholder; only circuits produced by create/build are usable.
  PartitionCircuit() = default;

  // Validates structure: single root, every child referenced exactly once,
  // dense variable coverage, positive cardinalities.
  static PartitionCircuit create(std::vector<PartitionNode> nodes, std::size_t root,
                                 std::vector<std::size_t> cardinalities);

  static PartitionCircuit build(const TreeSpec& spec, std::vector<std::size_t> cardinalities);

  // Balanced tree over variables 0..num_vars-1, all leaves with `cardinality`.
  static PartitionCircuit build_balanced(std::size_t num_vars, std::size_t cardinality);

  const std::vector<PartitionNode>& nodes() const { return nodes_; }
  const PartitionNode& node(std::size_t id) const;
  std::size_t root() const { return root_; }
  std::size_t num_vars() const { return cardinalities_.size(); }
  const std::vector<std::size_t>& cardinalities() const { return cardinalities_; }

  // Ids in an order where children precede parents.
  const std::vector<std::size_t>& eval_order() const { return eval_order_; }

  // Sorted variable indices under the node's subtree.
  const std::vector<std::size_t>& scope_of(std::size_t id) const;

  std::vector<std::size_t> leaf_ids() const;
  std::size_t leaf_count() const;

 private:
  std::vector<PartitionNode> nodes_;
  std::size_t root_ = 0;
  std::vector<std::size_t> cardinalities_;
  std::vector<std::size_t> eval_order_;
  std::vector<std::vector<std::size_t>> scopes_;
};

// Trees are isomorphic with identical variable placement and cardinalities.
// Node ids and combine modes do not affect the comparison.
bool same_vtree(const PartitionCircuit& a, const PartitionCircuit& b);

}  // namespace punc
