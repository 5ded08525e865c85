#include "punc/partition.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <stdexcept>

namespace punc {

std::unique_ptr<TreeSpec> TreeSpec::leaf(std::size_t variable) {
  auto t = std::make_unique<TreeSpec>();
  t->is_leaf = true;
  t->variable = variable;
  return t;
}

std::unique_ptr<TreeSpec> TreeSpec::internal(std::unique_ptr<TreeSpec> left,
                                             std::unique_ptr<TreeSpec> right,
                                             CombineMode combine) {
  auto t = std::make_unique<TreeSpec>();
  t->is_leaf = false;
  t->left = std::move(left);
  t->right = std::move(right);
  t->combine = combine;
  return t;
}

namespace {

std::unique_ptr<TreeSpec> parse_tree_rec(const std::string& s, std::size_t& pos) {
  while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  if (pos >= s.size()) throw std::invalid_argument("tree spec: unexpected end of input");
  if (s[pos] == '(') {
    ++pos;
    auto left = parse_tree_rec(s, pos);
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos >= s.size() || s[pos] != ',')
      throw std::invalid_argument("tree spec: expected ','");
    ++pos;
    auto right = parse_tree_rec(s, pos);
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos >= s.size() || s[pos] != ')')
      throw std::invalid_argument("tree spec: expected ')'");
    ++pos;
    return TreeSpec::internal(std::move(left), std::move(right));
  }
  if (!std::isdigit(static_cast<unsigned char>(s[pos])))
    throw std::invalid_argument("tree spec: expected variable index or '('");
  std::size_t v = 0;
  while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
    v = v * 10 + static_cast<std::size_t>(s[pos] - '0');
    ++pos;
  }
  return TreeSpec::leaf(v);
}

}  // namespace

std::unique_ptr<TreeSpec> parse_tree_spec(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("tree spec: empty spec");
  std::size_t pos = 0;
  auto t = parse_tree_rec(text, pos);
  while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  if (pos != text.size()) throw std::invalid_argument("tree spec: trailing characters");
  return t;
}

PartitionCircuit PartitionCircuit::create(std::vector<PartitionNode> nodes, std::size_t root,
                                          std::vector<std::size_t> cardinalities) {
  if (nodes.empty()) throw std::invalid_argument("partition circuit: empty spec");
  const std::size_t n = nodes.size();
  for (std::size_t i = 0; i < n; ++i)
    if (nodes[i].id != i)
      throw std::invalid_argument("partition circuit: node ids must be dense 0..n-1");
  if (root >= n) throw std::invalid_argument("partition circuit: root id out of range");

  std::vector<std::size_t> parents(n, 0);
  for (const auto& nd : nodes) {
    if (nd.is_leaf) continue;
    if (nd.left >= n || nd.right >= n)
      throw std::invalid_argument("partition circuit: child id out of range");
    if (nd.left == nd.id || nd.right == nd.id)
      throw std::invalid_argument("partition circuit: node is its own child");
    parents[nd.left]++;
    parents[nd.right]++;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t expected = (i == root) ? 0 : 1;
    if (parents[i] != expected)
      throw std::invalid_argument(
          "partition circuit: every non-root node must feed exactly one parent");
  }

  PartitionCircuit c;
  c.nodes_ = std::move(nodes);
  c.root_ = root;

  // Children-before-parent order; cycles make the traversal fail.
  c.eval_order_.reserve(n);
  std::vector<int> state(n, 0);
  std::function<void(std::size_t)> visit = [&](std::size_t id) {
    if (state[id] == 2) return;
    if (state[id] == 1) throw std::invalid_argument("partition circuit: cycle detected");
    state[id] = 1;
    const PartitionNode& nd = c.nodes_[id];
    if (!nd.is_leaf) {
      visit(nd.left);
      visit(nd.right);
    }
    state[id] = 2;
    c.eval_order_.push_back(id);
  };
  visit(root);
  if (c.eval_order_.size() != n)
    throw std::invalid_argument("partition circuit: unreachable nodes present");

  // Variable coverage: every variable 0..N-1 in exactly one leaf.
  std::vector<int> seen(cardinalities.size(), 0);
  for (const auto& nd : c.nodes_) {
    if (!nd.is_leaf) continue;
    if (nd.variable >= cardinalities.size())
      throw std::invalid_argument("partition circuit: leaf variable out of range");
    if (nd.cardinality != cardinalities[nd.variable])
      throw std::invalid_argument("partition circuit: leaf cardinality mismatch");
    if (nd.cardinality == 0)
      throw std::invalid_argument("partition circuit: zero cardinality");
    if (seen[nd.variable]++)
      throw std::invalid_argument("partition circuit: duplicate variable");
  }
  for (std::size_t v = 0; v < cardinalities.size(); ++v)
    if (!seen[v]) throw std::invalid_argument("partition circuit: variable missing from leaves");
  c.cardinalities_ = std::move(cardinalities);

  c.scopes_.assign(n, {});
  for (std::size_t id : c.eval_order_) {
    const PartitionNode& nd = c.nodes_[id];
    if (nd.is_leaf) {
      c.scopes_[id] = {nd.variable};
    } else {
      std::vector<std::size_t> merged;
      std::merge(c.scopes_[nd.left].begin(), c.scopes_[nd.left].end(),
                 c.scopes_[nd.right].begin(), c.scopes_[nd.right].end(),
                 std::back_inserter(merged));
      c.scopes_[id] = std::move(merged);
    }
  }
  return c;
}

namespace {

std::size_t add_spec_nodes(const TreeSpec& spec,
                           const std::vector<std::size_t>& cardinalities,
                           std::vector<PartitionNode>& nodes) {
  PartitionNode nd;
  if (spec.is_leaf) {
    nd.is_leaf = true;
    nd.variable = spec.variable;
    nd.cardinality = spec.variable < cardinalities.size() ? cardinalities[spec.variable] : 0;
  } else {
    nd.is_leaf = false;
    nd.left = add_spec_nodes(*spec.left, cardinalities, nodes);
    nd.right = add_spec_nodes(*spec.right, cardinalities, nodes);
    nd.combine = spec.combine;
  }
  nd.id = nodes.size();
  nodes.push_back(nd);
  return nd.id;
}

}  // namespace

PartitionCircuit PartitionCircuit::build(const TreeSpec& spec,
                                         std::vector<std::size_t> cardinalities) {
  std::vector<PartitionNode> nodes;
  const std::size_t root = add_spec_nodes(spec, cardinalities, nodes);
  return create(std::move(nodes), root, std::move(cardinalities));
}

namespace {

std::unique_ptr<TreeSpec> balanced_spec(std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return TreeSpec::leaf(lo);
  const std::size_t mid = lo + (hi - lo) / 2;
  return TreeSpec::internal(balanced_spec(lo, mid), balanced_spec(mid, hi));
}

}  // namespace

PartitionCircuit PartitionCircuit::build_balanced(std::size_t num_vars,
                                                  std::size_t cardinality) {
  if (num_vars == 0) throw std::invalid_argument("partition circuit: empty spec");
  auto spec = balanced_spec(0, num_vars);
  return build(*spec, std::vector<std::size_t>(num_vars, cardinality));
}

const PartitionNode& PartitionCircuit::node(std::size_t id) const {
  if (id >= nodes_.size()) throw std::out_of_range("partition circuit: unknown node id");
  return nodes_[id];
}

const std::vector<std::size_t>& PartitionCircuit::scope_of(std::size_t id) const {
  if (id >= scopes_.size()) throw std::out_of_range("partition circuit: unknown node id");
  return scopes_[id];
}

std::vector<std::size_t> PartitionCircuit::leaf_ids() const {
  std::vector<std::size_t> ids;
  for (const auto& nd : nodes_)
    if (nd.is_leaf) ids.push_back(nd.id);
  return ids;
}

std::size_t PartitionCircuit::leaf_count() const { return leaf_ids().size(); }

namespace {

bool same_subtree(const PartitionCircuit& a, std::size_t ia, const PartitionCircuit& b,
                  std::size_t ib) {
  const PartitionNode& na = a.node(ia);
  const PartitionNode& nb = b.node(ib);
  if (na.is_leaf != nb.is_leaf) return false;
  if (na.is_leaf) return na.variable == nb.variable && na.cardinality == nb.cardinality;
  return same_subtree(a, na.left, b, nb.left) && same_subtree(a, na.right, b, nb.right);
}

}  // namespace

bool same_vtree(const PartitionCircuit& a, const PartitionCircuit& b) {
  if (a.nodes().size() != b.nodes().size()) return false;
  return same_subtree(a, a.root(), b, b.root());
}

}  // namespace punc
