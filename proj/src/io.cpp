#include "punc/io.hpp"

#include <json.hpp>

namespace punc {

using nlohmann::json;

const char* family_name(Family f) {
  switch (f) {
    case Family::kSdPunc: return "sd_punc";
    case Family::kPsdCircuit: return "psd_circuit";
    case Family::kProbCircuitPT: return "prob_circuit_pt";
    case Family::kDPunc: return "d_punc";
    case Family::kDProbCircuit: return "d_prob_circuit";
    case Family::kNoisePunc: return "noise_punc";
  }
  return "unknown";
}

std::optional<Family> family_from_name(std::string_view name) {
  if (name == "sd_punc") return Family::kSdPunc;
  if (name == "psd_circuit") return Family::kPsdCircuit;
  if (name == "prob_circuit_pt") return Family::kProbCircuitPT;
  if (name == "d_punc") return Family::kDPunc;
  if (name == "d_prob_circuit") return Family::kDProbCircuit;
  if (name == "noise_punc") return Family::kNoisePunc;
  return std::nullopt;
}

namespace {

// ---- json building blocks -------------------------------------------------

json complex_to_json(const cplx& v) { return json::array({v.real(), v.imag()}); }

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json real_vector_to_json(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(json::array({x, 0.0}));
  return out;
}

json real_matrix_to_json(const std::vector<std::vector<double>>& m) {
  json rows = json::array();
  for (const auto& r : m) rows.push_back(real_vector_to_json(r));
  return rows;
}

// ---- json reading with located errors --------------------------------------

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ParseError(where + ": " + what);
}

const json& get_field(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) fail(where, std::string("missing field '") + key + "'");
  return *it;
}

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& where, bool strict) {
  if (!j.is_object()) fail(where, "expected an object");
  if (!strict) return;
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      if (it.key() == k) known = true;
    if (!known) fail(where, "unknown field '" + it.key() + "'");
  }
}

std::size_t get_uint(const json& j, const char* key, const std::string& where) {
  const json& v = get_field(j, key, where);
  if (!v.is_number_unsigned()) fail(where, std::string("field '") + key + "' must be a nonnegative integer");
  return v.get<std::size_t>();
}

double get_double(const json& j, const char* key, const std::string& where) {
  const json& v = get_field(j, key, where);
  if (!v.is_number()) fail(where, std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

std::string get_string(const json& j, const char* key, const std::string& where) {
  const json& v = get_field(j, key, where);
  if (!v.is_string()) fail(where, std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

cplx complex_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    fail(where, "complex scalar must be a [re, im] pair");
  const cplx v{j[0].get<double>(), j[1].get<double>()};
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
    fail(where, "non-finite scalar");
  return v;
}

ComplexMatrix matrix_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(where, "matrix must be a non-empty array of rows");
  const std::size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty()) fail(where, "matrix rows must be non-empty arrays");
  const std::size_t cols = j[0].size();
  ComplexMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) fail(where, "ragged matrix rows");
    for (std::size_t k = 0; k < cols; ++k)
      m(i, k) = complex_from_json(j[i][k], where);
  }
  return m;
}

double real_from_json(const json& j, const std::string& where) {
  const cplx v = complex_from_json(j, where);
  if (v.imag() != 0.0) fail(where, "expected a real value ([re, 0])");
  return v.real();
}

std::vector<double> real_vector_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(where, "vector must be a non-empty array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const json& e : j) out.push_back(real_from_json(e, where));
  return out;
}

std::vector<std::vector<double>> real_matrix_from_json(const json& j,
                                                       const std::string& where) {
  if (!j.is_array() || j.empty()) fail(where, "matrix must be a non-empty array of rows");
  std::vector<std::vector<double>> out;
  for (const json& row : j) out.push_back(real_vector_from_json(row, where));
  return out;
}

// ---- variables -------------------------------------------------------------

json variables_to_json(const std::vector<std::size_t>& cards) {
  json vars = json::array();
  for (std::size_t v = 0; v < cards.size(); ++v)
    vars.push_back(json{{"cardinality", cards[v]}, {"index", v}});
  return vars;
}

std::vector<std::size_t> variables_from_json(const json& j, bool strict) {
  if (!j.is_array() || j.empty()) fail("variables", "expected a non-empty array");
  std::vector<std::size_t> cards(j.size(), 0);
  std::vector<bool> seen(j.size(), false);
  for (const json& e : j) {
    check_keys(e, {"cardinality", "index"}, "variables", strict);
    const std::size_t idx = get_uint(e, "index", "variables");
    const std::size_t card = get_uint(e, "cardinality", "variables");
    if (idx >= cards.size()) fail("variables", "indices must be dense 0..N-1");
    if (seen[idx]) fail("variables", "duplicate variable index");
    if (card == 0) fail("variables", "cardinality must be positive");
    seen[idx] = true;
    cards[idx] = card;
  }
  return cards;
}

// ---- partition-tree node lists ----------------------------------------------

const char* combine_name(CombineMode m) {
  return m == CombineMode::kKronecker ? "kronecker" : "hadamard";
}

CombineMode combine_from_name(const std::string& s, const std::string& where) {
  if (s == "kronecker") return CombineMode::kKronecker;
  if (s == "hadamard") return CombineMode::kHadamard;
  fail(where, "combine must be 'kronecker' or 'hadamard'");
}

struct ParsedTree {
  std::vector<PartitionNode> nodes;
  std::map<std::size_t, json> params;  // node id -> leftover param fields
};

// Reads the shared tree shape; param_keys name the family-specific fields
// (leaf key first, internal key second).
ParsedTree tree_nodes_from_json(const json& j, const std::vector<std::size_t>& cards,
                                const char* leaf_key, const char* internal_key,
                                const std::string& where, bool strict) {
  if (!j.is_array() || j.empty()) fail(where, "expected a non-empty node array");
  ParsedTree out;
  for (const json& e : j) {
    const std::string kind = get_string(e, "kind", where);
    PartitionNode nd;
    nd.id = get_uint(e, "id", where);
    const std::string node_where = where + "[" + std::to_string(nd.id) + "]";
    if (kind == "leaf") {
      check_keys(e, {"id", "kind", "variable", leaf_key}, node_where, strict);
      nd.is_leaf = true;
      nd.variable = get_uint(e, "variable", node_where);
      if (nd.variable >= cards.size()) fail(node_where, "variable index out of range");
      nd.cardinality = cards[nd.variable];
      out.params[nd.id] = get_field(e, leaf_key, node_where);
    } else if (kind == "internal") {
      check_keys(e, {"id", "kind", "left", "right", "combine", internal_key}, node_where,
                 strict);
      nd.is_leaf = false;
      nd.left = get_uint(e, "left", node_where);
      nd.right = get_uint(e, "right", node_where);
      nd.combine = combine_from_name(get_string(e, "combine", node_where), node_where);
      out.params[nd.id] = get_field(e, internal_key, node_where);
    } else {
      fail(node_where, "kind must be 'leaf' or 'internal'");
    }
    out.nodes.push_back(nd);
  }
  std::sort(out.nodes.begin(), out.nodes.end(),
            [](const PartitionNode& a, const PartitionNode& b) { return a.id < b.id; });
  return out;
}

PartitionCircuit tree_from_parsed(ParsedTree& parsed, std::size_t root,
                                  const std::vector<std::size_t>& cards,
                                  const std::string& where) {
  try {
    return PartitionCircuit::create(parsed.nodes, root, cards);
  } catch (const std::invalid_argument& e) {
    fail(where, e.what());
  }
}

// ---- sd_punc ----------------------------------------------------------------

json sd_punc_nodes_to_json(const SdPunc& c) {
  json nodes = json::array();
  for (const PartitionNode& nd : c.tree.nodes()) {
    json e;
    e["id"] = nd.id;
    if (nd.is_leaf) {
      e["kind"] = "leaf";
      e["variable"] = nd.variable;
      json povm = json::array();
      for (const ComplexMatrix& m : c.leaf_povms.at(nd.id).elements)
        povm.push_back(matrix_to_json(m));
      e["povm"] = std::move(povm);
    } else {
      e["kind"] = "internal";
      e["left"] = nd.left;
      e["right"] = nd.right;
      e["combine"] = combine_name(nd.combine);
      json kraus = json::array();
      for (const ComplexMatrix& m : c.internal_ops.at(nd.id).kraus)
        kraus.push_back(matrix_to_json(m));
      e["kraus"] = std::move(kraus);
    }
    nodes.push_back(std::move(e));
  }
  return nodes;
}

SdPunc sd_punc_from_json(const json& nodes, std::size_t root,
                         const std::vector<std::size_t>& cards, const json& rho,
                         const std::string& where, bool strict) {
  ParsedTree parsed = tree_nodes_from_json(nodes, cards, "povm", "kraus", where, strict);
  SdPunc c;
  c.tree = tree_from_parsed(parsed, root, cards, where);
  for (const PartitionNode& nd : c.tree.nodes()) {
    const json& param = parsed.params.at(nd.id);
    const std::string node_where = where + "[" + std::to_string(nd.id) + "]";
    if (nd.is_leaf) {
      if (!param.is_array() || param.empty()) fail(node_where, "povm must be a non-empty array");
      Povm p;
      for (const json& m : param) p.elements.push_back(matrix_from_json(m, node_where));
      p.dim = p.elements.front().rows();
      c.leaf_povms[nd.id] = std::move(p);
    } else {
      if (!param.is_array() || param.empty())
        fail(node_where, "kraus must be a non-empty array");
      QuantumOperation op;
      for (const json& m : param) op.kraus.push_back(matrix_from_json(m, node_where));
      c.internal_ops[nd.id] = std::move(op);
    }
  }
  c.rho = DensityMatrix{matrix_from_json(rho, where + ".rho")};
  return c;
}

// ---- psd_circuit -------------------------------------------------------------

json psd_nodes_to_json(const PsdCircuit& c) {
  json nodes = json::array();
  for (const PartitionNode& nd : c.tree.nodes()) {
    json e;
    e["id"] = nd.id;
    if (nd.is_leaf) {
      e["kind"] = "leaf";
      e["variable"] = nd.variable;
      e["matrix"] = matrix_to_json(c.leaf_mats.at(nd.id));
    } else {
      e["kind"] = "internal";
      e["left"] = nd.left;
      e["right"] = nd.right;
      e["combine"] = combine_name(nd.combine);
      e["matrix"] = matrix_to_json(c.internal_mats.at(nd.id));
    }
    nodes.push_back(std::move(e));
  }
  return nodes;
}

PsdCircuit psd_from_json(const json& nodes, std::size_t root,
                         const std::vector<std::size_t>& cards, const json& rho,
                         const std::string& where, bool strict) {
  ParsedTree parsed = tree_nodes_from_json(nodes, cards, "matrix", "matrix", where, strict);
  PsdCircuit c;
  c.tree = tree_from_parsed(parsed, root, cards, where);
  for (const PartitionNode& nd : c.tree.nodes()) {
    const std::string node_where = where + "[" + std::to_string(nd.id) + "]";
    const ComplexMatrix m = matrix_from_json(parsed.params.at(nd.id), node_where);
    if (nd.is_leaf)
      c.leaf_mats[nd.id] = m;
    else
      c.internal_mats[nd.id] = m;
  }
  c.rho = DensityMatrix{matrix_from_json(rho, where + ".rho")};
  return c;
}

// ---- prob_circuit_pt -----------------------------------------------------------

json pc_nodes_to_json(const ProbCircuitPT& c) {
  json nodes = json::array();
  for (const PartitionNode& nd : c.tree.nodes()) {
    json e;
    e["id"] = nd.id;
    if (nd.is_leaf) {
      e["kind"] = "leaf";
      e["variable"] = nd.variable;
      json table = json::array();
      for (const auto& vec : c.leaf_tables.at(nd.id))
        table.push_back(real_vector_to_json(vec));
      e["table"] = std::move(table);
    } else {
      e["kind"] = "internal";
      e["left"] = nd.left;
      e["right"] = nd.right;
      e["combine"] = combine_name(nd.combine);
      e["weights"] = real_matrix_to_json(c.internal_weights.at(nd.id));
    }
    nodes.push_back(std::move(e));
  }
  return nodes;
}

ProbCircuitPT pc_from_json(const json& nodes, std::size_t root,
                           const std::vector<std::size_t>& cards, const std::string& where,
                           bool strict) {
  ParsedTree parsed = tree_nodes_from_json(nodes, cards, "table", "weights", where, strict);
  ProbCircuitPT c;
  c.tree = tree_from_parsed(parsed, root, cards, where);
  for (const PartitionNode& nd : c.tree.nodes()) {
    const std::string node_where = where + "[" + std::to_string(nd.id) + "]";
    if (nd.is_leaf)
      c.leaf_tables[nd.id] = real_matrix_from_json(parsed.params.at(nd.id), node_where);
    else
      c.internal_weights[nd.id] = real_matrix_from_json(parsed.params.at(nd.id), node_where);
  }
  return c;
}

// ---- d_punc ---------------------------------------------------------------------

json d_punc_units_to_json(const DPunc& c) {
  json units = json::array();
  for (const DPuncUnit& u : c.units) {
    json e;
    e["id"] = u.id;
    switch (u.kind) {
      case UnitKind::kLeaf: {
        e["kind"] = "leaf";
        e["variable"] = u.variable;
        json povm = json::array();
        for (const ComplexMatrix& m : u.povm.elements) povm.push_back(matrix_to_json(m));
        e["povm"] = std::move(povm);
        break;
      }
      case UnitKind::kProduct:
        e["kind"] = "product";
        e["left"] = u.left;
        e["right"] = u.right;
        break;
      case UnitKind::kSum: {
        e["kind"] = "sum";
        json inputs = json::array();
        for (const SumInput& in : u.inputs) {
          json ij;
          ij["unit"] = in.unit;
          ij["weight"] = in.weight;
          json kraus = json::array();
          for (const ComplexMatrix& m : in.op.kraus) kraus.push_back(matrix_to_json(m));
          ij["kraus"] = std::move(kraus);
          inputs.push_back(std::move(ij));
        }
        e["inputs"] = std::move(inputs);
        break;
      }
    }
    units.push_back(std::move(e));
  }
  return units;
}

DPunc d_punc_from_json(const json& units, std::size_t root,
                       const std::vector<std::size_t>& cards, const json& rho,
                       const std::string& where, bool strict) {
  if (!units.is_array() || units.empty()) fail(where, "expected a non-empty unit array");
  DPunc c;
  c.cardinalities = cards;
  c.root = root;
  std::vector<DPuncUnit> parsed;
  for (const json& e : units) {
    DPuncUnit u;
    u.id = get_uint(e, "id", where);
    const std::string unit_where = where + "[" + std::to_string(u.id) + "]";
    const std::string kind = get_string(e, "kind", unit_where);
    if (kind == "leaf") {
      check_keys(e, {"id", "kind", "variable", "povm"}, unit_where, strict);
      u.kind = UnitKind::kLeaf;
      u.variable = get_uint(e, "variable", unit_where);
      const json& povm = get_field(e, "povm", unit_where);
      if (!povm.is_array() || povm.empty()) fail(unit_where, "povm must be a non-empty array");
      for (const json& m : povm) u.povm.elements.push_back(matrix_from_json(m, unit_where));
      u.povm.dim = u.povm.elements.front().rows();
    } else if (kind == "product") {
      check_keys(e, {"id", "kind", "left", "right"}, unit_where, strict);
      u.kind = UnitKind::kProduct;
      u.left = get_uint(e, "left", unit_where);
      u.right = get_uint(e, "right", unit_where);
    } else if (kind == "sum") {
      check_keys(e, {"id", "kind", "inputs"}, unit_where, strict);
      u.kind = UnitKind::kSum;
      const json& inputs = get_field(e, "inputs", unit_where);
      if (!inputs.is_array() || inputs.empty())
        fail(unit_where, "inputs must be a non-empty array");
      for (const json& ij : inputs) {
        check_keys(ij, {"unit", "weight", "kraus"}, unit_where, strict);
        SumInput in;
        in.unit = get_uint(ij, "unit", unit_where);
        in.weight = get_double(ij, "weight", unit_where);
        const json& kraus = get_field(ij, "kraus", unit_where);
        if (!kraus.is_array() || kraus.empty())
          fail(unit_where, "kraus must be a non-empty array");
        for (const json& m : kraus) in.op.kraus.push_back(matrix_from_json(m, unit_where));
        u.inputs.push_back(std::move(in));
      }
    } else {
      fail(unit_where, "kind must be 'leaf', 'product' or 'sum'");
    }
    parsed.push_back(std::move(u));
  }
  std::sort(parsed.begin(), parsed.end(),
            [](const DPuncUnit& a, const DPuncUnit& b) { return a.id < b.id; });
  c.units = std::move(parsed);
  c.rho = DensityMatrix{matrix_from_json(rho, where + ".rho")};
  return c;
}

// ---- d_prob_circuit -----------------------------------------------------------

json d_prob_units_to_json(const DProbCircuit& c) {
  json units = json::array();
  for (const DProbUnit& u : c.units) {
    json e;
    e["id"] = u.id;
    switch (u.kind) {
      case UnitKind::kLeaf:
        e["kind"] = "leaf";
        e["variable"] = u.variable;
        e["table"] = real_vector_to_json(u.table);
        break;
      case UnitKind::kProduct:
        e["kind"] = "product";
        e["left"] = u.left;
        e["right"] = u.right;
        break;
      case UnitKind::kSum: {
        e["kind"] = "sum";
        json inputs = json::array();
        for (const auto& [unit, weight] : u.inputs)
          inputs.push_back(json{{"unit", unit}, {"weight", weight}});
        e["inputs"] = std::move(inputs);
        break;
      }
    }
    units.push_back(std::move(e));
  }
  return units;
}

DProbCircuit d_prob_from_json(const json& units, std::size_t root,
                              const std::vector<std::size_t>& cards, const std::string& where,
                              bool strict) {
  if (!units.is_array() || units.empty()) fail(where, "expected a non-empty unit array");
  DProbCircuit c;
  c.cardinalities = cards;
  c.root = root;
  std::vector<DProbUnit> parsed;
  for (const json& e : units) {
    DProbUnit u;
    u.id = get_uint(e, "id", where);
    const std::string unit_where = where + "[" + std::to_string(u.id) + "]";
    const std::string kind = get_string(e, "kind", unit_where);
    if (kind == "leaf") {
      check_keys(e, {"id", "kind", "variable", "table"}, unit_where, strict);
      u.kind = UnitKind::kLeaf;
      u.variable = get_uint(e, "variable", unit_where);
      u.table = real_vector_from_json(get_field(e, "table", unit_where), unit_where);
    } else if (kind == "product") {
      check_keys(e, {"id", "kind", "left", "right"}, unit_where, strict);
      u.kind = UnitKind::kProduct;
      u.left = get_uint(e, "left", unit_where);
      u.right = get_uint(e, "right", unit_where);
    } else if (kind == "sum") {
      check_keys(e, {"id", "kind", "inputs"}, unit_where, strict);
      u.kind = UnitKind::kSum;
      const json& inputs = get_field(e, "inputs", unit_where);
      if (!inputs.is_array() || inputs.empty())
        fail(unit_where, "inputs must be a non-empty array");
      for (const json& ij : inputs) {
        check_keys(ij, {"unit", "weight"}, unit_where, strict);
        u.inputs.emplace_back(get_uint(ij, "unit", unit_where),
                              get_double(ij, "weight", unit_where));
      }
    } else {
      fail(unit_where, "kind must be 'leaf', 'product' or 'sum'");
    }
    parsed.push_back(std::move(u));
  }
  std::sort(parsed.begin(), parsed.end(),
            [](const DProbUnit& a, const DProbUnit& b) { return a.id < b.id; });
  c.units = std::move(parsed);
  return c;
}

void throw_on_violations(const ValidationReport& report, const std::string& where) {
  if (report.empty()) return;
  std::string msg = where + ": validation failure:";
  std::size_t shown = 0;
  for (const Violation& v : report) {
    msg += " [" + v.kind + (v.where.empty() ? "" : " at " + v.where) + "] " + v.message + ";";
    if (++shown == 5) {
      msg += " ...";
      break;
    }
  }
  throw ParseError(msg);
}

}  // namespace

CircuitFile parse_circuit(const std::string& text, bool strict, double tol,
                          bool run_validators) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("syntax error: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("top level: expected an object");
  const std::string family_str = get_string(j, "family", "top level");
  const auto family = family_from_name(family_str);
  if (!family) throw ParseError("top level: unknown family '" + family_str + "'");
  const std::size_t version = get_uint(j, "format_version", "top level");
  if (version != 1)
    throw ParseError("top level: unknown format_version " + std::to_string(version));
  const std::vector<std::size_t> cards =
      variables_from_json(get_field(j, "variables", "top level"), strict);

  CircuitFile out;
  out.family = *family;
  switch (*family) {
    case Family::kSdPunc: {
      check_keys(j, {"family", "format_version", "variables", "nodes", "root", "rho"},
                 "top level", strict);
      SdPunc c = sd_punc_from_json(get_field(j, "nodes", "top level"),
                                   get_uint(j, "root", "top level"), cards,
                                   get_field(j, "rho", "top level"), "nodes", strict);
      if (run_validators) throw_on_violations(validate(c, tol), "sd_punc");
      out.value = std::move(c);
      break;
    }
    case Family::kPsdCircuit: {
      check_keys(j, {"family", "format_version", "variables", "nodes", "root", "rho"},
                 "top level", strict);
      PsdCircuit c = psd_from_json(get_field(j, "nodes", "top level"),
                                   get_uint(j, "root", "top level"), cards,
                                   get_field(j, "rho", "top level"), "nodes", strict);
      if (run_validators) throw_on_violations(validate_psd_circuit(c, tol), "psd_circuit");
      out.value = std::move(c);
      break;
    }
    case Family::kProbCircuitPT: {
      check_keys(j, {"family", "format_version", "variables", "nodes", "root"}, "top level",
                 strict);
      ProbCircuitPT c = pc_from_json(get_field(j, "nodes", "top level"),
                                     get_uint(j, "root", "top level"), cards, "nodes", strict);
      if (run_validators) throw_on_violations(validate_prob_circuit(c, tol), "prob_circuit_pt");
      out.value = std::move(c);
      break;
    }
    case Family::kDPunc: {
      check_keys(j, {"family", "format_version", "variables", "units", "root", "rho"},
                 "top level", strict);
      DPunc c = d_punc_from_json(get_field(j, "units", "top level"),
                                 get_uint(j, "root", "top level"), cards,
                                 get_field(j, "rho", "top level"), "units", strict);
      if (run_validators) throw_on_violations(validate(c, tol), "d_punc");
      out.value = std::move(c);
      break;
    }
    case Family::kDProbCircuit: {
      check_keys(j, {"family", "format_version", "variables", "units", "root"}, "top level",
                 strict);
      DProbCircuit c = d_prob_from_json(get_field(j, "units", "top level"),
                                        get_uint(j, "root", "top level"), cards, "units",
                                        strict);
      if (run_validators) throw_on_violations(validate_dprob_circuit(c, tol), "d_prob_circuit");
      out.value = std::move(c);
      break;
    }
    case Family::kNoisePunc: {
      check_keys(j, {"family", "format_version", "variables", "q", "o"}, "top level", strict);
      const json& qj = get_field(j, "q", "top level");
      const json& oj = get_field(j, "o", "top level");
      check_keys(qj, {"nodes", "root"}, "q", strict);
      check_keys(oj, {"nodes", "root", "rho"}, "o", strict);
      NoisePunc c;
      c.q = pc_from_json(get_field(qj, "nodes", "q"), get_uint(qj, "root", "q"), cards,
                         "q.nodes", strict);
      c.o = sd_punc_from_json(get_field(oj, "nodes", "o"), get_uint(oj, "root", "o"), cards,
                              get_field(oj, "rho", "o"), "o.nodes", strict);
      if (run_validators) throw_on_violations(validate_noise_punc(c, tol), "noise_punc");
      out.value = std::move(c);
      break;
    }
  }
  return out;
}

std::string write_circuit(const CircuitFile& file) {
  json j;
  j["family"] = family_name(file.family);
  j["format_version"] = 1;
  switch (file.family) {
    case Family::kSdPunc: {
      const auto& c = std::get<SdPunc>(file.value);
      j["variables"] = variables_to_json(c.tree.cardinalities());
      j["nodes"] = sd_punc_nodes_to_json(c);
      j["root"] = c.tree.root();
      j["rho"] = matrix_to_json(c.rho.mat);
      break;
    }
    case Family::kPsdCircuit: {
      const auto& c = std::get<PsdCircuit>(file.value);
      j["variables"] = variables_to_json(c.tree.cardinalities());
      j["nodes"] = psd_nodes_to_json(c);
      j["root"] = c.tree.root();
      j["rho"] = matrix_to_json(c.rho.mat);
      break;
    }
    case Family::kProbCircuitPT: {
      const auto& c = std::get<ProbCircuitPT>(file.value);
      j["variables"] = variables_to_json(c.tree.cardinalities());
      j["nodes"] = pc_nodes_to_json(c);
      j["root"] = c.tree.root();
      break;
    }
    case Family::kDPunc: {
      const auto& c = std::get<DPunc>(file.value);
      j["variables"] = variables_to_json(c.cardinalities);
      j["units"] = d_punc_units_to_json(c);
      j["root"] = c.root;
      j["rho"] = matrix_to_json(c.rho.mat);
      break;
    }
    case Family::kDProbCircuit: {
      const auto& c = std::get<DProbCircuit>(file.value);
      j["variables"] = variables_to_json(c.cardinalities);
      j["units"] = d_prob_units_to_json(c);
      j["root"] = c.root;
      break;
    }
    case Family::kNoisePunc: {
      const auto& c = std::get<NoisePunc>(file.value);
      j["variables"] = variables_to_json(c.o.tree.cardinalities());
      json qj;
      qj["nodes"] = pc_nodes_to_json(c.q);
      qj["root"] = c.q.tree.root();
      j["q"] = std::move(qj);
      json oj;
      oj["nodes"] = sd_punc_nodes_to_json(c.o);
      oj["root"] = c.o.tree.root();
      oj["rho"] = matrix_to_json(c.o.rho.mat);
      j["o"] = std::move(oj);
      break;
    }
  }
  return j.dump(1) + "\n";
}

CircuitFile generate_circuit(const GeneratorConfig& cfg) {
  const auto family = family_from_name(cfg.family);
  if (!family) throw std::invalid_argument("generate_circuit: unknown family " + cfg.family);
  CircuitFile out;
  out.family = *family;
  switch (*family) {
    case Family::kSdPunc: out.value = generate_sd_punc(cfg); break;
    case Family::kPsdCircuit: out.value = generate_psd_circuit(cfg); break;
    case Family::kProbCircuitPT: out.value = generate_prob_circuit(cfg); break;
    case Family::kDPunc: out.value = generate_d_punc(cfg); break;
    case Family::kDProbCircuit: out.value = generate_d_prob_circuit(cfg); break;
    case Family::kNoisePunc: out.value = generate_noise_punc(cfg); break;
  }
  return out;
}

std::vector<std::size_t> circuit_cardinalities(const CircuitFile& file) {
  return std::visit(
      [](const auto& c) -> std::vector<std::size_t> {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, SdPunc> || std::is_same_v<T, PsdCircuit> ||
                      std::is_same_v<T, ProbCircuitPT>)
          return c.tree.cardinalities();
        else if constexpr (std::is_same_v<T, NoisePunc>)
          return c.o.tree.cardinalities();
        else
          return c.cardinalities;
      },
      file.value);
}

ValidationReport validate_circuit(const CircuitFile& file, double tol) {
  return std::visit(
      [tol](const auto& c) -> ValidationReport {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, SdPunc> || std::is_same_v<T, DPunc>)
          return validate(c, tol);
        else if constexpr (std::is_same_v<T, PsdCircuit>)
          return validate_psd_circuit(c, tol);
        else if constexpr (std::is_same_v<T, ProbCircuitPT>)
          return validate_prob_circuit(c, tol);
        else if constexpr (std::is_same_v<T, DProbCircuit>)
          return validate_dprob_circuit(c, tol);
        else
          return validate_noise_punc(c, tol);
      },
      file.value);
}

double circuit_probability(const CircuitFile& file, const Assignment& x) {
  return std::visit(
      [&x](const auto& c) -> double {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, SdPunc> || std::is_same_v<T, DPunc>)
          return probability(c, x);
        else if constexpr (std::is_same_v<T, PsdCircuit>)
          return eval_psd_circuit(c, x).probability;
        else if constexpr (std::is_same_v<T, ProbCircuitPT>)
          return pc_probability(c, x);
        else if constexpr (std::is_same_v<T, DProbCircuit>)
          return eval_dprob_circuit(c, x);
        else
          return noisy_punc_unnormalized(c, x);
      },
      file.value);
}

double circuit_marginal(const CircuitFile& file, const MarginalQuery& q) {
  return std::visit(
      [&q](const auto& c) -> double {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, SdPunc> || std::is_same_v<T, DPunc>)
          return marginal(c, q);
        else if constexpr (std::is_same_v<T, PsdCircuit>)
          return marginal(psd_to_pure_punc(c), q);
        else if constexpr (std::is_same_v<T, ProbCircuitPT>)
          return pc_marginal(c, q);
        else if constexpr (std::is_same_v<T, DProbCircuit>)
          return dprob_marginal(c, q);
        else
          return noisy_punc_marginal(c, q);
      },
      file.value);
}

}  // namespace punc
