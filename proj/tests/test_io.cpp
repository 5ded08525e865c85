#include <doctest.h>

#include "punc/io.hpp"
#include "punc/oracle.hpp"

using namespace punc;

namespace {

GeneratorConfig cfg_for(const std::string& family, std::uint64_t seed) {
  GeneratorConfig cfg;
  cfg.seed = seed;
  cfg.family = family;
  cfg.num_vars = 4;
  cfg.cardinality = 2;
  cfg.leaf_dim = 2;
  cfg.max_internal_dim = 3;
  cfg.kraus_count = 2;
  return cfg;
}

const char* kAllFamilies[] = {"sd_punc",  "psd_circuit",    "prob_circuit_pt",
                              "d_punc",   "d_prob_circuit", "noise_punc"};

}  // namespace

TEST_SUITE_BEGIN("io");

TEST_CASE("every generated family validates and round-trips") {
  for (const char* family : kAllFamilies) {
    CAPTURE(family);
    const auto file = generate_circuit(cfg_for(family, 7));
    CHECK(validate_circuit(file).empty());

    const std::string bytes = write_circuit(file);
    const auto reparsed = parse_circuit(bytes);
    CHECK(reparsed.family == file.family);
    CHECK(write_circuit(reparsed) == bytes);

    // Semantic equality via the distribution table.
    const auto cards = circuit_cardinalities(file);
    for_each_assignment(cards, [&](const Assignment& x) {
      CHECK(circuit_probability(file, x) ==
            doctest::Approx(circuit_probability(reparsed, x)).epsilon(1e-15));
    });
  }
}

TEST_CASE("generation is deterministic per seed") {
  for (const char* family : kAllFamilies) {
    CAPTURE(family);
    const std::string a = write_circuit(generate_circuit(cfg_for(family, 99)));
    const std::string b = write_circuit(generate_circuit(cfg_for(family, 99)));
    CHECK(a == b);
    const std::string c = write_circuit(generate_circuit(cfg_for(family, 100)));
    CHECK(a != c);
  }
}

TEST_CASE("structured flag controls decomposition sharing") {
  auto cfg = cfg_for("d_punc", 5);
  cfg.structured = false;
  const auto file = generate_circuit(cfg);
  CHECK_FALSE(is_structured_decomposable(std::get<DPunc>(file.value)));

  cfg.structured = true;
  const auto file2 = generate_circuit(cfg);
  CHECK(is_structured_decomposable(std::get<DPunc>(file2.value)));
}

TEST_CASE("syntax and version errors") {
  CHECK_THROWS_AS((void)parse_circuit(""), ParseError);
  CHECK_THROWS_AS((void)parse_circuit("not json"), ParseError);
  CHECK_THROWS_AS((void)parse_circuit("[1,2,3]"), ParseError);

  std::string bytes = write_circuit(generate_circuit(cfg_for("sd_punc", 1)));
  const auto version_pos = bytes.find("\"format_version\": 1");
  REQUIRE(version_pos != std::string::npos);
  std::string wrong = bytes;
  wrong.replace(version_pos, 19, "\"format_version\": 9");
  CHECK_THROWS_AS((void)parse_circuit(wrong), ParseError);
}

TEST_CASE("strict mode rejects unknown fields") {
  std::string bytes = write_circuit(generate_circuit(cfg_for("sd_punc", 2)));
  std::string extra = bytes;
  extra.replace(extra.find("\"family\""), 8, "\"surprise\": 1,\n \"family\"");
  CHECK_THROWS_AS((void)parse_circuit(extra, /*strict=*/true), ParseError);
  CHECK_NOTHROW((void)parse_circuit(extra, /*strict=*/false));
}

TEST_CASE("weight violations are reported with the unit id") {
  const auto file = generate_circuit(cfg_for("d_prob_circuit", 3));
  auto broken = std::get<DProbCircuit>(file.value);
  std::size_t bad_unit = 0;
  for (auto& u : broken.units)
    if (u.kind == UnitKind::kSum && u.inputs.size() > 1) {
      u.inputs[0].second += 0.1;  // weights sum to 1.1
      bad_unit = u.id;
      break;
    }
  const std::string bytes = write_circuit(CircuitFile{Family::kDProbCircuit, broken});
  try {
    (void)parse_circuit(bytes);
    FAIL("expected a validation failure");
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("weight-sum") != std::string::npos);
    CHECK(msg.find(std::to_string(bad_unit)) != std::string::npos);
  }
}

TEST_CASE("validation failures on parse name the node") {
  const auto file = generate_circuit(cfg_for("sd_punc", 4));
  auto broken = std::get<SdPunc>(file.value);
  const std::size_t id = broken.internal_ops.begin()->first;
  for (auto& k : broken.internal_ops[id].kraus) k = scale(2.0, k);
  const std::string bytes = write_circuit(CircuitFile{Family::kSdPunc, broken});
  try {
    (void)parse_circuit(bytes);
    FAIL("expected a validation failure");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("non-unital") != std::string::npos);
  }
}

TEST_CASE("hadamard-mode circuits survive the file format") {
  auto cfg = cfg_for("sd_punc", 6);
  cfg.hadamard = true;
  const auto file = generate_circuit(cfg);
  const auto reparsed = parse_circuit(write_circuit(file));
  const auto& c = std::get<SdPunc>(reparsed.value);
  bool has_hadamard = false;
  for (const auto& nd : c.tree.nodes())
    if (!nd.is_leaf && nd.combine == CombineMode::kHadamard) has_hadamard = true;
  CHECK(has_hadamard);
}

TEST_CASE("noise circuits with hadamard-mode o round-trip") {
  auto cfg = cfg_for("noise_punc", 9);
  cfg.hadamard = true;
  const auto file = generate_circuit(cfg);
  CHECK(validate_circuit(file).empty());
  const std::string bytes = write_circuit(file);
  const auto reparsed = parse_circuit(bytes);
  CHECK(write_circuit(reparsed) == bytes);
  const auto& noise = std::get<NoisePunc>(reparsed.value);
  CHECK(std::abs(noisy_punc_normalizer(noise) -
                 noisy_punc_normalizer(std::get<NoisePunc>(file.value))) == 0.0);
}

TEST_CASE("larger cardinalities round-trip") {
  auto cfg = cfg_for("sd_punc", 8);
  cfg.num_vars = 3;
  cfg.cardinality = 3;
  const auto file = generate_circuit(cfg);
  CHECK(validate_circuit(file).empty());
  const auto reparsed = parse_circuit(write_circuit(file));
  CHECK(circuit_cardinalities(reparsed) == std::vector<std::size_t>(3, 3));
}

TEST_SUITE_END();
