#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "punc/io.hpp"
#include "punc/oracle.hpp"

using namespace punc;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitConversion = 3;

double default_tolerance() {
  if (const char* env = std::getenv("PUNC_TOLERANCE")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && v > 0.0) return v;
    std::cerr << "warning: ignoring invalid PUNC_TOLERANCE value '" << env << "'\n";
  }
  return kDefaultTol;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << bytes;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  if (!current.empty()) parts.push_back(current);
  return parts;
}

Assignment parse_values(const std::string& csv, const std::vector<std::size_t>& cards) {
  const auto parts = split(csv, ',');
  if (parts.size() != cards.size())
    throw CLI::ValidationError("--x", "expected " + std::to_string(cards.size()) +
                                          " comma-separated values");
  std::vector<std::size_t> values;
  for (const std::string& p : parts) {
    std::size_t pos = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(p, &pos);
    } catch (const std::exception&) {
      throw CLI::ValidationError("--x", "values must be nonnegative integers");
    }
    if (pos != p.size()) throw CLI::ValidationError("--x", "values must be integers");
    values.push_back(v);
  }
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i] >= cards[i])
      throw CLI::ValidationError("--x", "value for variable " + std::to_string(i) +
                                            " exceeds its cardinality");
  return assignment_from_values(values);
}

MarginalQuery parse_evidence(const std::string& csv, const std::vector<std::size_t>& cards) {
  MarginalQuery q;
  if (!csv.empty()) {
    for (const std::string& item : split(csv, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos)
        throw CLI::ValidationError("--evidence", "expected var=value pairs");
      try {
        const std::size_t var = std::stoul(item.substr(0, eq));
        const std::size_t val = std::stoul(item.substr(eq + 1));
        if (var >= cards.size() || val >= cards[var])
          throw CLI::ValidationError("--evidence", "variable or value out of range");
        if (q.evidence.count(var))
          throw CLI::ValidationError("--evidence", "duplicate variable");
        q.evidence[var] = val;
      } catch (const CLI::ValidationError&) {
        throw;
      } catch (const std::exception&) {
        throw CLI::ValidationError("--evidence", "expected var=value pairs");
      }
    }
  }
  for (std::size_t v = 0; v < cards.size(); ++v)
    if (!q.evidence.count(v)) q.marginalized.insert(v);
  return q;
}

CircuitFile convert_to(const CircuitFile& in, Family target) {
  if (in.family == Family::kProbCircuitPT && target == Family::kSdPunc)
    return {target, pc_to_diagonal_punc(std::get<ProbCircuitPT>(in.value))};
  if (in.family == Family::kSdPunc && target == Family::kProbCircuitPT)
    return {target, diagonal_punc_to_pc(std::get<SdPunc>(in.value))};
  if (in.family == Family::kPsdCircuit && target == Family::kSdPunc)
    return {target, psd_to_pure_punc(std::get<PsdCircuit>(in.value))};
  if (in.family == Family::kSdPunc && target == Family::kDPunc)
    return {target, embed_sd(std::get<SdPunc>(in.value))};
  if (in.family == Family::kPsdCircuit && target == Family::kDPunc)
    return {target, embed_sd(psd_to_pure_punc(std::get<PsdCircuit>(in.value)))};
  if (in.family == Family::kProbCircuitPT && target == Family::kDPunc)
    return {target, embed_sd(pc_to_diagonal_punc(std::get<ProbCircuitPT>(in.value)))};
  throw ConversionError(std::string("no conversion from ") + family_name(in.family) +
                        " to " + family_name(target));
}

int run(int argc, char** argv) {
  const double tol = default_tolerance();

  CLI::App app{"positive unital circuits: evaluation, conversion and verification"};
  app.require_subcommand(1);

  std::string file_path, x_csv, evidence_csv, to_family, out_path;
  GeneratorConfig gen_cfg;
  std::size_t bench_queries = 100;
  std::uint64_t bench_seed = 1;

  auto* cmd_validate = app.add_subcommand("validate", "check a circuit file's invariants");
  cmd_validate->add_option("file", file_path)->required();

  auto* cmd_prob = app.add_subcommand("prob", "probability of a total assignment");
  cmd_prob->add_option("file", file_path)->required();
  cmd_prob->add_option("--x", x_csv, "comma-separated values, one per variable")->required();

  auto* cmd_marginal = app.add_subcommand("marginal", "marginal probability of evidence");
  cmd_marginal->add_option("file", file_path)->required();
  cmd_marginal->add_option("--evidence", evidence_csv,
                           "var=value pairs; unlisted variables are summed out");

  auto* cmd_enumerate =
      app.add_subcommand("enumerate", "print the full distribution table");
  cmd_enumerate->add_option("file", file_path)->required();

  auto* cmd_convert = app.add_subcommand("convert", "convert between circuit families");
  cmd_convert->add_option("file", file_path)->required();
  cmd_convert->add_option("--to", to_family)->required();
  cmd_convert->add_option("--out", out_path, "output path (default <file>.<family>.json)");

  auto* cmd_random = app.add_subcommand("random", "emit a random circuit file");
  cmd_random->add_option("--family", gen_cfg.family)->required();
  cmd_random->add_option("--seed", gen_cfg.seed);
  cmd_random->add_option("--num-vars", gen_cfg.num_vars);
  cmd_random->add_option("--cardinality", gen_cfg.cardinality);
  cmd_random->add_option("--leaf-dim", gen_cfg.leaf_dim);
  cmd_random->add_option("--max-internal-dim", gen_cfg.max_internal_dim);
  cmd_random->add_option("--kraus", gen_cfg.kraus_count);
  cmd_random->add_flag("--structured,!--unstructured", gen_cfg.structured,
                       "share decompositions across equal scopes (d_punc)");
  cmd_random->add_flag("--hadamard", gen_cfg.hadamard, "mix Hadamard-mode nodes in");
  cmd_random->add_option("--out", out_path, "output path (default stdout)");

  auto* cmd_bench = app.add_subcommand("bench", "time marginal queries");
  cmd_bench->add_option("file", file_path)->required();
  cmd_bench->add_option("--queries", bench_queries);
  cmd_bench->add_option("--seed", bench_seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (cmd_validate->parsed()) {
    const auto file = parse_circuit(read_file(file_path), true, tol, /*run_validators=*/false);
    const auto report = validate_circuit(file, tol);
    for (const auto& v : report) {
      std::cerr << v.kind;
      if (!v.where.empty()) std::cerr << " at " << v.where;
      if (v.residual > 0.0) std::cerr << " (residual " << v.residual << ")";
      std::cerr << ": " << v.message << "\n";
    }
    if (report.empty()) {
      std::cout << "valid\n";
      return 0;
    }
    return kExitValidation;
  }

  if (cmd_prob->parsed()) {
    const auto file = parse_circuit(read_file(file_path), true, tol);
    const auto x = parse_values(x_csv, circuit_cardinalities(file));
    std::printf("%.17g\n", circuit_probability(file, x));
    return 0;
  }

  if (cmd_marginal->parsed()) {
    const auto file = parse_circuit(read_file(file_path), true, tol);
    const auto q = parse_evidence(evidence_csv, circuit_cardinalities(file));
    std::printf("%.17g\n", circuit_marginal(file, q));
    return 0;
  }

  if (cmd_enumerate->parsed()) {
    const auto file = parse_circuit(read_file(file_path), true, tol);
    const auto table = enumerate_distribution(
        [&](const Assignment& x) { return circuit_probability(file, x); },
        circuit_cardinalities(file));
    std::cout << to_table(table);
    return 0;
  }

  if (cmd_convert->parsed()) {
    const auto target = family_from_name(to_family);
    if (!target) {
      std::cerr << "unknown target family: " << to_family << "\n";
      return kExitUsage;
    }
    const auto file = parse_circuit(read_file(file_path), true, tol);
    const auto converted = convert_to(file, *target);
    const std::string path =
        out_path.empty() ? file_path + "." + family_name(*target) + ".json" : out_path;
    write_file(path, write_circuit(converted));

    const auto cards = circuit_cardinalities(file);
    const auto a = enumerate_distribution(
        [&](const Assignment& x) { return circuit_probability(file, x); }, cards);
    const auto b = enumerate_distribution(
        [&](const Assignment& x) { return circuit_probability(converted, x); }, cards);
    std::printf("wrote %s\nmax deviation: %.3e\n", path.c_str(),
                distributions_equal(a, b, 0.0).max_deviation);
    return 0;
  }

  if (cmd_random->parsed()) {
    const std::string bytes = write_circuit(generate_circuit(gen_cfg));
    if (out_path.empty())
      std::cout << bytes;
    else
      write_file(out_path, bytes);
    return 0;
  }

  if (cmd_bench->parsed()) {
    const auto file = parse_circuit(read_file(file_path), true, tol);
    const auto cards = circuit_cardinalities(file);
    Rng rng(bench_seed);
    std::vector<MarginalQuery> queries;
    for (std::size_t i = 0; i < bench_queries; ++i) {
      MarginalQuery q;
      for (std::size_t v = 0; v < cards.size(); ++v) {
        if (rng.coin())
          q.marginalized.insert(v);
        else
          q.evidence[v] = rng.uniform_index(cards[v]);
      }
      queries.push_back(std::move(q));
    }
    double sink = 0.0;
    const auto start = std::chrono::steady_clock::now();
    for (const auto& q : queries) sink += circuit_marginal(file, q);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%zu queries, %.6f ms/query (checksum %.6f)\n", bench_queries,
                1000.0 * secs / double(bench_queries), sink);
    return 0;
  }

  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitValidation;
  } catch (const ConversionError& e) {
    std::cerr << e.what() << "\n";
    return kExitConversion;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitValidation;
  }
}
