#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "polyapprox/experiments.hpp"
#include "polyapprox/metrics.hpp"

using namespace polyapprox;
namespace fs = std::filesystem;

namespace {

nlohmann::json load_json(const std::string& arg) {
  const auto first = arg.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && arg[first] == '{') return nlohmann::json::parse(arg);
  std::ifstream in(arg);
  if (!in) throw std::runtime_error("cannot read " + arg);
  return nlohmann::json::parse(in);
}

std::optional<std::uint64_t> env_seed() {
  const char* s = std::getenv("APPROX_SEED");
  if (!s || !*s) return std::nullopt;
  return std::stoull(s);
}

int run(const std::string& config_path, const std::string& out_dir, int workers, const std::string& format) {
  SweepConfig config = SweepConfig::from_json(load_json(config_path), env_seed());
  if (workers > 0) config.workers = workers;
  const auto records = run_sweep(config);
  fs::create_directories(out_dir);
  if (format != "svg") {
    std::ofstream csv(fs::path(out_dir) / "results.csv", std::ios::binary);
    write_csv(csv, records);
    if (!csv) throw std::runtime_error("cannot write results.csv in " + out_dir);
  }
  if (format != "csv" && !records.empty()) {
    std::ofstream svg(fs::path(out_dir) / "plot.svg", std::ios::binary);
    write_svg(svg, records);
    if (!svg) throw std::runtime_error("cannot write plot.svg in " + out_dir);
  }
  std::size_t failed = 0;
  for (const auto& r : records) failed += r.failed();
  std::cerr << records.size() << " records, " << failed << " flagged\n";
  return 0;
}

int verify(const std::string& body_arg, double eps, const std::string& algo) {
  const Algorithm a = parse_algorithm(algo);
  const nlohmann::json j = load_json(body_arg);
  BodySpec spec = BodySpec::from_json(j);
  if (!j.contains("seed")) {
    if (auto s = env_seed()) spec.seed = *s;
  }
  const Normalized nb = normalize(make_body(spec), eps);
  const Approximation out = approximate(a, *nb.body, eps, false);
  const auto& e = out.diagnostics.error;
  nlohmann::json report{{"body_hash", spec.hash()},
                        {"algorithm", algorithm_name(a)},
                        {"eps", eps},
                        {"facets", out.facets},
                        {"hausdorff", e.hausdorff},
                        {"worst_margin", e.worst_margin},
                        {"contained", e.contained()},
                        {"verified", out.diagnostics.verified}};
  std::cout << report.dump(2) << "\n";
  return out.diagnostics.verified ? 0 : 1;
}

int fit(const std::string& csv_path, const std::string& hash, const std::string& algo) {
  std::ifstream in(csv_path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + csv_path);
  const ExponentFit f = fit_exponent(read_csv(in), hash, algorithm_name(parse_algorithm(algo)));
  nlohmann::json report{{"slope", f.slope}, {"intercept", f.intercept}, {"r2", f.r2}, {"points", f.points}};
  std::cout << report.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Outer polytope approximation of convex bodies"};
  app.require_subcommand(1);

  std::string config, out_dir, format = "both";
  int workers = 0;
  auto* run_cmd = app.add_subcommand("run", "Sweep bodies over eps and algorithms");
  run_cmd->add_option("--config", config, "Sweep config JSON file")->required();
  run_cmd->add_option("--out", out_dir, "Output directory")->required();
  run_cmd->add_option("--workers", workers, "Concurrent cells (overrides the config)")->check(CLI::PositiveNumber);
  run_cmd->add_option("--format", format, "csv, svg or both")->check(CLI::IsMember({"csv", "svg", "both"}));

  std::string body, algo;
  double eps = 0.0;
  auto* verify_cmd = app.add_subcommand("verify", "Approximate one body and report the measured error");
  verify_cmd->add_option("--body", body, "Body JSON, inline or a file")->required();
  verify_cmd->add_option("--eps", eps, "Target Hausdorff distance")->required();
  verify_cmd->add_option("--algo", algo, "dudley or area-sensitive")->required();

  std::string csv_path, hash, fit_algo;
  auto* fit_cmd = app.add_subcommand("fit", "Fit the facet-count exponent from a results CSV");
  fit_cmd->add_option("--csv", csv_path, "results.csv from approx run")->required();
  fit_cmd->add_option("--body", hash, "Body hash column value")->required();
  fit_cmd->add_option("--algo", fit_algo, "dudley or area-sensitive")->required();

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run_cmd) return run(config, out_dir, workers, format);
    if (*verify_cmd) return verify(body, eps, algo);
    return fit(csv_path, hash, fit_algo);
  } catch (const std::exception& e) {
    std::cerr << "approx: " << e.what() << "\n";
    return 2;
  }
}
