#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "polyapprox/approximator.hpp"
#include "polyapprox/bodies.hpp"

namespace polyapprox {

struct ExperimentRecord {
  std::string body_hash;
  int d = 2;
  double eps = 0.0;
  std::string algorithm;
  std::size_t facets = 0;
  double hausdorff = 0.0;
  double diameter = 0.0;
  double surface_diameter = 0.0;
  double min_width = 0.0;
  std::optional<double> wall_ms;  // left empty unless timing is requested
  std::uint64_t seed = 0;
  // Empty for accepted cells; otherwise why the cell was rejected.
  std::string failure;

  bool failed() const { return !failure.empty(); }
};

// A body, or a family whose parameters scale with eps:
// eps_params {"theta": [c, p]} sets params.theta = c * eps^p per cell.
struct BodyEntry {
  BodySpec spec;
  std::map<std::string, std::pair<double, double>> eps_params;
  std::vector<double> eps;  // empty: the sweep-wide grid
  bool explicit_seed = false;

  // One hash per entry, shared by every cell of a family.
  std::string hash() const;
  BodySpec at(double eps) const;
};

struct SweepConfig {
  std::vector<BodyEntry> bodies;
  std::vector<double> eps;
  std::vector<Algorithm> algorithms{Algorithm::dudley, Algorithm::area_sensitive};
  std::uint64_t seed = 1;
  int workers = 1;
  bool timing = false;

  // Schema in README.md. env_seed (APPROX_SEED) replaces "seed" when set.
  static SweepConfig from_json(const nlohmann::json& j, std::optional<std::uint64_t> env_seed = std::nullopt);
};

// Geometric grid with ratio 2 from hi down to at least lo.
std::vector<double> eps_grid(double hi, double lo);

// Runs one cell: normalizes the body for eps, approximates and verifies.
// Never throws; problems land in ExperimentRecord::failure.
ExperimentRecord run_cell(const BodyEntry& body, double eps, Algorithm algorithm, std::uint64_t seed, bool timing);

// Records in config order (body, eps, algorithm) regardless of worker count.
std::vector<ExperimentRecord> run_sweep(const SweepConfig& config);

struct ExponentFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::size_t points = 0;
};

// Least squares of log10(facets) against log10(surface_diameter / eps) over
// the accepted records of one body and algorithm. Throws
// std::invalid_argument for fewer than 5 records or less than two decades of eps.
ExponentFit fit_exponent(const std::vector<ExperimentRecord>& records, const std::string& body_hash,
                         const std::string& algorithm);
// Same fit on already filtered records.
ExponentFit fit_exponent(const std::vector<ExperimentRecord>& records);

void write_csv(std::ostream& out, const std::vector<ExperimentRecord>& records);
std::vector<ExperimentRecord> read_csv(std::istream& in);
// Log-log scatter of facets against surface_diameter / eps, one series per
// body and algorithm, with fitted lines where a fit is possible. Throws
// std::invalid_argument for an empty record list.
void write_svg(std::ostream& out, const std::vector<ExperimentRecord>& records);

}  // namespace polyapprox
