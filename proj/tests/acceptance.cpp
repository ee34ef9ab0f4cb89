// Acceptance run: one PASS/FAIL line per criterion. Exit status is nonzero
// if any criterion fails, except those named with --known-blocked.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <unistd.h>

#include "polyapprox/caps.hpp"
#include "polyapprox/experiments.hpp"
#include "polyapprox/macbeath.hpp"
#include "polyapprox/metrics.hpp"

using namespace polyapprox;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double pow2(int k) { return std::ldexp(1.0, -k); }

// Cells are shared between criteria.
class Cells {
 public:
  const ExperimentRecord& get(const nlohmann::json& body, double eps, Algorithm a) {
    const std::string key = body.dump() + "|" + fmt("%.17g", eps) + "|" + algorithm_name(a);
    auto it = cache_.find(key);
    if (it == cache_.end()) {
      BodyEntry e;
      e.spec = BodySpec::from_json(body);
      it = cache_.emplace(key, run_cell(e, eps, a, e.spec.seed, true)).first;
    }
    return it->second;
  }

 private:
  std::map<std::string, ExperimentRecord> cache_;
};

nlohmann::json needle(double theta) { return {{"kind", "needle"}, {"d", 3}, {"params", {{"L", 1}, {"theta", theta}}}}; }
nlohmann::json ball(int d) { return {{"kind", "ball"}, {"d", d}}; }

Outcome envelope(Cells& cells) {
  const auto start = std::chrono::steady_clock::now();
  std::size_t total = 0, bad = 0;
  std::string first;
  const auto visit = [&](const nlohmann::json& body, double eps) {
    for (Algorithm a : {Algorithm::dudley, Algorithm::area_sensitive}) {
      const ExperimentRecord& r = cells.get(body, eps, a);
      ++total;
      if (r.failed() || r.hausdorff > eps * (1 + 1e-6)) {
        if (!bad++) first = body.dump() + " eps=" + fmt("%g", eps) + " " + r.algorithm + ": " + r.failure;
      }
    }
  };
  for (int k = 4; k <= 10; ++k) {
    const double e = pow2(k);
    visit(ball(2), e);
    visit({{"kind", "ellipsoid"}, {"d", 2}, {"params", {{"radii", {1, 0.2}}}}}, e);
    for (double delta : {e / 4, e}) visit({{"kind", "rounded-polygon"}, {"d", 2}, {"params", {{"delta", delta}}}}, e);
  }
  for (int k = 3; k <= 8; ++k) {
    const double e = pow2(k);
    visit(ball(3), e);
    visit(needle(4 * e), e);
    visit(needle(16 * e), e);
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  Outcome o;
  o.pass = bad == 0 && s < 600;
  o.detail = std::to_string(total - bad) + "/" + std::to_string(total) + " cells contained and within eps, " +
             fmt("%.0f", s) + " s" + (bad ? "; first failure " + first : "");
  return o;
}

// Exponent of facets against 1/eps.
ExponentFit inverse_eps_fit(std::vector<ExperimentRecord> rs) {
  for (auto& r : rs) r.surface_diameter = 1.0;
  return fit_exponent(rs);
}

Outcome dudley_tightness(Cells& cells) {
  std::vector<ExperimentRecord> disk, sphere;
  for (int k = 4; k <= 12; ++k) disk.push_back(cells.get(ball(2), pow2(k), Algorithm::dudley));
  for (int k = 3; k <= 10; ++k) sphere.push_back(cells.get(ball(3), pow2(k), Algorithm::dudley));
  const ExponentFit f2 = inverse_eps_fit(disk), f3 = inverse_eps_fit(sphere);
  Outcome o;
  o.pass = std::abs(f2.slope - 0.5) <= 0.05 && std::abs(f3.slope - 1.0) <= 0.1 && f2.r2 >= 0.98 && f3.r2 >= 0.98;
  o.detail = "disk slope " + fmt("%.3f", f2.slope) + " r2 " + fmt("%.4f", f2.r2) + ", ball slope " +
             fmt("%.3f", f3.slope) + " r2 " + fmt("%.4f", f3.r2);
  return o;
}

Outcome area_sensitivity(Cells& cells) {
  std::vector<ExperimentRecord> as, du;
  for (int k = 3; k <= 10; ++k) {
    const double e = pow2(k);
    as.push_back(cells.get(needle(0.5 * std::sqrt(e)), e, Algorithm::area_sensitive));
    du.push_back(cells.get(needle(0.5 * std::sqrt(e)), e, Algorithm::dudley));
  }
  Outcome o;
  for (const auto& r : as)
    if (r.failed()) o.detail += "flagged cell eps=" + fmt("%g", r.eps) + " (" + r.failure + "); ";
  const ExponentFit f = fit_exponent(as);
  bool below = true;
  std::string counts;
  for (std::size_t i = as.size() - 3; i < as.size(); ++i) {
    below = below && as[i].facets < du[i].facets;
    counts += " " + std::to_string(as[i].facets) + "<" + std::to_string(du[i].facets);
  }
  o.pass = std::abs(f.slope - 1.0) <= 0.15 && below;
  o.detail += "exponent vs surface_diameter/eps " + fmt("%.3f", f.slope) + " r2 " + fmt("%.3f", f.r2) +
              "; smallest eps counts" + counts;
  return o;
}

// Envelope of perturbed tangent planes of |z|^2/2.
std::shared_ptr<const PLUShape> random_ushape(int d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> s(-1.0, 1.0), jitter(0.0, 0.05);
  std::vector<PLUShape::Plane> planes;
  const int n = d == 2 ? 12 : 40;
  for (int k = 0; k < n; ++k) {
    Vec a{};
    for (int i = 0; i < d - 1; ++i) a[i] = s(rng);
    planes.push_back({a, dot(a, a) / 2.0 + jitter(rng)});
  }
  return make_envelope(d, std::move(planes), box_polytope(d - 1, Box::cube(d - 1, 0.8)));
}

Vec random_z(int d, double half, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> s(-half, half);
  Vec z{};
  for (int i = 0; i < d - 1; ++i) z[i] = s(rng);
  return z;
}

Outcome base_polarity() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> eps(0.005, 0.05);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const auto u = random_ushape(2, rng);
    const UShapePtr us = projective_dual(*u);
    worst = std::max(worst, base_polarity_residual(*u, *us, u->lower_point(random_z(2, 0.5, rng)), eps(rng)));
  }
  const QuadraticUShape parab(2, 4.0);
  const UShapePtr dual = projective_dual(parab);
  double analytic = 0.0;
  for (double z : {0.0, 0.3, -0.7})
    analytic = std::max(analytic, base_polarity_residual(parab, *dual, parab.lower_point(Vec{z}), 0.01));
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {worst <= 1e-6 && analytic <= 1e-12 && s < 30,
          "worst polytopal residual " + fmt("%.2e", worst) + ", parabola " + fmt("%.2e", analytic) + ", " +
              fmt("%.1f", s) + " s"};
}

Outcome cap_ratio() {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> eps(0.005, 0.05);
  std::size_t violations = 0, out_of_range = 0;
  double lo = 1e300, hi = 0.0;
  for (int k = 0; k < 100; ++k) {
    const int d = 2 + k % 2;
    const auto u = random_ushape(d, rng);
    const AugmentedPoint q = u->lower_point(random_z(d, 0.4, rng));
    const CapRatioReport r = check_cap_ratio(*u, q, eps(rng), 10000, 1000 + k);
    violations += r.violations;
    lo = std::min(lo, r.volume_ratio);
    hi = std::max(hi, r.volume_ratio / std::pow(2.0, d));
    out_of_range += r.volume_ratio < 1.0 - 1e-9 || r.volume_ratio > std::pow(2.0, d) + 1e-9;
  }
  return {violations == 0 && out_of_range == 0,
          std::to_string(violations) + " violations, volume ratio min " + fmt("%.3f", lo) + ", max/2^d " +
              fmt("%.3f", hi)};
}

Outcome cap_cover_certification() {
  std::vector<Vec> disk;
  for (int k = 0; k < 720; ++k) disk.push_back({std::cos(2 * pi * k / 720), std::sin(2 * pi * k / 720)});
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> jitter(-0.25, 0.25), radius(0.6, 1.0);
  std::vector<Vec> hex;
  for (int k = 0; k < 6; ++k) {
    const double t = pi / 3 * (k + jitter(rng));
    const double r = radius(rng);
    hex.push_back({r * std::cos(t), r * std::sin(t)});
  }
  const std::vector<std::pair<std::string, Polytope>> bodies{
      {"square", box_polytope(2, Box::cube(2, 1.0))}, {"disk", convex_hull(2, disk)}, {"hexagon", convex_hull(2, hex)}};
  std::size_t caps = 0, sandwiched = 0;
  bool disjoint = true;
  for (const auto& [name, body] : bodies) {
    const CapOracle k(body);
    for (double frac : {1e-2, 1e-3}) {
      const CapCover cover = cap_cover(k, frac * body.volume());
      const CoverCertificate c = certify_cover(k, cover, 500, 404);
      caps += c.caps;
      sandwiched += c.sandwiched;
      disjoint = disjoint && c.disjoint;
    }
  }
  return {sandwiched == caps && caps >= 3000 && disjoint,
          std::to_string(sandwiched) + "/" + std::to_string(caps) + " caps sandwiched, regions " +
              (disjoint ? "disjoint" : "overlapping")};
}

Outcome mahler_floor() {
  const double sq = mahler(PolytopeBody(box_polytope(2, Box::cube(2, 1.0))));
  const double disk = mahler(*make_body(BodySpec::from_json(ball(2))));
  std::mt19937_64 rng(505);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double lowest = 1e300;
  for (int k = 0; k < 200; ++k) {
    std::vector<Vec> pts;
    const int n = 3 + static_cast<int>(rng() % 6);
    for (int i = 0; i < n; ++i) {
      const Vec p{u(rng), u(rng)};
      pts.push_back(p);
      pts.push_back(-1.0 * p);
    }
    lowest = std::min(lowest, mahler(PolytopeBody(convex_hull(2, pts))));
  }
  return {std::abs(sq - 8.0) <= 1e-9 && std::abs(disk / (pi * pi) - 1.0) <= 1e-6 && lowest >= 8.0 * (1 - 1e-6),
          "square " + fmt("%.12f", sq) + ", disk/pi^2 - 1 = " + fmt("%.2e", disk / (pi * pi) - 1.0) +
              ", lowest symmetric " + fmt("%.6f", lowest)};
}

Outcome curvature() {
  double worst = 0.0;
  for (double delta : {1e-2, 1e-4}) {
    const auto k = make_body(
        BodySpec::from_json({{"kind", "rounded-polygon"}, {"d", 2}, {"params", {{"delta", delta}}}}));
    worst = std::max(worst, std::abs(curvature_integral_2d(*k) / (2 * pi * std::sqrt(delta)) - 1.0));
  }
  return {worst <= 1e-9, "worst relative error " + fmt("%.2e", worst)};
}

Outcome dual_machinery() {
  std::mt19937_64 rng(606);
  std::uniform_real_distribution<double> eps(0.005, 0.05);
  std::size_t round_trip = 0, disagree = 0, cases = 0, in_cap = 0;
  while (cases < 1000) {
    const int d = 2 + cases % 2;
    const auto u = random_ushape(d, rng);
    const UShapePtr us = projective_dual(*u);
    for (int k = 0; k < 10 && cases < 1000; ++k) {
      const AugmentedPoint q = u->lower_point(random_z(d, 0.5, rng));
      const AugmentedPoint p = correspond(q, d);
      const AugmentedPoint back = correspond(p, d);
      round_trip += dist(back.point, q.point) > 1e-9 || dist(back.slope, q.slope) > 1e-9 ||
                    std::abs(back.offset - q.offset) > 1e-9;
      const Vec a = horizontal(p.point, d) + random_z(d, 0.4, rng);
      if (!us->in_domain(a)) continue;
      const Equivalence e = check_equivalence(*us, q, eps(rng), us->lower_point(a));
      disagree += !e.agree();
      in_cap += e.in_cap;
      ++cases;
    }
  }
  return {round_trip == 0 && disagree == 0,
          std::to_string(cases) + " cases, " + std::to_string(round_trip) + " round-trip failures, " +
              std::to_string(disagree) + " disagreements (" + std::to_string(in_cap) + " inside caps)"};
}

Outcome determinism(const std::string& approx) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("approx-acceptance-" + std::to_string(::getpid()));
  fs::create_directories(dir);
  {
    std::ofstream cfg(dir / "config.json");
    cfg << R"({"seed": 42, "workers": 2, "eps": {"from": 0.0625, "to": 0.015625},
      "bodies": [{"kind":"ball","d":2}, {"kind":"random-polytope","d":3,"params":{"n":30}},
                 {"body":{"kind":"needle","d":3,"params":{"L":1}}, "eps_params":{"theta":[0.5,0.5]}}]})";
  }
  const auto read = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  };
  std::string out[2];
  for (int i = 0; i < 2; ++i) {
    const fs::path o = dir / ("run" + std::to_string(i));
    const std::string cmd = "\"" + approx + "\" run --config \"" + (dir / "config.json").string() + "\" --out \"" +
                            o.string() + "\" --format csv 2>/dev/null";
    if (std::system(cmd.c_str()) != 0) return {false, "approx run failed"};
    out[i] = read(o / "results.csv");
  }
  fs::remove_all(dir);
  const auto lines = std::count(out[0].begin(), out[0].end(), '\n');
  return {!out[0].empty() && out[0] == out[1],
          std::to_string(out[0].size()) + " bytes, " + std::to_string(lines) + " lines, " +
              (out[0] == out[1] ? "identical" : "different")};
}

}  // namespace

int main(int argc, char** argv) {
  std::string approx;
  std::set<int> blocked, only;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--approx" && i + 1 < argc) approx = argv[++i];
    else if (a == "--known-blocked" && i + 1 < argc) blocked.insert(std::stoi(argv[++i]));
    else if (a == "--only" && i + 1 < argc) only.insert(std::stoi(argv[++i]));
    else {
      std::cerr << "usage: acceptance --approx <path> [--known-blocked N]... [--only N]...\n";
      return 2;
    }
  }
  Cells cells;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"correctness envelope", [&] { return envelope(cells); }},
      {"dudley exponent", [&] { return dudley_tightness(cells); }},
      {"area-sensitive exponent on needles", [&] { return area_sensitivity(cells); }},
      {"base polarity", base_polarity},
      {"cap-ratio sandwich", cap_ratio},
      {"cap-cover certification", cap_cover_certification},
      {"mahler floor", mahler_floor},
      {"curvature integral", curvature},
      {"dual machinery", dual_machinery},
      {"deterministic csv", [&] { return determinism(approx); }},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int n = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(n)) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const bool known = !o.pass && blocked.count(n);
    std::cout << (o.pass ? "PASS" : known ? "FAIL (known-blocked)" : "FAIL") << "  " << n << ". "
              << criteria[i].first << ": " << o.detail << std::endl;
    failures += !o.pass && !known;
  }
  return failures == 0 ? 0 : 1;
}
