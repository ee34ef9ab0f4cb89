#include <doctest.h>

#include <cmath>
#include <sstream>

#include "polyapprox/experiments.hpp"

using namespace polyapprox;

namespace {

ExperimentRecord synthetic(double eps, std::size_t facets, const std::string& algo = "dudley") {
  ExperimentRecord r;
  r.body_hash = "abc";
  r.eps = eps;
  r.algorithm = algo;
  r.facets = facets;
  r.surface_diameter = 2.0;
  r.seed = 7;
  return r;
}

SweepConfig small_config(int workers) {
  return SweepConfig::from_json(nlohmann::json::parse(R"({
    "seed": 3, "workers": )" + std::to_string(workers) + R"(,
    "eps": [0.125, 0.0625, 0.03125],
    "bodies": [{"kind":"ball","d":2}, {"kind":"ellipsoid","d":2,"params":{"radii":[1,0.5]}}]
  })"));
}

}  // namespace

TEST_CASE("eps grid halves down to the lower end") {
  const auto g = eps_grid(0.0625, 1.0 / 1024);
  REQUIRE(g.size() == 7);
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] == g[i - 1] / 2);
  CHECK(eps_grid(0.1, 0.1).size() == 1);
  CHECK_THROWS_AS(eps_grid(0.01, 0.1), std::invalid_argument);
}

TEST_CASE("config parsing and seed override") {
  const auto j = nlohmann::json::parse(R"({"seed": 5, "eps": {"from": 0.125, "to": 0.03125},
    "algorithms": ["area-sensitive"],
    "bodies": [{"kind":"ball","d":2}, {"kind":"polygon","d":2,"seed":11},
               {"body": {"kind":"needle","d":3,"params":{"L":1}}, "eps_params": {"theta": [0.5, 0.5]}, "eps": [0.1]}]})");
  const SweepConfig c = SweepConfig::from_json(j);
  CHECK(c.seed == 5);
  CHECK(c.eps.size() == 3);
  REQUIRE(c.algorithms.size() == 1);
  CHECK(c.algorithms[0] == Algorithm::area_sensitive);
  REQUIRE(c.bodies.size() == 3);
  CHECK(c.bodies[0].spec.seed == 5);
  CHECK(c.bodies[1].spec.seed == 11);
  CHECK(c.bodies[2].at(0.04).params["theta"].get<double>() == doctest::Approx(0.1));
  CHECK(c.bodies[2].hash() != c.bodies[0].hash());
  const SweepConfig o = SweepConfig::from_json(j, 99);
  CHECK(o.seed == 99);
  CHECK(o.bodies[0].spec.seed == 99);
  CHECK(o.bodies[1].spec.seed == 11);
  CHECK_THROWS(SweepConfig::from_json(nlohmann::json::parse(R"({"eps":[0.5],"bodies":[]})")));
  CHECK_THROWS(SweepConfig::from_json(nlohmann::json::parse(R"({"bodies":[{"kind":"ball","d":2}]})")));
  CHECK_THROWS(SweepConfig::from_json(nlohmann::json::parse(R"({"eps":[0.1],"algorithms":["greedy"]})")));
}

TEST_CASE("empty body list gives no records") {
  const SweepConfig c = SweepConfig::from_json(nlohmann::json::parse(R"({"eps":[0.1],"bodies":[]})"));
  CHECK(run_sweep(c).empty());
  std::ostringstream csv;
  write_csv(csv, {});
  const std::string text = csv.str();
  CHECK(std::count(text.begin(), text.end(), '\n') == 1);
}

TEST_CASE("exponent fit on synthetic records") {
  std::vector<ExperimentRecord> rs;
  for (int k = 2; k <= 9; ++k) {
    const double eps = std::pow(2.0, -k);
    rs.push_back(synthetic(eps, static_cast<std::size_t>(std::llround(100 * std::sqrt(2.0 / eps)))));
  }
  const ExponentFit f = fit_exponent(rs, "abc", "dudley");
  CHECK(f.slope == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(f.r2 > 0.999);
  CHECK(f.points == 8);

  for (auto& r : rs) r.facets = 40;
  const ExponentFit flat = fit_exponent(rs);
  CHECK(flat.slope == doctest::Approx(0.0));

  // Failed cells are ignored, which here leaves too few.
  for (std::size_t i = 0; i < 4; ++i) rs[i].failure = "hausdorff";
  CHECK_THROWS_AS(fit_exponent(rs), std::invalid_argument);
  // Five records over one decade only.
  std::vector<ExperimentRecord> narrow;
  for (int k = 0; k < 5; ++k) narrow.push_back(synthetic(0.1 / (1 + 2 * k), 10 + k));
  CHECK_THROWS_AS(fit_exponent(narrow), std::invalid_argument);
  CHECK_THROWS_AS(fit_exponent(rs, "other", "dudley"), std::invalid_argument);
}

TEST_CASE("csv quoting and round trip") {
  ExperimentRecord a = synthetic(1.0 / 3, 17);
  a.hausdorff = 0.1;
  a.min_width = 1.5;
  a.diameter = 2.0 / 3;
  a.wall_ms = 12.5;
  ExperimentRecord b = synthetic(0.01, 9, "area-sensitive");
  b.failure = "bad \"thing\", with comma\nand newline";
  std::ostringstream out;
  write_csv(out, {a, b});
  const std::string text = out.str();
  CHECK(text.rfind("body_hash,d,eps,algorithm,facets,hausdorff,diameter,surface_diameter,min_width,wall_time_ms,seed,failure\r\n", 0) == 0);
  CHECK(text.find("\"bad \"\"thing\"\", with comma\nand newline\"") != std::string::npos);
  std::istringstream in(text);
  const auto back = read_csv(in);
  REQUIRE(back.size() == 2);
  CHECK(back[0].eps == a.eps);
  CHECK(back[0].diameter == a.diameter);
  CHECK(back[0].wall_ms == a.wall_ms);
  CHECK(back[0].facets == 17);
  CHECK(!back[1].wall_ms);
  CHECK(back[1].failure == b.failure);
  CHECK(back[1].algorithm == "area-sensitive");
  std::ostringstream again;
  write_csv(again, back);
  CHECK(again.str() == text);
}

TEST_CASE("sweep is ordered, complete and independent of worker count") {
  const auto one = run_sweep(small_config(1));
  const auto two = run_sweep(small_config(2));
  REQUIRE(one.size() == 12);
  std::ostringstream a, b;
  write_csv(a, one);
  write_csv(b, two);
  const std::string text = a.str();
  CHECK(text == b.str());
  CHECK(std::count(text.begin(), text.end(), '\n') == 13);
  for (std::size_t i = 0; i < one.size(); ++i) {
    CHECK(!one[i].failed());
    CHECK(one[i].hausdorff <= one[i].eps * (1 + 1e-6));
    CHECK(one[i].seed == 3);
    CHECK(!one[i].wall_ms);
  }
  CHECK(one[0].algorithm == "dudley");
  CHECK(one[1].algorithm == "area-sensitive");
  CHECK(one[0].eps == 0.125);
  CHECK(one[2].eps == 0.0625);
  CHECK(one[6].body_hash != one[0].body_hash);
}

TEST_CASE("failing cells are flagged, not dropped") {
  const SweepConfig c = SweepConfig::from_json(nlohmann::json::parse(
      R"({"eps":[0.1],"algorithms":["area-sensitive"],"bodies":[{"kind":"needle","d":3,"params":{"L":1,"theta":0.001}}]})"));
  const auto rs = run_sweep(c);
  REQUIRE(rs.size() == 1);
  CHECK(rs[0].failed());
}

TEST_CASE("svg has one series per body and algorithm and a legend") {
  std::vector<ExperimentRecord> rs;
  for (int k = 2; k <= 9; ++k) {
    const double eps = std::pow(2.0, -k);
    rs.push_back(synthetic(eps, static_cast<std::size_t>(10 / std::sqrt(eps))));
    rs.push_back(synthetic(eps, static_cast<std::size_t>(5 / std::sqrt(eps)), "area-sensitive"));
  }
  std::ostringstream out;
  write_svg(out, rs);
  const std::string s = out.str();
  CHECK(s.find("width=\"800\" height=\"600\"") != std::string::npos);
  const auto count = [&](const std::string& needle) {
    std::size_t n = 0;
    for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
    return n;
  };
  CHECK(count("class=\"series\"") == 2);
  CHECK(count("class=\"legend\"") == 2);
  CHECK(count("class=\"fit\"") == 2);
  CHECK(count("<circle") == 16);
  CHECK(s.find("slope 0.50") != std::string::npos);
}
