#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "polyapprox/approximator.hpp"

using namespace polyapprox;

namespace {

Normalized body(const std::string& text, double eps) {
  return normalize(make_body(BodySpec::from_json(nlohmann::json::parse(text))), eps);
}

// Distance from P's farthest vertex to a disk of radius r about c.
double disk_excess(const Polytope& p, const Vec& c, double r) {
  double worst = 0.0;
  for (const Vec& v : p.vertices()) worst = std::max(worst, dist(v, c) - r);
  return worst;
}

}  // namespace

TEST_CASE("disk approximations are outer and within eps") {
  const double eps = 0.01;
  const Normalized nb = body(R"({"kind":"ball","d":2})", eps);
  const double r = nb.scale;
  for (Algorithm a : {Algorithm::dudley, Algorithm::area_sensitive}) {
    const Approximation out = approximate(a, *nb.body, eps);
    CAPTURE(algorithm_name(a));
    CHECK(out.diagnostics.verified);
    // Every facet supports the disk: offset minus center projection equals r.
    for (const Halfspace& h : out.polytope.facets()) {
      if (std::abs(h.offset - dot(h.normal, nb.shift) - r) > 1e-9) {
        // Box facets of [-1,1]^2 are the only other kind.
        CHECK(std::abs(std::abs(h.offset) - 1.0) <= 1e-12);
      }
    }
    const double excess = disk_excess(out.polytope, nb.shift, r);
    CHECK(excess <= eps * (1 + 1e-6));
    CHECK(out.diagnostics.error.hausdorff == doctest::Approx(excess).epsilon(1e-6));
    CHECK(out.facets >= 3);
  }
}

TEST_CASE("points farther than eps are cut off") {
  const double eps = 1.0 / 64;
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> angle(0, 2 * std::numbers::pi), gap(1.0, 2.0);
  for (const char* text : {R"({"kind":"ball","d":2})", R"({"kind":"ellipsoid","d":2,"params":{"radii":[1,0.2]}})"}) {
    const Normalized nb = body(text, eps);
    const Approximation out = approximate_area_sensitive(*nb.body, eps);
    int inside = 0;
    for (int k = 0; k < 1000; ++k) {
      const double t = angle(rng);
      const Vec u{std::cos(t), std::sin(t)};
      const Vec y = nb.body->support_point(u) + gap(rng) * eps * 1.000001 * u;
      inside += out.polytope.contains(y);
    }
    CAPTURE(text);
    CHECK(inside == 0);
  }
}

TEST_CASE("dudley counts follow the square-root law in the plane") {
  const Normalized a = body(R"({"kind":"ball","d":2})", 1.0 / 64);
  const Normalized b = body(R"({"kind":"ball","d":2})", 1.0 / 1024);
  const double ratio = static_cast<double>(approximate_dudley(*b.body, 1.0 / 1024).facets) /
                       static_cast<double>(approximate_dudley(*a.body, 1.0 / 64).facets);
  CHECK(ratio == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("thin needle: area-sensitive uses fewer facets than dudley") {
  const double eps = 1.0 / 32;
  const Normalized nb = body(R"({"kind":"needle","d":3,"params":{"L":1,"theta":0.125}})", eps);
  const Approximation as = approximate_area_sensitive(*nb.body, eps);
  const Approximation du = approximate_dudley(*nb.body, eps);
  CHECK(as.diagnostics.verified);
  CHECK(du.diagnostics.verified);
  CHECK(as.facets < du.facets);
  CHECK(as.diagnostics.error.hausdorff <= eps * (1 + 1e-6));
}

TEST_CASE("polytope input and stabbing bookkeeping") {
  const double eps = 1.0 / 16;
  const Normalized nb = body(R"({"kind":"box","d":2,"params":{"half":[1,0.5]}})", eps);
  const Approximation out = approximate_area_sensitive(*nb.body, eps);
  CHECK(out.stabbing.size() == 4);
  std::size_t large = 0, small = 0;
  for (const StabbingSet& s : out.stabbing) {
    large += s.large.size();
    small += s.small.size();
  }
  CHECK(large == out.diagnostics.large_points);
  CHECK(small == out.diagnostics.small_points);
  // Supporting lines of a rectangle: its four sides suffice and nothing else survives.
  CHECK(out.facets == 4);
  CHECK(out.diagnostics.error.hausdorff <= 1e-9);
}

TEST_CASE("input validation and names") {
  const auto big = make_body(BodySpec::from_json(nlohmann::json::parse(R"({"kind":"ball","d":2,"params":{"r":3}})")));
  CHECK_THROWS_AS(approximate_dudley(*big, 0.1), GeometryError);
  const Normalized thin = body(R"({"kind":"needle","d":3,"params":{"L":1,"theta":0.001}})", 0.1);
  CHECK_THROWS_AS(approximate_area_sensitive(*thin.body, 0.1), GeometryError);
  CHECK(parse_algorithm("dudley") == Algorithm::dudley);
  CHECK(algorithm_name(parse_algorithm("area-sensitive")) == "area-sensitive");
  CHECK_THROWS_AS(parse_algorithm("greedy"), std::invalid_argument);
}
