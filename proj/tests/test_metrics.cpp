#include <doctest.h>

#include <algorithm>
#include <numbers>
#include <random>

#include "polyapprox/metrics.hpp"

using namespace polyapprox;
using std::numbers::pi;

namespace {

BodyPtr body(const std::string& text) { return make_body(BodySpec::from_json(nlohmann::json::parse(text))); }

}  // namespace

TEST_CASE("outer hausdorff distance") {
  const auto disk = body(R"({"kind":"ball","d":2})");
  const Polytope sq = box_polytope(2, Box::cube(2, 1.0));
  const ErrorReport r = hausdorff_outer(*disk, sq);
  CHECK(r.contained());
  CHECK(r.hausdorff == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-12));
  CHECK(std::abs(r.net_hausdorff - r.hausdorff) <= 1e-6);

  const PolytopeBody poly(sq);
  CHECK(hausdorff_outer(poly, sq).hausdorff == 0.0);

  // Tangent lines at sorted angles: the vertex between tangents a gap g apart
  // sits at distance 1/cos(g/2) from the center.
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> angle(0.0, 2 * pi);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> t(12);
    for (double& a : t) a = angle(rng);
    std::sort(t.begin(), t.end());
    double gap = t.front() + 2 * pi - t.back();
    for (std::size_t k = 1; k < t.size(); ++k) gap = std::max(gap, t[k] - t[k - 1]);
    if (gap >= 0.9 * pi) continue;
    std::vector<Halfspace> hs;
    for (double a : t) hs.push_back({Vec{std::cos(a), std::sin(a)}, 1.0});
    const Polytope p = halfspace_intersection(2, hs);
    CHECK(hausdorff_outer(*disk, p).hausdorff == doctest::Approx(1.0 / std::cos(gap / 2) - 1.0).epsilon(1e-9));
  }

  const Polytope inner = box_polytope(2, Box::cube(2, 0.5));
  const ErrorReport bad = hausdorff_outer(*disk, inner);
  CHECK_FALSE(bad.contained());
  CHECK(bad.worst_margin == doctest::Approx(-0.5));
  CHECK(bad.hausdorff == doctest::Approx(1.0 - 0.5).epsilon(1e-6));
}

TEST_CASE("surface area and surface diameter") {
  const auto disk = body(R"({"kind":"ball","d":2})");
  CHECK(surface_area(*disk) == doctest::Approx(2 * pi));
  CHECK(surface_diameter(*disk) == doctest::Approx(2.0));
  const auto sphere = body(R"({"kind":"ball","d":3})");
  CHECK(surface_area(*sphere) == doctest::Approx(4 * pi));
  CHECK(surface_diameter(*sphere) == doctest::Approx(2.0));
  for (int m : {3, 6, 11}) {
    const double delta = 0.05;
    const auto k = body(R"({"kind":"rounded-polygon","d":2,"params":{"m":)" + std::to_string(m) +
                        R"(,"delta":0.05}})");
    CHECK(surface_area(*k) == doctest::Approx(2 * m * std::sin(pi / m) + 2 * pi * delta).epsilon(1e-12));
  }
  const Polytope cube = box_polytope(3, Box{{0, 0, 0}, {1, 2, 3}});
  CHECK(surface_area(PolytopeBody(cube)) == 2.0 * (2.0 + 3.0 + 6.0));
  for (const char* text : {R"({"kind":"ellipsoid","d":2,"params":{"radii":[1,0.2]}})",
                           R"({"kind":"needle","d":3,"params":{"L":1,"theta":0.05}})",
                           R"({"kind":"box","d":3,"params":{"half":[0.9,0.5,0.2]}})"}) {
    const auto k = body(text);
    CHECK(k->diameter() >= surface_diameter(*k) - 1e-9);
  }
}

TEST_CASE("curvature integral of planar bodies") {
  for (double delta : {1e-2, 1e-4}) {
    for (int m : {4, 7}) {
      const auto k = body(R"({"kind":"rounded-polygon","d":2,"params":{"m":)" + std::to_string(m) +
                          R"(,"delta":)" + std::to_string(delta) + "}}");
      CHECK(std::abs(curvature_integral_2d(*k) / (2 * pi * std::sqrt(delta)) - 1.0) <= 1e-9);
    }
  }
  CHECK(curvature_integral_2d(*body(R"({"kind":"ball","d":2})")) == doctest::Approx(2 * pi));
  CHECK(curvature_integral_2d(*body(R"({"kind":"box","d":2})")) == 0.0);
  CHECK_THROWS_AS(curvature_integral_2d(*body(R"({"kind":"ellipsoid","d":2,"params":{"radii":[1,0.5]}})")),
                  GeometryError);
}
