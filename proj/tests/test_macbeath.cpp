#include <doctest.h>

#include <numbers>
#include <random>

#include "polyapprox/macbeath.hpp"

using namespace polyapprox;

namespace {

Polytope random_hexagon(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-0.25, 0.25), radius(0.6, 1.0);
  std::vector<Vec> pts;
  for (int k = 0; k < 6; ++k) {
    const double t = std::numbers::pi / 3 * (k + jitter(rng));
    const double r = radius(rng);
    pts.push_back({r * std::cos(t), r * std::sin(t)});
  }
  return convex_hull(2, pts);
}

Polytope disk_polygon(int n) {
  std::vector<Vec> pts;
  for (int k = 0; k < n; ++k) {
    const double t = 2 * std::numbers::pi * k / n;
    pts.push_back({std::cos(t), std::sin(t)});
  }
  return convex_hull(2, pts);
}

}  // namespace

TEST_CASE("macbeath regions of simple bodies") {
  const Polytope sq = box_polytope(2, Box::cube(2, 1.0));
  const MRegion m = macbeath_region(sq, Vec{0.5, 0.0});
  CHECK(m.volume() == doctest::Approx(2.0));
  const Box b = m.body.bounding_box();
  CHECK(b.lo[0] == doctest::Approx(0.0));
  CHECK(b.hi[0] == doctest::Approx(1.0));
  CHECK(b.lo[1] == doctest::Approx(-1.0));
  CHECK(b.hi[1] == doctest::Approx(1.0));

  const MRegion edge = macbeath_region(sq, Vec{1.0, 0.3});
  CHECK(edge.degenerate);
  CHECK(edge.volume() == 0.0);
  CHECK_THROWS_AS(macbeath_region(sq, Vec{1.5, 0.0}), GeometryError);

  const auto ball = make_body(BodySpec::from_json(nlohmann::json::parse(R"({"kind":"ball","d":2})")));
  const MRegion center = macbeath_region(*ball, Vec{});
  CHECK(center.volume() == doctest::Approx(std::numbers::pi).epsilon(1e-4));
  // Off-center in the ball: the lens of two unit disks at distance 2|x|.
  const MRegion lens = macbeath_region(*ball, Vec{0.5, 0.0});
  const double a = 2 * std::acos(0.5) - std::sin(2 * std::acos(0.5));
  CHECK(lens.volume() == doctest::Approx(a).epsilon(1e-4));
}

TEST_CASE("macbeath regions are centrally symmetric and scale by the expansion") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> s(-0.5, 0.5);
  for (int d = 2; d <= 3; ++d) {
    std::vector<Vec> pts;
    std::normal_distribution<double> g;
    for (int k = 0; k < 40; ++k) {
      Vec p{};
      for (int i = 0; i < d; ++i) p[i] = g(rng);
      pts.push_back(normalized(p));
    }
    const Polytope k = convex_hull(d, pts);
    for (int t = 0; t < 10; ++t) {
      Vec x{};
      for (int i = 0; i < d; ++i) x[i] = s(rng);
      if (!k.contains(x, -0.01)) continue;
      const MRegion m = macbeath_region(k, x, 0.5, 3.0);
      const Polytope r = m.body.reflected(x);
      for (const Vec& v : r.vertices()) CHECK(m.body.contains(v, 1e-9));
      for (const Vec& v : m.body.vertices()) CHECK(k.contains(v));
      CHECK(m.expanded().volume() / m.volume() == doctest::Approx(std::pow(3.0, d)).epsilon(1e-9));
      // Full region equals K ∩ (2x - K), checked against the reflected body.
      const MRegion full = macbeath_region(k, x);
      const Polytope oracle = clip(k, k.reflected(x).facets());
      CHECK(full.volume() == doctest::Approx(oracle.volume()).epsilon(1e-9));
    }
  }
}

TEST_CASE("local regions from caps match global regions") {
  const Polytope hex = random_hexagon(4);
  const CapOracle k(hex);
  std::mt19937_64 rng(5);
  for (int t = 0; t < 50; ++t) {
    const double a = std::uniform_real_distribution<double>(0, 2 * std::numbers::pi)(rng);
    const Vec u{std::cos(a), std::sin(a)};
    const auto vc = k.cap_with_volume(u, 0.01 * hex.volume(), 1e-9);
    CHECK(std::abs(vc.cap.volume() - 0.01 * hex.volume()) <= 1e-9);
    const Vec x = vc.cap.centroid();
    CHECK(k.macbeath(x, u, 1.0, 1.0).volume() == doctest::Approx(macbeath_region(hex, x).volume()).epsilon(1e-9));
  }
  const Polytope cube = box_polytope(3, Box::cube(3, 1.0));
  const CapOracle c3(cube);
  const auto corner = c3.cap_with_volume(Vec{1, 1, 1}, 0.5, 1e-9);
  // Corner simplex with legs s: s^3 / 6 = 0.5.
  CHECK(corner.depth * std::sqrt(3.0) == doctest::Approx(std::cbrt(3.0)).epsilon(1e-9));
}

TEST_CASE("cap cover certification") {
  struct Case {
    std::string name;
    Polytope body;
  };
  const std::vector<Case> cases{{"square", box_polytope(2, Box::cube(2, 1.0))},
                                {"disk", disk_polygon(720)},
                                {"hexagon", random_hexagon(11)}};
  for (const Case& c : cases) {
    const CapOracle k(c.body);
    for (double frac : {1e-2, 1e-3}) {
      const double v = frac * c.body.volume();
      const CapCover cover = cap_cover(k, v);
      const CoverCertificate cert = certify_cover(k, cover, 500, 7);
      MESSAGE(c.name << " v=" << frac << "·vol: " << cover.regions.size() << " regions, c1=" << cover.c1
                     << " c2=" << cover.c2 << ", sandwiched " << cert.sandwiched << "/" << cert.caps);
      CHECK(cert.sandwiched == cert.caps);
      CHECK(cert.disjoint);
      CHECK(cert.worst_volume_error <= 1e-6);
    }
  }
}

TEST_CASE("cap cover certification in space") {
  const Polytope cube = box_polytope(3, Box::cube(3, 1.0));
  const CapOracle k(cube);
  const CapCover cover = cap_cover(k, 1e-2 * cube.volume());
  const CoverCertificate cert = certify_cover(k, cover, 200, 3);
  CHECK(cert.sandwiched == cert.caps);
  CHECK(cert.disjoint);
  for (const MRegion& m : cover.regions)
    CHECK(m.expanded_volume() / m.volume() == doctest::Approx(std::pow(70.0, 3)).epsilon(1e-9));
}

TEST_CASE("minimum volume ellipsoid and region nets") {
  const Polytope sq = box_polytope(2, Box{{1, 2}, {3, 3}});
  const Ellipsoid e = min_volume_ellipsoid(sq.vertices(), 2, 1e-9);
  CHECK(e.center[0] == doctest::Approx(2.0));
  CHECK(e.center[1] == doctest::Approx(2.5));
  // Enclosing ellipse of a w x h rectangle has semi-axes w/√2, h/√2.
  CHECK(e.volume(2) == doctest::Approx(std::numbers::pi * 2 / std::sqrt(2.0) * 1 / std::sqrt(2.0)).epsilon(1e-6));
  for (const Vec& v : sq.vertices()) CHECK(e.contains(v, 1e-6));

  const Polytope cube = box_polytope(3, Box::cube(3, 1.0));
  CHECK(region_net(cube, 3).size() == 27);
  const std::vector<Vec> net = region_net(random_hexagon(3), 3);
  CHECK(net.size() >= 5);
  for (const Vec& y : net) CHECK(random_hexagon(3).contains(y));
}
