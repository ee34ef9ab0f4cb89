#include <doctest.h>

#include <numbers>
#include <random>

#include "polyapprox/duals.hpp"

using namespace polyapprox;
using std::numbers::pi;

namespace {

BodyPtr body(const std::string& text) { return make_body(BodySpec::from_json(nlohmann::json::parse(text))); }

double vertex_set_distance(const Polytope& a, const Polytope& b) {
  double worst = 0.0;
  for (const Vec& v : a.vertices()) {
    double best = 1e300;
    for (const Vec& w : b.vertices()) best = std::min(best, dist(v, w));
    worst = std::max(worst, best);
  }
  return worst;
}

Polytope random_symmetric_polygon(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Vec> pts;
  const int n = 3 + static_cast<int>(rng() % 6);
  for (int k = 0; k < n; ++k) {
    const Vec p{u(rng), u(rng)};
    pts.push_back(p);
    pts.push_back(-1.0 * p);
  }
  return convex_hull(2, pts);
}

}  // namespace

TEST_CASE("polar of standard pairs") {
  const Polytope sq = box_polytope(2, Box::cube(2, 1.0));
  const Polytope cross = polar(sq);
  CHECK(cross.vertices().size() == 4);
  for (const Vec& v : cross.vertices()) CHECK(std::abs(v[0]) + std::abs(v[1]) == doctest::Approx(1.0));
  CHECK(cross.volume() == doctest::Approx(2.0));

  const auto ball = body(R"({"kind":"ball","d":3,"params":{"r":2}})");
  const auto pb = polar(ball);
  for (const Vec& u : direction_net(3, 100)) CHECK(pb->support(u) == doctest::Approx(0.5));

  // Oracle route on a wrapped disk of radius 2.
  const auto disk = std::make_shared<TransformedBody>(body(R"({"kind":"ball","d":2})"), 2.0, Vec{});
  const PolarBody oracle(disk);
  for (const Vec& u : direction_net(2, 37)) {
    CHECK(std::abs(oracle.support(u) - 0.5) <= 1e-8);
    CHECK(norm(oracle.support_point(u) - 0.5 * u) <= 1e-5);
  }
  CHECK(oracle.volume() == doctest::Approx(pi / 4).epsilon(1e-9));
  CHECK(oracle.contains(Vec{0.3, 0.3}, 0.0));
  CHECK_FALSE(oracle.contains(Vec{0.4, 0.4}, 0.0));
  CHECK(dist(oracle.nearest_point(Vec{1, 0}), Vec{0.5, 0}) <= 1e-8);

  const Polytope off = box_polytope(2, Box{{1, 1}, {2, 2}});
  CHECK_THROWS_AS(polar(off), GeometryError);
}

TEST_CASE("polar is an involution and reverses inclusion") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + trial % 2;
    std::normal_distribution<double> g;
    std::vector<Vec> pts;
    for (int k = 0; k < 30; ++k) {
      Vec p{};
      for (int i = 0; i < d; ++i) p[i] = g(rng);
      pts.push_back(normalized(p));
    }
    const Polytope p = convex_hull(d, pts);
    if (!(p.max_violation(Vec{}) < -0.05)) continue;
    const Polytope pp = polar(polar(p));
    CHECK(vertex_set_distance(p, pp) <= 1e-8);
    CHECK(vertex_set_distance(pp, p) <= 1e-8);

    const Polytope bigger = p.scaled(1.2);
    const Polytope small_polar = polar(bigger);
    const Polytope big_polar = polar(p);
    for (const Vec& v : small_polar.vertices()) CHECK(big_polar.contains(v));
  }
}

TEST_CASE("mahler volumes") {
  const PolytopeBody sq(box_polytope(2, Box::cube(2, 1.0)));
  CHECK(std::abs(mahler(sq) - 8.0) <= 1e-9);
  const auto disk = body(R"({"kind":"ball","d":2})");
  CHECK(mahler(*disk) == doctest::Approx(pi * pi).epsilon(1e-6));
  const auto wrapped = TransformedBody(disk, 1.0, Vec{});
  CHECK(mahler(wrapped) == doctest::Approx(pi * pi).epsilon(1e-6));

  std::mt19937_64 rng(11);
  double lowest = 1e300;
  for (int k = 0; k < 200; ++k) {
    const PolytopeBody p(random_symmetric_polygon(rng));
    const double m = mahler(p);
    lowest = std::min(lowest, m);
    CHECK(m >= 8.0 * (1.0 - 1e-6));
  }
  MESSAGE("lowest symmetric Mahler product: " << lowest);
  const auto tri = body(R"({"kind":"custom-polytope","d":2,"params":{"vertices":[[1,0],[-0.5,0.8],[-0.5,-0.8]]}})");
  CHECK(mahler(*tri) > 0.0);
  const auto e3 = body(R"({"kind":"ellipsoid","d":3,"params":{"radii":[1,0.5,0.25]}})");
  CHECK(mahler(*e3) == doctest::Approx(std::pow(4.0 / 3.0 * pi, 2)).epsilon(1e-3));
}

TEST_CASE("vertical distances and incidences under duality") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int k = 0; k < 1000; ++k) {
    const int d = 2 + k % 2;
    Vec p{}, a{};
    for (int i = 0; i < d - 1; ++i) p[i] = u(rng), a[i] = u(rng);
    p[d - 1] = u(rng);
    const double b = u(rng);
    const double primal = vertical_offset(p, a, b, d);
    const PLUShape::Plane ps = dual_plane(p, d);
    const Vec hs = dual_point(a, b, d);
    // Dual offset measured from the hyperplane p* to the point h*.
    const double dual = -vertical_offset(hs, ps.slope, ps.offset, d);
    CHECK(dual == doctest::Approx(-primal).epsilon(1e-12));
    // Incidence: put p on h, then h* lies on p*.
    Vec on = p;
    on[d - 1] += primal;
    const PLUShape::Plane os = dual_plane(on, d);
    CHECK(std::abs(vertical_offset(hs, os.slope, os.offset, d)) <= 1e-12);
  }
}

TEST_CASE("projective duals") {
  const QuadraticUShape parab(2, 8.0);
  const UShapePtr dual = projective_dual(parab);
  for (double x : {-3.0, -1.0, 0.0, 0.5, 4.0}) CHECK(dual->height(Vec{x}) == doctest::Approx(x * x / 2));
  // Tangent line y = t x - t^2/2 maps to (t, t^2/2).
  for (double t : {-1.5, 0.0, 0.7}) {
    const AugmentedPoint q = parab.lower_point(Vec{t});
    const AugmentedPoint p = correspond(q, 2);
    CHECK(p.point[0] == doctest::Approx(t));
    CHECK(p.point[1] == doctest::Approx(t * t / 2));
    CHECK(dual->height(Vec{p.point[0]}) == doctest::Approx(p.point[1]));
  }

  const std::vector<PLUShape::Plane> vee{{Vec{-1.0}, 0.0}, {Vec{1.0}, 0.0}};
  const auto u = make_envelope(2, vee, box_polytope(1, Box::cube(1, 1.0)));
  const UShapePtr vd = projective_dual(*u);
  for (double x : {-1.0, -0.4, 0.0, 0.9, 1.0}) CHECK(std::abs(vd->height(Vec{x})) <= 1e-12);
  CHECK(vd->height(Vec{2.0}) == doctest::Approx(1.0));
}

TEST_CASE("correspondence is an involution onto the dual boundary") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> t(-1.0, 1.0);
  const QuadraticUShape parab(2, 4.0);
  for (int k = 0; k < 1000; ++k) {
    const AugmentedPoint q = parab.lower_point(Vec{3.0 * t(rng)});
    const AugmentedPoint back = correspond(correspond(q, 2), 2);
    CHECK(dist(back.point, q.point) <= 1e-9);
    CHECK(dist(back.slope, q.slope) <= 1e-9);
    CHECK(std::abs(back.offset - q.offset) <= 1e-9);
  }

  for (const char* text : {R"({"kind":"ball","d":2,"params":{"r":0.9}})",
                           R"({"kind":"random-polytope","d":3,"params":{"n":50},"seed":2})"}) {
    const auto k = body(text);
    const int d = k->dim();
    for (const SignedAxis& a : SignedAxis::all(d)) {
      const SupportSet s = support_set(*k, a, {.alpha = 0.02, .slope_step = 0.0625});
      const UShapePtr sd = projective_dual(*s.shape);
      const Box db = s.shape->domain().bounding_box();
      for (int n = 0; n < 30; ++n) {
        Vec z{};
        for (int i = 0; i < d - 1; ++i) z[i] = 0.5 * (db.lo[i] + db.hi[i]) + 0.45 * t(rng) * (db.hi[i] - db.lo[i]);
        if (!s.shape->in_domain(z)) continue;
        const AugmentedPoint q = s.shape->lower_point(z);
        const AugmentedPoint p = correspond(q, d);
        for (int i = 0; i < d - 1; ++i) CHECK(std::abs(p.point[i]) <= 1.0 + 1e-9);
        CHECK(std::abs(sd->height(horizontal(p.point, d)) - p.point[d - 1]) <= 1e-9);
        const AugmentedPoint back = correspond(p, d);
        CHECK(dist(back.point, q.point) <= 1e-9);
      }
    }
  }
}
