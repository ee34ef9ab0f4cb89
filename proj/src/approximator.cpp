#include "polyapprox/approximator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>

namespace polyapprox {

namespace {

// Downward directions (a, -1) for slopes a on a grid over a box.
std::vector<Vec> downward_directions(int d, const Box& slopes, double step) {
  std::vector<Vec> out;
  const int k = d - 1;
  std::array<int, 2> n{1, 1};
  for (int i = 0; i < k; ++i) n[i] = std::max(2, static_cast<int>(std::ceil((slopes.hi[i] - slopes.lo[i]) / step)) + 1);
  for (int a = 0; a < n[0]; ++a)
    for (int b = 0; b < n[1]; ++b) {
      Vec s{};
      s[0] = slopes.lo[0] + (slopes.hi[0] - slopes.lo[0]) * a / (n[0] - 1);
      if (k == 2) s[1] = slopes.lo[1] + (slopes.hi[1] - slopes.lo[1]) * b / (n[1] - 1);
      out.push_back(normalized(lift(s, -1.0, d)));
    }
  return out;
}

// Outward normals of the downward-facing facets of a U-shape.
std::vector<Vec> lower_facet_directions(const UShape& u) {
  const int d = u.dim();
  std::vector<Vec> out;
  for (const Halfspace& h : u.polytope().facets())
    if (h.normal[d - 1] < -1e-9) out.push_back(h.normal);
  return out;
}

double effective_step(double step, double eps) { return step > 0.0 ? step : 2.0 * std::sqrt(eps); }

CapCover cover_at(const UShape& u, double v, const std::vector<Vec>& dirs, const ApproxOptions& options) {
  const CapOracle oracle(u.polytope());
  CapCoverOptions co;
  co.directions = dirs;
  co.shrink = options.shrink;
  co.expansion = options.expansion;
  return cap_cover(oracle, std::min(v, oracle.body().volume()), co);
}

// Net points of the expanded region inside U, as horizontal positions.
std::vector<Vec> net_positions(const UShape& u, const MRegion& m, int per_axis) {
  const int d = u.dim();
  std::vector<Vec> out;
  for (const Vec& y : region_net(m.expanded(), per_axis)) {
    if (!u.polytope().contains(y)) continue;
    const Vec z = horizontal(y, d);
    if (u.in_domain(z)) out.push_back(z);
  }
  return out;
}

}  // namespace

std::vector<AugmentedPoint> stab_large(const UShape& ki, double eps, double t, const ApproxOptions& options) {
  const int d = ki.dim();
  const Box slopes = Box::cube(d - 1, 1.0);
  const CapCover cover = cover_at(ki, options.cover_constant * eps * t,
                                  downward_directions(d, slopes, effective_step(options.candidate_step, eps)), options);
  std::vector<AugmentedPoint> out;
  for (const MRegion& m : cover.regions) {
    double lowest = std::numeric_limits<double>::infinity();
    for (const Vec& p : m.body.vertices())
      if (ki.in_domain(horizontal(p, d))) lowest = std::min(lowest, ki.gap(p));
    if (!(lowest <= eps)) continue;
    for (const Vec& z : net_positions(ki, m, options.net_per_axis)) out.push_back(ki.lower_point(z));
  }
  return out;
}

std::vector<AugmentedPoint> stab_small(const UShape& ki, double eps, double t, const ApproxOptions& options) {
  const int d = ki.dim();
  const UShapePtr dual = projective_dual(ki);
  const double v = options.cover_constant * eps * (options.small_constant * std::pow(eps, d - 1) / t);
  const CapCover cover = cover_at(*dual, v, lower_facet_directions(*dual), options);
  std::vector<AugmentedPoint> out;
  const auto in_ball = [&](const Vec& z) {
    for (int i = 0; i < d - 1; ++i)
      if (std::abs(z[i]) > options.slope_ball + kAbsTol) return false;
    return true;
  };
  for (const MRegion& m : cover.regions) {
    if (!in_ball(horizontal(m.center, d))) continue;
    for (const Vec& z : net_positions(*dual, m, options.net_per_axis)) {
      if (!in_ball(z)) continue;
      out.push_back(correspond(dual->lower_point(z), d));
    }
  }
  return out;
}

namespace {

constexpr double kHausdorffSlack = 1e-6;

void require_normalized(const ConvexBody& k) {
  const Box b = k.bounding_box();
  for (int i = 0; i < k.dim(); ++i)
    if (b.lo[i] < -1.0 - kAbsTol || b.hi[i] > 1.0 + kAbsTol) throw GeometryError("body is not inside [-1,1]^d");
}

// Intersection of the halfspaces (duplicates dropped) with the box [-1,1]^d.
Approximation assemble(const ConvexBody& k, const std::vector<Halfspace>& raw) {
  const int d = k.dim();
  std::map<std::array<long long, 4>, Halfspace> unique;
  for (const Halfspace& h : raw) {
    std::array<long long, 4> key{};
    for (int i = 0; i < 3; ++i) key[i] = std::llround(h.normal[i] * 1e11);
    key[3] = std::llround(h.offset * 1e11);
    unique.emplace(key, h);
  }
  std::vector<Halfspace> hs;
  for (const auto& [key, h] : unique) hs.push_back(h);
  IntersectionOptions options;
  options.bounds = Box::cube(d, 1.0);
  if (d == 3) options.interior = interior_point(k);
  Approximation out;
  out.polytope = halfspace_intersection(d, hs, options);
  out.facets = out.polytope.facet_count(false);
  out.diagnostics.halfspaces = hs.size();
  out.diagnostics.box_facets = out.polytope.facet_count(true) - out.facets;
  out.diagnostics.error = hausdorff_outer(k, out.polytope);
  return out;
}

// Supporting halfspace of K at the point nearest to a stabbing point. The
// points lie on the boundary of K + alpha, which shares normals with K; the
// model slope is only a fallback.
Halfspace supporting_halfspace(const ConvexBody& k, const SignedAxis& axis, const AugmentedPoint& q) {
  const int d = k.dim();
  const Vec p = axis.to_global(q.point, d);
  const Vec gap = p - k.nearest_point(p);
  const Vec w = norm(gap) > 1e-12 ? gap : axis.raw_direction(q.slope, d);
  return Halfspace::from_raw(w, k.support(w));
}

bool verified(Approximation& a, double eps) {
  a.diagnostics.verified =
      a.diagnostics.error.contained() && a.diagnostics.error.hausdorff <= eps * (1.0 + kHausdorffSlack);
  return a.diagnostics.verified;
}

}  // namespace

Approximation approximate_area_sensitive(const ConvexBody& k, double eps, const ApproxOptions& options) {
  const int d = k.dim();
  require_normalized(k);
  if (k.min_width() < eps) throw GeometryError("approximate_area_sensitive: body thinner than eps");
  const double area = k.surface_area();
  const double t = std::sqrt(area) * std::pow(eps, (d - 1) / 2.0);
  SupportSetOptions so;
  so.alpha = 2.0 * eps;
  so.slope_step = effective_step(options.model_step, eps);
  std::vector<SupportSet> sets;
  for (const SignedAxis& a : SignedAxis::all(d)) sets.push_back(support_set(k, a, so));

  ApproxOptions opt = options;
  opt.candidate_step = effective_step(options.candidate_step, eps);
  for (int round = 1; round <= options.max_rounds; ++round) {
    std::vector<StabbingSet> stabbing;
    std::vector<Halfspace> hs;
    std::size_t large = 0, small = 0;
    for (const SupportSet& s : sets) {
      StabbingSet st{s.axis, stab_large(*s.shape, eps, t, opt), stab_small(*s.shape, eps, t, opt), t, eps};
      large += st.large.size();
      small += st.small.size();
      for (const auto* group : {&st.large, &st.small})
        for (const AugmentedPoint& q : *group) hs.push_back(supporting_halfspace(k, s.axis, q));
      stabbing.push_back(std::move(st));
    }
    Approximation out = assemble(k, hs);
    out.stabbing = std::move(stabbing);
    auto& diag = out.diagnostics;
    diag.t = t;
    diag.large_points = large;
    diag.small_points = small;
    diag.rounds = round;
    diag.large_constant = large * t / area;
    diag.small_constant = small * std::pow(eps, d - 1) / t;
    if (verified(out, eps) || (!options.strict && round == options.max_rounds)) return out;
    opt.net_per_axis += 2;
    opt.candidate_step /= d == 2 ? 2.0 : std::sqrt(2.0);
  }
  throw GeometryError("approximate_area_sensitive: verification failed after densification");
}

Approximation approximate_dudley(const ConvexBody& k, double eps, bool strict) {
  const int d = k.dim();
  require_normalized(k);
  const double diam = k.diameter();
  const Box b = k.bounding_box();
  const Vec center = 0.5 * (b.lo + b.hi);
  const double radius = 2.0 * diam;
  const double delta = std::sqrt(eps * diam);
  double n = d == 2 ? 2.0 * std::numbers::pi * radius / delta : 4.0 * std::numbers::pi * radius * radius / (delta * delta);
  for (int round = 1; round <= 4; ++round) {
    std::vector<Halfspace> hs;
    for (const Vec& u : direction_net(d, static_cast<std::size_t>(std::ceil(n)))) {
      const Vec p = center + radius * u;
      const Vec normal = normalized(p - k.nearest_point(p));
      hs.push_back({normal, k.support(normal)});
    }
    Approximation out = assemble(k, hs);
    out.diagnostics.rounds = round;
    if (verified(out, eps) || (!strict && round == 4)) return out;
    n *= 2.0;
  }
  throw GeometryError("approximate_dudley: verification failed after refinement");
}

Algorithm parse_algorithm(const std::string& name) {
  if (name == "dudley") return Algorithm::dudley;
  if (name == "area-sensitive") return Algorithm::area_sensitive;
  throw std::invalid_argument("unknown algorithm '" + name + "' (expected dudley or area-sensitive)");
}

std::string algorithm_name(Algorithm a) { return a == Algorithm::dudley ? "dudley" : "area-sensitive"; }

Approximation approximate(Algorithm a, const ConvexBody& k, double eps, bool strict) {
  ApproxOptions options;
  options.strict = strict;
  return a == Algorithm::dudley ? approximate_dudley(k, eps, strict) : approximate_area_sensitive(k, eps, options);
}

}  // namespace polyapprox
