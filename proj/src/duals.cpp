#include "polyapprox/duals.hpp"

#include <cmath>
#include <numbers>

namespace polyapprox {

namespace {

void require_origin_interior(const ConvexBody& k) {
  for (const Vec& u : direction_net(k.dim(), k.dim() == 2 ? 64 : 200))
    if (k.support(u) <= kAbsTol) throw GeometryError("polar: origin is not interior");
}

}  // namespace

Polytope polar(const Polytope& p, double alpha) {
  if (!(p.max_violation(Vec{}) < -kAbsTol)) throw GeometryError("polar: origin is not interior");
  std::vector<Halfspace> hs;
  hs.reserve(p.vertices().size());
  for (const Vec& v : p.vertices()) hs.push_back(Halfspace::from_raw(v, alpha));
  IntersectionOptions options;
  if (p.dim() == 3 && hs.size() > 64) options.interior = Vec{};
  return halfspace_intersection(p.dim(), hs, options);
}

PolarBody::PolarBody(BodyPtr base, double alpha) : base_(std::move(base)), alpha_(alpha) {
  if (!(alpha_ > 0.0)) throw GeometryError("polar: alpha must be positive");
  require_origin_interior(*base_);
}

double PolarBody::radial(const Vec& u) const {
  double lo = 0.0, hi = 2.0 * base_->support(u) + 1.0;
  while (base_->contains(hi * u, 0.0)) hi *= 2.0;
  for (int it = 0; it < 100 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (base_->contains(mid * u, 0.0) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double PolarBody::support(const Vec& u) const {
  const double n = norm(u);
  if (n == 0.0) return 0.0;
  return alpha_ * n / radial(u / n);
}

Vec PolarBody::support_point(const Vec& u) const {
  const Vec dir = normalized(u);
  const Vec x = radial(dir) * dir;
  const Vec outside = x + 1e-6 * dir;
  const Vec n = normalized(outside - base_->nearest_point(outside));
  return alpha_ / base_->support(n) * n;
}

Vec PolarBody::nearest_point(const Vec& x) const {
  if (contains(x, 0.0)) return x;
  // dist(x, C) = max over unit u of <u, x> - h_C(u); refine the best direction.
  const auto gap = [&](const Vec& u) { return dot(u, x) - support(u); };
  Vec best = normalized(x);
  double best_val = gap(best);
  for (const Vec& u : direction_net(dim(), dim() == 2 ? 720 : 4000)) {
    const double v = gap(u);
    if (v > best_val) best_val = v, best = u;
  }
  for (double step = 0.05; step > 1e-12; step *= 0.5) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (int i = 0; i < dim(); ++i)
        for (double s : {-step, step}) {
          Vec c = best;
          c[i] += s;
          c = normalized(c);
          const double v = gap(c);
          if (v > best_val) best_val = v, best = c, improved = true;
        }
    }
  }
  return x - best_val * best;
}

double PolarBody::volume() const { return polar_volume(*base_, alpha_); }

double PolarBody::surface_area() const {
  const int d = dim();
  if (d == 2) {
    const int n = 20000;
    double total = 0.0;
    Vec prev = alpha_ / base_->support(Vec{1, 0}) * Vec{1, 0};
    for (int i = 1; i <= n; ++i) {
      const double t = 2.0 * std::numbers::pi * i / n;
      const Vec u{std::cos(t), std::sin(t)};
      const Vec p = alpha_ / base_->support(u) * u;
      total += dist(prev, p);
      prev = p;
    }
    return total;
  }
  std::vector<Vec> pts;
  for (const Vec& u : direction_net(3, 4000)) pts.push_back(alpha_ / base_->support(u) * u);
  return convex_hull(3, pts).surface_area();
}

BodyPtr polar(BodyPtr k, double alpha) {
  if (const Polytope* p = k->as_polytope()) return std::make_shared<PolytopeBody>(polar(*p, alpha));
  if (const auto* e = dynamic_cast<const EllipsoidBody*>(k.get()); e != nullptr && norm(e->center()) == 0.0) {
    Vec r{};
    for (int i = 0; i < e->dim(); ++i) r[i] = alpha / e->radii()[i];
    return std::make_shared<EllipsoidBody>(e->dim(), Vec{}, r);
  }
  return std::make_shared<PolarBody>(std::move(k), alpha);
}

double polar_volume(const ConvexBody& k, double alpha) {
  require_origin_interior(k);
  if (k.dim() == 2) {
    const int n = 20000;
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      const double t = 2.0 * std::numbers::pi * i / n;
      const double r = alpha / k.support(Vec{std::cos(t), std::sin(t)});
      total += r * r;
    }
    return 0.5 * total * 2.0 * std::numbers::pi / n;
  }
  const std::size_t n = 100000;
  double total = 0.0;
  for (const Vec& u : direction_net(3, n)) {
    const double r = alpha / k.support(u);
    total += r * r * r;
  }
  return total * 4.0 * std::numbers::pi / n / 3.0;
}

double mahler(const ConvexBody& k) {
  if (const Polytope* p = k.as_polytope()) return p->volume() * polar(*p).volume();
  return k.volume() * polar_volume(k);
}

PLUShape::Plane dual_plane(const Vec& p, int d) { return {horizontal(p, d), p[d - 1]}; }

Vec dual_point(const Vec& slope, double offset, int d) { return lift(horizontal(slope, d), offset, d); }

double vertical_offset(const Vec& p, const Vec& slope, double offset, int d) {
  return dot(horizontal(slope, d), horizontal(p, d)) - offset - p[d - 1];
}

AugmentedPoint correspond(const AugmentedPoint& q, int d) {
  if (!finite(q.slope) || !std::isfinite(q.offset)) throw GeometryError("correspond: vertical support");
  const PLUShape::Plane h = dual_plane(q.point, d);
  return {dual_point(q.slope, q.offset, d), h.slope, h.offset};
}

UShapePtr projective_dual(const UShape& u, double clip_half) {
  const int d = u.dim();
  if (const auto* quad = dynamic_cast<const QuadraticUShape*>(&u)) {
    if (quad->domain().bounding_box().hi[0] >= clip_half) return std::make_shared<QuadraticUShape>(d, clip_half);
  }
  std::vector<PLUShape::Plane> planes;
  for (const Vec& v : u.lower_vertices()) planes.push_back(dual_plane(v, d));
  return make_envelope(d, std::move(planes), box_polytope(d - 1, Box::cube(d - 1, clip_half)));
}

}  // namespace polyapprox
