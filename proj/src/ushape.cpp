#include "polyapprox/ushape.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

namespace polyapprox {

namespace {

constexpr double kTopMargin = 0.25;

double facet_measure(const Polytope& p, std::size_t f) {
  const auto& loop = p.facet_vertices()[f];
  const auto& v = p.vertices();
  if (p.dim() == 2) return dist(v[loop[0]], v[loop[1]]);
  if (p.dim() == 1) return 1.0;
  Vec s{};
  for (std::size_t k = 0; k < loop.size(); ++k) s = s + cross(v[loop[k]], v[loop[(k + 1) % loop.size()]]);
  return 0.5 * std::abs(dot(s, p.facets()[f].normal));
}

Polytope interval(double lo, double hi) {
  const std::vector<Halfspace> hs{{Vec{1.0}, hi}, {Vec{-1.0}, -lo}};
  return halfspace_intersection(1, hs);
}

// Projection of K along the axis, fattened by alpha, clipped to [-1,1]^{d-1}.
Polytope projected_domain(const ConvexBody& k, SignedAxis axis, double alpha, int directions) {
  const int d = k.dim();
  if (d == 2) {
    const Vec e = axis.embed_horizontal(Vec{1.0}, d);
    const double hi = std::min(k.support(e) + alpha, 1.0);
    const double lo = std::max(-k.support(-e) - alpha, -1.0);
    return interval(lo, hi);
  }
  const Polytope* poly = k.as_polytope();
  if (poly != nullptr && alpha == 0.0) {
    std::vector<Vec> pts;
    for (const Vec& v : poly->vertices()) pts.push_back(horizontal(axis.to_local(v, d), d));
    const Polytope hull = convex_hull(2, pts);
    return clip(hull, box_polytope(2, Box::cube(2, 1.0)).facets());
  }
  std::vector<Halfspace> hs;
  for (int m = 0; m < directions; ++m) {
    const double t = 2.0 * std::numbers::pi * m / directions;
    const Vec u{std::cos(t), std::sin(t)};
    hs.push_back({u, k.support(axis.embed_horizontal(u, d)) + alpha});
  }
  IntersectionOptions options;
  options.bounds = Box::cube(2, 1.0);
  return halfspace_intersection(2, hs, options);
}

double envelope(const std::vector<PLUShape::Plane>& planes, const Vec& z) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& p : planes) best = std::max(best, dot(p.slope, z) - p.offset);
  return best;
}

double top_for(const std::vector<PLUShape::Plane>& planes, const Polytope& domain) {
  double hi = -std::numeric_limits<double>::infinity();
  for (const Vec& v : domain.vertices()) hi = std::max(hi, envelope(planes, v));
  return hi + kTopMargin;
}

PLUShape::Plane plane_for(const ConvexBody& k, SignedAxis axis, const Vec& slope) {
  const Vec w = axis.raw_direction(slope, k.dim());
  return {slope, k.support(w)};
}

// Slopes where facet-normal-fan edges cross the boundary of the axis cone.
std::vector<Vec> cone_crossings(const Polytope& poly, SignedAxis axis) {
  std::map<std::pair<int, int>, std::vector<int>> edge_facets;
  for (std::size_t f = 0; f < poly.facet_vertices().size(); ++f) {
    const auto& loop = poly.facet_vertices()[f];
    for (std::size_t k = 0; k < loop.size(); ++k) {
      const int a = loop[k], b = loop[(k + 1) % loop.size()];
      edge_facets[{std::min(a, b), std::max(a, b)}].push_back(static_cast<int>(f));
    }
  }
  const int j = axis.axis;
  std::vector<Vec> out;
  for (const auto& [edge, fs] : edge_facets) {
    if (fs.size() != 2) continue;
    const Vec nf = poly.facets()[fs[0]].normal, ng = poly.facets()[fs[1]].normal;
    for (int m = 0; m < 3; ++m) {
      if (m == j) continue;
      for (int s : {-1, 1}) {
        // Boundary constraint sign*n_j - s*n_m = 0.
        const auto l = [&](const Vec& n) { return axis.sign * n[j] - s * n[m]; };
        const double lf = l(nf), lg = l(ng);
        if ((lf > 0) == (lg > 0) || lf == lg) continue;
        const double t = lf / (lf - lg);
        const Vec n = (1.0 - t) * nf + t * ng;
        const double lead = axis.sign * n[j];
        if (lead <= kAbsTol) continue;
        bool inside = true;
        for (int r = 0; r < 3; ++r)
          if (r != j && std::abs(n[r]) > lead * (1.0 + 1e-12)) inside = false;
        if (!inside) continue;
        const Vec local = axis.to_local(n, 3);
        out.push_back(Vec{std::clamp(local[0] / lead, -1.0, 1.0), std::clamp(local[1] / lead, -1.0, 1.0)});
      }
    }
  }
  return out;
}

}  // namespace

std::shared_ptr<const PLUShape> make_envelope(int dim, std::vector<PLUShape::Plane> planes, Polytope domain) {
  const double top = top_for(planes, domain);
  return std::make_shared<PLUShape>(dim, std::move(planes), std::move(domain), top);
}

std::vector<Vec> UShape::lower_vertices() const {
  std::vector<Vec> out;
  for (const Vec& v : polytope().vertices())
    if (v[dim_ - 1] < top_ - kAbsTol) out.push_back(v);
  return out;
}

bool UShape::contains(const Vec& p, double tol) const {
  const Vec z = horizontal(p, dim_);
  return in_domain(z, tol) && p[dim_ - 1] >= height(z) - tol;
}

double UShape::lower_area() const {
  const Polytope& p = polytope();
  double total = 0.0;
  const Vec up = unit_axis(dim_ - 1);
  for (std::size_t f = 0; f < p.facets().size(); ++f)
    if (dot(p.facets()[f].normal, up) < -kAbsTol) total += facet_measure(p, f);
  return total;
}

PLUShape::PLUShape(int dim, std::vector<Plane> planes, Polytope domain, double top)
    : UShape(dim, std::move(domain), top), planes_(std::move(planes)) {
  if (planes_.empty()) throw GeometryError("PLUShape: no planes");
  if (domain_.dim() != dim - 1) throw GeometryError("PLUShape: domain dimension mismatch");
  const std::size_t n = planes_.size();
  std::vector<Halfspace> hs;
  hs.reserve(n + domain_.facets().size());
  for (const Plane& p : planes_) hs.push_back(Halfspace::from_raw(lift(p.slope, -1.0, dim), p.offset));
  for (const Halfspace& h : domain_.facets()) hs.push_back({lift(h.normal, 0.0, dim), h.offset});
  const Box db = domain_.bounding_box();
  Box bounds;
  for (int i = 0; i < dim - 1; ++i) {
    bounds.lo[i] = db.lo[i] - 1.0;
    bounds.hi[i] = db.hi[i] + 1.0;
  }
  bounds.lo[dim - 1] = -10.0 - std::abs(top);
  bounds.hi[dim - 1] = top;
  IntersectionOptions options;
  options.bounds = bounds;
  if (dim == 3) {
    const Vec c = domain_.centroid();
    const double h = envelope(planes_, c);
    if (!(h < top)) throw GeometryError("PLUShape: top below the lower boundary");
    options.interior = lift(c, 0.5 * (h + top), dim);
  }
  poly_ = halfspace_intersection(dim, hs, options);
}

double PLUShape::height(const Vec& z) const {
  if (!in_domain(z)) return std::numeric_limits<double>::infinity();
  return envelope(planes_, z);
}

int PLUShape::active_plane(const Vec& z) const {
  int best = 0;
  double val = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < planes_.size(); ++k) {
    const double v = dot(planes_[k].slope, z) - planes_[k].offset;
    if (v > val) {
      val = v;
      best = static_cast<int>(k);
    }
  }
  return best;
}

AugmentedPoint PLUShape::lower_point(const Vec& z) const {
  if (!in_domain(z)) throw GeometryError("lower_point: outside the domain");
  const Plane& p = planes_[active_plane(z)];
  const Vec zz = horizontal(z, dim_);
  return {lift(zz, dot(p.slope, zz) - p.offset, dim_), p.slope, p.offset};
}

std::vector<Vec> PLUShape::lower_vertices() const { return UShape::lower_vertices(); }

double PLUShape::lower_area() const {
  double total = 0.0;
  const int n = static_cast<int>(planes_.size());
  for (std::size_t f = 0; f < poly_.facets().size(); ++f) {
    const int s = poly_.facet_source()[f];
    if (s >= 0 && s < n) total += facet_measure(poly_, f);
  }
  return total;
}

QuadraticUShape::QuadraticUShape(int dim, double half, std::size_t model_planes_per_axis)
    : UShape(dim, box_polytope(dim - 1, Box::cube(dim - 1, half)), (dim - 1) * half * half / 2.0 + kTopMargin) {
  std::size_t n = model_planes_per_axis;
  if (dim == 3) n = std::min<std::size_t>(n, 65);
  std::vector<PLUShape::Plane> planes;
  const auto coord = [&](std::size_t i) { return -half + 2.0 * half * static_cast<double>(i) / (n - 1); };
  if (dim == 2) {
    for (std::size_t i = 0; i < n; ++i) planes.push_back({Vec{coord(i)}, coord(i) * coord(i) / 2.0});
  } else {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const Vec a{coord(i), coord(j)};
        planes.push_back({a, dot(a, a) / 2.0});
      }
  }
  model_ = std::make_shared<PLUShape>(dim, std::move(planes), domain_, top_);
}

double QuadraticUShape::height(const Vec& z) const {
  if (!in_domain(z)) return std::numeric_limits<double>::infinity();
  const Vec zz = horizontal(z, dim_);
  return dot(zz, zz) / 2.0;
}

AugmentedPoint QuadraticUShape::lower_point(const Vec& z) const {
  if (!in_domain(z)) throw GeometryError("lower_point: outside the domain");
  const Vec zz = horizontal(z, dim_);
  const double h = dot(zz, zz) / 2.0;
  return {lift(zz, h, dim_), zz, h};
}

double QuadraticUShape::lower_area() const {
  const double half = domain_.bounding_box().hi[0];
  if (dim_ == 2) return half * std::sqrt(1.0 + half * half) + std::asinh(half);
  // Midpoint rule for the integral of sqrt(1 + |z|^2) over the square.
  const int n = 400;
  const double h = 2.0 * half / n;
  double total = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double x = -half + (i + 0.5) * h, y = -half + (j + 0.5) * h;
      total += std::sqrt(1.0 + x * x + y * y);
    }
  return total * h * h;
}

std::vector<SignedAxis> SignedAxis::all(int d) {
  std::vector<SignedAxis> out;
  for (int i = d - 1; i >= 0; --i) out.push_back({i, -1});
  for (int i = 0; i < d; ++i) out.push_back({i, 1});
  return out;
}

Vec SignedAxis::to_local(const Vec& x, int d) const {
  Vec p{};
  int k = 0;
  for (int i = 0; i < d; ++i)
    if (i != axis) p[k++] = x[i];
  p[d - 1] = -sign * x[axis];
  return p;
}

Vec SignedAxis::to_global(const Vec& p, int d) const {
  Vec x{};
  int k = 0;
  for (int i = 0; i < d; ++i)
    if (i != axis) x[i] = p[k++];
  x[axis] = -sign * p[d - 1];
  return x;
}

Vec SignedAxis::embed_horizontal(const Vec& z, int d) const { return to_global(lift(z, 0.0, d), d); }

Vec SignedAxis::raw_direction(const Vec& slope, int d) const {
  Vec w = embed_horizontal(slope, d);
  w[axis] = sign;
  return w;
}

SignedAxis owning_axis(const Vec& normal, int d) {
  SignedAxis best{};
  double val = -std::numeric_limits<double>::infinity();
  for (const SignedAxis& a : SignedAxis::all(d)) {
    const double v = a.sign * normal[a.axis];
    if (v > val + 1e-12) {
      val = v;
      best = a;
    }
  }
  return best;
}

SupportSet support_set(const ConvexBody& k, SignedAxis axis, const SupportSetOptions& options) {
  const int d = k.dim();
  SupportSet out{axis, nullptr, {}};
  std::vector<PLUShape::Plane> planes;
  // Corners of the slope cone.
  if (d == 2) {
    for (double s : {-1.0, 1.0}) planes.push_back(plane_for(k, axis, Vec{s}));
  } else {
    for (double s : {-1.0, 1.0})
      for (double t : {-1.0, 1.0}) planes.push_back(plane_for(k, axis, Vec{s, t}));
  }
  if (const Polytope* poly = k.as_polytope()) {
    for (std::size_t f = 0; f < poly->facets().size(); ++f) {
      const Halfspace& h = poly->facets()[f];
      const SignedAxis owner = owning_axis(h.normal, d);
      if (owner.axis != axis.axis || owner.sign != axis.sign) continue;
      const double lead = axis.sign * h.normal[axis.axis];
      const Vec local = axis.to_local(h.normal, d);
      planes.push_back({horizontal(local, d) / lead, h.offset / lead});
      out.owned_facets.push_back(static_cast<int>(f));
    }
    if (d == 3)
      for (const Vec& a : cone_crossings(*poly, axis)) planes.push_back(plane_for(k, axis, a));
  } else {
    const int n = std::max(2, static_cast<int>(std::ceil(2.0 / options.slope_step))) + 1;
    const auto coord = [&](int i) { return -1.0 + 2.0 * i / (n - 1); };
    if (d == 2) {
      for (int i = 0; i < n; ++i) planes.push_back(plane_for(k, axis, Vec{coord(i)}));
    } else {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) planes.push_back(plane_for(k, axis, Vec{coord(i), coord(j)}));
    }
  }
  Polytope domain = projected_domain(k, axis, options.alpha, options.domain_directions);
  const double top = top_for(planes, domain);
  out.shape = std::make_shared<PLUShape>(d, std::move(planes), std::move(domain), top);
  return out;
}

std::shared_ptr<const PLUShape> restrict_support_set(const PLUShape& s, const ConvexBody& k,
                                                     SignedAxis axis, double alpha,
                                                     int domain_directions) {
  if (alpha < 0.0) throw GeometryError("restrict_support_set: alpha must be nonnegative");
  Polytope domain = projected_domain(k, axis, alpha, domain_directions);
  const double top = top_for(s.planes(), domain);
  return std::make_shared<PLUShape>(s.dim(), s.planes(), std::move(domain), top);
}

}  // namespace polyapprox
