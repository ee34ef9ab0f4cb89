#include "polyapprox/bodies.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <stdexcept>

namespace polyapprox {

using std::numbers::pi;

// ---------------------------------------------------------------------------
// Helpers

double unit_ball_volume(int d) {
  switch (d) {
    case 1: return 2.0;
    case 2: return pi;
    case 3: return 4.0 * pi / 3.0;
    default: throw std::invalid_argument("unit_ball_volume: dimension must be 1..3");
  }
}

double surface_diameter(int d, double area) {
  if (d == 1) return area;
  return 2.0 * std::pow(area / (d * unit_ball_volume(d)), 1.0 / (d - 1));
}

std::vector<Vec> direction_net(int d, std::size_t n) {
  std::vector<Vec> out;
  out.reserve(n);
  if (d == 1) return {Vec{1.0}, Vec{-1.0}};
  if (d == 2) {
    for (std::size_t k = 0; k < n; ++k) {
      const double t = 2.0 * pi * static_cast<double>(k) / static_cast<double>(n);
      out.push_back({std::cos(t), std::sin(t)});
    }
    return out;
  }
  const double golden = pi * (3.0 - std::sqrt(5.0));
  for (std::size_t k = 0; k < n; ++k) {
    const double z = 1.0 - 2.0 * (static_cast<double>(k) + 0.5) / static_cast<double>(n);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double t = golden * static_cast<double>(k);
    out.push_back({r * std::cos(t), r * std::sin(t), z});
  }
  return out;
}

Vec interior_point(const ConvexBody& body) {
  Vec m;
  for (int i = 0; i < body.dim(); ++i) {
    m += body.support_point(unit_axis(i));
    m += body.support_point(-unit_axis(i));
  }
  return m / (2.0 * body.dim());
}

namespace {

double width(const ConvexBody& k, const Vec& u) { return k.support(u) + k.support(-u); }

Vec spherical(double theta, double phi) {
  return {std::sin(phi) * std::cos(theta), std::sin(phi) * std::sin(theta), std::cos(phi)};
}

}  // namespace

// ---------------------------------------------------------------------------
// ConvexBody defaults

double ConvexBody::mean_curvature_integral() const {
  if (dim() == 2) return surface_area();
  const std::size_t n = 20000;
  double total = 0.0;
  for (const Vec& u : direction_net(3, n)) total += support(u);
  return total * 4.0 * pi / static_cast<double>(n);
}

double ConvexBody::diameter() const {
  double best = 0.0;
  for (const Vec& u : direction_net(dim(), dim() == 2 ? 3600 : 8000))
    best = std::max(best, width(*this, u));
  return best;
}

double ConvexBody::min_width() const {
  if (dim() == 2) {
    const int n = 3600;
    double best_t = 0.0, best = std::numeric_limits<double>::infinity();
    for (int k = 0; k < n; ++k) {
      const double t = pi * k / n;
      const double w = width(*this, {std::cos(t), std::sin(t)});
      if (w < best) {
        best = w;
        best_t = t;
      }
    }
    double lo = best_t - pi / n, hi = best_t + pi / n;
    for (int it = 0; it < 60; ++it) {
      const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
      if (width(*this, {std::cos(m1), std::sin(m1)}) < width(*this, {std::cos(m2), std::sin(m2)}))
        hi = m2;
      else
        lo = m1;
    }
    const double t = (lo + hi) / 2.0;
    return std::min(best, width(*this, {std::cos(t), std::sin(t)}));
  }
  double best = std::numeric_limits<double>::infinity();
  Vec best_u;
  for (const Vec& u : direction_net(3, 8000)) {
    const double w = width(*this, u);
    if (w < best) {
      best = w;
      best_u = u;
    }
  }
  // Pattern search in spherical coordinates around the best net direction.
  double theta = std::atan2(best_u[1], best_u[0]);
  double phi = std::acos(std::clamp(best_u[2], -1.0, 1.0));
  double step = 0.05;
  while (step > 1e-10) {
    bool improved = false;
    for (auto [dt, dp] : {std::pair{step, 0.0}, {-step, 0.0}, {0.0, step}, {0.0, -step}}) {
      const double w = width(*this, spherical(theta + dt, phi + dp));
      if (w < best) {
        best = w;
        theta += dt;
        phi += dp;
        improved = true;
      }
    }
    if (!improved) step /= 2.0;
  }
  return best;
}

Box ConvexBody::bounding_box() const {
  Box b;
  for (int i = 0; i < dim(); ++i) {
    b.hi[i] = support(unit_axis(i));
    b.lo[i] = -support(-unit_axis(i));
  }
  return b;
}

// ---------------------------------------------------------------------------
// PolytopeBody

PolytopeBody::PolytopeBody(Polytope p) : poly_(std::move(p)) {
  if (poly_.empty()) throw std::invalid_argument("PolytopeBody: empty polytope");
}

Vec PolytopeBody::support_point(const Vec& u) const {
  return poly_.vertices()[static_cast<std::size_t>(poly_.support_vertex(u))];
}

double PolytopeBody::mean_curvature_integral() const {
  if (dim() == 2) return surface_area();
  // Half the sum over edges of length times exterior dihedral angle.
  std::map<std::pair<int, int>, std::vector<int>> edge_facets;
  const auto& fv = poly_.facet_vertices();
  for (std::size_t f = 0; f < fv.size(); ++f)
    for (std::size_t i = 0; i < fv[f].size(); ++i) {
      int a = fv[f][i], b = fv[f][(i + 1) % fv[f].size()];
      if (a > b) std::swap(a, b);
      edge_facets[{a, b}].push_back(static_cast<int>(f));
    }
  double total = 0.0;
  for (const auto& [e, fs] : edge_facets) {
    if (fs.size() != 2) continue;
    const Vec& n1 = poly_.facets()[static_cast<std::size_t>(fs[0])].normal;
    const Vec& n2 = poly_.facets()[static_cast<std::size_t>(fs[1])].normal;
    const double angle = std::acos(std::clamp(dot(n1, n2), -1.0, 1.0));
    total += dist(poly_.vertices()[static_cast<std::size_t>(e.first)],
                  poly_.vertices()[static_cast<std::size_t>(e.second)]) *
             angle;
  }
  return total / 2.0;
}

std::optional<BoundaryPieces> PolytopeBody::boundary_pieces() const {
  if (dim() != 2) return std::nullopt;
  BoundaryPieces out;
  for (const auto& e : poly_.facet_vertices())
    out.segments.push_back({poly_.vertices()[static_cast<std::size_t>(e[0])],
                            poly_.vertices()[static_cast<std::size_t>(e[1])]});
  return out;
}

// ---------------------------------------------------------------------------
// EllipsoidBody

EllipsoidBody::EllipsoidBody(int dim, Vec center, Vec radii)
    : dim_(dim), center_(center), radii_(radii) {
  if (dim < 2 || dim > 3) throw std::invalid_argument("ellipsoid: d must be 2 or 3");
  for (int i = 0; i < dim; ++i)
    if (!(radii_[i] > 0.0) || !std::isfinite(radii_[i]))
      throw std::invalid_argument("ellipsoid: radii must be positive");
  for (int i = dim; i < 3; ++i) radii_[i] = 0.0;
}

bool EllipsoidBody::is_ball() const {
  for (int i = 1; i < dim_; ++i)
    if (radii_[i] != radii_[0]) return false;
  return true;
}

Vec EllipsoidBody::support_point(const Vec& u) const {
  Vec du;
  for (int i = 0; i < dim_; ++i) du[i] = radii_[i] * u[i];
  const double n = norm(du);
  if (n == 0.0) return center_;
  Vec p = center_;
  for (int i = 0; i < dim_; ++i) p[i] += radii_[i] * du[i] / n;
  return p;
}

bool EllipsoidBody::contains(const Vec& x, double tol) const {
  if (tol <= 0.0) {
    double s = 0.0;
    for (int i = 0; i < dim_; ++i) s += std::pow((x[i] - center_[i]) / radii_[i], 2);
    return s <= 1.0;
  }
  return distance(x) <= tol;
}

Vec EllipsoidBody::nearest_point(const Vec& x) const {
  const Vec p = x - center_;
  double s = 0.0;
  for (int i = 0; i < dim_; ++i) s += std::pow(p[i] / radii_[i], 2);
  if (s <= 1.0) return x;
  if (is_ball()) return center_ + radii_[0] * normalized(p);
  // Nearest point q_i = r_i^2 p_i / (t + r_i^2) with t >= 0 the root of
  // sum (r_i p_i / (t + r_i^2))^2 = 1.
  auto g = [&](double t) {
    double acc = 0.0;
    for (int i = 0; i < dim_; ++i) acc += std::pow(radii_[i] * p[i] / (t + radii_[i] * radii_[i]), 2);
    return acc - 1.0;
  };
  double lo = 0.0, hi = 1.0;
  double rmax = 0.0;
  for (int i = 0; i < dim_; ++i) rmax = std::max(rmax, radii_[i]);
  hi = rmax * norm(p) + 1.0;
  while (g(hi) > 0.0) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-17 * std::max(1.0, hi); ++it) {
    const double mid = (lo + hi) / 2.0;
    (g(mid) > 0.0 ? lo : hi) = mid;
  }
  const double t = (lo + hi) / 2.0;
  Vec q = center_;
  for (int i = 0; i < dim_; ++i) q[i] += radii_[i] * radii_[i] * p[i] / (t + radii_[i] * radii_[i]);
  return q;
}

double EllipsoidBody::volume() const {
  double v = unit_ball_volume(dim_);
  for (int i = 0; i < dim_; ++i) v *= radii_[i];
  return v;
}

double EllipsoidBody::surface_area() const {
  std::vector<double> r(radii_.c.begin(), radii_.c.begin() + dim_);
  std::sort(r.rbegin(), r.rend());
  if (dim_ == 2) {
    const double k = std::sqrt(1.0 - (r[1] * r[1]) / (r[0] * r[0]));
    return 4.0 * r[0] * std::comp_ellint_2(k);
  }
  const double a = r[0], b = r[1], c = r[2];
  if (a - c <= 1e-14 * a) return 4.0 * pi * a * a;
  const double phi = std::acos(c / a);
  const double k = std::sqrt(std::clamp(a * a * (b * b - c * c) / (b * b * (a * a - c * c)), 0.0, 1.0));
  const double s = std::sin(phi), co = std::cos(phi);
  return 2.0 * pi * c * c +
         2.0 * pi * a * b / s * (std::ellint_2(k, phi) * s * s + std::ellint_1(k, phi) * co * co);
}

double EllipsoidBody::mean_curvature_integral() const {
  if (is_ball()) return dim_ == 2 ? 2.0 * pi * radii_[0] : 4.0 * pi * radii_[0];
  return ConvexBody::mean_curvature_integral();
}

double EllipsoidBody::diameter() const {
  double m = 0.0;
  for (int i = 0; i < dim_; ++i) m = std::max(m, radii_[i]);
  return 2.0 * m;
}

double EllipsoidBody::min_width() const {
  double m = radii_[0];
  for (int i = 1; i < dim_; ++i) m = std::min(m, radii_[i]);
  return 2.0 * m;
}

std::optional<BoundaryPieces> EllipsoidBody::boundary_pieces() const {
  if (dim_ != 2 || !is_ball()) return std::nullopt;
  BoundaryPieces out;
  out.arcs.push_back({center_, radii_[0], 0.0, 2.0 * pi});
  return out;
}

// ---------------------------------------------------------------------------
// SegmentBody

Vec SegmentBody::nearest_point(const Vec& x) const {
  const Vec ab = b_ - a_;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return a_;
  return a_ + std::clamp(dot(x - a_, ab) / len2, 0.0, 1.0) * ab;
}

double SegmentBody::mean_curvature_integral() const {
  return dim_ == 2 ? 2.0 * dist(a_, b_) : pi * dist(a_, b_);
}

std::optional<BoundaryPieces> SegmentBody::boundary_pieces() const {
  if (dim_ != 2) return std::nullopt;
  BoundaryPieces out;
  out.segments.push_back({a_, b_});
  out.segments.push_back({b_, a_});
  return out;
}

// ---------------------------------------------------------------------------
// FattenedBody

FattenedBody::FattenedBody(BodyPtr base, double r) : base_(std::move(base)), r_(r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("fatten: radius must be positive");
}

Vec FattenedBody::support_point(const Vec& u) const {
  return base_->support_point(u) + r_ * normalized(u);
}

double FattenedBody::support(const Vec& u) const { return base_->support(u) + r_ * norm(u); }

bool FattenedBody::contains(const Vec& x, double tol) const {
  return base_->distance(x) <= r_ + tol;
}

Vec FattenedBody::nearest_point(const Vec& x) const {
  const Vec p = base_->nearest_point(x);
  const double d = dist(x, p);
  if (d <= r_) return x;
  return p + (r_ / d) * (x - p);
}

double FattenedBody::volume() const {
  if (dim() == 2)
    return base_->volume() + base_->surface_area() * r_ + pi * r_ * r_;
  return base_->volume() + base_->surface_area() * r_ + base_->mean_curvature_integral() * r_ * r_ +
         4.0 * pi / 3.0 * r_ * r_ * r_;
}

double FattenedBody::surface_area() const {
  if (dim() == 2) return base_->surface_area() + 2.0 * pi * r_;
  return base_->surface_area() + 2.0 * base_->mean_curvature_integral() * r_ + 4.0 * pi * r_ * r_;
}

double FattenedBody::mean_curvature_integral() const {
  if (dim() == 2) return surface_area();
  return base_->mean_curvature_integral() + 4.0 * pi * r_;
}

std::optional<BoundaryPieces> FattenedBody::boundary_pieces() const {
  if (dim() != 2) return std::nullopt;
  auto inner = base_->boundary_pieces();
  if (!inner) return std::nullopt;
  BoundaryPieces out;
  for (ArcPiece a : inner->arcs) {
    a.radius += r_;
    out.arcs.push_back(a);
  }
  // Offset every segment outward and join consecutive ones by arcs.
  const auto& segs = inner->segments;
  for (std::size_t k = 0; k < segs.size(); ++k) {
    const Vec d = segs[k].b - segs[k].a;
    const Vec n = normalized(Vec{d[1], -d[0]});
    out.segments.push_back({segs[k].a + r_ * n, segs[k].b + r_ * n});
    const auto& next = segs[(k + 1) % segs.size()];
    const Vec d2 = next.b - next.a;
    const Vec n2 = normalized(Vec{d2[1], -d2[0]});
    if (!inner->arcs.empty()) continue;
    double from = std::atan2(n[1], n[0]);
    double to = std::atan2(n2[1], n2[0]);
    while (to <= from) to += 2.0 * pi;
    if (to - from > 1e-15) out.arcs.push_back({segs[k].b, r_, from, to});
  }
  return out;
}

BodyPtr fatten(BodyPtr body, double r) {
  if (auto* e = dynamic_cast<const EllipsoidBody*>(body.get()); e && e->is_ball()) {
    Vec radii;
    for (int i = 0; i < e->dim(); ++i) radii[i] = e->radii()[0] + r;
    if (!(r > 0.0)) throw std::invalid_argument("fatten: radius must be positive");
    return std::make_shared<EllipsoidBody>(e->dim(), e->center(), radii);
  }
  return std::make_shared<FattenedBody>(std::move(body), r);
}

// ---------------------------------------------------------------------------
// TransformedBody

TransformedBody::TransformedBody(BodyPtr base, double scale, Vec shift)
    : base_(std::move(base)), scale_(scale), shift_(shift) {
  if (!(scale > 0.0)) throw std::invalid_argument("transform: scale must be positive");
  if (const Polytope* p = base_->as_polytope()) poly_ = p->scaled(scale_).translated(shift_);
}

Vec TransformedBody::support_point(const Vec& u) const {
  return from_base(base_->support_point(u));
}

double TransformedBody::support(const Vec& u) const {
  return scale_ * base_->support(u) + dot(u, shift_);
}

bool TransformedBody::contains(const Vec& x, double tol) const {
  return base_->contains(to_base(x), tol / scale_);
}

Vec TransformedBody::nearest_point(const Vec& x) const {
  return from_base(base_->nearest_point(to_base(x)));
}

double TransformedBody::volume() const { return std::pow(scale_, dim()) * base_->volume(); }

double TransformedBody::surface_area() const {
  return std::pow(scale_, dim() - 1) * base_->surface_area();
}

double TransformedBody::mean_curvature_integral() const {
  return dim() == 2 ? surface_area() : scale_ * base_->mean_curvature_integral();
}

std::optional<BoundaryPieces> TransformedBody::boundary_pieces() const {
  auto inner = base_->boundary_pieces();
  if (!inner) return std::nullopt;
  for (auto& s : inner->segments) {
    s.a = from_base(s.a);
    s.b = from_base(s.b);
  }
  for (auto& a : inner->arcs) {
    a.center = from_base(a.center);
    a.radius *= scale_;
  }
  return inner;
}

// ---------------------------------------------------------------------------
// Specs

BodySpec BodySpec::from_json(const nlohmann::json& j) {
  BodySpec s;
  if (!j.is_object()) throw std::invalid_argument("body spec must be a JSON object");
  s.kind = j.at("kind").get<std::string>();
  s.d = j.value("d", 2);
  if (j.contains("params")) s.params = j.at("params");
  s.seed = j.value("seed", std::uint64_t{0});
  return s;
}

nlohmann::json BodySpec::to_json() const {
  return {{"kind", kind}, {"d", d}, {"params", params}, {"seed", seed}};
}

std::string BodySpec::hash() const {
  const std::string text = to_json().dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

Vec read_vec(const nlohmann::json& j, int d, const char* what) {
  if (j.is_number()) {
    Vec v;
    for (int i = 0; i < d; ++i) v[i] = j.get<double>();
    return v;
  }
  if (!j.is_array() || static_cast<int>(j.size()) != d)
    throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(d) + " numbers");
  Vec v;
  for (int i = 0; i < d; ++i) v[i] = j[static_cast<std::size_t>(i)].get<double>();
  return v;
}

double positive(const nlohmann::json& p, const char* key, double fallback) {
  const double v = p.value(key, fallback);
  if (!(v > 0.0) || !std::isfinite(v))
    throw std::invalid_argument(std::string("parameter '") + key + "' must be positive");
  return v;
}

Polytope regular_polygon(int m) {
  std::vector<Vec> pts;
  for (int k = 0; k < m; ++k) {
    const double t = 2.0 * pi * k / m;
    pts.push_back({std::cos(t), std::sin(t)});
  }
  return convex_hull(2, pts);
}

}  // namespace

BodyPtr make_body(const BodySpec& spec) {
  const int d = spec.d;
  if (d != 2 && d != 3) throw std::invalid_argument("d must be 2 or 3");
  const auto& p = spec.params;
  const Vec center = p.contains("center") ? read_vec(p.at("center"), d, "center") : Vec{};
  auto shifted = [&](BodyPtr b) -> BodyPtr {
    if (center == Vec{}) return b;
    return std::make_shared<TransformedBody>(std::move(b), 1.0, center);
  };

  if (spec.kind == "ball") {
    const double r = positive(p, "r", 1.0);
    Vec radii;
    for (int i = 0; i < d; ++i) radii[i] = r;
    return std::make_shared<EllipsoidBody>(d, center, radii);
  }
  if (spec.kind == "ellipsoid") {
    if (!p.contains("radii")) throw std::invalid_argument("ellipsoid: missing 'radii'");
    return std::make_shared<EllipsoidBody>(d, center, read_vec(p.at("radii"), d, "radii"));
  }
  if (spec.kind == "box") {
    Box b;
    if (p.contains("lo") || p.contains("hi")) {
      b.lo = read_vec(p.at("lo"), d, "lo");
      b.hi = read_vec(p.at("hi"), d, "hi");
    } else {
      const Vec half = p.contains("half") ? read_vec(p.at("half"), d, "half") : read_vec(1.0, d, "half");
      b.lo = center - half;
      b.hi = center + half;
    }
    for (int i = 0; i < d; ++i)
      if (!(b.hi[i] > b.lo[i])) throw std::invalid_argument("box: empty extent");
    return std::make_shared<PolytopeBody>(box_polytope(d, b));
  }
  if (spec.kind == "rounded-polygon") {
    if (d != 2) throw std::invalid_argument("rounded-polygon is two-dimensional");
    const int m = p.value("m", 6);
    if (m < 3) throw std::invalid_argument("rounded-polygon: m must be at least 3");
    const double delta = positive(p, "delta", 0.01);
    return shifted(fatten(std::make_shared<PolytopeBody>(regular_polygon(m)), delta));
  }
  if (spec.kind == "needle") {
    const double len = positive(p, "L", 1.0);
    const double theta = positive(p, "theta", 0.05);
    Box b;
    b.lo[0] = 0.0;
    b.hi[0] = len;
    for (int i = 1; i < d; ++i) {
      b.lo[i] = -theta / 2.0;
      b.hi[i] = theta / 2.0;
    }
    return shifted(fatten(std::make_shared<PolytopeBody>(box_polytope(d, b)), theta / 2.0));
  }
  if (spec.kind == "random-polytope") {
    const int n = p.value("n", 50);
    if (n < d + 1) throw std::invalid_argument("random-polytope: n must exceed d");
    Vec radii = p.contains("radii") ? read_vec(p.at("radii"), d, "radii")
                                    : read_vec(p.value("r", 1.0), d, "r");
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> g;
    std::vector<Vec> pts;
    for (int k = 0; k < n; ++k) {
      Vec v;
      for (int i = 0; i < d; ++i) v[i] = g(rng);
      v = normalized(v);
      for (int i = 0; i < d; ++i) v[i] = center[i] + radii[i] * v[i];
      pts.push_back(v);
    }
    return std::make_shared<PolytopeBody>(convex_hull(d, pts));
  }
  if (spec.kind == "custom-polytope") {
    if (p.contains("vertices")) {
      std::vector<Vec> pts;
      for (const auto& v : p.at("vertices")) pts.push_back(read_vec(v, d, "vertex"));
      return std::make_shared<PolytopeBody>(convex_hull(d, pts));
    }
    if (p.contains("halfspaces")) {
      std::vector<Halfspace> hs;
      for (const auto& h : p.at("halfspaces"))
        hs.push_back(Halfspace::from_raw(read_vec(h.at("normal"), d, "normal"), h.at("offset").get<double>()));
      return std::make_shared<PolytopeBody>(halfspace_intersection(d, hs));
    }
    throw std::invalid_argument("custom-polytope: needs 'vertices' or 'halfspaces'");
  }
  throw std::invalid_argument("unknown body kind '" + spec.kind + "'");
}

Normalized normalize(BodyPtr body, double eps) {
  if (!(eps > 0.0) || !(eps < 0.25)) throw std::invalid_argument("normalize: eps must lie in (0, 1/4)");
  const int d = body->dim();
  const Box b = body->bounding_box();
  bool inside = true;
  double half = 0.0;
  Vec mid;
  for (int i = 0; i < d; ++i) {
    inside = inside && b.lo[i] >= -(1.0 - 2.0 * eps) && b.hi[i] <= 1.0 - 2.0 * eps;
    half = std::max(half, (b.hi[i] - b.lo[i]) / 2.0);
    mid[i] = (b.hi[i] + b.lo[i]) / 2.0;
  }
  Normalized out;
  if (inside) {
    out.body = std::move(body);
    out.eps = eps;
    return out;
  }
  out.scale = (1.0 - 2.0 * eps) / half;
  out.shift = -out.scale * mid;
  out.eps = eps;
  out.identity = false;
  out.body = std::make_shared<TransformedBody>(std::move(body), out.scale, out.shift);
  return out;
}

}  // namespace polyapprox
