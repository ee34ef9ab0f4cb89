#include "polyapprox/macbeath.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>

namespace polyapprox {

namespace {

Polytope point_region(const Vec& x, int d) { return Polytope(d, {}, {}, {x}, {}); }

// Reflection of {<n, y> <= b} through x.
Halfspace reflect(const Halfspace& h, const Vec& x) { return {-1.0 * h.normal, h.offset - 2.0 * dot(h.normal, x)}; }

MRegion symmetric_part(std::vector<Halfspace> hs, const Vec& x, int d, double shrink, double expansion) {
  MRegion m{x, {}, shrink, expansion, false};
  const std::size_t n = hs.size();
  double room = std::numeric_limits<double>::infinity();
  for (std::size_t f = 0; f < n; ++f) {
    room = std::min(room, -hs[f].signed_distance(x));
    hs.push_back(reflect(hs[f], x));
  }
  if (room <= 1e-14) {
    m.degenerate = true;
    m.body = point_region(x, d);
    return m;
  }
  IntersectionOptions options;
  if (d == 3) options.interior = x;
  m.body = halfspace_intersection(d, hs, options).scaled(shrink, x);
  return m;
}

bool boxes_overlap(const Box& a, const Box& b, int d) {
  for (int i = 0; i < d; ++i)
    if (a.hi[i] < b.lo[i] - kAbsTol || b.hi[i] < a.lo[i] - kAbsTol) return false;
  return true;
}

// Interiors intersect: the line of centers, then an exact clip.
bool overlaps(const MRegion& a, const MRegion& b) {
  const Vec w = b.center - a.center;
  if (a.body.support(w) <= -b.body.support(-1.0 * w) + kAbsTol) return false;
  // Facets of one body with every vertex of the other outside separate them;
  // only facets cutting a's vertices take part in the clip.
  const auto screen = [](const Polytope& p, const Polytope& q, std::vector<Halfspace>* cuts) {
    for (const Halfspace& h : q.facets()) {
      std::size_t out = 0;
      for (const Vec& v : p.vertices()) out += h.signed_distance(v) > kAbsTol;
      if (out == p.vertices().size()) return false;
      if (out > 0 && cuts) cuts->push_back(h);
    }
    return true;
  };
  std::vector<Halfspace> cuts;
  if (!screen(b.body, a.body, nullptr) || !screen(a.body, b.body, &cuts)) return false;
  if (cuts.empty()) return true;
  const auto common = try_clip(a.body, cuts);
  return common && common->volume() > 1e-12 * std::min(a.volume(), b.volume());
}

Vec random_direction(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  for (;;) {
    Vec u{};
    for (int i = 0; i < d; ++i) u[i] = g(rng);
    if (norm(u) > 1e-6) return normalized(u);
  }
}

}  // namespace

MRegion macbeath_region(const Polytope& k, const Vec& x, double shrink, double expansion) {
  if (k.max_violation(x) > kAbsTol) throw GeometryError("macbeath_region: point outside the body");
  return symmetric_part(k.facets(), x, k.dim(), shrink, expansion);
}

MRegion macbeath_region(const ConvexBody& k, const Vec& x, double shrink, double expansion,
                        std::size_t directions) {
  if (const Polytope* p = k.as_polytope()) return macbeath_region(*p, x, shrink, expansion);
  if (!k.contains(x, kAbsTol)) throw GeometryError("macbeath_region: point outside the body");
  std::vector<Halfspace> hs;
  for (const Vec& u : direction_net(k.dim(), directions)) hs.push_back({u, k.support(u)});
  return symmetric_part(std::move(hs), x, k.dim(), shrink, expansion);
}

CapOracle::CapOracle(Polytope k) : k_(std::move(k)), volume_(k_.volume()), vertex_facets_(k_.vertices().size()) {
  for (std::size_t f = 0; f < k_.facet_vertices().size(); ++f)
    for (int v : k_.facet_vertices()[f]) vertex_facets_[v].push_back(static_cast<int>(f));
}

std::vector<Halfspace> CapOracle::relevant(const Vec& u, double threshold) const {
  std::vector<char> used(k_.facets().size(), 0);
  std::vector<Halfspace> hs;
  for (std::size_t v = 0; v < k_.vertices().size(); ++v) {
    if (dot(u, k_.vertices()[v]) < threshold - kAbsTol) continue;
    for (int f : vertex_facets_[v])
      if (!used[f]) {
        used[f] = 1;
        hs.push_back(k_.facets()[f]);
      }
  }
  return hs;
}

std::optional<Polytope> CapOracle::cap(const Vec& dir, double depth) const {
  if (depth <= 1e-14) return std::nullopt;
  const Vec u = normalized(dir);
  const double threshold = k_.support(u) - depth;
  const std::vector<Halfspace> cut{{-1.0 * u, -threshold}};
  return try_clip(k_, cut);
}

CapOracle::VolumeCap CapOracle::cap_with_volume(const Vec& dir, double v, double tol) const {
  const int d = k_.dim();
  const Vec u = normalized(dir);
  const double top = k_.support(u);
  const double width = top + k_.support(-1.0 * u);
  if (v >= volume_ - tol) return {k_, width};
  // Cap volume grows like depth^{(d+1)/2}; search on that power to keep the
  // function close to linear.
  const double power = 2.0 / (d + 1);
  const auto scaled = [&](double vol) { return std::pow(std::max(vol, 0.0), power); };
  const double target = scaled(v);

  double hi = std::min(width, width * scaled(v / volume_));
  std::optional<Polytope> big = cap(u, hi);
  while (!big || big->volume() < v) {
    if (hi >= width) return {k_, width};
    hi = std::min(width, 2.0 * hi);
    big = cap(u, hi);
  }
  const auto at = [&](double depth) -> std::optional<Polytope> {
    const std::vector<Halfspace> cut{{-1.0 * u, depth - top}};
    return try_clip(*big, cut);
  };
  double lo = 0.0, glo = -target, ghi = scaled(big->volume()) - target;
  VolumeCap best{*big, hi};
  double best_err = std::abs(big->volume() - v);
  int side = 0;
  for (int it = 0; it < 200 && best_err > tol; ++it) {
    double mid = ghi != glo ? hi - ghi * (hi - lo) / (ghi - glo) : 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) mid = 0.5 * (lo + hi);
    const auto c = at(mid);
    const double vol = c ? c->volume() : 0.0;
    if (c && std::abs(vol - v) < best_err) {
      best_err = std::abs(vol - v);
      best = {*c, mid};
    }
    const double g = scaled(vol) - target;
    // Illinois variant of regula falsi.
    if (g < 0.0) {
      lo = mid, glo = g;
      if (side == -1) ghi *= 0.5;
      side = -1;
    } else {
      hi = mid, ghi = g;
      if (side == 1) glo *= 0.5;
      side = 1;
    }
    if (hi - lo <= 1e-15 * width) break;
  }
  return best;
}

MRegion CapOracle::macbeath(const Vec& x, const Vec& dir, double shrink, double expansion) const {
  const Vec u = normalized(dir);
  const double depth = k_.support(u) - dot(u, x);
  if (depth < -kAbsTol) throw GeometryError("macbeath: point outside the body");
  const std::optional<Polytope> w = cap(u, 2.0 * depth);
  if (!w) return {x, point_region(x, k_.dim()), shrink, expansion, true};
  return symmetric_part(w->facets(), x, k_.dim(), shrink, expansion);
}

CapCover cap_cover(const CapOracle& k, double v, const CapCoverOptions& options) {
  const Polytope& body = k.body();
  const int d = body.dim();
  const double vol = body.volume();
  if (!(v > 0.0) || v > vol * (1.0 + 1e-12)) throw GeometryError("cap_cover: cap volume outside (0, vol(K)]");
  const std::vector<Vec> dirs =
      options.directions.empty() ? direction_net(d, d == 2 ? 1024 : 2562) : options.directions;

  struct Candidate {
    MRegion region;
    Box box;
    int index;
  };
  std::vector<Candidate> cands;
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    const auto vc = k.cap_with_volume(dirs[i], v, options.volume_tol * vol);
    MRegion m = k.macbeath(vc.cap.centroid(), dirs[i], options.shrink, options.expansion);
    if (m.degenerate) continue;
    const Box b = m.body.bounding_box();
    cands.push_back({std::move(m), b, static_cast<int>(i)});
  }
  std::vector<double> volumes(cands.size());
  for (std::size_t c = 0; c < cands.size(); ++c) volumes[c] = cands[c].region.volume();
  std::vector<std::size_t> order(cands.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return volumes[a] > volumes[b]; });

  CapCover out;
  out.v = v;
  out.candidates = dirs.size();
  std::vector<std::size_t> kept;
  for (std::size_t c : order) {
    bool free = true;
    for (std::size_t j : kept) {
      if (!boxes_overlap(cands[c].box, cands[j].box, d)) continue;
      if (overlaps(cands[c].region, cands[j].region)) {
        free = false;
        break;
      }
    }
    if (free) kept.push_back(c);
  }
  std::sort(kept.begin(), kept.end(), [&](std::size_t a, std::size_t b) { return cands[a].index < cands[b].index; });
  out.c1 = std::numeric_limits<double>::infinity();
  for (std::size_t c : kept) {
    out.c1 = std::min(out.c1, volumes[c] / v);
    out.c2 = std::max(out.c2, cands[c].region.expanded_volume() / v);
    out.regions.push_back(std::move(cands[c].region));
    out.provenance.push_back(cands[c].index);
  }
  if (kept.empty()) out.c1 = 0.0;
  return out;
}

CapCover cap_cover(const Polytope& k, double v, const CapCoverOptions& options) {
  return cap_cover(CapOracle(k), v, options);
}

CoverCertificate certify_cover(const CapOracle& k, const CapCover& cover, std::size_t caps, std::uint64_t seed,
                               const std::vector<Vec>& directions) {
  const int d = k.body().dim();
  const double vol = k.body().volume();
  std::mt19937_64 rng(seed);
  CoverCertificate cert;
  cert.caps = caps;
  std::vector<Polytope> outer;
  for (const MRegion& m : cover.regions) outer.push_back(m.expanded());
  for (std::size_t c = 0; c < caps; ++c) {
    const Vec u = directions.empty() ? random_direction(d, rng) : directions[rng() % directions.size()];
    const auto vc = k.cap_with_volume(u, cover.v, 1e-6 * vol);
    cert.worst_volume_error = std::max(cert.worst_volume_error, std::abs(vc.cap.volume() - cover.v) / vol);
    for (std::size_t r = 0; r < cover.regions.size(); ++r) {
      const auto inside = [](const std::vector<Vec>& pts, const Polytope& p) {
        return std::all_of(pts.begin(), pts.end(), [&](const Vec& x) { return p.contains(x, kAbsTol); });
      };
      if (inside(cover.regions[r].body.vertices(), vc.cap) && inside(vc.cap.vertices(), outer[r])) {
        ++cert.sandwiched;
        break;
      }
    }
  }
  std::vector<Box> boxes;
  for (const MRegion& m : cover.regions) boxes.push_back(m.body.bounding_box());
  for (std::size_t a = 0; a < cover.regions.size() && cert.disjoint; ++a)
    for (std::size_t b = a + 1; b < cover.regions.size(); ++b)
      if (boxes_overlap(boxes[a], boxes[b], d) && !separating_direction(cover.regions[a].body, cover.regions[b].body)) {
        cert.disjoint = false;
        break;
      }
  return cert;
}

bool Ellipsoid::contains(const Vec& y, double tol) const {
  const Vec r = y - center;
  double q = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) q += r[i] * shape[i][j] * r[j];
  return q <= 1.0 + tol;
}

double Ellipsoid::volume(int d) const {
  Eigen::MatrixXd a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = shape[i][j];
  return unit_ball_volume(d) / std::sqrt(a.determinant());
}

Ellipsoid min_volume_ellipsoid(const std::vector<Vec>& points, int d, double tol) {
  const int n = static_cast<int>(points.size());
  if (n <= d) throw GeometryError("min_volume_ellipsoid: too few points");
  Eigen::MatrixXd p(d, n), q(d + 1, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < d; ++i) p(i, j) = q(i, j) = points[j][i];
    q(d, j) = 1.0;
  }
  Eigen::VectorXd w = Eigen::VectorXd::Constant(n, 1.0 / n);
  for (int it = 0; it < 100000; ++it) {
    const Eigen::MatrixXd x = q * w.asDiagonal() * q.transpose();
    const Eigen::MatrixXd xq = x.ldlt().solve(q);
    Eigen::Index j;
    const double mj = q.cwiseProduct(xq).colwise().sum().maxCoeff(&j);
    if (mj <= (1.0 + tol) * (d + 1)) break;
    const double step = (mj - d - 1) / ((d + 1) * (mj - 1));
    w *= 1.0 - step;
    w(j) += step;
  }
  const Eigen::VectorXd c = p * w;
  const Eigen::MatrixXd cov = p * w.asDiagonal() * p.transpose() - c * c.transpose();
  Eigen::MatrixXd inv = d * cov;
  // Grow to contain every point exactly.
  const Eigen::MatrixXd centered = p.colwise() - c;
  const double reach = centered.cwiseProduct(inv.ldlt().solve(centered)).colwise().sum().maxCoeff();
  if (reach > 1.0) inv *= reach;
  const Eigen::MatrixXd a = inv.inverse();
  const Eigen::MatrixXd l = inv.llt().matrixL();
  Ellipsoid e;
  for (int i = 0; i < d; ++i) {
    e.center[i] = c(i);
    for (int j = 0; j < d; ++j) {
      e.shape[i][j] = a(i, j);
      e.map[i][j] = l(i, j);
    }
  }
  return e;
}

std::vector<Vec> region_net(const Polytope& region, int per_axis) {
  const int d = region.dim();
  if (region.vertices().size() <= static_cast<std::size_t>(d)) return {region.vertex_mean()};
  const Ellipsoid e = min_volume_ellipsoid(region.vertices(), d, 1e-2);
  std::vector<Vec> out;
  int total = 1;
  for (int i = 0; i < d; ++i) total *= per_axis;
  for (int idx = 0; idx < total; ++idx) {
    Vec w{};
    for (int i = 0, r = idx; i < d; ++i, r /= per_axis) w[i] = -1.0 + (2.0 * (r % per_axis) + 1.0) / per_axis;
    // Symmetric regions contain the enclosing ellipsoid shrunk by sqrt(d).
    w = w / std::sqrt(static_cast<double>(d));
    Vec y = e.center;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) y[i] += e.map[i][j] * w[j];
    if (region.contains(y, 0.0)) out.push_back(y);
  }
  if (out.empty()) out.push_back(region.centroid());
  return out;
}

}  // namespace polyapprox
