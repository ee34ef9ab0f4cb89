#include "polyapprox/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace polyapprox {

namespace {

constexpr double kMarginTol = 1e-9;

struct NetPass {
  double sup = -std::numeric_limits<double>::infinity();
  double two_sided = 0.0;
  double worst = std::numeric_limits<double>::infinity();
  std::size_t violations = 0;
};

NetPass net_pass(const ConvexBody& k, const Polytope& p, std::size_t n) {
  NetPass r;
  for (const Vec& u : direction_net(k.dim(), n)) {
    const double m = p.support(u) - k.support(u);
    r.sup = std::max(r.sup, m);
    r.two_sided = std::max(r.two_sided, std::abs(m));
    r.worst = std::min(r.worst, m);
    if (m < -kMarginTol) ++r.violations;
  }
  return r;
}

}  // namespace

ErrorReport hausdorff_outer(const ConvexBody& k, const Polytope& p, std::size_t net) {
  if (k.dim() != p.dim()) throw GeometryError("hausdorff_outer: dimension mismatch");
  ErrorReport r;
  r.worst_margin = std::numeric_limits<double>::infinity();
  for (const Halfspace& h : p.facets()) {
    const double m = h.offset - k.support(h.normal);
    r.worst_margin = std::min(r.worst_margin, m);
    if (m < -kMarginTol) ++r.violations;
  }
  std::size_t n = net > 0 ? net : (k.dim() == 2 ? 4096 : 10242);
  NetPass pass = net_pass(k, p, n);
  r.violations += pass.violations;
  r.worst_margin = std::min(r.worst_margin, pass.worst);
  if (!r.contained()) {
    r.hausdorff = pass.two_sided;
    r.net_hausdorff = pass.sup;
    r.net_size = n;
    return r;
  }
  double far = 0.0;
  for (const Vec& v : p.vertices()) far = std::max(far, k.distance(v));
  r.hausdorff = far;
  for (int round = 0; round < 2 && std::abs(far - pass.sup) > 1e-6; ++round) {
    n *= 2;
    pass = net_pass(k, p, n);
  }
  r.net_hausdorff = pass.sup;
  r.net_size = n;
  return r;
}

double surface_area(const ConvexBody& k) { return k.surface_area(); }

double surface_diameter(const ConvexBody& k) { return surface_diameter(k.dim(), k.surface_area()); }

double curvature_integral_2d(const ConvexBody& k) {
  if (k.dim() != 2) throw GeometryError("curvature_integral_2d: body is not planar");
  const auto pieces = k.boundary_pieces();
  if (!pieces) throw GeometryError("curvature_integral_2d: boundary is not made of segments and arcs");
  double total = 0.0;
  for (const ArcPiece& a : pieces->arcs) total += a.sweep() * std::sqrt(a.radius);
  return total;
}

}  // namespace polyapprox
