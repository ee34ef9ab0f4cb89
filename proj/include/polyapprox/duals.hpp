#pragma once

#include "polyapprox/ushape.hpp"

namespace polyapprox {

// alpha * P° = {x : <x, y> <= alpha for all y in P}, exact: each vertex v of P
// becomes the halfspace <v, x> <= alpha. Throws if the origin is not interior.
Polytope polar(const Polytope& p, double alpha = 1.0);

// Polar of an oracle body about the origin. Membership is exact
// (h_K(x) <= alpha); the support value is alpha times the gauge of K.
class PolarBody : public ConvexBody {
 public:
  PolarBody(BodyPtr base, double alpha = 1.0);
  int dim() const override { return base_->dim(); }
  Vec support_point(const Vec& u) const override;
  double support(const Vec& u) const override;
  bool contains(const Vec& x, double tol) const override { return base_->support(x) <= alpha_ + tol; }
  Vec nearest_point(const Vec& x) const override;
  double volume() const override;
  double surface_area() const override;

 private:
  // Largest r with r * u in K (u unit).
  double radial(const Vec& u) const;
  BodyPtr base_;
  double alpha_;
};

BodyPtr polar(BodyPtr k, double alpha = 1.0);

// Volume of alpha K° by radial quadrature of (alpha / h_K(u))^d.
double polar_volume(const ConvexBody& k, double alpha = 1.0);

// vol(K) * vol(K°); exact for polytopes.
double mahler(const ConvexBody& k);

// Projective duality in local (z, y) coordinates.
// Point p -> hyperplane y = <p_z, x> - p_y.
PLUShape::Plane dual_plane(const Vec& p, int d);
// Hyperplane y = <a, x> - b -> point (a, b).
Vec dual_point(const Vec& slope, double offset, int d);
// Signed vertical offset from point p up to the hyperplane: plane(p_z) - p_y.
double vertical_offset(const Vec& p, const Vec& slope, double offset, int d);

// (q, h) -> (h*, q*). Round trip is the identity.
AugmentedPoint correspond(const AugmentedPoint& q, int d);

// U* restricted to slopes in [-clip_half, clip_half]^{d-1}: the envelope of the
// duals of the lower-boundary vertices of U. The quadratic U-shape maps to
// itself.
UShapePtr projective_dual(const UShape& u, double clip_half = 4.0);

}  // namespace polyapprox
