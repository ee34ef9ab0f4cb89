#pragma once

#include "polyapprox/duals.hpp"

namespace polyapprox {

// Projected base of an eps-cap: {z in domain : height(z) <= plane_q(z) + eps}.
struct Cap {
  AugmentedPoint q;
  double eps = 0.0;
  Polytope base;  // (d-1)-dimensional; a single point when eps = 0 on a strictly convex U
  bool degenerate = false;
  // The base reaches the domain boundary of U (the cap is cut off by a wall).
  bool touches_domain = false;

  bool contains(const Vec& z, double tol = kAbsTol) const;
};

// Projected base of an eps-dual cap: points z with (z, plane_q(z)) in
// conv(U ∪ {q - eps}).
struct DualCap {
  AugmentedPoint q;
  double eps = 0.0;
  Polytope base;
  bool degenerate = false;
  bool touches_domain = false;

  Vec apex(int d) const { return q.point - eps * unit_axis(d - 1); }
  // Augmented point p belongs to the dual cap iff q - eps lies in the closed
  // lower halfspace of its hyperplane.
  bool member(const AugmentedPoint& p, int d, double tol = kAbsTol) const;
};

// Exact for piecewise-linear U; radial root finding (2 rays in the plane,
// `rays` directions in space) otherwise.
Cap cap(const UShape& u, const AugmentedPoint& q, double eps, int rays = 256);
DualCap dual_cap(const UShape& u, const AugmentedPoint& q, double eps, int rays = 256);

// Gap of a lower-boundary point above the hyperplane of q.
inline double gap_above(const AugmentedPoint& q, const Vec& z, double y) { return y - q.plane_at(z); }

// T = conv(U ∪ {q - eps}) ∩ H^- (H^- the closed lower halfspace of h(q)) and
// T' = 2T about q - eps; `slab` is U ∩ (H^- + eps), the region under h(q) + eps.
struct CapRatioBodies {
  Polytope t;
  Polytope t_prime;
  Polytope slab;
  Vec apex;
};
CapRatioBodies cap_ratio_bodies(const UShape& u, const AugmentedPoint& q, double eps);

struct CapRatioReport {
  std::size_t samples = 0;
  std::size_t violations = 0;  // claim (i), both inclusions
  std::size_t projection_misses = 0;  // claim (iv)
  double volume_ratio = 0.0;  // vol(slab) / vol(T)
  double cone_constant = 0.0;  // vol(T) / (eps * area of the dual-cap base)
};
// Samples points of T + eps and of the slab and checks
// T + eps ⊆ slab ⊆ T' and that T + eps projects into the dual-cap base.
CapRatioReport check_cap_ratio(const UShape& u, const AugmentedPoint& q, double eps, std::size_t samples,
                               std::uint64_t seed);

struct Equivalence {
  bool in_cap = false;       // p' in the eps-cap of p = q* in U*
  bool in_dual_cap = false;  // q' = (p')* in the eps-dual cap of q in U
  bool agree() const { return in_cap == in_dual_cap; }
};
// Cap membership is decided from the base of the cap in U*; dual-cap
// membership from the defining halfspace condition on U.
Equivalence check_equivalence(const UShape& u_star, const AugmentedPoint& q, double eps,
                              const AugmentedPoint& p_prime);

// Support-function sup distance over a direction net between D̄_q↓ - q↓ and
// eps (C̄_p↓ - p↓)°, with C̄_p the eps-cap base of p = q* in U*.
double base_polarity_residual(const UShape& u, const UShape& u_star, const AugmentedPoint& q, double eps,
                              int directions = 720);

// Radius of the largest ball about z contained in a (d-1)-polytope.
double inner_radius(const Polytope& region, const Vec& z);

}  // namespace polyapprox
