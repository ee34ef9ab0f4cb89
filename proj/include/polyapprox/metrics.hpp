#pragma once

#include "polyapprox/bodies.hpp"

namespace polyapprox {

struct ErrorReport {
  double hausdorff = 0.0;
  // Facets of P (or net directions) with support(P) < support(K) - 1e-9.
  std::size_t violations = 0;
  // min over facets and net directions of support(P, u) - support(K, u).
  double worst_margin = 0.0;
  std::size_t net_size = 0;
  // sup over the net of support(P, u) - support(K, u); a lower bound.
  double net_hausdorff = 0.0;
  bool contained() const { return violations == 0; }
};

// Outer Hausdorff distance. With K ⊆ P it is the largest distance from a
// vertex of P to K; otherwise the two-sided support sup over the net. The net
// starts at 4096 (2D) / 10242 (3D) directions and is doubled (at most twice)
// while the two values differ by more than 1e-6.
ErrorReport hausdorff_outer(const ConvexBody& k, const Polytope& p, std::size_t net = 0);

double surface_area(const ConvexBody& k);
// Diameter of the ball with the same boundary measure as K.
double surface_diameter(const ConvexBody& k);

// Sum over boundary arcs of angle * sqrt(radius); segments contribute 0.
// Throws GeometryError for bodies without a segment/arc boundary.
double curvature_integral_2d(const ConvexBody& k);

}  // namespace polyapprox
