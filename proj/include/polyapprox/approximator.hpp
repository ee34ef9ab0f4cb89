#pragma once

#include <string>
#include <vector>

#include "polyapprox/caps.hpp"
#include "polyapprox/macbeath.hpp"
#include "polyapprox/metrics.hpp"

namespace polyapprox {

struct ApproxOptions {
  // v = cover_constant * eps * t for the large regime, and
  // v = cover_constant * eps * (small_constant * eps^{d-1} / t) for the small one.
  double cover_constant = 1.0;
  double small_constant = 64.0;
  double shrink = 0.5;
  double expansion = 5.0;
  int net_per_axis = 3;
  // Slope spacing of candidate cap directions; 0 means 2 sqrt(eps).
  double candidate_step = 0.0;
  // Slope spacing of the support-set models of non-polytope bodies; 0 means
  // 2 sqrt(eps).
  double model_step = 0.0;
  // Verification rounds; each failed round densifies nets and candidates.
  int max_rounds = 3;
  // Half-width of the slope box kept by the small regime.
  double slope_ball = 1.0;
  // When false, an unverified last round is returned instead of thrown.
  bool strict = true;
};

// Stabbing points of one support set.
struct StabbingSet {
  SignedAxis axis;
  std::vector<AugmentedPoint> large;  // Q_i
  std::vector<AugmentedPoint> small;  // Q'_i
  double t = 0.0;
  double eps = 0.0;
};

// Points on the lower boundary of K_i from a cap cover of K_i at volume
// c * eps * t: nets of the expanded regions within vertical distance eps of
// the lower boundary, projected down.
std::vector<AugmentedPoint> stab_large(const UShape& ki, double eps, double t, const ApproxOptions& options = {});
// Points on the lower boundary of K_i pulled back from a cap cover of the
// projective dual of K_i.
std::vector<AugmentedPoint> stab_small(const UShape& ki, double eps, double t, const ApproxOptions& options = {});

struct ApproxDiagnostics {
  double t = 0.0;
  std::size_t large_points = 0;
  std::size_t small_points = 0;
  // Distinct supporting halfspaces before redundancy elimination.
  std::size_t halfspaces = 0;
  std::size_t box_facets = 0;
  int rounds = 1;
  bool verified = false;
  // Measured constants |Q| t / area(K) and |Q'| eps^{d-1} / t.
  double large_constant = 0.0;
  double small_constant = 0.0;
  ErrorReport error;
};

struct Approximation {
  Polytope polytope;
  std::size_t facets = 0;  // excluding [-1,1]^d box facets
  std::vector<StabbingSet> stabbing;
  ApproxDiagnostics diagnostics;
};

// Requires K inside [-1,1]^d with min_width >= eps. Throws GeometryError when
// verification still fails after the last densification round (unless
// options.strict is false).
Approximation approximate_area_sensitive(const ConvexBody& k, double eps, const ApproxOptions& options = {});

// Supporting halfspaces at the nearest points of a sqrt(eps * diameter)-net
// on the sphere of radius 2 * diameter about the body; the net is refined
// (at most three times) until verification passes.
Approximation approximate_dudley(const ConvexBody& k, double eps, bool strict = true);

enum class Algorithm { dudley, area_sensitive };
Algorithm parse_algorithm(const std::string& name);
std::string algorithm_name(Algorithm a);
Approximation approximate(Algorithm a, const ConvexBody& k, double eps, bool strict = true);

}  // namespace polyapprox
