#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "polyapprox/bodies.hpp"

namespace polyapprox {

// M = x + shrink * ((K - x) ∩ (x - K)) and its expansion M' = x + expansion * (M - x).
struct MRegion {
  Vec center;
  Polytope body;
  double shrink = 1.0;
  double expansion = 1.0;
  bool degenerate = false;

  Polytope expanded() const { return body.scaled(expansion, center); }
  double volume() const { return degenerate ? 0.0 : body.volume(); }
  double expanded_volume() const { return volume() * std::pow(expansion, body.dim()); }
};

// Exact for polytopes: each facet contributes itself and its reflection
// through x. Throws if x is outside K; x on the boundary gives a degenerate
// region of volume 0.
MRegion macbeath_region(const Polytope& k, const Vec& x, double shrink = 1.0, double expansion = 1.0);
// Oracle bodies: K and 2x - K are replaced by the outer polytopes of a
// direction net of `directions` support halfspaces.
MRegion macbeath_region(const ConvexBody& k, const Vec& x, double shrink = 1.0, double expansion = 1.0,
                        std::size_t directions = 2000);

// Caps K ∩ {<u, y> >= h_K(u) - depth} of a polytope, assembled from the
// facets incident to vertices inside the cap.
class CapOracle {
 public:
  explicit CapOracle(Polytope k);
  const Polytope& body() const { return k_; }

  // nullopt when the cap has empty interior (depth ~ 0).
  std::optional<Polytope> cap(const Vec& u, double depth) const;

  struct VolumeCap {
    Polytope cap;
    double depth = 0.0;
  };
  // Cap of volume v (|vol - v| <= tol) in direction u.
  VolumeCap cap_with_volume(const Vec& u, double v, double tol) const;

  // Macbeath region of a point x lying in the cap of direction u, computed
  // from the cap at twice the depth of x (which contains the region).
  MRegion macbeath(const Vec& x, const Vec& u, double shrink, double expansion) const;

 private:
  std::vector<Halfspace> relevant(const Vec& u, double threshold) const;
  Polytope k_;
  double volume_ = 0.0;
  std::vector<std::vector<int>> vertex_facets_;
};

struct CapCoverOptions {
  // Outward cap directions tried as candidate centers. Empty: a quasi-uniform
  // sphere net of 1024 (2D) / 2562 (3D) directions.
  std::vector<Vec> directions;
  double shrink = 0.1;
  double expansion = 70.0;
  // Relative tolerance of the cap-volume search, as a fraction of vol(K).
  double volume_tol = 1e-6;
};

struct CapCover {
  double v = 0.0;
  std::vector<MRegion> regions;
  // Direction index of the candidate cap that produced each region.
  std::vector<int> provenance;
  // Measured constants: c1 = min vol(M) / v, c2 = max vol(M') / v.
  double c1 = 0.0, c2 = 0.0;
  std::size_t candidates = 0;
};

// Greedy cover: for each direction the cap of volume v, its centroid, the
// shrunken Macbeath region there; regions are kept in order of decreasing
// volume (ties by direction index) when disjoint from every kept region.
CapCover cap_cover(const CapOracle& k, double v, const CapCoverOptions& options = {});
CapCover cap_cover(const Polytope& k, double v, const CapCoverOptions& options = {});

struct CoverCertificate {
  std::size_t caps = 0;
  std::size_t sandwiched = 0;  // caps with M ⊆ cap ⊆ M' for some region
  bool disjoint = true;        // all kept M pairwise disjoint
  double worst_volume_error = 0.0;
};
// Random caps of volume v in directions drawn from `directions` (or uniformly
// from the sphere when empty).
CoverCertificate certify_cover(const CapOracle& k, const CapCover& cover, std::size_t caps, std::uint64_t seed,
                               const std::vector<Vec>& directions = {});

// Enclosing ellipsoid {y : (y - c)^T A (y - c) <= 1} of a point set whose
// volume is within a factor (1 + tol)^{d/2} of the minimum (Khachiyan
// iterations); always contains every point.
struct Ellipsoid {
  Vec center;
  std::array<std::array<double, 3>, 3> shape{};  // A
  // Columns of a map L with A^{-1} = L L^T: y = center + L w maps the unit ball.
  std::array<std::array<double, 3>, 3> map{};
  bool contains(const Vec& y, double tol = 1e-12) const;
  double volume(int d) const;
};
Ellipsoid min_volume_ellipsoid(const std::vector<Vec>& points, int d, double tol = 1e-4);

// Net of a region: a grid with `per_axis` cell centers per axis in the
// coordinates where the enclosing ellipsoid, shrunk by sqrt(d), is the unit
// ball, restricted to
// the region (never empty: falls back to the ellipsoid center).
std::vector<Vec> region_net(const Polytope& region, int per_axis = 3);

}  // namespace polyapprox
