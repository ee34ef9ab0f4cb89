#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "polyapprox/vec.hpp"

namespace polyapprox {

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Source tag of facets contributed by a caller-supplied bounding box.
inline constexpr int kBoxTag = -1;

// Convex polytope in R^1, R^2 or R^3 carrying both an irredundant
// H-representation and the matching V-representation.
//
// facet_vertices[f] lists the vertices on facet f: a single vertex in 1D, the
// two endpoints in 2D (in counter-clockwise polygon order), and a loop ordered
// counter-clockwise when seen from outside in 3D. facet_source[f] is the index
// of the input halfspace that produced the facet, or kBoxTag.
class Polytope {
 public:
  Polytope() = default;
  Polytope(int dim, std::vector<Halfspace> facets, std::vector<int> facet_source,
           std::vector<Vec> vertices, std::vector<std::vector<int>> facet_vertices);

  int dim() const { return dim_; }
  bool empty() const { return vertices_.empty(); }
  const std::vector<Halfspace>& facets() const { return facets_; }
  const std::vector<int>& facet_source() const { return facet_source_; }
  const std::vector<Vec>& vertices() const { return vertices_; }
  const std::vector<std::vector<int>>& facet_vertices() const { return facet_vertices_; }

  // Number of facets, optionally ignoring facets contributed by a bounding box.
  std::size_t facet_count(bool include_box = false) const;

  double support(const Vec& u) const;
  // Lowest-index maximizing vertex.
  int support_vertex(const Vec& u) const;
  bool contains(const Vec& x, double tol = kAbsTol) const;
  // Largest violation max_f <n_f, x> - b_f (negative inside).
  double max_violation(const Vec& x) const;

  double volume() const;
  Vec centroid() const;
  Vec vertex_mean() const;
  Box bounding_box() const;
  double diameter() const;
  // (d-1)-dimensional boundary measure: perimeter in 2D, surface area in 3D,
  // 2 in 1D (two endpoints).
  double surface_area() const;
  // Euclidean nearest point; returns x itself when x is inside.
  Vec nearest_point(const Vec& x) const;

  // Minimum width over facet normals and (3D) edge-pair directions.
  double min_width() const;
  // Undirected edges (3D: pairs of vertex indices; 2D: polygon edges).
  std::vector<std::pair<int, int>> edges() const;

  Polytope translated(const Vec& t) const;
  // Uniform scaling about `center`.
  Polytope scaled(double s, const Vec& center = Vec{}) const;
  // Point reflection about `center`.
  Polytope reflected(const Vec& center) const;

  // Maximum violation of any vertex against any facet; the H/V consistency
  // check used by tests.
  double consistency_residual() const;

 private:
  int dim_ = 0;
  std::vector<Halfspace> facets_;
  std::vector<int> facet_source_;
  std::vector<Vec> vertices_;
  std::vector<std::vector<int>> facet_vertices_;
};

struct IntersectionOptions {
  // Bounding box added to the input; its facets are tagged kBoxTag.
  std::optional<Box> bounds;
  // A strictly interior point. When present, 3D inputs are intersected via a
  // dual convex hull instead of incremental clipping.
  std::optional<Vec> interior;
};

// Intersection of closed halfspaces with redundant halfspaces removed.
// Throws GeometryError when the result is unbounded (no bounds supplied) or
// has empty interior.
Polytope halfspace_intersection(int dim, std::span<const Halfspace> halfspaces,
                                const IntersectionOptions& options = {});

// Intersection of `p` with additional halfspaces (tags continue after the
// existing facet sources unless `tag_base` is given).
Polytope clip(const Polytope& p, std::span<const Halfspace> halfspaces, int tag_base = -2);

// Same as clip(), but returns nullopt instead of throwing when the result has
// empty interior.
std::optional<Polytope> try_clip(const Polytope& p, std::span<const Halfspace> halfspaces,
                                 int tag_base = -2);

// Convex hull of a full-dimensional point set.
Polytope convex_hull(int dim, std::span<const Vec> points);

// Box as a polytope; facets tagged kBoxTag.
Polytope box_polytope(int dim, const Box& box);

// Checks that no two polytopes overlap in their interiors by searching for a
// separating direction among facet normals (and 3D edge cross products).
// Returns the separating direction, or nullopt if none separates.
std::optional<Vec> separating_direction(const Polytope& a, const Polytope& b,
                                        double tol = kAbsTol);

namespace detail {
// 2D convex hull (monotone chain); returns counter-clockwise indices.
std::vector<int> hull_2d(std::span<const Vec> pts, double tol = 0.0);
// 3D convex hull returning triangles (outward orientation) over point indices.
std::vector<std::array<int, 3>> hull_3d(std::span<const Vec> pts, double tol);
}  // namespace detail

}  // namespace polyapprox
