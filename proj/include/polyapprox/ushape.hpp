#pragma once

#include <memory>
#include <vector>

#include "polyapprox/bodies.hpp"

namespace polyapprox {

// Local coordinates of a U-shaped set in R^d: the first d-1 coordinates are
// the horizontal part z, coordinate d-1 is the vertical part y (up).
inline Vec lift(const Vec& z, double y, int d) {
  Vec p = z;
  p[d - 1] = y;
  return p;
}
inline Vec horizontal(const Vec& p, int d) {
  Vec z = p;
  z[d - 1] = 0.0;
  return z;
}

// Lower-boundary point together with one supporting hyperplane of finite
// slope: y = <slope, z> - offset.
struct AugmentedPoint {
  Vec point;
  Vec slope;
  double offset = 0.0;

  double plane_at(const Vec& z) const { return dot(slope, z) - offset; }
  // Upper halfspace y >= <slope, z> - offset as {<(slope, -1), x> <= offset}.
  Halfspace upper_halfspace(int d) const {
    return Halfspace::from_raw(lift(slope, -1.0, d), offset);
  }
};

// Convex set {(z, y) : z in domain, y >= height(z)}, clipped from above at
// `top` when materialized as a polytope.
class UShape {
 public:
  virtual ~UShape() = default;

  int dim() const { return dim_; }
  // (d-1)-dimensional domain.
  const Polytope& domain() const { return domain_; }
  double top() const { return top_; }
  bool in_domain(const Vec& z, double tol = kAbsTol) const { return domain_.contains(z, tol); }

  // Convex height function; +infinity outside the domain.
  virtual double height(const Vec& z) const = 0;
  // (z, height(z)) with a supporting hyperplane; throws outside the domain.
  virtual AugmentedPoint lower_point(const Vec& z) const = 0;
  // Materialized d-polytope: the set clipped at y <= top (top and bottom box
  // facets tagged kBoxTag). Exact for piecewise-linear shapes.
  virtual const Polytope& polytope() const = 0;
  // Vertices of the lower boundary (z, height(z)) of the materialized model.
  virtual std::vector<Vec> lower_vertices() const;

  bool contains(const Vec& p, double tol = kAbsTol) const;
  // Vertical gap y - height(z) (negative below the lower boundary).
  double gap(const Vec& p) const { return p[dim_ - 1] - height(p); }
  // (d-1)-measure of the lower boundary over the domain.
  virtual double lower_area() const;

 protected:
  UShape(int dim, Polytope domain, double top) : dim_(dim), domain_(std::move(domain)), top_(top) {}
  int dim_;
  Polytope domain_;
  double top_;
};

using UShapePtr = std::shared_ptr<const UShape>;

// Height is the upper envelope of finitely many planes y = <a_k, z> - b_k.
class PLUShape : public UShape {
 public:
  struct Plane {
    Vec slope;
    double offset;
  };

  // `top` must exceed the maximum of the envelope over the domain.
  PLUShape(int dim, std::vector<Plane> planes, Polytope domain, double top);

  double height(const Vec& z) const override;
  AugmentedPoint lower_point(const Vec& z) const override;
  const Polytope& polytope() const override { return poly_; }
  std::vector<Vec> lower_vertices() const override;
  double lower_area() const override;

  const std::vector<Plane>& planes() const { return planes_; }
  // Index of the lowest-index plane attaining the envelope at z.
  int active_plane(const Vec& z) const;

 private:
  std::vector<Plane> planes_;
  Polytope poly_;
};

// Envelope U-shape whose top clip sits a fixed margin above the highest
// domain vertex.
std::shared_ptr<const PLUShape> make_envelope(int dim, std::vector<PLUShape::Plane> planes, Polytope domain);

// Height |z|^2 / 2 on the box [-half, half]^{d-1}; the polytope model is a
// fine tangent-plane envelope.
class QuadraticUShape : public UShape {
 public:
  QuadraticUShape(int dim, double half, std::size_t model_planes_per_axis = 2001);
  double height(const Vec& z) const override;
  AugmentedPoint lower_point(const Vec& z) const override;
  const Polytope& polytope() const override { return model_->polytope(); }
  std::vector<Vec> lower_vertices() const override { return model_->lower_vertices(); }
  double lower_area() const override;
  const PLUShape& model() const { return *model_; }

 private:
  std::shared_ptr<const PLUShape> model_;
};

// Signed coordinate direction e_i, i in {±1, ..., ±d}.
struct SignedAxis {
  int axis = 0;  // 0-based coordinate
  int sign = 1;  // +1 or -1

  int index() const { return sign * (axis + 1); }
  // All 2d signed axes in increasing signed index: -d, ..., -1, +1, ..., +d.
  static std::vector<SignedAxis> all(int d);

  // Local frame: z = remaining coordinates in order, y = -sign * x[axis], so
  // e_i points straight down.
  Vec to_local(const Vec& x, int d) const;
  Vec to_global(const Vec& p, int d) const;
  // Horizontal local vector z embedded as a global vector (y = 0).
  Vec embed_horizontal(const Vec& z, int d) const;
  // Outward direction of the supporting halfspace with local slope a.
  Vec raw_direction(const Vec& slope, int d) const;
};

struct SupportSetOptions {
  // Domain fattening: the domain is the projection of K plus an alpha-ball.
  double alpha = 0.0;
  // Slope spacing for bodies without a polytope representation.
  double slope_step = 1.0 / 32.0;
  // Number of tangent lines of the outer domain polygon (d = 3).
  int domain_directions = 256;
};

// Support set of K for the signed axis, as a U-shape in the local frame.
// Polytopes: exactly the facets with outward normals in the cone of the axis
// (ties to the lower signed index) plus the support planes along the cone
// boundary. Other bodies: support planes on a slope grid of the cone.
struct SupportSet {
  SignedAxis axis;
  std::shared_ptr<const PLUShape> shape;
  // Global facet indices (polytope input) of the facets owned by this set.
  std::vector<int> owned_facets;
};

SupportSet support_set(const ConvexBody& k, SignedAxis axis, const SupportSetOptions& options = {});

// Same planes on the domain K-projection ⊕ alpha, clipped to [-1,1]^{d-1}.
std::shared_ptr<const PLUShape> restrict_support_set(const PLUShape& s, const ConvexBody& k,
                                                     SignedAxis axis, double alpha,
                                                     int domain_directions = 256);

// Owning signed axis of a facet normal (lowest signed index among maximizers).
SignedAxis owning_axis(const Vec& normal, int d);

}  // namespace polyapprox
