#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "polyapprox/polytope.hpp"

namespace polyapprox {

// Boundary of a 2D body made of straight segments and circular arcs.
struct SegmentPiece {
  Vec a, b;
};
struct ArcPiece {
  Vec center;
  double radius = 0.0;
  double angle_from = 0.0;  // counter-clockwise from angle_from to angle_to
  double angle_to = 0.0;
  double sweep() const { return angle_to - angle_from; }
};
struct BoundaryPieces {
  std::vector<SegmentPiece> segments;
  std::vector<ArcPiece> arcs;
};

// Oracle view of a compact convex body in R^2 or R^3.
class ConvexBody {
 public:
  virtual ~ConvexBody() = default;

  virtual int dim() const = 0;
  // A maximizer of <u, x> over the body (u need not be unit). Deterministic:
  // at non-smooth points polytopes return their lowest-index vertex.
  virtual Vec support_point(const Vec& u) const = 0;
  // max <u, x>; positively homogeneous in u.
  virtual double support(const Vec& u) const { return dot(u, support_point(u)); }
  virtual bool contains(const Vec& x, double tol = kAbsTol) const = 0;
  virtual Vec nearest_point(const Vec& x) const = 0;
  double distance(const Vec& x) const { return dist(x, nearest_point(x)); }

  virtual double volume() const = 0;
  // Perimeter in 2D, surface area in 3D.
  virtual double surface_area() const = 0;
  // Integral of mean curvature (3D), equal to the integral of the support
  // function over the unit sphere. Numerical quadrature unless overridden.
  virtual double mean_curvature_integral() const;
  virtual double diameter() const;
  virtual double min_width() const;
  virtual Box bounding_box() const;

  virtual const Polytope* as_polytope() const { return nullptr; }
  virtual std::optional<BoundaryPieces> boundary_pieces() const { return std::nullopt; }
};

using BodyPtr = std::shared_ptr<const ConvexBody>;

class PolytopeBody : public ConvexBody {
 public:
  explicit PolytopeBody(Polytope p);
  int dim() const override { return poly_.dim(); }
  Vec support_point(const Vec& u) const override;
  double support(const Vec& u) const override { return poly_.support(u); }
  bool contains(const Vec& x, double tol) const override { return poly_.contains(x, tol); }
  Vec nearest_point(const Vec& x) const override { return poly_.nearest_point(x); }
  double volume() const override { return poly_.volume(); }
  double surface_area() const override { return poly_.surface_area(); }
  double mean_curvature_integral() const override;
  double diameter() const override { return poly_.diameter(); }
  double min_width() const override { return poly_.min_width(); }
  Box bounding_box() const override { return poly_.bounding_box(); }
  const Polytope* as_polytope() const override { return &poly_; }
  std::optional<BoundaryPieces> boundary_pieces() const override;

 private:
  Polytope poly_;
};

// Axis-aligned ellipsoid; a ball when all radii agree.
class EllipsoidBody : public ConvexBody {
 public:
  EllipsoidBody(int dim, Vec center, Vec radii);
  int dim() const override { return dim_; }
  Vec support_point(const Vec& u) const override;
  bool contains(const Vec& x, double tol) const override;
  Vec nearest_point(const Vec& x) const override;
  double volume() const override;
  double surface_area() const override;
  double mean_curvature_integral() const override;
  double diameter() const override;
  double min_width() const override;
  std::optional<BoundaryPieces> boundary_pieces() const override;
  bool is_ball() const;
  const Vec& center() const { return center_; }
  const Vec& radii() const { return radii_; }

 private:
  int dim_;
  Vec center_;
  Vec radii_;
};

// Line segment [a, b]; a degenerate body used as a base for fattening.
class SegmentBody : public ConvexBody {
 public:
  SegmentBody(int dim, Vec a, Vec b) : dim_(dim), a_(a), b_(b) {}
  int dim() const override { return dim_; }
  Vec support_point(const Vec& u) const override { return dot(u, b_) > dot(u, a_) ? b_ : a_; }
  bool contains(const Vec& x, double tol) const override { return distance(x) <= tol; }
  Vec nearest_point(const Vec& x) const override;
  double volume() const override { return 0.0; }
  // Boundary measure of the degenerate body: both sides of the segment in 2D.
  double surface_area() const override { return dim_ == 2 ? 2.0 * dist(a_, b_) : 0.0; }
  double mean_curvature_integral() const override;
  double diameter() const override { return dist(a_, b_); }
  double min_width() const override { return 0.0; }
  std::optional<BoundaryPieces> boundary_pieces() const override;

 private:
  int dim_;
  Vec a_, b_;
};

// Minkowski sum of a body with a ball of radius r.
class FattenedBody : public ConvexBody {
 public:
  FattenedBody(BodyPtr base, double r);
  int dim() const override { return base_->dim(); }
  Vec support_point(const Vec& u) const override;
  double support(const Vec& u) const override;
  bool contains(const Vec& x, double tol) const override;
  Vec nearest_point(const Vec& x) const override;
  double volume() const override;
  double surface_area() const override;
  double mean_curvature_integral() const override;
  double diameter() const override { return base_->diameter() + 2.0 * r_; }
  double min_width() const override { return base_->min_width() + 2.0 * r_; }
  std::optional<BoundaryPieces> boundary_pieces() const override;
  const ConvexBody& base() const { return *base_; }
  double radius() const { return r_; }

 private:
  BodyPtr base_;
  double r_;
};

// Image of a body under x -> scale * x + shift (scale > 0).
class TransformedBody : public ConvexBody {
 public:
  TransformedBody(BodyPtr base, double scale, Vec shift);
  int dim() const override { return base_->dim(); }
  Vec support_point(const Vec& u) const override;
  double support(const Vec& u) const override;
  bool contains(const Vec& x, double tol) const override;
  Vec nearest_point(const Vec& x) const override;
  double volume() const override;
  double surface_area() const override;
  double mean_curvature_integral() const override;
  double diameter() const override { return scale_ * base_->diameter(); }
  double min_width() const override { return scale_ * base_->min_width(); }
  const Polytope* as_polytope() const override { return poly_ ? &*poly_ : nullptr; }
  std::optional<BoundaryPieces> boundary_pieces() const override;
  Vec to_base(const Vec& x) const { return (x - shift_) / scale_; }
  Vec from_base(const Vec& x) const { return scale_ * x + shift_; }

 private:
  BodyPtr base_;
  double scale_;
  Vec shift_;
  std::optional<Polytope> poly_;
};

// Body description as read from JSON:
// {"kind": "...", "d": 2|3, "params": {...}, "seed": int}.
struct BodySpec {
  std::string kind;
  int d = 2;
  nlohmann::json params = nlohmann::json::object();
  std::uint64_t seed = 0;

  static BodySpec from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  // Stable 16-hex-digit hash of the canonical JSON form.
  std::string hash() const;
};

// Builds the body; throws std::invalid_argument on invalid parameters.
BodyPtr make_body(const BodySpec& spec);

BodyPtr fatten(BodyPtr body, double r);

// Result of scaling a body into [-(1-2eps), 1-2eps]^d.
struct Normalized {
  BodyPtr body;
  double scale = 1.0;  // normalized = scale * original + shift
  Vec shift;
  double eps = 0.0;
  bool identity = true;
};

// eps is the tolerance in normalized units; distances measured on the
// normalized body map back to the original by dividing by `scale`.
Normalized normalize(BodyPtr body, double eps);

// Interior point used as the polar / Macbeath reference: the mean of the
// support points in the 2d coordinate directions.
Vec interior_point(const ConvexBody& body);

// Boundary measure and unit-ball volume helpers.
double unit_ball_volume(int d);
// Diameter of the ball with the given (d-1)-dimensional boundary measure.
double surface_diameter(int d, double area);

// Quasi-uniform unit directions: n equally spaced angles (2D) or a Fibonacci
// sphere (3D).
std::vector<Vec> direction_net(int d, std::size_t n);

}  // namespace polyapprox
