#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <ostream>

namespace polyapprox {

// Absolute tolerance for geometric predicates (inputs live in [-1,1]^d).
inline constexpr double kAbsTol = 1e-9;
// Relative tolerance used when comparing magnitudes.
inline constexpr double kRelTol = 1e-12;

// A point or direction in R^1..R^3. Unused trailing coordinates are zero, so
// inner products and norms are dimension agnostic; the owning object carries
// the dimension.
struct Vec {
  std::array<double, 3> c{0.0, 0.0, 0.0};

  constexpr Vec() = default;
  constexpr Vec(double x, double y = 0.0, double z = 0.0) : c{x, y, z} {}

  constexpr double& operator[](int i) { return c[static_cast<std::size_t>(i)]; }
  constexpr double operator[](int i) const { return c[static_cast<std::size_t>(i)]; }

  friend constexpr Vec operator+(const Vec& a, const Vec& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
  }
  friend constexpr Vec operator-(const Vec& a, const Vec& b) {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
  }
  friend constexpr Vec operator-(const Vec& a) { return {-a[0], -a[1], -a[2]}; }
  friend constexpr Vec operator*(double s, const Vec& a) {
    return {s * a[0], s * a[1], s * a[2]};
  }
  friend constexpr Vec operator*(const Vec& a, double s) { return s * a; }
  friend constexpr Vec operator/(const Vec& a, double s) {
    return {a[0] / s, a[1] / s, a[2] / s};
  }
  Vec& operator+=(const Vec& b) {
    for (int i = 0; i < 3; ++i) (*this)[i] += b[i];
    return *this;
  }
  Vec& operator-=(const Vec& b) {
    for (int i = 0; i < 3; ++i) (*this)[i] -= b[i];
    return *this;
  }
  Vec& operator*=(double s) {
    for (double& x : c) x *= s;
    return *this;
  }
  friend constexpr bool operator==(const Vec& a, const Vec& b) = default;

  friend std::ostream& operator<<(std::ostream& os, const Vec& v) {
    return os << '(' << v[0] << ", " << v[1] << ", " << v[2] << ')';
  }
};

inline constexpr double dot(const Vec& a, const Vec& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline constexpr Vec cross(const Vec& a, const Vec& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}
inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }
inline double dist(const Vec& a, const Vec& b) { return norm(a - b); }
inline Vec normalized(const Vec& a) {
  const double n = norm(a);
  return n > 0.0 ? a / n : a;
}

inline Vec unit_axis(int axis) {
  Vec e;
  e[axis] = 1.0;
  return e;
}

// True when all coordinates are finite.
inline bool finite(const Vec& a) {
  return std::isfinite(a[0]) && std::isfinite(a[1]) && std::isfinite(a[2]);
}

// Lexicographic ordering, used for canonical edge orientation.
inline bool lex_less(const Vec& a, const Vec& b) { return a.c < b.c; }

// Closed halfspace {x : <normal, x> <= offset}; normal has unit length.
struct Halfspace {
  Vec normal;
  double offset = 0.0;

  double signed_distance(const Vec& x) const { return dot(normal, x) - offset; }
  bool contains(const Vec& x, double tol = kAbsTol) const {
    return signed_distance(x) <= tol;
  }
  // Builds the halfspace <w, x> <= b from a raw (non-unit) normal.
  static Halfspace from_raw(const Vec& w, double b) {
    const double n = norm(w);
    return {w / n, b / n};
  }
};

// Axis-aligned box [lo, hi] in the first `dim` coordinates.
struct Box {
  Vec lo;
  Vec hi;

  static Box cube(int dim, double half) {
    Box b;
    for (int i = 0; i < dim; ++i) {
      b.lo[i] = -half;
      b.hi[i] = half;
    }
    return b;
  }
};

}  // namespace polyapprox
