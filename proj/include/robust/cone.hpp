#pragma once

#include "robust/forms.hpp"

#include <string>
#include <vector>

namespace robust::affine {

/// Convex chart domain in R^p: the open unit ball, or an intersection of
/// half-spaces A x < b.
struct Domain {
  enum class Kind { Ball, Polytope };
  Kind kind = Kind::Ball;
  int p = 0;
  Mat A;  // rows: outward normals (Polytope)
  Vec b;

  bool contains(const Vec& x, double margin = 0.0) const;
  /// Smallest t > 0 with x + t d on the boundary (x inside); +inf if none.
  double exit_param(const Vec& x, const Vec& d) const;
  /// Defining function: positive inside, vanishing linearly on each face.
  std::vector<double> faces(const Vec& x) const;
  /// Vertices (Polytope).
  std::vector<Vec> vertices() const;
  /// Axis-aligned bounding box.
  std::pair<Vec, Vec> bbox() const;
};

/// Open convex cone in R^{p+1}: the image G C0 of a standard cone C0, where C0 is
/// the round cone {z_last > |z'|} or the polyhedral cone spanned by the given rays.
class ConvexCone {
 public:
  enum class Kind { Round, Polytope };

  /// Round cone around `axis` with the given half-angle.  Throws if it contains a line.
  static ConvexCone round(const Vec& axis, double half_angle);
  /// Polyhedral cone spanned by extreme rays (any order).  Throws if it contains a
  /// line or has empty interior.
  static ConvexCone polytope(const std::vector<Vec>& rays);
  /// Positive quadrant / octant of R^{p+1}.
  static ConvexCone orthant(int dim);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  int p() const { return dim_ - 1; }
  const std::vector<Vec>& rays() const { return rays_; }
  const Mat& transform() const { return G_; }  // Round: maps the standard round cone onto this one
  const Vec& axis() const { return axis_; }
  double half_angle() const { return angle_; }

  /// g C for g in GL.
  ConvexCone transformed(const Mat& g) const;

  /// Strict interior membership.
  bool contains(const Vec& z) const;
  /// Facet normals (Polytope), oriented to be nonnegative on the cone.
  const std::vector<Vec>& facet_normals() const { return normals_; }

  /// Chart matrix L in SL(p+1): the cone is {t L (x,1) : t > 0, x in chart_domain()}.
  Mat chart() const;
  Domain chart_domain() const;
  /// Exponent s with X = w^{-s} L (x,1) used by the sphere solver.
  double exponent() const;

 private:
  Kind kind_ = Kind::Polytope;
  int dim_ = 0;
  Vec axis_;
  double angle_ = 0.0;
  Mat G_;
  std::vector<Vec> rays_;
  std::vector<Vec> normals_;
  void build_facets();
};

/// Boundary rays of the sector C cap Span{x, y}: in the orthonormal basis (e1, e2) with
/// e1 = x/|x| and y in the upper half-plane, the sector is phi in (phi_a, phi_b).
struct Sector {
  Vec e1, e2;
  double phi_a, phi_b, phi_y;
};
Sector sector(const ConvexCone& C, const Vec& x, const Vec& y);

/// log of the cross-ratio B(a, x, y, b); 0 for parallel x, y.
/// Throws std::domain_error("outside cone") when x or y is not interior.
double hilbert_distance(const ConvexCone& C, const Vec& x, const Vec& y);

}  // namespace robust::affine
