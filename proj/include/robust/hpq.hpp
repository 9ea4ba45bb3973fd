#pragma once

#include "robust/forms.hpp"
#include "robust/lattice.hpp"

#include <utility>
#include <vector>

namespace robust::hpq {

using forms::QuadraticForm;

/// Orthogonal splitting R^{p,q} = E + F.  Columns of E (F) are Euclidean-orthonormal
/// and positive (negative) for Q.
struct PoincareModel {
  QuadraticForm Q;
  Mat E;
  Mat F;

  /// E = first p coordinate vectors, F = the remaining q + 1.
  static PoincareModel standard(int p, int q);
  int p() const { return Q.p(); }
  int q() const { return Q.q(); }
  int dim() const { return Q.dim(); }
};

/// Pi(u, v) = 2u/(1-|u|^2) + (1+|u|^2)/(1-|u|^2) v.
Vec poincare_embed(const Vec& u, const Vec& v, const PoincareModel& model);

/// Inverse of poincare_embed.  Throws if <z,z> differs from -1 by more than tol.
std::pair<Vec, Vec> poincare_project(const Vec& z, const PoincareModel& model, double tol = 1e-8);
/// Radial rescaling of a timelike vector onto H^{p,q}, for points carried through badly
/// conditioned products.  Throws std::domain_error unless <z,z> < 0.
Vec onto_hyperboloid(const Vec& z, const PoincareModel& model);

/// Spherical metric of the disk factor.
double spherical_dist_disk(const Vec& u, const Vec& up);
/// Spherical metric of S^q with antipodal points identified.
double spherical_dist_sphere(const Vec& v, const Vec& vp);

/// arccosh(max(|<o,x>|, 1)) for o, x on the quadric, evaluated in half-angle form near the diagonal.
double pseudo_distance(const Vec& o, const Vec& x, const QuadraticForm& Q);

/// Grid sample of u : D^p -> S^q over the disk |x| <= r0, pushed forward by an
/// ambient transform T in SO(p,q+1): the sampled points are T Pi(x, u(x)).
class SpacelikeGraph {
 public:
  SpacelikeGraph(PoincareModel model, double r0, int n);

  const PoincareModel& model() const { return model_; }
  const Lattice& lattice() const { return lat_; }
  double r0() const { return r0_; }
  int n() const { return lat_.nx(); }

  const Vec& value(int k) const { return values_[k]; }
  void set_value(int k, const Vec& v);  // normalizes v
  const std::vector<Vec>& values() const { return values_; }

  /// Remove a node from the sampled chart.
  void drop_node(int k);

  const Mat& transform() const { return T_; }
  void set_transform(const Mat& T) { T_ = T; }

  /// Ring nodes: valid nodes missing some neighbour.  They carry the boundary trace.
  bool is_boundary(int k) const { return lat_.valid(k) && !lat_.interior(k); }
  int center() const { return lat_.center(); }

  Vec point(int k) const;
  std::vector<Vec> points() const;

 private:
  PoincareModel model_;
  double r0_;
  Lattice lat_;
  std::vector<Vec> values_;
  Mat T_;
};

/// T M for T in SO(p,q+1).
SpacelikeGraph transformed(const SpacelikeGraph& M, const Mat& g);

/// u = v0 everywhere (totally geodesic H^p).
SpacelikeGraph totally_geodesic(int p, int q, int n, double r0, const Vec& v0);
/// Totally geodesic H^2 in H^{2,1} boosted by b in the (e1, f2) plane, sampled as a graph.
SpacelikeGraph boosted_totally_geodesic(int n, double r0, double b);
/// Graph in H^{2,1} whose u is a spherical isometry along the ray through e1.
SpacelikeGraph isometric_ray_graph(int n, double r0);

double lipschitz_constant(const SpacelikeGraph& M);

/// Induced metric at a valid node; throws std::domain_error("not spacelike here")
/// unless positive definite.
Mat induced_metric(const SpacelikeGraph& M, int k);
/// Induced metric at all valid nodes (non-throwing; ok flags mark positive definiteness).
MetricField metric_field(const SpacelikeGraph& M);

/// Mean curvature coefficients in a Q-orthonormal normal frame at an interior node.
Vec mean_curvature(const SpacelikeGraph& M, int k);

/// Same, reusing precomputed ambient points.  Also returns the normal part of the
/// mean curvature vector in ambient coordinates when hn is non-null.
Vec mean_curvature(const SpacelikeGraph& M, const std::vector<Vec>& pts, int k, Vec* hn = nullptr);

/// max over interior nodes of |mean_curvature|.
double maximality_residual(const SpacelikeGraph& M);

/// Shortest-path distances from node a to every node.
std::vector<double> intrinsic_distances(const SpacelikeGraph& M, int a);
double intrinsic_distance(const SpacelikeGraph& M, int a, int b);

/// Interpolated u at a chart point (bicubic where the stencil allows).
Vec interpolate(const SpacelikeGraph& M, const Vec& x);

/// Chart distance from an ambient point y on H^{p,q} to M: the spherical gap
/// between the S^q coordinate of T^{-1} y and u at its disk coordinate.
/// Returns +inf when y lies over a point outside the sampled disk.
double vertical_distance(const SpacelikeGraph& M, const Vec& y);

/// Resample T M as a graph with identity transform over the same lattice.  Nodes
/// without a preimage in the sampled chart are dropped; losing the centre throws.
SpacelikeGraph regraph(const SpacelikeGraph& M);

/// True iff u is a spherical isometry along the ray through direction dir at all sampled radii.
bool detect_lightlike_ray(const SpacelikeGraph& M, const Vec& dir, double tol = 1e-3, int samples = 16);

struct C2Gap {
  double metric_c2_gap;
  double embedding_gap;
  double bilip;
  int ball_size;
};

/// Compare B against A over the intrinsic ball B(o, R) of A through the identity chart map.
/// Both graphs must share lattice and model.  Throws std::domain_error when the ball
/// reaches the truncation ring ("increase r0 or decrease R").
C2Gap pointed_c2_compare(const SpacelikeGraph& A, const SpacelikeGraph& B, int base, double R);

}  // namespace robust::hpq
