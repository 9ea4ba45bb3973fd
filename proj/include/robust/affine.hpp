#pragma once

#include "robust/cone.hpp"
#include "robust/lattice.hpp"

#include <functional>
#include <limits>
#include <memory>
#include <vector>

namespace robust::affine {

/// Derivatives of a scalar function of p variables up to order three.
struct Jet {
  double f = 0.0;
  Vec d1;                  // d_i f
  Mat d2;                  // d_i d_j f
  std::vector<double> d3;  // d_i d_j d_k f at index (i * p + j) * p + k
};

/// Embedding derivatives X, d_i X, d_i d_j X, d_i d_j d_k X (same index layout as Jet).
struct SurfaceJet {
  Vec X;
  Mat D1;
  std::vector<Vec> D2;
  std::vector<Vec> D3;
};

/// Radial graph over a convex chart domain:  X(x) = w(x)^{-s} L (x, 1)  with w > 0 on the
/// domain and w = 0 on its boundary.  The direction of X(x) ranges over the cone
/// {t L (x, 1)} and the radius is w^{-s} |L (x, 1)|.  Derivatives come from
/// least-squares cubic fits on 5^p windows in which outside nodes are replaced by the
/// boundary crossing (where w = 0).
class AffineHypersurface {
 public:
  AffineHypersurface(Domain dom, Mat L, double s, int n);

  int p() const { return dom_.p; }
  int dim() const { return dom_.p + 1; }
  const Domain& domain() const { return dom_; }
  const Mat& chart() const { return L_; }
  double exponent() const { return s_; }
  const Lattice& lattice() const { return lat_; }
  int n() const { return lat_.nx(); }

  const std::vector<double>& values() const { return w_; }
  std::vector<double>& values() { return w_; }
  double value(int k) const { return w_[k]; }

  /// Replace the chart matrix (g M corresponds to L -> g L).
  void set_chart(const Mat& L) { L_ = L; }

  Vec point(int k) const;
  /// Jet of w at node k (uses the stored node value for f).
  Jet jet(int k) const;
  /// Jet of w at an arbitrary chart point, fitted around the nearest node.
  Jet jet_at(const Vec& x) const;
  SurfaceJet surface_jet(const Vec& x, const Jet& j) const;
  SurfaceJet surface_jet_at(const Vec& x) const { return surface_jet(x, jet_at(x)); }
  Vec point_at(const Vec& x) const;
  /// Chart point of the ray through z (requires L^{-1} z to have positive last entry).
  Vec chart_point(const Vec& z) const;

  /// Linear fit operators, exposed for the solver.
  struct Stencil {
    std::vector<int> nodes;   // value sources; -1 for boundary points (value 0)
    std::vector<Vec> offsets;  // local coordinates (x - x0) / h
    Mat coef;                 // monomial coefficients = coef * values
  };
  const Stencil& stencil(int k) const { return (*stencils_)[k]; }
  /// Monomial exponents of the fit basis (size p each).
  const std::vector<std::array<int, 2>>& monomials(int k) const;

 private:
  Domain dom_;
  Mat L_;
  double s_;
  Lattice lat_;
  std::vector<double> w_;
  std::shared_ptr<std::vector<Stencil>> stencils_;
  void build_stencils();
  Jet jet_from(int k, const Vec& xi, const std::vector<double>& w, bool node_value) const;
};

/// Surface with w sampled from a function on the chart domain.
AffineHypersurface from_function(const Domain& dom, const Mat& L, double s, int n,
                                 const std::function<double(const Vec&)>& w);
/// Hyperboloid z_last^2 - |z'|^2 = 1 (p = 1: a hyperbola), the unit affine sphere of the round cone.
AffineHypersurface hyperboloid(int p, int n);
/// z_1 ... z_{p+1} = c over the positive orthant.  c = (p+1)^{-(p+1)/2} is the unit affine sphere.
AffineHypersurface titeica(int p, int n, double c);
/// Upper unit hemisphere (an elliptic affine sphere), used as a convexity fixture.
AffineHypersurface hemisphere(int n);

struct AffineStructure {
  Mat sigma;  // sigma^xi(d_i X, d_j X)
  Mat S;      // shape operator, S(d_i X) = sum_k S(k, i) d_k X
  Vec tau;    // tau(d_i X)
};

/// Decomposition of D along T M + span(xi) for the affine transverse field xi(X) = K X + c.
/// Throws std::domain_error("not transverse") when xi is tangent at the point.
AffineStructure affine_structure(const AffineHypersurface& M, const Vec& x, const Mat& K, const Vec& c);

struct AffineData {
  Vec xi;       // affine normal
  Mat metric;   // affine (Blaschke) metric in the coordinate basis
  bool convex;  // locally uniformly convex here
};
/// Affine normal and metric at a chart point; throws std::domain_error("non-convex") if
/// the surface is not locally uniformly convex there.
AffineData affine_normal(const AffineHypersurface& M, const Vec& x);
inline AffineData affine_normal(const AffineHypersurface& M, int k) {
  return affine_normal(M, M.lattice().coord(k));
}

struct SphereCheck {
  bool ok;
  double max_dev;  // worst angle between the affine normal line and the line to the origin
  int worst;
  bool hyperbolic;  // centre on the concave side at every node
};
/// Concurrency of affine normals at the origin over nodes at least `margin`
/// inside the chart domain.
SphereCheck is_affine_sphere(const AffineHypersurface& M, double tol, double margin = 0.0);

/// Affine metric at every node.
MetricField affine_metric_field(const AffineHypersurface& M);
std::vector<double> affine_distances(const AffineHypersurface& M, int source);

/// Functional vanishing on T_o M with value 1 at o = X(x).
Vec support_functional(const AffineHypersurface& M, const Vec& x);

/// Chart point of the Euclidean-norm minimizer (grid argmin refined by Newton).
Vec minimal_norm_basepoint(const AffineHypersurface& M);

/// Cone spanned by the surface: the chart cone {t L (x,1)}.
ConvexCone asymptotic_cone(const AffineHypersurface& M);

struct SectorCurve {
  Vec u_plus, u_minus;  // boundary rays, scaled so that o = u_plus + u_minus
  std::vector<double> t, alpha, alpha_dot;
  std::vector<double> phi;        // measured phi_o(gamma(t))
  double t_x;                     // parameter of x
  double law_gap;                 // max |phi - e^{alpha - alpha0}(cosh t - alpha0' sinh t)|
  double law_gap_plus;            // same with + alpha0' sinh t
  double max_abs_alpha_dot;
};

/// Unit-speed parametrization of M cap Span{o, x} for the Hilbert distance
/// (t = log B / 2), sampled at `samples` parameters over [t_lo, t_hi] (clipped to the chart).
SectorCurve sector_curve(const AffineHypersurface& M, const Vec& xo, const Vec& xx, double t_lo,
                         double t_hi, int samples = 41);

struct DominationReport {
  int checked = 0;
  int violations = 0;           // failures of the log|phi_o| lower bound
  int distance_violations = 0;  // failures of d_M(o,x) <= min(c t_x, (c/(1-a))(log|phi_o(x)| - log((1-a)/2)))
  double worst_margin = 0.0;
  double worst_distance_margin = std::numeric_limits<double>::infinity();
};
/// Domination chain at configured c between node o and nodes xs, a = 1 - 1/c:
///   log|phi_o(gamma(t))| >= (1-a)|t| + log((1-a)/2)  along the sector curve, and
///   d_M(o,x) <= c t_x.  Grid distances are discounted by dist_slack (relative).
DominationReport affine_domination_check(const AffineHypersurface& M, int o, const std::vector<int>& xs, double c,
                                         double slack = 1e-8, double dist_slack = 0.02);

/// max over node pairs of d_M / (h/2), h = log B.
double benoist_hulin_gap(const AffineHypersurface& M, int source, const std::vector<int>& targets);

}  // namespace robust::affine
