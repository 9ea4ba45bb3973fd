#pragma once

#include "robust/affine.hpp"
#include "robust/groups.hpp"
#include "robust/hpq.hpp"

#include <limits>
#include <string>
#include <vector>

namespace robust::rep {

enum class Family { MaximalHpq, AffineSphere };
std::string to_string(Family f);
Family family_from_string(const std::string& s);

// ---------------------------------------------------------------------------
// Invariance

/// max over nodes x with chart radius <= sample_frac * r0 of the vertical distance from
/// rho(w) x to M.  Images leaving the sampled chart are skipped; +inf if every image leaves.
double invariance_residual(const Representation& rho, const hpq::SpacelikeGraph& M, const Word& w,
                           double sample_frac = 0.5);
/// Same, over all generators.
double invariance_residual(const Representation& rho, const hpq::SpacelikeGraph& M, double sample_frac = 0.5);

/// Relative radial gap |log(|z| / |X(chart(z))|)| for z = rho(w) X(x), over nodes at least
/// `margin` inside the chart domain whose images stay that far inside.
double invariance_residual(const Representation& rho, const affine::AffineHypersurface& M, const Word& w,
                           double margin = 0.1);
double invariance_residual(const Representation& rho, const affine::AffineHypersurface& M, double margin = 0.1);

// ---------------------------------------------------------------------------
// Basepoints and renormalization

/// Point of T M lying over the origin of the disk factor, with a tangent basis there.
struct HpqBasepoint {
  Vec chart;    // preimage in the chart of the underlying graph
  Vec point;    // ambient point (E-component zero when sampled)
  Mat tangent;  // ambient tangent vectors, one column per chart direction
};
/// When no sampled point lies over the origin, falls back to the interior node with the
/// smallest disk component.
HpqBasepoint select_basepoint(const hpq::SpacelikeGraph& M);

/// Point of M over a given chart point of its underlying graph, with central-difference tangents.
HpqBasepoint basepoint_at(const hpq::SpacelikeGraph& M, const Vec& chart);

/// Chart point of the Euclidean-norm minimizer.
Vec select_basepoint(const affine::AffineHypersurface& M);

/// Canonical position of a pointed maximal graph: basepoint F e_0, tangent space span(E).
/// Returns g in SO(p,q+1) with g o = F e_0 and g T_o M = span(E), built from Q-orthonormal
/// frames (tangent frame: chart directions; normal frame: projections of T F, T the graph
/// transform).  Equivariant: renormalize(g M) g = renormalize(M) at corresponding basepoints.
/// Throws std::domain_error("frame degenerate") when the frame cannot be completed.
Mat renormalize(const hpq::SpacelikeGraph& M);
/// Same, at an explicit basepoint of M.
Mat renormalize(const hpq::SpacelikeGraph& M, const HpqBasepoint& b);
/// Residual of the canonical position after applying g: |g o - F e_0| plus the largest
/// F-component of a unit tangent vector of g M.
double canonical_residual(const hpq::SpacelikeGraph& M, const Mat& g);
double canonical_residual(const hpq::PoincareModel& model, const HpqBasepoint& b, const Mat& g);

/// Canonical position of a pointed affine sphere: basepoint c = (1,...,1)/sqrt(p+1), tangent
/// space c^perp, with the affine-orthonormalized chart directions sent to a fixed orthonormal
/// basis of c^perp scaled into SL.  x is the chart point of the basepoint.
Mat renormalize(const affine::AffineHypersurface& M, const Vec& x);
double canonical_residual(const affine::AffineHypersurface& M, const Vec& x, const Mat& g);
Vec affine_canonical_point(int p);

// ---------------------------------------------------------------------------
// Renormalization pipeline

struct PipelineParams {
  double window = 1.0 / 3.0;  // tail window for subsequence extraction
  double cauchy_tol = 1e-6;   // relative Cauchy diameter of the selected tail
  double norm_ratio = 10.0;   // bound on sup_n |rho_bar_n(s)| relative to n = 1
  double floor_factor = 2.0;  // limit residual allowed relative to the input floor
  double sample_frac = 0.5;   // H^{p,q} invariance sampling
  double margin = 0.1;        // affine invariance sampling
};

struct PipelineReport {
  Family family = Family::MaximalHpq;
  std::vector<Mat> renormalizers;               // g_n
  std::vector<Representation> renormalized;     // g_n rho_n g_n^{-1}
  std::vector<double> generator_norm;           // max_s |rho_bar_n(s)|_F
  std::vector<double> input_residual;           // invariance of rho_n on M_n
  std::vector<double> canonical_residual;       // position of g_n (M_n, o_n)
  std::vector<std::vector<double>> displacement;  // [n][s]: domination function at rho_bar_n(s) o
  std::vector<double> displacement_sup;         // per generator
  int tail_begin = 0, tail_end = 0;             // selected window [begin, end)
  double cauchy_gap = 0.0;
  double input_floor = 0.0;
  double limit_residual = 0.0;
  bool input_convergent = false;  // rho_n itself Cauchy on its tail
  bool converged = false;
  bool norms_bounded = false;
  bool displacement_bounded = false;
  bool limit_invariant = false;
  Representation limit;
  std::string message;

  bool ok() const { return converged && norms_bounded && displacement_bounded && limit_invariant; }
};

PipelineReport renormalization_pipeline(const std::vector<Representation>& rho, const std::vector<hpq::SpacelikeGraph>& M,
                                 const PipelineParams& params = {});
PipelineReport renormalization_pipeline(const std::vector<Representation>& rho,
                                 const std::vector<affine::AffineHypersurface>& M, const PipelineParams& params = {});

/// Finite-sequence proxy for "uniformly bounded": the running sup is attained before the
/// last 20% of terms, or grows by less than log(N / N_0) over that stretch.
bool bounded_proxy(const std::vector<double>& values);

/// Index window [b, b + len) minimizing the Cauchy diameter of the matrix sequences; diameters
/// below `tie` count as equal and the latest window wins.  Returns the window and its relative diameter.
struct TailWindow {
  int begin, end;
  double gap;
};
TailWindow select_tail(const std::vector<Representation>& seq, double window, double tie = 0.0);

// ---------------------------------------------------------------------------
// Displacement and properness

struct DisplacementFit {
  double kappa = std::numeric_limits<double>::infinity();  // +inf when there are no samples
  int samples = 0;
  int unreachable = 0;  // images outside the sampled chart
  int violations = 0;   // samples with D < kappa_check |w| - 1/kappa_check
  std::vector<Word> words;
  std::vector<double> distances;
};
/// Intrinsic displacement d_M(o, rho(w) o) over reduced words of length 1..n, o the centre node.
DisplacementFit displacement_fit(const Representation& rho, const hpq::SpacelikeGraph& M, int n,
                                 double kappa_check = 0.0);

struct ProbeEntry {
  double norm;
  double displacement;  // sup over sampled x of d_M(x, g x)
  bool flagged;
};
struct ProbeReport {
  std::vector<ProbeEntry> entries;
  int flagged = 0;
};
/// Norm against sup-displacement over nodes within chart radius sample_frac * r0.  A sample
/// is flagged when norm > norm_cap and displacement < disp_floor.
ProbeReport stabilizer_properness_probe(const hpq::SpacelikeGraph& M, const std::vector<Mat>& g,
                                        double sample_frac = 0.4, double norm_cap = 1e3,
                                        double disp_floor = 1e-3);

/// Node of M nearest to the ambient point y, or -1 when y lies over a point outside the chart.
int locate(const hpq::SpacelikeGraph& M, const Vec& y);

}  // namespace robust::rep
