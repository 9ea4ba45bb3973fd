#pragma once

#include "robust/affine.hpp"
#include "robust/hpq.hpp"
#include "robust/rep_actions.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace robust::harness {

using rep::Family;

struct Tolerances {
  double group = 1e-9;
  double rep = 1e-8;
  double maximality = 1e-6;    // mean curvature of g(M) for corpus graphs
  double sphere = 1e-4;        // affine-normal concurrency of g(M)
  double metric = 1e-6;        // relative gap of pulled-back metrics
  double equivariance = 1e-9;  // domination function under g
  double grid_factor = 3.0;    // epsilon_grid = grid_factor * h
  double isotropy = 1e-8;
  double invariance = 1e-3;    // largest input residual of rho_n on M_n accepted by the pipeline
  double compactness = 1e-6;   // pointed C^2 gap over the last third of a divergent sequence
  double sequence_gap = 1e-3;  // same for the scenario's own (solver-produced) sequence
  double radius = 1.0;         // intrinsic ball radius for pointed comparisons
  double norm_cap = 1e3;       // bound on renormalizers of convergent input sequences
  double lightlike = 1e-3;
  double domination_c = 0.0;   // affine domination constant, 0 = 1.1 max(c_hat, (p+1)/2)
  rep::PipelineParams pipeline;
};

/// Data needed to recompute one failing (or worst) measurement.  Fields unused by a kind stay -1.
struct Witness {
  std::string kind;
  int corpus = -1;
  int sequence = -1;
  int term = -1;
  int node = -1;
  int node2 = -1;
  int generator = -1;
  Mat g;
  double margin = 0.0;  // threshold minus measured value; negative means failure
};

struct CheckResult {
  std::string name;
  bool pass = true;
  bool vacuous = false;
  int checked = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  std::string detail;
  std::vector<Witness> witnesses;  // every failure, or the worst sample when none failed

  void record(Witness w);
};

struct PropertyReport {
  std::string property;
  Family family = Family::MaximalHpq;
  std::vector<CheckResult> checks;
  bool ok() const;
  std::string summary() const;
};

struct Scenario {
  Family family = Family::MaximalHpq;
  std::uint64_t seed = 1;
  int group_samples = 4;
  Tolerances tol;
  std::vector<hpq::SpacelikeGraph> graphs;             // corpus
  std::vector<affine::AffineHypersurface> spheres;     // corpus
  std::vector<rep::Representation> rho_seq;            // convergent or conjugated sequence
  std::vector<hpq::SpacelikeGraph> graph_seq;          // M_n preserved by rho_n
  std::vector<affine::AffineHypersurface> sphere_seq;
  std::vector<Mat> divergent;                          // unbounded g_n for the compactness and avoidance checks

  /// Throws std::invalid_argument when the corpus is empty, sequences have unequal
  /// lengths, or a representation fails validation.
  void validate() const;
};

PropertyReport check_invariance(const Scenario& scn);
PropertyReport check_compactness(const Scenario& scn);
PropertyReport check_avoidance(const Scenario& scn);
PropertyReport check_domination(const Scenario& scn);
PropertyReport closedness_scenario(const Scenario& scn);

/// Recompute a witness margin from the scenario alone.
double replay(const Scenario& scn, const Witness& w);

/// Default unbounded sequence for the scenario's group: boosts in the (e_1, last) plane
/// (H^{p,q}) or diag(e^{nt}, 1, ..., e^{-nt}) (affine), conjugated by one seeded random element.
std::vector<Mat> default_divergent(const Scenario& scn, std::uint64_t seed, int count = 8, double step = 0.5);

/// Random group elements for invariance sweeps; the identity comes first.
std::vector<Mat> random_elements(const Scenario& scn);

/// Lightlike-ray scan of a graph over `directions` equally spaced rays.
bool any_lightlike_ray(const hpq::SpacelikeGraph& M, double tol, int directions = 16);

}  // namespace robust::harness
