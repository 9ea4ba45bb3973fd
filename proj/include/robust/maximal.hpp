#pragma once

#include "robust/hpq.hpp"

#include <functional>
#include <vector>

namespace robust::maximal {

using hpq::SpacelikeGraph;

struct FlowParams {
  double dt_factor = 0.2;  // step = dt_factor * h^2 * (smallest induced-metric eigenvalue, normalized)
  int max_iter = 200000;
  double target = 1e-6;    // sup-norm of the mean curvature coefficients
  int max_halvings = 30;
};

/// Boundary data lives on the ring nodes of the initial guess.
struct PlateauProblem {
  SpacelikeGraph guess;
  FlowParams params;
};

struct SolveResult {
  SpacelikeGraph graph;
  double residual;
  int iterations;
  bool converged;
  std::vector<double> history;  // residual every 100 iterations
};

/// Fill the interior by blending the ring values along rays from a centre value.
SpacelikeGraph radial_interpolation(const SpacelikeGraph& boundary);

/// Problem with ring values boundary(x) and the radial interpolation as initial guess.
PlateauProblem make_problem(const hpq::PoincareModel& model, double r0, int n,
                            const std::function<Vec(const Vec&)>& boundary, FlowParams params = {});

/// Discrete spherical Lipschitz constant of the ring data over ring-to-ring grid edges.
double boundary_lipschitz(const SpacelikeGraph& M);

/// One explicit step; interior values move along the fibre part of the mean
/// curvature vector and are renormalized.  Throws on dt <= 0.
SpacelikeGraph flow_step(const SpacelikeGraph& M, double dt);

/// Explicit flow with a metric-scaled step; steps that leave the spacelike cone or more than
/// double the residual are retried with half the step.  Throws std::runtime_error("flow left spacelike cone")
/// when halving is exhausted; returns the last iterate when the iteration cap is hit.
SolveResult solve_maximal(const PlateauProblem& prob);

}  // namespace robust::maximal
