#pragma once

#include "robust/affine.hpp"

#include <vector>

namespace robust::affine {

struct NewtonParams {
  double target = 1e-10;  // max-norm of the discrete Monge-Ampere residual (log form)
  int max_iter = 60;
  int max_halvings = 30;
  /// Nodes within collar * h of the boundary are not held to the Monge-Ampere equation; their
  /// value is extrapolated from the rest of their fit stencil (boundary zeros included).
  double collar = 1.0;
};

struct AffineSolveResult {
  AffineHypersurface surface;
  double residual;
  int iterations;
  bool converged;
  std::vector<double> history;  // residual before each Newton step
};

/// Discrete residual  log det(-w D^2 w + (1-s) Dw Dw^T) - (2p - s(2p+2)) log w + p log s  at every
/// valid node (+inf where the matrix is not positive definite or w <= 0).
std::vector<double> monge_ampere_residual(const AffineHypersurface& M);

/// Distance from x to the boundary of the chart domain.
double boundary_distance(const Domain& D, const Vec& x);

/// Hyperbolic affine sphere with centre 0 and affine normal X asymptotic to C, by damped
/// Newton iteration on the Monge-Ampere equation for w over the chart domain of C.
/// Steps are accepted only when w stays positive and the surface stays locally convex.
AffineSolveResult solve_affine_sphere(const ConvexCone& C, int n, const NewtonParams& params = {});

/// Newton iteration from an explicit starting surface (same chart and exponent).
AffineSolveResult solve_affine_sphere(AffineHypersurface guess, const NewtonParams& params = {});

/// Starting surface: a level set of the characteristic function of C (the hyperboloid for round
/// cones), rescaled so that max w = 1/2.
AffineHypersurface affine_initial_guess(const ConvexCone& C, int n);

}  // namespace robust::affine
