#include "robust/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace robust::maximal {

namespace {

// Advance M by dt; returns the maximality residual of the input.
double step_into(const SpacelikeGraph& M, double dt, SpacelikeGraph& out) {
  const Lattice& lat = M.lattice();
  const auto& mod = M.model();
  const Mat J = mod.Q.signature();
  const Mat Tinv = J * M.transform().transpose() * J;
  const auto pts = M.points();
  out = M;
  double res = 0.0;
  Vec hn;
  for (int k = 0; k < lat.size(); ++k) {
    if (!lat.interior(k)) continue;
    res = std::max(res, hpq::mean_curvature(M, pts, k, &hn).norm());
    const Vec& v = M.value(k);
    Vec f = mod.F.transpose() * (Tinv * hn);
    f -= f.dot(v) * v;
    const double r2 = lat.coord(k).squaredNorm();
    const double a = 2.0 / (1.0 - r2), b = (1.0 + r2) / (1.0 - r2);
    out.set_value(k, v + dt * (a * a / b) * f);
  }
  return res;
}

// Explicit-step scale: h^2 times the smallest eigenvalue of the induced metric, measured against
// the totally geodesic graph (for which this is h^2 at the centre).
double step_scale(const SpacelikeGraph& M) {
  const Lattice& lat = M.lattice();
  const MetricField f = hpq::metric_field(M);
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < lat.size(); ++k) {
    if (!lat.interior(k) || !f.ok[k]) continue;
    const double r2 = lat.coord(k).squaredNorm();
    const double a = 2.0 / (1.0 - r2), b = (1.0 + r2) / (1.0 - r2);
    const Eigen::Matrix2d g = f.g[k];
    const double lmin = lat.p() == 2 ? Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(g).eigenvalues()(0) : g(0, 0);
    best = std::min(best, lmin * b / (a * a));
  }
  return lat.h() * lat.h() * best;
}

bool spacelike(const SpacelikeGraph& M) {
  const MetricField f = hpq::metric_field(M);
  for (int k = 0; k < M.lattice().size(); ++k)
    if (M.lattice().valid(k) && !f.ok[k]) return false;
  return true;
}

}  // namespace

SpacelikeGraph radial_interpolation(const SpacelikeGraph& B) {
  const Lattice& lat = B.lattice();
  std::vector<int> ring;
  Vec mean = Vec::Zero(B.model().q() + 1);
  for (int k = 0; k < lat.size(); ++k)
    if (B.is_boundary(k)) {
      ring.push_back(k);
      mean += B.value(k);
    }
  if (ring.empty()) throw std::invalid_argument("radial_interpolation: no boundary nodes");
  if (mean.norm() < 1e-12) mean = B.value(ring.front());
  const Vec vc = mean.normalized();
  SpacelikeGraph out = B;
  for (int k = 0; k < lat.size(); ++k) {
    if (!lat.valid(k) || B.is_boundary(k)) continue;
    const Vec x = lat.coord(k);
    const double r = x.norm();
    if (r == 0.0) {
      out.set_value(k, vc);
      continue;
    }
    // ring value in the direction of x, by inverse-angle weighting of the two nearest ring nodes
    const Vec dir = x / r;
    int k1 = -1, k2 = -1;
    double a1 = 1e300, a2 = 1e300;
    for (int kr : ring) {
      const double ang = std::acos(std::clamp(lat.coord(kr).normalized().dot(dir), -1.0, 1.0));
      if (ang < a1) {
        a2 = a1; k2 = k1;
        a1 = ang; k1 = kr;
      } else if (ang < a2) {
        a2 = ang; k2 = kr;
      }
    }
    Vec vb = B.value(k1);
    if (k2 >= 0 && a1 + a2 > 0.0) vb = (a2 * B.value(k1) + a1 * B.value(k2)) / (a1 + a2);
    const double s = std::pow(r / B.r0(), 2);
    Vec v = (1.0 - s) * vc + s * vb;
    if (v.norm() < 1e-12) v = vb;
    out.set_value(k, v);
  }
  // SOR relaxation of the componentwise Laplace equation, renormalized to S^q.
  const double omega = 1.8;
  for (int sweep = 0; sweep < 5000; ++sweep) {
    double change = 0.0;
    for (int k = 0; k < lat.size(); ++k) {
      if (!lat.interior(k)) continue;
      const int i = lat.ix(k), j = lat.iy(k);
      Vec avg = out.value(lat.index(i + 1, j)) + out.value(lat.index(i - 1, j));
      if (lat.p() == 2) avg = 0.5 * (avg + out.value(lat.index(i, j + 1)) + out.value(lat.index(i, j - 1)));
      const Vec v = out.value(k) + omega * (0.5 * avg - out.value(k));
      if (v.norm() < 1e-12) continue;
      change = std::max(change, (v.normalized() - out.value(k)).cwiseAbs().maxCoeff());
      out.set_value(k, v);
    }
    if (change < 1e-12) break;
  }
  return out;
}

PlateauProblem make_problem(const hpq::PoincareModel& model, double r0, int n,
                            const std::function<Vec(const Vec&)>& boundary, FlowParams params) {
  SpacelikeGraph B(model, r0, n);
  for (int k = 0; k < B.lattice().size(); ++k)
    if (B.is_boundary(k)) B.set_value(k, boundary(B.lattice().coord(k)));
  return PlateauProblem{radial_interpolation(B), params};
}

double boundary_lipschitz(const SpacelikeGraph& M) {
  const Lattice& lat = M.lattice();
  double best = 0.0;
  for (int k = 0; k < lat.size(); ++k) {
    if (!M.is_boundary(k)) continue;
    for (auto [a, b] : lat.ring_offsets()) {
      if (!lat.valid(lat.ix(k) + a, lat.iy(k) + b)) continue;
      const int k2 = lat.index(lat.ix(k) + a, lat.iy(k) + b);
      if (!M.is_boundary(k2)) continue;
      best = std::max(best, hpq::spherical_dist_sphere(M.value(k), M.value(k2)) /
                                hpq::spherical_dist_disk(lat.coord(k), lat.coord(k2)));
    }
  }
  return best;
}

SpacelikeGraph flow_step(const SpacelikeGraph& M, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("flow_step: dt must be positive");
  SpacelikeGraph out = M;
  step_into(M, dt, out);
  return out;
}

SolveResult solve_maximal(const PlateauProblem& prob) {
  const FlowParams& fp = prob.params;
  if (!(fp.target > 0.0) || !(fp.dt_factor > 0.0) || fp.max_iter < 0)
    throw std::invalid_argument("solve_maximal: invalid flow parameters");
  if (boundary_lipschitz(prob.guess) > 1.0 + 1e-9)
    throw std::invalid_argument("solve_maximal: boundary data is not 1-Lipschitz");
  if (!spacelike(prob.guess)) throw std::invalid_argument("solve_maximal: initial guess is not spacelike");
  // factor is the step relative to step_scale; every rollback lowers it for good, since a
  // step that once blew up will do so again once dt creeps back to it
  double factor = fp.dt_factor;
  double dt = factor * step_scale(prob.guess);
  SpacelikeGraph cur = prob.guess, next = prob.guess, prev = prob.guess;
  double prev_res = std::numeric_limits<double>::infinity();
  SolveResult out{cur, 0.0, 0, false, {}};
  int halvings = 0;
  for (int it = 0;; ++it) {
    const double res = step_into(cur, dt, next);
    if (it % 100 == 0) out.history.push_back(res);
    if (res <= fp.target || it >= fp.max_iter) {
      out.graph = cur;
      out.residual = res;
      out.iterations = it;
      out.converged = res <= fp.target;
      return out;
    }
    // A step that more than doubles the residual, or leaves the spacelike cone, is retried
    // from the last accepted state with half the step.
    const bool blew_up = res > 2.0 * prev_res + fp.target;
    if (blew_up || !spacelike(next)) {
      if (++halvings > fp.max_halvings) throw std::runtime_error("flow left spacelike cone");
      if (blew_up) cur = prev;
      dt *= 0.5;
      factor = std::min(factor, dt / step_scale(cur));
      continue;
    }
    halvings = 0;
    prev = cur;
    prev_res = res;
    std::swap(cur, next);
    dt = std::min(factor * step_scale(cur), 1.01 * dt);
  }
}

}  // namespace robust::maximal
