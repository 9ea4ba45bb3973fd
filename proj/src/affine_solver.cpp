#include "robust/affine_solver.hpp"

#include <Eigen/Geometry>
#include <Eigen/QR>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace robust::affine {

namespace {

// Rows of the stencil fit mapping stencil values to the first and second derivatives at the node.
struct DerivativeRows {
  std::vector<Vec> d1;  // p rows
  std::vector<Vec> d2;  // p*p rows, index a*p+b
};

// Fourth-order centered differences on the full 5^p window (exact on cubics).  Least-squares
// fits are nearly blind to grid-scale oscillation, so they are used only near the boundary.
bool full_window(const AffineHypersurface& M, int k) {
  const auto& st = M.stencil(k);
  if (st.nodes.size() != (M.p() == 2 ? 25u : 5u)) return false;
  return std::all_of(st.nodes.begin(), st.nodes.end(), [](int n) { return n >= 0; });
}

DerivativeRows centered_rows(int p, double h) {
  const double c1[5] = {1.0, -8.0, 0.0, 8.0, -1.0};
  const double c2[5] = {-1.0, 16.0, -30.0, 16.0, -1.0};
  const int m = p == 2 ? 25 : 5;
  auto along = [&](int axis, const double* c, double scale) {
    Vec r = Vec::Zero(m);
    for (int t = 0; t < 5; ++t) r(axis == 0 ? (p == 2 ? 10 : 0) + t : 5 * t + 2) = c[t] * scale;
    return r;
  };
  DerivativeRows r;
  for (int a = 0; a < p; ++a) r.d1.push_back(along(a, c1, 1.0 / (12.0 * h)));
  if (p == 1) {
    r.d2.push_back(along(0, c2, 1.0 / (12.0 * h * h)));
    return r;
  }
  Vec mixed = Vec::Zero(25);
  for (int b = 0; b < 5; ++b)
    for (int a = 0; a < 5; ++a) mixed(5 * b + a) = c1[a] * c1[b] / (144.0 * h * h);
  r.d2 = {along(0, c2, 1.0 / (12.0 * h * h)), mixed, mixed, along(1, c2, 1.0 / (12.0 * h * h))};
  return r;
}

DerivativeRows derivative_rows(const AffineHypersurface& M, int k) {
  const auto& st = M.stencil(k);
  const auto& mono = M.monomials(k);
  const int p = M.p();
  const double h = M.lattice().h();
  if (full_window(M, k)) return centered_rows(p, h);
  auto row_for = [&](std::array<int, 2> e) -> Vec {
    for (size_t q = 0; q < static_cast<size_t>(st.coef.rows()); ++q)
      if (mono[q] == e) {
        double fact = 1.0;
        for (int a : e)
          for (int i = 2; i <= a; ++i) fact *= i;
        return st.coef.row(q).transpose() * fact / std::pow(h, e[0] + e[1]);
      }
    return Vec::Zero(st.coef.cols());
  };
  DerivativeRows r;
  for (int a = 0; a < p; ++a) {
    std::array<int, 2> e{0, 0};
    e[a] = 1;
    r.d1.push_back(row_for(e));
  }
  for (int a = 0; a < p; ++a)
    for (int b = 0; b < p; ++b) {
      std::array<int, 2> e{0, 0};
      ++e[a];
      ++e[b];
      r.d2.push_back(row_for(e));
    }
  return r;
}

struct Local {
  double F;
  Mat A;
  Mat cof;
  Vec g;
  Mat H;
};

Local local_residual(const AffineHypersurface& M, const DerivativeRows& dr, int k, const std::vector<double>& w) {
  const auto& st = M.stencil(k);
  const int p = M.p();
  const double s = M.exponent();
  Vec data(st.nodes.size());
  for (size_t m = 0; m < st.nodes.size(); ++m) data(m) = st.nodes[m] >= 0 ? w[st.nodes[m]] : 0.0;
  Local L;
  L.g = Vec(p);
  L.H = Mat(p, p);
  for (int a = 0; a < p; ++a) L.g(a) = dr.d1[a].dot(data);
  for (int a = 0; a < p; ++a)
    for (int b = 0; b < p; ++b) L.H(a, b) = dr.d2[a * p + b].dot(data);
  L.H = 0.5 * (L.H + L.H.transpose());
  const double wk = w[k];
  L.A = -wk * L.H + (1.0 - s) * L.g * L.g.transpose();
  if (p == 1) {
    L.cof = Mat::Ones(1, 1);
  } else {
    L.cof = Mat(2, 2);
    L.cof << L.A(1, 1), -L.A(0, 1), -L.A(1, 0), L.A(0, 0);
  }
  const double e = 2.0 * p - s * (2.0 * p + 2.0);
  // log form: the scaling w -> lambda w is not a symmetry, and w = 0 is not a root
  const double det = L.A.determinant();
  L.F = (det > 0.0 && wk > 0.0) ? std::log(det) - e * std::log(wk) + p * std::log(s)
                                : std::numeric_limits<double>::infinity();
  L.cof /= det;
  return L;
}

double sum_sq(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m += x * x;
  return m;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Coefficients c with w_k ~ sum_m c_m v_m, the stencil fit through every point except k itself.
Vec extrapolation_row(const AffineHypersurface& M, int k) {
  const auto& st = M.stencil(k);
  const auto& mono = M.monomials(k);
  const int nm = static_cast<int>(st.coef.rows());
  Mat V = Mat::Zero(st.nodes.size(), nm);
  for (size_t r = 0; r < st.nodes.size(); ++r) {
    if (st.nodes[r] == k) continue;
    for (int c = 0; c < nm; ++c) {
      double v = 1.0;
      for (int a = 0; a < M.p(); ++a) v *= std::pow(st.offsets[r](a), mono[c][a]);
      V(r, c) = v;
    }
  }
  Eigen::CompleteOrthogonalDecomposition<Mat> cod(V);
  cod.setThreshold(1e-10);
  if (cod.rank() < nm) throw std::runtime_error("solve_affine_sphere: degenerate collar stencil");
  return cod.pseudoInverse().row(0).transpose();
}

bool admissible(const AffineHypersurface& M, const std::vector<DerivativeRows>& rows, const std::vector<bool>& collar,
                const std::vector<double>& w) {
  const Lattice& lat = M.lattice();
  for (int k = 0; k < lat.size(); ++k) {
    if (!lat.valid(k)) continue;
    if (!(w[k] > 0.0)) return false;
    if (collar[k]) continue;
    const Local L = local_residual(M, rows[k], k, w);
    if (!(L.A(0, 0) > 0.0) || !std::isfinite(L.F)) return false;
  }
  return true;
}

}  // namespace

double boundary_distance(const Domain& D, const Vec& x) {
  if (D.kind == Domain::Kind::Ball) return 1.0 - x.norm();
  return (D.b - D.A * x).minCoeff();
}

std::vector<double> monge_ampere_residual(const AffineHypersurface& M) {
  const Lattice& lat = M.lattice();
  std::vector<double> out(lat.size(), 0.0);
  for (int k = 0; k < lat.size(); ++k)
    if (lat.valid(k)) out[k] = local_residual(M, derivative_rows(M, k), k, M.values()).F;
  return out;
}

AffineHypersurface affine_initial_guess(const ConvexCone& C, int n) {
  const Domain D = C.chart_domain();
  AffineHypersurface M(D, C.chart(), C.exponent(), n);
  const Lattice& lat = M.lattice();
  const Mat& L = M.chart();
  // Level set of the characteristic function phi(Y) = int_{C*} exp(-<Y, xi>) d xi.  With s = 1/(p+1)
  // the level set {phi = 1} is w = 1/phi(L(x,1)).  The dual cone is fanned into simplicial
  // cones (n_0, n_j, n_{j+1}), each contributing |det| / prod <Y, n>.
  std::vector<std::vector<Vec>> simplices;
  if (C.kind() == ConvexCone::Kind::Polytope) {
    std::vector<Vec> nr = C.facet_normals();
    if (C.dim() == 3) {
      Vec mid = Vec::Zero(3);
      for (const auto& v : nr) mid += v;
      const Eigen::Vector3d ax = Eigen::Vector3d(mid).normalized();
      const Eigen::Vector3d u = ax.unitOrthogonal(), v = ax.cross(u);
      std::sort(nr.begin(), nr.end(), [&](const Vec& a, const Vec& b) {
        return std::atan2(v.dot(Eigen::Vector3d(a)), u.dot(Eigen::Vector3d(a))) <
               std::atan2(v.dot(Eigen::Vector3d(b)), u.dot(Eigen::Vector3d(b)));
      });
      for (size_t j = 1; j + 1 < nr.size(); ++j) simplices.push_back({nr[0], nr[j], nr[j + 1]});
    } else {
      simplices.push_back(nr);
    }
  }
  double top = 0.0;
  for (int i = 0; i < lat.size(); ++i) {
    if (!lat.valid(i)) continue;
    const Vec x = lat.coord(i);
    double w;
    if (simplices.empty()) {
      w = 1.0 - x.squaredNorm();
    } else {
      Vec Y(x.size() + 1);
      Y << x, 1.0;
      Y = L * Y;
      double phi = 0.0;
      for (const auto& sx : simplices) {
        Mat V(Y.size(), Y.size());
        double prod = 1.0;
        for (size_t c = 0; c < sx.size(); ++c) {
          V.col(c) = sx[c];
          prod *= sx[c].dot(Y);
        }
        phi += std::abs(V.determinant()) / prod;
      }
      w = 1.0 / phi;
    }
    M.values()[i] = w;
    top = std::max(top, w);
  }
  for (double& v : M.values()) v *= 0.5 / top;
  return M;
}

AffineSolveResult solve_affine_sphere(const ConvexCone& C, int n, const NewtonParams& params) {
  return solve_affine_sphere(affine_initial_guess(C, n), params);
}

AffineSolveResult solve_affine_sphere(AffineHypersurface M, const NewtonParams& params) {
  if (!(params.target > 0.0) || params.max_iter < 0 || params.max_halvings < 0)
    throw std::invalid_argument("solve_affine_sphere: invalid Newton parameters");
  const Lattice& lat = M.lattice();
  const int p = M.p();
  const double s = M.exponent();
  const double e = 2.0 * p - s * (2.0 * p + 2.0);

  std::vector<int> unknown(lat.size(), -1);
  int N = 0;
  for (int k = 0; k < lat.size(); ++k)
    if (lat.valid(k)) unknown[k] = N++;
  std::vector<DerivativeRows> rows(lat.size());
  std::vector<bool> collar(lat.size(), false);
  std::vector<Vec> extrap(lat.size());
  for (int k = 0; k < lat.size(); ++k) {
    if (!lat.valid(k)) continue;
    rows[k] = derivative_rows(M, k);
    collar[k] = boundary_distance(M.domain(), lat.coord(k)) < params.collar * lat.h();
    if (collar[k]) extrap[k] = extrapolation_row(M, k);
  }
  if (!admissible(M, rows, collar, M.values()))
    throw std::invalid_argument("solve_affine_sphere: initial guess is not convex");

  auto collar_residual = [&](int k, const std::vector<double>& w) {
    const auto& st = M.stencil(k);
    double v = w[k];
    for (size_t m = 0; m < st.nodes.size(); ++m)
      if (st.nodes[m] >= 0) v -= extrap[k](m) * w[st.nodes[m]];
    return v;
  };
  auto residuals = [&](const std::vector<double>& w) {
    std::vector<double> r(lat.size(), 0.0);
    for (int k = 0; k < lat.size(); ++k)
      if (lat.valid(k)) r[k] = collar[k] ? collar_residual(k, w) : local_residual(M, rows[k], k, w).F;
    return r;
  };

  std::vector<double> w = M.values();
  std::vector<double> F = residuals(w);
  double res = max_abs(F), merit = sum_sq(F);
  AffineSolveResult out{M, res, 0, false, {}};
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  bool stalled = false;
  for (int it = 0;; ++it) {
    out.history.push_back(res);
    if (res <= params.target || it >= params.max_iter || stalled) {
      M.values() = w;
      out.surface = M;
      out.residual = res;
      out.iterations = it;
      out.converged = res <= params.target;
      return out;
    }
    std::vector<Eigen::Triplet<double>> trip;
    Vec rhs(N);
    for (int k = 0; k < lat.size(); ++k) {
      if (!lat.valid(k)) continue;
      const int r = unknown[k];
      if (collar[k]) {
        const auto& st = M.stencil(k);
        rhs(r) = -collar_residual(k, w);
        trip.emplace_back(r, r, 1.0);
        for (size_t m = 0; m < st.nodes.size(); ++m)
          if (st.nodes[m] >= 0 && extrap[k](m) != 0.0) trip.emplace_back(r, unknown[st.nodes[m]], -extrap[k](m));
        continue;
      }
      const Local L = local_residual(M, rows[k], k, w);
      rhs(r) = -L.F;
      const auto& st = M.stencil(k);
      // with cof = A^{-1}:  dF = -dw tr(cof H) - w tr(cof dH) + 2(1-s) g^T cof dg - e dw / w
      const Vec cg = 2.0 * (1.0 - s) * (L.cof * L.g);
      double diag = -(L.cof.cwiseProduct(L.H)).sum() - e / w[k];
      for (size_t m = 0; m < st.nodes.size(); ++m) {
        const int src = st.nodes[m];
        if (src < 0) continue;
        double v = 0.0;
        for (int a = 0; a < p; ++a) v += cg(a) * rows[k].d1[a](m);
        for (int a = 0; a < p; ++a)
          for (int b = 0; b < p; ++b) v -= w[k] * L.cof(a, b) * rows[k].d2[a * p + b](m);
        if (src == k) v += diag;
        trip.emplace_back(r, unknown[src], v);
      }
      bool self = false;
      for (int src : st.nodes) self |= src == k;
      if (!self) trip.emplace_back(r, r, diag);
    }
    Eigen::SparseMatrix<double> Jm(N, N);
    Jm.setFromTriplets(trip.begin(), trip.end());
    lu.compute(Jm);
    if (lu.info() != Eigen::Success) throw std::runtime_error("solve_affine_sphere: singular Jacobian");
    const Vec dw = lu.solve(rhs);
    double step = 1.0;
    bool accepted = false;
    for (int hv = 0; hv <= params.max_halvings; ++hv, step *= 0.5) {
      std::vector<double> trial = w;
      for (int k = 0; k < lat.size(); ++k)
        if (unknown[k] >= 0) trial[k] += step * dw(unknown[k]);
      if (!admissible(M, rows, collar, trial)) continue;
      const std::vector<double> Ft = residuals(trial);
      const double mt = sum_sq(Ft);
      if (mt < (1.0 - 1e-4 * step) * merit) {
        w = std::move(trial);
        F = Ft;
        res = max_abs(Ft);
        merit = mt;
        accepted = true;
        break;
      }
    }
    stalled = !accepted;
  }
}

}  // namespace robust::affine
