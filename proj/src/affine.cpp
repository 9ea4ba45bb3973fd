#include "robust/affine.hpp"

#include <Eigen/LU>
#include <Eigen/QR>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace robust::affine {

namespace {

// Nodes closer than this (in grid units) to the boundary make the fits ill-conditioned.
constexpr double kNodeMargin = 0.3;

const std::vector<std::array<int, 2>>& monomial_list(int p) {
  static const std::vector<std::array<int, 2>> m2 = {{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1},
                                                     {0, 2}, {3, 0}, {2, 1}, {1, 2}, {0, 3}};
  static const std::vector<std::array<int, 2>> m1 = {{0, 0}, {1, 0}, {2, 0}, {3, 0}};
  return p == 2 ? m2 : m1;
}

// d^k/dx^k x^a evaluated at t
double dpow(int a, int k, double t) {
  if (k > a) return 0.0;
  double c = 1.0;
  for (int i = 0; i < k; ++i) c *= a - i;
  return c * std::pow(t, a - k);
}

double monomial_derivative(const std::array<int, 2>& m, const std::array<int, 2>& order, const Vec& xi) {
  double v = dpow(m[0], order[0], xi(0));
  if (xi.size() == 2) v *= dpow(m[1], order[1], xi(1));
  else if (m[1] != 0 || order[1] != 0) return 0.0;
  return v;
}

double det_cols(const Mat& D1, int replace, const Vec& col, const Vec& last) {
  Mat B(D1.rows(), D1.cols() + 1);
  B.leftCols(D1.cols()) = D1;
  if (replace >= 0) B.col(replace) = col;
  B.col(D1.cols()) = last;
  return B.determinant();
}

Vec homog(const Vec& x) {
  Vec y(x.size() + 1);
  y.head(x.size()) = x;
  y(x.size()) = 1.0;
  return y;
}

}  // namespace

AffineHypersurface::AffineHypersurface(Domain dom, Mat L, double s, int n) : dom_(std::move(dom)), L_(std::move(L)), s_(s) {
  if (dom_.p < 1 || dom_.p > 2) throw std::invalid_argument("AffineHypersurface: p must be 1 or 2");
  if (L_.rows() != dom_.p + 1 || L_.cols() != dom_.p + 1) throw std::invalid_argument("AffineHypersurface: chart size");
  if (!(s_ > 0.0)) throw std::invalid_argument("AffineHypersurface: exponent must be positive");
  if (n < 5 || n % 2 == 0) throw std::invalid_argument("AffineHypersurface: grid size must be odd and >= 5");
  const auto [lo, hi] = dom_.bbox();
  const double h = (hi - lo).maxCoeff() / (n - 1);
  lat_ = Lattice(dom_.p, n, dom_.p == 2 ? n : 1, lo, h);
  for (int k = 0; k < lat_.size(); ++k) lat_.set_valid(k, dom_.contains(lat_.coord(k), kNodeMargin * h));
  w_.assign(lat_.size(), 0.0);
  build_stencils();
}

void AffineHypersurface::build_stencils() {
  const int p = dom_.p;
  const double h = lat_.h();
  const auto& mono = monomial_list(p);
  stencils_ = std::make_shared<std::vector<Stencil>>(lat_.size());
  for (int k = 0; k < lat_.size(); ++k) {
    if (!lat_.valid(k)) continue;
    Stencil& st = (*stencils_)[k];
    const Vec x0 = lat_.coord(k);
    const int i = lat_.ix(k), j = lat_.iy(k);
    const int r = 2;
    for (int b = (p == 2 ? -r : 0); b <= (p == 2 ? r : 0); ++b)
      for (int a = -r; a <= r; ++a) {
        Vec off(p);
        off(0) = a;
        if (p == 2) off(1) = b;
        if (lat_.valid(i + a, j + b)) {
          st.nodes.push_back(lat_.index(i + a, j + b));
          st.offsets.push_back(off);
          continue;
        }
        const double t = dom_.exit_param(x0, off * h);
        if (!std::isfinite(t)) continue;
        const Vec pt = t * off;
        bool dup = false;
        for (size_t m = 0; m < st.offsets.size(); ++m)
          if (st.nodes[m] < 0 && (st.offsets[m] - pt).norm() < 1e-9) dup = true;
        if (dup) continue;
        st.nodes.push_back(-1);
        st.offsets.push_back(pt);
      }
    const int m = static_cast<int>(st.offsets.size());
    for (int nm : {static_cast<int>(mono.size()), p == 2 ? 6 : 3}) {
      if (m < nm) continue;
      Mat V(m, nm);
      for (int r2 = 0; r2 < m; ++r2)
        for (int c = 0; c < nm; ++c) V(r2, c) = monomial_derivative(mono[c], {0, 0}, st.offsets[r2]);
      Eigen::CompleteOrthogonalDecomposition<Mat> cod(V);
      cod.setThreshold(1e-10);
      if (cod.rank() < nm) continue;
      st.coef = cod.pseudoInverse();
      break;
    }
    if (st.coef.size() == 0) throw std::runtime_error("AffineHypersurface: degenerate fit stencil");
  }
}

const std::vector<std::array<int, 2>>& AffineHypersurface::monomials(int) const { return monomial_list(dom_.p); }

Jet AffineHypersurface::jet_from(int k, const Vec& xi, const std::vector<double>& w, bool node_value) const {
  const Stencil& st = (*stencils_)[k];
  const int p = dom_.p;
  const double h = lat_.h();
  Vec data(st.nodes.size());
  for (size_t m = 0; m < st.nodes.size(); ++m) data(m) = st.nodes[m] >= 0 ? w[st.nodes[m]] : 0.0;
  const Vec c = st.coef * data;
  const auto& mono = monomial_list(p);
  auto deriv = [&](std::array<int, 2> order) {
    double v = 0.0;
    for (Eigen::Index q = 0; q < c.size(); ++q) v += c(q) * monomial_derivative(mono[q], order, xi);
    return v / std::pow(h, order[0] + order[1]);
  };
  Jet J;
  J.f = node_value ? w[k] : deriv({0, 0});
  J.d1 = Vec(p);
  J.d2 = Mat(p, p);
  J.d3.assign(p * p * p, 0.0);
  for (int a = 0; a < p; ++a) {
    std::array<int, 2> o{0, 0};
    o[a] = 1;
    J.d1(a) = deriv(o);
    for (int b = 0; b < p; ++b) {
      std::array<int, 2> o2 = o;
      ++o2[b];
      J.d2(a, b) = deriv(o2);
      for (int e = 0; e < p; ++e) {
        std::array<int, 2> o3 = o2;
        ++o3[e];
        J.d3[(a * p + b) * p + e] = deriv(o3);
      }
    }
  }
  return J;
}

Jet AffineHypersurface::jet(int k) const {
  if (!lat_.valid(k)) throw std::invalid_argument("jet: node outside the domain");
  return jet_from(k, Vec::Zero(dom_.p), w_, true);
}

Jet AffineHypersurface::jet_at(const Vec& x) const {
  if (!dom_.contains(x)) throw std::domain_error("jet_at: point outside the chart domain");
  const int k = lat_.nearest_valid(x);
  if (k < 0) throw std::domain_error("jet_at: empty grid");
  return jet_from(k, (x - lat_.coord(k)) / lat_.h(), w_, false);
}

SurfaceJet AffineHypersurface::surface_jet(const Vec& x, const Jet& j) const {
  const int p = dom_.p;
  const double s = s_, w = j.f;
  if (!(w > 0.0)) throw std::domain_error("surface_jet: w must be positive");
  const double c1 = -s * std::pow(w, -s - 1.0);
  const double c2 = s * (s + 1.0) * std::pow(w, -s - 2.0);
  const double c3 = -s * (s + 1.0) * (s + 2.0) * std::pow(w, -s - 3.0);
  const double psi = std::pow(w, -s);
  Vec d1 = c1 * j.d1;
  Mat d2 = c1 * j.d2 + c2 * j.d1 * j.d1.transpose();
  auto t3 = [&](int a, int b, int e) { return j.d3[(a * p + b) * p + e]; };
  std::vector<double> d3(p * p * p);
  for (int a = 0; a < p; ++a)
    for (int b = 0; b < p; ++b)
      for (int e = 0; e < p; ++e)
        d3[(a * p + b) * p + e] = c1 * t3(a, b, e) +
                                  c2 * (j.d2(a, b) * j.d1(e) + j.d2(a, e) * j.d1(b) + j.d2(b, e) * j.d1(a)) +
                                  c3 * j.d1(a) * j.d1(b) * j.d1(e);
  const Vec Y = L_ * homog(x);
  SurfaceJet S;
  S.X = psi * Y;
  S.D1 = Mat(p + 1, p);
  S.D2.resize(p * p);
  S.D3.resize(p * p * p);
  for (int a = 0; a < p; ++a) {
    S.D1.col(a) = d1(a) * Y + psi * L_.col(a);
    for (int b = 0; b < p; ++b) {
      S.D2[a * p + b] = d2(a, b) * Y + d1(a) * L_.col(b) + d1(b) * L_.col(a);
      for (int e = 0; e < p; ++e)
        S.D3[(a * p + b) * p + e] =
            d3[(a * p + b) * p + e] * Y + d2(a, b) * L_.col(e) + d2(a, e) * L_.col(b) + d2(b, e) * L_.col(a);
    }
  }
  return S;
}

Vec AffineHypersurface::point(int k) const {
  if (!lat_.valid(k) || !(w_[k] > 0.0)) throw std::domain_error("point: node outside the surface");
  return std::pow(w_[k], -s_) * (L_ * homog(lat_.coord(k)));
}

Vec AffineHypersurface::point_at(const Vec& x) const {
  const double w = jet_at(x).f;
  if (!(w > 0.0)) throw std::domain_error("point_at: w must be positive");
  return std::pow(w, -s_) * (L_ * homog(x));
}

Vec AffineHypersurface::chart_point(const Vec& z) const {
  const Vec y = L_.partialPivLu().solve(z);
  const int p = dom_.p;
  if (!(y(p) > 0.0)) throw std::domain_error("chart_point: ray outside the chart");
  return y.head(p) / y(p);
}

AffineHypersurface from_function(const Domain& dom, const Mat& L, double s, int n,
                                 const std::function<double(const Vec&)>& w) {
  AffineHypersurface M(dom, L, s, n);
  for (int k = 0; k < M.lattice().size(); ++k)
    if (M.lattice().valid(k)) M.values()[k] = w(M.lattice().coord(k));
  return M;
}

AffineHypersurface hyperboloid(int p, int n) {
  const ConvexCone C = ConvexCone::round(Vec::Unit(p + 1, p), std::atan(1.0));
  return from_function(C.chart_domain(), C.chart(), 0.5, n, [](const Vec& x) { return 1.0 - x.squaredNorm(); });
}

AffineHypersurface titeica(int p, int n, double c) {
  const ConvexCone C = ConvexCone::orthant(p + 1);
  const Mat L = C.chart();
  return from_function(C.chart_domain(), L, 1.0 / (p + 1), n, [&](const Vec& x) {
    const Vec z = L * homog(x);
    return z.prod() / c;
  });
}

AffineHypersurface hemisphere(int n) {
  Domain D;
  D.p = 2;
  D.kind = Domain::Kind::Ball;
  return from_function(D, Mat::Identity(3, 3), 0.5, n, [](const Vec& x) { return 1.0 + x.squaredNorm(); });
}

AffineStructure affine_structure(const AffineHypersurface& M, const Vec& x, const Mat& K, const Vec& c) {
  const SurfaceJet S = M.surface_jet_at(x);
  const int p = M.p(), d = M.dim();
  const Vec xi = K * S.X + c;
  Mat B(d, d);
  B.leftCols(p) = S.D1;
  B.col(p) = xi;
  double scale = 1.0;
  for (int i = 0; i < d; ++i) scale *= B.col(i).norm();
  if (!(std::abs(B.determinant()) > 1e-10 * scale)) throw std::domain_error("not transverse");
  const Eigen::PartialPivLU<Mat> lu(B);
  AffineStructure out{Mat(p, p), Mat(p, p), Vec(p)};
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) out.sigma(i, j) = lu.solve(S.D2[i * p + j])(p);
    const Vec dxi = lu.solve(K * S.D1.col(i));
    out.S.col(i) = -dxi.head(p);
    out.tau(i) = dxi(p);
  }
  return out;
}

AffineData affine_normal(const AffineHypersurface& M, const Vec& x) {
  const SurfaceJet S = M.surface_jet_at(x);
  const int p = M.p();
  Mat G(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) G(i, j) = det_cols(S.D1, -1, Vec(), S.D2[i * p + j]);
  G = 0.5 * (G + G.transpose());
  const Eigen::SelfAdjointEigenSolver<Mat> es(G);
  const Vec ev = es.eigenvalues();
  const bool pos = ev.minCoeff() > 0.0, neg = ev.maxCoeff() < 0.0;
  if (!pos && !neg) throw std::domain_error("non-convex");
  const double sgn = pos ? 1.0 : -1.0;
  const double detG = std::abs(G.determinant());
  const double e = 1.0 / (p + 2);
  const double scale = std::pow(detG, -e);
  const Mat h = sgn * G * scale;
  const Mat Ginv = G.inverse();
  // derivatives of G, then of h
  std::vector<Mat> dG(p, Mat(p, p)), dh(p, Mat(p, p));
  for (int k = 0; k < p; ++k) {
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j) {
        double v = det_cols(S.D1, -1, Vec(), S.D3[(i * p + j) * p + k]);
        for (int m = 0; m < p; ++m) v += det_cols(S.D1, m, S.D2[m * p + k], S.D2[i * p + j]);
        dG[k](i, j) = v;
      }
    dG[k] = 0.5 * (dG[k] + dG[k].transpose());
    const double dlog = (Ginv * dG[k]).trace();
    dh[k] = sgn * scale * dG[k] - e * dlog * h;
  }
  const Mat hinv = h.inverse();
  Vec lap = Vec::Zero(M.dim());
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) {
      Vec term = S.D2[i * p + j];
      for (int k = 0; k < p; ++k) {
        double gam = 0.0;
        for (int l = 0; l < p; ++l) gam += 0.5 * hinv(k, l) * (dh[i](j, l) + dh[j](i, l) - dh[l](i, j));
        term -= gam * S.D1.col(k);
      }
      lap += hinv(i, j) * term;
    }
  return AffineData{lap / p, h, true};
}

SphereCheck is_affine_sphere(const AffineHypersurface& M, double tol, double margin) {
  const Lattice& lat = M.lattice();
  SphereCheck out{true, 0.0, -1, true};
  for (int k = 0; k < lat.size(); ++k) {
    if (!lat.valid(k) || !M.domain().contains(lat.coord(k), margin)) continue;
    AffineData ad;
    try {
      ad = affine_normal(M, k);
    } catch (const std::domain_error&) {
      out.ok = false;
      out.worst = k;
      out.max_dev = std::numbers::pi / 2;
      continue;
    }
    const Vec X = M.point(k);
    const Vec a = ad.xi.normalized(), b = X.normalized();
    const double dev = std::atan2((a - a.dot(b) * b).norm(), std::abs(a.dot(b)));
    if (a.dot(b) <= 0.0) out.hyperbolic = false;
    if (dev > out.max_dev) {
      out.max_dev = dev;
      out.worst = k;
    }
  }
  out.ok = out.ok && out.max_dev <= tol && out.hyperbolic;
  return out;
}

MetricField affine_metric_field(const AffineHypersurface& M) {
  const Lattice& lat = M.lattice();
  MetricField f;
  f.g.assign(lat.size(), Eigen::Matrix2d::Zero());
  f.ok.assign(lat.size(), false);
  for (int k = 0; k < lat.size(); ++k) {
    if (!lat.valid(k)) continue;
    try {
      const Mat h = affine_normal(M, k).metric;
      f.g[k].topLeftCorner(h.rows(), h.cols()) = h;
      f.ok[k] = true;
    } catch (const std::domain_error&) {
    }
  }
  return f;
}

std::vector<double> affine_distances(const AffineHypersurface& M, int source) {
  return shortest_paths(M.lattice(), affine_metric_field(M), source);
}

Vec support_functional(const AffineHypersurface& M, const Vec& x) {
  const SurfaceJet S = M.surface_jet_at(x);
  const int p = M.p(), d = M.dim();
  Mat A(d, d);
  A.topRows(p) = S.D1.transpose();
  A.row(p) = S.X.transpose();
  const Eigen::FullPivLU<Mat> lu(A);
  if (lu.rank() < d) throw std::domain_error("support_functional: degenerate tangent data");
  return lu.solve(Vec::Unit(d, p));
}

Vec minimal_norm_basepoint(const AffineHypersurface& M) {
  const Lattice& lat = M.lattice();
  int best = -1;
  double bn = std::numeric_limits<double>::infinity();
  for (int k = 0; k < lat.size(); ++k) {
    if (!lat.valid(k)) continue;
    const double n = M.point(k).norm();
    if (n < bn) {
      bn = n;
      best = k;
    }
  }
  if (best < 0) throw std::domain_error("minimal_norm_basepoint: empty surface");
  Vec x = lat.coord(best);
  for (int it = 0; it < 50; ++it) {
    const SurfaceJet S = M.surface_jet_at(x);
    const int p = M.p();
    const Vec grad = S.D1.transpose() * S.X;
    Mat H = S.D1.transpose() * S.D1;
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j) H(i, j) += S.X.dot(S.D2[i * p + j]);
    if (grad.norm() <= 1e-15 * S.X.norm() * S.D1.norm()) break;
    Vec step = H.ldlt().solve(grad);
    double lam = 1.0;
    while (!M.domain().contains(x - lam * step) && lam > 1e-8) lam *= 0.5;
    const Vec xn = x - lam * step;
    if ((xn - x).norm() < 1e-16) break;
    x = xn;
  }
  return x;
}

ConvexCone asymptotic_cone(const AffineHypersurface& M) {
  const Mat& L = M.chart();
  if (M.domain().kind == Domain::Kind::Ball) {
    return ConvexCone::round(Vec::Unit(M.dim(), M.p()), std::atan(1.0)).transformed(L);
  }
  std::vector<Vec> rays;
  for (const Vec& v : M.domain().vertices()) rays.push_back(L * homog(v));
  return ConvexCone::polytope(rays);
}

namespace {

struct CurvePoint {
  double t, alpha, alpha_dot, phi;
};

}  // namespace

SectorCurve sector_curve(const AffineHypersurface& M, const Vec& xo, const Vec& xx, double t_lo, double t_hi,
                         int samples) {
  const Vec o = M.point_at(xo), X = M.point_at(xx);
  const ConvexCone C = asymptotic_cone(M);
  const Sector sec = sector(C, o, X);
  if (sec.phi_y == 0.0) throw std::domain_error("sector extraction failed (parallel points)");
  const Vec up = std::cos(sec.phi_b) * sec.e1 + std::sin(sec.phi_b) * sec.e2;
  const Vec um = std::cos(sec.phi_a) * sec.e1 + std::sin(sec.phi_a) * sec.e2;
  Mat B(M.dim(), 2);
  B.col(0) = up;
  B.col(1) = um;
  const auto qr = B.colPivHouseholderQr();
  const Vec ab0 = qr.solve(o);
  if (!(ab0(0) > 0.0 && ab0(1) > 0.0)) throw std::domain_error("sector extraction failed");
  SectorCurve out;
  out.u_plus = ab0(0) * up;
  out.u_minus = ab0(1) * um;
  B.col(0) = out.u_plus;
  B.col(1) = out.u_minus;
  const auto qr2 = B.colPivHouseholderQr();
  const Vec abx = qr2.solve(X);
  out.t_x = 0.5 * std::log(abx(0) / abx(1));

  const Mat Linv = M.chart().inverse();
  const int p = M.p();
  const double s = M.exponent();
  const Vec phi_o = support_functional(M, xo);
  auto eval = [&](double t, CurvePoint& cp) -> bool {
    const Vec r = std::exp(t) * out.u_plus + std::exp(-t) * out.u_minus;
    const Vec rd = std::exp(t) * out.u_plus - std::exp(-t) * out.u_minus;
    const Vec y = Linv * r, yd = Linv * rd;
    const double kap = y(p), kapd = yd(p);
    if (!(kap > 0.0)) return false;
    const Vec x = y.head(p) / kap;
    if (!M.domain().contains(x)) return false;
    Jet j;
    try {
      j = M.jet_at(x);
    } catch (const std::domain_error&) {
      return false;
    }
    if (!(j.f > 0.0)) return false;
    const Vec xd = (yd.head(p) - x * kapd) / kap;
    cp.t = t;
    cp.alpha = -s * std::log(j.f) - std::log(kap);
    cp.alpha_dot = -s * j.d1.dot(xd) / j.f - kapd / kap;
    cp.phi = phi_o.dot(std::pow(j.f, -s) / kap * r);
    return true;
  };
  CurvePoint c0;
  if (!eval(0.0, c0)) throw std::domain_error("sector extraction failed (basepoint off chart)");
  out.law_gap = out.law_gap_plus = out.max_abs_alpha_dot = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double t = samples == 1 ? t_lo : t_lo + (t_hi - t_lo) * i / (samples - 1);
    CurvePoint cp;
    if (!eval(t, cp)) continue;
    out.t.push_back(cp.t);
    out.alpha.push_back(cp.alpha);
    out.alpha_dot.push_back(cp.alpha_dot);
    out.phi.push_back(cp.phi);
    const double ea = std::exp(cp.alpha - c0.alpha);
    const double pred = ea * (std::cosh(t) - c0.alpha_dot * std::sinh(t));
    const double pred_plus = ea * (std::cosh(t) + c0.alpha_dot * std::sinh(t));
    out.law_gap = std::max(out.law_gap, std::abs(cp.phi - pred) / std::abs(pred));
    out.law_gap_plus = std::max(out.law_gap_plus, std::abs(cp.phi - pred_plus) / std::abs(pred_plus));
    out.max_abs_alpha_dot = std::max(out.max_abs_alpha_dot, std::abs(cp.alpha_dot));
  }
  if (out.t.empty()) throw std::domain_error("sector extraction failed (no samples in chart)");
  return out;
}

DominationReport affine_domination_check(const AffineHypersurface& M, int o, const std::vector<int>& xs, double c,
                                         double slack, double dist_slack) {
  if (!(c > 1.0)) throw std::invalid_argument("affine_domination_check: c must exceed 1");
  const double a = 1.0 - 1.0 / c;
  const double floor = std::log((1.0 - a) / 2.0);
  const Lattice& lat = M.lattice();
  const Vec xo = lat.coord(o);
  const auto dist = affine_distances(M, o);
  DominationReport rep;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  for (int k : xs) {
    if (k == o) continue;
    const Vec xx = lat.coord(k);
    const double tx = std::abs(sector_curve(M, xo, xx, 0.0, 0.0, 1).t_x);
    const SectorCurve sc = sector_curve(M, xo, xx, -tx, tx, 41);
    for (size_t i = 0; i < sc.t.size(); ++i) {
      const double margin = std::log(std::abs(sc.phi[i])) - ((1.0 - a) * std::abs(sc.t[i]) + floor);
      ++rep.checked;
      rep.worst_margin = std::min(rep.worst_margin, margin);
      if (margin < -slack) ++rep.violations;
    }
    // d_M(o,x) <= c t_x  and the resulting bound through phi_o at t_x
    const double phi_x = std::abs(support_functional(M, xo).dot(M.point(k)));
    const double bound = std::min(c * tx, c / (1.0 - a) * (std::log(phi_x) - floor));
    ++rep.checked;
    const double dm = dist[k] / (1.0 + dist_slack);
    rep.worst_distance_margin = std::min(rep.worst_distance_margin, bound - dm);
    if (dm > bound) ++rep.distance_violations;
  }
  return rep;
}

double benoist_hulin_gap(const AffineHypersurface& M, int source, const std::vector<int>& targets) {
  const auto dist = affine_distances(M, source);
  const ConvexCone C = asymptotic_cone(M);
  const Vec o = M.point(source);
  double best = 0.0;
  for (int k : targets) {
    if (k == source || !std::isfinite(dist[k])) continue;
    const double h = 0.5 * hilbert_distance(C, o, M.point(k));
    if (h <= 0.0) continue;
    best = std::max(best, dist[k] / h);
  }
  return best;
}

}  // namespace robust::affine
