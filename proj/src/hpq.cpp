#include "robust/hpq.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace robust::hpq {

PoincareModel PoincareModel::standard(int p, int q) {
  QuadraticForm Q(p, q + 1);
  const int d = Q.dim();
  const Mat I = Mat::Identity(d, d);
  return PoincareModel{Q, I.leftCols(p), I.rightCols(q + 1)};
}

Vec poincare_embed(const Vec& u, const Vec& v, const PoincareModel& model) {
  if (u.size() != model.p() || v.size() != model.q() + 1)
    throw std::invalid_argument("poincare_embed: dimension mismatch");
  const double r2 = u.squaredNorm();
  if (!(r2 < 1.0)) throw std::domain_error("poincare_embed: |u| >= 1");
  const double a = 2.0 / (1.0 - r2), b = (1.0 + r2) / (1.0 - r2);
  return a * (model.E * u) + b * (model.F * v);
}

std::pair<Vec, Vec> poincare_project(const Vec& z, const PoincareModel& model, double tol) {
  if (z.size() != model.dim()) throw std::invalid_argument("poincare_project: dimension mismatch");
  const double n = model.Q(z, z);
  if (std::abs(n + 1.0) > tol * std::max(1.0, z.squaredNorm()))
    throw std::domain_error("poincare_project: point not on H^{p,q}");
  const Vec e = model.E.transpose() * z;
  const Vec f = model.F.transpose() * z;
  const double fn = f.norm();
  return {e / (1.0 + fn), f / fn};
}

Vec onto_hyperboloid(const Vec& z, const PoincareModel& model) {
  const double n = model.Q(z, z);
  if (!(n < 0.0)) throw std::domain_error("onto_hyperboloid: vector is not timelike");
  return z / std::sqrt(-n);
}

namespace {

// Image of the disk point on the unit sphere; the spherical disk metric is the
// round metric pulled back by this map.
Vec disk_to_sphere(const Vec& u) {
  const double r2 = u.squaredNorm();
  Vec s(u.size() + 1);
  s.head(u.size()) = 2.0 * u / (1.0 + r2);
  s(u.size()) = (1.0 - r2) / (1.0 + r2);
  return s;
}

double chord_angle(double chord) { return 2.0 * std::asin(std::min(1.0, 0.5 * chord)); }

}  // namespace

double spherical_dist_disk(const Vec& u, const Vec& up) {
  if (u.size() != up.size()) throw std::invalid_argument("spherical_dist_disk: dimension mismatch");
  if (!(u.squaredNorm() < 1.0) || !(up.squaredNorm() < 1.0))
    throw std::domain_error("spherical_dist_disk: point outside the open disk");
  return chord_angle((disk_to_sphere(u) - disk_to_sphere(up)).norm());
}

double spherical_dist_sphere(const Vec& v, const Vec& vp) {
  if (v.size() != vp.size()) throw std::invalid_argument("spherical_dist_sphere: dimension mismatch");
  if (std::abs(v.norm() - 1.0) > 1e-9 || std::abs(vp.norm() - 1.0) > 1e-9)
    throw std::domain_error("spherical_dist_sphere: not a unit vector");
  return chord_angle(std::min((v - vp).norm(), (v + vp).norm()));
}

double pseudo_distance(const Vec& o, const Vec& x, const QuadraticForm& Q) {
  // On the quadric |<o,x>| = 1 + <o -+ x, o -+ x>/2; the half-angle form stays accurate for close points.
  const double ox = Q(o, x);
  const Vec diff = ox < 0.0 ? Vec(o - x) : Vec(o + x);
  const double q = Q(diff, diff);
  if (!(q > 0.0)) return 0.0;
  if (q > 1.0) return std::acosh(std::max(std::abs(ox), 1.0));
  return 2.0 * std::asinh(0.5 * std::sqrt(q));
}

SpacelikeGraph::SpacelikeGraph(PoincareModel model, double r0, int n)
    : model_(std::move(model)), r0_(r0), lat_(Lattice::disk(model_.p(), n, r0)) {
  if (!(r0 > 0.0 && r0 < 1.0)) throw std::invalid_argument("SpacelikeGraph: r0 must lie in (0, 1)");
  Vec v0 = Vec::Zero(model_.q() + 1);
  v0(0) = 1.0;
  values_.assign(lat_.size(), v0);
  T_ = Mat::Identity(model_.dim(), model_.dim());
}

void SpacelikeGraph::set_value(int k, const Vec& v) {
  const double n = v.norm();
  if (v.size() != model_.q() + 1 || !(n > 0.0)) throw std::invalid_argument("set_value: bad S^q value");
  values_[k] = v / n;
}

void SpacelikeGraph::drop_node(int k) { lat_.set_valid(k, false); }

Vec SpacelikeGraph::point(int k) const { return T_ * poincare_embed(lat_.coord(k), values_[k], model_); }

std::vector<Vec> SpacelikeGraph::points() const {
  std::vector<Vec> pts(lat_.size());
  for (int k = 0; k < lat_.size(); ++k)
    if (lat_.valid(k)) pts[k] = point(k);
  return pts;
}

SpacelikeGraph transformed(const SpacelikeGraph& M, const Mat& g) {
  SpacelikeGraph out = M;
  out.set_transform(g * M.transform());
  return out;
}

SpacelikeGraph totally_geodesic(int p, int q, int n, double r0, const Vec& v0) {
  SpacelikeGraph M(PoincareModel::standard(p, q), r0, n);
  for (int k = 0; k < M.lattice().size(); ++k) M.set_value(k, v0);
  return M;
}

SpacelikeGraph boosted_totally_geodesic(int n, double r0, double b) {
  SpacelikeGraph M(PoincareModel::standard(2, 1), r0, n);
  const double th = std::tanh(b);
  for (int k = 0; k < M.lattice().size(); ++k) {
    const Vec x = M.lattice().coord(k);
    const double v2 = th * 2.0 * x(0) / (1.0 + x.squaredNorm());
    M.set_value(k, Eigen::Vector2d(std::sqrt(1.0 - v2 * v2), v2));
  }
  return M;
}

SpacelikeGraph isometric_ray_graph(int n, double r0) {
  SpacelikeGraph M(PoincareModel::standard(2, 1), r0, n);
  for (int k = 0; k < M.lattice().size(); ++k) {
    const Vec x = M.lattice().coord(k);
    const double th = std::asin(std::clamp(2.0 * x(0) / (1.0 + x.squaredNorm()), -1.0, 1.0));
    M.set_value(k, Eigen::Vector2d(std::cos(th), std::sin(th)));
  }
  return M;
}

double lipschitz_constant(const SpacelikeGraph& M) {
  const Lattice& lat = M.lattice();
  double best = 0.0;
  for (int k = 0; k < lat.size(); ++k) {
    if (!lat.valid(k)) continue;
    const int i = lat.ix(k), j = lat.iy(k);
    for (auto [a, b] : lat.ring_offsets()) {
      // visit each undirected edge once
      if (b < 0 || (b == 0 && a < 0)) continue;
      if (!lat.valid(i + a, j + b)) continue;
      const int k2 = lat.index(i + a, j + b);
      const double dd = spherical_dist_disk(lat.coord(k), lat.coord(k2));
      if (!(dd > 0.0)) throw std::domain_error("lipschitz_constant: coincident nodes");
      best = std::max(best, spherical_dist_sphere(M.value(k), M.value(k2)) / dd);
    }
  }
  return best;
}

namespace {

// Derivative of u along axis `axis` at node k: centered where possible,
// second-order one-sided next to the ring, first order as a last resort.
Vec du(const SpacelikeGraph& M, int k, int axis) {
  const Lattice& lat = M.lattice();
  const int i = lat.ix(k), j = lat.iy(k);
  const int di = axis == 0 ? 1 : 0, dj = axis == 1 ? 1 : 0;
  auto val = [&](int s) { return M.value(lat.index(i + s * di, j + s * dj)); };
  auto ok = [&](int s) { return lat.valid(i + s * di, j + s * dj); };
  const double h = lat.h();
  if (ok(1) && ok(-1)) return (val(1) - val(-1)) / (2.0 * h);
  if (ok(1) && ok(2)) return (-3.0 * val(0) + 4.0 * val(1) - val(2)) / (2.0 * h);
  if (ok(-1) && ok(-2)) return (3.0 * val(0) - 4.0 * val(-1) + val(-2)) / (2.0 * h);
  if (ok(1)) return (val(1) - val(0)) / h;
  if (ok(-1)) return (val(0) - val(-1)) / h;
  return Vec::Zero(M.value(k).size());
}

// Metric via the chain rule through the analytic differential of Pi.
Mat metric_at(const SpacelikeGraph& M, int k) {
  const PoincareModel& mod = M.model();
  const Vec x = M.lattice().coord(k);
  const Vec& v = M.value(k);
  const int p = mod.p();
  const double r2 = x.squaredNorm();
  const double a = 2.0 / (1.0 - r2), b = (1.0 + r2) / (1.0 - r2);
  const double w = 4.0 / ((1.0 - r2) * (1.0 - r2));
  const Vec Ex = mod.E * x, Fv = mod.F * v;
  Mat D(mod.dim(), p);
  for (int i = 0; i < p; ++i)
    D.col(i) = w * x(i) * (Ex + Fv) + a * mod.E.col(i) + b * (mod.F * du(M, k, i));
  Mat g = D.transpose() * mod.Q.signature() * D;
  return 0.5 * (g + g.transpose());
}

bool positive_definite(const Mat& g) {
  Eigen::LLT<Mat> llt(g);
  return llt.info() == Eigen::Success;
}

}  // namespace

Mat induced_metric(const SpacelikeGraph& M, int k) {
  if (!M.lattice().valid(k)) throw std::invalid_argument("induced_metric: node outside the grid");
  Mat g = metric_at(M, k);
  if (!positive_definite(g)) throw std::domain_error("not spacelike here");
  return g;
}

MetricField metric_field(const SpacelikeGraph& M) {
  const Lattice& lat = M.lattice();
  MetricField f;
  f.g.assign(lat.size(), Eigen::Matrix2d::Zero());
  f.ok.assign(lat.size(), false);
  for (int k = 0; k < lat.size(); ++k) {
    if (!lat.valid(k)) continue;
    const Mat g = metric_at(M, k);
    f.g[k].topLeftCorner(g.rows(), g.cols()) = g;
    f.ok[k] = positive_definite(g);
  }
  return f;
}

Vec mean_curvature(const SpacelikeGraph& M, const std::vector<Vec>& pts, int k, Vec* hn) {
  const Lattice& lat = M.lattice();
  if (!lat.interior(k)) throw std::invalid_argument("mean_curvature: node needs a full one-ring");
  const QuadraticForm& Q = M.model().Q;
  const Mat J = Q.signature();
  const int p = lat.p(), d = Q.dim();
  const int i = lat.ix(k), j = lat.iy(k);
  const double h = lat.h();
  auto X = [&](int a, int b) -> const Vec& { return pts[lat.index(i + a, j + b)]; };

  Mat D(d, p);
  std::vector<Vec> dd(p * p);
  D.col(0) = (X(1, 0) - X(-1, 0)) / (2.0 * h);
  dd[0] = (X(1, 0) - 2.0 * X(0, 0) + X(-1, 0)) / (h * h);
  if (p == 2) {
    D.col(1) = (X(0, 1) - X(0, -1)) / (2.0 * h);
    dd[3] = (X(0, 1) - 2.0 * X(0, 0) + X(0, -1)) / (h * h);
    dd[1] = dd[2] = (X(1, 1) - X(1, -1) - X(-1, 1) + X(-1, -1)) / (4.0 * h * h);
  }
  const Mat g = D.transpose() * J * D;
  if (!positive_definite(g)) throw std::domain_error("not spacelike here");
  const Mat ginv = g.inverse();
  Vec H = Vec::Zero(d);
  for (int a = 0; a < p; ++a)
    for (int b = 0; b < p; ++b) H += ginv(a, b) * dd[a * p + b];

  // Q-orthogonal complement of span{X, dX} seeded by the F basis, pivoting on
  // the most timelike remaining candidate.
  Mat W(d, p + 1);
  W.col(0) = X(0, 0);
  W.rightCols(p) = D;
  const Mat GW = W.transpose() * J * W;
  const Eigen::FullPivLU<Mat> lu(GW);
  const Mat TF = M.transform() * M.model().F;
  std::vector<Vec> cand;
  for (int c = 0; c < TF.cols(); ++c) {
    const Vec y = TF.col(c);
    cand.push_back(y - W * lu.solve(W.transpose() * (J * y)));
  }
  const int q = Q.q();
  std::vector<Vec> nu;
  std::vector<bool> used(cand.size(), false);
  for (int s = 0; s < q; ++s) {
    int best = -1;
    double bn = 0.0;
    for (size_t c = 0; c < cand.size(); ++c) {
      if (used[c]) continue;
      Vec y = cand[c];
      for (const auto& n : nu) y += Q(y, n) * n;
      const double n2 = -Q(y, y);
      if (n2 > bn) {
        bn = n2;
        best = static_cast<int>(c);
      }
    }
    if (best < 0 || bn < 1e-14 * std::max(1.0, cand[best].squaredNorm()))
      throw std::domain_error("degenerate normal frame");
    used[best] = true;
    Vec y = cand[best];
    for (const auto& n : nu) y += Q(y, n) * n;
    nu.push_back(y / std::sqrt(-Q(y, y)));
  }
  Vec coef(q);
  if (hn) *hn = Vec::Zero(d);
  for (int s = 0; s < q; ++s) {
    coef(s) = -Q(H, nu[s]);
    if (hn) *hn += coef(s) * nu[s];
  }
  return coef;
}

Vec mean_curvature(const SpacelikeGraph& M, int k) {
  const Lattice& lat = M.lattice();
  if (!lat.interior(k)) throw std::invalid_argument("mean_curvature: node needs a full one-ring");
  std::vector<Vec> pts(lat.size());
  const int i = lat.ix(k), j = lat.iy(k);
  for (int b = (lat.p() == 2 ? -1 : 0); b <= (lat.p() == 2 ? 1 : 0); ++b)
    for (int a = -1; a <= 1; ++a) pts[lat.index(i + a, j + b)] = M.point(lat.index(i + a, j + b));
  return mean_curvature(M, pts, k);
}

double maximality_residual(const SpacelikeGraph& M) {
  const auto pts = M.points();
  double r = 0.0;
  for (int k = 0; k < M.lattice().size(); ++k)
    if (M.lattice().interior(k)) r = std::max(r, mean_curvature(M, pts, k).norm());
  return r;
}

std::vector<double> intrinsic_distances(const SpacelikeGraph& M, int a) {
  return shortest_paths(M.lattice(), metric_field(M), a);
}

double intrinsic_distance(const SpacelikeGraph& M, int a, int b) {
  const double d = intrinsic_distances(M, a).at(b);
  if (std::isinf(d)) throw std::domain_error("intrinsic_distance: disconnected grid");
  return d;
}

namespace {

void catmull_rom(double t, double w[4]) {
  const double t2 = t * t, t3 = t2 * t;
  w[0] = 0.5 * (-t3 + 2.0 * t2 - t);
  w[1] = 0.5 * (3.0 * t3 - 5.0 * t2 + 2.0);
  w[2] = 0.5 * (-3.0 * t3 + 4.0 * t2 + t);
  w[3] = 0.5 * (t3 - t2);
}

}  // namespace

Vec interpolate(const SpacelikeGraph& M, const Vec& x) {
  const Lattice& lat = M.lattice();
  const double h = lat.h();
  const double fx = (x(0) - lat.lo()(0)) / h;
  const double fy = lat.p() == 2 ? (x(1) - lat.lo()(1)) / h : 0.0;
  const int i0 = static_cast<int>(std::floor(fx)), j0 = static_cast<int>(std::floor(fy));
  const double tx = fx - i0, ty = fy - j0;
  double wx[4], wy[4] = {0.0, 1.0, 0.0, 0.0};
  catmull_rom(tx, wx);
  if (lat.p() == 2) catmull_rom(ty, wy);
  const int jlo = lat.p() == 2 ? -1 : 0, jhi = lat.p() == 2 ? 2 : 0;

  bool full = true;
  for (int b = jlo; b <= jhi && full; ++b)
    for (int a = -1; a <= 2; ++a)
      if (!lat.valid(i0 + a, j0 + b)) { full = false; break; }
  Vec out = Vec::Zero(M.model().q() + 1);
  if (full) {
    for (int b = jlo; b <= jhi; ++b)
      for (int a = -1; a <= 2; ++a) out += wx[a + 1] * wy[b + 1] * M.value(lat.index(i0 + a, j0 + b));
    return out.normalized();
  }
  const int jb = lat.p() == 2 ? 1 : 0;
  bool bil = true;
  for (int b = 0; b <= jb; ++b)
    for (int a = 0; a <= 1; ++a)
      if (!lat.valid(i0 + a, j0 + b)) bil = false;
  if (bil) {
    for (int b = 0; b <= jb; ++b)
      for (int a = 0; a <= 1; ++a) {
        const double wgt = (a ? tx : 1.0 - tx) * (lat.p() == 2 ? (b ? ty : 1.0 - ty) : 1.0);
        out += wgt * M.value(lat.index(i0 + a, j0 + b));
      }
    return out.normalized();
  }
  const int k = lat.nearest_valid(x);
  if (k < 0 || (lat.coord(k) - x).norm() > 1.5 * h)
    throw std::domain_error("interpolate: point outside the sampled chart");
  return M.value(k);
}

double vertical_distance(const SpacelikeGraph& M, const Vec& y) {
  const Mat& T = M.transform();
  const Mat J = M.model().Q.signature();
  const Vec z = J * T.transpose() * J * y;  // T^{-1} y for T in SO(p,q+1)
  const auto [u, v] = poincare_project(onto_hyperboloid(z, M.model()), M.model());
  if (u.norm() > M.r0()) return std::numeric_limits<double>::infinity();
  return spherical_dist_sphere(v, interpolate(M, u));
}

SpacelikeGraph regraph(const SpacelikeGraph& M) {
  const Lattice& lat = M.lattice();
  const PoincareModel& mod = M.model();
  const Mat& T = M.transform();
  const Mat J = mod.Q.signature();
  const Mat Tinv = J * T.transpose() * J;
  const int p = mod.p();
  SpacelikeGraph out(mod, M.r0(), M.n());
  auto image = [&](const Vec& y) { return poincare_project(T * poincare_embed(y, interpolate(M, y), mod), mod, 1e-6); };
  for (int k = 0; k < lat.size(); ++k) {
    if (!lat.valid(k)) {
      out.drop_node(k);
      continue;
    }
    const Vec x = lat.coord(k);
    Vec y;
    bool ok = true;
    try {
      y = poincare_project(Tinv * poincare_embed(x, M.value(k), mod), mod, 1e-6).first;
      for (int it = 0; it < 40; ++it) {
        if (y.norm() > M.r0()) { ok = false; break; }
        const Vec r = image(y).first - x;
        if (r.norm() < 1e-14) break;
        Mat Jac(p, p);
        const double eps = 1e-7;
        for (int c = 0; c < p; ++c) {
          Vec yp = y;
          yp(c) += eps;
          if (yp.norm() > M.r0()) yp(c) -= 2.0 * eps;
          Jac.col(c) = (image(yp).first - x - r) / (yp(c) - y(c));
        }
        y -= Jac.fullPivLu().solve(r);
      }
      if (ok && y.norm() <= M.r0() && (image(y).first - x).norm() < 1e-9) out.set_value(k, image(y).second);
      else ok = false;
    } catch (const std::domain_error&) {
      ok = false;
    }
    if (!ok) out.drop_node(k);
  }
  if (!out.lattice().valid(out.center())) throw std::domain_error("regraph: centre has no preimage in the chart");
  return out;
}

bool detect_lightlike_ray(const SpacelikeGraph& M, const Vec& dir, double tol, int samples) {
  const Vec d = dir.normalized();
  const Vec u0 = interpolate(M, Vec::Zero(M.model().p()));
  for (int s = 1; s <= samples; ++s) {
    const double r = M.r0() * s / samples;
    const double ds = spherical_dist_sphere(interpolate(M, r * d), u0);
    if (std::abs(ds - 2.0 * std::atan(r)) > tol) return false;
  }
  return true;
}

C2Gap pointed_c2_compare(const SpacelikeGraph& A0, const SpacelikeGraph& B0, int base, double R) {
  if (A0.n() != B0.n() || A0.r0() != B0.r0() || A0.model().Q != B0.model().Q)
    throw std::invalid_argument("pointed_c2_compare: graphs do not share a chart");
  auto canonical = [](const SpacelikeGraph& M) {
    const Mat& T = M.transform();
    return (T - Mat::Identity(T.rows(), T.cols())).cwiseAbs().maxCoeff() == 0.0 ? M : regraph(M);
  };
  const SpacelikeGraph A = canonical(A0), B = canonical(B0);
  const Lattice& la = A.lattice();
  const Lattice& lb = B.lattice();
  if (!la.valid(base)) throw std::invalid_argument("pointed_c2_compare: basepoint outside the grid");
  const MetricField ga = metric_field(A), gb = metric_field(B);
  const auto dist = shortest_paths(la, ga, base);
  std::vector<int> ball;
  for (int k = 0; k < la.size(); ++k) {
    if (!(dist[k] <= R)) continue;
    if (!la.interior(k) || !lb.interior(k)) throw std::domain_error("increase r0 or decrease R");
    ball.push_back(k);
  }
  const int p = la.p();
  auto diff = [&](int k) -> Eigen::Matrix2d { return gb.g[k] - ga.g[k]; };
  C2Gap out{0.0, 0.0, 1.0, static_cast<int>(ball.size())};
  const double h = la.h();
  double lo = 1.0, hi = 1.0;
  const auto pa = A.points(), pb = B.points();
  for (int k : ball) {
    const int i = la.ix(k), j = la.iy(k);
    auto D = [&](int a, int b) { return diff(la.index(i + a, j + b)); };
    double c2 = D(0, 0).cwiseAbs().maxCoeff();
    c2 = std::max(c2, ((D(1, 0) - D(-1, 0)) / (2 * h)).cwiseAbs().maxCoeff());
    c2 = std::max(c2, ((D(1, 0) - 2 * D(0, 0) + D(-1, 0)) / (h * h)).cwiseAbs().maxCoeff());
    if (p == 2) {
      c2 = std::max(c2, ((D(0, 1) - D(0, -1)) / (2 * h)).cwiseAbs().maxCoeff());
      c2 = std::max(c2, ((D(0, 1) - 2 * D(0, 0) + D(0, -1)) / (h * h)).cwiseAbs().maxCoeff());
      c2 = std::max(c2, ((D(1, 1) - D(1, -1) - D(-1, 1) + D(-1, -1)) / (4 * h * h)).cwiseAbs().maxCoeff());
    }
    out.metric_c2_gap = std::max(out.metric_c2_gap, c2);
    out.embedding_gap = std::max(out.embedding_gap, (pb[k] - pa[k]).norm());
    for (auto [a, b] : la.ring_offsets()) {
      const int k2 = la.index(i + a, j + b);
      const Eigen::Vector2d v(a * h, p == 2 ? b * h : 0.0);
      const double la2 = v.dot(0.5 * (ga.g[k] + ga.g[k2]) * v);
      const double lb2 = v.dot(0.5 * (gb.g[k] + gb.g[k2]) * v);
      if (!(la2 > 0.0) || !(lb2 > 0.0)) throw std::domain_error("pointed_c2_compare: degenerate metric in the ball");
      const double r = std::sqrt(lb2 / la2);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
  }
  out.bilip = std::max(hi, 1.0 / lo);
  return out;
}

}  // namespace robust::hpq
