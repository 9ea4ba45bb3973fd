#include "robust/rep_actions.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace robust::rep {

using hpq::SpacelikeGraph;
using affine::AffineHypersurface;

std::string to_string(Family f) { return f == Family::MaximalHpq ? "maximal_hpq" : "affine_sphere"; }

Family family_from_string(const std::string& s) {
  if (s == "maximal_hpq") return Family::MaximalHpq;
  if (s == "affine_sphere") return Family::AffineSphere;
  throw std::invalid_argument("unknown family tag '" + s + "'");
}

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

Mat so_inverse(const Mat& g, const forms::QuadraticForm& Q) {
  const Mat J = Q.signature();
  return J * g.transpose() * J;
}

double max_generator_norm(const Representation& r) {
  double m = 0.0;
  for (const auto& g : r.matrices) m = std::max(m, g.norm());
  return m;
}

// Chart point of the underlying graph and its ambient image.
Vec graph_point(const SpacelikeGraph& M, const Vec& x) {
  return M.transform() * hpq::poincare_embed(x, hpq::interpolate(M, x), M.model());
}

}  // namespace

// ---------------------------------------------------------------------------

double invariance_residual(const Representation& rho, const SpacelikeGraph& M, const Word& w, double sample_frac) {
  const Mat g = evaluate(rho, w);
  const Lattice& lat = M.lattice();
  const auto pts = M.points();
  double worst = 0.0;
  bool any = false;
  for (int k = 0; k < lat.size(); ++k) {
    if (!lat.valid(k) || lat.coord(k).norm() > sample_frac * M.r0()) continue;
    const double d = hpq::vertical_distance(M, g * pts[k]);
    if (!std::isfinite(d)) continue;
    any = true;
    worst = std::max(worst, d);
  }
  return any ? worst : std::numeric_limits<double>::infinity();
}

double invariance_residual(const Representation& rho, const SpacelikeGraph& M, double sample_frac) {
  double worst = 0.0;
  for (int s = 1; s <= rho.group.rank(); ++s) worst = std::max(worst, invariance_residual(rho, M, Word{s}, sample_frac));
  return worst;
}

double invariance_residual(const Representation& rho, const AffineHypersurface& M, const Word& w, double margin) {
  const Mat g = evaluate(rho, w);
  const Lattice& lat = M.lattice();
  const Mat Linv = M.chart().inverse();
  double worst = 0.0;
  bool any = false;
  for (int k = 0; k < lat.size(); ++k) {
    if (!lat.valid(k) || !M.domain().contains(lat.coord(k), margin)) continue;
    const Vec z = g * M.point(k);
    const Vec y = Linv * z;
    if (!(y(M.p()) > 0.0)) continue;
    const Vec x = y.head(M.p()) / y(M.p());
    if (!M.domain().contains(x, margin)) continue;
    any = true;
    worst = std::max(worst, std::abs(std::log(z.norm() / M.point_at(x).norm())));
  }
  return any ? worst : std::numeric_limits<double>::infinity();
}

double invariance_residual(const Representation& rho, const AffineHypersurface& M, double margin) {
  double worst = 0.0;
  for (int s = 1; s <= rho.group.rank(); ++s) worst = std::max(worst, invariance_residual(rho, M, Word{s}, margin));
  return worst;
}

// ---------------------------------------------------------------------------

HpqBasepoint select_basepoint(const SpacelikeGraph& M) {
  const auto& mod = M.model();
  const int p = mod.p();
  const double h = M.lattice().h();
  auto e_part = [&](const Vec& x) -> Vec { return mod.E.transpose() * graph_point(M, x); };
  Vec x = Vec::Zero(p);
  const bool identity = (M.transform() - Mat::Identity(mod.dim(), mod.dim())).norm() == 0.0;
  if (!identity) {
    // Newton on the E-component, finite-difference Jacobian
    for (int it = 0; it < 60; ++it) {
      const Vec r = e_part(x);
      if (r.norm() < 1e-13) break;
      Mat Jm(p, p);
      const double dh = 1e-6;
      for (int a = 0; a < p; ++a) {
        Vec xp = x, xm = x;
        xp(a) += dh;
        xm(a) -= dh;
        Jm.col(a) = (e_part(xp) - e_part(xm)) / (2 * dh);
      }
      Vec step = Jm.fullPivLu().solve(r);
      double lam = 1.0;
      while ((x - lam * step).norm() > M.r0() && lam > 1e-6) lam *= 0.5;
      x -= lam * step;
    }
    if (e_part(x).norm() > 1e-9 || x.norm() > M.r0() - 2 * h) {
      // origin not sampled: interior node with the smallest disk component
      const auto& L = M.lattice();
      double best = std::numeric_limits<double>::infinity();
      for (int k = 0; k < L.size(); ++k) {
        if (!L.valid(k) || L.coord(k).norm() > M.r0() - 2 * h) continue;
        const double e = e_part(L.coord(k)).norm();
        if (e < best) best = e, x = L.coord(k);
      }
      if (!std::isfinite(best)) throw std::domain_error("select_basepoint: chart has no interior node");
    }
  }
  return basepoint_at(M, x);
}

HpqBasepoint basepoint_at(const SpacelikeGraph& M, const Vec& x) {
  const auto& mod = M.model();
  const int p = mod.p();
  const double h = M.lattice().h();
  HpqBasepoint b;
  b.chart = x;
  b.point = graph_point(M, x);
  b.tangent = Mat(mod.dim(), p);
  for (int a = 0; a < p; ++a) {
    Vec xp = x, xm = x;
    xp(a) += h;
    xm(a) -= h;
    b.tangent.col(a) = (graph_point(M, xp) - graph_point(M, xm)) / (2 * h);
  }
  return b;
}

Vec select_basepoint(const AffineHypersurface& M) { return affine::minimal_norm_basepoint(M); }

namespace {

// Q-orthonormal frame [t_1..t_p, o, n_1..n_q] at a spacelike basepoint.  Tangents come from the
// chart directions and normal candidates from T F, so the frame of g M is g times the frame of M.
Mat hpq_frame(const HpqBasepoint& b, const hpq::PoincareModel& mod, const Mat& T) {
  const auto& Q = mod.Q;
  const int p = mod.p(), d = mod.dim();
  Mat B(d, d);
  const Vec o = b.point;
  for (int a = 0; a < p; ++a) {
    Vec t = b.tangent.col(a);
    t += Q(t, o) * o;  // difference quotients are only tangent up to O(h^2)
    for (int c = 0; c < a; ++c) t -= Q(B.col(c), t) * B.col(c);
    const double n2 = Q(t, t);
    if (!(n2 > 1e-12 * b.tangent.col(a).squaredNorm())) throw std::domain_error("frame degenerate");
    B.col(a) = t / std::sqrt(n2);
  }
  B.col(p) = o;
  // normal frame: projections of F off span(T, o), pivoting on the most negative norm
  std::vector<Vec> cand;
  for (int c = 0; c < mod.F.cols(); ++c) {
    Vec f = T * mod.F.col(c);
    for (int a = 0; a < p; ++a) f -= Q(B.col(a), f) * B.col(a);
    cand.push_back(f + Q(f, o) * o);
  }
  std::vector<bool> used(cand.size(), false);
  for (int c = p + 1; c < d; ++c) {
    std::vector<Vec> reduced(cand.size());
    double best = 0.0;
    for (size_t i = 0; i < cand.size(); ++i) {
      if (used[i]) continue;
      Vec v = cand[i];
      for (int e = p + 1; e < c; ++e) v += Q(B.col(e), v) * B.col(e);
      reduced[i] = v;
      best = std::max(best, -Q(v, v));
    }
    if (!(best > 1e-12)) throw std::domain_error("frame degenerate");
    for (size_t i = 0; i < cand.size(); ++i) {
      if (used[i] || -Q(reduced[i], reduced[i]) < 0.5 * best) continue;
      used[i] = true;
      B.col(c) = reduced[i] / std::sqrt(-Q(reduced[i], reduced[i]));
      break;
    }
  }
  return B;
}

Mat canonical_hpq(const hpq::PoincareModel& mod) {
  Mat C(mod.dim(), mod.dim());
  C << mod.E, mod.F;
  return C;
}

}  // namespace

Mat renormalize(const SpacelikeGraph& M) { return renormalize(M, select_basepoint(M)); }

Mat renormalize(const SpacelikeGraph& M, const HpqBasepoint& b) {
  const auto& mod = M.model();
  Mat B = hpq_frame(b, mod, M.transform());
  const Mat C = canonical_hpq(mod);
  // B^{-1} = S B^T J with S the signature of the frame
  Vec s(mod.dim());
  for (int i = 0; i < mod.dim(); ++i) s(i) = i < mod.p() ? 1.0 : -1.0;
  Mat g = C * s.asDiagonal() * B.transpose() * mod.Q.signature();
  if (g.determinant() < 0) {
    B.col(mod.dim() - 1) *= -1.0;
    if (mod.q() == 0) B.col(0) *= -1.0;
    g = C * s.asDiagonal() * B.transpose() * mod.Q.signature();
  }
  return g;
}

double canonical_residual(const SpacelikeGraph& M, const Mat& g) {
  return canonical_residual(M.model(), select_basepoint(M), g);
}

double canonical_residual(const hpq::PoincareModel& mod, const HpqBasepoint& b, const Mat& g) {
  const Vec o = g * b.point;
  double r = (o - mod.F.col(0)).norm();
  for (int a = 0; a < mod.p(); ++a) {
    const Vec t = g * b.tangent.col(a);
    r = std::max(r, (mod.F.transpose() * t).norm() / t.norm());
  }
  return r;
}

Vec affine_canonical_point(int p) { return Vec::Constant(p + 1, 1.0 / std::sqrt(p + 1.0)); }

namespace {

// Orthonormal basis of c^perp with det[U, c] = 1.
Mat canonical_complement(const Vec& c) {
  const int d = static_cast<int>(c.size());
  Eigen::HouseholderQR<Mat> qr(c);
  const Mat Qm = qr.householderQ();
  Mat U = Qm.rightCols(d - 1);
  Mat full(d, d);
  full << U, c;
  if (full.determinant() < 0) U.col(0) *= -1.0;
  return U;
}

}  // namespace

Mat renormalize(const AffineHypersurface& M, const Vec& x) {
  const int p = M.p(), d = M.dim();
  const affine::SurfaceJet S = M.surface_jet_at(x);
  const Mat H = affine::affine_normal(M, x).metric;
  const Vec c = affine_canonical_point(p);
  const Mat U = canonical_complement(c);
  Mat coords = Mat::Identity(p, p);  // affine-orthonormal tangent frame in the coordinate basis
  for (int a = 0; a < p; ++a) {
    Vec t = coords.col(a);
    for (int b = 0; b < a; ++b) t -= (coords.col(b).dot(H * t)) * coords.col(b);
    const double n2 = t.dot(H * t);
    if (!(n2 > 1e-14)) throw std::domain_error("frame degenerate");
    coords.col(a) = t / std::sqrt(n2);
  }
  Mat B(d, d);
  B.leftCols(p) = S.D1 * coords;
  B.col(p) = S.X;
  double det = B.determinant();
  if (det < 0) {
    B.col(0) *= -1.0;
    det = -det;
  }
  if (!(det > 0.0)) throw std::domain_error("frame degenerate");
  const double lam = std::pow(det, 1.0 / p);
  Mat C(d, d);
  C << lam * U, c;
  return C * B.inverse();
}

double canonical_residual(const AffineHypersurface& M, const Vec& x, const Mat& g) {
  const affine::SurfaceJet S = M.surface_jet_at(x);
  const Vec c = affine_canonical_point(M.p());
  double r = (g * S.X - c).norm();
  for (int a = 0; a < M.p(); ++a) {
    const Vec t = g * S.D1.col(a);
    r = std::max(r, std::abs(t.dot(c)) / t.norm());
  }
  return r;
}

// ---------------------------------------------------------------------------

bool bounded_proxy(const std::vector<double>& v) {
  const int N = static_cast<int>(v.size());
  if (N < 2) return true;
  int arg = 0;
  for (int i = 1; i < N; ++i)
    if (v[i] > v[arg]) arg = i;
  const int cut = static_cast<int>(std::floor(0.8 * N));
  if (arg < cut) return true;
  const int n0 = std::max(1, cut);
  double before = 0.0;
  for (int i = 0; i < n0; ++i) before = std::max(before, v[i]);
  return v[arg] - before < std::log(static_cast<double>(N) / n0);
}

TailWindow select_tail(const std::vector<Representation>& seq, double window, double tie) {
  const int N = static_cast<int>(seq.size());
  if (N == 0) throw std::invalid_argument("select_tail: empty sequence");
  const int len = std::clamp(static_cast<int>(std::ceil(window * N)), std::min(2, N), N);
  TailWindow best{N - len, N, std::numeric_limits<double>::infinity()};
  for (int b = N - len; b >= 0; --b) {
    double gap = 0.0, scale = 0.0;
    for (int i = b; i < b + len; ++i)
      for (int j = i + 1; j < b + len; ++j)
        for (size_t s = 0; s < seq[i].matrices.size(); ++s) {
          gap = std::max(gap, (seq[i].matrices[s] - seq[j].matrices[s]).norm());
          scale = std::max(scale, seq[j].matrices[s].norm());
        }
    // gaps below the tie level count as equal so that the latest such window wins
    const double rel = len < 2 ? 0.0 : gap / std::max(1.0, scale);
    if (std::max(rel, tie) < std::max(best.gap, tie)) best = {b, b + len, rel};
  }
  return best;
}

namespace {

template <class Surface, class Ops>
PipelineReport run_pipeline(const std::vector<Representation>& rho, const std::vector<Surface>& M,
                            const PipelineParams& prm, Ops ops) {
  if (rho.empty() || rho.size() != M.size())
    throw std::invalid_argument("renormalization_pipeline: need equally many representations and submanifolds");
  const int N = static_cast<int>(rho.size());
  const int r = rho.front().group.rank();
  PipelineReport rep;
  rep.family = ops.family;
  double cond = 1.0;
  for (int n = 0; n < N; ++n) {
    if (rho[n].group.rank() != r) throw std::invalid_argument("renormalization_pipeline: generator count varies");
    rep.input_residual.push_back(ops.residual(rho[n], M[n]));
    const Mat g = ops.renormalize(M[n]);
    rep.renormalizers.push_back(g);
    rep.canonical_residual.push_back(ops.canonical(M[n], g));
    rep.renormalized.push_back(conjugate(rho[n], g));
    rep.generator_norm.push_back(max_generator_norm(rep.renormalized.back()));
    std::vector<double> disp;
    for (const auto& m : rep.renormalized.back().matrices) disp.push_back(ops.displacement(m));
    rep.displacement.push_back(disp);
    cond = std::max(cond, ops.conditioning(M[n]) * g.norm() * g.inverse().norm());
  }
  rep.input_floor = 64.0 * kEps * cond;
  for (double v : rep.input_residual) rep.input_floor = std::max(rep.input_floor, v);

  const TailWindow tw = select_tail(rep.renormalized, prm.window, 1e-3 * prm.cauchy_tol);
  rep.tail_begin = tw.begin;
  rep.tail_end = tw.end;
  rep.cauchy_gap = tw.gap;
  rep.converged = tw.gap <= prm.cauchy_tol;
  rep.input_convergent = select_tail(rho, prm.window, 1e-3 * prm.cauchy_tol).gap <= prm.cauchy_tol;

  const int last = tw.end - 1;
  rep.limit = rep.renormalized[last];
  rep.limit_residual = ops.residual(rep.limit, ops.transform(M[last], rep.renormalizers[last]));
  rep.limit_invariant = rep.limit_residual <= prm.floor_factor * rep.input_floor;

  const double cap = prm.norm_ratio * rep.generator_norm.front();
  rep.norms_bounded = std::all_of(rep.generator_norm.begin(), rep.generator_norm.end(),
                                  [&](double v) { return v <= cap; });
  rep.displacement_bounded = true;
  for (int s = 0; s < r; ++s) {
    std::vector<double> col;
    for (int n = 0; n < N; ++n) col.push_back(rep.displacement[n][s]);
    rep.displacement_sup.push_back(*std::max_element(col.begin(), col.end()));
    if (!bounded_proxy(col)) rep.displacement_bounded = false;
  }
  if (!rep.converged) rep.message += "renormalized sequence not Cauchy on any tail window; ";
  if (!rep.norms_bounded) rep.message += "renormalized generator norms exceed the cap; ";
  if (!rep.displacement_bounded) rep.message += "displacement of the basepoint grows; ";
  if (!rep.limit_invariant) rep.message += "limit representation does not preserve the limit submanifold; ";
  if (!rep.input_convergent) rep.message += "note: the input sequence itself is not convergent; ";
  return rep;
}

}  // namespace

PipelineReport renormalization_pipeline(const std::vector<Representation>& rho, const std::vector<SpacelikeGraph>& M,
                                 const PipelineParams& prm) {
  struct Ops {
    Family family = Family::MaximalHpq;
    const PipelineParams* prm;
    Vec canon;
    forms::QuadraticForm Q;
    double residual(const Representation& r, const SpacelikeGraph& m) const {
      return invariance_residual(r, m, prm->sample_frac);
    }
    Mat renormalize(const SpacelikeGraph& m) const { return rep::renormalize(m); }
    double canonical(const SpacelikeGraph& m, const Mat& g) const { return canonical_residual(m, g); }
    double displacement(const Mat& g) const { return hpq::pseudo_distance(canon, g * canon, Q); }
    double conditioning(const SpacelikeGraph& m) const {
      return m.transform().norm() * so_inverse(m.transform(), Q).norm();
    }
    SpacelikeGraph transform(const SpacelikeGraph& m, const Mat& g) const { return hpq::transformed(m, g); }
  };
  if (M.empty()) throw std::invalid_argument("renormalization_pipeline: empty sequence");
  const auto& mod = M.front().model();
  return run_pipeline(rho, M, prm, Ops{Family::MaximalHpq, &prm, Vec(mod.F.col(0)), mod.Q});
}

PipelineReport renormalization_pipeline(const std::vector<Representation>& rho, const std::vector<AffineHypersurface>& M,
                                 const PipelineParams& prm) {
  struct Ops {
    Family family = Family::AffineSphere;
    const PipelineParams* prm;
    Vec canon;
    double residual(const Representation& r, const AffineHypersurface& m) const {
      return invariance_residual(r, m, prm->margin);
    }
    Mat renormalize(const AffineHypersurface& m) const { return rep::renormalize(m, select_basepoint(m)); }
    double canonical(const AffineHypersurface& m, const Mat& g) const {
      return canonical_residual(m, select_basepoint(m), g);
    }
    // log |phi_c(g c)| with phi_c = <c, .> at the canonical point
    double displacement(const Mat& g) const { return std::log(std::abs(canon.dot(g * canon))); }
    double conditioning(const AffineHypersurface& m) const { return m.chart().norm() * m.chart().inverse().norm(); }
    AffineHypersurface transform(const AffineHypersurface& m, const Mat& g) const {
      AffineHypersurface out = m;
      out.set_chart(g * m.chart());
      return out;
    }
  };
  if (M.empty()) throw std::invalid_argument("renormalization_pipeline: empty sequence");
  return run_pipeline(rho, M, prm, Ops{Family::AffineSphere, &prm, affine_canonical_point(M.front().p())});
}

// ---------------------------------------------------------------------------

int locate(const SpacelikeGraph& M, const Vec& y) {
  const Vec z = so_inverse(M.transform(), M.model().Q) * y;
  const auto [u, v] = hpq::poincare_project(hpq::onto_hyperboloid(z, M.model()), M.model());
  if (u.norm() > M.r0()) return -1;
  return M.lattice().nearest_valid(u);
}

DisplacementFit displacement_fit(const Representation& rho, const SpacelikeGraph& M, int n, double kappa_check) {
  DisplacementFit fit;
  const int o = M.center();
  const Vec po = M.point(o);
  const auto dist = hpq::intrinsic_distances(M, o);
  for (const Word& w : ball(rho.group.rank(), n)) {
    if (w.empty()) continue;
    const int k = locate(M, evaluate(rho, w) * po);
    if (k < 0 || !std::isfinite(dist[k])) {
      ++fit.unreachable;
      continue;
    }
    const double D = dist[k];
    const double L = static_cast<double>(w.size());
    ++fit.samples;
    fit.words.push_back(w);
    fit.distances.push_back(D);
    fit.kappa = std::min(fit.kappa, (D + std::sqrt(D * D + 4 * L)) / (2 * L));
    if (kappa_check > 0.0 && D < kappa_check * L - 1.0 / kappa_check) ++fit.violations;
  }
  return fit;
}

ProbeReport stabilizer_properness_probe(const SpacelikeGraph& M, const std::vector<Mat>& gs, double sample_frac,
                                        double norm_cap, double disp_floor) {
  const Lattice& lat = M.lattice();
  std::vector<int> sample;
  const int stride = std::max(1, M.n() / 8);
  for (int k = 0; k < lat.size(); ++k)
    if (lat.valid(k) && lat.ix(k) % stride == 0 && lat.iy(k) % stride == 0 &&
        lat.coord(k).norm() <= sample_frac * M.r0())
      sample.push_back(k);
  if (std::find(sample.begin(), sample.end(), M.center()) == sample.end()) sample.push_back(M.center());
  std::vector<std::vector<double>> dist;
  for (int k : sample) dist.push_back(hpq::intrinsic_distances(M, k));
  ProbeReport rep;
  for (const Mat& g : gs) {
    ProbeEntry e{g.norm(), 0.0, false};
    for (size_t i = 0; i < sample.size(); ++i) {
      const int k = locate(M, g * M.point(sample[i]));
      e.displacement = std::max(e.displacement, k < 0 ? std::numeric_limits<double>::infinity() : dist[i][k]);
    }
    e.flagged = e.norm > norm_cap && e.displacement < disp_floor;
    rep.flagged += e.flagged;
    rep.entries.push_back(e);
  }
  return rep;
}

}  // namespace robust::rep
