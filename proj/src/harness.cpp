#include "robust/harness.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace robust::harness {

using affine::AffineHypersurface;
using hpq::SpacelikeGraph;
using rep::Representation;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kAvoidTol = 1e-8;
constexpr double kAffineMargin = 0.1;

Mat so_inverse(const Mat& g, const forms::QuadraticForm& Q) {
  const Mat J = Q.signature();
  return J * g.transpose() * J;
}

AffineHypersurface pushed(const AffineHypersurface& M, const Mat& g) {
  AffineHypersurface out = M;
  out.set_chart(g * M.chart());
  return out;
}

bool is_hpq(const Scenario& s) { return s.family == Family::MaximalHpq; }
int corpus_size(const Scenario& s) { return static_cast<int>(is_hpq(s) ? s.graphs.size() : s.spheres.size()); }
int ambient_dim(const Scenario& s) { return is_hpq(s) ? s.graphs.front().model().dim() : s.spheres.front().dim(); }

// Nodes strictly inside the affine chart domain by kAffineMargin.
std::vector<int> affine_inner_nodes(const AffineHypersurface& M, int stride = 1) {
  const Lattice& lat = M.lattice();
  std::vector<int> out;
  for (int k = 0; k < lat.size(); ++k)
    if (lat.valid(k) && lat.ix(k) % stride == 0 && lat.iy(k) % stride == 0 &&
        M.domain().contains(lat.coord(k), kAffineMargin))
      out.push_back(k);
  return out;
}

int affine_base_node(const AffineHypersurface& M) {
  return M.lattice().nearest_valid(affine::minimal_norm_basepoint(M));
}

double relative_gap(const Eigen::Matrix2d& a, const Eigen::Matrix2d& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(1e-300, b.cwiseAbs().maxCoeff());
}

// ---------------------------------------------------------------------------
// Measurements.  Each returns a margin (threshold minus measured value) and is used both by
// the checks and by replay.

// Invariance, H^{p,q}: defining residual of g M.
double m_maximality(const Scenario& s, int c, const Mat& g) {
  return s.tol.maximality - hpq::maximality_residual(hpq::transformed(s.graphs[c], g));
}

// Invariance: pulled-back metric at one node (node = -1: worst node, reported through *worst).
double m_metric(const Scenario& s, int c, const Mat& g, int node, int* worst = nullptr) {
  double gap = 0.0;
  int arg = -1;
  auto visit = [&](int k, const Eigen::Matrix2d& a, const Eigen::Matrix2d& b) {
    const double r = relative_gap(a, b);
    if (arg < 0 || r > gap) {
      gap = r;
      arg = k;
    }
  };
  if (is_hpq(s)) {
    const SpacelikeGraph& M = s.graphs[c];
    const SpacelikeGraph gM = hpq::transformed(M, g);
    const MetricField a = hpq::metric_field(gM), b = hpq::metric_field(M);
    for (int k = 0; k < M.lattice().size(); ++k) {
      if ((node >= 0 && k != node) || !M.lattice().valid(k) || !b.ok[k]) continue;
      visit(k, a.g[k], b.g[k]);
    }
  } else {
    const AffineHypersurface& M = s.spheres[c];
    const AffineHypersurface gM = pushed(M, g);
    const int p = M.p();
    for (int k : affine_inner_nodes(M)) {
      if (node >= 0 && k != node) continue;
      Eigen::Matrix2d a = Eigen::Matrix2d::Identity(), b = Eigen::Matrix2d::Identity();
      a.topLeftCorner(p, p) = affine::affine_normal(gM, k).metric;
      b.topLeftCorner(p, p) = affine::affine_normal(M, k).metric;
      visit(k, a, b);
    }
  }
  if (worst) *worst = arg;
  return s.tol.metric - gap;
}

// Invariance, affine: concurrency of affine normals of g M.
double m_sphere(const Scenario& s, int c, const Mat& g) {
  const auto chk = affine::is_affine_sphere(pushed(s.spheres[c], g), s.tol.sphere, kAffineMargin);
  return s.tol.sphere - chk.max_dev;
}

// Distance equivariance: d_{g(M,o)}(g x) against d_{(M,o)}(x) at one node or the worst node.
double m_equivariance(const Scenario& s, int c, const Mat& g, int node, int* worst = nullptr) {
  double margin = kInf;
  int arg = -1;
  auto visit = [&](int k, double d1, double d0) {
    const double m = s.tol.equivariance * std::max(1.0, std::abs(d0)) - std::abs(d1 - d0);
    if (arg < 0 || m < margin) {
      margin = m;
      arg = k;
    }
  };
  if (is_hpq(s)) {
    const SpacelikeGraph& M = s.graphs[c];
    const auto& Q = M.model().Q;
    const Vec o = M.point(M.center());
    const Vec go = g * o;
    for (int k = 0; k < M.lattice().size(); ++k) {
      if ((node >= 0 && k != node) || !M.lattice().valid(k)) continue;
      const Vec x = M.point(k);
      visit(k, hpq::pseudo_distance(go, g * x, Q), hpq::pseudo_distance(o, x, Q));
    }
  } else {
    const AffineHypersurface& M = s.spheres[c];
    const AffineHypersurface gM = pushed(M, g);
    const Vec xo = M.lattice().coord(affine_base_node(M));
    const Vec f0 = affine::support_functional(M, xo), f1 = affine::support_functional(gM, xo);
    for (int k : affine_inner_nodes(M)) {
      if (node >= 0 && k != node) continue;
      visit(k, std::log(std::abs(f1.dot(gM.point(k)))), std::log(std::abs(f0.dot(M.point(k)))));
    }
  }
  if (worst) *worst = arg;
  return margin;
}

// Domination.  H^{p,q}: d_M(o, x) <= pseudo(o, x) + eps_grid from the centre node.
// Affine: the sector-curve chain at the configured constant.
double affine_constant(const Scenario& s, const AffineHypersurface& M, int o, const std::vector<int>& xs) {
  if (s.tol.domination_c > 0.0) return s.tol.domination_c;
  const double chat = affine::benoist_hulin_gap(M, o, xs);
  return 1.1 * std::max(chat, 0.5 * (M.p() + 1));
}

double m_inequality(const Scenario& s, int c, int node, int* worst = nullptr, std::string* detail = nullptr) {
  if (is_hpq(s)) {
    const SpacelikeGraph& M = s.graphs[c];
    const int o = M.center();
    const auto dist = hpq::intrinsic_distances(M, o);
    const double eps = s.tol.grid_factor * M.lattice().h();
    const Vec po = M.point(o);
    double margin = kInf;
    int arg = -1;
    for (int k = 0; k < M.lattice().size(); ++k) {
      if ((node >= 0 && k != node) || !M.lattice().valid(k) || !std::isfinite(dist[k])) continue;
      const double m = hpq::pseudo_distance(po, M.point(k), M.model().Q) + eps - dist[k];
      if (arg < 0 || m < margin) {
        margin = m;
        arg = k;
      }
    }
    if (worst) *worst = arg;
    return margin;
  }
  const AffineHypersurface& M = s.spheres[c];
  const int o = affine_base_node(M);
  const auto xs = affine_inner_nodes(M, 2);
  const double cc = affine_constant(s, M, o, xs);
  const auto rep = affine::affine_domination_check(M, o, xs, cc);
  if (detail) {
    std::ostringstream os;
    os << "c=" << cc << " lower-bound violations=" << rep.violations << " distance violations=" << rep.distance_violations;
    *detail = os.str();
  }
  if (worst) *worst = o;
  return std::min(rep.worst_margin, rep.worst_distance_margin);
}

// ---------------------------------------------------------------------------
// Sequences

std::vector<std::vector<Mat>> divergent_sequences(const Scenario& s, double step) {
  std::vector<std::vector<Mat>> out;
  if (!s.divergent.empty()) out.push_back(s.divergent);
  const int extra = std::max(1, s.group_samples / 2);
  for (int i = 0; i < extra; ++i) out.push_back(default_divergent(s, s.seed + 1000 + i, 8, step));
  return out;
}

constexpr double kCompactStep = 0.5;  // keeps frames well conditioned (|g_n| ~ e^4)
constexpr double kAvoidStep = 3.0;    // passes the unboundedness threshold with a converged projective limit

// Compactness on a pushed pointed corpus member: gap between term n and the last term.
double m_push_gap(const Scenario& s, int c, int seq, int n) {
  const auto seqs = divergent_sequences(s, kCompactStep);
  const auto& gs = seqs.at(seq);
  const int last = static_cast<int>(gs.size()) - 1;
  if (is_hpq(s)) {
    const SpacelikeGraph& M = s.graphs[c];
    const Vec x0 = M.lattice().coord(M.center());
    auto renorm = [&](int i) {
      const SpacelikeGraph Mi = hpq::transformed(M, gs[i]);
      return hpq::transformed(Mi, rep::renormalize(Mi, rep::basepoint_at(Mi, x0)));
    };
    const auto gap = hpq::pointed_c2_compare(renorm(n), renorm(last), M.center(), s.tol.radius);
    return s.tol.compactness - std::max({gap.metric_c2_gap, gap.embedding_gap, gap.bilip - 1.0});
  }
  const AffineHypersurface& M = s.spheres[c];
  const int o = affine_base_node(M);
  const Vec xo = M.lattice().coord(o);
  const auto dist = affine::affine_distances(M, o);
  auto renorm = [&](int i) {
    const AffineHypersurface Mi = pushed(M, gs[i]);
    return pushed(Mi, rep::renormalize(Mi, xo));
  };
  const AffineHypersurface A = renorm(n), B = renorm(last);
  double gap = 0.0;
  for (int k = 0; k < M.lattice().size(); ++k) {
    if (!(dist[k] <= s.tol.radius)) continue;
    gap = std::max(gap, (A.point(k) - B.point(k)).norm() / B.point(k).norm());
  }
  return s.tol.compactness - gap;
}

// Compactness on the scenario's own sequence M_n at the selected basepoints.
double m_sequence_gap(const Scenario& s, int n) {
  if (is_hpq(s)) {
    const int last = static_cast<int>(s.graph_seq.size()) - 1;
    auto renorm = [&](int i) { return hpq::transformed(s.graph_seq[i], rep::renormalize(s.graph_seq[i])); };
    const SpacelikeGraph& M = s.graph_seq[n];
    const auto gap = hpq::pointed_c2_compare(renorm(n), renorm(last), M.center(), s.tol.radius);
    return s.tol.sequence_gap - std::max({gap.metric_c2_gap, gap.embedding_gap, gap.bilip - 1.0});
  }
  const int last = static_cast<int>(s.sphere_seq.size()) - 1;
  auto renorm = [&](int i) {
    const AffineHypersurface& Mi = s.sphere_seq[i];
    return pushed(Mi, rep::renormalize(Mi, rep::select_basepoint(Mi)));
  };
  const AffineHypersurface A = renorm(n), B = renorm(last);
  // compare along rays: radial gap of A against B at the chart point of each B node near the basepoint
  const int o = affine_base_node(B);
  const auto dist = affine::affine_distances(B, o);
  double gap = 0.0;
  for (int k = 0; k < B.lattice().size(); ++k) {
    if (!(dist[k] <= s.tol.radius)) continue;
    const Vec z = B.point(k);
    const Vec x = A.chart_point(z);
    if (!A.domain().contains(x, A.lattice().h())) return -kInf;
    gap = std::max(gap, std::abs(std::log(A.point_at(x).norm() / z.norm())));
  }
  return s.tol.sequence_gap - gap;
}

// Avoidance: margins of one divergent sequence; kernel margin is the smallest |phi x| / |x|
// over the sample minus the avoidance tolerance (positive when M leaves Ker phi).
struct Boundary {
  bool found = false;
  Mat phi;
};

Boundary boundary_point(const Scenario& s, int seq) {
  const auto seqs = divergent_sequences(s, kAvoidStep);
  const auto& gs = seqs.at(seq);
  Boundary b;
  if (!forms::is_unbounded(gs)) return b;
  const auto lim = forms::rescaled_limit(gs);
  if (!lim.converged) return b;
  b.found = true;
  b.phi = lim.limit.matrix();
  return b;
}

double m_kernel(const Scenario& s, int c, int seq) {
  const Boundary b = boundary_point(s, seq);
  if (!b.found) return kInf;
  std::vector<Vec> pts;
  const Lattice& lat = is_hpq(s) ? s.graphs[c].lattice() : s.spheres[c].lattice();
  for (int k = 0; k < lat.size(); ++k)
    if (lat.valid(k)) pts.push_back(is_hpq(s) ? s.graphs[c].point(k) : s.spheres[c].point(k));
  double best = 0.0;
  for (const Vec& x : pts) best = std::max(best, (b.phi * x).norm() / x.norm());
  return best - kAvoidTol;
}

double m_isotropy(const Scenario& s, int seq) {
  const Boundary b = boundary_point(s, seq);
  if (!b.found) return kInf;
  const auto& Q = s.graphs.front().model().Q;
  const auto ki = forms::kernel_and_image(Q.adjoint(b.phi));
  return s.tol.isotropy - forms::isotropy_defect(ki.image, Q);
}

// Basepoint selection and closedness use the pipeline on the scenario's sequence.
rep::PipelineReport pipeline(const Scenario& s) {
  return is_hpq(s) ? rep::renormalization_pipeline(s.rho_seq, s.graph_seq, s.tol.pipeline)
                   : rep::renormalization_pipeline(s.rho_seq, s.sphere_seq, s.tol.pipeline);
}

// Margin of the finite-sequence boundedness proxy: log(N / N0) minus the growth of the running
// sup over the last 20% of terms.  Positive exactly when rep::bounded_proxy holds.
double bounded_margin(const std::vector<double>& v) {
  const int N = static_cast<int>(v.size());
  if (N < 2) return kInf;
  const int n0 = std::max(1, static_cast<int>(std::floor(0.8 * N)));
  const double before = *std::max_element(v.begin(), v.begin() + n0);
  const double after = *std::max_element(v.begin() + n0, v.end());
  if (after <= before) return std::log(static_cast<double>(N) / n0) + (before - after);
  return std::log(static_cast<double>(N) / n0) - (after - before);
}

double m_displacement(const rep::PipelineReport& r, int gen) {
  std::vector<double> col;
  for (const auto& d : r.displacement) col.push_back(d.at(gen));
  return bounded_margin(col);
}

// Renormalized tail of the H^{p,q} sequence resampled as graphs; u_infinity is the last one.
std::vector<SpacelikeGraph> renormalized_graphs(const Scenario& s, const rep::PipelineReport& r) {
  std::vector<SpacelikeGraph> out;
  for (int n = r.tail_begin; n < r.tail_end; ++n)
    out.push_back(hpq::regraph(hpq::transformed(s.graph_seq[n], r.renormalizers[n])));
  return out;
}

double uniform_gap(const SpacelikeGraph& A, const SpacelikeGraph& B) {
  double gap = 0.0;
  for (int k = 0; k < A.lattice().size(); ++k)
    if (A.lattice().valid(k) && B.lattice().valid(k))
      gap = std::max(gap, hpq::spherical_dist_sphere(A.value(k), B.value(k)));
  return gap;
}

enum class ClosedItem { Input, Cauchy, Norms, Renormalizers, Limit, Uniform, Lightlike };

double m_closed(const Scenario& s, const rep::PipelineReport& r, ClosedItem item) {
  switch (item) {
    case ClosedItem::Input:
      return s.tol.invariance - *std::max_element(r.input_residual.begin(), r.input_residual.end());
    case ClosedItem::Cauchy:
      return s.tol.pipeline.cauchy_tol - r.cauchy_gap;
    case ClosedItem::Norms: {
      const double cap = s.tol.pipeline.norm_ratio * r.generator_norm.front();
      return cap - *std::max_element(r.generator_norm.begin(), r.generator_norm.end());
    }
    case ClosedItem::Renormalizers: {
      double m = 0.0;
      for (const Mat& g : r.renormalizers) m = std::max(m, g.norm());
      return s.tol.norm_cap - m;
    }
    case ClosedItem::Limit:
      return s.tol.pipeline.floor_factor * r.input_floor - r.limit_residual;
    case ClosedItem::Uniform: {
      const auto gs = renormalized_graphs(s, r);
      if (gs.size() < 2) return kInf;
      const double eps = s.tol.grid_factor * gs.back().lattice().h();
      return eps - uniform_gap(gs[gs.size() - 2], gs.back());
    }
    case ClosedItem::Lightlike: {
      const auto gs = renormalized_graphs(s, r);
      return any_lightlike_ray(gs.back(), s.tol.lightlike) ? -1.0 : 1.0;
    }
  }
  return kInf;
}

ClosedItem closed_item(const std::string& kind) {
  static const std::pair<const char*, ClosedItem> names[] = {
      {"closedness.input_invariance", ClosedItem::Input}, {"closedness.cauchy", ClosedItem::Cauchy},         {"closedness.norms", ClosedItem::Norms},
      {"closedness.renormalizers", ClosedItem::Renormalizers}, {"closedness.limit_invariance", ClosedItem::Limit},
      {"closedness.uniform_limit", ClosedItem::Uniform}, {"closedness.lightlike", ClosedItem::Lightlike}};
  for (const auto& [n, i] : names)
    if (kind == n) return i;
  throw std::invalid_argument("unknown witness kind '" + kind + "'");
}

CheckResult named(const std::string& name) {
  CheckResult c;
  c.name = name;
  return c;
}

Witness make(const std::string& kind, double margin) {
  Witness w;
  w.kind = kind;
  w.margin = margin;
  return w;
}

}  // namespace

// ---------------------------------------------------------------------------

void CheckResult::record(Witness w) {
  ++checked;
  const bool failed = !(w.margin >= 0.0);
  if (failed) {
    pass = false;
    witnesses.push_back(w);
  } else if (pass && (witnesses.empty() || w.margin < witnesses.front().margin)) {
    witnesses.assign(1, w);
  }
  worst_margin = std::isnan(w.margin) || std::isnan(worst_margin) ? std::nan("") : std::min(worst_margin, w.margin);
}

bool PropertyReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

std::string PropertyReport::summary() const {
  std::ostringstream os;
  os.precision(6);
  os << property << " [" << rep::to_string(family) << "]: " << (ok() ? "pass" : "FAIL") << "\n";
  for (const auto& c : checks) {
    os << "  " << c.name << ": " << (c.vacuous ? "vacuous" : c.pass ? "pass" : "FAIL") << "  samples=" << c.checked
       << "  worst_margin=" << c.worst_margin;
    if (!c.detail.empty()) os << "  (" << c.detail << ")";
    os << "\n";
  }
  return os.str();
}

void Scenario::validate() const {
  const bool h = family == Family::MaximalHpq;
  if (h ? graphs.empty() : spheres.empty()) throw std::invalid_argument("scenario: empty corpus");
  const size_t seq = h ? graph_seq.size() : sphere_seq.size();
  if (seq != rho_seq.size())
    throw std::invalid_argument("scenario: representation and submanifold sequences differ in length");
  const int d = h ? graphs.front().model().dim() : spheres.front().dim();
  for (const auto& r : rho_seq) {
    rep::validate(r, tol.rep);
    if (r.dim() != d) throw std::invalid_argument("scenario: representation acts on the wrong dimension");
  }
  for (const auto& g : divergent)
    if (g.rows() != d || g.cols() != d) throw std::invalid_argument("scenario: divergent matrix has the wrong size");
  if (group_samples < 0) throw std::invalid_argument("scenario: negative group sample count");
}

std::vector<Mat> random_elements(const Scenario& s) {
  std::mt19937_64 rng(s.seed);
  const int d = ambient_dim(s);
  std::vector<Mat> out{Mat::Identity(d, d)};
  for (int i = 0; i < s.group_samples; ++i)
    out.push_back(is_hpq(s) ? forms::random_so(s.graphs.front().model().Q, rng, 0.5) : forms::random_sl(d, rng, 0.3));
  return out;
}

std::vector<Mat> default_divergent(const Scenario& s, std::uint64_t seed, int count, double step) {
  std::mt19937_64 rng(seed);
  const int d = ambient_dim(s);
  Mat k, kinv;
  if (is_hpq(s)) {
    const auto& Q = s.graphs.front().model().Q;
    k = forms::random_so(Q, rng, 0.5);
    kinv = so_inverse(k, Q);
  } else {
    k = forms::random_sl(d, rng, 0.3);
    kinv = k.inverse();
  }
  std::vector<Mat> seq;
  for (int n = 1; n <= count; ++n) {
    Mat a = Mat::Identity(d, d);
    if (is_hpq(s)) {
      a = forms::boost(d, 0, d - 1, step * n);
    } else {
      a(0, 0) = std::exp(step * n);
      a(d - 1, d - 1) = std::exp(-step * n);
    }
    seq.push_back(k * a * kinv);
  }
  return seq;
}

bool any_lightlike_ray(const SpacelikeGraph& M, double tol, int directions) {
  const int p = M.model().p();
  const int count = p == 1 ? 2 : directions;
  for (int i = 0; i < count; ++i) {
    Vec dir(p);
    if (p == 1) dir(0) = i == 0 ? 1.0 : -1.0;
    else dir << std::cos(2 * M_PI * i / count), std::sin(2 * M_PI * i / count);
    if (hpq::detect_lightlike_ray(M, dir, tol)) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------

PropertyReport check_invariance(const Scenario& s) {
  s.validate();
  PropertyReport rep{"invariance", s.family, {}};
  CheckResult family = named(is_hpq(s) ? "invariance.maximality" : "invariance.sphere");
  CheckResult metric = named("invariance.metric");
  const auto gs = random_elements(s);
  for (int c = 0; c < corpus_size(s); ++c) {
    for (const Mat& g : gs) {
      Witness w = make(family.name, is_hpq(s) ? m_maximality(s, c, g) : m_sphere(s, c, g));
      w.corpus = c;
      w.g = g;
      family.record(w);
      int node = -1;
      Witness wm = make(metric.name, m_metric(s, c, g, -1, &node));
      wm.corpus = c;
      wm.node = node;
      wm.g = g;
      metric.record(wm);
    }
  }
  rep.checks = {family, metric};
  return rep;
}

PropertyReport check_compactness(const Scenario& s) {
  s.validate();
  PropertyReport rep{"compactness", s.family, {}};
  CheckResult push = named("compactness.push");
  const int nseq = static_cast<int>(divergent_sequences(s, kCompactStep).size());
  std::ostringstream detail;
  for (int c = 0; c < corpus_size(s); ++c) {
    for (int q = 0; q < nseq; ++q) {
      const int len = static_cast<int>(divergent_sequences(s, kCompactStep)[q].size());
      for (int n = len - 1 - std::max(1, len / 3); n < len - 1; ++n) {
        if (n < 0) continue;
        Witness w;
        try {
          w = make(push.name, m_push_gap(s, c, q, n));
        } catch (const std::exception& e) {
          w = make(push.name, -kInf);
          detail << "corpus " << c << " sequence " << q << " term " << n << ": " << e.what() << "; ";
        }
        w.corpus = c;
        w.sequence = q;
        w.term = n;
        push.record(w);
      }
    }
  }
  push.detail = detail.str();
  rep.checks.push_back(push);

  const int N = static_cast<int>(is_hpq(s) ? s.graph_seq.size() : s.sphere_seq.size());
  CheckResult seq = named("compactness.sequence");
  if (N < 2) {
    seq.vacuous = true;
    seq.detail = "no submanifold sequence in the scenario";
  } else {
    std::ostringstream os;
    for (int n = N - 1 - std::max(1, N / 3); n < N - 1; ++n) {
      if (n < 0) continue;
      Witness w;
      try {
        w = make(seq.name, m_sequence_gap(s, n));
      } catch (const std::exception& e) {
        w = make(seq.name, -kInf);
        os << "term " << n << ": " << e.what() << "; ";
      }
      w.term = n;
      seq.record(w);
    }
    seq.detail = os.str();
  }
  rep.checks.push_back(seq);
  return rep;
}

PropertyReport check_avoidance(const Scenario& s) {
  s.validate();
  PropertyReport rep{"avoidance", s.family, {}};
  CheckResult kern = named("avoidance.kernel");
  CheckResult iso = named("avoidance.isotropy");
  const int nseq = static_cast<int>(divergent_sequences(s, kAvoidStep).size());
  int found = 0;
  for (int q = 0; q < nseq; ++q) {
    if (!boundary_point(s, q).found) continue;
    ++found;
    for (int c = 0; c < corpus_size(s); ++c) {
      Witness w = make(kern.name, m_kernel(s, c, q));
      w.corpus = c;
      w.sequence = q;
      kern.record(w);
    }
    if (is_hpq(s)) {
      Witness w = make(iso.name, m_isotropy(s, q));
      w.sequence = q;
      iso.record(w);
    }
  }
  if (found == 0) {
    kern.vacuous = iso.vacuous = true;
    kern.detail = "no sequence produced a boundary point";
  }
  if (!is_hpq(s)) {
    iso.vacuous = true;
    iso.detail = "isotropy applies to SO(p,q+1) only";
  }
  rep.checks = {kern, iso};
  return rep;
}

PropertyReport check_domination(const Scenario& s) {
  s.validate();
  PropertyReport rep{"domination", s.family, {}};
  CheckResult eq = named("domination.equivariance");
  CheckResult ineq = named("domination.inequality");
  CheckResult bnd = named("domination.bounded");
  const auto gs = random_elements(s);
  for (int c = 0; c < corpus_size(s); ++c) {
    for (const Mat& g : gs) {
      int node = -1;
      Witness w = make(eq.name, m_equivariance(s, c, g, -1, &node));
      w.corpus = c;
      w.node = node;
      w.g = g;
      eq.record(w);
    }
    int node = -1;
    std::string detail;
    Witness w = make(ineq.name, m_inequality(s, c, -1, &node, &detail));
    w.corpus = c;
    w.node = node;
    ineq.record(w);
    if (!detail.empty()) ineq.detail += (ineq.detail.empty() ? "" : "; ") + detail;
  }
  if (s.rho_seq.empty()) {
    bnd.vacuous = true;
    bnd.detail = "no representation sequence in the scenario";
  } else {
    const auto r = pipeline(s);
    std::ostringstream os;
    os.precision(6);
    os << "sup displacement per generator:";
    for (size_t g = 0; g < r.displacement_sup.size(); ++g) {
      os << " " << r.displacement_sup[g];
      Witness w = make(bnd.name, m_displacement(r, static_cast<int>(g)));
      w.generator = static_cast<int>(g);
      bnd.record(w);
    }
    bnd.detail = os.str();
  }
  rep.checks = {eq, ineq, bnd};
  return rep;
}

PropertyReport closedness_scenario(const Scenario& s) {
  s.validate();
  PropertyReport rep{"closedness", s.family, {}};
  if (s.rho_seq.empty()) {
    CheckResult c = named("closedness.pipeline");
    c.vacuous = true;
    c.detail = "no representation sequence in the scenario";
    rep.checks.push_back(c);
    return rep;
  }
  const auto r = pipeline(s);
  std::vector<std::string> kinds = {"closedness.input_invariance", "closedness.cauchy", "closedness.norms", "closedness.limit_invariance"};
  if (r.input_convergent) kinds.push_back("closedness.renormalizers");
  if (is_hpq(s)) {
    kinds.push_back("closedness.uniform_limit");
    kinds.push_back("closedness.lightlike");
  }
  for (const auto& k : kinds) {
    CheckResult c = named(k);
    double m;
    try {
      m = m_closed(s, r, closed_item(k));
    } catch (const std::exception& e) {
      m = -kInf;
      c.detail = e.what();
    }
    c.record(make(k, m));
    if (k == "closedness.cauchy") {
      std::ostringstream os;
      os << "tail [" << r.tail_begin << ", " << r.tail_end << ")";
      if (!r.message.empty()) os << "; " << r.message;
      c.detail = os.str();
    }
    if (k == "closedness.limit_invariance") {
      std::ostringstream os;
      os.precision(6);
      os << "input floor " << r.input_floor << ", limit residual " << r.limit_residual;
      c.detail = os.str();
    }
    rep.checks.push_back(c);
  }
  if (!r.input_convergent) {
    CheckResult c = named("closedness.renormalizers");
    c.vacuous = true;
    c.detail = "input sequence diverges; boundedness is asserted on the renormalized representations";
    rep.checks.push_back(c);
  }
  return rep;
}

// ---------------------------------------------------------------------------

double replay(const Scenario& s, const Witness& w) {
  const std::string& k = w.kind;
  if (k == "invariance.maximality") return m_maximality(s, w.corpus, w.g);
  if (k == "invariance.sphere") return m_sphere(s, w.corpus, w.g);
  if (k == "invariance.metric") return m_metric(s, w.corpus, w.g, w.node);
  if (k == "compactness.push") return m_push_gap(s, w.corpus, w.sequence, w.term);
  if (k == "compactness.sequence") return m_sequence_gap(s, w.term);
  if (k == "avoidance.kernel") return m_kernel(s, w.corpus, w.sequence);
  if (k == "avoidance.isotropy") return m_isotropy(s, w.sequence);
  if (k == "domination.equivariance") return m_equivariance(s, w.corpus, w.g, w.node);
  if (k == "domination.inequality") return m_inequality(s, w.corpus, is_hpq(s) ? w.node : -1);
  if (k == "domination.bounded") return m_displacement(pipeline(s), w.generator);
  return m_closed(s, pipeline(s), closed_item(k));
}

}  // namespace robust::harness
