#include "robust/io.hpp"

#include "robust/affine_solver.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace robust::io {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open " + path);
  return f;
}

namespace {

// Line-oriented tokenizer with error locations.
class Reader {
 public:
  Reader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

  // Next non-empty, non-comment line split into tokens; false at end of input.
  bool next(std::vector<std::string>& tok) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
      std::istringstream ss(line);
      tok.clear();
      for (std::string t; ss >> t;) tok.push_back(t);
      if (!tok.empty()) return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw InputError(source_ + ":" + std::to_string(line_no_) + ": " + msg);
  }

  double num(const std::string& s) const {
    try {
      size_t pos = 0;
      const double v = std::stod(s, &pos);
      if (pos != s.size()) fail("not a number: '" + s + "'");
      return v;
    } catch (const std::logic_error&) {
      fail("not a number: '" + s + "'");
    }
  }

  int integer(const std::string& s) const {
    try {
      size_t pos = 0;
      const int v = std::stoi(s, &pos);
      if (pos != s.size()) fail("not an integer: '" + s + "'");
      return v;
    } catch (const std::logic_error&) {
      fail("not an integer: '" + s + "'");
    }
  }

  void arity(const std::vector<std::string>& tok, size_t n) const {
    if (tok.size() != n) fail("'" + tok[0] + "' expects " + std::to_string(n - 1) + " argument(s)");
  }

  Vec vec(const std::vector<std::string>& tok, size_t from) const {
    Vec v(tok.size() - from);
    for (size_t i = from; i < tok.size(); ++i) v(i - from) = num(tok[i]);
    return v;
  }

  Mat matrix(int rows, int cols) {
    Mat m(rows, cols);
    std::vector<std::string> tok;
    for (int r = 0; r < rows; ++r) {
      if (!next(tok)) fail("matrix truncated");
      if (static_cast<int>(tok.size()) != cols) fail("matrix row needs " + std::to_string(cols) + " entries");
      for (int c = 0; c < cols; ++c) m(r, c) = num(tok[c]);
    }
    return m;
  }

  const std::string& source() const { return source_; }

 private:
  std::istream& in_;
  std::string source_;
  int line_no_ = 0;
};

void write_matrix(std::ostream& out, const Mat& m) {
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) out << (c ? " " : "") << fmt(m(r, c));
    out << "\n";
  }
}

void expect_header(Reader& rd, const std::string& kind) {
  std::vector<std::string> tok;
  if (!rd.next(tok) || tok.size() != 2 || tok[0] != "robustfam" || tok[1] != kind)
    rd.fail("expected header 'robustfam " + kind + "'");
}

}  // namespace

// ---------------------------------------------------------------------------
// Config

void Config::validate() const {
  const double ts[] = {tol.group, tol.rep, tol.maximality, tol.sphere, tol.metric, tol.equivariance,
                       tol.grid_factor, tol.isotropy, tol.invariance, tol.compactness, tol.sequence_gap,
                       tol.radius, tol.norm_cap, tol.lightlike, tol.pipeline.window, tol.pipeline.cauchy_tol,
                       tol.pipeline.norm_ratio, tol.pipeline.floor_factor, tol.pipeline.sample_frac,
                       tol.pipeline.margin, solver_tol, affine_tol};
  for (double t : ts)
    if (!(t > 0.0)) throw InputError("config: tolerances must be positive");
  if (grid < 5 || grid % 2 == 0) throw InputError("config: grid must be odd and at least 5");
  if (!(r0 > 0.0 && r0 < 1.0)) throw InputError("config: r0 must lie in (0, 1)");
  for (const auto& [p, c] : c_by_dim)
    if (!(c > 1.0)) throw InputError("config: c." + std::to_string(p) + " must exceed 1");
}

namespace {

double* tolerance_field(harness::Tolerances& t, const std::string& name) {
  const std::pair<const char*, double*> fields[] = {
      {"group", &t.group},
      {"rep", &t.rep},
      {"maximality", &t.maximality},
      {"sphere", &t.sphere},
      {"metric", &t.metric},
      {"equivariance", &t.equivariance},
      {"grid_factor", &t.grid_factor},
      {"isotropy", &t.isotropy},
      {"invariance", &t.invariance},
      {"compactness", &t.compactness},
      {"sequence_gap", &t.sequence_gap},
      {"radius", &t.radius},
      {"norm_cap", &t.norm_cap},
      {"lightlike", &t.lightlike},
      {"domination_c", &t.domination_c},
      {"pipeline.window", &t.pipeline.window},
      {"pipeline.cauchy_tol", &t.pipeline.cauchy_tol},
      {"pipeline.norm_ratio", &t.pipeline.norm_ratio},
      {"pipeline.floor_factor", &t.pipeline.floor_factor},
      {"pipeline.sample_frac", &t.pipeline.sample_frac},
      {"pipeline.margin", &t.pipeline.margin},
  };
  for (const auto& [n, f] : fields)
    if (name == n) return f;
  return nullptr;
}

}  // namespace

void read_config(std::istream& in, Config& cfg, const std::string& source) {
  Reader rd(in, source);
  std::vector<std::string> tok;
  while (rd.next(tok)) {
    rd.arity(tok, 2);
    const std::string& k = tok[0];
    if (k == "grid") cfg.grid = rd.integer(tok[1]);
    else if (k == "r0") cfg.r0 = rd.num(tok[1]);
    else if (k == "seed") cfg.seed = static_cast<std::uint64_t>(rd.integer(tok[1]));
    else if (k == "solver_tol") cfg.solver_tol = rd.num(tok[1]);
    else if (k == "affine_tol") cfg.affine_tol = rd.num(tok[1]);
    else if (k == "out") cfg.out = tok[1];
    else if (k.rfind("c.", 0) == 0) cfg.c_by_dim[rd.integer(k.substr(2))] = rd.num(tok[1]);
    else if (k.rfind("tol.", 0) == 0) {
      double* f = tolerance_field(cfg.tol, k.substr(4));
      if (!f) rd.fail("unknown tolerance '" + k + "'");
      *f = rd.num(tok[1]);
    } else {
      rd.fail("unknown key '" + k + "'");
    }
  }
}

Config load_config(const std::string& path) {
  auto f = open_input(path);
  Config cfg;
  read_config(f, cfg, path);
  return cfg;
}

// ---------------------------------------------------------------------------
// Graphs

void write_graph(std::ostream& out, const hpq::SpacelikeGraph& M) {
  const Lattice& lat = M.lattice();
  out << "robustfam graph\n"
      << "p " << M.model().p() << "\nq " << M.model().q() << "\nr0 " << fmt(M.r0()) << "\nn " << M.n() << "\n"
      << "transform\n";
  write_matrix(out, M.transform());
  for (int k = 0; k < lat.size(); ++k) {
    if (!lat.valid(k)) continue;
    out << "node " << lat.ix(k) << " " << lat.iy(k);
    for (int i = 0; i < M.value(k).size(); ++i) out << " " << fmt(M.value(k)(i));
    out << "\n";
  }
}

namespace {

struct GraphHeader {
  int p = -1, q = -1, n = -1;
  double r0 = -1.0;
  std::optional<Mat> transform;
};

// Consumes header keys; returns false for a token the header does not own.
bool graph_header_key(Reader& rd, const std::vector<std::string>& tok, GraphHeader& h) {
  const std::string& k = tok[0];
  if (k == "p") { rd.arity(tok, 2); h.p = rd.integer(tok[1]); }
  else if (k == "q") { rd.arity(tok, 2); h.q = rd.integer(tok[1]); }
  else if (k == "r0") { rd.arity(tok, 2); h.r0 = rd.num(tok[1]); }
  else if (k == "n") { rd.arity(tok, 2); h.n = rd.integer(tok[1]); }
  else if (k == "transform") {
    if (h.p < 1 || h.q < 0) rd.fail("transform before p and q");
    h.transform = rd.matrix(h.p + h.q + 1, h.p + h.q + 1);
  } else {
    return false;
  }
  return true;
}

void check_graph_header(Reader& rd, const GraphHeader& h) {
  if (h.p < 1 || h.p > 2) rd.fail("p must be 1 or 2");
  if (h.q < 0) rd.fail("q missing or negative");
  if (!(h.r0 > 0.0 && h.r0 < 1.0)) rd.fail("r0 must lie in (0, 1)");
  if (h.n < 5 || h.n % 2 == 0) rd.fail("n must be odd and at least 5");
}

Vec node_value(Reader& rd, const std::vector<std::string>& tok, int q, const Lattice& lat, int& k) {
  if (static_cast<int>(tok.size()) != 4 + q) rd.fail("node line needs i j and " + std::to_string(q + 1) + " components");
  const int i = rd.integer(tok[1]), j = rd.integer(tok[2]);
  if (!lat.in_range(i, j) || !lat.valid(i, j)) rd.fail("node outside the disk lattice");
  k = lat.index(i, j);
  const Vec v = rd.vec(tok, 3);
  if (std::abs(v.norm() - 1.0) > 1e-9) rd.fail("node value is not a unit vector");
  return v;
}

}  // namespace

hpq::SpacelikeGraph read_graph(std::istream& in, const std::string& source) {
  Reader rd(in, source);
  expect_header(rd, "graph");
  GraphHeader h;
  std::vector<std::string> tok;
  std::optional<hpq::SpacelikeGraph> M;
  std::vector<bool> seen;
  while (rd.next(tok)) {
    if (!M && graph_header_key(rd, tok, h)) continue;
    if (tok[0] != "node") rd.fail("unexpected '" + tok[0] + "'");
    if (!M) {
      check_graph_header(rd, h);
      M.emplace(hpq::PoincareModel::standard(h.p, h.q), h.r0, h.n);
      if (h.transform) M->set_transform(*h.transform);
      seen.assign(M->lattice().size(), false);
    }
    int k = -1;
    const Vec v = node_value(rd, tok, h.q, M->lattice(), k);
    M->set_value(k, v);
    seen[k] = true;
  }
  if (!M) rd.fail("graph has no nodes");
  for (int k = 0; k < M->lattice().size(); ++k)
    if (M->lattice().valid(k) && !seen[k]) M->drop_node(k);
  if (!M->lattice().valid(M->center())) rd.fail("graph does not sample the centre node");
  return *M;
}

MaximalProblemFile read_maximal_problem(std::istream& in, const std::string& source) {
  Reader rd(in, source);
  expect_header(rd, "maximal-problem");
  MaximalProblemFile f;
  GraphHeader h;
  h.p = f.p;
  h.q = f.q;
  h.r0 = f.r0;
  h.n = f.n;
  std::vector<std::string> tok;
  while (rd.next(tok)) {
    if (graph_header_key(rd, tok, h)) continue;
    const std::string& k = tok[0];
    if (k == "target") { rd.arity(tok, 2); f.params.target = rd.num(tok[1]); }
    else if (k == "max_iter") { rd.arity(tok, 2); f.params.max_iter = rd.integer(tok[1]); }
    else if (k == "boundary") {
      if (tok.size() < 2) rd.fail("boundary needs a kind");
      f.boundary_kind = tok[1];
      for (size_t i = 2; i < tok.size(); ++i) f.boundary_args.push_back(rd.num(tok[i]));
      if (f.boundary_kind == "table") {
        check_graph_header(rd, h);
        const Lattice lat = Lattice::disk(h.p, h.n, h.r0);
        for (;;) {
          if (!rd.next(tok)) rd.fail("boundary table without 'end'");
          if (tok[0] == "end") break;
          if (tok[0] != "node") rd.fail("boundary table expects node lines");
          int kk = -1;
          const Vec v = node_value(rd, tok, h.q, lat, kk);
          f.table[{lat.ix(kk), lat.iy(kk)}] = v;
        }
      } else if (f.boundary_kind == "constant") {
        if (static_cast<int>(f.boundary_args.size()) != h.q + 1) rd.fail("constant boundary needs q+1 components");
      } else if (f.boundary_kind == "boosted") {
        if (f.boundary_args.size() != 1) rd.fail("boosted boundary needs one parameter");
      } else if (f.boundary_kind == "wavy") {
        if (f.boundary_args.size() != 2) rd.fail("wavy boundary needs amplitude and frequency");
      } else {
        rd.fail("unknown boundary kind '" + f.boundary_kind + "'");
      }
    } else {
      rd.fail("unexpected '" + k + "'");
    }
  }
  check_graph_header(rd, h);
  if (h.transform) rd.fail("problems are posed with the identity transform");
  if (f.boundary_kind.empty()) rd.fail("missing boundary block");
  if (!(f.params.target > 0.0)) rd.fail("target must be positive");
  if (f.boundary_kind == "boosted" && (h.p != 2 || h.q != 1)) rd.fail("boosted boundary is defined in H^{2,1}");
  if (f.boundary_kind == "wavy" && h.q < 1) rd.fail("wavy boundary needs q >= 1");
  f.p = h.p;
  f.q = h.q;
  f.r0 = h.r0;
  f.n = h.n;
  return f;
}

maximal::PlateauProblem build_problem(const MaximalProblemFile& f, std::optional<int> grid) {
  const int n = grid.value_or(f.n);
  const auto model = hpq::PoincareModel::standard(f.p, f.q);
  if (f.boundary_kind == "table") {
    if (n != f.n) throw InputError("a tabulated boundary fixes the grid");
    hpq::SpacelikeGraph B(model, f.r0, n);
    for (int k = 0; k < B.lattice().size(); ++k) {
      if (!B.is_boundary(k)) continue;
      const auto it = f.table.find({B.lattice().ix(k), B.lattice().iy(k)});
      if (it == f.table.end()) throw InputError("boundary table misses ring node " + std::to_string(k));
      B.set_value(k, it->second);
    }
    return maximal::PlateauProblem{maximal::radial_interpolation(B), f.params};
  }
  if (f.boundary_kind == "boosted") {
    const auto B = hpq::boosted_totally_geodesic(n, f.r0, f.boundary_args[0]);
    return maximal::PlateauProblem{maximal::radial_interpolation(B), f.params};
  }
  std::function<Vec(const Vec&)> fn;
  if (f.boundary_kind == "constant") {
    Vec v(f.q + 1);
    for (int i = 0; i <= f.q; ++i) v(i) = f.boundary_args[i];
    fn = [v](const Vec&) { return v; };
  } else {
    const double amp = f.boundary_args[0], freq = f.boundary_args[1];
    const int q = f.q, p = f.p;
    fn = [amp, freq, q, p](const Vec& x) {
      const double a = p == 2 ? std::atan2(x(1), x(0)) : (x(0) > 0 ? 0.0 : M_PI);
      const double t = amp * std::cos(freq * a);
      Vec v = Vec::Zero(q + 1);
      v(0) = std::cos(t);
      v(1) = std::sin(t);
      return v;
    };
  }
  return maximal::make_problem(model, f.r0, n, fn, f.params);
}

// ---------------------------------------------------------------------------
// Cones and spheres

ConeFile read_cone(std::istream& in, const std::string& source) {
  Reader rd(in, source);
  expect_header(rd, "cone");
  std::vector<std::string> tok;
  std::string kind;
  Vec axis;
  double angle = -1.0;
  int orthant_dim = 0;
  std::vector<Vec> rays;
  ConeFile f;
  while (rd.next(tok)) {
    const std::string& k = tok[0];
    if (k == "cone") {
      if (tok.size() < 2) rd.fail("cone needs a kind");
      kind = tok[1];
      if (kind == "orthant") {
        rd.arity(tok, 3);
        orthant_dim = rd.integer(tok[2]);
      } else if (kind != "round" && kind != "polytope") {
        rd.fail("unknown cone kind '" + kind + "'");
      }
    } else if (k == "axis") {
      axis = rd.vec(tok, 1);
    } else if (k == "angle") {
      rd.arity(tok, 2);
      angle = rd.num(tok[1]);
    } else if (k == "ray") {
      rays.push_back(rd.vec(tok, 1));
    } else if (k == "grid") {
      rd.arity(tok, 2);
      f.grid = rd.integer(tok[1]);
    } else {
      rd.fail("unexpected '" + k + "'");
    }
  }
  try {
    if (kind == "round") {
      if (axis.size() < 2 || !(angle > 0.0)) throw InputError(source + ": round cone needs axis and angle");
      f.cone = affine::ConvexCone::round(axis, angle);
    } else if (kind == "polytope") {
      f.cone = affine::ConvexCone::polytope(rays);
    } else if (kind == "orthant") {
      f.cone = affine::ConvexCone::orthant(orthant_dim);
    } else {
      throw InputError(source + ": missing 'cone' line");
    }
  } catch (const std::invalid_argument& e) {
    throw InputError(source + ": " + e.what());
  }
  if (f.cone.p() < 1 || f.cone.p() > 2) throw InputError(source + ": cones must live in R^2 or R^3");
  return f;
}

void write_sphere(std::ostream& out, const affine::AffineHypersurface& M) {
  const auto& D = M.domain();
  out << "robustfam sphere\np " << M.p() << "\ns " << fmt(M.exponent()) << "\nn " << M.n() << "\n";
  if (D.kind == affine::Domain::Kind::Ball) {
    out << "domain ball\n";
  } else {
    out << "domain polytope " << D.A.rows() << "\n";
    for (int r = 0; r < D.A.rows(); ++r) {
      for (int c = 0; c < D.A.cols(); ++c) out << fmt(D.A(r, c)) << " ";
      out << fmt(D.b(r)) << "\n";
    }
  }
  out << "chart\n";
  write_matrix(out, M.chart());
  const Lattice& lat = M.lattice();
  for (int k = 0; k < lat.size(); ++k)
    if (lat.valid(k)) out << "node " << lat.ix(k) << " " << lat.iy(k) << " " << fmt(M.value(k)) << "\n";
}

affine::AffineHypersurface read_sphere(std::istream& in, const std::string& source) {
  Reader rd(in, source);
  expect_header(rd, "sphere");
  int p = -1, n = -1;
  double s = -1.0;
  std::optional<affine::Domain> dom;
  std::optional<Mat> L;
  std::optional<affine::AffineHypersurface> M;
  std::vector<bool> seen;
  std::vector<std::string> tok;
  while (rd.next(tok)) {
    const std::string& k = tok[0];
    if (M && k != "node") rd.fail("header key after node data");
    if (k == "p") { rd.arity(tok, 2); p = rd.integer(tok[1]); }
    else if (k == "s") { rd.arity(tok, 2); s = rd.num(tok[1]); }
    else if (k == "n") { rd.arity(tok, 2); n = rd.integer(tok[1]); }
    else if (k == "domain") {
      if (p < 1 || p > 2) rd.fail("domain before a valid p");
      affine::Domain D;
      D.p = p;
      if (tok.size() == 2 && tok[1] == "ball") {
        D.kind = affine::Domain::Kind::Ball;
      } else if (tok.size() == 3 && tok[1] == "polytope") {
        D.kind = affine::Domain::Kind::Polytope;
        const int faces = rd.integer(tok[2]);
        if (faces < p + 1) rd.fail("polytope needs at least p+1 faces");
        const Mat Ab = rd.matrix(faces, p + 1);
        D.A = Ab.leftCols(p);
        D.b = Ab.col(p);
      } else {
        rd.fail("domain must be 'ball' or 'polytope <faces>'");
      }
      dom = D;
    } else if (k == "chart") {
      if (p < 1) rd.fail("chart before p");
      L = rd.matrix(p + 1, p + 1);
    } else if (k == "node") {
      if (!M) {
        if (!dom || !L || !(s > 0.0) || n < 5) rd.fail("incomplete header before node data");
        try {
          M.emplace(*dom, *L, s, n);
        } catch (const std::invalid_argument& e) {
          rd.fail(e.what());
        }
        seen.assign(M->lattice().size(), false);
      }
      rd.arity(tok, 4);
      const int i = rd.integer(tok[1]), j = rd.integer(tok[2]);
      if (!M->lattice().valid(i, j)) rd.fail("node outside the chart lattice");
      const double w = rd.num(tok[3]);
      if (!(w > 0.0)) rd.fail("w must be positive");
      const int kk = M->lattice().index(i, j);
      M->values()[kk] = w;
      seen[kk] = true;
    } else {
      rd.fail("unexpected '" + k + "'");
    }
  }
  if (!M) rd.fail("sphere has no nodes");
  for (int k = 0; k < M->lattice().size(); ++k)
    if (M->lattice().valid(k) && !seen[k]) rd.fail("missing node " + std::to_string(k));
  return *M;
}

// ---------------------------------------------------------------------------
// Representations

void write_representation(std::ostream& out, const rep::Representation& rho) {
  out << "robustfam representation\ngenerators " << rho.group.rank() << "\n";
  if (rho.tag == forms::GroupTag::SO) out << "tag SO " << rho.form.p() << " " << rho.form.q_plus_1() << "\n";
  else out << "tag SL\n";
  for (const auto& r : rho.group.relators) out << "relator " << rep::to_string(r) << "\n";
  for (int i = 0; i < rho.group.rank(); ++i) {
    out << "matrix " << i + 1 << "\n";
    write_matrix(out, rho.matrices[i]);
  }
}

rep::Representation read_representation(std::istream& in, const std::string& source) {
  Reader rd(in, source);
  expect_header(rd, "representation");
  rep::Representation rho;
  int gens = -1, dim = -1;
  std::vector<std::string> tok;
  std::vector<std::optional<Mat>> mats;
  std::vector<std::vector<std::string>> relators;
  while (rd.next(tok)) {
    const std::string& k = tok[0];
    if (k == "generators") {
      rd.arity(tok, 2);
      gens = rd.integer(tok[1]);
      if (gens < 1) rd.fail("need at least one generator");
      mats.assign(gens, std::nullopt);
    } else if (k == "tag") {
      if (tok.size() == 2 && tok[1] == "SL") {
        rho.tag = forms::GroupTag::SL;
      } else if (tok.size() == 4 && tok[1] == "SO") {
        rho.tag = forms::GroupTag::SO;
        const int p = rd.integer(tok[2]), q1 = rd.integer(tok[3]);
        if (p < 1 || q1 < 1) rd.fail("SO signature must be positive");
        rho.form = forms::QuadraticForm(p, q1);
        dim = p + q1;
      } else {
        rd.fail("tag must be 'SL' or 'SO p q1'");
      }
    } else if (k == "relator") {
      relators.emplace_back(tok.begin() + 1, tok.end());
    } else if (k == "matrix") {
      rd.arity(tok, 2);
      const int i = rd.integer(tok[1]);
      if (i < 1 || i > gens) rd.fail("matrix index outside 1..generators");
      if (dim < 0) {
        // SL: dimension from the first row
        std::vector<std::string> row;
        if (!rd.next(row)) rd.fail("matrix truncated");
        dim = static_cast<int>(row.size());
        Mat m(dim, dim);
        for (int c = 0; c < dim; ++c) m(0, c) = rd.num(row[c]);
        m.bottomRows(dim - 1) = rd.matrix(dim - 1, dim);
        mats[i - 1] = m;
      } else {
        mats[i - 1] = rd.matrix(dim, dim);
      }
    } else {
      rd.fail("unexpected '" + k + "'");
    }
  }
  if (gens < 1) rd.fail("missing 'generators'");
  for (int i = 0; i < gens; ++i) {
    if (!mats[i]) rd.fail("missing matrix " + std::to_string(i + 1));
    rho.matrices.push_back(*mats[i]);
    rho.group.generators.push_back("s" + std::to_string(i + 1));
  }
  try {
    for (const auto& r : relators) {
      std::string joined;
      for (const auto& t : r) joined += t + " ";
      rho.group.relators.push_back(rep::parse_word(joined));
      rho.group.validate_word(rho.group.relators.back());
    }
    rep::validate(rho);
  } catch (const std::invalid_argument& e) {
    throw InputError(source + ": " + e.what());
  }
  return rho;
}

// ---------------------------------------------------------------------------
// Scenarios

namespace {

rep::Representation named_representation(Reader& rd, const std::vector<std::string>& tok, harness::Family fam,
                                         int dim, const std::string& base) {
  rep::Representation r;
  const std::string& name = tok[1];
  if (name == "file") {
    rd.arity(tok, 3);
    auto f = open_input((std::filesystem::path(base) / tok[2]).string());
    r = read_representation(f, tok[2]);
    if (r.dim() != dim) rd.fail("representation acts on the wrong dimension");
    return r;
  }
  if (name == "triangle_237") { rd.arity(tok, 2); r = rep::triangle_237(); }
  else if (name == "genus2") { rd.arity(tok, 2); r = rep::genus2(); }
  else if (name == "parabolic") { rd.arity(tok, 3); r = rep::parabolic(rd.num(tok[2])); }
  else rd.fail("unknown representation '" + name + "'");
  if (fam == harness::Family::AffineSphere) {
    if (dim != 3) rd.fail("corpus representations act on R^3");
    return rep::as_sl3(r);
  }
  if (dim == 4) return rep::embed_so22(r);
  if (dim == 3) return r;
  rd.fail("corpus representations act on H^{2,0} or H^{2,1}");
}

Mat affine_diag(int d, double t) {
  Mat a = Mat::Identity(d, d);
  a(0, 0) = std::exp(t);
  a(d - 1, d - 1) = std::exp(-t);
  return a;
}

}  // namespace

harness::Scenario read_scenario(std::istream& in, const Config& cfg, const std::string& base,
                                const std::string& source, std::vector<std::string>* checks) {
  Reader rd(in, source);
  expect_header(rd, "scenario");
  harness::Scenario s;
  s.seed = cfg.seed;
  s.tol = cfg.tol;
  int grid = cfg.grid;
  double r0 = cfg.r0;
  bool family_set = false;
  std::optional<rep::Representation> rho;
  std::vector<std::string> seq_tok, planted;
  std::vector<std::string> tok;
  std::vector<std::string> check_list;
  std::vector<std::vector<std::string>> corpus;
  while (rd.next(tok)) {
    const std::string& k = tok[0];
    if (k == "family") {
      rd.arity(tok, 2);
      try {
        s.family = rep::family_from_string(tok[1]);
      } catch (const std::invalid_argument& e) {
        rd.fail(e.what());
      }
      family_set = true;
    } else if (k == "seed") {
      rd.arity(tok, 2);
      s.seed = static_cast<std::uint64_t>(rd.integer(tok[1]));
    } else if (k == "grid") {
      rd.arity(tok, 2);
      grid = rd.integer(tok[1]);
    } else if (k == "r0") {
      rd.arity(tok, 2);
      r0 = rd.num(tok[1]);
    } else if (k == "group_samples") {
      rd.arity(tok, 2);
      s.group_samples = rd.integer(tok[1]);
    } else if (k == "tol") {
      rd.arity(tok, 3);
      double* f = tolerance_field(s.tol, tok[1]);
      if (!f) rd.fail("unknown tolerance '" + tok[1] + "'");
      *f = rd.num(tok[2]);
    } else if (k == "corpus") {
      if (tok.size() < 2) rd.fail("corpus needs a kind");
      corpus.push_back(tok);
    } else if (k == "representation") {
      if (tok.size() < 2) rd.fail("representation needs a name");
      corpus.push_back(tok);
    } else if (k == "sequence") {
      if (tok.size() < 2) rd.fail("sequence needs a kind");
      seq_tok = tok;
    } else if (k == "planted") {
      rd.arity(tok, 2);
      planted = tok;
    } else if (k == "divergent") {
      rd.arity(tok, 4);
      if (tok[1] != "boost" && tok[1] != "diagonal") rd.fail("divergent kind must be boost or diagonal");
      corpus.push_back(tok);
    } else if (k == "checks") {
      check_list.assign(tok.begin() + 1, tok.end());
    } else {
      rd.fail("unexpected '" + k + "'");
    }
  }
  if (!family_set) rd.fail("missing 'family'");
  if (grid < 5 || grid % 2 == 0) rd.fail("grid must be odd and at least 5");
  const bool hpq_family = s.family == harness::Family::MaximalHpq;
  const Vec v0 = Vec::Unit(2, 0);

  // Corpus and representation, in file order.
  for (const auto& t : corpus) {
    if (t[0] == "representation") continue;
    if (t[0] == "divergent") continue;
    const std::string& kind = t[1];
    if (hpq_family) {
      if (kind == "totally_geodesic") {
        rd.arity(t, 2);
        s.graphs.push_back(hpq::totally_geodesic(2, 1, grid, r0, v0));
      } else if (kind == "hyperbolic_plane") {
        rd.arity(t, 2);
        s.graphs.push_back(hpq::totally_geodesic(2, 0, grid, r0, Vec::Ones(1)));
      } else if (kind == "boosted") {
        rd.arity(t, 3);
        s.graphs.push_back(hpq::boosted_totally_geodesic(grid, r0, rd.num(t[2])));
      } else if (kind == "graph") {
        rd.arity(t, 3);
        auto f = open_input((std::filesystem::path(base) / t[2]).string());
        s.graphs.push_back(read_graph(f, t[2]));
      } else if (kind == "wavy") {
        rd.arity(t, 4);
        MaximalProblemFile pf;
        pf.r0 = r0;
        pf.n = grid;
        pf.boundary_kind = "wavy";
        pf.boundary_args = {rd.num(t[2]), rd.num(t[3])};
        pf.params.target = cfg.solver_tol;
        const auto res = maximal::solve_maximal(build_problem(pf));
        if (!res.converged) rd.fail("maximal solver did not reach the target for this corpus entry");
        s.graphs.push_back(res.graph);
      } else {
        rd.fail("unknown H^{p,q} corpus kind '" + kind + "'");
      }
    } else {
      if (kind == "hyperboloid") {
        rd.arity(t, 2);
        s.spheres.push_back(affine::hyperboloid(2, grid));
      } else if (kind == "titeica") {
        rd.arity(t, 2);
        s.spheres.push_back(affine::titeica(2, grid, std::pow(3.0, -1.5)));
      } else if (kind == "sphere") {
        rd.arity(t, 3);
        auto f = open_input((std::filesystem::path(base) / t[2]).string());
        s.spheres.push_back(read_sphere(f, t[2]));
      } else if (kind == "solve") {
        rd.arity(t, 3);
        affine::ConvexCone C = affine::ConvexCone::orthant(3);
        if (t[2] == "round") C = affine::ConvexCone::round(Vec::Unit(3, 2), M_PI / 4);
        else if (t[2] != "orthant") rd.fail("solve recipe must be 'round' or 'orthant'");
        affine::NewtonParams np;
        np.target = cfg.affine_tol;
        const auto res = affine::solve_affine_sphere(C, grid, np);
        if (!res.converged) rd.fail("affine solver did not converge for this corpus entry");
        s.spheres.push_back(res.surface);
      } else {
        rd.fail("unknown affine corpus kind '" + kind + "'");
      }
    }
  }
  if (hpq_family ? s.graphs.empty() : s.spheres.empty()) rd.fail("empty scenario: no corpus entries");
  const int d = hpq_family ? s.graphs.front().model().dim() : s.spheres.front().dim();
  for (const auto& g : s.graphs)
    if (g.model().dim() != d) rd.fail("corpus graphs live in different spaces");
  if (!hpq_family && s.tol.domination_c == 0.0) {
    const auto it = cfg.c_by_dim.find(s.spheres.front().p());
    if (it != cfg.c_by_dim.end()) s.tol.domination_c = it->second;
  }

  for (const auto& t : corpus) {
    if (t[0] == "representation") rho = named_representation(rd, t, s.family, d, base);
    if (t[0] == "divergent") {
      const double step = rd.num(t[2]);
      const int count = rd.integer(t[3]);
      if (count < 2) rd.fail("divergent sequence needs at least two terms");
      s.divergent.clear();
      for (int n = 1; n <= count; ++n)
        s.divergent.push_back(hpq_family ? forms::boost(d, 0, d - 1, step * n) : affine_diag(d, step * n));
    }
  }

  // Representation sequence acting on corpus[0].
  if (!seq_tok.empty()) {
    if (!rho) rd.fail("sequence without a representation");
    const std::string& kind = seq_tok[1];
    auto push = [&](const rep::Representation& r, const Mat& h) {
      s.rho_seq.push_back(r);
      if (hpq_family) s.graph_seq.push_back(hpq::transformed(s.graphs.front(), h));
      else {
        auto M = s.spheres.front();
        M.set_chart(h * M.chart());
        s.sphere_seq.push_back(M);
      }
    };
    if (kind == "constant") {
      rd.arity(seq_tok, 3);
      const int count = rd.integer(seq_tok[2]);
      if (count < 2) rd.fail("sequence needs at least two terms");
      for (int n = 0; n < count; ++n) push(*rho, Mat::Identity(d, d));
    } else if (kind == "conjugated") {
      rd.arity(seq_tok, 4);
      const double step = rd.num(seq_tok[2]);
      const int count = rd.integer(seq_tok[3]);
      if (count < 2) rd.fail("sequence needs at least two terms");
      for (int n = 1; n <= count; ++n) {
        const Mat h = hpq_family ? forms::boost(d, 0, d - 1, step * n) : affine_diag(d, step * n);
        push(rep::conjugate(*rho, h), h);
      }
    } else if (kind == "path") {
      // boosted boundaries b_n = b (1 - rate^n), solved, with rho conjugated along
      if (!hpq_family || d != 4) rd.fail("path sequences are defined in H^{2,1}");
      rd.arity(seq_tok, 5);
      const double b = rd.num(seq_tok[2]), rate = rd.num(seq_tok[3]);
      const int count = rd.integer(seq_tok[4]);
      if (count < 2 || !(rate > 0.0 && rate < 1.0)) rd.fail("path needs count >= 2 and rate in (0, 1)");
      for (int n = 1; n <= count; ++n) {
        const double bn = b * (1.0 - std::pow(rate, n));
        MaximalProblemFile pf;
        pf.r0 = r0;
        pf.n = grid;
        pf.boundary_kind = "boosted";
        pf.boundary_args = {bn};
        pf.params.target = cfg.solver_tol;
        const auto res = maximal::solve_maximal(build_problem(pf));
        if (!res.converged) rd.fail("maximal solver did not reach the target along the path");
        s.rho_seq.push_back(rep::conjugate(*rho, forms::boost(d, 0, d - 1, bn)));
        s.graph_seq.push_back(res.graph);
      }
    } else {
      rd.fail("unknown sequence kind '" + kind + "'");
    }
  }
  if (!planted.empty()) {
    // conjugate every term by a fixed element that does not preserve the corpus
    if (s.rho_seq.empty()) rd.fail("'planted' needs a sequence");
    const double t = rd.num(planted[1]);
    const Mat k = hpq_family ? forms::boost(d, 1, d - 1, t) : affine_diag(d, t);
    for (auto& r : s.rho_seq) r = rep::conjugate(r, k);
  }
  if (checks) *checks = check_list;
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw InputError(source + ": " + e.what());
  }
  return s;
}

harness::Scenario load_scenario(const std::string& path, const Config& cfg, std::vector<std::string>* checks) {
  auto f = open_input(path);
  const auto base = std::filesystem::path(path).parent_path().string();
  return read_scenario(f, cfg, base.empty() ? "." : base, path, checks);
}

// ---------------------------------------------------------------------------
// Reports

namespace {
std::string clean(std::string s) {
  for (char& c : s)
    if (c == '\t' || c == '\n') c = ' ';
  return s;
}
}  // namespace

void write_report_table(std::ostream& out, const std::vector<harness::PropertyReport>& reports) {
  out << "property\tcheck\tstatus\tsamples\tworst_margin\tdetail\n";
  for (const auto& r : reports)
    for (const auto& c : r.checks)
      out << r.property << "\t" << c.name << "\t" << (c.vacuous ? "vacuous" : c.pass ? "pass" : "fail") << "\t"
          << c.checked << "\t" << fmt(c.worst_margin) << "\t" << clean(c.detail) << "\n";
}

void write_witnesses(std::ostream& out, const std::vector<harness::PropertyReport>& reports) {
  out << "kind\tcorpus\tsequence\tterm\tnode\tnode2\tgenerator\tmargin\tg\n";
  for (const auto& r : reports)
    for (const auto& c : r.checks)
      for (const auto& w : c.witnesses) {
        out << w.kind << "\t" << w.corpus << "\t" << w.sequence << "\t" << w.term << "\t" << w.node << "\t" << w.node2
            << "\t" << w.generator << "\t" << fmt(w.margin) << "\t";
        if (w.g.size()) {
          out << w.g.rows();
          for (int i = 0; i < w.g.rows(); ++i)
            for (int j = 0; j < w.g.cols(); ++j) out << " " << fmt(w.g(i, j));
        }
        out << "\n";
      }
}

std::vector<harness::Witness> read_witnesses(std::istream& in, const std::string& source) {
  std::vector<harness::Witness> out;
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& m) { throw InputError(source + ":" + std::to_string(line_no) + ": " + m); };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.rfind("kind\t", 0) == 0) continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, '\t');) cols.push_back(c);
    if (cols.size() < 8) fail("witness line needs at least 8 columns");
    harness::Witness w;
    try {
      w.kind = cols[0];
      w.corpus = std::stoi(cols[1]);
      w.sequence = std::stoi(cols[2]);
      w.term = std::stoi(cols[3]);
      w.node = std::stoi(cols[4]);
      w.node2 = std::stoi(cols[5]);
      w.generator = std::stoi(cols[6]);
      w.margin = std::stod(cols[7]);
      if (cols.size() > 8 && !cols[8].empty()) {
        std::istringstream gs(cols[8]);
        int d = 0;
        gs >> d;
        if (d < 1) fail("bad matrix size");
        w.g.resize(d, d);
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j)
            if (!(gs >> w.g(i, j))) fail("matrix truncated");
      }
    } catch (const std::logic_error&) {
      fail("malformed witness line");
    }
    out.push_back(w);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Export

void export_graph_table(std::ostream& out, const hpq::SpacelikeGraph& M) {
  const Lattice& lat = M.lattice();
  const int p = M.model().p(), q = M.model().q();
  for (int a = 0; a < p; ++a) out << (a ? "\t" : "") << "x" << a + 1;
  for (int c = 0; c <= q; ++c) out << "\tv" << c;
  out << "\n";
  for (int k = 0; k < lat.size(); ++k) {
    if (!lat.valid(k)) continue;
    const Vec x = lat.coord(k);
    for (int a = 0; a < p; ++a) out << (a ? "\t" : "") << fmt(x(a));
    for (int c = 0; c <= q; ++c) out << "\t" << fmt(M.value(k)(c));
    out << "\n";
  }
}

void export_distance_table(std::ostream& out, const hpq::SpacelikeGraph& M) {
  const int o = M.center();
  const auto dist = hpq::intrinsic_distances(M, o);
  const Vec po = M.point(o);
  out << "node\tpseudo\tintrinsic\n";
  for (int k = 0; k < M.lattice().size(); ++k) {
    if (!M.lattice().valid(k) || !std::isfinite(dist[k])) continue;
    out << k << "\t" << fmt(hpq::pseudo_distance(po, M.point(k), M.model().Q)) << "\t" << fmt(dist[k]) << "\n";
  }
}

void export_sphere_table(std::ostream& out, const affine::AffineHypersurface& M) {
  const Lattice& lat = M.lattice();
  const int p = M.p();
  for (int a = 0; a < p; ++a) out << (a ? "\t" : "") << "x" << a + 1;
  out << "\tw";
  for (int c = 0; c <= p; ++c) out << "\tX" << c;
  out << "\n";
  for (int k = 0; k < lat.size(); ++k) {
    if (!lat.valid(k)) continue;
    const Vec x = lat.coord(k), X = M.point(k);
    for (int a = 0; a < p; ++a) out << (a ? "\t" : "") << fmt(x(a));
    out << "\t" << fmt(M.value(k));
    for (int c = 0; c <= p; ++c) out << "\t" << fmt(X(c));
    out << "\n";
  }
}

}  // namespace robust::io
