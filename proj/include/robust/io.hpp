#pragma once

#include "robust/affine.hpp"
#include "robust/cone.hpp"
#include "robust/groups.hpp"
#include "robust/harness.hpp"
#include "robust/hpq.hpp"
#include "robust/maximal.hpp"

#include <cstdint>
#include <fstream>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace robust::io {

/// Malformed input.  The message carries the source name and line number when known.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 17 significant digits: exact round trip for doubles.
std::string fmt(double v);

// ---------------------------------------------------------------------------
// Configuration (file + flags; flags win)

struct Config {
  harness::Tolerances tol;
  int grid = 33;
  double r0 = 0.9;
  std::uint64_t seed = 1;
  double solver_tol = 1e-7;         // maximal flow target for solver recipes
  double affine_tol = 1e-10;        // affine Newton target
  std::map<int, double> c_by_dim;   // affine domination constant per p
  std::string out = ".";

  /// Throws InputError unless every tolerance is positive and the grid is odd and >= 5.
  void validate() const;
};

/// Reads `key value` lines ('#' comments).  Keys: grid, r0, seed, solver_tol, affine_tol, out,
/// c.<p>, and tol.<name> for every field of harness::Tolerances (tol.pipeline.<name> for
/// the pipeline parameters).  Unknown keys are errors.
void read_config(std::istream& in, Config& cfg, const std::string& source = "config");
Config load_config(const std::string& path);

// ---------------------------------------------------------------------------
// Spacelike graphs

/// Header lines (p, q, r0, n, transform rows), then `node i j v_0 .. v_q` for every sampled
/// node.  Lattice nodes without a `node` line are dropped from the chart.
void write_graph(std::ostream& out, const hpq::SpacelikeGraph& M);
hpq::SpacelikeGraph read_graph(std::istream& in, const std::string& source = "graph");

/// Boundary recipe of a Plateau problem: constant <v..>, boosted <b>, wavy <amplitude> <k>, or
/// table followed by `node i j v..` ring lines and `end`.
struct MaximalProblemFile {
  int p = 2, q = 1;
  double r0 = 0.9;
  int n = 33;
  std::string boundary_kind;
  std::vector<double> boundary_args;
  std::map<std::pair<int, int>, Vec> table;
  maximal::FlowParams params;
};
MaximalProblemFile read_maximal_problem(std::istream& in, const std::string& source = "problem");
/// Builds the problem at grid n (the file's grid unless overridden).
maximal::PlateauProblem build_problem(const MaximalProblemFile& f, std::optional<int> grid = {});

// ---------------------------------------------------------------------------
// Cones and affine spheres

/// `cone round`, `axis z..`, `angle t`; or `cone polytope` followed by `ray z..` lines; or
/// `cone orthant <dim>`.  Optional `grid n`.  A cone containing a line is an InputError.
struct ConeFile {
  affine::ConvexCone cone = affine::ConvexCone::orthant(3);
  std::optional<int> grid;
};
ConeFile read_cone(std::istream& in, const std::string& source = "cone");

/// Header (p, s, n, domain, chart rows) then `node i j w` lines for every lattice node.
void write_sphere(std::ostream& out, const affine::AffineHypersurface& M);
affine::AffineHypersurface read_sphere(std::istream& in, const std::string& source = "sphere");

// ---------------------------------------------------------------------------
// Representations

/// `generators k`, `tag SO p q1` or `tag SL`, optional `relator <signed indices>` lines, then
/// `matrix <i>` followed by d rows.  Validated on read.
void write_representation(std::ostream& out, const rep::Representation& rho);
rep::Representation read_representation(std::istream& in, const std::string& source = "representation");

// ---------------------------------------------------------------------------
// Scenarios

/// Declarative scenario; see the README for the directive list.  Paths are relative to
/// `base_dir`.  Throws InputError on malformed or empty scenarios.
harness::Scenario read_scenario(std::istream& in, const Config& cfg, const std::string& base_dir = ".",
                                const std::string& source = "scenario", std::vector<std::string>* checks = nullptr);
harness::Scenario load_scenario(const std::string& path, const Config& cfg, std::vector<std::string>* checks = nullptr);

// ---------------------------------------------------------------------------
// Reports and witnesses

/// Tab-separated: property, check, status, samples, worst_margin, detail.
void write_report_table(std::ostream& out, const std::vector<harness::PropertyReport>& reports);
/// Tab-separated: kind, corpus, sequence, term, node, node2, generator, margin, then the
/// row-major entries of g (empty when there is none).
void write_witnesses(std::ostream& out, const std::vector<harness::PropertyReport>& reports);
std::vector<harness::Witness> read_witnesses(std::istream& in, const std::string& source = "witnesses");

// ---------------------------------------------------------------------------
// Export tables

/// x_1 .. x_p, then the S^q components.
void export_graph_table(std::ostream& out, const hpq::SpacelikeGraph& M);
/// node, pseudo-distance and intrinsic distance from the centre node.
void export_distance_table(std::ostream& out, const hpq::SpacelikeGraph& M);
/// x_1 .. x_p, w, then the ambient point.
void export_sphere_table(std::ostream& out, const affine::AffineHypersurface& M);

/// Opens a file or throws InputError("cannot open ...").
std::ifstream open_input(const std::string& path);

}  // namespace robust::io
