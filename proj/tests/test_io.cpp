#include "robust/io.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace robust;
using io::InputError;

namespace {

const std::string kData = ROBUSTFAM_DATA_DIR;

template <class Write, class T>
std::string text_of(Write w, const T& obj) {
  std::ostringstream s;
  w(s, obj);
  return s.str();
}

}  // namespace

TEST_CASE("17 significant digits round-trip doubles exactly") {
  CHECK(io::fmt(0.1) == "0.10000000000000001");
  CHECK(io::fmt(-2.0) == "-2");
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> U(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double x = U(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    CHECK(std::stod(io::fmt(x)) == x);
  }
}

TEST_CASE("graph files round-trip byte for byte") {
  auto M = hpq::boosted_totally_geodesic(17, 0.9, 0.4);
  M.set_transform(forms::boost(4, 1, 2, 0.25));
  M.drop_node(M.lattice().index(0, 8));
  const std::string a = text_of(io::write_graph, M);
  std::istringstream in(a);
  const auto N = io::read_graph(in);
  CHECK(text_of(io::write_graph, N) == a);
  CHECK_FALSE(N.lattice().valid(0, 8));
}

TEST_CASE("malformed graph files report the line") {
  std::istringstream bad_header("robustfam sphere\n");
  CHECK_THROWS_WITH_AS(io::read_graph(bad_header, "g"), doctest::Contains("g:1"), InputError);
  std::istringstream not_unit("robustfam graph\np 2\nq 1\nr0 0.9\nn 5\nnode 2 2 1 1\n");
  CHECK_THROWS_WITH_AS(io::read_graph(not_unit, "g"), doctest::Contains("g:6: node value is not a unit vector"),
                       InputError);
  std::istringstream bad_number("robustfam graph\np 2\nq 1\nr0 zero\n");
  CHECK_THROWS_WITH_AS(io::read_graph(bad_number, "g"), doctest::Contains("not a number"), InputError);
}

TEST_CASE("configuration keys, validation and precedence") {
  io::Config cfg;
  std::istringstream in("grid 17\nseed 4\ntol.maximality 1e-5\ntol.pipeline.window 0.5\nc.2 1.8\n# comment\n");
  io::read_config(in, cfg);
  CHECK(cfg.grid == 17);
  CHECK(cfg.seed == 4u);
  CHECK(cfg.tol.maximality == 1e-5);
  CHECK(cfg.tol.pipeline.window == 0.5);
  CHECK(cfg.c_by_dim.at(2) == 1.8);
  CHECK_NOTHROW(cfg.validate());
  std::istringstream unknown("speed 3\n");
  CHECK_THROWS_AS(io::read_config(unknown, cfg), InputError);
  cfg.grid = 16;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("odd"), InputError);
  cfg.grid = 17;
  cfg.tol.group = 0.0;
  CHECK_THROWS_AS(cfg.validate(), InputError);
}

TEST_CASE("problem files") {
  std::istringstream in("robustfam maximal-problem\np 2\nq 1\nr0 0.9\nn 17\ntarget 1e-8\nboundary boosted 0.3\n");
  const auto f = io::read_maximal_problem(in);
  CHECK(f.params.target == 1e-8);
  const auto prob = io::build_problem(f);
  const auto B = hpq::boosted_totally_geodesic(17, 0.9, 0.3);
  for (int k = 0; k < B.lattice().size(); ++k)
    if (B.is_boundary(k)) CHECK((prob.guess.value(k) - B.value(k)).norm() < 1e-14);
  CHECK(io::build_problem(f, 9).guess.n() == 9);

  std::istringstream wavy_q0("robustfam maximal-problem\np 2\nq 0\nboundary wavy 0.3 2\n");
  CHECK_THROWS_AS(io::read_maximal_problem(wavy_q0), InputError);
  std::istringstream table("robustfam maximal-problem\nn 5\nboundary table\nnode 0 2 1 0\n");
  CHECK_THROWS_WITH_AS(io::read_maximal_problem(table), doctest::Contains("without 'end'"), InputError);
  auto file = io::open_input(kData + "/malformed.problem");
  CHECK_THROWS_WITH_AS(io::read_maximal_problem(file), doctest::Contains("r0 must lie in (0, 1)"), InputError);
}

TEST_CASE("cone files") {
  auto round = io::open_input(kData + "/round.cone");
  const auto r = io::read_cone(round);
  CHECK(r.cone.kind() == affine::ConvexCone::Kind::Round);
  CHECK(r.grid == 33);
  auto line = io::open_input(kData + "/line.cone");
  CHECK_THROWS_WITH_AS(io::read_cone(line), doctest::Contains("contains a line"), InputError);
  std::istringstream none("robustfam cone\n");
  CHECK_THROWS_AS(io::read_cone(none), InputError);
}

TEST_CASE("sphere files round-trip for ball and polytope charts") {
  for (const auto& S : {affine::hyperboloid(2, 17), affine::titeica(2, 17, std::pow(3.0, -1.5))}) {
    const std::string a = text_of(io::write_sphere, S);
    std::istringstream in(a);
    const auto T = io::read_sphere(in);
    CHECK(text_of(io::write_sphere, T) == a);
  }
}

TEST_CASE("representation files round-trip and are validated") {
  const auto rho = rep::embed_so22(rep::triangle_237());
  const std::string a = text_of(io::write_representation, rho);
  std::istringstream in(a);
  const auto r2 = io::read_representation(in);
  CHECK(text_of(io::write_representation, r2) == a);
  CHECK(r2.group.relators == rho.group.relators);

  std::string broken = a;
  broken.replace(broken.find("relator"), 7, "relator 1 2 #");
  std::istringstream bad(broken);
  CHECK_THROWS_AS(io::read_representation(bad), InputError);
}

TEST_CASE("scenario files") {
  io::Config cfg;
  cfg.grid = 17;
  std::vector<std::string> checks;
  const auto s = io::load_scenario(kData + "/planted.scenario", cfg, &checks);
  CHECK(s.graphs.size() == 1);
  CHECK(s.rho_seq.size() == 6);
  CHECK(checks == std::vector<std::string>{"closedness"});
  CHECK_THROWS_WITH_AS(io::load_scenario(kData + "/empty.scenario", cfg), doctest::Contains("empty"), InputError);
  std::istringstream no_rep("robustfam scenario\nfamily maximal_hpq\ncorpus totally_geodesic\nsequence constant 3\n");
  CHECK_THROWS_WITH_AS(io::read_scenario(no_rep, cfg), doctest::Contains("without a representation"), InputError);
  std::istringstream fam("robustfam scenario\nfamily flat\n");
  CHECK_THROWS_AS(io::read_scenario(fam, cfg), InputError);
  std::istringstream aff("robustfam scenario\nfamily affine_sphere\ngrid 17\ncorpus hyperboloid\ncorpus titeica\n"
                         "representation genus2\nsequence conjugated 0.2 3\ndivergent diagonal 0.5 4\n");
  const auto t = io::read_scenario(aff, cfg);
  CHECK(t.spheres.size() == 2);
  CHECK(t.sphere_seq.size() == 3);
  CHECK(t.divergent.size() == 4);
}

TEST_CASE("witness tables round-trip") {
  harness::PropertyReport r;
  r.property = "domination";
  harness::CheckResult c;
  c.name = "domination.equivariance";
  harness::Witness w;
  w.kind = c.name;
  w.corpus = 1;
  w.node = 40;
  w.node2 = 77;
  w.g = forms::boost(4, 0, 3, 0.3);
  w.margin = -1.25e-7;
  c.record(w);
  r.checks.push_back(c);
  std::ostringstream out;
  io::write_witnesses(out, {r});
  std::istringstream in(out.str());
  const auto ws = io::read_witnesses(in);
  REQUIRE(ws.size() == 1);
  CHECK(ws[0].kind == w.kind);
  CHECK(ws[0].node2 == 77);
  CHECK(ws[0].margin == w.margin);
  CHECK(ws[0].g == w.g);

  std::ostringstream rep;
  io::write_report_table(rep, {r});
  CHECK(rep.str().rfind("property\tcheck\tstatus\tsamples\tworst_margin\tdetail\n", 0) == 0);
  CHECK(rep.str().find("domination\tdomination.equivariance\tfail\t1\t" + io::fmt(w.margin)) != std::string::npos);
}
