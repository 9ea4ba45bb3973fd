#include "robust/harness.hpp"

#include <doctest.h>

#include <cmath>

using namespace robust;
using namespace robust::harness;

namespace {

Scenario hpq_oracle(int n = 33) {
  Scenario s;
  s.family = Family::MaximalHpq;
  const auto TG = hpq::totally_geodesic(2, 1, n, 0.9, Vec::Unit(2, 0));
  s.graphs = {TG, hpq::boosted_totally_geodesic(n, 0.9, 0.5)};
  const auto rho = rep::embed_so22(rep::triangle_237());
  for (int k = 1; k <= 6; ++k) {
    const Mat h = forms::boost(4, 0, 3, 0.4 * k);
    s.rho_seq.push_back(rep::conjugate(rho, h));
    s.graph_seq.push_back(hpq::transformed(TG, h));
  }
  return s;
}

Scenario affine_oracle() {
  Scenario s;
  s.family = Family::AffineSphere;
  s.spheres = {affine::hyperboloid(2, 33), affine::titeica(2, 33, std::pow(3.0, -1.5))};
  const auto rho = rep::as_sl3(rep::triangle_237());
  for (int k = 1; k <= 6; ++k) {
    Mat h = Mat::Identity(3, 3);
    h(0, 0) = std::exp(0.3 * k);
    h(2, 2) = std::exp(-0.3 * k);
    s.rho_seq.push_back(rep::conjugate(rho, h));
    auto M = s.spheres.front();
    M.set_chart(h * M.chart());
    s.sphere_seq.push_back(M);
  }
  return s;
}

void expect_all_pass(const std::vector<PropertyReport>& reps) {
  for (const auto& r : reps) {
    INFO(r.summary());
    CHECK(r.ok());
  }
}

void expect_replay(const Scenario& s, const std::vector<PropertyReport>& reps) {
  for (const auto& r : reps)
    for (const auto& c : r.checks)
      for (const auto& w : c.witnesses) {
        INFO(w.kind);
        CHECK(replay(s, w) == doctest::Approx(w.margin).epsilon(1e-12).scale(1.0));
      }
}

}  // namespace

TEST_CASE("H^{2,1} oracle corpus passes every property and witnesses replay") {
  const Scenario s = hpq_oracle();
  REQUIRE_NOTHROW(s.validate());
  const std::vector<PropertyReport> reps{check_invariance(s), check_compactness(s), check_avoidance(s),
                                         check_domination(s), closedness_scenario(s)};
  expect_all_pass(reps);
  expect_replay(s, reps);
}

TEST_CASE("affine oracle corpus passes every property and witnesses replay") {
  const Scenario s = affine_oracle();
  const std::vector<PropertyReport> reps{check_invariance(s), check_compactness(s), check_avoidance(s),
                                         check_domination(s), closedness_scenario(s)};
  expect_all_pass(reps);
  expect_replay(s, reps);
}

TEST_CASE("checks are independent of each other and of call order") {
  const Scenario s = hpq_oracle(17);
  const auto a1 = check_avoidance(s);
  const auto d1 = check_domination(s);
  const auto d2 = check_domination(s);
  const auto a2 = check_avoidance(s);
  REQUIRE(a1.checks.size() == a2.checks.size());
  for (size_t i = 0; i < a1.checks.size(); ++i) CHECK(a1.checks[i].worst_margin == a2.checks[i].worst_margin);
  for (size_t i = 0; i < d1.checks.size(); ++i) CHECK(d1.checks[i].worst_margin == d2.checks[i].worst_margin);
}

TEST_CASE("a representation that does not preserve the corpus fails with a witness") {
  Scenario s = hpq_oracle(17);
  const Mat k = forms::boost(4, 1, 3, 0.3);
  for (auto& r : s.rho_seq) r = rep::conjugate(r, k);
  const PropertyReport r = closedness_scenario(s);
  CHECK_FALSE(r.ok());
  bool found = false;
  for (const auto& c : r.checks)
    if (c.name == "closedness.input_invariance") {
      found = true;
      CHECK_FALSE(c.pass);
      REQUIRE(!c.witnesses.empty());
      CHECK(c.witnesses.front().margin < 0.0);
      CHECK(replay(s, c.witnesses.front()) == doctest::Approx(c.witnesses.front().margin));
    }
  CHECK(found);
}

TEST_CASE("a non-maximal graph fails invariance") {
  Scenario s;
  s.graphs = {hpq::totally_geodesic(2, 1, 17, 0.9, Vec::Unit(2, 0))};
  auto& M = s.graphs.front();
  // tilt the interior by a bump: no longer maximal
  for (int k = 0; k < M.lattice().size(); ++k)
    if (M.lattice().interior(k)) {
      const double r2 = M.lattice().coord(k).squaredNorm();
      Vec v(2);
      v << std::cos(0.3 * (0.81 - r2)), std::sin(0.3 * (0.81 - r2));
      M.set_value(k, v);
    }
  const PropertyReport r = check_invariance(s);
  CHECK_FALSE(r.ok());
}

TEST_CASE("scenario validation") {
  Scenario empty;
  CHECK_THROWS_AS(empty.validate(), std::invalid_argument);
  Scenario s = hpq_oracle(17);
  s.graph_seq.pop_back();
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  Scenario t = hpq_oracle(17);
  t.divergent = {Mat::Identity(3, 3)};
  CHECK_THROWS_AS(t.validate(), std::invalid_argument);
}

TEST_CASE("random group samples are deterministic in the seed") {
  Scenario s = hpq_oracle(17);
  const auto a = random_elements(s);
  const auto b = random_elements(s);
  REQUIRE(a.size() == static_cast<size_t>(s.group_samples + 1));
  CHECK(a.front().isIdentity());
  for (size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
  s.seed = 2;
  CHECK_FALSE(random_elements(s)[1] == a[1]);
}
