#include "robust/rep_actions.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace robust;
using namespace robust::rep;

TEST_CASE("free-group words") {
  CHECK(reduce({1, -1, 2}) == Word{2});
  CHECK(reduce({1, 2, -2, -1}).empty());
  CHECK(inverse({1, -2, 3}) == Word{-3, 2, -1});
  CHECK(word_length({2, 1, -1, -2, 1}) == 1);
  // reduced words of length exactly n in rank r: 2r (2r-1)^{n-1}
  CHECK(ball(2, 1).size() == 1 + 4);
  CHECK(ball(2, 3).size() == 1 + 4 + 12 + 36);
  CHECK(parse_word(to_string({1, -2, 2})) == Word{1, -2, 2});
  CHECK(parse_word("e").empty());
  FinGenGroup G{{"a", "b"}, {}};
  CHECK_THROWS_AS(G.validate_word({3}), std::invalid_argument);
  CHECK_THROWS_AS(G.validate_word({0}), std::invalid_argument);
}

TEST_CASE("Fuchsian corpus satisfies its relators") {
  for (const auto& rho : {triangle_237(), genus2(), parabolic(1.0)}) {
    CHECK(relator_defect(rho) < 1e-10);
    CHECK_NOTHROW(validate(rho));
    CHECK_NOTHROW(validate(embed_so22(rho)));
    CHECK_NOTHROW(validate(as_sl3(rho)));
  }
  // x^2 = 1 and (xy)^7 = 1 in the triangle group
  const auto T = triangle_237();
  CHECK(evaluate(T, {1, 1}).isIdentity(1e-12));
  CHECK(evaluate(T, {1, 2, 1, 2, 1, 2, 1, 2, 1, 2, 1, 2, 1, 2}).isIdentity(1e-10));
  auto broken = T;
  broken.matrices[0] = forms::boost(3, 0, 2, 0.1) * broken.matrices[0];
  CHECK_THROWS_AS(validate(broken), std::invalid_argument);
}

TEST_CASE("invariance and equivariant renormalization in H^{2,1}") {
  const auto TG = hpq::totally_geodesic(2, 1, 33, 0.9, Vec::Unit(2, 0));
  const auto rho = embed_so22(triangle_237());
  CHECK(invariance_residual(rho, TG) < 1e-12);
  CHECK((renormalize(TG) - Mat::Identity(4, 4)).norm() < 1e-12);
  const Mat h = forms::boost(4, 0, 3, 0.8);
  const auto M = hpq::transformed(TG, h);
  CHECK(invariance_residual(conjugate(rho, h), M) < 1e-9);
  const Mat g = renormalize(M);
  CHECK(canonical_residual(M, g) < 1e-9);
  // g undoes h up to the stabilizer of the canonical pointed plane, which fixes e_1, e_2 up to rotation
  const Mat k = g * h;
  CHECK(forms::is_member(k, forms::GroupTag::SO, forms::QuadraticForm(2, 2)));
  CHECK(std::abs(k(3, 3)) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("affine renormalization lands on the canonical point") {
  const auto H = affine::hyperboloid(2, 33);
  std::mt19937 rng(3);
  auto H2 = H;
  H2.set_chart(forms::random_sl(3, rng, 0.3) * H.chart());
  const Vec x = select_basepoint(H2);
  const Mat g = renormalize(H2, x);
  CHECK(g.determinant() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(canonical_residual(H2, x, g) < 1e-10);
  CHECK((g * H2.point_at(x) - affine_canonical_point(2)).norm() < 1e-10);
}

TEST_CASE("renormalization pipeline on a conjugated sequence") {
  const auto TG = hpq::totally_geodesic(2, 1, 33, 0.9, Vec::Unit(2, 0));
  const auto rho = embed_so22(triangle_237());
  std::vector<Representation> rs;
  std::vector<hpq::SpacelikeGraph> Ms;
  for (int n = 1; n <= 8; ++n) {
    const Mat h = forms::boost(4, 0, 3, 0.4 * n);
    rs.push_back(conjugate(rho, h));
    Ms.push_back(hpq::transformed(TG, h));
  }
  const PipelineReport R = renormalization_pipeline(rs, Ms);
  CHECK(R.ok());
  CHECK_FALSE(R.input_convergent);
  for (double v : R.generator_norm) CHECK(v <= 10.0 * R.generator_norm.front());
  CHECK(R.limit_residual <= 2.0 * R.input_floor);
}

TEST_CASE("tail selection prefers the latest flat window") {
  const auto rho = triangle_237();
  std::vector<Representation> seq;
  for (int n = 0; n < 9; ++n) seq.push_back(conjugate(rho, forms::boost(3, 0, 2, n < 6 ? 0.5 * n : 2.5)));
  const TailWindow w = select_tail(seq, 1.0 / 3.0);
  CHECK(w.begin == 6);
  CHECK(w.end == 9);
  CHECK(w.gap == 0.0);
  CHECK(bounded_proxy({1.0, 2.0, 3.0, 3.0, 3.0, 3.0}));
}

TEST_CASE("displacement grows linearly in word length for a cocompact action") {
  const auto TG = hpq::totally_geodesic(2, 1, 33, 0.9, Vec::Unit(2, 0));
  const DisplacementFit F = displacement_fit(embed_so22(triangle_237()), TG, 4);
  CHECK(F.samples > 0);
  CHECK(std::isfinite(F.kappa));
  CHECK(F.kappa > 0.0);
  CHECK(F.violations == 0);
}

TEST_CASE("properness probe: large boosts move the plane, rotations do not") {
  const auto TG = hpq::totally_geodesic(2, 1, 33, 0.9, Vec::Unit(2, 0));
  std::vector<Mat> gs;
  for (int i = 1; i <= 4; ++i) gs.push_back(forms::boost(4, 0, 2, 1.5 * i));
  const ProbeReport P = stabilizer_properness_probe(TG, gs);
  REQUIRE(P.entries.size() == gs.size());
  for (size_t i = 1; i < P.entries.size(); ++i) CHECK(P.entries[i].norm > P.entries[i - 1].norm);
  CHECK(P.flagged == 0);
}
