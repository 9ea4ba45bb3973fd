import math
import os
import pathlib

import numpy as np
import pytest

import robustfam as rf

DATA = pathlib.Path(os.environ.get("ROBUSTFAM_DATA", pathlib.Path(__file__).resolve().parents[2] / "data"))


def test_pseudo_distance_on_hyperbolic_plane():
    # two points of H^2 at hyperbolic distance t along a boost
    Q = rf.QuadraticForm(2, 1)
    o = np.array([0.0, 0.0, 1.0])
    t = 0.7
    x = rf.boost(3, 0, 2, t) @ o
    assert Q(x, x) == pytest.approx(-1.0, abs=1e-14)
    assert rf.pseudo_distance(o, x, Q) == pytest.approx(t, abs=1e-14)


def test_poincare_embed_lands_on_quadric():
    z = rf.poincare_embed(np.array([0.5]), np.array([1.0]), 1, 0)
    assert z == pytest.approx([4.0 / 3.0, 5.0 / 3.0], abs=1e-15)


def test_totally_geodesic_is_maximal_and_round_trips():
    M = rf.totally_geodesic(2, 1, 17)
    assert M.maximality_residual() < 1e-12
    N = rf.graph_from_text(M.to_text())
    assert N.to_text() == M.to_text()
    Q = rf.QuadraticForm(2, 2)
    for z in M.points():
        assert Q(z, z) == pytest.approx(-1.0, abs=1e-12)


def test_solve_constant_problem():
    M, residual, converged = rf.solve_maximal(str(DATA / "constant.problem"))
    assert converged and residual < 1e-8
    assert M.n == 17


def test_solve_round_cone_matches_hyperboloid():
    S, residual, converged = rf.solve_affine(str(DATA / "round.cone"), grid=17)
    assert converged
    assert S.sphere_deviation() < 1e-4


def test_malformed_inputs_raise():
    with pytest.raises(rf.InputError):
        rf.solve_maximal(str(DATA / "malformed.problem"))
    with pytest.raises(rf.InputError, match="contains a line"):
        rf.solve_affine(str(DATA / "line.cone"))
    with pytest.raises(rf.InputError, match="empty"):
        rf.check(str(DATA / "empty.scenario"))


def test_planted_scenario_fails_input_invariance():
    rows = {r["check"]: r for r in rf.check(str(DATA / "planted.scenario"))}
    assert not rows["closedness.input_invariance"]["pass"]
    assert rows["closedness.input_invariance"]["worst_margin"] < 0
    assert math.isfinite(rows["closedness.cauchy"]["worst_margin"])
