import json
from fractions import Fraction

import pytest

import polydens


def test_exponents_are_exact():
    assert polydens.pigeonhole_kappa(3, 1, 2) == 1
    assert polydens.gram_pigeonhole_kappa(4, 3, 1) == Fraction(9, 2)
    assert polydens.volume_exponent("sl3") == 2
    assert polydens.ergodic_theta(4) == (2, Fraction(1, 4))
    assert polydens.affine_kappa("1/2", 1, 5) == 5
    assert polydens.projective_kappa(2, "1/2", 1, "2/3", 2) == 1
    assert polydens.counterexample_thresholds(2, 6) == (1, Fraction(1, 2))
    assert [row["threshold"] for row in polydens.theorem_table()] == ["1", "m", "1", "5"]


def test_errors_surface_as_exceptions():
    with pytest.raises(polydens.PolydensError, match="DegenerateHeuristic"):
        polydens.pigeonhole_kappa(2, 1, 2)
    with pytest.raises(polydens.PolydensError):
        polydens.search("quadratic", 7, [0.5], 1e-9, 3.0)


def test_enumeration_and_counts():
    pts = polydens.enumerate_points("hyperboloid", 2, n=3)
    corners = [(a, b, c) for a in (-1, 1) for b in (-1, 1) for c in (-1, 1)]
    assert sorted(map(tuple, pts)) == sorted([(-1, 0, 0), (0, -1, 0), (0, 1, 0), (1, 0, 0)] + corners)
    assert polydens.count_points("full", 2, n=3) == 27
    assert polydens.count_points("det", 2) == 3480
    fit = polydens.growth_exponent([(t, polydens.count_points("hyperboloid", t)) for t in (20, 40, 80, 160)])
    assert abs(fit["a"] - 2) < 0.3


def test_maps():
    assert polydens.charpoly_invariants([1, 0, 0, 0, 2, 0, 0, 0, 3]) == (6, -11, 6)
    x = polydens.companion_witness(4, -2, 3)
    assert polydens.charpoly_invariants(x) == (3, 4, -2)
    m = polydens.random_form(2, 1, -1.0, 7)
    assert polydens.signature(m) == (2, 1)


def test_search_and_schedule():
    out = polydens.search("quadratic", 7, [0.5], 0.2, 1.2)
    assert out["found"] and out["error"] < 0.2 and out["height"] <= out["max_height"]
    again = polydens.search("quadratic", 7, [0.5], 0.2, 1.2, workers=3)
    assert again == out
    sched = polydens.run_schedule("quadratic", 3, [0.3], 1.3)
    assert len(sched["records"]) == 5 and sched["fit"] is not None


def test_counterexample():
    r = polydens.lemma_margin([1.0], 0.0, -0.4, 10)
    assert r["min_margin"] == 0.0 and r["argmin"] == {"x": [1], "z": 1}
    v = polydens.verify_no_solutions([2.3], 0.5, 1.5, [0.1, 0.05])
    for row in v["rows"]:
        assert row["no_solution"] == (row["min_deviation"] >= row["epsilon"])
        assert (row["witness"] is None) == row["no_solution"]


def test_cli_roundtrip():
    code, out, err = polydens.run_cli("exponent", "--ergodic", "6")
    assert code == 0 and err == ""
    assert json.loads(out)["result"]["ergodic"] == {"n_e": 4, "theta": "1/8"}
    code, _, err = polydens.run_cli("search", "--eps", "1e-9", "--kappa", "3")
    assert code == 3 and "BallTooLarge" in err
