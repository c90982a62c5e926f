import json
import math
import pathlib

import pytest

import filippov

DATA = pathlib.Path(__file__).resolve().parents[2] / "data" / "systems"


def test_bundled_names_match_data_files():
    names = filippov.bundled_names()
    assert len(names) == 11
    assert sorted(names) == sorted(p.stem for p in DATA.glob("*.json"))


def test_load_matches_bundled():
    assert filippov.load(DATA / "example1.json") == filippov.bundled("example1")


def test_example5_has_two_sliding_orbits():
    rep = filippov.analyze(filippov.bundled("example5"))
    assert rep["periodic"]["n_sliding"] == 2
    assert rep["periodic"]["n_crossing"] == 0
    assert rep["periodic"]["configuration"]["tag"] == "F2A_a"


def test_analysis_is_deterministic():
    spec = filippov.bundled("example6")
    assert filippov.analyze(spec) == filippov.analyze(spec)


def test_classify_reports_axis_structure():
    rep = filippov.classify(filippov.bundled("example1"))
    assert "sigma" in rep


def test_zero_normal_raises_with_code():
    spec = filippov.bundled("example1")
    spec["c"] = [0, 0]
    with pytest.raises(filippov.FilippovError) as e:
        filippov.classify(spec)
    assert e.value.code == "ZeroNormal"


def test_malformed_spec():
    with pytest.raises(filippov.FilippovError) as e:
        filippov.classify({"A_plus": [[1, 0], [0, 1]]})
    assert e.value.code == "MalformedInput"


def test_orbit_samples():
    rows, terminal = filippov.orbit(filippov.bundled("example1"), 0.0, 0.0, budget=6)
    assert terminal == "Closed"
    assert len(rows) > 10
    assert {r[3] for r in rows} <= {"flow", "slide"}
    ts = [r[0] for r in rows]
    assert ts == sorted(ts)


def test_displacement_single_sign_change():
    ys = [0.5 * k for k in range(1, 101)]
    d = [r[3] for r in filippov.displacement(filippov.bundled("example6"), ys)]
    assert all(v is not None for v in d)
    assert sum((a > 0) != (b > 0) for a, b in zip(d, d[1:])) == 1


def test_constants():
    t = filippov.t_star()
    assert math.pi < t < 2 * math.pi
    assert abs(math.cos(t) - math.sin(t) - math.exp(-t)) < 1e-14
    assert filippov.beta0() == pytest.approx(0.0271137, rel=1e-5)
    assert filippov.solve_rho_c(0.05) < 0


def test_single_criterion():
    cid, name, passed, detail = filippov.run_criterion(8)
    assert cid == 8 and passed, detail
