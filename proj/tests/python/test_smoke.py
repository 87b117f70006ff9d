import json
import math

import numpy as np
import pytest

import perihom

LAMINATE = {
    "dim": 2,
    "entries": [
        [
            [
                {"k": [0, 0], "re": 2.0},
                {"k": [1, 0], "im": -0.5},
                {"k": [-1, 0], "im": 0.5},
            ],
            [],
        ],
        [
            [],
            [
                {"k": [0, 0], "re": 2.0},
                {"k": [1, 0], "im": -0.5},
                {"k": [-1, 0], "im": 0.5},
            ],
        ],
    ],
}


def test_homogenize_laminate():
    out = perihom.homogenize(json.dumps(LAMINATE), n_cell=64, tol=1e-10)
    assert out["a0"][0][0] == pytest.approx(math.sqrt(3.0), abs=1e-8)
    assert out["a0"][1][1] == pytest.approx(2.0, abs=1e-8)
    assert out["lambda_low"] == pytest.approx(1.0, abs=1e-10)
    assert out["route_disagreement"] < 1e-8


def test_steklov_contracts_and_fixes_constants():
    n = 32
    x = np.arange(n) / n
    field = np.cos(2 * np.pi * x)[:, None] * np.ones((1, n))
    smoothed = perihom.steklov_apply(field, 0.25)
    assert np.sqrt((smoothed**2).mean()) <= np.sqrt((field**2).mean())
    const = np.full((n, n), 1.5)
    assert np.allclose(perihom.steklov_apply(const, 0.25), const, atol=1e-12)


def test_bmo_two_level():
    n = 16
    g = np.where(np.arange(n)[:, None] < n // 2, 1.0, -1.0) * np.ones((1, n))
    assert perihom.bmo_seminorm(g, 4) == pytest.approx(1.0, abs=1e-12)


def test_fit_rate():
    pts = [(1 / m, 0.3 / m**2) for m in (4, 8, 16, 32)]
    assert perihom.fit_rate(pts) == pytest.approx(2.0, abs=1e-10)


def test_resolvent_identity_symbol():
    n = 16
    x = np.arange(n) / n
    f = np.cos(2 * np.pi * x)[:, None] * np.ones((1, n))
    ident = {"dim": 2, "entries": [[[{"k": [0, 0], "re": 1.0}], []], [[], [{"k": [0, 0], "re": 1.0}]]]}
    u, stats = perihom.solve_resolvent(json.dumps(ident), 0.25, f, n, tol=1e-12)
    expected = f / (1.0 + 4.0 * np.pi**2)
    assert np.allclose(u, expected, atol=1e-10)
    assert stats["u_l2"] <= stats["f_l2"]
    u0 = perihom.solve_homogenized([[1.0, 0.0], [0.0, 1.0]], f)
    assert np.allclose(u0, expected, atol=1e-12)


def test_run_sweep_reports_slopes():
    cfg = {
        "coefficient": LAMINATE,
        "eps_denominators": [4, 8, 16],
        "grid_rule": 8,
        "n_cell": 32,
        "tol": 1e-10,
    }
    rep = json.loads(perihom.run_sweep(json.dumps(cfg), 2))
    assert rep["slopes_defined"]
    assert rep["s0"] >= 0.9
    assert rep["s2"] >= 1.7
    assert len(rep["rows"]) == 3
