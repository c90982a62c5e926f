"""Analysis of planar piecewise-linear Filippov systems.

Specs are plain dicts with keys A_plus, b_plus, A_minus, b_minus and optional c, d, name, provenance.
"""
import json

from . import _core
from ._core import FilippovError, __version__, beta0, solve_eta_c, solve_rho_c, t_star

DEFAULT_SEED = _core.DEFAULT_SEED

__all__ = [
    "FilippovError",
    "__version__",
    "analyze",
    "beta0",
    "bundled",
    "bundled_names",
    "canonical",
    "classify",
    "displacement",
    "load",
    "orbit",
    "run_criterion",
    "solve_eta_c",
    "solve_rho_c",
    "t_star",
]


def _text(spec):
    return spec if isinstance(spec, str) else json.dumps(spec)


def load(path):
    """Read and validate a spec file."""
    with open(path, encoding="utf-8") as f:
        return json.loads(_core.normalize_spec(f.read()))


def bundled_names():
    return list(_core.bundled_names())


def bundled(name):
    return json.loads(_core.bundled_spec(name))


def classify(spec):
    return json.loads(_core.classification_report(_text(spec)))


def canonical(spec):
    return json.loads(_core.canonical_report(_text(spec)))


def analyze(spec, seed=DEFAULT_SEED):
    return json.loads(_core.analysis_report(_text(spec), seed))


def orbit(spec, x0, y0, backward=False, budget=200, per_segment=64):
    """Samples (t, x, y, kind) along the orbit from (x0, y0) and the terminal event name."""
    rows, terminal = _core.orbit_samples(_text(spec), x0, y0, backward, budget, per_segment)
    return rows, terminal


def displacement(spec, ys):
    """Rows (y, P_R, P_Linv, D) in normal-form coordinates; None outside a map's domain."""
    return _core.displacement_rows(_text(spec), [float(y) for y in ys])


def run_criterion(criterion, seed=DEFAULT_SEED, sweep_systems=10000):
    """(id, name, passed, detail) for one acceptance criterion."""
    return _core.run_criterion(criterion, seed, sweep_systems)
