"""Scenario JSON files and trajectory CSV files.

A scenario file mirrors :class:`~rocketbvp.model.ScenarioConfig`::

    {
      "label": "desk",
      "t0": 0, "t1": 60, "x0": 0, "x1": 130000,
      "A": 1.0, "C_D": 0.75,
      "mass": {"m_dry": 1000, "propellant": 9000, "burn_rate": 150},
      "exhaust": {"c": -3000}
    }

``exhaust`` may instead be piecewise constant:
``{"c": [-3000, -2600], "breakpoints": [30]}``. Optional keys and their
defaults: ``g`` 9.81, ``rho0`` 1.225, ``H`` 8000, ``n_grid`` 201,
``tol`` 1e-8, ``max_iter`` 500, ``damping`` 0.5; in ``mass``,
``propellant`` 0, ``burn_rate`` 0, ``t_start`` 0, ``t_burnout`` (end of
propellant). Unknown keys are rejected.
"""

from __future__ import annotations

import csv
import json
import re
from dataclasses import asdict
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import InvalidScenarioError
from .grid import GridFunction
from .model import ExhaustProfile, MassProfile, ScenarioConfig

__all__ = [
    "ScenarioFileError",
    "load_scenario",
    "parse_scenario",
    "scenario_to_dict",
    "write_trajectory_csv",
    "read_trajectory_csv",
    "CSV_HEADER",
    "bundled_scenario",
]

CSV_HEADER = ("t", "z", "zdot", "x", "v", "residual")

_REQUIRED = ("t0", "t1", "x0", "x1", "A", "C_D", "mass", "exhaust")
_OPTIONAL = ("g", "rho0", "H", "n_grid", "tol", "max_iter", "damping")
_MASS_KEYS = ("m_dry", "propellant", "burn_rate", "t_start", "t_burnout")
_EXHAUST_KEYS = ("c", "breakpoints")


class ScenarioFileError(InvalidScenarioError):
    """Malformed scenario file; the message starts with ``path:line:col``."""

    def __init__(self, path, line, col, message):
        super().__init__(f"{path}:{line}:{col}: {message}")
        self.path, self.line, self.col = path, line, col


def _anchor(text: str, key: str) -> tuple[int, int]:
    m = re.search(r'"%s"\s*:' % re.escape(key), text)
    if not m:
        return 1, 1
    line = text.count("\n", 0, m.start()) + 1
    col = m.start() - (text.rfind("\n", 0, m.start()) + 1) + 1
    return line, col


def _number(value, key, text, path, integer=False):
    ok = isinstance(value, (int, float)) and not isinstance(value, bool)
    if integer:
        ok = ok and float(value).is_integer()
    if not ok:
        raise ScenarioFileError(path, *_anchor(text, key), f"{key!r} must be {'an integer' if integer else 'a number'}")
    return int(value) if integer else float(value)


def parse_scenario(text: str, path: str = "<scenario>") -> tuple[ScenarioConfig, str]:
    """Parse scenario JSON text into ``(config, label)``."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioFileError(path, exc.lineno, exc.colno, exc.msg) from None
    if not isinstance(doc, dict):
        raise ScenarioFileError(path, 1, 1, "top level must be a JSON object")

    for key in doc:
        if key not in (*_REQUIRED, *_OPTIONAL, "label"):
            raise ScenarioFileError(path, *_anchor(text, key), f"unknown key {key!r}")
    for key in _REQUIRED:
        if key not in doc:
            raise ScenarioFileError(path, 1, 1, f"missing required key {key!r}")

    mass_doc = doc["mass"]
    if not isinstance(mass_doc, dict):
        raise ScenarioFileError(path, *_anchor(text, "mass"), "'mass' must be an object")
    for key in mass_doc:
        if key not in _MASS_KEYS:
            raise ScenarioFileError(path, *_anchor(text, key), f"unknown mass key {key!r}")
    if "m_dry" not in mass_doc:
        raise ScenarioFileError(path, *_anchor(text, "mass"), "missing required key 'm_dry'")

    exh_doc = doc["exhaust"]
    if not isinstance(exh_doc, dict):
        raise ScenarioFileError(path, *_anchor(text, "exhaust"), "'exhaust' must be an object")
    for key in exh_doc:
        if key not in _EXHAUST_KEYS:
            raise ScenarioFileError(path, *_anchor(text, key), f"unknown exhaust key {key!r}")
    if "c" not in exh_doc:
        raise ScenarioFileError(path, *_anchor(text, "exhaust"), "missing required key 'c'")

    try:
        mass_kw = {
            k: (None if v is None and k == "t_burnout" else _number(v, k, text, path))
            for k, v in mass_doc.items()
        }
        mass = MassProfile(**mass_kw)
        c = exh_doc["c"]
        values = [_number(v, "c", text, path) for v in (c if isinstance(c, list) else [c])]
        bps = [_number(v, "breakpoints", text, path) for v in exh_doc.get("breakpoints", [])]
        exhaust = ExhaustProfile(values=tuple(values), breakpoints=tuple(bps))
        kw = {k: _number(doc[k], k, text, path) for k in ("t0", "t1", "x0", "x1", "A", "C_D")}
        for k in _OPTIONAL:
            if k in doc:
                kw[k] = _number(doc[k], k, text, path, integer=k in ("n_grid", "max_iter"))
        config = ScenarioConfig(mass=mass, exhaust=exhaust, **kw)
    except ScenarioFileError:
        raise
    except InvalidScenarioError as exc:
        raise ScenarioFileError(path, 1, 1, str(exc)) from None

    label = doc.get("label", Path(path).stem)
    if not isinstance(label, str) or not label:
        raise ScenarioFileError(path, *_anchor(text, "label"), "'label' must be a non-empty string")
    return config, label


def bundled_scenario(name: str):
    """Path of a scenario shipped with the package (``linear``, ``certified_drag``, ...)."""
    return resources.files("rocketbvp") / "scenarios" / f"{name}.json"


def load_scenario(path) -> tuple[ScenarioConfig, str]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise ScenarioFileError(str(path), 0, 0, f"cannot read file: {exc}") from None
    return parse_scenario(text, str(path))


def scenario_to_dict(config: ScenarioConfig, label: str | None = None) -> dict:
    """Inverse of :func:`parse_scenario` (with all defaults spelled out)."""
    d = asdict(config)
    d["exhaust"] = {"c": list(config.exhaust.values), "breakpoints": list(config.exhaust.breakpoints)}
    if label is not None:
        d["label"] = label
    return d


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_trajectory_csv(path, z: GridFunction, x, v, residual) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for row in zip(z.grid, z.values, z.derivs, x, v, residual):
            w.writerow([_fmt(r) for r in row])


def read_trajectory_csv(path) -> tuple[GridFunction, dict[str, np.ndarray]]:
    """Read a trajectory file back; returns the grid function and all columns."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if tuple(rows[0]) != CSV_HEADER:
        raise ValueError(f"unexpected header {rows[0]}")
    data = np.array([[float(s) for s in r] for r in rows[1:]])
    cols = {name: data[:, k] for k, name in enumerate(CSV_HEADER)}
    return GridFunction(cols["t"], cols["z"], cols["zdot"]), cols
