"""JSON bundle configs: torus basis, Hermitian form, semicharacter, power.

Schema (exact field names)::

    {
      "n": 1,
      "basis": [[1.0, 0.0], [0.0, 1.0]],
      "H": [[{"re": 1.0, "im": 0.0}]],
      "chi_phases": [0.0, 0.0],
      "k": 1
    }

``basis`` holds 2n entries; each entry is either a single [re, im] pair
(allowed when n = 1) or a list of n such pairs.  ``H`` entries are
{"re": ..., "im": ...} objects.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import ConfigParseError
from .lattice import PolarizedTorus, Semicharacter


@dataclass(frozen=True)
class BundleConfig:
    torus: PolarizedTorus
    chi: Semicharacter
    k: int


def _parse_pair(entry, where):
    if (not isinstance(entry, (list, tuple)) or len(entry) != 2
            or not all(isinstance(x, (int, float)) for x in entry)):
        raise ConfigParseError(f"{where}: expected a [re, im] pair, got {entry!r}")
    return complex(float(entry[0]), float(entry[1]))


def _parse_basis(raw, n):
    if not isinstance(raw, list) or len(raw) != 2 * n:
        raise ConfigParseError(f"basis must list 2n = {2 * n} vectors")
    out = np.zeros((2 * n, n), dtype=complex)
    for i, entry in enumerate(raw):
        if n == 1 and len(entry) == 2 and not isinstance(entry[0], (list, tuple)):
            out[i, 0] = _parse_pair(entry, f"basis[{i}]")
            continue
        if not isinstance(entry, list) or len(entry) != n:
            raise ConfigParseError(f"basis[{i}] must list n = {n} [re, im] pairs")
        for j, pair in enumerate(entry):
            out[i, j] = _parse_pair(pair, f"basis[{i}][{j}]")
    return out


def _parse_H(raw, n):
    if not isinstance(raw, list) or len(raw) != n:
        raise ConfigParseError(f"H must be an {n} x {n} matrix")
    out = np.zeros((n, n), dtype=complex)
    for i, row in enumerate(raw):
        if not isinstance(row, list) or len(row) != n:
            raise ConfigParseError(f"H[{i}] must have {n} entries")
        for j, cell in enumerate(row):
            if not isinstance(cell, dict) or set(cell) != {"re", "im"}:
                raise ConfigParseError(f'H[{i}][{j}] must be {{"re": ..., "im": ...}}')
            out[i, j] = complex(float(cell["re"]), float(cell["im"]))
    return out


def parse_bundle(data) -> BundleConfig:
    """Build a BundleConfig from a parsed JSON object."""
    if not isinstance(data, dict):
        raise ConfigParseError("config root must be a JSON object")
    missing = {"n", "basis", "H", "chi_phases", "k"} - set(data)
    if missing:
        raise ConfigParseError(f"config missing fields: {sorted(missing)}")
    n = data["n"]
    if not isinstance(n, int) or n < 1:
        raise ConfigParseError("n must be a positive integer")
    k = data["k"]
    if not isinstance(k, int) or k < 1:
        raise ConfigParseError("k must be a positive integer")
    phases = data["chi_phases"]
    if (not isinstance(phases, list) or len(phases) != 2 * n
            or not all(isinstance(x, (int, float)) for x in phases)):
        raise ConfigParseError(f"chi_phases must list 2n = {2 * n} reals")
    try:
        torus = PolarizedTorus(n=n, basis=_parse_basis(data["basis"], n), H=_parse_H(data["H"], n))
    except ValueError as exc:
        raise ConfigParseError(str(exc))
    return BundleConfig(torus=torus, chi=Semicharacter(phases=tuple(phases)), k=k)


def load_bundle(path) -> BundleConfig:
    """Read and parse a JSON bundle config file."""
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigParseError(f"cannot read config {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise ConfigParseError(f"invalid JSON in {path}: {exc}")
    return parse_bundle(data)


def bundle_to_dict(torus, chi, k):
    """Serialize bundle data back to the JSON schema."""
    return {
        "n": torus.n,
        "basis": [[[float(z.real), float(z.imag)] for z in row] for row in torus.basis],
        "H": [[{"re": float(z.real), "im": float(z.imag)} for z in row] for row in torus.H],
        "chi_phases": [float(p) for p in chi.phases],
        "k": int(k),
    }
