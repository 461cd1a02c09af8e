"""CSV and JSON file formats.

Every table is a headed CSV with full-precision (``%.17g``) numbers so
that round trips are bit-identical.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .exceptions import InvalidInputError
from .painleve2 import Painleve2Table
from .scattering import InitialProfile, ScatteringData, profile_from_samples

PROFILE_HEADER = ("x", "re_u", "im_u")
SCATTERING_HEADER = ("k", "re_a", "im_a", "re_b", "im_b", "re_r", "im_r")
PAINLEVE_HEADER = ("s", "y", "y_prime", "H")
SAMPLES_HEADER = ("x", "t", "s", "re_u", "im_u", "modulus", "phase")
SIGNATURE_HEADER = ("re_k", "im_k", "sign")


def write_csv(path, header, columns):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    data = np.column_stack([np.asarray(c, dtype=float) for c in columns]) if len(columns[0]) else \
        np.empty((0, len(header)))
    np.savetxt(path, data, delimiter=",", header=",".join(header), comments="", fmt="%.17g")
    return path


def read_csv(path, header):
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"no such file: {path}")
    with path.open() as fh:
        first = fh.readline().strip()
    names = tuple(h.strip() for h in first.split(","))
    if names != tuple(header):
        raise InvalidInputError(f"{path}: expected header {','.join(header)}, found {first!r}")
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if data.size == 0:
        raise InvalidInputError(f"{path}: no data rows")
    return data


def write_json(path, payload):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return path


def read_json(path):
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"no such file: {path}")
    try:
        return json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"{path}: invalid JSON ({exc})") from exc


def read_profile(path, decay_cutoff=1e-12) -> InitialProfile:
    data = read_csv(path, PROFILE_HEADER)
    return profile_from_samples(data[:, 0], data[:, 1] + 1j * data[:, 2], decay_cutoff)


def write_profile(path, x, u):
    u = np.asarray(u)
    return write_csv(path, PROFILE_HEADER, [x, u.real, u.imag])


def write_scattering(csv_path, data: ScatteringData):
    write_csv(csv_path, SCATTERING_HEADER,
              [data.k_grid, data.a.real, data.a.imag, data.b.real, data.b.imag, data.r.real, data.r.imag])
    sidecar = Path(csv_path).with_suffix(".json")
    write_json(sidecar, {"rho": data.kstar_amplitude, "gamma": data.kstar_phase, "kstar": data.kstar})
    return sidecar


def read_scattering(csv_path) -> ScatteringData:
    d = read_csv(csv_path, SCATTERING_HEADER)
    meta = read_json(Path(csv_path).with_suffix(".json"))
    return ScatteringData(k_grid=d[:, 0], a=d[:, 1] + 1j * d[:, 2], b=d[:, 3] + 1j * d[:, 4],
                          r=d[:, 5] + 1j * d[:, 6], kstar=float(meta["kstar"]),
                          kstar_amplitude=float(meta["rho"]), kstar_phase=float(meta["gamma"]))


def write_painleve(csv_path, table: Painleve2Table):
    write_csv(csv_path, PAINLEVE_HEADER, [table.s_samples, table.y, table.y_prime, table.H])
    sidecar = Path(csv_path).with_suffix(".json")
    write_json(sidecar, {"rho": table.rho, "s0": table.s0, "s_min": table.s_min, "tol": table.tol})
    return sidecar


def read_painleve(csv_path) -> Painleve2Table:
    d = read_csv(csv_path, PAINLEVE_HEADER)
    meta = read_json(Path(csv_path).with_suffix(".json"))
    return Painleve2Table(rho=float(meta["rho"]), s_samples=d[:, 0], y=d[:, 1], y_prime=d[:, 2],
                          H=d[:, 3], s0=float(meta["s0"]), tol=float(meta["tol"]))


def write_samples(path, samples):
    cols = [[p.point.x for p in samples], [p.point.t for p in samples], [p.s for p in samples],
            [p.u_asymp.real for p in samples], [p.u_asymp.imag for p in samples],
            [p.modulus for p in samples], [p.phase for p in samples]]
    return write_csv(path, SAMPLES_HEADER, cols)


def write_snapshot(csv_path, state, mass_value, config: dict):
    write_csv(csv_path, PROFILE_HEADER, [state.grid.points, state.values.real, state.values.imag])
    sidecar = Path(csv_path).with_suffix(".json")
    write_json(sidecar, {"t": state.time, "mass": mass_value, "config": config})
    return sidecar


def write_signature(path, re_k, im_k, sign):
    return write_csv(path, SIGNATURE_HEADER, [re_k, im_k, sign])
