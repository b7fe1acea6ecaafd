"""Report assembly and deterministic output.

Reports are JSON with sorted keys and two-space indentation; complex
values are [re, im] pairs. Identical configs produce byte-identical
reports except for the wall-time entry. All file writes go through a
temp file plus atomic rename.
"""

import csv
import hashlib
import json
import os
import tempfile

import numpy as np

from .config import complex_to_pair, matrix_to_lists


def config_sha256(cfg) -> str:
    return hashlib.sha256(cfg.canonical_json().encode("utf-8")).hexdigest()


def identity_row(name: str, residual: float, tolerance: float) -> dict:
    ok = bool(np.isfinite(residual)) and residual <= tolerance
    return {
        "name": name,
        "residual": float(residual),
        "tolerance": float(tolerance),
        "passed": ok,
    }


def solution_block(sol, cls) -> dict:
    entries = []
    for e in cls.entries:
        entry = {
            "eigenvalue": complex_to_pair(e.eigenvalue),
            "multiplicity": e.multiplicity,
            "label": e.label,
        }
        if e.physical_residual is not None:
            entry["physical_residual"] = float(e.physical_residual)
        entries.append(entry)
    return {
        "eigenvalues": entries,
        "iterations": sol.iterations,
        "final_step_norm": sol.final_step_norm,
        "residual": sol.residual,
        "x_norm": float(np.linalg.norm(sol.x, 2)),
        "x": matrix_to_lists(sol.x),
        "z": matrix_to_lists(sol.z_op),
    }


def admissibility_block(rep, r0=None) -> dict:
    block = {
        "variation": rep.variation,
        "distance": rep.distance,
        "omega": rep.omega,
        "admissible": rep.admissible,
        "r_min": rep.r_min,
        "r_max": rep.r_max,
    }
    if r0 is not None:
        block["r0_upper_bound"] = float(r0)
    return block


def riccati_block(ric, verdict) -> dict:
    return {
        "y_norm": ric.y_norm,
        "gram_eigenvalues": [float(v) for v in np.linalg.eigvalsh(ric.gram)],
        "one_in_spectrum": {
            "present": verdict.present,
            "min_distance": verdict.min_distance,
        },
    }


def render_report(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, allow_nan=False) + "\n"


def atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", text=True)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(path: str, rows) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", text=True)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["t", "trajectory_id", "re", "im", "label"])
            for row in rows:
                writer.writerow([repr(float(row[0])), row[1],
                                 repr(float(row[2])), repr(float(row[3])), row[4]])
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def sanitize(obj):
    """Make report values JSON-serializable: numpy scalars to floats,
    inf/nan to strings so allow_nan=False stays honest."""
    if isinstance(obj, dict):
        return {k: sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [sanitize(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if np.isfinite(v) else repr(v)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, complex):
        return complex_to_pair(obj)
    return obj
