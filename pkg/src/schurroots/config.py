"""Run configuration: parsing, validation, canonical serialization.

The on-disk format is JSON. Complex scalars are [re, im] pairs, matrices
are row-major nested lists of pairs, and the coupling polynomial is a
list of coefficient matrices, lowest degree first. from_dict fills every
default, so parse -> serialize -> parse is a fixed point on the filled
form.
"""

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

_VALID_KINDS = ("semicircle", "rectangle")


def pair_to_complex(val) -> complex:
    if isinstance(val, (int, float)):
        return complex(float(val), 0.0)
    if (isinstance(val, (list, tuple)) and len(val) == 2
            and all(isinstance(x, (int, float)) for x in val)):
        return complex(float(val[0]), float(val[1]))
    raise ConfigError(f"expected number or [re, im] pair, got {val!r}")


def complex_to_pair(z: complex) -> list:
    return [float(np.real(z)), float(np.imag(z))]


def matrix_from_lists(rows) -> np.ndarray:
    try:
        return np.array([[pair_to_complex(v) for v in row] for row in rows],
                        dtype=np.complex128)
    except (TypeError, ConfigError) as exc:
        raise ConfigError(f"malformed matrix: {exc}") from exc


def matrix_to_lists(mat: np.ndarray) -> list:
    return [[complex_to_pair(v) for v in row] for row in np.atleast_2d(mat)]


def _require_finite(name, *values):
    for v in values:
        if isinstance(v, complex):
            ok = math.isfinite(v.real) and math.isfinite(v.imag)
        else:
            ok = math.isfinite(v)
        if not ok:
            raise ConfigError(f"non-finite value in {name}: {v!r}")


@dataclass(frozen=True)
class RunConfig:
    interval: tuple
    a1: np.ndarray
    b_coefficients: tuple
    contour_kind: str = "semicircle"
    sides: tuple = (1, -1)
    depth: float | None = None
    nodes_per_unit: int = 200
    tol: float = 1e-12
    max_iter: int = 500
    tau_real: float | None = None
    coupling_scale: float = 1.0
    t_grid: tuple = ()
    seed: int = 0
    lens_points: int = 50
    factor_points: int = 30
    boundary_points: int = 50
    riccati_samples: int = 50
    trial_count: int = 20
    corrupt_z: float = 0.0
    quad_tol: float = 1e-11
    report_path: str | None = None
    csv_path: str | None = None

    @staticmethod
    def from_dict(data: dict) -> "RunConfig":
        if not isinstance(data, dict):
            raise ConfigError("config root must be an object")
        try:
            model = data["model"]
            interval = tuple(float(x) for x in model["interval"])
            if len(interval) != 2:
                raise ConfigError("interval must be [lo, hi]")
            a1 = matrix_from_lists(model["a1"])
            coeffs = tuple(matrix_from_lists(c) for c in model["b"])
        except KeyError as exc:
            raise ConfigError(f"missing config key {exc}") from exc
        if not coeffs:
            raise ConfigError("coupling needs at least one coefficient matrix")
        shapes = {c.shape for c in coeffs}
        if len(shapes) != 1:
            raise ConfigError(f"coefficient shapes disagree: {sorted(shapes)}")

        _require_finite("interval", *interval)
        _require_finite("a1", *a1.ravel().tolist())
        for c in coeffs:
            _require_finite("b", *c.ravel().tolist())

        contour = data.get("contour", {})
        kind = contour.get("kind", "semicircle")
        if kind not in _VALID_KINDS:
            raise ConfigError(f"unknown contour kind {kind!r}")
        sides = tuple(int(s) for s in contour.get("sides", [1, -1]))
        if not sides or any(s not in (1, -1) for s in sides):
            raise ConfigError(f"sides must be a nonempty subset of [1, -1], got {sides}")
        depth = contour.get("depth")
        depth = None if depth is None else float(depth)
        if depth is not None:
            _require_finite("depth", depth)
        npu = int(contour.get("nodes_per_unit", 200))
        if npu <= 0:
            raise ConfigError("nodes_per_unit must be positive")
        if kind == "rectangle" and depth is None:
            raise ConfigError("rectangle contour requires a depth")

        solver = data.get("solver", {})
        tol = float(solver.get("tol", 1e-12))
        max_iter = int(solver.get("max_iter", 500))
        tau_real = solver.get("tau_real")
        tau_real = None if tau_real is None else float(tau_real)
        scale = float(solver.get("coupling_scale", 1.0))
        quad_tol = float(solver.get("quad_tol", 1e-11))
        _require_finite("solver", tol, scale, quad_tol)
        if not 0.0 <= scale <= 1.0:
            raise ConfigError(f"coupling_scale must be in [0, 1], got {scale}")
        if tol <= 0 or max_iter <= 0 or quad_tol <= 0:
            raise ConfigError("tol, max_iter and quad_tol must be positive")

        sweep = data.get("sweep", {})
        t_grid = tuple(float(t) for t in sweep.get("t_grid", []))
        _require_finite("t_grid", *t_grid) if t_grid else None

        verify = data.get("verify", {})
        out = data.get("output", {})
        return RunConfig(
            interval=interval,
            a1=a1,
            b_coefficients=coeffs,
            contour_kind=kind,
            sides=sides,
            depth=depth,
            nodes_per_unit=npu,
            tol=tol,
            max_iter=max_iter,
            tau_real=tau_real,
            coupling_scale=scale,
            t_grid=t_grid,
            seed=int(verify.get("seed", 0)),
            lens_points=int(verify.get("lens_points", 50)),
            factor_points=int(verify.get("factor_points", 30)),
            boundary_points=int(verify.get("boundary_points", 50)),
            riccati_samples=int(verify.get("riccati_samples", 50)),
            trial_count=int(verify.get("trial_count", 20)),
            corrupt_z=float(verify.get("corrupt_z", 0.0)),
            quad_tol=quad_tol,
            report_path=out.get("report"),
            csv_path=out.get("csv"),
        )

    def to_dict(self) -> dict:
        return {
            "model": {
                "interval": [self.interval[0], self.interval[1]],
                "a1": matrix_to_lists(self.a1),
                "b": [matrix_to_lists(c) for c in self.b_coefficients],
            },
            "contour": {
                "kind": self.contour_kind,
                "sides": list(self.sides),
                "depth": self.depth,
                "nodes_per_unit": self.nodes_per_unit,
            },
            "solver": {
                "tol": self.tol,
                "max_iter": self.max_iter,
                "tau_real": self.tau_real,
                "coupling_scale": self.coupling_scale,
                "quad_tol": self.quad_tol,
            },
            "sweep": {"t_grid": list(self.t_grid)},
            "verify": {
                "seed": self.seed,
                "lens_points": self.lens_points,
                "factor_points": self.factor_points,
                "boundary_points": self.boundary_points,
                "riccati_samples": self.riccati_samples,
                "trial_count": self.trial_count,
                "corrupt_z": self.corrupt_z,
            },
            "output": {"report": self.report_path, "csv": self.csv_path},
        }

    @staticmethod
    def from_file(path: str) -> "RunConfig":
        try:
            with open(path, "r", encoding="utf-8") as fh:
                data = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON in {path}: {exc}") from exc
        return RunConfig.from_dict(data)

    def canonical_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"


def build_model_from_config(cfg: RunConfig):
    from .model import build_model

    return build_model(cfg.interval, cfg.a1, list(cfg.b_coefficients))
