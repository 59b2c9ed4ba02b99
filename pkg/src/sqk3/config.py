"""Run configuration: seed, tolerance knobs, scan grids, point counts.

Config values come from (lowest to highest precedence) built-in defaults,
a flat key=value file named by --config or the SQK_CONFIG environment
variable, and command-line flags.

Tolerances are grouped in three classes (algebraic, finite-difference, ODE).
Every check pins its own tolerance as class_baseline * factor, so the
advertised values hold under the default baselines and scale proportionally
when a baseline is overridden.
"""

import os
from dataclasses import dataclass, replace

import numpy as np

DEFAULT_TOL_ALG = 1e-10
DEFAULT_TOL_FD = 1e-5
DEFAULT_TOL_ODE = 1e-4

ENV_CONFIG = "SQK_CONFIG"


class ConfigError(ValueError):
    pass


def parse_grid(text: str) -> np.ndarray:
    """Parse 'start:stop:step' into an inclusive grid."""
    try:
        start, stop, step = (float(tok) for tok in text.split(":"))
    except ValueError as exc:
        raise ConfigError(f"bad grid spec {text!r}, want start:stop:step") from exc
    if step <= 0.0 or stop < start:
        raise ConfigError(f"bad grid spec {text!r}: need step > 0, stop >= start")
    n = int(round((stop - start) / step))
    return start + step * np.arange(n + 1)


@dataclass
class RunConfig:
    seed: int = 42
    tol_alg: float = DEFAULT_TOL_ALG
    tol_fd: float = DEFAULT_TOL_FD
    tol_ode: float = DEFAULT_TOL_ODE
    n_points: int = 50
    chart_margin: float = 0.2
    h_grid: tuple = (-2.5, -1.0, 0.0, 1.0, 2.0, 2.9)
    grid_table2_r0: str = "-2.75:20:0.25"
    grid_table2_r1: str = "-20:2.75:0.25"
    grid_table3: str = "-5:5:0.05"
    t_max: float = 10.0
    dt: float = 1e-3
    out: str = ""
    restrict_r: int = -1
    restrict_H: float = float("nan")

    def validate(self):
        for name in ("tol_alg", "tol_fd", "tol_ode"):
            if getattr(self, name) <= 0.0:
                raise ConfigError(f"{name} must be positive")
        if self.n_points < 1:
            raise ConfigError("n_points must be >= 1")
        if self.dt <= 0.0:
            raise ConfigError("dt must be positive")
        if not self.h_grid or list(self.h_grid) != sorted(self.h_grid):
            raise ConfigError("h_grid must be nonempty and sorted")
        for name in ("grid_table2_r0", "grid_table2_r1", "grid_table3"):
            parse_grid(getattr(self, name))
        return self

    def tol(self, cls: str, factor: float = 1.0) -> float:
        base = {"alg": self.tol_alg, "fd": self.tol_fd, "ode": self.tol_ode}[cls]
        return base * factor

    def signatures(self):
        if self.restrict_r in (0, 1):
            return (self.restrict_r,)
        return (0, 1)

    def curvatures(self):
        if not np.isnan(self.restrict_H):
            return (self.restrict_H,)
        return tuple(self.h_grid)


_FILE_KEYS = {
    "seed": int,
    "tol_alg": float,
    "tol_fd": float,
    "tol_ode": float,
    "n_points": int,
    "chart_margin": float,
    "t_max": float,
    "dt": float,
    "grid_table2_r0": str,
    "grid_table2_r1": str,
    "grid_table3": str,
    "out": str,
    "h_grid": "floats",
}


def load_config_file(path: str, base: RunConfig = None) -> RunConfig:
    cfg = base or RunConfig()
    updates = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key = value")
            key, _, val = line.partition("=")
            key = key.strip()
            val = val.strip()
            if key not in _FILE_KEYS:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            kind = _FILE_KEYS[key]
            if kind == "floats":
                updates[key] = tuple(float(tok) for tok in val.split(","))
            else:
                updates[key] = kind(val)
    return replace(cfg, **updates)


def base_config() -> RunConfig:
    """Defaults, then the SQK_CONFIG file when the variable is set."""
    cfg = RunConfig()
    path = os.environ.get(ENV_CONFIG)
    if path:
        cfg = load_config_file(path, cfg)
    return cfg
