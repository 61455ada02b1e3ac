"""Run configuration: one JSON document drives every batch command.

The configuration round-trips through JSON bit-exactly (floats are written
with repr-level precision), so a saved config plus the tool version pins a
run completely.  Command-line flags override individual fields.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, field

import numpy as np


class ConfigError(ValueError):
    """A configuration field is out of range or inconsistent."""


def _default_time_factors() -> list[float]:
    return [round(0.1 * k, 10) for k in range(0, 21)]


def _default_beta_inv_grid() -> list[float]:
    # 13-point log grid over [0.1, 100]; includes 1 and 10 exactly
    return [float(f"{10 ** (-1 + 3 * k / 12):.12g}") for k in range(13)]


def _default_eta_grid() -> list[float]:
    return [min(k * math.pi / 48, math.pi / 2) for k in range(25)]


@dataclass
class RunConfig:
    """Parameter bundle for the batch front-end."""

    n_particles: int = 200
    u_int: float = 0.1
    t_hop: float = 1.0
    state_label: str = "zero"  # "pi" or "zero"
    beta_inv_over_eps: float = 0.0  # 0 means the beta_scaled = 50 pure-state proxy
    time_factor: float | None = None  # None -> 1.0 for pi, 1.4 for zero
    readout_angle: float = math.pi / 2
    readout_theta: float = math.pi / 2
    readout_phi: float = 0.0
    grid_theta: int = 64
    grid_phi: int = 128
    out_dir: str = "catlab_out"
    workers: int = 1
    sign_convention: str = "figure_one"
    time_factors: list[float] = field(default_factory=_default_time_factors)
    beta_inv_grid: list[float] = field(default_factory=_default_beta_inv_grid)
    optimize_time_factor: bool = False
    eta_grid: list[float] = field(default_factory=_default_eta_grid)
    cat_alpha: float = 6.6
    cat_width: float = 5.0
    lambda_cl: float | None = None  # classical-portrait override; None derives u N / t
    wigner_phi_points: int = 256

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if not isinstance(self.n_particles, int) or self.n_particles < 2 or self.n_particles % 2:
            raise ConfigError(
                f"n_particles must be an even integer >= 2, got {self.n_particles!r}"
            )
        if not self.u_int > 0:
            raise ConfigError(f"u_int must be > 0, got {self.u_int!r}")
        if not self.t_hop > 0:
            raise ConfigError(f"t_hop must be > 0, got {self.t_hop!r}")
        if self.state_label not in ("pi", "zero"):
            raise ConfigError(f"state_label must be 'pi' or 'zero', got {self.state_label!r}")
        if self.beta_inv_over_eps < 0:
            raise ConfigError(f"beta_inv_over_eps must be >= 0, got {self.beta_inv_over_eps!r}")
        if self.time_factor is not None and self.time_factor < 0:
            raise ConfigError(f"time_factor must be >= 0, got {self.time_factor!r}")
        if self.grid_theta < 2 or self.grid_phi < 2:
            raise ConfigError(
                f"axis grids need >= 2 points, got {self.grid_theta} x {self.grid_phi}"
            )
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers!r}")
        if self.sign_convention not in ("figure_one", "literal_eq5"):
            raise ConfigError(
                f"sign_convention must be 'figure_one' or 'literal_eq5', "
                f"got {self.sign_convention!r}"
            )
        if not self.time_factors or any(f < 0 for f in self.time_factors):
            raise ConfigError("time_factors must be a non-empty list of factors >= 0")
        if not self.beta_inv_grid or any(b <= 0 for b in self.beta_inv_grid):
            raise ConfigError("beta_inv_grid must be a non-empty list of positive temperatures")
        if not self.eta_grid or any(not 0 <= e <= math.pi / 2 + 1e-12 for e in self.eta_grid):
            raise ConfigError("eta_grid entries must lie in [0, pi/2]")
        if self.cat_alpha <= 0 or self.cat_width <= 0:
            raise ConfigError("cat_alpha and cat_width must be positive")
        if self.lambda_cl is not None and self.lambda_cl < 0:
            raise ConfigError(f"lambda_cl must be >= 0, got {self.lambda_cl!r}")
        if self.wigner_phi_points < 4:
            raise ConfigError(f"wigner_phi_points must be >= 4, got {self.wigner_phi_points!r}")

    @property
    def beta_scaled(self) -> float:
        """Thermal beta * eps_tau; 0 temperature maps to the pure-state proxy."""
        if self.beta_inv_over_eps == 0:
            return 50.0
        return 1.0 / self.beta_inv_over_eps

    def effective_time_factor(self, state_label: str | None = None) -> float:
        label = state_label if state_label is not None else self.state_label
        if self.time_factor is not None:
            return self.time_factor
        return 1.0 if label == "pi" else 1.4

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config JSON must be an object")
        return cls.from_dict(data)


def log_grid(lo: float, hi: float, points: int) -> list[float]:
    """Log-spaced grid endpoints included; helper for temperature sweeps."""
    if points < 2 or lo <= 0 or hi <= lo:
        raise ConfigError("log_grid needs points >= 2 and 0 < lo < hi")
    return [float(v) for v in np.logspace(math.log10(lo), math.log10(hi), points)]
