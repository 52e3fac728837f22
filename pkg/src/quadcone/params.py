"""Vehicle constants and their JSON config form."""
from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


class ConfigError(ValueError):
    """A parameter or schedule file could not be parsed or is out of range."""


def _diag(*values: float) -> tuple[float, float, float]:
    return tuple(float(v) for v in values)


@dataclass(frozen=True)
class VehicleParams:
    """Physical constants of the quad-cone-rotor (SI units).

    Inertias are stored as the three diagonal entries. The defaults are the
    reference vehicle with a cone angle of pi/10.
    """

    arm_length: float = 0.1785
    link_offset: float = 0.01
    gravity: float = 9.8
    total_mass: float = 0.429
    body_inertia: tuple[float, float, float] = _diag(2.238e-3, 2.985e-3, 4.804e-3)
    cone_inertia: tuple[float, float, float] = _diag(1e-10, 1e-10, 2.030e-5)
    rotor_inertia: tuple[float, float, float] = _diag(1e-10, 1e-10, 2.030e-5)
    drag_coeff: float = 2.423e-7
    thrust_coeff: float = 8.048e-6
    cone_angle: float = math.pi / 10

    def __post_init__(self):
        for name in ("body_inertia", "cone_inertia", "rotor_inertia"):
            value = tuple(float(v) for v in getattr(self, name))
            if len(value) != 3:
                raise ConfigError(f"{name} needs three diagonal entries, got {len(value)}")
            object.__setattr__(self, name, value)
        for f in dataclasses.fields(self):
            value = getattr(self, f.name)
            flat = value if isinstance(value, tuple) else (value,)
            if not all(math.isfinite(v) for v in flat):
                raise ConfigError(f"{f.name} must be finite")
        if self.gravity < 0:
            raise ConfigError("gravity must be non-negative")
        positive = ("arm_length", "link_offset", "total_mass",
                    "drag_coeff", "thrust_coeff")
        for name in positive:
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be strictly positive")
        if min(self.body_inertia) <= 0:
            raise ConfigError("body_inertia entries must be strictly positive")
        # sub-body inertias may be zeroed to recover the plain quadrotor equations
        if min(self.cone_inertia + self.rotor_inertia) < 0:
            raise ConfigError("cone/rotor inertia entries must be non-negative")
        if not 0.0 <= self.cone_angle <= math.pi / 4:
            raise ConfigError(f"cone_angle must lie in [0, pi/4], got {self.cone_angle}")

    @property
    def I_B(self) -> np.ndarray:
        return np.diag(self.body_inertia)

    @property
    def I_C(self) -> np.ndarray:
        return np.diag(self.cone_inertia)

    @property
    def I_R(self) -> np.ndarray:
        return np.diag(self.rotor_inertia)

    @property
    def weight(self) -> float:
        return self.total_mass * self.gravity

    def replace(self, **changes) -> "VehicleParams":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        out = dataclasses.asdict(self)
        for name in ("body_inertia", "cone_inertia", "rotor_inertia"):
            out[name] = list(out[name])
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "VehicleParams":
        if not isinstance(data, dict):
            raise ConfigError("vehicle config must be a JSON object")
        data = dict(data.get("vehicle", data))
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown vehicle keys: {sorted(unknown)}")
        try:
            return cls(**data)
        except (TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(str(exc)) from exc


def load_params(path: str | Path) -> VehicleParams:
    """Read a JSON vehicle file; missing keys fall back to the defaults."""
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read vehicle config {path}: {exc}") from exc
    return VehicleParams.from_dict(data)


def save_params(params: VehicleParams, path: str | Path) -> None:
    Path(path).write_text(json.dumps({"vehicle": params.to_dict()}, indent=2) + "\n")


DEFAULT_PARAMS = VehicleParams()
