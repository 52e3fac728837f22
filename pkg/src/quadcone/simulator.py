"""Fixed-step RK4 integration under piecewise-constant arm commands."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from .actuation import ArmCommand, Mode, validate_command
from .dynamics import (
    CONE,
    STATE_SIZE,
    InputArrays,
    RigidState,
    arm_kinematics,
    state_derivative_vector,
)
from .geometry import EulerAngles, SingularityError
from .params import ConfigError, VehicleParams

DEFAULT_STEP = 1e-4
RESOLUTION_GUARD = 0.1  # max cone-angle advance per step, rad

STATE_COLUMNS = [
    "x", "y", "z", "vx", "vy", "vz", "roll", "pitch", "yaw", "p", "q", "r",
    "theta_1", "theta_2", "theta_3", "theta_4",
]
TRACE_COLUMNS = (
    ["t"] + STATE_COLUMNS + ["ax", "ay", "az"]
    + [f"thrust_{i}_{c}" for i in range(1, 5) for c in "xyz"]
    + [f"wz_{i}" for i in range(1, 5)]
)


class InfeasibleScenario(ValueError):
    pass


class SimulationAborted(RuntimeError):
    """The run hit the pitch singularity; ``trace`` holds everything up to ``time``."""

    def __init__(self, time: float, trace: "SimTrace", cause: Exception):
        super().__init__(f"simulation aborted at t = {time:.6g} s: {cause}")
        self.time = time
        self.trace = trace


Commands = tuple[ArmCommand, ArmCommand, ArmCommand, ArmCommand]


@dataclass
class InputSchedule:
    """Ordered ``(t_start, commands)`` segments; each holds until the next starts."""

    segments: list[tuple[float, Commands]]

    def __post_init__(self):
        if not self.segments:
            raise ConfigError("schedule needs at least one segment")
        cleaned = []
        for t_start, cmds in self.segments:
            cmds = tuple(cmds)
            if len(cmds) != 4:
                raise ConfigError(f"segment at t={t_start} needs four arm commands")
            for i, cmd in enumerate(cmds, start=1):
                problem = validate_command(cmd)
                if problem:
                    raise ConfigError(f"segment t={t_start}, arm {i}: {problem}")
            cleaned.append((float(t_start), cmds))
        starts = [t for t, _ in cleaned]
        if starts[0] != 0.0:
            raise ConfigError("first segment must start at t = 0")
        if any(b <= a for a, b in zip(starts, starts[1:])):
            raise ConfigError("segment start times must be strictly increasing")
        self.segments = cleaned
        self._packed = [InputArrays.pack(c) for _, c in cleaned]

    @classmethod
    def constant(cls, cmds: Sequence[ArmCommand]) -> "InputSchedule":
        return cls([(0.0, tuple(cmds))])

    def index_at(self, t: float) -> int:
        idx = 0
        for k, (start, _) in enumerate(self.segments):
            if t >= start:
                idx = k
        return idx

    def commands_at(self, t: float) -> Commands:
        return self.segments[self.index_at(t)][1]

    def max_cone_rate(self) -> float:
        return max(abs(c.cone_rate) for _, cmds in self.segments for c in cmds)

    def to_dict(self) -> dict:
        return {"segments": [{"t_start": t, "arms": [c.to_dict() for c in cmds]}
                             for t, cmds in self.segments]}

    @classmethod
    def from_dict(cls, data: dict) -> "InputSchedule":
        try:
            segments = [(seg["t_start"], tuple(ArmCommand.from_dict(a) for a in seg["arms"]))
                        for seg in data["segments"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"malformed schedule: {exc}") from exc
        return cls(segments)


@dataclass
class SimConfig:
    params: VehicleParams = field(default_factory=VehicleParams)
    step_size: float = DEFAULT_STEP
    duration: float = 1.0
    initial_state: RigidState = field(default_factory=RigidState)
    record_decimation: int = 1

    def __post_init__(self):
        if not (self.step_size > 0 and math.isfinite(self.step_size)):
            raise ConfigError("step_size must be positive")
        if not self.duration >= self.step_size:
            raise ConfigError("duration must be at least one step")
        if int(self.record_decimation) != self.record_decimation or self.record_decimation < 1:
            raise ConfigError("record_decimation must be an integer >= 1")
        self.record_decimation = int(self.record_decimation)

    @property
    def n_steps(self) -> int:
        return int(math.floor(self.duration / self.step_size + 1e-9))

    def to_dict(self) -> dict:
        s = self.initial_state
        return {
            "step_size": self.step_size,
            "duration": self.duration,
            "record_decimation": self.record_decimation,
            "initial_state": {
                "position": s.position.tolist(),
                "velocity": s.velocity.tolist(),
                "attitude": s.attitude.as_array().tolist(),
                "body_rates": s.body_rates.tolist(),
                "cone_angles": s.cone_angles.tolist(),
            },
        }

    @classmethod
    def from_dict(cls, data: dict, params: VehicleParams) -> "SimConfig":
        try:
            init = data.get("initial_state", {})
            state = RigidState(
                init.get("position", np.zeros(3)),
                init.get("velocity", np.zeros(3)),
                EulerAngles(*init.get("attitude", (0.0, 0.0, 0.0))),
                init.get("body_rates", np.zeros(3)),
                init.get("cone_angles", np.zeros(4)),
            )
            return cls(params, float(data.get("step_size", DEFAULT_STEP)),
                       float(data.get("duration", 1.0)), state,
                       data.get("record_decimation", 1))
        except (TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"malformed simulation settings: {exc}") from exc


@dataclass
class SimTrace:
    """Recorded rows, one per kept step. ``data`` columns follow :data:`TRACE_COLUMNS`."""

    data: np.ndarray

    def __len__(self) -> int:
        return self.data.shape[0]

    def column(self, name: str) -> np.ndarray:
        return self.data[:, TRACE_COLUMNS.index(name)]

    def __getitem__(self, name: str) -> np.ndarray:
        return self.column(name)

    @property
    def t(self) -> np.ndarray:
        return self.column("t")

    @property
    def states(self) -> np.ndarray:
        return self.data[:, 1:1 + STATE_SIZE]

    def final_state(self) -> RigidState:
        return RigidState.from_vector(self.states[-1])

    def to_csv(self, path_or_buf=None) -> str | None:
        buf = io.StringIO()
        buf.write(",".join(TRACE_COLUMNS) + "\n")
        for row in self.data:
            buf.write(",".join(format(v, ".17g") for v in row) + "\n")
        text = buf.getvalue()
        if path_or_buf is None:
            return text
        if hasattr(path_or_buf, "write"):
            path_or_buf.write(text)
        else:
            Path(path_or_buf).write_text(text, newline="\n")
        return None

    @classmethod
    def read_csv(cls, path) -> "SimTrace":
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
        if rows[0] != TRACE_COLUMNS:
            raise ValueError(f"{path} is not a trace file")
        return cls(np.array(rows[1:], dtype=float).reshape(-1, len(TRACE_COLUMNS)))


def _rk4(x: np.ndarray, u: InputArrays, params, h: float, k1: np.ndarray) -> np.ndarray:
    f = state_derivative_vector
    k2 = f(x + 0.5 * h * k1, u, params)
    k3 = f(x + 0.5 * h * k2, u, params)
    k4 = f(x + h * k3, u, params)
    return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def rk4_step(state, inputs, params, h: float) -> np.ndarray:
    """One classical Runge-Kutta step; returns the new flat state vector."""
    if not h > 0:
        raise ValueError("step size must be positive")
    x = state.to_vector() if isinstance(state, RigidState) else np.asarray(state, dtype=float)
    u = inputs if isinstance(inputs, InputArrays) else InputArrays.pack(inputs)
    return _rk4(x, u, params, h, state_derivative_vector(x, u, params))


def _record(t: float, x: np.ndarray, dx: np.ndarray, u: InputArrays, params) -> np.ndarray:
    _, _, thrust, wz = arm_kinematics(x, u, params)
    return np.concatenate([[t], x, dx[3:6], thrust.ravel(), wz])


def run(config: SimConfig, schedule: InputSchedule) -> SimTrace:
    """Integrate from ``config.initial_state`` for ``config.duration`` seconds.

    Commands are sampled at the start of each step. Raises
    :class:`SimulationAborted` (carrying the partial trace) on the pitch
    singularity.
    """
    h, params = config.step_size, config.params
    if h * schedule.max_cone_rate() >= RESOLUTION_GUARD:
        raise ConfigError(
            f"step {h} too coarse for cone rate {schedule.max_cone_rate():.4g} rad/s "
            f"(needs h*rate < {RESOLUTION_GUARD})")
    n, dec = config.n_steps, config.record_decimation
    rows = np.empty((n // dec + 1, len(TRACE_COLUMNS)))
    x = config.initial_state.to_vector()
    packed = schedule._packed
    row = 0
    for step in range(n + 1):
        t = step * h
        u = packed[schedule.index_at(t)]
        try:
            dx = state_derivative_vector(x, u, params)
            if step % dec == 0:
                rows[row] = _record(t, x, dx, u, params)
                row += 1
            if step < n:
                x = _rk4(x, u, params, h, dx)
        except SingularityError as exc:
            raise SimulationAborted(t, SimTrace(rows[:row].copy()), exc) from exc
        if not np.all(np.isfinite(x)):
            raise SimulationAborted(t, SimTrace(rows[:row].copy()),
                                    FloatingPointError("state became non-finite"))
    return SimTrace(rows)


def run_metadata(config: SimConfig, schedule: InputSchedule, **extra) -> dict:
    meta = {
        "version": __version__,
        "params": config.params.to_dict(),
        "simulation": config.to_dict(),
        "schedule": schedule.to_dict(),
        "columns": TRACE_COLUMNS,
    }
    meta.update(extra)
    return meta


def write_trace(trace: SimTrace, path, metadata: dict | None = None) -> Path:
    """Write ``path`` (CSV) and, if given, ``metadata`` next to it as ``<path>.json``."""
    path = Path(path)
    trace.to_csv(path)
    if metadata is not None:
        sidecar = path.with_suffix(path.suffix + ".json")
        sidecar.write_text(json.dumps(metadata, indent=2, sort_keys=True) + "\n")
    return path


# --- scenarios -------------------------------------------------------------


def symmetric_hover_scenario(phi: float, params: VehicleParams | None = None, *,
                             duration: float = 2.0, step_size: float = DEFAULT_STEP,
                             record_decimation: int = 1):
    """Cones fixed at (0, pi, 0, pi) with the healthy hover rotor rates."""
    from .analysis import symmetric_hover_rates

    params = (params or VehicleParams()).replace(cone_angle=float(phi))
    sol = symmetric_hover_rates(phi, params)
    if not sol.feasible:
        raise InfeasibleScenario(
            f"no symmetric hover for cone angle {phi}: needs phi < pi/4")
    w13, w24 = sol.omega_13, sol.omega_24
    cmds = (ArmCommand(0.0, w13), ArmCommand(0.0, w24), ArmCommand(0.0, w13), ArmCommand(0.0, w24))
    state = RigidState(cone_angles=[0.0, math.pi, 0.0, math.pi])
    config = SimConfig(params, step_size, duration, state, record_decimation)
    return config, InputSchedule.constant(cmds)


def ft_hover_scenario(phi: float, params: VehicleParams | None = None, *,
                      periods: float = 10, step_size: float = DEFAULT_STEP,
                      record_decimation: int = 1, phases: Sequence[float] | None = None,
                      whole_steps: bool = False):
    """All rotors stopped, every cone motor spinning at the fault-tolerant hover rate.

    ``duration`` covers ``periods`` cone revolutions. With ``whole_steps`` the
    run length is rounded to the nearest whole number of steps so that a
    window of ``n_steps`` samples spans the periods as closely as possible.
    """
    from .analysis import ft_hover_rate

    if not 0.0 < phi <= math.pi / 4:
        raise InfeasibleScenario(
            f"fault-tolerant hover needs 0 < phi <= pi/4, got {phi}: "
            "with phi = 0 the cone spin cannot be told apart from a stopped rotor")
    params = (params or VehicleParams()).replace(cone_angle=float(phi))
    rate = ft_hover_rate(phi, params).theta_dot_c
    cmds = tuple(ArmCommand.fault_tolerant(rate) for _ in range(4))
    duration = periods * 2.0 * math.pi / rate
    if whole_steps:
        duration = round(duration / step_size) * step_size
    state = RigidState(cone_angles=np.zeros(4) if phases is None else phases)
    config = SimConfig(params, step_size, duration, state, record_decimation)
    return config, InputSchedule.constant(cmds)


__all__ = [
    "InputSchedule", "SimConfig", "SimTrace", "SimulationAborted", "InfeasibleScenario",
    "TRACE_COLUMNS", "rk4_step", "run", "run_metadata", "write_trace",
    "symmetric_hover_scenario", "ft_hover_scenario", "Mode",
]
