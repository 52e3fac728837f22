"""Dynamics and hover analysis for a quadrotor whose rotors tilt on cones."""
__version__ = "0.1.0"

from .params import ConfigError, VehicleParams, load_params, save_params  # noqa: E402
from .geometry import EulerAngles, SingularityError, thrust_direction_body, included_angle_kappa  # noqa: E402
from .actuation import ArmCommand, Mode, InadmissibleCommand, validate_command  # noqa: E402
from .dynamics import RigidState, state_derivative  # noqa: E402
from .simulator import InputSchedule, SimConfig, SimTrace, run  # noqa: E402
from .analysis import ft_hover_rate, periodogram, symmetric_hover_rates  # noqa: E402
from .tradeoff import pareto_frontier  # noqa: E402
