"""Physical parameters, initial states and validation.

All frequencies are dimensionless, expressed in units of the band-edge
coupling constant ``beta`` (kept as an explicit field so reports can name
the unit; it is 1.0 unless a caller rescales on purpose).  Sign
conventions follow the transform-domain treatment in :mod:`pbgpair.kernel`:
``omega1c``/``omega2c`` are the detunings of the two upper levels from the
band edge, negative values placing a level inside the gap.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

from .errors import (
    DomainError,
    InconsistentDetunings,
    NormalizationError,
    ParseError,
    UnknownPreset,
)

DETUNING_TOL = 1e-9
NORM_TOL = 1e-12


def _snap_trig(value: float) -> float:
    """Clamp cos/sin of the dipole angle to exact 0 or +-1 near the
    special orientations, so orthogonal dipoles decouple identically
    instead of at the 1e-16 floating-point level."""
    for target in (0.0, 1.0, -1.0):
        if abs(value - target) < 1e-12:
            return target
    return value


@dataclass(frozen=True)
class SystemConfig:
    """Parameters of the two-atom / band-edge problem, in units of beta.

    gamma1, gamma2
        Resonant dipole-dipole exchange strengths of the two transitions.
    omega12
        Upper-level splitting, omega13 - omega23.
    omega1c, omega2c
        Detunings of the upper levels from the band edge.
    eta
        Angle between the two dipole transition unit vectors, radians.
    beta
        Normalization frequency; all other fields are in units of it.
    """

    gamma1: float
    gamma2: float
    omega12: float
    omega1c: float
    omega2c: float
    eta: float
    beta: float = 1.0

    @property
    def cos_eta(self) -> float:
        return _snap_trig(math.cos(self.eta))

    @property
    def sin_eta(self) -> float:
        return _snap_trig(math.sin(self.eta))


@dataclass(frozen=True)
class InitialState:
    """Complex amplitudes of |a1 a6>, |a2 a6>, |a3 a4>, |a3 a5> at t=0."""

    a1: complex
    a2: complex
    a3: complex
    a4: complex

    def as_tuple(self) -> tuple[complex, complex, complex, complex]:
        return (complex(self.a1), complex(self.a2), complex(self.a3), complex(self.a4))

    @property
    def norm_sq(self) -> float:
        return sum(abs(a) ** 2 for a in self.as_tuple())


@dataclass
class AmplitudeTrajectory:
    """Time grid with the four atomic amplitudes and the field excitation.

    ``field_prob[i]`` is 1 - sum_i |A_i|^2 at ``times[i]``; by unitarity it
    equals the total one-photon probability without referencing the bath.
    """

    times: "object"
    amps: "object"  # shape (n_times, 4) complex
    field_prob: "object"
    meta: dict = field(default_factory=dict)


def validate(config: SystemConfig, init: InitialState | None = None):
    """Check all invariants; return the inputs unchanged when they hold.

    Raises NormalizationError, InconsistentDetunings or DomainError.
    """
    if config.beta <= 0:
        raise DomainError(f"beta must be positive, got {config.beta}")
    if config.gamma1 < 0 or config.gamma2 < 0:
        raise DomainError(
            f"gamma1/gamma2 must be non-negative, got {config.gamma1}, {config.gamma2}"
        )
    if not (0.0 <= config.eta <= math.pi):
        raise DomainError(f"eta must lie in [0, pi], got {config.eta}")
    mismatch = config.omega1c - config.omega2c - config.omega12
    if abs(mismatch) > DETUNING_TOL:
        raise InconsistentDetunings(
            "omega1c - omega2c != omega12 "
            f"({config.omega1c} - {config.omega2c} != {config.omega12})"
        )
    if init is not None:
        if abs(init.norm_sq - 1.0) > NORM_TOL:
            raise NormalizationError(
                f"initial amplitudes have norm^2 = {init.norm_sq!r}, expected 1"
            )
        return config, init
    return config


_PRESET_STATES = {
    "unentangled": (1.0, 0.0, 0.0, 0.0),
    "bright": (1.0 / math.sqrt(2.0), 0.0, 1.0 / math.sqrt(2.0), 0.0),
}


def preset_initial(name: str) -> InitialState:
    """Named initial state: 'unentangled' -> |a1 a6>, 'bright' -> symmetric pair."""
    try:
        a1, a2, a3, a4 = _PRESET_STATES[name]
    except KeyError:
        raise UnknownPreset(
            f"unknown initial-state preset {name!r}; "
            f"choose from {sorted(_PRESET_STATES)}"
        ) from None
    return InitialState(a1, a2, a3, a4)


# Key-value run file: one `key = value` per line, '#' comments allowed.
_SCALAR_KEYS = {
    "gamma1",
    "gamma2",
    "omega12",
    "omega1c",
    "omega2c",
    "eta_degrees",
    "t_max",
    "dt_out",
}
_AMP_KEYS = {
    f"a{i}_{part}" for i in (1, 2, 3, 4) for part in ("re", "im")
}
_ENGINE_VALUES = ("analytic", "oracle", "both")


@dataclass
class RunSpec:
    """A fully parsed run file: physics, initial state and output grid."""

    config: SystemConfig
    init: InitialState
    t_max: float
    dt_out: float
    engine: str = "analytic"


def parse_run_file(path) -> RunSpec:
    """Parse a key-value run file and validate the resulting configuration.

    Required keys: gamma1, gamma2, omega12, omega1c, omega2c, eta_degrees,
    initial, t_max, dt_out.  `initial = custom` additionally requires
    a1_re .. a4_im.  Optional: engine = analytic|oracle|both.  Unknown keys
    raise ParseError with the offending line number.
    """
    values: dict[str, float] = {}
    initial_name = None
    engine = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line.count("=") != 1:
                raise ParseError(f"expected exactly one '=' in {raw.strip()!r}", lineno)
            key, _, val = line.partition("=")
            key = key.strip()
            val = val.strip()
            if key == "initial":
                if val not in ("unentangled", "bright", "custom"):
                    raise ParseError(f"initial must be unentangled|bright|custom, got {val!r}", lineno)
                initial_name = val
            elif key == "engine":
                if val not in _ENGINE_VALUES:
                    raise ParseError(f"engine must be one of {_ENGINE_VALUES}, got {val!r}", lineno)
                engine = val
            elif key in _SCALAR_KEYS or key in _AMP_KEYS:
                if key in values:
                    raise ParseError(f"duplicate key {key!r}", lineno)
                try:
                    values[key] = float(val)
                except ValueError:
                    raise ParseError(f"could not parse number {val!r} for {key!r}", lineno) from None
            else:
                raise ParseError(f"unknown key {key!r}", lineno)

    missing = sorted(k for k in _SCALAR_KEYS if k not in values)
    if missing:
        raise ParseError(f"missing required keys: {', '.join(missing)}")
    if initial_name is None:
        raise ParseError("missing required key: initial")

    if initial_name == "custom":
        missing_amp = sorted(k for k in _AMP_KEYS if k not in values)
        if missing_amp:
            raise ParseError(
                f"initial = custom requires amplitude keys: {', '.join(missing_amp)}"
            )
        init = InitialState(
            *(
                complex(values[f"a{i}_re"], values[f"a{i}_im"])
                for i in (1, 2, 3, 4)
            )
        )
    else:
        extra_amp = sorted(k for k in _AMP_KEYS if k in values)
        if extra_amp:
            raise ParseError(
                f"amplitude keys only allowed with initial = custom: {', '.join(extra_amp)}"
            )
        init = preset_initial(initial_name)

    config = SystemConfig(
        gamma1=values["gamma1"],
        gamma2=values["gamma2"],
        omega12=values["omega12"],
        omega1c=values["omega1c"],
        omega2c=values["omega2c"],
        eta=math.radians(values["eta_degrees"]),
    )
    validate(config, init)
    if values["t_max"] <= 0:
        raise ParseError(f"t_max must be positive, got {values['t_max']}")
    if values["dt_out"] <= 0:
        raise ParseError(f"dt_out must be positive, got {values['dt_out']}")
    return RunSpec(
        config=config,
        init=init,
        t_max=values["t_max"],
        dt_out=values["dt_out"],
        engine=engine or "analytic",
    )


def phase_amplitudes(amps, t: float, omega12: float):
    """Apply the optical phase pattern of the state expansion.

    The physical state carries e^{i w13 t} on the A1/A3 components and
    e^{i w23 t} on A2/A4.  Only the difference omega12 = w13 - w23 is a
    model parameter; the common phase is a global one, so A1/A3 are
    rotated by e^{i omega12 t} relative to A2/A4.  Entanglement measures
    are invariant under this pattern (it is local), which the test suite
    asserts.
    """
    ph = cmath.exp(1j * omega12 * t)
    a1, a2, a3, a4 = amps
    return (a1 * ph, a2, a3 * ph, a4)
