"""Entanglement dynamics of two V-type atoms near a photonic band edge.

Core surface: configuration records (:mod:`pbgpair.config`), the
transform-domain kernels and amplitudes (:mod:`pbgpair.kernel`,
:mod:`pbgpair.transform`), pole tables and contour inversion
(:mod:`pbgpair.poles`, :mod:`pbgpair.inversion`), a discretized-bath
reference integrator (:mod:`pbgpair.bath`) and two-atom negativity
measures (:mod:`pbgpair.negativity`).
"""

from .config import (
    AmplitudeTrajectory,
    InitialState,
    SystemConfig,
    parse_run_file,
    preset_initial,
    validate,
)

__all__ = [
    "AmplitudeTrajectory",
    "InitialState",
    "SystemConfig",
    "parse_run_file",
    "preset_initial",
    "validate",
]

__version__ = "0.1.0"
