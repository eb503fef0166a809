"""Run orchestration shared by the command line and the sweep driver."""

from __future__ import annotations

import logging

import numpy as np

from . import bath, inversion, negativity
from .config import RunSpec, validate

log = logging.getLogger("pbgpair")

DEFAULT_MODES = 4000


def time_grid(t_max: float, dt_out: float):
    n = int(np.floor(t_max / dt_out + 1e-9))
    return np.arange(n + 1) * dt_out


def analytic_trajectory(config, init, t_max, dt_out, poles=None):
    times = time_grid(t_max, dt_out)
    return inversion.amplitudes_analytic(times, config, init, poles=poles)


def oracle_trajectory(config, init, t_max, dt_out, n_modes=DEFAULT_MODES,
                      clip_to_horizon=False, **kw):
    b = bath.build_bath(config, n_modes=n_modes)
    horizon = b.recurrence_time()
    if clip_to_horizon and t_max > horizon:
        t_max = dt_out * np.floor(horizon / dt_out)
        log.info("oracle horizon %.6g limits the reference run to t=%.6g",
                 horizon, t_max)
    return bath.integrate(config, init, b, t_max=t_max, dt_out=dt_out, **kw)


def run_spec(spec: RunSpec, n_modes: int = DEFAULT_MODES):
    """Execute a validated run: returns (series, trajectory, deviation).

    ``deviation`` is None unless engine='both', in which case it is the
    maximum amplitude difference between the engines over the oracle
    horizon (also written to the run log).
    """
    validate(spec.config, spec.init)
    deviation = None
    if spec.engine == "oracle":
        traj = oracle_trajectory(spec.config, spec.init, spec.t_max, spec.dt_out,
                                 n_modes=n_modes)
    else:
        traj = analytic_trajectory(spec.config, spec.init, spec.t_max, spec.dt_out)
        if spec.engine == "both":
            ref = oracle_trajectory(spec.config, spec.init, spec.t_max, spec.dt_out,
                                    n_modes=n_modes, clip_to_horizon=True)
            k = ref.times.size
            deviation = float(np.max(np.abs(ref.amps - traj.amps[:k])))
            log.info("engine=both: max amplitude deviation %.6g over t in [0, %.6g]",
                     deviation, ref.times[-1])
    series = negativity.entanglement_series(traj, spec.config)
    return series, traj, deviation
