"""Two-atom reduced density matrix, partial transposition, negativity.

The joint state lives in the single-excitation sector, so after tracing
the field the 9x9 two-qutrit matrix is a pure projector on the populated
atomic components plus the one-photon weight collapsed onto the double
ground state: the zero- and one-photon sectors are orthogonal under the
field trace, which kills every cross coherence.  The field weight is
taken from the norm deficit 1 - sum |A_i|^2 (exact by unitarity) rather
than from discrete mode sums.

Basis ordering is row-major with the first atom major:
index = 3*i + j over (a1, a2, a3) x (a4, a5, a6).
"""

from __future__ import annotations

import numpy as np

from .config import AmplitudeTrajectory, phase_amplitudes
from .errors import NormError

# populated product states: |a1 a6>, |a2 a6>, |a3 a4>, |a3 a5>, |a3 a6>
_IDX = (2, 5, 6, 7, 8)
NORM_SLACK = 1e-9
EIG_CLAMP = -1e-12


def reduced_density_matrix(amps, t: float = 0.0, config=None) -> np.ndarray:
    """9x9 two-atom density matrix from the four amplitudes at time t.

    When ``config`` is given the optical phase pattern of the state
    expansion is applied (it is a local unitary, so entanglement measures
    do not depend on it; keeping it makes the matrix itself faithful).
    """
    a = [complex(v) for v in amps]
    norm = sum(abs(v) ** 2 for v in a)
    if norm > 1.0 + NORM_SLACK:
        raise NormError(f"amplitude norm {norm!r} exceeds 1")
    if config is not None:
        a = list(phase_amplitudes(a, t, config.omega12))
    rho = np.zeros((9, 9), dtype=complex)
    vec = np.zeros(9, dtype=complex)
    for value, k in zip(a, _IDX):
        vec[k] = value
    rho += np.outer(vec, vec.conj())
    rho[8, 8] += 1.0 - norm
    return rho


def partial_transpose_B(rho: np.ndarray) -> np.ndarray:
    """Partial transpose over the second atom: <i j|r^G|k l> = <i l|r|k j>."""
    r = np.asarray(rho, dtype=complex).reshape(3, 3, 3, 3)
    return r.transpose(0, 3, 2, 1).reshape(9, 9)


def log_negativity(rho: np.ndarray):
    """(N, E_N) of a two-atom density matrix.

    N is the absolute sum of negative eigenvalues of the partial
    transpose; eigenvalues above -1e-12 are clamped so floating-point
    jitter never registers as entanglement.  E_N = log2(1 + 2N).
    """
    lam = np.linalg.eigvalsh(partial_transpose_B(rho))
    neg = lam[lam < EIG_CLAMP]
    n = float(-np.sum(neg))
    return n, float(np.log2(1.0 + 2.0 * n))


def negativity_series(trajectory: AmplitudeTrajectory, config):
    """(times, N, E_N) along a trajectory, vectorized over the grid.

    The density matrices are assembled in a batch and diagonalized with a
    single stacked Hermitian eigensolve.
    """
    amps = np.asarray(trajectory.amps, dtype=complex)
    times = np.asarray(trajectory.times, dtype=float)
    norm = np.sum(np.abs(amps) ** 2, axis=1)
    if np.any(norm > 1.0 + NORM_SLACK):
        k = int(np.argmax(norm))
        raise NormError(f"amplitude norm {norm[k]!r} exceeds 1 at t={times[k]:g}")
    phased = amps.copy()
    ph = np.exp(1j * config.omega12 * times)
    phased[:, 0] *= ph
    phased[:, 2] *= ph

    vec = np.zeros((times.size, 9), dtype=complex)
    for col, k in zip(range(4), _IDX):
        vec[:, k] = phased[:, col]
    rho = vec[:, :, None] * vec[:, None, :].conj()
    rho[:, 8, 8] += 1.0 - norm

    rho_pt = rho.reshape(-1, 3, 3, 3, 3).transpose(0, 1, 4, 3, 2).reshape(-1, 9, 9)
    lam = np.linalg.eigvalsh(rho_pt)
    neg = np.where(lam < EIG_CLAMP, lam, 0.0)
    n_vals = -np.sum(neg, axis=1)
    en = np.log2(1.0 + 2.0 * n_vals)
    return times, n_vals, en


class EntanglementSeries:
    """Time series of negativity and logarithmic negativity."""

    def __init__(self, times, negativity, log_negativity, trajectory=None):
        self.times = np.asarray(times, dtype=float)
        self.negativity = np.asarray(negativity, dtype=float)
        self.log_negativity = np.asarray(log_negativity, dtype=float)
        self.trajectory = trajectory


def entanglement_series(trajectory: AmplitudeTrajectory, config) -> EntanglementSeries:
    """Negativity and E_N at every trajectory point."""
    times, n_vals, en = negativity_series(trajectory, config)
    return EntanglementSeries(times, n_vals, en, trajectory=trajectory)


def half_life(times, en) -> float:
    """First time after which E_N stays below half its global maximum.

    Returns inf when E_N never settles below the half level inside the
    horizon (persistent plateaus), and inf for identically zero series.
    """
    times = np.asarray(times, dtype=float)
    en = np.asarray(en, dtype=float)
    peak = float(np.max(en))
    if peak <= 0.0:
        return float("inf")
    below = en < 0.5 * peak
    # last index where E_N is at or above the half level
    above_idx = np.nonzero(~below)[0]
    last_above = int(above_idx[-1])
    if last_above == times.size - 1:
        return float("inf")
    return float(times[last_above + 1])


def integrated_en(times, en, t_upper: float = 500.0) -> float:
    """Trapezoidal integral of E_N over [0, t_upper] (clipped to the grid)."""
    times = np.asarray(times, dtype=float)
    en = np.asarray(en, dtype=float)
    mask = times <= t_upper + 1e-12
    return float(np.trapezoid(en[mask], times[mask]))


def oscillation_envelope(times, en, center: float, window: float) -> float:
    """Half the peak-to-trough swing of E_N inside [center-window, center+window]."""
    times = np.asarray(times, dtype=float)
    en = np.asarray(en, dtype=float)
    mask = (times >= center - window) & (times <= center + window)
    if not np.any(mask):
        raise ValueError(f"window around t={center:g} lies outside the series")
    seg = en[mask]
    return 0.5 * float(np.max(seg) - np.min(seg))
