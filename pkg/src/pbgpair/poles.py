"""Dressed-state pole location and classification.

Two families of roots are collected into one :class:`PoleSet`:

* the dressed-level table: roots of the classification functions
  G1/G2/H1/H2 (exchange-split level factors, their prefactors, and the
  band-edge interference factor 1 + 2*beta').  These are what the pole
  report lists and what the regression tables quote.

* the dynamic poles of the transform amplitudes on the inversion sheet:
  the two field-decoupled exchange poles at x = i*gamma1 and
  x = i*(gamma2 + omega12), the photon-atom bound roots of the symmetric
  2x2 determinant Delta(x) on the imaginary axis above the branch point,
  and its complex (decaying) roots in the lower half plane.  Residue sums
  use these and only these.

A dynamic pole that lands on a table root (the exchange poles always do)
is merged into a single record.  Classification: table rows follow the
dressed-energy rule (below the band edge -> ``localized``, otherwise
``bandpass``); dynamic-only rows are ``localized`` when purely imaginary
(they then sit above the branch point) and ``propagating`` when complex
with a negative real part.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernel
from .errors import ConvergenceError, DegeneratePole

MERGE_TOL = 1e-8
BISECT_TOL = 1e-10
AXIS_TOL = 1e-9
RESIDUAL_TOL = 1e-9


@dataclass(frozen=True)
class PoleRecord:
    """One root: location, family tag, class label and structural weight.

    ``weight`` is the reciprocal slope of the relevant denominator at the
    root (1/Delta' for symmetric-sector poles, 1 for the exchange poles,
    1/G_tag' for table-only rows).  ``dynamic`` marks roots that are true
    singularities of the transform amplitudes; only those enter residue
    sums.  ``kind`` is one of 'v1', 'v2', 'u', 'table'.
    """

    tag: str
    x: complex
    klass: str
    weight: complex
    dynamic: bool
    kind: str


@dataclass(frozen=True)
class PoleSet:
    records: tuple
    config: "object" = field(repr=False, default=None)

    def dynamic(self):
        return [r for r in self.records if r.dynamic]

    def by_class(self, klass):
        return [r for r in self.records if r.klass == klass]

    @property
    def localized(self):
        return self.by_class("localized")

    @property
    def propagating(self):
        return self.by_class("propagating")

    @property
    def bandpass(self):
        return self.by_class("bandpass")

    def counts(self):
        out = {"localized": 0, "propagating": 0, "bandpass": 0}
        for r in self.records:
            out[r.klass] += 1
        return out


def _grid_span(config) -> float:
    return 5.0 * max(
        config.gamma1, config.gamma2, abs(config.omega1c), abs(config.omega2c), 1.0
    )


def _bisect(fun, lo, hi, tol=BISECT_TOL):
    flo, fhi = fun(lo), fun(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0:
        raise ValueError("root not bracketed")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fmid = fun(mid)
        if fmid == 0.0 or (hi - lo) < tol:
            return mid
        if flo * fmid < 0:
            hi, fhi = mid, fmid
        else:
            lo, flo = mid, fmid
    return 0.5 * (lo + hi)


def _axis_roots(fun, lo, hi, n=4001):
    """Sign-change bracketing on [lo, hi] followed by bisection."""
    ys = np.linspace(lo, hi, n)
    vals = np.array([fun(y) for y in ys])
    roots = []
    sign = np.sign(vals)
    hits = np.nonzero(sign[:-1] * sign[1:] < 0)[0]
    for i in hits:
        roots.append(_bisect(fun, ys[i], ys[i + 1]))
    roots.extend(ys[np.nonzero(sign == 0)[0]])
    return roots


def _dedup(values, tol=MERGE_TOL):
    out = []
    for v in values:
        if all(abs(v - u) > tol for u in out):
            out.append(v)
    return out


# ---------------------------------------------------------------------------
# dressed-level table (classification functions)

def _table_roots(config):
    """Imaginary-axis roots of the classification factors, with tags.

    Returns a list of (tag, y) with x = i*y.  The linear level factors are
    real on the axis; the interference factor 1 + 2*beta' is real below
    the branch point only, which is the only place it can vanish.
    """
    span = _grid_span(config)
    b = config.beta
    found = []
    factor_specs = [
        ("G1", lambda y: config.gamma1 - y),                      # G prefactor
        ("H1", lambda y: config.omega12 + config.gamma2 - y),     # H prefactor
        ("H1", lambda y: -y - config.gamma1),                     # lower exchange level 1
        ("H1", lambda y: config.omega12 - config.gamma2 - y),     # lower exchange level 2
    ]
    for tag, fun in factor_specs:
        for y in _axis_roots(fun, -span, span):
            found.append((tag, y))
    # interference factor: 1 - 2 beta^{3/2} / sqrt(omega1c - y) for y < omega1c
    edge = config.omega1c

    def interference(y):
        return 1.0 - 2.0 * b ** 1.5 / np.sqrt(edge - y)

    lo = -span
    hi = edge - max(1e-12, 1e-12 * abs(edge))
    if lo < hi:
        for y in _axis_roots(interference, lo, hi):
            found.append(("H1", y))
    return found


# ---------------------------------------------------------------------------
# dynamic poles of the transform amplitudes (inversion sheet)

def _sheet_gamma(x, config):
    return kernel.beta_prime_sheet(x, config.omega1c, config.beta)


def delta_sheet(x, config):
    """Symmetric-sector determinant Delta(x) on the inversion sheet."""
    x = np.asarray(x, dtype=complex)
    g = _sheet_gamma(x, config)
    f1 = x + 1j * config.gamma1 + 2 * g
    f2 = x - 1j * config.omega12 + 1j * config.gamma2 + 2 * g
    return f1 * f2 - 4 * g * g * config.cos_eta ** 2


def delta_sheet_deriv(x, config):
    """Analytic d(Delta)/dx on the inversion sheet."""
    x = np.asarray(x, dtype=complex)
    g = _sheet_gamma(x, config)
    gp = -g / (2 * (x - 1j * config.omega1c))
    f1 = x + 1j * config.gamma1 + 2 * g
    f2 = x - 1j * config.omega12 + 1j * config.gamma2 + 2 * g
    return (1 + 2 * gp) * (f1 + f2) - 8 * g * gp * config.cos_eta ** 2


def _bound_roots(config):
    """Pure-imaginary roots of Delta above the branch point.

    On x = i*y with y > omega1c the sheet kernel is -i*gbar with
    gbar = beta^{3/2}/sqrt(y - omega1c), and Delta(iy) = -ell(y) with the
    real function ell below; its sign changes give the bound states.
    """
    span = _grid_span(config)
    edge = config.omega1c
    b32 = config.beta ** 1.5
    c2 = config.cos_eta ** 2

    def ell_s(s):
        # s = sqrt(y - edge): bound roots cluster near the edge for strong
        # exchange, where this variable keeps them resolvable
        gbar = b32 / s
        y = edge + s * s
        return (y + config.gamma1 - 2 * gbar) * (
            y + config.gamma2 - config.omega12 - 2 * gbar
        ) - 4 * gbar * gbar * c2

    s_hi = np.sqrt(max(span, 8.0 * config.beta ** 3 + 4.0))
    roots = []
    for s in _axis_roots(ell_s, 1e-7, s_hi, n=8000):
        y = edge + s * s
        x = complex(0.0, y)
        # polish on the sheet determinant (exact bound roots are its zeros)
        for _ in range(60):
            dx = delta_sheet(x, config) / delta_sheet_deriv(x, config)
            x -= dx
            if abs(dx) < 1e-14 * (1 + abs(x)):
                break
        if abs(x.real) > 1e-10 or x.imag <= edge:
            x = complex(0.0, y)  # keep the bisected value if polishing strays
        else:
            x = complex(0.0, x.imag)
        roots.append(x)
    return _dedup(roots)


def _complex_roots(config):
    """Damped Newton on Delta over a seed grid in the left half plane."""
    span = _grid_span(config)
    edge = config.omega1c
    re = np.linspace(-span, -span / 80.0, 40)
    im_lo = np.linspace(-span, edge - max(1e-6, 1e-8 * span), 40)
    seeds = [(r + 1j * i) for r in re for i in im_lo]
    im_hi = np.linspace(edge + max(1e-6, 1e-8 * span), span, 16)
    seeds += [(r + 1j * i) for r in np.linspace(-span, -span / 32.0, 16) for i in im_hi]
    # bare exchange levels, nudged into the decaying half plane
    for y in (-config.gamma1, config.omega12 - config.gamma2):
        seeds.append(-0.05 * max(1.0, config.beta) + 1j * y)
    z = np.array(seeds, dtype=complex)

    scale = 1.0 + span
    last_step = np.full(z.shape, np.inf)
    for _ in range(100):
        f = delta_sheet(z, config)
        df = delta_sheet_deriv(z, config)
        step = np.where(df != 0, f / np.where(df == 0, 1, df), 0.1 * scale)
        mag = np.abs(step)
        cap = 0.5 * (1.0 + np.abs(z))
        step = np.where(mag > cap, step * cap / np.where(mag == 0, 1, mag), step)
        z = z - step
        last_step = np.abs(step)
        bad = ~np.isfinite(z)
        if np.any(bad):
            z[bad] = -0.1 - 0.1j
    f = np.abs(delta_sheet(z, config))
    fscale = np.abs(delta_sheet(1.0 + 0j, config)) + scale ** 2
    ok = np.isfinite(f) & (f < RESIDUAL_TOL * fscale)
    stagnant = ok & (last_step > 1e-7 * (1.0 + np.abs(z)))
    if np.any(stagnant):
        zb = z[stagnant][0]
        raise ConvergenceError(
            f"Newton stagnated near x={zb:.6g} with residual {f[stagnant][0]:.3g}"
        )
    roots = []
    for zi in z[ok]:
        if zi.real > -1e-10:
            continue  # decaying poles only; axis roots come from bisection
        if abs(zi.imag - edge) < 1e-7 and zi.real < 0:
            continue  # on the branch cut, not a pole of the sheet
        roots.append(complex(zi))
    return _dedup(roots)


def _table_weight(tag, x, config):
    """Reciprocal slope of the tagged classification function at x.

    The step is taken along the imaginary axis: the roots sit there and the
    principal kernel is continuous along it but not across it.
    """
    from .transform import spectral_functions

    h = 1e-6j * (1.0 + abs(x))
    idx = {"G1": 0, "G2": 1, "H1": 2, "H2": 3}[tag]
    fp = spectral_functions(x + h, config)[idx]
    fm = spectral_functions(x - h, config)[idx]
    deriv = (fp - fm) / (2 * h)
    if deriv == 0:
        return 0j
    return 1.0 / deriv


def find_poles(config) -> PoleSet:
    """Locate, merge and classify all table and dynamic roots.

    Raises DegeneratePole when two dynamic poles sit closer than the merge
    tolerance, and ConvergenceError when Newton stalls on a candidate the
    residual test accepts.
    """
    edge = config.omega1c

    table = []
    for tag, y in _table_roots(config):
        table.append((tag, complex(0.0, y)))

    dynamic = []
    dynamic.append(("v1", complex(0.0, config.gamma1), 1.0 + 0j))
    dynamic.append(("v2", complex(0.0, config.gamma2 + config.omega12), 1.0 + 0j))
    for x in _bound_roots(config) + _complex_roots(config):
        dynamic.append(("u", x, 1.0 / complex(delta_sheet_deriv(x, config))))

    # v1 and v2 live in disjoint amplitude sectors, so their coincidence is
    # harmless; any clash involving a symmetric-sector root is a true double
    # pole of some amplitude.
    for i in range(len(dynamic)):
        for j in range(i + 1, len(dynamic)):
            ki, xi, _ = dynamic[i]
            kj, xj, _ = dynamic[j]
            if {ki, kj} == {"v1", "v2"}:
                continue
            if abs(xi - xj) < MERGE_TOL:
                raise DegeneratePole(
                    f"poles {xi:.9g} ({ki}) and {xj:.9g} ({kj}) coincide within {MERGE_TOL}"
                )

    records = []
    used_table = set()
    for kind, x, weight in dynamic:
        tag = None
        for k, (ttag, tx) in enumerate(table):
            if k not in used_table and abs(tx - x) < MERGE_TOL:
                tag, used_table = ttag, used_table | {k}
                break
        if tag is not None:
            klass = "localized" if x.imag + edge < 0 else "bandpass"
        else:
            tag = "G1" if kind in ("v1", "u") else "H1"
            if abs(x.real) <= AXIS_TOL:
                klass = "localized"
            else:
                klass = "propagating"
        records.append(PoleRecord(tag, x, klass, complex(weight), True, kind))

    for k, (tag, x) in enumerate(table):
        if k in used_table:
            continue
        if any(abs(x - r.x) < MERGE_TOL for r in records):
            continue
        klass = "localized" if x.imag + edge < 0 else "bandpass"
        records.append(
            PoleRecord(tag, x, klass, complex(_table_weight(tag, x, config)), False, "table")
        )

    records.sort(key=lambda r: (-r.x.imag, r.x.real, r.tag))
    return PoleSet(records=tuple(records), config=config)
