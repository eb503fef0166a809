"""Deterministic CSV emission (atomic writes, fixed 12-digit formatting)."""

from __future__ import annotations

import os
import tempfile

import numpy as np


def _fmt(x) -> str:
    return format(float(x) + 0.0, ".12g")


def write_atomic(path, text: str):
    """Write text to path via a temp file in the same directory + rename."""
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".pbgpair-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def entanglement_csv(series, trajectory) -> str:
    """t, N, E_N, field_prob, |A1|..|A4| — one row per output time."""
    amps = np.abs(np.asarray(trajectory.amps))
    rows = ["t,N,E_N,field_prob,abs_A1,abs_A2,abs_A3,abs_A4"]
    for k, t in enumerate(series.times):
        rows.append(",".join([
            _fmt(t), _fmt(series.negativity[k]), _fmt(series.log_negativity[k]),
            _fmt(trajectory.field_prob[k]),
            _fmt(amps[k, 0]), _fmt(amps[k, 1]), _fmt(amps[k, 2]), _fmt(amps[k, 3]),
        ]))
    return "\n".join(rows) + "\n"


def poles_csv(pole_set) -> str:
    """function_tag, re_x, im_x, class, residue_re, residue_im."""
    rows = ["function_tag,re_x,im_x,class,residue_re,residue_im"]
    for r in pole_set.records:
        rows.append(",".join([
            r.tag, _fmt(r.x.real), _fmt(r.x.imag), r.klass,
            _fmt(r.weight.real), _fmt(r.weight.imag),
        ]))
    return "\n".join(rows) + "\n"


def trajectory_csv(trajectory) -> str:
    """t, re/im of all four amplitudes, field_prob (oracle dump format)."""
    amps = np.asarray(trajectory.amps)
    rows = ["t,re_a1,im_a1,re_a2,im_a2,re_a3,im_a3,re_a4,im_a4,field_prob"]
    for k, t in enumerate(trajectory.times):
        vals = [_fmt(t)]
        for j in range(4):
            vals += [_fmt(amps[k, j].real), _fmt(amps[k, j].imag)]
        vals.append(_fmt(trajectory.field_prob[k]))
        rows.append(",".join(vals))
    return "\n".join(rows) + "\n"


def sweep_summary_csv(entries) -> str:
    """value, E_N half-life, integrated E_N over the sweep window."""
    rows = ["value,half_life,integrated_EN"]
    for label, hl, idx in entries:
        hl_txt = "inf" if np.isinf(hl) else _fmt(hl)
        rows.append(f"{label},{hl_txt},{_fmt(idx)}")
    return "\n".join(rows) + "\n"
