"""Text rendering of results: CSV, aligned tables and ASCII density maps.

CSV output always uses ``\\n`` line endings and ``.`` decimals (plain
``str``/``format`` calls, never the locale module).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .laser import PhotonSeries
from .walk import DensityProfile, ExactDensity

log = logging.getLogger(__name__)

RAMP = " .:-=+*#%@"
FORMATS = ("csv", "table", "ascii")

__all__ = ["Table", "render", "fmt_sig", "fmt_scalar", "RAMP", "FORMATS"]


@dataclass
class Table:
    header: tuple
    rows: list


def fmt_sig(x: float, digits: int = 12) -> str:
    return f"{x:.{digits}g}"


def fmt_scalar(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def _profile_table(profile: DensityProfile) -> Table:
    if profile.accepted == 0:
        log.warning("no accepted paths out of %d tries; writing header only", profile.tries)
        return Table(("t", "x", "count", "frequency"), [])
    freq = profile.frequencies
    rows = []
    T1, W = profile.counts.shape
    for t in range(T1):
        for x in range(W):
            rows.append((t, x, int(profile.counts[t, x]), fmt_sig(freq[t, x])))
    return Table(("t", "x", "count", "frequency"), rows)


def _exact_table(exact: ExactDensity) -> Table:
    rows = []
    T1, W = exact.density.shape
    for t in range(T1):
        for x in range(W):
            rows.append((t, x, fmt_sig(exact.density[t, x])))
    return Table(("t", "x", "frequency"), rows)


def _series_table(series: PhotonSeries) -> Table:
    return Table(("t", "n"), [(fmt_sig(t), fmt_sig(n)) for t, n in zip(series.times, series.photon_counts)])


def _csv(table: Table) -> str:
    lines = [",".join(table.header)]
    lines += [",".join(fmt_scalar(c) for c in row) for row in table.rows]
    return "\n".join(lines) + "\n"


def _aligned(table: Table) -> str:
    cells = [list(table.header)] + [[fmt_scalar(c) for c in row] for row in table.rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(table.header))]
    out = []
    for j, r in enumerate(cells):
        out.append("  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip())
        if j == 0:
            out.append("  ".join("-" * w for w in widths))
    return "\n".join(out) + "\n"


def _heatmap(freq: np.ndarray, title: str) -> str:
    """(T+1) x W glyph grid, time downward, lattice site across."""
    T1, W = freq.shape
    peak = freq.max()
    levels = np.zeros(freq.shape, dtype=int)
    if peak > 0:
        levels = np.minimum((freq / peak * len(RAMP)).astype(int), len(RAMP) - 1)
        levels[(freq > 0) & (levels == 0)] = 1
    label_w = len(str(T1 - 1))
    ticks = "".join(str((x // 10) % 10) if x % 10 == 0 else " " for x in range(W))
    units = "".join(str(x % 10) for x in range(W))
    out = [title, f"{'t':>{label_w}} x {ticks}", f"{'':>{label_w}}   {units}"]
    for t in range(T1):
        out.append(f"{t:>{label_w}} | " + "".join(RAMP[k] for k in levels[t]))
    out.append(f"ramp '{RAMP}' (low -> high, per-grid maximum = '{RAMP[-1]}')")
    return "\n".join(out) + "\n"


def render(data, fmt: str = "csv") -> str:
    """Render a DensityProfile, ExactDensity, PhotonSeries or Table."""
    if fmt not in FORMATS:
        raise InputError(f"unknown format {fmt!r}; expected one of {FORMATS}")
    if fmt == "ascii":
        if isinstance(data, DensityProfile):
            title = f"accepted {data.accepted} of {data.tries} tries"
            return _heatmap(data.frequencies, title)
        if isinstance(data, ExactDensity):
            return _heatmap(data.density, f"exact conditioned density, total weight {data.total_weight:.6g}")
        raise InputError("ascii format is only available for density profiles")
    if isinstance(data, DensityProfile):
        table = _profile_table(data)
    elif isinstance(data, ExactDensity):
        table = _exact_table(data)
    elif isinstance(data, PhotonSeries):
        table = _series_table(data)
    elif isinstance(data, Table):
        table = data
    else:
        raise InputError(f"cannot render {type(data).__name__}")
    return _csv(table) if fmt == "csv" else _aligned(table)
