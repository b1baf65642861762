"""Table, JSON and SVG writers shared by the command-line tools."""

from __future__ import annotations

import contextlib
import csv
import io
import json
import math
import os
import tempfile
from dataclasses import asdict
from typing import Iterable, Sequence, TextIO

from .spectrum import CirculationMode, Cutoffs, SpectralLine, Spectrum

SPECTRUM_COLUMNS = ("n", "m", "k", "ell", "s_ell", "gamma", "Gamma", "E_conditional", "E_real")


def fmt17(value: float) -> str:
    """Fixed 17-significant-digit rendering used in every CSV file."""
    return f"{value:.16e}"


@contextlib.contextmanager
def atomic_open(path: str | os.PathLike, mode: str = "w"):
    """Write to a temporary sibling and rename over ``path`` only on success."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=directory)
    try:
        with os.fdopen(fd, mode, newline="" if "b" not in mode else None) as fh:
            yield fh
        os.replace(tmp, path)
    except BaseException:
        with contextlib.suppress(FileNotFoundError):
            os.unlink(tmp)
        raise


def _line_record(line: SpectralLine) -> dict:
    mode = line.mode
    n, m, k = (mode.n, mode.m, mode.k) if isinstance(mode, CirculationMode) else (None, None, None)
    return {
        "n": n,
        "m": m,
        "k": k,
        "ell": line.excitation.ell,
        "s_ell": line.excitation.s_ell,
        "gamma": line.gamma,
        "Gamma": line.Gamma,
        "E_conditional": line.E_conditional,
        "E_real": line.E_real,
    }


def write_spectrum_csv(fh: TextIO, lines: Iterable[SpectralLine]) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(SPECTRUM_COLUMNS)
    for line in lines:
        rec = _line_record(line)
        writer.writerow(
            ["" if rec[c] is None else rec[c] for c in ("n", "m", "k", "ell", "s_ell")]
            + [fmt17(rec[c]) for c in ("gamma", "Gamma", "E_conditional", "E_real")]
        )


def spectrum_json(spectrum: Spectrum, constants, domain, version: str) -> dict:
    return {
        "metadata": {
            "constants": asdict(constants),
            "domain": asdict(domain),
            "cutoffs": asdict(spectrum.cutoffs if spectrum.cutoffs else Cutoffs()),
            "generated_by": f"vortex-spectra {version}",
        },
        "lines": [_line_record(line) for line in spectrum.lines],
    }


def write_json(fh: TextIO, payload: dict) -> None:
    # json renders floats with repr, i.e. shortest round-trip decimal
    json.dump(payload, fh, indent=2, allow_nan=False)
    fh.write("\n")


def write_xy_csv(fh: TextIO, header: Sequence[str], rows: Iterable[Sequence[float]]) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt17(v) for v in row])


_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf")


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / count
    mag = 10 ** math.floor(math.log10(raw))
    step = min((s * mag for s in (1, 2, 5, 10) if s * mag >= raw), default=10 * mag)
    first = math.ceil(lo / step) * step
    out = []
    t = first
    while t <= hi + 1e-12 * step:
        out.append(t)
        t += step
    return out


def svg_scatter(
    series: Sequence[tuple[str, Sequence[tuple[float, float]]]],
    x_label: str = "gamma",
    y_label: str = "E",
    width: int = 640,
    height: int = 480,
) -> str:
    """Static scatter plot: axes, ticks and one circle per point, no connecting lines."""
    pts = [p for _, data in series for p in data]
    if not pts:
        raise ValueError("nothing to plot")
    xs, ys = [p[0] for p in pts], [p[1] for p in pts]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y1 = y0 + 1.0
    left, right, top, bottom = 70, 20, 20, 50
    pw, ph = width - left - right, height - top - bottom

    def sx(x):
        return left + (x - x0) / (x1 - x0) * pw

    def sy(y):
        return top + ph - (y - y0) / (y1 - y0) * ph

    out = io.StringIO()
    out.write(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">\n'
    )
    out.write(f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>\n')
    out.write(f'<line class="axis" x1="{left}" y1="{top + ph}" x2="{left + pw}" y2="{top + ph}" stroke="black"/>\n')
    out.write(f'<line class="axis" x1="{left}" y1="{top}" x2="{left}" y2="{top + ph}" stroke="black"/>\n')
    for t in _ticks(x0, x1):
        x = sx(t)
        out.write(f'<line class="tick" x1="{x:.2f}" y1="{top + ph}" x2="{x:.2f}" y2="{top + ph + 5}" stroke="black"/>\n')
        out.write(f'<text x="{x:.2f}" y="{top + ph + 18}" font-size="11" text-anchor="middle">{t:.4g}</text>\n')
    for t in _ticks(y0, y1):
        y = sy(t)
        out.write(f'<line class="tick" x1="{left - 5}" y1="{y:.2f}" x2="{left}" y2="{y:.2f}" stroke="black"/>\n')
        out.write(f'<text x="{left - 8}" y="{y + 4:.2f}" font-size="11" text-anchor="end">{t:.3g}</text>\n')
    out.write(f'<text x="{left + pw / 2}" y="{height - 10}" font-size="13" text-anchor="middle">{x_label}</text>\n')
    out.write(
        f'<text x="15" y="{top + ph / 2}" font-size="13" text-anchor="middle" '
        f'transform="rotate(-90 15 {top + ph / 2})">{y_label}</text>\n'
    )
    for i, (name, data) in enumerate(series):
        color = _PALETTE[i % len(_PALETTE)]
        out.write(f'<g class="series" data-label="{name}" fill="{color}">\n')
        for x, y in data:
            out.write(f'<circle class="marker" cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="2"/>\n')
        out.write("</g>\n")
    out.write("</svg>\n")
    return out.getvalue()
