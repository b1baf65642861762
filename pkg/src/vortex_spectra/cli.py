"""``vortex-spectra`` command-line front end.

Exit codes: 0 success, 1 failed verification, 2 invalid configuration or
arguments, 3 resource budget exceeded. Output files are written to a
temporary sibling and renamed into place only on success.
"""

from __future__ import annotations

import argparse
import contextlib
import sys
import warnings
from pathlib import Path

from . import __version__
from .bessel import BesselZeroTable, write_zero_csv
from .config import FORMATS, RunConfig, default_config, load_config
from .constants import PhysicsWarning, derive_scales
from .dynamics import PhaseState, evolve_closed, write_phase_csv
from .errors import DomainError, ModelRegimeError, ResourceError, ValidationError, VortexSpectraError
from .export import (
    atomic_open,
    spectrum_json,
    svg_scatter,
    write_json,
    write_spectrum_csv,
    write_xy_csv,
)
from .filament import reconstruct_curve, synthesize_tangent, write_curve_csv
from .spectrum import (
    ExcitationState,
    enumerate_spectrum,
    gamma_bounds,
    gamma_value,
    regge_trajectory,
    uniform_gamma_grid,
)
from .verify import SUITES, run_checks

EXIT_OK, EXIT_FAILED, EXIT_CONFIG, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


@contextlib.contextmanager
def _destination(path):
    if path is None:
        yield sys.stdout
    else:
        with atomic_open(path) as fh:
            yield fh


def _load(args) -> RunConfig:
    if args.config is None:
        raise ValidationError("--config", "a configuration file is required")
    return load_config(args.config)


def _fmt(args, cfg: RunConfig | None, default="csv") -> str:
    fmt = args.format or (cfg.output_format if cfg else default)
    if fmt not in FORMATS:
        raise ValidationError("--format", f"unsupported format {fmt!r}")
    return fmt


def _out(args, cfg: RunConfig | None):
    return args.out or (cfg.output_path if cfg else None)


def cmd_spectrum(args) -> int:
    cfg = _load(args)
    fmt = _fmt(args, cfg)
    scales = derive_scales(cfg.constants)
    spectrum = enumerate_spectrum(cfg.constants, scales, cfg.domain, cfg.cutoffs, budget=cfg.line_budget)
    out = _out(args, cfg)
    with _destination(out) as fh:
        if fmt == "csv":
            write_spectrum_csv(fh, spectrum.lines)
        elif fmt == "json":
            write_json(fh, spectrum_json(spectrum, cfg.constants, cfg.domain, __version__))
        else:
            groups: dict[tuple[int, int], list] = {}
            for line in spectrum.lines:
                groups.setdefault((line.excitation.ell, line.excitation.s_ell), []).append((line.gamma, line.E_real))
            series = [(f"ell={e} s={s}", pts) for (e, s), pts in sorted(groups.items())]
            fh.write(svg_scatter(series, "gamma", "E_real"))
    if args.zero_table:
        with atomic_open(args.zero_table) as fh:
            tables = [BesselZeroTable.compute(k, cfg.cutoffs.m_max) for k in range(cfg.cutoffs.k_max_idx)]
            write_zero_csv(fh, tables)
    gammas = [ln.gamma for ln in spectrum.lines]
    energies = [ln.E_real for ln in spectrum.lines]
    summary = sys.stdout if out is not None else sys.stderr
    print(
        f"lines={len(spectrum)} gamma=[{min(gammas):.6g}, {max(gammas):.6g}] "
        f"E_real=[{min(energies):.6g}, {max(energies):.6g}]",
        file=summary,
    )
    return EXIT_OK


def finite_length_gammas(cfg: RunConfig) -> list[float]:
    """Attainable ``gamma`` values of the configured pipe that lie inside the admissible interval."""
    scales = derive_scales(cfg.constants)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", PhysicsWarning)
        bounds = gamma_bounds(cfg.constants, cfg.domain, scales)
    c = cfg.cutoffs
    values = (
        gamma_value(n, m, k, cfg.domain)
        for k in range(c.k_max_idx)
        for m in range(1, c.m_max + 1)
        for n in range(1, c.n_max + 1)
    )
    return sorted(g for g in values if bounds.contains(g))


def cmd_trajectory(args) -> int:
    cfg = _load(args)
    fmt = _fmt(args, cfg)
    try:
        exc = ExcitationState(args.ell, args.s)
    except DomainError as err:
        raise UsageError(str(err)) from err
    if args.grid_size < 2:
        raise UsageError(f"--grid-size must be >= 2, got {args.grid_size}")
    scales = derive_scales(cfg.constants)
    bounds = gamma_bounds(cfg.constants, cfg.domain, scales, cfg.gamma_ratio)
    grid = finite_length_gammas(cfg) if args.finite_L else uniform_gamma_grid(bounds, args.grid_size)
    points = regge_trajectory(exc, grid, cfg.constants, scales, cfg.domain)
    out = _out(args, cfg)
    with _destination(out) as fh:
        if fmt == "json":
            write_json(fh, {"ell": exc.ell, "s_ell": exc.s_ell,
                            "points": [{"gamma": g, "E_real": e} for g, e in points]})
        elif fmt == "svg":
            fh.write(svg_scatter([(f"ell={exc.ell} s={exc.s_ell}", points)], "gamma", "E_real"))
        else:
            write_xy_csv(fh, ("gamma", "E_real"), points)
    if args.svg:
        with atomic_open(args.svg) as fh:
            fh.write(svg_scatter([(f"ell={exc.ell} s={exc.s_ell}", points)], "gamma", "E_real"))
    if out is not None:
        print(f"points={len(points)} gamma=[{points[0][0]:.6g}, {points[-1][0]:.6g}]")
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = load_config(args.config) if args.config else default_config()
    fmt = args.format or "json"
    suites = tuple(args.suite) if args.suite else SUITES
    checks = run_checks(cfg, suites, fault=args.inject_fault)
    with _destination(args.out) as fh:
        if fmt == "csv":
            fh.write("suite,name,measured,bound,pass\n")
            for c in checks:
                fh.write(f"{c.suite},{c.name},{c.measured!r},{c.bound},{str(c.passed).lower()}\n")
        else:
            write_json(fh, {"checks": [c.as_dict() for c in checks],
                            "passed": all(c.passed for c in checks)})
    if args.out is not None:
        for c in checks:
            print(f"{'PASS' if c.passed else 'FAIL'} {c.suite}.{c.name} measured={c.measured:.3e} bound {c.bound}")
    return EXIT_OK if all(c.passed for c in checks) else EXIT_FAILED


def _vector(text: str, name: str):
    try:
        parts = [float(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"{name} must be three comma-separated numbers, got {text!r}") from None
    if len(parts) != 3:
        raise UsageError(f"{name} must be three comma-separated numbers, got {text!r}")
    return tuple(parts)


def parse_mode(text: str) -> tuple[int, complex]:
    """``"N:AMP"`` with ``N >= 2`` and ``AMP`` any Python complex literal, e.g. ``2:0.1-0.05j``."""
    try:
        n_text, amp_text = text.split(":", 1)
        n = int(n_text)
        amp = complex(amp_text.replace(" ", ""))
    except ValueError:
        raise UsageError(f"invalid mode {text!r}; expected N:AMPLITUDE") from None
    if n < 2:
        raise UsageError(f"mode number must be >= 2, got {n}")
    return n, amp


def cmd_simulate(args) -> int:
    cfg = _load(args)
    modes = dict(parse_mode(m) for m in args.mode)
    if args.samples < 2:
        raise UsageError(f"--samples must be >= 2, got {args.samples}")
    q = _vector(args.q, "--q")
    p = _vector(args.p, "--p")
    scales = derive_scales(cfg.constants)
    # always carry at least the n = 2 columns so empty runs keep a fixed layout
    start = PhaseState.from_modes(q, p, modes, n_max=max([2, *modes]))
    times = [args.t_span * i / (args.samples - 1) for i in range(args.samples)]
    # each snapshot is evolved from the start so rounding does not accumulate
    states = [evolve_closed(start, t, scales, cfg.constants.m0) for t in times]
    with _destination(_out(args, cfg)) as fh:
        write_phase_csv(fh, states)
    if args.frames:
        frames = Path(args.frames)
        frames.mkdir(parents=True, exist_ok=True)
        for i, state in enumerate(states):
            field = state.tangent_field(cfg.constants.epsilon_perturb, args.grid)
            samples = synthesize_tangent(field, 0.0)
            curve = reconstruct_curve(state.q, cfg.domain.R, samples)
            with atomic_open(frames / f"frame_{i:05d}.csv") as fh:
                write_curve_csv(fh, curve)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vortex-spectra", description="Circulation and energy spectra of a vortex ring in a pipe.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, config_required=True):
        p.add_argument("--config", required=config_required, help="key-value run configuration (TOML)")
        p.add_argument("--out", help="output file (default: standard output)")
        p.add_argument("--format", choices=FORMATS, help="output format")

    p = sub.add_parser("spectrum", help="enumerate the circulation/energy spectrum")
    common(p)
    p.add_argument("--zero-table", help="also write the Bessel zeros used (k, m, zeta) to this CSV")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("trajectory", help="sample one energy trajectory E(gamma)")
    common(p)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--grid-size", type=int, default=200)
    p.add_argument("--finite-L", action="store_true", help="use the attainable gamma values of the finite pipe")
    p.add_argument("--svg", help="additional SVG scatter output")
    p.set_defaults(func=cmd_trajectory)

    p = sub.add_parser("verify", help="run the invariant suites")
    common(p, config_required=False)
    p.add_argument("--suite", action="append", choices=SUITES)
    p.add_argument("--inject-fault", type=float, default=0.0, help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="evolve a phase state and export snapshots")
    common(p)
    p.add_argument("--mode", action="append", default=[], help="N:AMPLITUDE, repeatable")
    p.add_argument("--q", default="0,0,0")
    p.add_argument("--p", default="0,0,0")
    p.add_argument("--t-span", type=float, required=True, help="conditional time span")
    p.add_argument("--samples", type=int, default=101)
    p.add_argument("--frames", help="directory for reconstructed curve frames")
    p.add_argument("--grid", type=int, default=1024)
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValidationError, UsageError, ModelRegimeError, DomainError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except ResourceError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_BUDGET
    except VortexSpectraError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
