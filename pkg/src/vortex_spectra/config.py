"""Run configuration: a flat TOML document with dotted keys.

Example::

    preset = "natural-units"
    constants.alpha = 1.0
    domain.R1 = 30.0
    domain.L = 3000.0
    domain.R = 1.0
    cutoffs.n_max = 10

Unknown keys are rejected so that a mistyped constant never passes silently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .constants import SLENDERNESS_RATIO, PhysicalConstants, PipeDomain
from .errors import ValidationError
from .spectrum import GAMMA_RATIO_THRESHOLD, LINE_BUDGET, Cutoffs

NATURAL_PRESET = "natural-units"
FORMATS = ("csv", "json", "svg")

_CONSTANT_KEYS = ("rho0", "v0", "m0", "hbar", "alpha", "epsilon_perturb")
_REQUIRED_CONSTANTS = ("rho0", "v0", "m0", "hbar", "alpha")
_NATURAL = {"rho0": 1.0, "v0": 1.0, "m0": 1.0, "hbar": 1.0, "alpha": 1.0}
_DOMAIN_KEYS = ("R1", "L", "R")
_CUTOFF_KEYS = ("n_max", "m_max", "k_max_idx", "ell_max", "s_max")
_LIMIT_KEYS = ("slenderness", "gamma_ratio", "line_budget")

ALLOWED_KEYS = frozenset(
    ["preset", "output.format", "output.path"]
    + [f"constants.{k}" for k in _CONSTANT_KEYS]
    + [f"domain.{k}" for k in _DOMAIN_KEYS]
    + [f"cutoffs.{k}" for k in _CUTOFF_KEYS]
    + [f"limits.{k}" for k in _LIMIT_KEYS]
)


@dataclass(frozen=True)
class RunConfig:
    constants: PhysicalConstants
    domain: PipeDomain
    cutoffs: Cutoffs = field(default_factory=Cutoffs)
    output_format: str = "csv"
    output_path: str | None = None
    preset: str | None = None
    slenderness: float = SLENDERNESS_RATIO
    gamma_ratio: float = GAMMA_RATIO_THRESHOLD
    line_budget: int = LINE_BUDGET


def flatten(doc: dict, prefix: str = "") -> dict:
    flat = {}
    for key, value in doc.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            flat.update(flatten(value, name + "."))
        else:
            flat[name] = value
    return flat


def _number(key, value):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(key, f"must be a number, got {value!r}")
    if not math.isfinite(value):
        raise ValidationError(key, "must be finite")
    return float(value)


def _integer(key, value):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValidationError(key, f"must be an integer, got {value!r}")
    return value


def parse_config(flat: dict) -> RunConfig:
    unknown = sorted(set(flat) - ALLOWED_KEYS)
    if unknown:
        raise ValidationError(unknown[0], "unknown configuration key")

    preset = flat.get("preset")
    if preset is not None and preset != NATURAL_PRESET:
        raise ValidationError("preset", f"unknown preset {preset!r} (only {NATURAL_PRESET!r})")

    consts = {}
    for key in _CONSTANT_KEYS:
        full = f"constants.{key}"
        if full in flat:
            consts[key] = _number(full, flat[full])
        elif preset == NATURAL_PRESET and key in _NATURAL:
            consts[key] = _NATURAL[key]
        elif key in _REQUIRED_CONSTANTS:
            raise ValidationError(full, "missing required field")
    constants = PhysicalConstants(**consts)

    dom = {}
    for key in _DOMAIN_KEYS:
        full = f"domain.{key}"
        if full not in flat:
            raise ValidationError(full, "missing required field")
        dom[key] = _number(full, flat[full])
    domain = PipeDomain(**dom)

    slenderness = _number("limits.slenderness", flat.get("limits.slenderness", SLENDERNESS_RATIO))
    report = domain.validate(slenderness)
    if report.errors:
        raise ValidationError("domain", "; ".join(report.errors))

    cutoffs = Cutoffs(**{k: _integer(f"cutoffs.{k}", flat[f"cutoffs.{k}"]) for k in _CUTOFF_KEYS if f"cutoffs.{k}" in flat})

    fmt = flat.get("output.format", "csv")
    if fmt not in FORMATS:
        raise ValidationError("output.format", f"must be one of {FORMATS}, got {fmt!r}")
    path = flat.get("output.path")
    if path is not None and not isinstance(path, str):
        raise ValidationError("output.path", "must be a string")

    return RunConfig(
        constants=constants,
        domain=domain,
        cutoffs=cutoffs,
        output_format=fmt,
        output_path=path,
        preset=preset,
        slenderness=slenderness,
        gamma_ratio=_number("limits.gamma_ratio", flat.get("limits.gamma_ratio", GAMMA_RATIO_THRESHOLD)),
        line_budget=_integer("limits.line_budget", flat.get("limits.line_budget", LINE_BUDGET)),
    )


def load_config(path: str | Path) -> RunConfig:
    try:
        with open(path, "rb") as fh:
            doc = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ValidationError(str(path), f"not a valid key-value document: {exc}") from exc
    except OSError as exc:
        raise ValidationError(str(path), f"cannot read config: {exc.strerror}") from exc
    return parse_config(flatten(doc))


def default_config() -> RunConfig:
    """Natural units in a pipe wide enough for a non-trivial gamma interval."""
    return RunConfig(
        constants=PhysicalConstants.natural(),
        domain=PipeDomain(R1=30.0, L=3000.0, R=1.0),
        cutoffs=Cutoffs(n_max=5, m_max=3, k_max_idx=2, ell_max=2, s_max=2),
        preset=NATURAL_PRESET,
    )
