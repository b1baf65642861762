"""Physical constants, derived scales and the pipe domain."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

from .errors import ValidationError

EPSILON_WARN = 0.1
SLENDERNESS_RATIO = 0.1


class PhysicsWarning(UserWarning):
    """Parameters are valid but stretch a modelling assumption."""


def _positive(name, value):
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise ValidationError(name, f"must be a number, got {value!r}")
    if not math.isfinite(value) or value <= 0:
        raise ValidationError(name, f"must be finite and > 0, got {value!r}")


@dataclass(frozen=True)
class PhysicalConstants:
    """Fundamental constants of the model, in SI units.

    ``m0`` is the central-charge mass of the extended Galilei group; it has
    no physical default and must always be supplied.
    """

    rho0: float
    v0: float
    m0: float
    hbar: float
    alpha: float = 1.0
    epsilon_perturb: float = 0.01

    def __post_init__(self):
        for name in ("rho0", "v0", "m0", "hbar", "alpha", "epsilon_perturb"):
            _positive(name, getattr(self, name))
        if self.epsilon_perturb >= 1.0:
            raise ValidationError("epsilon_perturb", f"must be < 1, got {self.epsilon_perturb}")
        if self.epsilon_perturb > EPSILON_WARN:
            warnings.warn(
                f"epsilon_perturb={self.epsilon_perturb} exceeds {EPSILON_WARN}; "
                "the linearised filament dynamics may break down",
                PhysicsWarning,
                stacklevel=3,
            )

    @classmethod
    def natural(cls, alpha: float = 1.0, epsilon_perturb: float = 0.01) -> "PhysicalConstants":
        """Natural units: ``hbar = rho0 = v0 = m0 = 1``."""
        return cls(rho0=1.0, v0=1.0, m0=1.0, hbar=1.0, alpha=alpha, epsilon_perturb=epsilon_perturb)


@dataclass(frozen=True)
class DerivedScales:
    R0: float
    t0: float
    E0: float
    k_max: float


def derive_scales(constants: PhysicalConstants) -> DerivedScales:
    """Length, time and energy units built from ``m0``, ``rho0``, ``v0`` and ``hbar``."""
    c = constants
    R0 = (c.m0 / c.rho0) ** (1.0 / 3.0)
    # Newton-correct the cube root so exact cubes come out exact
    R0 -= (R0 ** 3 - c.m0 / c.rho0) / (3.0 * R0 ** 2)
    return DerivedScales(R0=R0, t0=R0 / c.v0, E0=c.m0 * c.v0 ** 2, k_max=c.m0 * c.v0 / c.hbar)


@dataclass
class DomainReport:
    errors: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    @property
    def clean(self) -> bool:
        return not self.errors and not self.warnings


@dataclass(frozen=True)
class PipeDomain:
    """Cylinder of radius ``R1`` and length ``L`` holding a ring of radius ``R``."""

    R1: float
    L: float
    R: float

    def validate(self, slenderness: float = SLENDERNESS_RATIO) -> DomainReport:
        return validate_domain(self, slenderness)

    def require_valid(self, slenderness: float = SLENDERNESS_RATIO) -> "PipeDomain":
        """Raise on hard violations, forward soft ones as warnings."""
        report = validate_domain(self, slenderness)
        if report.errors:
            raise ValidationError("domain", "; ".join(report.errors))
        for msg in report.warnings:
            warnings.warn(msg, PhysicsWarning, stacklevel=2)
        return self


def validate_domain(domain: PipeDomain, slenderness: float = SLENDERNESS_RATIO) -> DomainReport:
    """Check the orderings ``0 < R < R1 < L``; ``R1/L > slenderness`` is only a warning."""
    report = DomainReport()
    for name in ("R1", "L", "R"):
        value = getattr(domain, name)
        if not isinstance(value, (int, float)) or not math.isfinite(value) or value <= 0:
            report.errors.append(f"{name} > 0 violated ({name}={value!r})")
    if report.errors:
        return report
    if not domain.R < domain.R1:
        report.errors.append(f"R < R1 violated (R={domain.R:g}, R1={domain.R1:g})")
    if not domain.R1 < domain.L:
        report.errors.append(f"R1 < L violated (R1={domain.R1:g}, L={domain.L:g})")
    ratio = domain.R1 / domain.L
    if not report.errors and ratio > slenderness:
        report.warnings.append(f"slenderness R1/L={ratio:g} > {slenderness:g}")
    return report
