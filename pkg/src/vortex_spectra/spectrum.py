"""Quantised circulation and energy spectra of the ring in a long pipe.

Circulation levels are labelled by an axial number ``n >= 1``, a radial index
``m >= 1`` and an angular order ``k >= 0``; the radial part is the ``m``-th
zero of ``J_k``. In the long-pipe limit the levels are labelled instead by
the dimensionless circulation ``gamma`` in ``(zeta_0^(1), k_max R1)``.
Energies are given both for the conditional-time generator and for real
time, the two being related by the time rescaling ``t = 4 pi R^2 t# / (alpha t0 Gamma)``.
"""

from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence, Union

from .bessel import bessel_zero
from .constants import DerivedScales, PhysicalConstants, PhysicsWarning, PipeDomain
from .errors import DomainError, IndexOutOfRange, ModelRegimeError, ResourceError
from .modes import dispersion, evolution_frequency

GAMMA_RATIO_THRESHOLD = 10.0
LINE_BUDGET = 10 ** 7
THREADS_ENV = "VORTEX_SPECTRA_THREADS"


def _check_index(name, value, lowest):
    if isinstance(value, bool) or int(value) != value or value < lowest:
        raise IndexOutOfRange(f"{name} must be an integer >= {lowest}, got {value!r}")
    return int(value)


@dataclass(frozen=True)
class CirculationMode:
    n: int
    m: int
    k: int
    Gamma: float


@dataclass(frozen=True)
class ExcitationState:
    """Single occupied oscillator ``ell`` with occupation ``s_ell``."""

    ell: int
    s_ell: int

    def __post_init__(self):
        if isinstance(self.ell, bool) or int(self.ell) != self.ell or self.ell < 2:
            raise DomainError(f"oscillator mode ell must be an integer >= 2, got {self.ell!r}")
        if isinstance(self.s_ell, bool) or int(self.s_ell) != self.s_ell or self.s_ell < 0:
            raise DomainError(f"occupation s_ell must be an integer >= 0, got {self.s_ell!r}")

    def frequency(self) -> float:
        return dispersion(self.ell)


@dataclass(frozen=True)
class SpectralLine:
    mode: Union[CirculationMode, float]
    excitation: ExcitationState
    gamma: float
    Gamma: float
    E_conditional: float
    E_real: float

    def sort_key(self):
        if isinstance(self.mode, CirculationMode):
            nmk = (self.mode.n, self.mode.m, self.mode.k)
        else:
            nmk = (0, 0, 0)
        return (self.E_real, self.gamma, self.excitation.ell, self.excitation.s_ell, *nmk)


def _prefactor(constants: PhysicalConstants, domain: PipeDomain) -> float:
    """``hbar / (pi rho0 R^2 R1)``: circulation per unit of ``gamma``."""
    return constants.hbar / (math.pi * constants.rho0 * domain.R ** 2 * domain.R1)


def gamma_value(n: int, m: int, k: int, domain: PipeDomain) -> float:
    """Dimensionless circulation ``sqrt((pi n R1 / L)^2 + zeta_k^(m)^2)`` of a pipe mode."""
    n = _check_index("n", n, 1)
    m = _check_index("m", m, 1)
    k = _check_index("k", k, 0)
    return math.hypot(math.pi * n * domain.R1 / domain.L, bessel_zero(k, m))


def gamma_spacing(n: int, m: int, k: int, domain: PipeDomain) -> float:
    """``gamma(n+1) - gamma(n)`` within one ``(m, k)`` family, free of cancellation."""
    axial = (math.pi * domain.R1 / domain.L) ** 2 * (2 * n + 1)
    return axial / (gamma_value(n + 1, m, k, domain) + gamma_value(n, m, k, domain))


def circulation(n: int, m: int, k: int, constants: PhysicalConstants, domain: PipeDomain) -> CirculationMode:
    """Circulation level ``(hbar / pi rho0 R^2) sqrt((pi n / L)^2 + (zeta_k^(m) / R1)^2)``."""
    n = _check_index("n", n, 1)
    m = _check_index("m", m, 1)
    k = _check_index("k", k, 0)
    axial = math.pi * n / domain.L
    radial = bessel_zero(k, m) / domain.R1
    Gamma = constants.hbar / (math.pi * constants.rho0 * domain.R ** 2) * math.hypot(axial, radial)
    return CirculationMode(n, m, k, Gamma)


def gamma_from_mode(mode: CirculationMode, constants: PhysicalConstants, domain: PipeDomain) -> float:
    return mode.Gamma / _prefactor(constants, domain)


def circulation_from_gamma(gamma: float, constants: PhysicalConstants, domain: PipeDomain) -> float:
    return gamma * _prefactor(constants, domain)


class CirculationGap(NamedTuple):
    exact: float
    leading: float


def circulation_gap(n, m, k, constants: PhysicalConstants, domain: PipeDomain) -> CirculationGap:
    """Gap to the next axial level and its leading large-``L`` term."""
    lower = circulation(n, m, k, constants, domain)
    upper = circulation(n + 1, m, k, constants, domain)
    # difference of square roots, rewritten to avoid cancellation at large L
    pre = constants.hbar / (math.pi * constants.rho0 * domain.R ** 2)
    axial_sq = (math.pi / domain.L) ** 2 * (2 * n + 1)
    exact = pre * pre * axial_sq / (upper.Gamma + lower.Gamma)
    leading = (
        math.pi * constants.hbar * domain.R1 / (2.0 * constants.rho0 * domain.R ** 2)
        * (2 * n + 1) / (bessel_zero(k, m) * domain.L ** 2)
    )
    return CirculationGap(exact, leading)


class GammaBounds(NamedTuple):
    gamma_min: float
    gamma_max: float

    def contains(self, gamma: float) -> bool:
        return self.gamma_min <= gamma <= self.gamma_max


def gamma_bounds(
    constants: PhysicalConstants,
    domain: PipeDomain,
    scales: DerivedScales | None = None,
    ratio_threshold: float = GAMMA_RATIO_THRESHOLD,
) -> GammaBounds:
    """Admissible ``gamma`` interval ``(zeta_0^(1), k_max R1)``.

    The upper end comes from the subsonic bound ``|p| < m0 v0``. A warning is
    issued when the interval is not wide (``gamma_max / gamma_min`` below
    ``ratio_threshold``).
    """
    k_max = constants.m0 * constants.v0 / constants.hbar if scales is None else scales.k_max
    lo = bessel_zero(0, 1)
    hi = k_max * domain.R1
    if hi <= lo:
        raise ModelRegimeError(f"empty gamma interval: k_max*R1={hi:g} <= first Bessel zero {lo:.6f}")
    if hi / lo < ratio_threshold:
        warnings.warn(
            f"k_max*R1/zeta_0^(1) = {hi / lo:.3g} is below {ratio_threshold:g}; "
            "the wide-interval assumption is not met",
            PhysicsWarning,
            stacklevel=2,
        )
    return GammaBounds(lo, hi)


def gamma_max_circulation(constants: PhysicalConstants, domain: PipeDomain) -> float:
    """Largest admissible circulation ``m0 v0 / (pi rho0 R^2)``."""
    return constants.m0 * constants.v0 / (math.pi * constants.rho0 * domain.R ** 2)


def epsilon_net(n: int, m: int, k: int, domain: PipeDomain) -> float:
    """Spacing of attainable ``gamma`` values at finite ``L``: ``(pi^2/2)(2n+1)/zeta (R1/L)^2``."""
    n = _check_index("n", n, 1)
    return 0.5 * math.pi ** 2 * (2 * n + 1) / bessel_zero(k, m) * (domain.R1 / domain.L) ** 2


def energy_conditional(
    mode_or_gamma: Union[CirculationMode, float],
    excitation: ExcitationState,
    constants: PhysicalConstants,
    scales: DerivedScales,
    domain: PipeDomain,
) -> float:
    """Eigenvalue of the conditional-time generator.

    A :class:`CirculationMode` uses the finite-pipe form
    ``(pi rho0 R^2 Gamma)^2 / 2 m0``; a bare ``gamma`` uses the long-pipe form
    ``gamma^2 hbar^2 / (2 m0 R1^2)``. Both add ``(hbar/t0) ell sqrt(ell^2-1) s_ell``.
    """
    if not isinstance(excitation, ExcitationState):
        raise DomainError("excitation must be an ExcitationState")
    c = constants
    if isinstance(mode_or_gamma, CirculationMode):
        kinetic = (math.pi * c.rho0 * domain.R ** 2 * mode_or_gamma.Gamma) ** 2 / (2.0 * c.m0)
    else:
        gamma = float(mode_or_gamma)
        kinetic = (gamma * c.hbar / domain.R1) ** 2 / (2.0 * c.m0)
    return kinetic + c.hbar / scales.t0 * excitation.frequency() * excitation.s_ell


def time_rescale_factor(gamma: float, constants: PhysicalConstants, scales: DerivedScales, domain: PipeDomain) -> float:
    """``t# / t = alpha t0 Gamma / (4 pi R^2)`` at circulation ``gamma``."""
    Gamma = circulation_from_gamma(gamma, constants, domain)
    return constants.alpha * scales.t0 * Gamma / (4.0 * math.pi * domain.R ** 2)


def energy_real(
    gamma: float,
    excitation: ExcitationState,
    constants: PhysicalConstants,
    scales: DerivedScales,
    domain: PipeDomain,
    check_bounds: bool = True,
) -> float:
    """Real-time energy of the level ``(gamma; ell, s_ell)``.

    ``alpha hbar^2 / (4 pi^2 rho0 R^4 R1) * (R0/(2 R1) gamma^3/(k_max R1) + gamma ell sqrt(ell^2-1) s_ell)``
    """
    if not isinstance(excitation, ExcitationState):
        raise DomainError("excitation must be an ExcitationState")
    if not math.isfinite(gamma) or gamma <= 0:
        raise DomainError(f"gamma must be > 0, got {gamma!r}")
    if check_bounds:
        lo = bessel_zero(0, 1)
        hi = scales.k_max * domain.R1
        if not lo <= gamma <= hi:
            warnings.warn(
                f"gamma={gamma:g} outside the admissible interval ({lo:.6g}, {hi:.6g})",
                PhysicsWarning,
                stacklevel=2,
            )
    c = constants
    pre = c.alpha * c.hbar ** 2 / (4.0 * math.pi ** 2 * c.rho0 * domain.R ** 4 * domain.R1)
    cubic = scales.R0 / (2.0 * domain.R1) * gamma ** 3 / (scales.k_max * domain.R1)
    excited = gamma * evolution_frequency(excitation.ell) * excitation.s_ell
    return pre * (cubic + excited)


@dataclass(frozen=True)
class Cutoffs:
    """Enumeration limits.

    ``n = 1..n_max``, ``m = 1..m_max``, ``k = 0..k_max_idx-1``,
    ``ell = 2..ell_max+1`` (``ell_max`` oscillators) and ``s = 0..s_max``.
    """

    n_max: int = 1
    m_max: int = 1
    k_max_idx: int = 1
    ell_max: int = 1
    s_max: int = 1

    def __post_init__(self):
        for name in ("n_max", "m_max", "k_max_idx", "ell_max", "s_max"):
            value = getattr(self, name)
            if isinstance(value, bool) or int(value) != value or value < 1:
                raise DomainError(f"cutoff {name} must be an integer >= 1, got {value!r}")

    def excitations(self) -> list[ExcitationState]:
        # s = 0 is the oscillator vacuum, the same state for every ell
        out = [ExcitationState(2, 0)]
        for ell in range(2, self.ell_max + 2):
            for s in range(1, self.s_max + 1):
                out.append(ExcitationState(ell, s))
        return out

    def line_count(self) -> int:
        return self.n_max * self.m_max * self.k_max_idx * (1 + self.ell_max * self.s_max)


@dataclass(frozen=True)
class SpacingRecord:
    """Consecutive-``n`` spacing of ``gamma`` inside one ``(m, k)`` family."""

    m: int
    k: int
    n: int
    spacing: float
    epsilon: float

    @property
    def relative_deviation(self) -> float:
        return abs(self.spacing - self.epsilon) / self.epsilon


@dataclass
class Spectrum:
    lines: list[SpectralLine]
    spacings: list[SpacingRecord]
    bounds: GammaBounds | None = None
    cutoffs: Cutoffs = field(default_factory=Cutoffs)

    def __len__(self):
        return len(self.lines)

    def within_bounds(self) -> list[SpectralLine]:
        if self.bounds is None:
            return list(self.lines)
        return [ln for ln in self.lines if self.bounds.contains(ln.gamma)]


def thread_count() -> int:
    raw = os.environ.get(THREADS_ENV, "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _prefill_zeros(k_count: int, m_max: int, workers: int) -> None:
    if workers <= 1 or k_count == 1:
        for k in range(k_count):
            bessel_zero(k, m_max)
        return
    with ThreadPoolExecutor(max_workers=workers) as pool:
        list(pool.map(lambda k: bessel_zero(k, m_max), range(k_count)))


def enumerate_spectrum(
    constants: PhysicalConstants,
    scales: DerivedScales,
    domain: PipeDomain,
    cutoffs: Cutoffs,
    budget: int = LINE_BUDGET,
    workers: int | None = None,
) -> Spectrum:
    """All levels within ``cutoffs``, sorted by real energy.

    Ties are broken lexicographically on ``(gamma, ell, s_ell, n, m, k)``.
    Zero tables may be filled by several threads; the result does not depend
    on the thread count.
    """
    count = cutoffs.line_count()
    if count > budget:
        raise ResourceError(f"{count} spectral lines requested, budget is {budget}")
    _prefill_zeros(cutoffs.k_max_idx, cutoffs.m_max, workers or thread_count())
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", PhysicsWarning)
            bounds = gamma_bounds(constants, domain, scales)
    except ModelRegimeError:
        bounds = None

    excitations = cutoffs.excitations()
    lines = []
    spacings = []
    for k in range(cutoffs.k_max_idx):
        for m in range(1, cutoffs.m_max + 1):
            for n in range(1, cutoffs.n_max + 1):
                mode = circulation(n, m, k, constants, domain)
                gamma = gamma_value(n, m, k, domain)
                if n < cutoffs.n_max:
                    spacings.append(
                        SpacingRecord(m, k, n, gamma_spacing(n, m, k, domain), epsilon_net(n, m, k, domain))
                    )
                for exc in excitations:
                    lines.append(
                        SpectralLine(
                            mode=mode,
                            excitation=exc,
                            gamma=gamma,
                            Gamma=mode.Gamma,
                            E_conditional=energy_conditional(mode, exc, constants, scales, domain),
                            E_real=energy_real(gamma, exc, constants, scales, domain, check_bounds=False),
                        )
                    )
    lines.sort(key=SpectralLine.sort_key)
    return Spectrum(lines, spacings, bounds, cutoffs)


def regge_trajectory(
    excitation: ExcitationState,
    gamma_grid: Sequence[float],
    constants: PhysicalConstants,
    scales: DerivedScales,
    domain: PipeDomain,
) -> list[tuple[float, float]]:
    """Samples ``(gamma, E_real)`` along one excitation; points outside the bounds are dropped."""
    grid = [float(g) for g in gamma_grid]
    if not grid:
        raise DomainError("gamma grid is empty")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", PhysicsWarning)
        bounds = gamma_bounds(constants, domain, scales)
    kept = [g for g in grid if bounds.contains(g)]
    if len(kept) < len(grid):
        warnings.warn(
            f"{len(grid) - len(kept)} gamma samples outside ({bounds.gamma_min:.6g}, "
            f"{bounds.gamma_max:.6g}) were dropped",
            PhysicsWarning,
            stacklevel=2,
        )
    grid = kept
    if not grid:
        raise DomainError("no gamma samples left inside the admissible interval")
    grid.sort()
    return [(g, energy_real(g, excitation, constants, scales, domain, check_bounds=False)) for g in grid]


def uniform_gamma_grid(bounds: GammaBounds, size: int) -> list[float]:
    if size < 2:
        raise DomainError(f"grid size must be >= 2, got {size}")
    lo, hi = bounds
    step = (hi - lo) / (size - 1)
    return [lo + i * step for i in range(size - 1)] + [hi]
