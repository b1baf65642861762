"""Linearised ring dynamics on the extended phase space ``(q, p; j_{-n})``.

The Poisson structure is diagonal, so the flow it generates with the
energy function below is known in closed form: ``q`` drifts with velocity
``p / m0`` and every amplitude rotates with frequency ``omega_n / t0``.
:func:`evolve_numeric` integrates the same Hamilton equations with RK4 and
serves as an independent check of :func:`evolve_closed`.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, replace
from typing import Callable, Iterable, TextIO

import numpy as np

from .constants import DerivedScales, PhysicalConstants
from .errors import DomainError, ValidationError
from .filament import (
    TWO_PI,
    FilamentCurve,
    TangentField,
    _cumulative_trapezoid,
    profile_from_tangent,
    synthesize_tangent,
)
from .modes import DispersionLaw, dispersion, evolution_frequency, mirror_amplitude  # noqa: F401

DEFAULT_DTAU = 1e-5


def _vec3(name, value):
    arr = tuple(float(v) for v in value)
    if len(arr) != 3 or not all(math.isfinite(v) for v in arr):
        raise ValidationError(name, f"must be a finite 3-vector, got {value!r}")
    return arr


@dataclass(frozen=True)
class PhaseState:
    """Point ``(q, p, {j_{-n}})`` of the phase space; ``amplitudes[0]`` is ``j_{-2}``."""

    q: tuple[float, float, float]
    p: tuple[float, float, float]
    amplitudes: tuple[complex, ...] = ()
    t_conditional: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "q", _vec3("q", self.q))
        object.__setattr__(self, "p", _vec3("p", self.p))
        amps = tuple(complex(a) for a in self.amplitudes)
        if not all(math.isfinite(a.real) and math.isfinite(a.imag) for a in amps):
            raise ValidationError("amplitudes", "must be finite")
        object.__setattr__(self, "amplitudes", amps)
        if not math.isfinite(self.t_conditional):
            raise ValidationError("t_conditional", "must be finite")

    @classmethod
    def from_modes(cls, q, p, modes: dict[int, complex], n_max: int | None = None, t_conditional=0.0):
        for n in modes:
            if int(n) != n or n < 2:
                raise ValidationError("modes", f"mode numbers must be integers >= 2, got {n!r}")
        top = max([1, *modes]) if n_max is None else n_max
        amps = tuple(complex(modes.get(n, 0.0)) for n in range(2, top + 1))
        return cls(q, p, amps, t_conditional)

    @property
    def n_max(self) -> int:
        return len(self.amplitudes) + 1

    def amplitude_array(self) -> np.ndarray:
        return np.array(self.amplitudes, dtype=complex)

    def tangent_field(self, epsilon: float, grid: int = 1024) -> TangentField:
        amps = self.amplitudes or (0j,)
        return TangentField(amps, epsilon, grid)


def _frequencies(count: int, frequency: Callable[[int], float]) -> np.ndarray:
    return np.array([frequency(n) for n in range(2, count + 2)], dtype=float)


def evolve_closed(state: PhaseState, dt: float, scales: DerivedScales, m0: float) -> PhaseState:
    """Exact flow over conditional time ``dt``."""
    q = np.array(state.q) + np.array(state.p) / m0 * dt
    omega = _frequencies(len(state.amplitudes), evolution_frequency)
    amps = state.amplitude_array() * np.exp(-1j * omega * (dt / scales.t0))
    return replace(state, q=tuple(q), amplitudes=tuple(amps), t_conditional=state.t_conditional + dt)


def evolve_numeric(
    state: PhaseState, dt: float, substeps: int, scales: DerivedScales, m0: float
) -> PhaseState:
    """Classical RK4 integration of ``dq/dt = p/m0``, ``dj_{-n}/dt = -i omega_n j_{-n} / t0``."""
    if substeps < 1:
        raise DomainError(f"substeps must be >= 1, got {substeps}")
    velocity = np.array(state.p) / m0
    rate = -1j * _frequencies(len(state.amplitudes), dispersion) / scales.t0
    h = dt / substeps
    q = np.array(state.q, dtype=float)
    a = state.amplitude_array()
    for _ in range(substeps):
        k1 = rate * a
        k2 = rate * (a + 0.5 * h * k1)
        k3 = rate * (a + 0.5 * h * k2)
        k4 = rate * (a + h * k3)
        a = a + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        # the drift field is constant, so all four stages coincide
        q = q + h * velocity
    return replace(state, q=tuple(q), amplitudes=tuple(a), t_conditional=state.t_conditional + dt)


def hamiltonian(state: PhaseState, constants: PhysicalConstants, scales: DerivedScales) -> float:
    """Energy ``p^2 / 2 m0 + E0 sum_{n>1} |j_{-n}|^2 n sqrt(n^2 - 1)``."""
    p2 = math.fsum(v * v for v in state.p)
    internal = math.fsum(abs(a) ** 2 * dispersion(n) for n, a in enumerate(state.amplitudes, start=2))
    return p2 / (2.0 * constants.m0) + scales.E0 * internal


def momentum_from_filament(
    field: TangentField, R: float, Gamma: float, rho0: float, tau: float = 0.0
) -> np.ndarray:
    """Momentum ``rho0 R^2 Gamma f`` with ``f`` the double kernel integral of ``j x j``.

    The inner integral over ``eta`` is the curve reconstruction (trapezoid
    with the kernel jump on a node); the outer one is a periodic trapezoid.
    """
    samples = synthesize_tangent(field, tau)
    h = TWO_PI / len(samples)
    inner = _cumulative_trapezoid(samples) - h * samples.sum(axis=0)
    f = 0.5 * h * np.cross(inner, samples).sum(axis=0)
    return rho0 * R * R * Gamma * f


def _spectral_second_derivative(values: np.ndarray) -> np.ndarray:
    grid = values.shape[0]
    k = np.fft.fftfreq(grid, d=1.0 / grid)
    if grid % 2 == 0:
        k[grid // 2] = 0.0
    shape = (grid,) + (1,) * (values.ndim - 1)
    return np.fft.ifft(-(k ** 2).reshape(shape) * np.fft.fft(values, axis=0), axis=0)


def linearized_residual(
    field: TangentField,
    tau: float = 0.0,
    dtau: float = DEFAULT_DTAU,
    frequency: Callable[[int], float] = dispersion,
) -> float:
    """Max-norm residual of ``dJ/dtau = -i J'' - (i/2)(J - conj J)`` on synthesised samples.

    ``d/dtau`` is a central difference, ``d^2/dxi^2`` is spectral.
    ``frequency`` replaces the mode frequencies during synthesis.
    """
    if field.epsilon == 0:
        return 0.0

    def profile(t):
        return profile_from_tangent(synthesize_tangent(field, t, frequency), field.epsilon)

    J = profile(tau)
    dJ = (profile(tau + dtau) - profile(tau - dtau)) / (2.0 * dtau)
    rhs = -1j * _spectral_second_derivative(J) - 0.5j * (J - np.conj(J))
    return float(np.max(np.abs(dJ - rhs)))


def spin_chain_residual(field: TangentField, tau: float = 0.0, dtau: float = DEFAULT_DTAU) -> float:
    """Max-norm residual of ``dj/dtau = j x j''`` evaluated on the linearised solution."""
    j = synthesize_tangent(field, tau)
    dj = (synthesize_tangent(field, tau + dtau) - synthesize_tangent(field, tau - dtau)) / (2.0 * dtau)
    jpp = _spectral_second_derivative(j).real
    return float(np.max(np.linalg.norm(dj - np.cross(j, jpp), axis=1)))


def angular_momentum_from_filament(curve: FilamentCurve, Gamma: float, origin=(0.0, 0.0, 0.0)) -> np.ndarray:
    """``(Gamma/3) * closed integral of u x (u x dr)`` with ``u = r - origin``.

    This is the volume integral of ``r x (r x omega)`` for the line-supported
    vorticity, evaluated with the periodic trapezoid rule; ``dr = R j dxi``.
    """
    u = curve.points - np.asarray(origin, dtype=float).reshape(3)
    dr = curve.R * curve.tangent
    h = TWO_PI / len(curve.points)
    return (Gamma / 3.0) * h * np.cross(u, np.cross(u, dr)).sum(axis=0)


def write_phase_csv(fh: TextIO, states: Iterable[PhaseState]) -> None:
    """Snapshot rows: ``t_conditional, q, p`` then ``re/im`` per mode ``n = 2..``."""
    states = list(states)
    n_max = max((s.n_max for s in states), default=1)
    writer = csv.writer(fh, lineterminator="\n")
    header = ["t_conditional", "qx", "qy", "qz", "px", "py", "pz"]
    for n in range(2, n_max + 1):
        header += [f"j{n}_re", f"j{n}_im"]
    writer.writerow(header)
    for s in states:
        row = [s.t_conditional, *s.q, *s.p]
        amps = list(s.amplitudes) + [0j] * (n_max - s.n_max)
        for a in amps:
            row += [a.real, a.imag]
        writer.writerow([f"{v:.16e}" for v in row])


def read_phase_csv(fh: TextIO) -> list[PhaseState]:
    reader = csv.reader(fh)
    header = next(reader)
    n_modes = (len(header) - 7) // 2
    states = []
    for row in reader:
        v = [float(x) for x in row]
        amps = tuple(complex(v[7 + 2 * i], v[8 + 2 * i]) for i in range(n_modes))
        states.append(PhaseState(tuple(v[1:4]), tuple(v[4:7]), amps, v[0]))
    return states
