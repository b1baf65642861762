"""Tangent field of the perturbed ring and reconstruction of the closed curve.

The filament is parametrised by the angle ``xi`` in ``[0, 2 pi)``. Its unit
tangent is the ring tangent ``e_phi`` plus a small transverse perturbation

    j(xi) = e_phi + eps * (j_rho e_rho + j_z e_z),

where ``j_rho + i j_z`` is a finite Fourier sum over modes ``|n| >= 2``. The
independent amplitudes are the negative-index ones; each positive-index
amplitude follows from the reflection relation in :mod:`vortex_spectra.modes`.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, TextIO

import numpy as np

from .errors import ConstraintError, DomainError, ValidationError
from .modes import dispersion, mirror_amplitude

TWO_PI = 2.0 * math.pi
DEFAULT_GRID = 1024
DEFAULT_N_MAX = 32
CLOSURE_TOL = 1e-10


def staircase_kernel(x: float) -> int:
    """Integer part of ``x / 2 pi``: ``[0] = 0`` and ``[x + 2 pi] = [x] + 1``."""
    return math.floor(x / TWO_PI)


def local_basis(xi):
    """Cylindrical triple ``(e_rho, e_phi, e_z)`` attached to the ring at angle ``xi``.

    Scalar ``xi`` gives three 3-vectors; an array gives three ``(len(xi), 3)`` arrays.
    """
    xi = np.asarray(xi, dtype=float)
    c, s = np.cos(xi), np.sin(xi)
    zero, one = np.zeros_like(xi), np.ones_like(xi)
    e_rho = np.stack([c, s, zero], axis=-1)
    e_phi = np.stack([-s, c, zero], axis=-1)
    e_z = np.stack([zero, zero, one], axis=-1)
    return e_rho, e_phi, e_z


def _is_power_of_two(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


@dataclass(frozen=True)
class TangentField:
    """Independent amplitudes ``j_{-n}`` for ``n = 2..n_max`` plus sampling data.

    Modes 0 and 1 are absent by construction: ``amplitudes[0]`` is ``j_{-2}``.
    """

    amplitudes: tuple[complex, ...]
    epsilon: float
    grid: int = DEFAULT_GRID

    def __post_init__(self):
        amps = tuple(complex(a) for a in self.amplitudes)
        object.__setattr__(self, "amplitudes", amps)
        if len(amps) < 1:
            raise ValidationError("amplitudes", "need at least the n=2 amplitude (n_max >= 2)")
        if not all(math.isfinite(a.real) and math.isfinite(a.imag) for a in amps):
            raise ValidationError("amplitudes", "must be finite")
        if not (math.isfinite(self.epsilon) and 0.0 <= self.epsilon < 1.0):
            raise ValidationError("epsilon", f"must lie in [0, 1), got {self.epsilon!r}")
        if not _is_power_of_two(self.grid):
            raise ValidationError("grid", f"must be a power of two, got {self.grid!r}")
        # j_rho e_rho carries harmonics up to n_max + 1; keep them unaliased
        if self.grid < 2 * (self.n_max + 2):
            raise ValidationError("grid", f"grid {self.grid} too coarse for n_max={self.n_max}")

    @classmethod
    def from_modes(
        cls,
        modes: Mapping[int, complex],
        epsilon: float,
        grid: int = DEFAULT_GRID,
        n_max: int | None = None,
    ) -> "TangentField":
        """Build from a sparse ``{n: j_{-n}}`` mapping (``n >= 2``)."""
        for n in modes:
            if int(n) != n or n < 2:
                raise ValidationError("modes", f"mode numbers must be integers >= 2, got {n!r}")
        top = max([2, *modes]) if n_max is None else n_max
        if modes and max(modes) > top:
            raise ValidationError("modes", f"mode {max(modes)} exceeds n_max={top}")
        amps = tuple(complex(modes.get(n, 0.0)) for n in range(2, top + 1))
        return cls(amps, epsilon, grid)

    @property
    def n_max(self) -> int:
        return len(self.amplitudes) + 1

    def amplitude(self, n: int) -> complex:
        """The independent amplitude ``j_{-n}``; zero outside ``2..n_max``."""
        if 2 <= n <= self.n_max:
            return self.amplitudes[n - 2]
        return 0j

    def modes(self) -> dict[int, complex]:
        return {n: a for n, a in enumerate(self.amplitudes, start=2) if a != 0}

    def with_amplitudes(self, amplitudes) -> "TangentField":
        return TangentField(tuple(amplitudes), self.epsilon, self.grid)

    @property
    def xi(self) -> np.ndarray:
        return grid_points(self.grid)


def grid_points(grid: int) -> np.ndarray:
    return TWO_PI * np.arange(grid) / grid


def complex_profile(
    field: TangentField,
    tau: float,
    frequency: Callable[[int], float] = dispersion,
    extra: Mapping[int, complex] | None = None,
) -> np.ndarray:
    """Samples of ``J(tau, xi) = j_rho + i j_z`` on the field's grid.

    ``extra`` adds raw Fourier coefficients ``{n: c_n}`` (any integer ``n``,
    no phase factor, no reflection partner); it exists to build deliberately
    invalid fields for constraint checks.
    """
    if not math.isfinite(tau):
        raise DomainError(f"tau must be finite, got {tau!r}")
    xi = field.xi
    out = np.zeros(field.grid, dtype=complex)
    for n in range(2, field.n_max + 1):
        a = field.amplitude(n)
        if a == 0:
            continue
        phase = n * xi + frequency(n) * tau
        out += a * np.exp(-1j * phase)
        out += mirror_amplitude(n, a) * np.exp(1j * phase)
    if extra:
        for n, c in sorted(extra.items()):
            out += complex(c) * np.exp(1j * n * xi)
    return out


def tangent_from_profile(profile: np.ndarray, epsilon: float) -> np.ndarray:
    """Assemble ``e_phi + eps (Re J e_rho + Im J e_z)`` as a ``(grid, 3)`` array."""
    e_rho, e_phi, e_z = local_basis(grid_points(len(profile)))
    return (
        e_phi
        + epsilon * profile.real[:, None] * e_rho
        + epsilon * profile.imag[:, None] * e_z
    )


def synthesize_tangent(
    field: TangentField,
    tau: float = 0.0,
    frequency: Callable[[int], float] = dispersion,
    extra: Mapping[int, complex] | None = None,
) -> np.ndarray:
    """Sample the tangent ``j(tau, xi)`` on the uniform grid, shape ``(grid, 3)``."""
    return tangent_from_profile(complex_profile(field, tau, frequency, extra), field.epsilon)


def profile_from_tangent(samples: np.ndarray, epsilon: float) -> np.ndarray:
    """Recover ``J = j_rho + i j_z`` from tangent samples (inverse of the assembly)."""
    samples = np.asarray(samples, dtype=float)
    if epsilon == 0:
        return np.zeros(len(samples), dtype=complex)
    e_rho, _, e_z = local_basis(grid_points(len(samples)))
    j_rho = np.einsum("ij,ij->i", samples, e_rho)
    j_z = np.einsum("ij,ij->i", samples, e_z)
    return (j_rho + 1j * j_z) / epsilon


def project_amplitudes(
    samples: np.ndarray, epsilon: float, n_max: int, tau: float = 0.0
) -> tuple[complex, ...]:
    """Recover ``j_{-n}`` (``n = 2..n_max``) from tangent samples taken at ``tau``."""
    profile = profile_from_tangent(samples, epsilon)
    grid = len(profile)
    coeffs = np.fft.fft(profile) / grid
    return tuple(
        complex(coeffs[(-n) % grid] * np.exp(1j * dispersion(n) * tau)) for n in range(2, n_max + 1)
    )


def closure_defect(samples: np.ndarray) -> float:
    """Norm of the trapezoid estimate of ``integral_0^{2 pi} j dxi``; zero iff the curve closes."""
    samples = np.asarray(samples, dtype=float)
    h = TWO_PI / len(samples)
    return float(np.linalg.norm(h * samples.sum(axis=0)))


@dataclass(frozen=True)
class FilamentCurve:
    q: np.ndarray
    R: float
    xi: np.ndarray
    points: np.ndarray
    closure_defect: float
    tangent: np.ndarray = field(repr=False)

    def at(self, xi) -> np.ndarray:
        """Curve position at arbitrary (off-node) parameters."""
        return evaluate_curve(self.q, self.R, self.tangent, xi)


def _cumulative_trapezoid(samples: np.ndarray) -> np.ndarray:
    """``integral_0^{xi_i} j`` at every node, composite trapezoid."""
    h = TWO_PI / len(samples)
    panels = 0.5 * h * (samples[:-1] + samples[1:])
    out = np.zeros_like(samples)
    np.cumsum(panels, axis=0, out=out[1:])
    return out


def reconstruct_curve(q, R: float, samples: np.ndarray, tol: float = CLOSURE_TOL) -> FilamentCurve:
    """Integrate the tangent against the staircase kernel at every grid node.

    For ``xi`` in ``[0, 2 pi)`` the kernel ``[xi - eta]`` is 0 for
    ``eta <= xi`` and -1 beyond, so

        r(xi) = q + R * (integral_0^xi j - integral_0^{2 pi} j).

    Both pieces use the trapezoid rule with the kernel jump placed on a
    node, which keeps the scheme second order in the grid spacing.
    """
    samples = np.asarray(samples, dtype=float)
    q = np.asarray(q, dtype=float).reshape(3)
    defect = closure_defect(samples)
    if defect > tol:
        raise ConstraintError("tangent field does not close", defect)
    h = TWO_PI / len(samples)
    total = h * samples.sum(axis=0)
    points = q + R * (_cumulative_trapezoid(samples) - total)
    return FilamentCurve(q, float(R), grid_points(len(samples)), points, defect, samples)


def _interpolate(samples: np.ndarray, x: float) -> np.ndarray:
    grid = len(samples)
    coeffs = np.fft.fft(samples, axis=0) / grid
    freqs = np.fft.fftfreq(grid, d=1.0 / grid)
    if grid % 2 == 0:
        # split the Nyquist term symmetrically so the interpolant is real
        nyq = grid // 2
        basis = np.exp(1j * freqs * x)
        basis[nyq] = math.cos(nyq * x)
        return (coeffs * basis[:, None]).sum(axis=0).real
    return (coeffs * np.exp(1j * freqs * x)[:, None]).sum(axis=0).real


def evaluate_curve(q, R: float, samples: np.ndarray, xi) -> np.ndarray:
    """Curve position at arbitrary ``xi`` (not limited to one period).

    The tangent is trigonometrically interpolated to ``xi`` and the partial
    panel is closed with the trapezoid rule, so node values agree exactly
    with :func:`reconstruct_curve`.
    """
    samples = np.asarray(samples, dtype=float)
    q = np.asarray(q, dtype=float).reshape(3)
    grid = len(samples)
    h = TWO_PI / grid
    total = h * samples.sum(axis=0)
    cumulative = _cumulative_trapezoid(samples)
    scalar = np.ndim(xi) == 0
    out = []
    for value in np.atleast_1d(np.asarray(xi, dtype=float)):
        turns = staircase_kernel(value)
        x = value - TWO_PI * turns
        i = min(int(x // h), grid - 1)
        dx = x - i * h
        if dx == 0.0:
            partial = cumulative[i]
        else:
            partial = cumulative[i] + 0.5 * dx * (samples[i] + _interpolate(samples, x))
        out.append(q + R * ((turns - 1) * total + partial))
    result = np.array(out)
    return result[0] if scalar else result


def write_curve_csv(fh: TextIO, curve: FilamentCurve) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["xi", "x", "y", "z"])
    for xi, p in zip(curve.xi, curve.points):
        writer.writerow([f"{xi:.16e}", *(f"{v:.16e}" for v in p)])


def write_tangent_csv(fh: TextIO, samples: np.ndarray) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["xi", "jx", "jy", "jz"])
    for xi, j in zip(grid_points(len(samples)), samples):
        writer.writerow([f"{xi:.16e}", *(f"{v:.16e}" for v in j)])
