"""Mode frequencies and the amplitude reflection relation of the perturbed ring."""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass

from .errors import DomainError

_frequency_fault = 0.0


def dispersion(n: int) -> float:
    """Frequency ``n * sqrt(n**2 - 1)`` of mode ``n`` in units of ``1/t0``."""
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise DomainError(f"mode number must be an integer >= 1, got {n!r}")
    n = int(n)
    return n * math.sqrt(n * n - 1)


def evolution_frequency(n: int) -> float:
    """Frequency used by time evolution and real-time energies.

    Identical to :func:`dispersion` unless a fault is injected with
    :func:`frequency_fault` (used by the verification suite to prove its
    checks are sensitive).
    """
    return dispersion(n) + _frequency_fault


@contextmanager
def frequency_fault(offset: float):
    global _frequency_fault
    previous = _frequency_fault
    _frequency_fault = float(offset)
    try:
        yield
    finally:
        _frequency_fault = previous


def reflection_coefficient(n: int) -> float:
    """``2 (n sqrt(n^2-1) - n^2 + 1/2)``; negative and ~ ``-1/(4 n^2)`` for large n."""
    if isinstance(n, bool) or int(n) != n or n < 2:
        raise DomainError(f"reflection relation needs n >= 2, got {n!r}")
    n = int(n)
    # n sqrt(n^2-1) - n^2 = -n / (n + sqrt(n^2-1)) avoids cancellation
    return 2.0 * (0.5 - n / (n + math.sqrt(n * n - 1)))


def mirror_amplitude(n: int, j_minus_n: complex) -> complex:
    """Positive-index amplitude ``j_n`` tied to the independent ``j_{-n}``."""
    return complex(j_minus_n).conjugate() / reflection_coefficient(n)


@dataclass(frozen=True)
class DispersionLaw:
    """Tabulated frequencies ``omega_n`` for ``n = 1..n_max``."""

    omega: tuple[float, ...]

    @classmethod
    def build(cls, n_max: int) -> "DispersionLaw":
        if n_max < 1:
            raise DomainError(f"n_max must be >= 1, got {n_max}")
        return cls(tuple(dispersion(n) for n in range(1, n_max + 1)))

    @property
    def n_max(self) -> int:
        return len(self.omega)

    def __getitem__(self, n: int) -> float:
        if n < 1 or n > len(self.omega):
            raise DomainError(f"mode {n} outside 1..{len(self.omega)}")
        return self.omega[n - 1]
