"""Integer-order Bessel functions of the first kind and their positive zeros.

Three evaluation paths are used for ``J_k(x)``:

* the ascending power series for small arguments,
* Miller's backward recurrence, normalised with ``J_0 + 2 sum J_2j = 1``,
  for the intermediate range,
* the Hankel large-argument expansion once ``x`` is large compared with
  ``k**2``.

Zeros are bracketed, bisected to ``1e-13`` and polished with one Newton
step. Per-order zero lists are cached; the cache only ever grows and every
entry is a pure function of ``(k, m)``, so concurrent fills agree bitwise.
"""

from __future__ import annotations

import csv
import math
import threading
from dataclasses import dataclass
from typing import Iterable, TextIO

from .errors import DomainError, IndexOutOfRange

SERIES_LIMIT = 8.0
BISECTION_TOL = 1e-13


def _check_args(k, x):
    if isinstance(k, bool) or int(k) != k or k < 0:
        raise DomainError(f"order k must be a non-negative integer, got {k!r}")
    if not math.isfinite(x) or x < 0:
        raise DomainError(f"argument x must be finite and non-negative, got {x!r}")
    return int(k), float(x)


def _series(k: int, x: float) -> float:
    half = 0.5 * x
    term = 1.0
    for i in range(1, k + 1):
        term *= half / i
    if term == 0.0:
        return 0.0
    q = -half * half
    terms = [term]
    j = 0
    while True:
        j += 1
        term *= q / (j * (j + k))
        terms.append(term)
        if j > half and abs(term) < 1e-18 * abs(terms[0]):
            break
        if abs(term) < 1e-300:
            break
    return math.fsum(terms)


def _hankel_threshold(k: int) -> float:
    return max(25.0, 2.0 * k * k)


def _hankel(k: int, x: float) -> float:
    mu = 4.0 * k * k
    inv8x = 1.0 / (8.0 * x)
    p_terms = [1.0]
    q_terms = []
    a = 1.0
    prev = math.inf
    j = 0
    while True:
        j += 1
        a *= (mu - (2 * j - 1) ** 2) * inv8x / j
        mag = abs(a)
        if mag >= prev or mag < 1e-18:
            break
        prev = mag
        # a_j x^-j alternates between Q (odd j) and P (even j) with sign (-1)^floor(j/2)
        sign = -1.0 if (j // 2) % 2 else 1.0
        if j % 2:
            q_terms.append(sign * a)
        else:
            p_terms.append(sign * a)
    p = math.fsum(p_terms)
    q = math.fsum(q_terms)
    chi = x - (0.5 * k + 0.25) * math.pi
    return math.sqrt(2.0 / (math.pi * x)) * (p * math.cos(chi) - q * math.sin(chi))


def _miller(k: int, x: float) -> float:
    top = max(k, x)
    start = int(top + 30 + 2.0 * math.sqrt(40.0 * top))
    start += start % 2
    two_over_x = 2.0 / x
    j_next = 0.0
    j_cur = 1e-30
    result = 0.0
    norm = []
    for n in range(start, 0, -1):
        j_prev = n * two_over_x * j_cur - j_next
        j_next, j_cur = j_cur, j_prev
        # j_cur now holds the unnormalised J_{n-1}
        if n - 1 == k:
            result = j_cur
        if (n - 1) % 2 == 0:
            norm.append(j_cur if n == 1 else 2.0 * j_cur)
        if abs(j_cur) > 1e250:
            j_cur *= 1e-250
            j_next *= 1e-250
            result *= 1e-250
            norm = [v * 1e-250 for v in norm]
    return result / math.fsum(norm)


def bessel_j(k: int, x: float) -> float:
    """Bessel function of the first kind ``J_k(x)`` for integer ``k >= 0`` and ``x >= 0``."""
    k, x = _check_args(k, x)
    if x == 0.0:
        return 1.0 if k == 0 else 0.0
    if x <= SERIES_LIMIT:
        return _series(k, x)
    if x >= _hankel_threshold(k):
        return _hankel(k, x)
    return _miller(k, x)


def bessel_j_prime(k: int, x: float) -> float:
    """Derivative ``J_k'(x) = (J_{k-1}(x) - J_{k+1}(x)) / 2``."""
    k, x = _check_args(k, x)
    lower = -bessel_j(1, x) if k == 0 else bessel_j(k - 1, x)
    return 0.5 * (lower - bessel_j(k + 1, x))


def mcmahon_zero(k: int, m: int) -> float:
    """Leading-order large-``m`` estimate of the ``m``-th positive zero of ``J_k``."""
    return -math.pi / 4.0 + math.pi * k / 2.0 + math.pi * m


def _bisect(k: int, a: float, b: float, fa: float) -> tuple[float, float, float]:
    while b - a > BISECTION_TOL:
        mid = 0.5 * (a + b)
        if mid <= a or mid >= b:
            break
        fm = bessel_j(k, mid)
        if fm == 0.0:
            return mid, mid, mid
        if (fm > 0.0) == (fa > 0.0):
            a, fa = mid, fm
        else:
            b = mid
    return 0.5 * (a + b), a, b


def _polish(k: int, z: float, a: float, b: float) -> float:
    deriv = bessel_j_prime(k, z)
    if deriv == 0.0:
        return z
    z_new = z - bessel_j(k, z) / deriv
    # Newton only polishes; it may not leave the bisection bracket
    if a - BISECTION_TOL <= z_new <= b + BISECTION_TOL:
        return z_new
    return z


def _next_zero(k: int, found: list[float]) -> float:
    if found:
        lo = found[-1] + 2.5
        guess = found[-1] + (found[-1] - found[-2] if len(found) > 1 else math.pi)
    else:
        lo = float(k)
        guess = None
    if guess is not None:
        a, b = guess - 0.25, guess + 0.25
        if a > lo:
            fa, fb = bessel_j(k, a), bessel_j(k, b)
            if fa * fb < 0.0:
                return _refine(k, a, b, fa)
    a = lo
    fa = bessel_j(k, a)
    while True:
        b = a + 0.5
        fb = bessel_j(k, b)
        if fb == 0.0:
            return b
        if fa * fb < 0.0:
            return _refine(k, a, b, fa)
        a, fa = b, fb


def _refine(k, a, b, fa):
    z, lo, hi = _bisect(k, a, b, fa)
    if lo == hi:
        return z
    return _polish(k, z, lo, hi)


_ZERO_CACHE: dict[int, list[float]] = {}
_CACHE_LOCK = threading.Lock()


def _zeros_upto(k: int, m: int) -> list[float]:
    with _CACHE_LOCK:
        known = list(_ZERO_CACHE.get(k, ()))
    if len(known) >= m:
        return known
    while len(known) < m:
        known.append(_next_zero(k, known))
    with _CACHE_LOCK:
        current = _ZERO_CACHE.get(k, [])
        if len(known) > len(current):
            _ZERO_CACHE[k] = known
        return list(_ZERO_CACHE[k])


def bessel_zero(k: int, m: int) -> float:
    """The ``m``-th positive zero of ``J_k`` (``m >= 1``), accurate to about 1e-13."""
    if isinstance(k, bool) or int(k) != k or k < 0:
        raise DomainError(f"order k must be a non-negative integer, got {k!r}")
    if isinstance(m, bool) or int(m) != m or m < 1:
        raise IndexOutOfRange(f"zero index m must be >= 1, got {m!r}")
    return _zeros_upto(int(k), int(m))[int(m) - 1]


def clear_zero_cache() -> None:
    with _CACHE_LOCK:
        _ZERO_CACHE.clear()


@dataclass(frozen=True)
class BesselZeroTable:
    """The first ``len(zeros)`` positive zeros of ``J_order``."""

    order: int
    zeros: tuple[float, ...]

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.zeros, self.zeros[1:])):
            raise ValueError("zeros must be strictly increasing")

    @classmethod
    def compute(cls, order: int, count: int) -> "BesselZeroTable":
        if count < 1:
            raise IndexOutOfRange(f"count must be >= 1, got {count}")
        bessel_zero(order, count)
        return cls(order, tuple(_zeros_upto(order, count)[:count]))

    def __len__(self):
        return len(self.zeros)

    def __getitem__(self, m: int) -> float:
        """One-based access, matching the zero numbering."""
        if m < 1 or m > len(self.zeros):
            raise IndexOutOfRange(f"zero index {m} outside 1..{len(self.zeros)}")
        return self.zeros[m - 1]


def write_zero_csv(fh: TextIO, tables: Iterable[BesselZeroTable]) -> None:
    """Write ``(k, m, zeta)`` rows ordered by ``(k, m)`` with 17 significant digits."""
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["k", "m", "zeta"])
    for table in sorted(tables, key=lambda t: t.order):
        for m, z in enumerate(table.zeros, start=1):
            writer.writerow([table.order, m, f"{z:.16e}"])


def read_zero_csv(fh: TextIO) -> dict[int, BesselZeroTable]:
    reader = csv.DictReader(fh)
    rows: dict[int, list[tuple[int, float]]] = {}
    for row in reader:
        rows.setdefault(int(row["k"]), []).append((int(row["m"]), float(row["zeta"])))
    tables = {}
    for k, entries in sorted(rows.items()):
        entries.sort()
        if [m for m, _ in entries] != list(range(1, len(entries) + 1)):
            raise ValueError(f"zero table for order {k} is not contiguous from m=1")
        tables[k] = BesselZeroTable(k, tuple(z for _, z in entries))
    return tables
