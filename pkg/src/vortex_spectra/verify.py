"""Cross-module invariant checks run by ``vortex-spectra verify``.

Every check reports what it measured against a fixed bound. The bounds are
the acceptance tolerances of the library, so a passing report means the
numerical pipeline is intact on the given configuration.
"""

from __future__ import annotations

import math
import random
import warnings
from contextlib import nullcontext
from dataclasses import dataclass

import numpy as np

from . import bessel
from .config import RunConfig, default_config
from .constants import PhysicsWarning, PipeDomain, derive_scales
from .dynamics import (
    PhaseState,
    evolve_closed,
    evolve_numeric,
    hamiltonian,
    linearized_residual,
    momentum_from_filament,
    spin_chain_residual,
)
from .filament import TangentField, closure_defect, reconstruct_curve, synthesize_tangent
from .modes import dispersion, frequency_fault
from .spectrum import (
    ExcitationState,
    circulation_gap,
    energy_conditional,
    energy_real,
    epsilon_net,
    gamma_bounds,
    time_rescale_factor,
)

SUITES = ("bessel", "filament", "dynamics", "spectrum")


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    measured: float
    bound: str
    passed: bool

    def as_dict(self) -> dict:
        return {"suite": self.suite, "name": self.name, "measured": self.measured,
                "bound": self.bound, "pass": self.passed}


def _below(suite, name, measured, bound):
    return Check(suite, name, float(measured), f"< {bound:g}", bool(measured < bound))


def _between(suite, name, measured, lo, hi):
    return Check(suite, name, float(measured), f"in ({lo:g}, {hi:g})", bool(lo < measured < hi))


def bessel_checks(k_max: int = 10, m_max: int = 100) -> list[Check]:
    s = "bessel"
    out = [_below(s, "first_zero_J0", abs(bessel.bessel_zero(0, 1) - 2.404825557695773), 1e-11)]
    bad_bracket = 0
    bad_interlace = 0
    for k in range(k_max + 1):
        for m in range(1, m_max + 1):
            z = bessel.bessel_zero(k, m)
            if not bessel.bessel_j(k, z - 1e-6) * bessel.bessel_j(k, z + 1e-6) < 0:
                bad_bracket += 1
            if k < k_max and m < m_max:
                if not z < bessel.bessel_zero(k + 1, m) < bessel.bessel_zero(k, m + 1):
                    bad_interlace += 1
    out.append(Check(s, "zero_bracketing_failures", bad_bracket, "== 0", bad_bracket == 0))
    out.append(Check(s, "interlacing_failures", bad_interlace, "== 0", bad_interlace == 0))
    worst = max(abs(bessel.bessel_zero(0, m) - bessel.mcmahon_zero(0, m)) for m in range(10, m_max + 1))
    out.append(_below(s, "mcmahon_gap_m_ge_10", worst, 0.005))
    return out


def _ring_error(grid: int) -> float:
    field = TangentField.from_modes({}, 0.0, grid=grid)
    curve = reconstruct_curve((0.0, 0.0, 0.0), 1.0, synthesize_tangent(field))
    exact = np.stack([np.cos(curve.xi) - 1.0, np.sin(curve.xi), np.zeros(grid)], axis=1)
    return float(np.abs(curve.points - exact).max())


def filament_checks(epsilon: float = 0.05) -> list[Check]:
    s = "filament"
    rng = np.random.default_rng(7)
    amps = (rng.normal(size=7) + 1j * rng.normal(size=7)) * 0.05
    field = TangentField(tuple(amps), epsilon, 256)
    out = [_below(s, "closure_defect_valid_field", closure_defect(synthesize_tangent(field, 0.3)), 1e-12)]
    e1, e2 = _ring_error(1024), _ring_error(2048)
    out.append(_below(s, "ring_reconstruction_error_1024", e1, 1e-3))
    out.append(_between(s, "ring_refinement_ratio", e1 / e2, 3.0, 5.0))
    return out


def dynamics_checks(config: RunConfig) -> list[Check]:
    s = "dynamics"
    c = config.constants
    scales = derive_scales(c)
    state = PhaseState.from_modes((0, 0, 0), (0.3 * c.m0 * c.v0, 0, 0), {2: 0.1, 3: 0.05 - 0.02j, 5: 0.01j})
    h0 = hamiltonian(state, c, scales)
    moduli0 = np.abs(state.amplitude_array())
    occupied = moduli0 > 0
    evolved = state
    for _ in range(10_000):
        evolved = evolve_closed(evolved, 0.0137 * scales.t0, scales, c.m0)
    out = [
        _below(s, "conservation.hamiltonian", abs(hamiltonian(evolved, c, scales) - h0) / h0, 1e-12),
        _below(s, "conservation.amplitude_modulus",
               float(np.max(np.abs(np.abs(evolved.amplitude_array()) - moduli0)[occupied] / moduli0[occupied])),
               1e-12),
    ]
    # the period implied by the energy function must close the orbit
    single = PhaseState.from_modes((0, 0, 0), (0, 0, 0), {2: 0.1})
    period = 2.0 * math.pi * scales.t0 / dispersion(2)
    back = evolve_closed(single, period, scales, c.m0)
    out.append(_below(s, "conservation.period_recurrence",
                      abs(back.amplitudes[0] - single.amplitudes[0]), 1e-10))

    def rk_error(substeps):
        a = evolve_numeric(single, scales.t0, substeps, scales, c.m0).amplitudes[0]
        b = evolve_closed(single, scales.t0, scales, c.m0).amplitudes[0]
        return abs(a - b)

    out.append(_between(s, "rk4_order_ratio", rk_error(50) / rk_error(100), 14.0, 18.0))

    grid = 512
    p_ring = momentum_from_filament(TangentField.from_modes({}, 0.0, grid=grid), 1.0, 1.0, 1.0)
    out.append(_below(s, "momentum_ring_relative", float(np.linalg.norm(p_ring - [0, 0, math.pi]) / math.pi), 1e-3))
    p_half = momentum_from_filament(TangentField.from_modes({}, 0.0, grid=grid // 2), 1.0, 1.0, 1.0)
    out.append(_between(s, "momentum_refinement_ratio",
                        abs(p_half[2] - math.pi) / abs(p_ring[2] - math.pi), 3.0, 5.0))

    lin = linearized_residual(TangentField.from_modes({2: 0.1}, 0.01, grid=64), 0.3, 1e-5)
    out.append(_below(s, "linearized_residual", lin, 1e-8))
    r1 = spin_chain_residual(TangentField.from_modes({2: 0.1}, 0.02, grid=64), 0.3)
    r2 = spin_chain_residual(TangentField.from_modes({2: 0.1}, 0.01, grid=64), 0.3)
    out.append(_between(s, "spin_chain_eps2_ratio", r1 / r2, 3.5, 4.5))
    return out


def spectrum_checks(config: RunConfig, samples: int = 100) -> list[Check]:
    s = "spectrum"
    c, d = config.constants, config.domain
    scales = derive_scales(c)

    def rel_dev(L):
        dom = PipeDomain(d.R1, L * d.R1, d.R)
        gap = circulation_gap(1, 1, 0, c, dom)
        return abs(gap.exact - gap.leading) / gap.leading

    out = [_between(s, "gap_L_doubling_ratio", rel_dev(100) / rel_dev(200), 3.5, 4.5)]

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", PhysicsWarning)
        lo, hi = gamma_bounds(c, d, scales)
    rng = random.Random(2024)
    worst = 0.0
    for _ in range(samples):
        gamma = rng.uniform(lo, hi)
        exc = ExcitationState(rng.randint(2, 12), rng.randint(0, 6))
        real = energy_real(gamma, exc, c, scales, d, check_bounds=False)
        rescaled = energy_conditional(gamma, exc, c, scales, d) * time_rescale_factor(gamma, c, scales, d)
        worst = max(worst, abs(real - rescaled) / abs(rescaled))
    out.append(_below(s, "cross_form_energy_identity", worst, 1e-12))

    eps_zeta = [epsilon_net(1, m, 0, d) * bessel.bessel_zero(0, m) for m in range(1, 51)]
    spread = (max(eps_zeta) - min(eps_zeta)) / eps_zeta[0]
    out.append(_below(s, "epsilon_net_m_independence", spread, 1e-12))

    g = 0.25 * (lo + hi)
    vac = ExcitationState(2, 0)
    cubic = energy_real(2 * g, vac, c, scales, d, check_bounds=False) / energy_real(g, vac, c, scales, d, check_bounds=False)
    out.append(_below(s, "cubic_scaling_deviation", abs(cubic - 8.0), 1e-12))
    return out


def run_checks(config: RunConfig | None = None, suites=SUITES, fault: float = 0.0) -> list[Check]:
    """Run the selected suites; ``fault`` shifts the evolution frequencies to prove sensitivity."""
    config = config or default_config()
    unknown = set(suites) - set(SUITES)
    if unknown:
        raise ValueError(f"unknown suite(s): {sorted(unknown)}")
    guard = frequency_fault(fault) if fault else nullcontext()
    results: list[Check] = []
    with guard:
        if "bessel" in suites:
            results += bessel_checks()
        if "filament" in suites:
            results += filament_checks()
        if "dynamics" in suites:
            results += dynamics_checks(config)
        if "spectrum" in suites:
            results += spectrum_checks(config)
    return results
