"""Circulation and energy spectra."""

import csv
import io
import json
import math
import random
import warnings
from pathlib import Path

import mpmath
import pytest

from vortex_spectra import (
    Cutoffs,
    DomainError,
    ExcitationState,
    ModelRegimeError,
    PhysicalConstants,
    PhysicsWarning,
    PipeDomain,
    ResourceError,
    circulation,
    circulation_gap,
    derive_scales,
    energy_conditional,
    energy_real,
    enumerate_spectrum,
    gamma_bounds,
    regge_trajectory,
)
from vortex_spectra.bessel import clear_zero_cache
from vortex_spectra.errors import IndexOutOfRange
from vortex_spectra.export import spectrum_json, svg_scatter, write_json, write_spectrum_csv
from vortex_spectra.spectrum import (
    circulation_from_gamma,
    epsilon_net,
    gamma_from_mode,
    gamma_value,
    time_rescale_factor,
    uniform_gamma_grid,
)

GOLDEN = Path(__file__).parent / "golden"
ZETA01 = 2.404825557695773
NAT = PhysicalConstants.natural()
NAT_SCALES = derive_scales(NAT)
UNIT_PIPE = PipeDomain(R1=1.0, L=10.0, R=1.0)


def test_circulation_natural_units():
    mode = circulation(1, 1, 0, NAT, UNIT_PIPE)
    expected = float(mpmath.sqrt((mpmath.pi / 10) ** 2 + mpmath.besseljzero(0, 1) ** 2) / mpmath.pi)
    assert mode.Gamma == pytest.approx(expected, rel=1e-13)
    assert mode.Gamma == pytest.approx(0.7719839680909969, rel=1e-13)


def test_circulation_long_pipe_limit():
    mode = circulation(1, 1, 0, NAT, PipeDomain(R1=1.0, L=1e6, R=1.0))
    assert mode.Gamma == pytest.approx(ZETA01 / math.pi, rel=1e-10)


def test_circulation_large_m():
    mode = circulation(1, 200, 0, NAT, UNIT_PIPE)
    assert mode.Gamma * 1.0 / 200 == pytest.approx(1.0, rel=0.01)


@pytest.mark.parametrize("n,m,k", [(0, 1, 0), (1, 0, 0), (1, 1, -1)])
def test_circulation_index_errors(n, m, k):
    with pytest.raises(IndexOutOfRange):
        circulation(n, m, k, NAT, UNIT_PIPE)


def test_circulation_monotone_in_each_index():
    d = PipeDomain(R1=1.0, L=50.0, R=0.5)
    for n in range(1, 5):
        for m in range(1, 5):
            for k in range(0, 4):
                g = circulation(n, m, k, NAT, d).Gamma
                assert g > 0
                assert circulation(n + 1, m, k, NAT, d).Gamma > g
                assert circulation(n, m + 1, k, NAT, d).Gamma > g
                assert circulation(n, m, k + 1, NAT, d).Gamma > g


def test_gap_leading_term():
    d = PipeDomain(R1=1.0, L=100.0, R=1.0)
    gap = circulation_gap(1, 1, 0, NAT, d)
    assert gap.leading == pytest.approx(math.pi / 2 * 3 / (ZETA01 * 1e4), rel=1e-13)
    leads = [circulation_gap(n, 1, 0, NAT, d).leading for n in range(1, 6)]
    assert all(b > a for a, b in zip(leads, leads[1:]))


def test_gap_exact_matches_difference():
    d = PipeDomain(R1=1.0, L=20.0, R=1.0)
    gap = circulation_gap(2, 1, 1, NAT, d)
    diff = circulation(3, 1, 1, NAT, d).Gamma - circulation(2, 1, 1, NAT, d).Gamma
    assert gap.exact == pytest.approx(diff, rel=1e-12)


def test_gap_relative_deviation_quarters():
    def dev(ratio):
        gap = circulation_gap(1, 1, 0, NAT, PipeDomain(R1=1.0, L=ratio, R=0.5))
        return abs(gap.exact - gap.leading) / gap.leading

    assert 3.5 < dev(100) / dev(200) < 4.5
    assert 3.5 < dev(200) / dev(400) < 4.5


def test_gamma_bounds():
    def consts(kmax):
        return PhysicalConstants(rho0=1.0, v0=1.0, m0=kmax, hbar=1.0)

    with warnings.catch_warnings():
        warnings.simplefilter("error")
        lo, hi = gamma_bounds(consts(100.0), PipeDomain(R1=1.0, L=100.0, R=0.5))
    assert lo == pytest.approx(ZETA01, abs=1e-12) and hi == pytest.approx(100.0)
    with pytest.warns(PhysicsWarning):
        gamma_bounds(consts(10.0), PipeDomain(R1=1.0, L=100.0, R=0.5))
    with pytest.raises(ModelRegimeError):
        gamma_bounds(consts(2.0), PipeDomain(R1=1.0, L=100.0, R=0.5))


def test_gamma_from_mode():
    mode = circulation(1, 1, 0, NAT, UNIT_PIPE)
    assert gamma_from_mode(mode, NAT, UNIT_PIPE) == pytest.approx(2.425259162843773, rel=1e-13)
    assert gamma_from_mode(mode, NAT, UNIT_PIPE) == pytest.approx(gamma_value(1, 1, 0, UNIT_PIPE), rel=1e-14)
    far = PipeDomain(R1=1.0, L=1e8, R=1.0)
    assert gamma_from_mode(circulation(1, 1, 0, NAT, far), NAT, far) == pytest.approx(ZETA01, rel=1e-14)
    for g in (2.5, 17.0, 311.0):
        assert gamma_from_mode(
            circulation(1, 1, 0, NAT, UNIT_PIPE).__class__(1, 1, 0, circulation_from_gamma(g, NAT, UNIT_PIPE)), NAT, UNIT_PIPE
        ) == pytest.approx(g, rel=1e-14)


def test_epsilon_net():
    d = PipeDomain(R1=1.0, L=100.0, R=0.5)
    assert epsilon_net(1, 1, 0, d) == pytest.approx(math.pi ** 2 / 2 * 3 / ZETA01 * 1e-4, rel=1e-13)
    half = PipeDomain(R1=1.0, L=50.0, R=0.5)
    assert epsilon_net(2, 3, 1, half) == pytest.approx(4 * epsilon_net(2, 3, 1, d), rel=1e-15)


def test_energy_conditional_terms():
    d = PipeDomain(R1=2.0, L=200.0, R=1.0)
    g = 3.1
    assert energy_conditional(g, ExcitationState(2, 0), NAT, NAT_SCALES, d) == pytest.approx(g * g / (2 * 4.0), rel=1e-15)
    lift = energy_conditional(g, ExcitationState(2, 1), NAT, NAT_SCALES, d) - energy_conditional(
        g, ExcitationState(2, 0), NAT, NAT_SCALES, d
    )
    assert lift == pytest.approx(2 * math.sqrt(3), rel=1e-14)


def test_finite_and_long_pipe_paths_agree():
    d = PipeDomain(R1=1.0, L=1e6, R=1.0)
    mode = circulation(1, 1, 0, NAT, d)
    exc = ExcitationState(3, 2)
    a = energy_conditional(mode, exc, NAT, NAT_SCALES, d)
    b = energy_conditional(gamma_from_mode(mode, NAT, d), exc, NAT, NAT_SCALES, d)
    assert a == pytest.approx(b, rel=1e-9)


def test_finite_length_converges_as_inverse_square():
    def gap(L):
        d = PipeDomain(R1=1.0, L=L, R=0.5)
        return circulation(2, 1, 0, NAT, d).Gamma - circulation_from_gamma(ZETA01, NAT, d)

    assert 3.9 < gap(100.0) / gap(200.0) < 4.1


def test_excitation_domain():
    with pytest.raises(DomainError):
        ExcitationState(1, 0)
    with pytest.raises(DomainError):
        ExcitationState(2, -1)


def test_energy_real_cubic_and_ordering(wide_domain):
    vac, one = ExcitationState(2, 0), ExcitationState(2, 1)
    for g in (3.0, 5.5, 12.0):
        e = energy_real(g, vac, NAT, NAT_SCALES, wide_domain)
        assert energy_real(2 * g, vac, NAT, NAT_SCALES, wide_domain) / e == pytest.approx(8.0, abs=1e-12)
        assert energy_real(g, one, NAT, NAT_SCALES, wide_domain) > e
    with pytest.raises(DomainError):
        energy_real(0.0, vac, NAT, NAT_SCALES, wide_domain)
    with pytest.warns(PhysicsWarning):
        energy_real(1.0, vac, NAT, NAT_SCALES, wide_domain)


@pytest.mark.parametrize(
    "constants,domain",
    [
        (PhysicalConstants.natural(), PipeDomain(R1=30.0, L=3000.0, R=1.0)),
        (PhysicalConstants(rho0=145.0, v0=238.0, m0=6.6e-27, hbar=1.0546e-34, alpha=0.3), PipeDomain(R1=1e-6, L=1e-4, R=2e-7)),
    ],
)
def test_cross_form_identity(constants, domain):
    scales = derive_scales(constants)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", PhysicsWarning)
        lo, hi = gamma_bounds(constants, domain, scales)
    rng = random.Random(11)
    for _ in range(100):
        g = rng.uniform(lo, hi)
        exc = ExcitationState(rng.randint(2, 20), rng.randint(0, 9))
        real = energy_real(g, exc, constants, scales, domain)
        rescaled = energy_conditional(g, exc, constants, scales, domain) * time_rescale_factor(g, constants, scales, domain)
        assert real == pytest.approx(rescaled, rel=1e-12)


def test_minimal_cutoffs_give_two_lines(wide_domain):
    spectrum = enumerate_spectrum(NAT, NAT_SCALES, wide_domain, Cutoffs())
    assert len(spectrum) == 2
    assert [(ln.excitation.ell, ln.excitation.s_ell) for ln in spectrum.lines] == [(2, 0), (2, 1)]


def test_line_count_and_budget(wide_domain):
    cut = Cutoffs(n_max=3, m_max=2, k_max_idx=2, ell_max=3, s_max=2)
    assert len(enumerate_spectrum(NAT, NAT_SCALES, wide_domain, cut)) == cut.line_count() == 3 * 2 * 2 * 7
    with pytest.raises(ResourceError):
        enumerate_spectrum(NAT, NAT_SCALES, wide_domain, cut, budget=10)
    with pytest.raises(DomainError):
        Cutoffs(n_max=0)


def test_enumeration_order_and_positivity(run_config):
    c = run_config
    spectrum = enumerate_spectrum(c.constants, derive_scales(c.constants), c.domain, c.cutoffs)
    keys = [ln.sort_key() for ln in spectrum.lines]
    assert keys == sorted(keys)
    assert all(ln.Gamma > 0 and ln.E_real > 0 for ln in spectrum.lines)
    for ln in spectrum.lines:
        factor = time_rescale_factor(ln.gamma, c.constants, derive_scales(c.constants), c.domain)
        assert ln.E_real == pytest.approx(ln.E_conditional * factor, rel=1e-12)


def test_spacings_follow_epsilon_net():
    def worst(L):
        d = PipeDomain(R1=1.0, L=L, R=0.5)
        s = enumerate_spectrum(NAT, NAT_SCALES, d, Cutoffs(n_max=4, m_max=3, k_max_idx=2))
        return max(r.relative_deviation for r in s.spacings)

    # the correction is second order in R1/L; about 10.6 (R1/L)^2 for n <= 4
    assert worst(100.0) < 20 * (1 / 100.0) ** 2
    assert 3.5 < worst(100.0) / worst(200.0) < 4.5


def test_epsilon_times_zero_is_m_independent():
    d = PipeDomain(R1=1.0, L=100.0, R=0.5)
    from vortex_spectra.bessel import bessel_zero

    values = [epsilon_net(2, m, 1, d) * bessel_zero(1, m) for m in range(1, 60)]
    assert (max(values) - min(values)) / values[0] < 1e-12


def test_enumeration_independent_of_workers(wide_domain):
    cut = Cutoffs(n_max=4, m_max=6, k_max_idx=5, ell_max=2, s_max=2)
    clear_zero_cache()
    serial = enumerate_spectrum(NAT, NAT_SCALES, wide_domain, cut, workers=1)
    clear_zero_cache()
    threaded = enumerate_spectrum(NAT, NAT_SCALES, wide_domain, cut, workers=4)
    assert serial.lines == threaded.lines


def test_trajectories(wide_domain):
    lo, hi = gamma_bounds(NAT, wide_domain, NAT_SCALES)
    grid = uniform_gamma_grid((lo, hi), 100)
    curves = {
        key: regge_trajectory(ExcitationState(*key), grid, NAT, NAT_SCALES, wide_domain)
        for key in [(2, 0), (2, 1), (3, 1)]
    }
    for pts in curves.values():
        assert all(b[1] > a[1] for a, b in zip(pts, pts[1:]))
    for (_, e0), (_, e1), (_, e3) in zip(curves[(2, 0)], curves[(2, 1)], curves[(3, 1)]):
        assert e0 < e1 < e3


def test_trajectory_clipping(wide_domain):
    with pytest.warns(PhysicsWarning):
        pts = regge_trajectory(ExcitationState(2, 0), [1.0, 3.0, 1e6], NAT, NAT_SCALES, wide_domain)
    assert [g for g, _ in pts] == [3.0]
    with pytest.raises(DomainError):
        regge_trajectory(ExcitationState(2, 0), [], NAT, NAT_SCALES, wide_domain)
    with pytest.raises(DomainError), warnings.catch_warnings():
        warnings.simplefilter("ignore")
        regge_trajectory(ExcitationState(2, 0), [1.0], NAT, NAT_SCALES, wide_domain)


def oracle_row(n, m, k, ell, s, constants, domain):
    """Re-evaluate one spectral line with 30-digit arithmetic and mpmath zeros."""
    mp = mpmath.mp
    mp.dps = 30
    c = constants
    zeta = mpmath.besseljzero(k, m)
    gamma = mpmath.sqrt((mpmath.pi * n * domain.R1 / domain.L) ** 2 + zeta ** 2)
    Gamma = c.hbar / (mpmath.pi * c.rho0 * domain.R ** 2 * domain.R1) * gamma
    omega = ell * mpmath.sqrt(ell * ell - 1)
    R0 = mpmath.cbrt(mpmath.mpf(c.m0) / c.rho0)
    t0 = R0 / c.v0
    kmax = mpmath.mpf(c.m0) * c.v0 / c.hbar
    e_cond = (mpmath.pi * c.rho0 * domain.R ** 2 * Gamma) ** 2 / (2 * c.m0) + c.hbar / t0 * omega * s
    pre = c.alpha * c.hbar ** 2 / (4 * mpmath.pi ** 2 * c.rho0 * domain.R ** 4 * domain.R1)
    e_real = pre * (R0 / (2 * domain.R1) * gamma ** 3 / (kmax * domain.R1) + gamma * omega * s)
    return [float(v) for v in (gamma, Gamma, e_cond, e_real)]


def test_golden_spectrum_is_reproduced(run_config):
    c = run_config
    buf = io.StringIO()
    write_spectrum_csv(buf, enumerate_spectrum(c.constants, derive_scales(c.constants), c.domain, c.cutoffs).lines)
    assert buf.getvalue() == (GOLDEN / "spectrum_natural.csv").read_text()


def test_golden_spectrum_matches_high_precision_oracle(run_config):
    c = run_config
    with open(GOLDEN / "spectrum_natural.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 150
    for row in rows:
        idx = [int(row[k]) for k in ("n", "m", "k", "ell", "s_ell")]
        expected = oracle_row(*idx, c.constants, c.domain)
        got = [float(row[k]) for k in ("gamma", "Gamma", "E_conditional", "E_real")]
        for g, e in zip(got, expected):
            assert g == pytest.approx(e, rel=1e-13)


def test_golden_trajectory(run_config):
    c = run_config
    scales = derive_scales(c.constants)
    with open(GOLDEN / "trajectory_natural_l2_s1.csv", newline="") as fh:
        rows = [(float(r["gamma"]), float(r["E_real"])) for r in csv.DictReader(fh)]
    exc = ExcitationState(2, 1)
    lo, hi = gamma_bounds(c.constants, c.domain, scales)
    assert rows == regge_trajectory(exc, uniform_gamma_grid((lo, hi), 50), c.constants, scales, c.domain)
    for g, e in rows:
        via_conditional = energy_conditional(g, exc, c.constants, scales, c.domain) * time_rescale_factor(
            g, c.constants, scales, c.domain
        )
        assert e == pytest.approx(via_conditional, rel=1e-12)


def test_json_export(run_config):
    c = run_config
    spectrum = enumerate_spectrum(c.constants, derive_scales(c.constants), c.domain, c.cutoffs)
    buf = io.StringIO()
    write_json(buf, spectrum_json(spectrum, c.constants, c.domain, "9.9"))
    doc = json.loads(buf.getvalue())
    assert doc["metadata"]["generated_by"] == "vortex-spectra 9.9"
    assert doc["metadata"]["cutoffs"]["n_max"] == 5
    assert doc["metadata"]["domain"] == {"R1": 30.0, "L": 3000.0, "R": 1.0}
    first = doc["lines"][0]
    assert first["E_real"] == spectrum.lines[0].E_real  # shortest repr round-trips exactly
    assert set(first) == {"n", "m", "k", "ell", "s_ell", "gamma", "Gamma", "E_conditional", "E_real"}


def test_svg_scatter_structure():
    svg = svg_scatter([("a", [(1.0, 2.0), (2.0, 3.0)]), ("b", [(1.5, 2.5)])])
    assert svg.count('class="marker"') == 3
    assert "polyline" not in svg and "<path" not in svg
    with pytest.raises(ValueError):
        svg_scatter([("a", [])])
