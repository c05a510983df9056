"""Acceptance criteria, one test per criterion at the stated tolerances."""

import math
import time

import numpy as np
import pytest

from bellviol.bell_ops import (
    TAU_MATMUL_PER_DIM,
    BellSpec,
    MeasurementSettings,
    all_patterns,
    bell3_squared_closed_form,
    bsq_eigenvalue_for_pattern,
    build_bell3,
    build_bellN,
)
from bellviol.correlation import correlation_closed, correlation_direct, product_correlation, starred_cos_identity
from bellviol.linalg_core import eigh, eigvalsh
from bellviol.optimize import optimize_violation
from bellviol.states import PureState, check_max_violation_form, ghz_state, product_state
from bellviol.verify import (
    extremum_check,
    ghz_theorem_check,
    lhv_max,
    random_settings,
    random_spec,
)
from test_bell_ops import random_direction_settings

HALF_PI = math.pi / 2
TARGET = 2 * math.sqrt(2 + math.sqrt(2))


def criterion(number, title):
    return pytest.mark.acceptance(number=number, title=title)


@criterion(1, "example settings give max|lambda| = 2(2+sqrt2)^(1/2)")
def test_c01_example_reproduction():
    t0 = time.perf_counter()
    s = MeasurementSettings((0.0, 0.0, 0.0), (HALF_PI, HALF_PI, math.pi / 4))
    value = float(np.max(np.abs(eigvalsh(build_bell3(s)))))
    elapsed = time.perf_counter() - t0
    assert abs(value - TARGET) <= 1e-9
    assert elapsed < 1.0


@criterion(2, "right-angle settings give +-4 with the GHZ state at -4")
@pytest.mark.parametrize("phi", [(0.0, 0.0, 0.0), (0.4, -1.1, 2.3)])
def test_c02_maximal_violation(phi):
    s = MeasurementSettings.from_theta([HALF_PI] * 3, phi)
    w, v = eigh(build_bell3(s))
    assert abs(w[0] + 4) <= 1e-9 and abs(w[-1] - 4) <= 1e-9
    got = PureState.from_vector(v[:, 0])
    assert got.equal_up_to_phase(ghz_state((1, 1, 1), s.phi), tol=1e-8)


@criterion(3, "closed-form B^2 and its pattern spectrum")
def test_c03_closed_form_square():
    rng = np.random.default_rng(2024)
    planar = [random_settings(3, rng) for _ in range(200)]
    general = [random_direction_settings(rng) for _ in range(50)]
    for s in planar + general:
        b = build_bell3(s)
        b2 = b @ b
        assert np.max(np.abs(b2 - bell3_squared_closed_form(s))) <= TAU_MATMUL_PER_DIM * 8
        mu = eigvalsh(b2)
        formula = np.sort([bsq_eigenvalue_for_pattern(s, z) for z in all_patterns(3)])
        np.testing.assert_allclose(mu, formula, atol=1e-8)
        # each value appears for both z and -z
        pairs = sorted(bsq_eigenvalue_for_pattern(s, z) for z in all_patterns(3) if z[0] == 1)
        np.testing.assert_allclose(formula, np.repeat(pairs, 2), atol=1e-12)


@criterion(4, "local hidden variable maximum is 2, a factor 2 below the quantum 4")
def test_c04_lhv_bound():
    rng = np.random.default_rng(4)
    for k in range(100):
        assert lhv_max(random_spec(3 + k % 3, rng))[0] == 2.0
    lhv, _ = lhv_max(BellSpec(MeasurementSettings.from_theta([HALF_PI] * 3)))
    quantum = float(np.max(np.abs(eigvalsh(build_bell3(MeasurementSettings.from_theta([HALF_PI] * 3))))))
    assert abs(quantum / lhv - 2.0) <= 1e-9


@criterion(5, "GHZ operator identity holds for 100 random phase triples")
def test_c05_ghz_theorem():
    rng = np.random.default_rng(5)
    phases = [(0.0, 0.0, 0.0)] + [tuple(rng.uniform(-math.pi, math.pi, 3)) for _ in range(99)]
    for p in phases:
        rep = ghz_theorem_check(p, tol=1e-12)
        assert rep.passed, rep.to_dict()


@criterion(6, "2|alpha beta| h(phi) peaks at (2+sqrt2)^(1/2), alpha=beta, phi=-pi/8 mod pi")
def test_c06_extremum():
    rep = extremum_check(value_tol=1e-9, location_tol=1e-6)
    assert rep.passed, rep.to_dict()


@criterion(7, "closed and direct correlations agree; |P| <= 1; starred identity")
def test_c07_correlation_equivalence():
    rng = np.random.default_rng(7)
    for n in (2, 3, 4, 5):
        for _ in range(100):
            vec = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
            psi = PureState.from_vector(vec, normalize=True)
            angles = rng.uniform(-math.pi, math.pi, n)
            d = correlation_direct(psi, angles)
            assert abs(correlation_closed(psi, angles) - d) <= 1e-8
            assert abs(d) <= 1 + 1e-12
    for k in range(100):
        lhs, rhs = starred_cos_identity(rng.uniform(-math.pi, math.pi, 1 + k % 8))
        assert abs(lhs - rhs) <= 1e-12


@criterion(8, "product states factorize and a0 <= 2^-N with equality iff balanced")
def test_c08_product_states():
    r = 1 / math.sqrt(2)
    rng = np.random.default_rng(8)
    for n in (1, 2, 3, 5):
        balanced = product_state([(r, r * np.exp(1j * x)) for x in rng.uniform(-3, 3, n)])
        assert abs(balanced.a0 - 2.0**-n) <= 1e-15
        edge = product_state([(1, 0)] + [(r, r)] * (n - 1))
        assert edge.a0 == 0.0
    for _ in range(50):
        n = int(rng.integers(1, 6))
        mix = rng.uniform(0, math.pi / 2, n)
        ph = rng.uniform(-math.pi, math.pi, (n, 2))
        ps = product_state([(math.cos(a) * np.exp(1j * p), math.sin(a) * np.exp(1j * q)) for a, (p, q) in zip(mix, ph)])
        angles = rng.uniform(-math.pi, math.pi, n)
        assert abs(product_correlation(ps, angles) - correlation_direct(ps.ket(), angles)) <= 1e-8
        assert ps.a0 <= 2.0**-n
        is_balanced = np.allclose(mix, math.pi / 4, atol=1e-12)
        assert (abs(ps.a0 - 2.0**-n) <= 1e-15) == is_balanced


@criterion(9, "optimizer reaches 4 for N = 3, 4, 5 with a maximal-form eigenvector")
@pytest.mark.parametrize("n", [3, 4, 5])
def test_c09_optimizer(n):
    t0 = time.perf_counter()
    res = optimize_violation(n, seed=0)
    assert time.perf_counter() - t0 < 60
    assert res.value >= 4 - 1e-6
    form = check_max_violation_form(res.state, res.spec.settings.phi, tol=1e-6)
    assert form.passed
    assert form.max_magnitude_residual <= 1e-6 and form.max_phase_residual <= 1e-6


@criterion(10, "spectra of B and B^2 stay in [-4, 4] and [0, 16] for N = 2..8")
@pytest.mark.parametrize("n", range(2, 9))
def test_c10_spectrum_bounds(n):
    rng = np.random.default_rng(10 + n)
    for _ in range(50):
        b = build_bellN(random_spec(n, rng))
        w = eigvalsh(b)
        assert w[0] >= -4 - 1e-9 and w[-1] <= 4 + 1e-9
        mu = eigvalsh(b @ b)
        assert mu[0] >= -1e-9 and mu[-1] <= 16 + 1e-9
