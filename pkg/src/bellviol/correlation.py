"""N-particle correlation functions for x-y plane spin measurements.

The direct route evaluates ``<psi| s(phi_1) x ... x s(phi_N) |psi>`` with dense
operators.  The closed forms only touch the pair amplitudes ``a_z, a_-z``.
"""

from __future__ import annotations

import itertools
import math
from typing import Sequence

import numpy as np

from .bell_ops import BellSpec, MeasurementSettings, pattern_pairs, row_operator
from .linalg_core import InvalidInputError, basis_index, expectation, flip_index
from .states import PairState, ProductState, PureState, pair_decomposition

TAU_IDENTITY = 1e-12


def _check_angles(psi: PureState, angles: Sequence[float]) -> np.ndarray:
    angles = np.asarray(angles, dtype=float)
    if angles.shape != (psi.n,):
        raise InvalidInputError(f"expected {psi.n} angles, got {angles.shape}")
    return angles


def correlation_direct(psi: PureState, angles: Sequence[float]) -> float:
    angles = _check_angles(psi, angles)
    return expectation(row_operator(angles), psi.amplitudes)


def correlation_closed(psi: PureState, angles: Sequence[float]) -> float:
    """2 sum*_z |a_z||a_-z| cos(phi_z - sum_i z_i phi_i), phi_z = theta_-z - theta_z."""
    angles = _check_angles(psi, angles)
    total = 0.0
    for z in pattern_pairs(psi.n):
        k = basis_index(z)
        a, b = psi.amplitudes[k], psi.amplitudes[flip_index(k, psi.n)]
        if a == 0 or b == 0:
            continue
        rel = float(np.angle(b) - np.angle(a))
        total += 2.0 * abs(a) * abs(b) * math.cos(rel - float(np.dot(z, angles)))
    return total


def bell_expectation_closed3(state: PairState, settings: MeasurementSettings) -> float:
    """Three-particle Bell expectation on ``alpha|z> + beta e^{i phi}|-z>``."""
    if settings.n != 3 or state.n != 3:
        raise InvalidInputError("three-particle expression")
    z1, z2, z3 = state.pattern
    p, q = settings.phi, settings.phi_prime
    ph = state.phase
    return 2.0 * state.alpha * state.beta * (
        math.cos(ph - z1 * p[0] - z2 * q[1] - z3 * q[2])
        + math.cos(ph - z1 * q[0] - z2 * p[1] - z3 * q[2])
        + math.cos(ph - z1 * q[0] - z2 * q[1] - z3 * p[2])
        - math.cos(ph - z1 * p[0] - z2 * p[1] - z3 * p[2])
    )


def bell_expectation_closedN(
    state: PureState | Sequence[tuple[complex, PairState]], spec: BellSpec
) -> float:
    """sum*_z 2 alpha_z beta_z |c_z|^2 sum_r s_r cos(phi_z - sum_i z_i phi_i^r).

    Accepts the term list of a pair superposition or any PureState, which is first
    split into pair form.
    """
    terms = pair_decomposition(state) if isinstance(state, PureState) else list(state)
    rows = spec.row_angles()
    signs = np.array(spec.signs, dtype=float)
    total = 0.0
    for c, term in terms:
        if term.n != spec.n:
            raise InvalidInputError("state and operator particle counts differ")
        z = np.array(term.pattern, dtype=float)
        bracket = float(np.sum(signs * np.cos(term.phase - rows @ z)))
        total += 2.0 * term.alpha * term.beta * abs(c) ** 2 * bracket
    return total


def starred_cos_identity(gammas: Sequence[float]) -> tuple[float, float]:
    """Both sides of 2 sum*_z cos(z . gamma) = 2^N prod_i cos(gamma_i)."""
    g = np.asarray(gammas, dtype=float)
    n = g.size
    if n == 0:
        raise InvalidInputError("need at least one angle")
    lhs = 2.0 * math.fsum(
        math.cos(g[0] + float(np.dot(rest, g[1:])))
        for rest in itertools.product((1, -1), repeat=n - 1)
    )
    rhs = 2.0**n * math.prod(math.cos(x) for x in g)
    return lhs, rhs


def product_correlation(ps: ProductState, angles: Sequence[float]) -> float:
    """2^N a0 prod_i cos(phi_i + eta_i)."""
    angles = np.asarray(angles, dtype=float)
    if angles.shape != (ps.n,):
        raise InvalidInputError(f"expected {ps.n} angles")
    return 2.0**ps.n * ps.a0 * math.prod(math.cos(a + e) for a, e in zip(angles, ps.eta))
