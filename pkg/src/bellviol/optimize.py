"""Derivative-free search for Bell operators with maximal quantum violation."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .bell_ops import QUANTUM_BOUND, BellSpec, MeasurementSettings, Pairing, build_bellN
from .linalg_core import InvalidInputError, eigh, eigvalsh
from .states import MaxViolationReport, PureState, check_max_violation_form

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
SUCCESS_GAP = 1e-6


class BudgetExhausted(Exception):
    pass


def golden_section_max(
    f: Callable[[float], float], a: float, b: float, tol: float = 1e-10
) -> tuple[float, float]:
    """Maximize a unimodal function on [a, b]; returns (x, f(x))."""
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    # the interior probes are better evidence than the midpoint near a flat top
    x = c if fc >= fd else d
    return x, max(fc, fd)


class _Counter:
    def __init__(self, f: Callable[[np.ndarray], float], budget: int):
        self.f = f
        self.budget = budget
        self.calls = 0
        self.best_x: np.ndarray | None = None
        self.best_val = -math.inf

    def __call__(self, x: np.ndarray) -> float:
        if self.calls >= self.budget:
            raise BudgetExhausted
        self.calls += 1
        val = self.f(x)
        if val > self.best_val:
            self.best_val, self.best_x = val, x.copy()
        return val


def coordinate_ascent(
    f: Callable[[np.ndarray], float],
    x0: np.ndarray,
    period: float = 2 * math.pi,
    grid: int = 16,
    tol: float = 1e-10,
    max_sweeps: int = 50,
) -> tuple[np.ndarray, float]:
    """Cyclic coordinate ascent for a function periodic in every coordinate.

    Each line search scans ``grid`` points over one period and then refines the
    best bracket with golden section.  Stops when a sweep improves by < tol.
    """
    x = np.array(x0, dtype=float)
    val = f(x)
    step = period / grid
    for _ in range(max_sweeps):
        start = val
        for k in range(x.size):
            def line(t: float, k: int = k) -> float:
                y = x.copy()
                y[k] = t
                return f(y)

            probes = x[k] + step * np.arange(grid)
            vals = [line(t) for t in probes]
            j = int(np.argmax(vals))
            t, v = golden_section_max(line, probes[j] - step, probes[j] + step, tol)
            if v > val:
                x[k], val = t, v
        if val - start < tol:
            break
    return x, val


def max_abs_eigenvalue(spec: BellSpec) -> float:
    return float(np.max(np.abs(eigvalsh(build_bellN(spec)))))


def _spec_from_params(x: np.ndarray, n: int, signs, pairing) -> BellSpec:
    return BellSpec(MeasurementSettings(tuple(x[:n]), tuple(x[n:])), signs, pairing)


def top_eigenvector(operator: np.ndarray, tol: float = 1e-8) -> tuple[float, PureState]:
    """Eigenvector of the largest eigenvalue, made canonical when degenerate.

    Within a degenerate eigenspace the projection of the basis state with the
    largest projector weight is returned, which keeps the vector on as few pattern
    pairs as possible.
    """
    w, v = eigh(operator)
    lam = float(w[-1])
    basis = v[:, np.abs(w - lam) <= tol]
    weights = np.sum(np.abs(basis) ** 2, axis=1)
    k = int(np.argmax(weights))
    vec = basis @ basis[k].conj()
    return lam, PureState.from_vector(vec, normalize=True).canonical()


@dataclass
class OptimizationResult:
    spec: BellSpec
    state: PureState
    value: float
    success: bool
    evaluations: int
    starts_used: int
    form: MaxViolationReport

    def to_dict(self) -> dict:
        s = self.spec.settings
        return {
            "n": self.spec.n,
            "value": self.value,
            "success": self.success,
            "evaluations": self.evaluations,
            "starts_used": self.starts_used,
            "phi": list(s.phi),
            "phi_prime": list(s.phi_prime),
            "theta": list(s.theta),
            "signs": list(self.spec.signs),
            "pairing": [p.value for p in self.spec.pairing],
            "state": self.state.to_dict(),
            "max_violation_form": self.form.to_dict(),
        }


def optimize_violation(
    n: int,
    seed: int = 0,
    budget: int = 200_000,
    starts: int = 16,
    signs: Sequence[int] = (1, 1, 1, -1),
    pairing: Sequence[Pairing] | None = None,
    tol: float = SUCCESS_GAP,
) -> OptimizationResult:
    """Multi-start coordinate ascent of max|eigenvalue| over all 2n planar angles.

    ``budget`` caps the number of operator diagonalizations.  The search stops
    early once the quantum bound 4 is reached to rounding.
    """
    if not 2 <= n <= 8:
        raise InvalidInputError(f"particle count must be in [2, 8], got {n}")
    if budget < 1:
        raise InvalidInputError("budget must be positive")
    signs = tuple(signs)
    pairing = None if pairing is None else tuple(Pairing(p) for p in pairing)
    rng = np.random.default_rng(seed)
    objective = _Counter(
        lambda x: max_abs_eigenvalue(_spec_from_params(x, n, signs, pairing)), budget
    )
    used = 0
    try:
        for _ in range(starts):
            x0 = rng.uniform(-math.pi, math.pi, 2 * n)
            used += 1
            coordinate_ascent(objective, x0)
            if objective.best_val >= QUANTUM_BOUND - 1e-12:
                break
    except BudgetExhausted:
        pass

    spec = _spec_from_params(objective.best_x, n, signs, pairing)
    op = build_bellN(spec)
    lam, state = top_eigenvector(op)
    form = check_max_violation_form(state, spec.settings.phi, tol)
    value = float(np.max(np.abs(eigvalsh(op))))
    success = value >= QUANTUM_BOUND - tol and form.passed
    return OptimizationResult(spec, state, value, success, objective.calls, used, form)
