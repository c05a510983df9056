"""Pure states of N spin-1/2 particles: GHZ pairs, their superpositions, product states."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .bell_ops import SignPattern, canonical_pattern, pattern_pairs
from .linalg_core import (
    MAX_PARTICLES,
    TAU_NORM,
    InvalidInputError,
    basis_index,
    flip_index,
    n_qubits,
    tensor,
)


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized amplitude vector over the 2^n computational basis."""

    n: int
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if not 1 <= self.n <= MAX_PARTICLES or amps.size != 1 << self.n:
            raise InvalidInputError(f"{amps.size} amplitudes do not describe {self.n} particles")
        if not np.all(np.isfinite(amps)):
            raise InvalidInputError("amplitudes must be finite")
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > TAU_NORM * max(1, amps.size):
            raise InvalidInputError(f"state is not normalized: <psi|psi> = {norm!r}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_vector(cls, vec: np.ndarray, normalize: bool = False) -> "PureState":
        vec = np.asarray(vec, dtype=complex).reshape(-1)
        if normalize:
            norm = np.linalg.norm(vec)
            if norm == 0:
                raise InvalidInputError("cannot normalize the zero vector")
            vec = vec / norm
        return cls(n_qubits(vec.size), vec)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def amplitude(self, pattern: Sequence[int]) -> complex:
        return complex(self.amplitudes[basis_index(pattern)])

    def magnitude(self, pattern: Sequence[int]) -> float:
        return abs(self.amplitude(pattern))

    def phase(self, pattern: Sequence[int]) -> float:
        return float(np.angle(self.amplitude(pattern)))

    def canonical(self, tol: float = 1e-12) -> "PureState":
        """Same ray with the first non-negligible amplitude made real and positive."""
        k = int(np.flatnonzero(np.abs(self.amplitudes) > tol)[0])
        a = self.amplitudes[k]
        return PureState(self.n, self.amplitudes * (abs(a) / a))

    def overlap(self, other: "PureState") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def equal_up_to_phase(self, other: "PureState", tol: float = 1e-8) -> bool:
        if self.n != other.n:
            return False
        return float(np.max(np.abs(self.canonical().amplitudes - other.canonical().amplitudes))) <= tol

    def to_dict(self) -> dict:
        return {"n": self.n, "amplitudes": [[float(a.real), float(a.imag)] for a in self.amplitudes]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "PureState":
        try:
            n = int(data["n"])
            amps = np.array([complex(float(re), float(im)) for re, im in data["amplitudes"]])
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInputError(f"malformed state: {exc}") from exc
        return cls(n, amps)

    @classmethod
    def from_json(cls, text: str) -> "PureState":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidInputError(f"malformed state JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise InvalidInputError("state JSON must be an object")
        return cls.from_dict(data)


@dataclass(frozen=True)
class PairState:
    """``alpha |z> + beta exp(i phase) |-z>`` with real alpha, beta."""

    pattern: SignPattern
    alpha: float
    beta: float
    phase: float

    def __post_init__(self) -> None:
        z = tuple(int(v) for v in self.pattern)
        if not z or any(v not in (1, -1) for v in z):
            raise InvalidInputError(f"invalid sign pattern {self.pattern!r}")
        object.__setattr__(self, "pattern", z)
        if abs(self.alpha**2 + self.beta**2 - 1.0) > 1e-12:
            raise InvalidInputError(
                f"alpha^2 + beta^2 must be 1, got {self.alpha**2 + self.beta**2!r}"
            )

    @classmethod
    def ghz(cls, pattern: Sequence[int], phases: Sequence[float], branch: int = 1) -> "PairState":
        z = tuple(pattern)
        if len(phases) != len(z):
            raise InvalidInputError("need one phase per particle")
        if branch not in (1, -1):
            raise InvalidInputError("branch must be +1 or -1")
        phi = sum(zi * p for zi, p in zip(z, phases)) + (0.0 if branch == 1 else math.pi)
        r = 1 / math.sqrt(2)
        return cls(z, r, r, phi)

    @property
    def n(self) -> int:
        return len(self.pattern)

    def vector(self) -> np.ndarray:
        n = self.n
        v = np.zeros(1 << n, dtype=complex)
        k = basis_index(self.pattern)
        v[k] += self.alpha
        v[flip_index(k, n)] += self.beta * complex(math.cos(self.phase), math.sin(self.phase))
        return v

    def ket(self) -> PureState:
        return PureState(self.n, self.vector())

    def swapped(self) -> "PairState":
        return PairState(self.pattern, self.beta, self.alpha, self.phase)


def ghz_state(pattern: Sequence[int], phases: Sequence[float], s: int = 1) -> PureState:
    """(|z> + s exp(i sum_i z_i phi_i) |-z>) / sqrt(2)."""
    return PairState.ghz(pattern, phases, s).ket()


def general_eigenvector(pattern: Sequence[int], phase: float, alpha: float, beta: float) -> PureState:
    return PairState(tuple(pattern), alpha, beta, phase).ket()


def superpose_max(terms: Sequence[tuple[complex, PairState]]) -> PureState:
    """Flatten ``sum_z c_z |Psi(z)>`` over distinct pattern pairs."""
    if not terms:
        raise InvalidInputError("superposition needs at least one term")
    n = terms[0][1].n
    seen = set()
    total = 0.0
    vec = np.zeros(1 << n, dtype=complex)
    for c, term in terms:
        if term.n != n:
            raise InvalidInputError("all terms must have the same particle count")
        key = canonical_pattern(term.pattern)
        if key in seen:
            raise InvalidInputError(f"pattern pair {key} appears twice")
        seen.add(key)
        total += abs(c) ** 2
        vec += complex(c) * term.vector()
    if abs(total - 1.0) > 1e-12:
        raise InvalidInputError(f"sum of |c|^2 must be 1, got {total!r}")
    return PureState(n, vec)


def pair_decomposition(psi: PureState, tol: float = 1e-14) -> list[tuple[complex, PairState]]:
    """Write any state as ``sum_z c_z (alpha_z |z> + beta_z e^{i phi_z} |-z>)``.

    Pairs with no weight are dropped.  The phase of ``a_z`` goes into ``c_z``.
    """
    out = []
    for z in pattern_pairs(psi.n):
        k = basis_index(z)
        a, b = psi.amplitudes[k], psi.amplitudes[flip_index(k, psi.n)]
        w = abs(a) ** 2 + abs(b) ** 2
        if w <= tol:
            continue
        r = math.sqrt(w)
        theta_a = float(np.angle(a)) if abs(a) > 0 else 0.0
        theta_b = float(np.angle(b)) if abs(b) > 0 else theta_a
        alpha, beta = abs(a) / r, abs(b) / r
        # renormalize the pair so the constructor check is exact to rounding
        nrm = math.hypot(alpha, beta)
        c = r * complex(math.cos(theta_a), math.sin(theta_a))
        out.append((c, PairState(z, alpha / nrm, beta / nrm, theta_b - theta_a)))
    return out


@dataclass(frozen=True)
class ProductState:
    """Tensor product of single-particle states ``a_up |up> + a_down |down>``."""

    factors: tuple[tuple[complex, complex], ...]

    def __post_init__(self) -> None:
        fs = tuple((complex(u), complex(d)) for u, d in self.factors)
        if not fs:
            raise InvalidInputError("need at least one particle")
        for u, d in fs:
            if abs(abs(u) ** 2 + abs(d) ** 2 - 1.0) > TAU_NORM:
                raise InvalidInputError(f"single-particle state ({u}, {d}) is not normalized")
        object.__setattr__(self, "factors", fs)

    @property
    def n(self) -> int:
        return len(self.factors)

    @property
    def a0(self) -> float:
        return math.prod(abs(u) * abs(d) for u, d in self.factors)

    @property
    def eta(self) -> tuple[float, ...]:
        """Per-particle phase difference theta_up - theta_down."""
        return tuple(float(np.angle(u) - np.angle(d)) for u, d in self.factors)

    def ket(self) -> PureState:
        vec = tensor(*[np.array([u, d], dtype=complex) for u, d in self.factors])
        return PureState(self.n, vec)


def product_state(factors: Sequence[Sequence[complex]]) -> ProductState:
    return ProductState(tuple((f[0], f[1]) for f in factors))


# --- structural test for maximal correlation ---------------------------------

@dataclass
class PairResidual:
    pattern: SignPattern
    magnitude_residual: float
    phase_residual: float
    lattice_index: int | None


@dataclass
class MaxViolationReport:
    pairs: list[PairResidual]
    parity_consistent: bool
    tol: float

    @property
    def max_magnitude_residual(self) -> float:
        return max((p.magnitude_residual for p in self.pairs), default=0.0)

    @property
    def max_phase_residual(self) -> float:
        return max((p.phase_residual for p in self.pairs), default=0.0)

    @property
    def passed(self) -> bool:
        return (
            self.max_magnitude_residual <= self.tol
            and self.max_phase_residual <= self.tol
            and self.parity_consistent
        )

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "max_magnitude_residual": float(self.max_magnitude_residual),
            "max_phase_residual": float(self.max_phase_residual),
            "parity_consistent": self.parity_consistent,
        }


def _distance_to_pi_lattice(x: float) -> tuple[float, int]:
    k = round(x / math.pi)
    return abs(x - k * math.pi), int(k)


def check_max_violation_form(psi: PureState, phases: Sequence[float], tol: float = 1e-8) -> MaxViolationReport:
    """Check |a_z| = |a_-z| and theta_-z - theta_z = sum_i z_i phi_i + n pi on every pair.

    All occupied pairs must share the parity of n, otherwise the pair
    contributions to the correlation cancel instead of adding up to +-1.
    """
    if len(phases) != psi.n:
        raise InvalidInputError("need one phase per particle")
    pairs = []
    parities = set()
    for z in pattern_pairs(psi.n):
        k = basis_index(z)
        a, b = psi.amplitudes[k], psi.amplitudes[flip_index(k, psi.n)]
        mag_res = float(abs(abs(a) - abs(b)))
        phase_res, lattice = 0.0, None
        if min(abs(a), abs(b)) > tol:
            offset = float(np.angle(b) - np.angle(a)) - sum(zi * p for zi, p in zip(z, phases))
            phase_res, lattice = _distance_to_pi_lattice(offset)
            parities.add(lattice % 2)
        pairs.append(PairResidual(z, mag_res, phase_res, lattice))
    return MaxViolationReport(pairs, len(parities) <= 1, tol)
