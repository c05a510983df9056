"""Hardy-type Bell operators and their analytic spectra.

Three-particle operators follow

    B = s(n1) s(n2') s(n3') + s(n1') s(n2) s(n3') + s(n1') s(n2') s(n3) - s(n1) s(n2) s(n3)

for planar or general measurement directions.  General-N operators are planar
four-term sums ``alpha M_alpha + beta M_beta + gamma M_gamma + delta M_delta``
whose per-particle angles are tied together by a pairing pattern.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .linalg_core import (
    SIGMA_Z,
    Direction,
    InvalidInputError,
    basis_index,
    canonical_angle,
    eigh,
    embed,
    flip_index,
    n_qubits,
    pauli_direction,
    pauli_planar,
    tensor,
)

TAU_MATMUL_PER_DIM = 1e-10
TAU_XCHECK = 1e-8
VIOLATION_BOUND = 2.0
QUANTUM_BOUND = 4.0

ROWS = ("alpha", "beta", "gamma", "delta")

SignPattern = tuple[int, ...]


# --- measurement settings ----------------------------------------------------

@dataclass(frozen=True)
class MeasurementSettings:
    """Planar settings: azimuths ``phi`` and ``phi_prime`` for each particle."""

    phi: tuple[float, ...]
    phi_prime: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.phi) != len(self.phi_prime):
            raise InvalidInputError("phi and phi_prime must have the same length")
        if len(self.phi) < 2:
            raise InvalidInputError("at least two particles are required")
        object.__setattr__(self, "phi", tuple(canonical_angle(p) for p in self.phi))
        object.__setattr__(self, "phi_prime", tuple(canonical_angle(p) for p in self.phi_prime))

    @classmethod
    def from_theta(cls, theta: Sequence[float], phi: Sequence[float] | None = None) -> "MeasurementSettings":
        phi = tuple(0.0 for _ in theta) if phi is None else tuple(phi)
        return cls(phi, tuple(p + t for p, t in zip(phi, theta)))

    @property
    def n(self) -> int:
        return len(self.phi)

    @property
    def theta(self) -> tuple[float, ...]:
        return tuple(canonical_angle(b - a) for a, b in zip(self.phi, self.phi_prime))

    @property
    def sin_theta(self) -> np.ndarray:
        return np.array([math.sin(b - a) for a, b in zip(self.phi, self.phi_prime)])

    def unprimed(self, i: int) -> np.ndarray:
        return pauli_planar(self.phi[i])

    def primed(self, i: int) -> np.ndarray:
        return pauli_planar(self.phi_prime[i])

    def perp(self, i: int) -> np.ndarray | None:
        # right-handed frame: n x n' = sin(theta) z_hat
        return SIGMA_Z


@dataclass(frozen=True)
class DirectionSettings:
    """General (non-planar) settings given as unit-vector pairs per particle.

    ``theta`` is the unsigned angle between n and n', and the perpendicular spin
    axis is ``n x n' / |n x n'|`` (undefined when the two directions are parallel).
    """

    n_dirs: tuple[Direction, ...]
    n_prime_dirs: tuple[Direction, ...]

    def __post_init__(self) -> None:
        if len(self.n_dirs) != len(self.n_prime_dirs):
            raise InvalidInputError("n_dirs and n_prime_dirs must have the same length")
        if len(self.n_dirs) < 2:
            raise InvalidInputError("at least two particles are required")

    @property
    def n(self) -> int:
        return len(self.n_dirs)

    def _cross(self, i: int) -> np.ndarray:
        return np.cross(self.n_dirs[i].as_array(), self.n_prime_dirs[i].as_array())

    @property
    def theta(self) -> tuple[float, ...]:
        out = []
        for a, b in zip(self.n_dirs, self.n_prime_dirs):
            cos_t = float(np.clip(a.as_array() @ b.as_array(), -1.0, 1.0))
            sin_t = float(np.linalg.norm(np.cross(a.as_array(), b.as_array())))
            out.append(math.atan2(sin_t, cos_t))
        return tuple(out)

    @property
    def sin_theta(self) -> np.ndarray:
        return np.array([float(np.linalg.norm(self._cross(i))) for i in range(self.n)])

    def unprimed(self, i: int) -> np.ndarray:
        return pauli_direction(self.n_dirs[i])

    def primed(self, i: int) -> np.ndarray:
        return pauli_direction(self.n_prime_dirs[i])

    def perp(self, i: int) -> np.ndarray | None:
        c = self._cross(i)
        norm = float(np.linalg.norm(c))
        if norm < 1e-14:
            return None
        return pauli_direction(Direction.normalized(*c))


Settings = MeasurementSettings | DirectionSettings


# --- general-N specification -------------------------------------------------

class Pairing(str, enum.Enum):
    """Which rows share an angle on a given particle.

    P1: alpha=beta, gamma=delta; P2: alpha=gamma, beta=delta; P3: alpha=delta, beta=gamma.
    The group containing the delta row measures ``phi_i``; the other group ``phi_i'``.
    """

    P1 = "P1"
    P2 = "P2"
    P3 = "P3"

    @property
    def primed_rows(self) -> tuple[int, int]:
        return {"P1": (0, 1), "P2": (0, 2), "P3": (1, 2)}[self.value]


def default_pairing(n: int) -> tuple[Pairing, ...]:
    """(P3, P2, P1) on the first three particles, P1 on the rest.

    For n = 3 this is the familiar operator with rows
    (phi1, phi2', phi3'), (phi1', phi2, phi3'), (phi1', phi2', phi3), (phi1, phi2, phi3).
    """
    if n < 2:
        raise InvalidInputError("at least two particles are required")
    head = (Pairing.P3, Pairing.P2, Pairing.P1)
    return head[:n] + (Pairing.P1,) * max(0, n - 3)


@dataclass(frozen=True)
class BellSpec:
    settings: MeasurementSettings
    signs: tuple[int, int, int, int] = (1, 1, 1, -1)
    pairing: tuple[Pairing, ...] | None = field(default=None)

    def __post_init__(self) -> None:
        if not isinstance(self.settings, MeasurementSettings):
            raise InvalidInputError("general-N Bell operators take planar settings")
        signs = tuple(int(s) for s in self.signs)
        if len(signs) != 4 or any(s not in (1, -1) for s in signs):
            raise InvalidInputError(f"signs must be four values of +-1, got {self.signs!r}")
        if math.prod(signs) != -1:
            raise InvalidInputError(f"sign factors must multiply to -1, got {signs!r}")
        object.__setattr__(self, "signs", signs)
        pairing = default_pairing(self.settings.n) if self.pairing is None else self.pairing
        try:
            pairing = tuple(Pairing(p) for p in pairing)
        except ValueError as exc:
            raise InvalidInputError(f"invalid pairing {self.pairing!r}") from exc
        if len(pairing) != self.settings.n:
            raise InvalidInputError(
                f"pairing has {len(pairing)} entries for {self.settings.n} particles"
            )
        object.__setattr__(self, "pairing", pairing)

    @property
    def n(self) -> int:
        return self.settings.n

    def uses_primed(self) -> np.ndarray:
        """Boolean array (4, n): True where row r measures phi_i' on particle i."""
        mask = np.zeros((4, self.n), dtype=bool)
        for i, p in enumerate(self.pairing):
            for r in p.primed_rows:
                mask[r, i] = True
        return mask

    def row_angles(self) -> np.ndarray:
        """Array (4, n) of the azimuth each row measures on each particle."""
        phi = np.array(self.settings.phi)
        phi_p = np.array(self.settings.phi_prime)
        return np.where(self.uses_primed(), phi_p[None, :], phi[None, :])


# --- operators ---------------------------------------------------------------

def _require_three(settings: Settings) -> None:
    if settings.n != 3:
        raise InvalidInputError(f"three-particle operator requested for n = {settings.n}")


def build_bell3(settings: Settings) -> np.ndarray:
    _require_three(settings)
    a = [settings.unprimed(i) for i in range(3)]
    b = [settings.primed(i) for i in range(3)]
    return (
        tensor(a[0], b[1], b[2])
        + tensor(b[0], a[1], b[2])
        + tensor(b[0], b[1], a[2])
        - tensor(a[0], a[1], a[2])
    )


def row_operator(angles: Sequence[float]) -> np.ndarray:
    return tensor(*[pauli_planar(p) for p in angles])


def build_bellN(spec: BellSpec) -> np.ndarray:
    if math.prod(spec.signs) != -1:
        raise InvalidInputError("sign factors must multiply to -1")
    rows = spec.row_angles()
    return sum(s * row_operator(rows[r]) for r, s in enumerate(spec.signs))


def bell3_squared_closed_form(settings: Settings) -> np.ndarray:
    """4 I + 4 sum_{i<j} sin(theta_i) sin(theta_j) s_perp_i s_perp_j."""
    _require_three(settings)
    sins = settings.sin_theta
    out = 4.0 * np.eye(8, dtype=complex)
    perps = []
    for i in range(3):
        p = settings.perp(i)
        if p is None and abs(sins[i]) > 1e-12:
            raise InvalidInputError(f"perpendicular axis undefined for particle {i + 1}")
        perps.append(p)
    for i, j in itertools.combinations(range(3), 2):
        if sins[i] == 0.0 or sins[j] == 0.0 or perps[i] is None or perps[j] is None:
            continue
        out += 4.0 * sins[i] * sins[j] * (embed(perps[i], i, 3) @ embed(perps[j], j, 3))
    return out


def largest_eig_sq_formula(settings: Settings) -> float:
    _require_three(settings)
    s = settings.sin_theta
    return 4.0 * (1.0 + abs(s[0] * s[1]) + abs(s[1] * s[2]) + abs(s[0] * s[2]))


def largest_eig_formula(settings: Settings) -> float:
    return math.sqrt(largest_eig_sq_formula(settings))


def bsq_eigenvalue_for_pattern(settings: Settings, pattern: Sequence[int]) -> float:
    """Eigenvalue of B^2 on the (perpendicular-axis) basis state |z1 z2 z3>."""
    _require_three(settings)
    z = _check_pattern(pattern, 3)
    s = settings.sin_theta
    val = 4.0 * (1.0 + z[0] * z[1] * s[0] * s[1] + z[1] * z[2] * s[1] * s[2] + z[0] * z[2] * s[0] * s[2])
    # algebraically nonnegative; clamp rounding noise
    return max(val, 0.0)


def _check_pattern(pattern: Sequence[int], n: int) -> SignPattern:
    z = tuple(int(v) for v in pattern)
    if len(z) != n or any(v not in (1, -1) for v in z):
        raise InvalidInputError(f"expected {n} spin labels of +-1, got {pattern!r}")
    return z


def all_patterns(n: int) -> list[SignPattern]:
    """All 2^n sign patterns in basis order."""
    return [tuple(p) for p in itertools.product((1, -1), repeat=n)]


def pattern_pairs(n: int) -> list[SignPattern]:
    """Canonical representative (z1 = +1) of each pair {z, -z}, in basis order."""
    return [(1,) + tuple(p) for p in itertools.product((1, -1), repeat=n - 1)]


def canonical_pattern(pattern: Sequence[int]) -> SignPattern:
    z = tuple(pattern)
    return z if z[0] == 1 else tuple(-v for v in z)


class MaximalPattern(NamedTuple):
    pattern: SignPattern
    tied: bool
    value: float


def maximal_pattern(settings: Settings, tol: float = 1e-12) -> MaximalPattern:
    """Sign pattern (z1 = +1 representative) carrying the largest B^2 eigenvalue."""
    _require_three(settings)
    vals = [(bsq_eigenvalue_for_pattern(settings, z), z) for z in pattern_pairs(3)]
    best = max(v for v, _ in vals)
    winners = [z for v, z in vals if best - v <= tol * 16]
    return MaximalPattern(winners[0], len(winners) > 1, best)


# --- spectral report ---------------------------------------------------------

class Degeneracy(str, enum.Enum):
    NONDEGENERATE = "nondegenerate"
    TRIVIAL = "trivial"
    NONTRIVIAL = "nontrivial"
    MIXED = "mixed"


def eigenspace(eigenvalues: np.ndarray, eigenvectors: np.ndarray, lam: float, tol: float = 1e-8) -> np.ndarray:
    cols = np.flatnonzero(np.abs(eigenvalues - lam) <= tol)
    return eigenvectors[:, cols]


def pair_dimensions(basis: np.ndarray) -> dict[SignPattern, float]:
    """Trace of the eigenspace projector restricted to each pattern-pair block."""
    n = n_qubits(basis.shape[0])
    weights = np.sum(np.abs(basis) ** 2, axis=1)
    out = {}
    for z in pattern_pairs(n):
        k = basis_index(z)
        out[z] = float(weights[k] + weights[flip_index(k, n)])
    return out


def classify_degeneracy(
    eigenvalues: np.ndarray,
    eigenvectors: np.ndarray,
    lam: float,
    tol: float = 1e-8,
) -> Degeneracy:
    """Classify the lambda-eigenspace by how it sits on pattern pairs {z, -z}.

    nondegenerate: one-dimensional.  trivial: two-dimensional and spanned inside a
    single pair.  nontrivial: supported on several pairs, each pair block carrying a
    whole number of dimensions.  mixed: the eigenspace does not split along pairs.
    """
    basis = eigenspace(eigenvalues, eigenvectors, lam, tol)
    dim = basis.shape[1]
    if dim == 0:
        raise InvalidInputError(f"{lam!r} is not an eigenvalue within {tol}")
    if dim == 1:
        return Degeneracy.NONDEGENERATE
    dims = pair_dimensions(basis)
    if any(abs(d - round(d)) > 1e-6 for d in dims.values()):
        return Degeneracy.MIXED
    support = [z for z, d in dims.items() if round(d) > 0]
    if len(support) == 1:
        return Degeneracy.TRIVIAL
    return Degeneracy.NONTRIVIAL


@dataclass
class SpectralReport:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    violation: list[bool]
    degeneracy: list[Degeneracy]
    max_abs: float
    predicted_max_abs: float | None = None

    @property
    def any_violation(self) -> bool:
        return any(self.violation)

    def to_dict(self) -> dict:
        return {
            "dimension": int(self.eigenvalues.size),
            "eigenvalues": [float(x) for x in self.eigenvalues],
            "violation_flags": [bool(f) for f in self.violation],
            "degeneracy": [d.value for d in self.degeneracy],
            "max_abs_eigenvalue": float(self.max_abs),
            "predicted_max_abs_eigenvalue": None if self.predicted_max_abs is None else float(self.predicted_max_abs),
            "violation": bool(self.any_violation),
        }


def spectral_report(
    operator: np.ndarray,
    predicted_max_abs: float | None = None,
    tol: float = 1e-8,
) -> SpectralReport:
    w, v = eigh(operator)
    classes = [classify_degeneracy(w, v, lam, tol) for lam in w]
    flags = [VIOLATION_BOUND + tol < abs(lam) <= QUANTUM_BOUND + tol for lam in w]
    return SpectralReport(w, v, flags, classes, float(np.max(np.abs(w))), predicted_max_abs)


def matching_signs(pattern: Sequence[int], spec_settings: MeasurementSettings,
                   pairing: Sequence[Pairing] | None = None, tol: float = 1e-9) -> tuple[int, int, int, int]:
    """Sign factors that make the '+' GHZ state on ``pattern`` an eigenvector with eigenvalue -4.

    The state ``(|z> + exp(i sum z_i phi_i)|-z>)/sqrt(2)`` is an eigenvector of each row
    operator with eigenvalue ``cos(sum_i z_i (phi_i - phi_i^row))`` when that is +-1.
    Raises when no valid sign choice exists for these settings.
    """
    z = np.array(_check_pattern(pattern, spec_settings.n))
    pairing = default_pairing(spec_settings.n) if pairing is None else pairing
    probe = BellSpec(spec_settings, (1, 1, 1, -1), tuple(pairing))
    rows = probe.row_angles()
    phi = np.array(spec_settings.phi)
    c = np.cos((z[None, :] * (phi[None, :] - rows)).sum(axis=1))
    if np.any(np.abs(np.abs(c) - 1.0) > tol):
        raise InvalidInputError("row operators are not all +-1 on this GHZ state")
    signs = tuple(int(-round(v)) for v in c)
    if math.prod(signs) != -1:
        raise InvalidInputError("no sign choice with product -1 gives eigenvalue +-4 here")
    return signs  # type: ignore[return-value]
