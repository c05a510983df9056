"""Dense complex linear algebra for small spin systems.

Vectors and matrices are plain ``numpy`` complex arrays.  Basis convention:
particle 1 is the most significant tensor factor and spin-up (``z = +1``) is
bit 0, so ``|z_1 ... z_N>`` sits at index ``sum_i b_i 2^(N-i)`` with
``b_i = (1 - z_i) / 2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

TAU_HERM = 1e-12
TAU_UNIT = 1e-12
TAU_NORM = 1e-12
TAU_EIG = 1e-10

MAX_PARTICLES = 12


class InvalidInputError(ValueError):
    """Raised when an input violates a documented precondition."""


I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def canonical_angle(phi: float) -> float:
    """Map an angle in radians onto (-pi, pi]."""
    phi = float(phi)
    if not math.isfinite(phi):
        raise InvalidInputError(f"angle must be finite, got {phi!r}")
    r = math.remainder(phi, 2 * math.pi)  # in [-pi, pi]
    if r <= -math.pi:
        r += 2 * math.pi
    return r


@dataclass(frozen=True)
class Direction:
    """Unit vector in R^3."""

    x: float
    y: float
    z: float

    def __post_init__(self) -> None:
        norm2 = self.x * self.x + self.y * self.y + self.z * self.z
        if not math.isfinite(norm2) or abs(norm2 - 1.0) > TAU_UNIT * 10:
            raise InvalidInputError(f"direction is not a unit vector: |n|^2 = {norm2!r}")

    @classmethod
    def normalized(cls, x: float, y: float, z: float) -> "Direction":
        n = math.sqrt(x * x + y * y + z * z)
        if n == 0.0:
            raise InvalidInputError("cannot normalize the zero vector")
        return cls(x / n, y / n, z / n)

    @classmethod
    def planar(cls, phi: float) -> "Direction":
        return cls(math.cos(phi), math.sin(phi), 0.0)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])


def pauli_direction(n: Direction | Sequence[float]) -> np.ndarray:
    """Spin observable ``n . sigma`` along a unit direction."""
    if not isinstance(n, Direction):
        n = Direction(*map(float, n))
    return n.x * SIGMA_X + n.y * SIGMA_Y + n.z * SIGMA_Z


def pauli_planar(phi: float) -> np.ndarray:
    """Spin observable along azimuth ``phi`` in the x-y plane.

    Equal to ``[[0, exp(-i phi)], [exp(i phi), 0]]``.
    """
    phi = canonical_angle(phi)
    e = complex(math.cos(phi), math.sin(phi))
    return np.array([[0, e.conjugate()], [e, 0]], dtype=complex)


def tensor(*ops: np.ndarray) -> np.ndarray:
    """Kronecker product, leftmost argument is particle 1."""
    if len(ops) == 1 and not isinstance(ops[0], np.ndarray):
        ops = tuple(ops[0])
    if not ops:
        raise InvalidInputError("tensor needs at least one factor")
    return reduce(np.kron, ops)


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape != b.shape:
        raise InvalidInputError(f"shape mismatch {a.shape} vs {b.shape}")
    return a @ b - b @ a


def embed(op: np.ndarray, site: int, n: int) -> np.ndarray:
    """Single-particle operator acting on ``site`` (0-based) of an n-particle system."""
    return tensor(*[op if k == site else I2 for k in range(n)])


def _scale(h: np.ndarray) -> float:
    return max(1.0, float(np.max(np.abs(h)))) if h.size else 1.0


def is_hermitian(h: np.ndarray, tol: float = TAU_HERM) -> bool:
    h = np.asarray(h)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        return False
    return float(np.max(np.abs(h - h.conj().T))) <= tol * _scale(h)


def _check_hermitian(h: np.ndarray) -> np.ndarray:
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise InvalidInputError(f"expected a square matrix, got shape {h.shape}")
    if not is_hermitian(h):
        raise InvalidInputError("matrix is not Hermitian within tolerance")
    return h


def jacobi_eigh(
    h: np.ndarray, tol: float = 1e-15, max_sweeps: int = 60
) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi diagonalization of a complex Hermitian matrix.

    Each rotation first rephases the (p, q) element to be real and then applies
    the classic real Jacobi rotation, i.e. ``V = D P D^dagger``.  Returns
    ascending eigenvalues and the eigenvectors as columns.
    """
    a = _check_hermitian(h).copy()
    a = 0.5 * (a + a.conj().T)
    dim = a.shape[0]
    v = np.eye(dim, dtype=complex)
    scale = _scale(a)

    for _ in range(max_sweeps):
        off = float(np.linalg.norm(a - np.diag(np.diag(a))))
        if off <= tol * scale * dim:
            break
        for p in range(dim - 1):
            for q in range(p + 1, dim):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= 1e-300:
                    continue
                phase = apq / mag
                app, aqq = a[p, p].real, a[q, q].real
                tau = (aqq - app) / (2.0 * mag)
                t = math.copysign(1.0, tau) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                # columns: A <- A V
                col_p = a[:, p].copy()
                col_q = a[:, q]
                a[:, p] = c * col_p - s * phase.conjugate() * col_q
                a[:, q] = s * phase * col_p + c * col_q
                # rows: A <- V^dagger A
                row_p = a[p, :].copy()
                row_q = a[q, :]
                a[p, :] = c * row_p - s * phase * row_q
                a[q, :] = s * phase.conjugate() * row_p + c * row_q
                a[p, q] = a[q, p] = 0.0
                a[p, p] = app - t * mag
                a[q, q] = aqq + t * mag
                vp = v[:, p].copy()
                vq = v[:, q]
                v[:, p] = c * vp - s * phase.conjugate() * vq
                v[:, q] = s * phase * vp + c * vq
    else:
        raise ArithmeticError("Jacobi iteration did not converge")

    w = np.real(np.diag(a))
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def eigh(h: np.ndarray, method: str = "lapack") -> tuple[np.ndarray, np.ndarray]:
    """Hermitian eigendecomposition: ascending eigenvalues, orthonormal eigenvector columns.

    ``method="lapack"`` uses ``numpy.linalg.eigh``; ``method="jacobi"`` runs the
    in-house cyclic Jacobi solver (dimensions up to a few hundred).
    """
    h = _check_hermitian(h)
    if method == "lapack":
        w, v = np.linalg.eigh(0.5 * (h + h.conj().T))
        return w, v
    if method == "jacobi":
        return jacobi_eigh(h)
    raise InvalidInputError(f"unknown eigensolver {method!r}")


def eigvalsh(h: np.ndarray) -> np.ndarray:
    h = _check_hermitian(h)
    return np.linalg.eigvalsh(0.5 * (h + h.conj().T))


def expectation(h: np.ndarray, psi: np.ndarray, return_imag: bool = False):
    """Real part of <psi|h|psi>; optionally also the imaginary residual."""
    psi = np.asarray(psi, dtype=complex)
    h = np.asarray(h, dtype=complex)
    if h.shape != (psi.size, psi.size):
        raise InvalidInputError(f"dimension mismatch: operator {h.shape}, state {psi.size}")
    norm = float(np.vdot(psi, psi).real)
    if abs(norm - 1.0) > TAU_NORM * max(1, psi.size):
        raise InvalidInputError(f"state is not normalized: <psi|psi> = {norm!r}")
    val = np.vdot(psi, h @ psi)
    if return_imag:
        return float(val.real), float(val.imag)
    return float(val.real)


# --- computational basis labelling -------------------------------------------

def n_qubits(dim: int) -> int:
    n = int(dim).bit_length() - 1
    if dim < 2 or 1 << n != dim:
        raise InvalidInputError(f"dimension {dim} is not a power of two")
    return n


def basis_index(pattern: Iterable[int]) -> int:
    """Index of ``|z_1 ... z_N>`` with z_i = +1 mapped to bit 0."""
    k = 0
    for z in pattern:
        if z not in (1, -1):
            raise InvalidInputError(f"spin labels must be +1 or -1, got {z!r}")
        k = (k << 1) | (0 if z == 1 else 1)
    return k


def basis_pattern(index: int, n: int) -> tuple[int, ...]:
    if not 0 <= index < 1 << n:
        raise InvalidInputError(f"index {index} out of range for {n} particles")
    return tuple(1 - 2 * ((index >> (n - 1 - i)) & 1) for i in range(n))


def basis_vector(pattern: Sequence[int]) -> np.ndarray:
    psi = np.zeros(1 << len(pattern), dtype=complex)
    psi[basis_index(pattern)] = 1.0
    return psi


def flip_index(index: int, n: int) -> int:
    """Index of the spin-flipped pattern -z."""
    return ((1 << n) - 1) ^ index


def spin_table(n: int) -> np.ndarray:
    """Array of shape (2^n, n) holding z_i for every basis index."""
    idx = np.arange(1 << n)[:, None]
    bits = (idx >> np.arange(n - 1, -1, -1)[None, :]) & 1
    return 1 - 2 * bits
