"""Independent oracles and end-to-end checks of the Bell-operator results."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .bell_ops import (
    QUANTUM_BOUND,
    TAU_MATMUL_PER_DIM,
    TAU_XCHECK,
    BellSpec,
    MeasurementSettings,
    Settings,
    all_patterns,
    bell3_squared_closed_form,
    bsq_eigenvalue_for_pattern,
    build_bell3,
    largest_eig_sq_formula,
    pattern_pairs,
)
from .correlation import starred_cos_identity
from .linalg_core import InvalidInputError, eigvalsh, pauli_planar, tensor
from .optimize import golden_section_max
from .states import ghz_state

LHV_MAX_PARTICLES = 10


@dataclass
class VerificationReport:
    name: str
    passed: bool
    residual: float
    tolerance: float
    witness: Any = None
    checks: list["VerificationReport"] = field(default_factory=list)

    @classmethod
    def single(cls, name: str, residual: float, tolerance: float, witness: Any = None) -> "VerificationReport":
        residual = float(residual)
        return cls(name, residual <= tolerance, residual, tolerance, witness)

    @classmethod
    def combine(cls, name: str, checks: list["VerificationReport"]) -> "VerificationReport":
        """Aggregate; the residual is the worst residual-to-tolerance ratio."""
        ratio = max((c.residual / c.tolerance for c in checks), default=0.0)
        failing = [c for c in checks if not c.passed]
        witness = failing[0].witness if failing else None
        return cls(name, not failing, ratio, 1.0, witness, checks)

    def to_dict(self) -> dict:
        d = {
            "name": self.name,
            "passed": self.passed,
            "residual": self.residual,
            "tolerance": self.tolerance,
        }
        if self.witness is not None:
            d["witness"] = self.witness
        if self.checks:
            d["checks"] = [c.to_dict() for c in self.checks]
        return d


# --- local hidden variables --------------------------------------------------

@dataclass(frozen=True)
class LhvAssignment:
    """Predetermined outcomes (v(phi_i), v(phi_i')) for every particle."""

    values: tuple[tuple[int, int], ...]


def lhv_max(spec: BellSpec, signs: Sequence[int] | None = None) -> tuple[float, LhvAssignment]:
    """Exhaustive maximum of the Bell expression over deterministic local assignments.

    ``signs`` overrides the operator's sign factors without validation, which allows
    probing sign choices whose product is +1.  When a particle's two observables
    coincide (theta = 0) or are opposite (theta = pi) the assignments are
    restricted to v' = v or v' = -v respectively.
    """
    n = spec.n
    if n > LHV_MAX_PARTICLES:
        raise InvalidInputError(f"enumeration limited to {LHV_MAX_PARTICLES} particles")
    s = np.array(spec.signs if signs is None else signs, dtype=np.int64)
    if s.shape != (4,) or np.any(np.abs(s) != 1):
        raise InvalidInputError("signs must be four values of +-1")

    codes = np.arange(4**n, dtype=np.int64)
    shifts = 2 * np.arange(n, dtype=np.int64)
    v = 1 - 2 * ((codes[:, None] >> shifts[None, :]) & 1)
    vp = 1 - 2 * ((codes[:, None] >> (shifts[None, :] + 1)) & 1)

    keep = np.ones(codes.size, dtype=bool)
    for i, t in enumerate(spec.settings.theta):
        if abs(math.sin(t)) < 1e-12:
            same = math.cos(t) > 0
            keep &= (vp[:, i] == v[:, i]) if same else (vp[:, i] == -v[:, i])

    primed = spec.uses_primed()
    total = np.zeros(codes.size, dtype=np.int64)
    for r in range(4):
        vals = np.where(primed[r][None, :], vp, v)
        total += s[r] * np.prod(vals, axis=1)
    total = np.where(keep, total, np.iinfo(np.int64).min)
    best = int(np.argmax(total))
    assignment = LhvAssignment(tuple((int(v[best, i]), int(vp[best, i])) for i in range(n)))
    return float(total[best]), assignment


def lhv_check(spec: BellSpec, signs: Sequence[int] | None = None) -> VerificationReport:
    value, arg = lhv_max(spec, signs)
    witness = {"max": value, "assignment": [list(p) for p in arg.values]}
    return VerificationReport.single("lhv", abs(value - 2.0), 1e-12, witness)


# --- GHZ operators -----------------------------------------------------------

def ghz_operators(phases: Sequence[float], t4_shift: float = 0.0) -> list[np.ndarray]:
    p1, p2, p3 = phases
    h = math.pi / 2
    s = pauli_planar
    return [
        tensor(s(p1), s(p2 + h), s(p3 + h)),
        tensor(s(p1 + h), s(p2), s(p3 + h)),
        tensor(s(p1 + h), s(p2 + h), s(p3)),
        tensor(s(p1), s(p2), s(p3 + t4_shift)),
    ]


def ghz_basis(phases: Sequence[float]) -> list[np.ndarray]:
    """The eight states (|z> +- exp(i z.phi)|-z>)/sqrt(2)."""
    return [ghz_state(z, phases, b).amplitudes for z in pattern_pairs(3) for b in (1, -1)]


def ghz_theorem_check(phases: Sequence[float], t4_shift: float = 0.0, tol: float = 1e-12) -> VerificationReport:
    if len(phases) != 3:
        raise InvalidInputError("GHZ check takes three phases")
    ts = ghz_operators(phases, t4_shift)
    eye = np.eye(8)
    prod = ts[0] @ ts[1] @ ts[2] @ ts[3]
    checks = [VerificationReport.single("T1T2T3T4 = -I", np.max(np.abs(prod + eye)), tol)]

    comm = max(
        float(np.max(np.abs(a @ b - b @ a))) for a, b in itertools.combinations(ts, 2)
    )
    checks.append(VerificationReport.single("T_i commute", comm, tol))

    states = ghz_basis(phases)
    g = np.column_stack(states)
    checks.append(VerificationReport.single("basis orthonormal", np.max(np.abs(g.conj().T @ g - eye)), tol))

    eig_res, unit_res, prod_res = 0.0, 0.0, 0.0
    worst = None
    for idx, psi in enumerate(states):
        vals = [complex(np.vdot(psi, t @ psi)) for t in ts]
        for t, e in zip(ts, vals):
            eig_res = max(eig_res, float(np.max(np.abs(t @ psi - e * psi))))
            unit_res = max(unit_res, abs(abs(e) - 1.0))
        r = abs(math.prod(e.real for e in vals) + 1.0)
        if r > prod_res:
            prod_res, worst = r, {"state": idx, "expectations": [e.real for e in vals]}
    checks.append(VerificationReport.single("simultaneous eigenvectors", max(eig_res, unit_res), tol))
    checks.append(VerificationReport.single("product of expectations = -1", prod_res, tol, worst))
    report = VerificationReport.combine("ghz", checks)
    # all sub-checks share one tolerance, so report the raw worst residual
    report.residual = max(c.residual for c in checks)
    report.tolerance = tol
    return report


# --- the three-particle worked example ---------------------------------------

EXTREMUM_TARGET = math.sqrt(2.0 + math.sqrt(2.0))


def extremum_h(phi: float) -> float:
    r = 2.0**-0.5
    return abs(r * math.sin(phi) - (1.0 + r) * math.cos(phi))


def extremum_lhs(alpha: float, phi: float) -> float:
    beta = math.sqrt(max(0.0, 1.0 - alpha * alpha))
    return 2.0 * abs(alpha * beta) * extremum_h(phi)


def extremum_check(value_tol: float = 1e-9, location_tol: float = 1e-6) -> VerificationReport:
    """Grid scan plus alternating golden-section refinement of 2|alpha beta| h(phi)."""
    alphas = np.linspace(0.0, 1.0, 201)
    phis = np.linspace(-math.pi / 2, math.pi / 2, 361)
    vals = np.array([[extremum_lhs(a, p) for p in phis] for a in alphas])
    i, j = np.unravel_index(int(np.argmax(vals)), vals.shape)
    a, p = float(alphas[i]), float(phis[j])
    da, dp = alphas[1] - alphas[0], phis[1] - phis[0]
    best = vals[i, j]
    for _ in range(20):
        a, _ = golden_section_max(lambda x: extremum_lhs(x, p), max(0.0, a - da), min(1.0, a + da), 1e-12)
        p, val = golden_section_max(lambda x: extremum_lhs(a, x), p - dp, p + dp, 1e-12)
        da, dp = da / 4, dp / 4
        if abs(val - best) < 1e-15:
            break
        best = val

    phase_err = abs(math.remainder(p + math.pi / 8, math.pi))
    exact = abs(extremum_lhs(2**-0.5, -math.pi / 8) - EXTREMUM_TARGET)
    witness = {"alpha": float(a), "phi": float(p), "max": float(best)}
    checks = [
        VerificationReport.single("maximum value", abs(best - EXTREMUM_TARGET), value_tol, witness),
        VerificationReport.single("argmax alpha", abs(a - 2**-0.5), location_tol, witness),
        VerificationReport.single("argmax phi (mod pi)", phase_err, location_tol, witness),
        VerificationReport.single("equality at alpha=beta=1/sqrt2, phi=-pi/8", exact, 1e-12),
        # passes iff the alpha=0.6 maximum stays below the target by more than value_tol
        VerificationReport.single(
            "strict inequality at alpha=0.6",
            max(0.0, max(extremum_lhs(0.6, x) for x in phis) - EXTREMUM_TARGET + 2 * value_tol),
            value_tol,
        ),
    ]
    return VerificationReport.combine("extremum", checks)


# --- spectra -----------------------------------------------------------------

def spectral_crosscheck(settings: Settings, tol: float = TAU_XCHECK) -> VerificationReport:
    b = build_bell3(settings)
    b2 = b @ b
    closed = bell3_squared_closed_form(settings)
    lam = eigvalsh(b)
    mu = eigvalsh(b2)
    formula = sorted(bsq_eigenvalue_for_pattern(settings, z) for z in all_patterns(3))
    witness = {"theta": [float(t) for t in settings.theta]}
    checks = [
        VerificationReport.single("B^2 closed form", np.max(np.abs(b2 - closed)), TAU_MATMUL_PER_DIM * 8, witness),
        VerificationReport.single("largest B^2 eigenvalue", abs(mu[-1] - largest_eig_sq_formula(settings)), tol, witness),
        VerificationReport.single("B^2 spectrum by pattern", np.max(np.abs(mu - np.array(formula))), tol, witness),
        VerificationReport.single(
            "spectrum bounds",
            max(0.0, np.max(np.abs(lam)) - QUANTUM_BOUND, -mu[0], mu[-1] - QUANTUM_BOUND**2),
            tol,
            witness,
        ),
    ]
    return VerificationReport.combine("spectral", checks)


def identity_sweep(count: int = 100, max_n: int = 8, seed: int = 0, tol: float = 1e-12) -> VerificationReport:
    rng = np.random.default_rng(seed)
    worst, witness = 0.0, None
    for k in range(count):
        n = 1 + k % max_n
        g = rng.uniform(-math.pi, math.pi, n)
        lhs, rhs = starred_cos_identity(g)
        if abs(lhs - rhs) > worst:
            worst, witness = abs(lhs - rhs), {"gammas": list(g)}
    return VerificationReport.single("identity", worst, tol, witness)


def random_spec(n: int, rng: np.random.Generator) -> BellSpec:
    phi = rng.uniform(-math.pi, math.pi, n)
    phi_p = rng.uniform(-math.pi, math.pi, n)
    signs = [int(x) for x in rng.choice([1, -1], 3)]
    signs.append(-math.prod(signs))
    pairing = [str(x) for x in rng.choice(["P1", "P2", "P3"], n)]
    return BellSpec(MeasurementSettings(tuple(phi), tuple(phi_p)), tuple(signs), tuple(pairing))


def random_settings(n: int, rng: np.random.Generator) -> MeasurementSettings:
    return MeasurementSettings(tuple(rng.uniform(-math.pi, math.pi, n)), tuple(rng.uniform(-math.pi, math.pi, n)))
