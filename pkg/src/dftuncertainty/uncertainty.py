"""
Dispersions of unitary operators and the uncertainty bound relating them.

For unitaries with ``UV = e^{i phi} VU`` (``0 < phi <= pi``) and
``A = tan(phi / 2)`` every state satisfies

    (1 + 2A) dU2 dV2 + A^2 (dU2 + dV2) >= A^2,

where ``dW2 = 1 - |<W>|^2``.  Dividing by ``A^2`` gives a margin that stays
finite at ``phi = pi``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .linalg import (
    ComplexMatrix,
    StateVector,
    check_state,
    expectation,
    haar_states,
    is_unitary,
    make_rng,
)
from .operators import OperatorSet, basis_state, build_operator_set, dual_basis_state

MARGIN_TOL = 1e-10
PHASE_TOL = 1e-10
CHAIN_TOL = 1e-12


@dataclass(frozen=True)
class BoundParams:
    """``A = tan(phi/2)`` kept as the pair ``(sin, cos)`` of the half angle."""

    phi: float
    half_sin: float
    half_cos: float

    @property
    def A(self) -> float:
        return math.inf if self.half_cos == 0.0 else self.half_sin / self.half_cos


def bound_params(phi: float) -> BoundParams:
    if not 0.0 < phi <= math.pi:
        raise ValueError(f"phi must lie in (0, pi], got {phi!r}")
    if phi == math.pi:
        return BoundParams(phi, 1.0, 0.0)
    return BoundParams(phi, math.sin(phi / 2), math.cos(phi / 2))


@dataclass(frozen=True)
class UncertaintyPoint:
    dU2: float
    dV2: float
    phi: float
    margin: float


def dispersion(psi: StateVector, W: ComplexMatrix) -> float:
    """``1 - |<psi|W|psi>|^2`` for a unitary ``W``."""
    if not is_unitary(W, tol=1e-10):
        raise ValueError("dispersion is only defined here for unitary operators")
    psi = check_state(psi, W.shape[0])
    return min(1.0, max(0.0, 1.0 - abs(expectation(psi, W)) ** 2))


def theorem1_margin(dU2: float, dV2: float, phi: float) -> float:
    """
    Normalized slack of the bound; nonnegative exactly when the bound holds.

    ``((1 + 2A) / A^2) dU2 dV2 + dU2 + dV2 - 1``, which at ``phi = pi`` is
    ``dU2 + dV2 - 1``.
    """
    for name, x in (("dU2", dU2), ("dV2", dV2)):
        if not -1e-12 <= x <= 1 + 1e-12:
            raise ValueError(f"{name} must lie in [0, 1], got {x!r}")
    p = bound_params(phi)
    s, c = p.half_sin, p.half_cos
    coeff = (c * c + 2 * s * c) / (s * s)
    return coeff * dU2 * dV2 + dU2 + dV2 - 1.0


def symmetric_bound(phi: float) -> float:
    """The value ``dU2 = dV2 = A / (1 + 2A)`` at which the bound is saturated."""
    p = bound_params(phi)
    return p.half_sin / (p.half_cos + 2 * p.half_sin)


def uncertainty_point(psi: StateVector, ops: OperatorSet) -> UncertaintyPoint:
    du = dispersion(psi, ops.U)
    dv = dispersion(psi, ops.V)
    return UncertaintyPoint(du, dv, ops.phi, theorem1_margin(du, dv, ops.phi))


def _batch_expectations(states: np.ndarray, W: ComplexMatrix) -> np.ndarray:
    return np.einsum("ni,ni->n", states.conj(), states @ W.T)


@dataclass
class AuditReport:
    d: int
    phi: float
    count: int
    seed: int
    min_margin: float
    argmin_state: StateVector
    probe_max_abs_margin: float
    passed: bool = field(init=False)

    def __post_init__(self):
        self.passed = self.min_margin >= -MARGIN_TOL and self.probe_max_abs_margin <= 1e-12

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "phi": self.phi,
            "count": self.count,
            "seed": self.seed,
            "min_margin": self.min_margin,
            "probe_max_abs_margin": self.probe_max_abs_margin,
            "passed": self.passed,
            "argmin_state": [[float(z.real), float(z.imag)] for z in self.argmin_state],
        }


def margins_for_states(states: np.ndarray, ops: OperatorSet) -> np.ndarray:
    """Normalized margins for every row of ``states``."""
    du = np.clip(1.0 - np.abs(_batch_expectations(states, ops.U)) ** 2, 0.0, 1.0)
    dv = np.clip(1.0 - np.abs(_batch_expectations(states, ops.V)) ** 2, 0.0, 1.0)
    p = bound_params(ops.phi)
    s, c = p.half_sin, p.half_cos
    return (c * c + 2 * s * c) / (s * s) * du * dv + du + dv - 1.0


def verify_random_states(d: int, count: int, seed: int,
                         ops: OperatorSet | None = None) -> AuditReport:
    """
    Audit the bound on ``count`` Haar-random states.

    Basis states of both bases are evaluated as extra probes; they saturate the
    bound, so their margins must vanish.
    """
    if d < 2:
        raise ValueError(f"need d >= 2, got {d}")
    if count < 1:
        raise ValueError(f"count must be positive, got {count}")
    if ops is None:
        ops = build_operator_set(d)
    states = haar_states(d, count, make_rng(seed))
    margins = margins_for_states(states, ops)
    k = int(np.argmin(margins))

    probes = np.array([basis_state(0, d), dual_basis_state(0, d)])
    probe = float(np.max(np.abs(margins_for_states(probes, ops))))
    return AuditReport(d=d, phi=ops.phi, count=count, seed=seed,
                       min_margin=float(margins[k]), argmin_state=states[k],
                       probe_max_abs_margin=probe)


def phase_aligned_operators(psi: StateVector, ops: OperatorSet) -> OperatorSet:
    """Rephase U and V so that ``<U>`` and ``<V>`` become real and nonnegative."""
    eu = expectation(psi, ops.U)
    ev = expectation(psi, ops.V)
    mu = -np.angle(eu) if abs(eu) > 0 else 0.0
    mu_prime = -np.angle(ev) if abs(ev) > 0 else 0.0
    return ops.rephased(mu, mu_prime)


def _require_real_expectations(psi: StateVector, ops: OperatorSet) -> tuple[complex, complex]:
    eu = expectation(psi, ops.U)
    ev = expectation(psi, ops.V)
    for name, z in (("<U>", eu), ("<V>", ev)):
        if abs(z.imag) > PHASE_TOL or z.real < -PHASE_TOL:
            raise ValueError(f"{name} = {z:.3e} is not real and nonnegative; rephase first")
    return eu, ev


def _variance(psi: StateVector, A: ComplexMatrix) -> float:
    Apsi = A @ psi
    mean = np.vdot(psi, Apsi).real
    return max(0.0, float(np.vdot(Apsi, Apsi).real - mean * mean))


@dataclass(frozen=True)
class ChainReport:
    dU_dV: float
    dSU_dSV: float
    half_commutator: float
    holds: bool


def robertson_chain_check(psi: StateVector, ops: OperatorSet) -> ChainReport:
    """
    Check ``dU dV >= dS_U dS_V >= |<[S_U, S_V]>| / 2``.

    ``<U>`` and ``<V>`` must already be real and nonnegative (so that
    ``<S_U> = <S_V> = 0``); see :func:`phase_aligned_operators`.
    """
    psi = check_state(psi, ops.d)
    _require_real_expectations(psi, ops)
    du = math.sqrt(dispersion(psi, ops.U))
    dv = math.sqrt(dispersion(psi, ops.V))
    ds = math.sqrt(_variance(psi, ops.S_U) * _variance(psi, ops.S_V))
    comm = ops.S_U @ ops.S_V - ops.S_V @ ops.S_U
    half = 0.5 * abs(expectation(psi, comm))
    holds = du * dv >= ds - CHAIN_TOL and ds >= half - CHAIN_TOL
    return ChainReport(du * dv, ds, half, holds)


def lemma_b1_residual(ops: OperatorSet) -> float:
    """max-norm of ``[S_U, S_V] + i tan(phi/2) (C_U C_V + C_V C_U)``."""
    if ops.phi >= math.pi:
        raise ValueError("the identity involves tan(phi/2), which diverges at phi = pi")
    comm = ops.S_U @ ops.S_V - ops.S_V @ ops.S_U
    anti = ops.C_U @ ops.C_V + ops.C_V @ ops.C_U
    return float(np.max(np.abs(comm + 1j * math.tan(ops.phi / 2) * anti)))


def anticommutator_residual(ops: OperatorSet) -> float:
    """max-norm of ``C_U C_V + C_V C_U``, which vanishes identically at ``phi = pi``."""
    return float(np.max(np.abs(ops.C_U @ ops.C_V + ops.C_V @ ops.C_U)))


@dataclass(frozen=True)
class InequalityReport:
    lhs: float
    rhs: float

    @property
    def slack(self) -> float:
        return self.lhs - self.rhs

    def holds(self, tol: float = 0.0) -> bool:
        return self.slack >= -tol


def lemma_b2_check(psi: StateVector, ops: OperatorSet) -> InequalityReport:
    """``|<C_U C_V>| >= sqrt(1 - dU2) sqrt(1 - dV2) - dU dV`` for phase-aligned ops."""
    psi = check_state(psi, ops.d)
    _require_real_expectations(psi, ops)
    du2 = dispersion(psi, ops.U)
    dv2 = dispersion(psi, ops.V)
    lhs = abs(expectation(psi, ops.C_U @ ops.C_V))
    rhs = math.sqrt(1 - du2) * math.sqrt(1 - dv2) - math.sqrt(du2 * dv2)
    return InequalityReport(lhs, rhs)
