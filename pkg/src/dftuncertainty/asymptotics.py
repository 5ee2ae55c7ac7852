"""
Large-d behaviour: localization sets, series expansion of U, the spectrum of
the ``[u, v]`` commutator and discretized Gaussian states.

A state lies in ``U_delta(eps)`` when at least ``1 - eps`` of its weight sits
on indices ``|j| <= (2/pi) floor(d/2) delta``; ``V_delta(eps)`` is the same
condition in the dual basis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from .linalg import (
    ComplexMatrix,
    StateVector,
    check_state,
    expectation,
    hermitian_eigendecomposition,
)
from .operators import OperatorSet, build_generators, dft_matrix, index_range, power
from .uncertainty import dispersion

# slack on the index cut so that a boundary index computed as R - 1ulp stays in
BOUNDARY_SLACK = 1e-9
HISTOGRAM_BINS = 64


def _check_delta(delta: float) -> None:
    if not 0.0 < delta <= math.pi / 2:
        raise ValueError(f"delta must lie in (0, pi/2], got {delta!r}")


def localization_radius(d: int, delta: float) -> float:
    return (2 / math.pi) * (d // 2) * delta


def localization_mask(d: int, delta: float) -> npt.NDArray[np.bool_]:
    """Indices belonging to ``I_{0, delta}``; the boundary index is included."""
    _check_delta(delta)
    return np.abs(index_range(d)) <= localization_radius(d, delta) + BOUNDARY_SLACK


def projector_p_delta(d: int, delta: float) -> ComplexMatrix:
    return np.diag(localization_mask(d, delta).astype(np.complex128))


def dual_projector_p_delta(d: int, delta: float) -> ComplexMatrix:
    """The same projector expressed on the dual basis: ``F P_delta F^H``."""
    f = dft_matrix(d)
    return f @ projector_p_delta(d, delta) @ f.conj().T


def membership_epsilon(psi: StateVector, delta: float) -> float:
    """Smallest ``eps`` with ``psi`` in ``U_delta(eps)``."""
    c = check_state(psi)
    mask = localization_mask(c.shape[0], delta)
    return float(min(1.0, max(0.0, 1.0 - np.sum(np.abs(c[mask]) ** 2))))


def dual_membership_epsilon(psi: StateVector, delta: float) -> float:
    """Smallest ``eps`` with ``psi`` in ``V_delta(eps)``."""
    c = check_state(psi)
    ct = dft_matrix(c.shape[0]).conj().T @ c
    return membership_epsilon(ct / np.linalg.norm(ct), delta)


@dataclass(frozen=True)
class UpperBoundReport:
    """``value <= bound`` with the slack ``bound - value``."""

    value: float
    bound: float

    @property
    def slack(self) -> float:
        return self.bound - self.value

    def holds(self, tol: float = 0.0) -> bool:
        return self.slack >= -tol


def lemma_a1_check(psi: StateVector, ops: OperatorSet, delta: float) -> UpperBoundReport:
    """``dU2 <= delta^2 / 2 + 2 eps`` with ``eps`` the measured membership."""
    eps = membership_epsilon(psi, delta)
    return UpperBoundReport(dispersion(psi, ops.U), delta ** 2 / 2 + 2 * eps)


@dataclass(frozen=True)
class Recentering:
    k: int
    state: StateVector
    alpha_after: float


def lemma_a2_recenter(psi: StateVector, ops: OperatorSet) -> Recentering:
    """
    Shift ``V^k psi`` so that the phase of ``<U>`` is as close to 0 as possible.

    ``V^k`` multiplies ``<U>`` by ``e^{2 pi i k / d}``; all ``k`` in
    ``0..d-1`` are tried and the smallest resulting ``|phase|`` wins, which is
    at most ``pi / d``.
    """
    psi = check_state(psi, ops.d)
    eu = expectation(psi, ops.U)
    if abs(eu) == 0.0:
        raise ValueError("<U> vanishes, its phase is undefined")
    d = ops.d
    alpha = np.angle(eu)
    ks = np.arange(d)
    after = np.angle(np.exp(1j * (alpha + 2 * np.pi * ks / d)))
    k = int(ks[np.argmin(np.abs(after))])
    state = power(ops.V, k) @ psi
    return Recentering(k, state, float(np.angle(expectation(state, ops.U))))


def lemma_a2_check(psi: StateVector, ops: OperatorSet, delta: float) -> UpperBoundReport:
    """
    Membership of the recentered state against ``sin^2(beta/2) / sin^2(delta/2)``.

    Here ``sin^2 beta = dU2 + pi^2 / d^2``, which must not exceed 1.
    """
    _check_delta(delta)
    s2 = dispersion(psi, ops.U) + math.pi ** 2 / ops.d ** 2
    if s2 > 1.0:
        raise ValueError(f"dU2 + pi^2/d^2 = {s2:.3f} exceeds 1; the estimate does not apply")
    beta = math.asin(math.sqrt(s2))
    rec = lemma_a2_recenter(psi, ops)
    return UpperBoundReport(membership_epsilon(rec.state, delta),
                            math.sin(beta / 2) ** 2 / math.sin(delta / 2) ** 2)


def expansion_residual(psi: StateVector, ops: OperatorSet, delta: float) -> UpperBoundReport:
    """
    Squared error of the second-order expansion of U on ``psi``.

    The value is ``|| U psi - (1 + i sqrt(2 pi/d) u - (pi/d) u^2) psi ||^2``; the
    bound is ``4 delta^2 + 4 delta^4 + (4 + pi^2 + pi^4/4) eps``.
    """
    psi = check_state(psi, ops.d)
    d = ops.d
    u = ops.u
    approx = psi + 1j * math.sqrt(2 * math.pi / d) * (u @ psi) - (math.pi / d) * (u @ (u @ psi))
    diff = ops.U @ psi - approx
    eps = membership_epsilon(psi, delta)
    bound = 4 * delta ** 2 + 4 * delta ** 4 + (4 + math.pi ** 2 + math.pi ** 4 / 4) * eps
    return UpperBoundReport(float(np.vdot(diff, diff).real), bound)


@dataclass(frozen=True)
class DispersionProxy:
    dU2: float
    proxy: float

    @property
    def relative_gap(self) -> float:
        if self.dU2 == 0.0:
            return 0.0 if self.proxy == 0.0 else math.inf
        return abs(self.proxy - self.dU2) / self.dU2


def dispersion_vs_variance(psi: StateVector, ops: OperatorSet) -> DispersionProxy:
    """``dU2`` next to ``(2 pi / d) Var(u)``."""
    psi = check_state(psi, ops.d)
    mean = expectation(psi, ops.u).real
    second = expectation(psi, ops.u @ ops.u).real
    return DispersionProxy(dispersion(psi, ops.U), 2 * math.pi / ops.d * (second - mean * mean))


@dataclass(frozen=True)
class CommutatorSpectrumReport:
    d: int
    tolerance: float
    eigenvalues: npt.NDArray[np.float64]
    near_one_fraction: float
    trace_residual: float

    def histogram(self) -> dict:
        counts, edges = np.histogram(self.eigenvalues, bins=HISTOGRAM_BINS,
                                     range=(float(self.eigenvalues[0]), float(self.eigenvalues[-1])))
        return {"bins": HISTOGRAM_BINS, "min": float(edges[0]), "max": float(edges[-1]),
                "counts": [int(c) for c in counts]}

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "tolerance": self.tolerance,
            "near_one_fraction": self.near_one_fraction,
            "trace_residual": self.trace_residual,
            "eigenvalue_histogram": self.histogram(),
        }


def normalized_uv_commutator(d: int) -> ComplexMatrix:
    """``-i [u, v]``, the Hermitian matrix equal to 1 where ``[u, v] = i``."""
    u, v = build_generators(d)
    m = -1j * (u @ v - v @ u)
    return (m + m.conj().T) / 2


def commutator_spectrum(d: int, tolerance: float = 1e-10) -> CommutatorSpectrumReport:
    """Spectrum of ``-i [u, v]`` and the fraction of it within ``tolerance`` of 1."""
    if d < 2:
        raise ValueError(f"need d >= 2, got {d}")
    if tolerance < 0:
        raise ValueError("tolerance must be nonnegative")
    lam = hermitian_eigendecomposition(normalized_uv_commutator(d)).eigenvalues
    frac = float(np.count_nonzero(np.abs(lam - 1.0) <= tolerance)) / d
    return CommutatorSpectrumReport(d, tolerance, lam, frac, float(abs(np.sum(lam))))


@dataclass(frozen=True)
class TranslationSetReport:
    eps_before: float
    eps_after: float
    delta_after: float

    @property
    def holds(self) -> bool:
        return self.eps_after <= self.eps_before + 1e-12


def v_translation_set_property(psi: StateVector, n: int, delta: float,
                               ops: OperatorSet) -> TranslationSetReport:
    """``V^n`` maps ``U_delta(eps)`` into ``U_{delta + pi |n| / d}(eps)``."""
    psi = check_state(psi, ops.d)
    _check_delta(delta)
    delta_after = delta + math.pi * abs(n) / ops.d
    if delta_after > math.pi / 2 + 1e-15:
        raise ValueError(f"shifted delta {delta_after:.4f} exceeds pi/2")
    delta_after = min(delta_after, math.pi / 2)
    moved = power(ops.V, int(n)) @ psi
    return TranslationSetReport(membership_epsilon(psi, delta),
                                membership_epsilon(moved, delta_after), delta_after)


@dataclass(frozen=True)
class GaussianState:
    d: int
    sigma: float
    state: StateVector
    norm_squared: float

    @property
    def predicted_norm_squared(self) -> float:
        return self.sigma * math.sqrt(self.d / 2)


def make_gaussian(d: int, sigma: float) -> GaussianState:
    """
    Discretized Gaussian ``c_j ~ exp(-nu_j^2 / (2 sigma^2))`` with
    ``nu_j = sqrt(2 pi / d) j``.

    ``sigma = 1`` is the coherent state, mapped to itself by the DFT up to
    exponentially small corrections; the unnormalized squared norm is close to
    ``sigma sqrt(d / 2)``.
    """
    if d < 2:
        raise ValueError(f"need d >= 2, got {d}")
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma!r}")
    nu = math.sqrt(2 * math.pi / d) * index_range(d)
    raw = np.exp(-nu ** 2 / (2 * sigma ** 2)).astype(np.complex128)
    n2 = float(np.vdot(raw, raw).real)
    return GaussianState(d, sigma, raw / math.sqrt(n2), n2)
