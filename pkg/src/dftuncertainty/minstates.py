"""
Minimum-uncertainty states as ground states of the Harper Hamiltonian.

The maximum of ``cos(theta)|<U>| + sin(theta)|<V>|`` over states equals
``-h_min``, where ``h_min`` is the smallest eigenvalue of
``H = -cos(theta) C_U - sin(theta) C_V``.  The maximizers are the ground states
that are also parity eigenstates, together with all their translates.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .linalg import (
    StateVector,
    check_state,
    degeneracy_threshold,
    expectation,
    hermitian_eigendecomposition,
)
from .operators import OperatorSet, build_harper, build_operator_set, translate
from .uncertainty import symmetric_bound

SUPPORT_TOL = 1e-9
PARITY_TOL = 1e-8
DEFAULT_THETA_POINTS = 65


@dataclass(frozen=True)
class HarperResult:
    theta: float
    d: int
    h_min: float
    ground_states: list[StateVector]
    degenerate: bool
    parity_labels: list[int]

    @property
    def max_value(self) -> float:
        """Maximum of ``cos(theta)|<U>| + sin(theta)|<V>|``."""
        return -self.h_min

    @property
    def ground_state(self) -> StateVector:
        return self.ground_states[0]


def _fix_global_phase(psi: StateVector) -> StateVector:
    k = int(np.argmax(np.abs(psi)))
    return psi * (abs(psi[k]) / psi[k])


def harper_ground(theta: float, d: int, ops: OperatorSet | None = None) -> HarperResult:
    """
    Ground state(s) of the Harper Hamiltonian at angle ``theta``.

    A degenerate lowest eigenspace is resolved by diagonalizing the parity
    operator restricted to it, so every returned state carries a parity label.
    """
    if ops is None:
        ops = build_operator_set(d)
    H = build_harper(theta, d, ops).H
    eig = hermitian_eigendecomposition(H)
    lam = eig.eigenvalues
    n_low = int(np.count_nonzero(lam - lam[0] <= degeneracy_threshold(np.linalg.norm(H))))
    block = eig.eigenvectors[:, :n_low]

    if n_low == 1:
        states = [block[:, 0]]
    else:
        p_block = block.conj().T @ ops.P @ block
        sub = hermitian_eigendecomposition((p_block + p_block.conj().T) / 2)
        rotated = block @ sub.eigenvectors
        states = [rotated[:, i] for i in range(n_low)]

    states = [_fix_global_phase(s / np.linalg.norm(s)) for s in states]
    labels = []
    for s in states:
        p = expectation(s, ops.P).real
        label = 1 if p >= 0 else -1
        if abs(p - label) > PARITY_TOL:
            raise ArithmeticError(f"ground state is not a parity eigenstate: <P> = {p!r}")
        labels.append(label)
    h_min = float(np.mean(lam[:n_low]))
    return HarperResult(theta=theta, d=d, h_min=h_min, ground_states=states,
                        degenerate=n_low > 1, parity_labels=labels)


@dataclass(frozen=True)
class PhaseFixResult:
    state: StateVector
    a: int
    b: int
    u_defined: bool
    v_defined: bool
    residual_phase_u: float
    residual_phase_v: float

    @property
    def exact(self) -> bool:
        """Both expectations ended up real and nonnegative to within 1e-10."""
        return all(
            not defined or abs(ph) <= 1e-10
            for defined, ph in ((self.u_defined, self.residual_phase_u),
                                (self.v_defined, self.residual_phase_v))
        )


def phase_fix(psi: StateVector, ops: OperatorSet) -> PhaseFixResult:
    """
    Translate ``psi`` so that ``<U>`` and ``<V>`` point along the positive axis.

    Translations rotate the phases in steps of ``2 pi / d``; the translate
    closest to real is chosen and the remaining phases are reported.  A
    vanishing expectation has no phase, so that rotation is skipped and
    flagged.  The global phase is set so the largest amplitude is real.
    """
    psi = check_state(psi, ops.d)
    d = ops.d
    eu = expectation(psi, ops.U)
    ev = expectation(psi, ops.V)
    u_defined = abs(eu) > 1e-14
    v_defined = abs(ev) > 1e-14
    # U^a V^{-b} rotates <U> by e^{-2 pi i b/d} and <V> by e^{-2 pi i a/d}
    b = int(round(np.angle(eu) * d / (2 * math.pi))) % d if u_defined else 0
    a = int(round(np.angle(ev) * d / (2 * math.pi))) % d if v_defined else 0
    out = _fix_global_phase(translate(psi, a, b, ops))
    ru = float(np.angle(expectation(out, ops.U))) if u_defined else 0.0
    rv = float(np.angle(expectation(out, ops.V))) if v_defined else 0.0
    return PhaseFixResult(out, a, b, u_defined, v_defined, ru, rv)


def realness_check(psi: StateVector, grid: int = 2048) -> float:
    """``min over gamma of max_j |Im(e^{i gamma} c_j)|``."""
    c = np.asarray(psi, dtype=np.complex128)
    r = np.abs(c)
    ph = np.angle(c)

    def worst(gamma: np.ndarray) -> np.ndarray:
        return np.max(r[None, :] * np.abs(np.sin(gamma[:, None] + ph[None, :])), axis=1)

    # least-squares alignment plus a grid over the period pi, then local refinement
    g0 = -0.5 * np.angle(np.sum(c * c))
    gammas = np.concatenate([[g0], np.linspace(0.0, math.pi, grid, endpoint=False)])
    vals = worst(gammas)
    best = gammas[int(np.argmin(vals))]
    width = math.pi / grid
    for _ in range(40):
        trial = np.linspace(best - width, best + width, 21)
        best = trial[int(np.argmin(worst(trial)))]
        width /= 5
    return float(min(vals.min(), worst(np.array([best]))[0]))


@dataclass(frozen=True)
class FrontierSample:
    theta: float
    absU: float
    absV: float
    dU2: float
    dV2: float
    h_min: float
    degenerate: bool

    @property
    def support_residual(self) -> float:
        """How far the sample is from the supporting line at ``theta``."""
        return abs(math.cos(self.theta) * self.absU + math.sin(self.theta) * self.absV + self.h_min)


@dataclass(frozen=True)
class FrontierCurve:
    d: int
    samples: list[FrontierSample]

    @property
    def consistent(self) -> bool:
        return all(s.support_residual <= SUPPORT_TOL for s in self.samples)

    def rows(self) -> list[tuple[float, float, float, float, float]]:
        return [(s.theta, s.absU, s.absV, s.dU2, s.dV2) for s in self.samples]


def default_theta_grid(points: int = DEFAULT_THETA_POINTS) -> list[float]:
    return [float(t) for t in np.linspace(0.0, math.pi / 2, points)]


def _frontier_sample(theta: float, d: int, ops: OperatorSet) -> FrontierSample:
    res = harper_ground(theta, d, ops)
    psi = res.ground_state
    au = abs(expectation(psi, ops.U))
    av = abs(expectation(psi, ops.V))
    return FrontierSample(theta, au, av, max(0.0, 1 - au * au), max(0.0, 1 - av * av),
                          res.h_min, res.degenerate)


def frontier(d: int, theta_grid: list[float] | None = None) -> FrontierCurve:
    """Boundary of the convex hull of reachable ``(|<U>|, |<V>|)`` pairs."""
    if theta_grid is None:
        theta_grid = default_theta_grid()
    for t in theta_grid:
        if not 0.0 <= t <= math.pi / 2:
            raise ValueError(f"theta {t!r} outside [0, pi/2]")
    ops = build_operator_set(d)
    return FrontierCurve(d, [_frontier_sample(float(t), d, ops) for t in theta_grid])


@dataclass(frozen=True)
class Figure1Row:
    d: int
    exact_bound: float
    theorem1_bound: float
    swap_residual: float
    state_residual: float
    degenerate: bool


def figure1_row(d: int) -> Figure1Row:
    """
    At ``theta = pi/4`` the ground state has ``|<U>| = |<V>| = -h_min / sqrt(2)``,
    so the bound is ``1 - h_min^2 / 2``.  The eigenvalue is more accurate than
    the eigenvector; the value measured on the state is kept as a cross-check.
    """
    ops = build_operator_set(d)
    res = harper_ground(math.pi / 4, d, ops)
    psi = res.ground_state
    du2 = 1 - abs(expectation(psi, ops.U)) ** 2
    dv2 = 1 - abs(expectation(psi, ops.V)) ** 2
    exact = 1 - res.h_min ** 2 / 2
    return Figure1Row(d, exact, symmetric_bound(2 * math.pi / d), abs(du2 - dv2),
                      abs(du2 - exact), res.degenerate)


@dataclass(frozen=True)
class Figure1Table:
    rows: list[Figure1Row]

    def failures(self) -> list[str]:
        out = []
        for r in self.rows:
            if r.swap_residual > 1e-8:
                out.append(f"d={r.d}: |dU2 - dV2| = {r.swap_residual:.3e} at theta=pi/4")
            if r.state_residual > 1e-8:
                out.append(f"d={r.d}: state dU2 differs from 1 - h_min^2/2 by {r.state_residual:.3e}")
            if r.exact_bound < r.theorem1_bound - 1e-12:
                out.append(f"d={r.d}: exact bound {r.exact_bound!r} below {r.theorem1_bound!r}")
        return out


def figure1_data(d_min: int, d_max: int, workers: int = 1) -> Figure1Table:
    """
    Minimum ``dU2`` under ``dU2 = dV2`` for each dimension, exact and relaxed.

    The exact value is read off the ground state at ``theta = pi/4``; the
    relaxed one is ``A / (1 + 2A)`` with ``A = tan(pi / d)``.
    """
    if not 2 <= d_min <= d_max:
        raise ValueError(f"need 2 <= d_min <= d_max, got {d_min}, {d_max}")
    dims = range(d_min, d_max + 1)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(figure1_row, dims))
    else:
        rows = [figure1_row(d) for d in dims]
    return Figure1Table(sorted(rows, key=lambda r: r.d))
