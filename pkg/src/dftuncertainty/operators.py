"""
Clock and shift operators of the d-dimensional DFT pair.

Basis vectors ``|j>`` are indexed by ascending ``j`` in the centered range
``-(d // 2) .. (d - 1) // 2``; array position ``i`` holds ``j = i - d // 2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
import numpy.typing as npt

from .linalg import ComplexMatrix, StateVector, check_state

OPERATOR_TOL = 1e-12


def index_range(d: int) -> npt.NDArray[np.int64]:
    """The centered index values ``j`` for dimension ``d``."""
    if d < 1:
        raise ValueError(f"dimension must be positive, got {d}")
    return np.arange(-(d // 2), (d - 1) // 2 + 1)


def position(j: int, d: int) -> int:
    """Array position of index ``j`` (reduced cyclically into the range)."""
    return (j + d // 2) % d


def basis_state(j: int, d: int) -> StateVector:
    psi = np.zeros(d, dtype=np.complex128)
    psi[position(j, d)] = 1.0
    return psi


def dual_basis_state(k: int, d: int) -> StateVector:
    """``|k~> = sum_j e^{+i 2 pi j k / d} / sqrt(d) |j>``."""
    return dft_matrix(d)[:, position(k, d)].copy()


def dft_matrix(d: int) -> ComplexMatrix:
    """``F[j, k] = exp(+2 pi i j k / d) / sqrt(d)``; column k is ``|k~>`` in the j basis."""
    j = index_range(d)
    # reduce jk mod d before scaling to keep the phases accurate for large d
    jk = np.mod(np.outer(j, j), d)
    return np.exp(2j * np.pi * jk / d) / math.sqrt(d)


def clock(d: int) -> ComplexMatrix:
    """U = diag(exp(2 pi i j / d))."""
    return np.diag(np.exp(2j * np.pi * index_range(d) / d))


def shift(d: int) -> ComplexMatrix:
    """V |j> = |j + 1>, wrapping inside the centered range."""
    v = np.zeros((d, d), dtype=np.complex128)
    i = np.arange(d)
    v[(i + 1) % d, i] = 1.0
    return v


def parity(d: int) -> ComplexMatrix:
    """P |j> = |-j>; for even d the index ``-d/2`` is its own image."""
    if d < 1:
        raise ValueError(f"dimension must be positive, got {d}")
    p = np.zeros((d, d), dtype=np.complex128)
    for j in index_range(d):
        p[position(-int(j), d), position(int(j), d)] = 1.0
    return p


def cos_sin(w: ComplexMatrix) -> tuple[ComplexMatrix, ComplexMatrix]:
    """Hermitian cosine and sine parts ``(W + W^H)/2`` and ``(W - W^H)/2i``."""
    wh = w.conj().T
    return (w + wh) / 2, (w - wh) / 2j


def build_generators(d: int) -> tuple[ComplexMatrix, ComplexMatrix]:
    """
    Hermitian generators ``u`` and ``v``.

    ``u`` is diagonal with ``nu_j = sqrt(2 pi / d) j`` (every branch integer set
    to zero) and ``v = F u F^H``, diagonal on the dual basis with eigenvalue
    ``sqrt(2 pi / d) k`` on ``|k~>``.
    """
    if d < 2:
        raise ValueError(f"generators need d >= 2, got {d}")
    u = np.diag(math.sqrt(2 * math.pi / d) * index_range(d)).astype(np.complex128)
    f = dft_matrix(d)
    v = f @ u @ f.conj().T
    v = (v + v.conj().T) / 2
    return u, v


@dataclass(frozen=True)
class OperatorSet:
    """All named operators for one dimension and one commutation phase."""

    d: int
    phi: float
    F: ComplexMatrix
    U: ComplexMatrix
    V: ComplexMatrix
    u: ComplexMatrix
    v: ComplexMatrix
    C_U: ComplexMatrix
    S_U: ComplexMatrix
    C_V: ComplexMatrix
    S_V: ComplexMatrix
    P: ComplexMatrix

    def rephased(self, mu: float, mu_prime: float) -> "OperatorSet":
        """Same set with ``U -> e^{i mu} U`` and ``V -> e^{i mu'} V``."""
        U = np.exp(1j * mu) * self.U
        V = np.exp(1j * mu_prime) * self.V
        c_u, s_u = cos_sin(U)
        c_v, s_v = cos_sin(V)
        return replace(self, U=U, V=V, C_U=c_u, S_U=s_u, C_V=c_v, S_V=s_v)


def _assemble(d: int, phi: float, U: ComplexMatrix, V: ComplexMatrix) -> OperatorSet:
    u, v = build_generators(d)
    c_u, s_u = cos_sin(U)
    c_v, s_v = cos_sin(V)
    return OperatorSet(d=d, phi=phi, F=dft_matrix(d), U=U, V=V, u=u, v=v,
                       C_U=c_u, S_U=s_u, C_V=c_v, S_V=s_v, P=parity(d))


def build_operator_set(d: int) -> OperatorSet:
    """
    Clock/shift pair with ``UV = e^{2 pi i / d} VU``.

    U and V are built twice, once diagonal in their own basis and once as the
    shift in the other basis, and the two forms are required to agree.
    """
    if d < 2:
        raise ValueError(f"operator set needs d >= 2, got {d}")
    f = dft_matrix(d)
    fh = f.conj().T
    U = clock(d)
    V = shift(d)
    # U as the k~ shift, V as diagonal on the dual basis
    U_dual = f @ shift(d) @ fh
    V_dual = f @ np.diag(np.exp(-2j * np.pi * index_range(d) / d)) @ fh
    err = max(np.max(np.abs(U - U_dual)), np.max(np.abs(V - V_dual)))
    if err > OPERATOR_TOL:
        raise ArithmeticError(f"the two constructions of U, V disagree by {err:.3e}")
    return _assemble(d, 2 * math.pi / d, U, V)


def clock_shift_pair(d: int, m: int) -> OperatorSet:
    """
    The pair ``(U, V^m)`` with its phase reduced into ``(0, pi]``.

    When ``2 pi m / d > pi`` U is replaced by its adjoint, which flips the sign
    of the phase, and ``phi = 2 pi - 2 pi m / d``.
    """
    if d < 2:
        raise ValueError(f"operator set needs d >= 2, got {d}")
    if not 1 <= m <= d - 1:
        raise ValueError(f"need 1 <= m <= d - 1, got m={m} for d={d}")
    U = clock(d)
    V = np.linalg.matrix_power(shift(d), m)
    if 2 * m <= d:
        phi = 2 * math.pi * m / d
    else:
        U = U.conj().T
        phi = 2 * math.pi * (d - m) / d
    return _assemble(d, phi, U, V)


def commutation_residual(ops: OperatorSet) -> float:
    """max |UV - e^{i phi} VU|."""
    return float(np.max(np.abs(ops.U @ ops.V - np.exp(1j * ops.phi) * ops.V @ ops.U)))


def analytic_uv_commutator_entry(j: int, jp: int, d: int) -> complex:
    """
    Closed form of ``<j|[u, v]|j'>`` for ``j != j'``.

    The diagonal is identically zero and is not covered here.
    """
    j, jp = int(j), int(jp)
    idx = index_range(d)
    for x in (j, jp):
        if not idx[0] <= x <= idx[-1]:
            raise ValueError(f"index {x} outside the range for d={d}")
    if j == jp:
        raise ValueError("diagonal entries are zero and not given by the closed form")
    n = j - jp
    x = math.pi * n / d
    value = 1j * (-1.0) ** (n + 1) * x / math.sin(x)
    if d % 2 == 0:
        value *= complex(math.cos(x), -math.sin(x))
    return complex(value)


def analytic_uv_commutator(d: int) -> ComplexMatrix:
    """Full ``[u, v]`` matrix from the closed form, zero diagonal."""
    idx = index_range(d)
    out = np.zeros((d, d), dtype=np.complex128)
    for a, j in enumerate(idx):
        for b, jp in enumerate(idx):
            if a != b:
                out[a, b] = analytic_uv_commutator_entry(j, jp, d)
    return out


@dataclass(frozen=True)
class HarperHamiltonian:
    theta: float
    d: int
    H: ComplexMatrix


def build_harper(theta: float, d: int, ops: OperatorSet | None = None) -> HarperHamiltonian:
    """``H = -cos(theta) C_U - sin(theta) C_V`` for ``0 <= theta <= pi/2``."""
    if not 0.0 <= theta <= math.pi / 2:
        raise ValueError(f"theta must lie in [0, pi/2], got {theta!r}")
    if d < 2:
        raise ValueError(f"Harper Hamiltonian needs d >= 2, got {d}")
    if ops is None:
        ops = build_operator_set(d)
    H = -math.cos(theta) * ops.C_U - math.sin(theta) * ops.C_V
    return HarperHamiltonian(theta=theta, d=d, H=(H + H.conj().T) / 2)


def translate(psi: StateVector, a: int, b: int, ops: OperatorSet) -> StateVector:
    """
    ``U^a V^{-b} |psi>``.

    Afterwards ``<U>`` has picked up ``e^{-2 pi i b / d}`` and ``<V>`` has
    picked up ``e^{-2 pi i a / d}``; the moduli are unchanged.
    """
    psi = check_state(psi, ops.d)
    return power(ops.U, int(a)) @ (power(ops.V, -int(b)) @ psi)


def power(w: ComplexMatrix, n: int) -> ComplexMatrix:
    """Integer power of a unitary matrix (negative powers use the adjoint)."""
    if n < 0:
        return np.linalg.matrix_power(w.conj().T, -n)
    return np.linalg.matrix_power(w, n)
