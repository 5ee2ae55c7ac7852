"""
Dense complex linear algebra kernel.

Matrices are plain ``numpy`` arrays of dtype ``complex128``; state vectors are
1-D arrays indexed by ascending ``j`` from ``-(d // 2)``.  The Hermitian
eigensolver is self-contained: Householder reduction to tridiagonal form, a
diagonal unitary that makes the off-diagonal real, then implicit-shift QL.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

ComplexMatrix = npt.NDArray[np.complex128]
StateVector = npt.NDArray[np.complex128]

HERMITIAN_RTOL = 1e-10
NORM_TOL = 1e-12
MAX_QL_ITERATIONS = 60


@dataclass(frozen=True)
class EigenDecomposition:
    """Ascending real eigenvalues and the matching orthonormal eigenvectors (columns)."""

    eigenvalues: npt.NDArray[np.float64]
    eigenvectors: ComplexMatrix

    def degenerate_with_lowest(self, scale: float) -> int:
        """Number of eigenvalues degenerate with the smallest one."""
        thr = degeneracy_threshold(scale)
        return int(np.count_nonzero(self.eigenvalues - self.eigenvalues[0] <= thr))


def degeneracy_threshold(frobenius_norm: float) -> float:
    return 1e-9 * max(1.0, frobenius_norm)


def as_matrix(a) -> ComplexMatrix:
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def adjoint(a) -> ComplexMatrix:
    return as_matrix(a).conj().T


def matmul(a, b) -> ComplexMatrix:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"inner dimensions disagree: {a.shape} @ {b.shape}")
    return a @ b


def commutator(a, b) -> ComplexMatrix:
    return matmul(a, b) - matmul(b, a)


def is_unitary(a, tol: float = 1e-12) -> bool:
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"unitarity needs a square matrix, got {a.shape}")
    return float(np.max(np.abs(a.conj().T @ a - np.eye(a.shape[0])))) <= tol


def hermitian_asymmetry(a: ComplexMatrix) -> float:
    return float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0


def check_hermitian(a, rtol: float = HERMITIAN_RTOL) -> ComplexMatrix:
    """Validate ``a`` as square and Hermitian; return it as a complex array."""
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got {a.shape}")
    asym = hermitian_asymmetry(a)
    scale = max(float(np.max(np.abs(a))) if a.size else 0.0, 1.0)
    if asym > rtol * scale:
        raise ValueError(
            f"matrix is not Hermitian: max |M - M^H| = {asym:.3e} "
            f"exceeds {rtol:g} relative to max|M| = {scale:.3e}"
        )
    return a


def expectation(psi: StateVector, op: ComplexMatrix) -> complex:
    return complex(np.vdot(psi, op @ psi))


def check_state(psi, d: int | None = None) -> StateVector:
    """Return ``psi`` as a normalized complex vector or raise."""
    v = np.asarray(psi, dtype=np.complex128)
    if v.ndim != 1:
        raise ValueError(f"state must be 1-D, got shape {v.shape}")
    if d is not None and v.shape[0] != d:
        raise ValueError(f"state has dimension {v.shape[0]}, expected {d}")
    norm2 = float(np.vdot(v, v).real)
    if abs(norm2 - 1.0) > NORM_TOL:
        raise ValueError(f"state is not normalized: sum |c_j|^2 = {norm2!r}")
    return v


def normalize(psi) -> StateVector:
    v = np.asarray(psi, dtype=np.complex128)
    n = np.linalg.norm(v)
    if n == 0:
        raise ValueError("cannot normalize the zero vector")
    return v / n


# -- random objects ---------------------------------------------------------
#
# Every random draw goes through numpy's PCG64 bit generator seeded with the
# caller's 64-bit integer (``numpy.random.default_rng(seed)``).


def make_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(np.uint64(seed % 2**64))


def complex_gaussian(rng: np.random.Generator, shape) -> npt.NDArray[np.complex128]:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2)


def haar_state(d: int, rng: np.random.Generator) -> StateVector:
    """Haar-uniform pure state: normalized vector of iid standard complex Gaussians."""
    return normalize(complex_gaussian(rng, d))


def haar_states(d: int, count: int, rng: np.random.Generator) -> npt.NDArray[np.complex128]:
    """``count`` Haar states as the rows of a ``(count, d)`` array."""
    z = complex_gaussian(rng, (count, d))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def random_hermitian(d: int, rng: np.random.Generator) -> ComplexMatrix:
    z = complex_gaussian(rng, (d, d))
    return (z + z.conj().T) / 2


# -- eigensolver --------------------------------------------------------------


def _tridiagonalize(a: ComplexMatrix):
    """Householder reduction ``a = Q T Q^H``.

    Returns the real diagonal, the complex subdiagonal ``T[k+1, k]`` and Q.
    ``a`` is overwritten.
    """
    n = a.shape[0]
    q = np.eye(n, dtype=np.complex128)
    for k in range(n - 2):
        x = a[k + 1:, k]
        tail = np.linalg.norm(x[1:])
        if tail == 0.0:
            continue
        alpha = x[0]
        xnorm = math.hypot(abs(alpha), tail)
        phase = alpha / abs(alpha) if alpha != 0 else 1.0
        w = x.copy()
        w[0] += phase * xnorm
        w /= np.linalg.norm(w)

        b = a[k + 1:, k + 1:]
        p = b @ w
        kappa = np.vdot(w, p).real
        p -= kappa * w
        b -= 2.0 * (np.outer(w, p.conj()) + np.outer(p, w.conj()))

        beta = -phase * xnorm
        a[k + 1:, k] = 0.0
        a[k, k + 1:] = 0.0
        a[k + 1, k] = beta
        a[k, k + 1] = np.conj(beta)

        qk = q[:, k + 1:]
        qk -= 2.0 * np.outer(qk @ w, w.conj())
    diag = np.real(np.diagonal(a)).copy()
    sub = np.diagonal(a, -1).copy()
    return diag, sub, q


def _tridiagonal_ql(d: np.ndarray, e: np.ndarray, zt: np.ndarray) -> None:
    """Implicit-shift QL on a real symmetric tridiagonal matrix.

    ``d`` holds the diagonal, ``e[i]`` couples ``i`` and ``i + 1`` (``e[-1]`` is
    ignored).  On return ``d`` holds the eigenvalues and the rows of ``zt``
    have been rotated so that row ``i`` is the i-th eigenvector.
    """
    n = d.shape[0]
    eps = np.finfo(float).eps
    e[n - 1] = 0.0
    # couplings below eps * ||T|| are negligible in the backward sense; without
    # this floor a tight cluster of equal eigenvalues can stall the iteration
    floor = eps * float(np.max(np.abs(d) + np.abs(e) + np.abs(np.roll(e, 1)))) if n else 0.0
    rot = np.empty((2, 2))
    for l in range(n):
        iterations = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= eps * dd or abs(e[m]) <= floor:
                    break
                m += 1
            if m == l:
                break
            iterations += 1
            if iterations > MAX_QL_ITERATIONS:
                raise np.linalg.LinAlgError(f"QL iteration did not converge for eigenvalue {l}")
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            underflow = False
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                rot[0, 0] = c
                rot[0, 1] = -s
                rot[1, 0] = s
                rot[1, 1] = c
                zt[i:i + 2] = rot @ zt[i:i + 2]
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0


def hermitian_eigendecomposition(m) -> EigenDecomposition:
    """
    Eigendecomposition of a Hermitian matrix.

    Parameters
    ----------
    m : array_like
        Square matrix, Hermitian to within ``1e-10`` relative to ``max|m|``.
        The Hermitian part ``(m + m^H) / 2`` is what gets diagonalized.

    Returns
    -------
    EigenDecomposition
        Eigenvalues in ascending order and a unitary matrix whose k-th column
        is the eigenvector of the k-th eigenvalue.

    Raises
    ------
    ValueError
        If ``m`` is not square, has non-finite entries, or is not Hermitian;
        the message names the maximal asymmetry.
    """
    a = check_hermitian(m)
    n = a.shape[0]
    if n == 0:
        return EigenDecomposition(np.zeros(0), np.zeros((0, 0), dtype=np.complex128))
    a = (a + a.conj().T) / 2
    diag, sub, q = _tridiagonalize(a)

    # D^H T D is real symmetric for D = diag(prod of subdiagonal phases)
    phases = np.ones(n, dtype=np.complex128)
    off = np.abs(sub)
    for k in range(n - 1):
        # exp(i arg) rather than sub/|sub|, which overflows for subnormal entries
        ph = np.exp(1j * np.angle(sub[k])) if off[k] != 0 else 1.0
        phases[k + 1] = phases[k] * ph
    q *= phases[np.newaxis, :]

    e = np.zeros(n)
    e[: n - 1] = off
    zt = np.eye(n)
    _tridiagonal_ql(diag, e, zt)

    order = np.argsort(diag, kind="stable")
    vectors = q @ zt[order].T
    return EigenDecomposition(diag[order], vectors)
