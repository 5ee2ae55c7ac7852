"""
Periodic signals, their correlation statistics and a feasibility audit.

A normalized signal ``c_j`` of period d is a state; its cyclic autocorrelation
at lag m is ``<V^m>`` and the Fourier transform of its intensity at n is
``<U^n>``.  The uncertainty bound therefore constrains which pairs
``(|R(1)|, |T(1)|)`` a signal can have.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .linalg import StateVector
from .operators import index_range, position
from .uncertainty import MARGIN_TOL, theorem1_margin

INFEASIBLE = "INFEASIBLE"
UNDECIDED = "OTHERWISE-UNDECIDED"
IDENTITY_TOL = 1e-12


@dataclass(frozen=True)
class PeriodicSignal:
    samples: StateVector
    normalized: bool

    @property
    def d(self) -> int:
        return int(self.samples.shape[0])


def make_signal(samples) -> PeriodicSignal:
    """Wrap raw samples (ascending j), rescaled to unit energy."""
    c = np.asarray(samples, dtype=np.complex128)
    if c.ndim != 1 or c.shape[0] < 1:
        raise ValueError("a signal needs a non-empty 1-D sample array")
    if not np.all(np.isfinite(c)):
        raise ValueError("signal has non-finite samples")
    energy = float(np.vdot(c, c).real)
    if energy == 0.0:
        raise ValueError("the zero signal cannot be normalized")
    return PeriodicSignal(c / math.sqrt(energy), True)


def spectrum(c: PeriodicSignal) -> np.ndarray:
    """``c~_k = d^{-1/2} sum_j e^{-2 pi i j k / d} c_j`` for k in the centered range."""
    j = index_range(c.d)
    kernel = np.exp(-2j * np.pi * np.mod(np.outer(j, j), c.d) / c.d)
    return kernel @ c.samples / math.sqrt(c.d)


def autocorrelation(c: PeriodicSignal, m: int) -> complex:
    """``R(m) = sum_j conj(c_{j+m}) c_j`` with cyclic index arithmetic."""
    return complex(np.vdot(np.roll(c.samples, -int(m)), c.samples))


def intensity_ft(c: PeriodicSignal, n: int) -> complex:
    """``T(n) = sum_j |c_j|^2 e^{2 pi i j n / d}``."""
    j = index_range(c.d)
    return complex(np.sum(np.abs(c.samples) ** 2 * np.exp(2j * np.pi * np.mod(j * n, c.d) / c.d)))


def _phase_table(d: int, sign: int) -> np.ndarray:
    """``exp(sign 2 pi i a b / d)`` over centered indices a (rows) and b (columns)."""
    j = index_range(d)
    return np.exp(sign * 2j * np.pi * np.mod(np.outer(j, j), d) / d)


def _cyclic_table(d: int) -> np.ndarray:
    """Position of ``j + m`` for lag m (rows, centered) and index j (columns)."""
    return (np.arange(d)[None, :] + index_range(d)[:, None]) % d


def correlation_all(c: PeriodicSignal) -> np.ndarray:
    """``R(m)`` for every lag m in the centered range."""
    return np.sum(c.samples.conj()[_cyclic_table(c.d)] * c.samples[None, :], axis=1)


def intensity_ft_all(c: PeriodicSignal) -> np.ndarray:
    """``T(n)`` for every n in the centered range."""
    return _phase_table(c.d, +1) @ (np.abs(c.samples) ** 2)


def spectral_identity_check(c: PeriodicSignal) -> float:
    """Max deviation between ``R(m)`` and ``sum_k e^{-2 pi i k m / d} |c~_k|^2`` over all m."""
    rhs = _phase_table(c.d, -1) @ (np.abs(spectrum(c)) ** 2)
    return float(np.max(np.abs(correlation_all(c) - rhs)))


def intensity_ft_check(c: PeriodicSignal) -> float:
    """Max deviation between ``T(n)`` and ``sum_k conj(c~_{k+n}) c~_k`` over all n."""
    ct = spectrum(c)
    rhs = np.sum(ct.conj()[_cyclic_table(c.d)] * ct[None, :], axis=1)
    return float(np.max(np.abs(intensity_ft_all(c) - rhs)))


@dataclass(frozen=True)
class SignalStats:
    d: int
    correlation: list[complex]
    intensity_ft: list[complex]


def signal_stats(c: PeriodicSignal) -> SignalStats:
    return SignalStats(c.d, [complex(z) for z in correlation_all(c)],
                       [complex(z) for z in intensity_ft_all(c)])


@dataclass(frozen=True)
class Verdict:
    verdict: str
    margin: float


def feasibility_audit(r1_mag: float, t1_mag: float, d: int) -> Verdict:
    """
    Can a period-d signal have ``|R(1)| = r1_mag`` and ``|T(1)| = t1_mag``?

    Only impossibility can be certified; a satisfied bound leaves the question
    open for ``d > 2``.
    """
    for name, x in (("r1_mag", r1_mag), ("t1_mag", t1_mag)):
        if not 0.0 <= x <= 1.0:
            raise ValueError(f"{name} must lie in [0, 1], got {x!r}")
    if d < 2:
        raise ValueError(f"need d >= 2, got {d}")
    margin = theorem1_margin(1.0 - t1_mag ** 2, 1.0 - r1_mag ** 2, 2 * math.pi / d)
    return Verdict(INFEASIBLE if margin < -MARGIN_TOL else UNDECIDED, margin)


def audit_signal(c: PeriodicSignal) -> Verdict:
    return feasibility_audit(min(1.0, abs(autocorrelation(c, 1))),
                             min(1.0, abs(intensity_ft(c, 1))), c.d)


# -- file formats -------------------------------------------------------------


def read_signal(path: str | Path) -> PeriodicSignal:
    """
    Load a signal from CSV (columns ``j,re,im``) or JSON (``[[re, im], ...]``
    in ascending-j order).  The format is picked from the file suffix.
    """
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".json":
        return parse_signal_json(text)
    return parse_signal_csv(text)


def parse_signal_json(text: str) -> PeriodicSignal:
    pairs = json.loads(text)
    if not isinstance(pairs, list) or not all(isinstance(p, list) and len(p) == 2 for p in pairs):
        raise ValueError("JSON signal must be an array of [re, im] pairs")
    return make_signal([complex(float(re), float(im)) for re, im in pairs])


def parse_signal_csv(text: str) -> PeriodicSignal:
    rows = list(csv.DictReader(io.StringIO(text)))
    if not rows or not {"j", "re", "im"} <= set(rows[0]):
        raise ValueError("CSV signal needs the header j,re,im")
    d = len(rows)
    samples = np.zeros(d, dtype=np.complex128)
    seen = set()
    lo, hi = -(d // 2), (d - 1) // 2
    for row in rows:
        j = int(row["j"])
        if not lo <= j <= hi:
            raise ValueError(f"index j={j} outside {lo}..{hi} for {d} samples")
        if j in seen:
            raise ValueError(f"index j={j} given twice")
        seen.add(j)
        samples[position(j, d)] = complex(float(row["re"]), float(row["im"]))
    return make_signal(samples)


def stats_to_json(c: PeriodicSignal, verdict: Verdict) -> dict:
    st = signal_stats(c)
    return {
        "d": st.d,
        "R": [[z.real, z.imag] for z in st.correlation],
        "T": [[z.real, z.imag] for z in st.intensity_ft],
        "verdict": verdict.verdict,
    }
