"""Command-line entry point.

Exit status is 0 on success, 1 when a checked inequality or identity fails
(the failing check is named in the output) and 2 on bad usage.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from . import asymptotics, minstates, signals, uncertainty
from .linalg import expectation
from .operators import build_harper, build_operator_set, clock_shift_pair, dft_matrix

TABULAR = {"figure1", "frontier"}


@dataclass
class RunConfig:
    command: str
    d: int = 8
    theta: float = math.pi / 4
    phi: float | None = None
    sigma: float = 1.0
    seed: int = 0
    count: int = 1000
    tolerance: float = 1e-10
    output_path: str = "-"
    format: str = ""
    m: int = 1
    d_min: int = 2
    d_max: int = 32
    points: int = minstates.DEFAULT_THETA_POINTS
    delta: float = 0.5
    du2: float | None = None
    dv2: float | None = None
    r1: float | None = None
    t1: float | None = None
    input_path: str | None = None
    workers: int = 1


@dataclass
class Outcome:
    """What a command produced plus the names of any failed checks."""

    payload: dict | list
    failures: list[str] = field(default_factory=list)
    header: list[str] | None = None


class UsageError(Exception):
    pass


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


# -- commands -------------------------------------------------------------------


def cmd_verify(cfg: RunConfig) -> Outcome:
    ops = clock_shift_pair(cfg.d, cfg.m) if cfg.m != 1 else build_operator_set(cfg.d)
    report = uncertainty.verify_random_states(cfg.d, cfg.count, cfg.seed, ops)
    fails = []
    if report.min_margin < -uncertainty.MARGIN_TOL:
        fails.append(f"theorem1_margin: min margin {report.min_margin!r} < -1e-10")
    if report.probe_max_abs_margin > 1e-12:
        fails.append(f"saturation_probes: |margin| {report.probe_max_abs_margin!r} > 1e-12")
    return Outcome(report.to_json(), fails)


def cmd_bound(cfg: RunConfig) -> Outcome:
    phi = cfg.phi if cfg.phi is not None else 2 * math.pi / cfg.d
    p = uncertainty.bound_params(phi)
    out = {"phi": phi, "A": p.A if math.isfinite(p.A) else "inf",
           "symmetric_bound": uncertainty.symmetric_bound(phi)}
    if cfg.du2 is not None and cfg.dv2 is not None:
        margin = uncertainty.theorem1_margin(cfg.du2, cfg.dv2, phi)
        out.update(dU2=cfg.du2, dV2=cfg.dv2, margin=margin,
                   allowed=margin >= -uncertainty.MARGIN_TOL)
    return Outcome(out)


def cmd_minstate(cfg: RunConfig) -> Outcome:
    ops = build_operator_set(cfg.d)
    res = minstates.harper_ground(cfg.theta, cfg.d, ops)
    H = build_harper(cfg.theta, cfg.d, ops).H
    fails = []
    states = []
    for psi, label in zip(res.ground_states, res.parity_labels):
        eig_res = float(np.max(np.abs(H @ psi - res.h_min * psi)))
        if eig_res > 1e-9:
            fails.append(f"eigen_residual: {eig_res!r} > 1e-9")
        real = minstates.realness_check(psi)
        if not res.degenerate and real > 1e-8:
            fails.append(f"realness: {real!r} > 1e-8")
        eu, ev = expectation(psi, ops.U), expectation(psi, ops.V)
        states.append({
            "parity": label,
            "absU": abs(eu), "absV": abs(ev),
            "dU2": 1 - abs(eu) ** 2, "dV2": 1 - abs(ev) ** 2,
            "realness": real,
            "amplitudes": [[z.real, z.imag] for z in psi],
        })
    support = cfg.theta
    best = max(math.cos(support) * s["absU"] + math.sin(support) * s["absV"] for s in states)
    if abs(best - res.max_value) > minstates.SUPPORT_TOL:
        fails.append(f"supporting_line: {best!r} != {res.max_value!r}")
    return Outcome({"d": cfg.d, "theta": cfg.theta, "h_min": res.h_min,
                    "max_value": res.max_value, "degenerate": res.degenerate,
                    "ground_states": states}, fails)


def cmd_figure1(cfg: RunConfig) -> Outcome:
    table = minstates.figure1_data(cfg.d_min, cfg.d_max, workers=cfg.workers)
    rows = [[r.d, r.exact_bound, r.theorem1_bound] for r in table.rows]
    return Outcome(rows, table.failures(), ["d", "exact_bound", "theorem1_bound"])


def cmd_frontier(cfg: RunConfig) -> Outcome:
    curve = minstates.frontier(cfg.d, minstates.default_theta_grid(cfg.points))
    fails = [f"supporting_line: theta={s.theta!r} residual {s.support_residual!r}"
             for s in curve.samples if s.support_residual > minstates.SUPPORT_TOL]
    return Outcome([list(r) for r in curve.rows()], fails, ["theta", "absU", "absV", "dU2", "dV2"])


def cmd_commutator_stats(cfg: RunConfig) -> Outcome:
    rep = asymptotics.commutator_spectrum(cfg.d, cfg.tolerance)
    fails = []
    if rep.trace_residual > 1e-6 * cfg.d:
        fails.append(f"trace: |sum lambda| = {rep.trace_residual!r} > 1e-6 d")
    return Outcome(rep.to_json(), fails)


def cmd_signal_check(cfg: RunConfig) -> Outcome:
    if cfg.input_path is None:
        if cfg.r1 is None or cfg.t1 is None:
            raise UsageError("signal-check needs --input FILE or both --r1 and --t1")
        v = signals.feasibility_audit(cfg.r1, cfg.t1, cfg.d)
        return Outcome({"d": cfg.d, "r1_mag": cfg.r1, "t1_mag": cfg.t1,
                        "margin": v.margin, "verdict": v.verdict})
    sig = signals.read_signal(cfg.input_path)
    verdict = signals.audit_signal(sig)
    dev_x = signals.spectral_identity_check(sig)
    dev_y = signals.intensity_ft_check(sig)
    fails = []
    if dev_x > signals.IDENTITY_TOL:
        fails.append(f"correlation_identity: deviation {dev_x!r} > 1e-12")
    if dev_y > signals.IDENTITY_TOL:
        fails.append(f"intensity_identity: deviation {dev_y!r} > 1e-12")
    if verdict.verdict == signals.INFEASIBLE:
        fails.append("feasibility: a realized signal was flagged INFEASIBLE")
    payload = signals.stats_to_json(sig, verdict)
    payload.update(margin=verdict.margin, correlation_deviation=dev_x, intensity_deviation=dev_y)
    return Outcome(payload, fails)


def cmd_gaussian(cfg: RunConfig) -> Outcome:
    g = asymptotics.make_gaussian(cfg.d, cfg.sigma)
    ops = build_operator_set(cfg.d)
    psi = g.state
    f = dft_matrix(cfg.d)
    a1 = asymptotics.lemma_a1_check(psi, ops, cfg.delta)
    a3 = asymptotics.expansion_residual(psi, ops, cfg.delta)
    proxy = asymptotics.dispersion_vs_variance(psi, ops)
    fails = []
    if not a1.holds():
        fails.append(f"lemma_a1: dU2 {a1.value!r} > bound {a1.bound!r}")
    if not a3.holds():
        fails.append(f"lemma_a3: residual {a3.value!r} > bound {a3.bound!r}")
    return Outcome({
        "d": cfg.d, "sigma": cfg.sigma, "delta": cfg.delta,
        "norm_squared": g.norm_squared, "predicted_norm_squared": g.predicted_norm_squared,
        "epsilon_U": asymptotics.membership_epsilon(psi, cfg.delta),
        "epsilon_V": asymptotics.dual_membership_epsilon(psi, cfg.delta),
        "dft_fidelity": abs(np.vdot(psi, f.conj().T @ psi)) ** 2,
        "dU2": proxy.dU2, "variance_proxy": proxy.proxy,
        "lemma_a1": {"dU2": a1.value, "bound": a1.bound, "slack": a1.slack},
        "lemma_a3": {"residual": a3.value, "bound": a3.bound, "slack": a3.slack},
    }, fails)


COMMANDS: dict[str, Callable[[RunConfig], Outcome]] = {
    "verify": cmd_verify,
    "bound": cmd_bound,
    "minstate": cmd_minstate,
    "figure1": cmd_figure1,
    "frontier": cmd_frontier,
    "commutator-stats": cmd_commutator_stats,
    "signal-check": cmd_signal_check,
    "gaussian": cmd_gaussian,
}


# -- plumbing -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dftuncertainty",
        description="Uncertainty relations for the DFT clock and shift operators.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--output", dest="output_path", default="-",
                       help="output file (default: stdout)")
        p.add_argument("--format", choices=["csv", "json"], default="")
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("verify", help="audit the bound on Haar-random states")
    p.add_argument("--d", type=int, default=8)
    p.add_argument("--m", type=int, default=1, help="use the pair (U, V^m)")
    p.add_argument("--count", type=int, default=1000)
    common(p)

    p = sub.add_parser("bound", help="evaluate the bound for a phase")
    p.add_argument("--d", type=int, default=8)
    p.add_argument("--phi", type=float, default=None, help="phase; defaults to 2 pi / d")
    p.add_argument("--du2", type=float, default=None)
    p.add_argument("--dv2", type=float, default=None)
    common(p)

    p = sub.add_parser("minstate", help="minimum-uncertainty state at one angle")
    p.add_argument("--d", type=int, default=8)
    p.add_argument("--theta", type=float, default=math.pi / 4)
    common(p)

    p = sub.add_parser("figure1", help="symmetric bound versus dimension (CSV)")
    p.add_argument("--d-min", type=int, default=2)
    p.add_argument("--d-max", type=int, default=32)
    p.add_argument("--workers", type=int, default=1)
    common(p)

    p = sub.add_parser("frontier", help="exact (|<U>|, |<V>|) frontier (CSV)")
    p.add_argument("--d", type=int, default=8)
    p.add_argument("--points", type=int, default=minstates.DEFAULT_THETA_POINTS)
    common(p)

    p = sub.add_parser("commutator-stats", help="spectrum statistics of the u, v commutator")
    p.add_argument("--d", type=int, default=801)
    p.add_argument("--tolerance", type=float, default=1e-10)
    common(p)

    p = sub.add_parser("signal-check", help="correlation identities and feasibility of a signal")
    p.add_argument("--input", dest="input_path", default=None,
                   help="CSV (j,re,im) or JSON ([[re, im], ...]) signal")
    p.add_argument("--d", type=int, default=8)
    p.add_argument("--r1", type=float, default=None, help="claimed |R(1)|")
    p.add_argument("--t1", type=float, default=None, help="claimed |T(1)|")
    common(p)

    p = sub.add_parser("gaussian", help="discretized Gaussian state diagnostics")
    p.add_argument("--d", type=int, default=256)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--delta", type=float, default=0.5)
    common(p)
    return parser


def resolve_config(ns: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(**{k: v for k, v in vars(ns).items() if v is not None or k in ("phi",)})
    if not cfg.format:
        cfg.format = "csv" if cfg.command in TABULAR else "json"
    if cfg.format == "csv" and cfg.command not in TABULAR:
        raise UsageError(f"{cfg.command} only writes JSON")
    for name in ("d", "count", "points", "workers"):
        if getattr(cfg, name) < 1:
            raise UsageError(f"--{name} must be positive")
    return cfg


def render(cfg: RunConfig, out: Outcome) -> str:
    config = _jsonable(asdict(cfg))
    if cfg.format == "json":
        body = {"config": config, "result": _jsonable(out.payload),
                "failures": out.failures, "status": "fail" if out.failures else "ok"}
        return json.dumps(body, indent=2) + "\n"
    buf = io.StringIO()
    buf.write("# config " + json.dumps(config, sort_keys=True) + "\n")
    for f in out.failures:
        buf.write(f"# FAILED {f}\n")
    buf.write(",".join(out.header) + "\n")
    for row in out.payload:
        buf.write(",".join(str(x) if isinstance(x, (int, np.integer)) else fmt(x) for x in row) + "\n")
    return buf.getvalue()


def run(cfg: RunConfig) -> tuple[int, str]:
    """Dispatch a resolved config; returns the exit status and the artifact text."""
    try:
        out = COMMANDS[cfg.command](cfg)
    except (np.linalg.LinAlgError, ArithmeticError) as exc:
        out = Outcome({}, [f"numerical: {exc}"], [])
        if cfg.format == "csv":
            out.payload = []
    except (ValueError, UsageError) as exc:
        raise UsageError(str(exc)) from exc
    return (1 if out.failures else 0), render(cfg, out)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = resolve_config(ns)
        status, text = run(cfg)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2
    if cfg.output_path == "-":
        sys.stdout.write(text)
    else:
        with open(cfg.output_path, "w") as fh:
            fh.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
