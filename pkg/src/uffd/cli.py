"""Command line entry point: ``uffd {construct,verify,decode,simulate,bound}``.

Exit codes: 0 success / property holds, 1 property fails, 2 ambiguous decode,
3 inconsistent decode, 4 construction retries exhausted, 64 usage error,
65 malformed matrix file, 66 missing input file, 70 verifier disagreement.
"""
from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from . import __version__
from .bitmatrix import BitVector, CodeMatrix, MatrixFormatError
from .construct import MAX_RETRIES, THRESHOLD_RULES, EnsembleParams, RetriesExhausted, build_uffd2
from .decoders import ALGORITHMS, AMBIGUOUS, INCONSISTENT, BudgetExceeded, decode, simulate_batch
from .properties import (
    DEFAULT_MAX_SUBSETS,
    PROPERTIES,
    ResourceLimitError,
    check_hierarchy,
    is_disjunctive,
    is_ssm,
    is_uffd,
    is_union_free,
)
from .ratebound import (
    collision_probs,
    coverage_q,
    inner_min,
    known_bounds,
    optimize_rate,
    r0,
    r1,
)

EX_USAGE, EX_DATAERR, EX_NOINPUT, EX_SOFTWARE = 64, 65, 66, 70
EXIT_FAILS, EXIT_AMBIGUOUS, EXIT_INCONSISTENT, EXIT_RETRIES = 1, 2, 3, 4

U64 = 1 << 64


class UsageError(Exception):
    def __init__(self, message: str, code: int = EX_USAGE):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def load_matrix(path: str | os.PathLike) -> CodeMatrix:
    return CodeMatrix.from_text(Path(path).read_text())


def save_matrix(C: CodeMatrix, path: str | os.PathLike) -> None:
    with open(path, "w", newline="\n") as f:
        f.write(C.to_text())


@dataclass
class RunConfig:
    command: str
    matrix: str | None = None
    d: int | None = None
    seed: int = 0
    prop: str | None = None
    algo: str | None = None
    outcome: str | None = None
    trials: int = 0
    threads: int = 1
    t: int | None = None
    p: float | None = None
    n: int | None = None
    w: int | None = None
    alpha: float | None = None
    threshold: str = "sqrt-half-n"
    out: str | None = None
    report: str | None = None
    trace: str | None = None
    mode: str | None = None
    max_subsets: int = DEFAULT_MAX_SUBSETS
    ssm_method: str = "closure"
    max_retries: int = MAX_RETRIES
    p_grid: int = 200


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="uffd", description="Group testing codes with fast decoding.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("construct", help="random 2-UFFD code via expurgation")
    c.add_argument("--t", type=int, required=True)
    c.add_argument("--p", type=float, required=True)
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--threshold", choices=THRESHOLD_RULES, default="sqrt-half-n")
    c.add_argument("--max-retries", type=int, default=MAX_RETRIES)
    c.add_argument("--out", required=True)
    c.add_argument("--report", help="sidecar report path (default: OUT.report)")

    v = sub.add_parser("verify", help="check code-family properties exhaustively")
    v.add_argument("--matrix", required=True)
    v.add_argument("--d", type=int, required=True)
    v.add_argument(
        "--property", dest="prop", default="all",
        choices=["union-free", "disjunctive", "ssm", "uffd", "all"],
    )
    v.add_argument("--ssm-method", choices=["closure", "enumerate"], default="closure")
    v.add_argument("--max-subsets", type=int, default=DEFAULT_MAX_SUBSETS,
                   help="subset budget for --ssm-method enumerate")

    dec = sub.add_parser("decode", help="recover defectives from an outcome vector")
    dec.add_argument("--matrix", required=True)
    dec.add_argument("--outcome", required=True)
    dec.add_argument("--d", type=int, required=True)
    dec.add_argument("--algo", choices=ALGORITHMS, default="uffd")

    s = sub.add_parser("simulate", help="decode random defective sets")
    s.add_argument("--matrix", required=True)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--algo", choices=ALGORITHMS, default="uffd")
    s.add_argument("--trials", type=int, default=100)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--threads", type=int, default=1)

    b = sub.add_parser("bound", help="rate bound for 2-UFFD codes")
    b.add_argument("--mode", choices=["optimize", "eval", "probs", "known"], default="optimize")
    b.add_argument("--p", type=float)
    b.add_argument("--alpha", type=float)
    b.add_argument("--t", type=int)
    b.add_argument("--w", type=int)
    b.add_argument("--d", type=int)
    b.add_argument("--p-grid", type=int, default=200)
    b.add_argument("--trace", help="write p,R0,R1 grid as CSV lines")
    return parser


def parse_args(argv: Sequence[str]) -> RunConfig:
    """Parse and validate; raises :class:`UsageError` without side effects."""
    ns = _build_parser().parse_args(list(argv))
    cfg = RunConfig(**{k: v for k, v in vars(ns).items() if v is not None})
    _validate(cfg)
    return cfg


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise UsageError(message)


def _validate(cfg: RunConfig) -> None:
    cmd = cfg.command
    if cfg.d is not None:
        _require(cfg.d >= 1, f"--d must be >= 1, got {cfg.d}")
    _require(0 <= cfg.seed < U64, "--seed must be an unsigned 64-bit integer")
    if cmd in ("verify", "decode", "simulate"):
        if not Path(cfg.matrix).is_file():
            raise UsageError(f"matrix file not found: {cfg.matrix}", EX_NOINPUT)
    if cmd == "verify":
        _require(cfg.max_subsets >= 1, "--max-subsets must be positive")
    elif cmd == "decode":
        _require(
            bool(cfg.outcome) and set(cfg.outcome) <= {"0", "1"},
            f"--outcome must be a 0/1 string, got {cfg.outcome!r}",
        )
    elif cmd == "simulate":
        _require(cfg.trials >= 0, "--trials must be >= 0")
        _require(cfg.threads >= 1, "--threads must be >= 1")
    elif cmd == "construct":
        _require(cfg.t >= 1, "--t must be >= 1")
        _require(0 < cfg.p < 1, "--p must lie in (0, 1)")
        _require(cfg.n >= 2, "--n must be >= 2")
        _require(cfg.max_retries >= 0, "--max-retries must be >= 0")
        try:
            EnsembleParams(cfg.t, cfg.p, cfg.n, cfg.seed)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        out_dir = Path(cfg.out).resolve().parent
        _require(out_dir.is_dir(), f"output directory does not exist: {out_dir}")
    elif cmd == "bound":
        _require(cfg.p_grid >= 3, "--p-grid must be >= 3")
        if cfg.mode == "eval":
            _require(cfg.p is not None and 0 < cfg.p < 1, "--mode eval needs --p in (0, 1)")
            if cfg.alpha is not None:
                hi = min(2 * cfg.p, 1.0)
                _require(cfg.p < cfg.alpha < hi, f"--alpha must lie in ({cfg.p}, {hi})")
        elif cfg.mode == "probs":
            _require(cfg.t is not None and cfg.w is not None, "--mode probs needs --t and --w")
            _require(1 <= cfg.w <= cfg.t, "need 1 <= w <= t")
        elif cfg.mode == "known":
            _require(cfg.d is not None and cfg.d >= 2, "--mode known needs --d >= 2")
        if cfg.trace is not None:
            _require(cfg.mode == "optimize", "--trace is only available with --mode optimize")


def _emit(out, key: str, value) -> None:
    out.write(f"{key}={value}\n")


def run(cfg: RunConfig, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        return _COMMANDS[cfg.command](cfg, out, err)
    except MatrixFormatError as exc:
        err.write(f"{cfg.matrix}: {exc}\n")
        return EX_DATAERR
    except (ResourceLimitError, BudgetExceeded) as exc:
        err.write(f"resource limit: {exc}\n")
        return EX_SOFTWARE


def _run_construct(cfg: RunConfig, out, err) -> int:
    params = EnsembleParams(cfg.t, cfg.p, cfg.n, cfg.seed)
    try:
        C, report = build_uffd2(params, cfg.threshold, cfg.max_retries)
    except RetriesExhausted as exc:
        err.write(f"{exc}\n")
        return EXIT_RETRIES
    save_matrix(C, cfg.out)
    report_path = cfg.report or f"{cfg.out}.report"
    Path(report_path).write_text(report.to_text())
    out.write(report.to_text())
    return 0


_PROPERTY_FUNCS = {
    "union-free": is_union_free,
    "disjunctive": is_disjunctive,
    "uffd": is_uffd,
}


def _run_verify(cfg: RunConfig, out, err) -> int:
    C = load_matrix(cfg.matrix)
    if cfg.prop == "all":
        hier = check_hierarchy(C, cfg.d, strict=False, ssm_method=cfg.ssm_method)
        for line in hier.lines():
            out.write(line + "\n")
        if hier.violations:
            err.write(f"verifier disagreement: {', '.join(hier.violations)}\n")
            return EX_SOFTWARE
        return 0 if all(hier.table[p].holds for p in PROPERTIES) else EXIT_FAILS
    if cfg.prop == "ssm":
        report = is_ssm(C, cfg.d, method=cfg.ssm_method, max_subsets=cfg.max_subsets)
    else:
        report = _PROPERTY_FUNCS[cfg.prop](C, cfg.d)
    out.write(report.describe() + "\n")
    return 0 if report.holds else EXIT_FAILS


def _run_decode(cfg: RunConfig, out, err) -> int:
    C = load_matrix(cfg.matrix)
    if len(cfg.outcome) != C.t:
        err.write(f"--outcome has length {len(cfg.outcome)}, matrix has t={C.t}\n")
        return EX_USAGE
    res = decode(C, BitVector.from_string(cfg.outcome), cfg.d, cfg.algo)
    if res.status == AMBIGUOUS:
        out.write("ambiguous\n")
        return EXIT_AMBIGUOUS
    if res.status == INCONSISTENT:
        out.write("inconsistent\n")
        return EXIT_INCONSISTENT
    out.write(" ".join(map(str, res.defectives)) + "\n")
    return 0


def _run_simulate(cfg: RunConfig, out, err) -> int:
    C = load_matrix(cfg.matrix)
    trials = simulate_batch(C, cfg.d, cfg.algo, cfg.trials, cfg.seed, cfg.threads)
    for k, trial in enumerate(trials):
        out.write(trial.line(k) + "\n")
    wins = sum(tr.success for tr in trials)
    _emit(out, "trials", len(trials))
    _emit(out, "successes", wins)
    _emit(out, "success_rate", f"{wins / len(trials):.6f}" if trials else "nan")
    _emit(out, "max_step1_size", max((tr.step1_size for tr in trials), default=0))
    _emit(out, "max_candidates", max((tr.candidates_examined for tr in trials), default=0))
    return 0


def _run_bound(cfg: RunConfig, out, err) -> int:
    if cfg.mode == "optimize":
        res = optimize_rate(p_points=cfg.p_grid)
        _emit(out, "rate", f"{res.rate:.10f}")
        _emit(out, "p_star", f"{res.p_star:.10f}")
        _emit(out, "r0_at_p_star", f"{res.r0_star:.10f}")
        _emit(out, "r1_at_p_star", f"{res.r1_star:.10f}")
        _emit(out, "alpha_star_r0", f"{res.alpha_star_r0:.10f}")
        _emit(out, "alpha_star_r1", f"{res.alpha_star_r1:.10f}")
        _emit(out, "binding", res.binding)
        if cfg.trace:
            Path(cfg.trace).write_text(
                "".join(f"{p:.10f},{a:.10f},{b:.10f}\n" for p, a, b in res.trace)
            )
    elif cfg.mode == "eval":
        _emit(out, "p", cfg.p)
        if cfg.alpha is not None:
            _emit(out, "alpha", cfg.alpha)
            _emit(out, "r0", f"{r0(cfg.p, cfg.alpha):.10f}")
            _emit(out, "r1", f"{r1(cfg.p, cfg.alpha):.10f}")
        else:
            a0, v0 = inner_min(r0, cfg.p)
            a1, v1 = inner_min(r1, cfg.p)
            _emit(out, "R0", f"{v0:.10f}")
            _emit(out, "alpha_star_r0", f"{a0:.10f}")
            _emit(out, "R1", f"{v1:.10f}")
            _emit(out, "alpha_star_r1", f"{a1:.10f}")
            _emit(out, "rate", f"{min(v0, v1):.10f}")
    elif cfg.mode == "probs":
        cp = collision_probs(cfg.t, cfg.w)
        _emit(out, "t", cfg.t)
        _emit(out, "w", cfg.w)
        _emit(out, "P0", cp.P0)
        _emit(out, "P0_float", f"{float(cp.P0):.12e}")
        _emit(out, "P1", cp.P1)
        _emit(out, "P1_float", f"{float(cp.P1):.12e}")
        if 2 * cfg.w <= cfg.t:
            q = coverage_q(cfg.t, cfg.w)
            _emit(out, "q", q.q)
            _emit(out, "log2_q_per_t", f"{q.log2_q_per_t:.10f}")
            _emit(out, "exponent_2p_minus_h", f"{q.exponent:.10f}")
    else:
        kb = known_bounds(cfg.d)
        _emit(out, "d", kb.d)
        for name in ("union_free", "disjunctive", "ssm", "uffd"):
            value = getattr(kb, name)
            if value is not None:
                _emit(out, f"{name}_lower", value[0])
                _emit(out, f"{name}_upper", value[1])
        _emit(out, "asymptotic_lower", f"{kb.asymptotic[0]:.10f}")
        _emit(out, "asymptotic_upper", f"{kb.asymptotic[1]:.10f}")
        _emit(out, "asymptotic_only", int(kb.asymptotic_only))
    return 0


_COMMANDS = {
    "construct": _run_construct,
    "verify": _run_verify,
    "decode": _run_decode,
    "simulate": _run_simulate,
    "bound": _run_bound,
}


def main(argv: Sequence[str] | None = None) -> int:
    try:
        cfg = parse_args(sys.argv[1:] if argv is None else argv)
    except UsageError as exc:
        sys.stderr.write(f"{exc}\n")
        return exc.code
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
