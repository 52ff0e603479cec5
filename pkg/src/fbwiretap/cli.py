"""Command-line entry point: ``fbwiretap <command> ...``.

Exit codes: 0 success, 2 invalid input, 3 I/O failure, 4 a verifier
reported counterexample candidates (the report is still written).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import auxverify, equivocation, montecarlo, region, schemes
from .entropy import DomainError, check_crossover

SCHEMA_VERSION = 1
EXIT_OK, EXIT_INPUT, EXIT_IO, EXIT_COUNTEREXAMPLE = 0, 2, 3, 4

RATE_SCHEMES = ("wyner", "pure", "repetition", "mixed", "reversed", "best")
DERIVED_COLUMNS = ("improvement", "gamma_star", "n_star")


class InputError(Exception):
    """Bad command-line input detected after argument parsing."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_INPUT)


# ---------------------------------------------------------------------------
# argument types


def _crossover(text: str) -> float:
    try:
        return check_crossover(float(text))
    except (ValueError, DomainError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number") from None
    if not v > 0 or math.isinf(v):
        raise argparse.ArgumentTypeError(f"{text!r} must be positive and finite")
    return v


def _nonneg_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number") from None
    if not v >= 0 or math.isinf(v):
        raise argparse.ArgumentTypeError(f"{text!r} must be non-negative and finite")
    return v


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"{text!r} must be >= 1")
    return v


def _seed(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return v


def _column_list(text: str) -> list[str]:
    cols = [c.strip() for c in text.split(",") if c.strip()]
    bad = [c for c in cols if c not in RATE_SCHEMES + DERIVED_COLUMNS]
    if bad or not cols:
        raise argparse.ArgumentTypeError(
            f"unknown column(s) {bad}; choose from {', '.join(RATE_SCHEMES + DERIVED_COLUMNS)}")
    return cols


def _crossover_list(text: str) -> list[float]:
    return [_crossover(t) for t in text.split(",") if t.strip()]


# ---------------------------------------------------------------------------
# output helpers


def _jsonable(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, np.generic):
        return _jsonable(obj.item())
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if hasattr(obj, "value") and isinstance(getattr(obj, "value"), str):
        return obj.value
    return obj


def _config(args: argparse.Namespace) -> dict[str, Any]:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("func",)}


def _emit(args: argparse.Namespace, result: Any) -> None:
    doc = {"schema": SCHEMA_VERSION, "command": args.command, "config": _config(args),
           "result": result}
    text = json.dumps(_jsonable(doc), indent=2, sort_keys=False, allow_nan=False) + "\n"
    out = getattr(args, "json_out", None)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    sys.stdout.write(text)


def _fmt(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    return f"{float(v):.12g}"


def write_csv(path: str, header: Sequence[str], rows: Sequence[Sequence[Any]]) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    Path(path).write_text(buf.getvalue(), encoding="utf-8")


# ---------------------------------------------------------------------------
# rate and sweep


def _channels(args) -> schemes.SystemChannels:
    eb = 0.0 if args.eb is None else args.eb
    db = 0.0 if args.db is None else args.db
    return schemes.SystemChannels(args.ef, args.df, eb, db)


def cmd_rate(args) -> int:
    if args.scheme != "wyner" and (args.eb is None or args.db is None):
        raise InputError(f"--scheme {args.scheme} needs --eb and --db")
    ch = _channels(args)
    if args.scheme == "repetition":
        report = schemes.optimize_repetition(ch, n_max=args.n_max)
    else:
        report = schemes.SCHEME_FUNCS[args.scheme](ch)
    _emit(args, report.to_dict())
    return EXIT_OK


@dataclass(frozen=True)
class SweepConfig:
    eps_f: float
    delta_f: float
    eps_b_range: tuple[float, float, float]
    delta_b_range: tuple[float, float, float]
    columns: tuple[str, ...]
    n_max: int = 15

    def __post_init__(self):
        for lo, hi, step in (self.eps_b_range, self.delta_b_range):
            check_crossover(lo)
            check_crossover(hi)
            if step <= 0 or hi < lo:
                raise DomainError("ranges need lo <= hi and step > 0")
        needs_mixed = {"mixed", "gamma_star"} & set(self.columns)
        if needs_mixed and not self.eps_f < self.delta_f:
            raise DomainError(f"column(s) {sorted(needs_mixed)} need eps_f < delta_f")

    @property
    def header(self) -> list[str]:
        return ["eps_b", "delta_b", *self.columns]


def grid_axis(lo: float, hi: float, step: float) -> list[float]:
    """lo, lo + step, ... up to hi, with the count fixed before any float accumulation."""
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return [round(lo + i * step, 12) for i in range(count)]


def _regular_rate(ch: schemes.SystemChannels) -> float:
    if ch.c_ab > ch.c_ae:
        return schemes.mixed_feedback_rate(ch).overall_rate
    return schemes.pure_feedback_rate(ch).overall_rate


def sweep_point(cfg: SweepConfig, eps_b: float, delta_b: float) -> list[Any]:
    ch = schemes.SystemChannels(cfg.eps_f, cfg.delta_f, eps_b, delta_b)
    cache: dict[str, schemes.SchemeReport] = {}

    def report(name: str) -> schemes.SchemeReport:
        if name not in cache:
            if name == "repetition":
                cache[name] = schemes.optimize_repetition(ch, n_max=cfg.n_max)
            else:
                cache[name] = schemes.SCHEME_FUNCS[name](ch)
        return cache[name]

    row: list[Any] = [eps_b, delta_b]
    for col in cfg.columns:
        if col in RATE_SCHEMES:
            row.append(report(col).overall_rate)
        elif col == "improvement":
            row.append(max(0.0, report("reversed").overall_rate - _regular_rate(ch)))
        elif col == "gamma_star":
            row.append(report("mixed").detail["gamma_star"])
        else:
            row.append(report("repetition").detail["n_star"])
    return row


def _sweep_task(job):
    cfg, eb, db = job
    return sweep_point(cfg, eb, db)


def sweep_rows(cfg: SweepConfig, workers: int = 1) -> list[list[Any]]:
    """Rows in canonical order: eps_b outer, delta_b inner."""
    jobs = [(cfg, eb, db) for eb in grid_axis(*cfg.eps_b_range) for db in grid_axis(*cfg.delta_b_range)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_sweep_task, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    return [_sweep_task(j) for j in jobs]


def cmd_sweep(args) -> int:
    eb_step = args.eb_step or args.step
    db_step = args.db_step or args.step
    if eb_step is None or db_step is None:
        raise InputError("give --step or both --eb-step and --db-step")
    cfg = SweepConfig(args.ef, args.df, (args.eb_min, args.eb_max, eb_step),
                      (args.db_min, args.db_max, db_step), tuple(args.columns), args.n_max)
    rows = sweep_rows(cfg, args.workers)
    write_csv(args.out, cfg.header, rows)
    _emit(args, {"path": args.out, "rows": len(rows), "header": cfg.header})
    return EXIT_OK


# ---------------------------------------------------------------------------


def cmd_region(args) -> int:
    reg = region.RateEquivocationRegion(args.rmax, args.cs, args.hs)
    pts = region.boundary(reg, args.points)
    if args.out:
        write_csv(args.out, ["rate", "equivocation"], pts)
        _emit(args, {"path": args.out, "rows": len(pts)})
    else:
        _emit(args, {"rows": len(pts), "boundary": [list(p) for p in pts]})
    return EXIT_OK


def _verify_report(args) -> auxverify.VerifyReport:
    kind = args.kind
    if kind == "frontier":
        return auxverify.frontier_ternary_vs_binary(args.eps, args.delta, args.resolution)
    if args.seed is None:
        raise InputError(f"verify {kind} is randomized and needs --seed")
    if kind == "bsc-optimality":
        return auxverify.verify_bsc_optimality(args.eps, args.delta, args.samples, args.seed)
    if kind == "g-structure":
        return auxverify.verify_g_structure(args.eps, args.delta, args.samples, args.seed)
    if kind == "two-point":
        return auxverify.verify_two_point(args.eps, args.delta, args.samples, args.seed)
    return auxverify.verify_projection_batch(args.eps, args.delta, args.samples, args.seed)


def cmd_verify(args) -> int:
    report = _verify_report(args)
    _emit(args, report.to_dict())
    return EXIT_COUNTEREXAMPLE if report.counterexamples else EXIT_OK


def cmd_simulate(args) -> int:
    if args.kind == "repetition":
        if args.p is None:
            raise InputError("simulate repetition needs --p")
        rate, std = montecarlo.repetition_mc(args.p, args.nrep, args.trials, args.seed)
        _emit(args, {"crossover": rate, "std": std,
                     "expected": schemes.repetition_equivalent(args.p, args.nrep)})
        return EXIT_OK
    if args.eb is None or args.db is None:
        raise InputError(f"simulate {args.kind} needs --eb and --db")
    block = min(args.block, args.bits)
    if args.bits % block:
        raise InputError(f"--bits {args.bits} is not a multiple of --block {block}")
    payload = args.payload or ("constant_zero" if args.kind == "leakage" else "uniform")
    cfg = montecarlo.SimConfig(block, args.bits // block, args.seed, args.eb, args.db,
                               payload, args.k)
    run = {"kernel": montecarlo.run_kernel, "crypto": montecarlo.crypto_lemma_check,
           "leakage": montecarlo.leakage_demo}[args.kind]
    res = run(cfg, workers=args.workers)
    out = res.to_dict()
    if args.kind == "leakage":
        out["expected_mi"] = montecarlo.expected_leakage_mi(cfg)
    if args.dump:
        seq = montecarlo.simulate_trial(cfg, 0)
        for name in ("x", "y", "z", "v", "c"):
            montecarlo.dump_bits(f"{args.dump}_{name}.bin", seq[name])
        out["dump"] = {"prefix": args.dump, "bits_per_file": cfg.n, "bit_order": "little"}
    _emit(args, out)
    return EXIT_OK


def cmd_equivocation(args) -> int:
    text = sys.stdin.read() if args.matrix == "-" else Path(args.matrix).read_text(encoding="utf-8")
    code = equivocation.CosetCode.from_text(text)
    deltas = sorted(args.deltas)
    values = equivocation.equivocation_monotonicity_scan(code, deltas)
    out: dict[str, Any] = {"n": code.n, "k_c": code.k_c, "secret_bits": code.secret_bits,
                           "deltas": deltas, "equivocation": values,
                           "nondecreasing": equivocation.is_nondecreasing(values)}
    if args.joint:
        if code.n > 10:
            raise InputError("--joint is limited to n <= 10")
        joint = [equivocation.joint_equivocation(code, d) for d in deltas]
        out["equivocation_joint"] = joint
        out["max_route_difference"] = max(abs(a - b) for a, b in zip(values, joint))
    _emit(args, out)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fbwiretap", description="Secrecy rates of BSC wiretap systems with public feedback.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def json_out(sp):
        sp.add_argument("--json-out", metavar="PATH", help="also write the JSON document here")

    r = sub.add_parser("rate", help="secrecy rate of one scheme at one channel point")
    r.add_argument("--ef", type=_crossover, required=True, help="forward crossover to Bob")
    r.add_argument("--df", type=_crossover, required=True, help="forward crossover to Eve")
    r.add_argument("--eb", type=_crossover, help="feedback crossover to Alice")
    r.add_argument("--db", type=_crossover, help="feedback crossover to Eve")
    r.add_argument("--scheme", choices=RATE_SCHEMES, default="best")
    r.add_argument("--n-max", type=_positive_int, default=schemes.DEFAULT_N_MAX,
                   help="largest repetition factor for --scheme repetition")
    json_out(r)
    r.set_defaults(func=cmd_rate)

    s = sub.add_parser("sweep", help="grid over (eps_b, delta_b) written as CSV")
    s.add_argument("--ef", type=_crossover, required=True)
    s.add_argument("--df", type=_crossover, required=True)
    s.add_argument("--eb-min", type=_crossover, default=0.01)
    s.add_argument("--eb-max", type=_crossover, default=0.49)
    s.add_argument("--db-min", type=_crossover, default=0.01)
    s.add_argument("--db-max", type=_crossover, default=0.49)
    s.add_argument("--step", type=_positive_float)
    s.add_argument("--eb-step", type=_positive_float)
    s.add_argument("--db-step", type=_positive_float)
    s.add_argument("--columns", type=_column_list, default=["pure"],
                   help="comma list of: " + ", ".join(RATE_SCHEMES + DERIVED_COLUMNS))
    s.add_argument("--n-max", type=_positive_int, default=15)
    s.add_argument("--workers", type=_positive_int, default=1)
    s.add_argument("--out", required=True, metavar="CSV")
    json_out(s)
    s.set_defaults(func=cmd_sweep)

    g = sub.add_parser("region", help="upper boundary of a rate-equivocation region")
    g.add_argument("--rmax", type=_nonneg_float, required=True)
    g.add_argument("--cs", type=_nonneg_float, required=True)
    g.add_argument("--hs", type=_positive_float, default=1.0)
    g.add_argument("--points", type=_positive_int, default=101)
    g.add_argument("--out", metavar="CSV")
    json_out(g)
    g.set_defaults(func=cmd_region)

    v = sub.add_parser("verify", help="numerical checks of the binary-auxiliary optimality argument")
    v.add_argument("kind", choices=("bsc-optimality", "g-structure", "two-point", "projection-order",
                                    "frontier"))
    v.add_argument("--eps", type=_crossover, default=0.01)
    v.add_argument("--delta", type=_crossover, default=0.02)
    v.add_argument("--samples", type=_positive_int, default=1000)
    v.add_argument("--seed", type=_seed)
    v.add_argument("--resolution", type=_positive_int, default=20, help="grid size for frontier")
    json_out(v)
    v.set_defaults(func=cmd_verify)

    m = sub.add_parser("simulate", help="bit-level Monte Carlo of the feedback kernel")
    m.add_argument("kind", choices=("kernel", "crypto", "leakage", "repetition"))
    m.add_argument("--eb", type=_crossover)
    m.add_argument("--db", type=_crossover)
    m.add_argument("--bits", type=_positive_int, default=1_000_000, help="total simulated bits")
    m.add_argument("--block", type=_positive_int, default=100_000, help="bits per trial")
    m.add_argument("--payload", choices=[p.value for p in montecarlo.Payload])
    m.add_argument("--k", type=_positive_int, help="free bits per block for repetition_coded")
    m.add_argument("--p", type=_crossover, help="crossover for simulate repetition")
    m.add_argument("--nrep", type=_positive_int, default=3)
    m.add_argument("--trials", type=_positive_int, default=1_000_000)
    m.add_argument("--workers", type=_positive_int, default=1)
    m.add_argument("--dump", metavar="PREFIX", help="write trial-0 sequences as packed bits")
    m.add_argument("--seed", type=_seed, required=True)
    json_out(m)
    m.set_defaults(func=cmd_simulate)

    e = sub.add_parser("equivocation", help="exact equivocation of a small coset code")
    e.add_argument("--matrix", required=True, help="parity-check text file, or - for stdin")
    e.add_argument("--deltas", type=_crossover_list, default=[0.0, 0.1, 0.2, 0.3, 0.4, 0.5])
    e.add_argument("--joint", action="store_true", help="also compute via the joint distribution")
    json_out(e)
    e.set_defaults(func=cmd_equivocation)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (InputError, DomainError) as exc:
        sys.stderr.write(f"fbwiretap {args.command}: error: {exc}\n")
        return EXIT_INPUT
    except OSError as exc:
        sys.stderr.write(f"fbwiretap {args.command}: I/O error: {exc}\n")
        return EXIT_IO


if __name__ == "__main__":
    raise SystemExit(main())
