"""specmatch command line: compute, verify, family, scan, corpus.

Exit codes: 0 no violations, 1 violations found, 2 usage or config error,
3 some input lines failed to parse.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import corpus, families
from .graph import Graph6Error, from_graph6, read_graph6_lines, to_graph6
from .matching import fractional_matching_number
from .spectral import (DEFAULT_TOL, EXACT_MAX_ORDER, EigenToleranceError, MatrixKind,
                       build_matrix, eigenvalue, exact_sign)
from .theorems import THEOREM_IDS, GraphFacts, Outcome, fmt, run_checker

log = logging.getLogger("specmatch")

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_PARSE = 0, 1, 2, 3
CSV_COLUMNS = ("theorem", "graph6", "outcome", "lhs", "rhs", "witness")
QUANTITIES = ("n", "m", "delta", "q1", "lambda1", "lambda3", "mu-n-1", "alpha", "girth",
              "alpha-star", "fpm")
DEFAULT_THRESHOLD_KS = "1/2,1,2"


class ConfigError(ValueError):
    pass


def default_tol() -> float:
    env = os.environ.get("SMT_TOL")
    if env is None:
        return DEFAULT_TOL
    try:
        return float(env)
    except ValueError:
        raise ConfigError(f"SMT_TOL={env!r} is not a number") from None


@dataclass
class ScanConfig:
    input: str
    theorems: tuple[str, ...] = THEOREM_IDS
    tol: float = DEFAULT_TOL
    workers: int = 1
    format: str = "csv"
    output: str | None = None
    threshold_ks: tuple[Fraction, ...] = (Fraction(1, 2), Fraction(1), Fraction(2))
    errors: list[str] = field(default_factory=list)

    def validate(self) -> None:
        if not self.tol > 0:
            raise ConfigError("tolerance must be positive")
        unknown = [t for t in self.theorems if t not in THEOREM_IDS]
        if unknown:
            raise ConfigError(f"unknown theorem id(s): {', '.join(unknown)}")
        if self.workers < 1:
            raise ConfigError("workers must be at least 1")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"unknown format {self.format!r}")


def parse_theorems(text: str) -> tuple[str, ...]:
    if text.strip().lower() == "all":
        return THEOREM_IDS
    return tuple(t.strip().lower() for t in text.split(",") if t.strip())


def parse_ks(text: str) -> tuple[Fraction, ...]:
    try:
        return tuple(Fraction(t.strip()) for t in text.split(",") if t.strip())
    except ValueError:
        raise ConfigError(f"bad --threshold-k list {text!r}") from None


# ---------------------------------------------------------------- per-graph work


def _verify_line(job: tuple[int, str, tuple[str, ...], float, tuple[Fraction, ...]]) -> dict:
    lineno, text, theorems, tol, ks = job
    try:
        g = from_graph6(text)
    except Graph6Error as exc:
        return {"line": lineno, "error": str(exc)}
    facts = GraphFacts(g, tol)
    reports = []
    for tid in theorems:
        if tid == "l31":
            reports.extend(run_checker(tid, facts, tol, k=k) for k in ks)
        else:
            reports.append(run_checker(tid, facts, tol))
    return {"line": lineno, "reports": [r.to_json() for r in reports]}


def run_verification(lines: Sequence[str], cfg: ScanConfig) -> tuple[list[dict], list[str]]:
    jobs = [(lineno, text, cfg.theorems, cfg.tol, cfg.threshold_ks)
            for lineno, text in read_graph6_lines(lines)]
    if cfg.workers == 1 or len(jobs) < 2:
        results = [_verify_line(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            chunk = max(1, len(jobs) // (cfg.workers * 8))
            results = list(pool.map(_verify_line, jobs, chunksize=chunk))
    rows: list[dict] = []
    errors: list[str] = []
    for res in results:
        if "error" in res:
            errors.append(f"line {res['line']}: {res['error']}")
        else:
            rows.extend(res["reports"])
    return rows, errors


def render_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in rows:
        writer.writerow([r[c] for c in CSV_COLUMNS])
    return buf.getvalue()


def render_json(rows: list[dict], errors: list[str], cfg: ScanConfig) -> str:
    payload = {
        "config": {"theorems": list(cfg.theorems), "tol": cfg.tol,
                   "threshold_ks": [fmt(k) for k in cfg.threshold_ks]},
        "summary": summarize(rows),
        "parse_errors": errors,
        "reports": rows,
    }
    return json.dumps(payload, indent=1, sort_keys=True) + "\n"


def summarize(rows: list[dict]) -> dict[str, int]:
    counts = Counter(r["outcome"] for r in rows)
    return {o.value: counts.get(o.value, 0) for o in Outcome}


def exit_code(rows: list[dict], errors: list[str]) -> int:
    if any(r["outcome"] == Outcome.VIOLATED.value for r in rows):
        return EXIT_VIOLATION
    if errors:
        return EXIT_PARSE
    return EXIT_OK


def _read_lines(path: str) -> list[str]:
    if path == "-":
        return sys.stdin.read().splitlines()
    with open(path, encoding="ascii", errors="replace") as fh:
        return fh.read().splitlines()


def _emit(text: str, output: str | None) -> None:
    if output and output != "-":
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _summary_line(rows: list[dict], errors: list[str]) -> str:
    parts = [f"{k}={v}" for k, v in summarize(rows).items()]
    return f"summary: rows={len(rows)} " + " ".join(parts) + f" parse_errors={len(errors)}"


# ---------------------------------------------------------------- commands


def cmd_scan(cfg: ScanConfig) -> int:
    cfg.validate()
    rows, errors = run_verification(_read_lines(cfg.input), cfg)
    for e in errors:
        print(e, file=sys.stderr)
    text = render_csv(rows) if cfg.format == "csv" else render_json(rows, errors, cfg)
    _emit(text, cfg.output)
    print(_summary_line(rows, errors), file=sys.stderr)
    return exit_code(rows, errors)


def cmd_verify(cfg: ScanConfig) -> int:
    return cmd_scan(cfg)


def _fmt_enclosure(enc, mid: float | None = None) -> str:
    return f"{enc.mid if mid is None else mid:.9f}±{enc.radius:.1g}"


def _fmt_eigen(m, index: int, tol: float) -> str:
    """Enclosure of an eigenvalue; the midpoint snaps to an integer that the
    exact root count proves to be the eigenvalue."""
    enc = eigenvalue(m, index, tol)
    if m.is_integer and len(m.entries) <= EXACT_MAX_ORDER:
        r = round(enc.mid)
        if enc.contains(r) and exact_sign(m, index, r) == 0:
            return _fmt_enclosure(enc, r)
    return _fmt_enclosure(enc)


def compute_row(g, quantities: Sequence[str], tol: float) -> list[str]:
    out = []
    for q in quantities:
        if q == "n":
            out.append(str(g.n))
        elif q == "m":
            out.append(str(g.m))
        elif q == "delta":
            out.append(str(min(g.degrees())) if g.n else "n/a")
        elif q == "q1":
            out.append(_fmt_eigen(build_matrix(g, MatrixKind.SIGNLESS_LAPLACIAN), 1, tol)
                       if g.n else "n/a")
        elif q == "lambda1":
            out.append(_fmt_eigen(build_matrix(g, MatrixKind.ADJACENCY), 1, tol) if g.n else "n/a")
        elif q == "lambda3":
            out.append(_fmt_eigen(build_matrix(g, MatrixKind.ADJACENCY), 3, tol)
                       if g.n >= 3 else "n/a")
        elif q == "mu-n-1":
            out.append(_fmt_eigen(build_matrix(g, MatrixKind.LAPLACIAN), g.n - 1, tol)
                       if g.n >= 2 else "n/a")
        elif q == "alpha":
            out.append(str(GraphFacts(g, tol).independence))
        elif q == "girth":
            value = GraphFacts(g, tol).girth
            out.append("acyclic" if value is None else str(value))
        elif q == "alpha-star":
            out.append(fmt(fractional_matching_number(g)))
        elif q == "fpm":
            out.append(fmt(2 * fractional_matching_number(g) == g.n))
    return out


def cmd_compute(path: str, quantities: Sequence[str], tol: float, output: str | None) -> int:
    unknown = [q for q in quantities if q not in QUANTITIES]
    if unknown:
        raise ConfigError(f"unknown quantity id(s): {', '.join(unknown)}")
    buf = io.StringIO()
    writer = csv.writer(buf, delimiter="\t", lineterminator="\n")
    writer.writerow(["graph6", *quantities])
    errors = []
    for lineno, text in read_graph6_lines(_read_lines(path)):
        try:
            g = from_graph6(text)
            writer.writerow([text, *compute_row(g, quantities, tol)])
        except (Graph6Error, EigenToleranceError, ArithmeticError, RuntimeError) as exc:
            errors.append(f"line {lineno}: {exc}")
    for e in errors:
        print(e, file=sys.stderr)
    _emit(buf.getvalue(), output)
    return EXIT_PARSE if errors else EXIT_OK


def family_block(delta: int, k: int, m: int, tol: float) -> tuple[str, dict]:
    g = families.construct_H(families.FamilyParams(delta, k, m))
    n = g.n
    block = {
        "delta": delta, "k": k, "m": m, "n": n,
        "predicted_q1": fmt(families.predicted_q1(delta, k, n)),
        "computed_q1": _fmt_eigen(build_matrix(g, MatrixKind.SIGNLESS_LAPLACIAN), 1, tol),
        "predicted_lambda1": families.predicted_lambda1(delta, k, n),
        "computed_lambda1": _fmt_eigen(build_matrix(g, MatrixKind.ADJACENCY), 1, tol),
        "predicted_alpha_star": fmt(families.predicted_alpha_star(k, n)),
        "alpha_star": fmt(fractional_matching_number(g)),
    }
    return to_graph6(g), block


def cmd_family(delta: int, k: int, m: int, tol: float) -> int:
    try:
        g6, block = family_block(delta, k, m, tol)
    except (families.ParameterError, families.NotConstructibleError) as exc:
        print(f"error: not constructible: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(g6)
    print(json.dumps(block, indent=1))
    return EXIT_OK


def cmd_corpus(min_n: int, max_n: int, output: str | None) -> int:
    if max_n <= 8:
        lines = corpus.connected_graph6(min_n, max_n)
    else:
        layers = corpus.generate_connected(max_n)
        lines = [to_graph6(g) for n in sorted(layers) if n >= min_n for g in layers[n]]
    _emit("".join(s + "\n" for s in lines), output)
    return EXIT_OK


# ---------------------------------------------------------------- argument parsing


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="specmatch", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, theorems: bool) -> None:
        sp.add_argument("--input", "-i", required=True, help="graph6 file, one graph per line ('-' for stdin)")
        sp.add_argument("--output", "-o", default=None)
        sp.add_argument("--tol", type=float, default=None, help="relative enclosure width (default 1e-9 or $SMT_TOL)")
        if theorems:
            sp.add_argument("--theorems", "-t", default="all", help="comma list of ids or 'all'")
            sp.add_argument("--format", "-f", choices=("csv", "json"), default="csv")
            sp.add_argument("--workers", "-w", type=int, default=1)
            sp.add_argument("--threshold-k", default=DEFAULT_THRESHOLD_KS, help="k values for l31")

    sp = sub.add_parser("compute", help="tabulate graph quantities")
    common(sp, theorems=False)
    sp.add_argument("--quantities", "-q", default=",".join(QUANTITIES))

    common(sub.add_parser("verify", help="classify theorems on each graph"), theorems=True)
    common(sub.add_parser("scan", help="verify a corpus and write a report"), theorems=True)

    sp = sub.add_parser("family", help="build an H(delta,k) member with predictions")
    sp.add_argument("--delta", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--m", type=int, required=True, help="size of the smaller side V2")
    sp.add_argument("--tol", type=float, default=None)

    sp = sub.add_parser("corpus", help="write all connected graphs of the given orders")
    sp.add_argument("--min-n", type=int, default=1)
    sp.add_argument("--max-n", type=int, default=8)
    sp.add_argument("--output", "-o", default=None)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        tol = args.tol if getattr(args, "tol", None) is not None else default_tol()
        if args.command == "compute":
            if not tol > 0:
                raise ConfigError("tolerance must be positive")
            qs = [q.strip() for q in args.quantities.split(",") if q.strip()]
            return cmd_compute(args.input, qs, tol, args.output)
        if args.command in ("verify", "scan"):
            cfg = ScanConfig(input=args.input, theorems=parse_theorems(args.theorems), tol=tol,
                             workers=args.workers, format=args.format, output=args.output,
                             threshold_ks=parse_ks(args.threshold_k))
            return cmd_verify(cfg) if args.command == "verify" else cmd_scan(cfg)
        if args.command == "family":
            return cmd_family(args.delta, args.k, args.m, tol)
        if args.command == "corpus":
            return cmd_corpus(args.min_n, args.max_n, args.output)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
