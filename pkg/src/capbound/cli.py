"""Command-line interface.

Exit codes: 0 success, 2 invalid arguments, 3 size guard exceeded,
4 soundness gate failed (strips not symmetric).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from decimal import ROUND_CEILING, ROUND_FLOOR, Decimal
from pathlib import Path

from . import __version__
from .bounds import (
    BoundReport,
    PhiTable,
    SymmetryError,
    cw_upper_bound,
    finite_count_upper,
    igraph_pair,
    lower_bound_edge,
    lower_bound_vertex,
    strip_upper_bound,
)
from .graph import SizeGuardError
from .oracle import count_arrays_2d, count_arrays_isotropic, exact_capacity
from .phi import MaxEntropicParams, max_entropic_phi, optimize_phi
from .presets import Resolved2D, resolve_1d, resolve_2d

EXIT_OK, EXIT_USAGE, EXIT_SIZE, EXIT_SOUNDNESS = 0, 2, 3, 4
LOWER_METHODS = {"thm1-lower", "vertex-lower", "cw-baseline"}
TABLE_FIELDS = ["constraint", "delta", "mu", "alpha", "p", "q", "phi", "bound", "cw_baseline",
                "error"]


def round_sound(x: float, lower: bool, places: int = 10) -> float:
    """Round to ``places`` decimals, down for lower bounds and up otherwise."""
    if x != x or x in (float("inf"), float("-inf")):
        return x
    q = Decimal(1).scaleb(-places)
    d = Decimal(x).quantize(q, rounding=ROUND_FLOOR if lower else ROUND_CEILING)
    return float(d)


def _rounded(rep: BoundReport) -> dict:
    d = rep.as_dict()
    d["bound"] = round_sound(rep.bound, rep.method in LOWER_METHODS)
    return d


def _fmt(x: float) -> str:
    return f"{x:.10f}" if x == x and abs(x) != float("inf") else str(x)


def emit(rep: BoundReport, fmt: str, out) -> None:
    d = _rounded(rep)
    if fmt == "json":
        out.write(json.dumps(d, sort_keys=False) + "\n")
    elif fmt == "plain":
        out.write(_fmt(d["bound"]) + "\n")
    else:
        w = csv.writer(out, lineterminator="\r\n")
        prm = d["params"]
        w.writerow(["constraint", "method", "mu", "alpha", "p", "q", "delta", "widths", "bound",
                    "runtime_ms"])
        w.writerow([d["constraint"], d["method"], prm["mu"], prm["alpha"], prm["p"], prm["q"],
                    prm["delta"], " ".join(map(str, prm["widths"])), _fmt(d["bound"]),
                    f"{d['runtime_ms']:.1f}"])


# phi selection


def make_phi(res: Resolved2D, mode: str, mu: int, alpha: int, p: int, q: int, delta: int | None,
             budget: int, seed: int, pair=None) -> PhiTable | None:
    """Window weights for a ``--phi`` mode; ``None`` means all ones."""
    form = res.form
    if mode == "ones":
        return None
    if mode == "maxent":
        return max_entropic_phi(form, MaxEntropicParams(delta or 0, mu, alpha))
    if mode == "optimize":
        init = max_entropic_phi(form, MaxEntropicParams(delta or 0, mu, alpha))
        return optimize_phi(form, mu, alpha, p, q, init, budget=budget, seed=seed, pair=pair).phi
    if mode.startswith("file:"):
        text = Path(mode[5:]).read_text()
        return PhiTable.from_text(text, mu, alpha, form.edge_graph.vertices)
    raise ValueError(f"unknown phi mode {mode!r}")


def run_lower(token: str, mu: int, alpha: int, p: int, q: int, phi_mode: str = "maxent",
              delta: int | None = None, budget: int = 200, seed: int = 0,
              rel_tol: float = 1e-12) -> BoundReport:
    """Lower bound for a preset token, routed to the edge or vertex variant."""
    if mu < 0 or alpha < 1 or p < 1 or q < 1:
        raise ValueError("need mu >= 0, alpha >= 1, p >= 1, q >= 1")
    res = resolve_2d(token)
    pair = igraph_pair(res.form, mu, alpha, p, q)
    phi = make_phi(res, phi_mode, mu, alpha, p, q, delta, budget, seed, pair)
    if phi is None:
        phi_delta = None
    else:
        phi_delta = delta if phi_mode in ("maxent", "optimize") else None
    if res.route == "vertex":
        rep = lower_bound_vertex(res.presentation, mu, alpha, p, q, phi, rel_tol, phi_delta,
                                 form=res.form, name=token)
    else:
        rep = lower_bound_edge(res.form, mu, alpha, p, q, phi, rel_tol, phi_delta, name=token)
    return rep


def run_upper(token: str, method: str, n: int | None = None, k: int | None = None,
              p: int = 1, rows: int | None = None, cols: int | None = None,
              rel_tol: float = 1e-12) -> BoundReport:
    res = resolve_2d(token)
    if method == "strip":
        if n is None:
            raise ValueError("--method strip needs --n")
        vf = res.form if res.route == "vertex" else None
        return strip_upper_bound(res.presentation, n, rel_tol, vertex_form=vf, name=token)
    if method == "cw":
        if k is None:
            raise ValueError("--method cw needs --k")
        return cw_upper_bound(res.form, k, p, rel_tol, name=token)
    if method == "finite":
        if rows is None or cols is None:
            raise ValueError("--method finite needs --rows and --cols")
        return finite_count_upper(res.presentation, rows, cols, name=token)
    raise ValueError(f"unknown upper-bound method {method!r}")


# table


def read_table_spec(text: str) -> list[dict]:
    """Rows ``constraint delta mu alpha p q [phi [budget [seed]]]``.

    Fields are separated by commas or whitespace; ``#`` starts a comment and
    a header line beginning with ``constraint`` is skipped.
    """
    rows = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].replace(",", " ").split()
        if not line or line[0] == "constraint":
            continue
        if len(line) < 6:
            raise ValueError(f"table row needs at least 6 fields: {raw!r}")
        row = {"constraint": line[0], "delta": int(line[1]), "mu": int(line[2]),
               "alpha": int(line[3]), "p": int(line[4]), "q": int(line[5]),
               "phi": line[6] if len(line) > 6 else "maxent",
               "budget": int(line[7]) if len(line) > 7 else 200,
               "seed": int(line[8]) if len(line) > 8 else 0}
        rows.append(row)
    return rows


def _table_row(row: dict) -> dict:
    out = {k: row[k] for k in TABLE_FIELDS[:7]}
    try:
        rep = run_lower(row["constraint"], row["mu"], row["alpha"], row["p"], row["q"],
                        row["phi"], row["delta"], row["budget"], row["seed"])
        base = run_lower(row["constraint"], 0, 1, row["p"], row["q"], "ones")
        out["bound"] = _fmt(round_sound(rep.bound, True))
        out["cw_baseline"] = _fmt(round_sound(base.bound, True))
        out["error"] = ""
    except Exception as exc:  # recorded per row, the table continues
        out["bound"] = out["cw_baseline"] = ""
        out["error"] = f"{type(exc).__name__}: {exc}"
    return out


def run_table(rows: list[dict], workers: int = 2) -> str:
    """CSV with one line per spec row, in spec order."""
    buf = io.StringIO()
    w = csv.DictWriter(buf, TABLE_FIELDS, lineterminator="\r\n")
    w.writeheader()
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        for out in pool.map(_table_row, rows):
            w.writerow(out)
    return buf.getvalue()


# argument parsing


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="capbound", description="Capacity bounds for 2D constraints.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def fmt(p):
        p.add_argument("--format", choices=["json", "csv", "plain"], default="json")
        p.add_argument("--rel-tol", type=float, default=1e-12)

    lo = sub.add_parser("lower", help="lower bound")
    lo.add_argument("--constraint", required=True)
    lo.add_argument("--mu", type=int, default=0)
    lo.add_argument("--alpha", type=int, default=1)
    lo.add_argument("--p", type=int, required=True)
    lo.add_argument("--q", type=int, required=True)
    lo.add_argument("--phi", default="maxent",
                    help="ones | maxent | optimize | file:PATH")
    lo.add_argument("--delta", type=int, default=0)
    lo.add_argument("--budget", type=int, default=200)
    lo.add_argument("--seed", type=int, default=0)
    fmt(lo)

    up = sub.add_parser("upper", help="upper bound")
    up.add_argument("--constraint", required=True)
    up.add_argument("--method", choices=["strip", "cw", "finite"], required=True)
    up.add_argument("--n", type=int)
    up.add_argument("--k", type=int)
    up.add_argument("--p", type=int, default=1)
    up.add_argument("--rows", type=int)
    up.add_argument("--cols", type=int)
    fmt(up)

    tb = sub.add_parser("table", help="batch of lower bounds as CSV")
    tb.add_argument("spec", help="spec file, '-' for stdin")
    tb.add_argument("--workers", type=int, default=2)

    ex = sub.add_parser("exact", help="closed-form capacity")
    ex.add_argument("--family", choices=["chg2", "odd"], required=True)
    ex.add_argument("--dim", type=int, required=True)
    ex.add_argument("--format", choices=["json", "csv", "plain"], default="plain")

    ct = sub.add_parser("count", help="exact number of admissible arrays")
    ct.add_argument("--constraint", required=True)
    ct.add_argument("--rows", type=int)
    ct.add_argument("--cols", type=int)
    ct.add_argument("--dim", type=int, help="isotropic count of a 1D constraint")
    ct.add_argument("--n", type=int)
    return ap


def _dispatch(args, out) -> None:
    if args.command == "lower":
        rep = run_lower(args.constraint, args.mu, args.alpha, args.p, args.q, args.phi,
                        args.delta, args.budget, args.seed, args.rel_tol)
        emit(rep, args.format, out)
    elif args.command == "upper":
        rep = run_upper(args.constraint, args.method, args.n, args.k, args.p, args.rows,
                        args.cols, args.rel_tol)
        emit(rep, args.format, out)
    elif args.command == "table":
        text = sys.stdin.read() if args.spec == "-" else Path(args.spec).read_text()
        out.write(run_table(read_table_spec(text), args.workers))
    elif args.command == "exact":
        if args.dim < 1:
            raise ValueError("--dim must be positive")
        val = exact_capacity(args.family, args.dim)
        rep = BoundReport(f"{args.family}^{args.dim}", "exact", {
            "mu": None, "alpha": None, "p": None, "q": None, "delta": None, "widths": []},
            float(val), [], 0.0)
        if args.format == "plain":
            out.write(f"{float(val)!r}\n")
        else:
            emit(rep, args.format, out)
    elif args.command == "count":
        if args.dim is not None:
            if args.n is None:
                raise ValueError("--dim needs --n")
            c = resolve_1d(args.constraint)
            out.write(f"{count_arrays_isotropic(c, args.dim, args.n).count}\n")
        else:
            if args.rows is None or args.cols is None:
                raise ValueError("count needs --rows and --cols, or --dim and --n")
            res = resolve_2d(args.constraint)
            out.write(f"{count_arrays_2d(res.presentation, args.rows, args.cols).count}\n")


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _dispatch(args, out)
    except SizeGuardError as exc:
        print(f"capbound: size limit: {exc}", file=sys.stderr)
        return EXIT_SIZE
    except SymmetryError as exc:
        print(f"capbound: refused: {exc}", file=sys.stderr)
        return EXIT_SOUNDNESS
    except (ValueError, OSError) as exc:
        print(f"capbound: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
