"""Command-line entry point (``turanbatch``).

Every subcommand writes its machine-readable payload (JSON or CSV) to
standard output and diagnostics to standard error.  Exit codes:

* 0 success, the checked property holds
* 1 the property fails (not free, no SDR, bound violated)
* 2 usage or parse error
* 3 infeasible request (instance too large, bound not applicable,
  degenerate parameters)
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

import click

from . import bounds as _bounds
from .construct import POLICIES, random_construct
from .core import as_params, deficiency, read_hypergraph, write_hypergraph
from .errors import (
    BoundViolation,
    DegenerateParams,
    IndexOutOfRange,
    InfeasibleExact,
    NoFeasibleC,
    NoSDR,
    NotApplicable,
    ParseError,
    TooLarge,
    TuranBatchError,
)
from .exact import MODES, difference_table, exact_ex, exact_f, exact_m
from .freeness import is_cbc, is_f_free, is_free, sdr_retrieve
from .structure import (
    best_link,
    bfs_certificate,
    decompose_maximal_forbidden,
    peel_min_degree,
    verify_lemma51,
)

SCHEMA = "turan-batch/1"
INFEASIBLE = (TooLarge, NotApplicable, InfeasibleExact, DegenerateParams, NoFeasibleC)

# largest number of candidate edges for which sweep computes exact values
SWEEP_EXACT_SLOTS = 28


class Fail(Exception):
    def __init__(self, code, message):
        self.code = code
        super().__init__(message)


def _emit(obj) -> None:
    obj = {"schema": SCHEMA, **obj}
    click.echo(json.dumps(obj, sort_keys=True, default=_jsonable))


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (set, frozenset, tuple)):
        return sorted(x) if isinstance(x, (set, frozenset)) else list(x)
    raise TypeError(f"cannot serialise {type(x).__name__}")


def _run(fn):
    """Map library errors onto exit codes."""
    try:
        code = fn()
    except Fail as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(exc.code)
    except ParseError as exc:
        click.echo(f"parse error: {exc}", err=True)
        sys.exit(2)
    except (IndexOutOfRange, ValueError) as exc:
        if isinstance(exc, DegenerateParams):
            click.echo(f"infeasible: {exc}", err=True)
            sys.exit(3)
        click.echo(f"usage error: {exc}", err=True)
        sys.exit(2)
    except INFEASIBLE as exc:
        click.echo(f"infeasible: {exc}", err=True)
        sys.exit(3)
    except TuranBatchError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    sys.exit(code or 0)


def _load(path):
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise Fail(2, str(exc)) from exc
    return read_hypergraph(data)


def parse_range(text: str) -> list[int]:
    """``"6:8"`` (inclusive), ``"1,3,5"`` or a single integer."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if ":" in part:
            a, b = part.split(":", 1)
            out.extend(range(int(a), int(b) + 1))
        else:
            out.append(int(part))
    return out


def parse_grid(spec: str) -> dict[str, list]:
    """``"n=6:8;r=2;k=6;q=0;seeds=0:4;c=1"`` into value lists (missing keys get defaults)."""
    grid = {"n": [], "r": [2], "k": [], "q": [0], "seeds": [0], "c": [1.0]}
    for item in spec.split(";"):
        item = item.strip()
        if not item:
            continue
        if "=" not in item:
            raise ValueError(f"grid entry {item!r} is not key=value")
        key, val = (s.strip() for s in item.split("=", 1))
        if key not in grid:
            raise ValueError(f"unknown grid key {key!r}")
        if key == "c":
            grid[key] = [float(x) for x in val.split(",") if x.strip()]
        else:
            grid[key] = parse_range(val)
    return grid


@click.group()
def main():
    """Freeness checks, constructions and bounds for batch codes and Turán numbers."""


@main.command()
@click.option("--input", "path", required=True, type=click.Path(dir_okay=False))
@click.option("--k", type=int, required=True)
@click.option("--q", type=int, default=0, show_default=True)
@click.option("--f-exact", is_flag=True, help="Exact-size family: no k edges on k-q-1 vertices.")
@click.option("--cbc", is_flag=True, help="Batch-code check (forces q = 0).")
def verify(path, k, q, f_exact, cbc):
    """Check a hypergraph file for freeness; exit 0 iff free."""

    def go():
        H = _load(path)
        if cbc:
            verdict = is_cbc(H, k)
            mode, qq = "cbc", 0
        elif f_exact:
            verdict = is_f_free(H, (H.r, k, q))
            mode, qq = "f_exact", q
        else:
            verdict = is_free(H, (H.r, k, q))
            mode, qq = "h", q
        payload = {
            "command": "verify",
            "mode": mode,
            "n": H.n,
            "r": H.r,
            "m": H.m,
            "k": k,
            "q": qq,
            "free": verdict.free,
            "witness": list(verdict.witness) if verdict.witness is not None else None,
        }
        if not verdict.free and not f_exact:
            payload["witness_deficiency"] = deficiency(H, verdict.witness)
        _emit(payload)
        return 0 if verdict.free else 1

    _run(go)


@main.command()
@click.option("--n", type=int, required=True)
@click.option("--r", type=int, required=True)
@click.option("--k", type=int, required=True)
@click.option("--q", type=int, required=True)
@click.option("--c", type=float, default=1.0, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--policy", type=click.Choice(POLICIES), default=POLICIES[0], show_default=True)
@click.option("--out", required=True, type=click.Path(dir_okay=False))
def construct(n, r, k, q, c, seed, policy, out):
    """Sample, repair and write a free hypergraph; the report goes to stdout."""

    def go():
        rep = random_construct(n, (r, k, q), c, seed=seed, policy=policy)
        Path(out).write_bytes(write_hypergraph(rep.result))
        click.echo(rep.to_json(edges_file=str(out)))
        return 0

    _run(go)


@main.command()
@click.option("--input", "path", required=True, type=click.Path(dir_okay=False))
@click.option("--k", type=int, required=True)
@click.option("--items", required=True, help="Comma list or a:b range of edge indices.")
def decode(path, k, items):
    """Assign requested items to distinct servers; exit 1 with a Hall violator."""

    def go():
        H = _load(path)
        try:
            req = parse_range(items)
        except ValueError as exc:
            raise Fail(2, f"bad item list: {exc}") from exc
        if not req:
            raise Fail(2, "no items requested")
        if len(req) > k:
            raise Fail(2, f"{len(req)} items requested, batch size is {k}")
        bad = [i for i in req if not 0 <= i < H.m]
        if bad:
            raise Fail(2, f"item indices {bad} outside [0, {H.m})")
        try:
            plan = sdr_retrieve(H, req)
        except NoSDR as exc:
            _emit(
                {
                    "command": "decode",
                    "ok": False,
                    "deficient_items": list(exc.deficient),
                    "servers": list(exc.neighbourhood),
                }
            )
            return 1
        _emit({"command": "decode", "ok": True, "assignment": {str(i): v for i, v in plan.assignment.items()}})
        return 0

    _run(go)


@main.command("bounds")
@click.option("--n", type=int, required=True)
@click.option("--r", type=int, required=True)
@click.option("--k", type=int, required=True)
@click.option("--q", type=int, required=True)
def bounds_cmd(n, r, k, q):
    """Evaluate every applicable bound and exponent."""

    def go():
        rep = _bounds.bound_report(n, (r, k, q))
        _emit({"command": "bounds", **rep.as_dict()})
        return 0

    _run(go)


@main.command("exact")
@click.option("--n", "n_spec", required=True, help="Single n, a:b range or comma list.")
@click.option("--r", type=int, required=True)
@click.option("--k", type=int, required=True)
@click.option("--q", type=int, default=0, show_default=True)
@click.option("--kind", type=click.Choice(["ex", "f", "m"]), default="ex", show_default=True)
@click.option("--mode", type=click.Choice(MODES), default=MODES[0], show_default=True)
@click.option("--table", is_flag=True, help="CSV difference table of the two Turán numbers.")
def exact_cmd(n_spec, r, k, q, kind, mode, table):
    """Exact Turán numbers by exhaustive search."""

    def go():
        ns = parse_range(n_spec)
        if table:
            try:
                tab = difference_table(r, k, q, ns, mode)
            except BoundViolation as exc:
                click.echo(f"bound violated: {exc}", err=True)
                return 1
            click.echo(tab.to_csv(), nl=False)
            return 0
        results = []
        for n in ns:
            if kind == "ex":
                res = exact_ex(n, (r, k, q), mode)
            elif kind == "f":
                res = exact_f(n, (r, k, q), mode)
            else:
                res = exact_m(n, r, k, mode)
            results.append(res.as_dict())
        _emit({"command": "exact", "results": results})
        return 0

    _run(go)


CHECKS = ("peel", "bfs", "link", "decompose", "maximal")


@main.command()
@click.option("--input", "path", required=True, type=click.Path(dir_okay=False))
@click.option("--check", type=click.Choice(CHECKS), required=True)
@click.option("--k", type=int, default=None)
@click.option("--q", type=int, default=None)
@click.option("--root", type=int, default=0, show_default=True)
def certify(path, check, k, q, root):
    """Produce a structural certificate for a hypergraph file."""

    def go():
        H = _load(path)
        if check in ("bfs", "decompose", "maximal") and (k is None or q is None):
            raise Fail(2, f"--check {check} needs --k and --q")
        if check == "peel":
            cert = peel_min_degree(H)
            ok = cert.final_min_degree is None or cert.final_min_degree > cert.threshold
            payload = {
                "average_degree": cert.original_avg_degree,
                "threshold": cert.threshold,
                "removal_order": cert.removal_order,
                "final_vertices": cert.final_vertices,
                "final_min_degree": cert.final_min_degree,
            }
        elif check == "bfs":
            cert = bfs_certificate(H, root, k, q)
            ok = cert.all_hold
            payload = {
                "root": root,
                "level_sizes": cert.level_sizes,
                "h": cert.h,
                "h_star": cert.h_star,
                "delta": cert.delta,
                "checks": cert.checks,
                "claimA_lhs": cert.claimA_lhs,
                "claimA_rhs": cert.claimA_rhs,
                "violations": [str(v) for v in cert.violations],
            }
        elif check == "link":
            params = (H.r, k, q) if k is not None and q is not None else None
            cert = best_link(H, params)
            ok = cert.inequality_holds and cert.transfer_holds is not False
            payload = {
                "s_star": cert.s_star,
                "link_degree": cert.link_degree,
                "inequality_lhs": cert.inequality_lhs,
                "inequality_holds": cert.inequality_holds,
                "source_free": cert.source_free,
                "link_free": cert.link_free,
            }
        elif check == "decompose":
            cert = decompose_maximal_forbidden(H, k, q)
            ok = cert.edge_partition_check
            payload = {
                "verdict": cert.verdict,
                "z": cert.z,
                "parts": [
                    {"vertices": p.vertices, "edges": p.edges, "union_of_components": p.union_of_components}
                    for p in cert.forbidden_parts
                ],
                "remainder_edges": cert.remainder_edges,
                "stuck_at_k": cert.stuck_at_k,
            }
        else:
            res = verify_lemma51(H, k, q)
            ok = res.holds
            payload = {"maximal_count": res.maximal_count, "counterexample": res.counterexample}
        _emit({"command": "certify", "check": check, "holds": ok, **payload})
        return 0 if ok else 1

    _run(go)


SWEEP_COLUMNS = (
    "n",
    "r",
    "k",
    "q",
    "seed",
    "c",
    "lower_exponent",
    "upper_exponent",
    "cbc_exponent",
    "bb_exponent",
    "graph_upper",
    "hypergraph_upper",
    "sampled",
    "retained",
    "exact_ex",
    "exact_f",
    "difference",
    "diff_upper",
)


def _maybe(fn, *args):
    try:
        return fn(*args)
    except (NotApplicable, DegenerateParams):
        return None


def sweep_rows(grid: dict) -> list[dict]:
    """One row per grid point, in grid order (n, r, k, q, seed, c)."""
    rows = []
    for n, r, k, q, seed, c in itertools.product(
        grid["n"], grid["r"], grid["k"], grid["q"], grid["seeds"], grid["c"]
    ):
        pt = as_params((r, k, q))
        row = dict.fromkeys(SWEEP_COLUMNS)
        row.update(n=n, r=r, k=k, q=q, seed=seed, c=c)
        row["lower_exponent"] = _bounds.lower_exponent(pt)
        row["upper_exponent"] = _bounds.upper_exponent(pt)
        row["cbc_exponent"] = _maybe(_bounds.cbc_exponent, r, k)
        row["bb_exponent"] = _maybe(_bounds.competing_exponent_bb, r)
        if r == 2:
            row["graph_upper"] = _maybe(_bounds.graph_upper, n, k, q)
        row["hypergraph_upper"] = _maybe(_bounds.hypergraph_upper, n, pt)
        rep = random_construct(n, pt, c, seed=seed)
        row["sampled"] = rep.sampled_edges
        row["retained"] = rep.retained
        if math.comb(n, r) <= SWEEP_EXACT_SLOTS:
            e = exact_ex(n, pt).value
            f = exact_f(n, pt).value
            row.update(exact_ex=e, exact_f=f, difference=f - e)
            row["diff_upper"] = (k - 1) * math.comb(n - 1, r - 1)
        rows.append(row)
    return rows


def _cell(x):
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)
    return str(x)


@main.command()
@click.option("--grid", "spec", required=True, help='e.g. "n=6:8;r=2;k=6;q=0;seeds=0:4;c=1"')
@click.option("--csv", "csv_path", default="-", show_default=True, type=click.Path(dir_okay=False, allow_dash=True))
def sweep(spec, csv_path):
    """Bounds, construction sizes and exact values over a parameter grid (CSV)."""

    def go():
        try:
            grid = parse_grid(spec)
        except ValueError as exc:
            raise Fail(2, f"bad grid: {exc}") from exc
        rows = sweep_rows(grid)
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(SWEEP_COLUMNS)
        for row in rows:
            writer.writerow([_cell(row[c]) for c in SWEEP_COLUMNS])
        if csv_path == "-":
            click.echo(buf.getvalue(), nl=False)
        else:
            Path(csv_path).write_text(buf.getvalue())
        return 0

    _run(go)


if __name__ == "__main__":  # pragma: no cover
    main()
