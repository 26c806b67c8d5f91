"""Command-line driver: ``cliff-rbvp {solve,example,sample-field,index}``."""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import clifford_rbvp, verifier
from .config import ConfigError, ProblemConfig
from .contour import NEAR_BOUNDARY, classify, winding_number_and_residual
from .errors import RbvpError, WindingError
from .exprlang import ExprEvalError
from .fixtures import CLOSED_FORMS, EXAMPLES, probes

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_UNSOLVABLE = 2

THREADS_ENV = "CLIFF_RBVP_THREADS"


def _jsonable(value):
    """Complex numbers become [re, im]; numpy scalars become Python numbers."""
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


def dumps(report: dict) -> str:
    return json.dumps(_jsonable(report), indent=2, sort_keys=True) + "\n"


def write_atomic(path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def _solve(cfg: ProblemConfig, nodes: Optional[int], tol: Optional[float]):
    p, maps = cfg.build(nodes)
    sol = clifford_rbvp.solve(p, family_count=cfg.family_count, family_mode=cfg.family_mode, maps=maps,
                              rtol=tol if tol is not None else cfg.tol)
    return p, sol


def build_report(p, sol) -> dict:
    report = {
        "regime": sol.regime,
        "index": sol.index,
        "status": sol.status,
        "solvability": sol.report,
        "free_constant_count": sol.free_constant_count,
        "nodes": p.contour.N,
        "verification": None,
    }
    if sol.solvable:
        zeros = [0j] * sol.free_constant_count
        report["verification"] = verifier.verify(sol, p, zeros).to_dict()
        if sol.regime == clifford_rbvp.CONSTANT and sol.basis:
            report["member_boundary_residuals"] = [
                verifier.boundary_residual(sol, p, sol.member(k)) for k in range(1, len(sol.basis) + 1)
            ]
    return report


def cmd_solve(args) -> int:
    cfg = ProblemConfig.from_file(args.config)
    start = time.perf_counter()
    p, sol = _solve(cfg, args.nodes, args.tol)
    report = build_report(p, sol)
    report["timing"] = {"seconds": time.perf_counter() - start}
    text = dumps(report)
    if args.output:
        write_atomic(args.output, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if sol.solvable else EXIT_UNSOLVABLE


def _fmt(x) -> str:
    return "[" + ", ".join(f"{v: .6e}" for v in x) + "]"


def cmd_example(args) -> int:
    if args.name not in EXAMPLES:
        raise ConfigError(f"unknown example {args.name!r}; choose from {sorted(EXAMPLES)}")
    raw = dict(EXAMPLES[args.name])
    if args.family_count is not None:
        raw["family_count"] = args.family_count
    cfg = ProblemConfig.from_dict(raw)
    p, sol = _solve(cfg, args.nodes, args.tol)
    out = sys.stdout
    out.write(f"example {args.name}: regime={sol.regime} status={sol.status} index={sol.index}\n")
    if not sol.solvable:
        out.write(dumps({"solvability": sol.report}))
        return EXIT_UNSOLVABLE
    closed = CLOSED_FORMS[args.name]
    zin, zout = probes(args.name)
    if args.name == "3":
        runs = [(f"m={k}", sol.member(k), lambda z, inside, m=k: closed(z, inside, m))
                for k in range(1, sol.free_constant_count + 1)]
    else:
        runs = [("", [0j] * sol.free_constant_count, closed)]
    worst = 0.0
    for label, consts, form in runs:
        bres = verifier.boundary_residual(sol, p, consts)
        out.write(f"{label or 'solution'}: boundary residual {bres:.3e}\n")
        out.write(f"{'probe':>24}  {'region':<8} {'computed':<58} {'closed form':<58} abs error\n")
        for zs, inside in ((zin, True), (zout, False)):
            got = sol.evaluate_phi(zs, consts).as_array()
            want = form(zs, inside).as_array()
            for z, g, w in zip(zs, got, want):
                err = float(np.max(np.abs(g - w)))
                worst = max(worst, err)
                out.write(f"{z.real:>11.6f}{z.imag:+11.6f}i  {'inside' if inside else 'outside':<8} "
                          f"{_fmt(g):<58} {_fmt(w):<58} {err:.2e}\n")
    out.write(f"max abs error {worst:.3e}\n")
    return EXIT_OK


def _thread_count() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return min(8, os.cpu_count() or 1)
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ConfigError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return n


def parse_grid(spec: str):
    parts = spec.split(",")
    if len(parts) != 6:
        raise ConfigError("--grid expects x0,x1,y0,y1,nx,ny")
    try:
        x0, x1, y0, y1 = (float(v) for v in parts[:4])
        nx, ny = int(parts[4]), int(parts[5])
    except ValueError:
        raise ConfigError(f"--grid: cannot parse {spec!r}") from None
    if nx < 1 or ny < 1:
        raise ConfigError("--grid: nx and ny must be positive")
    return x0, x1, y0, y1, nx, ny


def sample_field(sol, points: np.ndarray, constants, threads: int = 1, chunk: int = 1024) -> np.ndarray:
    """Phi coefficients (n, 4) at points; chunks fan out over a thread pool."""
    # warm cached boundary data before sharing the solution across threads
    sol.boundary_phi("+", constants)
    chunks = [points[i:i + chunk] for i in range(0, len(points), chunk)]
    if not chunks:
        return np.zeros((0, 4))
    evaluate = lambda zs: sol.evaluate_phi(zs, constants).as_array()  # noqa: E731
    if threads <= 1 or len(chunks) == 1:
        parts = [evaluate(c) for c in chunks]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(evaluate, chunks))
    return np.concatenate(parts).reshape(-1, 4)


def cmd_sample_field(args) -> int:
    cfg = ProblemConfig.from_file(args.config)
    x0, x1, y0, y1, nx, ny = parse_grid(args.grid)
    p, sol = _solve(cfg, args.nodes, args.tol)
    if not sol.solvable:
        sys.stderr.write("problem is unsolvable; no field to sample\n")
        return EXIT_UNSOLVABLE
    X, Y = np.meshgrid(np.linspace(x0, x1, nx), np.linspace(y0, y1, ny))
    z = (X + 1j * Y).ravel()
    tags = classify(p.contour, z)
    keep = tags != NEAR_BOUNDARY
    if args.region != "both":
        keep &= tags == args.region
    z, tags = z[keep], tags[keep]
    if z.size == 0:
        sys.stderr.write("warning: every grid point lies in the refusal band or outside the requested region\n")
    vals = sample_field(sol, z, [0j] * sol.free_constant_count, _thread_count())
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x1", "x2", "phi_c0", "phi_c1", "phi_c2", "phi_c12", "region"])
    for zk, row, tag in zip(z, vals, tags):
        w.writerow([repr(float(zk.real)), repr(float(zk.imag)), *(repr(float(v)) for v in row), tag])
    write_atomic(args.output, buf.getvalue())
    return EXIT_OK


def cmd_index(args) -> int:
    cfg = ProblemConfig.from_file(args.config)
    p, _ = cfg.build(args.nodes)
    r = clifford_rbvp.reduce(p)
    try:
        winding, residual = winding_number_and_residual(r.G0.values)
    except WindingError as exc:
        raise WindingError(f"{exc}; rerun with a larger --nodes") from None
    sys.stdout.write(dumps({"index": winding, "winding_residual": residual, "regime": r.regime}))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--nodes", type=int, default=argparse.SUPPRESS, help="contour node count (power of two)")
    common.add_argument("--tol", type=float, default=argparse.SUPPRESS, help="relative solvability tolerance")

    parser = argparse.ArgumentParser(prog="cliff-rbvp", parents=[common],
                                     description="Riemann boundary value problems for R(0,2)-valued monogenic functions")
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", parents=[common], help="solve a problem config and write a JSON report")
    s.add_argument("config")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_solve)

    e = sub.add_parser("example", parents=[common], help="run a built-in example against its closed form")
    e.add_argument("name", choices=sorted(EXAMPLES))
    e.add_argument("--family-count", type=int)
    e.set_defaults(func=cmd_example)

    f = sub.add_parser("sample-field", parents=[common], help="sample Phi on a grid into CSV")
    f.add_argument("config")
    f.add_argument("--grid", required=True, help="x0,x1,y0,y1,nx,ny")
    f.add_argument("--region", choices=("both", "inside", "outside"), default="both")
    f.add_argument("-o", "--output", required=True)
    f.set_defaults(func=cmd_sample_field)

    i = sub.add_parser("index", parents=[common], help="print the index of the coefficient")
    i.add_argument("config")
    i.set_defaults(func=cmd_index)
    return parser


def _join_grid(argv: list[str]) -> list[str]:
    # argparse reads a value such as "-2,2,..." as an option; glue it to its flag
    out = []
    it = iter(argv)
    for tok in it:
        if tok == "--grid":
            nxt = next(it, None)
            out.append(tok if nxt is None else f"--grid={nxt}")
        else:
            out.append(tok)
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = _join_grid(list(sys.argv[1:] if argv is None else argv))
    args = build_parser().parse_args(argv)
    args.nodes = getattr(args, "nodes", None)
    args.tol = getattr(args, "tol", None)
    try:
        return args.func(args)
    except (RbvpError, ExprEvalError, OSError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_ERROR


__all__ = ["build_parser", "build_report", "main"]
