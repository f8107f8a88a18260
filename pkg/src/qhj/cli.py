"""Command line interface: ``qhj spectrum|momentum|action|nodes|verify``.

Exit codes: 0 success, 1 usage error, 2 numerical non-convergence,
3 verification failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import checks
from . import contour as ct
from . import systems as sy

EXIT_OK, EXIT_USAGE, EXIT_CONVERGENCE, EXIT_VERIFY = 0, 1, 2, 3

FIGURE_HEADER = ["q", "re_p", "im_p", "u", "is_near_pole"]
UNITS_NOTE = "hbar=1"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class Grid:
    start: float
    end: float
    points: int

    def __post_init__(self):
        if self.points < 2:
            raise UsageError(f"grid needs at least 2 points, got {self.points}")
        if not self.start < self.end:
            raise UsageError(f"grid start {self.start} must be below end {self.end}")

    @property
    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.end, self.points)

    @property
    def spacing(self) -> float:
        return (self.end - self.start) / (self.points - 1)


@dataclass(frozen=True)
class RunConfig:
    system: str
    ns: Tuple[int, ...]
    ell: int
    m: int
    omega: Tuple[float, float, float]
    coord: Optional[str]
    grid: Optional[Grid]
    output_format: str
    tolerance: float
    contour: Optional[ct.Contour]

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        if args.tol <= 0:
            raise UsageError(f"--tol must be positive, got {args.tol}")
        contour = None
        if args.contour:
            vals = _floats(args.contour, 4, "--contour")
            try:
                contour = ct.Contour(complex(vals[0], vals[1]), vals[2], vals[3], args.samples)
            except ValueError as exc:
                raise UsageError(str(exc)) from exc
        grid = None
        if args.grid:
            parts = args.grid.split(":")
            if len(parts) != 3:
                raise UsageError(f"--grid must look like start:end:points, got {args.grid!r}")
            try:
                grid = Grid(float(parts[0]), float(parts[1]), int(parts[2]))
            except ValueError as exc:
                raise UsageError(f"bad --grid {args.grid!r}: {exc}") from exc
        ns = tuple(int(v) for v in _floats(args.n, None, "--n")) if args.n is not None else ()
        return cls(
            system=args.system or "ho",
            ns=ns,
            ell=args.ell,
            m=args.m,
            omega=tuple(_floats(args.omega, 3, "--omega")),
            coord=args.coord,
            grid=grid,
            output_format=args.format,
            tolerance=args.tol,
            contour=contour,
        )

    def ho_numbers(self) -> sy.HOQuantumNumbers:
        ns = self.ns or (0,)
        if len(ns) not in (1, 3):
            raise UsageError(f"--n for ho takes one or three integers, got {len(ns)}")
        ns = tuple(ns) + (0,) * (3 - len(ns))
        try:
            return sy.HOQuantumNumbers(*ns, omega=self.omega)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc

    def hydrogen_numbers(self) -> sy.HydrogenQuantumNumbers:
        if len(self.ns) > 1:
            raise UsageError("--n for hydrogen takes one integer")
        n = self.ns[0] if self.ns else 1
        try:
            return sy.HydrogenQuantumNumbers(n, self.ell, self.m)
        except ValueError as exc:
            raise UsageError(f"invalid quantum numbers: {exc}") from exc


def _floats(text: str, count: Optional[int], flag: str) -> List[float]:
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"{flag} expects comma-separated numbers, got {text!r}") from exc
    if count is not None and len(vals) != count:
        raise UsageError(f"{flag} expects {count} values, got {len(vals)}")
    return vals


# ---------------------------------------------------------------- momentum functions per config

HO_AXES = ("x", "y", "z")
HYDROGEN_COORDS = ("phi", "theta", "radial")


def momentum_functions(cfg: RunConfig, single: bool = False):
    """(name, MomentumFunction) pairs selected by the config."""
    if cfg.system == "ho":
        q = cfg.ho_numbers()
        axes = HO_AXES if len(cfg.ns) == 3 else ("x",)
        if cfg.coord:
            if cfg.coord not in HO_AXES:
                raise UsageError(f"--coord for ho must be one of {HO_AXES}, got {cfg.coord!r}")
            axes = (cfg.coord,)
        if single:
            axes = axes[:1]
        return [(f"xi_{a}", sy.ho_momentum(q.ns[HO_AXES.index(a)])) for a in axes]
    q = cfg.hydrogen_numbers()
    coords = HYDROGEN_COORDS
    if cfg.coord:
        if cfg.coord not in HYDROGEN_COORDS:
            raise UsageError(f"--coord for hydrogen must be one of {HYDROGEN_COORDS}, got {cfg.coord!r}")
        coords = (cfg.coord,)
    elif single:
        coords = ("radial",)
    build = {
        "phi": lambda: sy.hydrogen_p_phi(q.m),
        "theta": lambda: sy.hydrogen_p_x(q.ell, q.m),
        "radial": lambda: sy.hydrogen_p_rho(q.n, q.ell),
    }
    return [(c, build[c]()) for c in coords]


def _quantum_meta(cfg: RunConfig) -> dict:
    if cfg.system == "ho":
        q = cfg.ho_numbers()
        return {"n": list(q.ns), "omega": list(q.omega)}
    q = cfg.hydrogen_numbers()
    return {"n": q.n, "ell": q.ell, "m": q.m}


# ---------------------------------------------------------------- output


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def render(rows: List[dict], cfg: RunConfig, header: Sequence[str], meta: dict) -> str:
    if cfg.output_format == "json":
        envelope = {"system": cfg.system, "quantum_numbers": _quantum_meta(cfg), "units": UNITS_NOTE}
        envelope.update(meta)
        envelope["rows"] = rows
        return json.dumps(envelope, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(row.get(h)) for h in header])
    return buf.getvalue()


# ---------------------------------------------------------------- commands


def cmd_spectrum(cfg: RunConfig):
    if cfg.system == "ho":
        q = cfg.ho_numbers()
        s = sy.ho_spectrum(q)
        row = {"n_x": q.n_x, "n_y": q.n_y, "n_z": q.n_z, "energy": s.energy}
    else:
        q = cfg.hydrogen_numbers()
        s = sy.hydrogen_spectrum(q)
        row = {"n": q.n, "ell": q.ell, "m": q.m, "energy": s.energy}
        row["theta_nodes"] = s.node_counts["theta"]
    row.update(s.action_values)
    row.update(s.angle_values)
    return [row], list(row), {}


def default_grid(name: str, p: sy.MomentumFunction) -> Grid:
    if p.coordinate == "xi":
        b = math.ceil(math.sqrt(2 * p.quantum_numbers["n"] + 1) + 2.0)
        return Grid(-float(b), float(b), 801)
    if p.coordinate == "x":
        return Grid(-0.99, 0.99, 801)
    if p.coordinate == "rho":
        return Grid(0.1, 4.0 * p.quantum_numbers["n"] + 4.0, 801)
    return Grid(0.0, 2 * math.pi, 801)


def figure_rows(p: sy.MomentumFunction, grid: Grid) -> List[dict]:
    """Figure data: p and the (max-normalized) wave function on the grid."""
    lo, hi = p.domain
    if p.coordinate in ("x", "rho") and not (lo < grid.start and grid.end < hi):
        raise UsageError(f"grid [{grid.start}, {grid.end}] leaves the {p.label} domain ({lo}, {hi})")
    q = grid.values
    nodes = p.nodes
    if nodes.size:
        near = np.min(np.abs(q[:, None] - nodes[None, :]), axis=1) < grid.spacing
    else:
        near = np.zeros(q.size, dtype=bool)
    u = np.real(p.eigenfunction.u(q))
    peak = np.max(np.abs(u))
    if peak > 0:
        u = u / peak
    pv = np.full(q.size, np.nan + 0j)
    pv[~near] = p.evaluate(q[~near])
    rows = []
    for qi, pi, ui, ni in zip(q, pv, u, near):
        rows.append({
            "q": float(qi),
            "re_p": None if ni else float(pi.real),
            "im_p": None if ni else float(pi.imag),
            "u": float(ui),
            "is_near_pole": bool(ni),
        })
    return rows


def cmd_momentum(cfg: RunConfig):
    (name, p), = momentum_functions(cfg, single=True)
    grid = cfg.grid or default_grid(name, p)
    rows = figure_rows(p, grid)
    meta = {"coordinate": name, "grid": {"start": grid.start, "end": grid.end, "points": grid.points}}
    return rows, FIGURE_HEADER, meta


ACTION_HEADER = ["coordinate", "J_over_hbar", "J_imag", "target", "deviation", "samples_used", "converged"]


def cmd_action(cfg: RunConfig):
    rows, failed = [], []
    for name, p in momentum_functions(cfg):
        contour = cfg.contour if (cfg.contour is not None and not p.periodic) else None
        try:
            a = ct.action_variable(p, contour, tol=cfg.tolerance)
        except ct.ContourError as exc:
            raise UsageError(str(exc)) from exc
        rows.append({
            "coordinate": name,
            "J_over_hbar": float(a.J_over_hbar.real),
            "J_imag": float(a.J_over_hbar.imag),
            "target": a.target,
            "deviation": a.deviation,
            "samples_used": a.samples_used,
            "converged": a.converged,
        })
        if not a.converged:
            failed.append(name)
    return rows, ACTION_HEADER, {"non_converged": failed}


NODES_HEADER = ["coordinate", "node_count", "antinode_count", "nodes", "antinodes",
                "winding", "consistent", "interleaved"]


def cmd_nodes(cfg: RunConfig):
    rows = []
    for name, p in momentum_functions(cfg):
        rep = ct.nodes_and_antinodes(p)
        rows.append({
            "coordinate": name,
            "node_count": rep.node_count,
            "antinode_count": rep.antinode_count,
            "nodes": list(rep.nodes),
            "antinodes": list(rep.antinodes),
            "winding": rep.winding,
            "consistent": rep.consistent,
            "interleaved": rep.interleaved,
        })
    if cfg.output_format == "csv":
        for r in rows:
            r["nodes"] = " ".join(repr(x) for x in r["nodes"])
            r["antinodes"] = " ".join(repr(x) for x in r["antinodes"])
    return rows, NODES_HEADER, {}


VERIFY_HEADER = ["check", "passed", "worst", "threshold", "cases", "detail"]


def cmd_verify(cfg: RunConfig, system: Optional[str], n_max: Optional[int], kappa_shift: float):
    ho_max = n_max if n_max is not None else 10
    h_max = n_max if n_max is not None else 6
    results = checks.run_all(system, ho_max, h_max, kappa_shift, cfg.tolerance)
    rows = [
        {"check": r.name, "passed": r.passed, "worst": r.worst, "threshold": r.threshold,
         "cases": r.cases, "detail": r.detail}
        for r in results
    ]
    meta = {"all_passed": all(r.passed for r in results), "kappa_shift": kappa_shift}
    return rows, VERIFY_HEADER, meta


# ---------------------------------------------------------------- entry point


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--system", choices=("ho", "hydrogen"), default=None)
    common.add_argument("--n", default=None, help="quantum number(s); ho accepts n or nx,ny,nz")
    common.add_argument("--ell", type=int, default=0)
    common.add_argument("--m", type=int, default=0)
    common.add_argument("--omega", default="1,1,1", help="oscillator frequencies wx,wy,wz")
    common.add_argument("--coord", default=None,
                        help="coordinate: x|y|z for ho, phi|theta|radial for hydrogen")
    common.add_argument("--grid", default=None, help="start:end:points")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--tol", type=float, default=1e-8)
    common.add_argument("--contour", default=None, help="cx,cy,rx,ry")
    common.add_argument("--samples", type=int, default=32)
    common.add_argument("--output", default=None, help="output path (default stdout)")

    parser = _Parser(prog="qhj", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("spectrum", parents=[common], help="energy, actions and angle variables")
    sub.add_parser("momentum", parents=[common], help="tabulate p and u on a grid")
    sub.add_parser("action", parents=[common], help="contour-integrated action variables")
    sub.add_parser("nodes", parents=[common], help="nodes and anti-nodes per coordinate")
    v = sub.add_parser("verify", parents=[common], help="run the invariant suites")
    v.add_argument("--kappa-shift", type=float, default=0.0)
    v.add_argument("--nmax", type=int, default=None)
    return parser


_VALUE_FLAGS = ("--grid", "--contour", "--omega", "--n", "--m", "--kappa-shift")


def _glue_negative_values(argv: Sequence[str]) -> List[str]:
    # "--grid -4:4:801" would otherwise read -4:4:801 as an option
    out, it = [], iter(argv)
    for tok in it:
        if tok in _VALUE_FLAGS:
            nxt = next(it, None)
            if nxt is None:
                out.append(tok)
            elif nxt.startswith("-") and len(nxt) > 1 and (nxt[1].isdigit() or nxt[1] == "."):
                out.append(f"{tok}={nxt}")
            else:
                out.extend([tok, nxt])
        else:
            out.append(tok)
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = build_parser().parse_args(_glue_negative_values(argv))
    except SystemExit as exc:
        # argparse exits on --help (0) and on bad usage (1 via _Parser.error)
        return int(exc.code or 0)
    try:
        cfg = RunConfig.from_args(args)
        if args.command == "spectrum":
            rows, header, meta = cmd_spectrum(cfg)
        elif args.command == "momentum":
            rows, header, meta = cmd_momentum(cfg)
        elif args.command == "action":
            rows, header, meta = cmd_action(cfg)
        elif args.command == "nodes":
            rows, header, meta = cmd_nodes(cfg)
        else:
            rows, header, meta = cmd_verify(cfg, args.system, args.nmax, args.kappa_shift)
    except UsageError as exc:
        print(f"qhj: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ct.ConvergenceError, ct.QuantizationError) as exc:
        diag = {"error": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, ct.ConvergenceError):
            diag.update(samples=exc.samples, last_change=exc.delta)
        print(json.dumps(diag), file=sys.stderr)
        return EXIT_CONVERGENCE

    text = render(rows, cfg, header, meta)
    if args.output:
        with open(args.output, "w", newline="") as fh:
            fh.write(text)
    else:
        try:
            sys.stdout.write(text)
            sys.stdout.flush()
        except BrokenPipeError:
            # reader went away (e.g. piped into head); silence the flush at exit
            os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())

    if args.command == "action" and meta["non_converged"]:
        print(json.dumps({"error": "non-converged", "coordinates": meta["non_converged"]}), file=sys.stderr)
        return EXIT_CONVERGENCE
    if args.command == "verify" and not meta["all_passed"]:
        return EXIT_VERIFY
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
