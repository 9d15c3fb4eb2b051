"""``tonelab`` command line.

Exit status: 0 when every check passes, 1 when any fails, 2 on usage
errors such as bad flags or an unwritable output directory.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import comparison_suite as cs
from . import oracles
from . import quasilinear as ql
from .acceptance import run_all
from .discrete_domain import build_polar_domain
from .errors import ToneLabError
from .radial_eigen import WarpProfile, model_ball_lambda1, warped_ball_lambda1
from .reports import RunConfig, dumps, emit_report, rows_to_csv
from .seeds import trial_seed
from .spaceform import ModelBall
from .tone_bounds import barta_bounds, certificate, mckean_report, random_admissible_field


class UsageError(Exception):
    pass


def _common(p: argparse.ArgumentParser, c=0.0, dim=2, radius=1.0):
    p.add_argument("--c", type=float, default=c, help="curvature (default %(default)s)")
    p.add_argument("--dim", "--m", dest="dim", type=int, default=dim,
                   help="dimension n (or submanifold dimension m)")
    p.add_argument("--radius", type=float, default=radius)
    p.add_argument("--grid", type=int, default=None, help="grid size N (module default if omitted)")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--out", default=None, help="output directory (overrides $TONELAB_OUT_DIR)")
    p.add_argument("--format", choices=("json", "csv"), default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tonelab", description="Fundamental-tone toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    _common(sub.add_parser("model", help="lambda_1 of a space-form ball"))
    p = sub.add_parser("warped", help="lambda_1 of a warped ball (random or CSV warp)")
    _common(p)
    p.add_argument("--roughness", type=float, default=0.5)
    p.add_argument("--warp-csv", default=None, help="CSV with columns t,f,df,d2f")
    p = sub.add_parser("barta", help="Barta bounds for random test fields on a polar ball")
    _common(p)
    p.set_defaults(trials=20)
    _common(sub.add_parser("vfield", help="vector-field equality certificate on a polar ball"))
    _common(sub.add_parser("mckean", help="hyperbolic ball against (n-1)^2/4"), c=-1.0, radius=50.0)
    p = sub.add_parser("cheng", help="Cheng comparison on a seeded warp corpus")
    _common(p)
    p.add_argument("--roughness", type=float, default=0.5)
    p = sub.add_parser("bishop", help="Bishop monotonicity on a seeded warp corpus")
    _common(p)
    p.add_argument("--roughness", type=float, default=0.5)
    _common(sub.add_parser("mu", help="Wronskian negativity and bracket positivity"))
    _common(sub.add_parser("catenoid", help="catenoid piece against the flat disk bound"), radius=1.5)
    p = sub.add_parser("stability", help="stability criterion for a minimal hypersurface ball")
    _common(p, radius=1.5)
    p.add_argument("--supA2", type=float, default=2.0)
    p.add_argument("--profile", choices=("none", "catenoid"), default="none")
    p = sub.add_parser("elliptic", help="Delta u - |grad u|^2 = F on a polar ball")
    p.add_argument("action", choices=("solve", "gate", "blowup"))
    _common(p)
    p.add_argument("--problem", default=None, help="JSON problem document")
    p.add_argument("--F", type=float, default=0.0, dest="F")
    p.add_argument("--psi", default="0", help="number, or 'blow_up'")
    p.add_argument("--fields", default=None, help="write the u, f field dump to this CSV")
    _common(sub.add_parser("accept", help="run the acceptance suite"))
    return parser


def _config(args) -> RunConfig:
    extra = {k: v for k, v in vars(args).items()
             if k not in ("command", "c", "dim", "radius", "grid", "tol", "seed", "trials",
                          "format", "out")}
    return RunConfig(command=args.command, c=args.c, dim=args.dim, radius=args.radius,
                     grid=args.grid, tol=args.tol, seed=args.seed, trials=args.trials,
                     format=args.format, out=args.out, extra=extra)


def _disk_constant_note(lam, r):
    """lambda_1 r^2 of a flat disk is the square of the first zero of J_0, not the zero itself."""
    j = oracles.first_bessel_zero()
    return {"lambda1_r2": lam * r * r, "j01": j, "j01_squared": j * j,
            "note": "eigenvalue constant is j01 squared; the zero j01 alone is not an eigenvalue"}


def _polar(cfg):
    return build_polar_domain(WarpProfile.model(cfg.c, cfg.radius, cfg.grid or 256), N_theta=64)


def _corpus(cfg, args):
    pairs = []
    for k in range(cfg.trials):
        seed = trial_seed(cfg.seed, k)
        warp = cs.random_warp(cfg.c, cfg.radius, seed, args.roughness, cfg.grid or 4096)
        pairs.append((seed, warp))
    return pairs


def _run(cfg: RunConfig, args) -> tuple[list[dict], list[dict] | None, list[str]]:
    """Returns (results, sweep rows, human lines)."""
    cmd = cfg.command
    lines: list[str] = []
    if cmd == "model":
        res = model_ball_lambda1(ModelBall(cfg.c, cfg.dim, cfg.radius), tol=cfg.tol, N=cfg.grid or 4096)
        lines.append(f"lambda1 = {res.lambda1:.12g}")
        rep = {"check": "model", "theorem": "eqCheng3", "lambda1": res.lambda1,
               "residual": res.residual, "iterations": res.iterations,
               "bracket": list(res.bracket), "verdict": "PASS"}
        if cfg.c == 0 and cfg.dim == 2:
            rep["disk_constant"] = _disk_constant_note(res.lambda1, cfg.radius)
        return [rep], None, lines
    if cmd == "warped":
        if args.warp_csv:
            data = np.loadtxt(args.warp_csv, delimiter=",", skiprows=1)
            warp = WarpProfile(float(data[-1, 0]), data[:, 1], data[:, 2], data[:, 3], label=args.warp_csv)
        else:
            warp = cs.random_warp(cfg.c, cfg.radius, cfg.seed, args.roughness, cfg.grid or 4096)
        res = warped_ball_lambda1(warp, cfg.dim, tol=cfg.tol)
        lines.append(f"lambda1 = {res.lambda1:.12g}")
        return [{"check": "warped", "theorem": "eqCheng4", "lambda1": res.lambda1, "warp": warp.label,
                 "residual": res.residual, "verdict": "PASS"}], None, lines
    if cmd == "barta":
        dom = _polar(cfg)
        out, rows = [], []
        for k in range(cfg.trials):
            rng = np.random.default_rng(trial_seed(cfg.seed, k))
            rep = barta_bounds(dom, random_admissible_field(dom, rng)).to_dict()
            out.append(rep)
            rows.append({"seed": trial_seed(cfg.seed, k), "lower": rep["lower"], "upper": rep["upper"],
                         "lambda1": rep["lambda1"], "verdict": rep["verdict"]})
        t = dom.coords["t"]
        quad = barta_bounds(dom, np.where(dom.interior, 1 - (t / cfg.radius) ** 2, 0.0)).to_dict()
        out.insert(0, quad)
        lines.append(f"quadratic test field: {quad['lower']:.6g} <= {quad['lambda1']:.6g} <= {quad['upper']}")
        return out, rows, lines
    if cmd == "vfield":
        rep = certificate(_polar(cfg)).to_dict()
        lines.append(f"certificate {rep['lower']:.10g} vs lambda1 {rep['lambda1']:.10g}")
        return [rep], None, lines
    if cmd == "mckean":
        rep = mckean_report(cfg.dim, cfg.radius, N=cfg.grid or 4096).to_dict()
        lines.append(f"lambda1 = {rep['lambda1']:.10g} > (n-1)^2/4 = {rep['lower']:.6g}")
        return [rep], None, lines
    if cmd in ("cheng", "bishop"):
        out, rows = [], []
        for seed, warp in _corpus(cfg, args):
            rep = (cs.cheng_compare(warp, cfg.c, cfg.dim, cfg.tol) if cmd == "cheng"
                   else cs.bishop_check(warp, cfg.c, cfg.dim, cfg.tol))
            rep.seed = seed
            out.append(rep.to_dict())
            rows.append({"seed": seed, "c": cfg.c, "margin": rep.margin, "verdict": rep.verdict})
        worst = min(r["margin"] for r in rows)
        lines.append(f"{sum(r['verdict'] == 'PASS' for r in rows)}/{len(rows)} pass, min margin {worst:.3e}")
        return out, rows, lines
    if cmd == "mu":
        c = int(cfg.c)
        if c != cfg.c or c not in (-1, 0, 1):
            raise UsageError("mu needs --c in {-1, 0, 1}")
        w = cs.wronskian_negativity(c, cfg.dim, cfg.radius, cfg.grid or 4096)
        b = cs.bracket_positivity(c, cfg.dim, w.details["lambda1"], cfg.radius, cfg.grid or 4096)
        lines.append(f"min margin {min(w.margin, b.margin):.6e}")
        return [w.to_dict(), b.to_dict()], None, lines
    if cmd == "catenoid":
        rep = cs.submanifold_bound_check(cfg.radius, cfg.grid or 4096)
        lines.append(f"lambda1 = {rep.details['lambda_1d']:.8g} >= {rep.details['bound']:.8g}")
        return [rep.to_dict()], None, lines
    if cmd == "stability":
        profile = cs.catenoid_A2 if args.profile == "catenoid" else None
        rep = cs.stability_check(cs.StabilityInput(cfg.dim, cfg.radius, args.supA2, profile))
        lines.append(f"{rep.status}: supA2 = {args.supA2:g}, threshold = {rep.details['threshold']:.8g}")
        return [rep.to_dict()], None, lines
    if cmd == "elliptic":
        return _elliptic(cfg, args, lines)
    if cmd == "accept":
        results = run_all(cfg.seed, progress=lambda r: print(r.line(), flush=True))
        return [r.to_dict() for r in results], None, []
    raise UsageError(f"unknown command {cmd}")


def _elliptic(cfg, args, lines):
    if args.problem:
        prob = ql.load_problem(args.problem)
    else:
        psi = args.psi if args.psi == ql.BLOW_UP else float(args.psi)
        prob = ql.EllipticProblem(_polar(cfg), F=args.F, psi=psi)
    gate = ql.solvability_gate(prob, cfg.tol)
    if args.action == "gate":
        lines.append(gate.value)
        return [{"check": "gate", "theorem": "Elliptic2", "gate": gate.value,
                 "lambda1": prob.domain.ground()[0], "verdict": "PASS"}], None, lines
    if args.action == "blowup":
        sol = ql.blowup_solution(prob.domain)
        ok = sol.residual < 1e-2
        theorem = "Elliptic1"
    else:
        try:
            sol = ql.solve_dirichlet(prob, cfg.tol)
        except ToneLabError as exc:
            lines.append(str(exc))
            return [{"check": "solve", "theorem": "Elliptic2", "gate": gate.value,
                     "error": str(exc), "verdict": "FAIL"}], None, lines
        ok = sol.residual < 1e-4
        theorem = "Elliptic2"
    if args.fields:
        Path(args.fields).write_text(ql.field_csv(prob, sol))
    lines.append(f"{sol.status}: residual {sol.residual:.3e}")
    return [{"check": args.action, "theorem": theorem, "gate": gate.value, **sol.summary(),
             "verdict": "PASS" if ok else "FAIL"}], None, lines


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse uses 2 for usage errors
        return int(exc.code or 0)
    cfg = _config(args)
    try:
        results, rows, lines = _run(cfg, args)
    except (UsageError, ToneLabError, ValueError, FileNotFoundError) as exc:
        print(f"tonelab: error: {exc}", file=sys.stderr)
        return 2
    try:
        emit_report(cfg, results, rows)
    except OSError as exc:
        print(f"tonelab: cannot write reports: {exc}", file=sys.stderr)
        return 2
    for line in lines:
        print(line)
    if cfg.format == "json":
        print(dumps({"config": cfg.echo(), "results": results}), end="")
    else:
        print(rows_to_csv(rows if rows is not None else [
            {"check": r.get("check", r.get("source")), "verdict": r.get("verdict")} for r in results]), end="")
    ok = all(r.get("verdict") in ("PASS", "SKIP") for r in results)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
