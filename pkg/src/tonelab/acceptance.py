"""The acceptance suite: thirteen numbered checks at fixed tolerances.

Each ``criterion_k`` returns a :class:`CriterionResult`. :func:`run_all`
evaluates 1 to 12, then 13 (everything passed inside the time budget).
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import comparison_suite as cs
from . import oracles
from .discrete_domain import (
    build_cylinder_domain,
    build_interval_domain,
    build_polar_domain,
    build_radial_domain,
)
from .quasilinear import EllipticProblem, Gate, blowup_solution, solvability_gate, solve_dirichlet
from .radial_eigen import WarpProfile, model_ball_lambda1
from .seeds import trial_seed
from .spaceform import ModelBall
from .tone_bounds import barta_bounds, certificate, random_admissible_field

TIME_BUDGET = 300.0


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    measured: dict = field(default_factory=dict)
    note: str = ""

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} criterion {self.number:2d}: {self.title}" + (
            f" ({self.note})" if self.note else "")

    def to_dict(self) -> dict:
        return {"check": f"criterion_{self.number}", "title": self.title,
                "verdict": "PASS" if self.passed else "FAIL",
                "measured": self.measured, "note": self.note}


def criterion_1() -> CriterionResult:
    out, ok = {}, True
    for n in (2, 3, 4, 5):
        t0 = time.perf_counter()
        lam = model_ball_lambda1(ModelBall(1.0, n, math.pi / 2)).lambda1
        dt = time.perf_counter() - t0
        out[f"n={n}"] = {"lambda1": lam, "error": lam - oracles.hemisphere_lambda1(n), "seconds": dt}
        ok &= abs(lam - n) <= 1e-6 and dt < 1.0
    return CriterionResult(1, "hemisphere lambda_1 = n, tol 1e-6, < 1 s each", ok, out)


def criterion_2() -> CriterionResult:
    ref = oracles.DISK_LAMBDA1
    lam = model_ball_lambda1(ModelBall(0.0, 2, 1.0)).lambda1
    ok = abs(lam - ref) <= 1e-5 and abs(ref - 5.783186) <= 1e-5
    return CriterionResult(2, "flat unit disk against Bessel oracle, tol 1e-5", ok,
                           {"lambda1": lam, "oracle": ref, "error": lam - ref,
                            "j01": math.sqrt(ref), "constant_is_j01_squared": True})


def criterion_3() -> CriterionResult:
    base = model_ball_lambda1(ModelBall(0.0, 2, 1.0)).lambda1
    out, ok = {}, True
    for r in (0.5, 2.0, 4.0):
        lam = model_ball_lambda1(ModelBall(0.0, 2, r)).lambda1
        rel = abs(lam - base / r ** 2) / base
        out[f"r={r}"] = rel
        ok &= rel < 1e-8
    return CriterionResult(3, "Euclidean scaling, relative 1e-8", ok, out)


def criterion_4() -> CriterionResult:
    l2 = model_ball_lambda1(ModelBall(-1.0, 2, 50.0), tol=1e-10).lambda1
    l3 = model_ball_lambda1(ModelBall(-1.0, 3, 50.0), tol=1e-10).lambda1
    ok2, ok3 = 0.25 < l2 < 0.251, 1.0 < l3 < 1.004
    note = "" if ok2 else f"n=2 gives {l2:.6f}; the gap to 1/4 at r=50 is about pi^2/r^2"
    return CriterionResult(4, "McKean limit at r=50: n=2 in (0.25, 0.251), n=3 in (1.0, 1.004)",
                           ok2 and ok3, {"n=2": l2, "n=3": l3, "n2_ok": ok2, "n3_ok": ok3}, note)


def barta_domains():
    return {
        "flat_disk": build_polar_domain(WarpProfile.model(0.0, 1.0, 64), N_theta=32),
        "hemisphere": build_polar_domain(WarpProfile.model(1.0, math.pi / 2, 64), N_theta=32),
        "hyperbolic_ball_n3": build_radial_domain(WarpProfile.model(-1.0, 2.0, 512), 3),
        "interval": build_interval_domain(0.0, 1.0, 512),
        "catenoid_band": build_cylinder_domain(-cs.catenoid_extent(1.5), cs.catenoid_extent(1.5),
                                               128, 16, lambda u: np.cosh(u) ** 2),
    }


def criterion_5(seed: int = 7, trials: int = 100) -> CriterionResult:
    held, total, out = 0, 0, {}
    for d_idx, (name, dom) in enumerate(barta_domains().items()):
        rng = np.random.default_rng(trial_seed(seed, d_idx))
        ok_here = 0
        for _ in range(trials):
            rep = barta_bounds(dom, random_admissible_field(dom, rng))
            ok_here += rep.passed
        out[name] = {"held": ok_here, "trials": trials, "lambda1": dom.ground()[0]}
        held += ok_here
        total += trials
    return CriterionResult(5, f"Barta sandwich in {total} random trials on 5 domains",
                           held == total == 5 * trials, out, f"{held}/{total}")


def criterion_6() -> CriterionResult:
    ref = oracles.DISK_LAMBDA1
    gaps = {}
    for N in (256, 512):
        dom = build_polar_domain(WarpProfile.model(0.0, 1.0, N), N_theta=64)
        gaps[N] = abs(certificate(dom).lower - ref)
    ratio = gaps[256] / gaps[512]
    ok = gaps[256] <= 0.3 and ratio >= 1.8
    return CriterionResult(6, "equality certificate gap <= 0.3 at N=256, ratio >= 1.8 per doubling",
                           ok, {"gap_256": gaps[256], "gap_512": gaps[512], "ratio": ratio})


def _corpus(seed):
    return {c: cs.cheng_corpus(c, 50, master_seed=seed) for c in (-1.0, 0.0, 1.0)}


def criterion_7(corpus) -> CriterionResult:
    held = sum(ch.passed for pairs in corpus.values() for ch, _ in pairs)
    total = sum(len(p) for p in corpus.values())
    eq = {}
    for c in (-1.0, 0.0, 1.0):
        rep = cs.cheng_compare(cs.random_warp(c, cs.CORPUS_RADIUS[c], 0, 0.0), c, 2)
        eq[c] = rep.margin
    eq_ok = all(abs(m) <= 1e-8 for m in eq.values())
    worst = min(ch.margin for pairs in corpus.values() for ch, _ in pairs)
    return CriterionResult(7, "Cheng comparison on 150 seeded warps, roughness 0 gives equality",
                           held == total == 150 and eq_ok,
                           {"held": held, "total": total, "min_margin": worst, "equality_margins": eq},
                           f"{held}/{total}")


def criterion_8(corpus) -> CriterionResult:
    held = sum(bi.passed and bi.details["min_ratio_slope"] >= -1e-8
               for pairs in corpus.values() for _, bi in pairs)
    total = sum(len(p) for p in corpus.values())
    worst = min(bi.details["min_ratio_slope"] for pairs in corpus.values() for _, bi in pairs)
    return CriterionResult(8, "Bishop monotonicity (f/S_c)' >= -1e-8 on the same corpus",
                           held == total, {"held": held, "total": total, "min_slope": worst},
                           f"{held}/{total}")


def wronskian_lattice():
    for c, m in itertools.product((-1, 0, 1), (2, 3, 4)):
        radii = (0.3, 0.7, 1.2) + ((2.0, 5.0) if c <= 0 else ())
        for r in radii:
            yield c, m, r


def criterion_9() -> CriterionResult:
    fails, n_cases, worst_w, worst_b = [], 0, -math.inf, math.inf
    for c, m, r in wronskian_lattice():
        w = cs.wronskian_negativity(c, m, r)
        b = cs.bracket_positivity(c, m, w.details["lambda1"], r)
        n_cases += 1
        worst_w = max(worst_w, w.details["max_W"])
        worst_b = min(worst_b, b.margin)
        if not (w.passed and b.passed):
            fails.append((c, m, r))
    return CriterionResult(9, "Wronskian W < 0 and bracket > 0 on the lattice", not fails,
                           {"cases": n_cases, "failures": fails, "max_W": worst_w,
                            "min_bracket": worst_b})


def criterion_10() -> CriterionResult:
    out, ok = {}, True
    for r in (1.2, 1.5, 2.0):
        rep = cs.submanifold_bound_check(r)
        gap = rep.details["discretization_gap"]
        out[f"r={r}"] = {"margin": rep.margin, "gap_1d_2d": gap, **rep.details}
        ok &= rep.margin > 0 and gap <= 1e-3
    return CriterionResult(10, "catenoid lambda_1 above j01^2/r^2, 1-D and 2-D within 1e-3", ok, out)


def criterion_11() -> CriterionResult:
    s15 = cs.stability_check(cs.StabilityInput(2, 1.5, 2.0, cs.catenoid_A2))
    s175 = cs.stability_check(cs.StabilityInput(2, 1.75, 2.0))
    mu = s15.details["stability_eigenvalue"]
    ok = s15.status == "stable" and s175.status == "inconclusive" and mu > 0
    return CriterionResult(11, "stability: r=1.5 stable, r=1.75 inconclusive, operator positive", ok,
                           {"r=1.5": s15.status, "r=1.75": s175.status, "stability_eigenvalue": mu})


def criterion_12() -> CriterionResult:
    dom = build_polar_domain(WarpProfile.model(0.0, 1.0, 256), N_theta=64)
    lam = dom.ground()[0]
    out, ok = {}, True
    for k in (0.0, 0.5, 0.9):
        prob = EllipticProblem(dom, F=k * lam, psi=0.0)
        gate = solvability_gate(prob)
        sol = solve_dirichlet(prob) if gate is Gate.SOLVABLE else None
        res = sol.residual if sol else math.inf
        out[f"F={k}*lambda1"] = {"gate": gate.value, "residual": res}
        ok &= gate is Gate.SOLVABLE and res < 1e-4
    gate = solvability_gate(EllipticProblem(dom, F=1.1 * lam))
    out["F=1.1*lambda1"] = {"gate": gate.value}
    ok &= gate is Gate.NO_SOLUTION
    blow = blowup_solution(dom, layer=1)
    vs_exact = blow.residual + abs(lam - oracles.DISK_LAMBDA1)
    out["blow_up"] = {"defect": blow.residual, "defect_vs_bessel_bound": vs_exact}
    ok &= blow.residual < 1e-2 and vs_exact < 1e-2
    return CriterionResult(12, "quasilinear gate and solves; blow-up defect", ok, out)


def run_all(seed: int = 7, progress=None) -> list[CriterionResult]:
    t0 = time.perf_counter()
    results = []

    def add(res):
        results.append(res)
        if progress:
            progress(res)

    for fn in (criterion_1, criterion_2, criterion_3, criterion_4):
        add(fn())
    add(criterion_5(seed))
    add(criterion_6())
    corpus = _corpus(seed)
    add(criterion_7(corpus))
    add(criterion_8(corpus))
    for fn in (criterion_9, criterion_10, criterion_11, criterion_12):
        add(fn())
    elapsed = time.perf_counter() - t0
    prior = all(r.passed for r in results)
    add(CriterionResult(13, "full suite passes within 5 minutes", prior and elapsed < TIME_BUDGET,
                        {"seconds": elapsed, "criteria_1_12_pass": prior}))
    return results
