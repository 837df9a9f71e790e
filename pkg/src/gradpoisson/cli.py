"""Batch command-line interface.

    gradpoisson <command> <problem.json> [--max-degree N] [--eps-order N]
                [--arity N] [--point a,b,...] [--json]

Exit status: 0 success, 1 mathematical negative (with certificate),
2 input error.  Reports are byte-deterministic.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from . import bfv, cohomology, pointwise
from .coiso import CoisoSplitting, PInfinityStructure, l_infinity_check
from .core import ContextMismatch, GradedContext, GradedPoly, ParityError, evaluate
from .corpus import Problem, ProblemError, load_problem
from .expr import ParseError, format_poly, parse
from .multivector import is_maurer_cartan, jacobiator, legendre_shift, poisson_matrix, schouten

COMMANDS = ("check-mc", "classify", "pinfty", "bfv", "cohomology", "lift", "star",
            "central-lift", "quotient", "legendre")
DEFAULTS = {"max_degree": 3, "eps_order": 2, "arity": 3}


class InputError(ValueError):
    pass


@dataclass
class Report:
    command: str
    problem: str
    options: Dict[str, Any]
    lines: List[str] = field(default_factory=list)
    data: Dict[str, Any] = field(default_factory=dict)
    status: int = 0

    def add(self, key: str, value, text: Optional[str] = None):
        self.data[key] = value
        self.lines.append(f"{key}: {value if text is None else text}")

    def line(self, text: str):
        self.lines.append(text)

    def render(self, as_json: bool) -> str:
        if as_json:
            payload = {"command": self.command, "problem": self.problem, "options": self.options,
                       "status": self.status, "result": self.data}
            return json.dumps(payload, indent=2, sort_keys=True) + "\n"
        opts = " ".join(f"{k}={v}" for k, v in sorted(self.options.items()))
        head = [f"command: {self.command}", f"problem: {self.problem}", f"options: {opts}"]
        return "\n".join(head + self.lines + [f"status: {self.status}"]) + "\n"


def fp(p: GradedPoly) -> str:
    return format_poly(p)


def _series(s: cohomology.EpsSeries) -> Dict[str, str]:
    return {f"eps^{n}": fp(c) for n, c in enumerate(s.coeffs) if c}


def _series_text(s: cohomology.EpsSeries) -> str:
    parts = [f"[eps^{n}] {fp(c)}" for n, c in enumerate(s.coeffs) if c]
    return "; ".join(parts) if parts else "0"


def _splitting(prob: Problem, pi: GradedPoly) -> PInfinityStructure:
    if not prob.constraints:
        raise InputError("this command needs 'constraints'")
    S = CoisoSplitting(pi.context, prob.constraints)
    return PInfinityStructure(S, pi, require_mc=False)


def _require_mc(rep: Report, pi: GradedPoly) -> bool:
    mc = is_maurer_cartan(pi)
    if not mc.ok:
        rep.add("MC", "no")
        rep.add("certificate", fp(mc.certificate))
        rep.status = 1
    return mc.ok


# commands ------------------------------------------------------------------------

def cmd_check_mc(prob: Problem, opts, rep: Report):
    pi = prob.pi()
    rep.add("pi", fp(pi))
    for (a, b), v in sorted(poisson_matrix(pi).items()):
        if a < b:
            rep.line(f"  {{{a}, {b}}} = {fp(v)}")
    mc = is_maurer_cartan(pi)
    ctx = pi.context
    xs = [ctx.gen(n) for n in ctx.base]
    jac = [fp(j) for i in range(len(xs)) for j_ in range(i + 1, len(xs)) for k in range(j_ + 1, len(xs))
           for j in [jacobiator(pi, xs[i], xs[j_], xs[k])] if j]
    rep.add("MC", "yes" if mc.ok else "no")
    rep.add("jacobiator_nonzero", len(jac))
    if not mc.ok:
        rep.add("certificate", fp(mc.certificate))
        rep.status = 1


def cmd_classify(prob: Problem, opts, rep: Report):
    pi = prob.pi()
    ctx = pi.context
    pts = [opts["point"]] if opts.get("point") is not None else list(prob.points)
    if not pts:
        raise InputError("classify needs --point or 'points'")
    mat = poisson_matrix(pi)
    base = list(ctx.base)
    n = len(base)
    tangential = [i for i, x in enumerate(base) if x not in prob.constraints]
    results = []
    for p in pts:
        if len(p) != n:
            raise InputError(f"point {p} has dimension {len(p)}, expected {n}")
        for i, x in enumerate(base):
            if x in prob.constraints and p[i] != 0:
                raise InputError(f"point {p} is not on C (coordinate {x} != 0)")
        assign = dict(zip(base, p))
        rows = [[evaluate(mat[(a, b)], assign).constant_term() if (a, b) in mat else Fraction(0)
                 for b in base] for a in base]
        data = pointwise.BilinearData.from_pi(rows)
        W = pointwise.Subspace(tuple(pointwise.standard_basis(n, i) for i in tangential), n)
        r = pointwise.classify(data, W)
        entry = dict(point=[str(c) for c in p], **r.flags(), rank_phi=r.rank_phi, codim=r.codim,
                     characteristic_dim=len(r.characteristic_basis), ac_dim=len(r.ac_basis))
        results.append(entry)
        flags = " ".join(f"{k}={'yes' if v else 'no'}" for k, v in r.flags().items())
        rep.line(f"point ({', '.join(entry['point'])}): {flags} rank_phi={r.rank_phi} "
                 f"codim={r.codim} dim(TC cap pi#(N*C))={len(r.characteristic_basis)}")
    rep.data["points"] = results


def cmd_pinfty(prob: Problem, opts, rep: Report):
    pi = prob.pi()
    mc = is_maurer_cartan(pi)
    rep.add("MC", "yes" if mc.ok else "no")
    P = _splitting(prob, pi)
    l0 = P.lambda0
    rep.add("lambda0", fp(l0))
    rep.add("coisotropic", "no" if l0 else "yes")
    gens = [P.splitting.context.gen(g) for g in P.splitting.a_generators]
    names = P.splitting.a_generators
    for g, a in zip(names, gens):
        rep.line(f"  lambda1({g}) = {fp(P.lam(a))}")
    br = {}
    for i in range(len(gens)):
        for j in range(i, len(gens)):
            v = P.lam(gens[i], gens[j])
            if v:
                br[f"{names[i]},{names[j]}"] = fp(v)
                rep.line(f"  lambda2({names[i]}, {names[j]}) = {fp(v)}")
    rep.data["lambda2"] = br
    report = l_infinity_check(P, arity=opts["arity"], sample_degree=1)
    rep.add("linf_checked", report.checked)
    rep.add("linf_violations", len(report.violations))
    if report.violations:
        name, args, val = report.violations[0]
        rep.add("first_violation", [name, [fp(a) for a in args], fp(val)],
                f"{name} on ({', '.join(fp(a) for a in args)}) = {fp(val)}")
    if not report.ok or not mc.ok or l0:
        rep.status = 1


def cmd_bfv(prob: Problem, opts, rep: Report):
    pi = prob.pi()
    if not _require_mc(rep, pi):
        return
    if not prob.constraints:
        raise InputError("bfv needs 'constraints'")
    ctx = bfv.BfvContext.from_pi(pi, prob.constraints)
    F = bfv.f0(ctx)
    rep.add("F0", fp(F))
    try:
        ch = bfv.bfv_charge(ctx, prob.constraints, max_degree=prob.option("charge_degree", 8))
    except bfv.NotCoisotropic as e:
        rep.add("coisotropic", "no")
        rep.add("certificate", fp(e.certificate))
        rep.status = 1
        return
    for k, c in enumerate(ch.components):
        rep.line(f"  Omega_{k} = {fp(c)}")
    rep.data["components"] = [fp(c) for c in ch.components]
    rep.add("omega", fp(ch.omega))
    rep.add("terminated", "yes" if ch.terminated else "no")
    rep.add("stop_reason", ch.stop_reason)
    rep.add("residual", fp(ch.residual))
    n = len(prob.constraints)
    table = bfv.bfv_cohomology(ch, list(range(-n, n + 1)), opts["max_degree"])
    _table(rep, "H_D", table)
    if not ch.terminated:
        rep.status = 1


def _table(rep: Report, label: str, groups: Dict[int, cohomology.CohomologyGroup]):
    rep.line(f"{label} (weight <= cap): degree | dim | representatives")
    data = {}
    for d, g in sorted(groups.items()):
        reps = [fp(p) for p in g.polys()]
        data[str(d)] = {"dim": g.dimension, "representatives": reps}
        rep.line(f"  {d} | {g.dimension} | {', '.join(reps) if reps else '-'}")
    rep.data[label] = data


def cmd_cohomology(prob: Problem, opts, rep: Report):
    pi = prob.pi()
    if not _require_mc(rep, pi):
        return
    P = _splitting(prob, pi)
    if P.lambda0:
        rep.add("coisotropic", "no")
        rep.add("certificate", fp(P.lambda0))
        rep.status = 1
        return
    cap = opts["max_degree"]
    n = len(prob.constraints)
    acx = cohomology.lambda1_complex(P, cap)
    _table(rep, "H_lambda1", {d: acx.cohomology_unchecked(d) for d in range(0, n + 1)})
    res = cohomology.schaetz_crosscheck(P, cap)
    rep.add("dims_H_D", {str(k): v for k, v in sorted(res.dims_D.items())},
            " ".join(f"{k}:{v}" for k, v in sorted(res.dims_D.items())))
    rep.add("dims_equal", "yes" if res.dims_equal else "no")
    rep.add("h0_iso", "yes" if res.h0_map_iso else "no")
    rep.add("h0_bracket_pairs", res.bracket_pairs)
    rep.add("h0_bracket_mismatches", len(res.bracket_mismatches))
    if not res.ok:
        rep.status = 1


def _eps_complex(prob: Problem, opts) -> Tuple[cohomology.EpsComplex, GradedContext]:
    spec = prob.complex
    if spec is None:
        raise InputError("lift needs a 'complex' object")
    ctx = spec.context()
    ops = [cohomology.graded_derivation(ctx, {g: parse(e, ctx) for g, e in layer})
           for layer in spec.layers]
    if not ops:
        raise InputError("'complex' needs at least one layer")
    w = list(spec.weights) if spec.weights is not None else [1] * len(ctx)
    if len(w) != len(ctx):
        raise InputError("'weights' must match the generators")
    return cohomology.EpsComplex.from_operators(ctx, ops, opts["max_degree"], w, opts["eps_order"]), ctx


def cmd_lift(prob: Problem, opts, rep: Report):
    ecx, ctx = _eps_complex(prob, opts)
    a0 = parse(prob.complex.cocycle, ctx)
    if not a0.is_homogeneous():
        raise InputError("the cocycle must be homogeneous")
    d = a0.degree() if a0 else 0
    rep.add("a0", fp(a0))
    rep.add("degree", d)
    try:
        res = cohomology.lift_cocycle(ecx, a0, d, opts["eps_order"])
    except ValueError as e:
        raise InputError(str(e)) from e
    polys = res.polys(ecx.basis)
    for n, p in enumerate(polys):
        rep.line(f"  a_{n} = {fp(p)}")
    rep.data["series"] = [fp(p) for p in polys]
    rep.add("lifted", "yes" if res.ok else "no")
    if not res.ok:
        rep.add("obstruction_order", res.obstruction_order)
        rep.add("obstruction", fp(ecx.basis.to_poly(res.obstruction, d + 1)))
        rep.add("obstruction_class", [str(c) for c in res.obstruction_class or ()])
        rep.status = 1


def _star(prob: Problem, opts):
    from .star import StarConfig, StarProduct
    if opts["eps_order"] != 2:
        raise InputError("only eps order 2 is derived; higher orders need user-supplied operators")
    return StarProduct(prob.pi(), StarConfig(order=2))


def cmd_star(prob: Problem, opts, rep: Report):
    from .star import associate_check, certify_associativity
    S = _star(prob, opts)
    if len(prob.star) < 2:
        raise InputError("star needs 'star': [f, g] or [f, g, h]")
    f, g = (S.parse(e) for e in prob.star[:2])
    fg = S.star(f, g)
    rep.add("f", fp(f))
    rep.add("g", fp(g))
    rep.add("f*g", _series(fg), _series_text(fg))
    com = S.commutator(f, g)
    rep.add("f*g-g*f", _series(com), _series_text(com))
    rep.add("2{f,g}", fp(S.bracket(f, g).scale(2)))
    rep.add("B2_symmetric", "yes" if S.b2_is_symmetric() else "no")
    defect = None
    if len(prob.star) > 2:
        h = S.parse(prob.star[2])
        a = associate_check(S, f, g, h)
        rep.add("h", fp(h))
        rep.add("associator", _series(a), _series_text(a))
        defect = not a.is_zero()
    sweep = certify_associativity(S, max_total=min(opts["max_degree"], 2))
    rep.add("sweep_degree", min(opts["max_degree"], 2))
    rep.add("sweep_associative", "yes" if sweep is None else "no")
    if sweep is not None:
        rep.add("sweep_first_defect", [fp(p) for p in sweep[0]])
    if defect or sweep is not None:
        rep.status = 1


def cmd_central_lift(prob: Problem, opts, rep: Report):
    from .star import NotCasimir, central_lift
    S = _star(prob, opts)
    if not prob.casimirs:
        raise InputError("central-lift needs 'casimirs'")
    lifts = {}
    for expr in prob.casimirs:
        phi = S.parse(expr)
        try:
            t = central_lift(S, phi, opts["max_degree"])
        except NotCasimir:
            cert = {n: fp(S.B1(phi, S.context.gen(n))) for n in S.context.names if S.B1(phi, S.context.gen(n))}
            rep.add("casimir", "no", f"no ({fp(phi)})")
            rep.add("certificate", cert, ", ".join(f"{{Phi, {k}}} = {v}" for k, v in sorted(cert.items())))
            rep.status = 1
            return
        lifts[fp(phi)] = _series(t)
        rep.line(f"  lift({fp(phi)}) = {_series_text(t)}")
    rep.data["lifts"] = lifts
    rep.add("verified_degree", opts["max_degree"])


def cmd_quotient(prob: Problem, opts, rep: Report):
    from .cohomology import EpsSeries
    from .star import NotCasimir, casimir_quotient, central_lift
    S = _star(prob, opts)
    levels = list(prob.levels) + ["0"] * (len(prob.casimirs) - len(prob.levels))
    lifts = []
    for expr, lvl in zip(prob.casimirs, levels):
        phi = S.parse(expr)
        try:
            t = central_lift(S, phi, opts["max_degree"])
        except NotCasimir:
            rep.add("casimir", "no", f"no ({fp(phi)})")
            rep.status = 1
            return
        lifts.append(t - EpsSeries.from_poly(S.parse(lvl), S.order))
    Q = casimir_quotient(S, lifts, opts["max_degree"])
    dims = Q.dims_by_degree()
    rep.add("dims_by_degree", {str(k): v for k, v in dims.items()},
            " ".join(f"{k}:{v}" for k, v in dims.items()))
    rep.add("basis", [fp(b) for b in Q.basis()], ", ".join(fp(b) for b in Q.basis()))
    table = {}
    for a, b, c in Q.table():
        table[f"{fp(a)} * {fp(b)}"] = _series(c)
        rep.line(f"  {fp(a)} * {fp(b)} = {_series_text(c)}")
    rep.data["table"] = table
    assoc = Q.associativity_defects()
    proj = Q.projection_defects()
    rep.add("table_associative", "yes" if not assoc else "no")
    rep.add("projection_is_morphism", "yes" if not proj else "no")
    if assoc or proj:
        rep.status = 1


def cmd_legendre(prob: Problem, opts, rep: Report):
    pi = prob.pi()
    if not prob.constraints:
        raise InputError("legendre needs 'constraints' (the fiber coordinates)")
    P = legendre_shift(pi, prob.constraints)
    ctx = P.context
    rep.add("generators", [[n, ctx.generator(n).degree] for n in ctx.base],
            ", ".join(f"{n}:{ctx.generator(n).degree}" for n in ctx.base))
    rep.add("shifted", fp(P))
    names = {n + "_dual": n for n in prob.constraints}
    back = legendre_shift(P, [n + "_dual" for n in prob.constraints], names)
    rep.add("double_shift_identity", "yes" if back == pi else "no")
    rep.add("[P,P]", fp(schouten(P, P)))


HANDLERS: Dict[str, Callable] = {
    "check-mc": cmd_check_mc, "classify": cmd_classify, "pinfty": cmd_pinfty, "bfv": cmd_bfv,
    "cohomology": cmd_cohomology, "lift": cmd_lift, "star": cmd_star,
    "central-lift": cmd_central_lift, "quotient": cmd_quotient, "legendre": cmd_legendre,
}


def _point(text: str) -> Tuple[Fraction, ...]:
    try:
        return tuple(Fraction(s.strip()) for s in text.strip("()").split(","))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational tuple: {text!r}")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gradpoisson", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("problem", help="JSON problem file")
    ap.add_argument("--max-degree", type=int, default=None, help="truncation cap (default 3)")
    ap.add_argument("--eps-order", type=int, default=None, help="eps order N (default 2)")
    ap.add_argument("--arity", type=int, default=None, help="L-infinity arity (default 3)")
    ap.add_argument("--point", type=_point, default=None, help="rational point a,b,...")
    ap.add_argument("--json", action="store_true", help="machine-readable report")
    return ap


def run(command: str, problem: Problem, max_degree=None, eps_order=None, arity=None,
        point=None) -> Report:
    opts = dict(DEFAULTS)
    for key in DEFAULTS:
        if problem.option(key) is not None:
            opts[key] = problem.option(key)
    for key, val in (("max_degree", max_degree), ("eps_order", eps_order), ("arity", arity)):
        if val is not None:
            opts[key] = val
    try:
        cohomology.Truncation(opts["max_degree"], opts["eps_order"])
    except ValueError as e:
        raise InputError(str(e)) from e
    if opts["eps_order"] < 1 or opts["arity"] < 0:
        raise InputError("eps order must be at least 1 and arity nonnegative")
    shown = dict(opts)
    if point is not None:
        opts["point"] = point
        shown["point"] = "(" + ", ".join(str(c) for c in point) + ")"
    rep = Report(command, problem.name, shown)
    HANDLERS[command](problem, opts, rep)
    return rep


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    try:
        prob = load_problem(args.problem)
        rep = run(args.command, prob, args.max_degree, args.eps_order, args.arity, args.point)
    except (ProblemError, ParseError, InputError, ContextMismatch, ParityError, OSError,
            cohomology.TruncationError) as e:
        sys.stdout.write(f"input error: {e}\n")
        return 2
    sys.stdout.write(rep.render(args.json))
    return rep.status


if __name__ == "__main__":
    sys.exit(main())
