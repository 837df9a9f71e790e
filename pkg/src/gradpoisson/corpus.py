"""Problem files and the built-in corpus of Poisson structures.

A problem file is a JSON object::

    {
      "name": "sl2-origin",
      "generators": [["x", 0], ["y", 0], ["z", 0]],
      "poisson": [["x", "y", "z"], ["y", "z", "x"], ["z", "x", "y"]],
      "constraints": ["x", "y", "z"],
      "points": [["1", "0", "2"]],
      "casimirs": ["x^2 + y^2 + z^2"],
      "levels": ["1"],
      "star": ["x", "y", "z"],
      "options": {"max_degree": 3}
    }

``poisson`` lists entries {a, b} = expr.  Constraints are coordinate names:
C = {y = 0} in the given chart.  An optional ``complex`` object describes an
eps-deformed differential by the images of generators under each layer.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Mapping, Optional, Tuple

from .core import GradedContext, GradedPoly
from .expr import parse
from .multivector import CotangentContext, bivector


class ProblemError(ValueError):
    pass


def _frac(v) -> Fraction:
    try:
        return Fraction(str(v))
    except (ValueError, ZeroDivisionError) as e:
        raise ProblemError(f"not a rational number: {v!r}") from e


@dataclass(frozen=True)
class ComplexSpec:
    generators: Tuple[Tuple[str, int], ...]
    layers: Tuple[Tuple[Tuple[str, str], ...], ...]
    cocycle: str
    weights: Optional[Tuple[int, ...]] = None

    def context(self) -> GradedContext:
        return GradedContext(self.generators)

    def to_json(self) -> Dict[str, Any]:
        out = {"generators": [list(g) for g in self.generators],
               "layers": [dict(l) for l in self.layers], "cocycle": self.cocycle}
        if self.weights is not None:
            out["weights"] = list(self.weights)
        return out


@dataclass(frozen=True)
class Problem:
    name: str
    generators: Tuple[Tuple[str, int], ...]
    poisson: Tuple[Tuple[str, str, str], ...] = ()
    constraints: Tuple[str, ...] = ()
    points: Tuple[Tuple[Fraction, ...], ...] = ()
    casimirs: Tuple[str, ...] = ()
    levels: Tuple[str, ...] = ()
    star: Tuple[str, ...] = ()
    complex: Optional[ComplexSpec] = None
    options: Tuple[Tuple[str, Any], ...] = ()

    def context(self) -> CotangentContext:
        return CotangentContext(self.generators)

    def pi(self) -> GradedPoly:
        ctx = self.context()
        return bivector(ctx, {(a, b): parse(e, ctx) for a, b, e in self.poisson})

    def option(self, key: str, default=None):
        return dict(self.options).get(key, default)

    def to_json(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"name": self.name, "generators": [list(g) for g in self.generators],
                               "poisson": [list(p) for p in self.poisson]}
        if self.constraints:
            out["constraints"] = list(self.constraints)
        if self.points:
            out["points"] = [[str(c) for c in p] for p in self.points]
        for key in ("casimirs", "levels", "star"):
            if getattr(self, key):
                out[key] = list(getattr(self, key))
        if self.complex is not None:
            out["complex"] = self.complex.to_json()
        if self.options:
            out["options"] = dict(self.options)
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2) + "\n"


def _gens(raw) -> Tuple[Tuple[str, int], ...]:
    if not isinstance(raw, list) or not raw:
        raise ProblemError("'generators' must be a nonempty list of [name, degree]")
    out = []
    for g in raw:
        if not (isinstance(g, list) and len(g) == 2 and isinstance(g[0], str) and isinstance(g[1], int)):
            raise ProblemError(f"bad generator entry {g!r}")
        out.append((g[0], g[1]))
    return tuple(out)


def problem_from_json(data: Mapping[str, Any]) -> Problem:
    if not isinstance(data, dict):
        raise ProblemError("problem file must hold a JSON object")
    known = {"name", "generators", "poisson", "constraints", "points", "casimirs", "levels",
             "star", "complex", "options"}
    extra = set(data) - known
    if extra:
        raise ProblemError(f"unknown keys: {sorted(extra)}")
    gens = _gens(data.get("generators"))
    names = {g for g, _ in gens}
    poisson = []
    for entry in data.get("poisson", []):
        if not (isinstance(entry, list) and len(entry) == 3 and all(isinstance(s, str) for s in entry)):
            raise ProblemError(f"bad poisson entry {entry!r}")
        if entry[0] not in names or entry[1] not in names:
            raise ProblemError(f"poisson entry {entry!r} uses an unknown generator")
        poisson.append(tuple(entry))
    cons = tuple(data.get("constraints", []))
    for y in cons:
        if y not in names:
            raise ProblemError(f"constraint {y!r} is not a coordinate name")
    points = tuple(tuple(_frac(c) for c in p) for p in data.get("points", []))
    for p in points:
        if len(p) != len(gens):
            raise ProblemError(f"point {p} has the wrong dimension")
    cx = None
    if "complex" in data:
        raw = data["complex"]
        if not isinstance(raw, dict):
            raise ProblemError("'complex' must be an object")
        layers = tuple(tuple(sorted(l.items())) for l in raw.get("layers", []))
        w = raw.get("weights")
        cx = ComplexSpec(_gens(raw.get("generators")), layers, str(raw.get("cocycle", "0")),
                         tuple(w) if w is not None else None)
    opts = data.get("options", {})
    if not isinstance(opts, dict):
        raise ProblemError("'options' must be an object")
    return Problem(str(data.get("name", "problem")), gens, tuple(poisson), cons, points,
                   tuple(data.get("casimirs", [])), tuple(data.get("levels", [])),
                   tuple(data.get("star", [])), cx, tuple(sorted(opts.items())))


def load_problem(path: str) -> Problem:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ProblemError(f"invalid JSON: {e.msg} at line {e.lineno}, column {e.colno}") from e
    return problem_from_json(data)


def _p(*xs) -> Tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in xs)


SL2 = (("x", "y", "z"), ("y", "z", "x"), ("z", "x", "y"))
XYZ = (("x", 0), ("y", 0), ("z", 0))
R4 = (("q1", 0), ("p1", 0), ("q2", 0), ("p2", 0))

CORPUS: Dict[str, Problem] = {p.name: p for p in [
    Problem("symplectic-r2", (("q", 0), ("p", 0)), (("q", "p", "1"),), ("p",),
            (_p(1, 0), _p(Fraction(-1, 2), 0)), star=("q", "p", "q*p")),
    Problem("symplectic-r4", R4, (("q1", "p1", "1"), ("q2", "p2", "1")), ("p1", "p2"),
            (_p(1, 0, 2, 0),), star=("q1", "p1", "q2*p2")),
    Problem("symplectic-r4-noncoiso", R4, (("q1", "p1", "1"), ("q2", "p2", "1")), ("q2", "p2"),
            (_p(1, 1, 0, 0),)),
    Problem("sl2-origin", XYZ, SL2, ("x", "y", "z"), (_p(0, 0, 0),),
            casimirs=("x^2 + y^2 + z^2",), levels=("1",), star=("x", "y", "z")),
    Problem("sl2-plane", XYZ, SL2, ("z",), (_p(1, 2, 0), _p(0, 0, 0))),
    Problem("sl2-axis", XYZ, SL2, ("x", "y"), (_p(0, 0, 3), _p(0, 0, 0))),
    Problem("nonabelian-2d", (("y1", 0), ("y2", 0)), (("y1", "y2", "y1"),), ("y1", "y2"),
            (_p(0, 0),), star=("y1", "y2", "y1*y2")),
    Problem("non-jacobi", (("x1", 0), ("x2", 0), ("x3", 0), ("x4", 0)),
            (("x1", "x2", "1"), ("x3", "x4", "x1")), ("x3", "x4"), (_p(0, 1, 0, 0),),
            star=("x2", "x3", "x4")),
    Problem("abelian-plane", (("x", 0), ("y", 0)), (), ("y",), (_p(2, 0),),
            casimirs=("x",), levels=("0",), star=("x", "y", "x*y")),
    Problem("lift-koszul", (("x", 0), ("y", 0)), complex=ComplexSpec(
        (("x", 0), ("y", 0), ("b", -1), ("c", 1)),
        ((("b", "y"),), (("x", "y*c"),)), "x", (1, 1, 1, 0)), options=(("eps_order", 2), ("max_degree", 3))),
    Problem("lift-obstructed", (("x", 0), ("y", 0)), complex=ComplexSpec(
        (("x", 0), ("y", 0), ("b", -1), ("c", 1)),
        ((("b", "y"),), (("x", "c"),)), "x", (1, 1, 1, 0)), options=(("eps_order", 2), ("max_degree", 3))),
]}

#: entries whose bivector satisfies the Jacobi identity
JACOBI = ("symplectic-r2", "symplectic-r4", "sl2-origin", "nonabelian-2d", "abelian-plane")
#: distinct Poisson structures, one problem each
STRUCTURES = JACOBI + ("non-jacobi",)
#: coisotropic (structure, constraints) pairs used by the cross-checks
COISOTROPIC = (
    ("symplectic-r2", ("p",)), ("symplectic-r4", ("p1", "p2")), ("symplectic-r4", ("p1",)),
    ("sl2-origin", ("x", "y", "z")), ("sl2-origin", ("z",)), ("nonabelian-2d", ("y1", "y2")),
    ("nonabelian-2d", ("y1",)), ("nonabelian-2d", ("y2",)), ("abelian-plane", ("y",)),
)


def get(name: str) -> Problem:
    try:
        return CORPUS[name]
    except KeyError:
        raise ProblemError(f"no corpus entry {name!r}") from None
