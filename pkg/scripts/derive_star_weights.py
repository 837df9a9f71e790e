"""Solve the associativity equations for the second-order star ansatz.

Prints the size of the solution family over a set of Jacobi bivectors,
checks that the shipped default weights lie in it, then sweeps
associativity on each structure.

    python scripts/derive_star_weights.py [max_total]
"""
import sys
import time

from gradpoisson.corpus import JACOBI, get
from gradpoisson.multivector import CotangentContext, bivector
from gradpoisson.star import DEFAULT_WEIGHTS, StarProduct, certify_associativity, derive_order2_weights

cap = int(sys.argv[1]) if len(sys.argv) > 1 else 3


def mk(base, mat):
    return bivector(CotangentContext([(b, 0) for b in base]), mat)


extra = {
    # {f,g} = dF . (grad f x grad g) with F = x^2 y + z^3
    "curl": mk("xyz", {("x", "y"): "3*z^2", ("y", "z"): "2*x*y", ("z", "x"): "x^2"}),
    "quadratic": mk("xyz", {("x", "y"): "x*y", ("y", "z"): "2*y*z", ("z", "x"): "-z*x"}),
}
structures = {n: get(n).pi() for n in JACOBI}
structures.update(extra)

t = time.time()
sol = derive_order2_weights([structures[n] for n in ("sl2-origin", "nonabelian-2d", "symplectic-r4",
                                                       "curl", "quadratic")])
print(f"patterns {len(sol.patterns)}  equations {sol.equations}  kernel dim {len(sol.kernel)}  "
      f"solvable {sol.solvable}  defaults in family {sol.contains(DEFAULT_WEIGHTS)}  "
      f"({time.time() - t:.1f}s)")
for name, pi in structures.items():
    t = time.time()
    S = StarProduct(pi)
    bad = certify_associativity(S, cap)
    print(f"{name:16s} associative to degree {cap}: {bad is None}  ({time.time() - t:.1f}s)")
