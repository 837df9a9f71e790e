"""Per-degree dimensions of H_D (BFV) and H_lambda1 on the coisotropic corpus pairs."""
import sys

from gradpoisson.coiso import CoisoSplitting, PInfinityStructure
from gradpoisson.cohomology import schaetz_crosscheck
from gradpoisson.corpus import COISOTROPIC, get

cap = int(sys.argv[1]) if len(sys.argv) > 1 else 3
for name, cons in COISOTROPIC:
    pi = get(name).pi()
    S = PInfinityStructure(CoisoSplitting(pi.context, cons), pi)
    r = schaetz_crosscheck(S, cap)
    dims = " ".join(f"H{d}={r.dims_D[d]}/{r.dims_lambda.get(d, 0)}" for d in sorted(r.dims_D) if r.dims_D[d] or r.dims_lambda.get(d))
    print(f"{name:16s} C={{{','.join(cons)}=0}}  {dims}  brackets {r.bracket_pairs} "
          f"mismatches {len(r.bracket_mismatches)}  ok {r.ok}")
