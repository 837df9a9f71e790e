"""Sweep random eps-complexes: torsion-freeness against surjectivity, and lifts.

    python scripts/torsion_sweep.py [count] [seed]
"""
import random
import sys

from gradpoisson.cohomology import lift_cocycle, torsion_check
from gradpoisson.randomized import random_eps_complex

count = int(sys.argv[1]) if len(sys.argv) > 1 else 50
rng = random.Random(int(sys.argv[2]) if len(sys.argv) > 2 else 1)
equiv = les = free = lifts = lift_ok = 0
for _ in range(count):
    ecx = random_eps_complex(rng, N=rng.randint(1, 3))
    rep = torsion_check(ecx)
    equiv += rep.equivalence_ok
    les += rep.les_ok
    free += rep.torsion_free
    for d in ecx.basis.degrees:
        if ecx.classical.cohomology_unchecked(d + 1).dimension:
            continue
        for z in ecx.classical.cohomology_unchecked(d).representatives:
            lifts += 1
            lift_ok += lift_cocycle(ecx, z, d).ok
print(f"complexes: {count}  equivalence ok: {equiv}  LES ok: {les}  torsion-free: {free}")
print(f"lifts with H^(i+1) = 0: {lifts}  succeeded: {lift_ok}")
