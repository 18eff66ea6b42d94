"""Turn a Turing functional into an enumeration operator and back, then sweep both.

Run with ``python3 demos/transforms_tour.py``.
"""
import random

from posfunctor.samples import PAIR_LANGUAGE, random_star_functional, search_functional
from posfunctor.sweeps import iso_pairs, structure_family, sweep_star
from posfunctor.transforms import enum_to_star, star_to_enum

rng = random.Random(0)
pairs = list(iso_pairs(structure_family(PAIR_LANGUAGE, seed=0, sampled={3: 4})))
print(f"{len(pairs)} (structure, relabeling, image) triples")

for phi in (search_functional(4), random_star_functional(rng, 4)):
    psi = star_to_enum(phi, PAIR_LANGUAGE, PAIR_LANGUAGE, code_bound=1024)
    forward = sweep_star(phi, psi, pairs)
    # the search machine reads psi's listing back as a functional
    back = enum_to_star(psi, stage_budget=8)
    backward = sweep_star(back, psi, pairs)
    print(f"{phi.name:>10}: {len(phi.axioms):3d} query axioms -> {len(psi.axioms):4d} "
          f"enumeration axioms; forward ok={forward.ok}, back ok={backward.ok}")
