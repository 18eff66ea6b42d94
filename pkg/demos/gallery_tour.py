"""The example functors: flipping K, forgetting and restoring it, and the parity functor.

Run with ``python3 demos/gallery_tour.py``.
"""
from posfunctor.diagrams import POSITIVE, CESchedule, encode_diagram, same_structure
from posfunctor.functors import compose
from posfunctor.gallery import (
    build_cycle_graph,
    build_successor,
    choose_copy,
    find_monotonicity_violation,
    functor_add_K,
    functor_drop_K,
    functor_flip,
)

schedule = CESchedule(((1, 0), (3, 2), (4, 5)))
with_k = build_successor("with-K", schedule, 8)
bar = build_successor("with-K-bar", schedule, 8)

flip = functor_flip(8)
print("flip(with-K) == with-K-bar:", same_structure(flip.object_map(with_k), bar))

# drop K, then read it back off the schedule
stage = schedule.final_stage
back = compose(functor_add_K(schedule), functor_drop_K(8)).object_map(with_k, stage)
print("add(drop(with-K)) == with-K:",
      encode_diagram(back, POSITIVE) == encode_diagram(with_k, POSITIVE))

for n in (None, 0, 1, 2):
    g = build_cycle_graph(schedule, 4, zero_on_cycle=n)
    copy, premise = choose_copy(encode_diagram(g, POSITIVE))
    where = "the loop vertex" if n is None else f"a cycle of length {n + 3}"
    print(f"0 on {where}: copy {copy}, decided by {len(premise)} edge atoms")

w = find_monotonicity_violation(CESchedule(((1, 7),)), 4)
print(f"nested oracles ({len(w.smaller)} <= {len(w.larger)} codes) send element "
      f"{w.element} to {w.value_before} at stage {w.stage_before} "
      f"but to {w.value_after} at stage {w.stage_after}")
