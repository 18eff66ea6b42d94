"""Walk one non-injective enumeration through the pullback pipeline, link by link.

Run with ``python3 demos/pipeline_tour.py``.
"""
import random

from posfunctor.experiments import pipeline_links, random_enumeration
from posfunctor.gallery import DEFAULT_SCHEDULE, build_successor

f = random_enumeration(random.Random(3), 12, injective=False)
print("enumeration:", list(f.values))
a = build_successor("with-K", DEFAULT_SCHEDULE, f.image_size)
for name, got, want in pipeline_links(f, a, DEFAULT_SCHEDULE):
    print(f"  {name:<17} {'ok' if got == want else 'MISMATCH'}  ({len(got)} codes)")

print("with one class left out of the spread:")
for name, got, want in pipeline_links(f, a, DEFAULT_SCHEDULE, corrupt=True):
    if got != want:
        print(f"  first broken link: {name}")
        break
