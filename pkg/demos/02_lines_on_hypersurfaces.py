"""Counting lines and reading off their normal bundles.

The Fermat cubic surface over F_4 carries all 27 of its lines.  On the
Fermat cubic threefold over F_4 every line has normal bundle O(-1) + O(1),
so none of them is free.
"""
from collections import Counter

from freeline_lab import fermat, make_field, normal_bundle_line, run_census
from freeline_lab.fermatlab import audit_no_free_lines

F4 = make_field(2, 2)

# %% 27 lines
surface = fermat(3, 3, F4)
lines = run_census(surface, 1, collect=True).planes
print("lines on the Fermat cubic surface over F_4:", len(lines))
print("normal bundles:", Counter(str(normal_bundle_line(surface, l).splitting) for l in lines))

# %% the threefold: no free lines
audit = audit_no_free_lines(2, 4)
print("threefold audit:", audit.to_json())

# %% a random smooth cubic threefold over F_5 for contrast
from freeline_lab import Hypersurface, MultiPoly
from freeline_lab.linegeom import smoothness_certificate
from freeline_lab.rng import make_rng

rng = make_rng(3)
F5 = make_field(5)
while True:
    X = Hypersurface(MultiPoly.random(F5, 4, 3, rng))
    if smoothness_certificate(X):
        break
lines = run_census(X, 1, collect=True).planes
types = Counter(str(normal_bundle_line(X, l).splitting) for l in lines)
print(f"random cubic threefold over F_5: {len(lines)} lines, types {dict(types)}")
