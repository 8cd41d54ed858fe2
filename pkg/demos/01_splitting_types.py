"""Splitting types of kernel bundles on P^1.

A surjective map of sums of line bundles on P^1 has a kernel that splits as
O(e_1) + ... + O(e_k).  We recover the e_i from section counts of twists.
"""
import numpy as np

from freeline_lab import BinaryForm, TwistedMap, make_field, splitting_type
from freeline_lab.p1split import kernel_h1, scan_table
from freeline_lab.rng import make_rng

F5 = make_field(5)

# %% The Euler sequence: (s, t) : O(1)^2 -> O(2) has kernel O(0).
s = BinaryForm.from_codes(F5, np.array([1, 0]))
t = BinaryForm.from_codes(F5, np.array([0, 1]))
euler = TwistedMap.row([1, 1], 2, [s, t])
print("Euler kernel:", splitting_type(euler))

# %% (s^2, st, t^2) : O^3 -> O(2) has kernel O(-1)^2.
forms = [BinaryForm.from_codes(F5, np.array(c)) for c in ([1, 0, 0], [0, 1, 0], [0, 0, 1])]
quad = TwistedMap.row([0, 0, 0], 2, forms)
split = splitting_type(quad)
print("quadratic kernel:", split)
for row in scan_table(quad, split):
    print("  ", row)

# %% Random maps: h^0 - h^1 always matches the Riemann-Roch count.
rng = make_rng(1)
for trial in range(5):
    degs = [int(x) for x in rng.integers(1, 4, size=4)]
    b = max(degs)
    fs = [BinaryForm.from_codes(F5, F5.random(rng, d + 1)) for d in degs]
    tmap = TwistedMap.row([b - d for d in degs], b, fs)
    table = {}
    split = splitting_type(tmap, table)
    chi = {m: sum(e + m + 1 for e in split) for m in table}
    ok = all(table[m] - kernel_h1(tmap, m) == chi[m] for m in table)
    print(f"degrees {degs}: kernel {split}, Euler characteristic check {ok}")
