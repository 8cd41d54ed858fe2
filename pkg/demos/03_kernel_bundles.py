"""Kernel bundles of base-point-free systems restricted to curves.

For V = <x_0^3, ..., x_3^3> in characteristic 3 the kernel of the evaluation
map restricts to a general line with a negative summand, yet the twisted
cubic makes it trivial.
"""
from freeline_lab import make_field, restricted_splitting
from freeline_lab.fermatlab import audit_free_curve
from freeline_lab.kersys import (classify_line_case, globally_generated,
                                 powers_system, search_free_curve, twisted_cubic)

F3 = make_field(3)
V = powers_system(F3, 3, 3)

# %% random lines over F_27
print("line cases:", classify_line_case(V, 30, seed=0, ext=3).counts)

# %% the twisted cubic
C = twisted_cubic(F3)
print("on the twisted cubic:", restricted_splitting(V, C),
      "globally generated:", globally_generated(V, C))

# %% a staged search finds a free curve on its own
w = search_free_curve(V, budget=200, seed=0)
print(f"search: stage {w.stage}, splitting {w.splitting}, over F_3^{w.ext}")

# %% the Fermat free curves
for d, k, p in ((3, 7, 2), (4, 9, 3)):
    print(audit_free_curve(d, k, make_field(p)).to_json())
