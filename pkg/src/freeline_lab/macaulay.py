"""Emptiness of projective zero loci via one Macaulay-matrix rank.

For homogeneous g_1..g_s in k+1 variables with no common zero over the
algebraic closure, the ideal contains every form of degree
D >= sum of the k+1 largest (deg g_i - 1) + 1 (Lazard).  If the zero locus is
nonempty the quotient never vanishes, so a single rank at D decides.
"""
from __future__ import annotations

from math import comb

import numpy as np

from . import linalg
from .polyalg import monomials


def certificate_degree(degrees, nvars: int) -> int:
    """Sum of the nvars largest (degree - 1) values, plus one."""
    degs = sorted(degrees, reverse=True)[:nvars]
    return sum(d - 1 for d in degs) + 1


def macaulay_matrix(forms, D: int) -> np.ndarray:
    """Rows: x^mu * g for every generator g and monomial mu of degree D - deg g."""
    nvars = forms[0].n + 1
    cols = {m: i for i, m in enumerate(monomials(nvars, D))}
    rows = []
    for g in forms:
        if g.is_zero() or g.degree > D:
            continue
        for mu in monomials(nvars, D - g.degree):
            row = np.zeros(len(cols), dtype=np.int64)
            for e, c in g.terms.items():
                row[cols[tuple(a + b for a, b in zip(e, mu))]] = c
            rows.append(row)
    if not rows:
        return np.zeros((0, len(cols)), dtype=np.int64)
    return np.vstack(rows)


def ideal_dimension(forms, D: int) -> int:
    mat = macaulay_matrix(forms, D)
    return linalg.rank(forms[0].ctx, mat) if mat.shape[0] else 0


def has_no_common_zero(forms) -> bool:
    """True iff V(forms) is empty in P^k over the algebraic closure."""
    forms = [g for g in forms if not g.is_zero()]
    if not forms:
        return False
    if any(g.degree == 0 for g in forms):
        return True
    nvars = forms[0].n + 1
    if len(forms) < nvars:
        return False          # fewer equations than the dimension plus one
    D = certificate_degree([g.degree for g in forms], nvars)
    return ideal_dimension(forms, D) == comb(D + nvars - 1, nvars - 1)
