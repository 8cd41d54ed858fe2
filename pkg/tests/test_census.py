import json
import math

import numpy as np
import pytest

from freeline_lab import linalg
from freeline_lab.census import (GrassCell, dimension_estimate, enumerate_planes,
                                  fano_point_count, gaussian_binomial, grass_cells, run_census,
                                  singular_point_sample)
from freeline_lab.errors import BudgetExceeded
from freeline_lab.fermatlab import fermat
from freeline_lab.galois import make_field
from freeline_lab.linegeom import Hypersurface, contains, smoothness_certificate
from freeline_lab.polyalg import MultiPoly
from freeline_lab.rng import make_rng


def gaussian_binomial_product(n, k, q):
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


@pytest.mark.parametrize("n,k,q", [(4, 2, 2), (5, 2, 4), (4, 3, 3), (6, 3, 2), (3, 3, 5)])
def test_gaussian_binomial(n, k, q):
    assert gaussian_binomial(n, k, q) == gaussian_binomial_product(n, k, q)


def test_lines_in_p3_f2():
    planes = list(enumerate_planes(3, 1, make_field(2)))
    assert len(planes) == 35 == len(set(planes))


def test_lines_in_p4_f4():
    ctx = make_field(2, 2)
    total = sum(cell.size(ctx.q) for cell in grass_cells(4, 1))
    assert total == 5797 == (4**5 - 1) * (4**4 - 1) // ((4**2 - 1) * (4 - 1))


def test_whole_space_is_one_plane():
    assert len(list(enumerate_planes(3, 3, make_field(3)))) == 1


def test_planes_are_distinct_and_independent():
    ctx = make_field(3)
    planes = list(enumerate_planes(4, 2, ctx))
    assert len(planes) == gaussian_binomial(5, 3, 3) == len(set(planes))
    assert all(linalg.rank(ctx, p.rows) == 3 for p in planes[::97])


def test_cell_rows_are_echelon():
    cell = grass_cells(4, 1)[3]
    rows = cell.rows(3, 0, cell.size(3))
    for r in rows[:50]:
        for i, piv in enumerate(cell.pivots):
            assert r[i, piv] == 1 and not r[i, :piv].any()


def test_budget_exceeded():
    with pytest.raises(BudgetExceeded):
        list(enumerate_planes(6, 1, make_field(5), budget=1000))
    with pytest.raises(BudgetExceeded):
        run_census(fermat(6, 3, make_field(5)), 1, budget=1000)


def test_27_lines():
    assert fano_point_count(fermat(3, 3, make_field(2, 2))) == 27


def test_quadric_surface_has_eight_lines_over_f3():
    F = make_field(3)
    X = Hypersurface(MultiPoly(F, 3, 2, {(1, 1, 0, 0): 1, (0, 0, 1, 1): 2}))
    res = run_census(X, 1, collect=True)
    assert res.count == 8 == len(res.planes)
    assert all(contains(X, l) for l in res.planes)


def test_no_lines_on_generic_quintic_curve_arrangement():
    # a smooth plane quintic contains no lines
    F = make_field(3)
    X = fermat(2, 5, F)
    assert fano_point_count(X) == 0


def test_counted_planes_match_containment():
    ctx = make_field(3)
    rng = make_rng(50)
    X = Hypersurface(MultiPoly.random(ctx, 3, 2, rng))
    found = set(run_census(X, 1, collect=True).planes)
    for plane in enumerate_planes(3, 1, ctx):
        assert (plane in found) == contains(X, plane)


def test_count_is_coordinate_invariant():
    ctx = make_field(2, 2)
    X = fermat(3, 3, ctx)
    rng = make_rng(51)
    for _ in range(2):
        while True:
            A = ctx.random(rng, (4, 4))
            if linalg.rank(ctx, A) == 4:
                break
        assert fano_point_count(Hypersurface(X.f.substitute_linear(A))) == 27


def test_parallel_matches_serial():
    X = fermat(4, 3, make_field(2, 2))
    a = run_census(X, 1, jobs=1)
    b = run_census(X, 1, jobs=2)
    assert a.to_json() == b.to_json()


def test_checkpoint_resume(tmp_path):
    X = fermat(4, 3, make_field(2, 2))
    path = tmp_path / "ck.json"
    full = run_census(X, 1, checkpoint=path)
    saved = json.loads(path.read_text())
    assert len(saved["cells"]) == len(grass_cells(4, 1))
    # forget half of the cells and resume
    saved["cells"] = {k: v for i, (k, v) in enumerate(sorted(saved["cells"].items())) if i % 2}
    path.write_text(json.dumps(saved))
    resumed = run_census(X, 1, checkpoint=path)
    assert resumed.to_json() == full.to_json()
    assert len(json.loads(path.read_text())["cells"]) == len(grass_cells(4, 1))


def test_checkpoint_for_other_input_is_ignored(tmp_path):
    path = tmp_path / "ck.json"
    run_census(fermat(3, 3, make_field(2, 2)), 1, checkpoint=path)
    other = run_census(fermat(3, 2, make_field(3)), 1, checkpoint=path)
    assert other.count == fano_point_count(fermat(3, 2, make_field(3)))


def test_dimension_estimate_finite_fano():
    est = dimension_estimate(fermat(3, 3, make_field(2, 2)), 1, e_max=2)
    assert est["counts"] == {"1": 27, "2": 27}
    assert est["heuristic"]["label"] == "HEURISTIC" and est["heuristic"]["estimate"] == 0


def test_dimension_estimate_cubic_threefold():
    ctx = make_field(2)
    rng = make_rng(52)
    while True:
        X = Hypersurface(MultiPoly.random(ctx, 4, 3, rng))
        if smoothness_certificate(X):
            break
    est = dimension_estimate(X, 1, e_max=3)
    assert est["heuristic"]["estimate"] == 2


def test_dimension_estimate_empty():
    est = dimension_estimate(fermat(2, 5, make_field(3)), 1, e_max=1)
    assert est["heuristic"]["estimate"] == -math.inf


def test_singular_sample_pth_power():
    F = make_field(3)
    g = MultiPoly(F, 3, 3, {(3, 0, 0, 0): 1})
    out = singular_point_sample(g, e_max=2)
    # V(x0) is a P^2: 13 and 91 points
    assert out["counts"] == {"1": 13, "2": 91}
    assert out["heuristic"]["singular_locus_dim"] == 2


def test_singular_sample_smooth_quadric():
    F = make_field(5)
    g = MultiPoly(F, 3, 2, {(2, 0, 0, 0): 1, (0, 2, 0, 0): 1, (0, 0, 2, 0): 1, (0, 0, 0, 2): 2})
    out = singular_point_sample(g, e_max=2)
    assert out["counts"] == {"1": 0, "2": 0}
    assert out["heuristic"]["singular_locus_dim"] == -1


def test_singular_sample_fermat_partial():
    # d/dx_0 of the degree p+1 Fermat is x_0^p, everywhere non-reduced
    F = make_field(2)
    f = fermat(3, 3, F).f
    from freeline_lab.polyalg import partial_derivative
    out = singular_point_sample(partial_derivative(f, 0), e_max=3)
    assert out["heuristic"]["singular_locus_dim"] == 2


def test_singular_sample_switches_to_sampling():
    F = make_field(5)
    g = MultiPoly(F, 4, 5, {(5, 0, 0, 0, 0): 1})
    out = singular_point_sample(g, e_max=2, cap=500, samples=20000, seed=1)
    assert out["modes"] == {"1": "sampled", "2": "sampled"}
    assert out["heuristic"]["label"] == "HEURISTIC"
    assert out["heuristic"]["singular_locus_dim"] == 3
