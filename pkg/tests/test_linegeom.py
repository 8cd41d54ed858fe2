import numpy as np
import pytest

from freeline_lab import linalg
from freeline_lab.census import run_census
from freeline_lab.errors import (DegenerateInput, LineNotOnHypersurface,
                                 PlaneNotOnHypersurface, SingularAlongLine)
from freeline_lab.fermatlab import fermat
from freeline_lab.galois import make_field, root_of_minus_one
from freeline_lab.linegeom import (Hypersurface, contains, contains_batch, expected_fano_dim,
                                   fano_tangent_dim, is_downward, kernel_bundle_on_line,
                                   line_is_free, linear_part_profile, normal_bundle_line,
                                   normal_bundle_lines, planted_hypersurface,
                                   smoothness_certificate, tangent_F_lambda)
from freeline_lab.polyalg import LinearSubspace, MultiPoly, coordinate_subspace, multisets
from freeline_lab.rng import make_rng

from oracles import restrict_line_oracle


def poly(ctx, n, terms):
    d = sum(next(iter(terms)))
    return MultiPoly(ctx, n, d, terms)


def random_rows(ctx, k, n, rng):
    while True:
        rows = ctx.random(rng, (k + 1, n + 1))
        if linalg.rank(ctx, rows) == k + 1:
            return rows


def random_point(line, rng):
    params = line.ctx.random(rng, 2)
    if not params.any():
        params[0] = 1
    return line.point(params)


def fermat_plane(ctx, d, pairs, n):
    mu = root_of_minus_one(ctx, d).code
    rows = np.zeros((pairs, n + 1), dtype=np.int64)
    for i in range(pairs):
        rows[i, 2 * i], rows[i, 2 * i + 1] = 1, mu
    return LinearSubspace(ctx, rows)


QUADRIC = poly(make_field(5), 3, {(1, 1, 0, 0): 1, (0, 0, 1, 1): 4})   # x0x1 - x2x3


# -- containment and smoothness ---------------------------------------------------
def test_containment_examples():
    F = make_field(5)
    assert contains(fermat(5, 3, F), fermat_plane(F, 3, 2, 5))
    assert contains(Hypersurface(QUADRIC), coordinate_subspace(F, 3, [0, 3]))


def test_random_containment_matches_oracle():
    ctx = make_field(3)
    rng = make_rng(20)
    X = Hypersurface(MultiPoly.random(ctx, 3, 4, rng))
    rows = np.stack([random_rows(ctx, 1, 3, rng) for _ in range(30)])
    mask = contains_batch(X, rows)
    oracle = [not any(restrict_line_oracle(X.f, r)) for r in rows]
    assert list(mask) == oracle


def test_smoothness_examples():
    assert smoothness_certificate(fermat(3, 3, make_field(2)))
    assert smoothness_certificate(fermat(4, 4, make_field(3)))
    assert not smoothness_certificate(fermat(3, 4, make_field(2)))
    assert not smoothness_certificate(Hypersurface(poly(make_field(5), 2, {(1, 1, 1): 1})))
    assert smoothness_certificate(Hypersurface(QUADRIC))


def test_zero_polynomial_rejected():
    with pytest.raises(DegenerateInput):
        Hypersurface(MultiPoly(make_field(3), 2, 2))


# -- normal bundles ---------------------------------------------------------------
def test_quadric_surface_lines_are_free():
    X = Hypersurface(QUADRIC)
    for line in run_census(X, 1, collect=True).planes:
        report = normal_bundle_line(X, line)
        assert report.splitting == (0,) and report.free and report.h1_minus1 == 0
        assert line_is_free(X, line)


def test_cubic_surface_lines():
    X = fermat(3, 3, make_field(2, 2))
    lines = run_census(X, 1, collect=True).planes
    reports = normal_bundle_lines(X, lines)
    assert len(reports) == 27
    assert all(r.splitting == (-1,) and not r.free for r in reports)
    assert not line_is_free(X, lines[0])


def test_fermat_cubic_threefold_lines():
    X = fermat(4, 3, make_field(2, 2))
    lines = run_census(X, 1, collect=True).planes[:40]
    for r in normal_bundle_lines(X, lines):
        assert r.splitting == (-1, 1)
        assert r.h0 >= 2 * 4 - 6 and r.h1_minus1 >= 1


def test_report_invariants_on_random_threefolds():
    ctx = make_field(5)
    rng = make_rng(21)
    for _ in range(5):
        line = LinearSubspace(ctx, random_rows(ctx, 1, 4, rng))
        X = planted_hypersurface(ctx, 4, 3, line, rng)
        r = normal_bundle_line(X, line)
        assert r.splitting.degree == X.n - 1 - X.d
        assert max(r.splitting) <= 1
        assert r.free == (r.h1_minus1 == 0)
        assert r.h0 == sum(max(0, e + 1) for e in r.splitting)
        assert kernel_bundle_on_line(X, line) == r.splitting.parts + (1, 1)


def test_normal_bundle_errors():
    F = make_field(5)
    X = Hypersurface(QUADRIC)
    with pytest.raises(LineNotOnHypersurface):
        normal_bundle_line(X, coordinate_subspace(F, 3, [0, 1]))
    cone = Hypersurface(poly(F, 2, {(1, 1, 0): 1}))
    with pytest.raises(SingularAlongLine):
        normal_bundle_line(cone, coordinate_subspace(F, 2, [1, 2]))


def test_line_freeness_on_smooth_cubic_threefolds_over_f5():
    ctx = make_field(5)
    rng = make_rng(22)
    verdicts = []
    while len(verdicts) < 20:
        line = LinearSubspace(ctx, random_rows(ctx, 1, 4, rng))
        X = planted_hypersurface(ctx, 4, 3, line, rng)
        try:
            verdicts.append(line_is_free(X, line))
        except SingularAlongLine:
            continue
    # lines of type (-1, 1) form a proper closed subset; most sampled lines are free
    assert sum(verdicts) > len(verdicts) // 2


def test_coordinate_invariance():
    ctx = make_field(3, 2)
    rng = make_rng(23)
    for _ in range(5):
        line = LinearSubspace(ctx, random_rows(ctx, 1, 4, rng))
        X = planted_hypersurface(ctx, 4, 3, line, rng)
        A = random_rows(ctx, 4, 4, rng)
        Y = Hypersurface(X.f.substitute_linear(A))            # y-coordinates, x = A y
        moved = LinearSubspace(ctx, linalg.matmul(ctx, line.rows, linalg.inverse(ctx, A).T))
        assert contains(Y, moved)
        assert normal_bundle_line(Y, moved).splitting == normal_bundle_line(X, line).splitting
        assert fano_tangent_dim(Y, moved) == fano_tangent_dim(X, line)
        q = random_point(line, rng)
        q2 = linalg.matmul(ctx, linalg.inverse(ctx, A), q[:, None])[:, 0]
        assert linear_part_profile(Y, moved, q2).span_rank == linear_part_profile(X, line, q).span_rank


# -- linear parts -------------------------------------------------------------------
def test_linear_part_profile_trivial():
    F = make_field(5)
    X = Hypersurface(poly(F, 3, {(3, 1, 0, 0): 1}))
    prof = linear_part_profile(X, coordinate_subspace(F, 3, [0, 1]), [1, 0, 0, 0])
    assert prof.span_rank == 1 and prof.prefix_r == 1


def test_linear_parts_match_normal_bundle():
    ctx = make_field(2, 2)
    X = fermat(4, 3, ctx)
    line = run_census(X, 1, collect=True).planes[0]
    rng = make_rng(24)
    report = normal_bundle_line(X, line)
    for _ in range(5):
        prof = linear_part_profile(X, line, random_point(line, rng))
        assert prof.tangent_dim == report.h0_minus1
        assert prof.span_rank == X.d - report.h1_minus1


@pytest.mark.parametrize("E", [1, 2, 3])
def test_prefix_property_on_fermat_p_plus_one(E):
    # d = p + 1 = 3 in characteristic 2, so p >= d - 1 and the prefix property must hold
    X = fermat(4, 3, make_field(2, 2))
    lines = run_census(X, 1, collect=True).planes[:8]
    big = make_field(2, 2 * E)
    XB = X.base_change(big)
    rng = make_rng(25, E)
    for line in lines:
        lb = line.base_change(big)
        assert linear_part_profile(XB, lb, random_point(lb, rng)).prefix_property


# -- k-planes -----------------------------------------------------------------------
def test_fano_tangent_dim_cubic_surface():
    X = fermat(3, 3, make_field(2, 2))
    for line in run_census(X, 1, collect=True).planes:
        assert fano_tangent_dim(X, line) == (0, 0)


def test_fano_tangent_dim_agrees_with_splitting():
    ctx = make_field(5)
    rng = make_rng(26)
    for _ in range(5):
        line = LinearSubspace(ctx, random_rows(ctx, 1, 5, rng))
        X = planted_hypersurface(ctx, 5, 3, line, rng)
        assert fano_tangent_dim(X, line)[0] == normal_bundle_line(X, line).h0


def test_quartic_in_p7_has_expected_tangent_dim():
    ctx = make_field(5)
    rng = make_rng(27)
    line = LinearSubspace(ctx, random_rows(ctx, 1, 7, rng))
    X = planted_hypersurface(ctx, 7, 4, line, rng)
    assert fano_tangent_dim(X, line) == (7, 7)


def test_fermat_quartic_plane_exceeds_expected():
    ctx = make_field(3, 2)
    X = fermat(5, 4, ctx)
    plane = fermat_plane(ctx, 4, 3, 5)
    h0, expected = fano_tangent_dim(X, plane)
    assert expected == expected_fano_dim(5, 4, 2) == -6
    assert h0 > expected


def test_fano_tangent_dim_requires_containment():
    F = make_field(5)
    with pytest.raises(PlaneNotOnHypersurface):
        fano_tangent_dim(Hypersurface(QUADRIC), coordinate_subspace(F, 3, [0, 1]))


def test_is_downward():
    assert is_downward([(0,), (0, 0), (0, 1), (1, 1), (1,)], 2, 3)
    assert not is_downward([(0,), (0, 0)], 2, 3)
    assert is_downward([], 2, 3)


def test_tangent_f_lambda_on_fermat_quartic_plane():
    ctx = make_field(3, 2)
    X = fermat(5, 4, ctx)
    plane = fermat_plane(ctx, 4, 3, 5)
    rng = make_rng(28)
    outcomes = []
    for _ in range(50):
        inner = random_rows(ctx, 1, 2, rng)
        small = LinearSubspace(ctx, linalg.matmul(ctx, inner, plane.rows))
        t = tangent_F_lambda(X, small, plane)
        if t.greedy_success:
            assert is_downward(t.witness, 2, 4) and len(t.witness) == t.span_rank
        outcomes.append(t.greedy_success)
    assert all(outcomes)


def test_tangent_f_lambda_quadrics_always_succeed():
    ctx = make_field(5)
    rng = make_rng(29)
    for _ in range(10):
        plane = LinearSubspace(ctx, random_rows(ctx, 2, 6, rng))
        X = planted_hypersurface(ctx, 6, 2, plane, rng)
        small = LinearSubspace(ctx, linalg.matmul(ctx, random_rows(ctx, 1, 2, rng), plane.rows))
        t = tangent_F_lambda(X, small, plane)
        assert t.greedy_success
        assert set(t.witness) <= set(I for I in multisets(2, 1) if I)


def test_tangent_f_lambda_k1_matches_linear_parts():
    ctx = make_field(5)
    rng = make_rng(30)
    line = LinearSubspace(ctx, random_rows(ctx, 1, 5, rng))
    X = planted_hypersurface(ctx, 5, 3, line, rng)
    q = random_point(line, rng)
    t = tangent_F_lambda(X, LinearSubspace(ctx, [q]), line)
    prof = linear_part_profile(X, line, q)
    assert t.span_rank == linalg.rank(ctx, prof.linear_parts[:-1])
    if t.greedy_success:
        assert sorted(t.witness, key=len) == [(0,) * j for j in range(1, len(t.witness) + 1)]


def test_planted_hypersurface_contains_plane():
    ctx = make_field(2, 2)
    rng = make_rng(31)
    plane = LinearSubspace(ctx, random_rows(ctx, 2, 5, rng))
    assert contains(planted_hypersurface(ctx, 5, 3, plane, rng), plane)
