import numpy as np
import pytest

from freeline_lab.census import run_census
from freeline_lab.errors import CharacteristicDividesDegree, DimensionTooSmall, NoRootOfMinusOne
from freeline_lab.fermatlab import (FermatSpec, audit_free_curve, audit_no_free_lines, fermat,
                                    standard_free_curve)
from freeline_lab.galois import make_field
from freeline_lab.linegeom import contains
from freeline_lab.polyalg import LinearSubspace, compose_with_curve

FREE_CURVE_MATRIX = [(3, 7, 2), (3, 7, 5), (4, 9, 3), (5, 11, 2)]


def test_fermat_smoothness_flags():
    assert FermatSpec(4, 3, make_field(2, 2)).smooth
    assert not FermatSpec(3, 4, make_field(2)).smooth
    X = fermat(7, 3, make_field(2))
    assert (X.n, X.d) == (7, 3) and len(X.f.terms) == 8


def test_standard_curve_char2():
    C = standard_free_curve(3, 7, make_field(2))
    # (t^3 : t^3 : t^2 s : t^2 s : t s^2 : t s^2 : s^3 : s^3), index i is s^(3-i) t^i
    assert [int(np.nonzero(c.coeffs)[0][0]) for c in C.components] == [3, 3, 2, 2, 1, 1, 0, 0]
    assert compose_with_curve(fermat(7, 3, C.ctx).f, C.components).is_zero()


def test_standard_curve_f5_uses_mu_4():
    C = standard_free_curve(3, 7, make_field(5))
    assert C.ctx.q == 5 and C.components[0].coeffs[3] == 4
    assert compose_with_curve(fermat(7, 3, C.ctx).f, C.components).is_zero()


def test_standard_curve_extends_to_f9():
    C = standard_free_curve(4, 9, make_field(3))
    assert C.ctx.q == 9
    with pytest.raises(NoRootOfMinusOne):
        standard_free_curve(4, 9, make_field(3), auto_extend=False)


def test_standard_curve_zero_padding():
    C = standard_free_curve(3, 10, make_field(2))
    assert len(C.components) == 11 and all(c.is_zero() for c in C.components[8:])


def test_standard_curve_preconditions():
    with pytest.raises(DimensionTooSmall):
        audit_free_curve(3, 5, make_field(2))
    with pytest.raises(CharacteristicDividesDegree):
        standard_free_curve(3, 7, make_field(3))


@pytest.mark.parametrize("d,k,p", FREE_CURVE_MATRIX)
def test_free_curve_audit(d, k, p):
    audit = audit_free_curve(d, k, make_field(p))
    assert audit.contained
    assert audit.splitting.min >= 0 and audit.free
    assert audit.to_json()["verdict"] == "free"
    # M|_C has rank k and degree (k+1)d - d^2
    assert len(audit.splitting) == k and audit.splitting.degree == (k + 1) * d - d * d


def test_no_free_lines_on_fermat_cubic_surface():
    audit = audit_no_free_lines(2, 3)
    assert audit.contained == 27 and audit.free == 0
    assert audit.splittings == {(-1,): 27}


def test_no_free_lines_on_fermat_cubic_threefold():
    audit = audit_no_free_lines(2, 4)
    assert audit.candidates == 5797
    assert audit.contained > 0 and audit.free == 0 and audit.passed
    assert set(audit.splittings) == {(-1, 1)}
    assert min(audit.h0_values) >= 2


def test_no_free_lines_on_fermat_quartic_threefold():
    audit = audit_no_free_lines(3, 4)
    assert audit.candidates > 600_000
    assert audit.contained > 0 and audit.free == 0 and audit.passed
    assert "scope" in audit.to_json()


def test_line_set_is_permutation_invariant():
    ctx = make_field(2, 2)
    X = fermat(4, 3, ctx)
    lines = set(run_census(X, 1, collect=True).planes)
    rng = np.random.default_rng(0)
    for _ in range(3):
        perm = rng.permutation(5)
        moved = {LinearSubspace(ctx, l.rows[:, perm]) for l in lines}
        assert moved == lines
        assert all(contains(X, l) for l in list(moved)[:50])
