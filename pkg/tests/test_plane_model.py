import pytest
from hypothesis import given, settings, strategies as st

from hermcurve.gf import CapExceeded, FieldElem, FieldError, construct_field
from hermcurve.plane_model import (
    PlaneCurve,
    SingularPoint,
    affine_points,
    branch_expansion,
    branch_residual,
    frobenius_point,
    is_rational,
    is_smooth_at,
    nonrational_sample,
)
from hermcurve.poly import poly_ring


def hermitian_curve(q):
    p = {2: 2, 3: 3, 4: 2, 5: 5}[q]
    k = {2: 2, 3: 2, 4: 4, 5: 2}[q]
    K = construct_field(p, k)
    x, y = poly_ring(K, 2)
    return PlaneCurve(y**q + y - x ** (q + 1), q)


def brute_count(c, m=1):
    K = c.ext_field(m)
    F = c.F.map_coeffs(K) if m > 1 else c.F
    return sum(F(FieldElem(K, a), FieldElem(K, b)).is_zero() for a in range(K.order) for b in range(K.order))


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_hermitian_curve_has_q_cubed_affine_points(q):
    c = hermitian_curve(q)
    pts = affine_points(c)
    assert len(pts) == q**3
    assert len(pts) == brute_count(c)
    assert all(c.contains(P) and is_rational(P, q) for P in pts)


def test_points_over_gf16_match_brute_force():
    c = hermitian_curve(2)
    assert len(affine_points(c, 2)) == brute_count(c, 2)


def test_curve_must_live_over_gf_q2():
    K = construct_field(3, 1)
    x, y = poly_ring(K, 2)
    with pytest.raises(FieldError):
        PlaneCurve(y - x, 3)


def test_cap_is_enforced(monkeypatch):
    monkeypatch.setenv("HERMCURVE_CAP", "10")
    with pytest.raises(CapExceeded):
        affine_points(hermitian_curve(3))


def test_minimal_over_gf_q4():
    # maximal over GF(q^2) forces every GF(q^4) point to be rational already
    assert nonrational_sample(hermitian_curve(3), 5, m=2) == []


def test_frobenius_and_rationality():
    c = hermitian_curve(3)
    pts = nonrational_sample(c, 15, seed=4, m=3)
    assert len(pts) == 15
    for P in pts:
        assert c.contains(P) and not is_rational(P, 3)
        F = frobenius_point(P, 3)
        assert F != P and c.contains(F)
        assert frobenius_point(frobenius_point(F, 3), 3) == P  # order 3 over GF(3^6)


def test_nonrational_sample_is_seeded():
    c = hermitian_curve(3)
    assert nonrational_sample(c, 8, seed=1, m=3) == nonrational_sample(c, 8, seed=1, m=3)


def test_singular_point_rejected():
    K = construct_field(5, 2)
    x, y = poly_ring(K, 2)
    node = PlaneCurve(y**2 - x**2 - x**3, 5)
    O = affine_points(node)[0]
    assert (O.x.v, O.y.v) == (0, 0)
    assert not is_smooth_at(node, O)
    with pytest.raises(SingularPoint):
        branch_expansion(node, O, 6)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 26), st.integers(2, 12))
def test_branch_satisfies_curve_to_precision(idx, T):
    c = hermitian_curve(3)
    P = affine_points(c)[idx]
    b = branch_expansion(c, P, T)
    assert b.prec == T
    assert branch_residual(c, b).valuation() is None
    assert b.x_series.coeffs[0] == P.x.v and b.y_series.coeffs[0] == P.y.v


def test_branch_at_extension_point():
    c = hermitian_curve(2)
    P = nonrational_sample(c, 1, seed=0, m=3)[0]
    b = branch_expansion(c, P, 9)
    assert b.x_series.ctx is P.ctx
    assert branch_residual(c, b).valuation() is None
