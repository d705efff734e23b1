import itertools

import pytest
from hypothesis import given, settings, strategies as st

from hermcurve.gf import (
    CapExceeded,
    FieldElem,
    FieldError,
    conjugate,
    construct_field,
    embed,
    embedding_table,
    is_irreducible,
    norm_to_subfield,
    prime_power,
    restrict,
    solve_norm,
    trace_to_subfield,
    univariate_roots,
)

FIELDS = [(2, 1), (2, 2), (2, 4), (3, 2), (3, 4), (5, 2), (7, 2)]


def _first_irreducible_by_roots(p, k):
    # independent oracle for k <= 3: irreducible iff no root in GF(p)
    for tail in itertools.product(range(p), repeat=k):
        coeffs = list(reversed(tail))  # lexicographic on (c_{k-1}, ..., c_0)
        poly = coeffs + [1]
        if all(sum(c * x**i for i, c in enumerate(poly)) % p for x in range(p)):
            return poly
    raise AssertionError


@pytest.mark.parametrize("p,k", [(2, 2), (3, 2), (5, 2), (7, 2), (2, 3), (3, 3)])
def test_modulus_is_lexicographically_first(p, k):
    ctx = construct_field(p, k)
    assert list(ctx.modulus) == _first_irreducible_by_roots(p, k)


def test_known_moduli():
    assert construct_field(2, 2).modulus == (1, 1, 1)
    assert construct_field(3, 2).modulus == (1, 0, 1)
    assert construct_field(2, 1).order == 2


def test_construction_errors():
    with pytest.raises(FieldError):
        construct_field(4, 2)
    with pytest.raises(FieldError):
        construct_field(3, 0)
    with pytest.raises(CapExceeded):
        construct_field(2, 40)


def test_reducible_modulus_rejected():
    assert not is_irreducible([1, 0, 1], 2)  # t^2 + 1 = (t + 1)^2
    assert is_irreducible([1, 1, 1], 2)


@pytest.mark.parametrize("p,k", FIELDS)
def test_every_element_satisfies_frobenius_order(p, k):
    ctx = construct_field(p, k)
    assert all(ctx.power(v, ctx.order) == v for v in range(ctx.order))


def _elems(p, k):
    ctx = construct_field(p, k)
    return st.integers(0, ctx.order - 1).map(lambda v: FieldElem(ctx, v))


@pytest.mark.parametrize("p,k", [(2, 4), (3, 2), (5, 2)])
def test_field_axioms(p, k):
    @settings(max_examples=150, deadline=None)
    @given(_elems(p, k), _elems(p, k), _elems(p, k))
    def run(a, b, c):
        assert a * (b + c) == a * b + a * c
        assert (a + b) - b == a
        assert (a * b) * c == a * (b * c)
        if b:
            assert (a / b) * b == a
        assert (a + b) ** p == a**p + b**p

    run()


def test_digit_level_addition_matches_polynomials():
    ctx = construct_field(3, 2)
    for a in range(9):
        for b in range(9):
            s = (FieldElem(ctx, a) + FieldElem(ctx, b)).coeffs()
            da, db = FieldElem(ctx, a).coeffs(), FieldElem(ctx, b).coeffs()
            assert s == [(x + y) % 3 for x, y in zip(da, db)]


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_conjugate_is_involutive_and_fixes_exactly_gfq(q):
    p, e = prime_power(q)
    ctx = construct_field(p, 2 * e)
    fixed = [v for v in range(ctx.order) if conjugate(FieldElem(ctx, v)).v == v]
    assert len(fixed) == q
    for v in range(ctx.order):
        x = FieldElem(ctx, v)
        assert conjugate(conjugate(x)) == x


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_norm_is_multiplicative_and_onto_gfq(q):
    p, e = prime_power(q)
    ctx = construct_field(p, 2 * e)
    xs = [FieldElem(ctx, v) for v in range(ctx.order)]
    norms = {norm_to_subfield(x).v for x in xs}
    assert len(norms) == q
    assert all(conjugate(FieldElem(ctx, n)).v == n for n in norms)
    for x, y in itertools.islice(itertools.product(xs, xs), 0, None, 7):
        assert norm_to_subfield(x * y) == norm_to_subfield(x) * norm_to_subfield(y)
    assert all(conjugate(trace_to_subfield(x)) == trace_to_subfield(x) for x in xs)


def test_conjugate_on_gf4_and_gf9():
    g4 = construct_field(2, 2)
    w = g4.gen()
    assert conjugate(w) == w * w
    g9 = construct_field(3, 2)
    g = g9.primitive()
    assert conjugate(g) == g**3


def test_conjugate_needs_even_degree():
    with pytest.raises(FieldError):
        conjugate(construct_field(2, 3).gen())


def test_solve_norm():
    ctx = construct_field(5, 2)
    a = FieldElem(ctx, ctx.from_int(-3))
    x = solve_norm(a, 5)
    assert x ** 6 == a


@pytest.mark.parametrize("small,big", [((2, 2), (2, 4)), ((3, 2), (3, 4)), ((2, 2), (2, 6)), ((2, 3), (2, 6))])
def test_embedding_is_an_injective_homomorphism(small, big):
    s, b = construct_field(*small), construct_field(*big)
    table = embedding_table(s, b)
    assert len(set(table)) == s.order
    for x in range(s.order):
        for y in range(s.order):
            assert table[s.add(x, y)] == b.add(table[x], table[y])
            assert table[s.mul(x, y)] == b.mul(table[x], table[y])
    for x in range(s.order):
        assert restrict(embed(FieldElem(s, x), b), s).v == x


def test_restrict_rejects_non_members():
    small, big = construct_field(2, 2), construct_field(2, 4)
    outside = next(v for v in range(big.order) if v not in embedding_table(small, big))
    with pytest.raises(FieldError):
        restrict(FieldElem(big, outside), small)


def test_roots_of_x_q_minus_x_are_the_subfield():
    ctx = construct_field(3, 2)
    roots = univariate_roots([0, -1, 0, 1], ctx)
    assert {r.v for r in roots} == {v for v in range(9) if ctx.power(v, 3) == v}
