"""Hasse-Wronskians of coordinate series at a branch.

All checks work in canonical coordinates g = A^-1 f, where A brings the
Hermitian form to the identity, so that sum g_i^(q+1) = 0 on the curve.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from . import linalg
from .embed import AtLeast, ParametrizedCurve, coordinate_series
from .gf import FieldCtx, FieldElem, embedding_table
from .hermitian import HermitianForm, diagonalize_congruence
from .plane_model import Branch
from .poly import TruncatedSeries, hasse_derivative, series_compose_qth_power


@dataclass
class WronskianFrame:
    series: list[TruncatedSeries]
    orders: tuple[int, ...]

    def __post_init__(self):
        o = self.orders
        if len(o) != len(self.series):
            raise ValueError("need one Hasse order per series")
        if not o or o[0] != 0 or any(a >= b for a, b in zip(o, o[1:])):
            raise ValueError(f"orders must start at 0 and increase strictly, got {o}")

    @classmethod
    def full(cls, series: Sequence[TruncatedSeries], q: int) -> "WronskianFrame":
        M = len(series) - 1
        return cls(list(series), tuple(range(M)) + (q,))

    @classmethod
    def reduced(cls, series: Sequence[TruncatedSeries]) -> "WronskianFrame":
        M = len(series) - 1
        return cls(list(series[:M]), tuple(range(M)))


def _perm_sign(p: Sequence[int]) -> int:
    sign, seen = 1, [False] * len(p)
    for i in range(len(p)):
        if not seen[i]:
            j, n = i, 0
            while not seen[j]:
                seen[j] = True
                j = p[j]
                n += 1
            if n % 2 == 0:
                sign = -sign
    return sign


def series_det(rows: Sequence[Sequence[TruncatedSeries]]) -> TruncatedSeries:
    """Leibniz expansion; fine for the <= 5x5 frames used here."""
    n = len(rows)
    ctx = rows[0][0].ctx
    prec = min(s.prec for r in rows for s in r)
    acc = TruncatedSeries._raw(ctx, [0] * prec, prec)
    for p in itertools.permutations(range(n)):
        term = rows[0][p[0]]
        for i in range(1, n):
            term = term * rows[i][p[i]]
        acc = acc + term if _perm_sign(p) > 0 else acc - term
    return acc.truncate(prec)


def wronskian(w: WronskianFrame) -> TruncatedSeries:
    rows = [[hasse_derivative(s, k) for s in w.series] for k in w.orders]
    return series_det(rows)


def _val(s: TruncatedSeries) -> int | AtLeast:
    v = s.valuation()
    return AtLeast(s.prec) if v is None else v


def wronskian_valuation(w: WronskianFrame) -> int | AtLeast:
    return _val(wronskian(w))


def canonical_series(series: Sequence[TruncatedSeries], A_inv: linalg.Matrix, ctx: FieldCtx) -> list[TruncatedSeries]:
    """Apply the GF(q^2) matrix A_inv to a vector of series."""
    K = series[0].ctx
    table = embedding_table(ctx, K)
    out = []
    for row in A_inv:
        acc = None
        for a, s in zip(row, series):
            if a:
                term = s * FieldElem(K, table[a])
                acc = term if acc is None else acc + term
        out.append(acc if acc is not None else s * 0)
    return out


def canonical_frame(pc: ParametrizedCurve, b: Branch, form: HermitianForm | None = None) -> list[TruncatedSeries]:
    series = coordinate_series(pc, b)
    if form is None:
        return series
    cg = diagonalize_congruence(form)
    if cg.rank != form.M + 1:
        raise ValueError("form is degenerate")
    return canonical_series(series, linalg.inverse(form.ctx, cg.A), form.ctx)


def frobenius_sum(series: Sequence[TruncatedSeries], q: int) -> TruncatedSeries:
    """sum g_i D^q(g_i^q)."""
    acc = None
    for g in series:
        term = g * hasse_derivative(series_compose_qth_power(g, q), q)
        acc = term if acc is None else acc + term
    return acc


@dataclass
class Lemma42:
    lhs: int | AtLeast
    wr_reduced: int | AtLeast
    v_fM: int | AtLeast
    v_sum: int | AtLeast
    rhs: int | AtLeast | None
    status: str  # pass | fail | inconclusive


def lemma42_check(pc: ParametrizedCurve, b: Branch, form: HermitianForm | None = None,
                  series: Sequence[TruncatedSeries] | None = None) -> Lemma42:
    """Compare v(Wr full) with v(Wr reduced) - q v(g_M) + v(sum g_i D^q g_i^q).

    The column reduction behind the identity needs the reduced orders
    0..M-1 to stay below q; frames violating that are inconclusive.
    """
    q = pc.q
    g = list(series) if series is not None else canonical_frame(pc, b, form)
    M = len(g) - 1
    if M - 1 >= q:
        unknown = AtLeast(0)
        return Lemma42(unknown, unknown, unknown, unknown, None, "inconclusive")
    lhs = wronskian_valuation(WronskianFrame.full(g, q))
    red = wronskian_valuation(WronskianFrame.reduced(g))
    vM = _val(g[M])
    vs = _val(frobenius_sum(g, q))
    if any(isinstance(v, AtLeast) for v in (lhs, red, vM, vs)):
        return Lemma42(lhs, red, vM, vs, None, "inconclusive")
    rhs = red - q * vM + vs
    return Lemma42(lhs, red, vM, vs, rhs, "pass" if lhs == rhs else "fail")


def lemma45_valuation(pc: ParametrizedCurve, b: Branch, form: HermitianForm | None = None,
                      series: Sequence[TruncatedSeries] | None = None) -> int | AtLeast:
    """v_P(sum g_i D^q g_i^q): 1 at rational centers, 0 otherwise.

    Values >= 2 are returned as they are so the caller can flag them.
    """
    g = list(series) if series is not None else canonical_frame(pc, b, form)
    return _val(frobenius_sum(g, pc.q))


@dataclass
class FirstOrder:
    s_q1: int  # sum a_i0^q a_i1
    s_1q: int  # sum a_i0 a_i1^q
    n1: int  # sum a_i1^(q+1)


def first_order_sums(series: Sequence[TruncatedSeries], q: int) -> FirstOrder:
    ctx = series[0].ctx
    add, mul, pw = ctx.add, ctx.mul, ctx.power
    s1 = s2 = n = 0
    for s in series:
        a0, a1 = s.coeffs[0], s.coeffs[1]
        s1 = add(s1, mul(pw(a0, q), a1))
        s2 = add(s2, mul(a0, pw(a1, q)))
        n = add(n, pw(a1, q + 1))
    return FirstOrder(s1, s2, n)
