"""Affine plane models F(x, y) = 0 over GF(q^2): points, smoothness, branches."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .gf import (
    CapExceeded,
    FieldCtx,
    FieldElem,
    FieldError,
    _roots_int,
    construct_field,
    embedding_table,
    enumeration_cap,
)
from .poly import MultiPoly, TruncatedSeries, eval_poly_series

PAIR_CAP = 1 << 24


class SingularPoint(ValueError):
    pass


@dataclass(frozen=True)
class CurvePoint:
    x: FieldElem
    y: FieldElem
    ext_degree: int

    @property
    def ctx(self) -> FieldCtx:
        return self.x.ctx

    def key(self) -> tuple[int, int, int]:
        return (self.ext_degree, self.x.v, self.y.v)

    def __repr__(self) -> str:
        return f"({self.x!r}, {self.y!r})/m={self.ext_degree}"


@dataclass
class PlaneCurve:
    """F(x, y) = 0 with coefficients in ``ctx`` = GF(q^2)."""

    F: MultiPoly
    q: int
    ctx: FieldCtx = field(init=False)

    def __post_init__(self):
        self.ctx = self.F.ctx
        if self.F.nvars != 2:
            raise ValueError("plane curves need a bivariate polynomial")
        if self.F.is_zero():
            raise ValueError("F must be nonzero")
        if self.ctx.order != self.q * self.q:
            raise FieldError("curve must be defined over GF(q^2)")
        self._Fx = self.F.partial(0)
        self._Fy = self.F.partial(1)
        self._by_ext: dict[int, tuple[FieldCtx, list[tuple[int, list[tuple[int, int]]]]]] = {}

    def ext_field(self, m: int) -> FieldCtx:
        return construct_field(self.ctx.p, self.ctx.k * m)

    def contains(self, P: CurvePoint) -> bool:
        return self.F(P.x, P.y).is_zero()

    # y-coefficient layout of F over GF(q^(2m)), cached per extension
    def _layout(self, m: int):
        if m not in self._by_ext:
            K = self.ext_field(m)
            table = embedding_table(self.ctx, K)
            dy = self.F.degree(1)
            groups: list[list[tuple[int, int]]] = [[] for _ in range(dy + 1)]
            for (a, b), c in self.F.terms.items():
                groups[b].append((a, table[c]))
            self._by_ext[m] = (K, groups)
        return self._by_ext[m]

    def fiber(self, x0: FieldElem, m: int) -> list[FieldElem]:
        """All y0 in GF(q^(2m)) with F(x0, y0) = 0, ascending."""
        K, groups = self._layout(m)
        if x0.ctx is not K:
            raise FieldError("x0 must lie in the extension field of degree m")
        add, mul, pw = K.add, K.mul, K.power
        cs = []
        for g in groups:
            acc = 0
            for a, c in g:
                acc = add(acc, mul(c, pw(x0.v, a)))
            cs.append(acc)
        while cs and cs[-1] == 0:
            cs.pop()
        if not cs:
            return [FieldElem(K, v) for v in range(K.order)]
        return [FieldElem(K, v) for v in _roots_int(cs, K)]


def affine_points(c: PlaneCurve, m: int = 1) -> list[CurvePoint]:
    """Every affine point over GF(q^(2m)), ordered by (x, y) encodings."""
    K = c.ext_field(m)
    if K.order * K.order > enumeration_cap(PAIR_CAP):
        raise CapExceeded(f"affine enumeration over {K} exceeds cap")
    out = []
    for xv in range(K.order):
        x0 = FieldElem(K, xv)
        for y0 in c.fiber(x0, m):
            out.append(CurvePoint(x0, y0, m))
    return out


def is_rational(P: CurvePoint, q: int) -> bool:
    """Whether both coordinates are fixed by the q^2-power map."""
    r = q * q
    return P.x ** r == P.x and P.y ** r == P.y


def frobenius_point(P: CurvePoint, q: int) -> CurvePoint:
    r = q * q
    return CurvePoint(P.x ** r, P.y ** r, P.ext_degree)


def is_smooth_at(c: PlaneCurve, P: CurvePoint) -> bool:
    if not c.contains(P):
        raise ValueError(f"{P} is not on the curve")
    return bool(c._Fx(P.x, P.y)) or bool(c._Fy(P.x, P.y))


@dataclass
class Branch:
    center: CurvePoint
    local_param: str  # "x" or "y": t = x - x0 or t = y - y0
    x_series: TruncatedSeries
    y_series: TruncatedSeries

    @property
    def prec(self) -> int:
        return min(self.x_series.prec, self.y_series.prec)


def branch_expansion(c: PlaneCurve, P: CurvePoint, T: int) -> Branch:
    """Power-series parametrization of the curve at a smooth point.

    Newton iteration on series; each pass doubles the number of correct
    coefficients, and ceil(log2 T) + 1 passes are run.
    """
    if T < 2:
        raise ValueError("truncation must be at least 2")
    if not is_smooth_at(c, P):
        raise SingularPoint(f"{P} is singular")
    K = P.ctx
    use_x = bool(c._Fy(P.x, P.y))
    if use_x:
        known = TruncatedSeries.param(K, T, P.x)
        unknown0, deriv = P.y, c._Fy
    else:
        known = TruncatedSeries.param(K, T, P.y)
        unknown0, deriv = P.x, c._Fx
    s = TruncatedSeries.const(K, unknown0, T)

    def args(sol):
        return (known, sol) if use_x else (sol, known)

    for _ in range(math.ceil(math.log2(T)) + 1):
        val = eval_poly_series(c.F, args(s))
        if val.valuation() is None:
            break
        d = eval_poly_series(deriv, args(s))
        s = s - val * d.inverse()
    xs, ys = args(s)
    return Branch(P, "x" if use_x else "y", xs, ys)


def branch_residual(c: PlaneCurve, b: Branch) -> TruncatedSeries:
    return eval_poly_series(c.F, (b.x_series, b.y_series))


def nonrational_sample(c: PlaneCurve, n: int, seed: int = 0, m: int = 2) -> list[CurvePoint]:
    """Up to n smooth points over GF(q^(2m)) that are not GF(q^2)-rational.

    x0 runs over a seeded shuffle of the extension field; each fiber
    contributes its smooth non-rational roots in scan order.  Additive
    families put several points over one x0, so taking only the first root
    would cap the sample well below the number of available points.
    """
    K = c.ext_field(m)
    order = list(range(K.order))
    random.Random(seed).shuffle(order)
    out = []
    for xv in order:
        x0 = FieldElem(K, xv)
        for y0 in c.fiber(x0, m):
            P = CurvePoint(x0, y0, m)
            if not is_rational(P, c.q) and is_smooth_at(c, P):
                out.append(P)
                if len(out) >= n:
                    return out
    return out
