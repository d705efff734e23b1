"""The map P -> (f_0(P) : ... : f_M(P)) of a plane curve into P^M.

Valuations of hyperplane sections along branches, osculating hyperplanes,
recovery of the Hermitian form from point samples and exact containment.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import linalg
from .gf import FieldCtx, FieldElem, FieldError, embedding_table, restrict
from .hermitian import (
    HermitianForm,
    Hyperplane,
    NotOnVariety,
    ProjPoint,
    _common,
    on_variety,
    tangent_hyperplane,
)
from .plane_model import (
    Branch,
    CurvePoint,
    PlaneCurve,
    branch_expansion,
    frobenius_point,
    is_rational,
    is_smooth_at,
)
from .poly import MultiPoly, TruncatedSeries, eval_poly_series, reduce_mod_curve

__all__ = [
    "AtLeast",
    "ChartFailure",
    "DualFormError",
    "DualSolution",
    "Hyperplane",
    "ParametrizedCurve",
    "containment_check_symbolic",
    "containment_residue",
    "coordinate_series",
    "dual_form_from_curve",
    "evaluate_map",
    "hyperplane_valuation",
    "osculating_hyperplane",
    "solve_dual_form",
    "tangent_direction",
    "tangent_divisor_check",
]


class ChartFailure(ValueError):
    """Every coordinate function vanishes at the point."""


class DualFormError(ValueError):
    def __init__(self, msg: str, dimension: int):
        super().__init__(msg)
        self.dimension = dimension


@dataclass(frozen=True)
class AtLeast:
    """Valuation not resolved at the available truncation: v >= bound."""

    bound: int

    def __str__(self) -> str:
        return f">={self.bound}"


@dataclass
class ParametrizedCurve:
    plane: PlaneCurve
    coords: list[MultiPoly]
    ctx: FieldCtx = field(init=False)  # field of the coordinate coefficients

    def __post_init__(self):
        if len(self.coords) < 2:
            raise ValueError("need at least two coordinate functions")
        ctxs = {id(f.ctx): f.ctx for f in self.coords}
        if len(ctxs) != 1:
            raise FieldError("coordinate functions over different fields")
        self.ctx = self.coords[0].ctx
        if self.ctx.k % self.plane.ctx.k:
            raise FieldError("coordinate field must contain the curve's field")
        if all(f.is_zero() for f in self.coords):
            raise ValueError("all coordinate functions are zero")

    @property
    def M(self) -> int:
        return len(self.coords) - 1

    @property
    def q(self) -> int:
        return self.plane.q


def _lift_point(P: CurvePoint, K: FieldCtx) -> tuple[FieldElem, FieldElem]:
    if P.ctx is K:
        return P.x, P.y
    t = embedding_table(P.ctx, K)
    return FieldElem(K, t[P.x.v]), FieldElem(K, t[P.y.v])


def evaluate_map(pc: ParametrizedCurve, P: CurvePoint) -> ProjPoint:
    K = _common(pc.ctx, P.ctx)
    x, y = _lift_point(P, K)
    vals = [f(x, y).v for f in pc.coords]
    if not any(vals):
        raise ChartFailure(f"all coordinates vanish at {P}")
    return ProjPoint.make(K, vals)


def coordinate_series(pc: ParametrizedCurve, b: Branch) -> list[TruncatedSeries]:
    """f_i(x(t), y(t)) with the common power of t divided out."""
    K = _common(pc.ctx, b.x_series.ctx)
    xs, ys = b.x_series, b.y_series
    if K is not xs.ctx:
        xs, ys = xs.map_coeffs(K), ys.map_coeffs(K)
    raw = [eval_poly_series(f, (xs, ys)) for f in pc.coords]
    vals = [s.valuation() for s in raw]
    known = [v for v in vals if v is not None]
    if not known:
        raise ChartFailure("no coordinate series resolved at this truncation")
    e = min(known)
    return [s.shift_down(e) for s in raw]


def _combine(series: Sequence[TruncatedSeries], coeffs: Sequence[int]) -> TruncatedSeries:
    ctx = series[0].ctx
    n = min(s.prec for s in series)
    acc = [0] * n
    add, mul = ctx.add, ctx.mul
    for s, a in zip(series, coeffs):
        if a:
            for k in range(n):
                if s.coeffs[k]:
                    acc[k] = add(acc[k], mul(a, s.coeffs[k]))
    return TruncatedSeries._raw(ctx, acc, n)


def hyperplane_valuation(
    pc: ParametrizedCurve, b: Branch, H: Hyperplane, series: Sequence[TruncatedSeries] | None = None
) -> int | AtLeast:
    series = series if series is not None else coordinate_series(pc, b)
    K = _common(series[0].ctx, H.ctx)
    if K is not series[0].ctx:
        series = [s.map_coeffs(K) for s in series]
    s = _combine(series, H.embed(K).coeffs)
    v = s.valuation()
    return AtLeast(s.prec) if v is None else v


@dataclass
class TangentDivisor:
    point: CurvePoint
    image: ProjPoint
    hyperplane: Hyperplane
    v_at_P: int | AtLeast
    fr_on_H: bool
    rational: bool


def tangent_divisor_check(pc: ParametrizedCurve, form: HermitianForm, P: CurvePoint, T: int) -> TangentDivisor:
    """v_P of the section cut by the tangent hyperplane at pi(P), and whether
    pi(Fr(P)) lies on that hyperplane."""
    img = evaluate_map(pc, P)
    if not on_variety(form, img):
        raise NotOnVariety(f"image of {P} is not on the Hermitian variety")
    H = tangent_hyperplane(form, img)
    b = branch_expansion(pc.plane, P, T)
    v = hyperplane_valuation(pc, b, H)
    fr_img = evaluate_map(pc, frobenius_point(P, pc.q))
    return TangentDivisor(P, img, H, v, H.contains(fr_img), is_rational(P, pc.q))


def osculating_hyperplane(
    pc: ParametrizedCurve, b: Branch, series: Sequence[TruncatedSeries] | None = None
) -> Hyperplane:
    """The hyperplane meeting the branch with multiplicity >= max(q, M).

    Kernel of the coefficient matrix of t^0 .. t^(r-1), r = max(q, M), over
    the pole-cleared coordinate series; it must be one-dimensional.
    """
    series = series if series is not None else coordinate_series(pc, b)
    r = max(pc.q, pc.M)
    if min(s.prec for s in series) < r:
        raise ValueError(f"coordinate series need precision >= {r}")
    ctx = series[0].ctx
    rows = [[s.coeffs[k] for s in series] for k in range(r)]
    ker = linalg.nullspace(ctx, rows, len(series))
    if len(ker) != 1:
        raise DualFormError(f"osculating kernel has dimension {len(ker)}", len(ker))
    return Hyperplane.make(ctx, ker[0])


def tangent_direction(pc: ParametrizedCurve, b: Branch) -> list[int] | None:
    """First-order coefficient vector of the coordinate series, or None when
    it does not span a line together with the point (j_1 > 1)."""
    series = coordinate_series(pc, b)
    a0 = [s.coeffs[0] for s in series]
    a1 = [s.coeffs[1] for s in series]
    if linalg.rank(series[0].ctx, [a0, a1]) < 2:
        return None
    return a1


# -- dual form -------------------------------------------------------------

@dataclass
class DualSolution:
    """Solution of sum_ij u_ij f_i f_j^q = 0 with u over GF(q^2).

    ``form`` carries u (the evaluation orientation used throughout the
    package); ``C`` is its entrywise conjugate, c_ij = u_ij^(1/q).
    """

    form: HermitianForm
    C: linalg.Matrix
    rank: int
    dimension: int
    hermitian: bool
    points_used: int
    history: list[int] = field(default_factory=list)


def _dual_rows(pc: ParametrizedCurve, P: CurvePoint, L: FieldCtx) -> list[list[int]]:
    """Equation rows contributed by P over L, closed under the q^2-Frobenius."""
    img = evaluate_map(pc, P).embed(L).coords
    q = pc.q
    row = []
    for i in range(pc.M + 1):
        for j in range(pc.M + 1):
            row.append(L.mul(img[i], L.power(img[j], q)))
    rows = [row]
    # conjugates force a GF(q^2)-rational solution space
    m = P.ctx.k // pc.plane.ctx.k
    r = q * q
    for _ in range(1, m):
        rows.append([L.power(v, r) for v in rows[-1]])
    return rows


def _normalize_dual(ctx: FieldCtx, u: list[int], n: int) -> list[int]:
    diag = next((u[i * n + i] for i in range(n) if u[i * n + i]), None)
    lead = diag if diag is not None else next(v for v in u if v)
    s = ctx.inv(lead)
    return [ctx.mul(v, s) for v in u]


def solve_dual_form(pc: ParametrizedCurve, sample_points: Sequence[CurvePoint]) -> DualSolution:
    basis, L = _dual_space(pc, sample_points)
    return _finish_dual(pc, basis, L, len(sample_points), [len(basis)])


def _dual_space(pc: ParametrizedCurve, pts: Iterable[CurvePoint]) -> tuple[list[list[int]], FieldCtx]:
    pts = list(pts)
    L = pc.ctx
    for P in pts:
        L = _common(L, P.ctx)
    rows = []
    for P in pts:
        rows.extend(_dual_rows(pc, P, L))
    n = (pc.M + 1) ** 2
    red, _ = linalg.row_reduce(L, rows) if rows else ([], [])
    return linalg.nullspace(L, red, n) if red else linalg.identity(n), L


def _finish_dual(pc, basis, L, used, history) -> DualSolution:
    dim = len(basis)
    if dim != 1:
        raise DualFormError(f"dual solution space has dimension {dim}", dim)
    ctx = pc.plane.ctx
    n = pc.M + 1
    try:
        u = [restrict(FieldElem(L, v), ctx).v for v in basis[0]]
    except FieldError:  # pragma: no cover - Galois descent guarantees rationality
        raise DualFormError("dual solution is not GF(q^2)-rational", dim)
    u = _normalize_dual(ctx, u, n)
    U = [u[i * n:(i + 1) * n] for i in range(n)]
    form = HermitianForm(ctx, U, pc.q)
    C = linalg.frob(ctx, U, pc.q)
    return DualSolution(form, C, linalg.rank(ctx, U), dim, form.is_hermitian(), used, history)


def dual_form_from_curve(pc: ParametrizedCurve, stable_after: int = 3, max_points: int = 4000) -> DualSolution:
    """Sampling pipeline: every affine rational point, then points over
    GF(q^4) in scan order until the solution space has not shrunk for
    ``stable_after`` consecutive additions and at least 2(M+1)^2 points
    are in use."""
    from .plane_model import affine_points

    def usable(P):
        # the dual rows need pi(P) and the branch at P
        if not is_smooth_at(pc.plane, P):
            return False
        try:
            evaluate_map(pc, P)
        except ChartFailure:
            return False
        return True

    n = (pc.M + 1) ** 2
    pts = [P for P in affine_points(pc.plane, 1) if usable(P)]
    basis, L = _dual_space(pc, pts)
    history = [len(basis)]
    K4 = pc.plane.ext_field(2)
    L = _common(L, K4)
    stable = 0
    for xv in range(K4.order):
        if len(pts) >= 2 * n and stable >= stable_after:
            break
        if len(pts) >= max_points:
            break
        x0 = FieldElem(K4, xv)
        for y0 in pc.plane.fiber(x0, 2):
            P = CurvePoint(x0, y0, 2)
            if is_rational(P, pc.q) or not usable(P):
                continue
            pts.append(P)
            before = len(basis)
            basis, L = _dual_space(pc, pts)
            history.append(len(basis))
            stable = stable + 1 if len(basis) == before else 0
    return _finish_dual(pc, basis, L, len(pts), history)


# -- symbolic containment ---------------------------------------------------

def containment_residue(coords: Sequence[MultiPoly], matrix: Sequence[Sequence], q: int, F: MultiPoly) -> MultiPoly:
    """sum_ij m_ij f_i f_j^q reduced modulo F.

    ``matrix`` entries are encodings in the coordinate field (or FieldElems).
    """
    ctx = coords[0].ctx
    powers = [f ** q for f in coords]
    total = MultiPoly(ctx, coords[0].nvars)
    for i, row in enumerate(matrix):
        acc = MultiPoly(ctx, coords[0].nvars)
        for j, c in enumerate(row):
            v = c.v if isinstance(c, FieldElem) else int(c)
            if v:
                acc = acc + powers[j] * FieldElem(ctx, v)
        if acc:
            total = total + coords[i] * acc
    return reduce_mod_curve(total, F)


def containment_check_symbolic(pc: ParametrizedCurve, form: HermitianForm) -> bool:
    ctx = _common(pc.ctx, form.ctx)
    coords = [f.map_coeffs(ctx) if f.ctx is not ctx else f for f in pc.coords]
    return containment_residue(coords, form.matrix_over(ctx), pc.q, pc.plane.F).is_zero()
