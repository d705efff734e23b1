"""Hermitian forms sum h_ij X_i X_j^q over GF(q^2) and their varieties in P^M.

The form matrix ``H`` is stored in the orientation of the evaluation
``X^t H X^(q)``; it is Hermitian when ``h_ij = h_ji^q``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from . import linalg
from .gf import CapExceeded, FieldCtx, FieldElem, FieldError, embedding_table, enumeration_cap, construct_field

POINT_CAP = 1 << 22


class NotOnVariety(ValueError):
    pass


def _normalize(ctx: FieldCtx, coords: Sequence[int]) -> tuple[int, ...]:
    lead = next((c for c in coords if c), None)
    if lead is None:
        raise ValueError("the zero vector is not a projective point")
    s = ctx.inv(lead)
    return tuple(ctx.mul(c, s) for c in coords)


@dataclass(frozen=True)
class ProjPoint:
    """A point of P^M, first nonzero coordinate scaled to 1."""

    ctx: FieldCtx
    coords: tuple[int, ...]

    @classmethod
    def make(cls, ctx: FieldCtx, coords: Iterable) -> "ProjPoint":
        raw = [c.v if isinstance(c, FieldElem) else int(c) for c in coords]
        return cls(ctx, _normalize(ctx, raw))

    @property
    def elems(self) -> tuple[FieldElem, ...]:
        return tuple(FieldElem(self.ctx, c) for c in self.coords)

    @property
    def dim(self) -> int:
        return len(self.coords) - 1

    def embed(self, big: FieldCtx) -> "ProjPoint":
        t = embedding_table(self.ctx, big)
        return ProjPoint(big, tuple(t[c] for c in self.coords))

    def frobenius(self, r: int) -> "ProjPoint":
        return ProjPoint(self.ctx, tuple(self.ctx.power(c, r) for c in self.coords))

    def is_rational_over(self, order: int) -> bool:
        return self.frobenius(order) == self

    def __repr__(self) -> str:
        return "(" + ":".join(repr(e) for e in self.elems) + ")"


@dataclass(frozen=True)
class Hyperplane:
    """sum a_i X_i = 0, first nonzero coefficient scaled to 1."""

    ctx: FieldCtx
    coeffs: tuple[int, ...]

    @classmethod
    def make(cls, ctx: FieldCtx, coeffs: Iterable) -> "Hyperplane":
        raw = [c.v if isinstance(c, FieldElem) else int(c) for c in coeffs]
        return cls(ctx, _normalize(ctx, raw))

    def evaluate(self, P: ProjPoint) -> FieldElem:
        big = _common(self.ctx, P.ctx)
        a = self.embed(big).coeffs
        x = P.embed(big).coords
        acc = 0
        for ai, xi in zip(a, x):
            acc = big.add(acc, big.mul(ai, xi))
        return FieldElem(big, acc)

    def contains(self, P: ProjPoint) -> bool:
        return self.evaluate(P).is_zero()

    def embed(self, big: FieldCtx) -> "Hyperplane":
        t = embedding_table(self.ctx, big)
        return Hyperplane(big, tuple(t[c] for c in self.coeffs))

    @property
    def elems(self) -> tuple[FieldElem, ...]:
        return tuple(FieldElem(self.ctx, c) for c in self.coeffs)

    def __repr__(self) -> str:
        return "[" + ":".join(repr(e) for e in self.elems) + "]"


def _common(a: FieldCtx, b: FieldCtx) -> FieldCtx:
    if a.p != b.p:
        raise FieldError("different characteristics")
    if b.k % a.k == 0:
        return b
    if a.k % b.k == 0:
        return a
    from math import lcm

    return construct_field(a.p, lcm(a.k, b.k))


class HermitianForm:
    def __init__(self, ctx: FieldCtx, matrix: Sequence[Sequence], q: int):
        if ctx.order != q * q:
            raise FieldError("Hermitian forms live over GF(q^2)")
        self.ctx = ctx
        self.q = q
        self.H = [[c.v if isinstance(c, FieldElem) else int(c) % ctx.order for c in row] for row in matrix]
        n = len(self.H)
        if any(len(row) != n for row in self.H):
            raise ValueError("form matrix must be square")
        self.M = n - 1

    @classmethod
    def canonical(cls, ctx: FieldCtx, M: int, q: int) -> "HermitianForm":
        return cls(ctx, linalg.identity(M + 1), q)

    @classmethod
    def diagonal(cls, ctx: FieldCtx, diag: Sequence, q: int) -> "HermitianForm":
        n = len(diag)
        vals = [d.v if isinstance(d, FieldElem) else int(d) % ctx.p for d in diag]
        return cls(ctx, [[vals[i] if i == j else 0 for j in range(n)] for i in range(n)], q)

    def entry(self, i: int, j: int) -> FieldElem:
        return FieldElem(self.ctx, self.H[i][j])

    def is_hermitian(self) -> bool:
        pw = self.ctx.power
        n = self.M + 1
        return all(self.H[i][j] == pw(self.H[j][i], self.q) for i in range(n) for j in range(n))

    def matrix_over(self, big: FieldCtx) -> linalg.Matrix:
        return linalg.embed_matrix(embedding_table(self.ctx, big), self.H)

    def pairing(self, u: Sequence[int], v: Sequence[int]) -> int:
        """u^t H v^(q) for vectors over ctx."""
        ctx = self.ctx
        vq = [ctx.power(c, self.q) for c in v]
        return sum_int(ctx, (ctx.mul(a, b) for a, b in zip(u, linalg.matvec(ctx, self.H, vq))))

    def render(self) -> list[str]:
        """Rows of space-separated field elements in coefficient notation."""
        return [" ".join(repr(FieldElem(self.ctx, c)) for c in row) for row in self.H]

    def __eq__(self, other) -> bool:
        return isinstance(other, HermitianForm) and self.ctx is other.ctx and self.H == other.H

    def __repr__(self) -> str:
        return f"HermitianForm(q={self.q}, {self.render()})"


def sum_int(ctx: FieldCtx, vals: Iterable[int]) -> int:
    acc = 0
    for v in vals:
        acc = ctx.add(acc, v)
    return acc


def herm_eval(h: HermitianForm, P: ProjPoint) -> FieldElem:
    """sum h_ij X_i X_j^q at P, computed in P's field."""
    if P.dim != h.M:
        raise ValueError("dimension mismatch")
    K = _common(h.ctx, P.ctx)
    Hk = h.matrix_over(K)
    x = P.embed(K).coords
    xq = [K.power(c, h.q) for c in x]
    vals = linalg.matvec(K, Hk, xq)
    return FieldElem(K, sum_int(K, (K.mul(a, b) for a, b in zip(x, vals))))


def on_variety(h: HermitianForm, P: ProjPoint) -> bool:
    return herm_eval(h, P).is_zero()


def rank(h: HermitianForm) -> int:
    return linalg.rank(h.ctx, h.H)


def tangent_hyperplane(h: HermitianForm, P: ProjPoint) -> Hyperplane:
    """Polar hyperplane of P: coefficients H P^(q)."""
    if not on_variety(h, P):
        raise NotOnVariety(f"{P} is not on the Hermitian variety")
    K = _common(h.ctx, P.ctx)
    x = P.embed(K).coords
    xq = [K.power(c, h.q) for c in x]
    return Hyperplane.make(K, linalg.matvec(K, h.matrix_over(K), xq))


def solve_norm_int(ctx: FieldCtx, a: int, q: int) -> int:
    for v in range(ctx.order):
        if ctx.power(v, q + 1) == a:
            return v
    raise FieldError("element is not a norm")


@dataclass
class Congruence:
    A: linalg.Matrix
    D: linalg.Matrix
    rank: int


def congruence_transform(h: HermitianForm, A: linalg.Matrix) -> linalg.Matrix:
    """A^t H A^(q)."""
    ctx = h.ctx
    return linalg.matmul(ctx, linalg.matmul(ctx, linalg.transpose(A), h.H), linalg.frob(ctx, A, h.q))


def diagonalize_congruence(h: HermitianForm) -> Congruence:
    """Find invertible A with A^t H A^(q) = diag(1, .., 1, 0, .., 0).

    Gram-Schmidt for the sesquilinear pairing; when every remaining vector
    is isotropic, a non-orthogonal pair w1, w2 is replaced by w1 + l*w2 with
    l chosen so the new vector is anisotropic.
    """
    if not h.is_hermitian():
        raise FieldError("form is not Hermitian")
    ctx, q = h.ctx, h.q
    n = h.M + 1
    add, mul, neg = ctx.add, ctx.mul, ctx.neg
    rest = [linalg.identity(n)[i] for i in range(n)]
    chosen: list[list[int]] = []

    def combo(u, lam, v):
        return [add(a, mul(lam, b)) for a, b in zip(u, v)]

    while rest:
        idx = next((i for i, w in enumerate(rest) if h.pairing(w, w)), None)
        if idx is None:
            pair = next(
                ((i, j) for i in range(len(rest)) for j in range(i + 1, len(rest)) if h.pairing(rest[i], rest[j])),
                None,
            )
            if pair is None:
                break  # what is left spans the radical
            i, j = pair
            for lam in range(1, ctx.order):
                cand = combo(rest[i], lam, rest[j])
                if h.pairing(cand, cand):
                    rest[i] = cand
                    break
            idx = i
        v = rest.pop(idx)
        d = h.pairing(v, v)
        s = solve_norm_int(ctx, ctx.inv(d), q)
        v = [mul(s, c) for c in v]
        rest = [combo(w, neg(h.pairing(w, v)), v) for w in rest]
        chosen.append(v)
    r = len(chosen)
    chosen.extend(rest)
    A = linalg.transpose(chosen)
    D = congruence_transform(h, A)
    expected = [[1 if (i == j and i < r) else 0 for j in range(n)] for i in range(n)]
    if D != expected:  # pragma: no cover - guarded by exact recomputation
        raise ArithmeticError("congruence verification failed")
    return Congruence(A, D, r)


def projective_points(ctx: FieldCtx, M: int) -> Iterator[tuple[int, ...]]:
    """All normalized points of P^M(ctx), lexicographic on coordinates."""
    for lead in range(M + 1):
        for tail in itertools.product(range(ctx.order), repeat=M - lead):
            yield (0,) * lead + (1,) + tail


def count_projective(order: int, M: int) -> int:
    return sum(order**i for i in range(M + 1))


def enumerate_variety_points(h: HermitianForm, m: int = 1) -> list[ProjPoint]:
    K = construct_field(h.ctx.p, h.ctx.k * m)
    if count_projective(K.order, h.M) > enumeration_cap(POINT_CAP):
        raise CapExceeded("projective enumeration exceeds cap")
    Hk = h.matrix_over(K)
    add, mul, pw = K.add, K.mul, K.power
    n = h.M + 1
    out = []
    for x in projective_points(K, h.M):
        xq = [pw(c, h.q) for c in x]
        acc = 0
        for i in range(n):
            if x[i]:
                row = Hk[i]
                s = 0
                for j in range(n):
                    if row[j] and xq[j]:
                        s = add(s, mul(row[j], xq[j]))
                acc = add(acc, mul(x[i], s))
        if acc == 0:
            out.append(ProjPoint(K, x))
    return out


def line_points(ctx: FieldCtx, a: Sequence[int], b: Sequence[int]) -> list[tuple[int, ...]]:
    """The ctx-rational points of the line through a and b."""
    out = [_normalize(ctx, b)]
    for lam in range(ctx.order):
        v = [ctx.add(ctx.mul(lam, x), y) for x, y in zip(a, b)]
        if any(v):
            out.append(_normalize(ctx, v))
    return out


def collinear(ctx: FieldCtx, *vecs: Sequence[int]) -> bool:
    return linalg.rank(ctx, [list(v) for v in vecs]) <= 2


@dataclass
class CenterSearch:
    center: ProjPoint
    candidates_scanned: int
    chord_points: int
    tangent_points: int


def find_projection_center(
    h: HermitianForm,
    rational_curve_points: Sequence[ProjPoint],
    tangent_lines: Sequence[tuple[ProjPoint, Sequence[int]]] = (),
) -> CenterSearch:
    """First point of P^M(GF(q^2)) off the variety, off every chord of two
    rational curve points and off every listed tangent line.

    ``tangent_lines`` pairs a rational point with a direction vector (the
    first-order coefficients of its branch).
    """
    if h.M < 3:
        raise ValueError("a projection center needs M >= 3")
    ctx = h.ctx
    pts = [P.coords for P in rational_curve_points]
    chord: set[tuple[int, ...]] = set()
    for a, b in itertools.combinations(pts, 2):
        chord.update(line_points(ctx, a, b))
    tang: set[tuple[int, ...]] = set()
    for P, d in tangent_lines:
        if linalg.rank(ctx, [list(P.coords), list(d)]) == 2:
            tang.update(line_points(ctx, P.coords, d))
    scanned = 0
    for x in projective_points(ctx, h.M):
        scanned += 1
        if x in chord or x in tang:
            continue
        P = ProjPoint(ctx, x)
        if on_variety(h, P):
            continue
        return CenterSearch(P, scanned, len(chord), len(tang))
    raise RuntimeError("no projection center found; upstream data is inconsistent")


def verify_projection_center(
    h: HermitianForm,
    center: ProjPoint,
    rational_curve_points: Sequence[ProjPoint],
    tangent_lines: Sequence[tuple[ProjPoint, Sequence[int]]] = (),
) -> dict:
    """Independent O(n^2) rank-based check of the three center conditions."""
    ctx = h.ctx
    c = center.coords
    off = not on_variety(h, center)
    bad_chords = sum(
        1
        for a, b in itertools.combinations(rational_curve_points, 2)
        if collinear(ctx, a.coords, b.coords, c)
    )
    bad_tangents = sum(1 for P, d in tangent_lines if collinear(ctx, P.coords, d, c))
    return {
        "off_variety": off,
        "chords_through_center": bad_chords,
        "tangents_through_center": bad_tangents,
        "ok": off and bad_chords == 0 and bad_tangents == 0,
    }


@dataclass
class Projection:
    A: linalg.Matrix  # columns: new basis; last column is the center
    A_inv: linalg.Matrix
    form: HermitianForm  # A^t H A^(q)
    images: list[ProjPoint]


def project_from_center(h: HermitianForm, center: ProjPoint, points: Sequence[ProjPoint]) -> Projection:
    """Move ``center`` to (0:..:0:1) by a form-compatible change of basis and drop
    the last coordinate.

    The new basis is an orthonormalized basis of the polar hyperplane of the
    center followed by the (rescaled) center itself, so the transformed form
    is block diagonal and the center is its own orthogonal complement.
    """
    ctx, q = h.ctx, h.q
    if on_variety(h, center):
        raise NotOnVariety("projection center lies on the variety")
    c = list(center.coords)
    polar = linalg.matvec(ctx, h.H, [ctx.power(v, q) for v in c])
    basis = linalg.nullspace(ctx, [polar], h.M + 1)
    B = linalg.transpose(basis)
    sub = HermitianForm(ctx, congruence_transform(h, B), q)
    if sub.is_hermitian():
        A_sub = diagonalize_congruence(sub).A
        B = linalg.matmul(ctx, B, A_sub)
    s = solve_norm_int(ctx, ctx.inv(h.pairing(c, c)), q)
    c = [ctx.mul(s, v) for v in c]
    A = [row + [cv] for row, cv in zip(B, c)]
    A_inv = linalg.inverse(ctx, A)
    new_form = HermitianForm(ctx, congruence_transform(h, A), q)
    images = []
    for P in points:
        K = P.ctx
        Ak = linalg.embed_matrix(embedding_table(ctx, K), A_inv)
        y = linalg.matvec(K, Ak, P.coords)
        images.append(ProjPoint.make(K, y[:-1]))
    return Projection(A, A_inv, new_form, images)


def secant_violations(
    q: int,
    rational_points: Sequence[ProjPoint],
    nonrational_points: Sequence[ProjPoint],
) -> int:
    """Count pairs (R, S) where the line RS is GF(q^2)-rational.

    The line through rational R and non-rational S is rational exactly when
    it also passes through the Frobenius conjugate of S.
    """
    bad = 0
    for S in nonrational_points:
        K = S.ctx
        FS = S.frobenius(q * q)
        for R in rational_points:
            Rk = R.embed(K)
            if collinear(K, Rk.coords, S.coords, FS.coords):
                bad += 1
    return bad
