"""Sparse multivariate polynomials and truncated power series over a FieldCtx.

Coefficients are held as integer encodings of the context (see ``gf``);
the public accessors hand back :class:`FieldElem` values.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from .gf import FieldCtx, FieldElem, FieldError, embedding_table


def binomial_mod_p(n: int, k: int, p: int) -> int:
    """C(n, k) mod p by Lucas' theorem."""
    if k < 0 or n < 0 or k > n:
        return 0
    result = 1
    while n or k:
        ni, ki = n % p, k % p
        if ki > ni:
            return 0
        # small binomial by multiplicative formula mod p
        num = den = 1
        for j in range(ki):
            num = num * (ni - j) % p
            den = den * (j + 1) % p
        result = result * num * pow(den, p - 2, p) % p
        n //= p
        k //= p
    return result


def _val(ctx: FieldCtx, c) -> int:
    if isinstance(c, FieldElem):
        if c.ctx is not ctx:
            raise FieldError(f"coefficient from {c.ctx}, expected {ctx}")
        return c.v
    return int(c) % ctx.p


class MultiPoly:
    """Polynomial in ``nvars`` variables; terms map exponent tuples to encodings."""

    __slots__ = ("ctx", "nvars", "terms")

    def __init__(self, ctx: FieldCtx, nvars: int, terms: Mapping[tuple, object] | None = None):
        self.ctx = ctx
        self.nvars = nvars
        clean: dict[tuple, int] = {}
        for e, c in (terms or {}).items():
            if len(e) != nvars:
                raise ValueError("exponent length mismatch")
            v = _val(ctx, c)
            if v:
                clean[tuple(e)] = v
        self.terms = clean

    @classmethod
    def _raw(cls, ctx: FieldCtx, nvars: int, terms: dict[tuple, int]) -> "MultiPoly":
        obj = cls.__new__(cls)
        obj.ctx, obj.nvars, obj.terms = ctx, nvars, terms
        return obj

    @classmethod
    def const(cls, ctx: FieldCtx, nvars: int, c) -> "MultiPoly":
        return cls(ctx, nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, ctx: FieldCtx, nvars: int, i: int) -> "MultiPoly":
        e = [0] * nvars
        e[i] = 1
        return cls(ctx, nvars, {tuple(e): 1})

    @classmethod
    def monomial(cls, ctx: FieldCtx, exps: Sequence[int], c=1) -> "MultiPoly":
        return cls(ctx, len(exps), {tuple(exps): c})

    # -- ring operations ---------------------------------------------------
    def _lift(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.ctx is not self.ctx or other.nvars != self.nvars:
                raise FieldError("polynomials over different rings")
            return other
        return MultiPoly.const(self.ctx, self.nvars, other)

    def __add__(self, other) -> "MultiPoly":
        other = self._lift(other)
        add = self.ctx.add
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = add(out.get(e, 0), c)
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return MultiPoly._raw(self.ctx, self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        neg = self.ctx.neg
        return MultiPoly._raw(self.ctx, self.nvars, {e: neg(c) for e, c in self.terms.items()})

    def __sub__(self, other) -> "MultiPoly":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "MultiPoly":
        return self._lift(other) - self

    def __mul__(self, other) -> "MultiPoly":
        if isinstance(other, (int, FieldElem)):
            c = _val(self.ctx, other)
            if c == 0:
                return MultiPoly._raw(self.ctx, self.nvars, {})
            mul = self.ctx.mul
            return MultiPoly._raw(self.ctx, self.nvars, {e: mul(v, c) for e, v in self.terms.items()})
        other = self._lift(other)
        add, mul = self.ctx.add, self.ctx.mul
        out: dict[tuple, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = add(out.get(e, 0), mul(c1, c2))
        return MultiPoly._raw(self.ctx, self.nvars, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "MultiPoly":
        if n < 0:
            raise ValueError("negative power")
        result = MultiPoly.const(self.ctx, self.nvars, 1)
        base = self
        p = self.ctx.p
        # peel off factors of p with the Frobenius shortcut
        while n and n % p == 0:
            base = base.frobenius_power(p)
            n //= p
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def frobenius_power(self, r: int) -> "MultiPoly":
        """self**r for r a power of the characteristic."""
        pw = self.ctx.power
        return MultiPoly._raw(
            self.ctx, self.nvars,
            {tuple(a * r for a in e): pw(c, r) for e, c in self.terms.items()},
        )

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, FieldElem)):
            other = self._lift(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.ctx is other.ctx and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((id(self.ctx), self.nvars, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    # -- inspection ----------------------------------------------------------
    def coeff(self, exps: Sequence[int]) -> FieldElem:
        return FieldElem(self.ctx, self.terms.get(tuple(exps), 0))

    def degree(self, var: int | None = None) -> int:
        if not self.terms:
            return -1
        if var is None:
            return max(sum(e) for e in self.terms)
        return max(e[var] for e in self.terms)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def map_coeffs(self, big: FieldCtx) -> "MultiPoly":
        """The same polynomial with coefficients embedded into ``big``."""
        table = embedding_table(self.ctx, big)
        return MultiPoly._raw(big, self.nvars, {e: table[c] for e, c in self.terms.items()})

    def __call__(self, *point: FieldElem) -> FieldElem:
        """Evaluate at a point whose coordinates live in a field containing ctx."""
        if len(point) != self.nvars:
            raise ValueError("wrong number of coordinates")
        big = point[0].ctx
        table = embedding_table(self.ctx, big)
        add, mul, pw = big.add, big.mul, big.power
        vals = [pt.v for pt in point]
        acc = 0
        for e, c in self.terms.items():
            t = table[c]
            for v, a in zip(vals, e):
                if a:
                    t = mul(t, pw(v, a))
                    if not t:
                        break
            acc = add(acc, t)
        return FieldElem(big, acc)

    def partial(self, var: int, k: int = 1) -> "MultiPoly":
        """k-th Hasse derivative with respect to variable ``var``."""
        p, mul = self.ctx.p, self.ctx.mul
        out = {}
        for e, c in self.terms.items():
            b = binomial_mod_p(e[var], k, p)
            if b:
                ne = list(e)
                ne[var] -= k
                out[tuple(ne)] = mul(c, b)
        return MultiPoly._raw(self.ctx, self.nvars, out)

    def substitute(self, values: Sequence["MultiPoly"]) -> "MultiPoly":
        """Compose: replace variable i by values[i] (all in one target ring)."""
        target = values[0]
        result = MultiPoly._raw(target.ctx, target.nvars, {})
        cache: dict[tuple[int, int], MultiPoly] = {}
        table = embedding_table(self.ctx, target.ctx)
        for e, c in self.terms.items():
            term = MultiPoly.const(target.ctx, target.nvars, FieldElem(target.ctx, table[c]))
            for i, a in enumerate(e):
                if a:
                    key = (i, a)
                    if key not in cache:
                        cache[key] = values[i] ** a
                    term = term * cache[key]
            result = result + term
        return result

    def render(self, names: Sequence[str] | None = None) -> str:
        """Canonical text form, graded-lex descending."""
        if not self.terms:
            return "0"
        names = names or ([f"X{i}" for i in range(self.nvars)] if self.nvars > 2 else ["x", "y"][: self.nvars])
        parts = []
        for e in sorted(self.terms, key=lambda e: (sum(e), e), reverse=True):
            c = FieldElem(self.ctx, self.terms[e])
            mono = "*".join(
                (n if a == 1 else f"{n}^{a}") for n, a in zip(names, e) if a
            )
            cs = repr(c)
            if not mono:
                parts.append(cs)
            elif c.v == 1:
                parts.append(mono)
            else:
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"MultiPoly({self.render()})"


def poly_ring(ctx: FieldCtx, nvars: int) -> list[MultiPoly]:
    """The variables of ctx[X_0..X_{n-1}]."""
    return [MultiPoly.var(ctx, nvars, i) for i in range(nvars)]


def poly_identity_check(lhs: MultiPoly, rhs: MultiPoly) -> bool:
    if lhs.ctx is not rhs.ctx or lhs.nvars != rhs.nvars:
        raise FieldError("mismatched polynomial rings")
    return lhs.terms == rhs.terms


def normalize_monic_y(F: MultiPoly, yvar: int = 1) -> MultiPoly:
    """Scale F so its top y-degree part is the monomial y^d with coefficient 1."""
    d = F.degree(yvar)
    top = [e for e in F.terms if e[yvar] == d]
    if len(top) != 1 or any(a for i, a in enumerate(top[0]) if i != yvar):
        raise FieldError("polynomial is not monic-normalizable in y")
    lead = FieldElem(F.ctx, F.terms[top[0]])
    return F * lead.inverse()


def reduce_mod_curve(g: MultiPoly, F: MultiPoly, yvar: int = 1) -> MultiPoly:
    """Remainder of g on division by F (monic in y after unit scaling)."""
    Fm = normalize_monic_y(F, yvar)
    if g.ctx is not Fm.ctx:
        Fm = Fm.map_coeffs(g.ctx)
    d = Fm.degree(yvar)
    ctx = g.ctx
    add, mul, neg = ctx.add, ctx.mul, ctx.neg
    tail = [(e, c) for e, c in Fm.terms.items() if e[yvar] != d]
    out = dict(g.terms)
    # process high y-degrees first; y^d -> -(tail)
    while True:
        high = [e for e in out if e[yvar] >= d]
        if not high:
            break
        e = max(high, key=lambda e: e[yvar])
        c = out.pop(e)
        base = list(e)
        base[yvar] -= d
        for te, tc in tail:
            ne = tuple(a + b for a, b in zip(base, te))
            s = add(out.get(ne, 0), neg(mul(c, tc)))
            if s:
                out[ne] = s
            else:
                out.pop(ne, None)
    return MultiPoly._raw(ctx, g.nvars, out)


class TruncatedSeries:
    """c_0 + c_1 t + ... + c_{T-1} t^{T-1} + O(t^T)."""

    __slots__ = ("ctx", "coeffs", "prec")

    def __init__(self, ctx: FieldCtx, coeffs: Iterable, prec: int):
        if prec < 0:
            raise ValueError("negative precision")
        cs = [_val(ctx, c) for c in coeffs][:prec]
        cs += [0] * (prec - len(cs))
        self.ctx, self.coeffs, self.prec = ctx, cs, prec

    @classmethod
    def _raw(cls, ctx: FieldCtx, coeffs: list[int], prec: int) -> "TruncatedSeries":
        obj = cls.__new__(cls)
        obj.ctx, obj.coeffs, obj.prec = ctx, coeffs, prec
        return obj

    @classmethod
    def const(cls, ctx: FieldCtx, c, prec: int) -> "TruncatedSeries":
        return cls(ctx, [c], prec)

    @classmethod
    def param(cls, ctx: FieldCtx, prec: int, center=0) -> "TruncatedSeries":
        """center + t."""
        return cls(ctx, [center, 1], prec)

    def coeff(self, n: int) -> FieldElem:
        return FieldElem(self.ctx, self.coeffs[n])

    def valuation(self) -> int | None:
        """Index of the first nonzero coefficient, or None when all known ones vanish."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return None

    def _check(self, other: "TruncatedSeries") -> None:
        if other.ctx is not self.ctx:
            raise FieldError("series over different fields")

    def __add__(self, other) -> "TruncatedSeries":
        if isinstance(other, (int, FieldElem)):
            other = TruncatedSeries.const(self.ctx, other, self.prec)
        self._check(other)
        n = min(self.prec, other.prec)
        add = self.ctx.add
        return TruncatedSeries._raw(self.ctx, [add(a, b) for a, b in zip(self.coeffs[:n], other.coeffs[:n])], n)

    __radd__ = __add__

    def __neg__(self) -> "TruncatedSeries":
        neg = self.ctx.neg
        return TruncatedSeries._raw(self.ctx, [neg(a) for a in self.coeffs], self.prec)

    def __sub__(self, other) -> "TruncatedSeries":
        if isinstance(other, (int, FieldElem)):
            other = TruncatedSeries.const(self.ctx, other, self.prec)
        return self + (-other)

    def __rsub__(self, other) -> "TruncatedSeries":
        return (-self) + other

    def __mul__(self, other) -> "TruncatedSeries":
        ctx = self.ctx
        if isinstance(other, (int, FieldElem)):
            c = _val(ctx, other)
            mul = ctx.mul
            return TruncatedSeries._raw(ctx, [mul(a, c) for a in self.coeffs], self.prec)
        self._check(other)
        add, mul = ctx.add, ctx.mul
        n = min(self.prec, other.prec)
        out = [0] * n
        a, b = self.coeffs, other.coeffs
        for i, ai in enumerate(a):
            if ai and i < n:
                for j in range(min(len(b), n - i)):
                    bj = b[j]
                    if bj:
                        out[i + j] = add(out[i + j], mul(ai, bj))
        return TruncatedSeries._raw(ctx, out, n)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "TruncatedSeries":
        result = TruncatedSeries.const(self.ctx, 1, self.prec)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def inverse(self) -> "TruncatedSeries":
        """1/self for a unit series (nonzero constant term)."""
        ctx = self.ctx
        if not self.coeffs or self.coeffs[0] == 0:
            raise ZeroDivisionError("series is not a unit")
        add, mul = ctx.add, ctx.mul
        inv0 = ctx.inv(self.coeffs[0])
        out = [inv0] + [0] * (self.prec - 1)
        for n in range(1, self.prec):
            acc = 0
            for j in range(1, n + 1):
                if self.coeffs[j]:
                    acc = add(acc, mul(self.coeffs[j], out[n - j]))
            out[n] = ctx.neg(mul(acc, inv0))
        return TruncatedSeries._raw(ctx, out, self.prec)

    def shift_down(self, e: int) -> "TruncatedSeries":
        """Divide by t^e (requires the first e coefficients to vanish)."""
        if any(self.coeffs[:e]):
            raise ValueError("series not divisible by t^e")
        return TruncatedSeries._raw(self.ctx, self.coeffs[e:], self.prec - e)

    def truncate(self, prec: int) -> "TruncatedSeries":
        n = min(prec, self.prec)
        return TruncatedSeries._raw(self.ctx, self.coeffs[:n], n)

    def map_coeffs(self, big: FieldCtx) -> "TruncatedSeries":
        table = embedding_table(self.ctx, big)
        return TruncatedSeries._raw(big, [table[c] for c in self.coeffs], self.prec)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        n = min(self.prec, other.prec)
        return self.ctx is other.ctx and self.coeffs[:n] == other.coeffs[:n]

    def __repr__(self) -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                e = FieldElem(self.ctx, c)
                terms.append(f"{e!r}*t^{i}" if i else repr(e))
        return (" + ".join(terms) or "0") + f" + O(t^{self.prec})"


def hasse_derivative(s: TruncatedSeries, k: int) -> TruncatedSeries:
    """D^k: coefficient of t^(n-k) is C(n,k) c_n."""
    if k < 0:
        raise ValueError("negative derivative order")
    p, mul = s.ctx.p, s.ctx.mul
    out = []
    for n in range(k, s.prec):
        c = s.coeffs[n]
        b = binomial_mod_p(n, k, p) if c else 0
        out.append(mul(c, b) if b else 0)
    return TruncatedSeries._raw(s.ctx, out, max(s.prec - k, 0))


def series_compose_qth_power(s: TruncatedSeries, q: int, prec: int | None = None) -> TruncatedSeries:
    """s(t)^q via coefficient powering and exponent scaling.

    Precision grows to q*T; ``prec`` caps what is stored.
    """
    if s.prec < 1:
        raise ValueError("series holds no terms")
    if q % s.ctx.p:
        raise ValueError("q must be a power of the characteristic")
    n = q * s.prec if prec is None else min(prec, q * s.prec)
    out = [0] * n
    pw = s.ctx.power
    for i, c in enumerate(s.coeffs):
        if c and i * q < n:
            out[i * q] = pw(c, q)
    return TruncatedSeries._raw(s.ctx, out, n)


def eval_poly_series(f: MultiPoly, args: Sequence[TruncatedSeries]) -> TruncatedSeries:
    """Substitute series for the variables of f (coefficients embedded)."""
    ctx = args[0].ctx
    prec = min(a.prec for a in args)
    table = embedding_table(f.ctx, ctx)
    result = TruncatedSeries._raw(ctx, [0] * prec, prec)
    powers: list[dict[int, TruncatedSeries]] = [{} for _ in args]

    def power(i: int, a: int) -> TruncatedSeries:
        cache = powers[i]
        if a not in cache:
            if a == 0:
                cache[a] = TruncatedSeries.const(ctx, 1, prec)
            elif a == 1:
                cache[a] = args[i]
            else:
                cache[a] = power(i, a // 2) * power(i, a - a // 2)
        return cache[a]

    for e, c in f.terms.items():
        term = TruncatedSeries.const(ctx, FieldElem(ctx, table[c]), prec)
        for i, a in enumerate(e):
            if a:
                term = term * power(i, a)
        result = result + term
    return result.truncate(prec)
