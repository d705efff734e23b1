"""Exact arithmetic in GF(p^k) with compatible subfield embeddings.

Elements are stored as integers ``v = c_0 + c_1 p + ... + c_{k-1} p^{k-1}``
where ``c_i`` are the polynomial-basis coordinates.  Multiplication goes
through log/antilog tables and addition through a Zech logarithm table, so
every field operation is a handful of list lookups.  Prime-field elements
are exactly the integers ``0 .. p-1``.
"""

from __future__ import annotations

import os
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

FIELD_CAP = 1 << 20


class FieldError(ValueError):
    """Invalid field construction or a cross-field operation."""


class CapExceeded(RuntimeError):
    """An exhaustive scan would exceed the configured enumeration cap."""


def enumeration_cap(default: int = FIELD_CAP) -> int:
    env = os.environ.get("HERMCURVE_CAP")
    return int(env) if env else default


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# -- dense univariate polynomials over GF(p), constant term first ----------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: list[int], m: Sequence[int], p: int) -> list[int]:
    a = _trim(list(a))
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        _trim(a)
    return a


def _pmulmod(a: Sequence[int], b: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _pmod(out, m, p)


def _ppowmod(a: Sequence[int], e: int, m: Sequence[int], p: int) -> list[int]:
    result, base = [1], _pmod(list(a), m, p)
    while e:
        if e & 1:
            result = _pmulmod(result, base, m, p)
        base = _pmulmod(base, base, m, p)
        e >>= 1
    return result


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _psub(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    return _trim(out)


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Rabin's test for a monic polynomial over GF(p) (constant term first)."""
    k = len(modulus) - 1
    if k < 1:
        return False
    if k == 1:
        return True
    x = [0, 1]
    if _psub(_ppowmod(x, p**k, modulus, p), x, p):
        return False
    for r in _prime_factors(k):
        h = _psub(_ppowmod(x, p ** (k // r), modulus, p), x, p)
        if len(_pgcd(list(modulus), h, p)) != 1:
            return False
    return True


def _smallest_irreducible(p: int, k: int) -> list[int]:
    # Scan monic polynomials with the lower coefficients read as a base-p
    # integer, most significant coefficient first.
    for n in range(p**k):
        lower = [(n // p**i) % p for i in range(k)]
        cand = lower + [1]
        if k > 1 and cand[0] == 0:
            continue
        if is_irreducible(cand, p):
            return cand
    raise FieldError(f"no irreducible polynomial of degree {k} over GF({p})")


class FieldCtx:
    """The field GF(p^k) presented as GF(p)[t]/(modulus)."""

    def __init__(self, p: int, k: int, modulus: Sequence[int]):
        if not is_prime(p):
            raise FieldError(f"{p} is not prime")
        if k < 1:
            raise FieldError("extension degree must be >= 1")
        modulus = [int(c) % p for c in modulus]
        if len(modulus) != k + 1 or modulus[-1] != 1:
            raise FieldError("modulus must be monic of degree k")
        if not is_irreducible(modulus, p):
            raise FieldError(f"modulus {modulus} is reducible over GF({p})")
        self.p = p
        self.k = k
        self.modulus = tuple(modulus)
        self.order = p**k
        if self.order > FIELD_CAP:
            raise CapExceeded(f"GF({p}^{k}) exceeds the field cap of {FIELD_CAP} elements")
        self._build_tables()

    # -- table construction ------------------------------------------------
    def _digits(self, v: int) -> list[int]:
        p = self.p
        out = []
        for _ in range(self.k):
            out.append(v % p)
            v //= p
        return out

    def _encode(self, digits: Sequence[int]) -> int:
        v = 0
        for c in reversed(digits):
            v = v * self.p + c
        return v

    def _raw_add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        p = self.p
        da, db = self._digits(a), self._digits(b)
        return self._encode([(x + y) % p for x, y in zip(da, db)])

    def _build_tables(self) -> None:
        p, k, n = self.p, self.k, self.order - 1
        m = list(self.modulus)
        for g in range(1, self.order):
            if k == 1 and n == 1:
                break
            gd = _trim(self._digits(g))
            exp = [0] * n
            cur = [1]
            ok = True
            for i in range(n):
                v = self._encode(cur + [0] * (k - len(cur)))
                if i > 0 and v == 1:
                    ok = False
                    break
                exp[i] = v
                cur = _pmulmod(cur, gd, m, p)
            if ok:
                self.generator = g
                self._exp = exp
                break
        else:  # pragma: no cover - a finite field always has a generator
            raise FieldError("no primitive element found")
        if k == 1 and n == 1:
            self.generator = 1
            self._exp = [1]
        log = [-1] * self.order
        for i, v in enumerate(self._exp):
            log[v] = i
        self._log = log
        zech = [-1] * n
        for i in range(n):
            s = self._raw_add(self._exp[i], 1)
            zech[i] = log[s] if s else -1
        self._zech = zech
        self._neg_one_log = 0 if p == 2 else n // 2

    # -- integer-level arithmetic (hot paths) ------------------------------
    def add(self, a: int, b: int) -> int:
        if a == 0:
            return b
        if b == 0:
            return a
        if self.p == 2:
            return a ^ b
        n = self.order - 1
        la = self._log[a]
        z = self._zech[(self._log[b] - la) % n]
        if z < 0:
            return 0
        return self._exp[(la + z) % n]

    def neg(self, a: int) -> int:
        if a == 0 or self.p == 2:
            return a
        return self._exp[(self._log[a] + self._neg_one_log) % (self.order - 1)]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.order - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return self._exp[(-self._log[a]) % (self.order - 1)]

    def power(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("negative power of zero")
            return 1 if e == 0 else 0
        return self._exp[(self._log[a] * e) % (self.order - 1)]

    def from_int(self, n: int) -> int:
        return n % self.p

    # -- element-level API -------------------------------------------------
    def __call__(self, value) -> "FieldElem":
        if isinstance(value, FieldElem):
            if value.ctx is not self:
                raise FieldError("element belongs to a different field")
            return value
        return FieldElem(self, int(value) % self.p)

    def elem(self, v: int) -> "FieldElem":
        """Element from its integer encoding."""
        if not 0 <= v < self.order:
            raise FieldError("encoding out of range")
        return FieldElem(self, v)

    def from_coeffs(self, coeffs: Sequence[int]) -> "FieldElem":
        c = [int(x) % self.p for x in coeffs] + [0] * self.k
        return FieldElem(self, self._encode(c[: self.k]))

    def zero(self) -> "FieldElem":
        return FieldElem(self, 0)

    def one(self) -> "FieldElem":
        return FieldElem(self, 1)

    def gen(self) -> "FieldElem":
        """The polynomial-basis generator t (class of the variable)."""
        if self.k == 1:
            return FieldElem(self, (-self.modulus[0]) % self.p)
        return FieldElem(self, self.p)

    def primitive(self) -> "FieldElem":
        return FieldElem(self, self.generator)

    def elements(self) -> Iterator["FieldElem"]:
        """All elements in lexicographic order of coefficient vectors."""
        for v in range(self.order):
            yield FieldElem(self, v)

    def in_subfield(self, v: int, d: int) -> bool:
        """Whether the element with encoding ``v`` lies in GF(p^d)."""
        return self.power(v, self.p**d) == v

    def spec(self) -> str:
        return " ".join(str(c) for c in (self.p, self.k, *self.modulus))

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.k})"


class FieldElem:
    __slots__ = ("ctx", "v")

    def __init__(self, ctx: FieldCtx, v: int):
        self.ctx = ctx
        self.v = v

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElem):
            if other.ctx is not self.ctx:
                raise FieldError(f"mixed fields {self.ctx} and {other.ctx}")
            return other.v
        if isinstance(other, int):
            return other % self.ctx.p
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElem(self.ctx, self.ctx.add(self.v, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElem(self.ctx, self.ctx.sub(self.v, o))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElem(self.ctx, self.ctx.sub(o, self.v))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElem(self.ctx, self.ctx.mul(self.v, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElem(self.ctx, self.ctx.mul(self.v, self.ctx.inv(o)))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElem(self.ctx, self.ctx.mul(o, self.ctx.inv(self.v)))

    def __neg__(self):
        return FieldElem(self.ctx, self.ctx.neg(self.v))

    def __pow__(self, e: int):
        return FieldElem(self.ctx, self.ctx.power(self.v, e))

    def inverse(self) -> "FieldElem":
        return FieldElem(self.ctx, self.ctx.inv(self.v))

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElem):
            return self.ctx is other.ctx and self.v == other.v
        if isinstance(other, int):
            return self.v == other % self.ctx.p
        return NotImplemented

    def __hash__(self) -> int:
        return hash((id(self.ctx), self.v))

    def __bool__(self) -> bool:
        return self.v != 0

    def is_zero(self) -> bool:
        return self.v == 0

    def coeffs(self) -> list[int]:
        return self.ctx._digits(self.v)

    def frobenius(self, r: int = 1) -> "FieldElem":
        """x -> x^(p^r)."""
        return self ** (self.ctx.p**r)

    def __repr__(self) -> str:
        if self.ctx.k == 1:
            return str(self.v)
        return "[" + " ".join(str(c) for c in self.coeffs()) + "]"

    def __lt__(self, other: "FieldElem") -> bool:
        return self.v < other.v


@lru_cache(maxsize=None)
def construct_field(p: int, k: int) -> FieldCtx:
    """GF(p^k) with the lexicographically smallest monic irreducible modulus.

    Contexts are cached, so repeated calls return the same object and
    embeddings between them stay consistent.
    """
    if not is_prime(p):
        raise FieldError(f"{p} is not prime")
    if k < 1:
        raise FieldError("extension degree must be >= 1")
    if p**k > FIELD_CAP:
        raise CapExceeded(f"GF({p}^{k}) exceeds the field cap of {FIELD_CAP} elements")
    return FieldCtx(p, k, _smallest_irreducible(p, k))


def field_from_spec(text: str) -> FieldCtx:
    """Parse ``p k c_0 ... c_k``; returns the cached context when the modulus matches."""
    parts = [int(t) for t in text.split()]
    p, k, mod = parts[0], parts[1], parts[2:]
    ctx = construct_field(p, k)
    if list(ctx.modulus) == mod:
        return ctx
    return FieldCtx(p, k, mod)


def field_of_order(order: int) -> FieldCtx:
    p, k = prime_power(order)
    return construct_field(p, k)


def prime_power(q: int) -> tuple[int, int]:
    """Return (p, e) with q = p^e, or raise FieldError."""
    for p in range(2, q + 1):
        if q % p == 0:
            e, n = 0, q
            while n % p == 0:
                n //= p
                e += 1
            if n != 1:
                break
            return p, e
    raise FieldError(f"{q} is not a prime power")


# -- embeddings ----------------------------------------------------------

_EMBED: dict[tuple[int, int], list[int]] = {}


def _direct_embedding(small: FieldCtx, big: FieldCtx) -> list[int]:
    # Image of the generator t of `small`: the first root of its modulus in `big`.
    mod = small.modulus
    root = None
    for v in range(big.order):
        acc = 0
        for c in reversed(mod):
            acc = big.add(big.mul(acc, v), c)
        if acc == 0:
            root = v
            break
    if root is None:  # pragma: no cover - impossible for k | K
        raise FieldError("modulus has no root in the extension")
    powers = [1]
    for _ in range(small.k - 1):
        powers.append(big.mul(powers[-1], root))
    table = []
    for v in range(small.order):
        acc = 0
        for c, pw in zip(small._digits(v), powers):
            if c:
                acc = big.add(acc, big.mul(c, pw))
        table.append(acc)
    return table


def embedding_table(small: FieldCtx, big: FieldCtx) -> list[int]:
    """Encoding table of the embedding small -> big.

    Embeddings across a composite degree ratio are composed through the
    intermediate field of the smallest prime step, so every chain
    GF(p^a) -> GF(p^b) -> GF(p^c) built by this module commutes.
    """
    if small is big:
        return list(range(small.order))
    if small.p != big.p or big.k % small.k:
        raise FieldError(f"{small} does not embed in {big}")
    key = (id(small), id(big))
    if key in _EMBED:
        return _EMBED[key]
    ratio = big.k // small.k
    if small.k == 1:
        table = list(range(small.p))
    else:
        r = _prime_factors(ratio)[0]
        if r == ratio:
            table = _direct_embedding(small, big)
        else:
            mid = construct_field(small.p, small.k * r)
            first = embedding_table(small, mid)
            second = embedding_table(mid, big)
            table = [second[v] for v in first]
    _EMBED[key] = table
    return table


def embed(x: FieldElem, big: FieldCtx) -> FieldElem:
    return FieldElem(big, embedding_table(x.ctx, big)[x.v])


def restrict(x: FieldElem, small: FieldCtx) -> FieldElem:
    """Preimage of ``x`` under the embedding small -> x.ctx."""
    table = embedding_table(small, x.ctx)
    try:
        return FieldElem(small, table.index(x.v))
    except ValueError:
        raise FieldError(f"{x} does not lie in {small}") from None


# -- conjugation, norm, trace relative to the index-2 subfield ---------------

def _half_order(ctx: FieldCtx) -> int:
    if ctx.k % 2:
        raise FieldError(f"{ctx} has no index-2 subfield")
    return ctx.p ** (ctx.k // 2)


def conjugate(x: FieldElem) -> FieldElem:
    """x -> x^q on GF(q^2)."""
    return x ** _half_order(x.ctx)


def norm_to_subfield(x: FieldElem) -> FieldElem:
    """x -> x^(q+1); the value lies in GF(q) (as an element of x's field)."""
    return x ** (_half_order(x.ctx) + 1)


def trace_to_subfield(x: FieldElem) -> FieldElem:
    return x + conjugate(x)


def solve_norm(a: FieldElem, q: int) -> FieldElem:
    """Some x with x^(q+1) = a, by exhaustive scan in lexicographic order."""
    ctx = a.ctx
    for v in range(ctx.order):
        if ctx.power(v, q + 1) == a.v:
            return FieldElem(ctx, v)
    raise FieldError(f"{a} is not a norm")


def univariate_roots(coeffs: Sequence[FieldElem | int], ctx: FieldCtx) -> list[FieldElem]:
    """All roots in ``ctx`` of sum coeffs[i] X^i, by exhaustive scan."""
    cs = [c.v if isinstance(c, FieldElem) else int(c) % ctx.p for c in coeffs]
    while cs and cs[-1] == 0:
        cs.pop()
    if not cs:
        raise FieldError("zero polynomial has every element as a root")
    if ctx.order > enumeration_cap():
        raise CapExceeded(f"root scan over {ctx} exceeds cap")
    return [FieldElem(ctx, v) for v in _roots_int(cs, ctx)]


def _roots_int(cs: Sequence[int], ctx: FieldCtx) -> list[int]:
    add, mul = ctx.add, ctx.mul
    rev = list(reversed(cs))
    out = []
    for v in range(ctx.order):
        acc = 0
        for c in rev:
            acc = add(mul(acc, v), c)
        if acc == 0:
            out.append(v)
    return out


def elements_of(ctx: FieldCtx, values: Iterable[int]) -> list[FieldElem]:
    return [FieldElem(ctx, v) for v in values]
