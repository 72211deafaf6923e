"""Exact coefficient fields, sparse Laurent polynomials and formal fractions.

Polynomials are immutable maps ``exponent tuple -> nonzero coefficient``.
Over QQ coefficients are ``int`` or :class:`fractions.Fraction`; over GF(p)
they are ints in ``[0, p)``.  Variables are 1-indexed in every public
function (``X1 .. Xn``); exponent tuples are 0-indexed internally.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Sequence

EXPONENT_LIMIT = 2**31


class AmbientMismatch(ValueError):
    """Operands live in different polynomial rings."""


class ExponentOverflow(ArithmeticError):
    """An exponent left the signed 32-bit range."""


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class Field:
    """QQ when ``p == 0``, otherwise the prime field GF(p)."""

    p: int = 0

    def __post_init__(self):
        if self.p and not _is_prime(self.p):
            raise ValueError(f"characteristic {self.p} is not prime")

    @property
    def characteristic(self) -> int:
        return self.p

    def __call__(self, x):
        if isinstance(x, str):
            x = Fraction(x.strip())
        if self.p:
            if isinstance(x, Fraction):
                if x.denominator % self.p == 0:
                    raise ZeroDivisionError(f"{x} has no image in GF({self.p})")
                return x.numerator * pow(x.denominator, -1, self.p) % self.p
            return int(x) % self.p
        if isinstance(x, Fraction):
            return x.numerator if x.denominator == 1 else x
        if isinstance(x, int):
            return x
        x = Fraction(x)
        return x.numerator if x.denominator == 1 else x

    def inv(self, c):
        if c == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.p:
            return pow(c, -1, self.p)
        return Fraction(1, c) if isinstance(c, int) else 1 / c

    def div(self, a, b):
        if self.p:
            return a * pow(b, -1, self.p) % self.p
        return Fraction(a) / b

    def neg(self, c):
        return (-c) % self.p if self.p else -c

    def to_fraction(self, c) -> Fraction:
        return Fraction(c)

    def __str__(self):
        return f"GF({self.p})" if self.p else "QQ"


QQ = Field(0)


def GF(p: int) -> Field:
    return Field(p)


def grevlex_key(e):
    """Sort key: larger key means larger monomial (X1 > X2 > ... )."""
    return (sum(e), tuple(-x for x in reversed(e)))


def _check_exps(e):
    for x in e:
        if x >= EXPONENT_LIMIT or x <= -EXPONENT_LIMIT:
            raise ExponentOverflow(f"exponent {x} exceeds 2^31")


class Polynomial:
    """Sparse multivariate (Laurent) polynomial over a :class:`Field`."""

    __slots__ = ("nvars", "field", "terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping | None = None, field: Field = QQ, _raw=False):
        self.nvars = nvars
        self.field = field
        self._hash = None
        if _raw:
            self.terms = terms
            return
        clean = {}
        if terms:
            for m, c in terms.items():
                m = tuple(m)
                if len(m) != nvars:
                    raise AmbientMismatch(f"monomial {m} has length {len(m)}, expected {nvars}")
                c = field(c)
                if c:
                    v = clean.get(m)
                    if v is None:
                        clean[m] = c
                    else:
                        v = (v + c) % field.p if field.p else v + c
                        if v:
                            clean[m] = v
                        else:
                            del clean[m]
        self.terms = clean

    # construction helpers -------------------------------------------------
    @classmethod
    def zero(cls, nvars, field=QQ):
        return cls(nvars, {}, field, _raw=True)

    @classmethod
    def constant(cls, nvars, c, field=QQ):
        c = field(c)
        return cls(nvars, {(0,) * nvars: c} if c else {}, field, _raw=True)

    @classmethod
    def one(cls, nvars, field=QQ):
        return cls.constant(nvars, 1, field)

    @classmethod
    def var(cls, nvars, i, field=QQ, power=1):
        """The variable ``X_i`` (1-indexed), optionally raised to ``power``."""
        if not 1 <= i <= nvars:
            raise IndexError(f"variable X{i} outside 1..{nvars}")
        e = [0] * nvars
        e[i - 1] = power
        return cls(nvars, {tuple(e): 1}, field, _raw=True)

    @classmethod
    def monomial(cls, exps, coeff=1, field=QQ):
        exps = tuple(exps)
        c = field(coeff)
        return cls(len(exps), {exps: c} if c else {}, field, _raw=True)

    def _new(self, terms):
        return Polynomial(self.nvars, terms, self.field, _raw=True)

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.nvars != self.nvars:
                raise AmbientMismatch(f"{self.nvars} vs {other.nvars} variables")
            if other.field != self.field:
                raise AmbientMismatch(f"{self.field} vs {other.field}")
            return other
        return Polynomial.constant(self.nvars, other, self.field)

    # basic queries ---------------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_coeff(self):
        return self.terms.get((0,) * self.nvars, 0)

    def is_monomial(self):
        return len(self.terms) == 1

    def is_laurent(self):
        return any(x < 0 for m in self.terms for x in m)

    def degree(self):
        return max((sum(m) for m in self.terms), default=-1)

    def variables(self):
        """1-indexed variables occurring in the polynomial."""
        used = set()
        for m in self.terms:
            used.update(k + 1 for k, x in enumerate(m) if x)
        return sorted(used)

    def min_exponents(self):
        if not self.terms:
            return (0,) * self.nvars
        return tuple(min(col) for col in zip(*self.terms))

    def sorted_terms(self, key=grevlex_key):
        """Terms in decreasing order for ``key``."""
        return sorted(self.terms.items(), key=lambda mc: key(mc[0]), reverse=True)

    def leading(self, key=grevlex_key):
        m = max(self.terms, key=key)
        return m, self.terms[m]

    # arithmetic ------------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return (self.nvars == other.nvars and self.field == other.field
                    and self.terms == other.terms)
        if isinstance(other, (int, Fraction)):
            return self.terms == Polynomial.constant(self.nvars, other, self.field).terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, self.field.p, frozenset(self.terms.items())))
        return self._hash

    def __neg__(self):
        p = self.field.p
        if p:
            return self._new({m: (-c) % p for m, c in self.terms.items()})
        return self._new({m: -c for m, c in self.terms.items()})

    def _combine(self, other, sign):
        other = self._coerce(other)
        p = self.field.p
        res = dict(self.terms)
        for m, c in other.terms.items():
            v = res.get(m)
            if v is None:
                res[m] = ((sign * c) % p) if p else sign * c
            else:
                v = v + sign * c
                if p:
                    v %= p
                if v:
                    res[m] = v
                else:
                    del res[m]
        return self._new(res)

    def __add__(self, other):
        return self._combine(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, -1)

    def __rsub__(self, other):
        return (-self)._combine(other, 1)

    def scale(self, c):
        c = self.field(c)
        if not c:
            return self._new({})
        p = self.field.p
        if p:
            return self._new({m: v * c % p for m, v in self.terms.items()})
        return self._new({m: v * c for m, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        other = self._coerce(other)
        if len(self.terms) < len(other.terms):
            a, b = other.terms, self.terms
        else:
            a, b = self.terms, other.terms
        p = self.field.p
        res = {}
        get = res.get
        for m2, c2 in b.items():
            for m1, c1 in a.items():
                m = tuple([x + y for x, y in zip(m1, m2)])
                v = get(m, 0) + c1 * c2
                res[m] = v
        if p:
            res = {m: v % p for m, v in res.items() if v % p}
        else:
            res = {m: v for m, v in res.items() if v}
        return self._new(res)

    __rmul__ = __mul__

    def mul_term(self, mono, c):
        """Multiply by the single term ``c * X^mono``."""
        p = self.field.p
        if p:
            return self._new({tuple([x + y for x, y in zip(m, mono)]): v * c % p
                              for m, v in self.terms.items()})
        return self._new({tuple([x + y for x, y in zip(m, mono)]): v * c
                          for m, v in self.terms.items()})

    def __pow__(self, e: int):
        if len(self.terms) == 1:
            (m, c), = self.terms.items()
            mono = tuple(x * e for x in m)
            _check_exps(mono)
            p = self.field.p
            cc = pow(c, e, p) if p else self.field(Fraction(c) ** e)
            return self._new({mono: cc})
        if e < 0:
            raise ValueError("negative power of a non-monomial")
        if self.terms:
            _check_exps([self.degree() * e])
        result = Polynomial.one(self.nvars, self.field)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def derivative(self, i: int):
        """Partial derivative with respect to ``X_i`` (1-indexed)."""
        k = i - 1
        p = self.field.p
        res = {}
        for m, c in self.terms.items():
            e = m[k]
            if e:
                v = c * e
                if p:
                    v %= p
                    if not v:
                        continue
                mm = list(m)
                mm[k] -= 1
                res[tuple(mm)] = v
        return self._new(res)

    def compose(self, images: Sequence["Polynomial"]):
        """Substitute polynomial images for the variables.

        Negative exponents are allowed only where the image is a single term.
        """
        if len(images) != self.nvars:
            raise AmbientMismatch(f"{len(images)} images for {self.nvars} variables")
        target = images[0] if images else None
        if target is None:
            return self
        cache = {}

        def power(k, e):
            key = (k, e)
            if key not in cache:
                cache[key] = images[k] ** e
            return cache[key]

        acc = {}
        p = target.field.p
        for m, c in self.terms.items():
            t = Polynomial.constant(target.nvars, c, target.field)
            for k, e in enumerate(m):
                if e:
                    t = t * power(k, e)
            for mm, v in t.terms.items():
                acc[mm] = acc.get(mm, 0) + v
        if p:
            acc = {m: v % p for m, v in acc.items() if v % p}
        else:
            acc = {m: v for m, v in acc.items() if v}
        return Polynomial(target.nvars, acc, target.field, _raw=True)

    def remap(self, index_map: Mapping[int, int], nvars: int):
        """Move variable ``X_a`` to ``X_{index_map[a]}`` in a ring with ``nvars`` variables.

        Variables absent from ``index_map`` must not occur.
        """
        res = {}
        for m, c in self.terms.items():
            e = [0] * nvars
            for k, x in enumerate(m):
                if x:
                    e[index_map[k + 1] - 1] += x
            res[tuple(e)] = c
        return Polynomial(nvars, res, self.field, _raw=True)

    def embed(self, nvars: int, offset: int = 0):
        """View the polynomial in a larger ring, shifting variables by ``offset``."""
        return self.remap({k: k + offset for k in range(1, self.nvars + 1)}, nvars)

    def monic(self):
        if not self.terms:
            return self
        _, c = self.leading()
        return self.scale(self.field.inv(c))

    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial({format_polynomial(self)!r}, nvars={self.nvars}, field={self.field})"


def content_normalize(f: Polynomial):
    """Split ``f = c * g``.

    Over QQ, ``g`` has coprime integer coefficients and a positive grevlex
    leading coefficient.  Over GF(p), ``g`` is monic.
    """
    if f.is_zero():
        raise ValueError("content of the zero polynomial")
    _, lc = f.leading()
    if f.field.p:
        return lc, f.monic()
    coeffs = [Fraction(c) for c in f.terms.values()]
    num = 0
    den = 1
    for c in coeffs:
        num = gcd(num, c.numerator)
        den = den * c.denominator // gcd(den, c.denominator)
    content = Fraction(num, den)
    if lc < 0:
        content = -content
    g = f.scale(1 / content)
    return QQ(content), g


# -- text grammar -------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*^()]))")


class PolynomialSyntaxError(ValueError):
    pass


def _tokens(text):
    pos = 0
    text = text.rstrip()
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise PolynomialSyntaxError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        num, ident, op = m.groups()
        if num is not None:
            out.append(("num", num))
        elif ident is not None:
            out.append(("id", ident))
        else:
            out.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return out


def variable_lookup(nvars: int, names: Sequence[str] | None = None, prefix: str = "X"):
    """Map accepted identifiers to 1-indexed variables."""
    table = {f"{prefix}{k}": k for k in range(1, nvars + 1)}
    if names:
        for k, name in enumerate(names, 1):
            table[name] = k
    return table


def parse_polynomial(text: str, nvars: int, field: Field = QQ,
                     names: Sequence[str] | None = None, prefix: str = "X",
                     laurent: bool = True) -> Polynomial:
    """Parse e.g. ``"3/2*X1^2*X3 - X4^-1"``.

    ``names`` adds display names as aliases; ``prefix`` selects the indexed
    family (``X`` for the original algebra, ``T`` for the affine space).
    """
    lookup = variable_lookup(nvars, names, prefix)
    toks = _tokens(text)
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else (None, None)

    def take():
        nonlocal pos
        tok = peek()
        pos += 1
        return tok

    def factor():
        kind, val = take()
        if kind == "num":
            return Polynomial.constant(nvars, Fraction(val), field)
        if kind == "id":
            if val not in lookup:
                raise PolynomialSyntaxError(f"unknown variable {val!r}")
            e = 1
            if peek() == ("op", "^"):
                take()
                sign = 1
                if peek() in (("op", "-"), ("op", "+")):
                    sign = -1 if take()[1] == "-" else 1
                kind2, val2 = take()
                if kind2 != "num" or "/" in val2:
                    raise PolynomialSyntaxError(f"bad exponent after {val}")
                e = sign * int(val2)
                if e < 0 and not laurent:
                    raise PolynomialSyntaxError("negative exponent outside Laurent context")
            return Polynomial.var(nvars, lookup[val], field, power=e)
        if (kind, val) == ("op", "("):
            inner = expr()
            if take() != ("op", ")"):
                raise PolynomialSyntaxError("missing ')'")
            if peek() == ("op", "^"):
                take()
                kind2, val2 = take()
                if kind2 != "num" or "/" in val2:
                    raise PolynomialSyntaxError("bad exponent after ')'")
                inner = inner ** int(val2)
            return inner
        raise PolynomialSyntaxError(f"unexpected token {val!r}")

    def term():
        t = factor()
        while peek() == ("op", "*"):
            take()
            t = t * factor()
        return t

    def expr():
        sign = 1
        if peek() in (("op", "-"), ("op", "+")):
            sign = -1 if take()[1] == "-" else 1
        acc = term().scale(sign)
        while peek() in (("op", "-"), ("op", "+")):
            sign = -1 if take()[1] == "-" else 1
            acc = acc + term().scale(sign)
        return acc

    if not toks:
        raise PolynomialSyntaxError("empty polynomial")
    result = expr()
    if pos != len(toks):
        raise PolynomialSyntaxError(f"trailing input at token {toks[pos][1]!r}")
    return result


def _fmt_coeff(c):
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_monomial(m, names):
    parts = []
    for k, e in enumerate(m):
        if e == 1:
            parts.append(names[k])
        elif e:
            parts.append(f"{names[k]}^{e}")
    return "*".join(parts)


def format_polynomial(f: Polynomial, names: Sequence[str] | None = None, prefix: str = "X") -> str:
    if names is None:
        names = [f"{prefix}{k}" for k in range(1, f.nvars + 1)]
    if not f.terms:
        return "0"
    out = []
    p = f.field.p
    for m, c in f.sorted_terms():
        if p and c > p // 2 and p > 2:
            c = c - p
        neg = c < 0
        a = -c if neg else c
        mono = format_monomial(m, names)
        if not mono:
            body = _fmt_coeff(a)
        elif a == 1:
            body = mono
        else:
            body = f"{_fmt_coeff(a)}*{mono}"
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append(("- " if neg else "+ ") + body)
    return " ".join(out)


# -- formal fractions ---------------------------------------------------------

def _split_denominator(d: Polynomial):
    """Return (scalar, {variable index: exponent}, primitive remainder or None)."""
    low = d.min_exponents()
    if any(low):
        d = d.mul_term(tuple(-x for x in low), 1)
    c, g = content_normalize(d)
    mono = {k + 1: x for k, x in enumerate(low) if x}
    rest = None if g.is_constant() else g
    return c, mono, rest


class RationalExpression:
    """Element ``num / den`` of a field of fractions, never reduced by gcd.

    The denominator is kept as a product of normalized factors so that common
    denominators stay small; :attr:`den` expands it on demand.  Equality is
    cross-multiplication.
    """

    __slots__ = ("num", "factors")

    def __init__(self, num: Polynomial, den: Polynomial | None = None):
        factors = {}
        if den is not None:
            den = num._coerce(den)
            if den.is_zero():
                raise ZeroDivisionError("zero denominator")
            c, mono, rest = _split_denominator(den)
            num = num.scale(num.field.inv(c))
            for k, e in mono.items():
                factors[Polynomial.var(num.nvars, k, num.field)] = e
            if rest is not None:
                factors[rest] = factors.get(rest, 0) + 1
        self.num, self.factors = _normalize(num, factors)

    @classmethod
    def _raw(cls, num, factors):
        obj = cls.__new__(cls)
        obj.num, obj.factors = _normalize(num, factors)
        return obj

    @property
    def nvars(self):
        return self.num.nvars

    @property
    def field(self):
        return self.num.field

    @property
    def den(self) -> Polynomial:
        d = Polynomial.one(self.nvars, self.field)
        for f, e in self.factors.items():
            d = d * f ** e
        return d

    def is_zero(self):
        return self.num.is_zero()

    def is_polynomial(self):
        return not self.factors

    def _lift(self, other) -> "RationalExpression":
        if isinstance(other, RationalExpression):
            if other.nvars != self.nvars or other.field != self.field:
                raise AmbientMismatch("fractions over different rings")
            return other
        return RationalExpression(self.num._coerce(other))

    def __add__(self, other):
        other = self._lift(other)
        if not self.factors and not other.factors:
            return RationalExpression._raw(self.num + other.num, {})
        keys = set(self.factors) | set(other.factors)
        lcm = {f: max(self.factors.get(f, 0), other.factors.get(f, 0)) for f in keys}
        a = self.num
        b = other.num
        for f, e in lcm.items():
            da = e - self.factors.get(f, 0)
            db = e - other.factors.get(f, 0)
            if da:
                a = a * f ** da
            if db:
                b = b * f ** db
        return RationalExpression._raw(a + b, lcm)

    __radd__ = __add__

    def __neg__(self):
        return RationalExpression._raw(-self.num, dict(self.factors))

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RationalExpression._raw(self.num.scale(other), dict(self.factors))
        other = self._lift(other)
        factors = dict(self.factors)
        for f, e in other.factors.items():
            factors[f] = factors.get(f, 0) + e
        return RationalExpression._raw(self.num * other.num, factors)

    __rmul__ = __mul__

    def inverse(self):
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return RationalExpression(self.den, self.num)

    def __truediv__(self, other):
        return self * self._lift(other).inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** -e
        factors = {f: k * e for f, k in self.factors.items()}
        return RationalExpression._raw(self.num ** e, factors)

    def __eq__(self, other):
        if isinstance(other, (RationalExpression, Polynomial, int, Fraction)):
            return frac_equal(self, self._lift(other))
        return NotImplemented

    __hash__ = None

    def to_strings(self, names=None, prefix="X"):
        return (format_polynomial(self.num, names, prefix),
                format_polynomial(self.den, names, prefix))

    def __str__(self):
        num, den = self.to_strings()
        if den == "1":
            return num
        return f"({num})/({den})"

    __repr__ = __str__


def _normalize(num: Polynomial, factors: dict):
    factors = {f: e for f, e in factors.items() if e}
    if num.is_zero():
        return num, {}
    low = num.min_exponents()
    if any(x < 0 for x in low):
        shift = tuple(-x if x < 0 else 0 for x in low)
        num = num.mul_term(shift, 1)
        for k, s in enumerate(shift):
            if s:
                v = Polynomial.var(num.nvars, k + 1, num.field)
                factors[v] = factors.get(v, 0) + s
        low = num.min_exponents()
    if any(low):
        cancel = [0] * num.nvars
        for f in list(factors):
            if len(f.terms) == 1 and sum(next(iter(f.terms))) == 1:
                k = next(i for i, x in enumerate(next(iter(f.terms))) if x)
                c = min(low[k], factors[f])
                if c:
                    cancel[k] = c
                    factors[f] -= c
                    if not factors[f]:
                        del factors[f]
        if any(cancel):
            num = num.mul_term(tuple(-x for x in cancel), 1)
    return num, factors


def as_fraction(x, nvars=None, field=QQ) -> RationalExpression:
    if isinstance(x, RationalExpression):
        return x
    if isinstance(x, Polynomial):
        return RationalExpression(x)
    return RationalExpression(Polynomial.constant(nvars, x, field))


def frac_equal(a: RationalExpression, b: RationalExpression) -> bool:
    """Cross-multiplication test ``n1*d2 == n2*d1`` after cancelling shared factors."""
    lhs = a.num
    rhs = b.num
    for f in set(a.factors) | set(b.factors):
        ea = a.factors.get(f, 0)
        eb = b.factors.get(f, 0)
        if eb > ea:
            lhs = lhs * f ** (eb - ea)
        elif ea > eb:
            rhs = rhs * f ** (ea - eb)
    return lhs == rhs


def poly_substitute(f: Polynomial, images: Sequence) -> RationalExpression:
    """Evaluate ``f`` at fractions (one per variable).

    Negative exponents of ``f`` invert the corresponding image.
    """
    if len(images) != f.nvars:
        raise AmbientMismatch(f"{len(images)} images for {f.nvars} variables")
    imgs = [im if isinstance(im, RationalExpression) else RationalExpression(im) for im in images]
    if not imgs:
        raise AmbientMismatch("no images")
    nv, fld = imgs[0].nvars, imgs[0].field
    cache = {}

    def power(k, e):
        key = (k, e)
        if key not in cache:
            cache[key] = imgs[k] ** e
        return cache[key]

    totals = []
    for m, c in f.sorted_terms():
        num = Polynomial.constant(nv, c, fld)
        facs = {}
        for k, e in enumerate(m):
            if e:
                pw = power(k, e)
                num = num * pw.num
                for g, x in pw.factors.items():
                    facs[g] = facs.get(g, 0) + x
        totals.append((num, facs))
    lcm = {}
    for _, facs in totals:
        for g, x in facs.items():
            if x > lcm.get(g, 0):
                lcm[g] = x
    acc = Polynomial.zero(nv, fld)
    for num, facs in totals:
        for g, x in lcm.items():
            d = x - facs.get(g, 0)
            if d:
                num = num * g ** d
        acc = acc + num
    return RationalExpression._raw(acc, lcm)


def poly_arith(op: str, lhs: Polynomial, rhs):
    """Dispatch ``add | sub | mul | scale | pow``."""
    if op == "add":
        return lhs + rhs
    if op == "sub":
        return lhs - rhs
    if op == "mul":
        if not isinstance(rhs, Polynomial):
            raise TypeError("mul expects a polynomial; use scale for scalars")
        return lhs * rhs
    if op == "scale":
        return lhs.scale(rhs)
    if op == "pow":
        if rhs < 0:
            raise ValueError("pow exponent must be non-negative")
        return lhs ** rhs
    raise ValueError(f"unknown op {op!r}")


def frac_arith(op: str, lhs: RationalExpression, rhs: RationalExpression | None = None):
    if op == "add":
        return lhs + rhs
    if op == "mul":
        return lhs * rhs
    if op == "inv":
        return lhs.inverse()
    raise ValueError(f"unknown op {op!r}")


def variables(nvars: int, field: Field = QQ) -> list[Polynomial]:
    return [Polynomial.var(nvars, k, field) for k in range(1, nvars + 1)]
