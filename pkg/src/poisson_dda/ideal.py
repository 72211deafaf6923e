"""Ideals in polynomial rings: reduced Gröbner bases, membership, saturation,
elimination and the smallest Poisson ideal containing a set.

Polynomials are handled internally as ``{exponent tuple: coefficient}`` dicts
and monomial orders as flat integer sort keys, so a heap can drive reduction.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Sequence

from .poly import QQ, AmbientMismatch, Field, Polynomial, format_polynomial

DEFAULT_SPAIR_BUDGET = 10**6


class BudgetExceeded(RuntimeError):
    """A Gröbner computation processed more S-pairs than allowed."""

    def __init__(self, budget, processed):
        super().__init__(f"S-pair budget of {budget} exceeded after {processed} pairs")
        self.budget = budget
        self.processed = processed


# -- monomial orders ------------------------------------------------------------

@dataclass(frozen=True)
class MonomialOrder:
    """``grevlex``, ``lex`` or ``block`` (lex on the first ``split`` variables, then grevlex)."""

    kind: str
    nvars: int
    split: int = 0

    def __post_init__(self):
        if self.kind not in ("grevlex", "lex", "block"):
            raise ValueError(f"unknown monomial order {self.kind!r}")
        if self.kind == "block" and not 0 <= self.split <= self.nvars:
            raise ValueError(f"block split {self.split} outside 0..{self.nvars}")

    @classmethod
    def grevlex(cls, nvars):
        return cls("grevlex", nvars)

    @classmethod
    def lex(cls, nvars):
        return cls("lex", nvars)

    @classmethod
    def block(cls, nvars, split):
        return cls("block", nvars, split)

    def key(self, e) -> tuple:
        """Flat integer key; a larger key means a larger monomial."""
        if self.kind == "lex":
            return tuple(e)
        if self.kind == "grevlex":
            return (sum(e),) + tuple(-x for x in reversed(e))
        k = self.split
        rest = e[k:]
        return tuple(e[:k]) + (sum(rest),) + tuple(-x for x in reversed(rest))

    def __str__(self):
        return f"block({self.split})" if self.kind == "block" else self.kind


def _neg_key(order):
    key = order.key
    return lambda e: tuple(-x for x in key(e))


# -- coefficient helpers ----------------------------------------------------------

class _Arith:
    __slots__ = ("p", "field")

    def __init__(self, field: Field):
        self.field = field
        self.p = field.p

    def inv(self, c):
        return self.field.inv(c)

    def norm(self, c):
        return c % self.p if self.p else c


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


class _Element:
    """Basis element: monic, leading monomial cached, tail stored separately."""

    __slots__ = ("lm", "terms", "tail")

    def __init__(self, terms, lm):
        self.terms = terms
        self.lm = lm
        self.tail = [(m, c) for m, c in terms.items() if m != lm]


def _normal_form(terms: dict, basis: Sequence[_Element], order: MonomialOrder, ar: _Arith,
                 full=True) -> dict:
    """Remainder of ``terms`` on division by ``basis`` (all monic).

    With ``full`` every term is reduced; otherwise reduction stops at the first
    irreducible leading term.
    """
    if not terms:
        return {}
    nk = _neg_key(order)
    p = ar.p
    work = dict(terms)
    heap = [(nk(m), m) for m in work]
    heapq.heapify(heap)
    rem = {}
    while heap:
        _, m = heapq.heappop(heap)
        c = work.pop(m, None)
        if c is None or not c:
            continue
        for g in basis:
            if _divides(g.lm, m):
                q = _sub(m, g.lm)
                for tm, tc in g.tail:
                    mm = tuple(x + y for x, y in zip(tm, q))
                    old = work.get(mm)
                    v = (old or 0) - c * tc
                    if p:
                        v %= p
                    if v:
                        if old is None:
                            heapq.heappush(heap, (nk(mm), mm))
                        work[mm] = v
                    elif old is not None:
                        work[mm] = 0
                break
        else:
            rem[m] = c
            if not full:
                for mm, v in work.items():
                    if v:
                        rem[mm] = v
                return rem
    return rem


def _make_monic(terms, order, ar):
    lm = max(terms, key=order.key)
    inv = ar.inv(terms[lm])
    if inv == 1:
        return _Element(dict(terms), lm)
    p = ar.p
    if p:
        return _Element({m: c * inv % p for m, c in terms.items()}, lm)
    return _Element({m: QQ(c * inv) for m, c in terms.items()}, lm)


def _spoly(f: _Element, g: _Element, ar):
    L = _lcm(f.lm, g.lm)
    qf, qg = _sub(L, f.lm), _sub(L, g.lm)
    p = ar.p
    out = {}
    for m, c in f.tail:
        out[tuple(x + y for x, y in zip(m, qf))] = c
    for m, c in g.tail:
        mm = tuple(x + y for x, y in zip(m, qg))
        v = out.get(mm, 0) - c
        if p:
            v %= p
        if v:
            out[mm] = v
        else:
            out.pop(mm, None)
    return out


def _to_poly(terms, nvars, fld):
    return Polynomial(nvars, terms, fld)


# -- public types -------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GroebnerBasis:
    """Reduced Gröbner basis, sorted by decreasing leading monomial."""

    order: MonomialOrder
    polys: tuple
    nvars: int
    field: Field
    spairs: int = 0

    @property
    def _elements(self):
        cached = self.__dict__.get("_elems")
        if cached is None:
            cached = [_Element(dict(g.terms), g.leading(self.order.key)[0]) for g in self.polys]
            object.__setattr__(self, "_elems", cached)
        return cached

    def leading_monomials(self):
        return [e.lm for e in self._elements]

    def reduce(self, f: Polynomial) -> Polynomial:
        if f.nvars != self.nvars or f.field != self.field:
            raise AmbientMismatch("polynomial and ideal live in different rings")
        rem = _normal_form(f.terms, self._elements, self.order, _Arith(self.field))
        return _to_poly(rem, self.nvars, self.field)

    def contains(self, f: Polynomial) -> bool:
        if f.nvars != self.nvars or f.field != self.field:
            raise AmbientMismatch("polynomial and ideal live in different rings")
        return not _normal_form(f.terms, self._elements, self.order, _Arith(self.field), full=False)

    def is_unit(self) -> bool:
        return len(self.polys) == 1 and self.polys[0].is_constant() and bool(self.polys[0])

    def is_zero(self) -> bool:
        return not self.polys

    def __eq__(self, other):
        if not isinstance(other, GroebnerBasis):
            return NotImplemented
        return self.order == other.order and self.polys == other.polys

    def __hash__(self):
        return hash((self.order, self.polys))

    def __iter__(self):
        return iter(self.polys)

    def __len__(self):
        return len(self.polys)

    def format(self, names=None, prefix="X"):
        return [format_polynomial(g, names, prefix) for g in self.polys]


@dataclass(eq=False)
class IdealPresentation:
    """Generators of an ideal, with an optional ambient Poisson presentation.

    Zero generators are dropped.  Reduced bases are cached per order.
    """

    generators: tuple
    nvars: int
    field: Field = QQ
    ambient: object = None
    _cache: dict = dc_field(default_factory=dict, repr=False)

    def __post_init__(self):
        gens = []
        for g in self.generators:
            if not isinstance(g, Polynomial):
                raise TypeError("ideal generators must be polynomials")
            if g.nvars != self.nvars or g.field != self.field:
                raise AmbientMismatch("generator outside the ambient ring")
            if g.is_laurent():
                raise ValueError("ideal generators must have non-negative exponents")
            if g:
                gens.append(g)
        self.generators = tuple(gens)

    @classmethod
    def of(cls, generators: Iterable[Polynomial], ambient=None, nvars=None, field=None):
        """Build from generators, taking the ring from ``ambient`` when given."""
        generators = tuple(generators)
        if ambient is not None:
            nvars, field = ambient.n, ambient.field
        elif nvars is None:
            if not generators:
                raise ValueError("cannot infer the ring of an empty generator list")
            nvars, field = generators[0].nvars, generators[0].field
        return cls(generators, nvars, field or QQ, ambient)

    def groebner(self, order: MonomialOrder | None = None, spair_budget=DEFAULT_SPAIR_BUDGET):
        return groebner(self, order, spair_budget)

    def contains(self, f, spair_budget=DEFAULT_SPAIR_BUDGET):
        return membership(f, self, spair_budget)

    def is_unit(self, spair_budget=DEFAULT_SPAIR_BUDGET):
        return groebner(self, spair_budget=spair_budget).is_unit()

    def is_zero(self):
        return not self.generators

    def same_ideal(self, other, spair_budget=DEFAULT_SPAIR_BUDGET) -> bool:
        return groebner(self, spair_budget=spair_budget) == groebner(other, spair_budget=spair_budget)

    def with_generators(self, generators):
        return IdealPresentation(tuple(generators), self.nvars, self.field, self.ambient)

    def format(self, names=None, prefix="X"):
        if names is None and self.ambient is not None:
            names = self.ambient.display_names
        return [format_polynomial(g, names, prefix) for g in self.generators]


def _order_for(I, order):
    if order is None:
        return MonomialOrder.grevlex(I.nvars)
    if order.nvars != I.nvars:
        raise AmbientMismatch(f"order on {order.nvars} variables for a ring with {I.nvars}")
    return order


def groebner(I: IdealPresentation, order: MonomialOrder | None = None,
             spair_budget: int = DEFAULT_SPAIR_BUDGET) -> GroebnerBasis:
    """Reduced Gröbner basis by Buchberger's algorithm.

    Pairs are selected by smallest lcm (ties by index), and skipped by the
    coprime criterion or the chain criterion.  More than ``spair_budget``
    reduced S-pairs raises :class:`BudgetExceeded`.
    """
    order = _order_for(I, order)
    cached = I._cache.get(order)
    if cached is not None:
        return cached
    ar = _Arith(I.field)
    key = order.key
    basis: list[_Element] = []
    for g in sorted(I.generators, key=lambda g: key(g.leading(key)[0])):
        rem = _normal_form(g.terms, basis, order, ar)
        if rem:
            basis.append(_make_monic(rem, order, ar))
    if any(not any(e.lm) for e in basis):
        gb = _finish([_make_monic({(0,) * I.nvars: 1}, order, ar)], order, ar, I, 0)
        I._cache[order] = gb
        return gb

    pairs = []
    counter = 0

    def add_pairs(new_idx):
        nonlocal counter
        lm = basis[new_idx].lm
        for i in range(new_idx):
            if basis[i] is None:
                continue
            L = _lcm(basis[i].lm, lm)
            heapq.heappush(pairs, (key(L), counter, i, new_idx, L))
            counter += 1

    for idx in range(len(basis)):
        add_pairs(idx)
    done = set()
    processed = 0
    while pairs:
        _, _, i, j, L = heapq.heappop(pairs)
        done.add((i, j))
        fi, fj = basis[i], basis[j]
        if all(x == 0 or y == 0 for x, y in zip(fi.lm, fj.lm)):
            continue
        if _chain_skip(basis, i, j, L, done):
            continue
        processed += 1
        if processed > spair_budget:
            raise BudgetExceeded(spair_budget, processed - 1)
        active = [e for e in basis if e is not None]
        rem = _normal_form(_spoly(fi, fj, ar), active, order, ar)
        if not rem:
            continue
        elem = _make_monic(rem, order, ar)
        if not any(elem.lm):
            basis = [elem]
            break
        basis.append(elem)
        add_pairs(len(basis) - 1)
    gb = _finish([e for e in basis if e is not None], order, ar, I, processed)
    I._cache[order] = gb
    return gb


def _chain_skip(basis, i, j, L, done):
    """Buchberger's second criterion: some ``k`` with ``lm_k | lcm`` and both pairs treated."""
    for k, e in enumerate(basis):
        if k in (i, j) or e is None:
            continue
        if _divides(e.lm, L) and (min(i, k), max(i, k)) in done and (min(j, k), max(j, k)) in done:
            return True
    return False


def _finish(elems, order, ar, I, processed):
    """Minimalize, then inter-reduce tails; output sorted by decreasing leading monomial."""
    key = order.key
    elems = sorted(elems, key=lambda e: key(e.lm))
    minimal = []
    for e in elems:
        if not any(_divides(f.lm, e.lm) for f in minimal):
            minimal = [f for f in minimal if not _divides(e.lm, f.lm)]
            minimal.append(e)
    reduced = []
    for e in minimal:
        others = [f for f in minimal if f is not e]
        tail = _normal_form(dict(e.tail), others, order, ar)
        tail[e.lm] = 1
        reduced.append(_Element(tail, e.lm))
    reduced.sort(key=lambda e: key(e.lm), reverse=True)
    polys = tuple(_to_poly(e.terms, I.nvars, I.field) for e in reduced)
    return GroebnerBasis(order, polys, I.nvars, I.field, processed)


def membership(f: Polynomial, I: IdealPresentation, spair_budget: int = DEFAULT_SPAIR_BUDGET) -> bool:
    """Whether ``f`` lies in ``I`` (normal form against the grevlex basis is zero)."""
    if f.nvars != I.nvars or f.field != I.field:
        raise AmbientMismatch("polynomial and ideal live in different rings")
    if not f:
        return True
    if not I.generators:
        return False
    return groebner(I, spair_budget=spair_budget).contains(f)


def eliminate(I: IdealPresentation, drop: Iterable[int],
              spair_budget: int = DEFAULT_SPAIR_BUDGET) -> IdealPresentation:
    """Generators of ``I ∩ K[variables not in drop]``, in the same ambient ring."""
    drop = sorted(set(drop))
    n = I.nvars
    if any(not 1 <= d <= n for d in drop):
        raise IndexError(f"variable to eliminate outside 1..{n}")
    if not drop or I.is_zero():
        return I.with_generators(I.generators)
    keep = [a for a in range(1, n + 1) if a not in drop]
    perm = {a: pos for pos, a in enumerate(drop + keep, 1)}
    back = {pos: a for a, pos in perm.items()}
    moved = IdealPresentation(tuple(g.remap(perm, n) for g in I.generators), n, I.field)
    gb = groebner(moved, MonomialOrder.block(n, len(drop)), spair_budget)
    k = len(drop)
    kept = [g for g in gb.polys if all(not any(m[:k]) for m in g.terms)]
    return I.with_generators(g.remap(back, n) for g in kept)


def saturate(I: IdealPresentation, f: Polynomial,
             spair_budget: int = DEFAULT_SPAIR_BUDGET) -> IdealPresentation:
    """Generators of ``I : f^∞`` via an extra variable ``t`` and the relation ``1 - t f``."""
    if not f:
        raise ValueError("saturation by the zero polynomial")
    if f.nvars != I.nvars or f.field != I.field:
        raise AmbientMismatch("polynomial and ideal live in different rings")
    n = I.nvars
    if I.is_zero():
        return I.with_generators(())
    t = Polynomial.var(n + 1, 1, I.field)
    gens = [g.embed(n + 1, 1) for g in I.generators]
    gens.append(Polynomial.one(n + 1, I.field) - t * f.embed(n + 1, 1))
    big = IdealPresentation(tuple(gens), n + 1, I.field)
    gb = groebner(big, MonomialOrder.block(n + 1, 1), spair_budget)
    down = {a: a - 1 for a in range(2, n + 2)}
    kept = [g.remap(down, n) for g in gb.polys if all(m[0] == 0 for m in g.terms)]
    return I.with_generators(kept)


def poisson_closure(I: IdealPresentation, spair_budget: int = DEFAULT_SPAIR_BUDGET,
                    max_rounds: int = 10_000) -> IdealPresentation:
    """Smallest Poisson ideal containing ``I``.

    Normal forms of ``{X_i, g}`` for basis elements ``g`` are adjoined until all
    vanish.  The result's generators are its reduced grevlex basis.
    """
    from .poisson import bracket_eval

    pres = I.ambient
    if pres is None:
        raise ValueError("Poisson closure needs an ambient presentation")
    current = I
    for _ in range(max_rounds):
        gb = groebner(current, spair_budget=spair_budget)
        if gb.is_unit() or gb.is_zero():
            return current.with_generators(gb.polys)
        new = []
        for g in gb.polys:
            for i in range(1, pres.n + 1):
                h = gb.reduce(bracket_eval(pres, pres.x(i), g))
                if h:
                    new.append(h)
        if not new:
            out = current.with_generators(gb.polys)
            out._cache[gb.order] = gb
            return out
        current = current.with_generators(gb.polys + tuple(new))
    raise BudgetExceeded(max_rounds, max_rounds)


def is_bracket_stable(I: IdealPresentation, spair_budget: int = DEFAULT_SPAIR_BUDGET) -> bool:
    """Whether ``{X_i, g}`` lies in ``I`` for all variables and generators."""
    from .poisson import bracket_eval

    pres = I.ambient
    if pres is None:
        raise ValueError("bracket stability needs an ambient presentation")
    if I.is_zero():
        return True
    gb = groebner(I, spair_budget=spair_budget)
    return all(gb.contains(bracket_eval(pres, pres.x(i), g))
               for g in I.generators for i in range(1, pres.n + 1))
