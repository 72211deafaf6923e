"""Iterated Poisson-Ore presentations, brackets and the class-P checks.

A presentation fixes ``{X_i, X_j} = lam[i][j] X_i X_j + delta_i(X_j)`` for
``j < i``; ``alpha_i`` is the diagonal derivation ``X_j -> lam[i][j] X_j``.
All indices taken by public functions are 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property
from math import comb
from typing import Mapping, Sequence

from .poly import (QQ, Field, Polynomial, RationalExpression, AmbientMismatch,
                   format_polynomial)
from .report import FAIL, PASS, Report

DEFAULT_NILPOTENCE_CAP = 64


class PresentationError(ValueError):
    """A presentation violates its structural invariants."""


class EtaError(ValueError):
    pass


class NilpotenceCapExceeded(RuntimeError):
    pass


class MissingTableError(PresentationError):
    """Positive characteristic without an explicit higher derivation table."""


@dataclass(frozen=True, eq=False)
class PoissonPresentation:
    """Bracket data of ``K[X1][X2; a2, d2]_P ... [Xn; an, dn]_P``.

    ``delta`` maps ``i`` to ``{j: delta_i(X_j)}``; missing entries are zero.
    ``higher`` optionally supplies explicit tables ``i -> [ {j: D_{i,k}(X_j)} for k ]``.
    ``triangular=False`` admits bracket tables outside the Ore-tower shape so
    that defective inputs can still be checked for the Jacobi identity.
    """

    field: Field
    n: int
    lam: tuple
    delta: Mapping[int, Mapping[int, Polynomial]] = dc_field(default_factory=dict)
    eta: Mapping[int, object] = dc_field(default_factory=dict)
    higher: Mapping[int, Sequence[Mapping[int, Polynomial]]] = dc_field(default_factory=dict)
    nilpotence_cap: int = DEFAULT_NILPOTENCE_CAP
    names: tuple | None = None
    triangular: bool = True

    def __post_init__(self):
        fld, n = self.field, self.n
        if n < 1:
            raise PresentationError("need at least one variable")
        lam = tuple(tuple(fld(c) for c in row) for row in self.lam)
        if len(lam) != n or any(len(row) != n for row in lam):
            raise PresentationError(f"lambda must be {n}x{n}")
        for a in range(n):
            if lam[a][a] != 0:
                raise PresentationError("lambda not skew-symmetric: nonzero diagonal")
            for b in range(a):
                if fld(lam[a][b] + lam[b][a]) != 0:
                    raise PresentationError(
                        f"lambda not skew-symmetric at ({a + 1},{b + 1})")
        object.__setattr__(self, "lam", lam)

        delta = {}
        for i, images in dict(self.delta).items():
            if not 1 <= i <= n:
                raise PresentationError(f"delta index {i} outside 1..{n}")
            row = {}
            for j, img in images.items():
                if not isinstance(img, Polynomial):
                    img = Polynomial.constant(n, img, fld)
                if img.nvars != n or img.field != fld:
                    raise PresentationError(f"delta_{i}(X{j}) lives in the wrong ring")
                if self.triangular:
                    if j >= i:
                        raise PresentationError(
                            f"delta references later variable: delta_{i}(X{j})")
                    if img.is_laurent() or any(v >= i for v in img.variables()):
                        raise PresentationError(
                            f"delta_{i}(X{j}) must be a polynomial in X1..X{i - 1}")
                elif not 1 <= j <= n or j == i:
                    raise PresentationError(f"bad delta entry delta_{i}(X{j})")
                if img:
                    row[j] = img
            if row:
                delta[i] = row
        object.__setattr__(self, "delta", delta)

        eta = {}
        for i, v in dict(self.eta).items():
            v = fld(v)
            if v == 0:
                raise PresentationError(f"eta_{i} must be nonzero")
            eta[int(i)] = v
        object.__setattr__(self, "eta", eta)

        higher = {}
        for i, table in dict(self.higher).items():
            rows = []
            for k, row in enumerate(table):
                clean = {}
                for j, img in row.items():
                    if not isinstance(img, Polynomial):
                        img = Polynomial.constant(n, img, fld)
                    if img:
                        clean[j] = img
                rows.append(clean)
            for j in range(1, i):
                xj = Polynomial.var(n, j, fld)
                if rows and rows[0].get(j, Polynomial.zero(n, fld)) != xj:
                    raise PresentationError(f"higher table {i}: D_0 must be the identity")
                if len(rows) > 1 and rows[1].get(j, Polynomial.zero(n, fld)) != self.delta.get(i, {}).get(j, Polynomial.zero(n, fld)):
                    raise PresentationError(f"higher table {i}: D_1 must equal delta_{i}")
            if not rows:
                raise PresentationError(f"higher table {i} is empty")
            higher[int(i)] = tuple(rows)
        object.__setattr__(self, "higher", higher)
        if self.nilpotence_cap < 1:
            raise PresentationError("nilpotence_cap must be positive")
        if self.names is not None:
            names = tuple(self.names)
            if len(names) != n or len(set(names)) != n:
                raise PresentationError("names must be n distinct strings")
            object.__setattr__(self, "names", names)

    # -- accessors ---------------------------------------------------------
    @property
    def display_names(self):
        return self.names or tuple(f"X{k}" for k in range(1, self.n + 1))

    def lam_entry(self, i, j):
        return self.lam[i - 1][j - 1]

    def x(self, i) -> Polynomial:
        return Polynomial.var(self.n, i, self.field)

    def zero(self) -> Polynomial:
        return Polynomial.zero(self.n, self.field)

    def one(self) -> Polynomial:
        return Polynomial.one(self.n, self.field)

    def delta_image(self, i, j) -> Polynomial:
        return self.delta.get(i, {}).get(j) or self.zero()

    def has_delta(self, i) -> bool:
        return bool(self.delta.get(i))

    def is_log_canonical(self) -> bool:
        return not self.delta

    def replace(self, **changes) -> "PoissonPresentation":
        kw = dict(field=self.field, n=self.n, lam=self.lam, delta=self.delta, eta=self.eta,
                  higher=self.higher, nilpotence_cap=self.nilpotence_cap, names=self.names,
                  triangular=self.triangular)
        kw.update(changes)
        return PoissonPresentation(**kw)

    def __eq__(self, other):
        if not isinstance(other, PoissonPresentation):
            return NotImplemented
        return (self.field == other.field and self.n == other.n and self.lam == other.lam
                and self.delta == other.delta and self.eta == other.eta
                and self.higher == other.higher and self.nilpotence_cap == other.nilpotence_cap
                and self.names == other.names)

    __hash__ = None

    def format(self, f: Polynomial) -> str:
        return format_polynomial(f, self.display_names)

    # -- cached structure --------------------------------------------------
    @cached_property
    def _lam_sparse(self):
        return [{b: c for b, c in enumerate(row) if c} for row in self.lam]

    @cached_property
    def _delta_pairs(self):
        return [(i - 1, j - 1, img) for i, row in sorted(self.delta.items())
                for j, img in sorted(row.items())]

    def generator_bracket(self, i, j) -> Polynomial:
        """``{X_i, X_j}``."""
        return bracket_eval(self, self.x(i), self.x(j))

    def alpha(self, i, f: Polynomial) -> Polynomial:
        """``alpha_i(f)``: scales ``X^e`` by ``sum_l lam[i][l] e_l``."""
        row = self._lam_sparse[i - 1]
        p = self.field.p
        res = {}
        for m, c in f.terms.items():
            w = 0
            for b, e in enumerate(m):
                if e and b in row:
                    w += row[b] * e
            if w:
                v = c * w
                if p:
                    v %= p
                if v:
                    res[m] = v
        return Polynomial(self.n, res, self.field, _raw=True)

    def delta_apply(self, i, f: Polynomial) -> Polynomial:
        """``delta_i(f)`` by the chain rule."""
        acc = self.zero()
        for j, img in self.delta.get(i, {}).items():
            d = f.derivative(j)
            if d:
                acc = acc + d * img
        return acc


def _support(m):
    return [(k, e) for k, e in enumerate(m) if e]


def bracket_eval(pres: PoissonPresentation, f: Polynomial, g: Polynomial) -> Polynomial:
    """Poisson bracket of two (Laurent) polynomials."""
    if f.nvars != pres.n or g.nvars != pres.n:
        raise AmbientMismatch(f"bracket expects {pres.n} variables")
    if f.field != pres.field or g.field != pres.field:
        raise AmbientMismatch("bracket operands over the wrong field")
    p = pres.field.p
    lam = pres._lam_sparse
    res = {}
    if f.terms and g.terms:
        gs = [(m2, c2, _support(m2)) for m2, c2 in g.terms.items()]
        for m1, c1 in f.terms.items():
            s1 = _support(m1)
            vec = {}
            for a, ea in s1:
                for b, lab in lam[a].items():
                    vec[b] = vec.get(b, 0) + ea * lab
            if not vec:
                continue
            for m2, c2, s2 in gs:
                w = 0
                for b, eb in s2:
                    if b in vec:
                        w += vec[b] * eb
                if w:
                    m = tuple([x + y for x, y in zip(m1, m2)])
                    res[m] = res.get(m, 0) + c1 * c2 * w
    if p:
        res = {m: v % p for m, v in res.items() if v % p}
    else:
        res = {m: v for m, v in res.items() if v}
    out = Polynomial(pres.n, res, pres.field, _raw=True)
    if pres._delta_pairs:
        fd = {}
        gd = {}
        for i, j, img in pres._delta_pairs:
            for k in (i, j):
                if k not in fd:
                    fd[k] = f.derivative(k + 1)
                    gd[k] = g.derivative(k + 1)
            cross = fd[i] * gd[j] - fd[j] * gd[i]
            if cross:
                out = out + cross * img
    return out


def bracket_frac_poly(pres, F: RationalExpression, g: Polynomial) -> RationalExpression:
    """``{N/D, g}`` by the quotient rule over the factored denominator."""
    out = RationalExpression(bracket_eval(pres, F.num, g))
    base = RationalExpression._raw(out.num, dict(F.factors))
    total = base
    for fac, e in F.factors.items():
        br = bracket_eval(pres, fac, g)
        if br:
            facs = dict(F.factors)
            facs[fac] = facs[fac] + 1
            total = total - RationalExpression._raw((F.num * br).scale(e), facs)
    return total


def bracket_eval_frac(pres: PoissonPresentation, F, G) -> RationalExpression:
    """Bracket in the field of fractions."""
    F = F if isinstance(F, RationalExpression) else RationalExpression(F)
    G = G if isinstance(G, RationalExpression) else RationalExpression(G)
    if not F.factors and not G.factors:
        return RationalExpression(bracket_eval(pres, F.num, G.num))
    # {F, M/E} = {F, M}/E - sum_l e_l M {F, h_l} / (h_l E)
    head = bracket_frac_poly(pres, F, G.num)
    total = RationalExpression._raw(head.num, _merge(head.factors, G.factors))
    for h, e in G.factors.items():
        br = bracket_frac_poly(pres, F, h)
        if br.num:
            facs = _merge(br.factors, G.factors)
            facs[h] = facs.get(h, 0) + 1
            total = total - RationalExpression._raw((G.num * br.num).scale(e), facs)
    return total


def _merge(a, b):
    out = dict(a)
    for f, e in b.items():
        out[f] = out.get(f, 0) + e
    return out


# -- verification ------------------------------------------------------------

def jacobi_residual(pres, i, j, k) -> Polynomial:
    xi, xj, xk = pres.x(i), pres.x(j), pres.x(k)
    return (bracket_eval(pres, xi, bracket_eval(pres, xj, xk))
            + bracket_eval(pres, xj, bracket_eval(pres, xk, xi))
            + bracket_eval(pres, xk, bracket_eval(pres, xi, xj)))


def verify_poisson_axioms(pres: PoissonPresentation) -> Report:
    """Jacobi on generator triples, then Oh's conditions for every extension step."""
    n = pres.n
    brackets = {(a, b): pres.generator_bracket(a, b) for a in range(1, n + 1)
                for b in range(1, n + 1)}
    triples = 0
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            for k in range(j + 1, n + 1):
                triples += 1
                res = (bracket_eval(pres, pres.x(i), brackets[j, k])
                       + bracket_eval(pres, pres.x(j), brackets[k, i])
                       + bracket_eval(pres, pres.x(k), brackets[i, j]))
                if res:
                    return Report(FAIL, {"triples_checked": triples},
                                  {"clause": "jacobi", "triple": [i, j, k], "residual": res})
    pairs = 0
    for i in range(2, n + 1):
        for p in range(1, i):
            for q in range(p + 1, i):
                pairs += 1
                a, b = pres.x(p), pres.x(q)
                ab = brackets[p, q]
                al_a, al_b = pres.alpha(i, a), pres.alpha(i, b)
                res = pres.alpha(i, ab) - bracket_eval(pres, al_a, b) - bracket_eval(pres, a, al_b)
                if res:
                    return Report(FAIL, {"pairs_checked": pairs},
                                  {"clause": "alpha_poisson_derivation", "index": i,
                                   "pair": [p, q], "residual": res})
                if not pres.has_delta(i):
                    continue
                de_a, de_b = pres.delta_image(i, p), pres.delta_image(i, q)
                res = (pres.delta_apply(i, ab) - bracket_eval(pres, de_a, b)
                       - bracket_eval(pres, a, de_b) - al_a * de_b + de_a * al_b)
                if res:
                    return Report(FAIL, {"pairs_checked": pairs},
                                  {"clause": "delta_poisson_alpha_derivation", "index": i,
                                   "pair": [p, q], "residual": res})
    return Report(PASS, {"triples_checked": triples, "pairs_checked": pairs})


def infer_eta(pres: PoissonPresentation, i: int):
    """Solve ``(delta_i alpha_i - alpha_i delta_i)(X_j) = eta * delta_i(X_j)`` for ``eta``."""
    if not pres.has_delta(i):
        raise EtaError(f"delta_{i} is zero; eta is undefined")
    if pres.field.p:
        raise EtaError("eta must be supplied in positive characteristic")
    eta = None
    for j, img in sorted(pres.delta[i].items()):
        comm = img.scale(pres.lam_entry(i, j)) - pres.alpha(i, img)
        m, c = img.leading()
        cand = pres.field.div(comm.terms.get(m, 0), c)
        if comm != img.scale(cand):
            raise EtaError(f"no consistent eta for delta_{i}: commutator is not a multiple on X{j}")
        if eta is None:
            eta = cand
        elif cand != eta:
            raise EtaError(f"no consistent eta for delta_{i}: {eta} on one generator, {cand} on X{j}")
    if eta == 0:
        raise EtaError(f"eta is zero for delta_{i}")
    return pres.field(eta)


def eta_of(pres, i):
    """Supplied eta_i, otherwise the inferred one."""
    if i in pres.eta:
        return pres.eta[i]
    return infer_eta(pres, i)


@dataclass(frozen=True, eq=False)
class HigherDerivationTable:
    """Values ``D_{i,k}(X_j)`` for ``j < i`` and ``k < bound``; zero beyond."""

    index: int
    rows: tuple
    nvars: int
    field: Field = QQ

    @property
    def bound(self) -> int:
        return len(self.rows)

    def image(self, k, j) -> Polynomial:
        """``D_k(X_j)``; variables at or above the index are D-constants."""
        if j >= self.index:
            return Polynomial.var(self.nvars, j, self.field) if k == 0 else Polynomial.zero(self.nvars, self.field)
        if k >= self.bound:
            return Polynomial.zero(self.nvars, self.field)
        return self.rows[k].get(j) or Polynomial.zero(self.nvars, self.field)

    def is_identity(self):
        return self.bound == 1

    @cached_property
    def _gen_series(self):
        out = {}
        for j in range(1, self.index):
            out[j] = [self.image(k, j) for k in range(self.bound)]
        return out

    def series(self, f: Polynomial) -> list:
        """``[D_0 f, D_1 f, ...]`` up to the last nonzero entry."""
        acc = []
        cache = {}
        for m, c in f.terms.items():
            s = [Polynomial.constant(self.nvars, c, self.field)]
            for k, e in enumerate(m):
                j = k + 1
                if not e:
                    continue
                if j >= self.index:
                    s = [t * Polynomial.var(self.nvars, j, self.field, power=e) for t in s]
                    continue
                if e < 0:
                    raise ValueError("higher derivation of a negative power")
                key = (j, e)
                if key not in cache:
                    cache[key] = _series_pow(self._gen_series[j], e)
                s = _series_mul(s, cache[key])
            for k, t in enumerate(s):
                if k < len(acc):
                    acc[k] = acc[k] + t
                else:
                    acc.append(t)
        while acc and acc[-1].is_zero():
            acc.pop()
        return acc

    def apply(self, k, f):
        s = self.series(f)
        return s[k] if k < len(s) else Polynomial.zero(self.nvars, self.field)


def _series_mul(a, b):
    out = [None] * (len(a) + len(b) - 1)
    for x, u in enumerate(a):
        if not u:
            continue
        for y, v in enumerate(b):
            if not v:
                continue
            t = u * v
            out[x + y] = t if out[x + y] is None else out[x + y] + t
    zero = Polynomial.zero(a[0].nvars, a[0].field)
    return [t if t is not None else zero for t in out]


def _series_pow(a, e):
    out = [Polynomial.one(a[0].nvars, a[0].field)]
    for _ in range(e):
        out = _series_mul(out, a)
    return out


def build_higher_table(pres: PoissonPresentation, i: int) -> HigherDerivationTable:
    """Explicit table if supplied, else ``delta_i^k / k!`` (characteristic zero)."""
    n, fld = pres.n, pres.field
    if i in pres.higher:
        rows = list(pres.higher[i])
        while len(rows) > 1 and not any(rows[-1].values()):
            rows.pop()
        if len(rows) > pres.nilpotence_cap:
            raise NilpotenceCapExceeded(
                f"explicit table for {i} has {len(rows)} rows, cap is {pres.nilpotence_cap}")
        return HigherDerivationTable(i, tuple(rows), n, fld)
    identity = {j: pres.x(j) for j in range(1, i)}
    if not pres.has_delta(i):
        return HigherDerivationTable(i, (identity,), n, fld)
    if fld.p:
        raise MissingTableError(
            f"explicit higher table for {i} required in positive characteristic")
    rows = [identity]
    current = identity
    k = 0
    while True:
        k += 1
        if k >= pres.nilpotence_cap:
            raise NilpotenceCapExceeded(
                f"delta_{i} not nilpotent within cap {pres.nilpotence_cap}")
        nxt = {}
        for j, v in current.items():
            w = pres.delta_apply(i, v)
            if w:
                nxt[j] = w.scale(fld.inv(fld(k)))
        if not nxt:
            break
        rows.append(nxt)
        current = nxt
    return HigherDerivationTable(i, tuple(rows), n, fld)


def _fail(clause, **diag):
    diag["clause"] = clause
    return Report(FAIL, {}, diag)


def verify_class_p(pres: PoissonPresentation) -> Report:
    """Check that every ``delta_i`` extends to an iterative, locally nilpotent higher
    ``(eta_i, alpha_i)``-skew Poisson derivation compatible with the later ``alpha``."""
    n, fld = pres.n, pres.field
    etas, bounds, tables = {}, {}, {}
    for i in range(2, n + 1):
        if pres.has_delta(i) or i in pres.higher:
            try:
                etas[i] = eta_of(pres, i)
            except EtaError as exc:
                return _fail("eta", index=i, message=str(exc))
        try:
            table = build_higher_table(pres, i)
        except NilpotenceCapExceeded as exc:
            return _fail("nilpotence", index=i, message=str(exc))
        except MissingTableError as exc:
            return _fail("higher_table", index=i, message=str(exc))
        tables[i] = table
        bounds[i] = table.bound
        if table.is_identity():
            continue
        N = table.bound
        eta = etas[i]
        for j in range(1, i):
            dlam = pres.lam_entry(i, j)
            for l in range(N):
                s = table.series(table.image(l, j))
                for k in range(max(len(s), N - l)):
                    lhs = s[k] if k < len(s) else pres.zero()
                    rhs = table.image(k + l, j).scale(comb(k + l, k))
                    if lhs != rhs:
                        return _fail("iterative", index=i, generator=j, k=k, l=l,
                                     residual=lhs - rhs)
            for k in range(N):
                dk = table.image(k, j)
                res = dk.scale(dlam) - pres.alpha(i, dk) - dk.scale(fld(k) * eta)
                if res:
                    return _fail("eta_skew", index=i, generator=j, k=k, residual=res)
        for p in range(1, i):
            for q in range(p + 1, i):
                ab = pres.generator_bracket(p, q)
                lhs_series = table.series(ab)
                top = max(len(lhs_series), 2 * N - 1)
                for m in range(top):
                    lhs = lhs_series[m] if m < len(lhs_series) else pres.zero()
                    rhs = pres.zero()
                    for l in range(max(0, m - N + 1), min(m, N - 1) + 1):
                        da, db = table.image(l, p), table.image(l, q)
                        ea, eb = table.image(m - l, p), table.image(m - l, q)
                        rhs = rhs + bracket_eval(pres, da, eb)
                        if l:
                            rhs = rhs + (pres.alpha(i, ea) * db - da * pres.alpha(i, eb)).scale(l)
                    if lhs != rhs:
                        return _fail("higher_skew_poisson", index=i, pair=[p, q], k=m,
                                     residual=lhs - rhs)
    for j, table in tables.items():
        if table.is_identity():
            continue
        for i in range(j + 1, n + 1):
            lij = pres.lam_entry(i, j)
            for l in range(1, j):
                lil = pres.lam_entry(i, l)
                for k in range(table.bound):
                    dk = table.image(k, l)
                    res = pres.alpha(i, dk) - dk.scale(lil) - dk.scale(fld(k) * lij)
                    if res:
                        return _fail("alpha_compatibility", index=i, table=j,
                                     generator=l, k=k, residual=res)
    return Report(PASS, {"eta": etas, "bounds": bounds})
