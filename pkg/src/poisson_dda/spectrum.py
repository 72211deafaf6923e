"""The canonical embedding of Poisson prime ideals along a deleting-derivations trace.

Every result here is conditional on the caller's assertion that the input
ideal is prime; bracket stability is verified, primality never is.
"""

from __future__ import annotations

from dataclasses import dataclass

from .dda import DdaStepRecord, DdaTrace
from .ideal import (DEFAULT_SPAIR_BUDGET, IdealPresentation, eliminate, groebner,
                    is_bracket_stable, membership, poisson_closure, saturate)
from .poly import Polynomial, format_polynomial


class EmbeddingError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class PrimeCandidate:
    """A Poisson ideal the caller asserts to be prime.

    ``assert_poisson`` is the verified bracket-stability flag.
    """

    ideal: IdealPresentation
    assert_prime: bool
    assert_poisson: bool

    @classmethod
    def make(cls, ideal: IdealPresentation, assert_prime: bool = True,
             spair_budget: int = DEFAULT_SPAIR_BUDGET) -> "PrimeCandidate":
        if ideal.ambient is None:
            raise EmbeddingError("prime candidate needs an ambient presentation")
        if not ideal.is_zero() and groebner(ideal, spair_budget=spair_budget).is_unit():
            raise EmbeddingError("the unit ideal is not prime")
        if not is_bracket_stable(ideal, spair_budget):
            raise EmbeddingError("ideal is not a Poisson ideal (not bracket-stable)")
        return cls(ideal, assert_prime, True)

    @property
    def ambient(self):
        return self.ideal.ambient

    def basis(self, spair_budget=DEFAULT_SPAIR_BUDGET):
        return groebner(self.ideal, spair_budget=spair_budget)

    def contains(self, f, spair_budget=DEFAULT_SPAIR_BUDGET) -> bool:
        return membership(f, self.ideal, spair_budget)

    def same_ideal(self, other, spair_budget=DEFAULT_SPAIR_BUDGET) -> bool:
        return self.ideal.same_ideal(other.ideal, spair_budget)


@dataclass(frozen=True)
class StepOutcome:
    j: int
    branch: int
    ideal: IdealPresentation


@dataclass(frozen=True, eq=False)
class EmbeddingResult:
    """``ideal`` lives in the final log-canonical ring; ``branch[j]`` is 1 for the quotient case."""

    ideal: IdealPresentation
    branch: dict
    diagram: tuple
    history: tuple = ()

    def generators(self, prefix="T"):
        gb = groebner(self.ideal)
        return [format_polynomial(g, None, prefix) for g in gb.polys]

    def branch_word(self):
        """``epsilon_n ... epsilon_2`` as a string."""
        return "".join(str(self.branch[j]) for j in sorted(self.branch, reverse=True))

    def to_dict(self, prefix="T"):
        return {"generators": self.generators(prefix),
                "branch": {str(j): self.branch[j] for j in sorted(self.branch, reverse=True)},
                "branch_word": self.branch_word(),
                "diagram": list(self.diagram),
                "conditional_on_primality": True}


def _require(P: PrimeCandidate, pres):
    if not P.assert_prime:
        raise EmbeddingError("the embedding is defined on primes; pass assert_prime=True")
    if not P.assert_poisson:
        raise EmbeddingError("ideal is not a Poisson ideal (not bracket-stable)")
    if P.ambient != pres:
        raise EmbeddingError("ideal does not live in the expected presentation")


def _laurent_to_t(f: Polynomial, j: int, t_index: int, nvars: int) -> Polynomial:
    """Rewrite ``U_j^-k`` as ``t^k`` and embed into a ring with ``nvars`` variables."""
    terms = {}
    for m, c in f.terms.items():
        e = list(m) + [0] * (nvars - len(m))
        if e[j - 1] < 0:
            e[t_index - 1] = -e[j - 1]
            e[j - 1] = 0
        terms[tuple(e)] = c
    return Polynomial(nvars, terms, f.field)


def _contract(ideal: IdealPresentation, images, j: int, target, spair_budget):
    """Contract ``ideal`` (in ``n`` variables, ``X_j`` inverted) along ``Y_i = images[i]``.

    ``images[i]`` is Laurent in ``X_j`` only; ``Y_i = X_i`` for ``i >= j``.  The
    result is an ideal in the ``Y`` variables living in ``target``.
    """
    n = ideal.nvars
    fld = ideal.field
    big = n + j  # X_1..X_n, t, Y_1..Y_{j-1}
    t = n + 1
    gens = [g.embed(big) for g in saturate(ideal, ideal_var(ideal, j), spair_budget).generators]
    gens.append(Polynomial.var(big, t, fld) * Polynomial.var(big, j, fld) - Polynomial.one(big, fld))
    for i in range(1, j):
        gens.append(Polynomial.var(big, n + 1 + i, fld) - _laurent_to_t(images[i - 1], j, t, big))
    J = IdealPresentation(tuple(gens), big, fld)
    E = eliminate(J, list(range(1, j)) + [t], spair_budget)
    rename = {n + 1 + i: i for i in range(1, j)}
    rename.update({l: l for l in range(j, n + 1)})
    out = IdealPresentation(tuple(g.remap(rename, n) for g in E.generators), n, fld, target)
    return out.with_generators(groebner(out, spair_budget=spair_budget).polys)


def ideal_var(ideal: IdealPresentation, i: int) -> Polynomial:
    return Polynomial.var(ideal.nvars, i, ideal.field)


def _rename(ideal: IdealPresentation, target) -> IdealPresentation:
    """Same generators read in the ring presented by ``target`` (indices unchanged)."""
    return IdealPresentation(ideal.generators, ideal.nvars, ideal.field, target)


def phi_step(P: PrimeCandidate, step: DdaStepRecord,
             spair_budget: int = DEFAULT_SPAIR_BUDGET):
    """Map a Poisson prime of ``C_{j+1}`` to one of ``C_j``; returns ``(prime, branch)``."""
    _require(P, step.source)
    j = step.j
    U_j = ideal_var(P.ideal, j)
    if not P.contains(U_j, spair_budget):
        if step.is_identity:
            out = _rename(P.ideal, step.target)
        else:
            out = _contract(P.ideal, step.change_of_variables, j, step.target, spair_budget)
        return PrimeCandidate(out, P.assert_prime, True), 0
    closure = poisson_closure(IdealPresentation.of([U_j], step.source), spair_budget)
    joined = P.ideal.with_generators(P.ideal.generators + closure.generators)
    gb = groebner(joined, spair_budget=spair_budget)
    out = IdealPresentation(gb.polys, P.ideal.nvars, P.ideal.field, step.target)
    return PrimeCandidate(out, P.assert_prime, True), 1


def phi(P: PrimeCandidate, trace: DdaTrace,
        spair_budget: int = DEFAULT_SPAIR_BUDGET) -> EmbeddingResult:
    """Fold :func:`phi_step` over ``j = n .. 2``."""
    _require(P, trace.original)
    current = P
    branch = {}
    history = []
    for rec in trace.steps:
        current, eps = phi_step(current, rec, spair_budget)
        branch[rec.j] = eps
        history.append(StepOutcome(rec.j, eps, current.ideal))
    final = _rename(current.ideal, trace.final)
    gb = groebner(final, spair_budget=spair_budget)
    w = tuple(i for i in range(1, trace.n + 1) if gb.contains(ideal_var(final, i)))
    return EmbeddingResult(final, branch, w, tuple(history))


def stratum_of(P: PrimeCandidate, trace: DdaTrace,
               spair_budget: int = DEFAULT_SPAIR_BUDGET) -> tuple:
    """Indices ``i`` with ``T_i`` in the image of ``P``."""
    return phi(P, trace, spair_budget).diagram


@dataclass(frozen=True, eq=False)
class MembershipResult:
    member: bool
    failing_step: int | None
    preimage: IdealPresentation | None
    branch: dict

    def __bool__(self):
        return self.member

    def certificate(self, names=None, prefix="X"):
        out = {"member": self.member, "conditional_on_primality": True,
               "branch": {str(j): self.branch[j] for j in sorted(self.branch)}}
        if self.member:
            gb = groebner(self.preimage)
            out["preimage"] = [format_polynomial(g, names, prefix) for g in gb.polys]
        else:
            out["failing_step"] = self.failing_step
        return out


def step_kernel(step: DdaStepRecord, spair_budget: int = DEFAULT_SPAIR_BUDGET) -> IdealPresentation:
    """``N_j``: the Poisson closure of ``U_j`` in ``C_{j+1}``, read in ``C_j``."""
    closure = poisson_closure(IdealPresentation.of([ideal_var_of(step.source, step.j)], step.source),
                              spair_budget)
    return _rename(closure, step.target)


def ideal_var_of(pres, i):
    return Polynomial.var(pres.n, i, pres.field)


def im_phi_membership(Q: PrimeCandidate, trace: DdaTrace,
                      spair_budget: int = DEFAULT_SPAIR_BUDGET) -> MembershipResult:
    """Decide whether ``Q`` lies in the image of the canonical embedding.

    The walk runs ``j = 2 .. n``, pulling ``Q`` back one step at a time.  At
    step ``j`` either ``V_j`` is outside the current ideal or ``N_j`` is inside
    it; otherwise the walk stops with ``j`` as the certificate.
    """
    _require(Q, trace.final)
    current = Q.ideal
    branch = {}
    for rec in reversed(trace.steps):
        j = rec.j
        current = _rename(current, rec.target)
        V_j = ideal_var(current, j)
        if not membership(V_j, current, spair_budget):
            branch[j] = 0
            if rec.is_identity:
                current = _rename(current, rec.source)
            else:
                current = _contract(current, rec.inverse_change_of_variables(), j,
                                    rec.source, spair_budget)
            continue
        N = step_kernel(rec, spair_budget)
        if not all(membership(g, current, spair_budget) for g in N.generators):
            return MembershipResult(False, j, None, branch)
        branch[j] = 1
        current = _rename(current, rec.source)
    return MembershipResult(True, None, _rename(current, trace.original), branch)
