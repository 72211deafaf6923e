"""The Poisson deleting derivations algorithm.

Step ``j`` (for ``j = n .. 2``) replaces the variables of ``C_{j+1}`` by

    V_i = sum_k eta_j^-k D_{j,k}(U_i) U_j^-k     (i < j),     V_i = U_i  (i >= j)

and the resulting algebra ``C_j`` has the same ``lambda`` with ``delta_j``
removed.  After the last step the bracket is log-canonical.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .poisson import (HigherDerivationTable, PoissonPresentation, bracket_eval_frac,
                      build_higher_table, eta_of, verify_class_p)
from .poly import Polynomial, RationalExpression, frac_equal, poly_substitute
from .report import FAIL, PASS, Report


class DdaError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class DdaStepRecord:
    """One step: ``source`` presents ``C_{j+1}``, ``target`` presents ``C_j``.

    ``change_of_variables[i - 1]`` is ``V_i`` as a Laurent polynomial in the
    ``U`` variables (only ``U_j`` may carry negative exponents).
    """

    j: int
    source: PoissonPresentation
    target: PoissonPresentation
    change_of_variables: tuple
    eta: object = None
    table: HigherDerivationTable | None = None

    @property
    def is_identity(self) -> bool:
        return self.table is None or self.table.is_identity()

    def inverse_change_of_variables(self) -> tuple:
        """``U_i`` as Laurent polynomials in the ``V`` variables.

        The series with ``-eta`` in place of ``eta`` inverts the step, since an
        iterative higher derivation composes additively in its parameter.
        """
        if self.is_identity:
            return self.change_of_variables
        return _change_of_variables(self.source, self.j, self.table,
                                    self.source.field.neg(self.eta))


def _change_of_variables(pres, j, table, eta):
    fld = pres.field
    inv_eta = fld.inv(eta)
    out = []
    for i in range(1, pres.n + 1):
        if i >= j:
            out.append(pres.x(i))
            continue
        acc = pres.zero()
        scale = fld(1)
        for k in range(table.bound):
            img = table.image(k, i)
            if img:
                acc = acc + img.mul_term(_unit(pres.n, j, -k), scale)
            scale = fld(scale * inv_eta)
        out.append(acc)
    return tuple(out)


def _unit(n, j, e):
    m = [0] * n
    m[j - 1] = e
    return tuple(m)


def dda_step(pres: PoissonPresentation, j: int) -> DdaStepRecord:
    """Delete ``delta_j`` from a presentation whose ``delta_l`` vanish for ``l > j``."""
    if not 2 <= j <= pres.n:
        raise IndexError(f"step {j} outside 2..{pres.n}")
    if any(pres.has_delta(l) for l in range(j + 1, pres.n + 1)):
        raise DdaError(f"step {j} requires delta_l = 0 for l > {j}")
    if not pres.has_delta(j):
        ident = tuple(pres.x(i) for i in range(1, pres.n + 1))
        return DdaStepRecord(j, pres, pres, ident)
    eta = eta_of(pres, j)
    if eta == 0:
        raise DdaError(f"eta_{j} is zero")
    table = build_higher_table(pres, j)
    cov = _change_of_variables(pres, j, table, eta)
    delta = {i: row for i, row in pres.delta.items() if i < j}
    keep = lambda d: {i: v for i, v in d.items() if i < j}
    target = pres.replace(delta=delta, eta=keep(pres.eta), higher=keep(pres.higher))
    return DdaStepRecord(j, pres, target, cov, eta, table)


@dataclass(frozen=True, eq=False)
class DdaTrace:
    """Steps for ``j = n .. 2`` and the final log-canonical presentation."""

    original: PoissonPresentation
    steps: tuple
    final: PoissonPresentation

    @property
    def n(self):
        return self.original.n

    @property
    def lam_bar(self):
        return self.final.lam

    def step(self, j) -> DdaStepRecord:
        return self.steps[self.n - j]

    @cached_property
    def expressions(self) -> tuple:
        """``T_i`` as fractions in the original variables, composed on demand."""
        pres = self.original
        current = [RationalExpression(pres.x(i)) for i in range(1, pres.n + 1)]
        for rec in self.steps:
            if rec.is_identity:
                continue
            current = [current[i - 1] if i >= rec.j else poly_substitute(v, current)
                       for i, v in enumerate(rec.change_of_variables, 1)]
        return tuple(current)


def dda_run(pres: PoissonPresentation, check: bool = True) -> DdaTrace:
    """Run every step; with ``check`` the class-P hypothesis is verified first."""
    if check:
        rep = verify_class_p(pres)
        if not rep.ok:
            raise DdaError(f"presentation is not in class P: {rep.diagnostics}")
    steps = []
    current = pres
    for j in range(pres.n, 1, -1):
        rec = dda_step(current, j)
        steps.append(rec)
        current = rec.target
    return DdaTrace(pres, tuple(steps), current)


def express_T_in_X(trace: DdaTrace, i: int) -> RationalExpression:
    if not 1 <= i <= trace.n:
        raise IndexError(f"T{i} outside 1..{trace.n}")
    return trace.expressions[i - 1]


def verify_affine_bracket(trace: DdaTrace) -> Report:
    """Certificate: ``{T_i, T_j} = lam_ij T_i T_j`` in the field of fractions."""
    T = trace.expressions
    pres = trace.original
    checked = 0
    for i in range(1, trace.n + 1):
        for j in range(i + 1, trace.n + 1):
            lhs = bracket_eval_frac(pres, T[i - 1], T[j - 1])
            rhs = (T[i - 1] * T[j - 1]) * trace.final.lam_entry(i, j)
            checked += 1
            if not frac_equal(lhs, rhs):
                return Report(FAIL, {"pairs_checked": checked},
                              {"pair": [i, j], "residual": lhs - rhs})
    return Report(PASS, {"pairs_checked": checked})
