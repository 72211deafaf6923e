"""Small presentations used throughout the tests, the CLI and the README."""

from __future__ import annotations

from .poisson import PoissonPresentation
from .poly import QQ, Field, parse_polynomial


def _poly(text, n, field=QQ):
    return parse_polynomial(text, n, field)


def four_variable_example(field: Field = QQ, explicit_table: bool = False) -> PoissonPresentation:
    """``B[X4; alpha, delta]_P`` over the affine 3-space ``{X3, X1} = X3 X1``, ``{X3, X2} = X3 X2``,
    with ``alpha = -X1 d/dX1 - X2 d/dX2`` and ``delta = (X1 + X2) d/dX3``."""
    lam = [[0, 0, -1, 1],
           [0, 0, -1, 1],
           [1, 1, 0, 0],
           [-1, -1, 0, 0]]
    delta = {4: {3: _poly("X1 + X2", 4, field)}}
    kw = {}
    if explicit_table:
        kw["higher"] = {4: [{1: _poly("X1", 4, field), 2: _poly("X2", 4, field),
                             3: _poly("X3", 4, field)},
                            {3: _poly("X1 + X2", 4, field)}]}
        kw["eta"] = {4: 1}
    return PoissonPresentation(field, 4, lam, delta, **kw)


def three_variable_example(field: Field = QQ) -> PoissonPresentation:
    """``C[X][Y; beta, Delta]_P[Z; alpha, delta]_P`` with
    ``{Y,X} = -XY + 1``, ``{Z,X} = XZ + Y^2``, ``{Z,Y} = -YZ``."""
    lam = [[0, 1, -1],
           [-1, 0, 1],
           [1, -1, 0]]
    delta = {2: {1: _poly("1", 3, field)}, 3: {1: _poly("X2^2", 3, field)}}
    return PoissonPresentation(field, 3, lam, delta, names=("X", "Y", "Z"))


def affine_space(lam, field: Field = QQ) -> PoissonPresentation:
    return PoissonPresentation(field, len(lam), lam)


def affine_plane(field: Field = QQ) -> PoissonPresentation:
    """``{X1, X2} = X1 X2``."""
    return affine_space([[0, 1], [-1, 0]], field)


def jacobi_counterexample() -> PoissonPresentation:
    """``{X3,X1} = X3 X1``, ``{X3,X2} = 0``, ``{X2,X1} = X3``: not a Poisson bracket."""
    lam = [[0, 0, -1],
           [0, 0, 0],
           [1, 0, 0]]
    return PoissonPresentation(QQ, 3, lam, {2: {1: _poly("X3", 3)}}, triangular=False)
