"""Poisson matrices: bracket generator, Cauchon diagrams and stratum dimensions."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from .dda import DdaTrace, dda_run
from .linalg import bareiss_rank, nullity_by_rref
from .poisson import PoissonPresentation
from .poly import QQ, Polynomial

MAX_CELLS = 25


class GridSizeError(ValueError):
    pass


def cell_index(i, j, p):
    """Row-major 1-based variable index of cell ``(i, j)``."""
    return (i - 1) * p + j


def cell_names(m, p):
    if m <= 9 and p <= 9:
        return tuple(f"x{i}{j}" for i in range(1, m + 1) for j in range(1, p + 1))
    return tuple(f"x{i}_{j}" for i in range(1, m + 1) for j in range(1, p + 1))


def generate_matrix_poisson(m: int, p: int) -> PoissonPresentation:
    """Semiclassical limit of ``m x p`` quantum matrices, variables in row-major order.

    ``{X_ij, X_kl}`` is ``X_ij X_kl`` for ``i<k, j=l`` or ``i=k, j<l``, zero for
    ``i<k, j>l`` and ``2 X_il X_kj`` for ``i<k, j<l``.
    """
    if m < 1 or p < 1:
        raise GridSizeError("grid dimensions must be positive")
    n = m * p
    cells = [(i, j) for i in range(1, m + 1) for j in range(1, p + 1)]
    lam = [[0] * n for _ in range(n)]
    delta = {}
    for a, (i, j) in enumerate(cells):
        for b in range(a + 1, n):
            k, l = cells[b]
            if (i < k and j == l) or (i == k and j < l):
                lam[a][b], lam[b][a] = 1, -1
            elif i < k and j < l:
                img = (Polynomial.var(n, cell_index(i, l, p), QQ)
                       * Polynomial.var(n, cell_index(k, j, p), QQ)).scale(-2)
                delta.setdefault(b + 1, {})[a + 1] = img
    return PoissonPresentation(QQ, n, lam, delta, names=cell_names(m, p))


@dataclass(frozen=True)
class GridDiagram:
    m: int
    p: int
    black: frozenset

    def __post_init__(self):
        for i, j in self.black:
            if not (1 <= i <= self.m and 1 <= j <= self.p):
                raise ValueError(f"cell {(i, j)} outside {self.m}x{self.p}")

    @property
    def bitstring(self) -> str:
        return "".join("1" if (i, j) in self.black else "0"
                       for i in range(1, self.m + 1) for j in range(1, self.p + 1))

    @classmethod
    def from_bitstring(cls, m, p, bits):
        if len(bits) != m * p or set(bits) - {"0", "1"}:
            raise ValueError(f"bitstring must have {m * p} binary digits")
        black = {(i, j) for i in range(1, m + 1) for j in range(1, p + 1)
                 if bits[cell_index(i, j, p) - 1] == "1"}
        return cls(m, p, frozenset(black))

    def indices(self):
        """Row-major 1-based variable indices of the black cells."""
        return sorted(cell_index(i, j, self.p) for i, j in self.black)

    def is_cauchon(self) -> bool:
        return is_cauchon(self.m, self.p, self.black)


def is_cauchon(m, p, black) -> bool:
    """Every black cell has all cells above it black or all cells to its left black."""
    for i, j in black:
        above = all((r, j) in black for r in range(1, i))
        left = all((i, c) in black for c in range(1, j))
        if not (above or left):
            return False
    return True


def _check_size(m, p):
    if m < 1 or p < 1:
        raise GridSizeError("grid dimensions must be positive")
    if m * p > MAX_CELLS:
        raise GridSizeError(f"{m}x{p} grid exceeds the {MAX_CELLS}-cell enumeration limit")


def enumerate_diagrams(m: int, p: int) -> list:
    """All Cauchon diagrams, sorted by row-major bitstring."""
    _check_size(m, p)
    cells = [(i, j) for i in range(1, m + 1) for j in range(1, p + 1)]
    out = []
    black = set()

    def walk(pos):
        if pos == len(cells):
            out.append(GridDiagram(m, p, frozenset(black)))
            return
        walk(pos + 1)
        i, j = cells[pos]
        # cells above and to the left are already decided in row-major order
        if all((r, j) in black for r in range(1, i)) or all((i, c) in black for c in range(1, j)):
            black.add((i, j))
            walk(pos + 1)
            black.discard((i, j))

    walk(0)
    return out


@dataclass(frozen=True)
class StratumReport:
    diagram: GridDiagram
    r: int
    matrix: tuple
    rank: int
    s: int

    def to_dict(self):
        return {"diagram": self.diagram.bitstring, "r": self.r, "rank": self.rank, "s": self.s}


def build_Mw(trace: DdaTrace, w: GridDiagram) -> StratumReport:
    """Delete the rows and columns of ``w`` from ``lam_bar``; ``s`` is the kernel dimension."""
    drop = set(w.indices())
    keep = [a for a in range(1, trace.n + 1) if a not in drop]
    lam = trace.lam_bar
    M = tuple(tuple(Fraction(lam[a - 1][b - 1]) for b in keep) for a in keep)
    rank = bareiss_rank(M)
    return StratumReport(w, len(keep), M, rank, len(keep) - rank)


def strata_table(m: int, p: int, trace: DdaTrace | None = None):
    """One report per Cauchon diagram plus the count of diagrams per ``s``."""
    _check_size(m, p)
    if trace is None:
        trace = dda_run(generate_matrix_poisson(m, p), check=False)
    reports = [build_Mw(trace, w) for w in enumerate_diagrams(m, p)]
    counts = Counter(r.s for r in reports)
    return reports, dict(sorted(counts.items()))


def kernel_dimension_crosscheck(report: StratumReport) -> int:
    """Nullity through an independent rational row reduction of the transpose."""
    transpose = [list(col) for col in zip(*report.matrix)]
    return nullity_by_rref(transpose, report.r)
