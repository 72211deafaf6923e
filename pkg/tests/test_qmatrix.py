from fractions import Fraction

import pytest

from poisson_dda.dda import dda_run, verify_affine_bracket
from poisson_dda.poisson import bracket_eval, verify_class_p, verify_poisson_axioms
from poisson_dda.poly import parse_polynomial
from poisson_dda.qmatrix import (GridDiagram, GridSizeError, build_Mw, enumerate_diagrams,
                                 generate_matrix_poisson, is_cauchon, kernel_dimension_crosscheck,
                                 strata_table)

from oracles import brute_force_count, poly_bernoulli

SHAPES = [(m, p) for m in range(1, 5) for p in range(1, 5)]


# -- bracket table ----------------------------------------------------------------------------

def test_two_by_two_brackets():
    pres = generate_matrix_poisson(2, 2)
    P = lambda t: parse_polynomial(t, 4, pres.field, pres.names)
    assert bracket_eval(pres, P("x11"), P("x12")) == P("x11*x12")
    assert bracket_eval(pres, P("x11"), P("x21")) == P("x11*x21")
    assert bracket_eval(pres, P("x12"), P("x21")).is_zero()
    assert bracket_eval(pres, P("x11"), P("x22")) == P("2*x12*x21")
    assert bracket_eval(pres, P("x12"), P("x22")) == P("x12*x22")


def test_generator_rejects_empty_grid():
    with pytest.raises(GridSizeError):
        generate_matrix_poisson(0, 2)


@pytest.mark.parametrize("m,p", SHAPES)
def test_generated_presentations_are_class_p(m, p):
    pres = generate_matrix_poisson(m, p)
    assert verify_poisson_axioms(pres).ok
    rep = verify_class_p(pres)
    assert rep.ok, rep.diagnostics
    assert all(v == 2 for v in rep.payload["eta"].values())


@pytest.mark.parametrize("m,p", [(2, 2), (2, 3), (3, 2)])
def test_certificate(m, p):
    assert verify_affine_bracket(dda_run(generate_matrix_poisson(m, p))).ok


# -- diagrams -------------------------------------------------------------------------------------

@pytest.mark.parametrize("p", range(1, 5))
def test_single_row_every_subset(p):
    assert len(enumerate_diagrams(1, p)) == 2 ** p


@pytest.mark.parametrize("m,p", [(2, 2), (2, 3), (3, 2), (3, 3)])
def test_counts_match_brute_force(m, p):
    assert len(enumerate_diagrams(m, p)) == brute_force_count(m, p)


def test_two_by_two_count():
    assert len(enumerate_diagrams(2, 2)) == 14


@pytest.mark.parametrize("m,p", SHAPES)
def test_counts_match_poly_bernoulli(m, p):
    assert len(enumerate_diagrams(m, p)) == poly_bernoulli(m, p)


def test_known_poly_bernoulli_values():
    assert (poly_bernoulli(2, 3), poly_bernoulli(3, 3)) == (46, 230)


def test_diagrams_sorted_and_distinct():
    ds = enumerate_diagrams(3, 3)
    bits = [d.bitstring for d in ds]
    assert bits == sorted(bits) and len(set(bits)) == len(bits)
    assert all(d.is_cauchon() for d in ds)


def test_predicate_examples():
    assert is_cauchon(2, 2, {(1, 1), (2, 1)})
    assert not is_cauchon(2, 2, {(2, 2)})
    assert is_cauchon(2, 2, {(1, 2), (2, 2)})
    assert not is_cauchon(2, 2, {(2, 2), (1, 1)})


def test_bitstring_round_trip():
    for d in enumerate_diagrams(2, 3):
        assert GridDiagram.from_bitstring(2, 3, d.bitstring) == d
    with pytest.raises(ValueError):
        GridDiagram.from_bitstring(2, 2, "012")
    with pytest.raises(ValueError):
        GridDiagram(2, 2, frozenset({(3, 1)}))


def test_size_limit():
    with pytest.raises(GridSizeError, match="enumeration limit"):
        enumerate_diagrams(5, 6)
    with pytest.raises(GridSizeError):
        strata_table(6, 5)


# -- stratum matrices --------------------------------------------------------------------------

@pytest.mark.parametrize("m,p", [(m, p) for m, p in SHAPES if m * p <= 9])
def test_stratum_reports(m, p):
    reports, counts = strata_table(m, p)
    assert sum(counts.values()) == len(reports)
    for rep in reports:
        M = rep.matrix
        assert all(M[a][b] == -M[b][a] for a in range(rep.r) for b in range(rep.r))
        assert rep.rank % 2 == 0
        assert rep.s % 2 == rep.r % 2
        assert kernel_dimension_crosscheck(rep) == rep.s


def test_two_by_two_strata():
    trace = dda_run(generate_matrix_poisson(2, 2))
    empty = build_Mw(trace, GridDiagram(2, 2, frozenset()))
    assert (empty.r, empty.rank, empty.s) == (4, 2, 2)
    full = build_Mw(trace, GridDiagram.from_bitstring(2, 2, "1111"))
    assert (full.r, full.s) == (0, 0)
    corner = build_Mw(trace, GridDiagram.from_bitstring(2, 2, "0001"))
    assert corner.s % 2 == 1


@pytest.mark.parametrize("m,p", [(m, p) for m, p in SHAPES if m * p <= 9])
def test_full_grid_has_empty_kernel(m, p):
    trace = dda_run(generate_matrix_poisson(m, p))
    rep = build_Mw(trace, GridDiagram.from_bitstring(m, p, "1" * (m * p)))
    assert (rep.r, rep.rank, rep.s) == (0, 0, 0)


def test_deleting_cells_never_raises_rank():
    trace = dda_run(generate_matrix_poisson(3, 2))
    diagrams = enumerate_diagrams(3, 2)
    for a in diagrams:
        for b in diagrams:
            if a.black < b.black:
                assert build_Mw(trace, b).rank <= build_Mw(trace, a).rank


def test_one_by_one():
    reports, counts = strata_table(1, 1)
    assert [(r.diagram.bitstring, r.r, r.s) for r in reports] == [("0", 1, 1), ("1", 0, 0)]
    assert counts == {0: 1, 1: 1}


def test_to_dict():
    reports, _ = strata_table(1, 2)
    assert reports[0].to_dict() == {"diagram": "00", "r": 2, "rank": 2, "s": 0}
    assert all(isinstance(x, Fraction) for row in reports[0].matrix for x in row)
