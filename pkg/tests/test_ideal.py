from fractions import Fraction

import pytest

from poisson_dda.fixtures import affine_space, four_variable_example, three_variable_example
from poisson_dda.ideal import (BudgetExceeded, IdealPresentation, MonomialOrder, eliminate,
                               groebner, is_bracket_stable, membership, poisson_closure, saturate)
from poisson_dda.poisson import bracket_eval
from poisson_dda.poly import GF, QQ, Polynomial, parse_polynomial
from poisson_dda.qmatrix import generate_matrix_poisson

from oracles import linear_algebra_member
from randpoly import polynomial, skew_matrix


def P(text, n=3, field=QQ, names=None):
    return parse_polynomial(text, n, field, names)


def I(*gens, n=3, field=QQ, ambient=None):
    if ambient is not None:
        return IdealPresentation.of([P(g, ambient.n, ambient.field, ambient.names) for g in gens], ambient)
    return IdealPresentation.of([P(g, n, field) for g in gens], nvars=n, field=field)


def basis(ideal, order=None):
    return list(groebner(ideal, order).polys)


# -- Gröbner bases ---------------------------------------------------------------------------

def test_principal_monomial_ideal():
    assert basis(I("X1")) == [P("X1")]


def test_linear_reduction():
    assert basis(I("X1", "X1 + X2")) == [P("X1"), P("X2")]


def test_unit_ideal():
    assert basis(I("X1*X2 - 1", "X1^2")) == [P("1")]


def test_basis_is_reduced_and_deterministic(rng):
    for _ in range(30):
        gens = [polynomial(rng, 3, max_deg=3, constant=False) for _ in range(3)]
        a = groebner(IdealPresentation.of(gens, nvars=3))
        b = groebner(IdealPresentation.of(list(reversed(gens)), nvars=3))
        assert a == b
        lms = a.leading_monomials()
        for g, lm in zip(a.polys, lms):
            assert g.terms[lm] == 1
            for other in lms:
                if other != lm:
                    assert not all(x <= y for x, y in zip(other, lm))
                    assert all(not all(x <= y for x, y in zip(other, m)) for m in g.terms)


def test_lex_basis_matches_sympy():
    sympy = pytest.importorskip("sympy")
    x, y, z = sympy.symbols("x y z")
    ours = groebner(I("X1^2 + X2*X3 - 1", "X2^2 - X3", "X1*X3 + X2"), MonomialOrder.lex(3))
    theirs = sympy.groebner([x**2 + y*z - 1, y**2 - z, x*z + y], x, y, z, order="lex")
    conv = [P(str(sympy.Poly(g, x, y, z).as_expr()).replace("x", "X1").replace("y", "X2")
              .replace("z", "X3").replace("**", "^")) for g in theirs.exprs]
    assert sorted(map(str, ours.polys)) == sorted(map(str, conv))


def test_grevlex_basis_matches_sympy(rng):
    sympy = pytest.importorskip("sympy")
    x = sympy.symbols("x1:4")
    for _ in range(20):
        gens = [polynomial(rng, 3, max_deg=2, max_terms=3) for _ in range(2)]
        ours = groebner(IdealPresentation.of(gens, nvars=3))
        exprs = [sum(sympy.Rational(c.numerator, c.denominator) * sympy.prod(
            [v**e for v, e in zip(x, m)]) for m, c in ((m, Fraction(c)) for m, c in g.terms.items()))
            for g in gens]
        theirs = sympy.groebner(exprs, *x, order="grevlex")
        assert len(theirs.exprs) == len(ours.polys)
        for g in theirs.exprs:
            poly = sympy.Poly(g, *x)
            lc = poly.LC(order="grevlex")
            terms = {m: Fraction(int(sympy.numer(c / lc)), int(sympy.denom(c / lc)))
                     for m, c in poly.terms()}
            assert Polynomial(3, terms) in ours.polys


def test_positive_characteristic_basis():
    f5 = GF(5)
    gb = groebner(I("X1^2 - 1", "X1 - 6", n=2, field=f5))
    assert gb.is_unit() is False
    assert list(gb.polys) == [P("X1 - 1", 2, f5)]


def test_budget_exceeded():
    with pytest.raises(BudgetExceeded):
        groebner(I("X1^2 + X2*X3 - 1", "X2^2 - X3", "X1*X3 + X2"), MonomialOrder.lex(3), spair_budget=1)


def test_block_order_compares_first_block_lexicographically():
    order = MonomialOrder.block(3, 1)
    assert order.key((1, 0, 0)) > order.key((0, 5, 5))
    assert order.key((0, 2, 0)) > order.key((0, 0, 1))


# -- membership ----------------------------------------------------------------------------------

def test_membership_examples():
    assert membership(P("X2"), I("X1", "X1 + X2"))
    assert not membership(P("1"), I("X1"))
    assert membership(P("X1"), I("X1*X2 - 1", "X1^2"))


def test_membership_agrees_with_linear_algebra(rng):
    cases = members = 0
    while cases < 120:
        n = rng.randint(1, 3)
        gens = [polynomial(rng, n, max_deg=3, max_terms=3, constant=False)
                for _ in range(rng.randint(1, 3))]
        ideal = IdealPresentation.of(gens, nvars=n)
        if rng.random() < 0.5:
            f = sum((polynomial(rng, n, max_deg=1, max_terms=2) * g for g in gens), Polynomial.zero(n))
        else:
            f = polynomial(rng, n, max_deg=3)
        d = max([f.degree()] + [g.degree() for g in gens])
        expected = linear_algebra_member(f, gens, d + 2)
        got = membership(f, ideal)
        assert got == expected, (gens, f)
        cases += 1
        members += got
    assert 20 < members < 100


def test_normal_form_canonical(rng):
    """Reducing any representative of ``f + I`` gives the same remainder."""
    for _ in range(200):
        gens = [polynomial(rng, 3, max_deg=2, max_terms=3, constant=False) for _ in range(2)]
        gb = groebner(IdealPresentation.of(gens, nvars=3))
        f = polynomial(rng, 3)
        shifted = f + sum((polynomial(rng, 3, max_deg=2) * g for g in gens), Polynomial.zero(3))
        assert gb.reduce(f) == gb.reduce(shifted)
        assert gb.reduce(gb.reduce(f)) == gb.reduce(f)


# -- saturation and elimination --------------------------------------------------------------------

def test_saturation_examples():
    assert basis(saturate(I("X1*X2"), P("X1"))) == [P("X2")]
    assert basis(saturate(I("X2"), P("X1"))) == [P("X2")]
    assert basis(saturate(I("X1^2*X2 + X1*X3"), P("X1"))) == [P("X1*X2 + X3")]


def test_saturation_to_unit():
    assert groebner(saturate(I("X1^3"), P("X1"))).is_unit()


def test_saturation_by_zero():
    with pytest.raises(ValueError):
        saturate(I("X1"), P("0"))


def test_elimination_examples():
    out = eliminate(I("X1*X2 - 1", "X3 - X1"), [1])
    assert basis(out) == [P("X2*X3 - 1")]
    assert basis(eliminate(I("X1", "X2"), [])) == [P("X1"), P("X2")]
    assert basis(eliminate(I("X1", "X2"), [2])) == [P("X1")]


def test_elimination_result_avoids_dropped_variables(rng):
    for _ in range(20):
        gens = [polynomial(rng, 3, max_deg=2, max_terms=3) for _ in range(2)]
        ideal = IdealPresentation.of(gens, nvars=3)
        out = eliminate(ideal, [2])
        for g in out.generators:
            assert 2 not in g.variables()
            assert membership(g, ideal)


# -- Poisson closure ------------------------------------------------------------------------------------

def test_closure_four_variable():
    pres = four_variable_example()
    out = poisson_closure(I("X4", ambient=pres))
    assert basis(out) == [P("X1 + X2", 4), P("X4", 4)]


def test_closure_log_canonical(rng):
    pres = affine_space(skew_matrix(rng, 3))
    for i in range(1, 4):
        assert basis(poisson_closure(I(f"X{i}", ambient=pres))) == [pres.x(i)]


def test_closure_three_variable_chain():
    pres = three_variable_example()
    assert groebner(poisson_closure(I("Z", ambient=pres))).is_unit()
    # the chain Z -> Y^2 -> Y -> 1
    assert bracket_eval(pres, P("Z", 3, names=pres.names), pres.x(1)) == P("X*Z + Y^2", 3, names=pres.names)
    assert bracket_eval(pres, P("Y^2", 3, names=pres.names), pres.x(1)) == P("-2*X*Y^2 + 2*Y", 3, names=pres.names)


def test_naive_guess_is_not_poisson():
    pres = three_variable_example()
    assert not is_bracket_stable(I("Z", "Y^2", ambient=pres))


CLOSURE_CASES = [
    (four_variable_example, ["X4"]),
    (four_variable_example, ["X3"]),
    (three_variable_example, ["Z"]),
    (lambda: generate_matrix_poisson(2, 2), ["x22"]),
    (lambda: generate_matrix_poisson(2, 2), ["x11"]),
    (lambda: generate_matrix_poisson(2, 3), ["x23"]),
]


@pytest.mark.parametrize("make,gens", CLOSURE_CASES)
def test_closure_properties(make, gens):
    pres = make()
    start = I(*gens, ambient=pres)
    closed = poisson_closure(start)
    gb = groebner(closed)
    for g in gb.polys:
        for i in range(1, pres.n + 1):
            assert gb.reduce(bracket_eval(pres, pres.x(i), g)).is_zero()
    assert groebner(poisson_closure(closed)) == gb
    for g in start.generators:
        assert gb.contains(g)


@pytest.mark.parametrize("make", [four_variable_example, three_variable_example,
                                  lambda: generate_matrix_poisson(2, 2)])
def test_closure_contains_lower_bound(make):
    pres = make()
    for j in range(2, pres.n + 1):
        gb = groebner(poisson_closure(IdealPresentation.of([pres.x(j)], pres)))
        assert gb.contains(pres.x(j))
        for i in range(1, j):
            assert gb.contains(pres.delta_image(j, i))


def test_closure_needs_ambient():
    with pytest.raises(ValueError):
        poisson_closure(I("X1"))
