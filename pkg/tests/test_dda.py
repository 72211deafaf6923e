import pytest

from poisson_dda.dda import (DdaError, dda_run, dda_step, express_T_in_X,
                             verify_affine_bracket)
from poisson_dda.fixtures import (affine_plane, affine_space, four_variable_example,
                                  jacobi_counterexample, three_variable_example)
from poisson_dda.poisson import bracket_eval, bracket_eval_frac
from poisson_dda.poly import (GF, Polynomial, RationalExpression, frac_equal, parse_polynomial,
                              poly_substitute)
from poisson_dda.qmatrix import generate_matrix_poisson

from randpoly import skew_matrix


def P(text, pres):
    return parse_polynomial(text, pres.n, pres.field, pres.names)


def Fr(num, den, pres):
    return RationalExpression(P(num, pres), P(den, pres))


FIXTURES = {
    "four": four_variable_example,
    "four-gf5": lambda: four_variable_example(GF(5), explicit_table=True),
    "three": three_variable_example,
    "plane": affine_plane,
    "m22": lambda: generate_matrix_poisson(2, 2),
    "m23": lambda: generate_matrix_poisson(2, 3),
    "m32": lambda: generate_matrix_poisson(3, 2),
}


# -- single steps ---------------------------------------------------------------------------

def test_four_variable_step():
    pres = four_variable_example()
    rec = dda_step(pres, 4)
    U = lambda t: parse_polynomial(t, 4)
    assert rec.change_of_variables == (U("X1"), U("X2"), U("X3 + X1*X4^-1 + X2*X4^-1"), U("X4"))
    assert rec.eta == 1 and not rec.target.has_delta(4)


def test_identity_step_when_delta_vanishes():
    pres = four_variable_example()
    rec = dda_step(dda_step(pres, 4).target, 3)
    assert rec.is_identity and rec.target == rec.source
    assert rec.change_of_variables == tuple(rec.source.x(i) for i in range(1, 5))


def test_matrix_step():
    pres = generate_matrix_poisson(2, 2)
    rec = dda_step(pres, 4)
    assert rec.eta == 2
    assert rec.change_of_variables[0] == parse_polynomial("X1 - X2*X3*X4^-1", 4)


def test_step_requires_later_deltas_removed():
    with pytest.raises(DdaError):
        dda_step(three_variable_example(), 2)


def test_step_index_range():
    with pytest.raises(IndexError):
        dda_step(four_variable_example(), 1)


# -- full runs ------------------------------------------------------------------------------

def test_affine_space_run_is_identity(rng):
    pres = affine_space(skew_matrix(rng, 4))
    trace = dda_run(pres)
    assert all(rec.is_identity for rec in trace.steps)
    for i in range(1, 5):
        assert frac_equal(express_T_in_X(trace, i), RationalExpression(pres.x(i)))
    assert verify_affine_bracket(trace).ok


def test_four_variable_run():
    pres = four_variable_example()
    trace = dda_run(pres)
    assert trace.final.is_log_canonical()
    assert trace.lam_bar == ((0, 0, -1, 1), (0, 0, -1, 1), (1, 1, 0, 0), (-1, -1, 0, 0))
    expected = ["X1", "X2", None, "X4"]
    for i, e in enumerate(expected, 1):
        if e:
            assert frac_equal(trace.expressions[i - 1], Fr(e, "1", pres))
    T3 = express_T_in_X(trace, 3)
    assert frac_equal(T3, Fr("X3*X4 + X1 + X2", "X4", pres))
    assert T3.to_strings() == ("X3*X4 + X1 + X2", "X4")


def test_matrix_run():
    pres = generate_matrix_poisson(2, 2)
    trace = dda_run(pres)
    assert frac_equal(express_T_in_X(trace, 1), Fr("x11*x22 - x12*x21", "x22", pres))
    for i in (2, 3, 4):
        assert frac_equal(express_T_in_X(trace, i), RationalExpression(pres.x(i)))
    lam = trace.lam_bar
    assert lam[0] == (0, 1, 1, 0) and lam[1] == (-1, 0, 0, 1)


def test_three_variable_run():
    pres = three_variable_example()
    trace = dda_run(pres)
    T1 = express_T_in_X(trace, 1)
    assert frac_equal(T1, Fr("1/3*Y^3 + X*Y*Z - Z", "Y*Z", pres))
    assert frac_equal(express_T_in_X(trace, 2), RationalExpression(pres.x(2)))


def test_express_index_range():
    trace = dda_run(affine_plane())
    with pytest.raises(IndexError):
        express_T_in_X(trace, 3)


def test_run_rejects_non_poisson_input():
    with pytest.raises(DdaError):
        dda_run(three_variable_example().replace(delta={3: {1: P("Y^2", three_variable_example())}},
                                                 lam=((0, 1, 0), (-1, 0, 0), (0, 0, 0))))


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_affine_bracket_certificate(name):
    rep = verify_affine_bracket(dda_run(FIXTURES[name]()))
    assert rep.ok, rep.diagnostics


def test_certificate_detects_wrong_eta():
    # eta_3 = 1 instead of 3 breaks the certificate
    pres = three_variable_example().replace(eta={2: -1, 3: 1})
    trace = dda_run(pres, check=False)
    rep = verify_affine_bracket(trace)
    assert not rep.ok and rep.diagnostics["pair"] == [1, 3]


# -- structural invariants ---------------------------------------------------------------------

@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_structure_preserved(name):
    pres = FIXTURES[name]()
    trace = dda_run(pres)
    assert trace.lam_bar == pres.lam
    for rec in trace.steps:
        assert rec.target.lam == rec.source.lam
        assert {i: d for i, d in rec.target.delta.items()} == \
            {i: d for i, d in rec.source.delta.items() if i < rec.j}
        for i in range(rec.j, pres.n + 1):
            assert rec.change_of_variables[i - 1] == rec.source.x(i)


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_step_is_poisson_morphism(name):
    """Brackets of the new variables, computed in the source, follow the target presentation."""
    trace = dda_run(FIXTURES[name]())
    for rec in trace.steps:
        if rec.is_identity:
            continue
        src, tgt = rec.source, rec.target
        V = [RationalExpression(v) for v in rec.change_of_variables]
        for a in range(1, src.n + 1):
            for b in range(a + 1, src.n + 1):
                lhs = bracket_eval_frac(src, V[a - 1], V[b - 1])
                rhs = poly_substitute(tgt.generator_bracket(a, b), V)
                assert frac_equal(lhs, rhs), (rec.j, a, b)


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_localized_equality(name):
    """``U_i`` is recovered as a Laurent polynomial in the ``V`` and ``U_j^{-1}``."""
    trace = dda_run(FIXTURES[name]())
    for rec in trace.steps:
        inverse = rec.inverse_change_of_variables()
        V = [RationalExpression(v) for v in rec.change_of_variables]
        for i, u in enumerate(inverse, 1):
            back = poly_substitute(u, V)
            assert frac_equal(back, RationalExpression(rec.source.x(i)))


def test_positive_characteristic_run_matches_rational_expressions():
    trace = dda_run(four_variable_example(GF(5), explicit_table=True))
    pres = trace.original
    assert frac_equal(express_T_in_X(trace, 3), Fr("X3*X4 + X1 + X2", "X4", pres))
