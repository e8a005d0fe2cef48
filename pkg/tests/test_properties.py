"""Property tests over randomly generated inputs."""

from fractions import Fraction

import pytest
import sympy
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from toricmirror.algebra import (
    LaurentPoly,
    Monomial,
    MonomialMap,
    affine,
    change_coordinates,
    dual_map,
    log_derivative,
    substitute,
    torus,
)
from toricmirror.crit import is_crit_empty, is_groebner, normal_form
from toricmirror.crit.groebner import MonomialOrder, buchberger, leading
from toricmirror.dsl import load_document
from toricmirror.errors import ResourceBudgetExceeded
from toricmirror.lgmodel import LGModel, grading_holds, knorrer_expand, knorrer_reduce, solve_grading

from conftest import CORPUS

TORUS2 = torus("x", "y")
MIXED = torus("x", "y") + affine("z")

coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)


def polys(variables, max_terms=4, lo=-2, hi=2):
    def exps(v):
        return st.integers(min_value=0 if v.spec == "affine" else lo, max_value=hi)

    mono = st.tuples(*[exps(v) for v in variables]).map(
        lambda e: Monomial({v.name: k for v, k in zip(variables, e)}))
    return st.dictionaries(mono, coeffs, max_size=max_terms).map(lambda d: LaurentPoly(variables, d))


def elementary_ops(n, max_ops):
    op = st.tuples(st.integers(0, n - 1), st.integers(0, n - 1), st.sampled_from([-1, 1]),
                   st.booleans())
    return st.lists(op, max_size=max_ops)


def unimodular(n, max_ops=6):
    """Products of elementary matrices and transpositions; determinant is +-1."""

    def build(ops):
        m = [[int(i == j) for j in range(n)] for i in range(n)]
        for i, j, c, swap in ops:
            if swap:
                m[i], m[j] = m[j], m[i]
            elif i != j:
                m[i] = [a + c * b for a, b in zip(m[i], m[j])]
        return m

    return elementary_ops(n, max_ops).map(build)


# the Laurent ring


@settings(max_examples=1000)
@given(polys(MIXED), polys(MIXED), polys(MIXED))
def test_ring_axioms(f, g, h):
    assert f + g == g + f
    assert f * g == g * f
    assert (f + g) + h == f + (g + h)
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f - f == 0
    assert f * 1 == f


@settings(max_examples=1000)
@given(polys(TORUS2), polys(TORUS2), unimodular(2))
def test_substitution_is_a_ring_homomorphism(f, g, mat):
    m = MonomialMap.from_matrix(TORUS2, TORUS2, mat)
    assert substitute(f + g, m) == substitute(f, m) + substitute(g, m)
    assert substitute(f * g, m) == substitute(f, m) * substitute(g, m)
    # and it is undone by the inverse map
    assert substitute(substitute(f, m), m.inverse()) == f
    assert change_coordinates(substitute(f, m), m) == f


@settings(max_examples=300)
@given(polys(MIXED, 3), polys(MIXED, 3), st.sampled_from(["x", "y", "z"]))
def test_log_derivative_leibniz(f, g, name):
    lhs = log_derivative(f * g, name)
    assert lhs == log_derivative(f, name) * g + f * log_derivative(g, name)


# dual maps


def _pairs(n):
    names = [f"v{i}" for i in range(n)]
    return torus(*names), {v: v.upper() for v in names}


@settings(max_examples=500)
@given(st.sampled_from([3, 4]).flatmap(lambda n: st.tuples(st.just(n), unimodular(n), unimodular(n))))
def test_dual_involution_and_contravariance(data):
    n, a, b = data
    vs, pairing = _pairs(n)
    back = {v: k for k, v in pairing.items()}
    A = MonomialMap.from_matrix(vs, vs, a)
    B = MonomialMap.from_matrix(vs, vs, b)
    assert dual_map(dual_map(A, pairing), back) == A
    # dual(A after B) = dual(B) after dual(A)
    assert dual_map(A.compose(B), pairing) == dual_map(B, pairing).compose(dual_map(A, pairing))


@settings(max_examples=300)
@given(st.tuples(unimodular(3), st.lists(st.integers(-3, 3), min_size=3, max_size=3),
                 st.lists(st.integers(-3, 3), min_size=3, max_size=3)))
def test_pairing_identity(data):
    mat, a, b = data
    vs, pairing = _pairs(3)
    m = MonomialMap.from_matrix(vs, vs, mat)
    d = dual_map(m, pairing)
    names = [v.name for v in vs]
    duals = [pairing[n] for n in names]
    primal = LaurentPoly.monomial(vs, Monomial(dict(zip(names, a))))
    dual = LaurentPoly.monomial(d.source, Monomial(dict(zip(duals, b))))
    ma = next(iter(substitute(primal, m).terms)).vector(names)
    db = next(iter(substitute(dual, d).terms)).vector(duals)
    # <M a, b> = <a, M^T b>
    assert sum(x * y for x, y in zip(ma, b)) == sum(x * y for x, y in zip(a, db))


# Groebner bases


small_poly3 = st.dictionaries(
    st.tuples(*[st.integers(0, 2)] * 3).filter(lambda e: sum(e) <= 2),
    st.integers(-3, 3).filter(bool),
    min_size=1, max_size=3,
).map(lambda d: {e: Fraction(c) for e, c in d.items()})

X, Y, Z = sympy.symbols("x y z")


def _sympy_monic(expr):
    p = sympy.Poly(expr, X, Y, Z, domain="QQ")
    lc = p.LC(order="grevlex")
    return {m: Fraction(int((c / lc).p), int((c / lc).q)) for m, c in p.terms()}


@settings(max_examples=200)
@given(st.lists(small_poly3, min_size=1, max_size=3))
def test_buchberger_against_reductions_and_sympy(gens):
    o = MonomialOrder(3)
    try:
        basis = buchberger(gens, o, budget=2000)
    except ResourceBudgetExceeded:
        assume(False)
    assert is_groebner(basis, o)
    for g in gens:
        assert normal_form(g, basis, o) == {}
    # reduced: no term of any element is divisible by another leading monomial
    leads = [leading(g, o) for g in basis]
    for i, g in enumerate(basis):
        for j, lm in enumerate(leads):
            if i != j:
                assert not any(all(a >= b for a, b in zip(e, lm)) for e in g)
    exprs = [sum(c * X ** e[0] * Y ** e[1] * Z ** e[2] for e, c in g.items()) for g in gens]
    theirs = sympy.groebner(exprs, X, Y, Z, order="grevlex")
    if list(theirs.exprs) == [0]:
        assert basis == []
        return
    assert sorted(map(sorted, (g.items() for g in basis))) == \
        sorted(map(sorted, (_sympy_monic(e).items() for e in theirs.exprs)))


# critical loci


laurent2 = polys(TORUS2, max_terms=3, lo=-1, hi=1)


@settings(max_examples=100)
@given(laurent2, unimodular(2, 3))
def test_crit_verdict_is_unimodular_invariant(W, mat):
    m = MonomialMap.from_matrix(TORUS2, TORUS2, mat)
    try:
        before = is_crit_empty(LGModel.build(TORUS2, W), budget=5000).result
        after = is_crit_empty(LGModel.build(TORUS2, substitute(W, m)), budget=5000).result
    except ResourceBudgetExceeded:
        assume(False)
    assert before == after


# model operations


@settings(max_examples=200)
@given(polys(MIXED, 3))
def test_grading_solution_rechecks(W):
    m = LGModel.build(MIXED, W)
    g = solve_grading(m)
    if g is not None:
        assert grading_holds(m, g.weights)


@settings(max_examples=200)
@given(polys(MIXED, 3), polys(MIXED, 3))
def test_knorrer_expand_then_reduce(W, f):
    m = LGModel.build(MIXED, W)
    back = knorrer_reduce(knorrer_expand(m, f, "q"), "q")
    assert back.potential == W
    if f.is_zero():
        return
    if f.is_constant():
        assert back.is_empty
    else:
        assert back.constraints == (f,)


# exact against numeric


NUMERIC_KINDS = ("crit-empty", "crit-nonempty", "crit-contained-in")


def _crit_cases():
    out = []
    for path in sorted(CORPUS.glob("*.tmc")):
        doc = load_document(path.read_text())
        for e in doc.expectations:
            if e.kind in NUMERIC_KINDS and not e.over:
                out.append(pytest.param(path, e.pos[0], id=f"{path.stem}:{e.pos[0]}"))
    return out


@pytest.mark.parametrize("path,line", _crit_cases())
def test_exact_and_numeric_agree_on_corpus(path, line):
    doc = load_document(path.read_text())
    (e,) = [e for e in doc.expectations if e.pos[0] == line]
    result = doc.numeric_crosscheck(e)
    assert result is not None
    agrees, detail = result
    assert agrees, detail
