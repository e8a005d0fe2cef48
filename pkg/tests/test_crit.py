from fractions import Fraction

import pytest
import sympy

from toricmirror.algebra import LaurentPoly, affine, torus
from toricmirror.crit import (
    ALL_VALUES,
    CONTAINED,
    EMPTY,
    HYPERSURFACE,
    NON_EMPTY,
    NOT_CONTAINED,
    SUBVARIETY,
    crit_contained_in,
    critical_equations,
    critical_ideal,
    critical_values,
    is_crit_empty,
    primitive,
    rational_roots,
    same_up_to_scalar,
)
from toricmirror.crit.groebner import format_poly
from toricmirror.errors import ConstraintsPresent, ModelError, ResourceBudgetExceeded, UnknownVariable
from toricmirror.lgmodel import LGModel, SliceSpec, slice

from oracles import critical_locus, to_sympy


def gens(vs):
    return [LaurentPoly.var(vs, v.name) for v in vs]


def simplest(y_domain="torus"):
    vs = (torus("y") if y_domain == "torus" else affine("y")) + torus("s")
    y, s = gens(vs)
    return LGModel.build(vs, (1 + s) * y, {"s": s})


def cotangent_sphere():
    vs = affine("y", "w", "p") + torus("s1", "s2")
    y, w, p, s1, s2 = gens(vs)
    return LGModel.build(vs, y * w * p + (1 + s1) * y + (1 + s2) * w, {"s1": s1, "s2": s2})


def projective_family(n):
    ys = [f"y{i}" for i in range(n + 1)]
    ss = [f"s{i}" for i in range(n + 1)]
    vs = affine("p", *ys) + torus(*ss)
    g = {v.name: LaurentPoly.var(vs, v.name) for v in vs}
    W = g["p"]
    for y in ys:
        W = W * g[y]
    for y, s in zip(ys, ss):
        W = W + (1 + g[s]) * g[y]
    return LGModel.build(vs, W), g


# the critical ideal


def test_critical_ideal_fibered_simplest():
    ideal = critical_ideal(simplest(), ("s",))
    assert ideal.names == ("y", "s", "y'", "s'")
    text = sorted(format_poly(g, ideal.names, ideal.order) for g in ideal.generators)
    assert text == sorted(["y*s + y", "y*y' - 1", "s*s' - 1"])


def test_critical_equations_full():
    eqs = critical_equations(simplest())
    y, s = gens(simplest().vars)
    assert eqs == [(1 + s) * y, s * y]


def test_unknown_fibered_variable():
    with pytest.raises(UnknownVariable):
        critical_ideal(simplest(), ("q",))


def test_constraints_present():
    vs = torus("x", "y")
    x, y = gens(vs)
    m = LGModel.build(vs, x, constraints=[x + y])
    with pytest.raises(ConstraintsPresent):
        is_crit_empty(m)


# emptiness


def test_simplest_full_crit_is_empty():
    assert is_crit_empty(simplest()).result == EMPTY


def test_simplest_with_affine_fibre_is_nonempty():
    r = is_crit_empty(simplest("affine"))
    assert r.result == NON_EMPTY
    assert r.mode == "full"


def test_fibered_simplest_is_nonempty():
    assert is_crit_empty(simplest(), ("s",)).result == NON_EMPTY


def test_generic_linear_function_has_no_critical_points():
    vs = torus("y")
    (y,) = gens(vs)
    assert is_crit_empty(LGModel.build(vs, 4 * y)).result == EMPTY


def test_zero_potential_is_nonempty():
    assert is_crit_empty(LGModel.build(torus("a", "b"))).result == NON_EMPTY


def test_empty_agrees_with_sympy_solve():
    vs = torus("x", "s")
    x, s = gens(vs)
    for W in [(1 + s ** -1) * x + (1 + s) * x ** -1, x + x ** -1 + s + s ** -1, (1 + s) * x]:
        m = LGModel.build(vs, W)
        ours = is_crit_empty(m).result == EMPTY
        theirs = critical_locus(to_sympy(W), sympy.symbols("x s"), []) == []
        assert ours == theirs


# containment


def test_cotangent_sphere_containment():
    m = cotangent_sphere()
    s1, s2 = LaurentPoly.var(m.vars, "s1"), LaurentPoly.var(m.vars, "s2")
    assert crit_contained_in(m, 1 + s1).result == CONTAINED
    assert crit_contained_in(m, 1 + s2).result == CONTAINED
    assert crit_contained_in(m, 2 + s1).result == NOT_CONTAINED


@pytest.mark.parametrize("n", [1, 2, 3])
def test_projective_family_containment(n):
    m, g = projective_family(n)
    for i in range(n + 1):
        r = crit_contained_in(m, 1 + g[f"s{i}"])
        assert r.result == CONTAINED
        assert r.certificate == []


def test_zero_potential_not_contained():
    vs = torus("s")
    (s,) = gens(vs)
    r = crit_contained_in(LGModel.build(vs), 1 + s)
    assert r.result == NOT_CONTAINED
    assert r.certificate


def test_containment_in_unit_on_empty_locus():
    # vacuous: an empty critical locus is contained in anything
    assert crit_contained_in(simplest(), 7).result == CONTAINED


def test_budget_applies_to_containment():
    m, g = projective_family(3)
    with pytest.raises(ResourceBudgetExceeded):
        crit_contained_in(m, 1 + g["s0"], budget=1)


# critical values


def test_values_simplest():
    r = critical_values(simplest(), ("s",))
    assert r.classification == HYPERSURFACE
    s = LaurentPoly.var(r.polys[0].vars, "s")
    assert r.hypersurface == 1 + s


def test_values_cyclotomic():
    vs = torus("x", "s")
    x, s = gens(vs)
    r = critical_values(LGModel.build(vs, (1 + s + s * s) * x), ("s",))
    so = LaurentPoly.var(r.polys[0].vars, "s")
    assert same_up_to_scalar(r.hypersurface, 1 + so + so * so)


def test_values_all_for_zero_potential():
    r = critical_values(LGModel.build(torus("x", "s")), ("s",))
    assert r.classification == ALL_VALUES
    assert r.polys == []


def test_values_empty():
    vs = torus("y", "s")
    y, s = gens(vs)
    r = critical_values(LGModel.build(vs, y), ("s",))
    assert r.classification == EMPTY


def test_values_subvariety():
    vs = torus("y", "w", "s", "t")
    y, w, s, t = gens(vs)
    r = critical_values(LGModel.build(vs, (1 + s) * y + (1 + t) * w), ("s", "t"))
    assert r.classification == SUBVARIETY
    so, to = gens(r.polys[0].vars)
    assert sorted(p.canonical() for p in r.polys) == sorted([(1 + so).canonical(), (1 + to).canonical()])


def test_values_all_when_every_fibre_is_critical():
    vs = torus("y", "s", "t")
    y, s, t = gens(vs)
    r = critical_values(LGModel.build(vs, (1 + s) * y + (1 + t) * y * y), ("s", "t"))
    assert r.classification == ALL_VALUES


def test_values_require_fibered_torus():
    with pytest.raises(ModelError):
        critical_values(simplest(), ())
    with pytest.raises(ModelError):
        critical_values(simplest("affine"), ("y",))


def test_values_agree_with_slices():
    vs = torus("x", "y", "s")
    x, y, s = gens(vs)
    m = LGModel.build(vs, (s - 2) * (s + 1) * x + (s - 2) * y, {"s": s})
    r = critical_values(m, ("s",))
    roots = rational_roots(r.hypersurface)
    assert roots == [2]
    for lam in roots:
        assert is_crit_empty(slice(m, SliceSpec("s", lam))).result == NON_EMPTY
    for lam in (Fraction(-1), Fraction(3), Fraction(1, 2)):
        assert is_crit_empty(slice(m, SliceSpec("s", lam))).result == EMPTY


# helpers


def test_rational_roots():
    vs = torus("s")
    (s,) = gens(vs)
    assert rational_roots((1 + s) * (1 + s)) == [-1]
    assert rational_roots((2 * s - 1) * (s + 3)) == [-3, Fraction(1, 2)]
    assert rational_roots(1 + s + s * s) == []
    assert rational_roots(s * (s - 1)) == [1]
    with pytest.raises(ModelError):
        rational_roots(LaurentPoly.var(torus("a", "b"), "a") + LaurentPoly.var(torus("a", "b"), "b"))


def test_primitive_and_scalar():
    vs = torus("s")
    (s,) = gens(vs)
    assert primitive(Fraction(-1, 2) - Fraction(1, 3) * s) == 3 + 2 * s
    assert same_up_to_scalar(2 + 2 * s, -1 - s)
    assert not same_up_to_scalar(1 + s, 1 - s)


def test_report_json():
    m = cotangent_sphere()
    r = crit_contained_in(m, LaurentPoly.var(m.vars, "s1") + 1)
    out = r.to_json()
    assert out["result"] == CONTAINED
    assert out["target"] == "s1 + 1"
    assert out["mode"] == "full"
