import numpy as np
import pytest

from toricmirror.algebra import LaurentPoly, affine, torus
from toricmirror.crit import evaluate_at, hessian_det, numeric_crit_search
from toricmirror.lgmodel import LGModel


def gens(vs):
    return [LaurentPoly.var(vs, v.name) for v in vs]


def cotangent_sphere():
    vs = affine("y", "w", "p") + torus("s1", "s2")
    y, w, p, s1, s2 = gens(vs)
    return LGModel.build(vs, y * w * p + (1 + s1) * y + (1 + s2) * w)


def test_fixed_fibre_points_lie_on_the_axes():
    m = cotangent_sphere()
    pts = numeric_crit_search(m, {"s1": -1, "s2": -1}, trials=200)
    assert pts
    for pt in pts:
        # critical points of y*w*p have at least two vanishing coordinates
        small = sorted(abs(pt[n]) for n in ("y", "w", "p"))
        assert small[1] < 1e-6
        assert pt["s1"] == -1


def test_generic_fibre_has_no_points():
    # y*w*p + 2y + 3w: w*p = -2 and y*p = -3 rule out y*w = 0
    m = cotangent_sphere()
    assert numeric_crit_search(m, {"s1": 1, "s2": 2}, trials=200) == []


def test_linear_function_has_no_points():
    vs = torus("y")
    (y,) = gens(vs)
    assert numeric_crit_search(LGModel.build(vs, 4 * y), trials=100) == []


def test_zero_potential_converges_immediately():
    vs = torus("a", "b")
    pts = numeric_crit_search(LGModel.build(vs), trials=20)
    assert pts


def test_all_variables_fixed():
    # with nothing left to vary there are no equations, so the point is kept
    vs = torus("y", "s")
    y, s = gens(vs)
    m = LGModel.build(vs, (1 + s) * y)
    assert numeric_crit_search(m, {"y": 1, "s": 1}) == [{"y": 1, "s": 1}]


def test_laurent_point_and_hessian():
    # x + 1/x has critical points x = +-1 with d^2W/dx^2 = 2/x^3
    vs = torus("x")
    (x,) = gens(vs)
    m = LGModel.build(vs, x + x ** -1)
    pts = numeric_crit_search(m, trials=100)
    vals = sorted(round(pt["x"].real, 8) for pt in pts)
    assert vals == [-1.0, 1.0]
    for pt in pts:
        assert hessian_det(m, pt) == pytest.approx(2 / pt["x"] ** 3)


def test_hessian_of_xy():
    vs = affine("x", "y")
    x, y = gens(vs)
    m = LGModel.build(vs, x * y)
    assert hessian_det(m, {"x": 0, "y": 0}) == pytest.approx(-1)


def test_deterministic_for_fixed_seed():
    vs = torus("x", "z")
    x, z = gens(vs)
    m = LGModel.build(vs, x + x ** -1 + z + z ** -1)
    a = numeric_crit_search(m, trials=50, seed=3)
    b = numeric_crit_search(m, trials=50, seed=3)
    assert a == b
    assert len(a) == 4


def test_evaluate_at_matches_exact():
    vs = torus("x", "s")
    x, s = gens(vs)
    f = (1 + s) * x + x ** -1
    assert evaluate_at(f, {"x": 2.0, "s": 0.5}) == pytest.approx(complex(f.evaluate({"x": 2, "s": 0.5})))
    assert np.isfinite(evaluate_at(f, {"x": 1j, "s": 1}))
