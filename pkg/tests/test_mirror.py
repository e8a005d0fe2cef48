import warnings

import pytest

from toricmirror import mirror as mr
from toricmirror.algebra import LaurentPoly, Monomial, MonomialMap, affine, torus
from toricmirror.errors import DuplicateRay, NotInvariant, PipelineError, UnknownVariable
from toricmirror.lgmodel import CompletionSpec, LGModel, SliceSpec


def gens(vs):
    return [LaurentPoly.var(vs, v.name) for v in vs]


# mirror superpotentials


def test_mirror_of_plane():
    m = mr.mirror_superpotential(mr.ToricInput(((1, 0), (0, 1)), ("x", "y")))
    x, y = gens(m.vars)
    assert m.potential == x + y
    assert all(v.spec == "torus" for v in m.vars)


def test_mirror_of_p1_times_p1():
    t = mr.ToricInput(((1, 0), (-1, 0), (0, 1), (0, -1)), ("x", "z"))
    m = mr.mirror_superpotential(t)
    x, z = gens(m.vars)
    assert m.potential == x + x ** -1 + z + z ** -1


def test_mirror_of_canonical_bundle():
    t = mr.ToricInput(((1, 0), (0, 1), (-1, 2)), ("x", "p"))
    m = mr.mirror_superpotential(t)
    x, p = gens(m.vars)
    assert m.potential == x + p + p * p * x ** -1


def test_duplicate_ray_warns_and_adds():
    t = mr.ToricInput(((1, 0), (1, 0)), ("x", "y"))
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        m = mr.mirror_superpotential(t)
    assert any(issubclass(w.category, DuplicateRay) for w in caught)
    x, _ = gens(m.vars)
    assert m.potential == 2 * x


def test_zero_ray_rejected():
    with pytest.raises(Exception):
        mr.ToricInput(((0, 0),), ("x", "y"))


# circle actions


def test_circle_action_zero_primal_potential():
    m = mr.mirror_superpotential(mr.ToricInput(((1, 0), (0, 1)), ("x", "y")))
    vs = affine("a", "b")
    out = mr.mirror_circle_action(m, (1, -1), "s", LaurentPoly.zero(vs))
    x, y = gens(out.vars)
    assert out.sigma("s") == x * y ** -1


def test_circle_action_invariant_primal_potential():
    m = mr.mirror_superpotential(mr.ToricInput(((1, 0), (0, 1)), ("x", "y")))
    vs = affine("a", "b")
    a, b = gens(vs)
    out = mr.mirror_circle_action(m, (1, -1), "s", a * b)
    x, y = gens(out.vars)
    assert out.sigma("s") == x * y ** -1


def test_circle_action_rejects_non_invariant():
    m = mr.mirror_superpotential(mr.ToricInput(((1, 0), (0, 1)), ("x", "y")))
    # the primal term a has weight 1 under (1, -1)
    with pytest.raises(NotInvariant) as info:
        mr.mirror_circle_action(m, (1, -1), "s", LaurentPoly.var(affine("a", "b"), "a"))
    assert info.value.pairing == 1


# dual coordinate changes


def test_primal_change_with_dual_node():
    primal_vars = affine("x", "y", "p") + torus("z")
    x, y, p, z = gens(primal_vars)
    primal = LGModel.build(primal_vars, p * (z - x * y + 1))
    mirror_vars = torus("X", "Y", "P", "Z")
    X, Y, P, Z = gens(mirror_vars)
    mirror = LGModel.build(mirror_vars, X + Y + P)
    mm = MonomialMap.build(primal_vars, primal_vars,
                           {"z": Monomial({"p": 1, "z": 1}), "y": Monomial({"p": 1, "x": 1, "y": 1})})
    pairing = {"x": "X", "y": "Y", "p": "P", "z": "Z"}
    new_primal, new_mirror = mr.primal_change_with_dual(primal, mirror, mm, pairing)
    assert new_primal.potential == z - y + p
    assert new_mirror.potential == X * Y + Y + P * Z * Y


def test_primal_change_identity():
    vs = torus("a", "b")
    a, b = gens(vs)
    primal = LGModel.build(vs, a * b)
    mv = torus("A", "B")
    A, B = gens(mv)
    mirror = LGModel.build(mv, A + B)
    p2, m2 = mr.primal_change_with_dual(primal, mirror, MonomialMap.identity(vs), {"a": "A", "b": "B"})
    assert p2 == primal and m2 == mirror


# pipelines


def c2_split_steps():
    target = torus("y", "s")
    change = mr.Change.build({"x": Monomial({"s": 1, "y": 1})}, target)
    return target, change


def test_pipeline_simplest():
    m = mr.mirror_model(mr.ToricInput(((1, 0), (0, 1)), ("x", "y"), (("s", (1, -1)),)))
    target, change = c2_split_steps()
    out, log = mr.run_pipeline(m, [change])
    y, s = gens(out.vars)
    assert out.potential == (1 + s) * y
    assert out.sigma("s") == s
    assert log.replay() == out
    completed, _ = mr.run_pipeline(out, [mr.Complete(CompletionSpec("s", -1, "h", 4))])
    y, h = gens(completed.vars)
    assert completed.potential == h * y


def test_empty_pipeline():
    vs = torus("x")
    m = LGModel.build(vs, LaurentPoly.var(vs, "x"))
    out, log = mr.run_pipeline(m, [])
    assert out == m and log.entries == []


def test_pipeline_failure_reports_partial_log():
    vs = torus("y", "s")
    y, s = gens(vs)
    m = LGModel.build(vs, (1 + s) * y, {"s": s})
    steps = [mr.Slice(SliceSpec("s", 2)), mr.KnorrerReduce("y")]
    with pytest.raises(PipelineError) as info:
        mr.run_pipeline(m, steps)
    assert info.value.step == 1
    assert len(info.value.log.entries) == 1


def test_absorb_units_logged():
    vs = torus("x", "y")
    x, y = gens(vs)
    m = LGModel.build(vs, x * y + x * x * y)
    out, log = mr.run_pipeline(m, [mr.AbsorbUnits()])
    assert out.potential == 1 + x
    assert "x*y" in log.entries[0].note
    out2, log2 = mr.run_pipeline(m, [mr.Compactify(())], absorb_units=True)
    assert out2.potential == 1 + x
    assert log2.entries[0].absorbed == "x*y"


def test_log_json_shape():
    m = mr.mirror_model(mr.ToricInput(((1, 0), (0, 1)), ("x", "y"), (("s", (1, -1)),)))
    _, change = c2_split_steps()
    _, log = mr.run_pipeline(m, [change])
    (entry,) = log.to_json()
    assert entry["op"] == "change"
    assert entry["model"]["potential"] == "y*s + y"
    assert entry["params"]["images"] == {"x": "y*s"}


def test_change_unknown_source_variable():
    vs = torus("x")
    m = LGModel.build(vs, LaurentPoly.var(vs, "x"))
    change = mr.Change.build({"q": Monomial({"x": 1})}, vs)
    with pytest.raises(PipelineError) as info:
        mr.run_pipeline(m, [change])
    assert isinstance(info.value.cause, UnknownVariable)


# signs and charts


def test_sphere_orbit_sign():
    assert mr.sphere_orbit_sign(1) == -1
    assert mr.sphere_orbit_sign(0) == 1
    for n in range(5):
        assert mr.sphere_orbit_sign(n + 1) == (-1) ** (n + 1)
    with pytest.raises(ValueError):
        mr.sphere_orbit_sign(-1)


def test_check_transition_sphere_charts():
    va = affine("v", "p", "y") + torus("s")
    v, p, y, s = gens(va)
    chart_u = LGModel.build(va, y * (1 + s) + y * v * p + p, {"s": s})
    vb = affine("u", "p", "y") + torus("s")
    u, p2, y2, s2 = gens(vb)
    chart_v = LGModel.build(vb, y2 * (1 + s2) + y2 * u * p2 + p2 * u * u, {"s": s2})
    good = {"v": {Monomial({"u": -1}): 1}, "p": {Monomial({"p": 1, "u": 2}): 1}}
    bad = {"v": {Monomial({"u": -1}): 1}, "p": {Monomial({"p": 1, "u": 1}): 1}}
    assert mr.check_transition(chart_u, chart_v, good)
    assert not mr.check_transition(chart_u, chart_v, bad)
