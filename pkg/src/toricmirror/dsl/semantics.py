"""Turning parsed ``.tmc`` files into models, pipelines and checked expectations."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .. import lgmodel as lg
from .. import mirror as mr
from ..algebra import (
    DEFAULT_FORMAL_ORDER,
    ONE,
    Domain,
    LaurentPoly,
    Variable,
    _raw_add,
    _raw_inverse,
    _raw_mul,
    _raw_pow,
)
from ..crit import critical as cr
from ..crit import numeric as nm
from ..errors import (
    ModelError,
    PipelineError,
    ResourceBudgetExceeded,
    SemanticError,
    TmcError,
)
from ..lgmodel import GENERIC, CompletionSpec, LGModel, SliceSpec
from . import ast as A
from .parser import parse_model_file


def _located(message: str, node, cause: Exception | None = None) -> SemanticError:
    line, col = getattr(node, "pos", (0, 0))
    err = SemanticError(message, line, col)
    err.cause = cause
    return err


# expressions


def eval_raw(node, scope: Mapping[str, Variable]) -> dict:
    """Evaluate an expression to unvalidated terms over the variables in ``scope``."""
    if isinstance(node, A.Num):
        return {ONE: Fraction(node.value)} if node.value else {}
    if isinstance(node, A.Name):
        if node.name not in scope:
            raise _located(f"unknown variable {node.name!r}", node)
        from ..algebra import Monomial

        return {Monomial({node.name: 1}): Fraction(1)}
    if isinstance(node, A.Neg):
        return {m: -c for m, c in eval_raw(node.operand, scope).items()}
    if isinstance(node, A.Pow):
        base = eval_raw(node.base, scope)
        if node.exponent >= 0:
            return _raw_pow(base, node.exponent)
        if len(base) != 1:
            raise _located("negative powers are allowed only for monomials", node)
        return _raw_pow(_raw_inverse(base), -node.exponent)
    if isinstance(node, A.BinOp):
        a = eval_raw(node.left, scope)
        b = eval_raw(node.right, scope)
        if node.op == "+":
            return _raw_add(a, b)
        if node.op == "-":
            return _raw_add(a, b, -1)
        if node.op == "*":
            return _raw_mul(a, b)
        if len(b) != 1:
            raise _located("division is allowed only by a nonzero monomial", node)
        return _raw_mul(a, _raw_inverse(b))
    raise TypeError(f"not an expression: {node!r}")


def eval_poly(node, variables) -> LaurentPoly:
    variables = tuple(variables)
    raw = eval_raw(node, {v.name: v for v in variables})
    try:
        return LaurentPoly(variables, raw)
    except TmcError as exc:
        raise _located(f"{type(exc).__name__}: {exc}", node, exc) from exc


def _variables(decl: A.VarDecl, formal_order: int) -> list[Variable]:
    if decl.domain == "formal":
        order = decl.order if decl.order is not None else formal_order
        if order < 1:
            raise _located("formal order must be positive", decl)
        return [Variable(n, Domain.FORMAL, order) for n in decl.names]
    return [Variable(n, Domain(decl.domain)) for n in decl.names]


# entities


@dataclass
class Entity:
    """What a name in a file refers to once evaluated."""

    model: LGModel
    primal: LGModel | None = None
    pairing: dict = field(default_factory=dict)
    log: mr.DerivationLog | None = None
    kind: str = "model"


@dataclass
class ExpectResult:
    kind: str
    subject: str | None
    line: int
    passed: bool
    detail: str = ""

    def to_json(self) -> dict:
        return {"kind": self.kind, "subject": self.subject, "line": self.line,
                "passed": self.passed, "detail": self.detail}


class Document:
    def __init__(self, tree: A.FileAst, formal_order: int = DEFAULT_FORMAL_ORDER,
                 absorb_units: bool = False, budget: int | None = None,
                 trials: int = nm.DEFAULT_TRIALS, seed: int = 0):
        self.tree = tree
        self.formal_order = formal_order
        self.absorb_units = absorb_units
        self.budget = budget
        self.trials = trials
        self.seed = seed
        self.items: dict[str, object] = {}
        self.expectations: list[A.Expect] = []
        self._cache: dict[str, Entity] = {}
        self._active: set[str] = set()
        for item in tree.items:
            if isinstance(item, A.Expect):
                self.expectations.append(item)
                continue
            if item.name in self.items:
                raise _located(f"name {item.name!r} defined twice", item)
            self.items[item.name] = item

    # lookups

    def names(self, kind=None) -> list[str]:
        return [n for n, it in self.items.items() if kind is None or isinstance(it, kind)]

    def entity(self, name: str, node=None) -> Entity:
        if name in self._cache:
            return self._cache[name]
        item = self.items.get(name)
        if item is None or isinstance(item, A.TransitionItem):
            raise _located(f"no model, toric or pipeline named {name!r}", node)
        if name in self._active:
            raise _located(f"pipeline {name!r} depends on itself", node)
        self._active.add(name)
        try:
            if isinstance(item, A.ModelItem):
                ent = Entity(self._build_model(item))
            elif isinstance(item, A.ToricItem):
                ent = self._build_toric(item)
            else:
                ent = self._run_pipeline(item)
        finally:
            self._active.discard(name)
        self._cache[name] = ent
        return ent

    def model(self, name: str, node=None) -> LGModel:
        return self.entity(name, node).model

    def evaluate_all(self) -> dict[str, Entity]:
        return {n: self.entity(n) for n in self.items if not isinstance(self.items[n], A.TransitionItem)}

    # builders

    def _build_model(self, item: A.ModelItem) -> LGModel:
        variables: list[Variable] = []
        seen = set()
        for d in item.decls:
            if isinstance(d, A.VarDecl):
                for v in _variables(d, self.formal_order):
                    if v.name in seen:
                        raise _located(f"variable {v.name!r} declared twice", d)
                    seen.add(v.name)
                    variables.append(v)
        potential = LaurentPoly.zero(variables)
        sigmas, constraints, grades = [], [], {}
        have_potential = False
        for d in item.decls:
            if isinstance(d, A.PotentialDecl):
                if have_potential:
                    raise _located("potential given twice", d)
                potential = eval_poly(d.expr, variables)
                have_potential = True
            elif isinstance(d, A.SigmaDecl):
                if d.name in dict(sigmas):
                    raise _located(f"sigma {d.name!r} given twice", d)
                sigmas.append((d.name, eval_poly(d.expr, variables)))
            elif isinstance(d, A.ConstraintDecl):
                constraints.append(eval_poly(d.expr, variables))
            elif isinstance(d, A.GradeDecl):
                if d.name not in seen:
                    raise _located(f"unknown variable {d.name!r}", d)
                grades[d.name] = d.weight
        try:
            m = LGModel(tuple(variables), potential, tuple(sigmas), tuple(constraints))
            if grades:
                missing = [v.name for v in variables if v.name not in grades]
                if missing:
                    raise ModelError(f"no grade given for {missing}")
                m = lg.assign_grading(m, grades)
        except TmcError as exc:
            raise _located(f"{type(exc).__name__}: {exc}", item, exc) from exc
        return m

    def _build_toric(self, item: A.ToricItem) -> Entity:
        if not item.dual:
            raise _located("toric block needs dual variable names", item)
        pvars: list[Variable] = []
        for d in item.primal_vars:
            pvars.extend(_variables(d, self.formal_order))
        primal = None
        if item.primal_potential is not None:
            primal = eval_poly(item.primal_potential, pvars)
        try:
            t = mr.ToricInput(item.rays, item.dual, item.actions,
                              tuple(v.name for v in pvars), primal)
            import warnings

            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                m = mr.mirror_model(t)
        except TmcError as exc:
            raise _located(f"{type(exc).__name__}: {exc}", item, exc) from exc
        primal_model = LGModel(tuple(pvars), primal if primal is not None else 0) if pvars else None
        pairing = dict(zip((v.name for v in pvars), item.dual))
        return Entity(m, primal_model, pairing, kind="toric")

    def _run_pipeline(self, item: A.PipelineItem) -> Entity:
        src = self.entity(item.source, item)
        primal, pairing = src.primal, dict(src.pairing)
        if item.primal is not None:
            primal = self.model(item.primal, item)
        log = mr.DerivationLog(src.model, primal, self.absorb_units)
        state = mr.State(src.model, primal)
        for i, node in enumerate(item.steps):
            step = self._build_step(node, state, pairing)
            try:
                state = mr.advance(log, state, step, i, self.absorb_units)
            except PipelineError as exc:
                exc.line, exc.col = node.pos
                exc.pipeline = item.name
                raise
        return Entity(state.model, state.primal, pairing, log, kind="pipeline")

    def _build_step(self, node, state: mr.State, pairing: dict) -> mr.Step:
        m = state.model
        if isinstance(node, A.ChangeStep):
            return self._change_step(node, m)
        if isinstance(node, A.DualChangeStep):
            if state.primal is None:
                raise _located("dual-change needs a primal model", node)
            pv = state.primal.vars
            images = []
            for name, e in node.images:
                if name not in state.primal.names:
                    raise _located(f"{name!r} is not a primal variable", e)
                raw = eval_raw(e, {v.name: v for v in pv})
                if len(raw) != 1:
                    raise _located("dual-change images must be monomials", e)
                (mono, c), = raw.items()
                if c not in (1, -1):
                    raise _located("dual-change images must have coefficient 1 or -1", e)
                images.append((name, int(c), mono))
            pair = dict(pairing)
            pair.update(dict(node.pairing))
            return mr.DualChange(tuple(images), tuple(sorted(pair.items())))
        if isinstance(node, A.CompactifyStep):
            return mr.Compactify(node.names)
        if isinstance(node, A.KnorrerReduceStep):
            return mr.KnorrerReduce(node.var)
        if isinstance(node, A.KnorrerExpandStep):
            return mr.KnorrerExpand(eval_poly(node.expr, m.vars), node.var)
        if isinstance(node, A.EliminateStep):
            return mr.Eliminate(node.index, node.var, node.promote)
        if isinstance(node, A.SliceStep):
            value = GENERIC if node.value is None else node.value
            try:
                spec = SliceSpec(node.sigma, value, node.param or "lam")
            except ValueError as exc:
                raise _located(str(exc), node, exc) from exc
            return mr.Slice(spec)
        if isinstance(node, A.CompleteStep):
            try:
                spec = CompletionSpec(node.sigma, node.value, node.var or "h",
                                      node.order if node.order is not None else self.formal_order)
            except ValueError as exc:
                raise _located(str(exc), node, exc) from exc
            return mr.Complete(spec)
        if isinstance(node, A.AddTermStep):
            return mr.AddTerm(eval_poly(node.expr, m.vars))
        if isinstance(node, A.AbsorbUnitsStep):
            return mr.AbsorbUnits()
        raise TypeError(f"not a step: {node!r}")

    def _change_step(self, node: A.ChangeStep, m: LGModel) -> mr.Step:
        declared: dict[str, Variable] = {}
        for d in node.declare:
            for v in _variables(d, self.formal_order):
                if v.name in declared:
                    raise _located(f"variable {v.name!r} declared twice", d)
                declared[v.name] = v
        mapped = [n for n, _ in node.images]
        if len(set(mapped)) != len(mapped):
            raise _located("a variable is mapped twice", node)
        for n, e in node.images:
            if n not in m.names:
                raise _located(f"unknown variable {n!r}", e)
        used: list[str] = []
        for _, e in node.images:
            for n in _names_in(e):
                if n not in used:
                    used.append(n)
        target: list[Variable] = []
        for v in m.vars:
            if v.name in mapped and v.name not in used and v.name not in declared:
                continue
            target.append(declared.get(v.name, v))
        known = {v.name for v in target}
        for n, v in declared.items():
            if n not in known:
                target.append(v)
                known.add(n)
        scope = {v.name: v for v in target}
        images = {}
        for n, e in node.images:
            images[n] = eval_raw(e, scope)
        return mr.Change.build(images, target)

    def transition(self, name: str, node=None):
        item = self.items.get(name)
        if not isinstance(item, A.TransitionItem):
            raise _located(f"no transition named {name!r}", node)
        a = self.model(item.source, item)
        b = self.model(item.target, item)
        scope = {v.name: Variable(v.name) for v in b.vars}
        images = {n: eval_raw(e, scope) for n, e in item.images}
        for n, _ in item.images:
            if n not in a.names:
                raise _located(f"{n!r} is not a variable of {item.source!r}", item)
        return a, b, images

    # expectations

    def check(self, e: A.Expect) -> ExpectResult:
        line = e.pos[0]
        try:
            passed, detail = self._check(e)
        except (SemanticError, ResourceBudgetExceeded):
            raise
        except TmcError as exc:
            if isinstance(exc, PipelineError):
                raise
            return ExpectResult(e.kind, e.subject, line, False, f"{type(exc).__name__}: {exc}")
        return ExpectResult(e.kind, e.subject, line, passed, detail)

    def check_all(self) -> list[ExpectResult]:
        return [self.check(e) for e in self.expectations]

    def _check(self, e: A.Expect) -> tuple[bool, str]:
        k = e.kind
        if k == "sign":
            got = mr.sphere_orbit_sign(e.ints[0])
            return got == e.ints[1], f"sign {got}"
        if k == "compatible":
            a, b, images = self.transition(e.subject, e)
            ok = mr.check_transition(a, b, images)
            return ok, "potentials agree on the overlap" if ok else "potentials differ on the overlap"
        m = self.model(e.subject, e)
        if k == "potential-equals":
            want = eval_poly(e.expr, m.vars)
            return m.potential == want, f"potential {m.potential}"
        if k == "sigma-equals":
            try:
                got = m.sigma(e.name)
            except TmcError:
                return False, f"no sigma {e.name!r}"
            want = eval_poly(e.expr, m.vars)
            return got == want, f"sigma {e.name} = {got}"
        if k == "constraints-equal":
            want = [eval_poly(x, m.vars) for x in e.exprs]
            got = list(m.constraints)
            ok = len(want) == len(got)
            pool = list(got)
            for w in want:
                match = next((g for g in pool if cr.same_up_to_scalar(g, w)), None)
                if match is None:
                    ok = False
                    break
                pool.remove(match)
            return ok, "constraints " + ", ".join(map(str, got)) if got else "no constraints"
        if k == "vars":
            got = sorted((v.name, v.spec) for v in m.vars)
            want = sorted(e.exprs)
            return got == want, "vars " + ", ".join(f"{n}: {d}" for n, d in got)
        if k in ("crit-empty", "crit-nonempty"):
            r = cr.is_crit_empty(m, e.over, self.budget)
            want = cr.EMPTY if k == "crit-empty" else cr.NON_EMPTY
            return r.result == want, r.result
        if k == "crit-contained-in":
            g = eval_poly(e.expr, m.vars)
            r = cr.crit_contained_in(m, g, e.over, self.budget)
            return r.result == cr.CONTAINED, r.result
        if k == "critical-values":
            r = cr.critical_values(m, e.over, self.budget)
            got = r.classification
            detail = f"{got} " + ", ".join(map(str, r.polys))
            if e.outcome == "all":
                return got == cr.ALL_VALUES, detail
            if e.outcome == "empty":
                return got == cr.EMPTY, detail
            if e.outcome == "subvariety":
                return got == cr.SUBVARIETY, detail
            want = eval_poly(e.expr, m.vars)
            if got != cr.HYPERSURFACE:
                return False, detail
            return cr.same_up_to_scalar(r.polys[0].over(m.vars), want), detail
        if k == "grading":
            g = lg.solve_grading(m)
            if e.outcome == "infeasible":
                return g is None, "infeasible" if g is None else "feasible"
            if g is None:
                return False, "infeasible"
            detail = ", ".join(f"{n} = {w}" for n, w in g.weights.items()) + f" dof {g.dof}"
            ok = all(g.weights.get(n) == w for n, w in e.weights)
            if e.ints:
                ok = ok and g.dof == e.ints[0]
            return ok, detail
        if k == "crit-points":
            pts = nm.numeric_crit_search(m, trials=self.trials, seed=self.seed)
            pts = _cluster(pts)
            ok = len(pts) == e.ints[0]
            dets = [abs(nm.hessian_det(m, p)) for p in pts]
            if e.outcome == "nondegenerate":
                ok = ok and all(d > 1e-6 for d in dets)
            return ok, f"{len(pts)} points, |hessian det| " + ", ".join(f"{d:.3g}" for d in dets)
        raise TypeError(f"unknown expectation kind {k!r}")

    def numeric_crosscheck(self, e: A.Expect) -> tuple[bool, str] | None:
        """Compare an exact critical-locus expectation with the numeric oracle.

        Returns None for expectations the oracle cannot speak to.
        """
        if e.kind not in ("crit-empty", "crit-nonempty", "crit-contained-in") or e.over:
            return None
        m = self.model(e.subject, e)
        pts = nm.numeric_crit_search(m, trials=self.trials, seed=self.seed)
        if e.kind == "crit-empty":
            return not pts, f"{len(pts)} numeric points"
        if e.kind == "crit-nonempty":
            return bool(pts), f"{len(pts)} numeric points"
        g = eval_poly(e.expr, m.vars)
        worst = max((abs(nm.evaluate_at(g, p)) for p in pts), default=0.0)
        return worst < nm.CONTAINMENT_TOL, f"{len(pts)} numeric points, max |g| {worst:.2e}"


def _names_in(node) -> list[str]:
    if isinstance(node, A.Name):
        return [node.name]
    if isinstance(node, A.Neg):
        return _names_in(node.operand)
    if isinstance(node, A.Pow):
        return _names_in(node.base)
    if isinstance(node, A.BinOp):
        return _names_in(node.left) + _names_in(node.right)
    return []


def _cluster(points, tol: float = 1e-5):
    """Merge numeric points closer than ``tol`` in every coordinate."""
    out = []
    for p in points:
        if not any(all(abs(p[k] - q[k]) < tol for k in p) for q in out):
            out.append(p)
    return out


def load_document(text: str, **options) -> Document:
    return Document(parse_model_file(text), **options)
