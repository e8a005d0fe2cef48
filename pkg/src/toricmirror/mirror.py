"""Mirror constructions from toric data, and replayable transformation pipelines."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Mapping, Sequence

from . import lgmodel as lg
from .algebra import LaurentPoly, Monomial, MonomialMap, Variable
from .errors import (
    DuplicateRay,
    ModelError,
    NotInvariant,
    PipelineError,
    TmcError,
)
from .lgmodel import CompletionSpec, LGModel, SliceSpec


@dataclass(frozen=True)
class ToricInput:
    """Rays of a fan and circle-action weights in the cocharacter lattice.

    ``dual_names`` names the mirror torus coordinates, one per lattice
    coordinate.  ``primal`` optionally carries a potential on the primal side
    whose monomials must be invariant under every circle action.
    """

    rays: tuple[tuple[int, ...], ...]
    dual_names: tuple[str, ...]
    action_weights: tuple[tuple[str, tuple[int, ...]], ...] = ()
    primal_names: tuple[str, ...] = ()
    primal: LaurentPoly | None = None

    def __post_init__(self):
        n = len(self.dual_names)
        object.__setattr__(self, "rays", tuple(tuple(int(a) for a in r) for r in self.rays))
        object.__setattr__(self, "dual_names", tuple(self.dual_names))
        object.__setattr__(self, "action_weights",
                           tuple((name, tuple(int(a) for a in l)) for name, l in self.action_weights))
        for r in self.rays:
            if len(r) != n:
                raise ModelError(f"ray {r} does not have rank {n}")
            if not any(r):
                raise ModelError("rays must be nonzero")
        for name, l in self.action_weights:
            if len(l) != n:
                raise ModelError(f"action {name!r} does not have rank {n}")
            if not any(l):
                raise ModelError(f"action {name!r} is zero")
        if self.primal_names and len(self.primal_names) != n:
            raise ModelError("primal variables must match the lattice rank")

    @property
    def rank(self) -> int:
        return len(self.dual_names)


def _lattice_monomial(names: Sequence[str], vec: Sequence[int]) -> Monomial:
    return Monomial(dict(zip(names, vec)))


def mirror_superpotential(t: ToricInput) -> LGModel:
    """The dual torus with one monomial per ray (repeated rays add up)."""
    vs = tuple(Variable(n) for n in t.dual_names)
    terms: dict[Monomial, Fraction] = {}
    for r in t.rays:
        mono = _lattice_monomial(t.dual_names, r)
        if mono in terms:
            warnings.warn(f"ray {r} listed more than once", DuplicateRay, stacklevel=2)
        terms[mono] = terms.get(mono, Fraction(0)) + 1
    return LGModel(vs, LaurentPoly(vs, terms))


def pairing_value(exponents: Sequence[int], l: Sequence[int]) -> int:
    return sum(int(a) * int(b) for a, b in zip(exponents, l))


def mirror_circle_action(m: LGModel, l: Sequence[int], name: str = "s",
                         primal: LaurentPoly | None = None,
                         basis: Sequence[str] | None = None) -> LGModel:
    """Append the monomial ``sigma = l`` on the mirror.

    ``basis`` lists the mirror coordinates dual to the lattice coordinates
    (default: the first ``len(l)`` variables).  Invariance is checked against
    the primal potential, whose variables are read in the same lattice order.
    """
    basis = tuple(basis) if basis is not None else m.names[: len(l)]
    if len(basis) != len(l):
        raise ModelError("action weight has the wrong rank")
    if not any(l):
        raise ModelError("action weight is zero")
    if primal is not None:
        pnames = primal.names
        for mono in primal.sorted_monomials():
            vec = mono.vector(pnames)
            value = pairing_value(vec, l)
            if value:
                raise NotInvariant(vec, value)
    sigma = LaurentPoly.monomial(m.vars, _lattice_monomial(basis, l))
    if name in dict(m.sigmas):
        raise ModelError(f"sigma {name!r} already present")
    return replace(m, sigmas=m.sigmas + ((name, sigma),))


def mirror_model(t: ToricInput) -> LGModel:
    m = mirror_superpotential(t)
    for name, l in t.action_weights:
        m = mirror_circle_action(m, l, name, t.primal, t.dual_names)
    return m


def dual_substitution(mm: MonomialMap, pairing: Mapping[str, str]) -> dict[str, Monomial]:
    """Images of the dual map, keyed by mirror variable name."""
    dual = mm.dual(pairing)
    return {n: mono for n, _, mono in dual.images}


def primal_change_with_dual(primal: LGModel, mirror: LGModel, mm: MonomialMap,
                            pairing: Mapping[str, str]) -> tuple[LGModel, LGModel]:
    """Change primal coordinates by ``new_v = mm(v)`` and apply the dual map on the mirror."""
    new_primal = lg.change_coordinates(primal, mm)
    images = dual_substitution(mm, pairing)
    for n in images:
        mirror.var(n)
    new_mirror = lg.change_variables(mirror, images, mirror.vars)
    return new_primal, new_mirror


def sphere_orbit_sign(planes_rotated: int) -> int:
    """Sign of the spectral component carrying the invariant sphere.

    Rotating ``k`` orthogonal planes gives orbits in the frame bundle that are
    contractible exactly when ``k`` is even.
    """
    if planes_rotated < 0:
        raise ValueError("number of rotated planes must be nonnegative")
    return -1 if planes_rotated % 2 else 1


def check_transition(a: LGModel, b: LGModel, images: Mapping[str, object]) -> bool:
    """Whether the chart transition carries ``a``'s potential and sigmas to ``b``'s.

    Both charts are compared on their common torus, so all coordinates are
    treated as invertible there.
    """
    tb = tuple(Variable(v.name) for v in b.vars)
    ta = tuple(Variable(v.name) for v in a.vars)
    moved = a.potential.over(ta).substitute(images, tb)
    if moved != b.potential.over(tb):
        return False
    for name, s in a.sigmas:
        if name in dict(b.sigmas):
            if s.over(ta).substitute(images, tb) != b.sigma(name).over(tb):
                return False
    return True


# pipelines


def format_terms(terms: Mapping[Monomial, Fraction], variables: Sequence[Variable]) -> str:
    """Canonical string of possibly domain-invalid terms."""
    return LaurentPoly(tuple(Variable(v.name) for v in variables), terms).canonical()


@dataclass
class State:
    model: LGModel
    primal: LGModel | None = None


class Step:
    op = "step"

    def apply(self, state: State) -> tuple[State, str]:
        raise NotImplementedError

    def params(self) -> dict:
        return {}


@dataclass(frozen=True)
class Change(Step):
    """Substitute each named variable by an expression in the target variables."""

    images: tuple[tuple[str, tuple[tuple[Monomial, Fraction], ...]], ...]
    target: tuple[Variable, ...]
    op = "change"

    @classmethod
    def build(cls, images: Mapping[str, object], target: Sequence[Variable]) -> "Change":
        from .algebra import _coerce_terms

        items = []
        for name, img in images.items():
            terms = _coerce_terms(img)
            items.append((name, tuple(sorted(terms.items(), key=lambda t: repr(t[0])))))
        return cls(tuple(items), tuple(target))

    def apply(self, state):
        images = {n: dict(t) for n, t in self.images}
        for n in images:
            state.model.var(n)
        return State(lg.change_variables(state.model, images, self.target), state.primal), ""

    def params(self):
        return {
            "images": {n: format_terms(dict(t), self.target) for n, t in self.images},
            "target": [v.name + ":" + v.spec for v in self.target],
        }


@dataclass(frozen=True)
class DualChange(Step):
    """Primal coordinate change ``new_v = image`` with the dual change on the mirror."""

    images: tuple[tuple[str, int, Monomial], ...]
    pairing: tuple[tuple[str, str], ...]
    op = "dual-change"

    def apply(self, state):
        if state.primal is None:
            raise ModelError("dual-change needs a primal model")
        mm = MonomialMap.build(state.primal.vars, state.primal.vars,
                               {n: (s, m) for n, s, m in self.images})
        pairing = dict(self.pairing)
        primal, mirror = primal_change_with_dual(state.primal, state.model, mm, pairing)
        dual = dual_substitution(mm, pairing)
        note = ", ".join(f"{n} -> {m.format(state.model.names) or '1'}"
                         for n, m in dual.items() if m != Monomial({n: 1}))
        return State(mirror, primal), "dual map: " + note

    def params(self):
        return {
            "images": {n: ("-" if s < 0 else "") + (m.format() or "1") for n, s, m in self.images},
            "pairing": dict(self.pairing),
        }


@dataclass(frozen=True)
class Compactify(Step):
    names: tuple[str, ...]
    op = "compactify"

    def apply(self, state):
        return State(lg.compactify(state.model, self.names), state.primal), ""

    def params(self):
        return {"vars": list(self.names)}


@dataclass(frozen=True)
class KnorrerReduce(Step):
    var: str
    op = "knorrer-reduce"

    def apply(self, state):
        f, _ = lg.knorrer_split(state.model.potential, self.var)
        out = lg.knorrer_reduce(state.model, self.var)
        return State(out, state.primal), f"{self.var}: constraint {f.over(out.vars)}"

    def params(self):
        return {"var": self.var}


@dataclass(frozen=True)
class KnorrerExpand(Step):
    f: LaurentPoly
    var: str
    op = "knorrer-expand"

    def apply(self, state):
        return State(lg.knorrer_expand(state.model, self.f.over(state.model.vars), self.var),
                     state.primal), ""

    def params(self):
        return {"f": self.f.canonical(), "var": self.var}


@dataclass(frozen=True)
class Eliminate(Step):
    index: int
    var: str
    promote: tuple[str, ...] = ()
    op = "eliminate"

    def apply(self, state):
        out = lg.eliminate_constraint(state.model, self.index, self.var, self.promote)
        return State(out, state.primal), ""

    def params(self):
        return {"index": self.index, "var": self.var, "promote": list(self.promote)}


@dataclass(frozen=True)
class Slice(Step):
    spec: SliceSpec
    op = "slice"

    def apply(self, state):
        v, e = lg.slice_variable(state.model, self.spec.sigma)
        out = lg.slice(state.model, self.spec)
        return State(out, state.primal), f"solved for {v}"

    def params(self):
        return {"sigma": self.spec.sigma, "value": str(self.spec.value), "param": self.spec.param}


@dataclass(frozen=True)
class Complete(Step):
    spec: CompletionSpec
    op = "complete"

    def apply(self, state):
        return State(lg.complete(state.model, self.spec), state.primal), ""

    def params(self):
        s = self.spec
        return {"sigma": s.sigma, "value": str(s.value), "var": s.var, "order": s.order}


@dataclass(frozen=True)
class AddTerm(Step):
    term: LaurentPoly
    op = "add-term"

    def apply(self, state):
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            out = lg.add_divisor_monomial(state.model, self.term.over(state.model.vars))
        note = "; ".join(str(w.message) for w in caught)
        return State(out, state.primal), note

    def params(self):
        return {"term": self.term.canonical()}


@dataclass(frozen=True)
class AbsorbUnits(Step):
    op = "absorb-units"

    def apply(self, state):
        unit, out = lg.absorb_potential_units(state.model)
        return State(out, state.primal), ("stripped " + unit.format(out.names)) if not unit.is_one() else ""


@dataclass
class LogEntry:
    index: int
    step: Step
    model: LGModel
    primal: LGModel | None
    absorbed: str | None
    note: str

    def to_json(self) -> dict:
        out = {
            "step": self.index,
            "op": self.step.op,
            "params": self.step.params(),
            "model": self.model.snapshot(),
            "note": self.note,
            "absorbed": self.absorbed,
        }
        if self.primal is not None:
            out["primal"] = self.primal.snapshot()
        return out


@dataclass
class DerivationLog:
    initial: LGModel
    initial_primal: LGModel | None = None
    absorb_units: bool = False
    entries: list[LogEntry] = field(default_factory=list)

    @property
    def final(self) -> LGModel:
        return self.entries[-1].model if self.entries else self.initial

    def steps(self) -> list[Step]:
        return [e.step for e in self.entries]

    def replay(self) -> LGModel:
        model, _ = run_pipeline(self.initial, self.steps(), self.initial_primal, self.absorb_units)
        return model

    def to_json(self) -> list[dict]:
        return [e.to_json() for e in self.entries]


def advance(log: DerivationLog, state: State, step: Step, index: int,
            absorb_units: bool = False) -> State:
    """Apply one step, append it to ``log`` and return the new state."""
    try:
        state, note = step.apply(state)
        absorbed = None
        if absorb_units:
            unit, m = lg.absorb_potential_units(state.model)
            if not unit.is_one():
                absorbed = unit.format(m.names)
                state = State(m, state.primal)
    except TmcError as exc:
        raise PipelineError(index, exc, log) from exc
    log.entries.append(LogEntry(index, step, state.model, state.primal, absorbed, note))
    return state


def run_pipeline(model: LGModel, steps: Sequence[Step], primal: LGModel | None = None,
                 absorb_units: bool = False) -> tuple[LGModel, DerivationLog]:
    """Apply ``steps`` in order.  With ``absorb_units`` a common torus monomial
    factor of the potential is stripped (and logged) after every step."""
    log = DerivationLog(model, primal, absorb_units)
    state = State(model, primal)
    for i, step in enumerate(steps):
        state = advance(log, state, step, i, absorb_units)
    return state.model, log
