"""Landau-Ginzburg models and their structural transformations."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .algebra import (
    DEFAULT_FORMAL_ORDER,
    ONE,
    Domain,
    LaurentPoly,
    Monomial,
    MonomialMap,
    NotInvertible,
    Variable,
    _raw_inverse,
    _raw_mul,
    check_unique,
)
from .errors import (
    GradingBroken,
    ModelError,
    NameClash,
    NoUnitExponentVariable,
    NotLinearInP,
    NotMonomialSigma,
    NotSingleVariableSigma,
    NotSolvable,
    UnknownVariable,
)

GENERIC = "generic"


def _poly(variables, value) -> LaurentPoly:
    if isinstance(value, LaurentPoly):
        return value.over(variables)
    return LaurentPoly.const(variables, value)


@dataclass(frozen=True)
class LGModel:
    """Variables, a superpotential, named circle-action functions and constraints.

    ``inverted`` lists functions known to be nonvanishing (left behind when a
    torus coordinate is solved for); they take part in critical-locus analysis.
    """

    vars: tuple[Variable, ...]
    potential: LaurentPoly
    sigmas: tuple[tuple[str, LaurentPoly], ...] = ()
    constraints: tuple[LaurentPoly, ...] = ()
    inverted: tuple[LaurentPoly, ...] = ()

    def __post_init__(self):
        vs = tuple(self.vars)
        check_unique(vs)
        object.__setattr__(self, "vars", vs)
        object.__setattr__(self, "potential", _poly(vs, self.potential))
        sig = tuple((name, _poly(vs, p)) for name, p in self.sigmas)
        if len({n for n, _ in sig}) != len(sig):
            raise NameClash("duplicate sigma name")
        for name, p in sig:
            if p.is_monomial() and not p.is_unit():
                raise ModelError(f"monomial sigma {name!r} must be a unit in torus variables")
        object.__setattr__(self, "sigmas", sig)
        object.__setattr__(self, "constraints", tuple(_poly(vs, c) for c in self.constraints))
        object.__setattr__(self, "inverted", tuple(_poly(vs, c) for c in self.inverted))

    @classmethod
    def build(cls, variables, potential=0, sigmas=None, constraints=(), inverted=()):
        variables = tuple(variables)
        if isinstance(sigmas, Mapping):
            sigmas = tuple(sigmas.items())
        return cls(variables, _poly(variables, potential), tuple(sigmas or ()),
                   tuple(constraints), tuple(inverted))

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.vars)

    def var(self, name: str) -> Variable:
        for v in self.vars:
            if v.name == name:
                return v
        raise UnknownVariable(f"variable {name!r} is not declared")

    def sigma(self, name: str) -> LaurentPoly:
        for n, p in self.sigmas:
            if n == name:
                return p
        raise UnknownVariable(f"no sigma named {name!r}")

    def poly(self, value) -> LaurentPoly:
        return _poly(self.vars, value)

    def x(self, name: str) -> LaurentPoly:
        return LaurentPoly.var(self.vars, name)

    @property
    def is_empty(self) -> bool:
        """True when some constraint is a nonzero constant."""
        return any(c.is_constant() and not c.is_zero() for c in self.constraints)

    @property
    def weights(self) -> dict[str, Fraction] | None:
        if all(v.weight is not None for v in self.vars):
            return {v.name: v.weight for v in self.vars}
        return None

    def all_polys(self) -> list[LaurentPoly]:
        return [self.potential, *(p for _, p in self.sigmas), *self.constraints, *self.inverted]

    def transform(self, fn, variables, drop_sigma: str | None = None) -> "LGModel":
        """Apply ``fn`` to every polynomial, landing over ``variables``."""
        variables = tuple(variables)
        return LGModel(
            variables,
            fn(self.potential),
            tuple((n, fn(p)) for n, p in self.sigmas if n != drop_sigma),
            tuple(fn(c) for c in self.constraints),
            tuple(fn(c) for c in self.inverted),
        )

    def reorder(self, names: Sequence[str]) -> "LGModel":
        """The same model with its variables listed in the order ``names``."""
        if sorted(names) != sorted(self.names):
            raise UnknownVariable("reorder needs a permutation of the variable names")
        vs = tuple(self.var(n) for n in names)
        return self.transform(lambda p: p.over(vs), vs)

    def same_as(self, other: "LGModel") -> bool:
        """Equality up to the order in which variables are listed."""
        if sorted(self.names) != sorted(other.names):
            return False
        return self.reorder(other.names) == other

    def snapshot(self) -> dict:
        return {
            "vars": [
                {
                    "name": v.name,
                    "domain": v.spec,
                    "weight": None if v.weight is None else str(v.weight),
                }
                for v in self.vars
            ],
            "potential": self.potential.canonical(),
            "sigmas": {n: p.canonical() for n, p in self.sigmas},
            "constraints": [c.canonical() for c in self.constraints],
            "inverted": [c.canonical() for c in self.inverted],
        }


# grading


@dataclass(frozen=True)
class Grading:
    weights: dict[str, Fraction]
    dof: int


def solve_grading(m: LGModel) -> Grading | None:
    """Weights making every potential monomial weigh 2 and every sigma monomial 0.

    Returns the particular solution with free parameters set to zero together
    with the dimension of the solution space, or None when infeasible.
    """
    import sympy

    names = m.names
    rows, rhs = [], []
    for mono in m.potential.terms:
        rows.append(list(mono.vector(names)))
        rhs.append(2)
    for _, s in m.sigmas:
        for mono in s.terms:
            rows.append(list(mono.vector(names)))
            rhs.append(0)
    n = len(names)
    if not rows:
        return Grading({x: Fraction(0) for x in names}, n)
    A = sympy.Matrix(rows)
    b = sympy.Matrix(rhs)
    try:
        sol, params = A.gauss_jordan_solve(b)
    except ValueError:
        return None
    sol = sol.subs({p: 0 for p in params})
    weights = {x: Fraction(int(sol[i].p), int(sol[i].q)) for i, x in enumerate(names)}
    return Grading(weights, len(params))


def monomial_weight(mono: Monomial, weights: Mapping[str, Fraction]) -> Fraction:
    return sum((Fraction(weights[n]) * e for n, e in mono.items()), Fraction(0))


def grading_holds(m: LGModel, weights: Mapping[str, Fraction]) -> bool:
    return all(monomial_weight(t, weights) == 2 for t in m.potential.terms) and all(
        monomial_weight(t, weights) == 0 for _, s in m.sigmas for t in s.terms
    )


def assign_grading(m: LGModel, weights: Mapping[str, Fraction]) -> LGModel:
    if not grading_holds(m, weights):
        raise ModelError("weights do not give the potential weight 2 and sigmas weight 0")
    vs = tuple(v.with_weight(weights[v.name]) for v in m.vars)
    return m.transform(lambda p: p.over(vs), vs)


def _clear_weights(m: LGModel) -> LGModel:
    vs = tuple(v.with_weight(None) for v in m.vars)
    return m.transform(lambda p: p.over(vs), vs)


# Knorrer periodicity


def knorrer_split(W: LaurentPoly, p: str) -> tuple[LaurentPoly, LaurentPoly]:
    """Write ``W = p*f + g`` with ``p`` absent from ``f`` and ``g``."""
    groups = W.collect(p)
    bad = sorted(k for k in groups if k not in (0, 1))
    if bad:
        raise NotLinearInP(f"potential has degree {bad[-1]} in {p!r}")
    zero = LaurentPoly.zero(W.vars)
    return groups.get(1, zero), groups.get(0, zero)


def knorrer_reduce(m: LGModel, p: str) -> LGModel:
    """Replace ``(X x C_p, p*f + g)`` by the hypersurface ``{f = 0}`` with potential ``g``."""
    var = m.var(p)
    if var.domain is not Domain.AFFINE:
        raise NotLinearInP(f"{p!r} must be an affine coordinate")
    for name, s in m.sigmas:
        if p in s.used_names():
            raise NotLinearInP(f"{p!r} occurs in sigma {name!r}")
    if any(p in c.used_names() for c in m.constraints + m.inverted):
        raise NotLinearInP(f"{p!r} occurs in a constraint")
    f, g = knorrer_split(m.potential, p)
    vs = tuple(v for v in m.vars if v.name != p)
    out = replace(m, potential=g).transform(lambda q: q.over(vs), vs)
    new = () if f.is_zero() else (f.over(vs),)
    return replace(out, constraints=out.constraints + new)


def knorrer_expand(m: LGModel, f: LaurentPoly, p: str, position: int | None = None) -> LGModel:
    """Trade the hypersurface ``{f = 0}`` for the potential ``p*f + W``.

    When ``f`` is one of the model's constraints it is consumed, making this the
    inverse of :func:`knorrer_reduce`; otherwise ``m`` is read as the ambient
    space of the hypersurface.
    """
    if p in m.names:
        raise NameClash(f"variable {p!r} already exists")
    f = m.poly(f)
    constraints = list(m.constraints)
    for i in range(len(constraints) - 1, -1, -1):
        if constraints[i] == f:
            del constraints[i]
            break
    vs = list(m.vars)
    vs.insert(len(vs) if position is None else position, Variable(p, Domain.AFFINE))
    vs = tuple(vs)
    out = replace(m, constraints=tuple(constraints)).transform(lambda q: q.over(vs), vs)
    W = LaurentPoly.var(vs, p) * f.over(vs) + out.potential
    return replace(out, potential=W)


# constraints


def eliminate_constraint(m: LGModel, index: int, v: str, promote: Iterable[str] = ()) -> LGModel:
    """Solve constraint ``index`` for ``v`` and substitute everywhere.

    The constraint must read ``A * v**e + B`` with ``e = +-1``, ``A`` a single
    term and ``B`` free of ``v``.  ``promote`` names affine variables of ``A``
    that become torus coordinates; this is only allowed when ``B`` is itself a
    unit, so that ``A`` cannot vanish on the hypersurface.
    """
    try:
        c = m.constraints[index]
    except IndexError:
        raise NotSolvable(f"no constraint with index {index}") from None
    var = m.var(v)
    groups = c.collect(v)
    powers = sorted(k for k in groups if k != 0)
    if not powers:
        raise NotSolvable(f"{v!r} does not occur in constraint {index}")
    if len(powers) != 1 or powers[0] not in (1, -1):
        raise NotSolvable(f"constraint is not linear in {v!r}")
    e = powers[0]
    A_old = groups[e]
    B_old = groups.get(0, LaurentPoly.zero(m.vars))
    if not A_old.is_monomial():
        raise NotSolvable(f"coefficient of {v!r} is not a monomial")
    promote = set(promote)
    for name in promote:
        if m.var(name).domain is not Domain.AFFINE:
            raise NotSolvable(f"only affine variables can be promoted ({name!r})")
        if name not in A_old.used_names():
            raise NotSolvable(f"{name!r} does not divide the coefficient of {v!r}")
    if promote and not (B_old.is_unit() or (B_old.is_constant() and not B_old.is_zero())):
        raise NotSolvable("promotion needs the remaining terms to form a unit")

    vs = tuple(
        x.with_domain(Domain.TORUS) if x.name in promote else x for x in m.vars if x.name != v
    )
    A = A_old.over(vs)
    B = B_old.over(vs)
    if not A.is_unit():
        raise NotSolvable(f"coefficient of {v!r} is not a unit monomial")
    A_inv = _raw_inverse(A.terms)
    minus_B = dict((-B).terms)
    if e == 1:
        image = _raw_mul(minus_B, A_inv)
        inverse = _raw_mul(dict((-A).terms), _raw_inverse(B.terms)) if B.is_monomial() else None
    else:
        if not B.is_monomial():
            raise NotSolvable(f"{v!r} appears inverted and the remainder is not a monomial")
        image = _raw_mul(dict((-A).terms), _raw_inverse(B.terms))
        inverse = _raw_mul(minus_B, A_inv)
    inverses = {v: inverse} if inverse is not None else None

    def sub(q: LaurentPoly) -> LaurentPoly:
        return q.substitute({v: image}, vs, inverses)

    try:
        out = LGModel(
            vs,
            sub(m.potential),
            tuple((n, sub(s)) for n, s in m.sigmas),
            tuple(sub(q) for i, q in enumerate(m.constraints) if i != index),
            tuple(sub(q) for q in m.inverted),
        )
    except NotInvertible as exc:
        raise NotSolvable(f"cannot transport an expression through {v!r}: {exc}") from exc
    if var.domain is Domain.TORUS:
        solved = LaurentPoly(vs, image)
        if not solved.is_unit():
            out = replace(out, inverted=out.inverted + (solved,))
    return out


# divisors, compactification, coordinate changes


def add_divisor_monomial(m: LGModel, term) -> LGModel:
    """Add a single term (a divisor's monomial) to the potential."""
    if isinstance(term, Monomial):
        term = LaurentPoly.monomial(m.vars, term)
    term = m.poly(term)
    if len(term.terms) > 1:
        raise ModelError("add_divisor_monomial expects a single term")
    out = replace(m, potential=m.potential + term)
    weights = m.weights
    if weights is not None and not term.is_zero():
        mono = next(iter(term.terms))
        if monomial_weight(mono, weights) != 2:
            warnings.warn(
                f"added term {term} has weight {monomial_weight(mono, weights)}, not 2",
                GradingBroken,
                stacklevel=2,
            )
            out = _clear_weights(out)
    return out


def compactify(m: LGModel, names: Iterable[str]) -> LGModel:
    """Declare torus coordinates affine (a partial compactification)."""
    names = set(names)
    for n in names:
        if m.var(n).domain is not Domain.TORUS:
            raise ModelError(f"{n!r} is not a torus coordinate")
    vs = tuple(v.with_domain(Domain.AFFINE) if v.name in names else v for v in m.vars)
    return m.transform(lambda p: p.over(vs), vs)


def change_variables(m: LGModel, images: Mapping[str, object], target: Sequence[Variable],
                     inverses: Mapping[str, object] | None = None) -> LGModel:
    """Substitute ``images`` (polys, monomials or raw term maps over ``target``)."""
    target = tuple(target)
    return m.transform(lambda p: p.substitute(images, target, inverses), target)


def apply_monomial_map(m: LGModel, mm: MonomialMap, target: Sequence[Variable] | None = None) -> LGModel:
    """Substitute a monomial map; ``target`` overrides the domains of its targets."""
    target = tuple(target) if target is not None else mm.target
    images = {n: {mono: Fraction(s)} for n, s, mono in mm.images}
    return change_variables(m, images, target)


def change_coordinates(m: LGModel, mm: MonomialMap) -> LGModel:
    """Rewrite the model in the coordinates ``new_v = mm(v)`` (substitutes the inverse)."""
    inv = mm.inverse()
    return apply_monomial_map(m, inv, tuple(m.var(v.name) if v.name in m.names else v
                                            for v in inv.target))


def specialize(m: LGModel, values: Mapping[str, object]) -> LGModel:
    vs = tuple(v for v in m.vars if v.name not in values)
    return m.transform(lambda p: p.specialize(values), vs)


# slicing and completion


@dataclass(frozen=True)
class SliceSpec:
    sigma: str
    value: Fraction | str
    param: str = "lam"

    def __post_init__(self):
        if self.value != GENERIC:
            object.__setattr__(self, "value", Fraction(self.value))
            if self.value == 0:
                raise ValueError("slice value must be nonzero")


@dataclass(frozen=True)
class CompletionSpec:
    sigma: str
    value: Fraction
    var: str = "h"
    order: int = DEFAULT_FORMAL_ORDER

    def __post_init__(self):
        object.__setattr__(self, "value", Fraction(self.value))
        if self.value == 0:
            raise ValueError("completion value must be nonzero")
        if self.order < 2:
            raise ValueError("completion order must be at least 2")


def slice_variable(m: LGModel, sigma: str) -> tuple[str, int]:
    """The variable a slice solves for: the first torus variable (declaration
    order) occurring in the sigma monomial with exponent +-1."""
    s = m.sigma(sigma)
    if not s.is_monomial():
        raise NotMonomialSigma(f"sigma {sigma!r} is not a single monomial")
    mono = next(iter(s.terms))
    for v in m.vars:
        e = mono.get(v.name)
        if v.domain is Domain.TORUS and e in (1, -1):
            return v.name, e
    raise NoUnitExponentVariable(f"sigma {sigma!r} has no torus variable with exponent +-1")


def slice(m: LGModel, spec: SliceSpec) -> LGModel:
    """Restrict to the hypersurface ``sigma = value``, removing one variable."""
    v, e = slice_variable(m, spec.sigma)
    (mono, c), = m.sigma(spec.sigma).terms.items()
    rest = mono.without(v)
    # sigma = c * v**e * rest = value  =>  v = (value / c)**e * rest**(-e)
    if spec.value == GENERIC:
        if spec.param in m.names:
            raise NameClash(f"variable {spec.param!r} already exists")
        vs = tuple(Variable(spec.param) if x.name == v else x for x in m.vars)
        image = {Monomial({spec.param: e}) * rest ** (-e): Fraction(1) / c ** e}
    else:
        vs = tuple(x for x in m.vars if x.name != v)
        image = {rest ** (-e): (spec.value / c) ** e}
    return m.transform(lambda p: p.substitute({v: image}, vs), vs, drop_sigma=spec.sigma)


def complete(m: LGModel, spec: CompletionSpec) -> LGModel:
    """Substitute ``s = value + h`` with ``h`` formal of the given order."""
    s = m.sigma(spec.sigma)
    mono, coeff = (next(iter(s.terms.items())) if s.is_monomial() else (None, None))
    if mono is None or coeff != 1 or len(mono.items()) != 1 or mono.items()[0][1] != 1:
        raise NotSingleVariableSigma(f"sigma {spec.sigma!r} is not a single variable")
    name = mono.items()[0][0]
    if m.var(name).domain is not Domain.TORUS:
        raise NotSingleVariableSigma(f"{name!r} is not a torus coordinate")
    if spec.var in m.names:
        raise NameClash(f"variable {spec.var!r} already exists")
    h = Variable(spec.var, Domain.FORMAL, spec.order)
    vs = tuple(h if x.name == name else x for x in m.vars)
    lam = spec.value
    image = {ONE: lam, Monomial({spec.var: 1}): Fraction(1)}
    # 1/(lam + h) = sum_k (-1)^k h^k / lam^(k+1), truncated
    series = {Monomial({spec.var: k}): Fraction((-1) ** k) / lam ** (k + 1) for k in range(spec.order)}
    return m.transform(lambda p: p.substitute({name: image}, vs, {name: series}), vs)


def absorb_potential_units(m: LGModel) -> tuple[Monomial, LGModel]:
    from .algebra import absorb_units

    unit, W = absorb_units(m.potential)
    return unit, replace(m, potential=W)
