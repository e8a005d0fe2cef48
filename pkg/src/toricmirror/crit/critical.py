"""Exact critical-locus questions for Laurent superpotentials.

Laurent polynomials are turned into ordinary polynomials by giving every
torus variable ``x`` a witness ``x'`` with ``x*x' - 1`` in the ideal and
writing ``x^-k`` as ``x'^k``.  Functions recorded as nonvanishing on a model
(its ``inverted`` list) get a witness of their own.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from ..algebra import Domain, LaurentPoly, Monomial, Variable
from ..errors import ConstraintsPresent, ModelError
from ..lgmodel import LGModel
from .groebner import GroebnerStats, MonomialOrder, PolyIdeal, buchberger, format_poly

EMPTY = "Empty"
NON_EMPTY = "NonEmpty"
CONTAINED = "ContainedIn"
NOT_CONTAINED = "NotContained"
CRITICAL_VALUES = "CriticalValues"

ALL_VALUES = "AllValues"
HYPERSURFACE = "Hypersurface"
SUBVARIETY = "Subvariety"


@dataclass
class CritReport:
    mode: str  # "full" or "fibered"
    fibered: tuple[str, ...]
    result: str
    target: LaurentPoly | None = None
    classification: str | None = None
    polys: list[LaurentPoly] = field(default_factory=list)
    certificate: list[str] = field(default_factory=list)
    spolys: int = 0

    @property
    def hypersurface(self) -> LaurentPoly | None:
        if self.classification == HYPERSURFACE:
            return self.polys[0]
        return None

    def to_json(self) -> dict:
        out = {
            "mode": self.mode,
            "fibered": list(self.fibered),
            "result": self.result,
            "spolys": self.spolys,
        }
        if self.target is not None:
            out["target"] = self.target.canonical()
        if self.classification is not None:
            out["classification"] = self.classification
            out["polys"] = [p.canonical() for p in self.polys]
        if self.certificate:
            out["certificate"] = list(self.certificate)
        return out


def witness_name(name: str) -> str:
    return name + "'"


class Clearing:
    """Ring variables for a model and the translation of Laurent polys into them."""

    def __init__(self, m: LGModel, extra: Sequence[str] = (), elim_first: Iterable[str] | None = None):
        if m.constraints:
            raise ConstraintsPresent("eliminate the constraints before asking about critical points")
        self.model = m
        self.live = [v for v in m.vars if v.domain is not Domain.FORMAL]
        self.formal = [v.name for v in m.vars if v.domain is Domain.FORMAL]
        self.torus = [v.name for v in self.live if v.domain is Domain.TORUS]
        self.inverted = [p.specialize({h: 0 for h in self.formal}) for p in m.inverted]
        wit = [witness_name(n) for n in self.torus] + [f"u{i}'" for i in range(len(self.inverted))]
        base = [v.name for v in self.live]
        names = base + wit + list(extra)
        if elim_first is not None:
            keep = set(elim_first)
            names = [n for n in names if n not in keep] + [n for n in names if n in keep]
        self.names = tuple(names)
        self.index = {n: i for i, n in enumerate(self.names)}

    def specialize(self, f: LaurentPoly) -> LaurentPoly:
        return f.specialize({h: 0 for h in self.formal if h in f.names})

    def clear(self, f: LaurentPoly) -> dict:
        f = self.specialize(f)
        out = {}
        n = len(self.names)
        for mono, c in f.terms.items():
            e = [0] * n
            for name, k in mono.items():
                if k >= 0:
                    e[self.index[name]] += k
                else:
                    e[self.index[witness_name(name)]] += -k
            t = tuple(e)
            out[t] = out.get(t, 0) + c
        return {t: c for t, c in out.items() if c}

    def witnesses(self) -> list[dict]:
        n = len(self.names)
        gens = []
        for name in self.torus:
            e = [0] * n
            e[self.index[name]] = 1
            e[self.index[witness_name(name)]] = 1
            gens.append({tuple(e): Fraction(1), (0,) * n: Fraction(-1)})
        for i, g in enumerate(self.inverted):
            w = [0] * n
            w[self.index[f"u{i}'"]] = 1
            prod = {tuple(a + b for a, b in zip(e, w)): c for e, c in self.clear(g).items()}
            prod[(0,) * n] = prod.get((0,) * n, 0) - 1
            gens.append({e: c for e, c in prod.items() if c})
        return gens

    def uncleared(self, p: dict, variables: Sequence[Variable]) -> LaurentPoly:
        """Read a polynomial in non-witness ring variables back as a LaurentPoly."""
        terms = {}
        for e, c in p.items():
            mono = Monomial({self.names[i]: k for i, k in enumerate(e) if k})
            terms[mono] = c
        return LaurentPoly(variables, terms)


def _check_fibered(m: LGModel, fibered: Iterable[str]) -> tuple[str, ...]:
    fibered = tuple(fibered)
    for n in fibered:
        m.var(n)
    return fibered


def critical_equations(m: LGModel, fibered: Iterable[str] = ()) -> list[LaurentPoly]:
    """Log-derivatives of the potential in every non-fibered, non-formal variable."""
    fibered = set(_check_fibered(m, fibered))
    W = m.potential
    formal = [v.name for v in m.vars if v.domain is Domain.FORMAL]
    if formal:
        W = W.specialize({h: 0 for h in formal})
    return [W.log_derivative(v.name) for v in m.vars
            if v.domain is not Domain.FORMAL and v.name not in fibered]


def critical_ideal(m: LGModel, fibered: Iterable[str] = (), order: MonomialOrder | None = None,
                   extra: Sequence[str] = (), elim_first: Iterable[str] | None = None) -> PolyIdeal:
    fibered = _check_fibered(m, fibered)
    cl = Clearing(m, extra, elim_first)
    gens = [cl.clear(f) for f in critical_equations(m, fibered)] + cl.witnesses()
    order = order or MonomialOrder(len(cl.names))
    return PolyIdeal(cl.names, gens, order, {"clearing": cl, "fibered": fibered})


def _run(ideal: PolyIdeal, budget: int | None) -> tuple[list[dict], int]:
    stats = GroebnerStats()
    basis = buchberger(ideal.generators, ideal.order, budget, stats)
    return basis, stats.spolys


def _is_one(basis: list[dict]) -> bool:
    return len(basis) == 1 and set(basis[0]) == {(0,) * len(next(iter(basis[0])))}


def is_crit_empty(m: LGModel, fibered: Iterable[str] = (), budget: int | None = None) -> CritReport:
    fibered = _check_fibered(m, fibered)
    ideal = critical_ideal(m, fibered)
    basis, n = _run(ideal, budget)
    result = EMPTY if _is_one(basis) else NON_EMPTY
    return CritReport("fibered" if fibered else "full", fibered, result, spolys=n,
                      certificate=[format_poly(g, ideal.names, ideal.order) for g in basis[:20]])


def crit_contained_in(m: LGModel, g, fibered: Iterable[str] = (), budget: int | None = None) -> CritReport:
    """Decide whether ``g`` vanishes on the critical locus via ``1 in I + (1 - t*g)``."""
    fibered = _check_fibered(m, fibered)
    g = m.poly(g)
    t = "t'"
    ideal = critical_ideal(m, fibered, extra=(t,))
    cl: Clearing = ideal.meta["clearing"]
    n = len(ideal.names)
    tg = {}
    ti = cl.index[t]
    for e, c in cl.clear(g).items():
        e2 = list(e)
        e2[ti] += 1
        tg[tuple(e2)] = -c
    tg[(0,) * n] = tg.get((0,) * n, 0) + 1
    ideal.generators.append({e: c for e, c in tg.items() if c})
    basis, count = _run(ideal, budget)
    result = CONTAINED if _is_one(basis) else NOT_CONTAINED
    cert = [] if result == CONTAINED else [format_poly(b, ideal.names, ideal.order) for b in basis[:20]]
    return CritReport("fibered" if fibered else "full", fibered, result, target=g,
                      spolys=count, certificate=cert)


def critical_values(m: LGModel, fibered: Iterable[str], budget: int | None = None) -> CritReport:
    """Eliminate everything but the fibered variables from the critical ideal."""
    fibered = _check_fibered(m, fibered)
    if not fibered:
        raise ModelError("critical values need at least one fibered variable")
    kept = []
    for n in fibered:
        v = m.var(n)
        if v.domain is not Domain.TORUS:
            raise ModelError(f"fibered variable {n!r} must be a torus coordinate")
        kept.append(v)
    probe = Clearing(m, elim_first=fibered)
    order = MonomialOrder(len(probe.names), [len(probe.names) - len(fibered), len(fibered)])
    ideal = critical_ideal(m, fibered, order=order, elim_first=fibered)
    cl: Clearing = ideal.meta["clearing"]
    basis, count = _run(ideal, budget)
    k = len(ideal.names) - len(fibered)
    contracted = [b for b in basis if all(not any(e[:k]) for e in b)]
    report = CritReport("fibered", fibered, CRITICAL_VALUES, spolys=count)
    if _is_one(basis):
        report.classification = EMPTY
        report.polys = [LaurentPoly.const(kept, 1)]
        return report
    polys = [primitive(cl.uncleared(b, kept)) for b in contracted]
    report.polys = polys
    if not polys:
        report.classification = ALL_VALUES
    elif len(polys) == 1:
        report.classification = HYPERSURFACE
    else:
        report.classification = SUBVARIETY
    return report


# helpers on the results


def primitive(p: LaurentPoly) -> LaurentPoly:
    """Scale to coprime integer coefficients with a positive leading coefficient."""
    if p.is_zero():
        return p
    den = 1
    for c in p.terms.values():
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in p.terms.values()]
    g = 0
    for v in ints:
        g = gcd(g, v)
    _, lc = p.leading()
    sign = 1 if lc > 0 else -1
    return p.scale(Fraction(den * sign, g))


def same_up_to_scalar(a: LaurentPoly, b: LaurentPoly) -> bool:
    if a.is_zero() or b.is_zero():
        return a.is_zero() and b.is_zero()
    b = b.over(a.vars)
    return primitive(a) == primitive(b)


def rational_roots(p: LaurentPoly, name: str | None = None) -> list[Fraction]:
    """Rational roots of a polynomial in one variable (rational root theorem)."""
    used = p.used_names()
    if len(used) > 1:
        raise ModelError("rational_roots needs a polynomial in a single variable")
    if not used:
        return []
    name = name or next(iter(used))
    lo = p.min_degree_in(name)
    coeffs: dict[int, Fraction] = {}
    for mono, c in primitive(p).terms.items():
        coeffs[mono.get(name) - lo] = c
    deg = max(coeffs)
    a = [int(coeffs.get(i, 0)) for i in range(deg + 1)]  # a[i] * x^i
    roots = set()
    while a and a[0] == 0:
        a.pop(0)  # x = 0 is never a root on the torus
    if len(a) <= 1:
        return []
    for num in _divisors(a[0]):
        for den in _divisors(a[-1]):
            for sign in (1, -1):
                r = Fraction(sign * num, den)
                if sum(c * r ** i for i, c in enumerate(a)) == 0:
                    roots.add(r)
    return sorted(roots)


def _divisors(n: int) -> list[int]:
    n = abs(n)
    return [d for d in range(1, n + 1) if n % d == 0]
