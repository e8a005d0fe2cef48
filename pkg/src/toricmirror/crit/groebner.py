"""Buchberger's algorithm over the rationals.

Polynomials are plain dicts from exponent tuples to Fractions over a fixed,
named list of ring variables.  Pair selection uses the normal strategy and
pairs are pruned with the Gebauer-Moller criteria.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from ..errors import ResourceBudgetExceeded

DEFAULT_BUDGET = 100_000

Exp = tuple
Poly = dict  # dict[Exp, Fraction]


def default_budget() -> int:
    raw = os.environ.get("TMC_BUDGET")
    return int(raw) if raw else DEFAULT_BUDGET


class MonomialOrder:
    """Block degree-reverse-lexicographic order.

    ``blocks`` are consecutive variable counts; earlier blocks dominate.  A
    single block is plain degrevlex.  Within a block, earlier variables are
    larger.
    """

    def __init__(self, nvars: int, blocks: Sequence[int] | None = None):
        blocks = list(blocks) if blocks else [nvars]
        if sum(blocks) != nvars or any(b < 0 for b in blocks):
            raise ValueError("block sizes must add up to the number of variables")
        self.nvars = nvars
        self.blocks = tuple(b for b in blocks if b)
        spans, start = [], 0
        for b in self.blocks:
            spans.append((start, start + b))
            start += b
        self._spans = spans

    @property
    def tag(self) -> str:
        if len(self.blocks) <= 1:
            return "degrevlex"
        return "lex-block(" + ",".join(map(str, self.blocks)) + ")"

    def key(self, exp: Exp):
        out = []
        for lo, hi in self._spans:
            part = exp[lo:hi]
            out.append(sum(part))
            out.extend(-e for e in reversed(part))
        return tuple(out)

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and (self.nvars, self.blocks) == (other.nvars, other.blocks)

    def __hash__(self):
        return hash((self.nvars, self.blocks))

    def __repr__(self):
        return f"MonomialOrder({self.tag}, nvars={self.nvars})"


@dataclass
class PolyIdeal:
    """Generators over named ring variables together with a monomial order."""

    names: tuple[str, ...]
    generators: list[Poly]
    order: MonomialOrder
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.names = tuple(self.names)
        self.generators = [clean(g) for g in self.generators]
        self.generators = [g for g in self.generators if g]

    def is_unit(self) -> bool:
        return any(len(g) == 1 and not any(next(iter(g))) for g in self.generators)

    def format(self) -> list[str]:
        return [format_poly(g, self.names, self.order) for g in self.generators]


def clean(p: Poly) -> Poly:
    return {e: Fraction(c) for e, c in p.items() if c}


def leading(p: Poly, order: MonomialOrder) -> Exp:
    return max(p, key=order.key)


def divides(a: Exp, b: Exp) -> bool:
    return all(x <= y for x, y in zip(a, b))


def lcm(a: Exp, b: Exp) -> Exp:
    return tuple(max(x, y) for x, y in zip(a, b))


def coprime(a: Exp, b: Exp) -> bool:
    return all(not (x and y) for x, y in zip(a, b))


def _sub_scaled(p: Poly, q: Poly, c: Fraction, shift: Exp) -> None:
    """In place ``p -= c * x^shift * q``."""
    for e, v in q.items():
        m = tuple(x + y for x, y in zip(e, shift))
        r = p.get(m, 0) - c * v
        if r:
            p[m] = r
        else:
            p.pop(m, None)


def monic(p: Poly, order: MonomialOrder) -> Poly:
    lc = p[leading(p, order)]
    return {e: c / lc for e, c in p.items()}


def normal_form(f: Poly, basis: Sequence[Poly], order: MonomialOrder) -> Poly:
    """Fully reduce ``f`` modulo ``basis``; the remainder has no divisible term."""
    p = dict(f)
    rem: Poly = {}
    leads = [(leading(g, order), g) for g in basis if g]
    while p:
        lm = leading(p, order)
        c = p[lm]
        for gl, g in leads:
            if divides(gl, lm):
                shift = tuple(x - y for x, y in zip(lm, gl))
                _sub_scaled(p, g, c / g[gl], shift)
                break
        else:
            rem[lm] = c
            del p[lm]
    return rem


def s_polynomial(f: Poly, g: Poly, order: MonomialOrder) -> Poly:
    a, b = leading(f, order), leading(g, order)
    m = lcm(a, b)
    out: Poly = {}
    _sub_scaled(out, f, -1 / f[a], tuple(x - y for x, y in zip(m, a)))
    _sub_scaled(out, g, 1 / g[b], tuple(x - y for x, y in zip(m, b)))
    return out


@dataclass
class GroebnerStats:
    spolys: int = 0


def buchberger(gens: Sequence[Poly], order: MonomialOrder, budget: int | None = None,
               stats: GroebnerStats | None = None) -> list[Poly]:
    """Reduced, monic Groebner basis, sorted by leading monomial (largest first)."""
    budget = default_budget() if budget is None else budget
    stats = stats if stats is not None else GroebnerStats()
    polys: list[Poly] = []
    lead: list[Exp] = []
    active: list[int] = []
    pairs: list[tuple[int, int, Exp]] = []

    def update(h: Poly) -> None:
        nonlocal active, pairs
        k = len(polys)
        polys.append(h)
        hl = leading(h, order)
        lead.append(hl)
        cand = [(g, lcm(lead[g], hl)) for g in active]
        kept = []
        for idx, (g, m) in enumerate(cand):
            if coprime(lead[g], hl):
                kept.append((g, m))
                continue
            others = [m2 for _, m2 in cand[idx + 1:]] + [m2 for _, m2 in kept]
            if not any(divides(m2, m) for m2 in others):
                kept.append((g, m))
        new_pairs = [(g, k, m) for g, m in kept if not coprime(lead[g], hl)]
        survivors = []
        for i, j, m in pairs:
            if (divides(hl, m) and lcm(lead[i], hl) != m and lcm(lead[j], hl) != m):
                continue
            survivors.append((i, j, m))
        pairs = survivors + new_pairs
        active = [g for g in active if not divides(hl, lead[g])] + [k]

    for f in gens:
        f = clean(f)
        if not f:
            continue
        f = normal_form(f, [polys[i] for i in active], order)
        if f:
            update(monic(f, order))

    while pairs:
        best = min(range(len(pairs)), key=lambda t: order.key(pairs[t][2]))
        i, j, _ = pairs.pop(best)
        stats.spolys += 1
        if stats.spolys > budget:
            raise ResourceBudgetExceeded(f"more than {budget} S-polynomial reductions")
        h = normal_form(s_polynomial(polys[i], polys[j], order), [polys[a] for a in active], order)
        if h:
            update(monic(h, order))

    basis = [polys[i] for i in active]
    return reduce_basis(basis, order)


def reduce_basis(basis: Sequence[Poly], order: MonomialOrder) -> list[Poly]:
    basis = [monic(g, order) for g in basis if g]
    leads = [leading(g, order) for g in basis]
    minimal = []
    for i, g in enumerate(basis):
        li = leads[i]
        if any(j != i and divides(leads[j], li) and (leads[j] != li or j < i) for j in range(len(basis))):
            continue
        minimal.append(g)
    out = []
    for i, g in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1:]
        lt = leading(g, order)
        tail = {e: c for e, c in g.items() if e != lt}
        r = normal_form(tail, others, order)
        r[lt] = Fraction(1)
        out.append(r)
    out.sort(key=lambda g: order.key(leading(g, order)), reverse=True)
    return out


def groebner(ideal: PolyIdeal, budget: int | None = None, stats: GroebnerStats | None = None) -> PolyIdeal:
    basis = buchberger(ideal.generators, ideal.order, budget, stats)
    return PolyIdeal(ideal.names, basis, ideal.order, dict(ideal.meta))


def is_groebner(basis: Sequence[Poly], order: MonomialOrder) -> bool:
    """Every S-polynomial reduces to zero."""
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            if normal_form(s_polynomial(basis[i], basis[j], order), basis, order):
                return False
    return True


def format_poly(p: Poly, names: Sequence[str], order: MonomialOrder) -> str:
    if not p:
        return "0"
    parts = []
    for e in sorted(p, key=order.key, reverse=True):
        c = p[e]
        mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
        if not mono:
            body = str(c)
        elif c == 1:
            body = mono
        elif c == -1:
            body = "-" + mono
        else:
            body = f"{c}*{mono}"
        if parts and body.startswith("-"):
            parts.append(" - " + body[1:])
        elif parts:
            parts.append(" + " + body)
        else:
            parts.append(body)
    return "".join(parts)
