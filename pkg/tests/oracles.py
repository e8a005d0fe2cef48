"""Independent reference computations built on sympy.

Nothing here imports the engine's arithmetic or Groebner code; tests compare
the two routes.
"""

from __future__ import annotations

from fractions import Fraction

import sympy


def to_sympy(p):
    """A LaurentPoly as a sympy expression (reads only the term map)."""
    syms = {v.name: sympy.Symbol(v.name) for v in p.vars}
    expr = sympy.Integer(0)
    for mono, c in p.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for n, e in mono.items():
            term *= syms[n] ** e
        expr += term
    return expr


def sympy_equal(a, b) -> bool:
    return sympy.expand(a - b) == 0


def sympy_groebner_unit(polys, gens) -> bool:
    """Whether the ideal generated by sympy expressions is the unit ideal."""
    g = sympy.groebner(polys, *gens, order="grevlex")
    return list(g.exprs) == [1]


def critical_locus(expr, torus, affine):
    """Solve the critical equations of a Laurent expression with sympy.

    Returns a list of solution dicts; torus coordinates must be nonzero.
    """
    syms = list(torus) + list(affine)
    eqs = [sympy.numer(sympy.together(sympy.diff(expr, s))) for s in syms]
    eqs = [e for e in eqs if e != 0]
    if not eqs:
        return [{}]
    sols = sympy.solve(eqs, syms, dict=True)
    out = []
    for s in sols:
        if any(s.get(t, t) == 0 for t in torus):
            continue
        out.append(s)
    return out


def as_fraction(x) -> Fraction:
    x = sympy.Rational(x)
    return Fraction(int(x.p), int(x.q))
