"""Exact Laurent polynomial arithmetic over the rationals.

Polynomials live over an ordered list of :class:`Variable` objects.  Each
variable is a torus coordinate (any integer exponent), an affine coordinate
(exponents >= 0) or a formal coordinate truncated at a fixed order.  Terms are
stored as ``{Monomial: Fraction}`` with zero coefficients removed, so equality
of polynomials is equality of term maps.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .errors import (
    DomainViolation,
    NotInvertible,
    NotUnimodular,
    SignedMapUnsupported,
    UnknownVariable,
)

DEFAULT_FORMAL_ORDER = 4


class Domain(str, enum.Enum):
    TORUS = "torus"
    AFFINE = "affine"
    FORMAL = "formal"


@dataclass(frozen=True)
class Variable:
    name: str
    domain: Domain = Domain.TORUS
    order: int = 0
    weight: Fraction | None = None

    def __post_init__(self):
        object.__setattr__(self, "domain", Domain(self.domain))
        if self.domain is Domain.FORMAL:
            if self.order < 1:
                raise ValueError(f"formal variable {self.name} needs order >= 1")
        elif self.order:
            raise ValueError(f"only formal variables carry an order ({self.name})")
        if self.weight is not None:
            object.__setattr__(self, "weight", Fraction(self.weight))

    @property
    def signature(self):
        return (self.name, self.domain, self.order)

    @property
    def spec(self) -> str:
        if self.domain is Domain.FORMAL:
            return f"formal({self.order})"
        return self.domain.value

    def with_domain(self, domain, order=0) -> "Variable":
        return Variable(self.name, Domain(domain), order, self.weight)

    def with_weight(self, weight) -> "Variable":
        return Variable(self.name, self.domain, self.order, weight)

    def allows(self, exponent: int) -> bool:
        if self.domain is Domain.TORUS:
            return True
        if self.domain is Domain.AFFINE:
            return exponent >= 0
        return 0 <= exponent < self.order


def torus(*names: str) -> tuple[Variable, ...]:
    return tuple(Variable(n, Domain.TORUS) for n in names)


def affine(*names: str) -> tuple[Variable, ...]:
    return tuple(Variable(n, Domain.AFFINE) for n in names)


def formal(name: str, order: int = DEFAULT_FORMAL_ORDER) -> Variable:
    return Variable(name, Domain.FORMAL, order)


def check_unique(variables: Iterable[Variable]) -> None:
    seen = set()
    for v in variables:
        if v.name in seen:
            raise ValueError(f"duplicate variable name {v.name!r}")
        seen.add(v.name)


class Monomial:
    """A Laurent monomial: a sparse map from variable names to nonzero exponents."""

    __slots__ = ("_items", "_hash")

    def __init__(self, exponents: Mapping[str, int] | Iterable[tuple[str, int]] = ()):
        pairs = exponents.items() if isinstance(exponents, Mapping) else exponents
        acc: dict[str, int] = {}
        for name, e in pairs:
            acc[name] = acc.get(name, 0) + int(e)
        self._items = tuple(sorted((n, e) for n, e in acc.items() if e != 0))
        self._hash = hash(self._items)

    @classmethod
    def of(cls, **exponents: int) -> "Monomial":
        return cls(exponents)

    def items(self):
        return self._items

    def names(self):
        return [n for n, _ in self._items]

    def get(self, name: str) -> int:
        for n, e in self._items:
            if n == name:
                return e
        return 0

    def as_dict(self) -> dict[str, int]:
        return dict(self._items)

    def vector(self, names: Sequence[str]) -> tuple[int, ...]:
        d = dict(self._items)
        return tuple(d.get(n, 0) for n in names)

    @property
    def degree(self) -> int:
        return sum(e for _, e in self._items)

    def is_one(self) -> bool:
        return not self._items

    def __mul__(self, other: "Monomial") -> "Monomial":
        return Monomial(self._items + other._items)

    def __truediv__(self, other: "Monomial") -> "Monomial":
        return Monomial(self._items + tuple((n, -e) for n, e in other._items))

    def __pow__(self, k: int) -> "Monomial":
        return Monomial((n, e * k) for n, e in self._items)

    def without(self, name: str) -> "Monomial":
        return Monomial((n, e) for n, e in self._items if n != name)

    def __eq__(self, other):
        return isinstance(other, Monomial) and self._items == other._items

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Monomial({dict(self._items)!r})"

    def format(self, order: Sequence[str] | None = None) -> str:
        items = self._items
        if order is not None:
            pos = {n: i for i, n in enumerate(order)}
            items = sorted(items, key=lambda it: pos.get(it[0], len(pos)))
        return "*".join(n if e == 1 else f"{n}^{e}" for n, e in items)


ONE = Monomial()

RawTerms = dict  # dict[Monomial, Fraction], unvalidated


def _raw_mul(a: Mapping[Monomial, Fraction], b: Mapping[Monomial, Fraction]) -> RawTerms:
    out: RawTerms = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = ma * mb
            c = out.get(m, 0) + ca * cb
            if c:
                out[m] = c
            else:
                out.pop(m, None)
    return out


def _raw_add(a: Mapping[Monomial, Fraction], b: Mapping[Monomial, Fraction], scale=1) -> RawTerms:
    out = dict(a)
    for m, c in b.items():
        v = out.get(m, 0) + scale * c
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def _raw_pow(a: Mapping[Monomial, Fraction], k: int) -> RawTerms:
    result: RawTerms = {ONE: Fraction(1)}
    base = dict(a)
    while k:
        if k & 1:
            result = _raw_mul(result, base)
        k >>= 1
        if k:
            base = _raw_mul(base, base)
    return result


def _raw_inverse(a: Mapping[Monomial, Fraction]) -> RawTerms:
    if len(a) != 1:
        raise NotInvertible(f"cannot invert a {len(a)}-term expression")
    (m, c), = a.items()
    return {m ** -1: 1 / Fraction(c)}


def _coerce_terms(x) -> RawTerms:
    if isinstance(x, LaurentPoly):
        return dict(x._terms)
    if isinstance(x, Monomial):
        return {x: Fraction(1)}
    if isinstance(x, Mapping):
        return {m: Fraction(c) for m, c in x.items() if c}
    raise TypeError(f"cannot use {type(x).__name__} as polynomial terms")


class LaurentPoly:
    """Immutable Laurent polynomial with rational coefficients."""

    __slots__ = ("vars", "_terms", "_index")

    def __init__(self, variables: Sequence[Variable], terms: Mapping[Monomial, object] | None = None):
        variables = tuple(variables)
        index = {v.name: v for v in variables}
        if len(index) != len(variables):
            check_unique(variables)
        clean: dict[Monomial, Fraction] = {}
        for mono, coeff in (terms or {}).items():
            coeff = Fraction(coeff)
            if not coeff:
                continue
            keep = True
            for name, e in mono.items():
                var = index.get(name)
                if var is None:
                    raise UnknownVariable(f"variable {name!r} is not declared")
                if var.domain is Domain.FORMAL and e >= var.order:
                    keep = False
                elif not var.allows(e):
                    raise DomainViolation(
                        f"exponent {e} of {var.domain.value} variable {name!r}"
                    )
            if keep:
                clean[mono] = clean.get(mono, 0) + coeff
        self.vars = variables
        self._terms = {m: c for m, c in clean.items() if c}
        self._index = index

    # construction helpers

    @classmethod
    def zero(cls, variables) -> "LaurentPoly":
        return cls(variables)

    @classmethod
    def const(cls, variables, c) -> "LaurentPoly":
        return cls(variables, {ONE: c})

    @classmethod
    def var(cls, variables, name: str, power: int = 1) -> "LaurentPoly":
        return cls(variables, {Monomial({name: power}): 1})

    @classmethod
    def monomial(cls, variables, mono: Monomial, coeff=1) -> "LaurentPoly":
        return cls(variables, {mono: coeff})

    # accessors

    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        return MappingProxyType(self._terms)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.vars)

    def variable(self, name: str) -> Variable:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownVariable(f"variable {name!r} is not declared") from None

    def signature(self):
        return tuple(v.signature for v in self.vars)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(m.is_one() for m in self._terms)

    def constant_term(self) -> Fraction:
        return self._terms.get(ONE, Fraction(0))

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_unit(self) -> bool:
        """A single term in torus variables: invertible and nowhere vanishing."""
        if len(self._terms) != 1:
            return False
        (m, _), = self._terms.items()
        return all(self._index[n].domain is Domain.TORUS for n in m.names())

    def leading(self) -> tuple[Monomial, Fraction]:
        m = self.sorted_monomials()[0]
        return m, self._terms[m]

    def used_names(self) -> set[str]:
        return {n for m in self._terms for n in m.names()}

    def degree_in(self, name: str) -> int:
        return max((m.get(name) for m in self._terms), default=0)

    def min_degree_in(self, name: str) -> int:
        return min((m.get(name) for m in self._terms), default=0)

    def collect(self, name: str) -> dict[int, "LaurentPoly"]:
        """Group terms by the power of ``name``; coefficients no longer contain it."""
        groups: dict[int, dict] = {}
        for m, c in self._terms.items():
            groups.setdefault(m.get(name), {})[m.without(name)] = c
        return {k: LaurentPoly(self.vars, t) for k, t in groups.items()}

    # ordering and printing

    def _order_key(self, mono: Monomial):
        return (mono.degree, mono.vector(self.names))

    def sorted_monomials(self) -> list[Monomial]:
        """Graded lexicographic order by declaration order, largest first."""
        return sorted(self._terms, key=self._order_key, reverse=True)

    def canonical(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        names = self.names
        for m in self.sorted_monomials():
            c = self._terms[m]
            if m.is_one():
                body = str(c)
            elif c == 1:
                body = m.format(names)
            elif c == -1:
                body = "-" + m.format(names)
            else:
                body = f"{c}*{m.format(names)}"
            if not parts:
                parts.append(body)
            elif body.startswith("-"):
                parts.append(" - " + body[1:])
            else:
                parts.append(" + " + body)
        return "".join(parts)

    __str__ = canonical

    def __repr__(self):
        return f"LaurentPoly({self.canonical()!r})"

    # comparison

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self._terms == ({ONE: Fraction(other)} if other else {})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.signature() == other.signature() and self._terms == other._terms

    def __hash__(self):
        return hash((self.signature(), frozenset(self._terms.items())))

    # arithmetic

    def _other(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            if other.signature() != self.signature():
                raise ValueError("polynomials live over different variable lists")
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPoly.const(self.vars, other)
        raise TypeError(f"unsupported operand {type(other).__name__}")

    def __add__(self, other):
        other = self._other(other)
        return LaurentPoly(self.vars, _raw_add(self._terms, other._terms))

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.vars, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._other(other)
        return LaurentPoly(self.vars, _raw_add(self._terms, other._terms, -1))

    def __rsub__(self, other):
        return self._other(other) - self

    def __mul__(self, other):
        other = self._other(other)
        return LaurentPoly(self.vars, self._truncating_mul(self._terms, other._terms))

    __rmul__ = __mul__

    def _truncating_mul(self, a, b) -> RawTerms:
        formal = {v.name: v.order for v in self.vars if v.domain is Domain.FORMAL}
        if not formal:
            return _raw_mul(a, b)
        out: RawTerms = {}
        for ma, ca in a.items():
            for mb, cb in b.items():
                m = ma * mb
                if any(m.get(n) >= k for n, k in formal.items()):
                    continue
                c = out.get(m, 0) + ca * cb
                if c:
                    out[m] = c
                else:
                    out.pop(m, None)
        return out

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = LaurentPoly.const(self.vars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def inverse(self) -> "LaurentPoly":
        if not self.is_unit():
            raise NotInvertible(f"{self} is not a unit")
        return LaurentPoly(self.vars, _raw_inverse(self._terms))

    def scale(self, c) -> "LaurentPoly":
        return LaurentPoly(self.vars, {m: v * Fraction(c) for m, v in self._terms.items()})

    # calculus

    def derivative(self, name: str) -> "LaurentPoly":
        self.variable(name)
        out = {}
        for m, c in self._terms.items():
            e = m.get(name)
            if e:
                out[m * Monomial({name: -1})] = c * e
        return LaurentPoly(self.vars, out)

    def log_derivative(self, name: str) -> "LaurentPoly":
        """``v * df/dv`` for a torus variable, ``df/dv`` otherwise."""
        var = self.variable(name)
        if var.domain is not Domain.TORUS:
            return self.derivative(name)
        return LaurentPoly(
            self.vars, {m: c * m.get(name) for m, c in self._terms.items() if m.get(name)}
        )

    def newton_exponents(self) -> set[tuple[int, ...]]:
        names = self.names
        return {m.vector(names) for m in self._terms}

    def evaluate(self, point: Mapping[str, object]):
        total = 0
        for m, c in self._terms.items():
            term = c
            for n, e in m.items():
                term = term * point[n] ** e
            total = total + term
        return total

    # change of ambient

    def over(self, variables: Sequence[Variable]) -> "LaurentPoly":
        """The same terms read over another variable list (re-validated)."""
        return LaurentPoly(variables, self._terms)

    def substitute(
        self,
        images: Mapping[str, object],
        target: Sequence[Variable],
        inverses: Mapping[str, object] | None = None,
    ) -> "LaurentPoly":
        """Ring homomorphism sending each variable to its image.

        Images and inverses may be LaurentPolys, Monomials or raw term maps;
        intermediate results are not validated, only the final polynomial is
        checked against the domains of ``target``.  Variables missing from
        ``images`` map to the same-named target variable.
        """
        target = tuple(target)
        target_names = {v.name for v in target}
        raw_images = {}
        for name in self.used_names():
            if name in images:
                raw_images[name] = _coerce_terms(images[name])
            elif name in target_names:
                raw_images[name] = {Monomial({name: 1}): Fraction(1)}
            else:
                raise UnknownVariable(f"no image for variable {name!r}")
        raw_inverses = {n: _coerce_terms(v) for n, v in (inverses or {}).items()}
        cache: dict[tuple[str, int], RawTerms] = {}

        def power(name, e):
            key = (name, e)
            if key not in cache:
                if e >= 0:
                    cache[key] = _raw_pow(raw_images[name], e)
                else:
                    img = raw_images[name]
                    if len(img) == 1:
                        inv = _raw_inverse(img)
                    elif name in raw_inverses:
                        inv = raw_inverses[name]
                    else:
                        raise NotInvertible(
                            f"negative power of {name!r} but its image is not a unit"
                        )
                    cache[key] = _raw_pow(inv, -e)
            return cache[key]

        out: RawTerms = {}
        for m, c in self._terms.items():
            prod: RawTerms = {ONE: c}
            for name, e in m.items():
                prod = _raw_mul(prod, power(name, e))
            out = _raw_add(out, prod)
        return LaurentPoly(target, out)

    def specialize(self, values: Mapping[str, object]) -> "LaurentPoly":
        """Set the named variables to rational constants and drop them."""
        target = [v for v in self.vars if v.name not in values]
        images = {n: {ONE: Fraction(c)} for n, c in values.items()}
        return self.substitute(images, target)


# module-level operations


def poly_arith(a: LaurentPoly, b: LaurentPoly, op: str) -> LaurentPoly:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def log_derivative(f: LaurentPoly, v: Variable | str) -> LaurentPoly:
    return f.log_derivative(v if isinstance(v, str) else v.name)


def newton_exponents(f: LaurentPoly) -> set[tuple[int, ...]]:
    return f.newton_exponents()


def absorb_units(f: LaurentPoly) -> tuple[Monomial, LaurentPoly]:
    """Split off the torus monomial common to every term of ``f``.

    Only genuine common factors are stripped: a torus variable is factored out
    when all its exponents share a sign, by the smallest such power.
    """
    if f.is_zero():
        return ONE, f
    factor = {}
    for v in f.vars:
        if v.domain is not Domain.TORUS:
            continue
        exps = [m.get(v.name) for m in f.terms]
        lo, hi = min(exps), max(exps)
        if lo > 0:
            factor[v.name] = lo
        elif hi < 0:
            factor[v.name] = hi
    unit = Monomial(factor)
    if unit.is_one():
        return ONE, f
    return unit, LaurentPoly(f.vars, {m / unit: c for m, c in f.terms.items()})


# integer matrices


def _sympy_matrix(rows):
    import sympy

    return sympy.Matrix(rows)


def integer_det(rows: Sequence[Sequence[int]]) -> int:
    if not rows:
        return 1
    return int(_sympy_matrix(rows).det(method="bareiss"))


def integer_inverse(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    m = _sympy_matrix(rows)
    if int(m.det(method="bareiss")) not in (1, -1):
        raise NotUnimodular("matrix is not unimodular")
    inv = m.inv()
    return [[int(inv[i, j]) for j in range(inv.cols)] for i in range(inv.rows)]


@dataclass(frozen=True)
class MonomialMap:
    """Substitution of each source variable by a signed monomial in the targets."""

    source: tuple[Variable, ...]
    target: tuple[Variable, ...]
    images: tuple[tuple[str, int, Monomial], ...]

    def __post_init__(self):
        check_unique(self.source)
        check_unique(self.target)
        target_names = {v.name for v in self.target}
        mapped = [n for n, _, _ in self.images]
        if sorted(mapped) != sorted(v.name for v in self.source):
            raise UnknownVariable("every source variable needs exactly one image")
        for name, sign, mono in self.images:
            if sign not in (1, -1):
                raise ValueError(f"sign of {name} must be +1 or -1")
            for n in mono.names():
                if n not in target_names:
                    raise UnknownVariable(f"image of {name} uses unknown variable {n!r}")

    @classmethod
    def build(cls, source, target, images: Mapping[str, object] | None = None) -> "MonomialMap":
        """Images may be Monomials, ``(sign, Monomial)`` pairs or single-term polys.

        Source variables without an image go to the same-named target variable.
        """
        source, target = tuple(source), tuple(target)
        images = dict(images or {})
        target_names = {v.name for v in target}
        out = []
        for v in source:
            img = images.pop(v.name, None)
            if img is None:
                if v.name not in target_names:
                    raise UnknownVariable(f"no image for {v.name!r}")
                out.append((v.name, 1, Monomial({v.name: 1})))
            elif isinstance(img, Monomial):
                out.append((v.name, 1, img))
            elif isinstance(img, LaurentPoly):
                if not img.is_monomial():
                    raise ValueError(f"image of {v.name} is not a monomial")
                (m, c), = img.terms.items()
                if c not in (1, -1):
                    raise ValueError(f"image of {v.name} has coefficient {c}")
                out.append((v.name, int(c), m))
            else:
                sign, m = img
                out.append((v.name, int(sign), m))
        if images:
            raise UnknownVariable(f"images given for non-source variables {sorted(images)}")
        return cls(source, target, tuple(out))

    @classmethod
    def identity(cls, variables) -> "MonomialMap":
        return cls.build(variables, variables)

    @classmethod
    def from_matrix(cls, source, target, matrix, signs=None) -> "MonomialMap":
        """``matrix[i][j]`` is the exponent of target ``i`` in the image of source ``j``."""
        source, target = tuple(source), tuple(target)
        signs = signs or [1] * len(source)
        images = []
        for j, v in enumerate(source):
            mono = Monomial({t.name: matrix[i][j] for i, t in enumerate(target)})
            images.append((v.name, signs[j], mono))
        return cls(source, target, tuple(images))

    def image(self, name: str) -> tuple[int, Monomial]:
        for n, s, m in self.images:
            if n == name:
                return s, m
        raise UnknownVariable(name)

    @property
    def signed(self) -> bool:
        return any(s != 1 for _, s, _ in self.images)

    def matrix(self) -> list[list[int]]:
        cols = [self.image(v.name)[1] for v in self.source]
        return [[c.get(t.name) for c in cols] for t in self.target]

    def determinant(self) -> int | None:
        if len(self.source) != len(self.target):
            return None
        return integer_det(self.matrix())

    def is_invertible(self) -> bool:
        return self.determinant() in (1, -1)

    def torus_block_determinant(self) -> int | None:
        rows = [i for i, t in enumerate(self.target) if t.domain is Domain.TORUS]
        cols = [j for j, s in enumerate(self.source) if s.domain is Domain.TORUS]
        if len(rows) != len(cols):
            return None
        m = self.matrix()
        return integer_det([[m[i][j] for j in cols] for i in rows])

    def apply(self, f: LaurentPoly) -> LaurentPoly:
        source_names = {v.name for v in self.source}
        for n in f.used_names():
            if n not in source_names:
                raise UnknownVariable(f"{n!r} is not a source variable of the map")
        images = {n: {m: Fraction(s)} for n, s, m in self.images}
        return f.substitute(images, self.target)

    __call__ = apply

    def inverse(self) -> "MonomialMap":
        if len(self.source) != len(self.target):
            raise NotUnimodular("exponent matrix is not square")
        inv = integer_inverse(self.matrix())  # rows: source, cols: target
        eps = [self.image(v.name)[0] for v in self.source]
        signs = []
        for i in range(len(self.target)):
            neg = sum(inv[k][i] for k in range(len(self.source)) if eps[k] < 0)
            signs.append(-1 if neg % 2 else 1)
        return MonomialMap.from_matrix(self.target, self.source, inv, signs)

    def compose(self, inner: "MonomialMap") -> "MonomialMap":
        """The map applying ``inner`` first, then ``self``."""
        images = []
        for name, sign, mono in inner.images:
            total_sign = sign
            out = ONE
            for n, e in mono.items():
                s, m = self.image(n)
                if s < 0 and e % 2:
                    total_sign = -total_sign
                out = out * m ** e
            images.append((name, total_sign, out))
        return MonomialMap(inner.source, self.target, tuple(images))

    def dual(
        self,
        pairing: Mapping[str, str],
        source: Sequence[Variable] | None = None,
        target: Sequence[Variable] | None = None,
    ) -> "MonomialMap":
        """Transpose map on the dual torus.

        ``pairing`` names the dual of every primal variable.  The dual sends
        the dual of target ``i`` to the product over sources ``j`` of
        ``dual(j) ** M[i][j]``.  Dual variables default to torus coordinates.
        """
        if self.signed:
            raise SignedMapUnsupported("dual of a signed monomial map is not defined")
        if not self.is_invertible():
            raise NotUnimodular("dual map needs a unimodular exponent matrix")
        missing = [v.name for v in self.source + self.target if v.name not in pairing]
        if missing:
            raise UnknownVariable(f"no dual name for {missing}")
        dsource = tuple(source) if source is not None else tuple(
            Variable(pairing[v.name]) for v in self.target
        )
        dtarget = tuple(target) if target is not None else tuple(
            Variable(pairing[v.name]) for v in self.source
        )
        m = self.matrix()
        images = {}
        for i, t in enumerate(self.target):
            mono = Monomial({pairing[s.name]: m[i][j] for j, s in enumerate(self.source)})
            images[pairing[t.name]] = mono
        return MonomialMap.build(dsource, dtarget, images)


def substitute(f: LaurentPoly, m: MonomialMap) -> LaurentPoly:
    return m.apply(f)


def dual_map(m: MonomialMap, pairing: Mapping[str, str], source=None, target=None) -> MonomialMap:
    return m.dual(pairing, source, target)


def change_coordinates(f: LaurentPoly, m: MonomialMap) -> LaurentPoly:
    """Rewrite ``f`` in the new coordinates defined by ``new_v = m(v)``.

    This substitutes the inverse map, so ``{z -> p*z, y -> p*x*y}`` turns
    ``p*(z - x*y + 1)`` into ``z - y + p``.
    """
    return m.inverse().apply(f.over(m.target))
