"""Syntax tree for ``.tmc`` files.  Source positions do not take part in equality."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction


def _pos():
    return field(default=(0, 0), compare=False, repr=False)


# expressions


@dataclass(frozen=True)
class Num:
    value: int
    pos: tuple = _pos()


@dataclass(frozen=True)
class Name:
    name: str
    pos: tuple = _pos()


@dataclass(frozen=True)
class Neg:
    operand: object
    pos: tuple = _pos()


@dataclass(frozen=True)
class BinOp:
    op: str  # + - * /
    left: object
    right: object
    pos: tuple = _pos()


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int
    pos: tuple = _pos()


# declarations inside a model


@dataclass(frozen=True)
class VarDecl:
    domain: str  # torus | affine | formal
    names: tuple[str, ...]
    order: int | None = None
    pos: tuple = _pos()


@dataclass(frozen=True)
class PotentialDecl:
    expr: object
    pos: tuple = _pos()


@dataclass(frozen=True)
class SigmaDecl:
    name: str
    expr: object
    pos: tuple = _pos()


@dataclass(frozen=True)
class ConstraintDecl:
    expr: object
    pos: tuple = _pos()


@dataclass(frozen=True)
class GradeDecl:
    name: str
    weight: Fraction
    pos: tuple = _pos()


@dataclass(frozen=True)
class ModelItem:
    name: str
    decls: tuple
    pos: tuple = _pos()


# toric data


@dataclass(frozen=True)
class ToricItem:
    name: str
    dual: tuple[str, ...]
    rays: tuple[tuple[int, ...], ...]
    actions: tuple[tuple[str, tuple[int, ...]], ...] = ()
    primal_vars: tuple[VarDecl, ...] = ()
    primal_potential: object = None
    pos: tuple = _pos()


# pipeline steps


@dataclass(frozen=True)
class ChangeStep:
    images: tuple[tuple[str, object], ...]
    declare: tuple[VarDecl, ...] = ()
    pos: tuple = _pos()


@dataclass(frozen=True)
class DualChangeStep:
    images: tuple[tuple[str, object], ...]
    pairing: tuple[tuple[str, str], ...] = ()
    pos: tuple = _pos()


@dataclass(frozen=True)
class CompactifyStep:
    names: tuple[str, ...]
    pos: tuple = _pos()


@dataclass(frozen=True)
class KnorrerReduceStep:
    var: str
    pos: tuple = _pos()


@dataclass(frozen=True)
class KnorrerExpandStep:
    expr: object
    var: str
    pos: tuple = _pos()


@dataclass(frozen=True)
class EliminateStep:
    index: int
    var: str
    promote: tuple[str, ...] = ()
    pos: tuple = _pos()


@dataclass(frozen=True)
class SliceStep:
    sigma: str
    value: Fraction | None  # None means generic
    param: str | None = None
    pos: tuple = _pos()


@dataclass(frozen=True)
class CompleteStep:
    sigma: str
    value: Fraction
    order: int | None = None
    var: str | None = None
    pos: tuple = _pos()


@dataclass(frozen=True)
class AddTermStep:
    expr: object
    pos: tuple = _pos()


@dataclass(frozen=True)
class AbsorbUnitsStep:
    pos: tuple = _pos()


@dataclass(frozen=True)
class PipelineItem:
    name: str
    source: str
    primal: str | None
    steps: tuple
    pos: tuple = _pos()


@dataclass(frozen=True)
class TransitionItem:
    name: str
    source: str
    target: str
    images: tuple[tuple[str, object], ...]
    pos: tuple = _pos()


# expectations


@dataclass(frozen=True)
class Expect:
    """``kind`` names the check; ``subject`` is the entity it is about.

    Payload fields are used as follows: ``expr`` for equalities and
    containment, ``exprs`` for constraint lists, ``over`` for fibered
    variables, ``outcome`` for critical values / grading / point counts,
    ``weights`` for gradings, ``ints`` for sign checks and counts.
    """

    kind: str
    subject: str | None = None
    name: str | None = None
    expr: object = None
    exprs: tuple = ()
    over: tuple[str, ...] = ()
    outcome: str | None = None
    weights: tuple[tuple[str, Fraction], ...] = ()
    ints: tuple[int, ...] = ()
    pos: tuple = _pos()


@dataclass(frozen=True)
class FileAst:
    items: tuple
