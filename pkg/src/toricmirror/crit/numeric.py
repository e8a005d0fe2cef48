"""Floating-point multistart search for critical points, used as a cross-check."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from ..algebra import Domain, LaurentPoly
from ..lgmodel import LGModel
from .critical import critical_equations

RESIDUAL_TOL = 1e-10
CONTAINMENT_TOL = 1e-8
DEFAULT_TRIALS = 1000
TORUS_MIN, TORUS_MAX = 1e-6, 1e6


class _Evaluator:
    """Vectorised evaluation of a LaurentPoly at a batch of complex points."""

    def __init__(self, f: LaurentPoly, names: list[str]):
        monos = list(f.terms)
        self.coeffs = np.array([float(f.terms[m]) for m in monos], dtype=complex)
        self.exps = np.array([m.vector(names) for m in monos], dtype=float).reshape(len(monos), len(names))

    def __call__(self, X: np.ndarray) -> np.ndarray:
        if not len(self.coeffs):
            return np.zeros(X.shape[0], dtype=complex)
        with np.errstate(all="ignore"):
            powers = np.prod(X[:, None, :] ** self.exps[None, :, :], axis=2)
        return powers @ self.coeffs


@dataclass
class NumericSystem:
    names: list[str]
    equations: list[LaurentPoly]
    torus: np.ndarray  # mask of torus unknowns

    @classmethod
    def build(cls, m: LGModel, assignment: Mapping[str, object]):
        fixed = {n: v for n, v in assignment.items()}
        formal = [v.name for v in m.vars if v.domain is Domain.FORMAL]
        eqs = critical_equations(m, tuple(fixed))
        names = [v.name for v in m.vars if v.domain is not Domain.FORMAL and v.name not in fixed]
        torus = np.array([m.var(n).domain is Domain.TORUS for n in names], dtype=bool)
        return cls(names, eqs, torus), fixed, formal


def _prepare(m: LGModel, assignment: Mapping[str, object]):
    system, fixed, formal = NumericSystem.build(m, assignment)
    all_names = system.names + list(fixed)
    F = [_Evaluator(e, all_names) for e in system.equations]
    J = [[_Evaluator(e.derivative(n), all_names) for n in system.names] for e in system.equations]
    fixed_vals = np.array([complex(v) for v in fixed.values()], dtype=complex)
    inverted = [_Evaluator(p.specialize({h: 0 for h in formal}), all_names) for p in m.inverted]
    return system, F, J, fixed_vals, inverted


def _full(X, fixed_vals):
    if not len(fixed_vals):
        return X
    return np.hstack([X, np.broadcast_to(fixed_vals, (X.shape[0], len(fixed_vals)))])


def numeric_crit_search(m: LGModel, assignment: Mapping[str, object] | None = None,
                        trials: int = DEFAULT_TRIALS, seed: int = 0, tol: float = RESIDUAL_TOL,
                        iterations: int = 80) -> list[dict[str, complex]]:
    """Approximate critical points of the potential with ``assignment`` held fixed.

    Newton steps are damped in the Levenberg-Marquardt manner so that singular
    or positive-dimensional loci still attract.  Points with a coordinate of
    modulus above ``1e6``, a torus coordinate below ``1e-6``, or where a recorded nonvanishing function
    is tiny, are discarded.  Results are deduplicated.
    """
    assignment = dict(assignment or {})
    system, F, J, fixed_vals, inverted = _prepare(m, assignment)
    n = len(system.names)
    if n == 0:
        X = np.zeros((1, 0), dtype=complex)
        full = _full(X, fixed_vals)
        res = max((abs(f(full)[0]) for f in F), default=0.0)
        return [dict(assignment)] if res < tol else []
    rng = np.random.default_rng(seed)
    radius = np.exp(rng.uniform(-1.5, 1.5, size=(trials, n)))
    phase = np.exp(2j * np.pi * rng.uniform(size=(trials, n)))
    X = radius * phase
    with np.errstate(all="ignore"):
        for _ in range(iterations):
            full = _full(X, fixed_vals)
            Fv = np.stack([f(full) for f in F], axis=1) if F else np.zeros((trials, 0), complex)
            Jv = np.stack([np.stack([d(full) for d in row], axis=1) for row in J], axis=1)
            res = np.linalg.norm(Fv, axis=1)
            JH = np.conj(np.transpose(Jv, (0, 2, 1)))
            A = JH @ Jv
            mu = np.minimum(res, 1e-2)[:, None, None] * np.eye(n)[None]
            rhs = -(JH @ Fv[:, :, None])
            try:
                dX = np.linalg.solve(A + mu + 1e-300, rhs)[:, :, 0]
            except np.linalg.LinAlgError:
                dX = np.stack([np.linalg.lstsq(A[i] + mu[i], rhs[i], rcond=None)[0][:, 0]
                               for i in range(trials)])
            dX = np.where(np.isfinite(dX), dX, 0)
            X = X + dX
            X = np.where(np.isfinite(X), X, 1.0)
    full = _full(X, fixed_vals)
    Fv = np.stack([f(full) for f in F], axis=1) if F else np.zeros((trials, 0), complex)
    res = np.max(np.abs(Fv), axis=1) if F else np.zeros(trials)
    ok = np.isfinite(res) & (res < tol)
    # runaway starts drift off to infinity along degenerate directions
    ok &= np.all(np.abs(X) < TORUS_MAX, axis=1)
    if system.torus.any():
        mod = np.abs(X[:, system.torus])
        ok &= np.all((mod > TORUS_MIN) & (mod < TORUS_MAX), axis=1)
    for g in inverted:
        ok &= np.abs(g(full)) > TORUS_MIN
    points, seen = [], set()
    for row in X[ok]:
        key = tuple(np.round(row, 6))
        if key in seen:
            continue
        seen.add(key)
        point = {name: complex(v) for name, v in zip(system.names, row)}
        point.update({k: complex(v) for k, v in assignment.items()})
        points.append(point)
    return points


def hessian_det(m: LGModel, point: Mapping[str, complex]) -> complex:
    """Determinant of the ordinary Hessian of the potential at ``point``.

    Only the variables that are not formal enter; formal ones are set to zero.
    """
    formal = [v.name for v in m.vars if v.domain is Domain.FORMAL]
    W = m.potential.specialize({h: 0 for h in formal}) if formal else m.potential
    names = [v.name for v in m.vars if v.name not in formal]
    X = np.array([[complex(point[n]) for n in names]])
    H = np.empty((len(names), len(names)), dtype=complex)
    for i, a in enumerate(names):
        da = W.derivative(a)
        for j, b in enumerate(names):
            H[i, j] = _Evaluator(da.derivative(b), names)(X)[0]
    return complex(np.linalg.det(H)) if names else 1.0


def evaluate_at(f: LaurentPoly, point: Mapping[str, complex]) -> complex:
    names = list(f.names)
    formal = [v.name for v in f.vars if v.domain is Domain.FORMAL]
    X = np.array([[complex(point.get(n, 0.0)) if n not in formal else 0.0 for n in names]])
    return complex(_Evaluator(f, names)(X)[0])
