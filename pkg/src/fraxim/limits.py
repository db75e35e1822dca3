"""Self-similar maps, fixed-point iteration and the regularised double limit.

Each family map sends the characteristic value of a level-(N-1) circuit to
that of the level-N circuit built around it, so N applications to the
termination value reproduce the finite network of depth N exactly.  The
N -> infinity limit at fixed epsilon is then a fixed-point iteration, and
the physical answer is its epsilon -> 0+ limit.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .circuit import Element, EvalContext, element_impedance
from .reduce import parallel

__all__ = [
    "IterationReport",
    "DoubleLimit",
    "ladder_map",
    "sg_map",
    "hanoi_map",
    "family_map",
    "iterate",
    "double_limit",
]

CONVERGED = "converged"
CYCLE = "cycle_detected"
MAX_ITER = "max_iterations"
DIVERGED = "diverged"

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 100_000
CYCLE_TOL = 1e-8
CYCLE_WINDOW = 32
DEFAULT_SCHEDULE = (1e-2, 1e-3, 1e-4)


def _zl_zc(ctx: EvalContext, L: float, C: float):
    return (element_impedance(Element.inductor(L), ctx),
            element_impedance(Element.capacitor(C), ctx))


def ladder_map(Z: complex, ctx: EvalContext, L: float = 1.0, C: float = 1.0) -> complex:
    """Prepend one cell: series inductor, then shunt capacitor across ``Z``."""
    zl, zc = _zl_zc(ctx, L, C)
    return zl + parallel(zc, Z)


def sg_map(Z: complex, ctx: EvalContext, L: float = 1.0, C: float = 1.0) -> complex:
    """Side impedance of a cell whose three inner sub-cells have side ``Z``.

    Three sub-cells in gasket position reduce to a delta of side 5Z/3; with a
    capacitor in each star leg the delta side becomes 5Z/3 + 3*z_C, which sits
    in parallel with the outer inductor.
    """
    zl, zc = _zl_zc(ctx, L, C)
    return parallel(zl, 5.0 * Z / 3.0 + 3.0 * zc)


def hanoi_map(zv: complex, zl: complex, ctx: EvalContext, r: float,
              L: float = 1.0, C: float = 1.0) -> tuple[complex, complex]:
    """Legs ``(z_v, z_l)`` of the piece built from three r-scaled copies."""
    z_ind, z_cap = _zl_zc(ctx, L, C)
    left_right = 2 * r * zl + parallel(2 * r * zl + z_ind,
                                       2 * r * zv + 2 * r * zl + 2 * z_cap)
    top_bottom = r * zv + (r * zv + 2 * r * zl + z_cap) / 2
    zl_new = left_right / 2
    return top_bottom - zl_new / 2, zl_new


def family_map(family: str, ctx: EvalContext, L: float = 1.0, C: float = 1.0,
               r: Optional[float] = None) -> Callable:
    """One-argument map for :func:`iterate`; hanoi states are ``(z_v, z_l)``."""
    if family == "ladder":
        return lambda z: ladder_map(z, ctx, L, C)
    if family == "sg":
        return lambda z: sg_map(z, ctx, L, C)
    if family == "hanoi":
        if r is None:
            raise ValueError("hanoi map needs r")
        return lambda z: hanoi_map(z[0], z[1], ctx, r, L, C)
    raise ValueError(f"unknown family {family!r}")


@dataclass
class IterationReport:
    status: str
    value: object
    history: list = field(repr=False)
    iterations: int

    @property
    def converged(self) -> bool:
        return self.status == CONVERGED


def _as_vec(z) -> np.ndarray:
    return np.atleast_1d(np.asarray(z, dtype=complex))


def _dist(a, b) -> float:
    if isinstance(a, tuple):
        return max(abs(x - y) for x, y in zip(a, b))
    return abs(a - b)


def _size(z) -> float:
    return max(abs(x) for x in z) if isinstance(z, tuple) else abs(z)


def iterate(f: Callable, z0, tol: float = DEFAULT_TOL,
            max_iter: int = DEFAULT_MAX_ITER, cycle_tol: float = CYCLE_TOL,
            window: int = CYCLE_WINDOW) -> IterationReport:
    """Iterate ``z <- f(z)`` from ``z0``.

    Stops with ``converged`` once a step satisfies
    ``|z_n - z_(n-1)| <= tol * max(1, |z_n|)``.  A ``cycle_detected`` verdict
    needs ``z_n`` to come back within ``cycle_tol`` of some ``z_(n-p)``,
    2 <= p <= window, while single steps stay large (a slowly converging
    orbit also revisits its own neighbourhood, but with tiny steps).
    Pairs are compared entrywise by their largest difference.
    """
    if not tol > 0 or max_iter < 1:
        raise ValueError("need tol > 0 and max_iter >= 1")
    pair = np.ndim(z0) != 0
    z = tuple(complex(x) for x in z0) if pair else complex(z0)
    history = [z]
    recent: deque = deque([z], maxlen=window + 1)
    big_step = math.sqrt(cycle_tol)
    for n in range(1, max_iter + 1):
        z_new = f(z)
        z_new = tuple(complex(x) for x in z_new) if pair else complex(z_new)
        history.append(z_new)
        size = _size(z_new)
        if not math.isfinite(size):
            return IterationReport(DIVERGED, None, history, n)
        scale = max(1.0, size)
        step = _dist(z_new, z)
        if step <= tol * scale:
            return IterationReport(CONVERGED, z_new, history, n)
        if step > big_step * scale:
            limit = cycle_tol * scale
            # the newest entry of ``recent`` is z itself (period 1), skip it
            if any(_dist(old, z_new) <= limit for old in list(recent)[:-1]):
                return IterationReport(CYCLE, None, history, n)
        recent.append(z_new)
        z = z_new
    return IterationReport(MAX_ITER, None, history, max_iter)


@dataclass
class DoubleLimit:
    value: object
    epsilons: tuple
    limits: list
    reports: list = field(repr=False)
    cauchy: bool

    @property
    def sequence(self) -> list:
        return list(zip(self.epsilons, self.limits))


def _gap(a, b) -> float:
    return float(np.max(np.abs(_as_vec(a) - _as_vec(b))))


def double_limit(family: str, omega: float, L: float = 1.0, C: float = 1.0,
                 r: Optional[float] = None,
                 eps_schedule: Sequence[float] = DEFAULT_SCHEDULE,
                 tol: float = 5e-3, z0=None,
                 inner_tol: float = DEFAULT_TOL,
                 max_iter: int = DEFAULT_MAX_ITER) -> DoubleLimit:
    """Inner limit N -> infinity for each epsilon, reported as a raw sequence.

    No extrapolation is applied; ``value`` is the limit at the smallest
    epsilon.  ``cauchy`` is False when the last two epsilon-limits differ by
    more than ``tol * max(1, |value|)``.
    """
    eps_schedule = tuple(float(e) for e in eps_schedule)
    if not eps_schedule or any(e <= 0 for e in eps_schedule):
        raise ValueError("eps_schedule must be non-empty and positive")
    if any(b >= a for a, b in zip(eps_schedule, eps_schedule[1:])):
        raise ValueError("eps_schedule must be strictly decreasing")
    if z0 is None:
        z0 = (0j, 0j) if family == "hanoi" else 0j
    limits, reports = [], []
    for eps in eps_schedule:
        f = family_map(family, EvalContext(omega, eps), L, C, r)
        rep = iterate(f, z0, tol=inner_tol, max_iter=max_iter)
        reports.append(rep)
        if not rep.converged:
            raise ArithmeticError(
                f"inner iteration did not converge at epsilon={eps:g}: {rep.status}")
        limits.append(rep.value)
    value = limits[-1]
    cauchy = True
    if len(limits) > 1:
        scale = max(1.0, float(np.max(np.abs(_as_vec(value)))))
        cauchy = _gap(limits[-1], limits[-2]) <= tol * scale
    return DoubleLimit(value, eps_schedule, limits, reports, cauchy)
