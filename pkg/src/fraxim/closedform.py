"""Closed-form characteristic impedances and filter bands.

Regimes are dispatched on the sign of a discriminant; purely imaginary
branches are the ones that connect continuously to the DC and high-frequency
limits (capacitors open at DC, so the cell looks like its inductor).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .circuit import CircuitError, ResonanceError

__all__ = [
    "FilterBand",
    "HanoiSolution",
    "SingularParameterError",
    "ladder_Z",
    "ladder_alpha",
    "sg_Z",
    "sg_band",
    "hanoi_gamma",
    "hanoi_band",
    "hanoi_solve",
    "hanoi_residuals",
]

IMAG_ATOL = 1e-12
SQRT15 = math.sqrt(15.0)
SG_LO = 9.0 * (4.0 - SQRT15)  # bounds on 2*w^2*L*C
SG_HI = 9.0 * (4.0 + SQRT15)


class SingularParameterError(CircuitError, ValueError):
    pass


@dataclass(frozen=True)
class FilterBand:
    omega_lo: float
    omega_hi: float
    nonempty: bool

    def contains(self, omega: float) -> bool:
        """Strictly inside; endpoints count as stop band."""
        return self.nonempty and self.omega_lo < omega < self.omega_hi

    @classmethod
    def empty(cls) -> "FilterBand":
        return cls(math.nan, math.nan, False)


@dataclass(frozen=True)
class HanoiSolution:
    z_v: complex
    z_l: complex
    physical: bool

    @property
    def z_r(self) -> complex:
        return self.z_l

    @property
    def top_bottom(self) -> complex:
        """Top terminal to both bottom terminals shorted together."""
        return self.z_v + self.z_l / 2

    @property
    def left_right(self) -> complex:
        return 2 * self.z_l


def _check_positive(**kw):
    for k, v in kw.items():
        if not v > 0:
            raise ValueError(f"{k} must be > 0, got {v!r}")


def ladder_Z(omega: float, L: float, C: float) -> complex:
    _check_positive(omega=omega, L=L, C=C)
    x = omega * omega * L * C
    if x < 4:
        return complex(0.5 * math.sqrt(4 * L * C - x * L * C) / C, 0.5 * omega * L)
    return 1j / (2 * C) * (omega * L * C + math.sqrt(x * L * C - 4 * L * C))


def ladder_alpha(omega: float, L: float, C: float) -> complex:
    """Per-cell voltage ratio (Z - i w L)/Z of the infinite ladder."""
    Z = ladder_Z(omega, L, C)
    return (Z - 1j * omega * L) / Z


def sg_Z(omega: float, L: float, C: float) -> complex:
    _check_positive(omega=omega, L=L, C=C)
    x = omega * omega * L * C
    disc = 144 * x - 4 * x * x - 81
    pre = 1.0 / (10 * omega * C)
    if disc > 0:
        return pre * complex(math.sqrt(disc), 2 * x + 9)
    root = math.sqrt(-disc)
    if 2 * x < 36:
        # 2x + 9 - root, rationalised against cancellation as w -> 0
        return 1j * 18 * omega * L / (2 * x + 9 + root)
    return 1j * pre * (2 * x + 9 + root)


def sg_band(L: float, C: float) -> FilterBand:
    _check_positive(L=L, C=C)
    return FilterBand(math.sqrt(SG_LO / (2 * L * C)), math.sqrt(SG_HI / (2 * L * C)), True)


def hanoi_gamma(r: float) -> float:
    if not 0 < r < 1:
        raise ValueError("r must lie in (0, 1)")
    if r == 0.5:
        raise SingularParameterError("gamma is singular at r = 1/2")
    return 1 + r * (3 - 5 * r) / (2 * r - 1) ** 2


def hanoi_band(r: float, L: float, C: float) -> FilterBand:
    """Frequencies where the lateral impedance has positive real part.

    The quadratic for z_l has a root with Re > 0 exactly when
    ``x**2 - 4*gamma*x + 4 < 0`` with ``x = w**2 L C``, i.e. ``gamma - sqrt(gamma**2 - 1) < L*C*w**2/2 < gamma + sqrt(gamma**2 - 1)``.
    """
    _check_positive(L=L, C=C)
    if not 0 < r < 1:
        raise ValueError("r must lie in (0, 1)")
    if r == 0.5:
        return FilterBand(0.0, math.inf, True)
    if r >= 0.6:
        return FilterBand.empty()
    g = hanoi_gamma(r)
    s = math.sqrt(g * g - 1)
    # g - s computed as 1/(g + s) to keep precision for large gamma
    return FilterBand(math.sqrt(2 / (g + s) / (L * C)), math.sqrt(2 * (g + s) / (L * C)), True)


def hanoi_residuals(sol: HanoiSolution | tuple, omega: float, L: float, C: float,
                    r: float) -> tuple[float, float]:
    """Relative residuals of the top-to-bottom and left-to-right balance."""
    zv, zl = (sol.z_v, sol.z_l) if isinstance(sol, HanoiSolution) else sol
    zc = 1 / (1j * omega * C)
    zi = 1j * omega * L
    lhs5 = zv + zl / 2
    rhs5 = r * zv + (r * zv + 2 * r * zl + zc) / 2
    lhs6 = 2 * zl
    rhs6 = 2 * r * zl + 1 / (1 / (2 * r * zl + zi) + 1 / (2 * r * zv + 2 * r * zl + 2 * zc))
    res5 = abs(lhs5 - rhs5) / max(abs(lhs5), abs(rhs5), abs(zc))
    res6 = abs(lhs6 - rhs6) / max(abs(lhs6), abs(rhs6), abs(zi))
    return res5, res6


def _zv_from_zl(zl: complex, omega: float, C: float, r: float) -> complex:
    return (1 / (1j * omega * C) - (1 - 2 * r) * zl) / (2 - 3 * r)


def _is_physical(zv: complex, zl: complex) -> bool:
    tol = IMAG_ATOL * max(1.0, abs(zv), abs(zl))
    return zl.real >= -tol and (zv + zl / 2).real >= -tol


def hanoi_solve(omega: float, L: float, C: float, r: float) -> HanoiSolution:
    """Self-consistent (z_v, z_l) of the Hanoi circuit.

    For r = 3/5 the quadratic degenerates to a linear equation whose formal
    solution is returned with ``physical=False``.  When both quadratic roots
    are purely imaginary the root reached by the regularised map iteration
    (epsilon = 1e-6) is chosen; if that iteration does not settle, the smaller
    root is returned as a formal solution with ``physical=False``.
    """
    _check_positive(omega=omega, L=L, C=C)
    if not 0 < r < 1:
        raise ValueError("r must lie in (0, 1)")
    x = omega * omega * L * C
    if r == 0.5:
        return HanoiSolution(2 / (1j * omega * C), complex(2 * math.sqrt(L / C)), True)
    if math.isclose(r, 0.6, rel_tol=0, abs_tol=1e-15):
        if abs(2 - x) <= 1e-12 * max(1.0, x):
            raise ResonanceError("r = 3/5 with w^2 L C = 2 has no solution")
        zl = -5j * omega * L / (2 - x)
        zv = 10 / (1j * omega * C * (2 - x))
        return HanoiSolution(zv, zl, False)

    a = 1j * r * (5 * r - 3) * omega * C
    b = (2 * r - 1) * (2 - x)
    c = 1j * omega * L
    sq = cmath.sqrt(b * b - 4 * a * c)
    # b*b - 4ac is real here; pick the cancellation-free pairing
    q = -0.5 * (b + (sq if b.real >= 0 else -sq))
    roots = [q / a, c / q] if q != 0 else [sq / (2 * a), -sq / (2 * a)]
    scale = max(abs(z) for z in roots)
    positive = [z for z in roots if z.real > IMAG_ATOL * max(1.0, scale)]
    if len(positive) == 1:
        zl = positive[0]
    else:
        roots = [complex(0.0, z.imag) if abs(z.real) <= IMAG_ATOL * max(1.0, scale) else z
                 for z in roots]
        zl = _select_by_regularised_limit(roots, omega, L, C, r)
        if zl is None:
            # no regularised limit exists (the map runs away for r > 3/5); return
            # the finite root that continues the r = 3/5 formal solution
            zl = min(roots, key=abs)
            return HanoiSolution(_zv_from_zl(zl, omega, C, r), zl, False)
    zv = _zv_from_zl(zl, omega, C, r)
    return HanoiSolution(zv, zl, _is_physical(zv, zl))


def _select_by_regularised_limit(roots, omega, L, C, r, eps=1e-6):
    from .circuit import EvalContext
    from .limits import family_map, iterate

    f = family_map("hanoi", EvalContext(omega, eps), L, C, r)
    rep = iterate(f, (0j, 0j), tol=1e-12, max_iter=20_000)
    if not rep.converged:
        return None
    return min(roots, key=lambda z: abs(z - rep.value[1]))
