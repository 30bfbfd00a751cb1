"""Boundary-integral and grid oracles, independent of the coefficient algebra.

All integrals use the equal-weight trapezoid rule on ``theta_j = 2 pi j / K``,
which is exact for trigonometric polynomials of degree < K and spectrally
accurate for functions analytic in a neighbourhood of the circle.
"""
from __future__ import annotations

import math
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .inner import InnerSpec, evaluate
from .seq import CoeffSeq

DEFAULT_K = 8192
#: radii for the in-measure modulus check of specs with atoms
LADDER_RADII = (1.0 - 1e-6, 1.0 - 1e-8, 1.0 - 1e-10)


class Quadrature(NamedTuple):
    value: float
    K: int
    r: float


class Crosscheck(NamedTuple):
    discrepancy: float
    tail: float | None
    coeff_side: float
    boundary_side: float
    K: int
    r: float

    @property
    def passed(self) -> bool:
        if self.tail is None:
            return False
        return self.discrepancy <= self.tail + 1e-10


class Ladder(NamedTuple):
    radii: tuple[float, ...]
    fractions: tuple[float, ...]
    threshold: float
    passed: bool


def _grid_values(f, K: int, r: float) -> np.ndarray:
    if K < 16:
        raise ValueError("grid needs at least 16 points")
    z = r * np.exp(2j * np.pi * np.arange(K) / K)
    if isinstance(f, InnerSpec):
        vals = evaluate(f, z, boundary=r >= 1.0 - 1e-12)
    else:
        vals = np.asarray(f(z), dtype=complex)
    bad = ~np.isfinite(vals)
    if np.any(bad):
        j = int(np.nonzero(bad)[0][0])
        raise FloatingPointError(
            f"non-finite sample at theta_{j} = {2 * math.pi * j / K:.6g} (r={r})")
    return vals


def boundary_norm_sq(f: InnerSpec | Callable, K: int = DEFAULT_K, r: float = 1.0) -> Quadrature:
    """``(1/K) sum_j |f(r e^{i theta_j})|^2``."""
    vals = _grid_values(f, K, r)
    return Quadrature(float(np.mean(np.abs(vals) ** 2)), K, r)


def modulus_defect(f: InnerSpec | Callable, K: int = DEFAULT_K, r: float = 1.0) -> float:
    """``max_j | |f(r e^{i theta_j})| - 1 |``.  For specs with atoms use r < 1."""
    if not 0.0 < r <= 1.0:
        raise ValueError("radius must lie in (0, 1]")
    vals = _grid_values(f, K, r)
    return float(np.max(np.abs(np.abs(vals) - 1.0)))


def defect_fraction(f, K: int, r: float, threshold: float) -> float:
    vals = _grid_values(f, K, r)
    return float(np.mean(np.abs(np.abs(vals) - 1.0) > threshold))


def radial_ladder(f, radii: Sequence[float] = LADDER_RADII, K: int = DEFAULT_K,
                  threshold: float = 1e-6, final_max: float = 0.01) -> Ladder:
    """Modulus-one check in measure for functions singular on the circle.

    The fraction of grid points whose modulus defect exceeds ``threshold``
    must strictly decrease along the increasing radii and end below
    ``final_max``.
    """
    radii = tuple(sorted(radii))
    fr = tuple(defect_fraction(f, K, r, threshold) for r in radii)
    decreasing = all(b < a or a == 0.0 for a, b in zip(fr, fr[1:]))
    return Ladder(radii, fr, threshold, decreasing and fr[-1] <= final_max)


def coeff_boundary_values(lam: CoeffSeq, K: int = DEFAULT_K, r: float = 1.0) -> np.ndarray:
    """Values of the stored polynomial ``sum_n lambda_n z^n`` on the K-grid."""
    c = lam.coeffs * r ** np.arange(len(lam), dtype=float)
    folded = np.zeros(K, dtype=complex)
    np.add.at(folded, np.arange(c.size) % K, c)
    return np.fft.ifft(folded) * K


def sup_norm_estimate(lam: CoeffSeq, K: int = DEFAULT_K) -> tuple[float, float | None]:
    """Grid maximum of ``|phi|`` on the circle and the l1 tail that bounds its error."""
    vals = coeff_boundary_values(lam, K)
    return float(np.max(np.abs(vals))), lam.tail_l1()


def parseval_crosscheck(lam: CoeffSeq, f: InnerSpec | Callable, K: int = DEFAULT_K,
                        r: float = 1.0) -> Crosscheck:
    """Compare ``sum |lambda_n|^2 r^(2n)`` with the boundary integral of ``|f|^2``."""
    c = lam.coeffs
    w = r ** (2.0 * np.arange(c.size))
    coeff_side = float(np.sum(np.abs(c) ** 2 * w))
    tail = lam.tail_sq()
    if tail is not None and r < 1.0:
        tail = tail * r ** (2 * (lam.order + 1))
    q = boundary_norm_sq(f, K, r)
    return Crosscheck(abs(coeff_side - q.value), tail, coeff_side, q.value, K, r)
