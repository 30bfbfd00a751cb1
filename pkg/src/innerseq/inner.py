"""Inner functions built from a phase, a monomial, Blaschke zeros and boundary atoms.

    phi(z) = e^{i phase} z^m prod_k b_{a_k}(z)^{mult_k}
             prod_j exp(-s_j (e^{i t_j} + z) / (e^{i t_j} - z))

with ``b_a(z) = (|a|/a) (a - z) / (1 - conj(a) z)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np
from scipy.optimize import minimize_scalar

from .seq import CoeffSeq, DecayCert, conv_arrays, shift

TWO_PI = 2.0 * math.pi
#: evaluation inside the disk requires |z| <= 1 - DISK_MARGIN
DISK_MARGIN = 1e-12
#: zeros closer than this to the circle are flagged as ill-conditioned
ILL_CONDITIONED_MODULUS = 0.95
SAMPLE_K = 4096
SAMPLE_TOL = 1e-16


class SpecError(ValueError):
    """Invalid inner-function description; ``field`` names the offending entry."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


@dataclass(frozen=True)
class Zero:
    value: complex
    mult: int = 1


@dataclass(frozen=True)
class Atom:
    theta: float
    mass: float


@dataclass(frozen=True)
class InnerSpec:
    phase: float = 0.0
    monomial_order: int = 0
    zeros: tuple[Zero, ...] = ()
    atoms: tuple[Atom, ...] = field(default=())

    def __post_init__(self):
        if not math.isfinite(self.phase):
            raise SpecError("phase", "must be a finite real")
        object.__setattr__(self, "phase", self.phase % TWO_PI)
        if int(self.monomial_order) != self.monomial_order or self.monomial_order < 0:
            raise SpecError("monomial_order", "must be a non-negative integer")
        object.__setattr__(self, "monomial_order", int(self.monomial_order))
        zeros = tuple(self.zeros)
        for i, z in enumerate(zeros):
            r = abs(z.value)
            if not 0.0 < r < 1.0:
                raise SpecError(f"zeros[{i}]", f"modulus must lie in (0, 1), got {r!r}"
                                + (" (use monomial_order for zeros at 0)" if r == 0 else ""))
            if int(z.mult) != z.mult or z.mult < 1:
                raise SpecError(f"zeros[{i}].mult", "must be an integer >= 1")
        atoms = []
        for i, a in enumerate(self.atoms):
            if not (a.mass > 0 and math.isfinite(a.mass)):
                raise SpecError(f"atoms[{i}].mass", "must be a positive real")
            if not math.isfinite(a.theta):
                raise SpecError(f"atoms[{i}].theta", "must be a finite real")
            atoms.append(Atom(a.theta % TWO_PI, float(a.mass)))
        thetas = [a.theta for a in atoms]
        if len(set(thetas)) != len(thetas):
            raise SpecError("atoms", "atom angles must be pairwise distinct")
        object.__setattr__(self, "zeros", zeros)
        object.__setattr__(self, "atoms", tuple(atoms))

    @classmethod
    def from_dict(cls, d: Mapping) -> InnerSpec:
        """Build from the JSON layout ``{"phase", "monomial_order", "zeros", "atoms"}``."""
        if not isinstance(d, Mapping):
            raise SpecError("<root>", "spec must be a JSON object")
        unknown = set(d) - {"phase", "monomial_order", "zeros", "atoms"}
        if unknown:
            raise SpecError(sorted(unknown)[0], "unknown field")
        phase = _number(d.get("phase", 0.0), "phase")
        order = d.get("monomial_order", 0)
        if isinstance(order, bool) or not isinstance(order, int):
            raise SpecError("monomial_order", "must be a non-negative integer")
        zeros = []
        for i, z in enumerate(_list(d.get("zeros", []), "zeros")):
            if not isinstance(z, Mapping):
                raise SpecError(f"zeros[{i}]", "must be an object")
            mult = z.get("mult", 1)
            if isinstance(mult, bool) or not isinstance(mult, int):
                raise SpecError(f"zeros[{i}].mult", "must be an integer >= 1")
            zeros.append(Zero(complex(_number(z.get("re", 0.0), f"zeros[{i}].re"),
                                      _number(z.get("im", 0.0), f"zeros[{i}].im")), mult))
        atoms = []
        for i, a in enumerate(_list(d.get("atoms", []), "atoms")):
            if not isinstance(a, Mapping):
                raise SpecError(f"atoms[{i}]", "must be an object")
            if "mass" not in a:
                raise SpecError(f"atoms[{i}].mass", "missing")
            atoms.append(Atom(_number(a.get("theta", 0.0), f"atoms[{i}].theta"),
                              _number(a["mass"], f"atoms[{i}].mass")))
        return cls(phase, order, tuple(zeros), tuple(atoms))

    def to_dict(self) -> dict:
        return {
            "phase": self.phase,
            "monomial_order": self.monomial_order,
            "zeros": [{"re": z.value.real, "im": z.value.imag, "mult": z.mult} for z in self.zeros],
            "atoms": [{"theta": a.theta, "mass": a.mass} for a in self.atoms],
        }

    @property
    def degree(self) -> int:
        """Number of zeros counted with multiplicity, including the origin."""
        return self.monomial_order + sum(z.mult for z in self.zeros)

    def ill_conditioned_zeros(self) -> list[Zero]:
        return [z for z in self.zeros if abs(z.value) > ILL_CONDITIONED_MODULUS]

    def __call__(self, z):
        return evaluate(self, z)


def _number(x, name: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)) or not math.isfinite(x):
        raise SpecError(name, f"must be a finite number, got {x!r}")
    return float(x)


def _list(x, name: str) -> list:
    if not isinstance(x, list):
        raise SpecError(name, "must be a list")
    return x


def singular_kernel(theta: float, z: np.ndarray) -> np.ndarray:
    """Herglotz kernel ``(w + z) / (w - z)`` for ``w = e^{i theta}``.

    Written as ``((1 - |z|^2) + 2i Im(z conj w)) / |w - z|^2`` so that the
    real part keeps full relative accuracy near the circle.
    """
    w = np.exp(1j * theta)
    r = np.abs(z)
    num = (1.0 - r) * (1.0 + r) + 2j * (z * np.conj(w)).imag
    return num / np.abs(w - z) ** 2


def evaluate(spec: InnerSpec, z, boundary: bool = False):
    """Evaluate the inner function at points ``z`` of the disk.

    ``boundary=True`` also allows ``|z| = 1`` for specs without atoms (the
    product is then a rational function, analytic across the circle).
    """
    z = np.asarray(z, dtype=complex)
    mod = np.abs(z)
    if boundary and not spec.atoms:
        if np.any(mod > 1.0 + 1e-12):
            raise ValueError("evaluation point outside the closed unit disk")
    elif np.any(mod > 1.0 - DISK_MARGIN):
        raise ValueError(
            "evaluation point outside the disk |z| <= 1 - 1e-12"
            + (" (boundary values are singular at atoms)" if boundary else ""))
    out = np.exp(1j * spec.phase) * z ** spec.monomial_order
    for zero in spec.zeros:
        a = zero.value
        b = (abs(a) / a) * (a - z) / (1.0 - np.conj(a) * z)
        out = out * b ** zero.mult
    if spec.atoms:
        expo = np.zeros_like(z)
        for atom in spec.atoms:
            expo = expo + atom.mass * singular_kernel(atom.theta, z)
        out = out * np.exp(-expo)
    return out


def blaschke_factor_coeffs(a: complex, M: int) -> CoeffSeq:
    """Taylor coefficients of ``(a - z) / (1 - conj(a) z)`` up to index M.

    ``lambda_0 = a`` and ``lambda_n = (|a|^2 - 1) conj(a)^(n-1)``.  The
    certificate uses ``rho = |a|``.
    """
    a = complex(a)
    r = abs(a)
    if not 0.0 < r < 1.0:
        raise ValueError(f"Blaschke zero must satisfy 0 < |a| < 1, got |a|={r!r}")
    if M < 0:
        raise ValueError("order must be >= 0")
    c = np.empty(M + 1, dtype=complex)
    c[0] = a
    if M >= 1:
        c[1:] = (r * r - 1.0) * np.conj(a) ** np.arange(M)
    # (1-|a|^2)/|a| alone does not cover lambda_0 = a when |a| > 1/sqrt(2)
    C = max(r, (1.0 - r * r) / r)
    return CoeffSeq(c, decay=DecayCert(C, r))


def _log_cauchy_constant(rho: float, moduli: list[tuple[float, int]], m: int) -> float:
    # max of |phi| on |z| = 1/rho: per factor (1 - rho|a|)/(rho - |a|), and rho^-m
    s = -m * math.log(rho)
    for r, mult in moduli:
        s += mult * (math.log1p(-rho * r) - math.log(rho - r))
    return s


def blaschke_cert(spec: InnerSpec, M: int) -> DecayCert:
    """Decay certificate for a zeros-only spec, tuned for truncation at M.

    Cauchy's estimate on the circle of radius 1/rho, with rho anywhere in
    (max|a|, 1), gives ``|lambda_n| <= max_{|z|=1/rho} |phi| * rho^n``; rho
    is chosen to minimise the resulting l2 tail bound beyond M.
    """
    if spec.atoms:
        raise ValueError("no geometric certificate exists for specs with atoms")
    m = spec.monomial_order
    moduli = [(abs(z.value), z.mult) for z in spec.zeros]
    if not moduli:
        return DecayCert(0.5 ** -m, 0.5)
    rmax = max(r for r, _ in moduli)

    def log_tail(rho):
        return (2.0 * _log_cauchy_constant(rho, moduli, m) + 2.0 * (M + 1) * math.log(rho)
                - math.log1p(-rho * rho))

    gap = 1.0 - rmax
    lo, hi = rmax + 1e-9 * gap, 1.0 - 1e-9 * gap
    res = minimize_scalar(log_tail, bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-12 * gap})
    rho = float(res.x)
    best = DecayCert(math.exp(_log_cauchy_constant(rho, moduli, m)), rho)
    if len(moduli) == 1 and moduli[0][1] == 1:
        # exact single-factor envelope, reindexed by the monomial shift
        r = moduli[0][0]
        single = DecayCert(max(r, (1.0 - r * r) / r), r).shifted(m)
        if single.tail_sq(M) < best.tail_sq(M):
            best = single
    return best


def _blaschke_part(spec: InnerSpec, M: int) -> np.ndarray:
    out = np.zeros(M + 1, dtype=complex)
    out[0] = 1.0
    for zero in spec.zeros:
        a = zero.value
        factor = blaschke_factor_coeffs(a, M).coeffs * (abs(a) / a)
        for _ in range(zero.mult):
            out = conv_arrays(out, factor, "direct")[: M + 1]
    return out * np.exp(1j * spec.phase)


def spec_coeffs(spec: InnerSpec, M: int, sample_K: int = SAMPLE_K,
                sample_tol: float = SAMPLE_TOL) -> CoeffSeq:
    """Taylor coefficients ``lambda_0 .. lambda_M`` of the inner function.

    Zeros-only specs carry a decay certificate; a pure monomial is returned
    as a finite sequence.  When atoms are present the singular factor is
    sampled (see :func:`sample_coeffs`) and the tail is unknown.
    """
    if M < 0:
        raise ValueError("order must be >= 0")
    m = spec.monomial_order
    core = _blaschke_part(spec, M)
    if spec.atoms:
        K = max(sample_K, 1 << (4 * M - 1).bit_length()) if M > 0 else sample_K
        sing, _ = sample_coeffs(lambda z: evaluate(InnerSpec(atoms=spec.atoms), z),
                                M, K, tol=sample_tol)
        core = conv_arrays(core, sing.coeffs, "direct")[: M + 1]
        full = np.concatenate([np.zeros(m, dtype=complex), core])[: M + 1]
        return CoeffSeq(full)
    if not spec.zeros:
        if M >= m:
            return CoeffSeq.poly(np.concatenate([np.zeros(m, dtype=complex), core])[: M + 1])
        return CoeffSeq(np.zeros(M + 1, dtype=complex), decay=blaschke_cert(spec, M))
    cert = blaschke_cert(spec, M)
    unshifted = CoeffSeq(core)
    full = shift(unshifted, m).coeffs[: M + 1]
    return CoeffSeq(full, decay=cert)


def default_radius(K: int, tol: float = SAMPLE_TOL) -> float:
    """Radius with ``r**K = sqrt(tol)``."""
    return math.exp(math.log(tol) / (2.0 * K))


def sample_coeffs(f: Callable, M: int, K: int = SAMPLE_K, r: float | None = None,
                  tol: float = SAMPLE_TOL) -> tuple[CoeffSeq, np.ndarray]:
    """Taylor coefficients of a bounded analytic f by sampling on ``|z| = r``.

    Returns the coefficient estimates and the per-index aliasing bound
    ``r^K / (r^n (1 - r^K))``, valid when ``|f| <= 1`` on the sampling circle.
    """
    if K <= M:
        raise ValueError(f"sample count K={K} must exceed order M={M}")
    if r is None:
        r = default_radius(K, tol)
    if not 0.0 < r < 1.0:
        raise ValueError(f"sampling radius must lie in (0, 1), got {r!r}")
    w = np.exp(2j * np.pi * np.arange(K) / K)
    vals = np.asarray(f(r * w), dtype=complex)
    if not np.all(np.isfinite(vals)):
        raise ValueError("non-finite sample value")
    if np.max(np.abs(vals)) > 1.0 + 1e-12:
        raise ValueError("sampled function exceeds 1 in modulus; aliasing bound invalid")
    n = np.arange(M + 1)
    c = np.fft.fft(vals)[: M + 1] / K * r ** (-n.astype(float))
    rK = r ** K
    bound = rK / (r ** n * (1.0 - rK))
    return CoeffSeq(c), bound
