"""Truncated coefficient sequences on l^2.

A :class:`CoeffSeq` stores the first ``M + 1`` Taylor coefficients of a
function in the disk.  What is known about the omitted tail is explicit:

* ``finite=True``: the stored entries are the whole sequence, tail is 0;
* ``decay=DecayCert(C, rho)``: ``|s_n| <= C rho**n`` for every n, and all
  tail estimates are derived from that envelope;
* neither: the tail is unknown and reported as ``None``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

#: below this (shorter input) length convolution is done directly
CROSSOVER = 64

# floating slack when validating a certificate against stored entries
_REL_SLACK = 1e-9
_ABS_SLACK = 1e-12


@dataclass(frozen=True)
class DecayCert:
    """Geometric envelope ``|s_n| <= C * rho**n`` valid for every n >= 0."""

    C: float
    rho: float

    def __post_init__(self):
        if not 0.0 < self.rho < 1.0:
            raise ValueError(f"decay rate must lie in (0, 1), got {self.rho!r}")
        if not (self.C >= 0.0 and math.isfinite(self.C)):
            raise ValueError(f"decay constant must be finite and >= 0, got {self.C!r}")

    def bound(self, n):
        return self.C * self.rho ** np.asarray(n, dtype=float)

    def tail_sq(self, M: int) -> float:
        """Upper bound on ``sum_{n>M} |s_n|^2``."""
        if self.C == 0.0:
            return 0.0
        log_t = (2.0 * math.log(self.C) + 2.0 * (M + 1) * math.log(self.rho)
                 - math.log1p(-self.rho ** 2))
        return math.exp(log_t) if log_t < 700 else math.inf

    def tail_l1(self, M: int) -> float:
        """Upper bound on ``sum_{n>M} |s_n|``."""
        if self.C == 0.0:
            return 0.0
        log_t = (math.log(self.C) + (M + 1) * math.log(self.rho)
                 - math.log1p(-self.rho))
        return math.exp(log_t) if log_t < 700 else math.inf

    def scaled(self, c) -> DecayCert:
        return DecayCert(self.C * abs(c), self.rho)

    def shifted(self, m: int) -> DecayCert:
        return DecayCert(self.C / self.rho ** m, self.rho)


class CoeffSeq:
    """Immutable finite coefficient vector ``(s_0, ..., s_M)``.

    Parameters
    ----------
    coeffs : array_like
        Complex coefficients, index n is the coefficient of ``z**n``.
    decay : DecayCert, optional
        Envelope for the whole (infinite) sequence.  Checked against the
        stored entries on construction.
    finite : bool
        True when the stored entries are the entire sequence.
    """

    __slots__ = ("_c", "decay", "finite")

    def __init__(self, coeffs, decay: DecayCert | None = None, finite: bool = False):
        c = np.array(coeffs, dtype=complex).ravel()
        if c.size == 0:
            raise ValueError("coefficient sequence must be non-empty")
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        c.setflags(write=False)
        if decay is not None:
            mod = np.abs(c)
            env = decay.bound(np.arange(c.size))
            slack = _ABS_SLACK * mod.max() + 1e-300
            bad = np.nonzero(mod > env * (1.0 + _REL_SLACK) + slack)[0]
            if bad.size:
                n = int(bad[0])
                raise ValueError(
                    f"decay certificate violated at n={n}: |s_n|={mod[n]:.3e} > {env[n]:.3e}")
        object.__setattr__(self, "_c", c)
        object.__setattr__(self, "decay", decay)
        object.__setattr__(self, "finite", bool(finite))

    def __setattr__(self, name, value):
        raise AttributeError("CoeffSeq is immutable")

    @classmethod
    def poly(cls, coeffs) -> CoeffSeq:
        """Finitely supported sequence (a polynomial): tail known to be 0."""
        return cls(coeffs, finite=True)

    @classmethod
    def delta(cls, m: int = 0) -> CoeffSeq:
        c = np.zeros(m + 1, dtype=complex)
        c[m] = 1.0
        return cls(c, finite=True)

    @property
    def coeffs(self) -> np.ndarray:
        return self._c

    @property
    def order(self) -> int:
        """Index M of the last stored coefficient."""
        return self._c.size - 1

    def __len__(self):
        return self._c.size

    def __getitem__(self, n):
        return self._c[n]

    def __iter__(self):
        return iter(self._c)

    def __array__(self, dtype=None, copy=None):
        return self._c if dtype is None else self._c.astype(dtype)

    def __eq__(self, other):
        if not isinstance(other, CoeffSeq):
            return NotImplemented
        return (self._c.shape == other._c.shape and bool(np.all(self._c == other._c))
                and self.decay == other.decay and self.finite == other.finite)

    __hash__ = None

    def __repr__(self):
        tail = "finite" if self.finite else (repr(self.decay) if self.decay else "tail unknown")
        return f"CoeffSeq(order={self.order}, {tail})"

    @property
    def tail_known(self) -> bool:
        return self.finite or self.decay is not None

    def tail_sq(self) -> float | None:
        """Bound on the squared l2 mass beyond the stored entries, or None."""
        if self.finite:
            return 0.0
        if self.decay is not None:
            return self.decay.tail_sq(self.order)
        return None

    def tail_l1(self) -> float | None:
        if self.finite:
            return 0.0
        if self.decay is not None:
            return self.decay.tail_l1(self.order)
        return None

    def scaled(self, factor) -> CoeffSeq:
        decay = self.decay.scaled(factor) if self.decay is not None else None
        return CoeffSeq(self._c * factor, decay=decay, finite=self.finite)

    def truncated(self, length: int) -> CoeffSeq:
        """First ``length`` entries; an exact sequence stays exact only if nothing is dropped."""
        if length < 1:
            raise ValueError("length must be >= 1")
        head = self._c[:length]
        finite = self.finite and not np.any(self._c[length:])
        decay = self.decay
        if self.finite and not finite and decay is None:
            decay = _envelope_of_finite(self._c)
        return CoeffSeq(head, decay=None if finite else decay, finite=finite)

    def padded(self, length: int) -> CoeffSeq:
        """Append zeros up to ``length``; only meaningful for finite sequences."""
        if not self.finite:
            raise ValueError("zero padding requires a finitely supported sequence")
        if length <= self._c.size:
            return self
        c = np.zeros(length, dtype=complex)
        c[: self._c.size] = self._c
        return CoeffSeq(c, finite=True)


def _envelope_of_finite(c: np.ndarray, rho: float = 0.5) -> DecayCert:
    n = np.arange(c.size)
    return DecayCert(float(np.max(np.abs(c) / rho ** n)), rho)


class NormSq(NamedTuple):
    """Partial sum ``sum_{n<=M} |s_n|^2`` and a bound on the omitted mass."""

    partial: float
    tail: float | None

    @property
    def upper(self) -> float | None:
        return None if self.tail is None else self.partial + self.tail

    @property
    def interval(self) -> tuple[float, float | None]:
        return self.partial, self.upper


class Correlation(NamedTuple):
    value: complex
    radius: float | None


def l2_norm_sq(s: CoeffSeq) -> NormSq:
    c = s.coeffs
    return NormSq(float(np.vdot(c, c).real), s.tail_sq())


def _conv_direct(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.convolve(a, b)


def _conv_fft(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = a.size + b.size - 1
    nfft = 1 << (n - 1).bit_length()
    out = np.fft.ifft(np.fft.fft(a, nfft) * np.fft.fft(b, nfft))[:n]
    return out


def conv_arrays(a: np.ndarray, b: np.ndarray, method: str = "auto") -> np.ndarray:
    """Full linear convolution of two complex arrays."""
    if method == "auto":
        method = "direct" if min(a.size, b.size) < CROSSOVER else "fft"
    if method == "direct":
        return _conv_direct(a, b)
    if method == "fft":
        return _conv_fft(a, b)
    raise ValueError(f"unknown convolution method {method!r}")


def _combine_certs(da: DecayCert, db: DecayCert) -> DecayCert:
    # |c_n| <= Ca Cb sum_j ra^j rb^(n-j)
    lo, hi = sorted((da.rho, db.rho))
    if hi / lo > 1.0 + 1e-9:
        # geometric sum in the ratio lo/hi
        return DecayCert(da.C * db.C / (1.0 - lo / hi), hi)
    # equal rates: (n+1) hi^n <= C' rho'^n with rho' = (1 + hi)/2
    rho_p = 0.5 * (1.0 + hi)
    q = hi / rho_p
    if -1.0 / math.log(q) <= 1.0:
        peak = 1.0
    else:
        peak = (-1.0 / math.log(q)) / (math.e * q)
    return DecayCert(da.C * db.C * peak, rho_p)


def _cert_times_finite(d: DecayCert, p: np.ndarray) -> DecayCert:
    # |sum_j p_j s_{n-j}| <= C rho^n sum_j |p_j| rho^-j
    n = np.arange(p.size)
    with np.errstate(over="ignore"):
        w = float(np.sum(np.abs(p) * d.rho ** (-n.astype(float))))
    if not math.isfinite(w):
        raise OverflowError("combined certificate overflows")
    return DecayCert(d.C * w, d.rho)


def convolve(a: CoeffSeq, b: CoeffSeq, method: str = "auto") -> CoeffSeq:
    """Cauchy product ``sum_{j<=n} a_j b_{n-j}`` of the stored entries.

    The output has ``len(a) + len(b) - 1`` entries.  Entries beyond
    ``min(a.order, b.order)`` are those of the product of the truncations;
    the attached certificate (if any) bounds the true infinite product.
    """
    out = conv_arrays(a.coeffs, b.coeffs, method)
    if a.finite and b.finite:
        return CoeffSeq(out, finite=True)
    decay = None
    if a.decay is not None and b.decay is not None:
        decay = _combine_certs(a.decay, b.decay)
    elif a.finite and b.decay is not None:
        decay = _cert_times_finite(b.decay, a.coeffs)
    elif b.finite and a.decay is not None:
        decay = _cert_times_finite(a.decay, b.coeffs)
    return CoeffSeq(out, decay=decay)


def lag_product(c: np.ndarray, m: int) -> complex:
    """``sum_n c_n conj(c_{n+m})`` over stored entries (0 when m >= len)."""
    if m >= c.size:
        return 0j
    return complex(np.vdot(c[m:], c[: c.size - m]))


def lag_radius(s: CoeffSeq, m: int) -> float | None:
    tail = s.tail_sq()
    if tail is None:
        return None
    if tail == 0.0:
        return 0.0
    c = s.coeffs
    start = max(0, s.order - m + 1)
    known = float(np.vdot(c[start:], c[start:]).real)
    return math.sqrt(known + tail) * math.sqrt(tail)


def correlate(s: CoeffSeq, m: int) -> Correlation:
    """Autocorrelation ``r(m) = sum_n s_n conj(s_{n+m})`` with a tail radius.

    The radius bounds the omitted terms by Cauchy-Schwarz; it is None when
    the tail of ``s`` is unknown.
    """
    if m < 0 or m >= len(s):
        raise ValueError(f"lag must satisfy 0 <= m < {len(s)}, got {m}")
    return Correlation(lag_product(s.coeffs, m), lag_radius(s, m))


def shift(s: CoeffSeq, m: int = 1) -> CoeffSeq:
    """Unilateral shift applied m times: prepend m zeros."""
    if m < 0:
        raise ValueError("shift count must be non-negative")
    if m == 0:
        return s
    c = np.concatenate([np.zeros(m, dtype=complex), s.coeffs])
    decay = s.decay.shifted(m) if s.decay is not None else None
    return CoeffSeq(c, decay=decay, finite=s.finite)
