"""Shift-invariant subspaces ``phi * l2`` of l2 for an inner generator phi.

Elements are Cauchy products ``(sum_{k<=n} lambda_k c_{n-k})_n`` with c in
l2.  Membership of a target g is decided from two recoveries of the
pre-image c: the adjoint of the (isometric) multiplication operator, which
is numerically stable and gives the distance of g to the subspace, and
forward substitution, which is exact in exact arithmetic and whose
geometric blow-up is evidence that ``g / phi`` is not in l2.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .config import ToleranceConfig
from .schur import CriterionReport, classify
from .seq import CoeffSeq, convolve, conv_arrays, shift

MEMBER = "member"
NONMEMBER = "nonmember"
INCONCLUSIVE = "inconclusive"

ILL_CONDITIONED_LEAD = 1e-6
_OVERFLOW = 1e250


class RefutedGenerator(ValueError):
    """The proposed generator failed the inner-ness checks."""

    def __init__(self, report: CriterionReport):
        self.report = report
        super().__init__(f"generator is not inner: witness {report.witness}")


class LeadingZeroMismatch(ValueError):
    """Target has a non-zero entry where every subspace element vanishes."""

    def __init__(self, index: int, value: complex):
        self.index = index
        self.value = value
        super().__init__(f"target entry g_{index} = {value!r} but the generator vanishes "
                         f"to order > {index}")


class IllConditionedWarning(UserWarning):
    pass


def leading_zeros(lam: CoeffSeq, tol: float = 1e-12) -> int:
    nz = np.nonzero(np.abs(lam.coeffs) > tol)[0]
    if nz.size == 0:
        raise ValueError("generator is identically zero")
    return int(nz[0])


@dataclass(frozen=True)
class SubspaceHandle:
    generator: CoeffSeq
    report: CriterionReport
    leading_zeros: int

    @classmethod
    def from_generator(cls, lam: CoeffSeq, cfg: ToleranceConfig | None = None) -> SubspaceHandle:
        cfg = cfg or ToleranceConfig()
        report = classify(lam, cfg)
        if report.refuted:
            raise RefutedGenerator(report)
        return cls(lam, report, leading_zeros(lam, cfg.leading_zero_tol))


def generate_element(h: SubspaceHandle, c: CoeffSeq) -> CoeffSeq:
    return convolve(h.generator, c)


def deconvolve(lam: CoeffSeq, g: CoeffSeq, tol: float = 1e-12) -> CoeffSeq:
    """Solve ``lambda * c = g`` by forward substitution.

    With m leading zeros in lambda,
    ``c_n = (g_{n+m} - sum_{k=1}^{n} lambda_{m+k} c_{n-k}) / lambda_m``
    for ``n = 0 .. len(g) - m - 1``.  Raises :class:`LeadingZeroMismatch`
    if one of ``g_0 .. g_{m-1}`` exceeds ``tol``.

    The recurrence amplifies rounding errors like the Taylor coefficients
    of ``1 / phi``; it is exact on the window only in exact arithmetic.  If
    the iterates overflow, the finite prefix is returned with a warning.
    """
    m = leading_zeros(lam, tol)
    gc = g.coeffs
    for i in range(min(m, gc.size)):
        if abs(gc[i]) > tol:
            raise LeadingZeroMismatch(i, complex(gc[i]))
    lead = lam.coeffs[m]
    if abs(lead) < ILL_CONDITIONED_LEAD:
        warnings.warn(f"leading generator coefficient {abs(lead):.2e} is tiny; "
                      "deconvolution is ill-conditioned", IllConditionedWarning, stacklevel=2)
    rest = lam.coeffs[m + 1:]
    W = gc.size - m
    if W <= 0:
        return CoeffSeq.poly([0.0])
    c = np.zeros(W, dtype=complex)
    for n in range(W):
        k = min(n, rest.size)
        acc = np.dot(rest[:k], c[n - 1::-1][:k]) if k else 0.0
        v = (gc[n + m] - acc) / lead
        if not (np.isfinite(v) and abs(v) < _OVERFLOW):
            warnings.warn(f"forward substitution overflowed at n={n}; returning prefix",
                          RuntimeWarning, stacklevel=2)
            W = n
            break
        c[n] = v
    return CoeffSeq(c[:max(W, 1)])


def pullback(lam: CoeffSeq, g: CoeffSeq) -> CoeffSeq:
    """Adjoint recovery ``c_n = sum_k conj(lambda_k) g_{n+k}``.

    For inner phi multiplication is an isometry, so its adjoint is a left
    inverse and ``lambda * pullback(g)`` is the orthogonal projection of g
    onto the subspace.  Returns entries ``n = 0 .. len(g) - m - 1``.
    """
    lc, gc = lam.coeffs, g.coeffs
    m = leading_zeros(lam)
    full = conv_arrays(gc, np.conj(lc[::-1]))
    c = full[lc.size - 1: lc.size - 1 + gc.size - m]
    return CoeffSeq(c if c.size else [0.0], finite=False)


@dataclass(frozen=True)
class MembershipReport:
    verdict: str
    preimage: CoeffSeq
    partial_norms: np.ndarray
    residual: float
    residual_bound: float | None
    growth_rate: float | None
    window: int
    tolerance: float
    evidence: tuple[str, ...] = ()
    diagnostics: dict | None = None

    def to_dict(self):
        return {
            "verdict": self.verdict,
            "residual": self.residual,
            "residual_bound": self.residual_bound,
            "growth_rate": self.growth_rate,
            "window": self.window,
            "tolerance": self.tolerance,
            "evidence": list(self.evidence),
            "preimage_norm_sq": float(self.partial_norms[-1]) if self.partial_norms.size else 0.0,
            "diagnostics": self.diagnostics or {},
        }


def growth_rate(c: np.ndarray) -> float | None:
    """``exp`` of the least-squares slope of ``log |c_n|`` over the last half."""
    W = c.size
    idx = np.arange(W // 2, W)
    mod = np.abs(c[idx])
    keep = mod > 0
    if keep.sum() < 2:
        return None
    slope = np.polyfit(idx[keep], np.log(mod[keep]), 1)[0]
    return float(math.exp(slope))


def _stable(partial: np.ndarray, tol: float) -> bool:
    total = partial[-1]
    if total == 0.0:
        return True
    ref = partial[(3 * partial.size) // 4]
    return (total - ref) / total <= tol


def membership_test(h: SubspaceHandle, g: CoeffSeq,
                    cfg: ToleranceConfig | None = None) -> MembershipReport:
    """Decide whether g lies in ``phi * l2``.

    Member: the adjoint reconstruction reproduces g to within tolerance and
    the pre-image partial norms have stabilised over the last quarter.
    NonMember: a leading-zero mismatch, a reconstruction residual above its
    certified floor, or geometric growth of the forward-substitution
    iterates beyond ``1 + growth_delta``.  Anything else is Inconclusive.
    A target shorter than ``cfg.window`` is zero-padded to it; for a
    certified tail the padding stands in for entries covered by the tail
    bound, which is taken from the unpadded target.
    """
    cfg = cfg or ToleranceConfig()
    lam = h.generator
    known = lam.tail_known and g.tail_known
    tol = cfg.tolerance_for(known)
    tg = g.tail_sq()
    gc = g.coeffs
    if gc.size < cfg.window:
        gc = np.concatenate([gc, np.zeros(cfg.window - gc.size, dtype=complex)])
        g = CoeffSeq(gc, decay=g.decay, finite=g.finite)
    W = len(g)
    m = h.leading_zeros

    mismatch = np.nonzero(np.abs(gc[:m]) > cfg.leading_zero_tol)[0]
    if mismatch.size:
        i = int(mismatch[0])
        empty = CoeffSeq.poly([0.0])
        return MembershipReport(NONMEMBER, empty, np.zeros(1), float(np.linalg.norm(gc[:m])),
                                0.0, None, W, tol, ("leading_zeros",),
                                {"index": i, "value": [gc[i].real, gc[i].imag]})

    c = pullback(lam, g)
    recon = conv_arrays(lam.coeffs, c.coeffs)
    # recon index n lines up with g index n (the m leading zeros live in lambda)
    overlap = np.zeros(W, dtype=complex)
    overlap[: min(W, recon.size)] = recon[:W]
    residual = float(np.linalg.norm(gc - overlap))

    t1 = lam.tail_l1()
    if t1 is None or tg is None:
        bound = None
    else:
        gn = float(np.linalg.norm(gc))
        bound = t1 * (1.0 + float(np.sum(np.abs(lam.coeffs)))) * gn + math.sqrt(tg)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        fwd = deconvolve(lam, g, cfg.leading_zero_tol)
    rate = growth_rate(fwd.coeffs)
    partial = np.cumsum(np.abs(c.coeffs) ** 2)
    diagnostics = {"forward_window": len(fwd), "leading_zeros": m,
                   "retry_window": 2 * W}

    evidence = []
    floor = residual > tol + bound if bound is not None else False
    grows = rate is not None and rate > 1.0 + cfg.growth_delta
    if residual <= tol and _stable(partial, tol):
        verdict = MEMBER
    elif floor or (grows and residual > tol):
        verdict = NONMEMBER
        if floor:
            evidence.append("residual_floor")
        if grows:
            evidence.append("growth")
    else:
        verdict = INCONCLUSIVE
    return MembershipReport(verdict, c, partial, residual, bound, rate, W, tol,
                            tuple(evidence), diagnostics)


def shift_invariance_probe(h: SubspaceHandle, trials: int = 16, seed: int = 0x5EED,
                           support: int = 64, cfg: ToleranceConfig | None = None) -> float:
    """For seeded random c, the shifted element must be a member with pre-image ``S c``.

    Returns the maximum of the reconstruction residuals and of the pre-image
    errors; raises AssertionError if a shifted element is not a member.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        n = int(rng.integers(1, support + 1))
        v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        c = CoeffSeq.poly(v / np.linalg.norm(v))
        g = shift(generate_element(h, c), 1)
        rep = membership_test(h, g, cfg)
        if rep.verdict != MEMBER:
            raise AssertionError(f"shifted element not recognised as member: {rep.to_dict()}")
        sc = shift(c, 1).coeffs
        err = float(np.max(np.abs(rep.preimage.coeffs[: sc.size] - sc)))
        worst = max(worst, rep.residual, err)
    return worst
