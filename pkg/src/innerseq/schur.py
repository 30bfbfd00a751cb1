"""Coefficient-level inner-ness checks with certified truncation bounds.

For a coefficient sequence lambda of phi, inner-ness is equivalent to

* ``||phi f||_2 = ||f||_2`` for all f in H^2,
* ``sum_n |sum_{j<=n} a_j lambda_{n-j}|^2 = sum_n |a_n|^2`` for every
  finite tuple ``(a_0, ..., a_N)``, i.e. the Gram matrix of the shifted
  copies of lambda is the identity.

Finitely many floating-point evaluations can refute these identities but not
prove them, so :func:`classify` is one-sided: a refutation carries a concrete
witness whose residual exceeds its certified tail bound plus tolerance.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .config import ToleranceConfig
from .oracle import sup_norm_estimate
from .seq import CoeffSeq, conv_arrays, l2_norm_sq, lag_product, lag_radius

REFUTED = "refuted"
CONSISTENT = "consistent"


@dataclass(frozen=True)
class NormOneResult:
    partial: float
    tail: float | None
    residual: float
    tolerance: float
    passed: bool

    def to_dict(self):
        return {"partial": self.partial, "tail": self.tail, "residual": self.residual,
                "tolerance": self.tolerance, "passed": self.passed}


@dataclass(frozen=True)
class IsometryResidual:
    """``||lambda * f||^2`` against ``||f||^2`` for one test sequence f.

    ``lhs`` is computed from the stored entries; ``tail_bound`` bounds
    ``|true lhs - lhs|`` (plus the unknown part of ``||f||^2``) and is None
    when a tail is unknown.  ``lhs_lower`` is a certified lower bound on the
    true lhs that holds regardless of tails.
    """

    lhs: float
    lhs_lower: float
    tail_bound: float | None
    rhs: float
    residual: float

    def refutes(self, tol: float) -> bool:
        if self.tail_bound is not None:
            return self.residual > self.tail_bound + tol
        return self.lhs_lower > self.rhs + tol

    def to_dict(self):
        return {"lhs": self.lhs, "lhs_lower": self.lhs_lower, "tail_bound": self.tail_bound,
                "rhs": self.rhs, "residual": self.residual}


@dataclass(frozen=True)
class GramResult:
    matrix: np.ndarray
    radius: np.ndarray | None  # per entry, None when the tail is unknown

    @property
    def defect_matrix(self) -> np.ndarray:
        return np.abs(self.matrix - np.eye(self.matrix.shape[0]))

    @property
    def defect(self) -> float:
        return float(self.defect_matrix.max())

    def witness(self, tol: float) -> dict | None:
        """First entry (row-major) whose deviation from the identity is certified."""
        dev = self.defect_matrix
        n = dev.shape[0]
        for j in range(n):
            for k in range(j, n):
                if self.radius is not None:
                    hit = dev[j, k] > self.radius[j, k] + tol
                else:
                    # only the diagonal is a monotone partial sum
                    hit = j == k and self.matrix[j, j].real > 1.0 + tol
                if hit:
                    g = self.matrix[j, k]
                    return {"test": "gram", "j": j, "k": k, "N": k, "value": [g.real, g.imag],
                            "deviation": float(dev[j, k]),
                            "radius": None if self.radius is None else float(self.radius[j, k])}
        return None


@dataclass(frozen=True)
class CriterionReport:
    verdict: str
    resolution: int
    tolerance: float
    tail_known: bool
    norm_one: NormOneResult
    gram_defect: float
    gram_N: int
    sup_norm: float
    sup_norm_tail: float | None
    witness: dict | None
    probes: list[dict] = field(default_factory=list)
    config: ToleranceConfig | None = None

    @property
    def refuted(self) -> bool:
        return self.verdict == REFUTED

    def to_dict(self):
        d = {
            "verdict": self.verdict,
            "resolution": self.resolution,
            "tolerance": self.tolerance,
            "tail_known": self.tail_known,
            "norm_one": self.norm_one.to_dict(),
            "gram_defect": self.gram_defect,
            "gram_N": self.gram_N,
            "sup_norm": {"estimate": self.sup_norm, "l1_tail": self.sup_norm_tail},
            "witness": self.witness,
            "probes": self.probes,
        }
        if self.config is not None:
            d["config"] = self.config.to_dict()
        return d


def norm_one_check(lam: CoeffSeq, tol: ToleranceConfig | float | None = None) -> NormOneResult:
    """``||phi||_2 = 1``: the tuple ``(0, ..., 0, 1)`` in the finite identity.

    Fails definitively when the partial sum already exceeds ``1 + tol`` or,
    with a known tail, when even ``partial + tail`` stays below ``1 - tol``.
    """
    ns = l2_norm_sq(lam)
    if tol is None or isinstance(tol, ToleranceConfig):
        tol = (tol or ToleranceConfig()).tolerance_for(lam.tail_known)
    failed = ns.partial > 1.0 + tol or (ns.tail is not None and ns.partial + ns.tail < 1.0 - tol)
    return NormOneResult(ns.partial, ns.tail, abs(ns.partial - 1.0), tol, not failed)


def condition_c_residual(lam: CoeffSeq, f: CoeffSeq) -> IsometryResidual:
    """Residual of ``||phi f||^2 = ||f||^2`` for one test sequence f.

    With ``lam = lam_t + tau`` and ``f = f_t + sigma`` (stored part plus
    omitted tail), ``||x * y||_2 <= ||x||_1 ||y||_2`` bounds the effect of
    the tails on ``||phi f||`` by
    ``e = ||f_t||_1 ||tau||_2 + ||lam_t||_1 ||sigma||_2 + ||tau||_1 ||sigma||_2``.
    """
    lt, ft = lam.coeffs, f.coeffs
    prod = conv_arrays(lt, ft)
    lhs = float(np.vdot(prod, prod).real)
    # entries n <= min order depend only on stored coefficients
    k = min(lam.order, f.order) + 1
    lhs_lower = float(np.vdot(prod[:k], prod[:k]).real)
    f_norm = l2_norm_sq(f)
    rhs = f_norm.partial
    t_lam, t_f = lam.tail_sq(), f.tail_sq()
    if t_lam is None or t_f is None:
        bound = None
    else:
        e = (np.sum(np.abs(ft)) * math.sqrt(t_lam) + np.sum(np.abs(lt)) * math.sqrt(t_f)
             + lam.tail_l1() * math.sqrt(t_f))
        ell = math.sqrt(lhs)
        bound = float((ell + e) ** 2 - ell ** 2 + t_f)
    return IsometryResidual(lhs, lhs_lower, bound, rhs, abs(lhs - rhs))


def condition_d_residual(lam: CoeffSeq, tup) -> IsometryResidual:
    """Finite identity for the tuple ``(a_0, ..., a_N)``.

    The left side ``sum_{n<=N} |sum_{j<=n} a_j lambda_{n-j}|^2 +
    sum_{n>N} |sum_{j<=N} a_j lambda_{n-j}|^2`` equals ``||a * lambda||^2``.
    """
    a = np.asarray(tup, dtype=complex).ravel()
    if a.size == 0:
        raise ValueError("tuple must be non-empty")
    return condition_c_residual(lam, CoeffSeq.poly(a))


def gram_matrix(lam: CoeffSeq, N: int) -> GramResult:
    """``G_jk = r(k - j)`` for ``0 <= j, k <= N`` with ``r(-m) = conj(r(m))``."""
    if N < 0:
        raise ValueError("N must be >= 0")
    c = lam.coeffs
    r = np.array([lag_product(c, m) for m in range(N + 1)])
    rad = None if not lam.tail_known else np.array([lag_radius(lam, m) for m in range(N + 1)])
    idx = np.arange(N + 1)
    lag = idx[None, :] - idx[:, None]
    G = np.where(lag >= 0, r[np.abs(lag)], np.conj(r[np.abs(lag)]))
    R = None if rad is None else rad[np.abs(lag)]
    return GramResult(G, R)


def gram_defect(lam: CoeffSeq, N: int) -> float:
    """``max_{j,k<=N} |G_jk - delta_jk|`` from the stored coefficients."""
    return gram_matrix(lam, N).defect


def probe_tuples(trials: int, n_max: int, seed: int) -> list[np.ndarray]:
    """delta_0 followed by seeded complex-Gaussian unit tuples of length <= n_max + 1."""
    rng = np.random.default_rng(seed)
    out = [np.array([1.0 + 0j])]
    for _ in range(trials - 1):
        n = int(rng.integers(1, n_max + 2))
        a = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        out.append(a / np.linalg.norm(a))
    return out


@dataclass(frozen=True)
class ProbeResult:
    max_residual: float
    sup_norm: float
    sup_norm_tail: float | None
    residuals: list[IsometryResidual]
    tuples: list[np.ndarray]


def isometry_probe(lam: CoeffSeq, trials: int = 16, seed: int = 0x5EED, n_max: int = 16,
                   K: int = 8192) -> ProbeResult:
    """Check ``||phi f|| = ||f||`` on seeded random polynomials f.

    Also returns the grid maximum of ``|phi|`` on the circle, which must be
    at most 1 (up to the l1 tail) for ``1 = ||phi||_2 <= ||phi||_inf <= 1``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    tuples = probe_tuples(trials, n_max, seed)
    res = [condition_d_residual(lam, a) for a in tuples]
    sup, sup_tail = sup_norm_estimate(lam, K)
    return ProbeResult(max(r.residual for r in res), sup, sup_tail, res, tuples)


def classify(lam: CoeffSeq, cfg: ToleranceConfig | None = None) -> CriterionReport:
    """One-sided verdict: refuted with a witness, or consistent at resolution M.

    Runs the norm-one check, the Gram test at ``cfg.n_max``, the sup-norm
    bound and the isometry probes, in that order; the first certified
    violation becomes the witness.
    """
    cfg = cfg or ToleranceConfig()
    known = lam.tail_known
    tol = cfg.tolerance_for(known)
    norm = norm_one_check(lam, tol)
    gram = gram_matrix(lam, cfg.n_max)
    probe = isometry_probe(lam, cfg.probe_trials, cfg.seed, cfg.n_max, cfg.oracle_K)

    witness = None
    if not norm.passed:
        witness = {"test": "norm_one", "N": 0, "tuple": [[1.0, 0.0]],
                   "partial": norm.partial, "tail": norm.tail, "residual": norm.residual}
    if witness is None:
        witness = gram.witness(tol)
    if witness is None and probe.sup_norm_tail is not None:
        if probe.sup_norm > 1.0 + probe.sup_norm_tail + tol:
            witness = {"test": "sup_norm", "estimate": probe.sup_norm,
                       "l1_tail": probe.sup_norm_tail}
    probes = []
    for i, (a, r) in enumerate(zip(probe.tuples, probe.residuals)):
        hit = r.refutes(tol)
        probes.append({"index": i, "N": a.size - 1, "residual": r.residual,
                       "tail_bound": r.tail_bound, "refutes": hit})
        if hit and witness is None:
            witness = {"test": "probe", "index": i, "N": a.size - 1,
                       "tuple": [[v.real, v.imag] for v in a], **r.to_dict()}
    verdict = REFUTED if witness is not None else CONSISTENT
    return CriterionReport(verdict, lam.order, tol, known, norm, gram.defect, cfg.n_max,
                           probe.sup_norm, probe.sup_norm_tail, witness, probes, cfg)
