from __future__ import annotations

from dataclasses import asdict, dataclass

DEFAULT_SEED = 0x5EED


@dataclass(frozen=True)
class ToleranceConfig:
    """Tolerances and resolution parameters shared by the checks.

    ``abs_tol`` applies to residuals whose tails are certified (finite
    sequences or sequences with a decay certificate); ``unknown_tail_tol``
    to residuals of sequences whose tail is unknown.
    """

    abs_tol: float = 1e-10
    unknown_tail_tol: float = 1e-6
    n_max: int = 16
    order: int | None = None
    probe_trials: int = 16
    seed: int = DEFAULT_SEED
    oracle_K: int = 8192
    sample_K: int = 4096
    window: int = 128
    growth_delta: float = 0.05
    leading_zero_tol: float = 1e-12

    def __post_init__(self):
        if not self.abs_tol > 0 or not self.unknown_tail_tol > 0:
            raise ValueError("tolerances must be positive")
        if self.n_max < 0:
            raise ValueError("n_max must be >= 0")
        if self.order is not None and self.order < 0:
            raise ValueError("order must be >= 0")
        if self.probe_trials < 1:
            raise ValueError("probe_trials must be >= 1")
        if self.oracle_K < 16:
            raise ValueError("oracle grid needs at least 16 points")
        if self.window < 2:
            raise ValueError("window must be >= 2")

    def tolerance_for(self, tail_known: bool) -> float:
        return self.abs_tol if tail_known else self.unknown_tail_tol

    def to_dict(self) -> dict:
        return asdict(self)
