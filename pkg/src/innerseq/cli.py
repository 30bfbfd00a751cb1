"""Command-line interface.

    innerseq make-inner spec.json --order 40 --out coeffs.csv
    innerseq check-inner --spec spec.json --json
    innerseq check-inner --coeffs coeffs.csv --tol 1e-10 --max-N 16
    innerseq gen-element --inner coeffs.csv --c c.csv --out g.csv
    innerseq check-member --inner coeffs.csv --target g.csv

Exit codes: 0 consistent / member, 3 refuted / nonmember, 4 inconclusive,
2 input error.
"""
from __future__ import annotations

import json
import math
import sys

import click

from . import oracle
from .beurling import INCONCLUSIVE, MEMBER, RefutedGenerator, SubspaceHandle, membership_test
from .coeffio import CoeffFormatError, read_coeffs, write_coeffs
from .config import DEFAULT_SEED, ToleranceConfig
from .inner import InnerSpec, SpecError, spec_coeffs
from .report import dumps
from .schur import classify
from .seq import convolve

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_REFUTED = 3
EXIT_INCONCLUSIVE = 4

#: automatic order targets a certified tail this far below the tolerance
_TAIL_MARGIN = 1e-3
_MAX_AUTO_ORDER = 1 << 16


class InputError(click.ClickException):
    exit_code = EXIT_INPUT


def _load_spec(path: str) -> InnerSpec:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read spec {path}: {exc.strerror}")
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})")
    try:
        return InnerSpec.from_dict(data)
    except SpecError as exc:
        raise InputError(f"{path}: field {exc}")


def _load_coeffs(path: str, truncated: bool = False):
    try:
        return read_coeffs(path, finite=not truncated)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}")
    except CoeffFormatError as exc:
        raise InputError(f"{path}: {exc}")


def auto_order(spec: InnerSpec, tol: float, sample_K: int = 4096) -> int:
    """Smallest order (on a geometric ladder) whose certified tail is <= 1e-3 tol."""
    if spec.atoms:
        return sample_K // 4
    if not spec.zeros:
        return spec.monomial_order
    target = _TAIL_MARGIN * tol
    rmax = max(abs(z.value) for z in spec.zeros)
    M = max(spec.degree, int(math.ceil(math.log(target) / math.log(rmax))))
    while M <= _MAX_AUTO_ORDER:
        lam = spec_coeffs(spec, M)
        if lam.tail_sq() <= target:
            return M
        M = int(M * 1.25) + 1
    raise InputError("zeros too close to the circle: no admissible truncation order")


def _emit(payload: dict, fmt: str, out: str | None, human: str) -> None:
    text = dumps(payload) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    if fmt == "json":
        click.echo(text, nl=False)
    elif fmt == "csv":
        for key, value in _flatten(payload):
            click.echo(f"{key},{value}")
    else:
        click.echo(human)


def _flatten(d, prefix=""):
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            yield from _flatten(v, key + ".")
        elif isinstance(v, (list, tuple)):
            yield key, dumps(v, indent=0).replace(",", ";")
        else:
            yield key, dumps(v, indent=0)


format_option = click.option("--format", "fmt", type=click.Choice(["human", "json", "csv"]),
                             default="human", show_default=True)


@click.group()
def main():
    """Inner functions, inner-ness checks and shift-invariant subspaces."""


@main.command("make-inner")
@click.argument("spec_path", metavar="SPEC.json")
@click.option("--order", "-M", type=click.IntRange(min=0), required=True)
@click.option("--out", "out", type=click.Path(dir_okay=False), required=True)
def make_inner(spec_path, order, out):
    """Write Taylor coefficients of the inner function in SPEC.json."""
    spec = _load_spec(spec_path)
    lam = spec_coeffs(spec, order)
    write_coeffs(out, lam)
    if lam.finite:
        click.echo("tail exact: 0")
    elif lam.decay is not None:
        click.echo(f"decay C={lam.decay.C:.17g} rho={lam.decay.rho:.17g} "
                   f"tail_sq<={lam.tail_sq():.3e}")
    else:
        click.echo("tail unknown")
    for z in spec.ill_conditioned_zeros():
        click.echo(f"warning: zero {z.value} is ill-conditioned (|a| > 0.95)", err=True)


@main.command("check-inner")
@click.option("--coeffs", "coeffs_path", type=str, default=None)
@click.option("--spec", "spec_path", type=str, default=None)
@click.option("--order", "-M", type=click.IntRange(min=0), default=None,
              help="truncation order for --spec (default: from the decay certificate)")
@click.option("--tol", type=click.FloatRange(min=0, min_open=True), default=1e-10, show_default=True)
@click.option("--max-N", "max_n", type=click.IntRange(min=0), default=16, show_default=True)
@click.option("--trials", type=click.IntRange(min=1), default=16, show_default=True)
@click.option("--seed", type=int, default=DEFAULT_SEED, show_default=True)
@click.option("--K", "grid_k", type=click.IntRange(min=16), default=8192, show_default=True)
@click.option("--truncated", is_flag=True, help="coefficient file is a truncation with unknown tail")
@click.option("--json", "as_json", is_flag=True, help="same as --format json")
@format_option
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def check_inner(coeffs_path, spec_path, order, tol, max_n, trials, seed, grid_k, truncated,
                as_json, fmt, out):
    """Classify a coefficient sequence (or a spec) as refuted or consistent-inner."""
    if (coeffs_path is None) == (spec_path is None):
        raise InputError("give exactly one of --coeffs or --spec")
    cfg = ToleranceConfig(abs_tol=tol, n_max=max_n, order=order, probe_trials=trials,
                          seed=seed, oracle_K=grid_k)
    spec = None
    if spec_path is not None:
        spec = _load_spec(spec_path)
        M = order if order is not None else auto_order(spec, tol, cfg.sample_K)
        lam = spec_coeffs(spec, M, sample_K=cfg.sample_K)
    else:
        lam = _load_coeffs(coeffs_path, truncated)
    report = classify(lam, cfg)
    payload = report.to_dict()
    if spec is not None:
        payload["oracle"] = _oracle_block(spec, lam, cfg)
        payload["ill_conditioned_zeros"] = [[z.value.real, z.value.imag]
                                            for z in spec.ill_conditioned_zeros()]
    human = (f"verdict: {report.verdict} (resolution M={report.resolution}, "
             f"tolerance {report.tolerance:.1e})\n"
             f"norm partial: {report.norm_one.partial:.17g}\n"
             f"gram defect (N={report.gram_N}): {report.gram_defect:.3e}")
    if report.witness is not None:
        human += f"\nwitness: {report.witness['test']}"
    _emit(payload, "json" if as_json else fmt, out, human)
    sys.exit(EXIT_REFUTED if report.refuted else EXIT_OK)


def _oracle_block(spec: InnerSpec, lam, cfg: ToleranceConfig) -> dict:
    if spec.atoms:
        lad = oracle.radial_ladder(spec, K=cfg.oracle_K)
        r = lad.radii[0]
        cc = oracle.parseval_crosscheck(lam, spec, cfg.oracle_K, r)
        return {"K": cfg.oracle_K, "parseval": {"r": r, "coeff_side": cc.coeff_side,
                                                "boundary_side": cc.boundary_side,
                                                "discrepancy": cc.discrepancy},
                "radial_ladder": {"radii": list(lad.radii), "fractions": list(lad.fractions),
                                  "threshold": lad.threshold, "passed": lad.passed}}
    cc = oracle.parseval_crosscheck(lam, spec, cfg.oracle_K)
    return {"K": cfg.oracle_K,
            "parseval": {"r": 1.0, "coeff_side": cc.coeff_side, "boundary_side": cc.boundary_side,
                         "discrepancy": cc.discrepancy, "tail": cc.tail, "passed": cc.passed},
            "modulus_defect": oracle.modulus_defect(spec, cfg.oracle_K)}


@main.command("gen-element")
@click.option("--inner", "inner_path", required=True)
@click.option("--c", "c_path", required=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
def gen_element(inner_path, c_path, out):
    """Write the subspace element lambda * c."""
    lam = _load_coeffs(inner_path)
    c = _load_coeffs(c_path)
    write_coeffs(out, convolve(lam, c))


@main.command("check-member")
@click.option("--inner", "inner_path", required=True)
@click.option("--target", "target_path", required=True)
@click.option("--tol", type=click.FloatRange(min=0, min_open=True), default=1e-10, show_default=True)
@click.option("--window", type=click.IntRange(min=2), default=128, show_default=True)
@click.option("--delta", type=click.FloatRange(min=0, min_open=True), default=0.05, show_default=True)
@click.option("--truncated", is_flag=True, help="target file is a truncation with unknown tail")
@click.option("--json", "as_json", is_flag=True)
@format_option
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def check_member(inner_path, target_path, tol, window, delta, truncated, as_json, fmt, out):
    """Test whether TARGET lies in the shift-invariant subspace generated by INNER."""
    lam = _load_coeffs(inner_path)
    g = _load_coeffs(target_path, truncated)
    cfg = ToleranceConfig(abs_tol=tol, window=window, growth_delta=delta)
    try:
        h = SubspaceHandle.from_generator(lam, cfg)
    except RefutedGenerator as exc:
        payload = {"error": "generator refuted", "criterion": exc.report.to_dict()}
        _emit(payload, "json" if as_json else fmt, out,
              f"error: generator is not inner (witness: {exc.report.witness['test']})")
        sys.exit(EXIT_INPUT)
    rep = membership_test(h, g, cfg)
    payload = rep.to_dict()
    payload["config"] = cfg.to_dict()
    rate = "n/a" if rep.growth_rate is None else f"{rep.growth_rate:.6g}"
    human = (f"verdict: {rep.verdict} (window {rep.window})\n"
             f"residual: {rep.residual:.3e}\ngrowth rate: {rate}")
    _emit(payload, "json" if as_json else fmt, out, human)
    if rep.verdict == MEMBER:
        sys.exit(EXIT_OK)
    sys.exit(EXIT_INCONCLUSIVE if rep.verdict == INCONCLUSIVE else EXIT_REFUTED)


if __name__ == "__main__":  # pragma: no cover
    main()
