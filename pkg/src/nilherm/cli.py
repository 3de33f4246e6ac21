"""``nilherm`` command line.

Exit status: 0 on success, 1 when a check or verification fails, 2 on usage
or parse errors.
"""

from __future__ import annotations

import csv
import io
import json
import sys

import click

from .catalog import display_name
from .complex_structures import (ComplexStructure, InvariantError, classify_algebra_from_coeffs,
                                 classify_J, read_two_step)
from .forms import StructuralError, format_word, jacobi_failures
from .hermitian import (HermitianMetric, HermitianMetric4, connection_for, is_balanced, is_kahler,
                        is_parallel, is_skt, solve_lck)
from .lie import DomainError, JacobiError, LieAlgebra, classify_by_fingerprint, fingerprint
from .parsing import ParseError, emit_scalar, parse_equations, parse_metric_fields, parse_salamon
from .region import GridAxis, scan_region
from .scalar import DEFAULT_EPS

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Ctx:
    def __init__(self, fmt: str, eps: float, exact: bool):
        self.fmt = fmt
        self.eps = eps
        self.exact = exact


def _read(text: str) -> str:
    if text == "-":
        return sys.stdin.read()
    if text.startswith("@"):
        with open(text[1:], encoding="utf-8") as fh:
            return fh.read()
    return text


def _emit(ctx: _Ctx, payload: dict) -> None:
    if ctx.fmt == "json":
        click.echo(json.dumps(payload, indent=2, default=str))
        return
    flat = _flatten(payload)
    if ctx.fmt == "csv":
        buf = io.StringIO(newline="")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["key", "value"])
        writer.writerows(flat)
        click.echo(buf.getvalue(), nl=False)
    else:
        for k, v in flat:
            click.echo(f"{k}: {v}")


def _flatten(payload, prefix: str = "") -> list[tuple[str, str]]:
    out = []
    items = payload.items() if isinstance(payload, dict) else enumerate(payload)
    for k, v in items:
        key = f"{prefix}.{k}" if prefix else str(k)
        if isinstance(v, (dict, list)) and v:
            out.extend(_flatten(v, key))
        else:
            out.append((key, json.dumps(v) if not isinstance(v, str) else v))
    return out


def _fail_parse(err: Exception) -> None:
    click.echo(f"error: {err}", err=True)
    sys.exit(EXIT_USAGE)


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option("--format", "fmt", type=click.Choice(["json", "csv", "text"]), default="json",
              show_default=True)
@click.option("--eps", type=float, default=DEFAULT_EPS, show_default=True,
              help="Tolerance attached to decimal inputs.")
@click.option("--exact", is_flag=True, help="Read decimal literals as exact rationals.")
@click.pass_context
def main(ctx: click.Context, fmt: str, eps: float, exact: bool) -> None:
    """Hermitian structures on six-dimensional nilpotent Lie algebras."""
    ctx.obj = _Ctx(fmt, eps, exact)


@main.command("check-jacobi")
@click.argument("structure")
@click.pass_obj
def check_jacobi(ctx: _Ctx, structure: str) -> None:
    """Jacobi identity for a Salamon tuple, or for complex equations ``dw1 = ...``."""
    text = _read(structure)
    try:
        if text.lstrip().startswith("("):
            d = parse_salamon(text)
            LieAlgebra(len(d), d)
            failures: list[int] = []
        else:
            failures = jacobi_failures(parse_equations(text, exact=ctx.exact, eps=ctx.eps))
    except JacobiError as err:
        failures = [err.index]
    except (ParseError, StructuralError, ValueError) as err:
        _fail_parse(err)
    _emit(ctx, {"jacobi": not failures, "failures": failures})
    sys.exit(EXIT_FAIL if failures else EXIT_OK)


@main.command("classify-algebra")
@click.argument("salamon")
@click.pass_obj
def classify_algebra(ctx: _Ctx, salamon: str) -> None:
    """Catalog tag of a six-dimensional nilpotent algebra in Salamon shorthand."""
    try:
        d = parse_salamon(_read(salamon))
        g = LieAlgebra(len(d), d)
    except JacobiError as err:
        _emit(ctx, {"algebra": None, "error": str(err)})
        sys.exit(EXIT_FAIL)
    except (ParseError, ValueError) as err:
        _fail_parse(err)
    try:
        cls = classify_by_fingerprint(g)
    except DomainError as err:
        _emit(ctx, {"algebra": None, "error": str(err)})
        sys.exit(EXIT_FAIL)
    fp = fingerprint(g)
    _emit(ctx, {
        "algebra": display_name(cls.tag) if cls.unique else None,
        "candidates": sorted(display_name(t) for t in cls.candidates),
        "fingerprint": {"step": fp.step, "descending": list(fp.descending),
                        "center_dim": fp.center_dim, "b1": fp.b1, "b2": fp.b2,
                        "alpha": fp.alpha, "alpha_exact": fp.alpha_exact,
                        "divisor_dim": fp.divisor_dim},
    })


def _structure(ctx: _Ctx, text: str) -> ComplexStructure:
    try:
        eqs = parse_equations(_read(text), exact=ctx.exact, eps=ctx.eps)
        J = ComplexStructure(eqs)
        J.algebra
    except (ParseError, StructuralError, JacobiError, ValueError) as err:
        _fail_parse(err)
    return J


@main.command("classify-complex")
@click.argument("equations")
@click.pass_obj
def classify_complex(ctx: _Ctx, equations: str) -> None:
    """Type, underlying algebra and flags of a complex structure ``dw1 = ...; dw2 = ...``."""
    J = _structure(ctx, equations)
    try:
        jc = classify_J(J)
    except ValueError as err:
        _emit(ctx, {"type": None, "error": str(err)})
        sys.exit(EXIT_FAIL)
    two = read_two_step(J)
    if two is not None:
        coeffs = {"rho": two.rho, "B": emit_scalar(two.B), "D": emit_scalar(two.D)}
        cls = classify_algebra_from_coeffs(two)
    else:
        coeffs = {f"dw{j}": {format_word(w, J.n): emit_scalar(c) for w, c in sorted(m.terms.items())}
                  for j, m in enumerate(J.eqs.mu, 1)}
        try:
            cls = classify_by_fingerprint(J.algebra)
        except DomainError as err:
            _emit(ctx, {"type": jc.kind, "coeffs": coeffs, "algebra": None, "error": str(err)})
            sys.exit(EXIT_FAIL)
    _emit(ctx, {
        "type": jc.kind,
        "coeffs": coeffs,
        "algebra": display_name(cls.tag) if cls.unique else sorted(map(display_name, cls.candidates)),
        "abelian": jc.abelian,
        "parallelizable": jc.parallelizable,
    })


@main.command("hermitian-check")
@click.argument("equations")
@click.argument("metric")
@click.pass_obj
def hermitian_check(ctx: _Ctx, equations: str, metric: str) -> None:
    """Kahler / SKT / balanced / LCK report for a structure and a metric ``r=.., s=.., ...``."""
    J = _structure(ctx, equations)
    keys = ("r", "s", "u") if J.n == 2 else ("r", "s", "t", "u", "v", "z")
    if J.n not in (2, 3):
        _fail_parse(ValueError("metrics are supported in complex dimension 2 and 3"))
    try:
        fields = parse_metric_fields(_read(metric), exact=ctx.exact, eps=ctx.eps, keys=keys)
        g = HermitianMetric4(**fields) if J.n == 2 else HermitianMetric(**fields)
    except (ParseError, ValueError) as err:
        _fail_parse(err)
    if not g.is_positive():
        _emit(ctx, {"positive": False, "kahler": None, "skt": None, "balanced": None, "lck": None,
                    "violations": g.positivity_violations()})
        sys.exit(EXIT_FAIL)
    lck = solve_lck(J, g)
    lck_out = None
    if lck is not None:
        lck_out = {"theta": [emit_scalar(c) for c in lck.lee.real_coefficients()],
                   "parallel": is_parallel(connection_for(J, g), lck.lee)}
    _emit(ctx, {"positive": True, "kahler": is_kahler(J, g), "skt": is_skt(J, g),
                "balanced": is_balanced(J, g), "lck": lck_out})


@main.command("scan-region")
@click.option("--rho", type=click.IntRange(0, 1), required=True)
@click.option("--p", "p_axis", nargs=3, type=str, default=("-2", "2", "41"), show_default=True,
              metavar="MIN MAX STEPS")
@click.option("--q", "q_axis", nargs=3, type=str, default=("0", "0", "1"), show_default=True,
              metavar="MIN MAX STEPS")
@click.option("--y", "y_axis", nargs=3, type=str, default=("-2", "2", "41"), show_default=True,
              metavar="MIN MAX STEPS")
@click.option("--out", type=click.Path(dir_okay=False, writable=True), default=None)
@click.option("--jobs", type=click.IntRange(1), default=1, show_default=True)
@click.pass_obj
def scan_region_cmd(ctx: _Ctx, rho: int, p_axis, q_axis, y_axis, out, jobs: int) -> None:
    """CSV ``p,q,y,class`` of the SKT region classes over a grid."""
    try:
        axes = [GridAxis(_rational(a[0]), _rational(a[1]), int(a[2])) for a in (p_axis, q_axis, y_axis)]
    except (ValueError, ParseError) as err:
        _fail_parse(err)
    try:
        text = scan_region(rho, *axes, out=out, exact=ctx.exact, jobs=jobs)
    except OSError as err:
        click.echo(f"error: {err}", err=True)
        sys.exit(EXIT_FAIL)
    if out is None:
        click.echo(text, nl=False)


def _rational(text: str):
    from .parsing import parse_scalar

    v = parse_scalar(text, exact=True)
    if not v.is_real():
        raise ValueError(f"grid bound {text!r} must be real")
    return v.re


@main.command("verify-paper")
@click.argument("claims", nargs=-1)
@click.pass_obj
def verify_paper_cmd(ctx: _Ctx, claims: tuple[str, ...]) -> None:
    """Run the cross-check corpus for the given claim ids (all when none given)."""
    from .claims import UnknownClaimError, verify_paper

    try:
        report = verify_paper(list(claims) or None)
    except UnknownClaimError as err:
        _fail_parse(err)
    if ctx.fmt == "json":
        click.echo(report.to_json())
    else:
        for r in report.results:
            status = "PASS" if r.passed else "FAIL"
            if ctx.fmt == "csv":
                click.echo(f"{r.claim},{status}")
            else:
                click.echo(f"{status} {r.claim}: {r.detail}")
    sys.exit(EXIT_OK if report.passed else EXIT_FAIL)


if __name__ == "__main__":  # pragma: no cover
    main()
