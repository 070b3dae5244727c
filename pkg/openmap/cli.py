"""Command-line front end: ``openmap <subcommand> [flags]``.

A job is the validated union of an optional JSON job file (``--job``) and the command-line flags,
flags taking precedence. Results are written as canonical JSON, or as CSV plot rows for planar
ball lists. Exit status: 0 done, 2 invalid input, 3 refused (limits exceeded or not certified),
4 not yet concluded within the budget.
"""

from __future__ import annotations

import argparse
import io
import json
import logging
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import TYPE_CHECKING, Any

import voluptuous as vol

from openmap.const import (
    COMMANDS,
    CONF_BALL,
    CONF_BOUND,
    CONF_COMMAND,
    CONF_DOMAIN,
    CONF_FORMAT,
    CONF_FORMULA,
    CONF_FUNCTION,
    CONF_K,
    CONF_MAX_DEPTH,
    CONF_MAX_PRECISION,
    CONF_MAX_PREFIX,
    CONF_METHOD,
    CONF_OUTPUT,
    CONF_POINT,
    CONF_SET,
    CONF_TARGET,
    DEFAULT_DOMAIN_RADIUS,
    EXIT_NOT_YET,
    EXIT_OK,
    EXIT_PARSE_ERROR,
    EXIT_REFUSED,
    FORMAT_CSV,
    FORMAT_JSON,
    JOB_SCHEMA,
)
from openmap.continuity import dyadic_dense, moc, preimage
from openmap.errors import OpenMapError
from openmap.exact.geometry import ClosedBall, OpenBall
from openmap.exact.interval import Interval, IntervalBox
from openmap.exact.parser import parse_function_system
from openmap.exact.rational import format_rat, parse_qvec, parse_rat
from openmap.helpers import pow2
from openmap.names.budget import Budget, NotYet
from openmap.names.coverage import covers_closed_ball
from openmap.names.enumeration import OpenSetEnum
from openmap.names.stream import RealStream
from openmap.openness.const import METHOD_CONVEX, METHOD_INVERSE
from openmap.openness.image import evaluate_from_image, image_convex, image_from_moo, image_inverse
from openmap.openness.inverse import InverseCertificate, inverse_radius, local_inverse, unique_zero
from openmap.openness.moduli import moo, moo_lower, moo_oracle
from openmap.regular import regular_image
from openmap.semialgebraic.cad import qe_eliminate
from openmap.semialgebraic.formula import SASet, format_formula, parse_formula
from openmap.semialgebraic.openset import sa_moo_lower, sa_open_enum
from openmap.serialization import (
    balls_to_json,
    certificate_to_json,
    dumps,
    enum_from_json,
    point_to_json,
    regular_from_json,
    regular_to_json,
    verdict_to_json,
    write_csv,
)

if TYPE_CHECKING:
    from collections.abc import Callable, Sequence

    from openmap.exact.expr import FuncSystem
    from openmap.exact.rational import QVec

_LOGGER = logging.getLogger(__name__)

_INTERVAL = re.compile(r"\[([^\[\]]*)\]")


@dataclass(frozen=True)
class JobSpec:
    command: str
    budget: Budget
    function: str | None = None
    formula: str | None = None
    open_set: str | dict[str, Any] | None = None
    domain: str | dict[str, Any] | None = None
    x: str | None = None
    y: str | None = None
    ball: str | None = None
    bound: str | None = None
    k: int = 0
    method: str = ""
    output: str | None = None
    output_format: str = FORMAT_JSON

    @classmethod
    def from_config(cls, config: dict[str, Any]) -> JobSpec:
        data = JOB_SCHEMA(config)
        budget = Budget.from_config({key: data[key] for key in (CONF_MAX_PREFIX, CONF_MAX_DEPTH, CONF_MAX_PRECISION)})
        return cls(
            command=data[CONF_COMMAND],
            budget=budget,
            function=data.get(CONF_FUNCTION),
            formula=data.get(CONF_FORMULA),
            open_set=data.get(CONF_SET),
            domain=data.get(CONF_DOMAIN),
            x=data.get(CONF_POINT),
            y=data.get(CONF_TARGET),
            ball=data.get(CONF_BALL),
            bound=data.get(CONF_BOUND),
            k=data[CONF_K],
            method=data[CONF_METHOD],
            output=data[CONF_OUTPUT],
            output_format=data[CONF_FORMAT],
        )


@dataclass
class Outcome:
    """Result document of a job; ``balls`` is set when the result is a ball list (CSV-capable)."""

    payload: dict[str, Any]
    status: int = EXIT_OK
    balls: list[OpenBall] | None = field(default=None)


# --------------------------------------------------------------------------- #
#  Input parsing                                                               #
# --------------------------------------------------------------------------- #


def load_json(source: str | dict[str, Any]) -> Any:
    """Inline JSON text, a path to a JSON file, or an already decoded object."""
    if isinstance(source, dict):
        return source
    text = source.strip()
    if text.startswith(("{", "[")):
        return json.loads(text)
    return json.loads(Path(text).read_text(encoding="utf-8"))


def parse_box(text: str) -> IntervalBox:
    """``"[lo,hi]x[lo,hi]..."``, one bracketed interval per axis."""
    if _INTERVAL.sub("", text).replace("x", "").strip():
        raise ValueError(f"Invalid box: {text!r}")
    intervals = []
    for body in _INTERVAL.findall(text):
        parts = body.split(",")
        if len(parts) != 2:
            raise ValueError(f"Invalid interval [{body}] in box {text!r}")
        intervals.append(Interval(parse_rat(parts[0]), parse_rat(parts[1])))
    if not intervals:
        raise ValueError(f"Invalid box: {text!r}")
    return IntervalBox(tuple(intervals))


def parse_closed_ball(text: str) -> ClosedBall:
    """``"[lo,hi]"`` for a closed interval, or ``"(c1, ..., cn)@r"``."""
    stripped = text.strip()
    if stripped.startswith("["):
        box = parse_box(stripped)
        if box.dim != 1:
            raise ValueError(f"Invalid ball {text!r}: only intervals may be given in bracket form")
        return ClosedBall.from_interval(box[0].lo, box[0].hi)
    center, separator, radius = stripped.rpartition("@")
    if not separator:
        raise ValueError(f"Invalid ball: {text!r}")
    return ClosedBall(parse_qvec(center), parse_rat(radius))


def _required(value: Any, flag: str, command: str) -> Any:
    if value is None:
        raise ValueError(f"Invalid job: {command} needs --{flag}")
    return value


def _function(job: JobSpec) -> FuncSystem:
    return parse_function_system(_required(job.function, "f", job.command))


def _point(job: JobSpec) -> QVec:
    return parse_qvec(_required(job.x, "x", job.command))


def _open_set(job: JobSpec) -> OpenSetEnum:
    return enum_from_json(load_json(_required(job.open_set, "set", job.command)))


def _domain(job: JobSpec, f: FuncSystem) -> OpenSetEnum:
    if job.domain is not None:
        return enum_from_json(load_json(job.domain))
    origin = tuple(Fraction(0) for _ in range(f.n))
    return OpenSetEnum.from_balls(f.n, [OpenBall(origin, Fraction(DEFAULT_DOMAIN_RADIUS))])


def image_operator(f: FuncSystem, method: str, budget: Budget) -> Callable[[OpenSetEnum], OpenSetEnum]:
    """The image operator U ↦ F[U] of the named method."""
    if method == METHOD_CONVEX:
        return lambda u: image_convex(f, u, budget)
    if method == METHOD_INVERSE:
        return lambda u: image_inverse(f, u, budget)
    oracle = moo_oracle(f, method)
    return lambda u: image_from_moo(f, oracle, dyadic_dense(f, u, budget), u, budget)


# --------------------------------------------------------------------------- #
#  Subcommands                                                                 #
# --------------------------------------------------------------------------- #


def _not_yet(result: NotYet) -> Outcome:
    return Outcome({"verdict": "not_yet", "reason": result.reason}, EXIT_NOT_YET)


def _ball_list(u: OpenSetEnum, budget: Budget) -> Outcome:
    balls = u.balls(budget.max_prefix)
    return Outcome(balls_to_json(u.dim, balls), balls=balls)


def _radii(k: int, radii: Sequence[Fraction]) -> Outcome:
    if not radii:
        return _not_yet(NotYet("no radius certified"))
    return Outcome({"k": k, "radii": [format_rat(r) for r in radii]})


def _cmd_preimage(job: JobSpec) -> Outcome:
    f = _function(job)
    return _ball_list(preimage(f, _open_set(job), _domain(job, f), job.budget), job.budget)


def _cmd_image(job: JobSpec) -> Outcome:
    f = _function(job)
    return _ball_list(image_operator(f, job.method, job.budget)(_open_set(job)), job.budget)


def _cmd_moc(job: JobSpec) -> Outcome:
    ell = moc(_function(job), RealStream.exact(_point(job)), job.k, job.budget)
    return _not_yet(ell) if isinstance(ell, NotYet) else Outcome({"k": job.k, "ell": ell})


def _cmd_moo(job: JobSpec) -> Outcome:
    ell = moo(_function(job), RealStream.exact(_point(job)), job.k, job.method, job.budget)
    return _not_yet(ell) if isinstance(ell, NotYet) else Outcome({"k": job.k, "ell": ell, "method": job.method})


def _cmd_moo_lower(job: JobSpec) -> Outcome:
    f = _function(job)
    radii = moo_lower(image_operator(f, job.method, job.budget), f, RealStream.exact(_point(job)), job.k, job.budget)
    return _radii(job.k, radii)


def _certificate(job: JobSpec, f: FuncSystem) -> InverseCertificate | NotYet:
    u = _open_set(job) if job.open_set is not None else OpenSetEnum.whole(f.n)
    return inverse_radius(f, u, RealStream.exact(_point(job)), job.budget)


def _cmd_inverse_radius(job: JobSpec) -> Outcome:
    cert = _certificate(job, _function(job))
    return _not_yet(cert) if isinstance(cert, NotYet) else Outcome({"certificate": certificate_to_json(cert)})


def _cmd_invert(job: JobSpec) -> Outcome:
    f = _function(job)
    target = RealStream.exact(parse_qvec(_required(job.y, "y", job.command)))
    cert = _certificate(job, f)
    if isinstance(cert, NotYet):
        return _not_yet(cert)
    point = local_inverse(f, cert, cert.anchor, target, job.budget.max_precision)
    if isinstance(point, NotYet):
        return _not_yet(point)
    return Outcome({"certificate": certificate_to_json(cert), "point": point_to_json(point)})


def _cmd_zero(job: JobSpec) -> Outcome:
    ball = parse_closed_ball(_required(job.ball, "ball", job.command))
    zero = unique_zero(_function(job), ball, job.budget.max_precision)
    return Outcome({"precision": job.budget.max_precision, "zero": point_to_json(zero)})


def _cmd_eval_from_image(job: JobSpec) -> Outcome:
    f = _function(job)
    point = _point(job)
    if f.n != 1 or f.m != 1 or len(point) != 1:
        raise ValueError(f"Invalid job: eval-from-image needs a real function of one variable, got {f}")
    x = point[0]
    value = evaluate_from_image(
        image_operator(f, job.method, job.budget), lambda j: x - pow2(j), lambda j: x + pow2(j), job.k, job.budget
    )
    return _not_yet(value) if isinstance(value, NotYet) else Outcome({"k": job.k, "value": format_rat(value)})


def _cmd_qe(job: JobSpec) -> Outcome:
    result = qe_eliminate(parse_formula(_required(job.formula, "formula", job.command)))
    return Outcome({"formula": format_formula(result), "variables": list(result.names)})


def _cmd_sa_enum(job: JobSpec) -> Outcome:
    x = SASet.parse(_required(job.formula, "formula", job.command))
    bound = parse_box(_required(job.bound, "bound", job.command))
    return _ball_list(sa_open_enum(x, bound, job.budget), job.budget)


def _cmd_sa_moo(job: JobSpec) -> Outcome:
    return _radii(job.k, sa_moo_lower(_function(job), _point(job), job.k, job.budget))


def _cmd_regular_image(job: JobSpec) -> Outcome:
    name = regular_from_json(load_json(_required(job.open_set, "set", job.command)))
    image = regular_image(_function(job), name, job.budget)
    return Outcome(regular_to_json(image, job.budget.max_prefix), balls=image.balls.balls(job.budget.max_prefix))


def _cmd_cover_check(job: JobSpec) -> Outcome:
    verdict = covers_closed_ball(_open_set(job), parse_closed_ball(_required(job.ball, "ball", job.command)), job.budget)
    return Outcome(verdict_to_json(verdict), EXIT_NOT_YET if isinstance(verdict, NotYet) else EXIT_OK)


_HANDLERS: dict[str, Callable[[JobSpec], Outcome]] = {
    "preimage": _cmd_preimage,
    "image": _cmd_image,
    "moc": _cmd_moc,
    "moo": _cmd_moo,
    "moo-lower": _cmd_moo_lower,
    "inverse-radius": _cmd_inverse_radius,
    "invert": _cmd_invert,
    "zero": _cmd_zero,
    "eval-from-image": _cmd_eval_from_image,
    "qe": _cmd_qe,
    "sa-enum": _cmd_sa_enum,
    "sa-moo": _cmd_sa_moo,
    "regular-image": _cmd_regular_image,
    "cover-check": _cmd_cover_check,
}


# --------------------------------------------------------------------------- #
#  Running jobs                                                                #
# --------------------------------------------------------------------------- #


def render(outcome: Outcome, output_format: str) -> str:
    if output_format == FORMAT_CSV:
        if outcome.balls is None:
            raise ValueError("Invalid format: csv output needs a ball-list result")
        buffer = io.StringIO()
        write_csv(buffer, outcome.balls)
        return buffer.getvalue()
    return dumps(outcome.payload)


def _emit(job: JobSpec, text: str) -> None:
    if job.output is None:
        sys.stdout.write(text)
        return
    path = Path(job.output)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def run(job: JobSpec) -> int:
    """Run one job and write its result; returns the exit status."""
    _LOGGER.info("openmap: running %s with %s", job.command, job.budget)
    try:
        outcome = _HANDLERS[job.command](job)
        text = render(outcome, job.output_format)
    except (ValueError, vol.Invalid, OSError) as e:
        _LOGGER.error("openmap: invalid %s job: %s", job.command, e)
        return EXIT_PARSE_ERROR
    except OpenMapError as e:
        _LOGGER.error("openmap: %s refused: %s", job.command, e)
        return EXIT_REFUSED
    _emit(job, text)
    _LOGGER.info("openmap: %s finished with status %s", job.command, outcome.status)
    return outcome.status


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--f", "--function", dest=CONF_FUNCTION, help="function system, components separated by ';'")
    common.add_argument("--formula", dest=CONF_FORMULA, help="semi-algebraic formula text")
    common.add_argument("--set", dest=CONF_SET, help="ball-list JSON (inline or file path)")
    common.add_argument("--domain", dest=CONF_DOMAIN, help="domain ball-list JSON for preimage")
    common.add_argument("--x", dest=CONF_POINT, help="rational point, e.g. '(1/2, -3)'")
    common.add_argument("--y", dest=CONF_TARGET, help="rational target point for invert")
    common.add_argument("--ball", dest=CONF_BALL, help="closed ball: '[lo,hi]' or '(c1,...,cn)@r'")
    common.add_argument("--bound", dest=CONF_BOUND, help="bounding box: '[lo,hi]x[lo,hi]'")
    common.add_argument("--k", dest=CONF_K, type=int, help="radius exponent k (ball radius 2^-k)")
    common.add_argument("--method", dest=CONF_METHOD, help="modulus of openness method")
    common.add_argument("--depth", dest=CONF_MAX_DEPTH, type=int, help="subdivision depth budget")
    common.add_argument("--prefix", dest=CONF_MAX_PREFIX, type=int, help="enumeration prefix budget")
    common.add_argument("--prec", dest=CONF_MAX_PRECISION, type=int, help="precision budget in bits")
    common.add_argument("--out", dest=CONF_OUTPUT, help="output path (default: stdout)")
    common.add_argument("--format", dest=CONF_FORMAT, choices=[FORMAT_JSON, FORMAT_CSV])
    common.add_argument("--job", help="JSON job file; flags given on the command line take precedence")
    common.add_argument("--verbose", action="store_true", help="debug logging")

    parser = argparse.ArgumentParser(prog="openmap", description="Effective openness with exact rational arithmetic.")
    subparsers = parser.add_subparsers(dest=CONF_COMMAND, required=True)
    for command in COMMANDS:
        subparsers.add_parser(command, parents=[common])
    return parser


def build_job(args: argparse.Namespace) -> JobSpec:
    config: dict[str, Any] = {}
    if args.job is not None:
        loaded = load_json(args.job)
        if not isinstance(loaded, dict):
            raise vol.Invalid(f"job file {args.job} does not hold a JSON object")
        config.update(loaded)
    flags = {key: value for key, value in vars(args).items() if key not in ("job", "verbose") and value is not None}
    config.update(flags)
    return JobSpec.from_config(config)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING, format="%(asctime)s %(levelname)s %(name)s: %(message)s"
    )
    try:
        job = build_job(args)
    except (ValueError, vol.Invalid, OSError) as e:
        _LOGGER.error("openmap: invalid job: %s", e)
        return EXIT_PARSE_ERROR
    return run(job)
