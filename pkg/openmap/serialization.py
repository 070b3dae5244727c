"""Wire formats: ball-list JSON, regular-set JSON, verdicts, certificates, stream prefixes and CSV plot rows.

Rationals travel as ``"num/den"`` strings. ``dumps`` is canonical (sorted keys, fixed layout), so
identical values serialize to identical bytes.
"""

from __future__ import annotations

import csv
import json
from typing import TYPE_CHECKING, Any

import voluptuous as vol

from openmap.exact.geometry import ClosedBall, OpenBall
from openmap.exact.interval import Interval, IntervalBox
from openmap.exact.rational import format_rat, parse_rat
from openmap.names.budget import NotYet
from openmap.names.coverage import Yes
from openmap.names.enumeration import OpenSetEnum
from openmap.names.stream import RealStream
from openmap.regular import RegularSetName

if TYPE_CHECKING:
    from collections.abc import Iterable, Sequence
    from fractions import Fraction
    from typing import TextIO

    from openmap.names.coverage import CoverageVerdict
    from openmap.openness.inverse import InverseCertificate


def _rational(value: Any) -> Fraction:
    try:
        return parse_rat(value)
    except ValueError as e:
        raise vol.Invalid(str(e)) from e


RATIONAL = vol.All(vol.Any(str, int), _rational)
POINT_SCHEMA = vol.All([RATIONAL], vol.Length(min=1))
BALL_SCHEMA = vol.Schema({vol.Required("center"): POINT_SCHEMA, vol.Required("radius"): RATIONAL})
BOX_SCHEMA = vol.All([vol.ExactSequence([RATIONAL, RATIONAL])], vol.Length(min=1))
BALL_LIST_SCHEMA = vol.Schema({vol.Required("dim"): vol.All(int, vol.Range(min=1)), vol.Required("balls"): [BALL_SCHEMA]})
REGULAR_SET_SCHEMA = BALL_LIST_SCHEMA.extend({vol.Required("bound"): BOX_SCHEMA})
STREAM_SCHEMA = vol.Schema({
    vol.Required("dim"): vol.All(int, vol.Range(min=1)),
    vol.Required("precision"): vol.All(int, vol.Range(min=0)),
    vol.Required("approximants"): [POINT_SCHEMA],
})


def dumps(data: Any) -> str:
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def point_to_json(x: Sequence[Fraction]) -> list[str]:
    return [format_rat(c) for c in x]


def ball_to_json(ball: OpenBall | ClosedBall) -> dict[str, Any]:
    return {"center": point_to_json(ball.center), "radius": format_rat(ball.radius)}


def balls_to_json(dim: int, balls: Iterable[OpenBall]) -> dict[str, Any]:
    return {"dim": dim, "balls": [ball_to_json(ball) for ball in balls]}


def enum_to_json(u: OpenSetEnum, count: int) -> dict[str, Any]:
    """The balls among the first ``count`` indices of an enumeration."""
    return balls_to_json(u.dim, u.iter_balls(count))


def balls_from_json(data: Any) -> tuple[int, list[OpenBall]]:
    parsed = BALL_LIST_SCHEMA(data)
    dim = parsed["dim"]
    balls = [OpenBall(tuple(entry["center"]), entry["radius"]) for entry in parsed["balls"]]
    for ball in balls:
        if ball.dim != dim:
            raise vol.Invalid(f"ball of dimension {ball.dim} in a {dim}-dimensional list")
    return dim, balls


def enum_from_json(data: Any) -> OpenSetEnum:
    dim, balls = balls_from_json(data)
    return OpenSetEnum.from_balls(dim, balls)


def box_to_json(box: IntervalBox) -> list[list[str]]:
    return [[format_rat(iv.lo), format_rat(iv.hi)] for iv in box]


def box_from_json(data: Any) -> IntervalBox:
    return IntervalBox(tuple(Interval(lo, hi) for lo, hi in BOX_SCHEMA(data)))


def regular_to_json(name: RegularSetName, count: int) -> dict[str, Any]:
    return {**enum_to_json(name.balls, count), "bound": box_to_json(name.bound)}


def regular_from_json(data: Any) -> RegularSetName:
    parsed = REGULAR_SET_SCHEMA(data)
    _, balls = balls_from_json({"dim": parsed["dim"], "balls": data["balls"]})
    return RegularSetName.from_balls(box_from_json(data["bound"]), balls)


def verdict_to_json(verdict: CoverageVerdict) -> dict[str, Any]:
    if isinstance(verdict, NotYet):
        return {"verdict": "not_yet", "reason": verdict.reason}
    return {
        "verdict": "yes",
        "certificate": [{"box": box_to_json(box), "ball": index} for box, index in verdict.certificate],
    }


def verdict_from_json(data: Any) -> CoverageVerdict:
    if data.get("verdict") == "not_yet":
        return NotYet(str(data.get("reason", "")))
    if data.get("verdict") != "yes":
        raise vol.Invalid(f"Invalid verdict: {data.get('verdict')!r}")
    return Yes(tuple((box_from_json(entry["box"]), entry["ball"]) for entry in data["certificate"]))


def certificate_to_json(cert: InverseCertificate) -> dict[str, Any]:
    return {
        "columns": list(cert.columns),
        "c_lo": format_rat(cert.c_lo),
        "k0": cert.k0,
        "k1": cert.k1,
        "k2": cert.k2,
        "remainder_bound": format_rat(cert.remainder_bound),
        "ell": cert.ell,
        "anchor": point_to_json(cert.anchor),
        "precision": cert.precision,
    }


def stream_to_json(x: RealStream, precision: int) -> dict[str, Any]:
    """Approximants 0..precision of a stream."""
    return {"dim": x.dim, "precision": precision, "approximants": [point_to_json(x.approx(k)) for k in range(precision + 1)]}


def stream_from_json(data: Any) -> RealStream:
    """A stream from a finite prefix; precisions beyond the prefix are refused."""
    parsed = STREAM_SCHEMA(data)
    approximants = [tuple(a) for a in parsed["approximants"]]
    if len(approximants) != parsed["precision"] + 1 or any(len(a) != parsed["dim"] for a in approximants):
        raise vol.Invalid(f"Invalid stream prefix: {len(approximants)} approximants for precision {parsed['precision']}")

    def approximant(k: int) -> tuple[Fraction, ...]:
        if k >= len(approximants):
            raise ValueError(f"Invalid precision {k} beyond the serialized prefix {parsed['precision']}")
        return approximants[k]

    return RealStream(parsed["dim"], approximant)


def write_csv(out: TextIO, balls: Iterable[OpenBall]) -> int:
    """One planar ball per row as decimal ``cx, cy, r``; returns the number of rows."""
    writer = csv.writer(out, lineterminator="\n")
    rows = 0
    for ball in balls:
        if ball.dim != 2:
            raise ValueError(f"Invalid ball of dimension {ball.dim} for planar plot rows")
        writer.writerow([repr(float(ball.center[0])), repr(float(ball.center[1])), repr(float(ball.radius))])
        rows += 1
    return rows
