"""Shared fixtures for openmap tests: the function corpus, budgets and ball lists."""

from __future__ import annotations

from fractions import Fraction
from typing import Any

import pytest

from openmap.exact.expr import FuncSystem
from openmap.exact.geometry import OpenBall
from openmap.exact.parser import parse_function_system
from openmap.names.budget import Budget
from openmap.names.enumeration import OpenSetEnum

# label -> (function text, a rational point inside its domain of interest)
CORPUS: dict[str, tuple[str, tuple[Fraction, ...]]] = {
    "cube": ("x1^3", (Fraction(1, 2),)),
    "double": ("2*x1", (Fraction(0),)),
    "diag": ("2*x1; x2/2", (Fraction(0), Fraction(0))),
    "shear": ("x1 + x2^3; x2 - x1^3", (Fraction(0), Fraction(0))),
    "square": ("x1^2 - x2^2; 2*x1*x2", (Fraction(1), Fraction(0))),
    "lifted": ("x1^3 + x3^2; x2^3 + x3^2", (Fraction(0), Fraction(0), Fraction(0))),
    "rotation": ("3/5*x1 - 4/5*x2; 4/5*x1 + 3/5*x2", (Fraction(0), Fraction(0))),
    "sum": ("x1 + x2", (Fraction(0), Fraction(0))),
}


def half(value: int = 1) -> Fraction:
    return Fraction(value, 2)


@pytest.fixture
def budget() -> Budget:
    return Budget(max_prefix=64, max_depth=4, max_precision=20)


@pytest.fixture
def small_budget() -> Budget:
    return Budget(max_prefix=16, max_depth=3, max_precision=12)


@pytest.fixture
def corpus() -> dict[str, FuncSystem]:
    return {label: parse_function_system(text) for label, (text, _) in CORPUS.items()}


@pytest.fixture
def cube() -> FuncSystem:
    return parse_function_system("x1^3")


@pytest.fixture
def double() -> FuncSystem:
    return parse_function_system("2*x1")


@pytest.fixture
def diag() -> FuncSystem:
    return parse_function_system("2*x1; x2/2")


@pytest.fixture
def shear() -> FuncSystem:
    return parse_function_system("x1 + x2^3; x2 - x1^3")


@pytest.fixture
def rotation() -> FuncSystem:
    return parse_function_system("3/5*x1 - 4/5*x2; 4/5*x1 + 3/5*x2")


@pytest.fixture
def plane_sum() -> FuncSystem:
    return parse_function_system("x1 + x2")


@pytest.fixture
def unit_interval() -> OpenSetEnum:
    """(0, 1) as a single ball."""
    return OpenSetEnum.from_balls(1, [OpenBall((half(),), half())])


@pytest.fixture
def unit_disk() -> OpenSetEnum:
    return OpenSetEnum.from_balls(2, [OpenBall((Fraction(0), Fraction(0)), Fraction(1))])


@pytest.fixture
def unit_interval_json() -> dict[str, Any]:
    return {"dim": 1, "balls": [{"center": ["1/2"], "radius": "1/2"}]}


@pytest.fixture
def disk_json() -> dict[str, Any]:
    return {"dim": 2, "balls": [{"center": ["0/1", "0/1"], "radius": "1/1"}, {"center": ["1/2", "-1/4"], "radius": "1/8"}]}
