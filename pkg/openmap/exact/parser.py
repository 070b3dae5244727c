"""Parser for the expression grammar: ``x1..xn``, integers, ``p/q``, ``+ - * / ^`` and parentheses."""

from __future__ import annotations

import re
from fractions import Fraction

import sympy
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations

from openmap.errors import DivisionByZero, ParseError
from openmap.exact.expr import Const, Expr, FuncSystem, Var, add, div, max_var, mul, neg, power

_ALLOWED = re.compile(r"^[x0-9+\-*/^()\s]*$")
_VARIABLE = re.compile(r"^x([1-9]\d*)$")
_TRANSFORMATIONS = (*standard_transformations, convert_xor)
_GLOBALS = {
    "Integer": sympy.Integer,
    "Rational": sympy.Rational,
    "Symbol": sympy.Symbol,
    "Add": sympy.Add,
    "Mul": sympy.Mul,
    "Pow": sympy.Pow,
}


def _convert(node: sympy.Basic, text: str) -> Expr:
    if isinstance(node, sympy.Symbol):
        match = _VARIABLE.match(node.name)
        if match is None:
            raise ParseError(f"Unknown symbol {node.name!r} in {text!r}")
        return Var(int(match.group(1)) - 1)
    if isinstance(node, sympy.Rational):
        return Const(Fraction(int(node.p), int(node.q)))
    if isinstance(node, sympy.Add):
        result: Expr = Const(Fraction(0))
        for arg in node.args:
            result = add(result, _convert(arg, text))
        return result
    if isinstance(node, sympy.Mul):
        args = list(node.args)
        if args and args[0] == -1:
            rest: Expr = Const(Fraction(1))
            for arg in args[1:]:
                rest = mul(rest, _convert(arg, text))
            return neg(rest)
        result = Const(Fraction(1))
        for arg in args:
            result = mul(result, _convert(arg, text))
        return result
    if isinstance(node, sympy.Pow):
        base, exponent = node.args
        if not isinstance(exponent, sympy.Integer):
            raise ParseError(f"Non-integer exponent {exponent} in {text!r}")
        value = int(exponent)
        if value < 0:
            return div(Const(Fraction(1)), power(_convert(base, text), -value))
        return power(_convert(base, text), value)
    raise ParseError(f"Unsupported construct {node} in {text!r}")


def parse_expression(text: str) -> Expr:
    if not text.strip():
        raise ParseError("empty expression")
    if not _ALLOWED.match(text):
        raise ParseError(f"Invalid characters in expression {text!r}")
    try:
        tree = parse_expr(text, local_dict={}, global_dict=dict(_GLOBALS), transformations=_TRANSFORMATIONS, evaluate=False)
    except (SyntaxError, TypeError, ValueError, ZeroDivisionError) as e:
        raise ParseError(f"Cannot parse expression {text!r}: {e}") from e
    try:
        return _convert(tree, text)
    except DivisionByZero as e:
        raise ParseError(f"Constant division by zero in {text!r}") from e


def parse_function_system(text: str, n: int | None = None) -> FuncSystem:
    """Components separated by ``;``. The arity defaults to the largest variable index used."""
    components = tuple(parse_expression(part) for part in text.split(";"))
    used = max(max_var(c) for c in components) + 1
    arity = n if n is not None else max(used, 1)
    if used > arity:
        raise ParseError(f"expression {text!r} uses x{used} but arity is {arity}")
    return FuncSystem(arity, components, label=text.strip())
