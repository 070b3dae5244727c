"""Semi-algebraic formulas: sign conditions on polynomials, boolean connectives and a prenex prefix.

Text grammar::

    formula    := quantifier* disjunction
    quantifier := ("exists" | "forall") NAME ("," NAME)* "."
    disjunction:= conjunction ("or" conjunction)*
    conjunction:= negation ("and" negation)*
    negation   := "not" negation | "true" | "false" | "(" disjunction ")" | poly REL poly
    REL        := ">" | ">=" | "=" | "<" | "<=" | "!="

Polynomials use integers, variable names, ``+ - * ^``, parentheses and division by constants.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Literal

import sympy

from openmap.errors import ArityMismatch, DivisionByZero, ParseError
from openmap.semialgebraic.polynomial import Polynomial, Sign, sign_at

if TYPE_CHECKING:
    from collections.abc import Callable, Iterator, Sequence

    from openmap.exact.interval import IntervalBox

Relation = Literal[">", ">=", "="]
Quantifier = Literal["exists", "forall"]


@dataclass(frozen=True, slots=True)
class Atom:
    poly: Polynomial
    relation: Relation

    def holds(self, sign: Sign) -> bool:
        if self.relation == ">":
            return sign > 0
        if self.relation == ">=":
            return sign >= 0
        return sign == 0


@dataclass(frozen=True, slots=True)
class And:
    parts: tuple[Matrix, ...]


@dataclass(frozen=True, slots=True)
class Or:
    parts: tuple[Matrix, ...]


@dataclass(frozen=True, slots=True)
class Not:
    part: Matrix


@dataclass(frozen=True, slots=True)
class Truth:
    value: bool


Matrix = Atom | And | Or | Not | Truth


def atoms(matrix: Matrix) -> Iterator[Atom]:
    match matrix:
        case Atom():
            yield matrix
        case And(parts) | Or(parts):
            for part in parts:
                yield from atoms(part)
        case Not(part):
            yield from atoms(part)


def evaluate(matrix: Matrix, sign: Callable[[Polynomial], Sign]) -> bool:
    """Truth of a quantifier-free matrix given the sign of every atom polynomial."""
    match matrix:
        case Atom(poly, _):
            return matrix.holds(sign(poly))
        case And(parts):
            return all(evaluate(part, sign) for part in parts)
        case Or(parts):
            return any(evaluate(part, sign) for part in parts)
        case Not(part):
            return not evaluate(part, sign)
        case Truth(value):
            return value
    raise TypeError(f"Invalid formula node: {matrix!r}")


def remap(matrix: Matrix, n: int, mapping: Sequence[int]) -> Matrix:
    """The matrix with every polynomial moved to ``n`` variables by ``Polynomial.remap``."""
    match matrix:
        case Atom(poly, relation):
            return Atom(poly.remap(n, mapping), relation)
        case And(parts):
            return And(tuple(remap(part, n, mapping) for part in parts))
        case Or(parts):
            return Or(tuple(remap(part, n, mapping) for part in parts))
        case Not(part):
            return Not(remap(part, n, mapping))
    return matrix


@dataclass(frozen=True)
class SAFormula:
    """Prenex formula over ``names``: the free variables come first, then the bound ones in prefix order."""

    names: tuple[str, ...]
    prefix: tuple[tuple[Quantifier, int], ...]
    matrix: Matrix

    def __post_init__(self) -> None:
        n = len(self.names)
        first = n - len(self.prefix)
        if len(set(self.names)) != n:
            raise ValueError(f"Invalid variable names: {self.names!r}")
        for position, (quantifier, index) in enumerate(self.prefix):
            if quantifier not in ("exists", "forall") or index != first + position:
                raise ValueError(f"Invalid quantifier prefix: {self.prefix!r}")
        for atom in atoms(self.matrix):
            if atom.poly.n != n:
                raise ArityMismatch(f"atom {atom.poly} of arity {atom.poly.n} in a formula over {n} variables")

    @property
    def n(self) -> int:
        return len(self.names)

    @property
    def free_count(self) -> int:
        return len(self.names) - len(self.prefix)

    @property
    def is_quantifier_free(self) -> bool:
        return not self.prefix

    def __str__(self) -> str:
        return format_formula(self)


@dataclass(frozen=True)
class SASet:
    dim: int
    formula: SAFormula

    def __post_init__(self) -> None:
        if not self.formula.is_quantifier_free:
            raise ValueError(f"Invalid set formula with quantifiers: {self.formula}")
        if self.formula.n != self.dim:
            raise ArityMismatch(f"formula over {self.formula.n} variables for a set in R^{self.dim}")

    @classmethod
    def parse(cls, text: str, names: Sequence[str] | None = None) -> SASet:
        formula = parse_formula(text, names)
        return cls(formula.n, formula)


def _require_quantifier_free(formula: SAFormula, arity: int) -> None:
    if not formula.is_quantifier_free:
        raise ValueError(f"Invalid formula with quantifiers: {formula}")
    if arity != formula.n:
        raise ArityMismatch(f"point of dimension {arity} for a formula over {formula.n} variables")


def holds_at(formula: SAFormula, x: Sequence[Fraction]) -> bool:
    _require_quantifier_free(formula, len(x))
    return evaluate(formula.matrix, lambda p: sign_at(p, x))


def _holds_on_box(matrix: Matrix, box: IntervalBox) -> bool | None:
    match matrix:
        case Atom(poly, relation):
            iv = poly.evaluate_interval(box)
            if relation == ">":
                return True if iv.lo > 0 else False if iv.hi <= 0 else None
            if relation == ">=":
                return True if iv.lo >= 0 else False if iv.hi < 0 else None
            return True if iv.lo == iv.hi == 0 else False if iv.excludes_zero else None
        case And(parts):
            values = [_holds_on_box(part, box) for part in parts]
            return False if False in values else True if all(values) else None
        case Or(parts):
            values = [_holds_on_box(part, box) for part in parts]
            return True if True in values else False if all(v is False for v in values) else None
        case Not(part):
            value = _holds_on_box(part, box)
            return None if value is None else not value
        case Truth(value):
            return value
    raise TypeError(f"Invalid formula node: {matrix!r}")


def holds_on_box(formula: SAFormula, box: IntervalBox) -> bool | None:
    """Kleene truth value of the formula on every point of ``box``; ``None`` when undetermined."""
    _require_quantifier_free(formula, box.dim)
    return _holds_on_box(formula.matrix, box)


def graph_formula(numerators: Sequence[Polynomial], denominators: Sequence[Polynomial]) -> SAFormula:
    """Graph of x ↦ (p_i(x)/q_i(x))_i over x1..xn, y1..ym: every q_i(x) ≠ 0 and p_i(x) = y_i q_i(x)."""
    if len(numerators) != len(denominators) or not numerators:
        raise ArityMismatch(f"{len(numerators)} numerators and {len(denominators)} denominators")
    n = numerators[0].n
    if any(p.n != n for p in (*numerators, *denominators)):
        raise ArityMismatch("numerators and denominators of different arities")
    m = len(numerators)
    total = n + m
    lift = list(range(n))
    parts: list[Matrix] = []
    for i, (p, q) in enumerate(zip(numerators, denominators, strict=True)):
        if q.is_zero:
            raise DivisionByZero(f"component {i + 1} has a zero denominator")
        p_lifted, q_lifted = p.remap(total, lift), q.remap(total, lift)
        if not q.is_constant:
            parts.append(Not(Atom(q_lifted, "=")))
        parts.append(Atom(p_lifted - Polynomial.variable(total, n + i) * q_lifted, "="))
    names = tuple(f"x{i + 1}" for i in range(n)) + tuple(f"y{i + 1}" for i in range(m))
    return SAFormula(names, (), And(tuple(parts)))


# --------------------------------------------------------------------------- #
#  Text form                                                                   #
# --------------------------------------------------------------------------- #


_TOKEN = re.compile(r"\s*(?:(?P<number>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>>=|<=|!=|[-+*/^()<>=.,]))")
_KEYWORDS = frozenset({"exists", "forall", "and", "or", "not", "true", "false"})
_RELATIONS = frozenset({">", ">=", "=", "<", "<=", "!="})
_ARITHMETIC = frozenset({"+", "-", "*", "/", "^"})
_NAME_KEY = re.compile(r"^(.*?)(\d*)$")


def _tokenize(text: str) -> list[str]:
    tokens = []
    position = 0
    text = text.rstrip()
    while position < len(text):
        match = _TOKEN.match(text, position)
        if match is None or match.end() == position:
            raise ParseError(f"Unexpected character {text[position:position + 1]!r} in {text!r}")
        tokens.append(match.group(match.lastgroup))
        position = match.end()
    return tokens


def _name_key(name: str) -> tuple[str, int]:
    head, digits = _NAME_KEY.match(name).groups()
    return head, int(digits) if digits else 0


def _is_name(token: str) -> bool:
    return (token[0].isalpha() or token[0] == "_") and token not in _KEYWORDS


class _Parser:
    def __init__(self, text: str, names: Sequence[str] | None) -> None:
        self.text = text
        self.tokens = _tokenize(text)
        self.position = 0
        self.prefix: list[tuple[Quantifier, str]] = []
        self._parse_prefix()
        bound = [name for _, name in self.prefix]
        used = {t for t in self.tokens[self.position :] if _is_name(t)} - set(bound)
        if names is not None:
            unknown = used - set(names)
            if unknown:
                raise ParseError(f"Unknown variables {sorted(unknown)} in {text!r}")
            free = list(names)
        else:
            free = sorted(used, key=_name_key)
        overlap = set(free) & set(bound)
        if overlap:
            raise ParseError(f"Variables {sorted(overlap)} are both free and bound in {text!r}")
        self.names = (*free, *bound)
        self.symbols = {name: sympy.Symbol(name) for name in self.names}

    def peek(self) -> str | None:
        return self.tokens[self.position] if self.position < len(self.tokens) else None

    def advance(self) -> str:
        token = self.peek()
        if token is None:
            raise ParseError(f"Unexpected end of {self.text!r}")
        self.position += 1
        return token

    def expect(self, token: str) -> None:
        found = self.advance()
        if found != token:
            raise ParseError(f"Expected {token!r} but found {found!r} in {self.text!r}")

    def _parse_prefix(self) -> None:
        while self.peek() in ("exists", "forall"):
            quantifier: Quantifier = "exists" if self.advance() == "exists" else "forall"
            while True:
                name = self.advance()
                if not _is_name(name) or name in (n for _, n in self.prefix):
                    raise ParseError(f"Invalid bound variable {name!r} in {self.text!r}")
                self.prefix.append((quantifier, name))
                if self.peek() != ",":
                    break
                self.advance()
            self.expect(".")

    def formula(self) -> SAFormula:
        matrix = self.disjunction()
        if self.peek() is not None:
            raise ParseError(f"Unexpected {self.peek()!r} in {self.text!r}")
        first = len(self.names) - len(self.prefix)
        prefix = tuple((quantifier, first + i) for i, (quantifier, _) in enumerate(self.prefix))
        return SAFormula(tuple(self.names), prefix, matrix)

    def disjunction(self) -> Matrix:
        parts = [self.conjunction()]
        while self.peek() == "or":
            self.advance()
            parts.append(self.conjunction())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def conjunction(self) -> Matrix:
        parts = [self.negation()]
        while self.peek() == "and":
            self.advance()
            parts.append(self.negation())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def negation(self) -> Matrix:
        token = self.peek()
        if token == "not":
            self.advance()
            return Not(self.negation())
        if token in ("true", "false"):
            self.advance()
            return Truth(token == "true")
        if token == "(":
            start = self.position
            try:
                self.advance()
                inner = self.disjunction()
                self.expect(")")
                if self.peek() not in _RELATIONS | _ARITHMETIC:
                    return inner
            except ParseError:
                pass
            self.position = start
        return self.atom()

    def atom(self) -> Matrix:
        left = self.sum()
        relation = self.advance()
        if relation not in _RELATIONS:
            raise ParseError(f"Expected a relation but found {relation!r} in {self.text!r}")
        right = self.sum()
        symbols = [self.symbols[name] for name in self.names]
        if relation in ("<", "<="):
            left, right = right, left
        difference = Polynomial.from_expr(sympy.expand(left - right), symbols)
        if relation == "!=":
            return Not(Atom(difference, "="))
        return Atom(difference, {"<": ">", "<=": ">="}.get(relation, relation))

    def sum(self) -> sympy.Expr:
        result = self.product()
        while self.peek() in ("+", "-"):
            if self.advance() == "+":
                result = result + self.product()
            else:
                result = result - self.product()
        return result

    def product(self) -> sympy.Expr:
        result = self.unary()
        while self.peek() in ("*", "/"):
            if self.advance() == "*":
                result = result * self.unary()
                continue
            divisor = self.unary()
            if divisor.free_symbols or divisor == 0:
                raise ParseError(f"Division by {divisor} in {self.text!r}: only nonzero constants may divide")
            result = result / divisor
        return result

    def unary(self) -> sympy.Expr:
        if self.peek() == "-":
            self.advance()
            return -self.unary()
        return self.power()

    def power(self) -> sympy.Expr:
        base = self.primary()
        if self.peek() == "^":
            self.advance()
            exponent = self.advance()
            if not exponent.isdigit():
                raise ParseError(f"Invalid exponent {exponent!r} in {self.text!r}")
            return base ** int(exponent)
        return base

    def primary(self) -> sympy.Expr:
        token = self.advance()
        if token.isdigit():
            return sympy.Integer(int(token))
        if token == "(":
            inner = self.sum()
            self.expect(")")
            return inner
        if _is_name(token):
            return self.symbols[token]
        raise ParseError(f"Unexpected {token!r} in {self.text!r}")


def parse_formula(text: str, names: Sequence[str] | None = None) -> SAFormula:
    """Parse the text grammar; free variables are ordered by ``names`` or else by name."""
    if not text.strip():
        raise ParseError("empty formula")
    return _Parser(text, names).formula()


def _format_matrix(matrix: Matrix, symbols: Sequence[sympy.Symbol]) -> str:
    match matrix:
        case Atom(poly, relation):
            return f"{sympy.sstr(poly.to_expr(symbols)).replace('**', '^')} {relation} 0"
        case And(parts):
            return " and ".join(f"({_format_matrix(p, symbols)})" for p in parts) if parts else "true"
        case Or(parts):
            return " or ".join(f"({_format_matrix(p, symbols)})" for p in parts) if parts else "false"
        case Not(part):
            return f"not ({_format_matrix(part, symbols)})"
        case Truth(value):
            return "true" if value else "false"
    raise TypeError(f"Invalid formula node: {matrix!r}")


def format_formula(formula: SAFormula) -> str:
    symbols = [sympy.Symbol(name) for name in formula.names]
    prefix = "".join(f"{q} {formula.names[i]}. " for q, i in formula.prefix)
    return prefix + _format_matrix(formula.matrix, symbols)
