"""Real quantifier elimination by cylindrical algebraic decomposition, within explicit limits.

Variables are ordered free first, then bound in prefix order. Projection follows Collins with
Hong's smaller pair set; at free levels every factor is closed under differentiation so that the
free cells are told apart by the signs of the projection factors (Thom). Lifting uses rational
sample points in sectors and real algebraic ones on sections.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cmp_to_key
from typing import TYPE_CHECKING, Any

import sympy

from openmap.const import (
    CONF_MAX_DEGREE,
    CONF_MAX_PROJECTION,
    CONF_MAX_VARS,
    DEFAULT_MAX_DEGREE,
    DEFAULT_MAX_PROJECTION,
    DEFAULT_MAX_VARS,
    LIMITS_SCHEMA,
)
from openmap.errors import LimitsExceeded, NotCertified
from openmap.semialgebraic.algebraic import (
    Coordinate,
    RealAlgebraic,
    compare,
    minimal_expr,
    real_roots,
    same_number,
    sector_samples,
    sign_at_point,
    substitute_rationals,
)
from openmap.semialgebraic.formula import And, Atom, Matrix, Or, SAFormula, Truth, atoms, evaluate
from openmap.semialgebraic.polynomial import Polynomial, Sign

if TYPE_CHECKING:
    from collections.abc import Iterator, Sequence

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class Limits:
    max_vars: int = DEFAULT_MAX_VARS
    max_degree: int = DEFAULT_MAX_DEGREE
    max_projection: int = DEFAULT_MAX_PROJECTION

    def __post_init__(self) -> None:
        if min(self.max_vars, self.max_degree, self.max_projection) < 1:
            raise ValueError(f"Invalid limits: {self!r}")

    @classmethod
    def from_config(cls, config: dict[str, Any]) -> Limits:
        data = LIMITS_SCHEMA(config)
        return cls(data[CONF_MAX_VARS], data[CONF_MAX_DEGREE], data[CONF_MAX_PROJECTION])

    def as_config(self) -> dict[str, int]:
        return {CONF_MAX_VARS: self.max_vars, CONF_MAX_DEGREE: self.max_degree, CONF_MAX_PROJECTION: self.max_projection}


def check_limits(formula: SAFormula, limits: Limits) -> None:
    if formula.n > limits.max_vars:
        raise LimitsExceeded(f"{formula.n} variables, limit {limits.max_vars}")
    degree = max((atom.poly.degree for atom in atoms(formula.matrix)), default=0)
    if degree > limits.max_degree:
        raise LimitsExceeded(f"degree {degree}, limit {limits.max_degree}")


# --------------------------------------------------------------------------- #
#  Projection                                                                  #
# --------------------------------------------------------------------------- #


def _coefficients(expr: sympy.Expr, v: sympy.Symbol) -> list[sympy.Expr]:
    """Coefficients in ``v``, leading first."""
    return sympy.Poly(expr, v).all_coeffs()


def _degree(expr: sympy.Expr, v: sympy.Symbol) -> int:
    return int(sympy.degree(expr, v))


def reducta(expr: sympy.Expr, v: sympy.Symbol) -> list[sympy.Expr]:
    """Successive reducta in ``v``, up to the first whose leading coefficient cannot vanish."""
    result = []
    current = sympy.expand(expr)
    while current != 0:
        result.append(current)
        degree = _degree(current, v)
        lead = _coefficients(current, v)[0]
        if degree == 0 or not lead.free_symbols:
            break
        current = sympy.expand(current - lead * v**degree)
    return result


def psc(a: sympy.Expr, b: sympy.Expr, v: sympy.Symbol, k: int) -> sympy.Expr:
    """k-th principal subresultant coefficient of a and b in ``v``; ``psc(a, b, v, 0)`` is the resultant."""
    ca, cb = _coefficients(a, v), _coefficients(b, v)
    m, n = len(ca) - 1, len(cb) - 1
    width = m + n - k
    rows = [[0] * i + ca + [0] * (width - i - m - 1) for i in range(n - k)]
    rows += [[0] * j + cb + [0] * (width - j - n - 1) for j in range(m - k)]
    size = m + n - 2 * k
    return sympy.expand(sympy.Matrix([row[:size] for row in rows]).det(method="berkowitz"))


def project(polys: Sequence[sympy.Expr], v: sympy.Symbol) -> list[sympy.Expr]:
    """Polynomials in the lower variables whose sign-invariant cells carry delineable stacks of ``polys``."""
    result: list[sympy.Expr] = []
    chains = {p: reducta(p, v) for p in polys}
    for p in polys:
        for g in chains[p]:
            result.append(_coefficients(g, v)[0])
            degree = _degree(g, v)
            if degree >= 2:
                derivative = sympy.diff(g, v)
                result.extend(psc(g, derivative, v, k) for k in range(degree - 1))
    for i, p in enumerate(polys):
        for q in polys[i + 1 :]:
            for g in chains[p]:
                common = min(_degree(g, v), _degree(q, v))
                result.extend(psc(g, q, v, k) for k in range(common))
    return result


def factors(expr: sympy.Expr, symbols: Sequence[sympy.Symbol]) -> list[sympy.Expr]:
    """Monic irreducible non-constant factors over Q."""
    expr = sympy.expand(expr)
    if expr == 0 or not expr.free_symbols:
        return []
    _, found = sympy.factor_list(expr, *symbols)
    return [sympy.Poly(f, *symbols, domain=sympy.QQ).monic().as_expr() for f, _ in found if f.free_symbols]


def _level(expr: sympy.Expr, symbols: Sequence[sympy.Symbol]) -> int:
    return max(i for i, s in enumerate(symbols) if s in expr.free_symbols)


# --------------------------------------------------------------------------- #
#  Decomposition                                                               #
# --------------------------------------------------------------------------- #


class _Decomposition:
    def __init__(self, formula: SAFormula, limits: Limits) -> None:
        self.formula = formula
        self.limits = limits
        self.n = formula.n
        self.free = formula.free_count
        self.symbols = [sympy.Symbol(f"_v{i}") for i in range(self.n)]
        self.levels: list[list[sympy.Expr]] = [[] for _ in range(self.n)]
        self._seen: set[sympy.Expr] = set()
        self._atom_exprs: dict[Polynomial, sympy.Expr] = {}
        self.cell_count = 0

    def _add(self, expr: sympy.Expr) -> None:
        for factor in factors(expr, self.symbols):
            if factor in self._seen:
                continue
            self._seen.add(factor)
            self.levels[_level(factor, self.symbols)].append(factor)
            if len(self._seen) > self.limits.max_projection:
                raise LimitsExceeded(f"more than {self.limits.max_projection} projection factors")

    def _close_under_derivatives(self, level: int) -> None:
        index = 0
        while index < len(self.levels[level]):
            self._add(sympy.diff(self.levels[level][index], self.symbols[level]))
            index += 1

    def project(self) -> None:
        for atom in atoms(self.formula.matrix):
            self._add(self._expr(atom.poly))
        for level in range(self.n - 1, -1, -1):
            if level < self.free:
                self._close_under_derivatives(level)
            if level > 0:
                for expr in project(self.levels[level], self.symbols[level]):
                    self._add(expr)
        _LOGGER.debug("openmap: CAD projection factors per level %s", [len(polys) for polys in self.levels])

    def _expr(self, poly: Polynomial) -> sympy.Expr:
        if poly not in self._atom_exprs:
            self._atom_exprs[poly] = poly.to_expr(self.symbols)
        return self._atom_exprs[poly]

    def _roots(self, p: sympy.Expr, sample: tuple[Coordinate, ...]) -> list[Coordinate]:
        level = len(sample)
        v = self.symbols[level]
        lower = self.symbols[:level]
        if all(sign_at_point(c, lower, sample) == 0 for c in _coefficients(p, v)):
            return []
        reduced = substitute_rationals(p, lower, sample)
        unknowns = [
            (s, c) for s, c in zip(lower, sample, strict=True) if isinstance(c, RealAlgebraic) and s in reduced.free_symbols
        ]
        if not unknowns:
            return real_roots(sympy.Poly(reduced, v, domain=sympy.QQ))
        norm = reduced
        for symbol, number in unknowns:
            norm = sympy.resultant(norm, minimal_expr(number, symbol), symbol)
        norm_poly = sympy.Poly(norm, v, domain=sympy.QQ)
        if norm_poly.is_zero:
            raise NotCertified(f"degenerate norm of {p} over {sample!r}")
        upper = self.symbols[: level + 1]
        return [r for r in real_roots(norm_poly) if sign_at_point(p, upper, (*sample, r)) == 0]

    def stack(self, sample: tuple[Coordinate, ...]) -> list[Coordinate]:
        """Sample coordinates of the cells of the cylinder over ``sample``."""
        distinct: list[Coordinate] = []
        for p in self.levels[len(sample)]:
            for root in self._roots(p, sample):
                if not any(same_number(root, known) for known in distinct):
                    distinct.append(root)
        return sector_samples(sorted(distinct, key=cmp_to_key(compare)))

    def truth(self, sample: tuple[Coordinate, ...]) -> bool:
        level = len(sample)
        if level == self.n:
            self.cell_count += 1
            return evaluate(self.formula.matrix, lambda poly: sign_at_point(self._expr(poly), self.symbols, sample))
        quantifier, _ = self.formula.prefix[level - self.free]
        children = (self.truth((*sample, c)) for c in self.stack(sample))
        return any(children) if quantifier == "exists" else all(children)

    def free_cells(self, sample: tuple[Coordinate, ...] = ()) -> Iterator[tuple[Coordinate, ...]]:
        if len(sample) == self.free:
            yield sample
            return
        for c in self.stack(sample):
            yield from self.free_cells((*sample, c))

    def eliminate(self) -> SAFormula:
        self.project()
        names = self.formula.names[: self.free]
        if self.free == 0:
            return SAFormula(names, (), Truth(self.truth(())))
        free_symbols = self.symbols[: self.free]
        free_polys = [p for level in range(self.free) for p in self.levels[level]]
        table: dict[tuple[Sign, ...], bool] = {}
        for sample in self.free_cells():
            vector = tuple(sign_at_point(p, free_symbols, sample) for p in free_polys)
            value = self.truth(sample)
            if table.setdefault(vector, value) != value:
                raise LimitsExceeded("free cells are not separated by the signs of the projection factors")
        _LOGGER.debug("openmap: CAD with %s free cells and %s leaf cells", len(table), self.cell_count)
        true_vectors = [vector for vector, value in table.items() if value]
        if len(true_vectors) == len(table):
            return SAFormula(names, (), Truth(True))
        if not true_vectors:
            return SAFormula(names, (), Truth(False))
        polys = [Polynomial.from_expr(p, free_symbols) for p in free_polys]
        disjuncts: list[Matrix] = [
            And(tuple(_sign_atom(p, s) for p, s in zip(polys, vector, strict=True))) for vector in true_vectors
        ]
        return SAFormula(names, (), Or(tuple(disjuncts)))


def _sign_atom(p: Polynomial, sign: Sign) -> Atom:
    if sign > 0:
        return Atom(p, ">")
    if sign < 0:
        return Atom(-p, ">")
    return Atom(p, "=")


def qe_eliminate(formula: SAFormula, limits: Limits | None = None) -> SAFormula:
    """A quantifier-free formula in the free variables of ``formula``, equivalent to it over R.

    Raises ``LimitsExceeded`` rather than attempting decompositions beyond ``limits``.
    """
    if formula.is_quantifier_free:
        return formula
    limits = limits or Limits()
    check_limits(formula, limits)
    return _Decomposition(formula, limits).eliminate()
