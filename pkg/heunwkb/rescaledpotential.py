from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import lcm
from typing import Optional

import sympy
from loguru import logger

from .exceptions import DegenerationError, ScalingDegreeError
from .expansioncase import CycleKind, ExpansionCase
from .localframe import X, RationalInX, divide_linear
from .paramrat import ParamRat
from .potentialspec import E, get_potential, hbar, t, x

__all__ = ['LevelParts', 'RescaledPotential', 'LimitingCurve', 'rescale_potential', 'limiting_curve']

L, h, G = sympy.symbols('L h G')
_mu = sympy.Symbol('mu', positive=True)


@dataclass(frozen=True)
class LevelParts:
    """Lambda^l coefficient of Q^res = p0 + h^2 p2 + C * G"""

    level: int
    p0: RationalInX
    p2: RationalInX
    c: RationalInX


def _rescale(case: ExpansionCase) -> sympy.Expr:
    """Q^res(X; L, h, G) with x = t^dx X, E = t^dE G, hbar = h t^dy and t = L^(1/rho)"""
    exponents = [Fraction(1), case.d_x, case.d_y, case.d_E]
    n = lcm(*[(e / case.rho).denominator for e in exponents])

    def t_power(e: Fraction) -> sympy.Expr:
        k = Fraction(n) * e / case.rho
        return _mu ** int(k)

    expr = get_potential(case.equation).expression
    scaled = expr.subs({x: t_power(case.d_x) * X, E: t_power(case.d_E) * G, hbar: h * t_power(case.d_y),
                        t: t_power(Fraction(1))}, simultaneous=True)
    scaled = sympy.cancel(sympy.together(scaled * t_power(2 * case.d_x - 2 * case.d_y)))
    num, den = sympy.fraction(scaled)

    def collapse(poly_expr: sympy.Expr) -> sympy.Expr:
        poly = sympy.Poly(poly_expr, _mu)
        out = sympy.Integer(0)
        for (k,), coeff in poly.terms():
            if k % n:
                raise ScalingDegreeError(f'{case.case_id}: Q^res is not a function of Lambda (mu^{k}, n={n})')
            out += coeff * L ** (k // n)
        return out

    result = collapse(num) / collapse(den)
    logger.debug(f'{case.case_id}: Q^res = {result}')
    return result


class RescaledPotential:
    """Q^res of one expansion case with its Lambda-expansion"""

    def __init__(self, case: ExpansionCase) -> None:
        self.case = case
        self.expression = _rescale(case)
        num, den = sympy.fraction(sympy.together(self.expression))
        self._num = sympy.Poly(sympy.expand(num), L)
        self._den = sympy.Poly(sympy.expand(den), L)
        self._d0 = self._den.coeff_monomial(1)
        if self._d0 == 0 or sympy.Poly(self._d0, X).is_zero:
            raise ScalingDegreeError(f'{case.case_id}: Q^res has no finite Lambda -> 0 limit')
        self._check_shape()
        self._coefficients: list[sympy.Expr] = []
        self._parts: dict[int, LevelParts] = {}

    def _check_shape(self) -> None:
        expr = sympy.together(self.expression)
        if sympy.cancel(sympy.diff(expr, G, 2)) != 0:
            raise ScalingDegreeError(f'{self.case.case_id}: accessory parameter enters nonlinearly')
        num, den = sympy.fraction(expr)
        if den.has(h):
            raise ScalingDegreeError(f'{self.case.case_id}: h in a denominator of Q^res')
        degrees = {m[0] for m in sympy.Poly(num, h).monoms()}
        if not degrees <= {0, 2}:
            raise ScalingDegreeError(f'{self.case.case_id}: Q^res has h powers {sorted(degrees)}')

    def coefficient(self, level: int) -> sympy.Expr:
        """Lambda^level coefficient (a rational function of X, h and G)"""
        while len(self._coefficients) <= level:
            l = len(self._coefficients)
            acc = self._num.coeff_monomial(L ** l)
            for j in range(1, l + 1):
                acc -= self._den.coeff_monomial(L ** j) * self._coefficients[l - j]
            self._coefficients.append(sympy.cancel(acc / self._d0))
        return self._coefficients[level]

    def parts(self, level: int) -> LevelParts:
        if level not in self._parts:
            c = self.coefficient(level)
            at_zero = c.subs({G: 0, h: 0})
            p2 = sympy.diff(c, h, 2).subs({G: 0, h: 0}) / 2
            self._parts[level] = LevelParts(level, RationalInX.from_sympy(at_zero), RationalInX.from_sympy(p2),
                                            RationalInX.from_sympy(sympy.diff(c, G).subs(h, 0)))
        return self._parts[level]

    @cached_property
    def offset(self) -> int:
        """Lambda-valuation of dQ^res/dG"""
        level = 0
        while self.parts(level).c.is_zero:
            level += 1
            if level > 8:
                raise ScalingDegreeError(f'{self.case.case_id}: accessory parameter never enters Q^res')
        return level

    def limit(self, g: ParamRat) -> RationalInX:
        """Q0^[0] with the lowest accessory coefficient set to g"""
        p0 = self.parts(0).p0
        c = self.parts(self.offset).c
        num = _add(_mul(p0.num, c.den), _mul([g * a for a in c.num], p0.den))
        return RationalInX(num, _mul(p0.den, c.den))

    def render(self) -> str:
        return sympy.sstr(self.expression)

    def __str__(self):
        return f'Q^res[{self.case.case_id}] = {self.render()}'


def _mul(a, b) -> tuple[ParamRat, ...]:
    if not a or not b:
        return ()
    out = [ParamRat.from_int(0)] * (len(a) + len(b) - 1)
    for i, x_i in enumerate(a):
        for j, y_j in enumerate(b):
            out[i + j] = out[i + j] + x_i * y_j
    return tuple(out)


def _add(a, b) -> tuple[ParamRat, ...]:
    n = max(len(a), len(b))
    zero = ParamRat.from_int(0)
    out = [(a[k] if k < len(a) else zero) + (b[k] if k < len(b) else zero) for k in range(n)]
    while out and out[-1].is_zero:
        out.pop()
    return tuple(out)


_CACHE: dict[tuple[str, str], RescaledPotential] = {}


def rescale_potential(case: ExpansionCase) -> RescaledPotential:
    key = (case.case_id, case.variant or '')
    if key not in _CACHE:
        _CACHE[key] = RescaledPotential(case)
    return _CACHE[key]


@dataclass(frozen=True)
class LimitingCurve:
    case_id: str
    curve: RationalInX
    point: Optional[ParamRat] = None
    multiplicity: int = 0
    quotient: tuple[ParamRat, ...] = ()

    def factored(self) -> str:
        if self.point is None:
            return sympy.sstr(sympy.factor(self.curve.to_sympy()))
        quotient = sympy.Add(*(c.to_sympy(algebraic=True) * X ** k for k, c in enumerate(self.quotient)))
        den = RationalInX(self.curve.den, (ParamRat.from_int(1),)).to_sympy()
        linear = sympy.Symbol('X') - self.point.to_sympy(algebraic=True)
        return f'({sympy.sstr(linear)})^{self.multiplicity}*({sympy.sstr(sympy.expand(quotient))})/({sympy.sstr(den)})'

    def __str__(self):
        return self.factored()


def limiting_curve(case: ExpansionCase) -> LimitingCurve:
    """Q0^[0] at the forced leading value; a double zero is certified by exact division"""
    potential = rescale_potential(case)
    if case.forced_g is None:
        return LimitingCurve(case.case_id, RationalInX.from_sympy(potential.coefficient(0).subs(h, 0)))
    curve = potential.limit(ParamRat.parse(case.forced_g))
    if case.cycle.kind not in (CycleKind.DOUBLE_ZERO, CycleKind.TWO_POINT):
        return LimitingCurve(case.case_id, curve)
    multiplicity = 2 * case.cycle.zero_order
    result = None
    for point in case.cycle.points:
        center = ParamRat.parse(point.location)
        quotient = list(curve.num)
        for _ in range(multiplicity):
            quotient, remainder = divide_linear(quotient, center)
            if not remainder.is_zero:
                raise DegenerationError(f'{case.case_id}: Q0^[0] has no zero of order {multiplicity} '
                                        f'at X = {point.location}')
        if divide_linear(quotient, center)[1].is_zero:
            raise DegenerationError(f'{case.case_id}: zero at X = {point.location} is of higher order')
        if result is None:
            result = LimitingCurve(case.case_id, curve, center, multiplicity, tuple(quotient))
    return result
