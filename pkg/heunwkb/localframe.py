from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import sympy

from .exceptions import DegenerationError
from .expansioncase import CyclePoint
from .paramrat import ONE, ZERO, ParamRat, coerce
from .puiseuxseries import PuiseuxSeries

__all__ = ['RationalInX', 'LocalFrame', 'taylor_shift', 'divide_linear']

X = sympy.Symbol('X')


def taylor_shift(coeffs: Sequence[ParamRat], center: ParamRat) -> list[ParamRat]:
    """Coefficients of p(center + u) in u, by repeated Horner division"""
    work = list(coeffs)
    out = []
    for _ in range(len(work)):
        work, remainder = divide_linear(work, center)
        out.append(remainder)
    return out


def divide_linear(coeffs: Sequence[ParamRat], root: ParamRat) -> tuple[list[ParamRat], ParamRat]:
    """p(X) = (X - root) q(X) + r; coefficients ascending"""
    if not coeffs:
        return [], ZERO
    carry = ZERO
    quotient = [ZERO] * (len(coeffs) - 1)
    for k in range(len(coeffs) - 1, 0, -1):
        carry = coeffs[k] + carry * root
        quotient[k - 1] = carry
    return quotient, coeffs[0] + carry * root


def _trim(coeffs: Sequence[ParamRat]) -> tuple[ParamRat, ...]:
    coeffs = list(coeffs)
    while coeffs and coeffs[-1].is_zero:
        coeffs.pop()
    return tuple(coeffs)


@dataclass(frozen=True)
class RationalInX:
    """num(X)/den(X) with ParamRat coefficients in ascending degree"""

    num: tuple[ParamRat, ...]
    den: tuple[ParamRat, ...]

    @classmethod
    def from_sympy(cls, expr: sympy.Expr) -> 'RationalInX':
        num, den = sympy.fraction(sympy.cancel(sympy.together(expr)))

        def coefficients(poly_expr):
            poly = sympy.Poly(poly_expr, X)
            return _trim(ParamRat.from_sympy(c) for c in reversed(poly.all_coeffs()))

        return cls(coefficients(num), coefficients(den))

    @property
    def is_zero(self) -> bool:
        return not self.num

    def to_sympy(self) -> sympy.Expr:
        def poly(coeffs):
            return sympy.Add(*(c.to_sympy(algebraic=True) * X ** k for k, c in enumerate(coeffs)))
        return poly(self.num) / poly(self.den)

    def __str__(self):
        return sympy.sstr(self.to_sympy())


@dataclass(frozen=True)
class LocalFrame:
    """Chart u = X - x* (or u = 1/X at infinity) around one point of the cycle"""

    point: CyclePoint
    depth: int
    """Exclusive u-order of every expansion taken in this frame"""

    @property
    def center(self) -> Optional[ParamRat]:
        return None if self.point.at_infinity else ParamRat.parse(self.point.location)

    @property
    def lead_root(self) -> ParamRat:
        return ParamRat.parse(self.point.lead_root)

    @property
    def sign(self) -> int:
        return self.point.sign

    @property
    def tag(self) -> str:
        return 'u'

    def expand_polynomial(self, coeffs: Sequence[ParamRat]) -> PuiseuxSeries:
        if self.point.at_infinity:
            n = len(coeffs) - 1
            return PuiseuxSeries('u', {k - n: c for k, c in enumerate(reversed(coeffs))})
        return PuiseuxSeries.polynomial('u', taylor_shift(coeffs, self.center))

    def expand(self, f: RationalInX) -> PuiseuxSeries:
        if f.is_zero:
            return PuiseuxSeries.zero('u', self.depth)
        num = self.expand_polynomial(f.num)
        den = self.expand_polynomial(f.den)
        if den.is_zero:
            raise DegenerationError('denominator vanishes identically')
        return num.divide(den, self.depth).truncate(self.depth)

    def derivative(self, s: PuiseuxSeries) -> PuiseuxSeries:
        """d/dX in the local coordinate"""
        if self.point.at_infinity:
            return -(s.derive().shift(2))
        return s.derive()

    def residue(self, s: PuiseuxSeries) -> ParamRat:
        """(1 / 2 pi i) * (contour integral of s dX) around the point; ramified exponents carry none"""
        if self.point.at_infinity:
            return s.coefficient(1)
        return s.residue()

    def __str__(self):
        where = 'X = oo' if self.point.at_infinity else f'X = {self.point.location}'
        return f'frame at {where} (depth {self.depth})'
