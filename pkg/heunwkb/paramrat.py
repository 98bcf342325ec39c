from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Optional, Union

import mpmath
import sympy
from loguru import logger
from sympy.parsing.sympy_parser import parse_expr
from sympy.polys.domains import QQ
from sympy.polys.orderings import grevlex
from sympy.polys.polyerrors import CoercionFailed, PolynomialError
from sympy.polys.rings import PolyElement, PolyRing

from . import constants
from .exceptions import BranchError, MissingSymbol, NonInvertible, ParseError
from .surdtower import GENERATORS, SurdTower, gcd_all

__all__ = ['ParamRat', 'RING', 'TOWER', 'SYMBOLS', 'ZERO', 'ONE', 'param', 'coerce']

NAMES = constants.PARAMETERS + constants.AUXILIARY + constants.BLOCK_PARAMETERS + tuple(g.name for g in GENERATORS)
SYMBOLS: dict[str, sympy.Symbol] = {name: sympy.Symbol(name) for name in NAMES}
RING = PolyRing([SYMBOLS[name] for name in NAMES], QQ, grevlex)
TOWER = SurdTower(RING)
INDEX = {name: k for k, name in enumerate(NAMES)}

Coercible = Union['ParamRat', int, Fraction, str, sympy.Expr]


@lru_cache(maxsize=None)
def _subring(names: tuple[str, ...]) -> PolyRing:
    return PolyRing([SYMBOLS[name] for name in names], QQ, grevlex)


def _used(poly: PolyElement) -> tuple[str, ...]:
    used = [False] * RING.ngens
    for monom in poly.itermonoms():
        for k, e in enumerate(monom):
            if e:
                used[k] = True
    return tuple(name for name, flag in zip(NAMES, used) if flag)


def _factor(poly: PolyElement) -> tuple[object, list[tuple[PolyElement, int]]]:
    """factor_list in the smallest ring holding the polynomial (dense factoring scales with ngens)"""
    names = _used(poly)
    if not names:
        return poly.LC, []
    sub = _subring(names)
    coeff, factors = poly.set_ring(sub).factor_list()
    return coeff, [(f.set_ring(RING), k) for f, k in factors]


def _text_poly(poly: PolyElement) -> str:
    return sympy.sstr(poly.as_expr()).replace('**', '^')


def _primitive(poly: PolyElement) -> tuple[PolyElement, object]:
    """Returns (F, scale) with F = scale*poly having coprime integer coefficients and positive LC"""
    coeffs = poly.coeffs()
    den = sympy.ilcm(*[int(QQ.denom(c)) for c in coeffs]) if len(coeffs) > 1 else int(QQ.denom(coeffs[0]))
    numers = [int(QQ.numer(c * den)) for c in coeffs]
    num = sympy.igcd(*numers) if len(numers) > 1 else abs(numers[0])
    scale = QQ(int(den), int(num))
    primitive = poly.mul_ground(scale)
    if primitive.LC < 0:
        primitive, scale = -primitive, -scale
    return primitive, scale


def _rewrite_surds(expr: sympy.Expr) -> sympy.Expr:
    expr = expr.subs(sympy.I, SYMBOLS['i'])

    def is_surd(e) -> bool:
        return e.is_Pow and e.base.is_Integer and e.exp.is_Rational and not e.exp.is_Integer

    def rewrite(e) -> sympy.Expr:
        base, exp = int(e.base), e.exp
        if exp.q == 2 and base > 0:
            square, free = 1, 1
            for prime, mult in sympy.factorint(base).items():
                square *= prime ** (mult // 2)
                free *= prime ** (mult % 2)
            roots = {1: sympy.Integer(1), 2: SYMBOLS['s2'], 3: SYMBOLS['s3'], 6: SYMBOLS['s2'] * SYMBOLS['s3']}
            if free not in roots:
                raise ParseError(f'sqrt({free}) is not in the surd tower')
            return (square * roots[free]) ** exp.p
        if exp.q == 3 and base == 2:
            return SYMBOLS['c'] ** exp.p
        raise ParseError(f'{e} is not in the surd tower')

    return expr.replace(is_surd, rewrite)


class ParamRat:
    """Exact rational function of the case parameters over the surd tower.

    The numerator is a `PolyElement` reduced modulo the tower relations. The
    denominator is kept factored: a map from monic, surd-free, irreducible
    polynomials to multiplicities. Constants always live in the numerator.
    """

    __slots__ = ('num', 'den')

    def __init__(self, num: PolyElement, den: Optional[Mapping[PolyElement, int]] = None) -> None:
        self.num = num
        self.den = dict(den) if den else {}

    # construction

    @classmethod
    def _canonical(cls, num: PolyElement, den: Mapping[PolyElement, int]) -> 'ParamRat':
        num = TOWER.normal_form(num)
        if not num:
            return cls(RING.zero)
        names = set(_used(num))
        out = {}
        for f, k in den.items():
            if names.issuperset(_used(f)):
                while k:
                    quotient, remainder = num.div(f)
                    if remainder:
                        break
                    num, k = quotient, k - 1
            if k:
                out[f] = k
        return cls(num, out)

    @classmethod
    def from_poly(cls, poly: PolyElement) -> 'ParamRat':
        return cls(TOWER.normal_form(poly))

    @classmethod
    def from_fraction(cls, num: PolyElement, den: PolyElement) -> 'ParamRat':
        num = TOWER.normal_form(num)
        den = TOWER.normal_form(den)
        if not den:
            raise NonInvertible('division by zero')
        if not num:
            return cls(RING.zero)
        parts = TOWER.split(den)
        g = gcd_all(list(parts.values()))
        rest, remainder = den.div(g)
        if remainder or not all(part.is_ground for part in TOWER.split(rest).values()):
            raise NonInvertible(f'{den.as_expr()} does not factor into a tower constant times a rational polynomial')
        if rest != RING.one:
            num = TOWER.normal_form(num * TOWER.inverse(rest))
        coeff, factors = _factor(g)
        num = num.mul_ground(QQ.one / coeff)
        den_map: dict[PolyElement, int] = {}
        for f, k in factors:
            lc = f.LC
            num = num.mul_ground(QQ.one / lc ** k)
            monic = f.monic()
            den_map[monic] = den_map.get(monic, 0) + k
        return cls._canonical(num, den_map)

    @classmethod
    def from_int(cls, value: Union[int, Fraction]) -> 'ParamRat':
        value = Fraction(value)
        return cls(RING.ground_new(QQ(value.numerator, value.denominator)))

    @classmethod
    def symbol(cls, name: str) -> 'ParamRat':
        try:
            return cls(RING.gens[INDEX[name]])
        except KeyError:
            raise ParseError(f'unknown symbol {name!r}')

    @classmethod
    def from_sympy(cls, expr: sympy.Expr) -> 'ParamRat':
        expr = _rewrite_surds(sympy.sympify(expr))
        num, den = sympy.fraction(sympy.together(expr))
        try:
            return cls.from_fraction(RING.from_expr(num), RING.from_expr(den))
        except (CoercionFailed, PolynomialError, ValueError) as e:
            raise ParseError(f'{expr} is not a rational function of the known symbols') from e

    @classmethod
    def parse(cls, text: str) -> 'ParamRat':
        """Reads the canonical text form (and any sympy-readable rational expression)"""
        try:
            expr = parse_expr(text.replace('^', '**'), local_dict=dict(SYMBOLS))
        except (SyntaxError, TypeError, sympy.SympifyError) as e:
            raise ParseError(f'cannot parse {text!r}') from e
        return cls.from_sympy(expr)

    # queries

    @property
    def is_zero(self) -> bool:
        return not self.num

    @property
    def is_ground(self) -> bool:
        """Rational number"""
        return not self.den and self.num.is_ground

    @property
    def is_constant(self) -> bool:
        """Element of the surd tower (no formal parameters)"""
        return set(self.free_symbols) <= set(TOWER.names)

    @property
    def free_symbols(self) -> set[str]:
        names = set(_used(self.num))
        for f in self.den:
            names.update(_used(f))
        return names

    def as_fraction(self) -> Fraction:
        if not self.is_ground:
            raise ValueError(f'{self} is not a rational number')
        c = self.num.LC if self.num else QQ.zero
        return Fraction(int(QQ.numer(c)), int(QQ.denom(c)))

    def den_poly(self) -> PolyElement:
        result = RING.one
        for f, k in self.den.items():
            result *= f ** k
        return result

    # arithmetic

    def __add__(self, other: Coercible) -> 'ParamRat':
        other = coerce(other)
        if other.is_zero:
            return self
        if self.is_zero:
            return other
        if self.den == other.den:
            return ParamRat._canonical(self.num + other.num, self.den)
        den = dict(self.den)
        for f, k in other.den.items():
            den[f] = max(den.get(f, 0), k)
        a, b = self.num, other.num
        for f, k in den.items():
            if k > self.den.get(f, 0):
                a = a * f ** (k - self.den.get(f, 0))
            if k > other.den.get(f, 0):
                b = b * f ** (k - other.den.get(f, 0))
        return ParamRat._canonical(a + b, den)

    __radd__ = __add__

    def __neg__(self) -> 'ParamRat':
        return ParamRat(-self.num, self.den)

    def __sub__(self, other: Coercible) -> 'ParamRat':
        return self + (-coerce(other))

    def __rsub__(self, other: Coercible) -> 'ParamRat':
        return coerce(other) - self

    def __mul__(self, other: Coercible) -> 'ParamRat':
        other = coerce(other)
        if self.is_zero or other.is_zero:
            return ZERO
        if not other.den and other.num.is_ground:
            return ParamRat(self.num.mul_ground(other.num.LC), self.den)
        if not self.den and self.num.is_ground:
            return ParamRat(other.num.mul_ground(self.num.LC), other.den)
        den = dict(self.den)
        for f, k in other.den.items():
            den[f] = den.get(f, 0) + k
        return ParamRat._canonical(self.num * other.num, den)

    __rmul__ = __mul__

    def inverse(self) -> 'ParamRat':
        if self.is_zero:
            raise NonInvertible('division by zero')
        if not self.den and self.num.is_ground:
            return ParamRat(RING.ground_new(QQ.one / self.num.LC))
        return ParamRat.from_fraction(self.den_poly(), self.num)

    def __truediv__(self, other: Coercible) -> 'ParamRat':
        return self * coerce(other).inverse()

    def __rtruediv__(self, other: Coercible) -> 'ParamRat':
        return coerce(other) * self.inverse()

    def __pow__(self, n: int) -> 'ParamRat':
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            return ONE
        return ParamRat._canonical(self.num ** n, {f: k * n for f, k in self.den.items()})

    def __eq__(self, other: object) -> bool:
        try:
            other = coerce(other)
        except (ParseError, TypeError):
            return NotImplemented
        if self.den == other.den:
            return self.num == other.num
        return (self - other).is_zero

    __hash__ = None

    def __bool__(self) -> bool:
        return not self.is_zero

    # algebra

    def sqrt(self, root: Optional['ParamRat'] = None) -> 'ParamRat':
        """Square root inside the field; `root` pins the branch and is only verified"""
        if root is not None:
            root = coerce(root)
            if root * root != self:
                raise BranchError(f'({root})^2 != {self}')
            return root
        if self.is_zero:
            return ZERO
        if any(k % 2 for k in self.den.values()):
            raise BranchError(f'denominator of {self} is not a square')
        parts = TOWER.split(self.num)
        g = gcd_all(list(parts.values()))
        rest, _ = self.num.div(g)
        coeff, factors = _factor(g)
        if any(k % 2 for _, k in factors):
            raise BranchError(f'numerator of {self} is not a square')
        root_poly = RING.one
        for f, k in factors:
            root_poly *= f ** (k // 2)
        constant = TOWER.sqrt(TOWER.normal_form(rest.mul_ground(coeff)))
        return ParamRat._canonical(root_poly * constant, {f: k // 2 for f, k in self.den.items()})

    def subs(self, mapping: Mapping[str, Coercible]) -> 'ParamRat':
        """Substitutes symbols by coefficients (e.g. G -> solved value, lam -> nu/hbar + 1/2)"""
        mapping = {name: coerce(value) for name, value in mapping.items() if name in self.free_symbols}
        if not mapping:
            return self
        result = _subs_poly(self.num, mapping)
        for f, k in self.den.items():
            result = result / _subs_poly(f, mapping) ** k
        return result

    def polynomial_coefficients(self, name: str) -> dict[int, 'ParamRat']:
        """Coefficients of powers of `name`; the denominator must not involve it"""
        if any(name in _used(f) for f in self.den):
            raise ValueError(f'{self} is not polynomial in {name}')
        k = INDEX[name]
        grouped: dict[int, dict] = {}
        for monom, coeff in self.num.iterterms():
            rest = list(monom)
            rest[k] = 0
            grouped.setdefault(monom[k], {})[tuple(rest)] = coeff
        return {e: ParamRat._canonical(RING.from_dict(terms), self.den) for e, terms in sorted(grouped.items())}

    def valuation(self, name: str) -> int:
        """Order of vanishing at name = 0"""
        if self.is_zero:
            raise ValueError('zero has infinite valuation')
        k = INDEX[name]
        order = min(monom[k] for monom in self.num.itermonoms())
        return order - self.den.get(RING.gens[k], 0)

    # conversion

    def to_sympy(self, algebraic: bool = False) -> sympy.Expr:
        expr = self.num.as_expr()
        for f, k in self.den.items():
            expr = expr / f.as_expr() ** k
        if algebraic:
            q = sympy.I / sympy.sqrt(6)
            expr = expr.subs({SYMBOLS['i']: sympy.I, SYMBOLS['s2']: sympy.sqrt(2), SYMBOLS['s3']: sympy.sqrt(3),
                              SYMBOLS['c']: sympy.cbrt(2), SYMBOLS['q']: q, SYMBOLS['p']: sympy.sqrt(3 * q)})
        return expr

    def to_text(self) -> str:
        """Canonical text: integer-coefficient numerator over content times primitive factors"""
        num = self.num
        shown = []
        for f, k in self.den.items():
            primitive, scale = _primitive(f)
            num = num.mul_ground(scale ** k)
            shown.append((_text_poly(primitive), len(primitive), k))
        shown.sort()
        d = 1
        if num:
            d = int(sympy.ilcm(*[int(QQ.denom(c)) for c in num.coeffs()], 1))
        num = num.mul_ground(QQ(d))
        num_text = _text_poly(num)
        if not shown and d == 1:
            return num_text
        parts = [str(d)] if d != 1 else []
        for text, terms, k in shown:
            text = f'({text})' if terms > 1 else text
            parts.append(f'{text}^{k}' if k > 1 else text)
        den_text = '*'.join(parts)
        if len(parts) > 1:
            den_text = f'({den_text})'
        if len(num) > 1:
            num_text = f'({num_text})'
        return f'{num_text}/{den_text}'

    def to_latex(self) -> str:
        return sympy.latex(sympy.factor(self.to_sympy(algebraic=True)))

    def evaluate(self, values: Mapping[str, object]) -> mpmath.mpc:
        """Numeric value at the current mpmath precision"""
        result = _numeric(self.num, values)
        for f, k in self.den.items():
            result /= _numeric(f, values) ** k
        return result

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f'{self.__class__.__name__}({self.to_text()!r})'


def _subs_poly(poly: PolyElement, mapping: Mapping[str, ParamRat]) -> ParamRat:
    positions = [INDEX[name] for name in mapping]
    values = [mapping[name] for name in mapping]
    grouped: dict[tuple[int, ...], dict] = {}
    for monom, coeff in poly.iterterms():
        key = tuple(monom[k] for k in positions)
        rest = list(monom)
        for k in positions:
            rest[k] = 0
        grouped.setdefault(key, {})[tuple(rest)] = coeff
    powers: dict[tuple[int, int], ParamRat] = {}
    result = ZERO
    for key, terms in grouped.items():
        term = ParamRat.from_poly(RING.from_dict(terms))
        for n, e in enumerate(key):
            if e:
                if (n, e) not in powers:
                    powers[n, e] = values[n] ** e
                term = term * powers[n, e]
        result = result + term
    return result


def _numeric(poly: PolyElement, values: Mapping[str, object]) -> mpmath.mpc:
    total = mpmath.mpf(0)
    for monom, coeff in poly.iterterms():
        term = mpmath.mpf(int(QQ.numer(coeff))) / int(QQ.denom(coeff))
        for k, e in enumerate(monom):
            if e:
                try:
                    term *= values[NAMES[k]] ** e
                except KeyError:
                    raise MissingSymbol(NAMES[k])
        total += term
    return total


def coerce(value: Coercible) -> ParamRat:
    if isinstance(value, ParamRat):
        return value
    if isinstance(value, (int, Fraction)):
        return ParamRat.from_int(value)
    if isinstance(value, str):
        return ParamRat.parse(value)
    if isinstance(value, sympy.Basic):
        return ParamRat.from_sympy(value)
    raise TypeError(f'cannot convert {type(value).__name__} to ParamRat')


def param(name: str) -> ParamRat:
    return ParamRat.symbol(name)


ZERO = ParamRat(RING.zero)
ONE = ParamRat(RING.one)

logger.debug(f'parameter ring has {RING.ngens} generators')
