from fractions import Fraction
from typing import Callable, Mapping, Optional, Union

from .exceptions import InsufficientDepth, InvariantViolation, TagMismatch
from .paramrat import ZERO, Coercible, ParamRat, coerce
from .puiseuxseries import PuiseuxSeries

__all__ = ['BlockSeries']

Exponent = Union[int, Fraction]


class BlockSeries:
    """W = log * log(var) + sum c_e var^e with exact coefficients.

    An ascending series (t -> 0) knows every exponent below `order`, a
    descending one (s -> oo) every exponent above it. `order=None` marks
    exact data.
    """

    __slots__ = ('variable', 'terms', 'log', 'order', 'descending')

    def __init__(self, variable: str, terms: Optional[Mapping[Exponent, Coercible]] = None,
                 log: Coercible = 0, order: Optional[Exponent] = None, descending: bool = False) -> None:
        self.variable = variable
        self.order = Fraction(order) if order is not None else None
        self.descending = descending
        self.log = coerce(log)
        cleaned = {}
        for e, c in (terms or {}).items():
            e = Fraction(e)
            if not self.known(e):
                continue
            c = coerce(c)
            if not c.is_zero:
                cleaned[e] = c
        self.terms = dict(sorted(cleaned.items(), reverse=descending))

    def known(self, exponent: Exponent) -> bool:
        if self.order is None:
            return True
        return exponent > self.order if self.descending else exponent < self.order

    def coefficient(self, exponent: Exponent) -> ParamRat:
        exponent = Fraction(exponent)
        if not self.known(exponent):
            raise InsufficientDepth(f'{self.variable}^{exponent} lies beyond the block order {self.order}',
                                    required=exponent)
        return self.terms.get(exponent, ZERO)

    @property
    def exponents(self) -> list[Fraction]:
        return list(self.terms)

    # algebra

    def map(self, func: Callable[[ParamRat], Coercible]) -> 'BlockSeries':
        return BlockSeries(self.variable, {e: func(c) for e, c in self.terms.items()}, func(self.log),
                           self.order, self.descending)

    def subs(self, mapping: Mapping[str, Coercible]) -> 'BlockSeries':
        return self.map(lambda c: c.subs(mapping))

    def identify(self, identification: Mapping[str, str]) -> 'BlockSeries':
        """Applies block symbol -> case parameter substitutions; 'm^2' keys replace even powers of m"""
        plain = {name: value for name, value in identification.items() if not name.endswith('^2')}
        series = self.subs(plain)
        for key, value in identification.items():
            if key.endswith('^2'):
                name = key[:-2]
                square = coerce(value)
                series = series.map(lambda c: _square_subs(c, name, square))
        return series

    def in_t(self, prefactor: Coercible, exponent: Exponent) -> 'BlockSeries':
        """Rewrites W(s) with s = prefactor * t^exponent; the constant log(prefactor) term is dropped"""
        prefactor = coerce(prefactor)
        exponent = Fraction(exponent)
        terms = {}
        for e, c in self.terms.items():
            if e.denominator != 1:
                raise ValueError(f'ramified block exponent {e}')
            terms[e * exponent] = c * prefactor ** int(e)
        order = self.order * exponent if self.order is not None else None
        return BlockSeries('t', terms, self.log * exponent, order, self.descending != (exponent < 0))

    def _check(self, other: 'BlockSeries') -> None:
        if self.variable != other.variable:
            raise TagMismatch(f'cannot combine blocks in {self.variable} and {other.variable}')
        if self.descending != other.descending:
            raise ValueError('cannot combine ascending and descending blocks')

    def _joint_order(self, other: 'BlockSeries') -> Optional[Fraction]:
        known = [o for o in (self.order, other.order) if o is not None]
        if not known:
            return None
        return max(known) if self.descending else min(known)

    def __add__(self, other: 'BlockSeries') -> 'BlockSeries':
        self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms[e] + c if e in terms else c
        return BlockSeries(self.variable, terms, self.log + other.log, self._joint_order(other), self.descending)

    def __neg__(self) -> 'BlockSeries':
        return self.map(lambda c: -c)

    def __sub__(self, other: 'BlockSeries') -> 'BlockSeries':
        return self + (-other)

    def __mul__(self, factor: Coercible) -> 'BlockSeries':
        factor = coerce(factor)
        return self.map(lambda c: c * factor)

    __rmul__ = __mul__

    def shift(self, exponent: Exponent) -> 'BlockSeries':
        """Multiplication of the power part by var^exponent; only valid without a log term"""
        if not self.log.is_zero:
            raise ValueError('cannot shift a block with a log term')
        exponent = Fraction(exponent)
        order = self.order + exponent if self.order is not None else None
        return BlockSeries(self.variable, {e + exponent: c for e, c in self.terms.items()}, ZERO, order,
                           self.descending)

    # derivatives

    def euler_derivative(self) -> 'BlockSeries':
        """var d/dvar; the log term becomes a constant"""
        terms = {e: c * e for e, c in self.terms.items() if e != 0}
        if not self.log.is_zero:
            terms[Fraction(0)] = self.log
        return BlockSeries(self.variable, terms, ZERO, self.order, self.descending)

    def derivative(self) -> 'BlockSeries':
        return self.euler_derivative().shift(-1)

    @classmethod
    def from_euler_derivative(cls, series: PuiseuxSeries, descending: bool = False) -> 'BlockSeries':
        """W with var dW/dvar = series, up to an additive constant"""
        terms = {e: c / e for e, c in series.terms.items() if e != 0}
        return cls(series.tag, terms, series.terms.get(Fraction(0), ZERO), series.order, descending)

    # output

    def to_dict(self) -> dict[str, object]:
        return {
            'variable': self.variable,
            'log': self.log.to_text(),
            'terms': [{'exp': str(e), 'coeff': c.to_text()} for e, c in self.terms.items()],
            'order': str(self.order) if self.order is not None else None,
            'descending': self.descending,
        }

    def _power(self, e: Fraction, latex: bool = False) -> str:
        v = self.variable
        if e == 0:
            return ''
        if e == 1:
            return f' {v}' if latex else f'*{v}'
        return f' {v}^{{{e}}}' if latex else f'*{v}^({e})'

    def to_latex(self) -> str:
        parts = []
        if not self.log.is_zero:
            parts.append(rf'\left({self.log.to_latex()}\right) \log {self.variable}')
        for e, c in self.terms.items():
            parts.append(rf'\left({c.to_latex()}\right){self._power(e, latex=True)}')
        if self.order is not None:
            parts.append(rf'O({self.variable}^{{{self.order}}})')
        return ' + '.join(parts) or '0'

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BlockSeries):
            return NotImplemented
        return (self.variable == other.variable and self.order == other.order
                and self.descending == other.descending and self.log == other.log
                and self.terms.keys() == other.terms.keys()
                and all(c == other.terms[e] for e, c in self.terms.items()))

    __hash__ = None

    def __str__(self):
        parts = [] if self.log.is_zero else [f'({self.log})*log({self.variable})']
        parts += [f'({c}){self._power(e)}' for e, c in self.terms.items()]
        if self.order is not None:
            parts.append(f'O({self.variable}^({self.order}))')
        return ' + '.join(parts) or '0'

    def __repr__(self):
        direction = 'descending' if self.descending else 'ascending'
        return f'{self.__class__.__name__}({self.variable!r}, {len(self.terms)} terms, {direction}, order={self.order})'


def _square_subs(c: ParamRat, name: str, square: ParamRat) -> ParamRat:
    if name not in c.free_symbols:
        return c
    total = ZERO
    for power, part in c.polynomial_coefficients(name).items():
        if power % 2:
            raise InvariantViolation(f'{name} enters {c} with the odd power {power}')
        total = total + part * square ** (power // 2)
    return total
