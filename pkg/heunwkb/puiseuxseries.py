from fractions import Fraction
from math import ceil, lcm
from typing import Callable, Iterable, Mapping, Optional, Union

from .exceptions import BranchError, InsufficientDepth, NonInvertibleLeading, TagMismatch
from .paramrat import ONE, ZERO, Coercible, ParamRat, coerce

__all__ = ['PuiseuxSeries']

Exponent = Union[int, Fraction]


def _min_order(*orders: Optional[Fraction]) -> Optional[Fraction]:
    known = [o for o in orders if o is not None]
    return min(known) if known else None


class PuiseuxSeries:
    """Truncated series sum c_e * u**e with rational exponents and `ParamRat` coefficients.

    `order` is the exclusive truncation: every exponent e < order is exact.
    `order=None` marks an exact (finite) series such as a polynomial.
    """

    __slots__ = ('tag', 'terms', 'order')

    def __init__(self, tag: str, terms: Optional[Mapping[Exponent, Coercible]] = None,
                 order: Optional[Exponent] = None) -> None:
        self.tag = tag
        self.order = Fraction(order) if order is not None else None
        cleaned = {}
        for e, c in (terms or {}).items():
            e = Fraction(e)
            if self.order is not None and e >= self.order:
                continue
            c = coerce(c)
            if not c.is_zero:
                cleaned[e] = c
        self.terms = dict(sorted(cleaned.items()))

    # constructors

    @classmethod
    def monomial(cls, tag: str, exponent: Exponent = 0, coeff: Coercible = 1,
                 order: Optional[Exponent] = None) -> 'PuiseuxSeries':
        return cls(tag, {exponent: coeff}, order)

    @classmethod
    def zero(cls, tag: str, order: Optional[Exponent] = None) -> 'PuiseuxSeries':
        return cls(tag, {}, order)

    @classmethod
    def polynomial(cls, tag: str, coeffs: Iterable[Coercible]) -> 'PuiseuxSeries':
        """Exact polynomial from coefficients in increasing degree"""
        return cls(tag, dict(enumerate(coeffs)))

    # queries

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def valuation(self) -> Optional[Fraction]:
        """Lowest exponent present (the order for an empty truncated series)"""
        if self.terms:
            return next(iter(self.terms))
        return self.order

    @property
    def leading(self) -> ParamRat:
        if not self.terms:
            raise NonInvertibleLeading(f'series in {self.tag} has no leading term below order {self.order}')
        return next(iter(self.terms.values()))

    @property
    def ramification(self) -> int:
        r = 1
        for e in self.terms:
            r = lcm(r, e.denominator)
        return r

    def coefficient(self, exponent: Exponent) -> ParamRat:
        exponent = Fraction(exponent)
        if self.order is not None and exponent >= self.order:
            raise InsufficientDepth(f'coefficient of {self.tag}^{exponent} needs order > {exponent}, '
                                    f'have {self.order}', required=exponent)
        return self.terms.get(exponent, ZERO)

    def residue(self) -> ParamRat:
        """Coefficient of u**-1; ramified exponents never contribute"""
        return self.coefficient(-1)

    def truncate(self, order: Exponent) -> 'PuiseuxSeries':
        return PuiseuxSeries(self.tag, self.terms, _min_order(Fraction(order), self.order))

    def map(self, func: Callable[[ParamRat], Coercible]) -> 'PuiseuxSeries':
        return PuiseuxSeries(self.tag, {e: func(c) for e, c in self.terms.items()}, self.order)

    def shift(self, exponent: Exponent) -> 'PuiseuxSeries':
        """Multiplication by u**exponent"""
        exponent = Fraction(exponent)
        order = self.order + exponent if self.order is not None else None
        return PuiseuxSeries(self.tag, {e + exponent: c for e, c in self.terms.items()}, order)

    def subs(self, mapping: Mapping[str, Coercible]) -> 'PuiseuxSeries':
        return self.map(lambda c: c.subs(mapping))

    # arithmetic

    def _check(self, other: 'PuiseuxSeries') -> None:
        if self.tag != other.tag:
            raise TagMismatch(f'cannot combine series in {self.tag} and {other.tag}')

    def _lift(self, other: Union['PuiseuxSeries', Coercible]) -> 'PuiseuxSeries':
        if isinstance(other, PuiseuxSeries):
            self._check(other)
            return other
        return PuiseuxSeries(self.tag, {0: other})

    def __add__(self, other: Union['PuiseuxSeries', Coercible]) -> 'PuiseuxSeries':
        other = self._lift(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms[e] + c if e in terms else c
        return PuiseuxSeries(self.tag, terms, _min_order(self.order, other.order))

    __radd__ = __add__

    def __neg__(self) -> 'PuiseuxSeries':
        return PuiseuxSeries(self.tag, {e: -c for e, c in self.terms.items()}, self.order)

    def __sub__(self, other: Union['PuiseuxSeries', Coercible]) -> 'PuiseuxSeries':
        return self + (-self._lift(other))

    def __rsub__(self, other: Coercible) -> 'PuiseuxSeries':
        return self._lift(other) - self

    def __mul__(self, other: Union['PuiseuxSeries', Coercible]) -> 'PuiseuxSeries':
        if not isinstance(other, PuiseuxSeries):
            c = coerce(other)
            return PuiseuxSeries(self.tag, {e: a * c for e, a in self.terms.items()}, self.order)
        self._check(other)
        order = _min_order(
            self.valuation + other.order if other.order is not None and self.valuation is not None else None,
            other.valuation + self.order if self.order is not None and other.valuation is not None else None,
        )
        terms: dict[Fraction, ParamRat] = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                e = ea + eb
                if order is not None and e >= order:
                    break
                terms[e] = terms[e] + ca * cb if e in terms else ca * cb
        return PuiseuxSeries(self.tag, terms, order)

    __rmul__ = __mul__

    def _unit_part(self) -> tuple[Fraction, ParamRat, 'PuiseuxSeries', int]:
        """Splits into c * u**v * (1 + w); returns (v, c, w, r) with w on the lattice 1/r"""
        if not self.terms:
            raise NonInvertibleLeading(f'series in {self.tag} is zero to order {self.order}')
        v = self.valuation
        c = self.leading
        c_inv = c.inverse()
        w = PuiseuxSeries(self.tag, {e - v: a * c_inv for e, a in self.terms.items() if e != v},
                          self.order - v if self.order is not None else None)
        return v, c, w, max(w.ramification, 1)

    @staticmethod
    def _lattice_series(w: 'PuiseuxSeries', r: int, steps: int,
                        step: Callable[[int, dict[int, ParamRat], dict[int, ParamRat]], ParamRat],
                        first: ParamRat) -> dict[int, ParamRat]:
        wk = {int(e * r): c for e, c in w.terms.items()}
        out = {0: first}
        for k in range(1, steps):
            out[k] = step(k, wk, out)
        return out

    def inverse(self, order: Optional[Exponent] = None) -> 'PuiseuxSeries':
        """1/self; `order` is required when self is exact"""
        v, c, w, r = self._unit_part()
        target = _min_order(Fraction(order) if order is not None else None,
                            self.order - 2 * v if self.order is not None else None)
        if target is None:
            raise InsufficientDepth('inverse of an exact series needs an explicit order')
        steps = max(0, ceil((target + v) * r))

        def step(k, wk, out):
            total = ZERO
            for j, wj in wk.items():
                if j > k:
                    break
                total -= wj * out[k - j]
            return total

        coeffs = self._lattice_series(w, r, steps, step, ONE) if steps else {}
        c_inv = c.inverse()
        return PuiseuxSeries(self.tag, {Fraction(k, r) - v: a * c_inv for k, a in coeffs.items()}, target)

    def __truediv__(self, other: Union['PuiseuxSeries', Coercible]) -> 'PuiseuxSeries':
        if not isinstance(other, PuiseuxSeries):
            return self * coerce(other).inverse()
        return self.divide(other)

    def divide(self, other: 'PuiseuxSeries', order: Optional[Exponent] = None) -> 'PuiseuxSeries':
        self._check(other)
        target = _min_order(Fraction(order) if order is not None else None, self.order)
        if self.is_zero:
            if self.order is None:
                return PuiseuxSeries.zero(self.tag)
            return PuiseuxSeries.zero(self.tag, self.order - other.valuation)
        inv_order = target - self.valuation if target is not None else None
        if inv_order is None and other.order is None:
            raise InsufficientDepth('division of exact series needs an explicit order')
        result = self * other.inverse(inv_order)
        return result.truncate(target) if target is not None else result

    def __pow__(self, n: int) -> 'PuiseuxSeries':
        if n < 0:
            return self.inverse() ** (-n)
        result = PuiseuxSeries(self.tag, {0: ONE})
        for _ in range(n):
            result = result * self
        return result

    def sqrt(self, root: Optional[Coercible] = None, branch: int = 1) -> 'PuiseuxSeries':
        """Square root with leading coefficient `root` (verified) or branch * the field square root"""
        v, c, w, r = self._unit_part()
        if root is not None:
            lead = c.sqrt(coerce(root))
        else:
            lead = c.sqrt()
            if branch < 0:
                lead = -lead
        if self.order is None:
            raise InsufficientDepth('square root of an exact series needs a truncated input')
        rel = self.order - v
        steps = ceil(rel * r)
        half = ONE / 2

        def step(k, wk, out):
            total = wk.get(k, ZERO)
            for j in range(1, k):
                total -= out[j] * out[k - j]
            return total * half

        coeffs = self._lattice_series(w, r, max(steps, 1), step, ONE)
        return PuiseuxSeries(self.tag, {Fraction(k, r) + v / 2: a * lead for k, a in coeffs.items()},
                             v / 2 + rel)

    def log(self, order: Optional[Exponent] = None) -> 'PuiseuxSeries':
        """log(self) for a series 1 + (positive valuation)"""
        if self.terms.get(Fraction(0)) != ONE or self.valuation != 0:
            raise BranchError('log needs constant term 1')
        target = _min_order(Fraction(order) if order is not None else None, self.order)
        if target is None:
            raise InsufficientDepth('log of an exact series needs an explicit order')
        w = (self - ONE).truncate(target)
        result = PuiseuxSeries.zero(self.tag, target)
        if w.is_zero:
            return result
        power = w
        n = 1
        while not power.is_zero and power.valuation < target:
            result = result + power * (ONE / n if n % 2 else -ONE / n)
            power = (power * w).truncate(target)
            n += 1
        return result

    def derive(self) -> 'PuiseuxSeries':
        order = self.order - 1 if self.order is not None else None
        return PuiseuxSeries(self.tag, {e - 1: c * e for e, c in self.terms.items() if e != 0}, order)

    def antiderivative(self) -> 'PuiseuxSeries':
        if Fraction(-1) in self.terms:
            raise ValueError('antiderivative of u^-1 is logarithmic')
        order = self.order + 1 if self.order is not None else None
        return PuiseuxSeries(self.tag, {e + 1: c / (e + 1) for e, c in self.terms.items()}, order)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        return (self.tag == other.tag and self.order == other.order
                and self.terms.keys() == other.terms.keys()
                and all(c == other.terms[e] for e, c in self.terms.items()))

    __hash__ = None

    def __str__(self):
        def power(e):
            if e == 0:
                return ''
            return f'*{self.tag}' if e == 1 else f'*{self.tag}^({e})'
        body = ' + '.join(f'({c}){power(e)}' for e, c in self.terms.items()) or '0'
        return body if self.order is None else f'{body} + O({self.tag}^({self.order}))'

    def __repr__(self):
        return f'{self.__class__.__name__}({self.tag!r}, {len(self.terms)} terms, order={self.order})'
