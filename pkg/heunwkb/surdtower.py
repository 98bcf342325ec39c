from dataclasses import dataclass
from functools import reduce
from itertools import product
from typing import Iterator, Optional

import mpmath
import sympy
from loguru import logger
from sympy.polys.domains import QQ
from sympy.polys.rings import PolyElement, PolyRing

from .exceptions import BranchError, NonInvertible

__all__ = ['SurdGenerator', 'SurdTower', 'GENERATORS']


@dataclass(frozen=True)
class SurdGenerator:
    """An adjoined root g with g**degree equal to a polynomial in earlier generators"""

    name: str
    degree: int
    power: str
    """sympy text of g**degree"""

    description: str = ''

    def __str__(self):
        return f'{self.name}^{self.degree} = {self.power}'


GENERATORS = (
    SurdGenerator('i', 2, '-1', 'imaginary unit'),
    SurdGenerator('s2', 2, '2', 'square root of 2'),
    SurdGenerator('s3', 2, '3', 'square root of 3'),
    SurdGenerator('c', 3, '2', 'real cube root of 2'),
    SurdGenerator('q', 2, '-1/6', 'sigma*i/sqrt(6), sigma = +1 or -1'),
    SurdGenerator('p', 2, '3*q', 'principal square root of 3q'),
)


class SurdTower:
    """Exact constant field: rationals extended by the generators in `GENERATORS`.

    Elements live in a sympy `PolyRing` that also carries the formal parameters.
    The defining relations have pure-power leading monomials under grevlex, so
    they form a Groebner basis and `normal_form` is a plain multivariate remainder.
    """

    def __init__(self, ring: PolyRing, generators: tuple[SurdGenerator, ...] = GENERATORS) -> None:
        self.ring = ring
        self.generators = generators
        self.names = tuple(g.name for g in generators)
        self._index = {str(s): n for n, s in enumerate(ring.symbols)}
        self.positions = tuple(self._index[name] for name in self.names)
        self.relations = [self._relation(g) for g in generators]
        self._degree = {g.name: g.degree for g in generators}

    def _relation(self, generator: SurdGenerator) -> PolyElement:
        gen = self.ring.gens[self._index[generator.name]]
        power = self.ring.from_expr(sympy.sympify(generator.power, locals=self.locals()))
        return gen ** generator.degree - power

    def locals(self) -> dict[str, sympy.Symbol]:
        return {str(s): s for s in self.ring.symbols}

    def normal_form(self, poly: PolyElement) -> PolyElement:
        if not poly or not self.involves_tower(poly):
            return poly
        return poly.rem(self.relations)

    def involves_tower(self, poly: PolyElement) -> bool:
        return any(monom[k] for monom in poly.itermonoms() for k in self.positions)

    def split(self, poly: PolyElement) -> dict[tuple[int, ...], PolyElement]:
        """Groups a reduced polynomial by tower monomial: {tower exponents: surd-free part}"""
        parts: dict[tuple[int, ...], dict] = {}
        for monom, coeff in poly.iterterms():
            key = tuple(monom[k] for k in self.positions)
            free = list(monom)
            for k in self.positions:
                free[k] = 0
            parts.setdefault(key, {})[tuple(free)] = coeff
        return {key: self.ring.from_dict(terms) for key, terms in parts.items()}

    def monomial(self, exponents: tuple[int, ...]) -> PolyElement:
        monom = [0] * self.ring.ngens
        for k, e in zip(self.positions, exponents):
            monom[k] = e
        return self.ring.from_dict({tuple(monom): QQ.one})

    def _closure(self, names: set[str]) -> list[str]:
        # a generator whose power mentions another one drags it into the basis
        changed = True
        while changed:
            changed = False
            for g in self.generators:
                if g.name in names:
                    for other in self.names:
                        if other != g.name and other not in names and other in g.power:
                            names.add(other)
                            changed = True
        return [name for name in self.names if name in names]

    def basis(self, names: Optional[set[str]] = None) -> list[tuple[int, ...]]:
        """Reduced tower monomials (as exponent tuples) over the given generators"""
        names = self._closure(set(self.names if names is None else names))
        ranges = [range(self._degree[name]) if name in names else range(1) for name in self.names]
        return sorted(product(*ranges), key=lambda e: (sum(e), e))

    def used(self, poly: PolyElement) -> set[str]:
        return {name for name, k in zip(self.names, self.positions)
                if any(monom[k] for monom in poly.itermonoms())}

    def inverse(self, constant: PolyElement) -> PolyElement:
        """Inverse of a nonzero tower constant by solving a rational linear system"""
        if not constant:
            raise NonInvertible('zero has no inverse')
        if constant.is_ground:
            return self.ring.ground_new(QQ.one / constant.LC)
        basis = self.basis(self.used(constant))
        column = {e: n for n, e in enumerate(basis)}
        rows = len(basis)
        matrix = sympy.zeros(rows, rows)
        for j, e in enumerate(basis):
            image = self.normal_form(constant * self.monomial(e))
            for key, part in self.split(image).items():
                if key not in column or not part.is_ground:
                    raise NonInvertible(f'{constant.as_expr()} is not a tower constant')
                matrix[column[key], j] = QQ.to_sympy(part.LC)
        rhs = sympy.zeros(rows, 1)
        rhs[0, 0] = 1
        try:
            solution = matrix.LUsolve(rhs)
        except (ValueError, ZeroDivisionError) as e:
            raise NonInvertible(f'{constant.as_expr()} is a zero divisor in the tower') from e
        result = self.ring.zero
        for value, e in zip(solution, basis):
            if value:
                result += self.monomial(e).mul_ground(QQ.from_sympy(value))
        logger.debug(f'inverse of {constant.as_expr()} is {result.as_expr()}')
        return result

    def _candidates(self) -> Iterator[tuple[int, ...]]:
        yield from self.basis()

    def sqrt(self, constant: PolyElement) -> PolyElement:
        """Square root of a tower constant of the form r * m**2 with r a rational square.

        Returns the root with positive rational factor; callers that care about
        the branch pass an explicit root instead.
        """
        if not constant:
            return constant
        parts = self.split(constant)
        if len(parts) != 1:
            raise BranchError(f'no square root of {constant.as_expr()} in the surd tower')
        (key, part), = parts.items()
        if not part.is_ground:
            raise BranchError(f'{constant.as_expr()} is not a tower constant')
        for exponents in self._candidates():
            m = self.monomial(exponents)
            square = self.normal_form(m * m)
            square_parts = self.split(square)
            if len(square_parts) != 1 or key not in square_parts:
                continue
            ratio = part.LC / square_parts[key].LC
            root = _rational_sqrt(ratio)
            if root is not None:
                return m.mul_ground(root)
        raise BranchError(f'no square root of {constant.as_expr()} in the surd tower')

    def numeric_values(self, sigma: int = 1) -> dict[str, mpmath.mpc]:
        """Complex values of the generators at the current mpmath precision"""
        q = sigma * mpmath.mpc(0, 1) / mpmath.sqrt(6)
        return {
            'i': mpmath.mpc(0, 1),
            's2': mpmath.sqrt(2),
            's3': mpmath.sqrt(3),
            'c': mpmath.cbrt(2),
            'q': q,
            'p': mpmath.sqrt(3 * q),
        }


def _rational_sqrt(value) -> Optional[object]:
    if value < 0:
        return None
    numerator, denominator = QQ.numer(value), QQ.denom(value)
    num_root, num_exact = sympy.integer_nthroot(int(numerator), 2)
    den_root, den_exact = sympy.integer_nthroot(int(denominator), 2)
    if num_exact and den_exact:
        return QQ(num_root, den_root)
    return None


def gcd_all(polys: list[PolyElement]) -> PolyElement:
    return reduce(lambda a, b: a.gcd(b), polys)
