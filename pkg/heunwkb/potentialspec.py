from dataclasses import dataclass
from functools import cached_property

import sympy

from .exceptions import CatalogMiss

__all__ = ['PotentialSpec', 'SingularPoint', 'POTENTIALS', 'get_potential', 'x', 't', 'E', 'hbar']

x, t, E, hbar = sympy.symbols('x t E hbar')
_LOCALS = {name: sympy.Symbol(name) for name in ('x', 't', 'E', 'hbar', 'th0', 'th1', 'tht', 'thi')}


@dataclass(frozen=True)
class SingularPoint:
    location: str
    """'0', '1', 't' or 'oo'"""

    pole_order: int
    """Pole order of Q(x) dx^2; even orders are unramified"""

    @property
    def unramified(self) -> bool:
        return self.pole_order % 2 == 0


@dataclass(frozen=True)
class PotentialSpec:
    """Schroedinger potential Q_J of a Heun equation hbar^2 psi'' = Q_J psi"""

    equation: str
    name: str
    terms: tuple[tuple[str, str], ...]
    """(coefficient, monomial) pairs in x, t, E, hbar and the thetas"""

    singular_points: tuple[SingularPoint, ...]

    @cached_property
    def expression(self) -> sympy.Expr:
        return sympy.Add(*(self._term(n) for n in range(len(self.terms))))

    def _term(self, n: int) -> sympy.Expr:
        coeff, monomial = self.terms[n]
        return sympy.sympify(coeff, locals=_LOCALS) * sympy.sympify(monomial, locals=_LOCALS)

    def term_expressions(self) -> list[sympy.Expr]:
        return [self._term(n) for n in range(len(self.terms))]

    @property
    def accessory_term(self) -> int:
        """Index of the single term carrying E"""
        carriers = [n for n, term in enumerate(self.term_expressions()) if term.has(E)]
        if len(carriers) != 1:
            raise ValueError(f'E must appear in exactly one term of Q_{self.equation}')
        term = self.term_expressions()[carriers[0]]
        if sympy.degree(sympy.expand(term * sympy.denom(sympy.together(term))), E) != 1:
            raise ValueError(f'E must enter Q_{self.equation} linearly')
        return carriers[0]

    def at_unit_hbar(self) -> sympy.Expr:
        """The original potential V_J"""
        return self.expression.subs(hbar, 1)

    def render(self) -> str:
        return ' + '.join(sympy.sstr(term) for term in self.term_expressions())

    def __str__(self):
        return f'Q_{self.equation} = {self.render()}'


POTENTIALS: dict[str, PotentialSpec] = {p.equation: p for p in (
    PotentialSpec('VI', 'Heun', (
        ('th0**2 - hbar**2/4', '1/x**2'),
        ('th1**2 - hbar**2/4', '1/(x - 1)**2'),
        ('tht**2 - hbar**2/4', '1/(x - t)**2'),
        ('thi**2 - th0**2 - th1**2 - tht**2 + hbar**2/2', '1/(x*(x - 1))'),
        ('-E', '1/(x*(x - 1)*(x - t))'),
    ), (SingularPoint('0', 2), SingularPoint('1', 2), SingularPoint('t', 2), SingularPoint('oo', 2))),
    PotentialSpec('V', 'confluent Heun', (
        ('th0**2 - hbar**2/4', '1/x**2'),
        ('tht**2 - hbar**2/4', '1/(x - t)**2'),
        ('1/4', '1'),
        ('thi', '1/x'),
        ('-E', '1/(x*(x - t))'),
    ), (SingularPoint('0', 2), SingularPoint('t', 2), SingularPoint('oo', 4))),
    # the E sign follows the biconfluent section, not the summary table
    PotentialSpec('IV', 'biconfluent Heun', (
        ('th0**2 - hbar**2/4', '1/x**2'),
        ('-E', '1/x'),
        ('2*thi', '1'),
        ('1', '(x + t)**2'),
    ), (SingularPoint('0', 2), SingularPoint('oo', 6))),
    PotentialSpec('III1', 'doubly confluent Heun', (
        ('t**2/4', '1/x**4'),
        ('t*th0', '1/x**3'),
        ('-E', '1/x**2'),
        ('thi', '1/x'),
        ('1/4', '1'),
    ), (SingularPoint('0', 4), SingularPoint('oo', 4))),
    PotentialSpec('III2', 'reduced doubly confluent Heun', (
        ('t', '1/x**3'),
        ('-E', '1/x**2'),
        ('thi', '1/x'),
        ('1/4', '1'),
    ), (SingularPoint('0', 3), SingularPoint('oo', 4))),
    PotentialSpec('III3', 'doubly reduced doubly confluent Heun', (
        ('t', '1/x**3'),
        ('-E', '1/x**2'),
        ('1', '1/x'),
    ), (SingularPoint('0', 3), SingularPoint('oo', 3))),
    PotentialSpec('II', 'triconfluent Heun', (
        ('1', '(x**2 + t)**2'),
        ('2*thi', 'x'),
        ('E', '1'),
    ), (SingularPoint('oo', 8),)),
    PotentialSpec('IIp', 'reduced biconfluent Heun', (
        ('th0**2 - hbar**2/4', '1/x**2'),
        ('E', '1/x'),
        ('t', '1'),
        ('1', 'x'),
    ), (SingularPoint('0', 2), SingularPoint('oo', 5))),
    PotentialSpec('I', 'reduced triconfluent Heun', (
        ('4', 'x**3'),
        ('2*t', 'x'),
        ('E', '1'),
    ), (SingularPoint('oo', 7),)),
)}


def get_potential(equation: str) -> PotentialSpec:
    try:
        return POTENTIALS[equation]
    except KeyError:
        raise CatalogMiss(f'unknown equation {equation!r}; known: {", ".join(POTENTIALS)}')
