from dataclasses import dataclass, field
from fractions import Fraction

import sympy
from loguru import logger

from .exceptions import CatalogMiss, ScalingMismatch
from .potentialspec import get_potential

__all__ = ['ScalingSpec', 'SCALINGS', 'verify_scaling']

_h = sympy.Symbol('hbar', positive=True)
_THETAS = ('th0', 'th1', 'tht', 'thi')


@dataclass(frozen=True)
class ScalingSpec:
    """Powers of hbar applied to x, t, E and the thetas of the unit-hbar potential"""

    equation: str
    x: Fraction
    t: Fraction
    E: Fraction
    thetas: dict[str, Fraction] = field(default_factory=dict)

    def substitution(self) -> dict[sympy.Symbol, sympy.Expr]:
        exps = {'x': self.x, 't': self.t, 'E': self.E, **self.thetas}
        return {sympy.Symbol(name): sympy.Symbol(name) * _h ** sympy.Rational(e.numerator, e.denominator)
                for name, e in exps.items()}


def _spec(equation: str, x: str, t: str, E: str, theta: str = '0', thetas: tuple[str, ...] = ()) -> ScalingSpec:
    return ScalingSpec(equation, Fraction(x), Fraction(t), Fraction(E), {th: Fraction(theta) for th in thetas})


SCALINGS: dict[str, ScalingSpec] = {s.equation: s for s in (
    _spec('VI', '0', '0', '-2', '-1', _THETAS),
    _spec('V', '-1', '-1', '-2', '-1', ('th0', 'tht', 'thi')),
    _spec('IV', '-1/2', '-1/2', '-3/2', '-1', ('th0', 'thi')),
    _spec('III1', '-1', '-2', '-2', '-1', ('th0', 'thi')),
    _spec('III2', '-1', '-3', '-2', '-1', ('thi',)),
    _spec('III3', '-2', '-4', '-2'),
    _spec('II', '-1/3', '-2/3', '-4/3', '-1', ('thi',)),
    _spec('IIp', '-2/3', '-2/3', '-4/3', '-1', ('th0',)),
    _spec('I', '-2/5', '-4/5', '-6/5'),
)}


def verify_scaling(equation: str) -> bool:
    """Checks term by term that V_J(scaled) dx^2 = hbar^-2 Q_J(x) dx^2"""
    try:
        scaling = SCALINGS[equation]
    except KeyError:
        raise CatalogMiss(f'no scaling for equation {equation!r}')
    potential = get_potential(equation)
    substitution = scaling.substitution()
    jacobian = _h ** (2 * sympy.Rational(scaling.x.numerator, scaling.x.denominator))
    for term in potential.term_expressions():
        target = term.subs(sympy.Symbol('hbar'), _h) / _h ** 2
        scaled = term.subs(sympy.Symbol('hbar'), 1).subs(substitution, simultaneous=True) * jacobian
        if sympy.simplify(scaled - target) != 0:
            raise ScalingMismatch(f'Q_{equation}: term {term} scales to {sympy.simplify(scaled)}, expected {target}')
        logger.debug(f'Q_{equation}: {term} ok')
    return True
