from dataclasses import dataclass, field

import sympy
from loguru import logger

from .exceptions import CatalogMiss, InvariantViolation
from .potentialspec import get_potential, x

__all__ = ['PotentialSymmetry', 'SYMMETRIES', 'check_symmetry', 'check_symmetries']


@dataclass(frozen=True)
class PotentialSymmetry:
    """Moebius change of variables preserving the form of Q_J.

    Old quantities are written in the new ones: x = x_map(x), t = t_map(t),
    E = E_map(E, t) and theta -> thetas[theta]. Moebius maps have zero
    Schwarzian, so Q transforms as a quadratic differential.
    """

    name: str
    equation: str
    x_map: str
    t_map: str
    E_map: str
    thetas: dict[str, str] = field(default_factory=dict)
    description: str = ''

    def substitution(self) -> dict[sympy.Symbol, sympy.Expr]:
        names = {'x': self.x_map, 't': self.t_map, 'E': self.E_map, **self.thetas}
        return {sympy.Symbol(name): sympy.sympify(value, locals=_LOCALS) for name, value in names.items()}


_LOCALS = {name: sympy.Symbol(name) for name in ('x', 't', 'E', 'hbar', 'th0', 'th1', 'tht', 'thi')}

SYMMETRIES: dict[str, PotentialSymmetry] = {s.name: s for s in (
    PotentialSymmetry('VI.reflection', 'VI', '1 - x', '1 - t', '-E', {'th0': 'th1', 'th1': 'th0'},
                      'x -> 1 - x, t -> 1 - t, E -> -E, th0 <-> th1'),
    PotentialSymmetry('VI.inversion', 'VI', '1/x', '1/t', '(E + 2*(tht**2 - hbar**2/4)*(1 - t))/t',
                      {'th0': 'thi', 'thi': 'th0'},
                      'x -> 1/x, t -> 1/t, E -> E/t - 2*(tht^2 - hbar^2/4)*(t - 1)/t, th0 <-> thi'),
)}


def check_symmetry(name: str) -> bool:
    try:
        symmetry = SYMMETRIES[name]
    except KeyError:
        raise CatalogMiss(f'unknown symmetry {name!r}; known: {", ".join(SYMMETRIES)}')
    q = get_potential(symmetry.equation).expression
    x_map = sympy.sympify(symmetry.x_map, locals=_LOCALS)
    pulled = q.subs(symmetry.substitution(), simultaneous=True) * sympy.diff(x_map, x) ** 2
    difference = sympy.cancel(sympy.together(pulled - q))
    if difference != 0:
        raise InvariantViolation(f'{name}: Q_{symmetry.equation} is not invariant, residual {difference}')
    logger.debug(f'{name}: {symmetry.description} preserves Q_{symmetry.equation}')
    return True


def check_symmetries(equation: str = 'VI') -> list[str]:
    names = [name for name, s in SYMMETRIES.items() if s.equation == equation]
    for name in names:
        check_symmetry(name)
    return names

