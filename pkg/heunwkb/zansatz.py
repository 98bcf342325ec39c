from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from loguru import logger

from .blockseries import BlockSeries
from .exceptions import CatalogMiss, InsufficientDepth, PoleOrderViolation
from .paramrat import ONE, ZERO, ParamRat, param
from .puiseuxseries import PuiseuxSeries

__all__ = ['ZAnsatz', 'ANSATZE', 'get_ansatz', 'log_expansion', 'ns_limit']


@dataclass(frozen=True)
class ZAnsatz:
    """Z = Z_cl * Z_inst with Z_inst = 1 + sum_k C_k * (eps1*eps2)^(power*k) * w^k.

    Strong coupling expands in w = 1/s with power -1, weak coupling in
    w = t with power +1. The classical part is given through eps1*eps2*log(Z_cl)
    = classical_log * log(var) + sum_e classical_exp[e] * var^e.
    """

    name: str
    variable: str
    descending: bool
    classical_log: str
    classical_exp: dict[int, str]
    instanton: tuple[str, ...]
    eps_map: tuple[str, str]
    """(eps1, eps2) at the NS limit"""

    parameters: dict[str, str] = field(default_factory=dict)
    description: str = ''

    @property
    def power(self) -> int:
        return -1 if self.descending else 1

    @cached_property
    def coefficients(self) -> tuple[ParamRat, ...]:
        return tuple(ParamRat.parse(text) for text in self.instanton)

    @property
    def depth(self) -> int:
        return len(self.instanton)

    def eps_substitution(self) -> dict[str, str]:
        return {'eps1': self.eps_map[0], 'eps2': self.eps_map[1]}


def _strong_classical(xi1: str, xi2: str, beta: str, delta: str) -> tuple[str, dict[int, str]]:
    return f'{xi2} + a^2/2', {2: beta, 1: f'{xi1} + ({delta})*a'}


_XI2 = '9*(eps1 + eps2)^2/8 + eps1*eps2/4'
_PIII3_LOG, _PIII3_EXP = _strong_classical('0', _XI2, '1/256', '1/4')

_Q3 = 'a*(4*a^2 + 3*eps1^2 + 8*eps1*eps2 + 3*eps2^2)/4'
_Q6 = ('-(-16*a^6 + (-24*eps1^2 + 16*eps1*eps2 - 24*eps2^2)*a^4'
       ' + (-9*eps1^4 + 88*eps1^3*eps2 + 238*eps1^2*eps2^2 + 88*eps1*eps2^3 - 9*eps2^4)*a^2'
       ' + (9*eps1^5*eps2 + 48*eps1^4*eps2^2 + 78*eps1^3*eps2^3 + 48*eps1^2*eps2^4 + 9*eps1*eps2^5))/32')
_Q9 = ('a*(64*a^8 + (144*eps1^2 - 576*eps1*eps2 + 144*eps2^2)*a^6'
       ' + (108*eps1^4 - 1776*eps1^3*eps2 - 552*eps1^2*eps2^2 - 1776*eps1*eps2^3 + 108*eps2^4)*a^4'
       ' + (27*eps1^6 - 1116*eps1^5*eps2 + 7057*eps1^4*eps2^2 + 18552*eps1^3*eps2^3 + 7057*eps1^2*eps2^4'
       ' - 1116*eps1*eps2^5 + 27*eps2^6)*a^2'
       ' + (-81*eps1^7*eps2 + 2592*eps1^6*eps2^2 + 13425*eps1^5*eps2^3 + 21312*eps1^4*eps2^4'
       ' + 13425*eps1^3*eps2^5 + 2592*eps1^2*eps2^6 - 81*eps1*eps2^7))/384')
_Q12 = ('(256*a^12 + (768*eps1^2 - 5632*eps1*eps2 + 768*eps2^2)*a^10'
        ' + (864*eps1^4 - 19968*eps1^3*eps2 + 33216*eps1^2*eps2^2 - 19968*eps1*eps2^3 + 864*eps2^4)*a^8'
        ' + (432*eps1^6 - 21312*eps1^5*eps2 + 210448*eps1^4*eps2^2 + 166656*eps1^3*eps2^3'
        ' + 210448*eps1^2*eps2^4 - 21312*eps1*eps2^5 + 432*eps2^6)*a^6'
        ' + (81*eps1^8 - 7776*eps1^7*eps2 + 206052*eps1^6*eps2^2 - 830176*eps1^5*eps2^3'
        ' - 2213466*eps1^4*eps2^4 - 830176*eps1^3*eps2^5 + 206052*eps1^2*eps2^6 - 7776*eps1*eps2^7'
        ' + 81*eps2^8)*a^4'
        ' + (-486*eps1^9*eps2 + 41040*eps1^8*eps2^2 - 808128*eps1^7*eps2^3 - 3941328*eps1^6*eps2^4'
        ' - 6105012*eps1^5*eps2^5 - 3941328*eps1^4*eps2^6 - 808128*eps1^3*eps2^7 + 41040*eps1^2*eps2^8'
        ' - 486*eps1*eps2^9)*a^2'
        ' + (243*eps1^10*eps2^2 - 44064*eps1^9*eps2^3 - 313740*eps1^8*eps2^4 - 831456*eps1^7*eps2^5'
        ' - 1124046*eps1^6*eps2^6 - 831456*eps1^5*eps2^7 - 313740*eps1^4*eps2^8 - 44064*eps1^3*eps2^9'
        ' + 243*eps1^2*eps2^10))/6144')
_Q15 = ('a*(1024*a^14 + (3840*eps1^2 - 40960*eps1*eps2 + 3840*eps2^2)*a^12'
        ' + (5760*eps1^4 - 171520*eps1^3*eps2 + 600320*eps1^2*eps2^2 - 171520*eps1*eps2^3'
        ' + 5760*eps2^4)*a^10'
        ' + (4320*eps1^6 - 253440*eps1^5*eps2 + 3337120*eps1^4*eps2^2 - 2296320*eps1^3*eps2^3'
        ' + 3337120*eps1^2*eps2^4 - 253440*eps1*eps2^5 + 4320*eps2^6)*a^8'
        ' + (1620*eps1^8 - 164160*eps1^7*eps2 + 4892880*eps1^6*eps2^2 - 34381120*eps1^5*eps2^3'
        ' - 36999432*eps1^4*eps2^4 - 34381120*eps1^3*eps2^5 + 4892880*eps1^2*eps2^6 - 164160*eps1*eps2^7'
        ' + 1620*eps2^8)*a^6'
        ' + (243*eps1^10 - 43200*eps1^9*eps2 + 2537055*eps1^8*eps2^2 - 52037920*eps1^7*eps2^3'
        ' + 113231582*eps1^6*eps2^4 + 333908800*eps1^5*eps2^5 + 113231582*eps1^4*eps2^6'
        ' - 52037920*eps1^3*eps2^7 + 2537055*eps1^2*eps2^8 - 43200*eps1*eps2^9 + 243*eps2^10)*a^4'
        ' + (-2430*eps1^11*eps2 + 374220*eps1^10*eps2^2 - 19525950*eps1^9*eps2^3'
        ' + 275671824*eps1^8*eps2^4 + 1287899580*eps1^7*eps2^5 + 1960171080*eps1^6*eps2^6'
        ' + 1287899580*eps1^5*eps2^7 + 275671824*eps1^4*eps2^8 - 19525950*eps1^3*eps2^9'
        ' + 374220*eps1^2*eps2^10 - 2430*eps1*eps2^11)*a^2'
        ' + (3645*eps1^12*eps2^2 - 942840*eps1^11*eps2^3 + 54505737*eps1^10*eps2^4'
        ' + 363517920*eps1^9*eps2^5 + 918147258*eps1^8*eps2^6 + 1221269040*eps1^7*eps2^7'
        ' + 918147258*eps1^6*eps2^8 + 363517920*eps1^5*eps2^9 + 54505737*eps1^4*eps2^10'
        ' - 942840*eps1^3*eps2^11 + 3645*eps1^2*eps2^12))/122880')

_P1 = '-2/(eps1^2*eps2^2*(4*a^2 - (eps1 + eps2)^2))'
_P2 = ('-(8*(eps1 + eps2)^2 + eps1*eps2 - 8*a^2)/(eps1^4*eps2^4*(4*a^2 - (eps1 + eps2)^2)'
       '*(4*a^2 - (2*eps1 + eps2)^2)*(4*a^2 - (eps1 + 2*eps2)^2))')

ANSATZE: dict[str, ZAnsatz] = {z.name: z for z in (
    ZAnsatz('PIII3.strong', 's', True, _PIII3_LOG, _PIII3_EXP, (_Q3, _Q6, _Q9, _Q12, _Q15), ('i*hbar', '0'),
            {'xi1': '0', 'xi2': _XI2, 'beta': '1/256', 'delta': '1/4'},
            'pure SU(2) at strong coupling, s = -32*i*t^(1/4)'),
    ZAnsatz('PIII3.weak', 't', False, '(eps1 + eps2)^2/4 - a^2', {}, (_P1, _P2), ('hbar', '0'),
            description='pure SU(2) Nekrasov expansion at weak coupling'),
)}


def get_ansatz(name: str) -> ZAnsatz:
    try:
        return ANSATZE[name]
    except KeyError:
        raise CatalogMiss(f'unknown ansatz {name!r}; known: {", ".join(ANSATZE)}')


def _check_pole_order(k: int, coeff: ParamRat) -> None:
    """coeff must stay finite at eps1 = eps2 = 0"""
    for factor in coeff.den:
        if ParamRat(factor).subs({'eps1': 0, 'eps2': 0}).is_zero:
            raise PoleOrderViolation(f'order {k}: denominator factor {factor.as_expr()} vanishes at eps = 0')


def log_expansion(z: ZAnsatz, order: int) -> BlockSeries:
    """-eps1*eps2*log(Z) through w^order, before the NS substitution"""
    if order > z.depth:
        raise InsufficientDepth(f'{z.name} lists {z.depth} instanton coefficients, {order} requested',
                                required=order)
    eps = param('eps1') * param('eps2')
    terms = {0: ONE}
    for k, coeff in enumerate(z.coefficients[:order], start=1):
        terms[k] = coeff * eps ** (z.power * k)
    instanton = PuiseuxSeries('w', terms, order + 1).log()
    logger.debug(f'{z.name}: log Z_inst = {instanton!r}')
    sign = -1 if z.descending else 1
    out: dict[Fraction, ParamRat] = {}
    for k in range(1, order + 1):
        value = -eps * instanton.coefficient(k)
        _check_pole_order(k, value)
        out[Fraction(sign * k)] = value
    for e, text in z.classical_exp.items():
        out[Fraction(e)] = out.get(Fraction(e), ZERO) - ParamRat.parse(text)
    return BlockSeries(z.variable, out, -ParamRat.parse(z.classical_log), sign * (order + 1), z.descending)


def ns_limit(z: ZAnsatz, order: int) -> BlockSeries:
    """W = -eps1*eps2*log(Z) at the ansatz's (eps1, eps2) map"""
    return log_expansion(z, order).subs(z.eps_substitution())
