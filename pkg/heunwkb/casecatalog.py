import json
from fractions import Fraction
from typing import Optional

from loguru import logger

from . import constants
from .exceptions import CatalogMiss
from .expansioncase import CaseVariant, Cycle, CycleKind, CyclePoint, ExpansionCase, Operator, Relation

__all__ = ['CASES', 'CASE_IDS', 'get_case', 'export_registry']

_V_SHIFT = {Fraction(0): 'th0^2 + tht^2 - hbar^2/2'}


def _delta(name: str) -> str:
    return f'-{name}^2 + hbar^2/4'


def _pole() -> Cycle:
    return Cycle(CycleKind.POLE_RESIDUE, (CyclePoint('0', 'nu'),))


def _double_zero(location: str, lead_root: str) -> Cycle:
    return Cycle(CycleKind.DOUBLE_ZERO, (CyclePoint(location, lead_root),))


def _at_infinity(lead_root: str) -> Cycle:
    return Cycle(CycleKind.AT_INFINITY, (CyclePoint(None, lead_root),))


def _two_point(plus: tuple[str, str], minus: tuple[str, str]) -> Cycle:
    return Cycle(CycleKind.TWO_POINT, (CyclePoint(*plus, sign=1), CyclePoint(*minus, sign=-1)))


def _case(case_id: str, equation: str, d: tuple[str, str, str], rho: str, cycle: Cycle,
          forced_g: Optional[str], relations: tuple[Relation, ...], verified_through: str,
          **kwargs) -> ExpansionCase:
    d_x, d_y, d_E = (Fraction(v) for v in d)
    return ExpansionCase(case_id, equation, d_x, d_y, d_E, Fraction(rho), cycle, forced_g, relations,
                         Fraction(verified_through), **kwargs)


_VI_IDENTIFICATION = {'dsig': _delta('nu'), 'd0': _delta('th0'), 'd1': _delta('th1'), 'dt': _delta('tht'),
                      'dinf': _delta('thi')}
_V_T0_IDENTIFICATION = {'dsig': _delta('nu'), 'd0': _delta('th0'), 'dt': _delta('tht')}
_W2 = '2*th0^2 + 2*tht^2 + thi^2'
_W4 = '(th0^2 - tht^2)^2 + 2*thi^2*(th0^2 + tht^2)'
_IV_MASSES = {'m3': '(2*thi + 3*hbar)/12', 'e2': '-(3*th0^2 + thi^2)/12', 'e3': '(9*th0^2*thi - thi^3)/108'}


CASES: dict[str, ExpansionCase] = {c.case_id: c for c in (
    _case('VI.t0', 'VI', ('0', '0', '0'), '1', _pole(), None, (
        Relation('VI', Operator.T_T_MINUS_ONE_DDT, identification=_VI_IDENTIFICATION),
    ), '2', notes='t-coefficient of the block enters with a plus sign'),
    _case('V.t0', 'V', ('0', '0', '0'), '1', _pole(), None, (
        Relation('V.t0', Operator.T_DDT, identification=_V_T0_IDENTIFICATION),
    ), '2'),
    _case('V.tinf1', 'V', ('0', '0', '1'), '-1', _at_infinity('1/2'), None, (
        Relation('V.tinf1', Operator.T_DDT, sign=-1, shift=_V_SHIFT, s_prefactor='-1', identification={
            'a': 'nu - thi/2', 'e1': '-thi - hbar', 'e3': 'thi*(th0^2 - tht^2)', 'w2': _W2, 'w4': _W4}),
        Relation('V.tinf1.dual', Operator.T_DDT, identification={'d0': _delta('th0'), 'dt': _delta('tht')}),
    ), '-2', notes='w4 carries thi^2'),
    _case('V.tinf2', 'V', ('1', '1', '2'), '-1', _double_zero('1/2', '-i'), '-1/16', (
        Relation('V.tinf2', Operator.T_DDT, sign=-1, shift=_V_SHIFT, identification={
            'a': 'nu', 'e1': 'thi - hbar', 'e3': '-thi*(th0^2 - tht^2)', 'w2': _W2,
            'w4': f'{_W4} - 3*({_W2})*hbar^2/8 + 105*hbar^4/1024'}),
    ), '-1', tower=('i',), notes='relation holds with -t d/dt; w4 carries thi^2'),
    _case('IV.tinf1', 'IV', ('-1', '0', '1'), '-2', _at_infinity('-1'), None, (
        Relation('IV.tinf1', Operator.DDT, sign=-1, s_prefactor='2', s_exponent=Fraction(2),
                 identification={'a': '-nu - thi/3', **_IV_MASSES}),
        Relation('IV.tinf1.dual', Operator.DDT, identification={'d0': _delta('th0')}),
    ), '-5', notes='potential carries -E/x'),
    _case('IV.tinf2', 'IV', ('1', '2', '3'), '-2', _double_zero('-1/3', 'i*s3'), '-4/27', (
        Relation('IV.tinf2', Operator.DDT, sign=-1, s_prefactor='2', s_exponent=Fraction(2),
                 identification={'a': '-nu', **_IV_MASSES}),
    ), '-3', tower=('i', 's3')),
    _case('III1.t0', 'III1', ('0', '0', '0'), '1', _pole(), None, (
        Relation('III1.t0', Operator.T_DDT, identification={'dsig': _delta('nu')}),
    ), '2'),
    _case('III1.tinf', 'III1', ('1/2', '1/2', '1'), '-1/2', _two_point(('i', '-i'), ('-i', 'i')), '-1/2', (
        Relation('III1.tinf', Operator.T_DDT, sign=-1, shift={Fraction(1): '1/2'}, s_prefactor='8*i',
                 s_exponent=Fraction(1, 2),
                 identification={'a': 'nu/2', 'e2': 'th0*thi', 'w2': 'th0^2 + thi^2'}),
    ), '-1', tower=('i',), variants=(
        CaseVariant('real-points', '1/2', _two_point(('1', '1'), ('-1', '-1')),
                    'turning points at X = 1 and X = -1; G_k^[l] -> -i^l G_k^[l] with th0 -> -th0'),
    )),
    _case('III2.t0', 'III2', ('0', '0', '0'), '1', _pole(), None, (
        Relation('III2.t0', Operator.T_DDT, identification={'dsig': _delta('nu')}),
    ), '2', notes='rational t-coefficient is -2*thi/(4*nu^2 - hbar^2)'),
    _case('III2.tinf', 'III2', ('1/3', '1/3', '2/3'), '-1/3', _double_zero('c', 's3*c^2/4'), '3*c^2/4', (
        Relation('III2.tinf', Operator.T_DDT, sign=-1, s_prefactor='3*c', s_exponent=Fraction(1, 3),
                 identification={'a': 'nu', 'm1': 'thi'}),
    ), '-1/3', tower=('c', 's3')),
    _case('III3.t0', 'III3', ('0', '0', '0'), '1', _pole(), None, (
        Relation('III3.t0', Operator.T_DDT, sign=-1, identification={'a': 'nu'}),
        Relation('III3.t0.dual', Operator.T_DDT, identification={'dsig': _delta('nu')}),
    ), '2'),
    _case('III3.tinf', 'III3', ('1/2', '1/4', '1/2'), '-1/4', _double_zero('1', '1'), '2', (
        Relation('III3.tinf', Operator.T_DDT, s_prefactor='-32*i', s_exponent=Fraction(1, 4),
                 identification={'a': 'i*nu'}),
    ), '-5/4', tower=('i',), variants=(
        CaseVariant('negative-root', '-2', _double_zero('-1', 'i'),
                    'double zero at X = -1; G_k^[l] -> -(-i)^l G_k^[l]', relations=(
                        Relation('III3.tinf', Operator.T_DDT, s_prefactor='32', s_exponent=Fraction(1, 4),
                                 identification={'a': 'i*nu'}),
                    )),
    ), notes='t^(-1/2) coefficient ends in 9*hbar^4'),
    _case('II.tinf1', 'II', ('1/2', '3/2', '1/2'), '-3/2', _two_point(('i', '2*i'), ('-i', '-2*i')), '0', (
        Relation('II.1', Operator.DDT, s_prefactor='8*i', s_exponent=Fraction(3, 2),
                 identification={'a': 'nu/2', 'm': 'thi/4'}),
    ), '-4', tower=('i',), notes='accessory parameter enters one Lambda level late'),
    _case('II.tinf2', 'II', ('1/2', '3/2', '2'), '-3/2', _double_zero('0', 's2'), '-1', (
        Relation('II.2', Operator.DDT, s_prefactor='8*i', s_exponent=Fraction(3, 2),
                 identification={'a': 'nu', 'm^2': 'thi^2/16 - 3*hbar^2/128'}),
    ), '-4', tower=('i', 's2')),
    _case('IIp.tinf1', 'IIp', ('-1/2', '0', '1/2'), '-3/2', _at_infinity('-1'), None, (
        Relation('II.1', Operator.DDT, s_prefactor='4', s_exponent=Fraction(3, 2),
                 identification={'a': '-nu', 'm': 'th0/2'}),
    ), '-4'),
    _case('IIp.tinf2', 'IIp', ('1', '3/2', '2'), '-3/2', _double_zero('-1/2', 'i*s2'), '1/4', (
        Relation('II.2', Operator.DDT, s_prefactor='4', s_exponent=Fraction(3, 2),
                 identification={'a': 'nu', 'm^2': 'th0^2/4 - 3*hbar^2/128'}),
    ), '-4', tower=('i', 's2'), notes='th0^2 enters the rescaled potential at Lambda^2'),
    _case('I.tinf', 'I', ('1/2', '5/4', '3/2'), '-5/4', _double_zero('q', '2*p'), '-4*q/3', (
        Relation('I', Operator.DDT, s_prefactor='96*s2*p', s_exponent=Fraction(5, 4),
                 identification={'a': 's2*nu'}),
    ), '-7/2', tower=('q', 'p', 's2'), variants=(
        CaseVariant('sigma-minus', '4*q/3', _double_zero('-q', '2*i*p'),
                    'conjugate branch: double zero at X = -q; G_k^[l] -> G_k^[l] with q -> -q, p -> i*p', relations=(
                        Relation('I', Operator.DDT, s_prefactor='96*s2*i*p', s_exponent=Fraction(5, 4),
                                 identification={'a': 's2*nu'}),
                    ), tower=('i', 'q', 'p', 's2')),
    )),
)}

CASE_IDS = tuple(CASES)


def get_case(case_id: str, variant: Optional[str] = None) -> ExpansionCase:
    try:
        case = CASES[case_id]
    except KeyError:
        raise CatalogMiss(f'unknown case {case_id!r}; known: {", ".join(CASE_IDS)}')
    return case.with_variant(variant)


def export_registry() -> str:
    """Case registry as JSON (stable key order)"""
    logger.debug(f'exporting {len(CASES)} cases')
    payload = {'schema': constants.SCHEMA_VERSION, 'cases': [case.to_dict() for case in CASES.values()]}
    return json.dumps(payload, indent=2, ensure_ascii=False)
