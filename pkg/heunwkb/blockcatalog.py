from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Optional

from loguru import logger

from .blockseries import BlockSeries
from .casecatalog import get_case
from .exceptions import CatalogMiss, InsufficientDepth, InvariantViolation
from .expansioncase import ExpansionCase, Operator, Relation
from .paramrat import ParamRat
from .zansatz import get_ansatz, log_expansion, ns_limit

__all__ = ['PrintedSeries', 'BlockEntry', 'BLOCKS', 'BLOCK_IDS', 'DUAL_PAIRS', 'DUAL_CASES', 'get_block',
           'block_catalog', 'predicted_E', 'check_dual', 'check_dual_relations', 'check_duals']


@dataclass(frozen=True)
class PrintedSeries:
    """log * log(var) + sum terms[e] * var^e as coefficient texts"""

    log: str
    terms: dict[Fraction, str]

    def build(self, variable: str, order: Fraction, descending: bool) -> BlockSeries:
        terms = {e: ParamRat.parse(text) for e, text in self.terms.items()}
        return BlockSeries(variable, terms, ParamRat.parse(self.log), order, descending)


def _printed(log: str, **terms: str) -> PrintedSeries:
    """Keyword names encode exponents: p2 -> 2, m1 -> -1, p0 -> 0"""
    out = {}
    for key, text in terms.items():
        sign = -1 if key[0] == 'm' else 1
        out[Fraction(sign * int(key[1:]))] = text
    return PrintedSeries(log, out)


@dataclass(frozen=True)
class BlockEntry:
    block_id: str
    variable: str
    descending: bool
    order: Fraction
    """First exponent not covered by the data"""

    printed: Optional[PrintedSeries]
    """Classical block as displayed, already in the NS limit"""

    quantum: Optional[PrintedSeries] = None
    """-eps1*eps2*log(Z) with eps1, eps2 kept"""

    eps_map: tuple[str, str] = ('hbar', '0')
    ansatz: Optional[tuple[str, int]] = None
    """(ZAnsatz name, instanton depth) when the block is rebuilt from Z"""

    source: str = ''
    notes: tuple[str, ...] = field(default_factory=tuple)

    @cached_property
    def series(self) -> BlockSeries:
        """Classical block W used by the comparator"""
        if self.ansatz is not None:
            name, depth = self.ansatz
            return ns_limit(get_ansatz(name), depth)
        if self.quantum is not None:
            return self.quantum_series().subs({'eps1': self.eps_map[0], 'eps2': self.eps_map[1]})
        return self.printed_series()

    def quantum_series(self) -> Optional[BlockSeries]:
        if self.ansatz is not None:
            name, depth = self.ansatz
            return log_expansion(get_ansatz(name), depth)
        if self.quantum is None:
            return None
        return self.quantum.build(self.variable, self.order, self.descending)

    def printed_series(self) -> Optional[BlockSeries]:
        if self.printed is None:
            return None
        return self.printed.build(self.variable, self.order, self.descending)

    def check_printed(self, through: Optional[Fraction] = None) -> list[Fraction]:
        """Compares the derived W with the displayed one, returns the exponents checked"""
        printed = self.printed_series()
        if printed is None or (self.ansatz is None and self.quantum is None):
            return []
        derived = self.series
        exponents = sorted(set(printed.terms) | set(derived.terms), reverse=self.descending)
        if through is not None:
            exponents = [e for e in exponents if (e >= through if self.descending else e <= through)]
        if derived.log != printed.log:
            raise InvariantViolation(f'{self.block_id}: log coefficient {derived.log} differs from {printed.log}')
        checked = []
        for e in exponents:
            if not (derived.known(e) and printed.known(e)):
                continue
            if derived.coefficient(e) != printed.coefficient(e):
                raise InvariantViolation(f'{self.block_id}: {self.variable}^{e} coefficient {derived.coefficient(e)} '
                                         f'differs from the displayed {printed.coefficient(e)}')
            checked.append(e)
        logger.debug(f'{self.block_id}: displayed block reproduced at {len(checked)} exponents')
        return checked

    def to_dict(self) -> dict[str, object]:
        return {
            'block': self.block_id,
            'source': self.source,
            'eps_map': list(self.eps_map) if (self.quantum is not None or self.ansatz is not None) else None,
            'notes': list(self.notes),
            'series': self.series.to_dict(),
        }


_S = '(eps1 + eps2)'
_P = '(eps1*eps2)'


def _a(text: str) -> str:
    return text.replace('S', _S).replace('P', _P)


_VI_A = '(dsig - d0 + dt)'
_VI_B = '(dsig - dinf + d1)'
_VI_T2 = (f'{_VI_A}^2*{_VI_B}^2/(8*dsig^2)*(1/{_VI_A} + 1/{_VI_B} - 1/(2*dsig))'
          ' + (dsig^2 + 2*dsig*(d0 + dt) - 3*(d0 - dt)^2)*(dsig^2 + 2*dsig*(dinf + d1) - 3*(dinf - d1)^2)'
          '/(16*dsig^2*(4*dsig + 3*hbar^2))')
_V_T0_T2 = ('(dsig^2 - (d0 - dt)^2)*thi^2/(16*dsig^3)'
            ' - (3*thi^2 + dsig)*(dsig^2 + 2*dsig*(d0 + dt) - 3*(d0 - dt)^2)/(16*dsig^2*(4*dsig + 3*hbar^2))')

BLOCKS: dict[str, BlockEntry] = {b.block_id: b for b in (
    BlockEntry('VI', 't', False, Fraction(3), _printed(
        'dsig - d0 - dt', p1=f'{_VI_A}*{_VI_B}/(2*dsig)', p2=_VI_T2),
        source='four-point Virasoro block, regular expansion (N_f = 4)',
        notes=('t-coefficient enters with a plus sign',)),
    BlockEntry('V.t0', 't', False, Fraction(3), _printed(
        'dsig - d0 - dt', p1='-(dsig - d0 + dt)*thi/(2*dsig)', p2=_V_T0_T2),
        source='rank-1 irregular block, regular expansion (N_f = 3)'),
    BlockEntry('V.tinf1', 's', True, Fraction(-3), _printed(
        '-(2*a^2 - (w2 - hbar^2)/2)', p1='a + (e1 + hbar)/2', m1='4*a^3 - (w2 - hbar^2)*a + e3',
        m2='10*a^4 - (3*w2 - 5*hbar^2)*a^2 + 4*e3*a + (w2 - hbar^2)^2/8 - w4/2'),
        quantum=_printed(
            _a('-(2*a^2 - (w2 - S^2)/2)'), p1=_a('a + (e1 + S)/2'), m1=_a('4*a^3 - (w2 - S^2)*a + e3'),
            m2=_a('10*a^4 - (3*w2 - 5*S^2)*a^2 + 4*e3*a + (w2 - S^2)^2/8 - w4/2')),
        source='QPV linear exp singularity, N_f = 3 with light hypers'),
    BlockEntry('V.tinf1.dual', 't', True, Fraction(-3), _printed(
        '2*nu*(nu - thi)', p1='nu - thi', m1='4*nu^3 - 6*thi*nu^2 + 2*(d0 + dt + thi^2)*nu - 2*d0*thi',
        m2=('-2*(d0 - nu*(thi - 3*nu))*(dt + (2*thi - 3*nu)*(thi - nu))'
            ' - 2*nu*(thi - nu)*((thi - 2*nu)^2 - hbar^2)')),
        source='rank-1 irregular Virasoro block, irregular expansion'),
    BlockEntry('V.tinf2', 't', True, Fraction(-3), _printed(
        '-a^2/2 + w2 - 5*hbar^2/8', p2='1/32', p1='(i*a + e1 + hbar)/2',
        m1='-i*a^3/2 + (4*w2 - 11*hbar^2/8)*i*a + 8*e3',
        m2='-5*a^4/8 + (12*w2 - 65*hbar^2/16)*a^2 - 64*i*e3*a - 8*w4'),
        quantum=_printed(
            _a('-a^2/2 + w2 - 5*S^2/8 + P/4'), p2='1/32', p1=_a('(i*a + e1 + S)/2'),
            m1=_a('-i*a^3/2 + (4*w2 + 7*P/4 - 11*S^2/8)*i*a + 8*e3'),
            m2=_a('-5*a^4/8 + (12*w2 + 45*P/8 - 65*S^2/16)*a^2 - 64*i*e3*a - 8*w4 - 2*w2*P - P^2/2'
                  ' + 61*P*S^2/32')),
        source='QPV square exp singularity, N_f = 3 with heavy hypers'),
    BlockEntry('IV.tinf1', 's', True, Fraction(-3), _printed(
        '-(12*a^2 + 16*e2 + hbar^2)/8', p1='(2*a + 4*m3 - hbar)/4', m1='3*(4*a^3 + (8*e2 + hbar^2)*a + 8*e3)/2',
        m2='(1680*a^4 + (4224*e2 + 888*hbar^2)*a^2 + 5376*e3*a + 256*e2^2 + 416*e2*hbar^2 + 25*hbar^4)/64'),
        quantum=_printed(
            _a('-(12*a^2 + 16*e2 + S^2)/8'), p1=_a('(2*a + 4*m3 - S)/4'),
            m1=_a('3*(4*a^3 + (8*e2 + S^2)*a + 8*e3)/2'),
            m2=_a('105*a^4/4 + 3*(22*e2 - P/4 + 37*S^2/8)*a^2 + 84*e3*a'
                  ' + (16*e2 + S^2)*(16*e2 - 4*P + 25*S^2)/64')),
        source='QPIV linear exp singularity, H_2 with light hypers'),
    BlockEntry('IV.tinf1.dual', 't', True, Fraction(-6), _printed(
        '3*nu^2 + 2*thi*nu + d0', p2='nu',
        m2='(6*nu^3 + 6*thi*nu^2 + (thi^2 + 3*d0 + 3*hbar^2/4)*nu + 2*d0*thi)/2',
        m4=('-(105*nu^4/4 + 35*thi*nu^3 + (12*thi^2 + 33*d0/2 + 39*hbar^2/4)*nu^2'
            ' + (thi^2 + 18*d0 + 19*hbar^2/4)*thi*nu + (4*thi^2 + d0/4 + 3*hbar^2/2)*d0)/4')),
        source='irregular Virasoro block of H_IV type, nu replaced by -nu'),
    BlockEntry('IV.tinf2', 's', True, Fraction(-2), _printed(
        '-(12*a^2 + 144*e2 + 5*hbar^2)/24', p2='1/108', p1='(2*i*s3*a + 12*m3 - 3*hbar)/12',
        m1='-(4*i*s3*a^3 + i*s3*(216*e2 + 7*hbar^2)*a - 648*e3)/6'),
        quantum=_printed(
            '-(12*a^2 + 144*e2 + 5*eps1^2 + 6*eps1*eps2 + 5*eps2^2)/24', p2='1/108',
            p1=_a('(2*i*s3*a + 12*m3 - 3*S)/12'),
            m1='-(4*i*s3*a^3 + i*s3*(216*e2 + 7*eps1^2 + 6*eps1*eps2 + 7*eps2^2)*a - 648*e3)/6'),
        source='QPIV square exp singularity, H_2 with heavy hypers'),
    BlockEntry('III1.t0', 't', False, Fraction(3), _printed(
        'dsig', p1='th0*thi/(2*dsig)',
        p2='-th0^2*thi^2/(16*dsig^3) + (3*th0^2 + dsig)*(3*thi^2 + dsig)/(16*dsig^2*(4*dsig + 3*hbar^2))'),
        source='NS twisted superpotential with N_f = 2, regular expansion'),
    BlockEntry('III1.tinf', 's', True, Fraction(-3), _printed(
        '-(a^2 - e2/2 - 3*(w2 - hbar^2)/4)', p2='-1/64', p1='a/2',
        m1='-(2*a^3 - (14*e2 + 9*w2 - 3*hbar^2)*a/2)',
        m2=('-(5*a^4 - (90*e2 + 51*w2 - 17*hbar^2)*a^2/2'
            ' - (62*e2 + 33*w2 - 9*hbar^2)*(2*e2 - w2 + hbar^2)/16)')),
        quantum=_printed(
            _a('-(a^2 - e2/2 - 3*(w2 - S^2)/4)'), p2='-1/64', p1='a/2',
            m1=_a('-(2*a^3 - (14*e2 + 9*w2 + 2*P - 3*S^2)*a/2)'),
            m2=_a('-(5*a^4 - (90*e2 + 51*w2 + 14*P - 17*S^2)*a^2/2'
                  ' - (62*e2 + 33*w2 + 12*P - 9*S^2)*(2*e2 - w2 + S^2)/16)')),
        source='QPIII_1, N_f = 2 at strong coupling'),
    BlockEntry('III2.t0', 't', False, Fraction(3), _printed(
        'dsig', p1='thi/(2*dsig)', p2='((5*dsig - 3*hbar^2)*thi^2 + 3*dsig^2)/(16*dsig^3*(4*dsig + 3*hbar^2))'),
        source='NS twisted superpotential with N_f = 1, regular expansion'),
    BlockEntry('III2.tinf', 's', True, Fraction(-2), _printed(
        '-(a^2/2 - m1^2 + 23*hbar^2/24)', p2='-1/8', p1='s3*a - m1',
        m1='-5*s3*a^3/36 + 2*m1*a^2 - (6*m1^2 - 25*hbar^2/48)*s3*a/3 + m1*(8*m1^2 - hbar^2)/6'),
        quantum=_printed(
            _a('-(a^2/2 - m1^2 + P/12 + 23*S^2/24)'), p2='-1/8', p1='s3*a - m1',
            m1=_a('-5*s3*a^3/36 + 2*m1*a^2 - (6*m1^2 + 13*P/24 - 25*S^2/48)*s3*a/3'
                  ' + m1*(8*m1^2 + 2*P - S^2)/6')),
        source='QPIII_2 square exp singularity, N_f = 1'),
    BlockEntry('III3.t0', 't', False, Fraction(3), _printed(
        'a^2 - hbar^2/4', p1='2/(4*a^2 - hbar^2)', p2='(20*a^2 + 7*hbar^2)/(4*(4*a^2 - hbar^2)^3*(a^2 - hbar^2))'),
        ansatz=('PIII3.weak', 2),
        source='pure SU(2) Nekrasov function, NS limit at weak coupling'),
    BlockEntry('III3.t0.dual', 't', False, Fraction(3), _printed(
        'dsig', p1='1/(2*dsig)', p2='(5*dsig - 3*hbar^2)/(16*dsig^3*(4*dsig + 3*hbar^2))'),
        source='irregular Virasoro block of rank 1/2 at both ends, regular expansion'),
    BlockEntry('III3.tinf', 's', True, Fraction(-6), _printed(
        '-(4*a^2 - 9*hbar^2)/8', p2='-1/256', p1='-a/4', m1='-(4*a^3 - 3*hbar^2*a)/4',
        m2='(80*a^4 - 136*hbar^2*a^2 + 9*hbar^4)/32', m3='-(528*a^5 - 1640*hbar^2*a^3 + 405*hbar^4*a)/48',
        m4='9*(224*a^6 - 1120*hbar^2*a^4 + 654*hbar^4*a^2 - 27*hbar^6)/32',
        m5='-(33728*a^7 - 249872*hbar^2*a^5 + 276004*hbar^4*a^3 - 41607*hbar^6*a)/80'),
        eps_map=('i*hbar', '0'), ansatz=('PIII3.strong', 5),
        source='QPIII_3 square exp singularity, N_f = 0 at strong coupling'),
    BlockEntry('II.1', 's', True, Fraction(-3), _printed(
        '-(12*a^2 + hbar^2 - 16*m^2)/12', p1='a/3', m1='(68*a^3 - (144*m^2 - 19*hbar^2)*a)/12',
        m2='(6000*a^4 - (16512*m^2 - 3672*hbar^2)*a^2 + 2816*m^4 - 2272*hbar^2*m^2 + 131*hbar^4)/192'),
        quantum=_printed(
            _a('-(a^2 + S^2/12 - 4*m^2/3)'), p1='a/3', m1=_a('17*a^3/3 - (12*m^2 + P/6 - 19*S^2/12)*a'),
            m2=_a('125*a^4/4 - (86*m^2 + 15*P/4 - 153*S^2/8)*a^2'
                  ' + (16*m^2 - S^2)*(11*m^2/12 + 17*P/48 - 131*S^2/192)')),
        source='QPII linear exp singularity, H_1 with a light hyper'),
    BlockEntry('II.2', 's', True, Fraction(-3), _printed(
        '-(3*a^2 - 32*m^2)/6', p2='1/192', p1='-i*s2*a/6', m1='i*s2*(68*a^3 - (3072*m^2 + 5*hbar^2)*a)/48',
        m2='-(6000*a^4 - (638976*m^2 + 1320*hbar^2)*a^2 + 262144*m^4 - 81920*hbar^2*m^2 - 525*hbar^4)/768'),
        quantum=_printed(
            _a('-a^2/2 + 16*m^2/3 + P/12'), p2='1/192', p1='-i*s2*a/6',
            m1=_a('17*i*s2*a^3/12 - i*s2*(128*m^2 + 31*P/12 + 5*S^2/24)*a/2'),
            m2=_a('-125*a^4/16 + (832*m^2 + 293*P/16 + 55*S^2/32)*a^2 - 1024*m^4/3 - 160*(P - 2*S^2)*m^2/3'
                  ' - 3*P^2/4 + 165*P*S^2/256 + 175*S^4/256')),
        source='QPII square exp singularity, H_1 with a heavy hyper',
        notes=('S^4 coefficient is 175/256', 'displayed m^2*a coefficient at s^-1 is 3072')),
    BlockEntry('I', 's', True, Fraction(-3), _printed(
        '-(30*a^2 + 7*hbar^2)/60', p2='-1/103680', p1='a/60', m1='(94*a^3 + 77*hbar^2*a)/2',
        m2='(463020*a^4 + 836220*hbar^2*a^2 + 101479*hbar^4)/120'),
        quantum=_printed(
            _a('-(a^2/2 - (2*P - 7*S^2)/120)'), p2='-1/103680', p1='a/60',
            m1=_a('47*a^3 - (34*P - 77*S^2)*a/4'),
            m2=_a('7717*a^4/2 - (7354*P - 13937*S^2)*a^2/4 + 7*(24*P^2/5 - 4597*P*S^2/120 + 14497*S^4/480)')),
        eps_map=('s2*hbar', '0'),
        source='QPI / H_0, rank 5/2 irregular block'),
)}

BLOCK_IDS = tuple(BLOCKS)


def get_block(block_id: str) -> BlockEntry:
    try:
        return BLOCKS[block_id]
    except KeyError:
        raise CatalogMiss(f'unknown block {block_id!r}; known: {", ".join(BLOCK_IDS)}')


def block_catalog(case: ExpansionCase) -> BlockSeries:
    """Classical block of the case's primary relation"""
    return get_block(case.relations[0].block).series


def predicted_E(W: BlockSeries, relation: Relation) -> BlockSeries:
    """sign * D(W) + shift as a series in t"""
    w = W.identify(relation.identification).in_t(ParamRat.parse(relation.s_prefactor), relation.s_exponent)
    if relation.operator is Operator.T_DDT:
        d = w.euler_derivative()
    elif relation.operator is Operator.DDT:
        d = w.derivative()
    else:
        euler = w.euler_derivative()
        d = euler.shift(1) - euler
    shift = BlockSeries('t', {e: ParamRat.parse(text) for e, text in relation.shift.items()},
                        descending=d.descending)
    return d * relation.sign + shift


def _agree(block_id: str, block: BlockSeries, dual_id: str, dual: BlockSeries) -> list[Fraction]:
    if block.variable != dual.variable or block.descending != dual.descending:
        raise InvariantViolation(f'{block_id} and {dual_id} are not expansions in the same regime')
    if block.log != dual.log:
        raise InvariantViolation(f'log coefficients of {block_id} and {dual_id} differ: {block.log} vs {dual.log}')
    checked = []
    for e in sorted(set(block.terms) | set(dual.terms), reverse=block.descending):
        try:
            left, right = block.coefficient(e), dual.coefficient(e)
        except InsufficientDepth:
            continue
        if left != right:
            raise InvariantViolation(f'{block_id} vs {dual_id} at {block.variable}^{e}: {left} != {right}')
        checked.append(e)
    return checked


def check_dual(block_id: str, dual_id: str, identification: dict[str, str], sign: int = -1) -> list[Fraction]:
    """W = sign * W_dual after identification, term by term to the shorter order"""
    block = get_block(block_id).series
    dual = get_block(dual_id).series.identify(identification) * sign
    return _agree(block_id, block, dual_id, dual)


def check_dual_relations(case: ExpansionCase) -> list[Fraction]:
    """Exponents of t at which the case's block and dual relations predict the same E(t).

    The two blocks live in different variables, so they are compared after
    each is carried to t by its own relation.
    """
    primary, dual = case.relations
    left = predicted_E(get_block(primary.block).series, primary)
    right = predicted_E(get_block(dual.block).series, dual)
    checked = _agree(primary.block, left, dual.block, right)
    logger.debug(f'{case.case_id}: {primary.block} and {dual.block} agree at {len(checked)} exponents')
    return checked


# (block, dual, identification of the dual's symbols, sign)
DUAL_PAIRS = (
    ('III3.t0', 'III3.t0.dual', {'dsig': '-a^2 + hbar^2/4'}, -1),
)

# Cases relating E(t) to a block in s and to its dual block in t
DUAL_CASES = ('V.tinf1', 'IV.tinf1')


def check_duals() -> dict[str, list[Fraction]]:
    checks = {f'{block_id}~{dual_id}': check_dual(block_id, dual_id, identification, sign)
              for block_id, dual_id, identification, sign in DUAL_PAIRS}
    for case_id in DUAL_CASES:
        case = get_case(case_id)
        primary, dual = case.relations
        checks[f'{primary.block}~{dual.block}'] = check_dual_relations(case)
    return checks
