import enum
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

from loguru import logger

from .blockcatalog import get_block, predicted_E
from .blockseries import BlockSeries
from .casecatalog import CASE_IDS, get_case
from .exceptions import ConjectureMismatch, InsufficientDepth
from .expansioncase import ExpansionCase, Relation
from .paramrat import ZERO, ParamRat
from .puiseuxseries import PuiseuxSeries
from .rationalsolver import rational_solve

__all__ = ['Status', 'Mismatch', 'ConjectureReport', 'predicted_E', 'compare', 'accessory_series', 'verify',
           'verify_all']


class Status(enum.Enum):
    PASS = 'pass'
    FAIL = 'fail'


@dataclass(frozen=True)
class Mismatch:
    exponent: Fraction
    expected: ParamRat
    """From the conformal block"""

    actual: ParamRat
    """From the accessory parameter"""

    def to_dict(self) -> dict[str, str]:
        return {'t_exp': str(self.exponent), 'expected': self.expected.to_text(), 'actual': self.actual.to_text()}


@dataclass
class ConjectureReport:
    case_id: str
    relation: str
    checked_orders: list[Fraction] = field(default_factory=list)
    differences: dict[Fraction, ParamRat] = field(default_factory=dict)
    first_mismatch: Optional[Mismatch] = None

    @property
    def status(self) -> Status:
        return Status.PASS if self.first_mismatch is None else Status.FAIL

    @property
    def passed(self) -> bool:
        return self.status is Status.PASS

    @property
    def reached(self) -> Optional[Fraction]:
        return self.checked_orders[-1] if self.checked_orders else None

    def raise_for_status(self) -> None:
        if self.first_mismatch is not None:
            m = self.first_mismatch
            raise ConjectureMismatch(f'{self.case_id}: {self.relation} fails at t^({m.exponent}): '
                                     f'block gives {m.expected}, accessory parameter {m.actual}',
                                     exponent=m.exponent, expected=m.expected, actual=m.actual)

    def to_dict(self) -> dict[str, object]:
        out = {
            'case': self.case_id,
            'relation': self.relation,
            'checked_orders': [str(e) for e in self.checked_orders],
            'status': self.status.value,
        }
        if self.first_mismatch is not None:
            out['first_mismatch'] = self.first_mismatch.to_dict()
        return out


def accessory_series(case: ExpansionCase, columns: list[ParamRat]) -> PuiseuxSeries:
    """E(t) from the columns E^[0..L]"""
    terms = {case.t_exponent(l): value for l, value in enumerate(columns) if not value.is_zero}
    order = case.t_exponent(len(columns)) if case.small_t else None
    return PuiseuxSeries('t', terms, order)


def _frontier(case: ExpansionCase, predicted: BlockSeries, levels: int) -> Fraction:
    lattice = case.t_exponent(levels + 1)
    if predicted.order is None:
        return lattice
    return max(predicted.order, lattice) if predicted.descending else min(predicted.order, lattice)


def compare(case: ExpansionCase, E: PuiseuxSeries, W: BlockSeries, levels: int,
            relation: Optional[Relation] = None, strict: bool = True) -> ConjectureReport:
    """Checks E = sign * D(W) + shift term by term.

    E carries the columns l <= `levels`; exponents off the t-lattice of the
    case are zero in E. With `strict` the first difference raises
    ConjectureMismatch, otherwise it is recorded in the report.
    """
    relation = relation or case.relations[0]
    predicted = predicted_E(W, relation)
    if predicted.descending == case.small_t:
        raise ValueError(f'{case.case_id}: block {relation.block} expands in the wrong direction')
    frontier = _frontier(case, predicted, levels)
    lattice = [case.t_exponent(l) for l in range(levels + 1)]
    exponents = {e for e in (*lattice, *predicted.terms, *E.terms) if predicted.known(e)}
    exponents = sorted((e for e in exponents if (e > frontier if predicted.descending else e < frontier)),
                       reverse=predicted.descending)
    report = ConjectureReport(case.case_id, relation.describe())
    for e in exponents:
        expected = predicted.coefficient(e)
        actual = E.terms.get(e, ZERO)
        difference = actual - expected
        report.checked_orders.append(e)
        report.differences[e] = difference
        if not difference.is_zero and report.first_mismatch is None:
            report.first_mismatch = Mismatch(e, expected, actual)
            logger.debug(f'{case.case_id}: t^({e}) block {expected} vs accessory {actual}')
            if strict:
                report.raise_for_status()
    logger.debug(f'{case.case_id}: {relation.describe()} checked at {len(exponents)} exponents')
    return report


def verify(case: ExpansionCase, through: Optional[Fraction] = None, strict: bool = False) -> list[ConjectureReport]:
    """Runs every relation of the case through the stated order"""
    through = case.verified_through if through is None else Fraction(through)
    levels = case.levels_through(through)
    logger.info(f'Verifying {case} through t^({through}) (L={levels})')
    E = accessory_series(case, rational_solve(case, levels))
    reports = []
    for relation in case.relations:
        W = get_block(relation.block).series
        report = compare(case, E, W, levels, relation, strict=strict)
        if report.passed and report.reached is not None and _short_of(case, report.reached, through):
            raise InsufficientDepth(f'{case.case_id}: {relation.block} only reaches t^({report.reached})',
                                    required=through)
        reports.append(report)
    return reports


def _short_of(case: ExpansionCase, reached: Fraction, through: Fraction) -> bool:
    return reached < through if case.small_t else reached > through


def _verify_id(case_id: str) -> list[ConjectureReport]:
    return verify(get_case(case_id))


def verify_all(case_ids: Optional[Iterable[str]] = None, jobs: int = 1) -> list[ConjectureReport]:
    """Reports for every case, sorted by case id"""
    case_ids = sorted(case_ids or CASE_IDS)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_verify_id, case_ids))
    else:
        results = [_verify_id(case_id) for case_id in case_ids]
    return [report for reports in results for report in reports]
