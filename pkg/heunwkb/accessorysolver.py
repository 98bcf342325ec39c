from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Union

from loguru import logger

from . import constants
from .biseries import BiSeries
from .blockseries import BlockSeries
from .exceptions import (DegeneratePivot, InsufficientDepth, ParityViolation, ResidueConditionViolation,
                         ScalingDegreeError)
from .expansioncase import CycleKind, ExpansionCase
from .localframe import LocalFrame
from .paramrat import ZERO, ParamRat, coerce, param
from .puiseuxseries import PuiseuxSeries
from .rescaledpotential import rescale_potential
from .wkbtable import WKBTable, voros_coefficient

__all__ = ['AccessoryExpansion', 'VorosSolver', 'solve', 'expand_sminus1', 'riccati_step', 'parity_check',
           'assemble_E', 'initial_depth']

_G = param('G')


def initial_depth(case: ExpansionCase, K: int, L: int) -> int:
    return constants.DEPTH_BASE + constants.DEPTH_SLOPE * (K + 1) * case.cycle.zero_order + L


def _affine_root(residue: ParamRat, target: ParamRat, where: str) -> ParamRat:
    """Value of G solving residue(G) = target; residue must be affine in G"""
    if 'G' not in residue.free_symbols:
        raise DegeneratePivot(f'{where}: residue {residue} does not depend on the unknown')
    r0, r1, r2 = (residue.subs({'G': v}) for v in (0, 1, 2))
    pivot = r1 - r0
    if r2 - r0 != pivot * 2:
        raise DegeneratePivot(f'{where}: residue {residue} is not affine in the unknown')
    if pivot.is_zero:
        raise DegeneratePivot(f'{where}: zero pivot')
    logger.debug(f'{where}: {pivot=}')
    return (target - r0) / pivot


@dataclass
class AccessoryExpansion:
    """Solved table G_k^[l] of one expansion case"""

    case: ExpansionCase
    K: int
    L: int
    table: BiSeries
    raw: dict[tuple[int, int], ParamRat] = field(default_factory=dict)
    """(p, j) -> coefficient of h^p Lambda^j in the rescaled accessory parameter"""

    tables: list[WKBTable] = field(default_factory=list)

    def coefficient(self, k: int, l: int) -> ParamRat:
        return self.table.get((k, l), ZERO)

    def column(self, l: int) -> ParamRat:
        """E^[l] = sum_k hbar^(2k) G_k^[l] over the computed rows"""
        hbar = param('hbar')
        total = ZERO
        for k, value in self.table.column(l).items():
            total = total + value * hbar ** (2 * k)
        return total

    def g_table(self) -> list[dict[str, object]]:
        return [{'k': k, 'l': l, 'coeff': value.to_text()} for (k, l), value in self.table.items()]

    def to_dict(self) -> dict[str, object]:
        series = assemble_E(self.case, self)
        return {
            'case': self.case.case_id,
            'K': self.K,
            'L': self.L,
            'g_table': self.g_table(),
            'E_series': [{'t_exp': str(e), 'coeff': c.to_text()} for e, c in series.terms.items()],
        }

    def to_latex(self) -> str:
        series = assemble_E(self.case, self)
        body = BlockSeries('t', series.terms, ZERO, series.order, descending=not self.case.small_t).to_latex()
        return f'E(t) = {body}'

    def __str__(self):
        rows = []
        for k in range(self.K + 1):
            row = self.table.row(k)
            if row:
                rows.append(f'G_{k} = ' + ' + '.join(f'({v})*L^{l}' for l, v in row.items()))
        return '\n'.join(rows)


class VorosSolver:
    """Order-by-order solver of the partial-isomonodromy Voros conditions.

    Works with h = hbar * Lambda^kappa. Unknown g(p, j) is the h^p Lambda^j
    coefficient of the rescaled accessory parameter and is pinned by the
    residue of S_{p-1}^[j + offset] along the cycle.
    """

    def __init__(self, case: ExpansionCase, K: int, L: int, depth: Optional[int] = None) -> None:
        if K < 0 or L < 0:
            raise ValueError('orders must be non-negative')
        self.case = case
        self.K = K
        self.L = L
        self.depth = depth or initial_depth(case, K, L)
        self.potential = rescale_potential(case)
        self.offset = self.potential.offset
        self.kappa = case.kappa
        self.tables = [WKBTable(LocalFrame(point, self.depth)) for point in case.cycle.points]
        self.g: dict[tuple[int, int], ParamRat] = {}
        self._expansions: dict[tuple[int, str, int], PuiseuxSeries] = {}

    def max_level(self, n: int) -> int:
        return self.L + self.offset - (n + 1) * self.kappa

    def _expand(self, frame_index: int, part: str, level: int) -> PuiseuxSeries:
        key = (frame_index, part, level)
        if key not in self._expansions:
            parts = self.potential.parts(level)
            self._expansions[key] = self.tables[frame_index].frame.expand(getattr(parts, part))
        return self._expansions[key]

    def q_series(self, frame_index: int, p: int, l: int, unknown: bool = False) -> PuiseuxSeries:
        """Q_p^[l] in the frame; the newest coefficient g(p, l - offset) is G when `unknown`"""
        if p == 0:
            q = self._expand(frame_index, 'p0', l)
        elif p == 2:
            q = self._expand(frame_index, 'p2', l)
        else:
            q = PuiseuxSeries.zero('u')
        for i in range(self.offset, l + self.offset + 1):
            j = l - i
            if unknown and j == l - self.offset:
                value = _G
            else:
                value = self.g.get((p, j))
                if value is None:
                    raise ScalingDegreeError(f'{self.case.case_id}: g({p}, {j}) needed before it is solved')
            if value.is_zero:
                continue
            q = q + self._expand(frame_index, 'c', i) * value
        return q

    def _target(self, n: int, l: int) -> ParamRat:
        return self.case.cycle.voros_target(n, l, self.kappa)

    def _solve_leading(self) -> None:
        key = (0, -self.offset)
        where = f'{self.case.case_id} slot (-1, 0)'
        kind = self.case.cycle.kind
        if self.case.forced_g is not None:
            self.g[key] = ParamRat.parse(self.case.forced_g)
            for n, table in enumerate(self.tables):
                table.set_leading(self.q_series(n, 0, 0))
        elif kind is CycleKind.POLE_RESIDUE:
            (table,) = self.tables
            q = self.q_series(0, 0, 0, unknown=True)
            lead = table.frame.lead_root
            self.g[key] = _affine_root(q.coefficient(-2), lead * lead, where)
            table.set_leading(q.subs({'G': self.g[key]}))
        elif kind is CycleKind.AT_INFINITY:
            for n, table in enumerate(self.tables):
                table.set_leading(self.q_series(n, 0, 0, unknown=True))
            self.g[key] = _affine_root(voros_coefficient(self.tables, -1, 0), self._target(-1, 0), where)
            for table in self.tables:
                table.substitute(-1, 0, {'G': self.g[key]})
        else:
            raise ScalingDegreeError(f'{where}: {kind.value} cycle needs a forced leading value')
        residue = voros_coefficient(self.tables, -1, 0)
        if residue != self._target(-1, 0):
            raise ResidueConditionViolation(f'{where}: residue {residue}, expected {self._target(-1, 0)}')
        logger.debug(f'{where}: g{key} = {self.g[key]}')

    def solve_slot(self, n: int, l: int) -> ParamRat:
        if (n, l) == (-1, 0):
            self._solve_leading()
            return self.g[0, -self.offset]
        key = (n + 1, l - self.offset)
        for index, table in enumerate(self.tables):
            table.riccati_entry(n, l, self.q_series(index, n + 1, l, unknown=True))
        where = f'{self.case.case_id} slot ({n}, {l})'
        value = _affine_root(voros_coefficient(self.tables, n, l), self._target(n, l), where)
        for table in self.tables:
            table.substitute(n, l, {'G': value})
        self.g[key] = value
        logger.debug(f'{where}: g{key} = {value}')
        return value

    def leading_row(self, prefix: Optional[dict[int, ParamRat]] = None) -> list[PuiseuxSeries]:
        """Row S_-1 of the first frame.

        With a prefix {j: g(0, j)} the row stops at the first missing j and
        keeps G in place of that coefficient.
        """
        if prefix is None:
            self.row(-1)
            return [self.tables[0][-1, l] for l in range(self.max_level(-1) + 1)]
        for j, value in prefix.items():
            self.g[0, j] = coerce(value)
        if (0, -self.offset) in self.g:
            for n, table in enumerate(self.tables):
                table.set_leading(self.q_series(n, 0, 0))
        else:
            self._solve_leading()
        row = [self.tables[0].leading]
        for l in range(1, self.max_level(-1) + 1):
            missing = (0, l - self.offset) not in self.g
            for index, table in enumerate(self.tables):
                table.riccati_entry(-1, l, self.q_series(index, 0, l, unknown=missing))
            row.append(self.tables[0][-1, l])
            if missing:
                break
        return row

    def row(self, n: int) -> list[ParamRat]:
        return [self.solve_slot(n, l) for l in range(self.max_level(n) + 1)]

    def solve(self) -> AccessoryExpansion:
        logger.info(f'Solving {self.case} to K={self.K}, L={self.L} (depth {self.depth})')
        for n in range(-1, 2 * self.K):
            self.row(n)
        table = BiSeries(self.K, self.L)
        for (p, j), value in sorted(self.g.items()):
            if p % 2:
                continue
            k = p // 2
            l = j + 2 * k * self.kappa
            if 0 <= l <= self.L:
                table[k, l] = value
        expansion = AccessoryExpansion(self.case, self.K, self.L, table, dict(self.g), self.tables)
        parity_check(expansion)
        return expansion


def solve(case: ExpansionCase, K: int = constants.DEFAULT_K, L: int = constants.DEFAULT_L) -> AccessoryExpansion:
    """Solves the Voros conditions to (K, L), doubling the local depth when a truncation runs out"""
    depth = initial_depth(case, K, L)
    for attempt in range(constants.MAX_DEPTH_RETRIES + 1):
        try:
            return VorosSolver(case, K, L, depth).solve()
        except InsufficientDepth as e:
            logger.warning(f'{case.case_id}: depth {depth} too shallow ({e}), retrying with {2 * depth}')
            depth *= 2
    raise InsufficientDepth(f'{case.case_id}: no depth up to {depth // 2} suffices', required=depth)


def expand_sminus1(case: ExpansionCase, prefix: Optional[dict[int, ParamRat]] = None,
                   L: int = constants.DEFAULT_L) -> list[PuiseuxSeries]:
    return VorosSolver(case, 0, L).leading_row(prefix)


def riccati_step(solver: VorosSolver, n: int) -> list[ParamRat]:
    """Fills row n of every frame and returns the coefficients it pins"""
    return solver.row(n)


def parity_check(g: Union[AccessoryExpansion, Mapping[tuple[int, int], ParamRat]]) -> bool:
    """Every odd power of h in the solved coefficients must vanish"""
    if isinstance(g, AccessoryExpansion):
        g = g.raw
    for (p, j), value in sorted(g.items()):
        if p % 2 and not value.is_zero:
            raise ParityViolation(f'odd order h^{p} Lambda^{j} coefficient is {value}')
    return True


def assemble_E(case: ExpansionCase, expansion: AccessoryExpansion) -> PuiseuxSeries:
    """E(t) = t^dE * sum_l Lambda^l E^[l] collected per power of t"""
    terms: dict[Fraction, ParamRat] = {}
    for l in range(expansion.L + 1):
        value = expansion.column(l)
        if not value.is_zero:
            terms[case.t_exponent(l)] = value
    order = case.t_exponent(expansion.L + 1) if case.small_t else None
    return PuiseuxSeries('t', terms, order)
