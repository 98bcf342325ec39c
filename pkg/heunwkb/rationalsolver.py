from typing import Optional

from loguru import logger

from . import constants
from .accessorysolver import AccessoryExpansion, solve
from .exceptions import DegeneratePivot, InsufficientDepth, OracleMismatch, ResonantParameter
from .expansioncase import CycleKind, CyclePoint, ExpansionCase
from .localframe import LocalFrame
from .paramrat import ZERO, Coercible, ParamRat, coerce, param
from .puiseuxseries import PuiseuxSeries
from .rescaledpotential import rescale_potential

__all__ = ['RationalSolver', 'rational_solve', 'check_oracle']

_G = param('G')


class RationalSolver:
    """Exact-in-hbar recursion for a pole-type cycle at X = 0.

    S^[0] = lam/X + O(1) and every S^[l] is a Laurent series at 0 whose
    coefficients solve (2 lam + m) S_m^[l] = F_m^[l]. The vanishing of
    S_-1^[l] for l >= 1 pins the accessory coefficient G^[l].
    """

    def __init__(self, case: ExpansionCase, L: int, depth: Optional[int] = None,
                 lam: Optional[Coercible] = None) -> None:
        if case.cycle.kind is not CycleKind.POLE_RESIDUE:
            raise ValueError(f'{case.case_id}: rational recursion needs a pole-type cycle')
        self.case = case
        self.L = L
        self.depth = depth or L + 4
        self.potential = rescale_potential(case)
        self.frame = LocalFrame(CyclePoint('0', 'nu'), self.depth)
        self.lam = coerce(lam) if lam is not None else param('lam')
        self.hbar = param('hbar')
        self.g: dict[int, ParamRat] = {}
        self._memo: dict[tuple[int, int], ParamRat] = {}
        self._expansions: dict[tuple[str, int], PuiseuxSeries] = {}
        self._poles: dict[int, int] = {0: 1}

    def _expand(self, part: str, level: int) -> PuiseuxSeries:
        if (part, level) not in self._expansions:
            self._expansions[part, level] = self.frame.expand(getattr(self.potential.parts(level), part))
        return self._expansions[part, level]

    def q_pole(self, l: int) -> int:
        orders = [self._expand('p0', l).valuation, self._expand('p2', l).valuation]
        orders += [self._expand('c', i).valuation for i in range(l + 1)]
        return max(0, *(-int(o) for o in orders if o is not None))

    def pole(self, l: int) -> int:
        """Bound on the pole order of S^[l] at X = 0"""
        if l not in self._poles:
            products = [self.pole(b) + self.pole(l - b) for b in range(1, l)]
            self._poles[l] = max(1, max([self.q_pole(l), *products]) - 1)
        return self._poles[l]

    def q_coefficient(self, l: int, exponent: int) -> ParamRat:
        """[X^exponent] Q^[l]; the newest accessory coefficient is G while unsolved"""
        total = self._expand('p0', l).coefficient(exponent)
        total = total + self._expand('p2', l).coefficient(exponent) * self.hbar ** 2
        for i in range(l + 1):
            value = self.g.get(l - i, _G)
            if not value.is_zero:
                total = total + self._expand('c', i).coefficient(exponent) * value
        return total

    def _divide(self, value: ParamRat, m: int) -> ParamRat:
        factor = self.lam * 2 + m
        if factor.is_zero:
            raise ResonantParameter(f'2*lam + {m} vanishes at lam = {self.lam}')
        return value / factor

    def F(self, l: int, m: int) -> ParamRat:
        total = self.q_coefficient(l, m - 1) / self.hbar ** 2
        for a in range(l + 1):
            b = l - a
            for i in range(-self.pole(a), m + self.pole(b)):
                j = m - 1 - i
                if (a, i) == (0, -1) and (b, j) == (l, m):
                    continue
                if (b, j) == (0, -1) and (a, i) == (l, m):
                    continue
                left = self.S(a, i)
                if left.is_zero:
                    continue
                total = total - left * self.S(b, j)
        return total

    def S(self, l: int, m: int) -> ParamRat:
        if m < -self.pole(l):
            return ZERO
        if m == -1:
            return self.lam if l == 0 else ZERO
        key = (l, m)
        if key not in self._memo:
            self._memo[key] = self._divide(self.F(l, m), m)
        return self._memo[key]

    def accessory(self, l: int) -> ParamRat:
        """G^[l] in lam and hbar"""
        if l in self.g:
            return self.g[l]
        for previous in range(l):
            self.accessory(previous)
        if l == 0:
            residual = self.q_coefficient(0, -2) - self.hbar ** 2 * self.lam * (self.lam - 1)
        else:
            residual = self.F(l, -1)
        r0, r1 = residual.subs({'G': 0}), residual.subs({'G': 1})
        pivot = r1 - r0
        if pivot.is_zero:
            raise DegeneratePivot(f'{self.case.case_id}: G^[{l}] does not enter its residue condition')
        if residual.subs({'G': 2}) - r0 != pivot * 2:
            raise DegeneratePivot(f'{self.case.case_id}: G^[{l}] enters its residue condition nonlinearly')
        self.g[l] = -r0 / pivot
        logger.debug(f'{self.case.case_id}: G^[{l}] = {self.g[l]}')
        return self.g[l]

    def solve(self) -> list[ParamRat]:
        values = [self.accessory(l) for l in range(self.L + 1)]
        if 'lam' in self.lam.free_symbols:
            lam = param('nu') / self.hbar + ParamRat.from_int(1) / 2
            values = [v.subs({'lam': lam}) for v in values]
        return values


def rational_solve(case: ExpansionCase, L: int = constants.DEFAULT_L) -> list[ParamRat]:
    """E^[0..L] exact in hbar.

    Pole-type cases run the rational recursion. The other cycles have
    polynomial coefficients, which are collected from `solve` at the hbar
    order that completes every column.
    """
    if case.cycle.kind is not CycleKind.POLE_RESIDUE:
        expansion = solve(case, case.complete_k(L, rescale_potential(case).offset), L)
        return [expansion.column(l) for l in range(L + 1)]
    depth = L + 4
    for attempt in range(constants.MAX_DEPTH_RETRIES + 1):
        try:
            return RationalSolver(case, L, depth).solve()
        except InsufficientDepth as e:
            logger.warning(f'{case.case_id}: Laurent depth {depth} too shallow ({e}), retrying with {2 * depth}')
            depth *= 2
    raise InsufficientDepth(f'{case.case_id}: no Laurent depth up to {depth // 2} suffices', required=depth)


def check_oracle(rational: list[ParamRat], expansion: AccessoryExpansion) -> dict[int, int]:
    """hbar-valuation of (exact - table) per column; each must exceed the last computed hbar order"""
    valuations = {}
    for l, exact in enumerate(rational[:expansion.L + 1]):
        difference = exact - expansion.column(l)
        if difference.is_zero:
            continue
        valuations[l] = difference.valuation('hbar')
        if valuations[l] < 2 * expansion.K + 2:
            raise OracleMismatch(f'{expansion.case.case_id}: E^[{l}] differs from the table at hbar^{valuations[l]}')
    return valuations
