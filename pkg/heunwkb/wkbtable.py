from typing import Iterable, Iterator, Mapping, Optional

from loguru import logger

from .localframe import LocalFrame
from .paramrat import ZERO, Coercible, ParamRat
from .puiseuxseries import PuiseuxSeries

__all__ = ['WKBTable', 'voros_coefficient']

Slot = tuple[int, int]


class WKBTable:
    """Local expansions S_n^[l](u) of the WKB coefficients in one frame.

    Entries are filled slot by slot. Every entry except S_-1^[0] is produced by
    the Riccati relation from the source series q = Q_{n+1}^[l] it was built
    with, so `residual` can re-substitute it at any time.
    """

    def __init__(self, frame: LocalFrame) -> None:
        self.frame = frame
        self.entries: dict[Slot, PuiseuxSeries] = {}
        self.sources: dict[Slot, PuiseuxSeries] = {}

    def __contains__(self, slot: object) -> bool:
        return slot in self.entries

    def __getitem__(self, slot: Slot) -> PuiseuxSeries:
        return self.entries[slot]

    def get(self, n: int, l: int) -> Optional[PuiseuxSeries]:
        return self.entries.get((n, l))

    @property
    def leading(self) -> PuiseuxSeries:
        return self.entries[-1, 0]

    def set_leading(self, q: PuiseuxSeries, root: Optional[Coercible] = None) -> PuiseuxSeries:
        """S_-1^[0] = sqrt(Q0^[0]) on the branch fixed by `root`"""
        entry = q.sqrt(root if root is not None else self.frame.lead_root)
        self.entries[-1, 0] = entry
        self.sources[-1, 0] = q
        logger.debug(f'{self.frame}: S_-1^[0] = {entry}')
        return entry

    def _convolution(self, n: int, l: int) -> PuiseuxSeries:
        """Sum of S_a^[i] S_b^[j] over a + b = n - 1, i + j = l without the two terms holding S_n^[l]"""
        total = PuiseuxSeries.zero('u')
        for a in range(-1, n + 1):
            b = n - 1 - a
            for i in range(l + 1):
                j = l - i
                if (a, i) == (-1, 0) and (b, j) == (n, l):
                    continue
                if (b, j) == (-1, 0) and (a, i) == (n, l):
                    continue
                left, right = self.entries.get((a, i)), self.entries.get((b, j))
                if left is None or right is None:
                    continue
                total = total + left * right
        return total

    def riccati_entry(self, n: int, l: int, q: PuiseuxSeries) -> PuiseuxSeries:
        """S_n^[l] = (Q_{n+1}^[l] - convolution - d/dX S_{n-1}^[l]) / (2 S_-1^[0])"""
        numerator = q - self._convolution(n, l)
        previous = self.entries.get((n - 1, l))
        if previous is not None:
            numerator = numerator - self.frame.derivative(previous)
        entry = numerator.divide(self.leading * 2).truncate(self.frame.depth)
        self.entries[n, l] = entry
        self.sources[n, l] = q
        return entry

    def residue(self, n: int, l: int) -> ParamRat:
        return self.frame.residue(self.entries[n, l])

    def substitute(self, n: int, l: int, mapping: Mapping[str, Coercible]) -> None:
        self.entries[n, l] = self.entries[n, l].subs(mapping)
        self.sources[n, l] = self.sources[n, l].subs(mapping)

    def residual(self, n: int, l: int) -> PuiseuxSeries:
        """LHS minus RHS of the Riccati relation at the slot; zero to the joint truncation"""
        q = self.sources[n, l]
        if (n, l) == (-1, 0):
            return self.leading * self.leading - q
        lhs = self.leading * self.entries[n, l] * 2 + self._convolution(n, l)
        previous = self.entries.get((n - 1, l))
        if previous is not None:
            lhs = lhs + self.frame.derivative(previous)
        return lhs - q

    def residuals(self) -> Iterator[tuple[Slot, PuiseuxSeries]]:
        for slot in sorted(self.entries):
            yield slot, self.residual(*slot)

    def dump(self) -> list[str]:
        return [f'S_{n}^[{l}] = {entry}' for (n, l), entry in sorted(self.entries.items())]

    def __repr__(self):
        return f'{self.__class__.__name__}({self.frame}, {len(self.entries)} entries)'


def voros_coefficient(tables: Iterable[WKBTable], n: int, l: int) -> ParamRat:
    """V_n^[l] / (2 pi i): signed sum of the frame residues along the cycle"""
    total = ZERO
    for table in tables:
        residue = table.residue(n, l)
        total = total + (residue if table.frame.sign > 0 else -residue)
    return total
