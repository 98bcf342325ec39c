from typing import Generic, Iterator, Optional, TypeVar

__all__ = ['BiSeries']

_Entry = TypeVar('_Entry')


class BiSeries(Generic[_Entry]):
    """Double expansion sum hbar^k Lambda^l * entry[k, l] with a rectangular truncation (k <= K, l <= L)"""

    def __init__(self, K: int, L: int, k_min: int = 0, entries: Optional[dict[tuple[int, int], _Entry]] = None) -> None:
        self.K = K
        self.L = L
        self.k_min = k_min
        self._entries: dict[tuple[int, int], _Entry] = {}
        for key, value in (entries or {}).items():
            self[key] = value

    def _check(self, key: tuple[int, int]) -> None:
        k, l = key
        if not (self.k_min <= k <= self.K and 0 <= l <= self.L):
            raise KeyError(f'({k}, {l}) outside the truncation k in [{self.k_min}, {self.K}], l in [0, {self.L}]')

    def __setitem__(self, key: tuple[int, int], value: _Entry) -> None:
        self._check(key)
        self._entries[key] = value

    def __getitem__(self, key: tuple[int, int]) -> _Entry:
        return self._entries[key]

    def __contains__(self, key: object) -> bool:
        return key in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def get(self, key: tuple[int, int], default: Optional[_Entry] = None) -> Optional[_Entry]:
        return self._entries.get(key, default)

    def items(self) -> Iterator[tuple[tuple[int, int], _Entry]]:
        """Entries sorted by (k, l)"""
        return iter(sorted(self._entries.items(), key=lambda item: item[0]))

    def row(self, k: int) -> dict[int, _Entry]:
        return {l: v for (kk, l), v in self.items() if kk == k}

    def column(self, l: int) -> dict[int, _Entry]:
        return {k: v for (k, ll), v in self.items() if ll == l}

    def __repr__(self):
        return f'{self.__class__.__name__}(K={self.K}, L={self.L}, {len(self)} entries)'
