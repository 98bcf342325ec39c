import enum
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional

from .exceptions import CatalogMiss
from .paramrat import ParamRat

__all__ = ['CycleKind', 'CyclePoint', 'Cycle', 'Operator', 'Relation', 'CaseVariant', 'ExpansionCase']


class CycleKind(enum.Enum):
    DOUBLE_ZERO = 'double-zero'
    POLE_RESIDUE = 'pole-residue'
    AT_INFINITY = 'at-infinity'
    TWO_POINT = 'two-point'


@dataclass(frozen=True)
class CyclePoint:
    location: Optional[str]
    """Point of the X-plane in ParamRat text; None is X = infinity"""

    lead_root: str
    """Leading coefficient of sqrt(Q0^[0]) in the local coordinate"""

    sign: int = 1

    @property
    def at_infinity(self) -> bool:
        return self.location is None


@dataclass(frozen=True)
class Cycle:
    kind: CycleKind
    points: tuple[CyclePoint, ...]
    zero_order: int = 1
    """d: zero order of sqrt(Q0^[0]) at a double zero"""

    def voros_target(self, n: int, l: int, kappa: int) -> ParamRat:
        """Residue (V_n^[l] / 2 pi i) imposed at the slot (n, l); the nu slot is ParamRat 'nu'"""
        if n == -1:
            return ParamRat.symbol('nu') if l == kappa else ParamRat.from_int(0)
        if n == 0 and l == 0:
            return ParamRat.from_int(self.subleading_residue)
        return ParamRat.from_int(0)

    @property
    def subleading_residue(self) -> Fraction:
        if self.kind is CycleKind.DOUBLE_ZERO:
            return Fraction(-self.zero_order, 2)
        if self.kind is CycleKind.POLE_RESIDUE:
            return Fraction(1, 2)
        return Fraction(0)

    def describe(self) -> str:
        where = ', '.join('oo' if p.at_infinity else p.location for p in self.points)
        return f'{self.kind.value}({where})'

    def to_dict(self) -> dict[str, object]:
        return {
            'kind': self.kind.value,
            'zero_order': self.zero_order,
            'points': [{'location': p.location, 'lead_root': p.lead_root, 'sign': p.sign} for p in self.points],
        }


class Operator(enum.Enum):
    T_DDT = 't d/dt'
    DDT = 'd/dt'
    T_T_MINUS_ONE_DDT = 't(t-1) d/dt'


@dataclass(frozen=True)
class Relation:
    """E = sign * D(W) + shift with W read in t through s = prefactor * t^exponent"""

    block: str
    operator: Operator
    sign: int = 1
    shift: dict[Fraction, str] = field(default_factory=dict)
    """t-exponent -> ParamRat text added to the right-hand side"""

    s_prefactor: str = '1'
    s_exponent: Fraction = Fraction(1)
    identification: dict[str, str] = field(default_factory=dict)
    """Block symbol -> ParamRat text in the case parameters; a key 'm^2' replaces even powers of m"""

    def shift_text(self) -> str:
        parts = []
        for e, value in sorted(self.shift.items()):
            power = '' if e == 0 else (' t' if e == 1 else f' t^({e})')
            parts.append(f'({value}){power}')
        return ' + '.join(parts)

    def variable(self) -> str:
        if self.s_prefactor == '1' and self.s_exponent == 1:
            return 't'
        return f's = {self.s_prefactor}*t^({self.s_exponent})'

    def describe(self) -> str:
        sign = '' if self.sign > 0 else '-'
        shift = f' + {self.shift_text()}' if self.shift else ''
        return f'E = {sign}{self.operator.value} {self.block}{shift}'

    def to_dict(self) -> dict[str, object]:
        return {
            'block': self.block,
            'operator': self.operator.value,
            'sign': self.sign,
            'shift': {str(e): value for e, value in sorted(self.shift.items())},
            's_prefactor': self.s_prefactor,
            's_exponent': str(self.s_exponent),
            'identification': dict(sorted(self.identification.items())),
        }


@dataclass(frozen=True)
class CaseVariant:
    """Alternative leading branch selectable by flag"""

    name: str
    forced_g: str
    cycle: Cycle
    description: str
    relations: tuple[Relation, ...] = ()
    """Relations on this branch; empty keeps those of the case"""

    tower: tuple[str, ...] = ()


@dataclass(frozen=True)
class ExpansionCase:
    case_id: str
    equation: str
    d_x: Fraction
    d_y: Fraction
    d_E: Fraction
    rho: Fraction
    """Lambda = t^rho"""

    cycle: Cycle
    forced_g: Optional[str]
    """Lowest accessory coefficient fixed by the degeneration, None when a residue fixes it"""

    relations: tuple[Relation, ...]
    verified_through: Fraction
    """Last t-exponent at which the conjectured relation is stated to hold"""

    tower: tuple[str, ...] = ()
    variants: tuple[CaseVariant, ...] = ()
    variant: Optional[str] = None
    notes: str = ''

    @property
    def kappa(self) -> int:
        """h = hbar * Lambda^kappa is the Planck constant of the rescaled equation"""
        kappa = -self.d_y / self.rho
        if kappa.denominator != 1:
            raise ValueError(f'{self.case_id}: non-integral kappa {kappa}')
        return int(kappa)

    @property
    def small_t(self) -> bool:
        return self.rho > 0

    def t_exponent(self, l: int) -> Fraction:
        return self.d_E + self.rho * l

    def levels_through(self, exponent: Fraction) -> int:
        """Smallest L whose last t-exponent reaches `exponent`"""
        l = (Fraction(exponent) - self.d_E) / self.rho
        return max(0, -(-l.numerator // l.denominator))

    def complete_k(self, L: int, offset: int = 0) -> Optional[int]:
        """hbar order after which every column l <= L is complete; None when no finite order suffices.

        `offset` is the Lambda level at which the accessory parameter enters the potential.
        """
        if self.cycle.kind is CycleKind.POLE_RESIDUE:
            return None
        if self.cycle.kind is CycleKind.AT_INFINITY:
            return (L + 1 + offset) // 2
        return (L + offset) // 2

    def with_variant(self, name: Optional[str]) -> 'ExpansionCase':
        if name is None:
            return self
        for variant in self.variants:
            if variant.name == name:
                return replace(self, forced_g=variant.forced_g, cycle=variant.cycle, variant=name,
                               relations=variant.relations or self.relations, tower=variant.tower or self.tower)
        known = ', '.join(v.name for v in self.variants) or 'none'
        raise CatalogMiss(f'{self.case_id} has no variant {name!r} (known: {known})')

    def to_dict(self) -> dict[str, object]:
        return {
            'case': self.case_id,
            'equation': self.equation,
            'scaling': {'d_x': str(self.d_x), 'd_y': str(self.d_y), 'd_E': str(self.d_E)},
            'rho': str(self.rho),
            'cycle': self.cycle.to_dict(),
            'forced_g': self.forced_g,
            'relations': [relation.to_dict() for relation in self.relations],
            'verified_through': str(self.verified_through),
            'tower': list(self.tower),
            'variants': [{'name': v.name, 'forced_g': v.forced_g, 'cycle': v.cycle.to_dict(),
                          'description': v.description,
                          'relations': [relation.to_dict() for relation in v.relations]} for v in self.variants],
            'notes': self.notes,
        }

    def __str__(self):
        variant = f' [{self.variant}]' if self.variant else ''
        return f'{self.case_id}{variant}: H_{self.equation}, Lambda = t^({self.rho}), {self.cycle.describe()}'
