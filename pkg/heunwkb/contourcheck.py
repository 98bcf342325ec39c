import os
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Mapping, Optional, Union

import mpmath
import sympy
from loguru import logger

from . import constants
from .accessorysolver import solve
from .exceptions import BranchTrackError, ContourError, MissingSymbol
from .expansioncase import CycleKind, ExpansionCase
from .localframe import X
from .paramrat import TOWER, ParamRat
from .puiseuxseries import PuiseuxSeries
from .rescaledpotential import G, L, h, rescale_potential

__all__ = ['NumConfig', 'ContourResult', 'eval_series', 'leading_series', 'trapezoid_period', 'contour_Vminus1',
           'convergence_order']

Number = Union[int, Fraction, complex, mpmath.mpf, mpmath.mpc]


def _env_precision() -> int:
    raw = os.environ.get(constants.PRECISION_ENV_VAR)
    if raw is None:
        return constants.DEFAULT_PRECISION
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f'{constants.PRECISION_ENV_VAR}={raw!r} is not an integer')
    if value < 15:
        raise ValueError(f'{constants.PRECISION_ENV_VAR} must be at least 15 digits, got {value}')
    return value


@dataclass(frozen=True)
class NumConfig:
    precision: int = field(default_factory=_env_precision)
    """Decimal digits"""

    points: int = constants.DEFAULT_QUADRATURE_POINTS
    center: Optional[complex] = None
    radius: Optional[Fraction] = None
    """None picks the midpoint between the enclosed and the nearest excluded feature"""

    assignment: dict[str, Fraction] = field(default_factory=dict)
    """Exact values of nu and the thetas"""

    lam: Fraction = Fraction(0)
    levels: int = constants.DEFAULT_L
    """Lambda-truncation of the leading accessory series"""

    sigma: int = 1
    """Sign of q = sigma*i/sqrt(6) in numeric evaluation"""

    def __post_init__(self):
        if self.points < 8:
            raise ValueError(f'need at least 8 quadrature points, got {self.points}')

    def with_lambda(self, lam: Fraction) -> 'NumConfig':
        return replace(self, lam=Fraction(lam))


@dataclass
class ContourResult:
    case_id: str
    value: mpmath.mpc
    expected: mpmath.mpc
    center: mpmath.mpc
    radius: mpmath.mpf
    points: int
    precision: int

    @property
    def relative_error(self) -> mpmath.mpf:
        if self.expected == 0:
            return abs(self.value)
        return abs(self.value - self.expected) / abs(self.expected)

    def to_dict(self) -> dict[str, object]:
        digits = 20
        return {
            'case': self.case_id,
            'value': mpmath.nstr(self.value, digits),
            'expected': mpmath.nstr(self.expected, digits),
            'relative_error': mpmath.nstr(self.relative_error, 5),
            'center': mpmath.nstr(self.center, digits),
            'radius': mpmath.nstr(self.radius, digits),
            'points': self.points,
            'precision': self.precision,
        }


def _mp(value: Number) -> mpmath.mpc:
    if isinstance(value, Fraction):
        return mpmath.mpf(value.numerator) / value.denominator
    return mpmath.mpmathify(value)


def _values(assignment: Mapping[str, Number], sigma: Optional[int]) -> dict[str, object]:
    values = dict(TOWER.numeric_values(sigma or 1))
    values.update({name: _mp(v) for name, v in assignment.items()})
    return values


def eval_series(series: PuiseuxSeries, assignment: Mapping[str, Number], sigma: Optional[int] = 1) -> mpmath.mpc:
    """Sum of the stored terms at the assignment; the series variable is looked up under its tag"""
    values = _values(assignment, sigma)
    try:
        var = values[series.tag]
    except KeyError:
        raise MissingSymbol(series.tag)
    total = mpmath.mpc(0)
    for e, c in series.terms.items():
        if e.denominator == 1:
            power = var ** e.numerator
        else:
            power = mpmath.power(var, mpmath.mpf(e.numerator) / e.denominator)
        total += c.evaluate(values) * power
    return total


def leading_series(case: ExpansionCase, levels: int) -> PuiseuxSeries:
    """G_0(Lambda) through Lambda^levels, including the negative powers of late-entering cases"""
    expansion = solve(case, 0, levels)
    terms = {j: value for (p, j), value in expansion.raw.items() if p == 0}
    return PuiseuxSeries('L', terms, levels + 1)


class _Integrand:
    """Q0^res(X) at fixed Lambda and G as numeric polynomials in X"""

    def __init__(self, case: ExpansionCase, lam: Fraction, g: mpmath.mpc, values: Mapping[str, object]) -> None:
        expr = rescale_potential(case).expression.subs({h: 0, L: sympy.Rational(lam.numerator, lam.denominator)})
        num, den = sympy.fraction(sympy.cancel(sympy.together(expr)))
        self.num = self._numeric(sympy.Poly(num, X), g, values)
        self.den = self._numeric(sympy.Poly(den, X), g, values)

    @staticmethod
    def _numeric(poly: sympy.Poly, g, values) -> list[mpmath.mpc]:
        out = []
        for coeff in poly.all_coeffs():
            symbols = sorted(coeff.free_symbols, key=str)
            args = []
            for s in symbols:
                if s == G:
                    args.append(g)
                elif str(s) in values:
                    args.append(values[str(s)])
                else:
                    raise MissingSymbol(str(s))
            out.append(mpmath.mpmathify(sympy.lambdify(symbols, coeff, modules='mpmath')(*args)))
        return out

    def __call__(self, z: mpmath.mpc) -> mpmath.mpc:
        return mpmath.polyval(self.num, z) / mpmath.polyval(self.den, z)

    def features(self) -> tuple[list[mpmath.mpc], list[mpmath.mpc]]:
        """(zeros, poles) with multiplicity, numerically coincident pairs cancelled"""
        zeros, poles = _roots(self.num), _roots(self.den)
        eps = mpmath.mpf(10) ** (-mpmath.mp.dps // 2)
        for z in list(zeros):
            match = next((p for p in poles if abs(p - z) < eps), None)
            if match is not None:
                zeros.remove(z)
                poles.remove(match)
        return zeros, poles


def _roots(coeffs: list[mpmath.mpc]) -> list[mpmath.mpc]:
    """Roots with multiplicity; coincident roots converge only linearly and get doubled precision"""
    while coeffs and coeffs[0] == 0:
        coeffs = coeffs[1:]
    at_zero = []
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs = coeffs[:-1]
        at_zero.append(mpmath.mpc(0))
    if len(coeffs) < 2:
        return at_zero
    extraprec, maxsteps = 2 * mpmath.mp.prec + 20, 1000
    for attempt in range(2):
        try:
            return at_zero + list(mpmath.polyroots(coeffs, maxsteps=maxsteps, extraprec=extraprec))
        except mpmath.mp.NoConvergence:
            logger.warning(f'polyroots did not converge in {maxsteps} steps, retrying')
            extraprec, maxsteps = 2 * extraprec, 4 * maxsteps
    raise ContourError(f'cannot locate the roots of a degree {len(coeffs) - 1} polynomial')


def _census(case: ExpansionCase, integrand: _Integrand, center: mpmath.mpc,
            radius: Optional[mpmath.mpf]) -> mpmath.mpf:
    zeros, poles = integrand.features()
    if case.cycle.kind is CycleKind.DOUBLE_ZERO:
        need = 2 * case.cycle.zero_order
        zeros = sorted(zeros, key=lambda z: abs(z - center))
        inside, outside = zeros[:need], zeros[need:] + poles
        if len(inside) < need:
            raise ContourError(f'{case.case_id}: Q0^res has only {len(inside)} zeros near the cycle')
    else:
        poles = sorted(poles, key=lambda z: abs(z - center))
        inside, outside = poles[:2], poles[2:] + zeros
    r_in = max((abs(z - center) for z in inside), default=mpmath.mpf(0))
    r_out = min((abs(z - center) for z in outside), default=mpmath.inf)
    if r_out <= r_in:
        raise ContourError(f'{case.case_id}: enclosed features reach {mpmath.nstr(r_in, 5)}, '
                           f'excluded ones start at {mpmath.nstr(r_out, 5)}')
    if radius is None:
        if r_out == mpmath.inf:
            return 2 * r_in + 1
        return (r_in + r_out) / 2 if r_in > 0 else r_out / 2
    if not r_in < radius < r_out:
        raise ContourError(f'{case.case_id}: radius {mpmath.nstr(radius, 5)} must lie between '
                           f'{mpmath.nstr(r_in, 5)} and {mpmath.nstr(r_out, 5)}')
    return radius


def trapezoid_period(q: Callable[[mpmath.mpc], mpmath.mpc], center: mpmath.mpc, radius: mpmath.mpf,
                     points: int, anchor: Callable[[mpmath.mpc], mpmath.mpc]) -> mpmath.mpc:
    """Trapezoid rule for the integral of sqrt(q) around |X - center| = radius.

    The branch at the first node is the one closest to anchor(X); later nodes
    continue it by proximity.
    """
    step = 2 * mpmath.pi / points
    previous = first = None
    total = mpmath.mpc(0)
    for j in range(points + 1):
        rotation = mpmath.expj(j * step)
        z = center + radius * rotation
        root = mpmath.sqrt(q(z))
        reference = anchor(z) if previous is None else previous
        value = root if abs(root - reference) <= abs(root + reference) else -root
        if previous is None:
            first = value
        elif abs(value - previous) > constants.BRANCH_JUMP_TOLERANCE * abs(previous):
            raise BranchTrackError(f'sqrt(Q) jumps at node {j} ({mpmath.nstr(previous, 8)} -> {mpmath.nstr(value, 8)})')
        if j == points:
            if abs(value - first) > constants.BRANCH_JUMP_TOLERANCE * abs(first):
                raise BranchTrackError('branch of sqrt(Q) does not close around the contour')
            break
        total += value * 1j * radius * rotation
        previous = value
    return total * step


def contour_Vminus1(case: ExpansionCase, cfg: NumConfig, g: Union[Number, str, ParamRat, None] = None) -> ContourResult:
    """Contour integral of sqrt(Q0^res) around the case's cycle, expected 2 pi i nu Lambda^kappa.

    `g` overrides the leading accessory value (a number or ParamRat text); by
    default the solved series G_0(Lambda) truncated at cfg.levels is
    evaluated at cfg.lam.
    """
    kind = case.cycle.kind
    if kind not in (CycleKind.DOUBLE_ZERO, CycleKind.POLE_RESIDUE):
        raise ValueError(f'{case.case_id}: numeric periods are available for double-zero and pole cycles only')
    with mpmath.workdps(cfg.precision):
        sigma = cfg.sigma
        values = _values(cfg.assignment, sigma)
        if g is None:
            g = eval_series(leading_series(case, cfg.levels), {**cfg.assignment, 'L': cfg.lam}, sigma)
        elif isinstance(g, str):
            g = ParamRat.parse(g).evaluate(values)
        elif isinstance(g, ParamRat):
            g = g.evaluate(values)
        integrand = _Integrand(case, cfg.lam, _mp(g), values)
        (point,) = case.cycle.points
        x_star = ParamRat.parse(point.location).evaluate(values)
        center = _mp(cfg.center) if cfg.center is not None else x_star
        radius = _census(case, integrand, center, _mp(cfg.radius) if cfg.radius is not None else None)
        lead = ParamRat.parse(point.lead_root).evaluate(values)
        local = 1 if kind is CycleKind.DOUBLE_ZERO else -1
        logger.debug(f'{case.case_id}: contour |X - {mpmath.nstr(center, 8)}| = {mpmath.nstr(radius, 8)}, '
                     f'{cfg.points} nodes at {cfg.precision} digits')
        try:
            value = trapezoid_period(integrand, center, radius, cfg.points, lambda z: lead * (z - x_star) ** local)
        except BranchTrackError as e:
            raise BranchTrackError(f'{case.case_id}: {e}') from e
        expected = mpmath.mpc(0)
        if 'nu' in values:
            expected = 2j * mpmath.pi * values['nu'] * _mp(cfg.lam) ** case.kappa
        return ContourResult(case.case_id, value, expected, center, radius, cfg.points, cfg.precision)


def convergence_order(case: ExpansionCase, cfg: NumConfig, lambdas: list[Fraction]) -> list[mpmath.mpf]:
    """Log-ratio slopes of |V - expected| over successive Lambda samples"""
    errors = [abs(r.value - r.expected) for r in (contour_Vminus1(case, cfg.with_lambda(lam)) for lam in lambdas)]
    slopes = []
    with mpmath.workdps(cfg.precision):
        for (l1, e1), (l2, e2) in zip(zip(lambdas, errors), zip(lambdas[1:], errors[1:])):
            slopes.append(mpmath.log(e1 / e2) / mpmath.log(_mp(l1) / _mp(l2)))
    return slopes
