"""Reconstruction from a discriminant and a point of its isospectral torus."""

import functools
import itertools
import logging
import math
from dataclasses import dataclass
from typing import Iterator, List, Sequence, Tuple, Union

from ._util import SpectralError, max_relative_error, relative_error
from .collection import Collection
from .forward_spectral import PERIODIC, DirichletData, GapStructure, \
    gap_structure, spectral_data
from .inverse_dirichlet import DirichletSpectralInput, VerificationFailed, \
    solve_dirichlet
from .peakon_model import PeakonPair
from .polyalg import Poly, max_relative_distance, poly_quotient, real_roots

__all__ = (
    'DivisorPoint',
    'InadmissibleDiscriminant',
    'BadNormalization',
    'CriticalValueInsideBand',
    'DivisorOffTorus',
    'NegativeUpsilonA',
    'NonpositiveGamma',
    'BaseMassMismatch',
    'validate_discriminant',
    'divisor_of',
    'torus_chart',
    'torus_angles',
    'predicted_upsilon_a',
    'solve_periodic',
    'isospectral_sample',
    'isospectral_stream',
)

logger = logging.getLogger(__name__)

TORUS_TOL = 1e-7
NORMALIZATION_TOL = 1e-10
BASE_SNAP_TOL = 1e-10

Samples = Union[int, Sequence[int]]


class InadmissibleDiscriminant(SpectralError):
    """A polynomial that cannot be the discriminant of any pair."""

    def __init__(self, msg: str) -> None:
        self.msg = msg

    def __str__(self) -> str:
        return self.msg


class BadNormalization(InadmissibleDiscriminant):

    def __init__(self, value: float, expected: float) -> None:
        super().__init__(
            f'Discriminant at zero is {value!r}, expected cosh(ell/2) = '
            f'{expected!r}',
        )
        self.value = value
        self.expected = expected


class CriticalValueInsideBand(InadmissibleDiscriminant):

    def __init__(self, point: float, value: float) -> None:
        super().__init__(
            f'Critical point {point!r} has |value| {abs(value)!r} below 1',
        )
        self.point = point
        self.value = value


class DivisorOffTorus(SpectralError):
    """A divisor point violates ``zeta² = Δ(kappa)² - 1`` or its gap."""

    def __init__(self, index: int, kappa: float, zeta: float,
                 reason: str) -> None:
        self.index = index
        self.kappa = kappa
        self.zeta = zeta
        self.reason = reason

    def __str__(self) -> str:
        return f'Divisor point ({self.kappa!r}, {self.zeta!r}) in gap ' \
            f'{self.index}: {self.reason}'


class NegativeUpsilonA(SpectralError):

    def __init__(self, value: float) -> None:
        self.value = value

    def __str__(self) -> str:
        return f'Base-point upsilon would be {self.value!r}'


class NonpositiveGamma(SpectralError):

    def __init__(self, kappa: float, gamma: float) -> None:
        self.kappa = kappa
        self.gamma = gamma

    def __str__(self) -> str:
        return f'Norming constant {self.gamma!r} at kappa={self.kappa!r}'


class BaseMassMismatch(SpectralError):
    """Base-point upsilon disagrees with the eigenvalue products."""

    def __init__(self, upsilon_a: float, predicted: float) -> None:
        self.upsilon_a = upsilon_a
        self.predicted = predicted

    def __str__(self) -> str:
        return f'Base-point upsilon {self.upsilon_a!r}, eigenvalue ' \
            f'products give {self.predicted!r}'


@dataclass(frozen=True)
class DivisorPoint:
    """A point of the isospectral torus, one ``(kappa, zeta)`` per gap.

    :param points: Ordered by gap index.
    """

    points: Tuple[Tuple[float, float], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(
            self, 'points',
            tuple((float(k), float(z)) for k, z in self.points),
        )

    @property
    def kappas(self) -> Tuple[float, ...]:
        return tuple(k for k, _ in self.points)

    @property
    def zetas(self) -> Tuple[float, ...]:
        return tuple(z for _, z in self.points)


def divisor_of(data: DirichletData) -> DivisorPoint:
    return DivisorPoint(tuple(zip(data.kappas, data.zetas)))


def validate_discriminant(
    delta: Poly,
    ell: float,
    tol: float = NORMALIZATION_TOL,
) -> GapStructure:
    """Check that *delta* is an admissible discriminant for period *ell*.

    :param delta:
    :param ell:
    :param tol:
    :raises BadNormalization:
    :raises NotRealRooted:
    :raises CriticalValueInsideBand:
    """
    expected = math.cosh(ell / 2)
    value = float(delta(0.0))
    if relative_error(expected, value) > tol:
        raise BadNormalization(value, expected)
    if delta.degree >= 1:
        for root, mult in real_roots(delta, expect_real_rooted=True):
            if mult > 1:
                raise CriticalValueInsideBand(root, 0.0)
    if delta.degree >= 2:
        for point, _ in real_roots(delta.derivative()):
            value = float(delta(point))
            if abs(value) < 1 - tol:
                raise CriticalValueInsideBand(point, value)
    return gap_structure(delta)


def torus_angles(samples: int) -> List[float]:
    """Equally spaced angles in ``(-pi, pi]``, the last one being pi."""
    return [-math.pi + 2 * math.pi * (k + 1) / samples
            for k in range(samples)]


def torus_chart(
    gaps: GapStructure,
    index: int,
    theta: float,
) -> Tuple[float, float]:
    """Divisor point of gap *index* at angle *theta*.

    Interior gaps are traversed as ellipses around the gap, outermost gaps as
    their one-point compactification with ``theta = pi`` at infinity.

    :param gaps:
    :param index:
    :param theta:
    """
    gap = gaps.gap(index)
    if gap.closed:
        return gap.lower, 0.0
    cos = math.cos(theta)
    if not gap.outermost:
        mid = (gap.lower + gap.upper) / 2
        half = (gap.upper - gap.lower) / 2
        kappa = mid + half * cos
    else:
        edge = gap.upper if math.isinf(gap.lower) else gap.lower
        direction = -1 if math.isinf(gap.lower) else 1
        if cos == -1:
            return direction * math.inf, 0.0
        width = max(1.0, abs(edge))
        kappa = edge + direction * width * (1 - cos) / (1 + cos)
    if abs(cos) == 1:
        return kappa, 0.0
    value = float(gaps.delta(kappa))
    height = math.sqrt(max(value * value - 1, 0.0))
    return kappa, -math.copysign(height, math.sin(theta))


def _check_divisor(
    gaps: GapStructure,
    divisor: DivisorPoint,
    tol: float,
) -> None:
    if len(divisor.points) != len(gaps.gaps):
        raise DivisorOffTorus(
            0, math.nan, math.nan,
            f'{len(divisor.points)} points for {len(gaps.gaps)} gaps',
        )
    for gap, (kappa, zeta) in zip(gaps.gaps, divisor.points):
        if math.isinf(kappa):
            if kappa not in (gap.lower, gap.upper):
                raise DivisorOffTorus(gap.index, kappa, zeta,
                                      'infinite outside an outermost gap')
            if abs(zeta) > tol:
                raise DivisorOffTorus(gap.index, kappa, zeta,
                                      'non-zero height at infinity')
            continue
        if not gap.contains(kappa, tol):
            raise DivisorOffTorus(gap.index, kappa, zeta, 'outside its gap')
        value = float(gaps.delta(kappa))
        if abs(zeta * zeta - (value * value - 1)) > tol * (1 + value * value):
            raise DivisorOffTorus(gap.index, kappa, zeta,
                                  'not on the curve')


def _snap(value: float, scale: float) -> float:
    return 0.0 if abs(value) <= BASE_SNAP_TOL * scale else value


def _verify(
    pair: PeakonPair,
    delta: Poly,
    divisor: DivisorPoint,
    tol: float,
) -> None:
    data = spectral_data(pair)
    residual = max_relative_distance(delta, data.delta)
    finite = [(k, j) for k, j in zip(divisor.kappas, data.dirichlet.kappas)
              if not (math.isinf(k) and k == j)]
    kappa_residual = max_relative_error(*zip(*finite)) if finite else 0.0
    residual = max(residual, kappa_residual)
    zeta_residual = max_relative_error(divisor.zetas, data.dirichlet.zetas)
    logger.debug('Periodic reconstruction residual %.3g, heights %.3g',
                 residual, zeta_residual)
    if residual > tol:
        raise VerificationFailed(residual, tol)
    if zeta_residual > math.sqrt(tol):
        raise VerificationFailed(zeta_residual, math.sqrt(tol))


def predicted_upsilon_a(
    gaps: GapStructure,
    sigma: Sequence[float],
    ell: float,
) -> float:
    """Base-point upsilon implied by the periodic and Dirichlet spectra.

    Only meaningful when the divisor sits at infinity in both outermost
    gaps.

    :param gaps:
    :param sigma: Finite Dirichlet eigenvalues.
    :param ell:
    """
    lambdas = math.prod(gaps.spectrum(PERIODIC))
    return -(math.cosh(ell / 2) - 1) / math.sinh(ell / 2) \
        * math.prod(sigma) / lambdas


def solve_periodic(
    delta: Poly,
    divisor: DivisorPoint,
    ell: float,
    a: float = 0.0,
    tol: float = TORUS_TOL,
    verify: bool = True,
) -> PeakonPair:
    """The unique pair with discriminant *delta* and divisor *divisor*.

    :param delta:
    :param divisor:
    :param ell:
    :param a: Base point of the result.
    :param tol:
    :param verify: Recompute the discriminant and divisor of the result.
    :raises InadmissibleDiscriminant:
    :raises DivisorOffTorus:
    :raises NegativeUpsilonA:
    :raises NonpositiveGamma:
    :raises BaseMassMismatch:
    :raises NotAdmissible:
    """
    delta = delta.to_float()
    gaps = validate_discriminant(delta, ell)
    _check_divisor(gaps, divisor, tol)

    finite = [(k, z) for k, z in divisor.points if not math.isinf(k)]
    sigma = [k for k, _ in finite]
    leading = 2 * math.sinh(ell / 2) * math.prod(-1 / k for k in sigma)
    varsigma = Poly.from_roots(sigma, leading)

    excess = -(delta * 2 - 2)
    quotient, _ = poly_quotient(excess, Poly.z() * varsigma)
    if quotient.degree > 1:
        raise InadmissibleDiscriminant(
            f'Divisor leaves a polynomial part of degree {quotient.degree}',
        )
    scale = max(abs(c) for c in excess.coeffs + (1.0,)) \
        / max(abs(c) for c in varsigma.coeffs)
    upsilon_a = _snap(float(quotient.coeff(1)), scale)
    omega_a = _snap(float(quotient.coeff(0)), scale)
    if upsilon_a < 0:
        if upsilon_a < -tol * scale:
            raise NegativeUpsilonA(upsilon_a)
        upsilon_a = 0.0
    if sum(math.isinf(k) for k in divisor.kappas) == 2:
        predicted = predicted_upsilon_a(gaps, sigma, ell)
        logger.debug('Base-point upsilon %r, predicted %r',
                     upsilon_a, predicted)
        if not upsilon_a > 0 or relative_error(predicted, upsilon_a) > tol:
            raise BaseMassMismatch(upsilon_a, predicted)

    dvarsigma = varsigma.derivative()
    gammas = []
    for kappa, zeta in finite:
        gamma = 1 / (kappa * float(dvarsigma(kappa))
                     * (float(delta(kappa)) - zeta))
        if not gamma > 0:
            raise NonpositiveGamma(kappa, gamma)
        gammas.append(gamma)

    spec = DirichletSpectralInput(
        sigma=tuple(sigma),
        gammas=tuple(gammas),
        omega_a=omega_a,
        upsilon_a=upsilon_a,
        ell=ell,
        a=a,
    )
    pair = solve_dirichlet(spec, tol=tol, verify=False)
    if verify:
        _verify(pair, delta, divisor, tol)
    return pair


def _counts(gaps: GapStructure, samples: Samples) -> List[int]:
    if isinstance(samples, int):
        return [samples] * len(gaps.gaps)
    if len(samples) != len(gaps.gaps):
        raise ValueError(
            f'{len(samples)} sample counts for {len(gaps.gaps)} gaps',
        )
    return list(samples)


def _torus_grid(
    gaps: GapStructure,
    samples: Samples,
) -> Iterator[DivisorPoint]:
    axes = []
    for gap, count in zip(gaps.gaps, _counts(gaps, samples)):
        if gap.closed:
            axes.append([torus_chart(gaps, gap.index, 0.0)])
        else:
            axes.append([torus_chart(gaps, gap.index, theta)
                         for theta in torus_angles(count)])
    for points in itertools.product(*axes):
        yield DivisorPoint(points)


def isospectral_sample(
    delta: Poly,
    ell: float,
    a: float = 0.0,
    samples: Samples = 4,
    tol: float = TORUS_TOL,
) -> List[PeakonPair]:
    """Pairs on a product grid of the isospectral torus of *delta*.

    :param delta:
    :param ell:
    :param a:
    :param samples: Angles per open gap, one count or one per gap.
    :param tol:
    """
    gaps = validate_discriminant(delta.to_float(), ell)
    return [solve_periodic(delta, divisor, ell, a, tol=tol)
            for divisor in _torus_grid(gaps, samples)]


def isospectral_stream(
    delta: Poly,
    ell: float,
    a: float = 0.0,
    samples: Samples = 4,
    jobs: int = 4,
    tol: float = TORUS_TOL,
) -> Collection[PeakonPair]:
    """Like `isospectral_sample`, solving grid points in worker threads.

    Items come out in grid order.

    :param delta:
    :param ell:
    :param a:
    :param samples:
    :param jobs: Maximum number of concurrent solves.
    :param tol:
    """
    gaps = validate_discriminant(delta.to_float(), ell)
    solve = functools.partial(_solve_at, delta, ell, a, tol)
    return Collection.map(solve, _torus_grid(gaps, samples), task_limit=jobs)


def _solve_at(
    delta: Poly,
    ell: float,
    a: float,
    tol: float,
    divisor: DivisorPoint,
) -> PeakonPair:
    return solve_periodic(delta, divisor, ell, a, tol=tol)
