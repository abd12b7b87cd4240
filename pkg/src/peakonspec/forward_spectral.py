"""Monodromy, Floquet discriminant and the spectra derived from it."""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from ._util import Real, SpectralError
from .peakon_model import Node, PeakonPair
from .polyalg import PartialFraction, Poly, RatFunc, poly_quotient, \
    real_roots

__all__ = (
    'Monodromy',
    'Eigenvalue',
    'Gap',
    'GapStructure',
    'DirichletData',
    'SpectralData',
    'BaseMassCheck',
    'InternalInconsistency',
    'MissingExactData',
    'monodromy',
    'discriminant',
    'floquet_spectra',
    'gap_structure',
    'dirichlet_data',
    'weyl_function',
    'spectral_data',
    'norming_constant_integral',
    'norming_constant_weighted_sum',
    'base_mass_check',
    'spectrum_sign',
)

logger = logging.getLogger(__name__)

GAP_TOL = 1e-7
PERIODIC = 'periodic'
ANTIPERIODIC = 'antiperiodic'

RootList = List[Tuple[float, int]]


class InternalInconsistency(SpectralError):
    """Computed spectra contradict the structure theory (numeric failure)."""

    def __init__(self, msg: str) -> None:
        self.msg = msg

    def __str__(self) -> str:
        return self.msg


class MissingExactData(SpectralError):
    """Exact mode requested for a pair without rational tanh coordinates."""

    def __str__(self) -> str:
        return 'Exact mode needs tanh_half on every node and ' \
            'tanh_half_period on the pair'


@dataclass(frozen=True)
class Monodromy:
    """Fundamental solutions and their derivatives at ``a + ell``.

    :param c:
    :param s:
    :param c_prime:
    :param s_prime:
    :param ell:
    :param a:
    """

    c: Poly
    s: Poly
    c_prime: Poly
    s_prime: Poly
    ell: float
    a: float

    @property
    def exact(self) -> bool:
        return all(p.exact for p in (self.c, self.s, self.c_prime,
                                     self.s_prime))

    def determinant(self) -> Poly:
        return self.c * self.s_prime - self.s * self.c_prime


@dataclass(frozen=True)
class Eigenvalue:
    """A zero of Δ² - 1 with its label."""

    label: int
    value: float
    kind: str
    multiplicity: int


@dataclass(frozen=True)
class Gap:
    """Closed gap interval with extended-real endpoints."""

    index: int
    lower: float
    upper: float

    @property
    def outermost(self) -> bool:
        return math.isinf(self.lower) or math.isinf(self.upper)

    @property
    def closed(self) -> bool:
        return self.lower == self.upper

    def contains(self, value: float, tol: float = GAP_TOL) -> bool:
        if math.isinf(value):
            return value in (self.lower, self.upper)
        lower = self.lower - tol * (1 + abs(self.lower)) \
            if not math.isinf(self.lower) else self.lower
        upper = self.upper + tol * (1 + abs(self.upper)) \
            if not math.isinf(self.upper) else self.upper
        return lower <= value <= upper


@dataclass(frozen=True)
class GapStructure:
    """Labeled band edges and gaps of a discriminant.

    :param lambdas: Zeros of Δ² - 1 in label order, double zeros twice.
    :param I_minus:
    :param I_plus:
    :param gaps: One gap per index of ``indices``.
    :param delta:
    """

    lambdas: Tuple[Eigenvalue, ...]
    I_minus: int
    I_plus: int
    gaps: Tuple[Gap, ...]
    delta: Poly

    @property
    def indices(self) -> Tuple[int, ...]:
        return tuple(g.index for g in self.gaps)

    def gap(self, index: int) -> Gap:
        return self.gaps[self.indices.index(index)]

    def spectrum(self, kind: str) -> List[float]:
        """Periodic or antiperiodic eigenvalues, ascending, with repeats."""
        return [e.value for e in self.lambdas if e.kind == kind]

    def locate(self, value: float, tol: float = GAP_TOL) -> List[int]:
        """Indices of all gaps containing *value*."""
        return [g.index for g in self.gaps if g.contains(value, tol)]


@dataclass(frozen=True)
class DirichletData:
    """Dirichlet divisor data relative to a base point.

    :param indices: Gap indices, ascending.
    :param kappas: One extended real per gap index.
    :param gammas: Norming constant per finite kappa, in order.
    :param zetas: Divisor height per gap index.
    :param omega_a:
    :param upsilon_a:
    """

    indices: Tuple[int, ...]
    kappas: Tuple[float, ...]
    gammas: Tuple[float, ...]
    zetas: Tuple[float, ...]
    omega_a: float = 0.0
    upsilon_a: float = 0.0

    @property
    def sigma(self) -> Tuple[float, ...]:
        """The finite Dirichlet eigenvalues."""
        return tuple(k for k in self.kappas if not math.isinf(k))


@dataclass(frozen=True)
class SpectralData:
    """Everything `spectral_data` computes in one pass."""

    pair: PeakonPair
    monodromy: Monodromy
    delta: Poly
    gaps: GapStructure
    dirichlet: DirichletData


@dataclass(frozen=True)
class BaseMassCheck:
    """Base-point mass predicted from products of eigenvalues.

    :param case: ``'upsilon'``, ``'omega'``, ``'interior'`` or ``'trivial'``.
    :param expected: Quantity read off the pair.
    :param periodic: Prediction from the periodic spectrum.
    :param antiperiodic: Prediction from the antiperiodic spectrum.
    """

    case: str
    expected: float
    periodic: float
    antiperiodic: float


def _rational_sqrt(value: Fraction) -> Optional[Fraction]:
    num = math.isqrt(value.numerator)
    den = math.isqrt(value.denominator)
    if num * num == value.numerator and den * den == value.denominator:
        return Fraction(num, den)
    return None


def _float_monodromy(pair: PeakonPair) -> Monodromy:
    one, zero = Poly((1.0,)), Poly((0.0,))
    c, s, cp, sp = one, zero, zero, one
    position = pair.a

    def segment(d: float) -> None:
        nonlocal c, s, cp, sp
        ch, sh = math.cosh(d / 2), math.sinh(d / 2)
        c, cp = c * ch + cp * (2 * sh), c * (sh / 2) + cp * ch
        s, sp = s * ch + sp * (2 * sh), s * (sh / 2) + sp * ch

    for node in pair.nodes:
        segment(node.x - position)
        jump = Poly((0.0, node.omega, node.upsilon))
        cp, sp = cp - jump * c, sp - jump * s
        position = node.x
    segment(pair.a + pair.ell - position)
    return Monodromy(c, s, cp, sp, pair.ell, pair.a)


def _exact_monodromy(pair: PeakonPair) -> Monodromy:
    if not pair.has_exact_data:
        raise MissingExactData()
    one, zero = Poly((1,)), Poly((0,))
    c, s, cp, sp = one, zero, zero, one
    scale_sq = Fraction(1)
    previous = Fraction(0)

    def segment(t: Fraction) -> None:
        nonlocal c, s, cp, sp, scale_sq, previous
        tau = (t - previous) / (1 - t * previous)
        scale_sq /= 1 - tau * tau
        c, cp = c + cp * (2 * tau), c * (tau / 2) + cp
        s, sp = s + sp * (2 * tau), s * (tau / 2) + sp
        previous = t

    for node in pair.nodes:
        segment(node.tanh_half)
        jump = Poly((0, Fraction(node.omega), Fraction(node.upsilon)))
        cp, sp = cp - jump * c, sp - jump * s
    segment(pair.tanh_half_period)

    scale: Real
    root = _rational_sqrt(scale_sq)
    if root is None:
        logger.warning(
            'cosh product %s is not a rational square, '
            'falling back to floating coefficients', scale_sq,
        )
        scale = math.sqrt(scale_sq)
        c, s, cp, sp = (p.to_float() for p in (c, s, cp, sp))
    else:
        scale = root
    return Monodromy(c * scale, s * scale, cp * scale, sp * scale,
                     pair.ell, pair.a)


def monodromy(pair: PeakonPair, exact: bool = False) -> Monodromy:
    """Transfer matrix of the spectral problem across one period.

    :param pair:
    :param exact: Use rational tanh coordinates and exact arithmetic.
    :raises MissingExactData:
    """
    if exact:
        return _exact_monodromy(pair)
    return _float_monodromy(pair)


def discriminant(mono: Monodromy) -> Poly:
    """Floquet discriminant, half the trace of the monodromy matrix."""
    return (mono.c + mono.s_prime) / 2


def floquet_spectra(delta: Poly) -> Tuple[RootList, RootList]:
    """Periodic (zeros of Δ - 1) and antiperiodic (zeros of Δ + 1) spectra.

    :param delta:
    :raises NotRealRooted:
    :raises InternalInconsistency: on zero or triple eigenvalues.
    """
    if delta.degree <= 0:
        return [], []
    periodic = real_roots(delta - 1, expect_real_rooted=True)
    antiperiodic = real_roots(delta + 1, expect_real_rooted=True)
    for value, mult in periodic + antiperiodic:
        if value == 0 or mult > 2:
            raise InternalInconsistency(
                f'Eigenvalue {value!r} of multiplicity {mult}',
            )
    return periodic, antiperiodic


def gap_structure(delta: Poly) -> GapStructure:
    """Label the zeros of Δ² - 1 and assemble the gaps.

    :param delta:
    """
    periodic, antiperiodic = floquet_spectra(delta)
    entries = sorted(
        [(v, PERIODIC, m) for v, m in periodic for _ in range(m)]
        + [(v, ANTIPERIODIC, m) for v, m in antiperiodic for _ in range(m)],
    )
    negative = [e for e in entries if e[0] < 0]
    positive = [e for e in entries if e[0] > 0]
    if len(negative) % 2 or len(positive) % 2:
        raise InternalInconsistency(
            f'Odd number of band edges: {len(negative)} negative, '
            f'{len(positive)} positive',
        )
    I_minus, I_plus = len(negative) // 2, len(positive) // 2

    labels = list(range(-len(negative), 0)) + \
        list(range(1, len(positive) + 1))
    lambdas = tuple(
        Eigenvalue(label, value, kind, mult)
        for label, (value, kind, mult) in zip(labels, negative + positive)
    )
    lam: Dict[int, float] = {e.label: e.value for e in lambdas}

    gaps: List[Gap] = []
    for i in range(-I_minus, 0):
        lower = -math.inf if i == -I_minus else lam[2 * i - 1]
        gaps.append(Gap(i, lower, lam[2 * i]))
    for i in range(1, I_plus + 1):
        upper = math.inf if i == I_plus else lam[2 * i + 1]
        gaps.append(Gap(i, lam[2 * i], upper))
    return GapStructure(lambdas, I_minus, I_plus, tuple(gaps), delta)


def _dirichlet(
    pair: PeakonPair,
    mono: Monodromy,
    gaps: GapStructure,
) -> DirichletData:
    found: Dict[int, Tuple[float, float, float]] = {}
    if mono.s.degree > 0:
        roots = real_roots(mono.s, expect_real_rooted=True)
        ds = mono.s.derivative()
        for kappa, mult in roots:
            if mult != 1:
                raise InternalInconsistency(
                    f'Dirichlet eigenvalue {kappa!r} is not simple',
                )
            places = gaps.locate(kappa)
            if len(places) != 1 or places[0] in found:
                raise InternalInconsistency(
                    f'Dirichlet eigenvalue {kappa!r} lies in gaps {places}',
                )
            sp = float(mono.s_prime(kappa))
            gamma = 1 / (kappa * float(ds(kappa)) * sp)
            zeta = float(gaps.delta(kappa)) - sp
            found[places[0]] = (kappa, gamma, zeta)
    logger.debug('Found %d Dirichlet eigenvalues', len(found))

    kappas: List[float] = []
    gammas: List[float] = []
    zetas: List[float] = []
    for gap in gaps.gaps:
        if gap.index in found:
            kappa, gamma, zeta = found[gap.index]
            kappas.append(kappa)
            gammas.append(gamma)
            zetas.append(zeta)
        elif gap.outermost:
            kappas.append(gap.lower if math.isinf(gap.lower) else gap.upper)
            zetas.append(0.0)
        else:
            raise InternalInconsistency(
                f'Gap {gap.index} has no Dirichlet eigenvalue',
            )

    base = pair.base_node
    return DirichletData(
        indices=gaps.indices,
        kappas=tuple(kappas),
        gammas=tuple(gammas),
        zetas=tuple(zetas),
        omega_a=base.omega if base else 0.0,
        upsilon_a=base.upsilon if base else 0.0,
    )


def spectral_data(pair: PeakonPair, exact: bool = False) -> SpectralData:
    """Monodromy, discriminant, gaps and Dirichlet data in one pass.

    :param pair:
    :param exact:
    """
    mono = monodromy(pair, exact)
    delta = discriminant(mono)
    gaps = gap_structure(delta)
    return SpectralData(pair, mono, delta, gaps, _dirichlet(pair, mono, gaps))


def dirichlet_data(pair: PeakonPair, exact: bool = False) -> DirichletData:
    """Dirichlet eigenvalues, norming constants and divisors of *pair*.

    :param pair:
    :param exact:
    :raises InternalInconsistency:
    """
    return spectral_data(pair, exact).dirichlet


def weyl_function(mono: Monodromy) -> Tuple[RatFunc, PartialFraction]:
    """Weyl-Titchmarsh function ``-c / (z s)`` and its partial fractions.

    ``c`` and ``s`` never share a root (``det M = 1``), so no cancellation
    is attempted and the poles are read off the roots of ``s`` directly.

    :param mono:
    """
    f = RatFunc(-mono.c, Poly.z() * mono.s, reduce=False)
    quotient, _ = poly_quotient(f.num, f.den)
    kappas = [k for k, _ in real_roots(mono.s, expect_real_rooted=True)] \
        if mono.s.degree > 0 else []
    ds = mono.s.derivative()
    poles = [(0.0, float(mono.c(0)) / float(mono.s(0)))] + [
        (k, float(mono.c(k)) / (k * float(ds(k)))) for k in kappas
    ]
    return f, PartialFraction(
        linear=float(quotient.coeff(1)),
        constant=float(quotient.coeff(0)),
        poles=tuple(sorted(poles)),
    )


def _walk(pair: PeakonPair, z: float) -> Iterator[Tuple[float, Optional[Node],
                                                       float, float]]:
    """Follow the Dirichlet solution ``s(z, ·)``.

    Yields ``(length, None, f, f')`` at the start of each node-free segment
    and ``(0, node, f, f')`` at each node, values taken from the left.
    """
    f, fp = 0.0, 1.0
    position = pair.a
    stops = [(n.x, n) for n in pair.nodes] + [(pair.a + pair.ell, None)]
    for x, node in stops:
        h = x - position
        yield h, None, f, fp
        ch, sh = math.cosh(h / 2), math.sinh(h / 2)
        f, fp = ch * f + 2 * sh * fp, sh / 2 * f + ch * fp
        if node is not None:
            yield 0.0, node, f, fp
            fp -= (z * node.omega + z * z * node.upsilon) * f
        position = x


def norming_constant_integral(pair: PeakonPair, kappa: float) -> float:
    """Norming constant from its energy-integral definition.

    :param pair:
    :param kappa: A finite Dirichlet eigenvalue.
    """
    total = 0.0
    for h, node, f, fp in _walk(pair, kappa):
        if node is None:
            alpha, beta = (f + 2 * fp) / 2, (f - 2 * fp) / 2
            total += (alpha ** 2 * math.expm1(h)
                      - beta ** 2 * math.expm1(-h)) / 2
        else:
            total += kappa ** 2 * f ** 2 * node.upsilon
    return 1 / total


def norming_constant_weighted_sum(pair: PeakonPair, kappa: float) -> float:
    """``Σ s(κ, x_n)² (ω_n + 2κυ_n)``, which equals ``1 / (κ γ_κ)``.

    :param pair:
    :param kappa:
    """
    return math.fsum(
        f ** 2 * (node.omega + 2 * kappa * node.upsilon)
        for _, node, f, _ in _walk(pair, kappa) if node is not None
    )


def base_mass_check(pair: PeakonPair) -> BaseMassCheck:
    """Predict the base-point mass from eigenvalue products.

    :param pair:
    """
    data = spectral_data(pair)
    ell = pair.ell
    kappas = math.prod(data.dirichlet.sigma)

    def ratio(kind: str, sign: int) -> float:
        lambdas = math.prod(data.gaps.spectrum(kind))
        return (math.cosh(ell / 2) - sign) / math.sinh(ell / 2) \
            * kappas / lambdas

    periodic = ratio(PERIODIC, 1)
    antiperiodic = ratio(ANTIPERIODIC, -1)
    base = pair.base_node
    if not pair.nodes:
        return BaseMassCheck('trivial', 0.0, 0.0, 0.0)
    if base is not None and base.upsilon > 0:
        return BaseMassCheck('upsilon', base.upsilon, -periodic,
                             -antiperiodic)
    if base is not None:
        return BaseMassCheck('omega', base.omega, periodic, antiperiodic)
    first, last = pair.nodes[0].x, pair.nodes[-1].x
    expected = (1 / math.tanh((first - pair.a) / 2)
                + 1 / math.tanh((pair.a + ell - last) / 2)) / 2
    return BaseMassCheck('interior', expected, periodic, antiperiodic)


def spectrum_sign(values: Sequence[float]) -> Optional[int]:
    """``1`` if all values are positive, ``-1`` if all negative, else `None`.

    An empty spectrum counts as positive.
    """
    if all(v > 0 for v in values):
        return 1
    if all(v < 0 for v in values):
        return -1
    return None
