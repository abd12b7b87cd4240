"""Finite continued fractions of Weyl functions and Stieltjes extraction.

The Weyl function of a pair with nodes ``x_1 < ... < x_N`` expands as ::

    m(z) = 1 / (-l_1 z + 1 / (q_1(z) + 1 / (... + 1 / (-l_{N+1} z))))

with ``l_n`` the increments of ``2 tanh((x - a) / 2)`` and
``q_n(z) = (omega_n + z upsilon_n) cosh((x_n - a) / 2)**2``.
"""

import functools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import brentq

from ._util import Real, SpectralError
from .forward_spectral import MissingExactData
from .peakon_model import Node, PeakonPair
from .polyalg import PartialFraction, Poly, PoleStructure, RatFunc, \
    partial_fractions, poly_quotient

__all__ = (
    'CFData',
    'PoleHit',
    'NotAdmissible',
    'cf_from_pair',
    'cf_evaluate',
    'cf_to_ratfunc',
    'cf_to_pair',
    'stieltjes_extract',
)

logger = logging.getLogger(__name__)

EXTRACT_TOL = 1e-10
"""Relative size below which base masses and the pole at zero vanish."""

POLE_HIT_TOL = 1e-14
DEGREE_TOL = 1e-8
"""Relative size of the first moment below which a block gets a slope."""

POLE_APPROACH = (1e-9, 1e-12, 1e-15)
ROOT_TOL = 1e-16
SUM_TOL = 1e-9


class PoleHit(SpectralError):
    """The evaluation point is a pole of an intermediate fraction."""

    def __init__(self, z: complex) -> None:
        self.z = z

    def __str__(self) -> str:
        return f'Continued fraction has a pole at z={self.z!r}'


class NotAdmissible(SpectralError):
    """A rational function outside the class of peakon Weyl functions."""

    def __init__(self, msg: str, step: int = 0) -> None:
        self.msg = msg
        self.step = step

    def __str__(self) -> str:
        if self.step:
            return f'{self.msg} (step {self.step})'
        return self.msg


@dataclass(frozen=True)
class CFData:
    """Coefficients of a finite continued fraction.

    :param ls: ``l_1 ... l_{N+1}``.
    :param qs: ``(q_n(0), q_n'(0))`` for ``n = 1 ... N``.
    """

    ls: Tuple[Real, ...]
    qs: Tuple[Tuple[Real, Real], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, 'ls', tuple(self.ls))
        object.__setattr__(self, 'qs', tuple(tuple(q) for q in self.qs))
        if len(self.ls) != len(self.qs) + 1:
            raise ValueError(
                f'Need one more l than q, got {len(self.ls)} and '
                f'{len(self.qs)}',
            )

    @property
    def exact(self) -> bool:
        return all(isinstance(v, Fraction)
                   for v in self.ls + sum(self.qs, ()))


def cf_from_pair(pair: PeakonPair, exact: bool = False) -> CFData:
    """Continued fraction coefficients read off the node data.

    :param pair:
    :param exact: Use the rational tanh coordinates of *pair*.
    :raises MissingExactData:
    """
    ts: List[Real]
    if exact:
        if not pair.has_exact_data:
            raise MissingExactData()
        ts = [n.tanh_half for n in pair.nodes] + [pair.tanh_half_period]
        weights = [(Fraction(n.omega), Fraction(n.upsilon))
                   for n in pair.nodes]
        previous: Real = Fraction(0)
    else:
        ts = [math.tanh((n.x - pair.a) / 2) for n in pair.nodes] \
            + [math.tanh(pair.ell / 2)]
        weights = [(n.omega, n.upsilon) for n in pair.nodes]
        previous = 0.0

    ls = []
    for t in ts:
        ls.append(2 * (t - previous))
        previous = t
    qs = [
        (omega / (1 - t * t), upsilon / (1 - t * t))
        for (omega, upsilon), t in zip(weights, ts)
    ]
    return CFData(tuple(ls), tuple(qs))


def _reciprocal(value: complex, z: complex) -> complex:
    if abs(value) <= POLE_HIT_TOL:
        raise PoleHit(z)
    return 1 / value


def cf_evaluate(cf: CFData, z: complex) -> complex:
    """Evaluate the nested fraction bottom-up.

    :param cf:
    :param z:
    :raises PoleHit:
    """
    acc = -cf.ls[-1] * z
    for l, (q0, q1) in zip(reversed(cf.ls[:-1]), reversed(cf.qs)):
        acc = q0 + q1 * z + _reciprocal(acc, z)
        acc = -l * z + _reciprocal(acc, z)
    return _reciprocal(acc, z)


def cf_to_ratfunc(cf: CFData) -> RatFunc:
    """Collect the nested fraction into a single rational function.

    :param cf:
    """
    z = Poly.z()
    one = Poly((1,))
    num, den = z * -cf.ls[-1], one
    for l, (q0, q1) in zip(reversed(cf.ls[:-1]), reversed(cf.qs)):
        num, den = Poly((q0, q1)) * num + den, num
        num, den = z * -l * num + den, num
    return RatFunc(den, num)


def _extract_exact(m: RatFunc) -> CFData:
    """Euclidean expansion of an exact rational function."""
    num, den = m.num, m.den
    bound = num.degree + den.degree + 2
    ls: List[Real] = []
    qs: List[Tuple[Real, Real]] = []

    while True:
        step = len(ls) + 1
        if step > bound:
            raise NotAdmissible('Expansion does not terminate', step)
        if num.is_zero:
            raise NotAdmissible('Vanishing remainder', step)

        # w = den / num = -l z + 1 / (q + ...)
        if den.degree == num.degree + 1:
            l = -den.leading / num.leading
            g = den + Poly.z() * num * l
        elif den.degree <= num.degree and step == 1:
            l = Fraction(0)
            g = den
        else:
            raise NotAdmissible(
                f'Degrees {num.degree}/{den.degree} do not fit', step,
            )
        if l < 0 or (step > 1 and l == 0):
            raise NotAdmissible(f'Non-positive length {l!r}', step)
        if g.is_zero:
            ls.append(l)
            break

        q, rest = poly_quotient(num, g)
        if q.degree > 1:
            raise NotAdmissible(
                f'Polynomial part of degree {q.degree}', step,
            )
        q0, q1 = q.coeff(0), q.coeff(1)
        if q1 < 0:
            raise NotAdmissible(f'Negative slope {q1!r} in q', step)
        if q0 == 0 and q1 == 0:
            raise NotAdmissible('Vanishing q block', step)
        if rest.is_zero:
            raise NotAdmissible('Expansion ends on a q block', step)

        ls.append(l)
        qs.append((q0, q1))
        num, den = rest, g

    return CFData(tuple(ls), tuple(qs))


def _cauchy(z: float, poles: Sequence[float],
            weights: Sequence[float]) -> float:
    """``sum(w / (k - z))``."""
    return math.fsum(w / (k - z) for k, w in zip(poles, weights))


def _cauchy_slope(z: float, poles: Sequence[float],
                  weights: Sequence[float]) -> float:
    """Derivative of `_cauchy` in *z*."""
    return math.fsum(w / (k - z) ** 2 for k, w in zip(poles, weights))


def _increasing_zero(
    func: Callable[[float], float],
    lo: float,
    hi: float,
    lo_pole: bool = True,
    hi_pole: bool = True,
) -> float:
    """The zero of *func*, increasing on ``(lo, hi)`` with one sign change.

    Endpoints flagged as poles are approached from inside until *func* has
    the sign it takes next to the pole.
    """
    width = hi - lo
    for shrink in POLE_APPROACH:
        left = lo + shrink * width if lo_pole else lo
        right = hi - shrink * width if hi_pole else hi
        left = max(left, float(np.nextafter(lo, hi))) if lo_pole else left
        right = min(right, float(np.nextafter(hi, lo))) if hi_pole else right
        if func(left) < 0 < func(right):
            return float(brentq(
                func, left, right,
                xtol=ROOT_TOL * max(abs(left), abs(right)),
            ))
    raise NotAdmissible(f'No sign change on ({lo!r}, {hi!r})')


def _reciprocal_zeros(
    poles: Sequence[float],
    weights: Sequence[float],
    constant: float,
) -> List[float]:
    """Zeros of ``constant + sum(w / (k - z))`` with all ``w < 0``.

    The function decreases between consecutive poles, so each such interval
    holds one zero; a non-zero *constant* adds one beyond the outermost pole.
    The zero at the origin every remainder carries is returned exactly.
    """
    def negated(z: float) -> float:
        return -constant - _cauchy(z, poles, weights)

    intervals = [(lo, hi, True, True) for lo, hi in zip(poles, poles[1:])]
    reach = 2 * math.fsum(abs(w) for w in weights) / abs(constant) \
        if constant else 0.0
    if constant > 0:
        intervals.insert(0, (poles[0] - reach, poles[0], False, True))
    elif constant < 0:
        intervals.append((poles[-1], poles[-1] + reach, True, False))

    zeros = []
    for lo, hi, lo_pole, hi_pole in intervals:
        if lo < 0 < hi:
            zeros.append(0.0)
        else:
            zeros.append(_increasing_zero(negated, lo, hi, lo_pole, hi_pole))
    if 0.0 not in zeros:
        raise NotAdmissible('Remainder does not vanish at zero')
    return zeros


def _extract_poles(pf: PartialFraction, tol: float) -> CFData:
    """Expansion of a Weyl function given by its poles and residues.

    Each step inverts a sum of simple poles with positive residues. Its
    zeros interlace the poles and become the poles of the reciprocal, with
    residues from the slope there. The constant of the reciprocal vanishes
    exactly when the next block has a positive slope.
    """
    if any(not g > 0 for _, g in pf.poles):
        raise NotAdmissible(f'Non-positive residue in {pf.poles!r}')
    scale = max((abs(k) for k, _ in pf.poles), default=0.0) or 1.0
    origin = [i for i, (k, _) in enumerate(pf.poles)
              if abs(k) <= tol * scale]
    if len(origin) != 1:
        raise NotAdmissible('Need exactly one pole at zero')
    poles = [0.0 if i == origin[0] else float(k)
             for i, (k, _) in enumerate(pf.poles)]
    weights = [float(g) for _, g in pf.poles]
    shortest = tol / (2 * weights[origin[0]])

    ls: List[Real] = []
    qs: List[Tuple[Real, Real]] = []
    total = math.fsum(weights)
    linear, constant = float(pf.linear), float(pf.constant)
    if abs(linear) <= tol * total / scale ** 2:
        linear = 0.0
    if abs(constant) <= tol * total / scale:
        constant = 0.0
    if linear < 0:
        raise NotAdmissible(f'Negative slope {linear!r} in q', 1)
    if linear or constant:
        ls.append(0.0)
        qs.append((constant, linear))

    while True:
        step = len(ls) + 1
        # 1 / f = -l z + c + sum(h / (p - z)), p running over the zeros of f
        total = math.fsum(weights)
        moment = math.fsum(g * k for k, g in zip(poles, weights))
        spread = math.fsum(g * abs(k) for k, g in zip(poles, weights))
        l = 1 / total
        if l <= shortest:
            raise NotAdmissible(f'Vanishing length {l!r}', step)
        ls.append(l)
        if len(poles) == 1:
            return CFData(tuple(ls), tuple(qs))

        f = functools.partial(_cauchy, poles=poles, weights=weights)
        r_poles = [_increasing_zero(f, lo, hi)
                   for lo, hi in zip(poles, poles[1:])]
        r_weights = [-1 / _cauchy_slope(p, poles, weights) for p in r_poles]
        if abs(moment) <= DEGREE_TOL * spread:
            # 1 / r = z / |H| + M / H**2 + O(1 / z)
            h_sum = math.fsum(r_weights)
            h_moment = math.fsum(h * p for h, p in zip(r_weights, r_poles))
            c = 0.0
            q: Tuple[Real, Real] = (h_moment / h_sum ** 2, -1 / h_sum)
        else:
            c = moment / total ** 2
            q = (1 / c, 0.0)
        qs.append(q)

        poles = _reciprocal_zeros(r_poles, r_weights, c)
        weights = [-1 / _cauchy_slope(s, r_poles, r_weights) for s in poles]


def stieltjes_extract(
    m: Union[RatFunc, PartialFraction],
    tol: float = EXTRACT_TOL,
) -> CFData:
    """Expand a Weyl function into its finite continued fraction.

    Exact rational functions are expanded by Euclidean division and give
    exact coefficients. Floating data are expanded from their poles and
    residues; a floating `RatFunc` is brought to that form first.

    :param m:
    :param tol: Relative size below which base masses and the pole at zero
        are snapped to zero.
    :raises NotAdmissible:
    """
    if isinstance(m, RatFunc):
        if m.exact:
            cf = _extract_exact(m)
            logger.debug('Extracted continued fraction of depth %d',
                         len(cf.ls))
            return cf
        try:
            m = partial_fractions(m)
        except PoleStructure as e:
            raise NotAdmissible(str(e)) from e
    cf = _extract_poles(m, tol)
    logger.debug('Extracted continued fraction of depth %d', len(cf.ls))
    return cf


def cf_to_pair(
    cf: CFData,
    ell: float,
    a: float = 0.0,
    tol: float = SUM_TOL,
) -> PeakonPair:
    """Recover node positions and weights from continued fraction data.

    Rational data keep their tanh coordinates, so the resulting pair can be
    fed back to exact mode.

    :param cf:
    :param ell:
    :param a:
    :param tol: Allowed relative mismatch of ``sum(ls)`` and
        ``2 tanh(ell / 2)``.
    :raises NotAdmissible:
    """
    total = sum(cf.ls)
    expected = 2 * math.tanh(ell / 2)
    if abs(float(total) - expected) > tol * expected:
        raise NotAdmissible(
            f'Lengths sum to {float(total)!r}, expected {expected!r}',
        )

    exact = cf.exact
    nodes: List[Node] = []
    t: Real = Fraction(0) if exact else 0.0
    for l, (q0, q1) in zip(cf.ls, cf.qs):
        t += l / 2
        factor = 1 - t * t
        nodes.append(Node(
            x=a + 2 * math.atanh(t),
            omega=float(q0 * factor),
            upsilon=float(q1 * factor),
            tanh_half=t if exact else None,
        ))
    return PeakonPair(
        ell=ell,
        a=a,
        nodes=tuple(nodes),
        tanh_half_period=total / 2 if exact else None,
    )
