"""Real polynomials and rational functions.

Two numeric backends sit behind the same `Poly` interface: coefficient tuples
made only of `int`/`fractions.Fraction` values are handled exactly by
:mod:`sympy` (``QQ`` domain), anything containing a float goes through
:mod:`numpy.polynomial`. Mixing both falls back to floating arithmetic.
"""

import logging
import operator
from dataclasses import InitVar, dataclass
from fractions import Fraction
from functools import reduce
from typing import Any, Callable, Iterable, List, Sequence, Tuple, Union

import numpy as np
import numpy.polynomial.polynomial as npoly
import sympy

from ._util import Real, SpectralError

__all__ = (
    'Poly',
    'RatFunc',
    'PartialFraction',
    'NotRealRooted',
    'PoleStructure',
    'real_roots',
    'poly_quotient',
    'partial_fractions',
    'max_relative_distance',
)

logger = logging.getLogger(__name__)

TRIM_TOL = 1e-12
"""Trailing coefficients below this fraction of the largest one are zero."""

CLUSTER_TOL = 1e-7
IMAG_TOL = 1e-6

_ROOT_EPS = sympy.Rational(1, 10 ** 18)
_Z = sympy.Symbol('z')

Number = Union[int, float, Fraction]


class NotRealRooted(SpectralError):
    """A polynomial expected to split over the reals has non-real roots."""

    def __init__(self, poly: 'Poly', nonreal: Iterable[complex] = ()) -> None:
        self.poly = poly
        self.nonreal = tuple(nonreal)

    def __str__(self) -> str:
        roots = ', '.join(f'{r:.6g}' for r in self.nonreal[:4])
        suffix = f': {roots}' if roots else ''
        return f'{self.poly!r} is not real-rooted{suffix}'


class PoleStructure(SpectralError):
    """A rational function has multiple, non-real or too many poles."""

    def __init__(self, func: 'RatFunc', msg: str) -> None:
        self.func = func
        self.msg = msg

    def __str__(self) -> str:
        return f'{self.msg}: {self.func!r}'


def _is_exact(value: Any) -> bool:
    return isinstance(value, (int, Fraction)) and not isinstance(value, bool)


class Poly:
    """Immutable real polynomial, coefficients in ascending degree.

    Trailing zeros are dropped on construction; in floating mode a trailing
    coefficient counts as zero when it is at most `TRIM_TOL` times the
    largest coefficient.

    :param coeffs: ``coeffs[k]`` is the coefficient of ``z**k``.
    """

    __slots__ = ('_coeffs',)

    def __init__(self, coeffs: Iterable[Number] = ()) -> None:
        values: List[Any] = list(coeffs)
        if all(_is_exact(c) for c in values):
            values = [Fraction(c) for c in values]
            while values and values[-1] == 0:
                values.pop()
        else:
            values = [float(c) for c in values]
            scale = max((abs(c) for c in values), default=0.0)
            while values and abs(values[-1]) <= TRIM_TOL * scale:
                values.pop()
        self._coeffs: Tuple[Any, ...] = tuple(values)

    @classmethod
    def z(cls) -> 'Poly':
        """The identity polynomial ``z``."""
        return cls((0, 1))

    @classmethod
    def from_roots(
        cls,
        roots: Sequence[Real],
        leading: Real = 1,
    ) -> 'Poly':
        """Polynomial ``leading * prod(z - r)``.

        :param roots:
        :param leading:
        """
        if all(_is_exact(r) for r in roots) and _is_exact(leading):
            factors = [cls((-r, 1)) for r in roots]
            return reduce(operator.mul, factors, cls((leading,)))
        return cls(npoly.polyfromroots([float(r) for r in roots])
                   * float(leading))

    @property
    def coeffs(self) -> Tuple[Any, ...]:
        return self._coeffs

    @property
    def degree(self) -> int:
        """Degree, ``-1`` for the zero polynomial."""
        return len(self._coeffs) - 1

    @property
    def exact(self) -> bool:
        """`True` when every coefficient is a `~fractions.Fraction`."""
        return all(isinstance(c, Fraction) for c in self._coeffs)

    @property
    def is_zero(self) -> bool:
        return not self._coeffs

    @property
    def leading(self) -> Real:
        return self._coeffs[-1] if self._coeffs else 0

    def coeff(self, k: int) -> Real:
        """Coefficient of ``z**k`` (zero past the degree)."""
        if 0 <= k < len(self._coeffs):
            return self._coeffs[k]
        return Fraction(0) if self.exact else 0.0

    def to_float(self) -> 'Poly':
        return Poly(float(c) for c in self._coeffs)

    def _floats(self) -> np.ndarray:
        return np.array(self._coeffs or (0.0,), dtype=float)

    def _sympy(self) -> sympy.Poly:
        return sympy.Poly(
            [sympy.Rational(c.numerator, c.denominator)
             for c in reversed(self._coeffs)] or [0],
            _Z,
            domain=sympy.QQ,
        )

    @classmethod
    def _from_sympy(cls, poly: sympy.Poly) -> 'Poly':
        return cls(Fraction(int(c.p), int(c.q))
                   for c in reversed(poly.all_coeffs()))

    def _combine(
        self,
        other: Any,
        float_op: Callable[[np.ndarray, np.ndarray], np.ndarray],
        exact_op: Callable[[sympy.Poly, sympy.Poly], sympy.Poly],
    ) -> 'Poly':
        other = _as_poly(other)
        if self.exact and other.exact:
            return Poly._from_sympy(exact_op(self._sympy(), other._sympy()))
        return Poly(float_op(self._floats(), other._floats()))

    def __add__(self, other: Any) -> 'Poly':
        return self._combine(other, npoly.polyadd, operator.add)

    __radd__ = __add__

    def __sub__(self, other: Any) -> 'Poly':
        return self._combine(other, npoly.polysub, operator.sub)

    def __rsub__(self, other: Any) -> 'Poly':
        return _as_poly(other) - self

    def __neg__(self) -> 'Poly':
        return Poly(-c for c in self._coeffs)

    def __mul__(self, other: Any) -> 'Poly':
        if isinstance(other, Poly):
            return self._combine(other, npoly.polymul, operator.mul)
        return Poly(c * other for c in self._coeffs)

    __rmul__ = __mul__

    def __truediv__(self, other: Number) -> 'Poly':
        if self.exact and _is_exact(other):
            return Poly(c / Fraction(other) for c in self._coeffs)
        return Poly(float(c) / float(other) for c in self._coeffs)

    def derivative(self) -> 'Poly':
        if self.exact:
            return Poly._from_sympy(self._sympy().diff(_Z))
        return Poly(npoly.polyder(self._floats()))

    def __call__(self, z: Any) -> Any:
        if not self._coeffs:
            return Fraction(0) if _is_exact(z) else 0.0 * z
        if self.exact:
            value = npoly.polyval(z, np.array(self._coeffs, dtype=object))
        else:
            value = npoly.polyval(z, self._floats())
        if isinstance(value, np.generic):
            return value.item()
        return value

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash(self._coeffs)

    def __repr__(self) -> str:
        return f"Poly([{', '.join(str(c) for c in self._coeffs)}])"


def _as_poly(value: Any) -> Poly:
    if isinstance(value, Poly):
        return value
    return Poly((value,))


def max_relative_distance(p: Poly, q: Poly) -> float:
    """Max over k of ``|p_k - q_k| / max(1, |p_k|)``.

    :param p: Reference polynomial.
    :param q:
    """
    length = max(len(p.coeffs), len(q.coeffs))
    return max(
        (float(abs(p.coeff(k) - q.coeff(k))) / max(1.0, float(abs(p.coeff(k))))
         for k in range(length)),
        default=0.0,
    )


def poly_quotient(num: Poly, den: Poly) -> Tuple[Poly, Poly]:
    """Euclidean division, ``num = quotient * den + remainder``.

    :param num:
    :param den:
    :raises ZeroDivisionError: when *den* is the zero polynomial.
    """
    if den.is_zero:
        raise ZeroDivisionError('Polynomial division by zero')
    if num.exact and den.exact:
        quotient, remainder = num._sympy().div(den._sympy())
        return Poly._from_sympy(quotient), Poly._from_sympy(remainder)
    if num.degree < den.degree:
        return Poly(), num.to_float()
    quotient, remainder = npoly.polydiv(num._floats(), den._floats())
    # polydiv leaves roundoff in the slot of degree deg(den)
    remainder = remainder[:max(den.degree, 0)]
    return Poly(quotient), Poly(remainder)


def _polish(p: Poly, root: float, multiplicity: int) -> float:
    """Newton refinement; multiple roots are simple roots of a derivative."""
    f = p._floats()
    for _ in range(multiplicity - 1):
        f = npoly.polyder(f)
    df = npoly.polyder(f)
    x = root
    for _ in range(30):
        slope = npoly.polyval(x, df)
        if slope == 0:
            break
        step = npoly.polyval(x, f) / slope
        x -= step
        if abs(step) <= 1e-16 * (1 + abs(x)):
            break
    if abs(x - root) > 10 * CLUSTER_TOL * (1 + abs(root)):
        return root
    return float(x)


def real_roots(
    p: Poly,
    expect_real_rooted: bool = False,
    cluster_tol: float = CLUSTER_TOL,
) -> List[Tuple[float, int]]:
    """Real roots of *p* with multiplicities, ascending.

    Exact polynomials are isolated with sympy, so multiplicities are exact.
    Floating polynomials go through companion-matrix eigenvalues, clustering
    within ``cluster_tol * (1 + |root|)`` and Newton polishing.

    :param p:
    :param expect_real_rooted: Raise when non-real roots are found.
    :param cluster_tol:
    :raises NotRealRooted:
    """
    if p.is_zero:
        raise ValueError('The zero polynomial has no isolated roots')
    if p.degree == 0:
        return []

    if p.exact:
        intervals = p._sympy().intervals(eps=_ROOT_EPS)
        roots = [(float((lo + hi) / 2), int(k)) for (lo, hi), k in intervals]
        if expect_real_rooted and sum(k for _, k in roots) < p.degree:
            raise NotRealRooted(p)
        return roots

    real: List[float] = []
    nonreal: List[complex] = []
    for r in npoly.polyroots(p._floats()):
        if abs(r.imag) <= IMAG_TOL * (1 + abs(r)):
            real.append(float(r.real))
        else:
            nonreal.append(complex(r))
    if nonreal and expect_real_rooted:
        raise NotRealRooted(p, nonreal)

    clusters: List[List[float]] = []
    for r in sorted(real):
        if clusters and abs(r - clusters[-1][-1]) <= \
                cluster_tol * (1 + abs(r)):
            clusters[-1].append(r)
        else:
            clusters.append([r])
    return [
        (_polish(p, sum(c) / len(c), len(c)), len(c))
        for c in clusters
    ]


def _vanishes_at(p: Poly, x: float) -> bool:
    scale = npoly.polyval(abs(x), np.abs(p._floats()))
    return abs(p(x)) <= TRIM_TOL * scale


def _common_roots(num: Poly, den: Poly) -> List[float]:
    """Real roots shared by *num* and *den*, with multiplicity.

    A root of *den* counts when *num* has a root within `CLUSTER_TOL` of it
    and *num* vanishes there to `TRIM_TOL` relative accuracy.
    """
    num_roots = [r for r, _ in real_roots(num)]
    common = []
    for root, mult in real_roots(den):
        near = [r for r in num_roots
                if abs(r - root) <= CLUSTER_TOL * (1 + abs(root))]
        if near and _vanishes_at(num, root):
            common.extend([root] * min(mult, len(near)))
    return common


def _cancel(num: Poly, den: Poly) -> Tuple[Poly, Poly]:
    """Remove common factors, then make the denominator monic."""
    if num.is_zero:
        return num, Poly((1,) if den.exact else (1.0,))
    if num.exact and den.exact:
        g = num._sympy().gcd(den._sympy())
        if g.degree() > 0:
            num = Poly._from_sympy(num._sympy().exquo(g))
            den = Poly._from_sympy(den._sympy().exquo(g))
    elif num.degree > 0 and den.degree > 0:
        for root in _common_roots(num.to_float(), den.to_float()):
            if num.degree < 1:
                break
            factor = Poly((-root, 1.0))
            num = poly_quotient(num, factor)[0]
            den = poly_quotient(den, factor)[0]
            logger.debug('Cancelled common root %r', root)
    lead = den.leading
    return num / lead, den / lead


@dataclass(frozen=True)
class RatFunc:
    """Ratio of two polynomials with monic denominator.

    Common factors are removed unless *reduce* is `False`, which is meant for
    numerators and denominators known to be coprime.

    :param num:
    :param den:
    :param reduce:
    """

    num: Poly
    den: Poly
    reduce: InitVar[bool] = True

    def __post_init__(self, reduce: bool) -> None:
        if self.den.is_zero:
            raise ZeroDivisionError('Rational function with zero denominator')
        if reduce:
            num, den = _cancel(self.num, self.den)
        else:
            lead = self.den.leading
            num, den = self.num / lead, self.den / lead
        object.__setattr__(self, 'num', num)
        object.__setattr__(self, 'den', den)

    @property
    def exact(self) -> bool:
        return self.num.exact and self.den.exact

    def __call__(self, z: Any) -> Any:
        return self.num(z) / self.den(z)


@dataclass(frozen=True)
class PartialFraction:
    """``linear * z + constant + sum(residue / (location - z))``.

    The residue stored with a pole is minus the classical residue.

    :param linear:
    :param constant:
    :param poles: ``(location, residue)`` pairs, locations pairwise distinct.
    """

    linear: Real = 0.0
    constant: Real = 0.0
    poles: Tuple[Tuple[Real, Real], ...] = ()

    def __post_init__(self) -> None:
        locations = [k for k, _ in self.poles]
        if len(set(locations)) != len(locations):
            raise ValueError(f'Repeated pole locations in {locations!r}')

    def __call__(self, z: Any) -> Any:
        return self.linear * z + self.constant \
            + sum(g / (k - z) for k, g in self.poles)

    def to_ratfunc(self) -> RatFunc:
        """Bring all terms over the common denominator ``prod(k - z)``."""
        factors = [Poly((k, -1)) for k, _ in self.poles]
        one = Poly((1,))
        den = reduce(operator.mul, factors, one)
        num = Poly((self.constant, self.linear)) * den
        for i, (_, g) in enumerate(self.poles):
            others = factors[:i] + factors[i + 1:]
            num = num + reduce(operator.mul, others, one) * g
        return RatFunc(num, den)


def partial_fractions(f: RatFunc) -> PartialFraction:
    """Expand a rational function with real simple poles.

    :param f: Numerator degree at most one above the denominator degree.
    :raises PoleStructure:
    """
    if f.num.degree > f.den.degree + 1:
        raise PoleStructure(f, 'Polynomial part of degree above one')
    quotient, remainder = poly_quotient(f.num, f.den)
    try:
        poles = real_roots(f.den, expect_real_rooted=True)
    except NotRealRooted:
        raise PoleStructure(f, 'Non-real poles')
    if any(mult > 1 for _, mult in poles):
        raise PoleStructure(f, 'Multiple poles')
    dden = f.den.derivative()
    terms = tuple(
        (k, -float(remainder(k)) / float(dden(k)))
        for k, _ in poles
    )
    return PartialFraction(
        linear=float(quotient.coeff(1)),
        constant=float(quotient.coeff(0)),
        poles=terms,
    )
