"""Periodic multi-peakon pairs and closed-form evaluation of their profile."""

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ._util import SpectralError

__all__ = (
    'Node',
    'PeakonPair',
    'InvalidPair',
    'DuplicatePosition',
    'eval_state',
    'conserved_quantities',
    'eval_P',
    'rebase',
    'from_momenta',
    'pair_distance',
    'interior_sign',
)

POSITION_TOL = 1e-12
TANH_TOL = 1e-9


class InvalidPair(SpectralError):
    """Node data violate the normalization of the phase space."""

    def __init__(self, msg: str) -> None:
        self.msg = msg

    def __str__(self) -> str:
        return self.msg


class DuplicatePosition(InvalidPair):
    """Two peaks sit at the same position modulo the period."""

    def __init__(self, first: float, second: float, ell: float) -> None:
        super().__init__(
            f'Positions {first!r} and {second!r} coincide modulo {ell!r}',
        )
        self.first = first
        self.second = second


@dataclass(frozen=True)
class Node:
    """Point masses of ω and υ at a position.

    :param x: Position.
    :param omega: Mass of ω (any sign).
    :param upsilon: Mass of υ (non-negative).
    :param tanh_half: Exact ``tanh((x - a) / 2)``, only needed in exact mode.
    """

    x: float
    omega: float
    upsilon: float = 0.0
    tanh_half: Optional[Fraction] = None


@dataclass(frozen=True)
class PeakonPair:
    """A pair (u, μ) of the periodic multi-peakon phase space.

    :param ell: Period, positive.
    :param a: Base point.
    :param nodes: Strictly increasing positions inside ``[a, a + ell)``.
    :param tanh_half_period: Exact ``tanh(ell / 2)`` for exact mode.
    :raises InvalidPair:
    """

    ell: float
    a: float = 0.0
    nodes: Tuple[Node, ...] = ()
    tanh_half_period: Optional[Fraction] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, 'nodes', tuple(self.nodes))
        if not self.ell > 0:
            raise InvalidPair(f'Period must be positive, got {self.ell!r}')
        previous = None
        for node in self.nodes:
            if not self.a <= node.x < self.a + self.ell:
                raise InvalidPair(
                    f'Node {node.x!r} outside [{self.a!r}, '
                    f'{self.a + self.ell!r})',
                )
            if previous is not None and not node.x > previous:
                raise InvalidPair(f'Nodes not increasing at {node.x!r}')
            if node.upsilon < 0:
                raise InvalidPair(f'Negative upsilon at {node.x!r}')
            if node.omega == 0 and node.upsilon == 0:
                raise InvalidPair(f'Empty node at {node.x!r}')
            if node.tanh_half is not None and abs(
                float(node.tanh_half) - math.tanh((node.x - self.a) / 2),
            ) > TANH_TOL:
                raise InvalidPair(f'tanh_half does not match x={node.x!r}')
            previous = node.x
        if self.tanh_half_period is not None and abs(
            float(self.tanh_half_period) - math.tanh(self.ell / 2),
        ) > TANH_TOL:
            raise InvalidPair('tanh_half_period does not match ell')

    @property
    def has_exact_data(self) -> bool:
        """Whether all tanh coordinates are available as rationals."""
        return self.tanh_half_period is not None \
            and all(n.tanh_half is not None for n in self.nodes)

    @property
    def base_node(self) -> Optional[Node]:
        """The node sitting at the base point, if any."""
        if self.nodes and self.nodes[0].x == self.a:
            return self.nodes[0]
        return None


def _kernel(ell: float, d: np.ndarray) -> np.ndarray:
    """Periodized Green's function of ``1 - d²/dx²``."""
    return np.cosh(d - ell / 2) / (2 * np.sinh(ell / 2))


def _kernel_slope(ell: float, d: np.ndarray) -> np.ndarray:
    return np.sinh(d - ell / 2) / (2 * np.sinh(ell / 2))


def eval_state(
    pair: PeakonPair,
    x: float,
    side: str = 'left',
) -> Tuple[float, float]:
    """Return ``(u(x), u'(x))``.

    The derivative is the left limit by default, matching the convention for
    solutions of the spectral problem; ``side='right'`` gives the right limit.

    :param pair:
    :param x:
    :param side: ``'left'`` or ``'right'``.
    """
    if not pair.nodes:
        return 0.0, 0.0
    ell = pair.ell
    positions = np.array([n.x for n in pair.nodes])
    omega = np.array([n.omega for n in pair.nodes])
    if side == 'left':
        d = ell - np.mod(positions - x, ell)
    elif side == 'right':
        d = np.mod(x - positions, ell)
    else:
        raise ValueError(f'Unknown side {side!r}')
    u = float(omega @ _kernel(ell, d))
    du = float(omega @ _kernel_slope(ell, d))
    return u, du


def conserved_quantities(pair: PeakonPair) -> Tuple[float, float]:
    """Integrals of u and of μ over one period.

    :param pair:
    """
    int_u = math.fsum(n.omega for n in pair.nodes)
    int_mu = math.fsum(
        [n.omega * eval_state(pair, n.x)[0] for n in pair.nodes]
        + [n.upsilon for n in pair.nodes],
    )
    return int_u, int_mu


def _exp_integral(k: int, h: float) -> float:
    """``∫_0^h exp(k t) dt``."""
    return math.expm1(k * h) / k


def eval_P(pair: PeakonPair, x: float) -> float:
    """Evaluate ``P(x) = ¼∫exp(-|x-s|)u(s)²ds + ¼∫exp(-|x-s|)dμ(s)``.

    One period starting at *x* is split at the nodes; on each piece u is a
    combination of ``exp(±s)`` and the periodized kernel is ``exp(±s)`` too,
    so every piece integrates in closed form.

    :param pair:
    :param x:
    """
    if not pair.nodes:
        return 0.0
    ell = pair.ell
    omega = np.array([n.omega for n in pair.nodes])
    offsets = np.mod(np.array([n.x for n in pair.nodes]) - x, ell)
    cuts = [0.0] + sorted(float(o) for o in offsets if o > 0) + [ell]

    total = 0.0
    for start, stop in zip(cuts, cuts[1:]):
        h = stop - start
        if h <= 0:
            continue
        # right limits at x + start, measured from the node offsets
        d = np.mod(start - offsets, ell)
        u = float(omega @ _kernel(ell, d))
        du = float(omega @ _kernel_slope(ell, d))
        alpha = (u + du) / 2
        beta = (u - du) / 2
        d0 = ell / 2 - start
        # 2u² + u'² = 3α²e^{2t} + 2αβ + 3β²e^{-2t}, kernel ∝ e^{d0-t} + e^{t-d0}
        total += math.exp(d0) * (
            3 * alpha ** 2 * _exp_integral(1, h)
            + 2 * alpha * beta * _exp_integral(-1, h)
            + 3 * beta ** 2 * _exp_integral(-3, h)
        )
        total += math.exp(-d0) * (
            3 * alpha ** 2 * _exp_integral(3, h)
            + 2 * alpha * beta * _exp_integral(1, h)
            + 3 * beta ** 2 * _exp_integral(-1, h)
        )
    smooth = total / (8 * math.sinh(ell / 2))

    upsilon = np.array([n.upsilon for n in pair.nodes])
    d = np.mod(x - np.array([n.x for n in pair.nodes]), ell)
    atoms = float(upsilon @ _kernel(ell, d)) / 2
    return smooth + atoms


def rebase(pair: PeakonPair, a_new: float) -> PeakonPair:
    """Same periodic measures seen from another base point.

    tanh coordinates depend on the base point and are dropped, unless the
    shift is a whole number of periods.

    :param pair:
    :param a_new:
    """
    shift = (a_new - pair.a) / pair.ell
    whole = shift == round(shift)
    nodes: List[Node] = []
    for n in pair.nodes:
        k = math.floor((n.x - a_new) / pair.ell)
        x = n.x - k * pair.ell
        if x >= a_new + pair.ell:
            x -= pair.ell
        if x < a_new:
            x += pair.ell
        nodes.append(replace(
            n, x=x, tanh_half=n.tanh_half if whole else None,
        ))
    nodes.sort(key=lambda n: n.x)
    return PeakonPair(
        ell=pair.ell,
        a=a_new,
        nodes=tuple(nodes),
        tanh_half_period=pair.tanh_half_period,
    )


def from_momenta(
    ell: float,
    a: float,
    peaks: Iterable[Tuple[float, float, float]],
) -> PeakonPair:
    """Build a pair from peakon positions and amplitudes.

    ``u = Σ_k Σ_n p_n exp(-|x - q_n - kℓ|)`` gives ``ω_n = 2 p_n``.

    :param ell:
    :param a:
    :param peaks: ``(q, p, upsilon)`` triples.
    :raises DuplicatePosition:
    """
    nodes: List[Node] = []
    for q, p, upsilon in peaks:
        x = a + float(np.mod(q - a, ell))
        if x >= a + ell:
            x = a
        nodes.append(Node(x=x, omega=2 * p, upsilon=upsilon))
    nodes.sort(key=lambda n: n.x)
    for first, second in zip(nodes, nodes[1:]):
        if second.x - first.x <= POSITION_TOL * max(1.0, ell):
            raise DuplicatePosition(first.x, second.x, ell)
    if len(nodes) > 1 and \
            nodes[0].x + ell - nodes[-1].x <= POSITION_TOL * max(1.0, ell):
        raise DuplicatePosition(nodes[0].x, nodes[-1].x, ell)
    return PeakonPair(ell=ell, a=a, nodes=tuple(nodes))


def pair_distance(first: PeakonPair, second: PeakonPair) -> float:
    """Largest relative deviation of node positions and weights.

    Infinite when the node counts differ.

    :param first: Reference pair.
    :param second:
    """
    if len(first.nodes) != len(second.nodes):
        return float('inf')

    def rel(expected: float, actual: float) -> float:
        return abs(expected - actual) / max(1.0, abs(expected))

    return max(
        (max(rel(m.x, n.x), rel(m.omega, n.omega),
             rel(m.upsilon, n.upsilon))
         for m, n in zip(first.nodes, second.nodes)),
        default=0.0,
    )


def interior_sign(pair: PeakonPair) -> Optional[int]:
    """Sign of the measures on the open window ``(a, a + ell)``.

    ``1`` when υ vanishes there and ω is non-negative, ``-1`` for the
    non-positive case, `None` otherwise. An empty window counts as ``1``.

    :param pair:
    """
    inner: Sequence[Node] = [n for n in pair.nodes if n.x != pair.a]
    if any(n.upsilon > 0 for n in inner):
        return None
    if all(n.omega >= 0 for n in inner):
        return 1
    if all(n.omega <= 0 for n in inner):
        return -1
    return None
