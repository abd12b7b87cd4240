"""Pairs shared by the test modules."""

import math
from fractions import Fraction

import numpy as np

from peakonspec.peakon_model import Node, PeakonPair

LN3 = math.log(3)
LN4 = math.log(4)


def empty_pair(exact=False):
    return PeakonPair(
        ell=LN4,
        tanh_half_period=Fraction(3, 5) if exact else None,
    )


def single_peakon(exact=False):
    """One node of weight 1 at the base point, period ln 4."""
    return PeakonPair(
        ell=LN4,
        nodes=(Node(0.0, 1.0, tanh_half=Fraction(0) if exact else None),),
        tanh_half_period=Fraction(3, 5) if exact else None,
    )


def two_peakons(exact=False):
    """Weights 1 and -1 at 0 and ln 3, period ln 4."""
    return PeakonPair(
        ell=LN4,
        nodes=(
            Node(0.0, 1.0, tanh_half=Fraction(0) if exact else None),
            Node(LN3, -1.0, tanh_half=Fraction(1, 2) if exact else None),
        ),
        tanh_half_period=Fraction(3, 5) if exact else None,
    )


def base_upsilon():
    """A bare point mass of upsilon at the base point."""
    return PeakonPair(ell=LN4, nodes=(Node(0.0, 0.0, 1.0),))


def random_pair(rng, max_nodes=6, upsilon=True, positive=False):
    ell = rng.uniform(1, 3)
    a = rng.uniform(-1, 1)
    n = int(rng.integers(1, max_nodes + 1))
    cuts = np.cumsum(rng.uniform(0.5, 1.5, n + 1))
    cuts = cuts / cuts[-1] * ell
    if rng.random() < 0.3:
        offsets = [0.0] + list(cuts[:n - 1])
    else:
        offsets = list(cuts[:n])
    nodes = []
    for offset in offsets:
        sign = 1 if positive else rng.choice([-1, 1])
        omega = float(sign * rng.uniform(0.2, 2))
        ups = float(rng.uniform(0.1, 1)) \
            if upsilon and rng.random() < 0.3 else 0.0
        nodes.append(Node(a + float(offset), omega, ups))
    return PeakonPair(ell=ell, a=a, nodes=tuple(nodes))


def random_pairs(count=20, seed=1, **kwargs):
    rng = np.random.default_rng(seed)
    return [random_pair(rng, **kwargs) for _ in range(count)]
