"""Trace formulas and low-order coefficient identities as self-checks."""

import math
from dataclasses import dataclass, fields
from typing import Iterable, Tuple

from .forward_spectral import ANTIPERIODIC, PERIODIC, spectral_data
from .peakon_model import PeakonPair, conserved_quantities, eval_P, \
    eval_state

__all__ = ('Identity', 'TraceReport', 'trace_report')


@dataclass(frozen=True)
class Identity:
    """Both sides of one identity.

    :param lhs: Spectral side.
    :param rhs: Side computed from the pair.
    """

    lhs: float
    rhs: float

    @property
    def residual(self) -> float:
        return abs(self.lhs - self.rhs) / (1 + abs(self.lhs))


@dataclass(frozen=True)
class TraceReport:
    trace1: Identity
    trace2: Identity
    tid1: Identity
    tid2: Identity
    delta_dot0: Identity
    delta_ddot0: Identity
    s_dot0: Identity
    s_ddot0: Identity

    @property
    def identities(self) -> Tuple[Tuple[str, Identity], ...]:
        return tuple((f.name, getattr(self, f.name)) for f in fields(self))

    @property
    def max_residual(self) -> float:
        return max(identity.residual for _, identity in self.identities)

    def passed(self, tol: float) -> bool:
        """Whether every residual is below *tol*."""
        return self.max_residual < tol


def _power_sum(values: Iterable[float], power: int) -> float:
    return math.fsum(v ** -power for v in values)


def trace_report(pair: PeakonPair, exact: bool = False) -> TraceReport:
    """Evaluate all identities for *pair*.

    :param pair:
    :param exact: Compute the spectral sides in exact mode.
    """
    data = spectral_data(pair, exact)
    periodic = data.gaps.spectrum(PERIODIC)
    antiperiodic = data.gaps.spectrum(ANTIPERIODIC)
    lambdas = periodic + antiperiodic
    sigma = data.dirichlet.sigma

    half = pair.ell / 2
    ch, sh = math.cosh(half), math.sinh(half)
    coth = ch / sh
    int_u, int_mu = conserved_quantities(pair)
    u_a, _ = eval_state(pair, pair.a)
    p_a = eval_P(pair, pair.a)

    delta = data.delta
    s = data.monodromy.s

    return TraceReport(
        trace1=Identity(_power_sum(lambdas, 1), 2 * coth * int_u),
        trace2=Identity(
            _power_sum(lambdas, 2),
            2 / sh ** 2 * int_u ** 2 + 4 * coth * int_mu,
        ),
        tid1=Identity(
            (_power_sum(lambdas, 1) - 2 * _power_sum(sigma, 1)) / 4,
            u_a,
        ),
        tid2=Identity(
            (_power_sum(lambdas, 2) - 2 * _power_sum(sigma, 2)) / 16,
            p_a,
        ),
        delta_dot0=Identity(float(delta.coeff(1)), -sh * int_u),
        delta_ddot0=Identity(
            2 * float(delta.coeff(2)),
            ch * int_u ** 2 - 2 * sh * int_mu,
        ),
        s_dot0=Identity(float(s.coeff(1)), 4 * sh * u_a - 2 * ch * int_u),
        s_ddot0=Identity(
            2 * float(s.coeff(2)),
            2 * sh * int_u ** 2 - 8 * ch * u_a * int_u - 4 * ch * int_mu
            + 8 * sh * u_a ** 2 + 16 * sh * p_a,
        ),
    )
