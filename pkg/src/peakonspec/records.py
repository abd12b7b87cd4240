"""File records of the command-line tools and their domain conversions."""

import math
from fractions import Fraction
from typing import Any

from ._util import SpectralError
from .forward_spectral import ANTIPERIODIC, PERIODIC, SpectralData
from .hydrator import ExtendedReal, RealList
from .inverse_dirichlet import DirichletSpectralInput
from .inverse_periodic import DivisorPoint
from .nested import Nested
from .peakon_model import Node, PeakonPair
from .polyalg import Poly
from .record import Record, RecordError
from .trace_validation import TraceReport

__all__ = (
    'NodeRecord',
    'PairRecord',
    'SpectralRecord',
    'DiscriminantRecord',
    'DivisorPointRecord',
    'DivisorRecord',
    'TraceRecord',
    'RoundtripRecord',
    'ShiftRecord',
)


def _fill(record: Record, **values: Any) -> Record:
    for k, v in values.items():
        setattr(record, k, v)
    return record


class NodeRecord(Record):
    x: float
    omega: float
    upsilon: float
    tanh_half: Fraction

    class _Meta:
        required = ('x', 'omega')

    def to_node(self) -> Node:
        return Node(
            x=self.x,
            omega=self.omega,
            upsilon=self.upsilon or 0.0,
            tanh_half=self.tanh_half,
        )

    @classmethod
    def from_node(cls, node: Node) -> 'NodeRecord':
        return _fill(cls(), x=node.x, omega=node.omega,
                     upsilon=node.upsilon, tanh_half=node.tanh_half)


class PairRecord(Record):
    """``{"ell", "a", "nodes": [{"x", "omega", "upsilon"}, ...]}``.

    Nodes may carry ``"tanh_half"`` and the pair ``"tanh_half_period"`` as
    ``"p/q"`` strings for exact mode.
    """

    ell: float
    a: float
    tanh_half_period: Fraction
    nodes = Nested('NodeRecord', many=True)

    class _Meta:
        required = ('ell', 'nodes')

    def to_pair(self) -> PeakonPair:
        """Build the pair.

        :raises RecordError: when the node data are not a valid pair.
        """
        try:
            return PeakonPair(
                ell=self.ell,
                a=self.a or 0.0,
                nodes=tuple(n.to_node() for n in self.nodes),
                tanh_half_period=self.tanh_half_period,
            )
        except SpectralError as e:
            raise RecordError(f'Invalid pair: {e}') from e

    @classmethod
    def from_pair(cls, pair: PeakonPair) -> 'PairRecord':
        return _fill(
            cls(), ell=pair.ell, a=pair.a,
            tanh_half_period=pair.tanh_half_period,
            nodes=[NodeRecord.from_node(n) for n in pair.nodes],
        )


class SpectralRecord(Record):
    ell: float
    a: float
    omega_a: float
    upsilon_a: float
    delta_coeffs = RealList()
    periodic = RealList()
    antiperiodic = RealList()
    kappas = RealList(extended=True)
    gammas = RealList()
    zetas = RealList()

    class _Meta:
        required = ('ell', 'kappas', 'gammas')

    @classmethod
    def from_spectral_data(cls, data: SpectralData) -> 'SpectralRecord':
        dirichlet = data.dirichlet
        return _fill(
            cls(), ell=data.pair.ell, a=data.pair.a,
            omega_a=float(dirichlet.omega_a),
            upsilon_a=float(dirichlet.upsilon_a),
            delta_coeffs=[float(c) for c in data.delta.coeffs],
            periodic=data.gaps.spectrum(PERIODIC),
            antiperiodic=data.gaps.spectrum(ANTIPERIODIC),
            kappas=list(dirichlet.kappas),
            gammas=list(dirichlet.gammas),
            zetas=list(dirichlet.zetas),
        )

    def to_input(self) -> DirichletSpectralInput:
        """Dirichlet input made of the finite kappas and their gammas.

        :raises RecordError:
        """
        sigma = [k for k in self.kappas if not math.isinf(k)]
        try:
            return DirichletSpectralInput(
                sigma=tuple(sigma),
                gammas=tuple(self.gammas),
                omega_a=self.omega_a or 0.0,
                upsilon_a=self.upsilon_a or 0.0,
                ell=self.ell,
                a=self.a or 0.0,
            )
        except ValueError as e:
            raise RecordError(f'Invalid spectral data: {e}') from e


class DiscriminantRecord(Record):
    ell: float
    coeffs = RealList()

    class _Meta:
        required = ('ell', 'coeffs')

    def to_poly(self) -> Poly:
        return Poly(self.coeffs)


class DivisorPointRecord(Record):
    zeta: float
    kappa = ExtendedReal()

    class _Meta:
        required = ('kappa',)


class DivisorRecord(Record):
    points = Nested('DivisorPointRecord', many=True)

    class _Meta:
        required = ('points',)

    def to_divisor(self) -> DivisorPoint:
        return DivisorPoint(tuple((p.kappa, p.zeta or 0.0)
                                  for p in self.points))


class TraceRecord(Record):
    trace1: float
    trace2: float
    tid1: float
    tid2: float
    delta_dot0: float
    delta_ddot0: float
    s_dot0: float
    s_ddot0: float
    max_residual: float
    passed: bool

    @classmethod
    def from_report(cls, report: TraceReport, tol: float) -> 'TraceRecord':
        residuals = {name: identity.residual
                     for name, identity in report.identities}
        return _fill(cls(), max_residual=report.max_residual,
                     passed=report.passed(tol), **residuals)


class RoundtripRecord(Record):
    dirichlet_residual: float
    periodic_residual: float
    max_residual: float
    passed: bool


class ShiftRecord(Record):
    a_old: float
    a_new: float
    delta_residual: float
    delta_unchanged: bool
    kappas_before = RealList(extended=True)
    kappas_after = RealList(extended=True)
    pair = Nested('PairRecord')
