"""Reconstruction of a pair from its Dirichlet spectral data."""

import logging
import math
from dataclasses import dataclass
from typing import Tuple

from ._util import SpectralError, max_relative_error, relative_error
from .cont_frac import cf_to_pair, stieltjes_extract
from .forward_spectral import DirichletData, dirichlet_data
from .peakon_model import PeakonPair
from .polyalg import PartialFraction, RatFunc

__all__ = (
    'DirichletSpectralInput',
    'InconsistentBaseMass',
    'VerificationFailed',
    'dirichlet_input',
    'assemble_pf',
    'assemble_m',
    'solve_dirichlet',
    'reconstruction_residual',
)

logger = logging.getLogger(__name__)

VERIFY_TOL = 1e-7


class InconsistentBaseMass(SpectralError):
    """The base-point masses contradict the extracted first length."""

    def __init__(self, l1: float, omega_a: float, upsilon_a: float) -> None:
        self.l1 = l1
        self.omega_a = omega_a
        self.upsilon_a = upsilon_a

    def __str__(self) -> str:
        return f'l_1={self.l1!r} does not match base masses ' \
            f'omega_a={self.omega_a!r}, upsilon_a={self.upsilon_a!r}'


class VerificationFailed(SpectralError):
    """The reconstructed pair does not reproduce its input."""

    def __init__(self, residual: float, tol: float) -> None:
        self.residual = residual
        self.tol = tol

    def __str__(self) -> str:
        return f'Reconstruction residual {self.residual:.3g} ' \
            f'exceeds {self.tol:.3g}'


@dataclass(frozen=True)
class DirichletSpectralInput:
    """Finite Dirichlet spectrum with norming constants.

    :param sigma: Distinct non-zero eigenvalues.
    :param gammas: Positive norming constant per eigenvalue.
    :param omega_a:
    :param upsilon_a:
    :param ell:
    :param a:
    """

    sigma: Tuple[float, ...]
    gammas: Tuple[float, ...]
    omega_a: float = 0.0
    upsilon_a: float = 0.0
    ell: float = 1.0
    a: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, 'sigma', tuple(self.sigma))
        object.__setattr__(self, 'gammas', tuple(self.gammas))
        if len(self.sigma) != len(self.gammas):
            raise ValueError('One norming constant per eigenvalue required')
        if len(set(self.sigma)) != len(self.sigma) or 0 in self.sigma:
            raise ValueError(
                f'Eigenvalues must be distinct and non-zero: {self.sigma!r}',
            )
        if any(not g > 0 for g in self.gammas):
            raise ValueError(f'Norming constants must be positive: '
                             f'{self.gammas!r}')
        if self.upsilon_a < 0:
            raise ValueError(f'Negative upsilon_a {self.upsilon_a!r}')
        if not self.ell > 0:
            raise ValueError(f'Period must be positive, got {self.ell!r}')


def dirichlet_input(
    data: DirichletData,
    ell: float,
    a: float = 0.0,
) -> DirichletSpectralInput:
    """Drop the divisor heights of *data*, keeping what the solver needs."""
    return DirichletSpectralInput(
        sigma=data.sigma,
        gammas=data.gammas,
        omega_a=data.omega_a,
        upsilon_a=data.upsilon_a,
        ell=ell,
        a=a,
    )


def assemble_pf(spec: DirichletSpectralInput) -> PartialFraction:
    """The Weyl function with the given poles and base masses, term by term.

    :param spec:
    """
    pole = 1 / math.tanh(spec.ell / 2) / 2
    return PartialFraction(
        linear=spec.upsilon_a,
        constant=spec.omega_a,
        poles=((0.0, pole),) + tuple(zip(spec.sigma, spec.gammas)),
    )


def assemble_m(spec: DirichletSpectralInput) -> RatFunc:
    """`assemble_pf` over a common denominator.

    :param spec:
    """
    return assemble_pf(spec).to_ratfunc()


def reconstruction_residual(
    spec: DirichletSpectralInput,
    pair: PeakonPair,
) -> float:
    """Largest relative deviation of forward data of *pair* from *spec*.

    :param spec:
    :param pair:
    """
    data = dirichlet_data(pair)
    order = sorted(range(len(spec.sigma)), key=spec.sigma.__getitem__)
    return max(
        max_relative_error([spec.sigma[i] for i in order], data.sigma),
        max_relative_error([spec.gammas[i] for i in order], data.gammas),
        relative_error(spec.omega_a, data.omega_a),
        relative_error(spec.upsilon_a, data.upsilon_a),
    )


def solve_dirichlet(
    spec: DirichletSpectralInput,
    tol: float = VERIFY_TOL,
    verify: bool = True,
) -> PeakonPair:
    """The unique pair with the given Dirichlet data.

    :param spec:
    :param tol: Forward verification tolerance.
    :param verify: Recompute the Dirichlet data of the result.
    :raises NotAdmissible:
    :raises InconsistentBaseMass:
    :raises VerificationFailed:
    """
    cf = stieltjes_extract(assemble_pf(spec))
    ls = cf.ls

    has_base = spec.omega_a != 0 or spec.upsilon_a != 0
    if has_base != (ls[0] == 0):
        raise InconsistentBaseMass(ls[0], spec.omega_a, spec.upsilon_a)
    if has_base:
        q0, q1 = cf.qs[0]
        if relative_error(spec.omega_a, q0) > tol or \
                relative_error(spec.upsilon_a, q1) > tol:
            raise InconsistentBaseMass(ls[0], spec.omega_a, spec.upsilon_a)

    pair = cf_to_pair(cf, spec.ell, spec.a)
    if verify:
        residual = reconstruction_residual(spec, pair)
        logger.debug('Dirichlet reconstruction residual %.3g', residual)
        if residual > tol:
            raise VerificationFailed(residual, tol)
    return pair
