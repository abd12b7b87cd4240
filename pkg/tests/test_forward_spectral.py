import logging
import math
from fractions import Fraction

import numpy as np
import pytest

from pairs import LN3, LN4, base_upsilon, empty_pair, random_pairs, \
    single_peakon, two_peakons
from peakonspec.forward_spectral import *
from peakonspec.forward_spectral import ANTIPERIODIC, PERIODIC
from peakonspec.peakon_model import Node, PeakonPair, interior_sign, \
    rebase
from peakonspec.polyalg import NotRealRooted, Poly, max_relative_distance, \
    real_roots

F = Fraction
INF = float('inf')


class TestMonodromy:

    def test_single_peakon(self):
        mono = monodromy(single_peakon())
        assert not mono.exact
        assert mono.c.coeffs == pytest.approx((1.25, -1.5))
        assert mono.s.coeffs == pytest.approx((1.5,))
        assert mono.c_prime.coeffs == pytest.approx((0.375, -1.25))
        assert mono.s_prime.coeffs == pytest.approx((1.25,))

    def test_single_peakon_exact(self):
        mono = monodromy(single_peakon(exact=True), exact=True)
        assert mono.exact
        assert mono.c == Poly((F(5, 4), F(-3, 2)))
        assert mono.s == Poly((F(3, 2),))
        assert mono.c_prime == Poly((F(3, 8), F(-5, 4)))
        assert mono.s_prime == Poly((F(5, 4),))
        assert mono.determinant() == Poly((1,))

    def test_two_peakons_exact(self):
        mono = monodromy(two_peakons(exact=True), exact=True)
        assert mono.s == Poly((F(3, 2), F(1, 3)))
        assert mono.s_prime == Poly((F(5, 4), F(7, 6)))
        assert mono.c == Poly((F(5, 4), F(-7, 6), F(-1, 3)))
        assert mono.determinant() == Poly((1,))

    def test_exact_matches_float(self):
        exact = monodromy(two_peakons(exact=True), exact=True)
        approx = monodromy(two_peakons())
        for p, q in [(exact.c, approx.c), (exact.s, approx.s),
                     (exact.c_prime, approx.c_prime),
                     (exact.s_prime, approx.s_prime)]:
            assert max_relative_distance(p.to_float(), q) < 1e-12

    def test_missing_exact_data(self):
        with pytest.raises(MissingExactData):
            monodromy(two_peakons(), exact=True)

    def test_irrational_scale_falls_back(self, caplog):
        pair = PeakonPair(
            ell=LN3,
            nodes=(Node(0.0, 1.0, tanh_half=F(0)),),
            tanh_half_period=F(1, 2),
        )
        with caplog.at_level(logging.WARNING):
            mono = monodromy(pair, exact=True)
        assert not mono.exact
        assert 'not a rational square' in caplog.text
        approx = monodromy(pair)
        assert max_relative_distance(approx.c, mono.c) < 1e-12

    @pytest.mark.parametrize('pair', random_pairs(10, seed=11))
    def test_determinant(self, pair):
        det = monodromy(pair).determinant()
        assert max_relative_distance(Poly((1.0,)), det) < 1e-9

    @pytest.mark.parametrize('pair', random_pairs(10, seed=12))
    def test_values_at_zero(self, pair):
        mono = monodromy(pair)
        half = pair.ell / 2
        assert mono.c(0.0) == pytest.approx(math.cosh(half))
        assert mono.s_prime(0.0) == pytest.approx(math.cosh(half))
        assert mono.s(0.0) == pytest.approx(2 * math.sinh(half))
        assert mono.c_prime(0.0) == pytest.approx(math.sinh(half) / 2)

    def test_empty(self):
        mono = monodromy(empty_pair(exact=True), exact=True)
        assert (mono.c, mono.s, mono.c_prime, mono.s_prime) == (
            Poly((F(5, 4),)), Poly((F(3, 2),)),
            Poly((F(3, 8),)), Poly((F(5, 4),)),
        )


class TestDiscriminant:

    @pytest.mark.parametrize('pair,delta', [
        (single_peakon(exact=True), Poly((F(5, 4), F(-3, 4)))),
        (two_peakons(exact=True), Poly((F(5, 4), 0, F(-1, 6)))),
        (empty_pair(exact=True), Poly((F(5, 4),))),
    ])
    def test_exact(self, pair, delta):
        assert discriminant(monodromy(pair, exact=True)) == delta

    def test_base_upsilon(self):
        delta = discriminant(monodromy(base_upsilon()))
        assert delta.coeffs == pytest.approx((1.25, 0, -0.75), abs=1e-15)

    @pytest.mark.parametrize('pair', random_pairs(10, seed=13))
    def test_base_point_invariance(self, pair):
        delta = discriminant(monodromy(pair))
        other = discriminant(monodromy(rebase(pair, pair.a + 0.41)))
        assert max_relative_distance(delta, other) < 1e-9


class TestFloquetSpectra:

    def test_single_peakon(self):
        periodic, antiperiodic = floquet_spectra(Poly((F(5, 4), F(-3, 4))))
        assert periodic == [(pytest.approx(1 / 3), 1)]
        assert antiperiodic == [(pytest.approx(3), 1)]

    def test_constant(self):
        assert floquet_spectra(Poly((1.25,))) == ([], [])

    def test_double_eigenvalue(self):
        delta = Poly((7, -8, 2))
        periodic, antiperiodic = floquet_spectra(delta)
        assert periodic == [(pytest.approx(1), 1), (pytest.approx(3), 1)]
        assert antiperiodic == [(pytest.approx(2), 2)]

    def test_not_real_rooted(self):
        with pytest.raises(NotRealRooted):
            floquet_spectra(Poly((F(5, 4), 0, -2, 0, 1)))


class TestGapStructure:

    def test_two_peakons(self):
        gaps = gap_structure(Poly((F(5, 4), 0, F(-1, 6))))
        assert (gaps.I_minus, gaps.I_plus) == (1, 1)
        assert gaps.indices == (-1, 1)
        assert [e.label for e in gaps.lambdas] == [-2, -1, 1, 2]
        assert [e.kind for e in gaps.lambdas] == [
            ANTIPERIODIC, PERIODIC, PERIODIC, ANTIPERIODIC,
        ]
        assert gaps.gap(-1).lower == -INF
        assert gaps.gap(-1).upper == pytest.approx(-13.5 ** 0.5)
        assert gaps.gap(1).lower == pytest.approx(13.5 ** 0.5)
        assert gaps.gap(1).upper == INF
        assert gaps.spectrum(PERIODIC) == pytest.approx(
            [-1.5 ** 0.5, 1.5 ** 0.5])

    def test_single_peakon(self):
        gaps = gap_structure(Poly((F(5, 4), F(-3, 4))))
        assert gaps.indices == (1,)
        assert gaps.gap(1).lower == pytest.approx(3)
        assert gaps.gap(1).outermost
        assert gaps.locate(10.0) == [1]
        assert gaps.locate(INF) == [1]
        assert gaps.locate(1.0) == []

    def test_interior_gap(self):
        gaps = gap_structure(Poly((1.25, -1.375, 0.125)))
        assert gaps.indices == (1, 2)
        assert (gaps.gap(1).lower, gaps.gap(1).upper) == \
            pytest.approx((2, 9))
        assert not gaps.gap(1).outermost
        assert gaps.gap(2).lower == pytest.approx((11 + 113 ** 0.5) / 2)

    def test_closed_gap(self):
        gaps = gap_structure(Poly((7, -8, 2)))
        assert gaps.indices == (1, 2)
        assert gaps.gap(1).closed
        assert gaps.gap(1).lower == pytest.approx(2)
        assert gaps.gap(2).lower == pytest.approx(3)

    def test_empty(self):
        gaps = gap_structure(Poly((1.25,)))
        assert gaps.gaps == ()
        assert gaps.lambdas == ()

    @pytest.mark.parametrize('pair', random_pairs(10, seed=14))
    def test_degree_count(self, pair):
        delta = discriminant(monodromy(pair))
        gaps = gap_structure(delta)
        assert gaps.I_minus + gaps.I_plus == delta.degree
        assert all(e.value != 0 and (e.value > 0) == (e.label > 0)
                   for e in gaps.lambdas)


class TestGap:

    @pytest.mark.parametrize('gap,value,inside', [
        (Gap(1, 2.0, 9.0), 5.0, True),
        (Gap(1, 2.0, 9.0), 9.0 + 1e-9, True),
        (Gap(1, 2.0, 9.0), 9.1, False),
        (Gap(1, 3.0, INF), INF, True),
        (Gap(-1, -INF, -3.0), INF, False),
        (Gap(2, 4.0, 4.0), 4.0, True),
    ])
    def test_contains(self, gap, value, inside):
        assert gap.contains(value) is inside

    def test_closed(self):
        assert Gap(2, 4.0, 4.0).closed
        assert not Gap(2, 4.0, 5.0).closed


class TestDirichletData:

    def test_two_peakons(self):
        data = dirichlet_data(two_peakons())
        assert data.indices == (-1, 1)
        assert data.kappas[0] == pytest.approx(-4.5)
        assert data.kappas[1] == INF
        assert data.gammas == pytest.approx((1 / 6,))
        assert data.zetas == pytest.approx((15 / 8, 0))
        assert (data.omega_a, data.upsilon_a) == (1.0, 0.0)
        assert data.sigma == pytest.approx((-4.5,))

    def test_two_peakons_exact(self):
        data = dirichlet_data(two_peakons(exact=True), exact=True)
        assert data.gammas == pytest.approx((1 / 6,))

    def test_single_peakon(self):
        data = dirichlet_data(single_peakon())
        assert data.kappas == (INF,)
        assert data.gammas == ()
        assert data.zetas == (0.0,)

    def test_base_upsilon(self):
        data = dirichlet_data(base_upsilon())
        assert data.kappas == (-INF, INF)
        assert data.upsilon_a == 1.0

    def test_depends_on_base_point(self):
        data = dirichlet_data(rebase(two_peakons(), LN3))
        assert data.kappas[1] == pytest.approx(4.5)
        assert data.kappas[0] == -INF
        assert (data.omega_a, data.upsilon_a) == (-1.0, 0.0)

    def test_empty(self):
        data = dirichlet_data(empty_pair())
        assert data.kappas == data.gammas == data.zetas == ()

    @pytest.mark.parametrize('pair', random_pairs(15, seed=15))
    def test_invariants(self, pair):
        spectral = spectral_data(pair)
        data = spectral.dirichlet
        assert list(data.kappas) == sorted(data.kappas)
        assert all(g > 0 for g in data.gammas)
        for index, kappa, zeta in zip(data.indices, data.kappas,
                                      data.zetas):
            assert spectral.gaps.gap(index).contains(kappa)
            if math.isinf(kappa):
                assert spectral.gaps.gap(index).outermost
                assert zeta == 0
            else:
                d = spectral.delta(kappa)
                assert zeta ** 2 == pytest.approx(d ** 2 - 1, rel=1e-6,
                                                  abs=1e-8)

    @pytest.mark.parametrize('pair', random_pairs(10, seed=16))
    def test_norming_constants(self, pair):
        data = dirichlet_data(pair)
        for kappa, gamma in zip(data.sigma, data.gammas):
            assert norming_constant_integral(pair, kappa) == \
                pytest.approx(gamma, rel=1e-8)
            assert norming_constant_weighted_sum(pair, kappa) == \
                pytest.approx(1 / (kappa * gamma), rel=1e-8)


class TestNormingConstants:

    def test_two_peakons(self):
        pair = two_peakons()
        assert norming_constant_integral(pair, -4.5) == \
            pytest.approx(1 / 6)
        assert norming_constant_weighted_sum(pair, -4.5) == \
            pytest.approx(-4 / 3)


class TestWeylFunction:

    def test_single_peakon(self):
        f, pf = weyl_function(monodromy(single_peakon(exact=True), True))
        assert f.num == Poly((F(-5, 6), 1))
        assert f.den == Poly((0, 1))
        assert pf.constant == pytest.approx(1)
        assert pf.linear == 0

    def test_two_peakons(self):
        f, pf = weyl_function(monodromy(two_peakons(exact=True), True))
        assert f.num == Poly((F(-15, 4), F(7, 2), 1))
        assert f.den == Poly((0, F(9, 2), 1))
        assert [k for k, _ in pf.poles] == pytest.approx([-4.5, 0])
        assert [g for _, g in pf.poles] == pytest.approx([1 / 6, 5 / 6])

    def test_empty(self):
        f, pf = weyl_function(monodromy(empty_pair(exact=True), True))
        assert f.num == Poly((F(-5, 6),))
        assert pf.constant == 0
        assert [g for _, g in pf.poles] == pytest.approx([5 / 6])

    @pytest.mark.parametrize('pair', random_pairs(50, seed=123))
    def test_poles_are_dirichlet_data(self, pair):
        data = dirichlet_data(pair)
        _, pf = weyl_function(monodromy(pair))
        assert len(pf.poles) == len(data.sigma) + 1
        finite = [(k, g) for k, g in pf.poles if abs(k) > 1e-9]
        assert [k for k, _ in finite] == pytest.approx(list(data.sigma),
                                                       rel=1e-6)
        assert [g for _, g in finite] == pytest.approx(list(data.gammas),
                                                       rel=1e-6)


class TestBaseMassCheck:

    @pytest.mark.parametrize('pair,case,expected', [
        (two_peakons(), 'omega', 1),
        (single_peakon(), 'omega', 1),
        (base_upsilon(), 'upsilon', 1),
        (empty_pair(), 'trivial', 0),
    ])
    def test_cases(self, pair, case, expected):
        check = base_mass_check(pair)
        assert check.case == case
        assert check.expected == pytest.approx(expected)
        assert check.periodic == pytest.approx(expected)
        assert check.antiperiodic == pytest.approx(expected)

    @pytest.mark.parametrize('pair', random_pairs(15, seed=18))
    def test_random(self, pair):
        check = base_mass_check(pair)
        assert check.periodic == pytest.approx(check.expected, rel=1e-9)
        assert check.antiperiodic == pytest.approx(check.expected,
                                                   rel=1e-9)


class TestSignLaws:

    @pytest.mark.parametrize('values,sign', [
        ([1.0, 2.0], 1),
        ([-1.0, -0.5], -1),
        ([-1.0, 2.0], None),
        ([], 1),
    ])
    def test_spectrum_sign(self, values, sign):
        assert spectrum_sign(values) == sign

    @pytest.mark.parametrize('pair', random_pairs(10, seed=19,
                                                  upsilon=False,
                                                  positive=True))
    def test_positive_pairs(self, pair):
        data = spectral_data(pair)
        assert interior_sign(pair) == 1
        assert spectrum_sign(data.gaps.spectrum(PERIODIC)) == 1
        assert spectrum_sign(data.dirichlet.sigma) == 1

    @pytest.mark.parametrize('pair', random_pairs(10, seed=20))
    def test_mixed_pairs(self, pair):
        positive = all(n.upsilon == 0 and n.omega >= 0 for n in pair.nodes)
        spectrum = spectral_data(pair).gaps.spectrum(PERIODIC)
        assert (spectrum_sign(spectrum) == 1) == positive


class TestHerglotz:

    @pytest.mark.parametrize('pair', random_pairs(10, seed=22))
    def test_upper_half_plane(self, pair):
        f, _ = weyl_function(monodromy(pair))
        rng = np.random.default_rng(23)
        for x, y in zip(rng.uniform(-5, 5, 20), rng.uniform(0.1, 3, 20)):
            assert f(complex(x, y)).imag > 0


class TestDegreeLaw:

    @pytest.mark.parametrize('pair', random_pairs(50, seed=123))
    def test_finite_dirichlet_count(self, pair):
        data = dirichlet_data(pair)
        expected = sum(1 + (n.upsilon > 0) for n in pair.nodes
                       if n.x != pair.a)
        assert len(data.sigma) == expected

    @pytest.mark.parametrize('pair', random_pairs(50, seed=123))
    def test_critical_points(self, pair):
        delta = discriminant(monodromy(pair))
        if delta.degree < 2:
            return
        second = delta.derivative().derivative()
        roots = real_roots(delta.derivative(), expect_real_rooted=True)
        for point, _ in roots:
            value = float(delta(point))
            assert abs(value) >= 1 - 1e-10
            assert value * float(second(point)) < 0
