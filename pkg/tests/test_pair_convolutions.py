#
# (c) 2026, pyCMono contributors
#
# Created: 09.10.2026
# Updated: 19.10.2026
#
# License: Apache 2.0
#
import pytest
from hypothesis import given, settings, strategies as st
from sympy import QQ

from cmono import series
from cmono.cumulants import cmonotone_cumulants
from cmono.errors import MalformedSpec, NotInvertible, TransformInapplicable
from cmono.measures import AtomicMeasure, MomentSeq, moments_of
from cmono.pair_convolutions import (Fu, Identity, MeasurePair, ToDelta0, Ut, Vtua, Xi, apply_transform,
                                     boolean_convolve, boolean_power, cfree_convolve, check_T_associativity,
                                     check_cone_preservation, cmonotone_convolve, cmonotone_power,
                                     deformed_convolve, invert, kappa, monotone_convolve, orthogonal_convolve,
                                     parse_transform, transform_algebra)
from cmono.semigroups import ArcsineSemigroup
from cmono.transforms import h_of_atomic
from tests.strategies import atomic_measures, positive_measures


BERNOULLI = AtomicMeasure([(-1, '1/2'), (1, '1/2')])
TWO_POINT = AtomicMeasure([(0, '1/2'), (2, '1/2')])
DELTA0 = AtomicMeasure.delta(0)


def moments(mu, order: int = 4):
    return moments_of(mu, order)


class TestSingleConvolutions:

    def test_point_masses(self):
        assert monotone_convolve(AtomicMeasure.delta(1), AtomicMeasure.delta(2)) == AtomicMeasure.delta(3)
        assert boolean_convolve(AtomicMeasure.delta(1), AtomicMeasure.delta(2)) == AtomicMeasure.delta(3)

    def test_bernoulli_square(self):
        assert monotone_convolve(moments(BERNOULLI), moments(BERNOULLI)) == (0, 2, 0, 5)
        assert boolean_convolve(moments(BERNOULLI), moments(BERNOULLI)) == (0, 2, 0, 4)

    def test_orthogonal_with_point_mass(self):
        assert orthogonal_convolve(BERNOULLI, DELTA0) == BERNOULLI
        assert orthogonal_convolve(DELTA0, BERNOULLI) == DELTA0

    @settings(max_examples=15)
    @given(atomic_measures(max_atoms=2), atomic_measures(max_atoms=2))
    def test_tracks_agree(self, mu, nu):
        h = monotone_convolve(h_of_atomic(mu), h_of_atomic(nu))
        assert series.moments_of_h(h.series(6), 4) == monotone_convolve(moments(mu), moments(nu))

    @settings(max_examples=15)
    @given(atomic_measures(max_atoms=2), atomic_measures(max_atoms=2))
    def test_orthogonal_decomposition(self, mu, nu):
        h_mu, h_nu = h_of_atomic(mu), h_of_atomic(nu)
        assert boolean_convolve(orthogonal_convolve(h_mu, h_nu), h_nu) == monotone_convolve(h_mu, h_nu)

    def test_boolean_power(self):
        assert boolean_power(moments(BERNOULLI), 2) == (0, 2, 0, 4)
        assert boolean_power(BERNOULLI, 1) == BERNOULLI
        with pytest.raises(TransformInapplicable):
            boolean_power(BERNOULLI, -1)

    @given(atomic_measures(), atomic_measures(), atomic_measures())
    def test_kappa_is_linear_in_cumulants(self, mu, nu, lam):
        u, v = QQ(1, 2), QQ(3)
        left = cmonotone_cumulants(kappa(u, v, moments(mu), moments(nu)), moments(lam))
        right = [u * a + v * b for a, b in zip(cmonotone_cumulants(moments(mu), moments(lam)),
                                               cmonotone_cumulants(moments(nu), moments(lam)))]
        assert left == right


class TestTransforms:

    def test_special_cases(self):
        assert Identity() == Vtua(1, 1, 0)
        assert ToDelta0() == Vtua(0, 0)
        assert Ut('1/2') == Vtua('1/2', '1/2')
        assert Fu(3) == Vtua(0, 3, 0)
        with pytest.raises(TransformInapplicable):
            Vtua(-1, 0)

    def test_actions(self):
        assert apply_transform(Ut(2), moments(BERNOULLI)) == (0, 2, 0, 4)
        assert apply_transform(ToDelta0(), BERNOULLI) == DELTA0
        assert apply_transform(Fu('1/2'), AtomicMeasure.delta(2)) == AtomicMeasure.delta(1)
        assert apply_transform(Identity(), TWO_POINT) == TWO_POINT

    def test_mean_variance(self):
        m = moments(TWO_POINT)
        t = Vtua(2, 3, '1/2')
        image = apply_transform(t, m)
        assert (image.mean, image.variance) == t.mean_variance(m.mean, m.variance)
        assert t.mean_variance(1, 1) == (QQ(5, 2), 2)

    def test_composition(self):
        assert transform_algebra(Vtua(2, 1), Vtua(3, 1)) == Vtua(6, 1)
        a, b = Vtua(2, '1/2', 1), Vtua('1/3', 3, -2)
        m = moments(TWO_POINT)
        assert apply_transform(transform_algebra(a, b), m) == apply_transform(a, apply_transform(b, m))

    def test_inverse(self):
        v = Vtua(2, 3, 1)
        assert transform_algebra(invert(v), v) == Identity()
        assert transform_algebra(v, invert(v)) == Identity()
        with pytest.raises(NotInvertible):
            invert(ToDelta0())

    def test_parse(self):
        assert parse_transform(None) == Identity()
        assert parse_transform({"type": "U", "t": "1/2"}) == Ut('1/2')
        assert parse_transform({"type": "V", "t": 1, "u": 2}) == Vtua(1, 2, 0)
        assert isinstance(parse_transform({"type": "xi", "t": 2}), Xi)
        with pytest.raises(MalformedSpec):
            parse_transform({"type": "V", "t": 1})
        with pytest.raises(MalformedSpec):
            parse_transform({"type": "W"})

    def test_xi_needs_variance(self):
        with pytest.raises(TransformInapplicable):
            apply_transform(Xi(ArcsineSemigroup()), MomentSeq.of(1))


class TestDeformed:

    def test_special_transforms(self):
        m, n = moments(BERNOULLI), moments(TWO_POINT)
        assert deformed_convolve(Identity(), m, n) == monotone_convolve(m, n)
        assert deformed_convolve(ToDelta0(), m, n) == boolean_convolve(m, n)
        assert deformed_convolve(ToDelta0(), AtomicMeasure.delta(1), AtomicMeasure.delta(2)) == \
            AtomicMeasure.delta(3)

    @pytest.mark.parametrize('transform', [Ut('1/2'), Vtua(2, '1/2', 1), Fu(3), Xi(ArcsineSemigroup(), 2)])
    @settings(max_examples=15)
    @given(mu=atomic_measures(), nu=atomic_measures())
    def test_mean_and_variance_add(self, transform, mu, nu):
        m = deformed_convolve(transform, moments(mu, 2), moments(nu, 2))
        assert m.mean == mu.mean + nu.mean
        assert m.variance == mu.variance + nu.variance

    @pytest.mark.parametrize('transform', [Ut('1/2'), Vtua(2, '1/2', 0), Vtua('1/3', 2, 1),
                                           Xi(ArcsineSemigroup(), 1)])
    def test_associativity(self, transform):
        samples = [BERNOULLI, TWO_POINT, AtomicMeasure([(-1, '1/3'), (3, '2/3')]), BERNOULLI]
        report = check_T_associativity(transform, samples, order=5)
        assert report.checked_pairs == 3
        assert report.checked_triples == 2
        assert report.passed

    def test_broken_functional(self):
        transform = Xi(ArcsineSemigroup(), functional=lambda m: m.variance ** 2)
        report = check_T_associativity(transform, [BERNOULLI, TWO_POINT, BERNOULLI], order=4)
        assert len(report.condition_failures) > 0
        assert not report.passed


class TestPairs:

    @settings(max_examples=15)
    @given(atomic_measures(), atomic_measures())
    def test_diagonal_pairs(self, mu, nu):
        m, n = moments(mu), moments(nu)
        expected = monotone_convolve(m, n)
        assert cmonotone_convolve((m, m), (n, n)) == (expected, expected)

    @settings(max_examples=15)
    @given(atomic_measures(), atomic_measures())
    def test_point_mass_companions(self, mu, nu):
        m, n, d = moments(mu), moments(nu), moments(DELTA0)
        assert cmonotone_convolve((m, d), (n, d)) == (boolean_convolve(m, n), d)
        assert cmonotone_convolve((m, m), (d, n)) == (orthogonal_convolve(m, n), monotone_convolve(m, n))

    @settings(max_examples=10)
    @given(atomic_measures(max_atoms=2), atomic_measures(max_atoms=2), atomic_measures(max_atoms=2),
           atomic_measures(max_atoms=2))
    def test_associativity_exact(self, a, b, c, d):
        h = [h_of_atomic(mu) for mu in (a, b, c, d)]
        p1, p2, p3 = MeasurePair(h[0], h[1]), MeasurePair(h[1], h[2]), MeasurePair(h[2], h[3])
        left = cmonotone_convolve(cmonotone_convolve(p1, p2), p3)
        right = cmonotone_convolve(p1, cmonotone_convolve(p2, p3))
        assert left == right

    def test_powers_add_cumulants(self):
        pair = (moments(BERNOULLI), moments(TWO_POINT))
        r = cmonotone_cumulants(*pair)
        power = cmonotone_power(pair, 3)
        r3 = cmonotone_cumulants(power.first, power.second)
        assert r3 == [3 * v for v in r]
        assert r3.single == tuple(3 * v for v in r.single)
        with pytest.raises(ValueError):
            cmonotone_power(pair, 0)

    @pytest.mark.slow
    @settings(max_examples=20, deadline=None)
    @given(atomic_measures(), atomic_measures(), st.integers(2, 5))
    def test_powers_add_cumulants_order_8(self, mu, nu, N):
        pair = (moments(mu, 8), moments(nu, 8))
        r = cmonotone_cumulants(*pair)
        power = cmonotone_power(pair, N)
        rN = cmonotone_cumulants(power.first, power.second)
        assert rN == [N * v for v in r]
        assert rN.single == tuple(N * v for v in r.single)

    @settings(max_examples=15)
    @given(atomic_measures(), atomic_measures())
    def test_cfree_special_cases(self, mu, nu):
        m, n, d = moments(mu), moments(nu), moments(DELTA0)
        assert cfree_convolve((m, d), (n, d)) == (boolean_convolve(m, n), d)
        assert cfree_convolve((m, d), (n, n)) == (monotone_convolve(m, n), n)


class TestCones:

    @settings(max_examples=10)
    @given(positive_measures(max_atoms=2), positive_measures(max_atoms=2))
    def test_positive_cone_preserved(self, mu, nu):
        report = check_cone_preservation(Vtua(1, 2, 0), [mu, nu, TWO_POINT])
        assert report.predicted_closed
        assert report.checked == 9
        assert report.observed_closed

    def test_positive_cone_violated(self):
        report = check_cone_preservation(Vtua(1, 1, 1), [TWO_POINT])
        assert report.violations == [(TWO_POINT, TWO_POINT)]
        assert not report.predicted_closed
        assert report.agrees

    def test_symmetric_cone(self):
        samples = [BERNOULLI, AtomicMeasure([(-2, '1/4'), (0, '1/2'), (2, '1/4')])]
        report = check_cone_preservation(Vtua(2, 1, 0), samples, cone='symmetric')
        assert report.observed_closed
        assert report.agrees

    @pytest.mark.slow
    @pytest.mark.parametrize('t, u, a', [(1, 2, 0), (1, 1, 0), (2, 2, 0), ('1/2', 1, 0),
                                         (1, 0, 0), (1, '1/2', 0), (1, 1, 1), (1, 3, '1/2')])
    def test_positive_cone_criterion(self, t, u, a):
        samples = [AtomicMeasure([(0, '99/100'), (k, '1/100')]) for k in range(1, 11)]
        samples += [TWO_POINT, AtomicMeasure([(1, '1/2'), (3, '1/2')])]
        report = check_cone_preservation(Vtua(t, u, a), samples)
        assert report.checked == len(samples) ** 2 >= 100
        assert report.agrees
        assert report.observed_closed == report.predicted_closed

    @pytest.mark.slow
    @pytest.mark.parametrize('t, u, a', [(1, 1, 0), (2, 1, 0), (0, 1, 0), (1, 0, 1), (1, 1, '1/2')])
    def test_symmetric_cone_criterion(self, t, u, a):
        samples = [AtomicMeasure([(-k, '1/200'), (0, '99/100'), (k, '1/200')]) for k in range(1, 11)]
        samples += [BERNOULLI, AtomicMeasure([(-2, '1/4'), (0, '1/2'), (2, '1/4')])]
        report = check_cone_preservation(Vtua(t, u, a), samples, cone='symmetric')
        assert report.checked == len(samples) ** 2 >= 100
        assert report.agrees
        assert report.observed_closed == report.predicted_closed

    def test_unknown_cone(self):
        with pytest.raises(ValueError):
            check_cone_preservation(Identity(), [BERNOULLI], cone='bounded')
