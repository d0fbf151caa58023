#
# (c) 2026, pyCMono contributors
#
# Created: 08.10.2026
# Updated: 19.10.2026
#
# License: Apache 2.0
#
import pytest
from hypothesis import given, settings
from sympy import QQ
from sympy.polys import ring

from cmono import series
from cmono.cumulants import (CumulantSeq, b_coefficients, boolean_cumulants, cmonotone_cumulants, cmonotone_vs_cfree,
                             flow_series, free_and_cfree_cumulants, free_cumulants, generic_cumulants,
                             moment_polynomials, moments_from_cfree, moments_from_cmonotone, moments_from_free,
                             moments_from_monotone, monotone_cumulants, verify_axioms)
from cmono.errors import InsufficientOrder
from cmono.measures import Arcsine, AtomicMeasure, MomentSeq, moments_of
from cmono.pair_convolutions import boolean_convolve, monotone_convolve
from tests.strategies import atomic_measures, moment_tables


BERNOULLI = moments_of(AtomicMeasure([(-1, '1/2'), (1, '1/2')]), 4)
DELTA0 = moments_of(AtomicMeasure.delta(0), 4)
SEMICIRCLE = MomentSeq.of(0, 1, 0, 2)


class TestCumulantSeq:

    def test_one_based(self):
        r = CumulantSeq('monotone', [1, 2, 3])
        assert r[1] == 1
        assert r[3] == 3
        with pytest.raises(IndexError):
            r[0]

    def test_unknown_flavor(self):
        with pytest.raises(ValueError):
            CumulantSeq('classical', [1])

    def test_scaled(self):
        r = CumulantSeq('cmonotone', [1, 2], single=[3, 4]).scaled(2)
        assert r == (2, 4)
        assert r.single == (6, 8)


class TestMonotoneAndBoolean:

    def test_bernoulli(self):
        assert monotone_cumulants(BERNOULLI) == (0, 1, 0, QQ(-1, 2))
        assert boolean_cumulants(BERNOULLI) == (0, 1, 0, 0)

    def test_arcsine(self):
        assert monotone_cumulants(moments_of(Arcsine(1), 6)) == (0, 1, 0, 0, 0, 0)

    @given(moment_tables(5))
    def test_monotone_inverse(self, m):
        r = monotone_cumulants(m)
        assert moments_from_monotone(r.values) == m

    def test_b_coefficients(self):
        assert b_coefficients(BERNOULLI) == (0, -1, 0, 0)

    def test_order_too_high(self):
        with pytest.raises(InsufficientOrder):
            monotone_cumulants(BERNOULLI, 6)


class TestCMonotone:

    def test_point_mass_companion_gives_boolean(self):
        r = cmonotone_cumulants(BERNOULLI, DELTA0)
        assert r == (0, 1, 0, 0)
        assert r.single == (0, 0, 0, 0)

    @given(atomic_measures())
    def test_diagonal_is_monotone(self, mu):
        m = moments_of(mu, 5)
        assert cmonotone_cumulants(m, m) == monotone_cumulants(m)

    @given(moment_tables(4), moment_tables(4))
    def test_inverse(self, m_mu, m_nu):
        r = cmonotone_cumulants(m_mu, m_nu)
        assert moments_from_cmonotone(r.values, r.single) == m_mu

    def test_moment_polynomials(self):
        polys = moment_polynomials(BERNOULLI, BERNOULLI)
        _, t = ring('t', QQ)
        assert polys[1] == t
        assert polys[3] == QQ(3, 2) * t**2 - QQ(1, 2) * t
        assert polys[1](2) == 2
        assert polys[3](1) == 1
        assert polys[3](2) == 5

    def test_flow_series(self):
        r = monotone_cumulants(BERNOULLI)
        h_pair, h_single = flow_series(r.values, r.values, 2)
        assert series.moments_of_h(h_single, 4) == (0, 2, 0, 5)
        assert h_pair.agrees_with(h_single)


class TestFreeAndCFree:

    def test_bernoulli(self):
        assert free_cumulants(BERNOULLI) == (0, 1, 0, -1)

    def test_semicircle(self):
        assert free_cumulants(SEMICIRCLE) == (0, 1, 0, 0)

    def test_point_mass_companion_gives_boolean(self):
        _, R = free_and_cfree_cumulants(BERNOULLI, DELTA0)
        assert R == boolean_cumulants(BERNOULLI)

    @given(moment_tables(4), moment_tables(4))
    def test_inverse(self, m_mu, m_nu):
        R_nu, R = free_and_cfree_cumulants(m_mu, m_nu)
        assert moments_from_cfree(R.values, R_nu.values) == m_mu
        assert moments_from_free(R_nu.values) == m_nu


class TestRelation:

    def test_vanishes_at_point_mass(self):
        relation = cmonotone_vs_cfree(None, DELTA0, 4)
        assert set(relation.formal) == {(3, 2), (4, 2), (4, 3)}
        assert all(v == 0 for v in relation.values.values())

    def test_third_order(self):
        relation = cmonotone_vs_cfree(None, DELTA0, 3)
        assert relation.formal[(3, 2)] == relation.y_gens[0] * QQ(1, 2)

    def test_checked_against_values(self):
        arcsine = moments_of(Arcsine(2), 4)
        relation = cmonotone_vs_cfree(BERNOULLI, arcsine, 4)
        r = cmonotone_cumulants(BERNOULLI, arcsine)
        _, R = free_and_cfree_cumulants(BERNOULLI, arcsine)
        assert r[4] == R[4] + relation[(4, 2)] * R[2] + relation[(4, 3)] * R[3]

    @pytest.mark.slow
    def test_sixth_order_depends_on_low_moments(self):
        order = 6
        relation = cmonotone_vs_cfree(None, moments_of(AtomicMeasure.delta(0), order), order)
        assert len(relation.formal) == 10
        for (n, k), p in relation.formal.items():
            for monom in p.monoms():
                assert not any(monom[:order])
                assert not any(monom[order + n - k:])
        assert relation.formal[(3, 2)] == relation.y_gens[0] * QQ(1, 2)

    @pytest.mark.slow
    def test_sixth_order_checked_against_values(self):
        bernoulli = moments_of(AtomicMeasure([(-1, '1/2'), (1, '1/2')]), 6)
        arcsine = moments_of(Arcsine(2), 6)
        cmonotone_vs_cfree(bernoulli, arcsine, 6)
        cmonotone_vs_cfree(arcsine, bernoulli, 6)

    def test_order_cap(self):
        with pytest.raises(InsufficientOrder):
            cmonotone_vs_cfree(None, MomentSeq.of(*([0] * 9)), 9)


class TestGenericCumulants:

    def test_monotone(self):
        assert generic_cumulants(monotone_convolve, BERNOULLI) == monotone_cumulants(BERNOULLI)

    def test_boolean(self):
        assert generic_cumulants(boolean_convolve, BERNOULLI) == boolean_cumulants(BERNOULLI)


class TestAxioms:

    @settings(max_examples=10, deadline=None)
    @given(atomic_measures(), atomic_measures(), atomic_measures())
    def test_monotone_axioms(self, a, b, c):
        samples = [moments_of(mu, 4) for mu in (a, b, c)]
        report = verify_axioms(monotone_cumulants, monotone_convolve, samples, max_power=3,
                               pair_extractor=cmonotone_cumulants)
        assert report.passed, report.failures
        assert report.moment_leading
        assert report.boolean_additivity

    def test_wrong_convolution(self):
        report = verify_axioms(boolean_cumulants, monotone_convolve, [BERNOULLI], max_power=2)
        assert not report.power_additivity
        assert not report.passed
