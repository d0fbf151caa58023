#
# (c) 2026, pyCMono contributors
#
# Created: 04.10.2026
# Updated: 18.10.2026
#
# License: Apache 2.0
#
import math

import numpy as np
import pytest
from hypothesis import given

from cmono import series
from cmono.errors import DegreeOverflow, NoSignChange, NotAProbabilityH, NotFiniteVariance, TransformInapplicable
from cmono.measures import Arcsine, AtomicMeasure, Cauchy, MonotonePoisson
from cmono.transforms import (FiniteMeasure, RationalMap, Z, boundary_density, cauchy_transform, finite_variance_of,
                              h_of_atomic, locate_atoms, measure_from_h, named_h, nevanlinna_of,
                              stieltjes_density)
from tests.strategies import atomic_measures


BERNOULLI = AtomicMeasure([(-1, '1/2'), (1, '1/2')])


class TestRationalMap:

    def test_bernoulli(self):
        assert h_of_atomic(BERNOULLI) == RationalMap(Z**2 - 1, Z)

    def test_normalized(self):
        h = RationalMap(2 * Z**2 - 2, 2 * Z)
        assert h == RationalMap(Z**2 - 1, Z)
        assert h.degree == 2

    def test_composition(self):
        h = RationalMap(Z - 1).compose(RationalMap(Z - 2))
        assert measure_from_h(h) == AtomicMeasure.delta(3)

    def test_degree_cap(self):
        h = h_of_atomic(BERNOULLI)
        with pytest.raises(DegreeOverflow):
            h.compose(h, degree_cap=3)

    def test_series(self):
        h = h_of_atomic(BERNOULLI).series(6)
        assert series.moments_of_h(h, 4) == (0, 1, 0, 1)

    def test_float_evaluation(self):
        h = h_of_atomic(BERNOULLI)
        assert h(2j) == pytest.approx(2j + 0.5j)
        assert h.expands_imaginary_part()


class TestMeasureFromH:

    @given(atomic_measures())
    def test_inverse_of_h(self, mu):
        assert measure_from_h(h_of_atomic(mu)) == mu

    def test_irrational_atoms(self):
        h = h_of_atomic(BERNOULLI)
        mu = measure_from_h(h.compose(h))
        assert isinstance(mu, FiniteMeasure)
        assert not mu.exact
        assert len(mu) == 4
        assert float(mu.mass) == pytest.approx(1.0, abs=1e-12)
        assert float(mu.atoms[-1][0]) == pytest.approx((1 + math.sqrt(5)) / 2)

    @pytest.mark.parametrize('h', [
        RationalMap(Z**2 + 1, Z),
        RationalMap(2 * Z),
        RationalMap(Z**2 - 1, -Z),
    ])
    def test_not_a_reciprocal_cauchy_transform(self, h):
        with pytest.raises(NotAProbabilityH):
            measure_from_h(h)


class TestRepresentations:

    def test_finite_variance_form(self):
        form = finite_variance_of(h_of_atomic(BERNOULLI))
        assert form.a == 0
        assert form.rho.atoms == ((0, 1),)
        assert form(2j) == pytest.approx(2.5j)

    def test_nevanlinna_form(self):
        mu = AtomicMeasure([(0, '1/2'), (2, '1/2')])
        h = h_of_atomic(mu)
        form = nevanlinna_of(h)
        assert form(1 + 1j) == pytest.approx(complex(h(1 + 1j)))

    def test_needs_finite_variance(self):
        with pytest.raises(NotFiniteVariance):
            finite_variance_of(named_h(Arcsine(1)))


class TestNamedLaws:

    def test_arcsine_density(self):
        g = cauchy_transform(named_h(Arcsine(1)))
        assert stieltjes_density(g, 0.5) == pytest.approx(1 / (math.pi * math.sqrt(1.75)), abs=1e-6)
        assert boundary_density(g, 0.5) == pytest.approx(1 / (math.pi * math.sqrt(1.75)), rel=1e-9)

    def test_cauchy_density(self):
        g = cauchy_transform(named_h(Cauchy(1)))
        assert boundary_density(g, 1.0) == pytest.approx(1 / (2 * math.pi), rel=1e-9)

    def test_no_closed_form(self):
        with pytest.raises(TransformInapplicable):
            named_h(MonotonePoisson(1))


class TestAtoms:

    def test_bernoulli_atoms(self):
        h = h_of_atomic(BERNOULLI)
        atoms = locate_atoms(h.mp_eval, [(-np.inf, 0), (0, np.inf)])
        assert [x for x, _ in atoms] == pytest.approx([-1, 1], abs=1e-10)
        assert [w for _, w in atoms] == pytest.approx([0.5, 0.5], abs=1e-6)

    def test_no_atom(self):
        with pytest.raises(NoSignChange):
            locate_atoms(named_h(Arcsine(1)), [(2, np.inf)])
