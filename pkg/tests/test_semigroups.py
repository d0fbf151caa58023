#
# (c) 2026, pyCMono contributors
#
# Created: 11.10.2026
# Updated: 18.10.2026
#
# License: Apache 2.0
#
import numpy as np
import pytest
from sympy import QQ

from cmono.analytic_compiler import AnalyticMap
from cmono.cumulants import cmonotone_cumulants, monotone_cumulants, moments_from_cmonotone
from cmono.errors import InsufficientOrder, LeftUpperHalfPlane, MalformedSpec, TrackDisagreement
from cmono.measures import Arcsine, AtomicMeasure, MonotonePoisson, moments_of
from cmono.pair_convolutions import cmonotone_power
from cmono.semigroups import (ArcsineSemigroup, ConstantField, FieldSemigroup, PickField, ZERO_FIELD,
                              arcsine_field, cauchy_field, default_flow_grid, drift_field, field_from_cumulants,
                              field_to_cumulants, flow_moments, integrate_flow, is_infinitely_divisible,
                              kappa_field, nth_root, parse_field, poisson_field, verify_semigroup_law)


class TestFields:

    def test_arcsine(self):
        field = arcsine_field()
        assert field(2j) == pytest.approx(0.5j)
        assert field_to_cumulants(field, 4) == (0, 1, 0, 0)

    def test_poisson(self):
        field = poisson_field(3)
        assert field(2j) == pytest.approx(3 * 2j / (1 - 2j))
        assert field_to_cumulants(field, 5) == (3, 3, 3, 3, 3)

    def test_constant_fields(self):
        assert drift_field(2)(1j) == pytest.approx(-2)
        assert cauchy_field(1)(np.array([1j, 2 + 1j])) == pytest.approx(np.array([1j, 1j]))
        assert ZERO_FIELD(1j) == 0
        assert isinstance(cauchy_field(1), ConstantField)

    def test_linear_combinations(self):
        z = np.array([1j, -1 + 2j])
        A, B = arcsine_field(), poisson_field()
        assert kappa_field('1/2', 2, A, B)(z) == pytest.approx(0.5 * A(z) + 2 * B(z))
        assert (A + B)(z) == pytest.approx(A(z) + B(z))
        assert (3 * A)(z) == pytest.approx(3 * A(z))

    def test_negative_tau(self):
        with pytest.raises(ValueError):
            PickField(0, [(0, -1)])

    def test_parse(self):
        field = parse_field({"type": "pick", "gamma": "1/2", "tau": [["1", "1/2"]]})
        assert field_to_cumulants(field, 3) == (1, 1, 1)
        assert parse_field({"type": "zero"}) is ZERO_FIELD
        assert field_to_cumulants(parse_field({"type": "arcsine", "var": 2}), 2) == (0, 2)

    @pytest.mark.parametrize('spec', [
        {"type": "pick", "tau": [["0", "-1"]]},
        {"type": "pick", "tau": "0"},
        {"type": "drift"},
        {"type": "gauss"},
        ["arcsine"],
    ])
    def test_malformed(self, spec):
        with pytest.raises(MalformedSpec):
            parse_field(spec)


class TestFieldFromCumulants:

    def test_arcsine(self):
        field = field_from_cumulants((0, 1, 0, 0))
        assert field.gamma == 0
        assert field.tau == ((0, 1),)

    def test_poisson(self):
        field = field_from_cumulants((1, 1, 1, 1, 1, 1))
        assert field.gamma == QQ(1, 2)
        assert field.tau == ((1, QQ(1, 2)),)

    def test_drift_only(self):
        field = field_from_cumulants((QQ(3, 2),))
        assert field.gamma == QQ(3, 2)
        assert field.tau == ()

    def test_two_atoms(self):
        original = PickField('1/3', [(-1, '1/4'), (2, '1/2')])
        field = field_from_cumulants(field_to_cumulants(original, 6))
        assert field.gamma == original.gamma
        assert field.tau == original.tau

    def test_empty(self):
        with pytest.raises(InsufficientOrder):
            field_from_cumulants(())


class TestFlows:

    def test_arcsine_flow_is_closed_form(self):
        state = integrate_flow(arcsine_field(), arcsine_field(), 1)
        h = AnalyticMap("sqrt(z**2 - 2)")
        expected = np.array([complex(h(z)) for z in state.grid])
        assert np.max(np.abs(state.H - expected)) < 1e-9
        assert np.max(np.abs(state.F - expected)) < 1e-9

    def test_evaluate(self):
        state = integrate_flow(arcsine_field(), ZERO_FIELD, 1, grid=[1j])
        H, F = state.evaluate([2j])
        assert H[0] == pytest.approx(2.5j, abs=1e-9)
        assert F[0] == pytest.approx(2j)

    def test_cauchy_flow(self):
        state = integrate_flow(cauchy_field(1), cauchy_field(1), 2, grid=[1j, 1 + 1j])
        assert state.H == pytest.approx(np.array([3j, 1 + 3j]), abs=1e-10)

    def test_grid_must_be_in_upper_half_plane(self):
        with pytest.raises(LeftUpperHalfPlane):
            integrate_flow(arcsine_field(), arcsine_field(), 1, grid=[1, 1j])

    def test_not_a_pick_function(self):
        with pytest.raises(LeftUpperHalfPlane):
            integrate_flow(ConstantField(-1j), ConstantField(-1j), 2, grid=default_flow_grid(6))

    @pytest.mark.parametrize('fields', [
        (arcsine_field(), arcsine_field()),
        (poisson_field(), poisson_field()),
        (poisson_field(2), arcsine_field()),
        (drift_field(1), cauchy_field(1)),
    ])
    def test_semigroup_law(self, fields):
        report = verify_semigroup_law(*fields, s=0.5, t=0.75)
        assert report.passed, (report.f_residual, report.h_residual)

    def test_flow_moments(self):
        mu, nu = flow_moments(arcsine_field(), arcsine_field(), 1, 4)
        assert list(mu) == pytest.approx([0, 1, 0, 1.5], abs=1e-6)
        assert list(nu) == pytest.approx([0, 1, 0, 1.5], abs=1e-6)

    def test_flow_moments_of_poisson(self):
        mu, _ = flow_moments(poisson_field(), poisson_field(), 1, 3)
        assert list(mu) == pytest.approx([1, 2, 4.5], abs=1e-6)

    def test_kappa_linearity_along_flows(self):
        A, B, C = arcsine_field(), poisson_field(), arcsine_field()
        u, v = QQ(1, 2), QQ(1, 4)
        mu, _ = flow_moments(kappa_field(u, v, A, B), C, 1, 4)
        r = [u * a + v * b for a, b in zip(field_to_cumulants(A, 4), field_to_cumulants(B, 4))]
        expected = moments_from_cmonotone(r, field_to_cumulants(C, 4)).to_floats()
        assert list(mu) == pytest.approx(expected, abs=1e-6)


class TestDivisibility:

    def test_bernoulli_is_not_divisible(self):
        r = monotone_cumulants(moments_of(AtomicMeasure([(-1, '1/2'), (1, '1/2')]), 4))
        verdict = is_infinitely_divisible(r.values, r.single, 2)
        assert not verdict.divisible
        assert verdict.min_eig == pytest.approx(-0.5)

    @pytest.mark.parametrize('law', [Arcsine(1), MonotonePoisson(1)])
    def test_divisible_laws(self, law):
        r = monotone_cumulants(moments_of(law, 6))
        verdict = is_infinitely_divisible(r.values, r.single, 3)
        assert verdict.divisible
        assert verdict.exact_psd == (True, True)

    def test_track_disagreement(self):
        r = (0, 1, 0, QQ(-1, 10 ** 12))
        with pytest.warns(TrackDisagreement):
            verdict = is_infinitely_divisible(r, r, 2)
        assert not verdict.divisible
        assert verdict.float_psd == (True, True)

    def test_needs_enough_cumulants(self):
        with pytest.raises(InsufficientOrder):
            is_infinitely_divisible((0, 1, 0), (0, 1, 0), 2)


class TestRoots:

    def test_arcsine_square_root(self):
        r = monotone_cumulants(moments_of(Arcsine(2), 6))
        root = nth_root(r.values, r.single, 2)
        assert root.first == moments_of(Arcsine(1), 6)
        assert root.second == moments_of(Arcsine(1), 6)

    def test_power_of_root(self):
        pair = (moments_of(AtomicMeasure([(-1, '1/2'), (1, '1/2')]), 4),
                moments_of(AtomicMeasure([(0, '1/2'), (2, '1/2')]), 4))
        r = cmonotone_cumulants(*pair)
        root = nth_root(r.values, r.single, 3)
        assert cmonotone_power(root, 3) == pair


class TestSemigroupHandles:

    def test_arcsine(self):
        assert ArcsineSemigroup().moments(2, 4) == moments_of(Arcsine(2), 4)
        assert ArcsineSemigroup().moments(0, 4) == (0, 0, 0, 0)

    def test_field_semigroup(self):
        assert FieldSemigroup(arcsine_field()).moments(2, 4) == moments_of(Arcsine(2), 4)
        assert FieldSemigroup(poisson_field()).moments(1, 3) == moments_of(MonotonePoisson(1), 3)
