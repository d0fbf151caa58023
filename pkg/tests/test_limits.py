#
# (c) 2026, pyCMono contributors
#
# Created: 15.10.2026
# Updated: 19.10.2026
#
# License: Apache 2.0
#
import math

import pytest
from sympy import QQ

from cmono import series
from cmono.cumulants import moments_from_monotone
from cmono.errors import IrrationalDilation, MalformedSpec, NotNormalized, TransformInapplicable
from cmono.limits import (CMonotonePoisson, DeformedCLT_0a, DeformedCLT_t, DeformedPoisson_ua, KestenCLT,
                          XiArcsinePoisson,
                          XiArcsineCLT, central_limit_law, clt_iterate, convergence_order, dilate_by_root,
                          limit_law_density, moment_errors, parse_law, poisson_input, poisson_iterate,
                          poisson_limit_law)
from cmono.measures import Arcsine, AtomicMeasure, MomentSeq, MonotonePoisson, moments_of
from cmono.pair_convolutions import Vtua
from cmono.transforms import locate_atoms


BERNOULLI = AtomicMeasure([(-1, '1/2'), (1, '1/2')])


class TestLaws:

    def test_arcsine_special_cases(self):
        arcsine = moments_of(Arcsine(1), 6)
        assert KestenCLT(1, 1).moments(6) == arcsine
        assert DeformedCLT_t(1).moments(6) == arcsine
        assert arcsine == (0, 1, 0, QQ(3, 2), 0, QQ(5, 2))

    @pytest.mark.parametrize('t', ['1/2', '2', '3'])
    def test_deformed_clt_is_kesten(self, t):
        law = DeformedCLT_t(t)
        assert law.moments(6) == KestenCLT(1, t).moments(6)
        assert XiArcsineCLT(t).moments(6) == law.moments(6)
        assert law.moments(2) == (0, 1)

    def test_boolean_limit(self):
        assert DeformedCLT_0a(0).moments(4) == moments_of(BERNOULLI, 4)

    def test_deformed_0a_variance(self):
        m = DeformedCLT_0a(1).moments(3)
        assert m[1] == 0
        assert m[2] == 1

    def test_poisson_is_monotone_poisson(self):
        assert CMonotonePoisson(1, 1).moments(4) == moments_of(MonotonePoisson(1), 4)
        assert CMonotonePoisson(2, 2).moments(3) == moments_from_monotone([2, 2, 2])

    def test_deformed_poisson_mean(self):
        assert DeformedPoisson_ua(0, 0, 3).moments(2)[1] == 3
        assert DeformedPoisson_ua('1/2', 1, 1).moments(2)[1] == 1

    def test_kesten_atoms(self):
        law = KestenCLT(2, 1)
        atoms = locate_atoms(law.h(), law.atom_intervals())
        edge = math.sqrt(8 / 3)
        assert [x for x, _ in atoms] == pytest.approx([-edge, edge], abs=1e-9)
        assert [w for _, w in atoms] == pytest.approx([1 / 3, 1 / 3], abs=1e-5)
        assert KestenCLT(1, 2).atom_intervals() == []

    def test_density_formula(self):
        assert DeformedCLT_t(1).density(0.0) == pytest.approx(math.sqrt(2) / (2 * math.pi))
        assert DeformedCLT_t(1).density(2.0) == 0.0
        assert DeformedCLT_0a(1).density(0.5) == 0.0

    def test_invalid(self):
        with pytest.raises(MalformedSpec):
            KestenCLT(0, 1)
        with pytest.raises(MalformedSpec):
            DeformedCLT_t(-1)
        with pytest.raises(MalformedSpec):
            CMonotonePoisson(1, 0)


class TestParse:

    def test_parse(self):
        assert parse_law({'kind': 'deformed_clt_0a', 'a': '1'}) == DeformedCLT_0a(1)
        assert parse_law({'kind': 'kesten_clt', 'alpha2': '2', 'beta2': '1'}) == KestenCLT(2, 1)
        assert parse_law({'kind': 'deformed_clt_t'}) == DeformedCLT_t(1)

    @pytest.mark.parametrize('spec', [
        {'kind': 'gauss'},
        {'kind': 'kesten_clt', 'gamma': '1'},
        ['kesten_clt'],
        {},
    ])
    def test_malformed(self, spec):
        with pytest.raises(MalformedSpec):
            parse_law(spec)

    def test_limit_of_transform(self):
        assert central_limit_law() == KestenCLT(1, 1)
        assert central_limit_law(alpha2=2, beta2=1) == KestenCLT(2, 1)
        assert central_limit_law(Vtua('1/2', 3, 0)) == DeformedCLT_t('1/2')
        assert central_limit_law(Vtua(0, 0, 2)) == DeformedCLT_0a(2)
        assert poisson_limit_law(lam=2) == CMonotonePoisson(2, 2)
        assert poisson_limit_law(Vtua(0, 1, 2), lam=3) == DeformedPoisson_ua(1, 2, 3)
        with pytest.raises(TransformInapplicable):
            central_limit_law(Vtua(1, 0, 1))


class TestDensities:

    @pytest.mark.slow
    def test_deformed_0a(self):
        law = DeformedCLT_0a(1)
        xs = [-0.95 + 0.9 * k / 19 for k in range(20)]
        table = limit_law_density(law, xs)
        assert table.values == pytest.approx([law.density(x) for x in xs], abs=1e-6)
        assert len(table.atoms) == 2
        assert abs(table.mass - 1) < 1e-3

    @pytest.mark.slow
    def test_xi_arcsine_poisson_mass(self):
        law = XiArcsinePoisson(1, '1/4')
        table = limit_law_density(law, [-0.5, 0.0, 0.5, 1.1])
        assert [x for x, _ in table.atoms] == pytest.approx([1.3417], abs=1e-3)
        assert all(v > 0 for v in table.values)
        assert abs(table.mass - 1) < 1e-3

    @pytest.mark.slow
    def test_kesten_mass(self):
        table = limit_law_density(KestenCLT(2, 1), [0.0])
        assert table.continuous_mass == pytest.approx(1 / 3, abs=1e-3)
        assert table.mass == pytest.approx(1, abs=1e-3)


class TestIterates:

    def test_dilation(self):
        assert dilate_by_root(MomentSeq.of(1, 2), 4) == (QQ(1, 2), QQ(1, 2))
        assert dilate_by_root(MomentSeq.of(0, 2, 0, 5), 2) == (0, 1, 0, QQ(5, 4))
        with pytest.raises(IrrationalDilation):
            dilate_by_root(MomentSeq.of(1, 2), 2)

    def test_pair_clt(self):
        m = clt_iterate(BERNOULLI, N=4, order=4)
        assert m == (0, 1, 0, QQ(11, 8))

    def test_pair_clt_rate(self):
        Ns = [4, 8, 16, 32]
        reference = KestenCLT(1, 1).moments(4)
        errors = [moment_errors(clt_iterate(BERNOULLI, N=N, order=4), reference)[3] for N in Ns]
        assert errors == pytest.approx([1 / (2 * N) for N in Ns])
        assert convergence_order(Ns, errors) == pytest.approx(1)

    def test_pair_needs_centered(self):
        with pytest.raises(NotNormalized):
            clt_iterate(AtomicMeasure([(0, '1/2'), (2, '1/2')]), N=4, order=4)
        with pytest.raises(NotNormalized):
            clt_iterate(BERNOULLI, N=4, order=4, nu=AtomicMeasure.delta(1))

    def test_deformed_needs_unit_variance(self):
        with pytest.raises(NotNormalized):
            clt_iterate(Arcsine(2), transform=Vtua(1, 0, 0), N=4, order=4)

    def test_deformed_keeps_variance(self):
        m = clt_iterate(BERNOULLI, transform=Vtua('1/2', 0, 0), N=8, order=4)
        assert m[1] == 0
        assert m[2] == 1

    def test_poisson_input(self):
        assert poisson_input(2, 4) == AtomicMeasure([(0, '1/2'), (1, '1/2')])
        assert poisson_input(4, 4) == AtomicMeasure.delta(1)
        with pytest.raises(ValueError):
            poisson_input(5, 4)

    def test_poisson_iterate(self):
        m = poisson_iterate(2, N=8, order=3)
        assert m[1] == 2
        limit = CMonotonePoisson(2, 2).moments(3)
        coarse = moment_errors(poisson_iterate(2, N=8, order=3), limit)
        fine = moment_errors(poisson_iterate(2, N=64, order=3), limit)
        assert fine[2] < coarse[2]

    @pytest.mark.slow
    def test_pair_clt_rate_order_6(self):
        Ns = [64, 128, 256, 512]
        reference = KestenCLT(1, 1).moments(6)
        errors = [moment_errors(clt_iterate(BERNOULLI, N=N, order=6), reference) for N in Ns]
        assert max(errors[-1]) < 5e-2
        assert convergence_order(Ns, [e[5] for e in errors]) >= 0.9

    def test_cmonotone_poisson_series(self):
        h_rho = moments_of(MonotonePoisson(2), 6).h_series()
        c = QQ(1, 2)
        h = series.identity(h_rho.prec) * (1 - c) + h_rho * c
        assert MomentSeq.from_h_series(h, 6) == CMonotonePoisson(1, 2).moments(6)

    @pytest.mark.slow
    def test_poisson_rate_order_6(self):
        Ns = [64, 128, 256, 512]
        reference = CMonotonePoisson(1, 2).moments(6)
        errors = [moment_errors(poisson_iterate(1, N=N, order=6, rho=2), reference) for N in Ns]
        assert max(errors[-1]) < 5e-2
        assert convergence_order(Ns, [e[5] for e in errors]) >= 0.9

    def test_convergence_order_needs_errors(self):
        with pytest.raises(ValueError):
            convergence_order([1, 2], [0.5, 0.0])
