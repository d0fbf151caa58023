#
# (c) 2026, pyCMono contributors
#
# Created: 14.10.2026
# Updated: 19.10.2026
#
# License: Apache 2.0
#
"""
Central limit and Poisson limit theorems for c-monotone and deformed monotone convolutions.

The iterates are computed exactly: `clt_iterate` convolves `N` copies of `D_(1/sqrt N) mu`, and `poisson_iterate`
convolves `N` copies of `(1 - lam/N) delta_0 + (lam/N) delta_1`.  The limit laws are known in closed form through
their reciprocal Cauchy transforms, given here as `AnalyticMap`s, from which we get moments (exact series at
infinity), densities (Stieltjes inversion) and atoms (zeros of `H` on the real line).
"""
import dataclasses
import logging
import math
import typing

import numpy as np
from scipy.integrate import quad
from sympy import QQ

from .analytic_compiler import AnalyticMap
from .config import settings
from .cumulants import moments_from_cmonotone
from .errors import (IrrationalDilation, MalformedSpec, NoSignChange, NonconvergentLadder,
                     NotNormalized, TransformInapplicable)
from .measures import AtomicMeasure, MomentSeq, format_rational, moments_of, to_rational
from .pair_convolutions import MeasurePair, Transform, Vtua, Xi, cmonotone_power, deformed_convolve
from .semigroups import ArcsineSemigroup
from .series import moments_of_h
from .transforms import boundary_density, cauchy_transform, locate_atoms, stieltjes_density


LOGGER = logging.getLogger(__name__)


#
# Limit laws
#

class LimitLaw(object):
    """A limit distribution, known through its reciprocal Cauchy transform."""

    kind = None
    _fields = ()

    def __eq__(self, other):
        return type(self) is type(other) and self.params == other.params

    def __hash__(self):
        return hash((type(self).__name__, self.params))

    @property
    def params(self):
        return tuple(getattr(self, f) for f in self._fields)

    def __repr__(self):
        args = ', '.join(f"{f}={format_rational(getattr(self, f))}" for f in self._fields)
        return f"{type(self).__name__}({args})"

    def h(self) -> AnalyticMap:
        raise TransformInapplicable(f"{self!r} has no closed-form reciprocal Cauchy transform")

    def support(self):
        """The intervals carrying the absolutely continuous part."""
        return []

    def atom_intervals(self):
        """Open intervals on which `H` is real and increasing, each holding at most one atom."""
        return []

    def moments(self, order: int):
        h = self.h().series(order + 2)
        return MomentSeq(moments_of_h(h, order))


def _sqrt_bound(value):
    return math.sqrt(float(value))


class KestenCLT(LimitLaw):
    """
    The limit of `(D_(1/sqrt N) mu, D_(1/sqrt N) nu)^(|> N)` for centered `mu`, `nu` with variances `alpha2`,
    `beta2`: `H = (1 - r) z + r sqrt(z^2 - 2 beta2)`, `r = alpha2/beta2`.  For `r > 1` it has two atoms.
    """

    kind = 'kesten_clt'
    _fields = ('alpha2', 'beta2')

    def __init__(self, alpha2=1, beta2=1):
        self.alpha2 = to_rational(alpha2)
        self.beta2 = to_rational(beta2)
        if self.alpha2 <= 0 or self.beta2 <= 0:
            raise MalformedSpec("the Kesten limit needs alpha2 > 0 and beta2 > 0")

    @property
    def r(self):
        return self.alpha2 / self.beta2

    def h(self):
        return AnalyticMap("(1 - r)*z + r*sqrt(z**2 - 2*s)", r=self.r, s=self.beta2)

    def support(self):
        edge = _sqrt_bound(2 * self.beta2)
        return [(-edge, edge)]

    def atom_intervals(self):
        if self.r <= 1:
            return []
        edge = _sqrt_bound(2 * self.beta2)
        return [(-np.inf, -edge), (edge, np.inf)]


class CMonotonePoisson(LimitLaw):
    """
    The c-monotone Poisson law `p_(lam, rho)`, with all pair cumulants `lam` and all cumulants of the second
    component `rho`: `H = (1 - lam/rho) z + (lam/rho) H_(p_rho)`.  `H_(p_rho)` solves an ODE and has no closed
    form, so only the moments are available.
    """

    kind = 'cmonotone_poisson'
    _fields = ('lam', 'rho')

    def __init__(self, lam=1, rho=1):
        self.lam = to_rational(lam)
        self.rho = to_rational(rho)
        if self.lam <= 0 or self.rho <= 0:
            raise MalformedSpec("the Poisson limit needs lam > 0 and rho > 0")

    def moments(self, order: int):
        return moments_from_cmonotone([self.lam] * order, [self.rho] * order, order)


class DeformedCLT_t(LimitLaw):
    """
    The central limit of `|>_(t,u,0)`, the Kesten law `H = (1 - 1/t) z + (1/t) sqrt(z^2 - 2t)`.  The density is
    `sqrt(2t - x^2) / (2 pi (1 - (1 - t/2) x^2))` on `[-sqrt(2t), sqrt(2t)]`; for `t < 1` there are atoms at
    `+-1/sqrt(1 - t/2)`.
    """

    kind = 'deformed_clt_t'
    _fields = ('t',)

    def __init__(self, t=1):
        self.t = to_rational(t)
        if self.t <= 0:
            raise MalformedSpec("the deformed central limit needs t > 0")

    def h(self):
        return AnalyticMap("(1 - 1/t)*z + (1/t)*sqrt(z**2 - 2*t)", t=self.t)

    def support(self):
        edge = _sqrt_bound(2 * self.t)
        return [(-edge, edge)]

    def atom_intervals(self):
        if self.t >= 1:
            return []
        edge = _sqrt_bound(2 * self.t)
        return [(-np.inf, -edge), (edge, np.inf)]

    def density(self, x: float):
        t = float(self.t)
        if x * x >= 2 * t:
            return 0.0
        return math.sqrt(2 * t - x * x) / (2 * math.pi * (1 - (1 - t / 2) * x * x))


class XiArcsineCLT(DeformedCLT_t):
    """The central limit of the `Xi_t` deformation by the arcsine semigroup, again `nu^(t, 0)`."""

    kind = 'xi_arcsine_clt'


class DeformedCLT_0a(LimitLaw):
    """
    The central limit of `|>_(0,0,a)`: `H = z - (1/a) log_[1](1 + a/z)`, with density
    `|a| / ((log|1 + a/x| - a x)^2 + pi^2)` between `-a` and 0, and one atom on either side.  For `a = 0` the
    convolution is Boolean and the limit is `(delta_-1 + delta_1)/2`.
    """

    kind = 'deformed_clt_0a'
    _fields = ('a',)

    def __init__(self, a=1):
        self.a = to_rational(a)

    def h(self):
        if self.a == 0:
            return AnalyticMap("z - 1/z")
        return AnalyticMap("z - (1/a)*log1(1 + a/z)", a=self.a)

    def support(self):
        if self.a == 0:
            return []
        a = float(self.a)
        return [(min(-a, 0.0), max(-a, 0.0))]

    def atom_intervals(self):
        if self.a == 0:
            return [(-np.inf, 0.0), (0.0, np.inf)]
        lo, hi = self.support()[0]
        return [(-np.inf, lo), (hi, np.inf)]

    def density(self, x: float):
        a = float(self.a)
        lo, hi = self.support()[0]
        if not lo < x < hi:
            return 0.0
        return abs(a) / ((math.log(abs(1 + a / x)) - a * x) ** 2 + math.pi ** 2)


class DeformedPoisson_ua(LimitLaw):
    """
    The Poisson limit of `|>_(0,u,a)`: `H = z - lam - (1/c) log_[1](1 + c lam/(z - 1))` with `c = a - u`, the
    solution of `dH/dlam = -1 - 1/(z - 1 + c lam)`.  For `c = 0`, `H = z - lam - lam/(z - 1)` has two atoms only.
    """

    kind = 'deformed_poisson_ua'
    _fields = ('u', 'a', 'lam')

    def __init__(self, u=0, a=0, lam=1):
        self.u = to_rational(u)
        self.a = to_rational(a)
        self.lam = to_rational(lam)
        if self.lam <= 0:
            raise MalformedSpec("the Poisson limit needs lam > 0")

    @property
    def c(self):
        return self.a - self.u

    def h(self):
        if self.c == 0:
            return AnalyticMap("z - l - l/(z - 1)", l=self.lam)
        return AnalyticMap("z - l - (1/c)*log1(1 + c*l/(z - 1))", l=self.lam, c=self.c)

    def support(self):
        if self.c == 0:
            return []
        end = 1 - float(self.c * self.lam)
        return [(min(end, 1.0), max(end, 1.0))]

    def atom_intervals(self):
        if self.c == 0:
            return [(-np.inf, 1.0), (1.0, np.inf)]
        lo, hi = self.support()[0]
        return [(-np.inf, lo), (hi, np.inf)]

    def density(self, x: float):
        if self.c == 0:
            return 0.0
        lo, hi = self.support()[0]
        if not lo < x < hi:
            return 0.0
        c, lam = float(self.c), float(self.lam)
        return abs(c) / ((math.log(abs(1 + c * lam / (x - 1))) - c * (x - lam)) ** 2 + math.pi ** 2)


class XiArcsinePoisson(LimitLaw):
    """
    The Poisson limit of the `Xi_t` deformation by the arcsine semigroup:
    ```
    H = (1 - 1/t) z + (1/t) sqrt(z^2 - 2 lam t) + (1/t) log_[1]((sqrt(z^2 - 2 lam t) - 1)/(z - 1)) - lam
    ```
    The absolutely continuous part lives on `[-sqrt(2 lam t), sqrt(2 lam t)]` and `[1, sqrt(2 lam t + 1)]`.
    """

    kind = 'xi_arcsine_poisson'
    _fields = ('t', 'lam')

    def __init__(self, t=1, lam=1):
        self.t = to_rational(t)
        self.lam = to_rational(lam)
        if self.t <= 0 or self.lam <= 0:
            raise MalformedSpec("the Poisson limit needs t > 0 and lam > 0")

    def h(self):
        return AnalyticMap("(1 - 1/t)*z + (1/t)*sqrt(z**2 - 2*l*t) "
                           "+ (1/t)*log1((sqrt(z**2 - 2*l*t) - 1)/(z - 1)) - l", t=self.t, l=self.lam)

    def support(self):
        edge = _sqrt_bound(2 * self.lam * self.t)
        outer = _sqrt_bound(2 * self.lam * self.t + 1)
        if edge >= 1:
            return [(-edge, outer)]
        return [(-edge, edge), (1.0, outer)]

    def atom_intervals(self):
        edge = _sqrt_bound(2 * self.lam * self.t)
        outer = _sqrt_bound(2 * self.lam * self.t + 1)
        intervals = [(-np.inf, -edge)]
        if edge < 1:
            intervals.append((edge, 1.0))
        intervals.append((outer, np.inf))
        return intervals


LAWS = {cls.kind: cls for cls in (KestenCLT, CMonotonePoisson, DeformedCLT_t, XiArcsineCLT, DeformedCLT_0a,
                                  DeformedPoisson_ua, XiArcsinePoisson)}


def parse_law(spec: dict):
    """A limit law from its JSON spec, e.g. `{"kind": "deformed_clt_0a", "a": "1"}`."""
    if not isinstance(spec, dict):
        raise MalformedSpec(f"a law spec must be a JSON object, got {spec!r}")
    cls = LAWS.get(spec.get('kind'))
    if cls is None:
        raise MalformedSpec(f"unknown limit law {spec.get('kind')!r}; known are {', '.join(sorted(LAWS))}")
    unknown = set(spec) - {'kind'} - set(cls._fields)
    if unknown:
        raise MalformedSpec(f"unknown parameters for {cls.kind}: {', '.join(sorted(unknown))}")
    return cls(**{key: value for key, value in spec.items() if key != 'kind'})


def limit_law_h(law: LimitLaw):
    return law.h()


def limit_law_atom_intervals(law: LimitLaw):
    return law.atom_intervals()


def limit_law_moments(law: LimitLaw, order: int):
    """The moments of the limit law, from the exact expansion of its `H` at infinity."""
    return law.moments(order)


def central_limit_law(transform: Transform = None, alpha2=1, beta2=1):
    """The limit law of `clt_iterate` for the given transform, or for the pair mode if `transform` is `None`."""
    if transform is None:
        return KestenCLT(alpha2, beta2)
    if isinstance(transform, Xi) and isinstance(transform.semigroup, ArcsineSemigroup) and \
            transform.functional is None:
        return XiArcsineCLT(transform.t)
    if isinstance(transform, Vtua):
        if transform.a == 0 and transform.t > 0:
            return DeformedCLT_t(transform.t)
        if transform.t == 0 and transform.u == 0:
            return DeformedCLT_0a(transform.a)
        if transform.t == 0 and transform.a == 0:
            return DeformedCLT_0a(0)
    raise TransformInapplicable(f"no closed-form central limit law is known for {transform!r}")


def poisson_limit_law(transform: Transform = None, lam=1, rho=None):
    """The limit law of `poisson_iterate` for the given transform, or for the pair mode if `transform` is `None`."""
    if transform is None:
        return CMonotonePoisson(lam, lam if rho is None else rho)
    if isinstance(transform, Xi) and isinstance(transform.semigroup, ArcsineSemigroup) and \
            transform.functional is None:
        return XiArcsinePoisson(transform.t, lam)
    if isinstance(transform, Vtua) and transform.t == 0:
        return DeformedPoisson_ua(transform.u, transform.a, lam)
    raise TransformInapplicable(f"no closed-form Poisson limit law is known for {transform!r}")


#
# Densities
#

@dataclasses.dataclass
class DensityTable:
    law: LimitLaw
    xs: typing.List[float]
    values: typing.List[float]
    atoms: typing.List[typing.Tuple[float, float]]
    continuous_mass: float

    @property
    def mass(self):
        return self.continuous_mass + sum(w for _, w in self.atoms)

    @property
    def passed(self):
        return abs(self.mass - 1) <= 1e-3


def _inside(x, support, margin: float = 0.0):
    return any(lo + margin < x < hi - margin for lo, hi in support)


def limit_law_density(law: LimitLaw, xs, edge_margin: float = 1e-2):
    """
    The density of the law on the points `xs` by Stieltjes inversion of `G = 1/H`, its atoms located on the atom
    intervals, and the total mass.  Close to the end points of the support the extrapolation ladder may not settle;
    within `edge_margin` of an end point we fall back to a direct evaluation just above the real line.
    """
    h = law.h()
    g = cauchy_transform(h)
    support = law.support()
    values = []
    for x in xs:
        x = float(x)
        if not _inside(x, support):
            values.append(0.0)
            continue
        try:
            values.append(stieltjes_density(g, x))
        except NonconvergentLadder:
            if _inside(x, support, edge_margin):
                raise
            LOGGER.warning("ladder did not settle at x=%s near the edge of the support; using the boundary value", x)
            values.append(boundary_density(g, x))
    atoms = []
    for interval in law.atom_intervals():
        try:
            atoms.extend(locate_atoms(h, [interval]))
        except NoSignChange:
            LOGGER.info("no atom of %r in %s", law, interval)
    continuous = 0.0
    for lo, hi in support:
        value, error = quad(lambda x: boundary_density(g, x), lo, hi, limit=200)
        LOGGER.debug("mass on [%s, %s]: %s (+- %s)", lo, hi, value, error)
        continuous += value
    table = DensityTable(law, [float(x) for x in xs], values, atoms, continuous)
    LOGGER.info("%r: continuous mass %.6f, %d atoms, total %.6f", law, continuous, len(atoms), table.mass)
    return table


#
# Iterates
#

def _check_normalized(m: MomentSeq, variance_one: bool):
    if len(m) < 2:
        raise NotNormalized("normalization needs moments up to order 2")
    if m[1] != 0:
        raise NotNormalized(f"the central limit theorem needs mean 0, got {format_rational(m[1])}")
    if variance_one and m[2] != 1:
        raise NotNormalized(f"the central limit theorem needs variance 1, got {format_rational(m[2])}")
    if m[2] <= 0:
        raise NotNormalized("the central limit theorem needs a positive variance")


def dilate_by_root(m: MomentSeq, N: int):
    """
    The moments `m_n N^(-n/2)` of `D_(1/sqrt N) mu`.  They stay rational when the odd moments vanish or `N` is a
    perfect square; otherwise `IrrationalDilation` is raised.
    """
    root = math.isqrt(N)
    square = root * root == N
    values = []
    for n, v in enumerate(m, start=1):
        if n % 2 == 0:
            values.append(v / QQ(N) ** (n // 2))
        elif v == 0:
            values.append(QQ(0))
        elif square:
            values.append(v / QQ(root) ** n)
        else:
            raise IrrationalDilation(f"m_{n} != 0 and N = {N} is not a square: the dilated moments are irrational")
    return MomentSeq(values)


def _deformed_power(transform: Transform, mu: MomentSeq, N: int, order: int):
    # left to right: ((mu |>_T mu) |>_T mu) ...
    result = mu
    for _ in range(N - 1):
        result = deformed_convolve(transform, result, mu, order)
    return result


def clt_iterate(mu, transform: Transform = None, N: int = 64, order: int = None, nu=None):
    """
    The moments of `(D_(1/sqrt N) mu)^(|>_T N)`, or, if `transform` is `None`, of the first component of
    `(D_(1/sqrt N) mu, D_(1/sqrt N) nu)^(|> N)` (with `nu = mu` by default).  The deformed mode needs mean 0 and
    variance 1; the pair mode only needs centered inputs.
    """
    order = settings.series_order if order is None else order
    if N < 1:
        raise ValueError("N must be at least 1")
    m_mu = moments_of(mu, order)
    if transform is None:
        m_nu = m_mu if nu is None else moments_of(nu, order)
        _check_normalized(m_mu, False)
        _check_normalized(m_nu, False)
        pair = MeasurePair(dilate_by_root(m_mu, N), dilate_by_root(m_nu, N))
        result = cmonotone_power(pair, N, order).first
    else:
        _check_normalized(m_mu, True)
        result = _deformed_power(transform, dilate_by_root(m_mu, N), N, order)
    LOGGER.info("central limit iterate N=%d: %s", N, result)
    return result


def poisson_input(lam, N: int):
    """`(1 - lam/N) delta_0 + (lam/N) delta_1`."""
    w = to_rational(lam) / N
    if not 0 < w <= 1:
        raise ValueError(f"lam/N must lie in (0, 1], got {format_rational(w)}")
    if w == 1:
        return AtomicMeasure([(1, 1)])
    return AtomicMeasure([(0, 1 - w), (1, w)])


def poisson_iterate(lam, transform: Transform = None, N: int = 64, order: int = None, rho=None):
    """
    The moments of `(mu^(N))^(|>_T N)`, or, if `transform` is `None`, of the first component of
    `(mu^(N), nu^(N))^(|> N)`, where `nu^(N)` uses `rho` in place of `lam` (default `rho = lam`).
    """
    order = settings.series_order if order is None else order
    mu = moments_of(poisson_input(lam, N), order)
    if transform is None:
        nu = moments_of(poisson_input(lam if rho is None else rho, N), order)
        result = cmonotone_power(MeasurePair(mu, nu), N, order).first
    else:
        result = _deformed_power(transform, mu, N, order)
    LOGGER.info("Poisson iterate N=%d: %s", N, result)
    return result


def moment_errors(iterate: MomentSeq, reference: MomentSeq):
    return [abs(float(a) - float(b)) for a, b in zip(iterate.to_floats(), reference.to_floats())]


def convergence_order(Ns, errors):
    """The empirical order `p` in `error ~ C N^(-p)`, by a least-squares fit on the log-log scale."""
    Ns = np.asarray(Ns, dtype=float)
    errors = np.asarray(errors, dtype=float)
    if np.any(errors <= 0):
        raise ValueError("errors must be positive to fit a rate")
    slope, _ = np.polyfit(np.log(Ns), np.log(errors), 1)
    return float(-slope)
