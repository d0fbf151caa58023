#
# (c) 2026, pyCMono contributors
#
# Created: 09.10.2026
# Updated: 18.10.2026
#
# License: Apache 2.0
#
"""
Convolutions of distributions and of pairs of distributions, expressed through reciprocal Cauchy transforms:
```
monotone      H = H_mu o H_nu
Boolean       H = H_mu + H_nu - z
orthogonal    H = H_mu o H_nu - H_nu + z
c-monotone    (H_mu1 o H_nu2 + H_mu2 - H_nu2,  H_nu1 o H_nu2)
deformed      H = H_mu o H_Tnu + H_nu - H_Tnu
```
Every operation runs on three tracks, chosen by the type of its arguments:

  - `RationalMap`: the transforms themselves, exactly;
  - `AtomicMeasure`: through the exact rational transforms, returning the measure again;
  - `MomentSeq` (or named laws, or atomic measures together with an explicit `order`): through truncated series in
    `1/z`, returning moments.

The c-free convolution only exists on the series track.
"""
import dataclasses
import logging
import typing

import sympy
from sympy import QQ

from . import series
from .config import settings
from .cumulants import free_and_cfree_cumulants, moments_from_cfree, moments_from_free
from .errors import InsufficientOrder, NotInvertible, TransformInapplicable, MalformedSpec
from .measures import AtomicMeasure, MomentSeq, format_rational, moments_of, to_rational
from .transforms import RationalMap, Z, h_of_atomic, measure_from_h


LOGGER = logging.getLogger(__name__)


#
# Transforms of measures
#

class Transform(object):
    """A map `T` on distributions, acting on reciprocal Cauchy transforms."""

    _fields = ()

    def __eq__(self, other):
        return type(self) is type(other) and \
            all(getattr(self, f) == getattr(other, f) for f in self._fields)

    def __hash__(self):
        return hash((type(self).__name__,) + tuple(getattr(self, f) for f in self._fields))

    def __repr__(self):
        args = ', '.join(str(getattr(self, f)) for f in self._fields)
        return f"{type(self).__name__}({args})"

    def h_series(self, h: series.Series, m: MomentSeq):
        raise NotImplementedError()

    def h_rational(self, h: RationalMap, mean, variance):
        raise TransformInapplicable(f"{self!r} has no rational form")


class Vtua(Transform):
    """
    `H_(V mu)(z) = t H_mu(z) + (1 - t) z + (t - u) m(mu) + a sigma^2(mu)`, with `t >= 0`.  The identity, the
    collapse to `delta_0`, the t-transformation `U_t`, and the map `F_u(mu) = delta_(u m(mu))` are special cases.
    """

    def __init__(self, t, u, a=0):
        self.t = to_rational(t)
        self.u = to_rational(u)
        self.a = to_rational(a)
        if self.t < 0:
            raise TransformInapplicable(f"V needs t >= 0, got {self.t}")

    _fields = ('t', 'u', 'a')

    def __eq__(self, other):
        return isinstance(other, Vtua) and (self.t, self.u, self.a) == (other.t, other.u, other.a)

    def __hash__(self):
        return hash(('Vtua', self.t, self.u, self.a))

    def __repr__(self):
        return f"V({format_rational(self.t)}, {format_rational(self.u)}, {format_rational(self.a)})"

    def shift(self, mean, variance):
        """The constant `(t - u) m + a sigma^2`."""
        shift = (self.t - self.u) * mean
        if self.a != 0:
            shift = shift + self.a * variance
        return shift

    def h_series(self, h: series.Series, m: MomentSeq):
        if len(m) < 2 and self.a != 0:
            raise InsufficientOrder(f"{self!r} needs the variance, i.e. moments up to order 2")
        variance = m.variance if len(m) >= 2 else 0
        z = series.identity(h.prec)
        return h * self.t + z * (1 - self.t) + self.shift(m.mean, variance)

    def h_rational(self, h: RationalMap, mean, variance):
        z = RationalMap.identity()
        return h * self.t + z * (1 - self.t) + self.shift(mean, variance)

    def mean_variance(self, mean, variance):
        """The action on mean and variance: `(u m - a sigma^2, t sigma^2)`."""
        return self.u * mean - self.a * variance, self.t * variance


class Identity(Vtua):

    def __init__(self):
        super().__init__(1, 1, 0)


class ToDelta0(Vtua):

    def __init__(self):
        super().__init__(0, 0, 0)


class Ut(Vtua):

    def __init__(self, t):
        super().__init__(t, t, 0)


class Fu(Vtua):

    def __init__(self, u):
        super().__init__(0, u, 0)


class Xi(Transform):
    """
    `Xi(mu) = xi_(f(mu))` for a convolution semigroup `{xi_s}` and a functional `f`, by default `f = t sigma^2`.
    The semigroup is anything with a method `moments(s, order)`.
    """

    def __init__(self, semigroup, t=1, functional=None):
        self.semigroup = semigroup
        self.t = to_rational(t)
        self.functional = functional

    _fields = ('semigroup', 't')

    def __eq__(self, other):
        return isinstance(other, Xi) and self.semigroup is other.semigroup and self.t == other.t and \
            self.functional is other.functional

    def __hash__(self):
        return hash(('Xi', id(self.semigroup), self.t))

    def time(self, m: MomentSeq):
        if self.functional is not None:
            return self.functional(m)
        if len(m) < 2:
            raise TransformInapplicable("Xi needs a finite variance (moments up to order 2)")
        return self.t * m.variance

    def h_series(self, h: series.Series, m: MomentSeq):
        values = self.semigroup.moments(self.time(m), len(m))
        return series.h_series(tuple(values)).truncate(h.prec)


def transform_algebra(outer: Vtua, inner: Vtua):
    """`V_(t', u', a') V_(t, u, a) = V_(t't, u'u, u'a + a't)`."""
    return Vtua(outer.t * inner.t, outer.u * inner.u, outer.u * inner.a + outer.a * inner.t)


def invert(transform: Vtua):
    if transform.t == 0 or transform.u == 0:
        raise NotInvertible(f"{transform!r} is not invertible")
    return Vtua(1 / transform.t, 1 / transform.u, -transform.a / (transform.t * transform.u))


def parse_transform(spec, semigroup=None):
    """
    A transform from its JSON spec: `{"type": "identity"}`, `{"type": "delta0"}`, `{"type": "U", "t": ...}`,
    `{"type": "V", "t": ..., "u": ..., "a": ...}`, `{"type": "F", "u": ...}`, or `{"type": "xi", "t": ...}`.
    """
    if spec is None:
        return Identity()
    if not isinstance(spec, dict):
        raise MalformedSpec(f"a transform spec must be a JSON object, got {spec!r}")
    kind = spec.get('type')
    try:
        if kind == 'identity':
            return Identity()
        elif kind == 'delta0':
            return ToDelta0()
        elif kind == 'U':
            return Ut(spec['t'])
        elif kind == 'V':
            return Vtua(spec['t'], spec['u'], spec.get('a', 0))
        elif kind == 'F':
            return Fu(spec['u'])
        elif kind == 'xi':
            if semigroup is None:
                from .semigroups import ArcsineSemigroup
                semigroup = ArcsineSemigroup()
            return Xi(semigroup, spec.get('t', 1))
    except KeyError as e:
        raise MalformedSpec(f"transform spec of type {kind!r} is missing the key {e}")
    raise MalformedSpec(f"unknown transform type {kind!r}")


#
# Tracks
#

def _order_of(*args, order: int = None):
    if order is not None:
        return order
    orders = [len(a) for a in args if isinstance(a, MomentSeq)]
    return min(orders) if len(orders) > 0 else settings.series_order


def _is_rational(*args):
    return all(isinstance(a, RationalMap) for a in args)


def _is_atomic(*args):
    return all(isinstance(a, AtomicMeasure) for a in args)


def _as_moments(mu, order: int):
    if isinstance(mu, series.Series):
        return MomentSeq(series.moments_of_h(mu, order))
    return moments_of(mu, order)


def _mean_variance_of_h(h: RationalMap):
    m = MomentSeq(series.moments_of_h(h.series(2), 2))
    return m.mean, m.variance


def _run(rational_op, series_op, args, order: int = None):
    """Dispatch `args` to the rational or the series track."""
    if order is None and _is_rational(*args):
        return rational_op(*args)
    if order is None and _is_atomic(*args):
        return measure_from_h(rational_op(*[h_of_atomic(a) for a in args]))
    order = _order_of(*args, order=order)
    moments = [_as_moments(a, order) for a in args]
    h = series_op(*[m.h_series() for m in moments])
    return MomentSeq.from_h_series(h, order)


def _z(prec: int):
    return series.identity(prec)


def monotone_convolve(mu, nu, order: int = None):
    """`H_(mu |> nu) = H_mu o H_nu`."""
    return _run(lambda a, b: a.compose(b),
                lambda a, b: a.compose(b),
                (mu, nu), order)


def boolean_convolve(mu, nu, order: int = None):
    """`H_(mu + nu) = H_mu + H_nu - z`."""
    return _run(lambda a, b: a + b - RationalMap.identity(),
                lambda a, b: a + b - _z(min(a.prec, b.prec)),
                (mu, nu), order)


def orthogonal_convolve(mu, nu, order: int = None):
    """`H_(mu |- nu) = H_mu o H_nu - H_nu + z`."""
    return _run(lambda a, b: a.compose(b) - b + RationalMap.identity(),
                lambda a, b: a.compose(b) - b + _z(b.prec),
                (mu, nu), order)


def boolean_power(mu, u, order: int = None):
    """The Boolean power `mu^(+u)`, `H = u H_mu + (1 - u) z`, for any `u >= 0`."""
    u = to_rational(u)
    if u < 0:
        raise TransformInapplicable(f"Boolean powers need u >= 0, got {u}")
    return _run(lambda a: a * u + RationalMap.identity() * (1 - u),
                lambda a: a * u + _z(a.prec) * (1 - u),
                (mu,), order)


def kappa(u, v, mu, nu, order: int = None):
    """`kappa^(u,v)(mu, nu) = mu^(+u) + nu^(+v)` (Boolean)."""
    return boolean_convolve(boolean_power(mu, u, order), boolean_power(nu, v, order), order)


def _transformed_rational(transform: Transform, h: RationalMap):
    mean, variance = _mean_variance_of_h(h)
    return transform.h_rational(h, mean, variance)


def apply_transform(transform: Transform, mu, order: int = None):
    """The distribution `T mu`."""
    if order is None and isinstance(mu, RationalMap):
        return _transformed_rational(transform, mu)
    if order is None and isinstance(mu, AtomicMeasure):
        return measure_from_h(_transformed_rational(transform, h_of_atomic(mu)))
    order = _order_of(mu, order=order)
    m = _as_moments(mu, order)
    return MomentSeq.from_h_series(transform.h_series(m.h_series(), m), order)


def deformed_convolve(transform: Transform, mu, nu, order: int = None):
    """`H_(mu |>_T nu) = H_mu o H_(T nu) + H_nu - H_(T nu)`."""
    def rational_op(a, b):
        tb = _transformed_rational(transform, b)
        return a.compose(tb) + b - tb

    if order is None and (_is_rational(mu, nu) or _is_atomic(mu, nu)):
        return _run(rational_op, None, (mu, nu))
    order = _order_of(mu, nu, order=order)
    m_mu = _as_moments(mu, order)
    m_nu = _as_moments(nu, order)
    h_nu = m_nu.h_series()
    h_tnu = transform.h_series(h_nu, m_nu)
    h = m_mu.h_series().compose(h_tnu) + h_nu - h_tnu
    return MomentSeq.from_h_series(h, order)


#
# Pairs
#

class MeasurePair(object):

    def __init__(self, first, second):
        self.first = first
        self.second = second

    _fields = ('first', 'second')

    def __iter__(self):
        yield self.first
        yield self.second

    def __eq__(self, other):
        if isinstance(other, (MeasurePair, tuple)):
            a, b = other
            return self.first == a and self.second == b
        return NotImplemented

    def __hash__(self):
        return hash((self.first, self.second))

    def __repr__(self):
        return f"MeasurePair({self.first!r}, {self.second!r})"


def cmonotone_convolve(p1, p2, order: int = None):
    """
    `(mu1, nu1) |> (mu2, nu2) = (mu1 |>_nu2 mu2, nu1 |> nu2)` with
    `H_(mu1 |>_nu2 mu2) = H_mu1 o H_nu2 + H_mu2 - H_nu2`.
    """
    (mu1, nu1), (mu2, nu2) = p1, p2
    first = _run(lambda a, b, c: a.compose(c) + b - c,
                 lambda a, b, c: a.compose(c) + b - c,
                 (mu1, mu2, nu2), order)
    return MeasurePair(first, monotone_convolve(nu1, nu2, order))


def cmonotone_power(pair, n: int, order: int = None):
    """`(mu, nu)^(|> n)` by repeated squaring, for `n >= 1`."""
    if n < 1:
        raise ValueError("powers start at 1")
    result = None
    base = MeasurePair(*pair)
    while n > 0:
        if n & 1:
            result = base if result is None else cmonotone_convolve(result, base, order)
        n >>= 1
        if n > 0:
            base = cmonotone_convolve(base, base, order)
    return result


def cfree_convolve(p1, p2, order: int = None):
    """Add the c-free cumulants (and the free cumulants of the second components)."""
    (mu1, nu1), (mu2, nu2) = p1, p2
    order = _order_of(mu1, nu1, mu2, nu2, order=order)
    _, R1 = free_and_cfree_cumulants(_as_moments(mu1, order), _as_moments(nu1, order), order)
    _, R2 = free_and_cfree_cumulants(_as_moments(mu2, order), _as_moments(nu2, order), order)
    R_pair = [a + b for a, b in zip(R1.values, R2.values)]
    R_single = [a + b for a, b in zip(R1.single, R2.single)]
    return MeasurePair(moments_from_cfree(R_pair, R_single, order), moments_from_free(R_single, order))


#
# Checks
#

@dataclasses.dataclass
class AssociativityReport:
    transform: Transform
    checked_pairs: int = 0
    checked_triples: int = 0
    condition_failures: typing.List[tuple] = dataclasses.field(default_factory=list)
    associativity_failures: typing.List[tuple] = dataclasses.field(default_factory=list)

    @property
    def passed(self):
        return len(self.condition_failures) == 0 and len(self.associativity_failures) == 0


def check_T_associativity(transform: Transform, samples, order: int = None):
    """
    Check `T(mu |>_T nu) = T mu |> T nu` on consecutive pairs of samples, and
    `(mu |>_T nu) |>_T lam = mu |>_T (nu |>_T lam)` on consecutive triples, on the series track.
    """
    order = settings.series_order if order is None else order
    samples = [_as_moments(s, order) for s in samples]
    report = AssociativityReport(transform)
    for mu, nu in zip(samples, samples[1:]):
        left = apply_transform(transform, deformed_convolve(transform, mu, nu, order), order)
        right = monotone_convolve(apply_transform(transform, mu, order), apply_transform(transform, nu, order), order)
        report.checked_pairs += 1
        if left != right:
            report.condition_failures.append((mu, nu))
    for mu, nu, lam in zip(samples, samples[1:], samples[2:]):
        left = deformed_convolve(transform, deformed_convolve(transform, mu, nu, order), lam, order)
        right = deformed_convolve(transform, mu, deformed_convolve(transform, nu, lam, order), order)
        report.checked_triples += 1
        if left != right:
            report.associativity_failures.append((mu, nu, lam))
    LOGGER.info("associativity of %r: %d/%d condition failures, %d/%d associativity failures", transform,
                len(report.condition_failures), report.checked_pairs,
                len(report.associativity_failures), report.checked_triples)
    return report


@dataclasses.dataclass
class ConeReport:
    transform: Transform
    cone: str
    checked: int = 0
    violations: typing.List[tuple] = dataclasses.field(default_factory=list)
    predicted_closed: typing.Optional[bool] = None

    @property
    def observed_closed(self):
        return len(self.violations) == 0

    @property
    def agrees(self):
        return self.predicted_closed is None or self.predicted_closed == self.observed_closed


def predicted_closure(transform: Transform, cone: str):
    """Closure of the positive cone iff `u >= t` and `a = 0`; of the symmetric measures iff `a = 0`."""
    if not isinstance(transform, Vtua):
        return None
    if cone == 'positive':
        return transform.u >= transform.t and transform.a == 0
    return transform.a == 0


def _has_negative_atom(h: RationalMap):
    num = h.numerator
    count = num.count_roots(None, 0)
    if num.eval(0) == 0:
        count -= 1
    return count > 0


def _is_odd(h: RationalMap):
    minus_z = RationalMap(sympy.Poly(-Z, Z, domain=QQ))
    return h.compose(minus_z) == -h


def check_cone_preservation(transform: Transform, samples, cone: str = 'positive'):
    """
    Test, for all ordered pairs of atomic samples from the cone (`'positive'`: supported in `[0, oo)`, or
    `'symmetric'`), whether `mu |>_T nu` stays in the cone.  Atoms are the zeros of the exact transform, counted
    with Sturm sequences.  A report without violations means only that none were found.
    """
    if cone not in ('positive', 'symmetric'):
        raise ValueError(f"unknown cone '{cone}'")
    report = ConeReport(transform, cone, predicted_closed=predicted_closure(transform, cone))
    maps = [(s, h_of_atomic(s)) for s in samples]
    for mu, h_mu in maps:
        for nu, h_nu in maps:
            h = deformed_convolve(transform, h_mu, h_nu)
            report.checked += 1
            violated = _has_negative_atom(h) if cone == 'positive' else not _is_odd(h)
            if violated:
                report.violations.append((mu, nu))
    LOGGER.info("cone %s under %r: %d violations in %d pairs (predicted closed: %s)", cone, transform,
                len(report.violations), report.checked, report.predicted_closed)
    return report
