#
# (c) 2026, pyCMono contributors
#
# Created: 03.10.2026
# Updated: 17.10.2026
#
# License: Apache 2.0
#
"""
Canonical representations of distributions: finitely atomic measures, a handful of named laws given by closed-form
transforms, and truncated moment sequences.  Everything in here is exact; there is no floating point at all.

The JSON form of a measure is one of
```
{"type": "atomic", "atoms": [["-1", "1/2"], ["1", "1/2"]]}
{"type": "arcsine", "var": "1"}
{"type": "kesten", "alpha2": "1/2", "beta2": "1"}      (or "sigma2" and "r")
{"type": "poisson", "rho": "1"}
{"type": "cauchy", "b": "1"}
```
with rationals written as strings `"p/q"` (integers may also be given as plain JSON numbers).
"""
import fractions
import json
import logging

import sympy
from sympy import QQ

from . import series
from .errors import CauchyHasNoMoments, InvalidMeasure, MalformedSpec, NonpositiveScale


LOGGER = logging.getLogger(__name__)


def to_rational(value):
    """
    Convert `value` to an element of `QQ`.  Accepts integers, strings like `"-3/4"`, `fractions.Fraction`, sympy
    rationals, and elements of `QQ` itself.  Floats are rejected because they are almost never what you mean.
    """
    if isinstance(value, bool):
        raise MalformedSpec(f"not a rational number: {value!r}")
    if isinstance(value, int):
        return QQ(value)
    if isinstance(value, fractions.Fraction):
        return QQ(value.numerator, value.denominator)
    if isinstance(value, str):
        try:
            value = sympy.Rational(value.strip())
        except (TypeError, ValueError, SyntaxError, sympy.SympifyError):
            raise MalformedSpec(f"not a rational number: {value!r}")
    if isinstance(value, sympy.Rational):
        return QQ(int(value.p), int(value.q))
    if isinstance(value, sympy.Basic):
        raise MalformedSpec(f"not a rational number: {value!r}")
    try:
        if QQ.of_type(value):
            return value
    except TypeError:
        pass
    raise MalformedSpec(f"not a rational number: {value!r}")


def format_rational(q):
    """Serialize a rational as `"p/q"`, or as `"p"` if it is an integer."""
    q = to_rational(q)
    num, den = int(QQ.numer(q)), int(QQ.denom(q))
    return str(num) if den == 1 else f"{num}/{den}"


class AtomicMeasure(object):
    """
    A probability measure with finitely many atoms.  The atoms are stored sorted by location, and the weights are
    strictly positive and sum to exactly one.
    """

    def __init__(self, atoms):
        merged = {}
        for loc, weight in atoms:
            loc, weight = to_rational(loc), to_rational(weight)
            if weight <= 0:
                raise InvalidMeasure(f"atom at {loc} has non-positive weight {weight}")
            if loc in merged:
                raise InvalidMeasure(f"duplicate atom location {loc}")
            merged[loc] = weight
        if len(merged) == 0:
            raise InvalidMeasure("a measure needs at least one atom")
        total = sum(merged.values(), QQ(0))
        if total != 1:
            raise InvalidMeasure(f"weights sum to {total}, not 1")
        self.atoms = tuple(sorted(merged.items()))

    _fields = ('atoms',)

    @classmethod
    def delta(cls, loc=0):
        return cls([(loc, 1)])

    def __eq__(self, other):
        return isinstance(other, AtomicMeasure) and self.atoms == other.atoms

    def __hash__(self):
        return hash(self.atoms)

    def __repr__(self):
        inner = ', '.join(f"({format_rational(x)}, {format_rational(w)})" for x, w in self.atoms)
        return f"AtomicMeasure([{inner}])"

    def __len__(self):
        return len(self.atoms)

    @property
    def locations(self):
        return tuple(x for x, _ in self.atoms)

    @property
    def weights(self):
        return tuple(w for _, w in self.atoms)

    def moment(self, n: int):
        return sum((w * x**n for x, w in self.atoms), QQ(0))

    @property
    def mean(self):
        return self.moment(1)

    @property
    def variance(self):
        return self.moment(2) - self.moment(1)**2

    def is_symmetric(self):
        return self.atoms == tuple(sorted((-x, w) for x, w in self.atoms))

    def is_positive(self):
        """True if the measure lives on `[0, oo)`."""
        return self.atoms[0][0] >= 0


class NamedLaw(object):
    """
    Base class of the laws that are given by a closed-form transform rather than by atoms.
    """

    _fields = ()
    kind = None

    def __eq__(self, other):
        return type(self) is type(other) and self.params == other.params

    def __hash__(self):
        return hash((self.kind, self.params))

    @property
    def params(self):
        return tuple(getattr(self, f) for f in self._fields)

    def __repr__(self):
        args = ', '.join(f"{f}={format_rational(getattr(self, f))}" for f in self._fields)
        return f"{self.__class__.__name__}({args})"


def _positive(name: str, value):
    value = to_rational(value)
    if value <= 0:
        raise InvalidMeasure(f"{name} must be strictly positive, got {value}")
    return value


class Arcsine(NamedLaw):
    """The arcsine law with variance `var`, density `1/(pi*sqrt(2*var - x^2))`."""

    kind = 'arcsine'

    def __init__(self, var=1):
        self.var = _positive('var', var)

    _fields = ('var',)


class Kesten(NamedLaw):
    """
    The Kesten law with parameters `alpha2`, `beta2`.  It is the t-transform `U_r` (with `r = alpha2/beta2`) of the
    arcsine law with variance `beta2`, i.e., `H(z) = (1-r) z + r sqrt(z^2 - 2 beta2)`, and has variance `alpha2`.
    """

    kind = 'kesten'

    def __init__(self, alpha2=1, beta2=1):
        self.alpha2 = _positive('alpha2', alpha2)
        self.beta2 = _positive('beta2', beta2)

    _fields = ('alpha2', 'beta2')

    @property
    def r(self):
        return self.alpha2 / self.beta2

    @property
    def sigma2(self):
        return self.beta2


def kesten_from_sigma_r(sigma2, r):
    """
    The Kesten law in the `(sigma2, r)` parameterization: `H = (1-r) z + r sqrt(z^2 - 2 sigma2)`, which is
    `Kesten(alpha2 = r*sigma2, beta2 = sigma2)`.
    """
    sigma2 = _positive('sigma2', sigma2)
    r = _positive('r', r)
    return Kesten(r * sigma2, sigma2)


class MonotonePoisson(NamedLaw):
    """The monotone Poisson law `p_rho`; all its monotone cumulants equal `rho`."""

    kind = 'poisson'

    def __init__(self, rho=1):
        self.rho = _positive('rho', rho)

    _fields = ('rho',)


class Cauchy(NamedLaw):
    """The Cauchy law with scale `b`, `H(z) = z + i b`.  It has no moments."""

    kind = 'cauchy'

    def __init__(self, b=1):
        self.b = _positive('b', b)

    _fields = ('b',)


class MomentSeq(object):
    """
    The moments `m_1, ..., m_K` of a distribution, with `m_0 = 1` implied.  The values are exact, either elements
    of `QQ` or, for symbolic computations, polynomials over `QQ`.
    """

    __slots__ = ('values',)

    def __init__(self, values):
        values = tuple(values)
        if len(values) == 0:
            raise InvalidMeasure("a moment sequence needs order K >= 1")
        object.__setattr__(self, 'values', values)

    def __setattr__(self, key, value):
        raise AttributeError("MomentSeq is immutable")

    def __reduce__(self):
        return MomentSeq, (self.values,)

    @classmethod
    def of(cls, *values):
        return cls([to_rational(v) for v in values])

    @property
    def order(self):
        return len(self.values)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, n: int):
        """`m[n]` is the n-th moment, with `m[0] = 1`."""
        if n == 0:
            return QQ(1)
        if n < 0 or n > len(self.values):
            raise IndexError(f"moment m_{n} is beyond the order {len(self.values)}")
        return self.values[n - 1]

    def __iter__(self):
        return iter(self.values)

    def __eq__(self, other):
        if isinstance(other, MomentSeq):
            return self.values == other.values
        if isinstance(other, (tuple, list)):
            return self.values == tuple(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.values)

    def __repr__(self):
        return f"MomentSeq({', '.join(str(v) for v in self.values)})"

    def truncate(self, order: int):
        return MomentSeq(self.values[:order])

    def _zip(self, other):
        n = min(len(self), len(other))
        return self.values[:n], other.values[:n]

    def __add__(self, other):
        a, b = self._zip(other)
        return MomentSeq(x + y for x, y in zip(a, b))

    def __sub__(self, other):
        a, b = self._zip(other)
        return MomentSeq(x - y for x, y in zip(a, b))

    @property
    def mean(self):
        return self[1]

    @property
    def variance(self):
        if len(self) < 2:
            raise InvalidMeasure("the variance needs moments up to order 2")
        return self[2] - self[1]**2

    def g_series(self):
        return series.Series.from_moments(self.values)

    def h_series(self):
        return series.h_series(self.values)

    @classmethod
    def from_h_series(cls, h, order: int = None):
        return cls(series.moments_of_h(h, order))

    def to_floats(self):
        return [float(sympy.Rational(int(QQ.numer(v)), int(QQ.denom(v)))) for v in self.values]


def moments_of_atomic(mu: AtomicMeasure, order: int):
    """The exact power sums `m_n = sum_i w_i x_i^n` for `n = 1..order`."""
    if order < 1:
        raise InvalidMeasure("order K must be at least 1")
    return MomentSeq(mu.moment(n) for n in range(1, order + 1))


def _named_h_series(law: NamedLaw, order: int):
    """The exact series of `H` at infinity for the algebraic named laws."""
    prec = order
    z = series.identity(prec + 2)
    if isinstance(law, Arcsine):
        return (z * z - 2 * law.var).sqrt()
    if isinstance(law, Kesten):
        root = (z * z - 2 * law.beta2).sqrt()
        return z * (1 - law.r) + root * law.r
    raise TypeError(f"no algebraic H for {law!r}")


def moments_of_named(law: NamedLaw, order: int):
    """
    Moments of a named law from the exact expansion of its Cauchy transform at infinity.  The square roots are
    expanded with rational binomial coefficients, so that everything stays exact.
    """
    if order < 1:
        raise InvalidMeasure("order K must be at least 1")
    if isinstance(law, Cauchy):
        raise CauchyHasNoMoments(f"{law!r} has no moments")
    if isinstance(law, MonotonePoisson):
        from .cumulants import moments_from_cmonotone
        r = [law.rho] * order
        return moments_from_cmonotone(r, r, order)
    h = _named_h_series(law, order)
    return MomentSeq(series.moments_of_h(h, order))


def moments_of(mu, order: int):
    """Moments of anything that has them: atomic measures, named laws, or moment sequences themselves."""
    if isinstance(mu, MomentSeq):
        if len(mu) < order:
            raise InvalidMeasure(f"need moments up to order {order}, have {len(mu)}")
        return mu.truncate(order)
    if isinstance(mu, AtomicMeasure):
        return moments_of_atomic(mu, order)
    if isinstance(mu, NamedLaw):
        return moments_of_named(mu, order)
    raise TypeError(f"not a distribution: {mu!r}")


def dilate(mu, scale):
    """The dilation `D_scale`: atoms `x -> scale*x`, or moments `m_n -> scale^n m_n`."""
    scale = to_rational(scale)
    if scale <= 0:
        raise NonpositiveScale(f"dilation needs a positive scale, got {scale}")
    if isinstance(mu, AtomicMeasure):
        return AtomicMeasure([(scale * x, w) for x, w in mu.atoms])
    if isinstance(mu, MomentSeq):
        return MomentSeq(scale**n * m for n, m in enumerate(mu.values, start=1))
    raise TypeError(f"cannot dilate {mu!r}")


#
# JSON specs
#

def _get(spec: dict, key: str):
    try:
        return spec[key]
    except KeyError:
        raise MalformedSpec(f"measure spec of type {spec.get('type')!r} is missing the key {key!r}")


def parse_measure(spec):
    """Turn a JSON measure spec (a `dict` or its JSON text) into an `AtomicMeasure` or a `NamedLaw`."""
    if isinstance(spec, str):
        try:
            spec = json.loads(spec)
        except json.JSONDecodeError as e:
            raise MalformedSpec(f"invalid JSON in measure spec: {e}")
    if not isinstance(spec, dict):
        raise MalformedSpec(f"a measure spec must be a JSON object, got {spec!r}")
    kind = spec.get('type')
    if kind == 'atomic':
        atoms = _get(spec, 'atoms')
        if not isinstance(atoms, list) or not all(isinstance(a, (list, tuple)) and len(a) == 2 for a in atoms):
            raise MalformedSpec("atoms must be a list of [location, weight] pairs")
        return AtomicMeasure(atoms)
    elif kind == 'arcsine':
        return Arcsine(_get(spec, 'var'))
    elif kind == 'kesten':
        if 'sigma2' in spec or 'r' in spec:
            return kesten_from_sigma_r(_get(spec, 'sigma2'), _get(spec, 'r'))
        return Kesten(_get(spec, 'alpha2'), _get(spec, 'beta2'))
    elif kind == 'poisson':
        return MonotonePoisson(_get(spec, 'rho'))
    elif kind == 'cauchy':
        return Cauchy(_get(spec, 'b'))
    elif kind == 'moments':
        return MomentSeq([to_rational(v) for v in _get(spec, 'values')])
    raise MalformedSpec(f"unknown measure type {kind!r}")


def dump_measure(mu):
    """The JSON-ready `dict` of a measure (inverse of `parse_measure`)."""
    if isinstance(mu, AtomicMeasure):
        return {'type': 'atomic', 'atoms': [[format_rational(x), format_rational(w)] for x, w in mu.atoms]}
    if isinstance(mu, MomentSeq):
        return {'type': 'moments', 'values': [format_rational(v) for v in mu.values]}
    if isinstance(mu, Arcsine):
        return {'type': 'arcsine', 'var': format_rational(mu.var)}
    if isinstance(mu, Kesten):
        return {'type': 'kesten', 'alpha2': format_rational(mu.alpha2), 'beta2': format_rational(mu.beta2)}
    if isinstance(mu, MonotonePoisson):
        return {'type': 'poisson', 'rho': format_rational(mu.rho)}
    if isinstance(mu, Cauchy):
        return {'type': 'cauchy', 'b': format_rational(mu.b)}
    raise TypeError(f"cannot serialize {mu!r}")
