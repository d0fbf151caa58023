#
# (c) 2026, pyCMono contributors
#
# Created: 08.10.2026
# Updated: 19.10.2026
#
# License: Apache 2.0
#
"""
Cumulants of all flavours: monotone, Boolean, free, c-free, and c-monotone.

The c-monotone cumulants `r_n(mu, nu)` are computed from the semigroup they generate.  Along the c-monotone
convolution semigroup with cumulants `r_n(mu, nu)` (for the first component) and monotone cumulants `r_n(nu)` (for
the second), the moments `m_n(t)` of the first component are polynomials in `t` obeying
```
d/dt m_n = sum_{k<n} (k+1) r_{n-k}(nu) m_k - sum_{k<n} r_{n-k}(nu) S_k + sum_{k<n} r_{n-k}(mu, nu) S_k,
S_k = sum_{l<=k} m_l m_{k-l}.
```
The terms for `k = 0` reduce to `r_n(mu, nu)`, so that `m_n(t) = r_n(mu, nu) t + (integral of lower orders)`, and
`r_n(mu, nu)` is fixed by requiring `m_n(1) = m_n(mu)`.  All of this is exact, and works for rational values as well
as for formal polynomials (elements of a `sympy.polys.ring`).
"""
import dataclasses
import logging
import typing

from sympy import QQ
from sympy.polys import ring
from sympy.polys.rings import PolyElement

from . import series
from .errors import InconsistentSystem, InsufficientOrder, NonPolynomialGrowth
from .measures import MomentSeq, dilate


LOGGER = logging.getLogger(__name__)


FLAVORS = ('monotone', 'boolean', 'free', 'cfree', 'cmonotone', 'generic')


class CumulantSeq(object):
    """
    Cumulants `r_1, ..., r_K` of a given flavour.  For the pair flavours, `single` holds the companion cumulants
    of the second measure (monotone for c-monotone, free for c-free).  Indexing is one-based: `r[1]` is `r_1`.
    """

    def __init__(self, flavor: str, values, single=None):
        if flavor not in FLAVORS:
            raise ValueError(f"unknown cumulant flavour '{flavor}'")
        self.flavor = flavor
        self.values = tuple(values)
        self.single = tuple(single) if single is not None else None

    _fields = ('flavor', 'values', 'single')

    def __repr__(self):
        return f"CumulantSeq({self.flavor}, {', '.join(str(v) for v in self.values)})"

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, n: int):
        if n < 1 or n > len(self.values):
            raise IndexError(f"cumulant r_{n} is beyond the order {len(self.values)}")
        return self.values[n - 1]

    def __eq__(self, other):
        if isinstance(other, CumulantSeq):
            return self.values == other.values
        if isinstance(other, (tuple, list)):
            return self.values == tuple(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.values)

    def scaled(self, c):
        single = None if self.single is None else tuple(v * c for v in self.single)
        return CumulantSeq(self.flavor, (v * c for v in self.values), single)


def _values(m, order: int = None):
    values = tuple(m.values) if isinstance(m, MomentSeq) else tuple(m)
    if order is not None:
        if len(values) < order:
            raise InsufficientOrder(f"need moments up to order {order}, have {len(values)}")
        values = values[:order]
    return values


def _time_ring(*sequences):
    """`K[t]`, where `K` is `QQ` or, for formal values, the polynomial ring they belong to."""
    for seq in sequences:
        for c in seq or ():
            if isinstance(c, PolyElement):
                return ring('t', c.ring.to_domain())
    return ring('t', QQ)


def _antiderivative(p):
    """The antiderivative in `t` vanishing at `t = 0`."""
    return p.ring.from_dict({(k + 1,): c * QQ(1, k + 1) for (k,), c in p.terms()})


def _recursion(order: int, r_single=None, moments=None, r_pair=None):
    """
    Run the moment recursion up to `order`.  Either `moments` (then the cumulants are solved for) or `r_pair` (then
    the moments follow) must be given.  Without `r_single`, the single cumulants are the pair cumulants themselves,
    which is the monotone case.  Returns the pair cumulants and the moment polynomials `m_1(t), ..., m_K(t)`, elements
    of `K[t]`.
    """
    T, t = _time_ring(r_single, moments, r_pair)
    m = [T.one]
    sums = []
    rp = []
    for n in range(1, order + 1):
        sums.append(sum((m[l] * m[n - 1 - l] for l in range(n)), T.zero))
        field = T.zero
        for k in range(1, n):
            a = r_single[n - k - 1] if r_single is not None else rp[n - k - 1]
            field += m[k] * T(a * (k + 1)) + sums[k] * T(rp[n - k - 1] - a)
        integral = _antiderivative(field)
        if moments is not None:
            value = moments[n - 1] - integral(1)
        else:
            value = r_pair[n - 1]
        rp.append(value)
        m.append(T(value) * t + integral)
        LOGGER.debug("recursion order %d: r_%d = %s", n, n, value)
    return tuple(rp), tuple(m[1:])


def cmonotone_cumulants(m_mu, m_nu, order: int = None):
    """The c-monotone cumulants `r_n(mu, nu)`, together with the monotone cumulants of `nu`."""
    order = min(len(_values(m_mu)), len(_values(m_nu))) if order is None else order
    mu = _values(m_mu, order)
    nu = _values(m_nu, order)
    r_nu, _ = _recursion(order, moments=nu)
    r_pair, _ = _recursion(order, r_single=r_nu, moments=mu)
    return CumulantSeq('cmonotone', r_pair, r_nu)


def monotone_cumulants(m, order: int = None):
    values = _values(m, order)
    r, _ = _recursion(len(values), moments=values)
    return CumulantSeq('monotone', r, r)


def boolean_cumulants(m, order: int = None):
    values = _values(m, order)
    zeros = (0,) * len(values)
    r, _ = _recursion(len(values), r_single=zeros, moments=values)
    return CumulantSeq('boolean', r, zeros)


def moment_polynomials(m_mu, m_nu, order: int = None):
    """The moments `m_n(mu, nu, t)` along the c-monotone semigroup, as elements of `K[t]` (see `_time_ring`)."""
    order = min(len(_values(m_mu)), len(_values(m_nu))) if order is None else order
    r_nu, _ = _recursion(order, moments=_values(m_nu, order))
    _, polys = _recursion(order, r_single=r_nu, moments=_values(m_mu, order))
    return polys


def moments_from_cmonotone(r_pair, r_single, order: int = None):
    """The inverse of `cmonotone_cumulants`: moments of `mu` from `r(mu, nu)` and the monotone `r(nu)`."""
    order = min(len(r_pair), len(r_single)) if order is None else order
    _, polys = _recursion(order, r_single=tuple(r_single)[:order], r_pair=tuple(r_pair)[:order])
    return MomentSeq(p(1) for p in polys)


def moments_from_monotone(r, order: int = None):
    return moments_from_cmonotone(r, r, order)


def flow_series(r_pair, r_single, t, order: int = None):
    """
    The reciprocal Cauchy transforms `H_(mu,nu)(t, z)` and `H_nu(t, z)` of the semigroup generated by the given
    cumulants, as series in `1/z`.  The time `t` is a number or an element of the coefficient ring.
    """
    order = min(len(r_pair), len(r_single)) if order is None else order
    _, pair = _recursion(order, r_single=tuple(r_single)[:order], r_pair=tuple(r_pair)[:order])
    _, single = _recursion(order, r_pair=tuple(r_single)[:order])
    h_pair = series.h_series([p(t) for p in pair])
    h_single = series.h_series([p(t) for p in single])
    return h_pair, h_single


def b_coefficients(m, order: int = None):
    """The coefficients of `H(z) = z + b_1 + b_2/z + b_3/z^2 + ...`."""
    values = _values(m, order)
    h = series.h_series(values)
    return tuple(h.coeff(n - 1) for n in range(1, len(values) + 1))


#
# Free and c-free cumulants
#

def _solve_phi(h_target, g, order: int):
    """Solve `z - H = sum_n R_n g^(n-1)` order by order for `R_1, ..., R_K`."""
    target = series.identity(order) - h_target
    powers = [series.Series.constant(1, order + 2)]
    for _ in range(1, order):
        powers.append(powers[-1] * g)
    R = []
    for k in range(order):
        value = target.coeff(k)
        for n in range(1, k + 1):
            value = value - R[n - 1] * powers[n - 1].coeff(k)
        R.append(value)
    return tuple(R)


def free_and_cfree_cumulants(m_mu, m_nu, order: int = None):
    """
    The free cumulants `R(nu)` and the c-free cumulants `R(mu, nu)`, from
    `H_nu(z) = z - phi_nu(H_nu(z))` and `H_mu(z) = z - phi_(mu,nu)(H_nu(z))` with `phi(z) = sum_n R_n z^(1-n)`.
    """
    order = min(len(_values(m_mu)), len(_values(m_nu))) if order is None else order
    mu = _values(m_mu, order)
    nu = _values(m_nu, order)
    g_nu = series.Series.from_moments(nu)
    R_nu = _solve_phi(series.h_series(nu), g_nu, order)
    R_pair = _solve_phi(series.h_series(mu), g_nu, order)
    return CumulantSeq('free', R_nu, R_nu), CumulantSeq('cfree', R_pair, R_nu)


def free_cumulants(m, order: int = None):
    return free_and_cfree_cumulants(m, m, order)[0]


def _phi(R, h: series.Series):
    """`phi(H) = sum_n R_n H^(1-n)`."""
    recip = h.reciprocal()
    total = series.Series.constant(R[0], recip.prec)
    power = series.Series.constant(1, recip.prec)
    for n in range(2, len(R) + 1):
        power = power * recip
        total = total + power * R[n - 1]
    return total


def h_from_free(R, order: int = None):
    """Solve `H = z - phi(H)` by fixed-point iteration; each step fixes one more coefficient."""
    order = len(R) if order is None else order
    z = series.identity(order)
    h = z
    for _ in range(order + 2):
        h = z - _phi(R, h)
    return h


def moments_from_cfree(R_pair, R_single, order: int = None):
    """The inverse of `free_and_cfree_cumulants` (first component)."""
    order = min(len(R_pair), len(R_single)) if order is None else order
    h_nu = h_from_free(tuple(R_single)[:order], order)
    h_mu = series.identity(order) - _phi(tuple(R_pair)[:order], h_nu)
    return MomentSeq(series.moments_of_h(h_mu, order))


def moments_from_free(R, order: int = None):
    return moments_from_cfree(R, R, order)


#
# Relation between c-monotone and c-free cumulants
#

class CumulantRelation(object):
    """
    The coefficients `P_(n,k)` in `r_n(mu, nu) = R_n(mu, nu) + sum_{k=2}^{n-1} P_(n,k) R_k(mu, nu)`, as
    polynomials in the moments `y_1, y_2, ...` of `nu`, together with their values for a particular `nu`.
    """

    def __init__(self, order: int, formal: dict, values: dict, y_gens):
        self.order = order
        self.formal = formal
        self.values = values
        self.y_gens = y_gens

    _fields = ('order', 'formal', 'values')

    def __getitem__(self, key):
        return self.values[key]

    def __repr__(self):
        terms = ', '.join(f"P_{n},{k} = {p}" for (n, k), p in sorted(self.formal.items()))
        return f"CumulantRelation({terms})"


def _relation_ring(order: int):
    names = [f"R{i}" for i in range(1, order + 1)] + [f"y{i}" for i in range(1, order + 1)]
    ring_, *gens = ring(','.join(names), QQ)
    return ring_, gens[:order], gens[order:]


def cmonotone_vs_cfree(m_mu, m_nu, order: int):
    """
    Express the c-monotone cumulants through the c-free ones.  The c-free cumulants `R_k` of `mu` and the moments
    `y_j` of `nu` are formal indeterminates; `mu` is rebuilt from them, and its c-monotone cumulants must come out
    linear in the `R_k`, with coefficient 1 for `R_n` and coefficients depending on `y_1..y_(n-k)` only.  Any
    deviation raises `InconsistentSystem`.  If `m_mu` is given, the relation is also checked against actual values.
    """
    if order > 8:
        raise InsufficientOrder("the formal relation is solved up to order 8")
    ring_, R_gens, y_gens = _relation_ring(order)
    R_nu = free_cumulants(y_gens, order)
    mu = moments_from_cfree(R_gens, R_nu.values, order)
    r = cmonotone_cumulants(mu, y_gens, order)
    formal = {}
    for n in range(1, order + 1):
        coefficients = {}
        for monom, coeff in r[n].terms():
            R_part, y_part = monom[:order], monom[order:]
            if sum(R_part) != 1:
                raise InconsistentSystem(f"r_{n} is not linear in the c-free cumulants")
            k = R_part.index(1) + 1
            if any(e > 0 for e in y_part[max(n - k, 0):]):
                raise InconsistentSystem(f"P_{n},{k} depends on moments of nu beyond order {n - k}")
            coefficients.setdefault(k, {})[(0,) * order + y_part] = coeff
        polys = {k: ring_.from_dict(c) for k, c in coefficients.items()}
        if polys.get(n) != ring_.one or any(k > n for k in polys) or (n > 1 and 1 in polys):
            raise InconsistentSystem(f"r_{n} does not have leading term R_{n}")
        for k in range(2, n):
            formal[(n, k)] = polys.get(k, ring_.zero)
    nu = _values(m_nu, order)
    point = [0] * order + list(nu)
    values = {key: p(*point) for key, p in formal.items()}
    relation = CumulantRelation(order, formal, values, y_gens)
    if m_mu is not None:
        _check_relation(relation, m_mu, m_nu, order)
    return relation


def _check_relation(relation: CumulantRelation, m_mu, m_nu, order: int):
    r = cmonotone_cumulants(m_mu, m_nu, order)
    _, R = free_and_cfree_cumulants(m_mu, m_nu, order)
    for n in range(1, order + 1):
        expected = R[n] + sum((relation[(n, k)] * R[k] for k in range(2, n)), QQ(0))
        if r[n] != expected:
            raise InconsistentSystem(f"r_{n} = {r[n]} but the relation gives {expected}")


#
# Cumulants of an arbitrary convolution
#

def _point_mass_moments(order: int):
    return MomentSeq((QQ(0),) * order)


def generic_cumulants(conv, m, order: int = None):
    """
    Cumulants of a convolution given as a black box on moment sequences: `r_n = d/dN m_n(mu^N) at N = 0`.

    The moments of `mu^N` are computed for `N = 0, ..., K+1` by folding `conv` from the left (`mu^0 = delta_0`).  If
    `m_n(mu^N)` is a polynomial of degree at most `n` in `N`, its `(n+1)`-th forward difference vanishes; otherwise
    `NonPolynomialGrowth` is raised.  The derivative at zero is `sum_k (-1)^(k+1) Delta^k p(0) / k`.
    """
    m = m if isinstance(m, MomentSeq) else MomentSeq(m)
    order = len(m) if order is None else order
    m = m.truncate(order)
    powers = [_point_mass_moments(order)]
    for _ in range(order + 1):
        powers.append(MomentSeq(conv(powers[-1], m)).truncate(order))
    result = []
    for n in range(1, order + 1):
        values = [p[n] for p in powers[:n + 2]]
        differences = [values[0]]
        row = values
        for _ in range(n + 1):
            row = [b - a for a, b in zip(row, row[1:])]
            differences.append(row[0])
        if differences[n + 1] != 0:
            raise NonPolynomialGrowth(f"m_{n}(mu^N) is not a polynomial of degree <= {n} in N")
        total = 0
        for k in range(1, n + 1):
            term = differences[k] * QQ(1, k)
            total = total + (term if k % 2 == 1 else -term)
        result.append(total)
    return CumulantSeq('generic', result)


@dataclasses.dataclass
class AxiomReport:
    power_additivity: bool
    moment_leading: typing.Optional[bool] = None
    homogeneity: typing.Optional[bool] = None
    boolean_additivity: typing.Optional[bool] = None
    failures: typing.List[str] = dataclasses.field(default_factory=list)

    @property
    def passed(self):
        return len(self.failures) == 0


def _power(conv, m: MomentSeq, n: int):
    result = _point_mass_moments(len(m))
    for _ in range(n):
        result = MomentSeq(conv(result, m))
    return result


def verify_axioms(extractor, conv, samples, order: int = None, homogeneity: bool = True,
                  pair_extractor=None, max_power: int = 5):
    """
    Check the cumulant axioms for `extractor` (moments to cumulants) and its convolution `conv`:

      - power additivity `r_n(mu^N) = N r_n(mu)` for `N <= max_power`;
      - `r_n = m_n + (polynomial in m_1..m_(n-1))`, with the moments as formal indeterminates;
      - homogeneity `r_n(D_c mu) = c^n r_n(mu)` for `c` in `{2, 1/3}`, if claimed;
      - with `pair_extractor(mu, lam)`, additivity `r_n(mu + nu, lam) = r_n(mu, lam) + r_n(nu, lam)` under the
        Boolean convolution, on consecutive triples of samples.
    """
    from .pair_convolutions import boolean_convolve

    samples = [s if isinstance(s, MomentSeq) else MomentSeq(s) for s in samples]
    order = min(len(s) for s in samples) if order is None else order
    samples = [s.truncate(order) for s in samples]
    report = AxiomReport(power_additivity=True)

    for s in samples:
        r = tuple(extractor(s))
        for N in range(2, max_power + 1):
            rN = tuple(extractor(_power(conv, s, N)))
            if rN != tuple(v * N for v in r):
                report.power_additivity = False
                report.failures.append(f"power additivity fails for N={N} at {s!r}")
                break

    try:
        _, *y = ring(','.join(f"y{i}" for i in range(1, order + 1)), QQ)
        r = tuple(extractor(MomentSeq(y)))
        report.moment_leading = True
        for n in range(1, order + 1):
            rest = r[n - 1] - y[n - 1]
            if any(rest.degree(y[j]) > 0 for j in range(n - 1, order)):
                report.moment_leading = False
                report.failures.append(f"r_{n} is not m_{n} plus a polynomial in lower moments")
    except (TypeError, AttributeError, ZeroDivisionError) as e:
        LOGGER.info("formal moment check skipped: %s", e)

    if homogeneity:
        report.homogeneity = True
        for s in samples:
            r = tuple(extractor(s))
            for c in (QQ(2), QQ(1, 3)):
                rc = tuple(extractor(dilate(s, c)))
                if rc != tuple(v * c ** n for n, v in enumerate(r, start=1)):
                    report.homogeneity = False
                    report.failures.append(f"homogeneity fails for c={c} at {s!r}")

    if pair_extractor is not None and len(samples) >= 3:
        report.boolean_additivity = True
        for mu, nu, lam in zip(samples, samples[1:], samples[2:]):
            left = tuple(pair_extractor(boolean_convolve(mu, nu, order), lam))
            right = tuple(a + b for a, b in zip(pair_extractor(mu, lam), pair_extractor(nu, lam)))
            if left != right:
                report.boolean_additivity = False
                report.failures.append(f"Boolean additivity fails at {mu!r}, {nu!r}, {lam!r}")

    LOGGER.info("axiom report: %s", report)
    return report
