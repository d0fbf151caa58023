#
# (c) 2026, pyCMono contributors
#
# Created: 11.10.2026
# Updated: 18.10.2026
#
# License: Apache 2.0
#
"""
Convolution semigroups `{(mu_t, nu_t)}` and their generators.

A semigroup is generated by a pair of vector fields `(A_1, A_2)` through
```
d/dt H_t(z) = A_1(F_t(z)),    d/dt F_t(z) = A_2(F_t(z)),    H_0(z) = F_0(z) = z,
```
where `H_t` and `F_t` are the reciprocal Cauchy transforms of `mu_t` and `nu_t`.  The fields are Pick functions
`A(z) = -gamma + sum_j w_j (1 + x_j z)/(x_j - z)`, and the cumulants are read off from `A(z) = -sum_n r_n / z^(n-1)`.
"""
import dataclasses
import itertools
import logging
import math
import typing
import warnings

import mpmath
import numpy as np
import sympy
from scipy.integrate import solve_ivp
from sympy import QQ

from . import partitions
from .config import settings
from .cumulants import moments_from_monotone
from .errors import InsufficientOrder, LeftUpperHalfPlane, MalformedSpec, TrackDisagreement
from .measures import MomentSeq, to_rational
from .pair_convolutions import MeasurePair


LOGGER = logging.getLogger(__name__)


def _number(value):
    if isinstance(value, (float, mpmath.mpf)):
        return float(value)
    return to_rational(value)


class Field(object):
    """A vector field on the upper half-plane, evaluated elementwise on numpy arrays."""

    def __call__(self, z):
        raise NotImplementedError()

    def __add__(self, other):
        return LinearField([(1, self), (1, other)])

    def __rmul__(self, c):
        return LinearField([(c, self)])


class PickField(Field):
    """`A(z) = -gamma + sum_j w_j (1 + x_j z)/(x_j - z)` for the atomic measure `tau = sum_j w_j delta_(x_j)`."""

    def __init__(self, gamma, tau=()):
        self.gamma = _number(gamma)
        self.tau = tuple((_number(x), _number(w)) for x, w in tau)
        if any(w < 0 for _, w in self.tau):
            raise ValueError("tau must be a positive measure")

    _fields = ('gamma', 'tau')

    def __repr__(self):
        return f"PickField(gamma={self.gamma}, tau={[(str(x), str(w)) for x, w in self.tau]})"

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        result = np.full_like(z, -float(self.gamma))
        for x, w in self.tau:
            x, w = float(x), float(w)
            result = result + w * (1 + x * z) / (x - z)
        return result

    @property
    def is_exact(self):
        return not isinstance(self.gamma, float) and all(not isinstance(v, float) for a in self.tau for v in a)


class ConstantField(Field):
    """`A(z) = c`; a real `c = -a` is a drift, `c = ib` generates Cauchy laws."""

    def __init__(self, value):
        self.value = complex(value)

    _fields = ('value',)

    def __repr__(self):
        return f"ConstantField({self.value})"

    def __call__(self, z):
        return np.full_like(np.asarray(z, dtype=complex), self.value)


class LinearField(Field):

    def __init__(self, terms):
        self.terms = tuple(terms)

    _fields = ('terms',)

    def __repr__(self):
        return ' + '.join(f"{c}*{f!r}" for c, f in self.terms)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        result = np.zeros_like(z)
        for c, f in self.terms:
            result = result + float(c) * f(z)
        return result


ZERO_FIELD = ConstantField(0)


def drift_field(a):
    """The field of `{delta_(at)}`: `A(z) = -a`."""
    return PickField(a)


def cauchy_field(b):
    """The field `A(z) = ib` of the Cauchy semigroup."""
    return ConstantField(complex(0, float(to_rational(b))))


def arcsine_field(var=1):
    """`A(z) = -var/z`, generating the arcsine laws of variance `var t`."""
    return PickField(0, [(0, var)])


def poisson_field(rho=1):
    """`A(z) = rho z/(1 - z)`, generating the monotone Poisson laws; all cumulants equal `rho`."""
    rho = to_rational(rho)
    return PickField(rho / 2, [(1, rho / 2)])


def kappa_field(u, v, A, B):
    """`u A + v B`, the first field of `kappa^(u,v)` applied along a common second field."""
    return LinearField([(to_rational(u), A), (to_rational(v), B)])


def parse_field(spec):
    """
    A field from its JSON spec: `{"type": "pick", "gamma": ..., "tau": [[x, w], ...]}`, `{"type": "drift", "a": ...}`,
    `{"type": "cauchy", "b": ...}`, `{"type": "arcsine", "var": ...}`, `{"type": "poisson", "rho": ...}`, or
    `{"type": "zero"}`.
    """
    if not isinstance(spec, dict):
        raise MalformedSpec(f"a field spec must be a JSON object, got {spec!r}")
    kind = spec.get('type')
    try:
        if kind == 'pick':
            tau = spec.get('tau', [])
            if not isinstance(tau, list) or not all(isinstance(a, list) and len(a) == 2 for a in tau):
                raise MalformedSpec("tau must be a list of [location, weight] pairs")
            return PickField(spec.get('gamma', 0), tau)
        elif kind == 'drift':
            return drift_field(spec['a'])
        elif kind == 'cauchy':
            return cauchy_field(spec['b'])
        elif kind == 'arcsine':
            return arcsine_field(spec.get('var', 1))
        elif kind == 'poisson':
            return poisson_field(spec.get('rho', 1))
        elif kind == 'zero':
            return ZERO_FIELD
    except KeyError as e:
        raise MalformedSpec(f"field spec of type {kind!r} is missing the key {e}")
    except ValueError as e:
        raise MalformedSpec(str(e))
    raise MalformedSpec(f"unknown field type {kind!r}")


def field_to_cumulants(field: PickField, order: int):
    """`r_1 = gamma + m_1(tau)` and `r_n = m_(n-2)(tau) + m_n(tau)` for `n >= 2`."""
    def moment(n):
        return sum((w * x ** n for x, w in field.tau), QQ(0) if field.is_exact else 0.0)

    values = [field.gamma + moment(1)]
    for n in range(2, order + 1):
        values.append(moment(n - 2) + moment(n))
    return tuple(values)


def field_from_cumulants(r, max_atoms: int = 3):
    """
    The field with the given cumulants `r_1, r_2, ...`: `r_(k+2)` are the moments of `sigma = (1 + x^2) tau`,
    which is rebuilt as an atomic measure from its Hankel matrix, with as many atoms as the rank (at most
    `max_atoms`, and enough cumulants are needed to see that rank).  Atoms are exact if rational, floats otherwise.
    """
    from .transforms import Z, _real_roots

    r = [QQ.to_sympy(to_rational(v)) for v in r]
    if not r:
        raise InsufficientOrder("at least r_1 is needed")
    sigma = r[1:]
    p = 0
    while p < max_atoms and 2 * p + 1 < len(sigma):
        if sympy.Matrix(p + 1, p + 1, lambda i, j: sigma[i + j]).rank() < p + 1:
            break
        p += 1
    if p == 0:
        return PickField(r[0])
    hankel = sympy.Matrix(p, p, lambda i, j: sigma[i + j])
    c = hankel.LUsolve(sympy.Matrix(p, 1, lambda i, _: -sigma[i + p]))
    q = sympy.Poly([1] + [c[k] for k in reversed(range(p))], Z, domain=QQ)
    roots, exact = _real_roots(q)
    if exact:
        nodes = [QQ.to_sympy(x) for x in roots]
        weights = sympy.Matrix(p, p, lambda k, i: nodes[i] ** k).LUsolve(sympy.Matrix(sigma[:p]))
        tau = [(x, w / (1 + x ** 2)) for x, w in zip(nodes, weights)]
        return PickField(r[0] - sum(w * x for x, w in tau), tau)
    nodes = [float(x) for x in roots]
    weights = np.linalg.solve(np.array([[x ** k for x in nodes] for k in range(p)]),
                              np.array([float(v) for v in sigma[:p]]))
    tau = [(x, float(w) / (1 + x * x)) for x, w in zip(nodes, weights)]
    return PickField(float(r[0]) - sum(w * x for x, w in tau), tau)


#
# Flows
#

def default_flow_grid(points: int = 40):
    """`points` points with real parts in `[-3, 3]` and imaginary parts cycling through `0.5, 1, 2`."""
    xs = np.linspace(-3, 3, points)
    ys = np.array([0.5, 1.0, 2.0])[np.arange(points) % 3]
    return xs + 1j * ys


def _integrate(A1, A2, t: float, points, rtol: float, atol: float):
    points = np.asarray(points, dtype=complex)
    n = len(points)
    if t == 0:
        return points.copy(), points.copy()

    def rhs(_, y):
        f = y[n:]
        return np.concatenate([A1(f), A2(f)])

    solution = solve_ivp(rhs, (0.0, float(t)), np.concatenate([points, points]), method='RK45',
                         rtol=rtol, atol=atol)
    if not solution.success:
        raise LeftUpperHalfPlane(f"flow integration failed: {solution.message}")
    if np.any(solution.y.imag < -atol):
        raise LeftUpperHalfPlane("the flow left the upper half-plane; the fields are not Pick functions")
    LOGGER.debug("integrated %d points to t=%s in %d steps", n, t, len(solution.t))
    y = solution.y[:, -1]
    return y[:n], y[n:]


@dataclasses.dataclass
class FlowState:
    """`H_t` and `F_t` on the grid, with the fields that generated them."""
    t: float
    grid: np.ndarray
    H: np.ndarray
    F: np.ndarray
    A1: Field
    A2: Field
    rtol: float = 1e-12
    atol: float = 1e-14

    def evaluate(self, points):
        """`(H_t, F_t)` at arbitrary points of the upper half-plane."""
        return _integrate(self.A1, self.A2, self.t, points, self.rtol, self.atol)


def integrate_flow(A1, A2, t_end: float, grid=None, rtol: float = None, atol: float = None):
    """Integrate the coupled flow to `t_end` with the embedded Runge-Kutta 4(5) pair, for every grid point."""
    grid = default_flow_grid() if grid is None else np.asarray(grid, dtype=complex)
    if np.any(grid.imag <= 0):
        raise LeftUpperHalfPlane("grid points must lie in the upper half-plane")
    rtol = settings.flow_rtol if rtol is None else rtol
    atol = settings.flow_atol if atol is None else atol
    H, F = _integrate(A1, A2, t_end, grid, rtol, atol)
    slack = 1e-9 * np.maximum(1, np.abs(grid))
    if np.any(H.imag < grid.imag - slack) or np.any(F.imag < grid.imag - slack):
        raise LeftUpperHalfPlane("Im H_t(z) < Im z; the fields are not Pick functions")
    return FlowState(t_end, grid, H, F, A1, A2, rtol, atol)


@dataclasses.dataclass
class SemigroupReport:
    s: float
    t: float
    f_residual: float
    h_residual: float
    threshold: float = 1e-8

    @property
    def passed(self):
        return self.f_residual < self.threshold and self.h_residual < self.threshold


def verify_semigroup_law(A1, A2, s: float, t: float, grid=None, threshold: float = 1e-8):
    """
    The residuals of `F_(s+t) = F_t o F_s` and `H_(s+t) = H_t o F_s - F_s + H_s` over the grid.
    """
    first = integrate_flow(A1, A2, s, grid)
    total = integrate_flow(A1, A2, s + t, first.grid)
    H_t, F_t = _integrate(A1, A2, t, first.F, first.rtol, first.atol)
    f_residual = float(np.max(np.abs(total.F - F_t)))
    h_residual = float(np.max(np.abs(total.H - (H_t - first.F + first.H))))
    report = SemigroupReport(s, t, f_residual, h_residual, threshold)
    LOGGER.info("semigroup law at s=%s, t=%s: residuals %.3g (F), %.3g (H)", s, t, f_residual, h_residual)
    return report


def flow_moments(A1, A2, t: float, order: int, radius: float = 8.0, points: int = 96):
    """
    Moments of `mu_t` and `nu_t` as floats, from `m_n = 1/(2 pi i) oint z^n G(z) dz` on the circle `|z| = radius`
    by the trapezoidal rule.  Only the upper half of the circle is integrated; the lower half follows from
    `G(conj z) = conj G(z)`.
    """
    angles = 2 * np.pi * (np.arange(points // 2) + 0.5) / points
    upper = radius * np.exp(1j * angles)
    H, F = _integrate(A1, A2, t, upper, settings.flow_rtol, settings.flow_atol)
    result = []
    for values in (H, F):
        g = 1 / values
        moments = []
        for n in range(1, order + 1):
            s = np.sum(upper ** (n + 1) * g)
            moments.append(float(2 * s.real / points))
        result.append(tuple(moments))
    return result[0], result[1]


#
# Infinite divisibility and roots
#

@dataclasses.dataclass
class DivisibilityVerdict:
    divisible: bool
    min_eig: float
    exact_psd: typing.Tuple[bool, bool]
    float_psd: typing.Tuple[bool, bool]
    order: int
    label: str = "order-K necessary condition"


def _hankel(r, K: int):
    return [[r[j + k - 1] for k in range(1, K + 1)] for j in range(1, K + 1)]


def _exact_psd(matrix):
    """All principal minors are non-negative."""
    K = len(matrix)
    m = sympy.Matrix(K, K, lambda i, j: sympy.Rational(int(QQ.numer(matrix[i][j])), int(QQ.denom(matrix[i][j]))))
    for size in range(1, K + 1):
        for rows in itertools.combinations(range(K), size):
            if m.extract(list(rows), list(rows)).det() < 0:
                return False
    return True


def _float_psd(matrix, tol: float):
    eigenvalues = np.linalg.eigvalsh(np.array([[float(sympy.Rational(int(QQ.numer(v)), int(QQ.denom(v))))
                                                for v in row] for row in matrix]))
    return float(eigenvalues.min()), bool(eigenvalues.min() >= -tol)


def is_infinitely_divisible(r_pair, r_single, K: int, tol: float = None):
    """
    Positive semi-definiteness of the Hankel matrices `[r_(j+k)]_(1<=j,k<=K)` of both cumulant sequences, which
    need cumulants up to order `2K`.  The exact test uses all principal minors, the float test the smallest
    eigenvalue; if they disagree, a `TrackDisagreement` warning is issued and the exact verdict wins.
    """
    tol = settings.psd_tol if tol is None else tol
    r_pair = tuple(to_rational(v) for v in r_pair)
    r_single = tuple(to_rational(v) for v in r_single)
    if min(len(r_pair), len(r_single)) < 2 * K:
        raise InsufficientOrder(f"the Hankel test of size {K} needs cumulants up to order {2 * K}")
    exact, floats, eigs = [], [], []
    for r in (r_pair, r_single):
        h = _hankel(r, K)
        exact.append(_exact_psd(h))
        e, ok = _float_psd(h, tol)
        eigs.append(e)
        floats.append(ok)
    if exact != floats:
        warnings.warn(f"exact and float PSD tests disagree ({exact} vs {floats})", TrackDisagreement)
    verdict = DivisibilityVerdict(all(exact), min(eigs), tuple(exact), tuple(floats), K)
    LOGGER.info("divisibility: %s", verdict)
    return verdict


def nth_root(r_pair, r_single, n: int, order: int = None):
    """
    The moments of the unique `n`-th root of the pair with the given cumulants: divide the cumulants by `n` and
    sum over monotone partitions.  This is a formal operation; it does not check divisibility.
    """
    order = min(len(r_pair), len(r_single)) if order is None else order
    root_pair = [to_rational(v) / n for v in tuple(r_pair)[:order]]
    root_single = [to_rational(v) / n for v in tuple(r_single)[:order]]
    first = MomentSeq(partitions.eval_cmonotone_formula(root_pair, root_single, k) for k in range(1, order + 1))
    second = MomentSeq(partitions.eval_monotone_formula(root_single, k) for k in range(1, order + 1))
    return MeasurePair(first, second)


#
# Semigroups used by the Xi transforms
#

class ArcsineSemigroup(object):
    """The arcsine laws `xi_s` of variance `s`: `m_(2k) = s^k (2k)! / (k!^2 2^k)`, odd moments zero."""

    def moments(self, s, order: int):
        values = []
        for n in range(1, order + 1):
            if n % 2 == 1:
                values.append(QQ(0))
            else:
                k = n // 2
                values.append(s ** k * QQ(math.factorial(2 * k), math.factorial(k) ** 2 * 2 ** k))
        return MomentSeq(values)

    def __repr__(self):
        return "ArcsineSemigroup()"


class FieldSemigroup(object):
    """The monotone semigroup generated by a field with exact data: `r_n(xi_s) = s r_n(A)`."""

    def __init__(self, field: PickField):
        self.field = field

    def moments(self, s, order: int):
        r = field_to_cumulants(self.field, order)
        return moments_from_monotone([s * v for v in r], order)

    def __repr__(self):
        return f"FieldSemigroup({self.field!r})"
