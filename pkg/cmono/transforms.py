#
# (c) 2026, pyCMono contributors
#
# Created: 04.10.2026
# Updated: 18.10.2026
#
# License: Apache 2.0
#
"""
Cauchy transforms `G` and reciprocal Cauchy transforms `H = 1/G`.

There are two tracks.  For finitely atomic measures, `H` is a rational function with rational coefficients, and all
operations (composition, sums, recovering the measure) are exact: this is `RationalMap`.  For the named laws and the
limit laws, `H` is a closed form involving square roots and logarithms with specific branches: this is
`AnalyticMap`, evaluated numerically with mpmath.  Both can be handed to `stieltjes_density` and `locate_atoms`.
"""
import logging

import mpmath
import numpy as np
import sympy
from sympy import QQ

from . import series
from .analytic_compiler import AnalyticMap
from .config import settings
from .errors import (DegreeOverflow, NoSignChange, NonconvergentLadder, NotAProbabilityH,
                     NotFiniteVariance, TransformInapplicable)
from .measures import (AtomicMeasure, Arcsine, Cauchy, Kesten, MonotonePoisson, format_rational,
                       to_rational)


LOGGER = logging.getLogger(__name__)

Z = sympy.Symbol('z')


def _poly(coeffs):
    """A polynomial in `z` from its coefficients, highest degree first."""
    return sympy.Poly([sympy.Rational(int(QQ.numer(c)), int(QQ.denom(c))) for c in coeffs], Z, domain=QQ)


def _mp(c):
    c = QQ.convert(c) if not QQ.of_type(c) else c
    return mpmath.mpf(int(QQ.numer(c))) / int(QQ.denom(c))


class RationalMap(object):
    """
    A rational function `numerator/denominator` with rational coefficients, always stored reduced and with a monic
    denominator.
    """

    def __init__(self, numerator, denominator=None, probabilistic: bool = False):
        if not isinstance(numerator, sympy.Poly):
            numerator = sympy.Poly(numerator, Z, domain=QQ)
        if denominator is None:
            denominator = sympy.Poly(1, Z, domain=QQ)
        elif not isinstance(denominator, sympy.Poly):
            denominator = sympy.Poly(denominator, Z, domain=QQ)
        if denominator.is_zero:
            raise ZeroDivisionError("rational map with zero denominator")
        g = numerator.gcd(denominator)
        if g.degree() > 0:
            numerator = numerator.exquo(g)
            denominator = denominator.exquo(g)
        lc = denominator.LC()
        if lc != 1:
            numerator = numerator.quo_ground(lc)
            denominator = denominator.quo_ground(lc)
        self.numerator = numerator
        self.denominator = denominator
        self.probabilistic = probabilistic
        self._float_coeffs = None

    _fields = ('numerator', 'denominator')

    @classmethod
    def identity(cls):
        return cls(sympy.Poly(Z, Z, domain=QQ), probabilistic=True)

    @classmethod
    def constant(cls, value):
        return cls(sympy.Poly(sympy.Rational(int(QQ.numer(value)), int(QQ.denom(value))), Z, domain=QQ))

    def __repr__(self):
        return f"RationalMap(({self.numerator.as_expr()}) / ({self.denominator.as_expr()}))"

    def __eq__(self, other):
        return isinstance(other, RationalMap) and \
            self.numerator == other.numerator and self.denominator == other.denominator

    def __hash__(self):
        return hash((tuple(self.numerator.all_coeffs()), tuple(self.denominator.all_coeffs())))

    @property
    def degree(self):
        return max(self.numerator.degree(), self.denominator.degree())

    def _coerce(self, other):
        if isinstance(other, RationalMap):
            return other
        return RationalMap.constant(to_rational(other))

    def __add__(self, other):
        other = self._coerce(other)
        return RationalMap(self.numerator * other.denominator + other.numerator * self.denominator,
                           self.denominator * other.denominator)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return RationalMap(self.numerator * other.denominator - other.numerator * self.denominator,
                           self.denominator * other.denominator)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return RationalMap(-self.numerator, self.denominator)

    def __mul__(self, other):
        other = self._coerce(other)
        return RationalMap(self.numerator * other.numerator, self.denominator * other.denominator)

    __rmul__ = __mul__

    def reciprocal(self):
        return RationalMap(self.denominator, self.numerator)

    def compose(self, inner, degree_cap: int = None):
        """
        The composition `self(inner(z))`, exact and reduced.  Raises `DegreeOverflow` if the degree of the result
        would exceed the cap (256 by default).
        """
        cap = settings.degree_cap if degree_cap is None else degree_cap
        if self.degree * inner.degree > cap:
            raise DegreeOverflow(f"composition of degree {self.degree * inner.degree} exceeds the cap {cap}")
        d = self.degree
        a, b = inner.numerator, inner.denominator
        b_powers = [sympy.Poly(1, Z, domain=QQ)]
        for _ in range(d):
            b_powers.append(b_powers[-1] * b)

        def homogenize(p):
            # sum_i p_i a^i b^(d-i)
            result = sympy.Poly(0, Z, domain=QQ)
            coeffs = p.all_coeffs()[::-1]
            a_power = sympy.Poly(1, Z, domain=QQ)
            for i, c in enumerate(coeffs):
                if c != 0:
                    result += a_power * b_powers[d - i] * c
                a_power = a_power * a
            return result

        LOGGER.debug("composing rational maps of degrees %d and %d", self.degree, inner.degree)
        return RationalMap(homogenize(self.numerator), homogenize(self.denominator),
                           probabilistic=self.probabilistic and inner.probabilistic)

    def __call__(self, z):
        if self._float_coeffs is None:
            self._float_coeffs = (np.array([complex(c) for c in self.numerator.all_coeffs()]),
                                  np.array([complex(c) for c in self.denominator.all_coeffs()]))
        num, den = self._float_coeffs
        return np.polyval(num, z) / np.polyval(den, z)

    def mp_eval(self, z):
        """High-precision evaluation with mpmath."""
        num = [_mp(QQ.from_sympy(c)) for c in self.numerator.all_coeffs()]
        den = [_mp(QQ.from_sympy(c)) for c in self.denominator.all_coeffs()]
        return mpmath.polyval(num, z) / mpmath.polyval(den, z)

    def series(self, prec: int):
        """The Laurent expansion at infinity as a `Series` in `1/z`, known up to `O(w^prec)`."""
        def to_series(p):
            coeffs = [QQ.from_sympy(c) for c in p.all_coeffs()]
            deg = p.degree()
            return series.Series(coeffs, -deg, prec + 2 * self.degree + 2)
        return (to_series(self.numerator) / to_series(self.denominator)).truncate(prec)

    def expands_imaginary_part(self, grid=None):
        """True if `Im H(z) >= Im z` on the grid (a necessary condition for reciprocal Cauchy transforms)."""
        grid = default_grid() if grid is None else grid
        values = self(grid)
        return bool(np.all(values.imag >= grid.imag - 1e-12 * np.maximum(1, np.abs(values))))


def default_grid():
    """The test grid `{x + iy : x in [-3, 3], y in [0.5, 2]}`."""
    xs = np.linspace(-3, 3, 13)
    ys = np.array([0.5, 1.0, 2.0])
    return (xs[None, :] + 1j * ys[:, None]).ravel()


class FiniteMeasure(object):
    """
    A finite positive measure with finitely many atoms, total mass unconstrained.  Locations and weights are exact
    rationals when they could be found exactly, high-precision floats otherwise.
    """

    def __init__(self, atoms, exact: bool):
        self.atoms = tuple(sorted(atoms, key=lambda a: a[0]))
        self.exact = exact

    _fields = ('atoms', 'exact')

    def __repr__(self):
        if self.exact:
            inner = ', '.join(f"({format_rational(x)}, {format_rational(w)})" for x, w in self.atoms)
        else:
            inner = ', '.join(f"({mpmath.nstr(x, 12)}, {mpmath.nstr(w, 12)})" for x, w in self.atoms)
        return f"FiniteMeasure([{inner}])"

    def __len__(self):
        return len(self.atoms)

    @property
    def mass(self):
        return sum((w for _, w in self.atoms), QQ(0) if self.exact else mpmath.mpf(0))

    def to_atomic(self):
        if not self.exact:
            raise TypeError("only exact measures convert to AtomicMeasure")
        return AtomicMeasure(self.atoms)


def _real_roots(p: sympy.Poly):
    """
    The roots of `p`, which must all be real and simple.  Returns `(roots, exact)`; the roots are rationals if
    `p` splits over `QQ`, and mpmath floats otherwise.  Raises `ValueError` if the roots are not real and simple.
    """
    if p.degree() <= 0:
        return [], True
    if p.gcd(p.diff(Z)).degree() > 0:
        raise ValueError("repeated roots")
    if p.count_roots() != p.degree():
        raise ValueError("non-real roots")
    _, factors = p.factor_list()
    if all(f.degree() == 1 for f, _ in factors):
        roots = [-QQ.from_sympy(f.all_coeffs()[1]) / QQ.from_sympy(f.all_coeffs()[0]) for f, _ in factors]
        return sorted(roots), True
    with mpmath.workdps(settings.mp_dps):
        coeffs = [_mp(QQ.from_sympy(c)) for c in p.all_coeffs()]
        roots = mpmath.polyroots(coeffs, maxsteps=400, extraprec=4 * settings.mp_dps)
    return sorted(mpmath.re(r) for r in roots), False


def _residues(num: sympy.Poly, den: sympy.Poly, roots, exact: bool):
    """Residues of `num/den` at the simple roots of `den`."""
    dden = den.diff(Z)
    if exact:
        return [QQ.from_sympy(num.eval(sympy.Rational(int(QQ.numer(x)), int(QQ.denom(x))))) /
                QQ.from_sympy(dden.eval(sympy.Rational(int(QQ.numer(x)), int(QQ.denom(x))))) for x in roots]
    with mpmath.workdps(settings.mp_dps):
        n = [_mp(QQ.from_sympy(c)) for c in num.all_coeffs()]
        d = [_mp(QQ.from_sympy(c)) for c in dden.all_coeffs()]
        return [mpmath.polyval(n, x) / mpmath.polyval(d, x) for x in roots]


def h_of_atomic(mu: AtomicMeasure):
    """The exact reciprocal Cauchy transform `H = 1/G`, with `G(z) = sum_i w_i/(z - x_i)`."""
    den = sympy.Poly(1, Z, domain=QQ)
    for x, _ in mu.atoms:
        den = den * _poly([1, -x])
    num = sympy.Poly(0, Z, domain=QQ)
    for x, w in mu.atoms:
        num += den.exquo(_poly([1, -x])) * sympy.Rational(int(QQ.numer(w)), int(QQ.denom(w)))
    # G = num/den, hence H = den/num
    return RationalMap(den, num, probabilistic=True)


def compose(f: RationalMap, g: RationalMap, degree_cap: int = None):
    return f.compose(g, degree_cap)


def _check_shape(h: RationalMap):
    num, den = h.numerator, h.denominator
    if num.degree() != den.degree() + 1 or num.LC() != 1:
        raise NotAProbabilityH(f"{h} does not behave like z at infinity")


def measure_from_h(h: RationalMap):
    """
    Recover the atomic measure whose reciprocal Cauchy transform is `h`.  The atoms are the zeros of `h`, and the
    weights the residues of `G = 1/h` there.  The result is an exact `AtomicMeasure` if all the zeros are
    rational, and a float `FiniteMeasure` of mass one (to 1e-12) otherwise.
    """
    _check_shape(h)
    try:
        roots, exact = _real_roots(h.numerator)
    except ValueError as e:
        raise NotAProbabilityH(f"{h} has zeros that are not real and simple ({e})")
    weights = _residues(h.denominator, h.numerator, roots, exact)
    if any(w <= 0 for w in weights):
        raise NotAProbabilityH(f"{h} yields non-positive weights")
    if exact:
        return AtomicMeasure(zip(roots, weights))
    result = FiniteMeasure(zip(roots, weights), exact=False)
    if abs(result.mass - 1) > 1e-12:
        raise NotAProbabilityH(f"{h} yields total mass {mpmath.nstr(result.mass, 15)}")
    return result


class FiniteVarianceForm(object):
    """`H(z) = a + z + sum_j rho_j / (x_j - z)`; `a = -m(mu)` and `rho(R) = sigma^2(mu)`."""

    def __init__(self, a, rho: FiniteMeasure):
        self.a = a
        self.rho = rho

    _fields = ('a', 'rho')

    def __repr__(self):
        return f"FiniteVarianceForm(a={self.a}, rho={self.rho!r})"

    def __call__(self, z):
        total = complex(self.a) + z
        for x, w in self.rho.atoms:
            total = total + float(w) / (float(x) - z)
        return total


class NevanlinnaForm(object):
    """`H(z) = b + z + sum_j eta_j (1 + x_j z) / (x_j - z)`."""

    def __init__(self, b, eta: FiniteMeasure):
        self.b = b
        self.eta = eta

    _fields = ('b', 'eta')

    def __repr__(self):
        return f"NevanlinnaForm(b={self.b}, eta={self.eta!r})"

    def __call__(self, z):
        total = complex(self.b) + z
        for x, w in self.eta.atoms:
            x = float(x)
            total = total + float(w) * (1 + x * z) / (x - z)
        return total


def finite_variance_of(h):
    """
    Split `h = z + a + R/Q` and write the proper part as `sum_j rho_j/(x_j - z)`, where `x_j` are the poles of `h`.
    """
    if not isinstance(h, RationalMap):
        raise NotFiniteVariance(f"{h!r} is not the transform of a finitely atomic measure")
    num, den = h.numerator, h.denominator
    if num.degree() != den.degree() + 1 or num.LC() != 1:
        raise NotFiniteVariance(f"{h} does not have the form z + a + O(1/z)")
    quotient, remainder = num.div(den)
    coeffs = quotient.all_coeffs()
    a = QQ.from_sympy(coeffs[1]) if len(coeffs) > 1 else QQ(0)
    try:
        poles, exact = _real_roots(den)
    except ValueError as e:
        raise NotAProbabilityH(f"{h} has poles that are not real and simple ({e})")
    # residue c_j of R/Q at x_j: R/Q = sum c_j/(z - x_j) = sum (-c_j)/(x_j - z)
    residues = _residues(remainder, den, poles, exact)
    rho = [(x, -c) for x, c in zip(poles, residues)]
    if any(w < 0 for _, w in rho):
        raise NotAProbabilityH(f"{h} is not a reciprocal Cauchy transform (negative rho)")
    return FiniteVarianceForm(a, FiniteMeasure(rho, exact))


def nevanlinna_of(h):
    """
    The Nevanlinna form, obtained from the finite variance form by `eta_j = rho_j / (1 + x_j^2)` and
    `b = a + sum_j eta_j x_j`.
    """
    form = finite_variance_of(h)
    eta = [(x, w / (1 + x * x)) for x, w in form.rho.atoms]
    b = form.a + sum((x * w for x, w in eta), QQ(0) if form.rho.exact else mpmath.mpf(0))
    return NevanlinnaForm(b, FiniteMeasure(eta, form.rho.exact))


def named_h(law):
    """The closed-form reciprocal Cauchy transform of a named law, as an `AnalyticMap`."""
    if isinstance(law, Arcsine):
        return AnalyticMap("sqrt(z**2 - 2*v)", v=law.var)
    elif isinstance(law, Kesten):
        return AnalyticMap("(1 - r)*z + r*sqrt(z**2 - 2*s)", r=law.r, s=law.beta2)
    elif isinstance(law, Cauchy):
        return AnalyticMap("z + I*b", b=law.b)
    elif isinstance(law, MonotonePoisson):
        raise TransformInapplicable("the monotone Poisson law has no closed-form H; integrate its field instead")
    raise TypeError(f"not a named law: {law!r}")


def cauchy_transform(h):
    """The Cauchy transform `G = 1/H` as a function, for any `H` evaluator."""
    if isinstance(h, RationalMap):
        g = h.reciprocal()
        return g.mp_eval
    return lambda z: 1 / h(z)


#
# Stieltjes inversion and atoms
#

def _richardson(values):
    """The Richardson table for a ladder `eps_k = eps_0 2^-k` and an error expansion in powers of `eps`."""
    table = [[v] for v in values]
    for k in range(1, len(values)):
        for j in range(1, k + 1):
            factor = 2 ** j - 1
            table[k].append(table[k][j - 1] + (table[k][j - 1] - table[k - 1][j - 1]) / factor)
    return [row[-1] for row in table]


def stieltjes_density(g, x: float, eps0: float = None, steps: int = None, tol: float = None):
    """
    The density `-(1/pi) Im G(x + i0)`, extrapolated from the ladder `eps = eps0 * 2^-k`, `k = 0..steps-1`, by
    Richardson extrapolation.  Raises `NonconvergentLadder` if the last two extrapolants differ by more than `tol`.
    """
    eps0 = settings.ladder_eps0 if eps0 is None else eps0
    steps = settings.ladder_steps if steps is None else steps
    tol = settings.ladder_tol if tol is None else tol
    with mpmath.workdps(settings.mp_dps):
        values = []
        for k in range(steps):
            eps = mpmath.mpf(eps0) / 2 ** k
            values.append(-mpmath.im(g(mpmath.mpc(x, eps))) / mpmath.pi)
        extrapolants = _richardson(values)
    LOGGER.debug("ladder at x=%s: %s", x, [float(e) for e in extrapolants])
    if abs(extrapolants[-1] - extrapolants[-2]) > tol:
        raise NonconvergentLadder(f"Stieltjes ladder at x={x} did not converge: "
                                  f"{float(extrapolants[-2])} vs {float(extrapolants[-1])}")
    return float(extrapolants[-1])


def boundary_density(g, x: float, eps: float = 1e-12):
    """Direct evaluation of `-(1/pi) Im G(x + i eps)` at high precision, for closed forms."""
    with mpmath.workdps(settings.mp_dps):
        return float(-mpmath.im(g(mpmath.mpc(x, eps))) / mpmath.pi)


def _boundary_real(h, x, eps: float = 1e-12):
    with mpmath.workdps(settings.mp_dps):
        return mpmath.re(h(mpmath.mpc(x, eps)))


def _bracket(h, lo, hi):
    """Finite end points inside `(lo, hi)` at which the increasing function `h` changes sign, if any."""
    inset = 1e-9
    if lo == -np.inf and hi == np.inf:
        a, b = -1.0, 1.0
        while _boundary_real(h, a) > 0 and a > -1e12:
            a *= 2
        while _boundary_real(h, b) < 0 and b < 1e12:
            b *= 2
        return a, b
    if lo == -np.inf:
        b = hi - inset
        a = b - 1
        while _boundary_real(h, a) > 0 and b - a < 1e12:
            a = b - 2 * (b - a)
        return a, b
    if hi == np.inf:
        a = lo + inset
        b = a + 1
        while _boundary_real(h, b) < 0 and b - a < 1e12:
            b = a + 2 * (b - a)
        return a, b
    return lo + inset * max(1, abs(lo)), hi - inset * max(1, abs(hi))


def locate_atoms(h, intervals, tol: float = None, step: float = None):
    """
    Find the zeros of the reciprocal Cauchy transform `h` on the given open intervals of the real line (use
    `numpy.inf` for unbounded ones).  On each interval, `h` must be real and increasing; the zero is located by
    bisection to `tol` (1e-12), and its weight is `1/h'(x0)`, with `h'` by central difference of step 1e-6.
    Raises `NoSignChange` if some interval contains no zero.
    """
    tol = settings.bisection_tol if tol is None else tol
    step = settings.derivative_step if step is None else step
    result = []
    for lo, hi in intervals:
        a, b = _bracket(h, lo, hi)
        samples = [_boundary_real(h, a + (b - a) * k / 16) for k in range(17)]
        if any(s2 < s1 for s1, s2 in zip(samples, samples[1:])):
            raise NoSignChange(f"H is not increasing on ({lo}, {hi})")
        fa, fb = samples[0], samples[-1]
        if not (fa < 0 < fb):
            raise NoSignChange(f"no zero of H in ({lo}, {hi})")
        while b - a > tol:
            m = (a + b) / 2
            if _boundary_real(h, m) < 0:
                a = m
            else:
                b = m
        x0 = (a + b) / 2
        derivative = (_boundary_real(h, x0 + step) - _boundary_real(h, x0 - step)) / (2 * step)
        result.append((float(x0), float(1 / derivative)))
        LOGGER.debug("atom at %s with weight %s", result[-1][0], result[-1][1])
    return result
