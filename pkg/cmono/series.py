#
# (c) 2026, pyCMono contributors
#
# Created: 03.10.2026
# Updated: 19.10.2026
#
# License: Apache 2.0
#
"""
Truncated Laurent series in `w = 1/z`, the formal face of Cauchy transforms at infinity.

A `Series` stores the coefficients of `w^start, w^(start+1), ..., w^(prec-1)` and knows nothing about the terms from
`w^prec` onwards.  Every operation computes the precision of its result from the precision of its operands, so that
no coefficient is ever read beyond what is actually known.  The coefficients can be anything that supports ring
arithmetic together with Python integers and multiplication by `QQ` elements: plain rationals from `sympy.QQ`, or
polynomials from a `sympy.polys.ring` when moments are treated as formal indeterminates.

The Cauchy transform of a distribution with moments `m_1, ..., m_K` is the series `w + m_1 w^2 + ... + m_K w^(K+1)`
with precision `K+2`.  Its reciprocal `H = z + b_1 + b_2 w + ...` then has precision `K`.
"""
from sympy import QQ


def _is_zero(c):
    return c == 0


def _inverse(c):
    if c == 1:
        return c
    if c == -1:
        return c
    return 1 / c


class Series(object):

    __slots__ = ('start', 'coeffs', 'prec')

    def __init__(self, coeffs, start: int, prec: int):
        coeffs = list(coeffs)
        if start + len(coeffs) > prec:
            coeffs = coeffs[:max(prec - start, 0)]
        while start + len(coeffs) < prec:
            coeffs.append(0)
        self.start = start
        self.coeffs = tuple(coeffs)
        self.prec = prec

    _fields = ('coeffs', 'start', 'prec')

    @classmethod
    def monomial(cls, exponent: int, prec: int, coeff=1):
        """The series `coeff * w^exponent`, known up to `w^prec`.  `monomial(-1, p)` is the identity map `z`."""
        return cls([coeff], exponent, prec)

    @classmethod
    def constant(cls, value, prec: int):
        return cls([value], 0, prec)

    @classmethod
    def from_moments(cls, values):
        """
        The Cauchy transform `G = sum_n m_n w^(n+1)` with `m_0 = 1`, for the moments `values = (m_1, ..., m_K)`.
        """
        values = list(values)
        return cls([1] + values, 1, len(values) + 2)

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if not _is_zero(c):
                terms.append(f"({c})*w^{self.start + i}")
        terms.append(f"O(w^{self.prec})")
        return ' + '.join(terms)

    def coeff(self, k: int):
        """Return the coefficient of `w^k`, i.e., of `z^(-k)`."""
        if k >= self.prec:
            raise ValueError(f"coefficient of w^{k} is beyond the precision O(w^{self.prec})")
        if k < self.start:
            return 0
        return self.coeffs[k - self.start]

    @property
    def valuation(self):
        for i, c in enumerate(self.coeffs):
            if not _is_zero(c):
                return self.start + i
        return self.prec

    def truncate(self, prec: int):
        if prec >= self.prec:
            return self
        return Series(self.coeffs, self.start, prec)

    def map(self, f):
        """Apply `f` to every coefficient."""
        return Series([f(c) for c in self.coeffs], self.start, self.prec)

    def _binary_add(self, other, sign: int):
        if not isinstance(other, Series):
            other = Series.constant(other, self.prec)
        prec = min(self.prec, other.prec)
        start = min(self.start, other.start)
        coeffs = []
        for k in range(start, prec):
            a = self.coeff(k)
            b = other.coeff(k)
            coeffs.append(a + b if sign > 0 else a - b)
        return Series(coeffs, start, prec)

    def __add__(self, other):
        return self._binary_add(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary_add(other, -1)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return self.map(lambda c: -c)

    def __mul__(self, other):
        if not isinstance(other, Series):
            return self.map(lambda c: c * other)
        v1, v2 = self.valuation, other.valuation
        prec = min(self.prec + v2, other.prec + v1)
        start = v1 + v2
        if prec <= start:
            return Series([], prec, prec)
        coeffs = [0] * (prec - start)
        for i in range(v1, self.prec):
            a = self.coeff(i)
            if _is_zero(a):
                continue
            for j in range(v2, other.prec):
                k = i + j - start
                if k >= len(coeffs):
                    break
                b = other.coeff(j)
                if not _is_zero(b):
                    coeffs[k] = coeffs[k] + a * b
        return Series(coeffs, start, prec)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.reciprocal() ** (-n)
        if n == 0:
            return Series.constant(1, self.prec - self.valuation)
        result = None
        base = self
        while n > 0:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n > 0:
                base = base * base
        return result

    def reciprocal(self):
        v = self.valuation
        if v >= self.prec:
            raise ZeroDivisionError("reciprocal of a series that is zero to its full precision")
        lead_inv = _inverse(self.coeff(v))
        rel = self.prec - v
        # self = c w^v (1 + h), with h of positive valuation
        h = Series([self.coeff(k) * lead_inv for k in range(v + 1, self.prec)], 1, rel)
        total = Series.constant(1, rel)
        power = Series.constant(1, rel)
        for _ in range(1, rel):
            power = -(power * h)
            total = total + power
        return Series([c * lead_inv for c in total.coeffs], total.start - v, rel - v)

    def __truediv__(self, other):
        if isinstance(other, Series):
            return self * other.reciprocal()
        return self * _inverse(other)

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def _unit_part(self, name: str):
        v = self.valuation
        if v >= self.prec or self.coeff(v) != 1:
            raise ValueError(f"{name} needs a series with leading coefficient 1")
        rel = self.prec - v
        h = Series([self.coeff(k) for k in range(v + 1, self.prec)], 1, rel)
        return v, rel, h

    def sqrt(self):
        """
        The square root `w^v (1 + h)^(1/2)` of `w^(2v) (1 + h)`.  At infinity this is the branch `exp(1/2 log_[2])`
        for the maps we deal with, e.g., `sqrt(z^2 - c) ~ z`.
        """
        v, rel, h = self._unit_part('sqrt')
        if v % 2 != 0:
            raise ValueError("sqrt needs a series of even valuation")
        total = Series.constant(1, rel)
        power = Series.constant(1, rel)
        binom = QQ(1)
        for k in range(1, rel):
            binom = binom * (QQ(1, 2) - (k - 1)) / k
            power = power * h
            total = total + power * binom
        return Series(total.coeffs, total.start + v // 2, rel + v // 2)

    def log(self):
        """The principal logarithm `log(1 + h)` of a series with constant term 1."""
        v, rel, h = self._unit_part('log')
        if v != 0:
            raise ValueError("log needs a series with constant term 1")
        total = Series([], 1, rel)
        power = Series.constant(1, rel)
        for k in range(1, rel):
            power = power * h
            term = power * QQ(1, k)
            total = total + (term if k % 2 == 1 else -term)
        return total

    def compose(self, inner):
        """
        Substitute the map `inner` (a series of valuation `-1`, i.e., `inner ~ c*z`) for `z` in this series.
        """
        if inner.valuation != -1:
            raise ValueError("can only compose with a map that behaves like c*z at infinity")
        prec = self._composed_prec(inner)
        recip = inner.reciprocal()
        result = Series([], prec, prec)
        for k in range(self.valuation, self.prec):
            a = self.coeff(k)
            if _is_zero(a):
                continue
            power = inner ** (-k) if k < 0 else recip ** k
            result = result + power * a
        return result.truncate(prec)

    def _composed_prec(self, inner):
        # the outer error O(w^prec) survives, the inner one is relative to z
        return min(self.prec, inner.prec + 1 + self.valuation)

    def agrees_with(self, other, prec: int = None):
        """True if both series coincide up to their common (or the given) precision."""
        p = min(self.prec, other.prec) if prec is None else prec
        start = min(self.start, other.start)
        return all(self.coeff(k) == other.coeff(k) for k in range(start, p))


def moments_of_series(g: Series, order: int = None):
    """Read off `m_1, ..., m_K` from a Cauchy transform series `G = w + m_1 w^2 + ...`."""
    top = g.prec - 2 if order is None else order
    return tuple(g.coeff(n + 1) for n in range(1, top + 1))


def h_series(values):
    """The reciprocal Cauchy transform `H = 1/G` of a moment sequence, known up to `O(w^K)`."""
    return Series.from_moments(values).reciprocal()


def moments_of_h(h: Series, order: int = None):
    return moments_of_series(h.reciprocal(), order)


def identity(prec: int):
    """The map `z` itself."""
    return Series.monomial(-1, prec)

