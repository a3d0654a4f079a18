"""Exact Laurent polynomials and rational functions in q, and interpolation.

Coefficients are Python integers throughout.  A :class:`RatFunc` is kept
reduced: numerator and denominator share no polynomial factor, the
denominator is not divisible by q and has a positive leading coefficient,
and the integer content of the pair is 1.  Equal rational functions are
therefore structurally equal.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .errors import DivisionByZero, HoldoutMismatch, InsufficientSamples, NonIntegerCoefficients


class LaurentPoly:
    """Finite sum of c_e q^e with integer c_e and integer (possibly negative) e."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        if coeffs is None:
            coeffs = {}
        elif isinstance(coeffs, (list, tuple)):
            coeffs = dict(enumerate(coeffs))
        clean = {}
        for e, c in coeffs.items():
            c = int(c)
            if c:
                clean[int(e)] = c
        object.__setattr__(self, "coeffs", clean)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPoly is immutable")

    @classmethod
    def const(cls, c):
        return cls({0: c})

    @classmethod
    def q(cls, power=1):
        return cls({power: 1})

    @classmethod
    def coerce(cls, x):
        if isinstance(x, LaurentPoly):
            return x
        if isinstance(x, int):
            return cls.const(x)
        raise TypeError(f"cannot convert {type(x).__name__} to LaurentPoly")

    def is_zero(self):
        return not self.coeffs

    @property
    def degree(self):
        return max(self.coeffs) if self.coeffs else None

    @property
    def min_exp(self):
        return min(self.coeffs) if self.coeffs else None

    def lead(self):
        return self.coeffs[self.degree]

    def __add__(self, other):
        try:
            other = LaurentPoly.coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other):
        try:
            other = LaurentPoly.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return LaurentPoly.coerce(other) - self

    def __mul__(self, other):
        try:
            other = LaurentPoly.coerce(other)
        except TypeError:
            return NotImplemented
        out = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            if len(self.coeffs) == 1 and abs(self.lead()) == 1:
                (e, c), = self.coeffs.items()
                return LaurentPoly({e * k: c**k})
            raise ValueError("negative powers of non-monomials need RatFunc")
        result, base = LaurentPoly.const(1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def shift(self, i):
        """Multiply by q^i."""
        return LaurentPoly({e + i: c for e, c in self.coeffs.items()})

    def adams(self, k):
        """Substitute q -> q^k."""
        return LaurentPoly({e * k: c for e, c in self.coeffs.items()})

    def __call__(self, x):
        x = Fraction(x)
        total = Fraction(0)
        for e, c in self.coeffs.items():
            total += c * x**e
        return total.numerator if total.denominator == 1 else total

    def content(self):
        g = 0
        for c in self.coeffs.values():
            g = gcd(g, c)
        return g

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __repr__(self):
        return f"LaurentPoly({self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for e in sorted(self.coeffs, reverse=True):
            c = self.coeffs[e]
            mono = "" if e == 0 else ("q" if e == 1 else f"q^{e}")
            mag = abs(c)
            body = str(mag) if not mono else (mono if mag == 1 else f"{mag}*{mono}")
            parts.append(("-" if c < 0 else "+", body))
        text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def to_json(self):
        return {str(e): str(c) for e, c in sorted(self.coeffs.items())}

    @classmethod
    def from_json(cls, data):
        return cls({int(e): int(c) for e, c in data.items()})


# -- integer polynomial gcd -----------------------------------------------------------


def _dense(p):
    """Coefficient list (lowest first) of a Laurent polynomial shifted to min exponent 0."""
    m = p.min_exp
    out = [0] * (p.degree - m + 1)
    for e, c in p.coeffs.items():
        out[e - m] = c
    return out


def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _content(a):
    g = 0
    for c in a:
        g = gcd(g, c)
    return g


def _primitive(a):
    g = _content(a)
    if g == 0:
        return a
    if a[-1] < 0:
        g = -g
    return [c // g for c in a]


def _prem(a, b):
    """Pseudo-remainder of a by b over the integers."""
    a = list(a)
    lb, db = b[-1], len(b) - 1
    while len(a) - 1 >= db and a:
        la, shift = a[-1], len(a) - 1 - db
        a = [c * lb for c in a]
        for j, v in enumerate(b):
            a[shift + j] -= la * v
        _trim(a)
    return a


def poly_gcd(a, b):
    """Primitive gcd (positive leading coefficient) of integer coefficient lists."""
    a, b = _primitive(_trim(list(a))), _primitive(_trim(list(b)))
    if not a:
        return b
    if not b:
        return a
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _prem(a, b)
        a, b = b, _primitive(r)
    return _primitive(a)


def _exact_div(a, b):
    """Exact quotient of integer polynomials; raises if not exact."""
    a = list(a)
    out = [0] * max(len(a) - len(b) + 1, 0)
    while a and len(a) >= len(b):
        shift = len(a) - len(b)
        c, r = divmod(a[-1], b[-1])
        if r:
            raise ArithmeticError("inexact polynomial division")
        out[shift] = c
        for j, v in enumerate(b):
            a[shift + j] -= c * v
        _trim(a)
    if a:
        raise ArithmeticError("inexact polynomial division")
    return out


class RatFunc:
    """Reduced quotient of two Laurent polynomials in q."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=1):
        num, den = LaurentPoly.coerce(num), LaurentPoly.coerce(den)
        if den.is_zero():
            raise DivisionByZero("zero denominator")
        num, den = self._reduce(num, den)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RatFunc is immutable")

    @staticmethod
    def _reduce(num, den):
        if num.is_zero():
            return LaurentPoly(), LaurentPoly.const(1)
        nshift, dshift = num.min_exp, den.min_exp
        a, b = _dense(num), _dense(den)
        if len(b) > 1:
            g = poly_gcd(a, b)
            if len(g) > 1:
                a, b = _exact_div(a, g), _exact_div(b, g)
        c = gcd(_content(a), _content(b))
        if b[-1] < 0:
            c = -c
        a, b = [x // c for x in a], [x // c for x in b]
        n = LaurentPoly(a).shift(nshift - dshift)
        return n, LaurentPoly(b)

    @classmethod
    def coerce(cls, x):
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, Fraction):
            return cls(x.numerator, x.denominator)
        return cls(LaurentPoly.coerce(x))

    def is_zero(self):
        return self.num.is_zero()

    def is_laurent(self):
        return self.den.degree == 0

    def as_laurent(self):
        if not self.is_laurent():
            raise ValueError(f"{self} is not a Laurent polynomial")
        d = self.den.coeffs[0]
        if any(c % d for c in self.num.coeffs.values()):
            raise NonIntegerCoefficients(f"{self} has non-integer coefficients")
        return LaurentPoly({e: c // d for e, c in self.num.coeffs.items()})

    def _wrap(self, other):
        try:
            return RatFunc.coerce(other)
        except TypeError:
            return None

    def __add__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return RatFunc.coerce(other) - self

    def __mul__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise DivisionByZero("division by the zero rational function")
        return RatFunc(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return RatFunc.coerce(other) / self

    def __pow__(self, k):
        if k < 0:
            return RatFunc(1) / (self ** (-k))
        return RatFunc(self.num**k, self.den**k)

    def shift(self, i):
        return RatFunc(self.num.shift(i), self.den)

    def adams(self, k):
        return RatFunc(self.num.adams(k), self.den.adams(k))

    def __call__(self, x):
        d = Fraction(self.den(x))
        if d == 0:
            raise DivisionByZero(f"denominator vanishes at q={x}")
        return Fraction(self.num(x)) / d

    def __eq__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RatFunc({self})"

    def __str__(self):
        if self.is_laurent() and self.den.coeffs[0] == 1:
            return str(self.num)
        return f"({self.num}) / ({self.den})"

    def to_json(self):
        return {"num": self.num.to_json(), "den": self.den.to_json()}


# -- interpolation ----------------------------------------------------------------------


@dataclass
class InterpolationProblem:
    samples: list
    degree_bound: int
    holdout: tuple = None
    extra: dict = field(default_factory=dict)


def degree_bound_for(n, g):
    """Ambient dimension 2g n^2 of GL_n^2g, a bound on count-polynomial degrees."""
    return 2 * g * n * n


def _newton(points):
    xs = [Fraction(x) for x, _ in points]
    coef = [Fraction(y) for _, y in points]
    m = len(points)
    for j in range(1, m):
        for i in range(m - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    # expand the Newton form into monomials
    poly = [Fraction(0)]
    for i in range(m - 1, -1, -1):
        shifted = [Fraction(0)] + poly
        for k in range(len(poly)):
            shifted[k] -= xs[i] * poly[k]
        shifted[0] += coef[i]
        poly = shifted
    return poly


def interpolate(problem):
    """Integer polynomial of degree <= bound through all samples.

    The first ``bound + 1`` samples determine the polynomial; every further
    sample and the holdout must then agree with it exactly.
    """
    samples = [(int(x), int(y)) for x, y in problem.samples]
    xs = [x for x, _ in samples]
    if len(set(xs)) != len(xs):
        raise ValueError("sample points must be distinct")
    need = problem.degree_bound + 1
    if len(samples) < need:
        raise InsufficientSamples(f"degree bound {problem.degree_bound} needs {need} samples, got {len(samples)}")
    poly = _newton(samples[:need])
    if any(c.denominator != 1 for c in poly):
        raise NonIntegerCoefficients("interpolated polynomial has non-integer coefficients")
    result = LaurentPoly([int(c) for c in poly])
    checks = samples[need:]
    if problem.holdout is not None:
        checks = checks + [tuple(int(v) for v in problem.holdout)]
    for x, y in checks:
        if result(x) != y:
            raise HoldoutMismatch(f"interpolant gives {result(x)} at q={x}, count is {y}")
    return result
