"""Truncated power series in x, Adams operations, plethystic Exp and Log.

Coefficients are either exact rational functions of q (:class:`RatFunc`)
or :class:`NumericTower` values, which record a coefficient by its exact
values at q = p, p^2, ..., p^J.  The Adams operation psi_k sends q to q^k
and x to x^k; on a tower it reads off the values at p^(k j), so its depth
drops from J to floor(J / k).
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

from .errors import BadConstantTerm, MissingCounts, NonzeroConstantTerm, TowerTooShallow
from .exactq import LaurentPoly, RatFunc


class NumericTower:
    """Exact values of a coefficient at q = p^j for j = 1..depth.

    ``depth=None`` marks a constant (known at every j).
    """

    __slots__ = ("p", "values", "const")

    def __init__(self, p, values=None, const=None):
        self.p = p
        if const is not None:
            self.const = Fraction(const)
            self.values = None
        else:
            vals = [Fraction(v) for v in values]
            if not vals:
                raise TowerTooShallow("a tower needs at least the value at q = p")
            self.values = vals
            self.const = None

    @classmethod
    def constant(cls, p, c):
        return cls(p, const=c)

    @classmethod
    def from_function(cls, p, depth, fn):
        return cls(p, [fn(p**j) for j in range(1, depth + 1)])

    @property
    def depth(self):
        return None if self.values is None else len(self.values)

    def at(self, j):
        """Value at q = p^j (1-based)."""
        if self.values is None:
            return self.const
        if not 1 <= j <= len(self.values):
            raise TowerTooShallow(f"value at q = {self.p}^{j} not available (depth {len(self.values)})")
        return self.values[j - 1]

    def _combine(self, other, op):
        if not isinstance(other, NumericTower):
            other = NumericTower.constant(self.p, other)
        if other.p != self.p:
            raise ValueError("towers over different primes")
        if self.values is None and other.values is None:
            return NumericTower.constant(self.p, op(self.const, other.const))
        depths = [d for d in (self.depth, other.depth) if d is not None]
        d = min(depths)
        return NumericTower(self.p, [op(self.at(j), other.at(j)) for j in range(1, d + 1)])

    def __add__(self, other):
        return self._combine(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._combine(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._combine(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._combine(other, lambda a, b: a / b)

    def __neg__(self):
        return self * -1

    def adams(self, k):
        if self.values is None:
            return self
        d = len(self.values) // k
        if d == 0:
            raise TowerTooShallow(f"psi_{k} needs the value at q = {self.p}^{k}, tower depth is {len(self.values)}")
        return NumericTower(self.p, [self.values[k * j - 1] for j in range(1, d + 1)])

    def is_zero(self):
        if self.values is None:
            return self.const == 0
        return all(v == 0 for v in self.values)

    def is_one(self):
        if self.values is None:
            return self.const == 1
        return all(v == 1 for v in self.values)

    def agrees(self, other):
        """Equal at every j where both are known."""
        if self.values is None and other.values is None:
            return self.const == other.const
        depths = [d for d in (self.depth, other.depth) if d is not None]
        return all(self.at(j) == other.at(j) for j in range(1, min(depths) + 1))

    def __eq__(self, other):
        if not isinstance(other, NumericTower):
            return NotImplemented
        return self.p == other.p and self.values == other.values and self.const == other.const

    def __repr__(self):
        if self.values is None:
            return f"NumericTower(p={self.p}, const={self.const})"
        return f"NumericTower(p={self.p}, {[str(v) for v in self.values]})"

    def to_json(self):
        def enc(v):
            return str(v.numerator) if v.denominator == 1 else {"num": str(v.numerator), "den": str(v.denominator)}

        if self.values is None:
            return {"const": enc(self.const)}
        return {str(self.p**j): enc(v) for j, v in enumerate(self.values, start=1)}


def _is_zero(c):
    # a tower that merely vanishes at the known levels is not an exact zero
    if isinstance(c, NumericTower):
        return c.values is None and c.const == 0
    return c.is_zero()


def _adams_coeff(c, k):
    return c.adams(k)


class TruncSeries:
    """sum_{n=0}^{N} c_n x^n with RatFunc or NumericTower coefficients."""

    __slots__ = ("N", "coeffs", "p")

    def __init__(self, N, coeffs, p=None):
        """``p`` selects numeric mode; plain numbers become towers (or RatFuncs) automatically."""
        if N < 0:
            raise ValueError("truncation order must be >= 0")
        coeffs = list(coeffs)[: N + 1]
        coeffs += [0] * (N + 1 - len(coeffs))
        if p is None:
            coeffs = [RatFunc.coerce(c) for c in coeffs]
        else:
            coeffs = [c if isinstance(c, NumericTower) else NumericTower.constant(p, c) for c in coeffs]
        self.N = N
        self.coeffs = coeffs
        self.p = p

    @property
    def numeric(self):
        return self.p is not None

    def zero_coeff(self):
        return NumericTower.constant(self.p, 0) if self.numeric else RatFunc(0)

    def one_coeff(self):
        return NumericTower.constant(self.p, 1) if self.numeric else RatFunc(1)

    def _like(self, coeffs):
        return TruncSeries(self.N, coeffs, self.p)

    def _check(self, other):
        if not isinstance(other, TruncSeries) or other.N != self.N or other.p != self.p:
            raise ValueError("series differ in truncation or coefficient domain")

    def __add__(self, other):
        self._check(other)
        return self._like([a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        self._check(other)
        return self._like([a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __mul__(self, other):
        if not isinstance(other, TruncSeries):
            return self._like([c * other for c in self.coeffs])
        self._check(other)
        out = [self.zero_coeff() for _ in range(self.N + 1)]
        for i, a in enumerate(self.coeffs):
            if _is_zero(a):
                continue
            for j in range(self.N + 1 - i):
                b = other.coeffs[j]
                if not _is_zero(b):
                    out[i + j] = out[i + j] + a * b
        return self._like(out)

    def scale(self, c):
        return self._like([a * c for a in self.coeffs])

    def __getitem__(self, n):
        return self.coeffs[n]

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self.N == other.N and self.p == other.p and self.coeffs == other.coeffs

    def __repr__(self):
        terms = [f"({c})*x^{n}" for n, c in enumerate(self.coeffs) if not _is_zero(c)]
        return f"TruncSeries(N={self.N}: {' + '.join(terms) or '0'})"

    def agrees(self, other):
        """Coefficientwise equality (towers compared wherever both are known)."""
        self._check(other)
        if not self.numeric:
            return self == other
        return all(a.agrees(b) for a, b in zip(self.coeffs, other.coeffs))


def series(coeffs, N, p=None):
    return TruncSeries(N, coeffs, p)


def adams(f, k):
    """psi_k: x^n -> x^(kn) and q -> q^k on coefficients."""
    if k < 1:
        raise ValueError("Adams index must be >= 1")
    out = [f.zero_coeff() for _ in range(f.N + 1)]
    for n, c in enumerate(f.coeffs):
        if k * n > f.N or _is_zero(c):
            continue
        out[k * n] = _adams_coeff(c, k)
    return f._like(out)


def _exp_series(s):
    """exp(s) for s with zero constant term, via n E_n = sum_i i s_i E_(n-i)."""
    E = [s.one_coeff()]
    for n in range(1, s.N + 1):
        acc = s.zero_coeff()
        for i in range(1, n + 1):
            if not _is_zero(s.coeffs[i]):
                acc = acc + s.coeffs[i] * E[n - i] * i
        E.append(acc / n if s.numeric else acc * RatFunc(LaurentPoly.const(1), n))
    return s._like(E)


def _log_series(F):
    """log(F) for F with constant term 1."""
    L = [F.zero_coeff()]
    for n in range(1, F.N + 1):
        acc = F.coeffs[n] * n
        for i in range(1, n):
            if not _is_zero(L[i]):
                acc = acc - L[i] * F.coeffs[n - i] * i
        L.append(acc / n if F.numeric else acc * RatFunc(1, n))
    return F._like(L)


def _mobius(k):
    result, m, f = 1, k, 2
    while f * f <= m:
        if m % f == 0:
            m //= f
            if m % f == 0:
                return 0
            result = -result
        f += 1
    if m > 1:
        result = -result
    return result


def _frac(c, k):
    """Coefficient times 1/k in the right domain."""
    return c / k if isinstance(c, NumericTower) else c * RatFunc(1, k)


def pleth_exp(f):
    """Plethystic exponential exp(sum_k psi_k(f) / k), truncated at x^N."""
    if not f.coeffs[0].is_zero():
        raise NonzeroConstantTerm("Exp needs a series without constant term")
    s = f._like([f.zero_coeff() for _ in range(f.N + 1)])
    for k in range(1, f.N + 1):
        psi = adams(f, k)
        s = s + psi._like([_frac(c, k) if not _is_zero(c) else c for c in psi.coeffs])
    return _exp_series(s)


def pleth_log(F):
    """Inverse of :func:`pleth_exp`: sum_k mu(k) psi_k(log F) / k."""
    c0 = F.coeffs[0]
    one = c0.is_one() if F.numeric else c0 == RatFunc(1)
    if not one:
        raise BadConstantTerm("Log needs constant term 1")
    L = _log_series(F)
    out = F._like([F.zero_coeff() for _ in range(F.N + 1)])
    for k in range(1, F.N + 1):
        mu = _mobius(k)
        if mu == 0:
            continue
        psi = adams(L, k)
        out = out + psi._like([_frac(c, k) * mu if not _is_zero(c) else c for c in psi.coeffs])
    return out


# -- E-series and the Exp identity --------------------------------------------------------


def gl_order_poly(n):
    """|GL_n(F_q)| as a polynomial in q."""
    q = LaurentPoly.q()
    out = LaurentPoly.const(1)
    for i in range(n):
        out = out * (q**n - LaurentPoly.q(i))
    return out


@dataclass
class ESeries:
    g: int
    side: str
    series: TruncSeries

    def __post_init__(self):
        if self.side not in ("twisted", "untwisted"):
            raise ValueError("side is 'twisted' or 'untwisted'")


def assemble_eseries(side, g, N, counts, mode="polynomial", p=None):
    """Series a_n = q^((1-g)n^2) T_n / |GL_n| (twisted) or b_n likewise with b_0 = 1.

    Polynomial mode: ``counts[n]`` is the solution-count polynomial (a
    LaurentPoly) for n = 1..N.  Numeric mode: ``counts[(n, j)]`` is the
    solution count over GF(p^j), needed for every j <= N // n.
    """
    if side not in ("twisted", "untwisted"):
        raise ValueError("side is 'twisted' or 'untwisted'")
    if mode == "polynomial":
        coeffs = [RatFunc(0 if side == "twisted" else 1)]
        for n in range(1, N + 1):
            if n not in counts:
                raise MissingCounts(f"no {side} count polynomial for n={n}")
            shift = (1 - g) * n * n
            coeffs.append(RatFunc(LaurentPoly.coerce(counts[n]).shift(shift), gl_order_poly(n)))
        return ESeries(g, side, TruncSeries(N, coeffs))
    if mode != "numeric":
        raise ValueError(f"unknown mode {mode!r}")
    if p is None:
        raise ValueError("numeric mode needs a prime p")
    from .ffield import gl_order

    coeffs = [NumericTower.constant(p, 0 if side == "twisted" else 1)]
    for n in range(1, N + 1):
        vals = []
        for j in range(1, N // n + 1):
            if (n, j) not in counts:
                raise MissingCounts(f"no {side} count for n={n} over GF({p}^{j})")
            q = p**j
            vals.append(Fraction(q) ** ((1 - g) * n * n) * Fraction(int(counts[(n, j)]), gl_order(n, q)))
        coeffs.append(NumericTower(p, vals))
    return ESeries(g, side, TruncSeries(N, coeffs, p))


def _enc(c):
    if isinstance(c, NumericTower):
        return c.to_json()
    return {"text": str(c), **c.to_json()}


@dataclass
class VerificationReport:
    g: int
    N: int
    mode: str
    parameters: dict
    rows: list = field(default_factory=list)

    @property
    def passed(self):
        return all(r["pass"] for r in self.rows)

    def to_json(self):
        return {
            "check": "exp-identity",
            "g": self.g,
            "N": self.N,
            "mode": self.mode,
            "parameters": self.parameters,
            "rows": self.rows,
            "pass": self.passed,
        }


def compare_exp(a_series, b_series):
    """Rows comparing Exp(a) with b coefficientwise."""
    lhs = pleth_exp(a_series.series)
    rhs = b_series.series
    rows = []
    for n in range(1, lhs.N + 1):
        L, R = lhs.coeffs[n], rhs.coeffs[n]
        ok = L.agrees(R) if lhs.numeric else L == R
        rows.append({"degree": n, "lhs": _enc(L), "rhs": _enc(R), "pass": bool(ok)})
    return rows


def _root(F, n, root_index):
    from .ffield import primitive_roots_of_unity

    roots = primitive_roots_of_unity(F, n)
    return roots[root_index % len(roots)].element


def polynomial_counts(side, n, g, primes, holdout=None, root_index=0, workers=1):
    """Interpolated solution-count polynomial from counts at the given primes."""
    from .charcount import twisted_count, untwisted_count
    from .exactq import InterpolationProblem, degree_bound_for, interpolate
    from .ffield import field_create

    def count(p):
        F = field_create(p)
        if side == "twisted":
            return int(twisted_count(n, g, F, _root(F, n, root_index), workers=workers).value)
        return int(untwisted_count(n, g, F, workers=workers).value)

    samples = [(p, count(p)) for p in primes]
    hold = (holdout, count(holdout)) if holdout is not None else None
    return interpolate(InterpolationProblem(samples, degree_bound_for(n, g), hold))


def numeric_counts(side, g, N, p, root_index=0, workers=1):
    """Solution counts over GF(p^j) for every n j <= N."""
    from .charcount import twisted_count, untwisted_count
    from .ffield import field_create

    out = {}
    for n in range(1, N + 1):
        for j in range(1, N // n + 1):
            F = field_create(p, j)
            if side == "twisted":
                rec = twisted_count(n, g, F, _root(F, n, root_index), workers=workers)
            else:
                rec = untwisted_count(n, g, F, workers=workers)
            out[(n, j)] = int(rec.value)
    return out


def verify_exp_identity(
    g,
    N,
    mode="polynomial",
    p=None,
    primes=None,
    holdout=None,
    twisted=None,
    untwisted=None,
    root_index=0,
    workers=1,
):
    """Check Exp(sum a_n x^n) = 1 + sum b_n x^n coefficientwise, exactly.

    Counts are computed on demand unless supplied via ``twisted`` and
    ``untwisted`` (polynomials by n, or numeric counts by (n, j)).
    """
    params = {"root_index": root_index}
    if mode == "polynomial":
        if twisted is None or untwisted is None:
            if primes is None:
                raise ValueError("polynomial mode needs primes (or precomputed counts)")
            bad = [q for q in primes if (q - 1) % lcm(*range(1, N + 1))]
            if bad:
                raise ValueError(f"primes {bad} are not 1 mod lcm(1..{N})")
            params.update(primes=list(primes), holdout=holdout)
        if twisted is None:
            twisted = {n: polynomial_counts("twisted", n, g, primes, holdout, root_index, workers) for n in range(1, N + 1)}
        if untwisted is None:
            untwisted = {n: polynomial_counts("untwisted", n, g, primes, holdout, 0, workers) for n in range(1, N + 1)}
        params["twisted"] = {str(n): str(P) for n, P in twisted.items()}
        params["untwisted"] = {str(n): str(P) for n, P in untwisted.items()}
    elif mode == "numeric":
        if p is None:
            raise ValueError("numeric mode needs a prime p")
        if (p - 1) % lcm(*range(1, N + 1)):
            raise ValueError(f"p = {p} is not 1 mod lcm(1..{N})")
        params["p"] = p
        if twisted is None:
            twisted = numeric_counts("twisted", g, N, p, root_index, workers)
        if untwisted is None:
            untwisted = numeric_counts("untwisted", g, N, p, 0, workers)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    a = assemble_eseries("twisted", g, N, twisted, mode, p)
    b = assemble_eseries("untwisted", g, N, untwisted, mode, p)
    return VerificationReport(g, N, mode, params, compare_exp(a, b))
