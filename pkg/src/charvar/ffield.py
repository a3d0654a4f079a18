"""Finite fields GF(p^k), matrices over them, and enumeration of GL_n(F_q).

Field elements are coded as integers ``sum(c_i * p**i)`` where
``c_0 + c_1 x + ... + c_{k-1} x^{k-1}`` is the polynomial representative
modulo the field's defining polynomial.  Comparing codes as integers is
the same as comparing coefficient vectors lexicographically from the
``x^{k-1}`` coefficient downwards, and every "smallest" choice in this
module uses that order.
"""

from dataclasses import dataclass
from functools import lru_cache, total_ordering
from math import prod

import numpy as np

from . import _fieldops as fo
from . import config, fqpoly
from .errors import DegreeZero, EnumerationTooLarge, FieldTooLarge, NoRootOfUnity, NotPrime

MAX_TABLE_Q = 1024


def is_prime(n):
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n):
    out, f = [], 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


class FiniteField:
    """The field GF(p^k).  Build instances with :func:`field_create`."""

    def __init__(self, p, k, modulus=None):
        self.p = p
        self.k = k
        self.q = p**k
        self.modulus = modulus
        self._tables = None
        self._exp = None
        self._log = None

    def __repr__(self):
        if self.k == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.k}) mod {fqpoly.fmt(self.modulus)}"

    def __eq__(self, other):
        return isinstance(other, FiniteField) and (self.p, self.k, self.modulus) == (
            other.p,
            other.k,
            other.modulus,
        )

    def __hash__(self):
        return hash((self.p, self.k, self.modulus))

    def __reduce__(self):
        return (field_create, (self.p, self.k))

    # -- integer-coded arithmetic ------------------------------------------------

    def digits(self, a):
        out = []
        for _ in range(self.k):
            out.append(a % self.p)
            a //= self.p
        return out

    def from_digits(self, ds):
        a = 0
        for d in reversed(ds):
            a = a * self.p + d % self.p
        return a

    def add(self, a, b):
        if self.k == 1:
            return (a + b) % self.p
        return self.from_digits([x + y for x, y in zip(self.digits(a), self.digits(b))])

    def neg(self, a):
        if self.k == 1:
            return -a % self.p
        return self.from_digits([-x for x in self.digits(a)])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.k == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        self._ensure_log()
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.k == 1:
            return pow(a, self.p - 2, self.p)
        self._ensure_log()
        return self._exp[-self._log[a] % (self.q - 1)]

    def pow(self, a, e):
        if e < 0:
            a, e = self.inv(a), -e
        result, base = 1, a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def _polymul(self, a, b):
        # product of codes as polynomials modulo the defining polynomial
        prime = field_create(self.p, 1)
        r = fqpoly.divmod_(prime, fqpoly.mul(prime, fqpoly.trim(self.digits(a)), fqpoly.trim(self.digits(b))), self.modulus)[1]
        return self.from_digits(list(r) + [0] * (self.k - len(r)))

    def _ensure_log(self):
        if self._exp is not None:
            return
        q = self.q
        factors = prime_factors(q - 1)
        for g in range(2, q):
            powers = [1]
            x = 1
            for _ in range(q - 2):
                x = self._polymul(x, g)
                powers.append(x)
            if all(powers[(q - 1) // r] != 1 for r in factors):
                break
        else:  # pragma: no cover - every finite field has a generator
            raise RuntimeError("no generator found")
        self._exp = powers
        self._log = {v: i for i, v in enumerate(powers)}

    def tables(self):
        """Lookup tables for the kernels (``q <= MAX_TABLE_Q``)."""
        if self._tables is not None:
            return self._tables
        q = self.q
        if q > MAX_TABLE_Q:
            raise FieldTooLarge(f"table kernels need q <= {MAX_TABLE_Q}, got {q}")
        a = np.arange(q, dtype=np.int64)
        if self.k == 1:
            add = (a[:, None] + a[None, :]) % q
            mul = (a[:, None] * a[None, :]) % q
            neg = -a % q
        else:
            dig = np.array([self.digits(x) for x in range(q)], dtype=np.int64)
            weights = self.p ** np.arange(self.k, dtype=np.int64)
            add = ((dig[:, None, :] + dig[None, :, :]) % self.p) @ weights
            neg = ((-dig) % self.p) @ weights
            self._ensure_log()
            exp = np.array(self._exp, dtype=np.int64)
            log = np.zeros(q, dtype=np.int64)
            log[exp] = np.arange(q - 1)
            mul = exp[(log[:, None] + log[None, :]) % (q - 1)]
            mul[0, :] = 0
            mul[:, 0] = 0
        inv = np.zeros(q, dtype=np.int64)
        for x in range(1, q):
            inv[x] = self.inv(x)
        tabs = fo.FieldTables(self.p, self.k, q, add, mul, neg, inv)
        for arr in tabs[3:]:
            arr.setflags(write=False)
        self._tables = tabs
        return tabs

    # -- element helpers ---------------------------------------------------------

    def __call__(self, value):
        """Element from an integer code or a coefficient vector (lowest first)."""
        if isinstance(value, FieldElement):
            if value.field != self:
                raise ValueError("element of a different field")
            return value
        if isinstance(value, (list, tuple)):
            if len(value) > self.k:
                raise ValueError("too many coefficients")
            return FieldElement(self, self.from_digits(list(value) + [0] * (self.k - len(value))))
        v = int(value)
        if self.k == 1:
            v %= self.p
        elif not 0 <= v < self.q:
            raise ValueError(f"element code {v} out of range for {self}")
        return FieldElement(self, v)

    def elements(self):
        return [FieldElement(self, v) for v in range(self.q)]

    @property
    def zero(self):
        return FieldElement(self, 0)

    @property
    def one(self):
        return FieldElement(self, 1)


@total_ordering
class FieldElement:
    """An element of a :class:`FiniteField`; immutable."""

    __slots__ = ("field", "value")

    def __init__(self, field, value):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "value", value)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    @property
    def coeffs(self):
        return tuple(self.field.digits(self.value))

    def _other(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ValueError("mixed fields")
            return other.value
        if isinstance(other, int):
            return self.field(other).value
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else FieldElement(self.field, self.field.add(self.value, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else FieldElement(self.field, self.field.sub(self.value, o))

    def __rsub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else FieldElement(self.field, self.field.sub(o, self.value))

    def __mul__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else FieldElement(self.field, self.field.mul(self.value, o))

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.mul(self.value, self.field.inv(o)))

    def __pow__(self, e):
        return FieldElement(self.field, self.field.pow(self.value, e))

    def inverse(self):
        return FieldElement(self.field, self.field.inv(self.value))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.value == other.value
        if isinstance(other, int):
            return self.value == self.field(other).value
        return NotImplemented

    def __lt__(self, other):
        return self.value < other.value

    def __hash__(self):
        return hash((self.field.p, self.field.k, self.value))

    def __int__(self):
        return self.value

    def __repr__(self):
        if self.field.k == 1:
            return str(self.value)
        return f"[{fqpoly.fmt(fqpoly.trim(self.coeffs), 't')}]"


@dataclass(frozen=True)
class RootOfUnity:
    element: FieldElement
    order: int


@lru_cache(maxsize=None)
def field_create(p, k=1):
    """GF(p^k); for ``k > 1`` the modulus is the smallest monic irreducible of degree k."""
    if k < 1:
        raise DegreeZero("extension degree must be >= 1")
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if k == 1:
        return FiniteField(p, 1)
    prime = field_create(p, 1)
    for f in fqpoly.monic_polys(prime, k):
        if fqpoly.is_irreducible(prime, f):
            return FiniteField(p, k, f)
    raise AssertionError("irreducible polynomials exist in every degree")  # pragma: no cover


def _field_q(F):
    return F if isinstance(F, int) else F.q


def primitive_root_of_unity(F, n):
    """Smallest element of exact multiplicative order ``n``."""
    roots = primitive_roots_of_unity(F, n, first_only=True)
    return roots[0]


def primitive_roots_of_unity(F, n, first_only=False):
    """All elements of exact order ``n``, smallest first."""
    if n < 1:
        raise ValueError("order must be >= 1")
    if (F.q - 1) % n:
        raise NoRootOfUnity(f"{n} does not divide q-1 = {F.q - 1}")
    factors = prime_factors(n)
    out = []
    for a in range(1, F.q):
        if F.pow(a, n) != 1:
            continue
        if any(F.pow(a, n // r) == 1 for r in factors):
            continue
        out.append(RootOfUnity(FieldElement(F, a), n))
        if first_only:
            break
    return out


def gl_order(n, F):
    """|GL_n(F_q)| as an exact integer; ``F`` may be a field or q itself."""
    q = _field_q(F)
    return prod(q**n - q**i for i in range(n))


# -- matrices -------------------------------------------------------------------


class MatrixOverField:
    """Immutable dense square matrix over a finite field."""

    __slots__ = ("field", "entries")

    def __init__(self, field, entries):
        arr = np.array(entries, dtype=np.int64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError("square matrix expected")
        if arr.size and (arr.min() < 0 or arr.max() >= field.q):
            if field.k == 1:
                arr %= field.p
            else:
                raise ValueError("entry codes out of range")
        arr.setflags(write=False)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "entries", arr)

    def __setattr__(self, name, value):
        raise AttributeError("MatrixOverField is immutable")

    @classmethod
    def identity(cls, field, n):
        return cls(field, np.eye(n, dtype=np.int64))

    @classmethod
    def scalar(cls, field, n, c):
        return cls(field, np.eye(n, dtype=np.int64) * int(field(c)))

    @classmethod
    def companion(cls, field, poly):
        """Companion matrix of a monic polynomial (coefficients lowest first)."""
        d = len(poly) - 1
        M = np.zeros((d, d), dtype=np.int64)
        for i in range(1, d):
            M[i, i - 1] = 1
        for i in range(d):
            M[i, d - 1] = field.neg(poly[i])
        return cls(field, M)

    @property
    def n(self):
        return self.entries.shape[0]

    def __getitem__(self, ij):
        return FieldElement(self.field, int(self.entries[ij]))

    def _check(self, other):
        if not isinstance(other, MatrixOverField) or other.field != self.field or other.n != self.n:
            raise ValueError("matrices over different fields or sizes")

    def __matmul__(self, other):
        self._check(other)
        t = self.field.tables()
        return MatrixOverField(self.field, fo.matmul(t, self.entries, other.entries))

    __mul__ = __matmul__

    def __add__(self, other):
        self._check(other)
        t = self.field.tables()
        return MatrixOverField(self.field, t.add[self.entries, other.entries])

    def __sub__(self, other):
        self._check(other)
        t = self.field.tables()
        return MatrixOverField(self.field, fo.sub(t, self.entries, other.entries))

    def scale(self, c):
        t = self.field.tables()
        return MatrixOverField(self.field, t.mul[int(self.field(c)), self.entries])

    def det(self):
        return FieldElement(self.field, int(fo.det(self.field.tables(), self.entries[None])[0]))

    def is_invertible(self):
        return self.det().value != 0

    def inverse(self):
        return MatrixOverField(self.field, fo.inverse(self.field.tables(), self.entries[None])[0])

    def conjugate(self, P):
        """``P M P^-1``."""
        return P @ self @ P.inverse()

    def is_scalar(self):
        e = self.entries
        return bool(np.all(e == np.eye(self.n, dtype=np.int64) * e[0, 0]))

    def __eq__(self, other):
        if not isinstance(other, MatrixOverField):
            return NotImplemented
        return self.field == other.field and np.array_equal(self.entries, other.entries)

    def __hash__(self):
        return hash((self.field.p, self.field.k, self.entries.shape, self.entries.tobytes()))

    def __repr__(self):
        rows = "; ".join(" ".join(str(int(v)) for v in row) for row in self.entries)
        return f"Matrix[{self.field}]({rows})"

    def tolist(self):
        return self.entries.tolist()


# -- enumeration ----------------------------------------------------------------


def candidate_count(n, F):
    return F.q ** (n * n)


def partition_ranges(total, parts):
    """Split ``range(total)`` into ``parts`` contiguous, nearly equal pieces."""
    parts = max(1, int(parts))
    base, extra = divmod(total, parts)
    out, start = [], 0
    for i in range(parts):
        stop = start + base + (1 if i < extra else 0)
        out.append((start, stop))
        start = stop
    return out


def check_group_size(n, F, limit=None):
    order = gl_order(n, F)
    cap = config.group_limit(limit)
    if order > cap:
        raise EnumerationTooLarge(f"|GL_{n}(F_{F.q})| = {order} exceeds the limit {cap}")
    return order


def enumerate_gl(n, F, start=0, stop=None, limit=None, chunk=1 << 16):
    """Yield every invertible n x n matrix once, in row-major lexicographic order.

    ``start``/``stop`` restrict to a range of candidate indices (all q^(n^2)
    matrices, entry (0, 0) most significant) so that disjoint ranges can be
    handed to independent consumers.
    """
    check_group_size(n, F, limit)
    t = F.tables()
    total = candidate_count(n, F)
    stop = total if stop is None else min(stop, total)
    for lo in range(start, stop, chunk):
        hi = min(lo + chunk, stop)
        mats = fo.decode(n, F.q, np.arange(lo, hi, dtype=np.int64))
        keep = fo.det(t, mats) != 0
        for m in mats[keep]:
            yield MatrixOverField(F, m)


def gl_elements(n, F, limit=None):
    """All of GL_n(F_q) as an int array of shape (|G|, n, n), in enumeration order."""
    from . import kernels

    order = check_group_size(n, F, limit)
    idx, _ = kernels.class_keys_range(n, F.tables(), 0, candidate_count(n, F))
    assert len(idx) == order
    return fo.decode(n, F.q, idx)


def all_matrices(n, F, limit=None):
    total = candidate_count(n, F)
    cap = config.iteration_limit(limit)
    if total > cap:
        raise EnumerationTooLarge(f"{total} matrices exceed the limit {cap}")
    return fo.decode(n, F.q, np.arange(total, dtype=np.int64))


# -- rational canonical form ----------------------------------------------------


def _smith_invariant_factors(F, M):
    """Invariant factors of ``xI - M`` via Smith normal form over F[x]."""
    n = M.shape[0]
    A = [[fqpoly.trim(((F.neg(int(M[i, j])),) if i != j else (F.neg(int(M[i, j])), 1))) for j in range(n)] for i in range(n)]
    diag = []
    for t in range(n):
        while True:
            best = None
            for i in range(t, n):
                for j in range(t, n):
                    if A[i][j] and (best is None or len(A[i][j]) < len(A[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            i, j = best
            A[t], A[i] = A[i], A[t]
            for row in A:
                row[t], row[j] = row[j], row[t]
            piv = A[t][t]
            dirty = False
            for i in range(t + 1, n):
                if A[i][t]:
                    qt, _ = fqpoly.divmod_(F, A[i][t], piv)
                    A[i] = [fqpoly.sub(F, A[i][c], fqpoly.mul(F, qt, A[t][c])) for c in range(n)]
                    dirty = dirty or bool(A[i][t])
            for j in range(t + 1, n):
                if A[t][j]:
                    qt, _ = fqpoly.divmod_(F, A[t][j], piv)
                    for r in range(n):
                        A[r][j] = fqpoly.sub(F, A[r][j], fqpoly.mul(F, qt, A[r][t]))
                    dirty = dirty or bool(A[t][j])
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, n) for j in range(t + 1, n) if fqpoly.divmod_(F, A[i][j], piv)[1]),
                None,
            )
            if bad is None:
                break
            A[t] = [fqpoly.add(F, A[t][c], A[bad][c]) for c in range(n)]
        if t < n:
            diag.append(fqpoly.monic(F, A[t][t]) if A[t][t] else ())
    return [d for d in diag if len(d) > 1]


def rcf_key(M):
    """Invariant factors of the rational canonical form of ``M``.

    Returns a tuple of monic polynomials (coefficient tuples, lowest degree
    first), each dividing the next.  Two matrices are conjugate exactly when
    their keys are equal.
    """
    return tuple(_smith_invariant_factors(M.field, M.entries))


def rcf_matrix(F, key):
    """Block-diagonal companion matrix realising an invariant-factor key."""
    n = sum(len(f) - 1 for f in key)
    M = np.zeros((n, n), dtype=np.int64)
    at = 0
    for f in key:
        d = len(f) - 1
        M[at:at + d, at:at + d] = MatrixOverField.companion(F, f).entries
        at += d
    return MatrixOverField(F, M)
