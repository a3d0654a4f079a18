"""Univariate polynomials over a finite field.

A polynomial is a tuple of integer-coded field elements, lowest degree
first, with no trailing zeros; ``()`` is the zero polynomial.  Every
function takes the field as its first argument.
"""

from itertools import product


def trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def deg(a):
    return len(a) - 1


def add(F, a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, v in enumerate(b):
        out[i] = F.add(out[i], v)
    return trim(out)


def neg(F, a):
    return tuple(F.neg(v) for v in a)


def sub(F, a, b):
    return add(F, a, neg(F, b))


def scale(F, c, a):
    if c == 0:
        return ()
    return trim(F.mul(c, v) for v in a)


def mul(F, a, b):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, u in enumerate(a):
        if u == 0:
            continue
        for j, v in enumerate(b):
            out[i + j] = F.add(out[i + j], F.mul(u, v))
    return trim(out)


def divmod_(F, a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    lead_inv = F.inv(b[-1])
    qt = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        c = F.mul(a[-1], lead_inv)
        qt[shift] = c
        for j, v in enumerate(b):
            a[shift + j] = F.sub(a[shift + j], F.mul(c, v))
        a = list(trim(a))
    return trim(qt), trim(a)


def monic(F, a):
    if not a:
        return a
    return scale(F, F.inv(a[-1]), a)


def gcd(F, a, b):
    while b:
        a, b = b, divmod_(F, a, b)[1]
    return monic(F, a)


def evaluate(F, a, x):
    acc = 0
    for c in reversed(a):
        acc = F.add(F.mul(acc, x), c)
    return acc


def monic_polys(F, d):
    """All monic polynomials of degree ``d``, in increasing coefficient order.

    The order compares coefficients from ``x^(d-1)`` downwards, i.e. by
    the integer ``sum(c_i * q**i)``.
    """
    for lower in product(range(F.q), repeat=d):
        yield tuple(reversed(lower)) + (1,)


def is_irreducible(F, a, smaller=None):
    """Irreducibility by trial division by monic irreducibles of degree <= deg/2."""
    d = deg(a)
    if d < 1:
        return False
    if d == 1:
        return True
    if a[0] == 0:
        return False
    if d <= 3:
        return all(evaluate(F, a, x) != 0 for x in range(F.q))
    for e in range(1, d // 2 + 1):
        divisors = smaller[e] if smaller is not None else irreducibles(F, e)
        for f in divisors:
            if not divmod_(F, a, f)[1]:
                return False
    return True


def irreducibles(F, d, exclude_x=False):
    """Monic irreducible polynomials of degree ``d`` in canonical order."""
    smaller = {e: irreducibles(F, e) for e in range(1, d // 2 + 1)} if d > 3 else None
    out = [f for f in monic_polys(F, d) if is_irreducible(F, f, smaller)]
    if exclude_x:
        out = [f for f in out if f != (0, 1)]
    return out


def fmt(a, var="x"):
    """Human-readable form, e.g. ``x^2 + 2*x + 1`` (coefficients as integer codes)."""
    if not a:
        return "0"
    parts = []
    for i in range(len(a) - 1, -1, -1):
        c = a[i]
        if c == 0:
            continue
        if i == 0:
            parts.append(str(c))
        else:
            mono = var if i == 1 else f"{var}^{i}"
            parts.append(mono if c == 1 else f"{c}*{mono}")
    return " + ".join(parts)
