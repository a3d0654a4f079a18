"""Slow, independent reference computations in plain Python.

Nothing here touches the package internals: prime-field matrices are
tuples of tuples and every product is computed by hand.
"""

from itertools import product


def matrices(n, p):
    for flat in product(range(p), repeat=n * n):
        yield tuple(tuple(flat[i * n:(i + 1) * n]) for i in range(n))


def mul(A, B, p):
    n = len(A)
    return tuple(tuple(sum(A[i][k] * B[k][j] for k in range(n)) % p for j in range(n)) for i in range(n))


def det(A, p):
    n = len(A)
    if n == 1:
        return A[0][0] % p
    total = 0
    for j in range(n):
        minor = tuple(tuple(row[c] for c in range(n) if c != j) for row in A[1:])
        total += (-1) ** j * A[0][j] * det(minor, p)
    return total % p


def gl(n, p):
    return [A for A in matrices(n, p) if det(A, p)]


def inverse(A, p, group):
    n = len(A)
    eye = identity(n)
    return next(B for B in group if mul(A, B, p) == eye)


def identity(n):
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def scalar(n, c):
    return tuple(tuple(c if i == j else 0 for j in range(n)) for i in range(n))


def conjugacy_orbits(n, p):
    G = gl(n, p)
    inv = {A: inverse(A, p, G) for A in G}
    seen, orbits = set(), []
    for A in G:
        if A in seen:
            continue
        orb = {mul(mul(P, A, p), inv[P], p) for P in G}
        seen |= orb
        orbits.append(orb)
    return orbits


def commutator(A, B, p, inv):
    return mul(mul(mul(A, B, p), inv[A], p), inv[B], p)


def genus_one_tally(n, p):
    """#{(A, B) : [A, B] = z} for every z in GL_n(F_p)."""
    G = gl(n, p)
    inv = {A: inverse(A, p, G) for A in G}
    tally = {}
    for A in G:
        for B in G:
            c = commutator(A, B, p, inv)
            tally[c] = tally.get(c, 0) + 1
    return tally


def is_primitive_root(r, n, p):
    return pow(r, n, p) == 1 and all(pow(r, d, p) != 1 for d in range(1, n))
