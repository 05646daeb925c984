"""Local invariants over Q: Hilbert symbols, local squares, local isotropy."""

from fractions import Fraction

from sympy import factorint, isprime

from ..errors import PreconditionError

INF = "inf"


def _as_int_class(a):
    """An integer in the same square class as the nonzero rational ``a``."""
    a = Fraction(a)
    if a == 0:
        raise PreconditionError("zero has no square class")
    return a.numerator * a.denominator


def split_p(n, p):
    """Write the nonzero integer n as p^e * u with p not dividing u."""
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e, n


def legendre(u, p):
    r = pow(u % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def check_place(place):
    if place == INF:
        return place
    if isinstance(place, str):
        if place in ("inf", "oo", "infinity"):
            return INF
        place = int(place)
    if not isinstance(place, int) or not isprime(place):
        raise PreconditionError(f"{place!r} is not a place of Q")
    return place


def hilbert_symbol(a, b, place):
    """The Hilbert symbol (a, b)_v in {+1, -1}."""
    place = check_place(place)
    a, b = _as_int_class(a), _as_int_class(b)
    if place == INF:
        return -1 if a < 0 and b < 0 else 1
    p = place
    alpha, u = split_p(a, p)
    beta, v = split_p(b, p)
    if p == 2:
        eps = lambda w: ((w - 1) // 2) % 2
        omega = lambda w: ((w * w - 1) // 8) % 2
        e = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u)
        return -1 if e % 2 else 1
    sign = -1 if (alpha * beta * ((p - 1) // 2)) % 2 else 1
    if beta % 2:
        sign *= legendre(u, p)
    if alpha % 2:
        sign *= legendre(v, p)
    return sign


def is_local_square(a, place):
    place = check_place(place)
    n = _as_int_class(a)
    if place == INF:
        return n > 0
    e, u = split_p(n, place)
    if e % 2:
        return False
    if place == 2:
        return u % 8 == 1
    return legendre(u, place) == 1


def least_nonresidue(p):
    for n in range(2, p):
        if legendre(n, p) == -1:
            return n
    raise AssertionError(p)


def local_class_reps(place):
    """Representatives of Q_v^x / (Q_v^x)^2."""
    place = check_place(place)
    if place == INF:
        return [1, -1]
    if place == 2:
        return [1, 3, 5, 7, 2, 6, 10, 14]
    n = least_nonresidue(place)
    return [1, n, place, n * place]


def local_class_basis(place):
    """F2-basis of the local square class group (as integers)."""
    place = check_place(place)
    if place == INF:
        return [-1]
    if place == 2:
        return [-1, 5, 2]
    return [least_nonresidue(place), place]


def prime_support(values):
    ps = set()
    for a in values:
        n = _as_int_class(a)
        ps.update(factorint(abs(n)).keys())
    return ps


def relevant_places(values):
    """Places where a form with these coefficients can be locally anisotropic."""
    return [INF] + sorted(prime_support(values) | {2})


def hasse_invariant(entries, place):
    e = 1
    for i in range(len(entries)):
        for j in range(i + 1, len(entries)):
            e *= hilbert_symbol(entries[i], entries[j], place)
    return e


def discriminant(entries):
    d = Fraction(1)
    for a in entries:
        d *= Fraction(a)
    return d


def local_isotropic(entries, place):
    """Local isotropy of the diagonal form at ``place`` (Serre, Ch. IV)."""
    place = check_place(place)
    n = len(entries)
    if n <= 1:
        return False
    if place == INF:
        return any(Fraction(a) > 0 for a in entries) and any(Fraction(a) < 0 for a in entries)
    d = discriminant(entries)
    if n == 2:
        return is_local_square(-d, place)
    eps = hasse_invariant(entries, place)
    if n == 3:
        return hilbert_symbol(-1, -d, place) == eps
    if n == 4:
        return not (is_local_square(d, place) and eps == -hilbert_symbol(-1, -1, place))
    return True


def local_table(entries):
    """Per-place data used by certificates: (place, isotropic, d, hasse)."""
    rows = []
    for v in relevant_places(entries):
        rows.append((v, local_isotropic(entries, v)))
    return rows
