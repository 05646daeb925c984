"""Quaternion algebras (a, b)_F with i^2 = a, j^2 = b, k = ij = -ji.

Coefficients are Scalars of a FieldTower, or elements of a quadratic
extension K = F(sqrt d) when the algebra is extended to K (``Q.over(ext)``).
In element strings ``i``, ``j``, ``k`` are basis quaternions; sqrt(-1) of a
Gaussian base is written ``I`` and sqrt(d) of an extension ``sqrtd``.
"""

from fractions import Fraction
import re

from .errors import AlgebraMismatch, PreconditionError
from .fields import (
    KElement,
    QuadraticExtension,
    Scalar,
    is_square,
    parse_tower,
    sqrt,
)
from .grammar import evaluate
from .quadforms.certificates import witness_certificate
from .quadforms.forms import QuadForm
from .quadforms.springer import Decision, certify_anisotropic, represents, ANISOTROPIC, ISOTROPIC

SPLIT = "split"
DIVISION = "division"
UNKNOWN = "unknown"


class QuatAlgebra:
    def __init__(self, a, b, tower=None, ext=None):
        if tower is None:
            tower = a.tower if isinstance(a, Scalar) else parse_tower("Q")
        self.tower = tower
        self.a = tower.scalar(a)
        self.b = tower.scalar(b)
        if self.a.is_zero() or self.b.is_zero():
            raise PreconditionError("quaternion parameters must be nonzero")
        if ext is not None and ext.tower != tower:
            raise PreconditionError("extension is over a different tower")
        self.ext = ext

    def over(self, ext):
        """The algebra tensored with K = F(sqrt d)."""
        if not isinstance(ext, QuadraticExtension):
            ext = QuadraticExtension(self.tower, ext)
        return QuatAlgebra(self.a, self.b, self.tower, ext)

    def base_algebra(self):
        return QuatAlgebra(self.a, self.b, self.tower)

    def __eq__(self, other):
        return (isinstance(other, QuatAlgebra) and self.tower == other.tower
                and self.a == other.a and self.b == other.b and self.ext == other.ext)

    def __hash__(self):
        return hash((self.tower, str(self.a), str(self.b)))

    def __repr__(self):
        tail = f", K=F(sqrt({self.ext.d}))" if self.ext else ""
        return f"QuatAlgebra(({self.a}, {self.b}) over {self.tower}{tail})"

    # coefficients
    def coef(self, x):
        if self.ext is not None:
            if isinstance(x, KElement):
                return x
            return self.ext(self.tower.scalar(x) if not isinstance(x, Scalar) else x.embed(self.tower))
        if isinstance(x, KElement):
            raise AlgebraMismatch("K-coefficient in an algebra over F")
        if isinstance(x, Scalar) and x.tower != self.tower:
            return x.embed(self.tower)
        return self.tower.scalar(x)

    def element(self, x0=0, x1=0, x2=0, x3=0):
        return QuatElement(self, (self.coef(x0), self.coef(x1), self.coef(x2), self.coef(x3)))

    def zero(self):
        return self.element()

    def one(self):
        return self.element(1)

    def basis(self):
        return [self.element(1), self.element(0, 1), self.element(0, 0, 1), self.element(0, 0, 0, 1)]

    def i(self):
        return self.element(0, 1)

    def j(self):
        return self.element(0, 0, 1)

    def k(self):
        return self.element(0, 0, 0, 1)

    def sqrt_d(self):
        if self.ext is None:
            raise PreconditionError("algebra is not extended by a square root")
        return self.element(self.ext.sqrt_d())

    def norm_form(self):
        a, b = self.a, self.b
        return QuadForm([1, -a, -b, a * b], self.tower)

    def pure_form(self):
        a, b = self.a, self.b
        return QuadForm([a, b, -a * b], self.tower)

    def parse(self, text):
        return parse_quat(text, self)


class QuatElement:
    __slots__ = ("alg", "c")

    def __init__(self, alg, coeffs):
        self.alg = alg
        self.c = tuple(coeffs)

    def _other(self, y):
        if isinstance(y, QuatElement):
            if y.alg != self.alg:
                raise AlgebraMismatch(f"{self.alg!r} vs {y.alg!r}")
            return y
        if isinstance(y, (int, Fraction, Scalar, KElement)) and not isinstance(y, bool):
            return self.alg.element(y)
        return None

    def __add__(self, y):
        y = self._other(y)
        if y is None:
            return NotImplemented
        return QuatElement(self.alg, [u + v for u, v in zip(self.c, y.c)])

    __radd__ = __add__

    def __sub__(self, y):
        y = self._other(y)
        if y is None:
            return NotImplemented
        return QuatElement(self.alg, [u - v for u, v in zip(self.c, y.c)])

    def __rsub__(self, y):
        y = self._other(y)
        if y is None:
            return NotImplemented
        return y - self

    def __neg__(self):
        return QuatElement(self.alg, [-u for u in self.c])

    def __mul__(self, y):
        if isinstance(y, (int, Fraction, Scalar, KElement)) and not isinstance(y, bool):
            s = self.alg.coef(y)
            return QuatElement(self.alg, [u * s for u in self.c])
        y = self._other(y)
        if y is None:
            return NotImplemented
        a, b = self.alg.a, self.alg.b
        x0, x1, x2, x3 = self.c
        y0, y1, y2, y3 = y.c
        return QuatElement(self.alg, (
            x0 * y0 + a * x1 * y1 + b * x2 * y2 - a * b * x3 * y3,
            x0 * y1 + x1 * y0 - b * x2 * y3 + b * x3 * y2,
            x0 * y2 + x2 * y0 + a * x1 * y3 - a * x3 * y1,
            x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1,
        ))

    def __rmul__(self, y):
        # scalars are central
        return self.__mul__(y)

    def conj(self):
        x0, x1, x2, x3 = self.c
        return QuatElement(self.alg, (x0, -x1, -x2, -x3))

    def iota(self):
        """Apply the nontrivial automorphism of K coefficientwise."""
        if self.alg.ext is None:
            return self
        return QuatElement(self.alg, [u.conj() for u in self.c])

    def theta(self):
        return self.conj().iota()

    def trd(self):
        return 2 * self.c[0]

    def nrd(self):
        a, b = self.alg.a, self.alg.b
        x0, x1, x2, x3 = self.c
        return x0 * x0 - a * x1 * x1 - b * x2 * x2 + a * b * x3 * x3

    def is_zero(self):
        return all(u.is_zero() for u in self.c)

    def is_pure(self):
        return self.c[0].is_zero()

    def is_central(self):
        return all(u.is_zero() for u in self.c[1:])

    def scalar_part(self):
        return self.c[0]

    def pure_part(self):
        return QuatElement(self.alg, (self.alg.coef(0),) + self.c[1:])

    def inverse(self):
        n = self.nrd()
        if n.is_zero():
            raise ZeroDivisionError("quaternion with zero reduced norm")
        inv = 1 / n
        return self.conj() * inv

    def __truediv__(self, y):
        if isinstance(y, (int, Fraction, Scalar, KElement)) and not isinstance(y, bool):
            return self * (1 / self.alg.coef(y))
        y = self._other(y)
        if y is None:
            return NotImplemented
        return self * y.inverse()

    def __rtruediv__(self, y):
        y = self._other(y)
        if y is None:
            return NotImplemented
        return y * self.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        out = self.alg.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, y):
        try:
            y = self._other(y)
        except AlgebraMismatch:
            return False
        if y is None:
            return NotImplemented
        return all(u == v for u, v in zip(self.c, y.c))

    def __hash__(self):
        return hash(tuple(str(u) for u in self.c))

    def __bool__(self):
        return not self.is_zero()

    def __str__(self):
        return format_quat(self)

    def __repr__(self):
        return f"QuatElement({self})"


def _coef_str(u):
    if isinstance(u, KElement):
        if u.b.is_zero():
            return str(u.a)
        tail = "sqrtd" if u.b == 1 else f"({u.b})*sqrtd"
        if u.a.is_zero():
            return tail
        return f"({u.a} + {tail})"
    return str(u)


def format_quat(x):
    parts = []
    for u, name in zip(x.c, ("", "i", "j", "k")):
        if u.is_zero():
            continue
        s = _coef_str(u)
        if not name:
            parts.append(s if " " not in s or s.startswith("(") else f"({s})")
        elif s == "1":
            parts.append(name)
        elif s == "-1":
            parts.append(f"-{name}")
        elif re.fullmatch(r"-?\d+", s):
            parts.append(f"{s}*{name}")
        else:
            parts.append(f"({s})*{name}")
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
    return out


def parse_quat(text, alg):
    """Parse ``x0 + x1*i + x2*j + x3*k`` (coefficients are scalar expressions)."""
    tower = alg.tower

    def resolve(name):
        if name == "i":
            return alg.i()
        if name == "j":
            return alg.j()
        if name == "k":
            return alg.k()
        if name == "I":
            return alg.element(tower.sqrt_minus_one())
        if name == "sqrtd" and alg.ext is not None:
            return alg.sqrt_d()
        if name in tower.vars:
            return alg.element(tower.var(name))
        raise KeyError(name)

    value = evaluate(text, resolve, lambda n: alg.element(n))
    return value


# ------------------------------------------------------------------ decisions


def is_division(Q):
    """Decision(split|division|unknown, certificate, zero divisor or None)."""
    if Q.ext is not None:
        raise PreconditionError("is_division works over the base tower")
    norm = Q.norm_form()
    d = certify_anisotropic(norm)
    if d.verdict == ANISOTROPIC:
        return Decision(DIVISION, d.certificate)
    if d.verdict == ISOTROPIC:
        z = Q.element(*d.value)
        if z.is_zero() or not z.nrd().is_zero():
            raise AssertionError("zero divisor check failed")
        return Decision(SPLIT, d.certificate, z)
    return Decision(UNKNOWN, None)


def pure_with_square(Q, c, budget=None):
    """Decision(yes, cert, q) with q pure and q^2 = c; (no, cert) or (unknown, None)."""
    c = Q.tower.scalar(c) if not isinstance(c, Scalar) else c
    if c.is_zero():
        raise PreconditionError("square must be nonzero")
    # quick hits on the basis
    for q in (Q.i(), Q.j(), Q.k()):
        s = (q * q).scalar_part()
        r = sqrt(c / s)
        if r is not None:
            q = q * r
            form = Q.pure_form() + QuadForm([-c], Q.tower)
            return Decision("yes", witness_certificate(form, list(q.c[1:]) + [Q.tower.one()]), q)
    d = represents(Q.pure_form(), c, budget=budget)
    if d.verdict != "yes":
        return d
    x, y, z = d.value
    q = Q.element(0, x, y, z)
    if not (q * q == Q.element(c)):
        raise AssertionError("pure quaternion square check failed")
    return Decision("yes", d.certificate, q)


def _normalize_first(v):
    lead = next(x for x in v if not x.is_zero())
    return [x / lead for x in v]


def anticommuting_pure(q):
    """A nonzero pure u with uq = -qu (invertible whenever possible)."""
    if not q.is_pure():
        raise PreconditionError("element is not pure")
    if (q * q).scalar_part().is_zero():
        raise PreconditionError("pure element squares to zero")
    alg = q.alg
    a, b = alg.a, alg.b
    _, x1, x2, x3 = q.c
    zero = alg.coef(0)
    cands = [(-b * x2, a * x1, zero), (b * x3, zero, x1), (zero, a * x3, x2)]
    found = []
    for v in cands:
        if all(x.is_zero() for x in v):
            continue
        u = alg.element(0, *_normalize_first(v))
        if not (u * u).is_zero() and not u.nrd().is_zero():
            return u
        found.append(u)
    # isotropic candidates only (split algebra): try pairwise sums
    for s in range(len(found)):
        for t in range(s + 1, len(found)):
            u = found[s] + found[t]
            if not u.is_zero() and not u.nrd().is_zero():
                return u
    return found[0]


def two_pure_factors(x):
    """Pure p, r with x = p*r (p invertible)."""
    alg = x.alg
    if x.is_zero():
        return alg.i(), alg.zero()
    xp = x.pure_part()
    if xp.is_zero():
        p = alg.i()
    elif (xp * xp).is_zero():
        p = _orthogonal_invertible(xp)
    else:
        p = anticommuting_pure(xp)
    r = p.inverse() * x
    return p, r


def _orthogonal_invertible(xp):
    alg = xp.alg
    a, b = alg.a, alg.b
    _, x1, x2, x3 = xp.c
    zero = alg.coef(0)
    cands = [(-b * x2, a * x1, zero), (b * x3, zero, x1), (zero, a * x3, x2)]
    vecs = [alg.element(0, *v) for v in cands if not all(c.is_zero() for c in v)]
    for u in vecs:
        if not u.nrd().is_zero():
            return u
    for s in range(len(vecs)):
        for t in range(s + 1, len(vecs)):
            for sign in (1, -1):
                u = vecs[s] + vecs[t] * sign
                if not u.is_zero() and not u.nrd().is_zero():
                    return u
    raise PreconditionError("no invertible pure element orthogonal to the given one")


def splits_over(Q, delta, budget=None):
    """Is F(sqrt delta) a splitting field of Q?  Decision(yes|no|unknown, cert)."""
    delta = Q.tower.scalar(delta) if not isinstance(delta, Scalar) else delta
    if delta.is_zero() or is_square(delta):
        raise PreconditionError("delta must be a nonzero non-square")
    tower = Q.tower.join(delta.tower)
    a, b = Q.a.embed(tower), Q.b.embed(tower)
    return represents(QuadForm([a, b, -a * b], tower), delta.embed(tower), budget=budget)


def matrix_image(x):
    """2x2 matrix of x over F(sqrt a) (entries KElements, or Scalars if a is a square)."""
    alg = x.alg
    if alg.ext is not None:
        raise PreconditionError("matrix image needs an algebra over the base tower")
    a, b = alg.a, alg.b
    r = sqrt(a)
    x0, x1, x2, x3 = x.c
    if r is not None:
        return [[x0 + x1 * r, b * (x2 + x3 * r)], [x2 - x3 * r, x0 - x1 * r]]
    ext = QuadraticExtension(alg.tower, a)
    s = ext.sqrt_d()
    return [[x0 + s * x1, (x2 + s * x3) * b], [x2 - s * x3, x0 - s * x1]]
