"""Exact scalars over Q, Q(i) and rational function fields over them.

A :class:`FieldTower` names the base field and an ordered list of
indeterminates.  The last indeterminate is the outermost one when the tower is
viewed inside iterated Laurent series, which is the order residue chains use.
"""

from fractions import Fraction
from functools import lru_cache
from math import isqrt
import re

from sympy import factorint
from sympy.polys.domains import QQ, QQ_I
from sympy.polys.fields import FracField

from .errors import CapacityError, ParseError, PreconditionError
from .grammar import evaluate, split_top_level

RATIONALS = "Q"
GAUSSIAN = "Q(i)"

# Rational primes allowed when factoring over Z[i].
GAUSSIAN_PRIME_BOUND = 10**4

_RESERVED = {"i", "I", "j", "k", "sqrtd"}
_IDENT = re.compile(r"^[A-Za-z_][A-Za-z_0-9]*$")


@lru_cache(maxsize=None)
def _frac_field(base, names):
    return FracField(names, QQ_I if base == GAUSSIAN else QQ)


class FieldTower:
    __slots__ = ("base", "vars", "_hash")

    def __init__(self, base=RATIONALS, vars=()):
        if base not in (RATIONALS, GAUSSIAN):
            raise PreconditionError(f"unsupported base field {base!r}")
        vars = tuple(vars)
        for name in vars:
            if not _IDENT.match(name or ""):
                raise PreconditionError(f"bad variable name {name!r}")
            if name in _RESERVED:
                raise PreconditionError(f"variable name {name!r} is reserved")
        if len(set(vars)) != len(vars):
            raise PreconditionError("variable names must be distinct")
        self.base = base
        self.vars = vars
        self._hash = hash((base, vars))

    @property
    def field(self):
        return _frac_field(self.base, self.vars)

    @property
    def ring(self):
        return self.field.ring

    @property
    def domain(self):
        return QQ_I if self.base == GAUSSIAN else QQ

    @property
    def gaussian(self):
        return self.base == GAUSSIAN

    def __eq__(self, other):
        return isinstance(other, FieldTower) and self.base == other.base and self.vars == other.vars

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"FieldTower({self})"

    def __str__(self):
        return self.base + (f"[{','.join(self.vars)}]" if self.vars else "")

    def var(self, name):
        idx = self.vars.index(name)
        return Scalar(self, self.field.gens[idx])

    def gens(self):
        return [Scalar(self, g) for g in self.field.gens]

    def __call__(self, value):
        return self.scalar(value)

    def scalar(self, value):
        if isinstance(value, Scalar):
            return value.embed(self)
        if isinstance(value, str):
            return parse_scalar(value, self)
        if isinstance(value, bool):
            raise TypeError("bool is not a scalar")
        if isinstance(value, int):
            return Scalar(self, self.field(value))
        if isinstance(value, Fraction):
            return Scalar(self, self.field(value.numerator) / value.denominator)
        if isinstance(value, complex):
            raise TypeError("floating point input is not accepted")
        raise TypeError(f"cannot convert {type(value).__name__} to a scalar")

    def zero(self):
        return Scalar(self, self.field.zero)

    def one(self):
        return Scalar(self, self.field.one)

    def sqrt_minus_one(self):
        if not self.gaussian:
            raise PreconditionError("i is only available over Q(i)")
        return Scalar(self, self.field(self.field.ring(QQ_I(0, 1))))

    def extend(self, *names):
        return FieldTower(self.base, self.vars + tuple(names))

    def without(self, name):
        return FieldTower(self.base, tuple(v for v in self.vars if v != name))

    def with_base(self, base):
        return FieldTower(base, self.vars)

    def contains(self, other):
        if self.base == RATIONALS and other.base == GAUSSIAN:
            return False
        return set(other.vars) <= set(self.vars)

    def join(self, other):
        base = GAUSSIAN if GAUSSIAN in (self.base, other.base) else RATIONALS
        return FieldTower(base, self.vars + tuple(v for v in other.vars if v not in self.vars))


def parse_tower(text):
    """Parse ``Q``, ``Q(i)``, ``Q(i)[a1,a2][r,s,t]`` and similar."""
    s = text.replace(" ", "")
    m = re.match(r"^(Q\(i\)|QQ_I|Q|QQ)", s)
    if not m:
        raise ParseError("tower must start with Q or Q(i)", 0, text)
    base = GAUSSIAN if m.group(1) in ("Q(i)", "QQ_I") else RATIONALS
    pos = m.end()
    names = []
    while pos < len(s):
        if s[pos] != "[":
            raise ParseError("expected '['", pos, text)
        end = s.find("]", pos)
        if end < 0:
            raise ParseError("unterminated variable block", pos, text)
        block = s[pos + 1:end]
        if block:
            names.extend(block.split(","))
        pos = end + 1
    try:
        return FieldTower(base, names)
    except PreconditionError as exc:
        raise ParseError(str(exc), None, text) from None


# ---------------------------------------------------------------- scalars


def _coerce(tower, other):
    if isinstance(other, Scalar):
        if other.tower != tower:
            joined = tower.join(other.tower)
            if joined != tower:
                return None
            return other.embed(tower)
        return other
    if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
        return tower.scalar(other)
    return None


class Scalar:
    """Element of a :class:`FieldTower`, stored as a reduced sympy fraction."""

    __slots__ = ("tower", "v", "_str")

    def __init__(self, tower, value):
        self.tower = tower
        self.v = value
        self._str = None

    # arithmetic
    def _binary(self, other, fn, reverse=False):
        if isinstance(other, Scalar) and other.tower != self.tower:
            joined = self.tower.join(other.tower)
            a, b = self.embed(joined), other.embed(joined)
            return Scalar(joined, fn(b.v, a.v) if reverse else fn(a.v, b.v))
        o = _coerce(self.tower, other)
        if o is None:
            return NotImplemented
        return Scalar(self.tower, fn(o.v, self.v) if reverse else fn(self.v, o.v))

    def __add__(self, other):
        return self._binary(other, lambda x, y: x + y)

    def __radd__(self, other):
        return self._binary(other, lambda x, y: x + y, True)

    def __sub__(self, other):
        return self._binary(other, lambda x, y: x - y)

    def __rsub__(self, other):
        return self._binary(other, lambda x, y: x - y, True)

    def __mul__(self, other):
        return self._binary(other, lambda x, y: x * y)

    def __rmul__(self, other):
        return self._binary(other, lambda x, y: x * y, True)

    def __truediv__(self, other):
        o = other if isinstance(other, Scalar) else _coerce(self.tower, other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise ZeroDivisionError("division by zero scalar")
        return self._binary(o, lambda x, y: x / y)

    def __rtruediv__(self, other):
        if self.is_zero():
            raise ZeroDivisionError("division by zero scalar")
        return self._binary(other, lambda x, y: x / y, True)

    def __neg__(self):
        return Scalar(self.tower, -self.v)

    def __pos__(self):
        return self

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            if self.is_zero():
                raise ZeroDivisionError("zero to a negative power")
            return Scalar(self.tower, (1 / self.v) ** (-n))
        return Scalar(self.tower, self.v ** n)

    def __eq__(self, other):
        o = _coerce(self.tower, other)
        if o is None:
            if isinstance(other, Scalar):
                joined = self.tower.join(other.tower)
                return (self.embed(joined) - other.embed(joined)).is_zero()
            return NotImplemented
        return (self.v - o.v).numer.is_zero

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __hash__(self):
        return hash(str(self))

    def __bool__(self):
        return not self.is_zero()

    # structure
    def is_zero(self):
        return self.v.numer.is_zero

    @property
    def numer(self):
        return self.v.numer

    @property
    def denom(self):
        return self.v.denom

    def is_constant(self):
        return self.v.numer.is_ground and self.v.denom.is_ground

    def constant(self):
        """Return the base-field constant as a domain element."""
        if not self.is_constant():
            raise PreconditionError(f"{self} is not a constant")
        dom = self.tower.domain
        return dom.quo(self.v.numer.LC if self.v.numer else dom.zero, self.v.denom.LC)

    def as_fraction(self):
        c = self.constant()
        if self.tower.gaussian:
            if c.y != 0:
                raise PreconditionError(f"{self} is not rational")
            c = c.x
        return Fraction(int(c.numerator), int(c.denominator))

    def as_gaussian(self):
        c = self.constant()
        if self.tower.gaussian:
            return Fraction(int(c.x.numerator), int(c.x.denominator)), Fraction(int(c.y.numerator), int(c.y.denominator))
        return Fraction(int(c.numerator), int(c.denominator)), Fraction(0)

    def is_rational_constant(self):
        if not self.is_constant():
            return False
        return not self.tower.gaussian or self.constant().y == 0

    def embed(self, tower):
        if tower == self.tower:
            return self
        if not tower.contains(self.tower):
            raise PreconditionError(f"cannot embed {self.tower} into {tower}")
        ring = tower.ring
        num = self.v.numer.set_ring(ring)
        den = self.v.denom.set_ring(ring)
        return Scalar(tower, tower.field.new(num, den))

    def variables(self):
        used = set()
        for poly in (self.v.numer, self.v.denom):
            for monom in poly.monoms():
                for idx, e in enumerate(monom):
                    if e:
                        used.add(idx)
        return [self.tower.vars[i] for i in sorted(used)]

    def degree(self, name):
        idx = self.tower.vars.index(name)
        return self.v.numer.degree(idx), self.v.denom.degree(idx)

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return Scalar(self.tower, 1 / self.v)

    def gaussian_conjugate(self):
        """Apply i -> -i coefficientwise (identity over Q)."""
        if not self.tower.gaussian:
            return self
        ring = self.tower.ring
        dom = ring.domain

        def conj(p):
            return ring.from_dict({m: dom(c.x, -c.y) for m, c in p.terms()})

        return Scalar(self.tower, self.tower.field.new(conj(self.v.numer), conj(self.v.denom)))

    def __str__(self):
        if self._str is None:
            self._str = format_scalar(self)
        return self._str

    def __repr__(self):
        return f"Scalar({self}, {self.tower})"


def format_scalar(x):
    names = x.tower.vars
    num, den = x.v.numer, x.v.denom
    lc = den.LC
    if lc != den.ring.domain.one:
        num = num.quo_ground(lc)
        den = den.quo_ground(lc)
    if den.is_ground:
        return _poly_str(num, names)
    return f"({_poly_str(num, names)})/({_poly_str(den, names)})"


def _rat_str(c):
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def _coeff_parts(c, gaussian):
    """Return (sign, body, is_unit) for printing a coefficient."""
    if not gaussian:
        q = Fraction(int(c.numerator), int(c.denominator))
        return (-1 if q < 0 else 1), _rat_str(abs(q)), abs(q) == 1
    x = Fraction(int(c.x.numerator), int(c.x.denominator))
    y = Fraction(int(c.y.numerator), int(c.y.denominator))
    if y == 0:
        return (-1 if x < 0 else 1), _rat_str(abs(x)), abs(x) == 1
    if x == 0:
        body = "I" if abs(y) == 1 else f"{_rat_str(abs(y))}*I"
        return (-1 if y < 0 else 1), body, False
    ys = "+" if y > 0 else "-"
    yb = "I" if abs(y) == 1 else f"{_rat_str(abs(y))}*I"
    return 1, f"({_rat_str(x)} {ys} {yb})", False


def _poly_str(p, names):
    if p.is_zero:
        return "0"
    gaussian = p.ring.domain == QQ_I
    out = []
    for monom, coeff in p.terms():
        factors = []
        for name, e in zip(names, monom):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        sign, body, unit = _coeff_parts(coeff, gaussian)
        if factors:
            mono = "*".join(factors)
            term = mono if unit else f"{body}*{mono}"
        else:
            term = body
        if not out:
            out.append(("-" if sign < 0 else "") + term)
        else:
            out.append((" - " if sign < 0 else " + ") + term)
    return "".join(out)


def parse_scalar(text, tower):
    """Parse a scalar expression in the tower's variables (``i``/``I`` is sqrt(-1))."""
    def resolve(name):
        if name in ("i", "I"):
            if not tower.gaussian:
                raise KeyError(name)
            return tower.sqrt_minus_one()
        if name in tower.vars:
            return tower.var(name)
        raise KeyError(name)

    value = evaluate(text, resolve, tower.scalar)
    if not isinstance(value, Scalar):
        value = tower.scalar(value)
    return value


def parse_scalar_list(text, tower):
    return [parse_scalar(part, tower) for part in split_top_level(text)]


# ------------------------------------------------------------ square roots


def _rational_sqrt(q):
    q = Fraction(q)
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def gaussian_sqrt(x, y):
    """Square root of x + y*i in Q(i), as a pair, or None."""
    x, y = Fraction(x), Fraction(y)
    if y == 0:
        r = _rational_sqrt(x)
        if r is not None:
            return r, Fraction(0)
        r = _rational_sqrt(-x)
        return (Fraction(0), r) if r is not None else None
    r = _rational_sqrt(x * x + y * y)
    if r is None:
        return None
    u = _rational_sqrt((x + r) / 2)
    if u is None or u == 0:
        return None
    return u, y / (2 * u)


def _ground_sqrt(c, dom):
    if dom == QQ_I:
        s = gaussian_sqrt(Fraction(int(c.x.numerator), int(c.x.denominator)),
                          Fraction(int(c.y.numerator), int(c.y.denominator)))
        if s is None:
            return None
        return dom(QQ(s[0].numerator, s[0].denominator), QQ(s[1].numerator, s[1].denominator))
    s = _rational_sqrt(Fraction(int(c.numerator), int(c.denominator)))
    return None if s is None else dom(s.numerator, s.denominator)


def _split_by_var(p, k):
    ring = p.ring
    parts = {}
    for monom, coeff in p.terms():
        e = monom[k]
        m = monom[:k] + (0,) + monom[k + 1:]
        parts.setdefault(e, {})[m] = coeff
    return {e: ring.from_dict(d) for e, d in parts.items()}


def poly_sqrt(p):
    """Exact square root of a sparse polynomial, or None.

    Works top-down on the highest-index variable present: the leading
    coefficient's root is found recursively and the remaining coefficients
    follow by exact division.
    """
    ring = p.ring
    if p.is_zero:
        return p
    if p.is_ground:
        s = _ground_sqrt(p.LC, ring.domain)
        return None if s is None else ring(s)
    present = [i for i in range(ring.ngens) if p.degree(i) > 0]
    k = present[-1]
    deg = p.degree(k)
    low = min(m[k] for m in p.monoms())
    if deg % 2 or low % 2:
        return None
    parts = _split_by_var(p, k)
    d = deg // 2
    g = {d: poly_sqrt(parts[d * 2])}
    if g[d] is None:
        return None
    two_lead = g[d] * 2
    x = ring.gens[k]
    for j in range(d - 1, -1, -1):
        c = parts.get(d + j, ring.zero)
        s = ring.zero
        for i in range(j + 1, d):
            l = d + j - i
            if j < l < d:
                s += g[i] * g[l]
        rem = c - s
        if rem.is_zero:
            g[j] = ring.zero
            continue
        try:
            g[j] = rem.exquo(two_lead)
        except Exception:
            return None
    root = ring.zero
    for e, coeff in g.items():
        root += coeff * x ** e
    if root * root != p:
        return None
    return root


def sqrt(x):
    """Exact square root of a scalar in its tower, or None."""
    if x.is_zero():
        return x
    num, den = x.v.numer, x.v.denom
    r = poly_sqrt(num * den)
    if r is None:
        return None
    tower = x.tower
    return Scalar(tower, tower.field.new(r, tower.ring.one) / tower.field.new(den, tower.ring.one))


def is_square(x):
    return sqrt(x) is not None


# ------------------------------------------------------------ square classes


def squarefree_int(n):
    """Square-free part of a nonzero integer, sign included."""
    if n == 0:
        raise PreconditionError("zero has no square class")
    sign = -1 if n < 0 else 1
    out = 1
    for p, e in factorint(abs(n)).items():
        if e % 2:
            out *= p
    return sign * out


def _two_squares(p):
    for a in range(1, isqrt(p) + 1):
        b2 = p - a * a
        b = isqrt(b2)
        if b * b == b2:
            return a, b
    raise AssertionError(p)


def _gdiv(x, y):
    """Exact Gaussian integer quotient x / y, or None."""
    (a, b), (c, d) = x, y
    n = c * c + d * d
    re_, im_ = a * c + b * d, b * c - a * d
    if re_ % n or im_ % n:
        return None
    return re_ // n, im_ // n


def _normalize_associate(z):
    a, b = z
    for _ in range(4):
        if a > 0 and b >= 0:
            return a, b
        a, b = -b, a
    raise AssertionError(z)


def gaussian_factor(a, b, prime_bound=None):
    """Factor a nonzero Gaussian integer: returns (unit, {prime: exponent})."""
    bound = GAUSSIAN_PRIME_BOUND if prime_bound is None else prime_bound
    norm = a * a + b * b
    if norm == 0:
        raise PreconditionError("zero has no factorization")
    primes = {}
    z = (a, b)
    for p in sorted(factorint(norm)):
        if p > bound:
            raise CapacityError("gaussian prime bound", bound, f"rational prime {p}")
        if p == 2:
            cands = [(1, 1)]
        elif p % 4 == 3:
            cands = [(p, 0)]
        else:
            u, v = _two_squares(p)
            cands = [_normalize_associate((u, v)), _normalize_associate((u, -v))]
        for pi in cands:
            while True:
                q = _gdiv(z, pi)
                if q is None:
                    break
                z = q
                primes[pi] = primes.get(pi, 0) + 1
    assert z in ((1, 0), (-1, 0), (0, 1), (0, -1)), z
    return z, primes


class SquareClass:
    """Square class of a nonzero scalar.

    ``unit`` is a square-free integer over Q, or ``"1"``/``"i"`` over Q(i);
    ``base_primes`` lists Gaussian primes (over Q(i)) with odd exponent;
    ``factors`` holds the monic irreducible polynomials with odd exponent.
    """

    __slots__ = ("tower", "unit", "base_primes", "factors", "_key")

    def __init__(self, tower, unit, base_primes, factors):
        self.tower = tower
        self.unit = unit
        self.base_primes = tuple(sorted(base_primes))
        self.factors = tuple(sorted(factors, key=lambda f: _poly_str(f, tower.vars)))
        self._key = (tower, unit, self.base_primes, tuple(_poly_str(f, tower.vars) for f in self.factors))

    def __eq__(self, other):
        return isinstance(other, SquareClass) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def is_trivial(self):
        return not self.factors and not self.base_primes and self.unit in (1, "1")

    def representative(self):
        tower = self.tower
        ring = tower.ring
        if tower.gaussian:
            c = tower.sqrt_minus_one() if self.unit == "i" else tower.one()
            for (a, b) in self.base_primes:
                c = c * Scalar(tower, tower.field(ring(QQ_I(a, b))))
        else:
            c = tower.scalar(self.unit)
        for f in self.factors:
            c = c * Scalar(tower, tower.field.new(f, ring.one))
        return c

    def __mul__(self, other):
        return square_class(self.representative() * other.representative())

    def __repr__(self):
        return f"SquareClass({self.representative()})"

    def __str__(self):
        return str(self.representative())


def _constant_class(c, tower):
    """Class of a nonzero base-field constant: (unit, base_primes)."""
    if tower.gaussian:
        x = Fraction(int(c.x.numerator), int(c.x.denominator))
        y = Fraction(int(c.y.numerator), int(c.y.denominator))
        den = x.denominator * y.denominator
        a, b = int(x * den * den), int(y * den * den)
        unit, primes = gaussian_factor(a, b)
        odd = [p for p, e in primes.items() if e % 2]
        return ("i" if unit in ((0, 1), (0, -1)) else "1"), odd
    q = Fraction(int(c.numerator), int(c.denominator))
    return squarefree_int(q.numerator * q.denominator), []


def square_class(x):
    if x.is_zero():
        raise PreconditionError("zero has no square class")
    tower = x.tower
    ring = tower.ring
    p = x.v.numer * x.v.denom
    if p.is_ground:
        unit, primes = _constant_class(p.LC, tower)
        return SquareClass(tower, unit, primes, [])
    content, facs = p.factor_list()
    const = content
    odd = []
    for f, e in facs:
        lc = f.LC
        if lc != ring.domain.one:
            f = f.quo_ground(lc)
            const = const * lc ** e
        if e % 2:
            odd.append(f)
    unit, primes = _constant_class(const, tower)
    return SquareClass(tower, unit, primes, odd)


# ------------------------------------------------------------ residues


def _eval_drop(poly, k, value, target_ring):
    """Substitute variable k := value (a domain constant) and drop it."""
    out = {}
    dom = target_ring.domain
    for monom, coeff in poly.terms():
        m = monom[:k] + monom[k + 1:]
        c = coeff * value ** monom[k] if monom[k] else coeff
        out[m] = dom.add(out.get(m, dom.zero), c)
    return target_ring.from_dict({m: c for m, c in out.items() if c})


def _linear_uniformizer(pi):
    """Return (var index, alpha, root c) for pi = alpha*(t - c)."""
    tower = pi.tower
    if not pi.v.denom.is_ground:
        raise PreconditionError("uniformizer must be a polynomial")
    num = pi.v.numer.quo_ground(pi.v.denom.LC)
    used = [i for i in range(tower.ring.ngens) if num.degree(i) > 0]
    if len(used) != 1:
        raise PreconditionError("uniformizer must involve exactly one variable")
    k = used[0]
    if num.degree(k) != 1:
        raise PreconditionError("only linear uniformizers are supported")
    parts = _split_by_var(num, k)
    alpha = parts[1].LC
    beta = parts.get(0, num.ring.zero)
    beta = beta.LC if not beta.is_zero else num.ring.domain.zero
    dom = tower.domain
    return k, alpha, dom.quo(-beta, alpha)


def valuation_spec(spec, tower):
    """Normalize a valuation spec: a variable name or a linear polynomial."""
    if isinstance(spec, str):
        if spec in tower.vars:
            return spec
        spec = parse_scalar(spec, tower)
    if isinstance(spec, Scalar):
        if spec.tower != tower:
            spec = spec.embed(tower)
        _linear_uniformizer(spec)
        return spec
    raise PreconditionError(f"bad valuation spec {spec!r}")


def tame_residue(x, spec):
    """Valuation and residue of ``x`` at a variable or at a linear uniformizer.

    Returns ``(v, residue)`` where the residue lives in the tower with the
    uniformizer's variable removed.
    """
    if x.is_zero():
        raise PreconditionError("zero has no residue")
    tower = x.tower
    spec = valuation_spec(spec, tower)
    if isinstance(spec, str):
        k = tower.vars.index(spec)
        res_tower = tower.without(spec)
        ring = res_tower.ring

        def strip(p):
            v = min(m[k] for m in p.monoms())
            d = {}
            for monom, coeff in p.terms():
                if monom[k] == v:
                    d[monom[:k] + monom[k + 1:]] = coeff
            return v, ring.from_dict(d)

        vn, rn = strip(x.v.numer)
        vd, rd = strip(x.v.denom)
        return vn - vd, Scalar(res_tower, res_tower.field.new(rn, ring.one) / res_tower.field.new(rd, ring.one))
    k, alpha, c = _linear_uniformizer(spec)
    name = tower.vars[k]
    res_tower = tower.without(name)
    ring = res_tower.ring
    lin = tower.ring.gens[k] - tower.ring(c)

    def order(p):
        v = 0
        while _eval_drop(p, k, c, ring).is_zero:
            p = p.exquo(lin)
            v += 1
        return v, _eval_drop(p, k, c, ring)

    vn, rn = order(x.v.numer)
    vd, rd = order(x.v.denom)
    v = vn - vd
    res = res_tower.field.new(rn, ring.one) / res_tower.field.new(rd, ring.one)
    res = res / res_tower.field(alpha) ** v if v >= 0 else res * res_tower.field(alpha) ** (-v)
    return v, Scalar(res_tower, res)


def substitute(x, values):
    """Substitute variables by scalars of a common target tower.

    ``values`` maps variable names of x's tower to Scalars (all sharing one
    tower); remaining variables must exist in that target tower.
    """
    target = None
    for val in values.values():
        target = val.tower if target is None else target.join(val.tower)
    if target is None:
        return x
    result_parts = []
    for poly in (x.v.numer, x.v.denom):
        acc = target.zero()
        for monom, coeff in poly.terms():
            term = Scalar(target, target.field(target.domain.convert(coeff, x.tower.domain)))
            for name, e in zip(x.tower.vars, monom):
                if not e:
                    continue
                base = values[name].embed(target) if name in values else FieldTower(x.tower.base, (name,)).var(name).embed(target)
                term = term * base ** e
            acc = acc + term
        result_parts.append(acc)
    return result_parts[0] / result_parts[1]


# ------------------------------------------------------------ K = F(sqrt d)


class QuadraticExtension:
    """K = F(sqrt d) as pairs (f0, f1) meaning f0 + f1*sqrt(d)."""

    __slots__ = ("tower", "d")

    def __init__(self, tower, d):
        d = tower.scalar(d)
        if is_square(d):
            raise PreconditionError(f"{d} is a square; F(sqrt d) is not a field")
        self.tower = tower
        self.d = d

    def __eq__(self, other):
        return isinstance(other, QuadraticExtension) and self.tower == other.tower and self.d == other.d

    def __hash__(self):
        return hash((self.tower, str(self.d)))

    def __call__(self, f0, f1=0):
        return KElement(self, self.tower.scalar(f0), self.tower.scalar(f1))

    def sqrt_d(self):
        return self(0, 1)

    def zero(self):
        return self(0, 0)

    def one(self):
        return self(1, 0)

    def __repr__(self):
        return f"QuadraticExtension({self.tower}, d={self.d})"


class KElement:
    __slots__ = ("ext", "a", "b")

    def __init__(self, ext, a, b):
        self.ext = ext
        self.a = a
        self.b = b

    @property
    def tower(self):
        return self.ext.tower

    def _lift(self, other):
        if isinstance(other, KElement):
            if other.ext != self.ext:
                raise PreconditionError("mismatched quadratic extensions")
            return other
        if isinstance(other, (int, Fraction, Scalar)) and not isinstance(other, bool):
            return KElement(self.ext, self.ext.tower.scalar(other), self.ext.tower.zero())
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return KElement(self.ext, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return KElement(self.ext, self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        d = self.ext.d
        return KElement(self.ext, self.a * o.a + d * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def __neg__(self):
        return KElement(self.ext, -self.a, -self.b)

    def conj(self):
        """The nontrivial automorphism iota."""
        return KElement(self.ext, self.a, -self.b)

    def norm(self):
        return self.a * self.a - self.ext.d * self.b * self.b

    def inverse(self):
        n = self.norm()
        if n.is_zero():
            raise ZeroDivisionError("inverse of zero in K")
        return KElement(self.ext, self.a / n, -self.b / n)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        out = self.ext.one()
        for _ in range(n):
            out = out * self
        return out

    def is_zero(self):
        return self.a.is_zero() and self.b.is_zero()

    def in_base(self):
        return self.b.is_zero()

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((str(self.a), str(self.b)))

    def __bool__(self):
        return not self.is_zero()

    def __str__(self):
        if self.b.is_zero():
            return str(self.a)
        tail = f"({self.b})*sqrtd"
        return tail if self.a.is_zero() else f"{self.a} + {tail}"

    def __repr__(self):
        return f"KElement({self})"
