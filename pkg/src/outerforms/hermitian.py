"""Diagonal skew-hermitian and unitary hermitian forms over quaternion algebras.

Matrices are lists of rows of QuatElements.  For a form with diagonal Gram
matrix H and a matrix g, the similitude condition is g* H g = mu H where g*
is the transpose with the relevant involution applied entrywise (quaternion
conjugation, or theta = conjugation composed with iota in the unitary case).
"""

from dataclasses import dataclass, field
from typing import NamedTuple

from .errors import PreconditionError
from .fields import KElement, Scalar, is_square, square_class
from .quadforms.forms import QuadForm
from .quadforms.springer import represents
from .quaternion import QuatAlgebra, QuatElement, anticommuting_pure, is_division, matrix_image, pure_with_square

PROPER = "proper"
IMPROPER = "improper"
UNKNOWN = "unknown"

G_PLUS = "G+"
G_MINUS = "G-"
NEITHER = "neither"


class BlockError(PreconditionError):
    """A diagonal block admits no similitude of the requested kind."""

    def __init__(self, index, kind, certificate=None, verdict="no"):
        super().__init__(f"block {index}: no {kind} similitude with this multiplier ({verdict})")
        self.index = index
        self.kind = kind
        self.certificate = certificate
        self.verdict = verdict


class SkewHermForm:
    """<w_1 q_1, ..., w_n q_n> over (Q, conjugation), q_i pure, w_i optional weights."""

    def __init__(self, alg, entries, weights=None):
        entries = [alg.parse(e) if isinstance(e, str) else e for e in entries]
        for q in entries:
            if q.alg != alg:
                raise PreconditionError("entry from a different algebra")
            if not q.is_pure() or q.is_zero():
                raise PreconditionError(f"entry {q} is not a nonzero pure quaternion")
        if weights is not None:
            weights = list(weights)
            if len(weights) != len(entries):
                raise PreconditionError("one weight per entry")
            if len(set(weights)) != len(weights):
                raise PreconditionError("weights must be distinct variables")
            pos = [alg.tower.vars.index(w) for w in weights]
            if pos != sorted(pos):
                raise PreconditionError("weights must follow the tower order")
        self.alg = alg
        self.entries = entries
        self.weights = weights

    @property
    def rank(self):
        return len(self.entries)

    def squares(self):
        return [(q * q).scalar_part() for q in self.entries]

    def diagonal(self):
        if self.weights is None:
            return list(self.entries)
        return [q * self.alg.tower.var(w) for q, w in zip(self.entries, self.weights)]

    def gram(self):
        return diag(self.alg, self.diagonal())

    def strings(self):
        return [str(q) for q in self.entries]

    def __repr__(self):
        w = f", weights={self.weights}" if self.weights else ""
        return f"SkewHermForm({self.strings()}{w})"


class Discriminant(NamedTuple):
    value: Scalar
    square_class: object


def discriminant(h):
    """Square class of the product of the entry squares."""
    prod = h.alg.tower.one()
    for s in h.squares():
        prod = prod * s
    return Discriminant(prod, square_class(prod))


def diag(alg, entries):
    n = len(entries)
    return [[entries[i] if i == j else alg.zero() for j in range(n)] for i in range(n)]


def identity(alg, n):
    return diag(alg, [alg.one()] * n)


def mat_mul(x, y):
    n, m, p = len(x), len(y), len(y[0])
    out = []
    for i in range(n):
        row = []
        for j in range(p):
            acc = x[i][0] * y[0][j]
            for k in range(1, m):
                acc = acc + x[i][k] * y[k][j]
            row.append(acc)
        out.append(row)
    return out


def star(g, inv=lambda q: q.conj()):
    n = len(g)
    return [[inv(g[j][i]) for j in range(n)] for i in range(len(g[0]))]


def mat_scale(g, s):
    return [[x * s for x in row] for row in g]


def mat_eq(x, y):
    return all(a == b for ra, rb in zip(x, y) for a, b in zip(ra, rb))


def mat_map(g, fn):
    return [[fn(x) for x in row] for row in g]


def mat_strings(g):
    return [[str(x) for x in row] for row in g]


@dataclass
class SimilitudeMatrix:
    matrix: list
    mu: object
    kind: str = UNKNOWN
    blocks: list = field(default_factory=list)

    @property
    def alg(self):
        return self.matrix[0][0].alg

    def to_dict(self):
        return {"matrix": mat_strings(self.matrix), "mu": str(self.mu), "type": self.kind,
                "blocks": list(self.blocks)}


# --------------------------------------------------------------- multipliers


def multiplier_class(a, mu, Q):
    """G+ if (a, mu) splits, G- if (a, mu) is isomorphic to Q."""
    tower = Q.tower
    a, mu = tower.scalar(a) if not isinstance(a, Scalar) else a, tower.scalar(mu) if not isinstance(mu, Scalar) else mu
    d = is_division(QuatAlgebra(a, mu, tower))
    if d.verdict == "split":
        return G_PLUS
    p = pure_with_square(Q, a)
    if p.verdict != "yes":
        raise PreconditionError(f"{a} is not the square of a pure quaternion of Q")
    u = anticommuting_pure(p.value)
    # Q = (a, u^2), so (a, mu) = Q iff (a, mu u^2) splits
    u2 = (u * u).scalar_part()
    e = is_division(QuatAlgebra(a, mu * u2, tower))
    if e.verdict == "split":
        return G_MINUS
    if d.verdict == "division" and e.verdict == "division":
        return NEITHER
    return UNKNOWN


def _norm_solution(a, c, budget=None):
    """(x, y) with x^2 - a y^2 = c, or raise via the caller on failure."""
    tower = a.tower
    if c.is_zero():
        return None, None
    d = represents(QuadForm([tower.one(), -a], tower), c, budget=budget)
    return d, (d.value if d.verdict == "yes" else None)


def block_similitude(q, mu, kind, budget=None, index=0):
    """Similitude g of <q> with multiplier mu (conj(g) q g = mu q)."""
    alg = q.alg
    mu = alg.tower.scalar(mu) if not isinstance(mu, Scalar) else mu
    a = (q * q).scalar_part()
    if kind == PROPER:
        d, sol = _norm_solution(a, mu, budget)
        if sol is None:
            raise BlockError(index, kind, d.certificate, d.verdict)
        x, y = sol
        return q * y + x
    if kind == IMPROPER:
        u1 = anticommuting_pure(q)
        s = (u1 * u1).scalar_part()
        if s.is_zero():
            raise BlockError(index, kind, None, "unknown")
        d, sol = _norm_solution(a, mu / s, budget)
        if sol is None:
            raise BlockError(index, kind, d.certificate, d.verdict)
        x, y = sol
        return u1 * x + (q * u1) * y
    raise PreconditionError(f"unknown block kind {kind!r}")


def build_diagonal_similitude(h, mu, pattern, budget=None):
    if len(pattern) != h.rank:
        raise PreconditionError("pattern length must equal the rank")
    alg = h.alg
    mu = alg.tower.scalar(mu) if not isinstance(mu, Scalar) else mu
    gs = [block_similitude(q, mu, k, budget, i) for i, (q, k) in enumerate(zip(h.entries, pattern))]
    g = diag(alg, gs)
    odd = sum(1 for k in pattern if k == IMPROPER) % 2
    sim = SimilitudeMatrix(g, mu, IMPROPER if odd else PROPER, list(pattern))
    ok, kind = verify_similitude(h, g, mu)
    if not ok or kind != sim.kind:
        raise AssertionError("constructed similitude failed verification")
    return sim


# -------------------------------------------------------------- verification


def _det(m):
    """Determinant by Gaussian elimination over a field (Scalars or KElements)."""
    m = [list(r) for r in m]
    n = len(m)
    det = None
    sign = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if not m[r][c].is_zero()), None)
        if piv is None:
            return m[0][0] * 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            sign = -sign
        p = m[c][c]
        det = p if det is None else det * p
        inv = 1 / p
        for r in range(c + 1, n):
            if m[r][c].is_zero():
                continue
            f = m[r][c] * inv
            m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return det if sign == 1 else -det


def reduced_norm(g):
    """Nrd of a matrix over (a, b)_F, via its image over F(sqrt a)."""
    n = len(g)
    big = [[None] * (2 * n) for _ in range(2 * n)]
    for i in range(n):
        for j in range(n):
            blk = matrix_image(g[i][j])
            for r in range(2):
                for c in range(2):
                    big[2 * i + r][2 * j + c] = blk[r][c]
    det = _det(big)
    if isinstance(det, KElement):
        if not det.in_base():
            raise AssertionError("reduced norm left the base field")
        return det.a
    return det


def verify_similitude(h, g, mu):
    """(valid, proper|improper|unknown) for g against the diagonal form h."""
    H = h.gram() if isinstance(h, SkewHermForm) else h
    n = len(H)
    if len(g) != n or any(len(r) != n for r in g):
        raise PreconditionError("dimension mismatch")
    alg = g[0][0].alg
    mu = alg.tower.scalar(mu) if not isinstance(mu, Scalar) else mu
    lhs = mat_mul(mat_mul(star(g), H), g)
    if not mat_eq(lhs, mat_scale(H, mu)):
        return False, UNKNOWN
    nrd = reduced_norm(g)
    pw = mu ** n
    if nrd == pw:
        return True, PROPER
    if nrd == -pw:
        return True, IMPROPER
    return True, UNKNOWN


# ------------------------------------------------------------------ unitary


class UnitaryHermForm:
    """Hermitian form over (Q0 (x) K, theta) with K = F(sqrt d).

    Either explicit theta-symmetric ``entries``, or the weighted shape
    h1 + <sign * sqrt d> h2 with F-scalar h1 and pure h2 (from Q0).
    """

    def __init__(self, alg, entries=None, h1=None, h2=None, sign=1):
        if alg.ext is None:
            raise PreconditionError("unitary forms need an algebra over K = F(sqrt d)")
        self.alg = alg
        self.weighted = entries is None
        if self.weighted:
            self.h1 = [alg.tower.scalar(x) if not isinstance(x, Scalar) else x for x in (h1 or [])]
            base = alg.base_algebra()
            self.h2 = [base.parse(p) if isinstance(p, str) else p for p in (h2 or [])]
            for p in self.h2:
                if not p.is_pure() or p.is_zero():
                    raise PreconditionError("skew part entries must be nonzero pure quaternions")
            self.sign = sign
            entries = [alg.element(x) for x in self.h1]
            t = alg.sqrt_d() * sign
            entries += [t * lift(p, alg) for p in self.h2]
        else:
            entries = [alg.parse(e) if isinstance(e, str) else e for e in entries]
            self.h1 = self.h2 = None
            self.sign = None
        for e in entries:
            if e.is_zero() or not (e.theta() == e):
                raise PreconditionError(f"entry {e} is not theta-symmetric and nonzero")
        self.entries = entries

    @property
    def rank(self):
        return len(self.entries)

    def gram(self):
        return diag(self.alg, self.entries)

    def conjugate_gram(self):
        return mat_map(self.gram(), lambda x: x.iota())

    def strings(self):
        return [str(e) for e in self.entries]


def lift(p, alg):
    """Embed an element of Q0 into Q0 (x) K."""
    return alg.element(*p.c)


def conjugate_unitary_form(h):
    if not h.weighted:
        raise PreconditionError("conjugation needs the weighted shape")
    return UnitaryHermForm(h.alg, h1=h.h1, h2=h.h2, sign=-h.sign)


class UnitaryCheck(NamedTuple):
    valid: bool
    order2: bool
    lam: object = None
    lam_is_pm_mu: object = None


def unitary_similitude_check(h, g, mu):
    """Is g a similitude h -> h^iota with multiplier mu, and is g g^iota central in F?"""
    H = h.gram()
    n = len(H)
    if len(g) != n or any(len(r) != n for r in g):
        raise PreconditionError("dimension mismatch")
    alg = h.alg
    mu = alg.coef(mu)
    Hi = h.conjugate_gram()
    lhs = mat_mul(mat_mul(star(g, lambda q: q.theta()), Hi), g)
    valid = mat_eq(lhs, mat_scale(H, mu))
    gg = mat_mul(g, mat_map(g, lambda q: q.iota()))
    lam = gg[0][0]
    order2 = (lam.is_central() and lam.scalar_part().in_base() and not lam.is_zero()
              and mat_eq(gg, mat_scale(identity(alg, n), lam.scalar_part())))
    if not order2:
        return UnitaryCheck(valid, False)
    lam_s = lam.scalar_part()
    pm = lam_s == mu or lam_s == -mu
    if valid and not pm:
        raise AssertionError("order-2 similitude with lambda != +-mu")
    return UnitaryCheck(valid, True, lam_s, pm)
