"""Descent of unitary involutions over quaternion algebras of index <= 2.

Q^ = Q0 (x) K with K = F(sqrt d), theta = conj o iota.  For a hermitian
form h = <h_1, ..., h_n> over (Q^, theta) of rank <= 3 we find q with
theta(q) = -q such that iota' = Int(q) o iota fixes every q h_i; then
h' = <q h_1, ..., q h_n> lives over the iota'-fixed quaternion algebra Q0'.
"""

from dataclasses import dataclass, field
import json

from .errors import InternalConsistencyError, PreconditionError
from .fields import KElement, QuadraticExtension, Scalar
from .hermitian import (
    UnitaryHermForm,
    diag,
    identity,
    mat_eq,
    mat_map,
    mat_mul,
    mat_scale,
    mat_strings,
    star,
    unitary_similitude_check,
)
from .quadforms.forms import QuadForm
from .quaternion import QuatAlgebra, QuatElement


class UnitaryDescentDatum:
    def __init__(self, Q0, d):
        if Q0.ext is not None:
            raise PreconditionError("Q0 must be defined over the base field")
        self.Q0 = Q0
        self.tower = Q0.tower
        self.ext = d if isinstance(d, QuadraticExtension) else QuadraticExtension(Q0.tower, d)
        self.d = self.ext.d
        self.alg = Q0.over(self.ext)

    def k_basis(self):
        return self.alg.basis()

    def f_basis(self):
        """F-basis of Q^: e_k and sqrt(d) e_k."""
        s = self.alg.sqrt_d()
        return self.alg.basis() + [s * e for e in self.alg.basis()]

    def symmetric_basis(self):
        """F-basis of the theta-symmetric part: 1 and sqrt(d) * (i, j, k)."""
        s = self.alg.sqrt_d()
        b = self.alg.basis()
        return [b[0]] + [s * e for e in b[1:]]

    def check(self):
        sym = all(x.theta() == x for x in self.symmetric_basis())
        s = self.alg.sqrt_d()
        b = self.alg.basis()
        anti = [s] + b[1:]
        return sym and all(x.theta() == -x for x in anti)


# ------------------------------------------------------------ linear algebra


def _k(ext, x):
    return x if isinstance(x, KElement) else ext(x)


def nullspace(rows, ncols, ext):
    """K-basis of the kernel of a matrix over K (rows of KElements)."""
    m = [[_k(ext, x) for x in r] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if not m[i][c].is_zero()), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and not m[i][c].is_zero():
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [ext.zero() for _ in range(ncols)]
        v[fc] = ext.one()
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][fc]
        basis.append(v)
    return basis


def k_rank(elements, ext):
    """Dimension over K of the span of quaternions."""
    rows = [[_k(ext, x) for x in e.c] for e in elements]
    if not rows:
        return 0
    # rank = 4 - dim(kernel of the transpose)
    cols = [[rows[i][j] for i in range(len(rows))] for j in range(4)]
    return len(rows) - len(nullspace(cols, len(rows), ext))


def theta_perp(entries, datum):
    """K-basis of {s : s conj(q_i) + q_i conj(s) = 0 for all i}."""
    alg = datum.alg
    basis = alg.basis()
    rows = []
    for q in entries:
        images = [(e * q.conj() + q * e.conj()).c for e in basis]
        for comp in range(4):
            rows.append([images[k][comp] for k in range(4)])
    if not rows:
        return basis
    return [alg.element(*v) for v in nullspace(rows, 4, datum.ext)]


# ------------------------------------------------------------------ descend


@dataclass
class DescentResult:
    q: QuatElement
    h_prime: list
    q0_basis: list
    checks: dict = field(default_factory=dict)

    def iota_prime(self, x):
        qi = self.__dict__.get("_qinv")
        if qi is None:
            qi = self.__dict__["_qinv"] = self.q.inverse()
        return self.q * x.iota() * qi

    def to_dict(self):
        return {
            "q": str(self.q),
            "hPrime": [str(x) for x in self.h_prime],
            "Q0primeBasis": [str(x) for x in self.q0_basis],
            "checks": dict(sorted(self.checks.items())),
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @property
    def ok(self):
        return all(self.checks.values())


def _f_independent(vectors, tower):
    """Greedy F-independent subset of quaternions over K (8 F-coordinates each)."""
    chosen, rows = [], []
    for v in vectors:
        coords = []
        for x in v.c:
            coords += [x.a, x.b]
        trial = rows + [coords]
        if _f_rank(trial) == len(trial):
            rows = trial
            chosen.append(v)
    return chosen


def _f_rank(rows):
    m = [list(r) for r in rows]
    rank, ncols = 0, len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(m)) if not m[i][c].is_zero()), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(rank + 1, len(m)):
            if not m[i][c].is_zero():
                f = m[i][c] / m[rank][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[rank])]
        rank += 1
    return rank


def descend(h, datum):
    """DescentResult for a hermitian form over (Q0 (x) K, theta) of K-span <= 3."""
    entries = h.entries if isinstance(h, UnitaryHermForm) else list(h)
    if k_rank(entries, datum.ext) > 3:
        raise PreconditionError("entries span more than 3 dimensions over K")
    perp = theta_perp(entries, datum)
    if not perp:
        raise InternalConsistencyError("orthogonal complement is zero")
    s = next((x for x in perp if not (x.theta() == x)), None)
    if s is None:
        # theta is iota-semilinear, so sqrt(d) * s is never theta-fixed
        s = datum.alg.sqrt_d() * perp[0]
        if s.theta() == s:
            raise InternalConsistencyError("every element of the complement is theta-fixed")
    q = (s - s.theta()).inverse()
    hp = [q * e for e in entries]
    res = DescentResult(q, hp, [])
    qinv = q.inverse()
    iop = res.iota_prime
    lam = q * q.iota()
    res.checks["theta_q_antisymmetric"] = q.theta() == -q
    res.checks["iota_prime_fixes_entries"] = all(iop(x) == x for x in hp)
    res.checks["q_iota_q_in_F"] = lam.is_central() and lam.scalar_part().in_base() and not lam.is_zero()
    res.checks["iota_prime_order_two"] = all(iop(iop(x)) == x for x in datum.f_basis())
    res.checks["iota_prime_commutes_with_conj"] = all(iop(x.conj()) == iop(x).conj() for x in datum.f_basis())
    res.q0_basis = _f_independent([x + iop(x) for x in datum.f_basis()], datum.tower)
    res.checks["q0prime_dimension_four"] = len(res.q0_basis) == 4
    res.checks["q0prime_fixed"] = all(iop(x) == x for x in res.q0_basis)
    res.checks["hprime_skew"] = all(x.conj() == -x for x in hp)
    res.checks["round_trip"] = round_trip(entries, res, datum)
    if not res.ok:
        raise InternalConsistencyError(f"descent checks failed: {res.checks}")
    return res


def ad(H, f, inv):
    """Adjoint involution H^-1 inv(f)^T H for a diagonal H."""
    n = len(H)
    return [[H[i][i].inverse() * inv(f[j][i]) * H[j][j] for j in range(n)] for i in range(n)]


def round_trip(entries, res, datum):
    """ad_h equals ad_{h'} (x) iota' on units E_ij times {Q0' basis} times {1, sqrt d}.

    Both sides send x E_ij to a multiple of E_ji: h_j^-1 theta(x) h_i on the
    left and h'_j^-1 conj(b) iota(l) h'_i on the right, with h'_i = q h_i and
    x = b l.  Cancelling h_j^-1 and h_i leaves theta(x) = q^-1 conj(b) iota(l) q
    for every (i, j), so the eight basis identities cover the whole spanning set.
    """
    if not entries:
        return True
    alg = datum.alg
    q = res.q
    qinv = q.inverse()
    for b in res.q0_basis:
        for lam in (alg.one(), alg.sqrt_d()):
            lhs = (b * lam).theta()
            rhs = qinv * (b.conj() * lam.iota()) * q
            if not (lhs == rhs):
                return False
    return True


# ----------------------------------------------------------- split descent


@dataclass
class SplitDescent:
    form: QuadForm
    change: list
    verified: bool


def split_unitary_descent(H, ext):
    """Diagonalize a hermitian Gram matrix over (K, iota); entries end up in F."""
    n = len(H)
    H = [[_k(ext, x) for x in row] for row in H]
    for i in range(n):
        for j in range(n):
            if not (H[i][j] == H[j][i].conj()):
                raise PreconditionError("matrix is not hermitian")
    P = [[ext.one() if i == j else ext.zero() for j in range(n)] for i in range(n)]
    A = [list(r) for r in H]

    def col_op(M, dst, src, c):
        # column dst += c * column src
        for r in range(n):
            M[r][dst] = M[r][dst] + M[r][src] * c

    def congruence(M, dst, src, c):
        col_op(M, dst, src, c)
        cc = c.conj()
        for k in range(n):
            M[dst][k] = M[dst][k] + cc * M[src][k]

    def swap(M, i, j):
        M[i], M[j] = M[j], M[i]
        for r in M:
            r[i], r[j] = r[j], r[i]

    for k in range(n):
        if A[k][k].is_zero():
            j = next((j for j in range(k + 1, n) if not A[j][j].is_zero()), None)
            if j is not None:
                swap(A, k, j)
                for r in P:
                    r[k], r[j] = r[j], r[k]
            else:
                j = next((j for j in range(k + 1, n) if not A[k][j].is_zero()), None)
                if j is None:
                    raise PreconditionError("degenerate hermitian form")
                for c in (ext.one(), ext.sqrt_d()):
                    val = A[k][k] + A[k][j] * c + c.conj() * A[j][k] + c.conj() * A[j][j] * c
                    if not val.is_zero():
                        congruence(A, k, j, c)
                        col_op(P, k, j, c)
                        break
        piv = A[k][k]
        for j in range(k + 1, n):
            if not A[k][j].is_zero():
                c = -(A[k][j] / piv)
                congruence(A, j, k, c)
                col_op(P, j, k, c)
    diag_entries = [A[k][k] for k in range(n)]
    if any(not x.in_base() or x.is_zero() for x in diag_entries):
        raise InternalConsistencyError("diagonal entries not in F")
    # re-verify P* H P = diag
    PH = [[sum((P[r][i].conj() * H[r][c] for r in range(n)), ext.zero()) for c in range(n)] for i in range(n)]
    D = [[sum((PH[i][r] * P[r][j] for r in range(n)), ext.zero()) for j in range(n)] for i in range(n)]
    ok = all((D[i][j] == (diag_entries[i] if i == j else ext.zero())) for i in range(n) for j in range(n))
    form = QuadForm([x.a for x in diag_entries], ext.tower)
    return SplitDescent(form, P, ok)


# -------------------------------------------------- semilinear automorphisms


@dataclass
class SemilinearAutomorphism:
    h: UnitaryHermForm
    g: list
    mu: object
    g_inv: list
    order2: bool
    lam: object = None
    witness: object = None

    def apply(self, f):
        """phi(f) = (g f g^-1)^iota."""
        return mat_map(mat_mul(mat_mul(self.g, f), self.g_inv), lambda x: x.iota())


def spanning_set(alg, n):
    scal = [alg.one(), alg.sqrt_d()]
    out = []
    for i in range(n):
        for j in range(n):
            for e in alg.basis():
                for s in scal:
                    f = [[alg.zero()] * n for _ in range(n)]
                    f[i][j] = e * s
                    out.append(f)
    return out


def build_semilinear_automorphism(h, g, mu):
    """The iota-semilinear automorphism attached to a similitude g: h -> h^iota."""
    chk = unitary_similitude_check(h, g, mu)
    if not chk.valid:
        raise PreconditionError("g is not a similitude h -> h^iota")
    alg = h.alg
    mu_k = alg.coef(mu)
    H = h.gram()
    Hi = h.conjugate_gram()
    Hinv = diag(alg, [x.inverse() for x in h.entries])
    g_inv = mat_scale(mat_mul(mat_mul(Hinv, star(g, lambda x: x.theta())), Hi), 1 / mu_k)
    if not mat_eq(mat_mul(g_inv, g), identity(alg, h.rank)):
        raise InternalConsistencyError("similitude inverse check failed")
    phi = SemilinearAutomorphism(h, g, mu, g_inv, chk.order2, chk.lam)
    n = h.rank
    if _is_diagonal(g):
        _check_diagonal(phi, h)
        return phi
    tau = lambda f: ad(H, f, lambda x: x.theta())
    for f in spanning_set(alg, n):
        if not mat_eq(phi.apply(tau(f)), tau(phi.apply(f))):
            raise InternalConsistencyError("phi does not commute with the adjoint involution")
        if phi.order2 and not mat_eq(phi.apply(phi.apply(f)), f):
            raise InternalConsistencyError("phi^2 is not the identity")
    if not phi.order2:
        phi.witness = next((f for f in spanning_set(alg, n) if not mat_eq(phi.apply(phi.apply(f)), f)), None)
    return phi


def _is_diagonal(g):
    return all(g[i][j].is_zero() for i in range(len(g)) for j in range(len(g)) if i != j)


def _check_diagonal(phi, h):
    """Spanning-set checks entry by entry; every unit x E_ij stays a single entry.

    Both phi and tau are additive and send sqrt(d) x to -sqrt(d) times the
    image of x, so the quaternion basis alone (without sqrt(d) multiples)
    covers the spanning set.
    """
    alg = h.alg
    n = h.rank
    one = alg.one()
    H = h.entries
    Hinv = [x.inverse() for x in H]
    g = [phi.g[i][i] for i in range(n)]
    gi = [phi.g_inv[i][i] for i in range(n)]
    trivial = [g[i] == one for i in range(n)]

    def conj_by(i, x, j):
        # g_i x g_j^-1
        if not trivial[i]:
            x = g[i] * x
        if not trivial[j]:
            x = x * gi[j]
        return x

    for i in range(n):
        for j in range(n):
            for x in alg.basis():
                # phi(x E_ij) = iota(g_i x g_j^-1) E_ij ; tau(x E_ij) = H_j^-1 theta(x) H_i E_ji
                px = conj_by(i, x, j).iota()
                lhs = conj_by(j, Hinv[j] * x.theta() * H[i], i).iota()
                rhs = Hinv[j] * px.theta() * H[i]
                if not (lhs == rhs):
                    raise InternalConsistencyError("phi does not commute with the adjoint involution")
                twice = conj_by(i, px, j).iota()
                if phi.order2 and not (twice == x):
                    raise InternalConsistencyError("phi^2 is not the identity")
                if not phi.order2 and phi.witness is None and not (twice == x):
                    f = [[alg.zero()] * n for _ in range(n)]
                    f[i][j] = x
                    phi.witness = f


def descent_similitude(h, res):
    """Similitude h -> h^iota whose automorphism is iota' applied entrywise.

    g = iota(q) * Id; its multiplier is read off the first diagonal entry.
    """
    alg = h.alg
    n = h.rank
    gq = res.q.iota()
    g = [[gq if i == j else alg.zero() for j in range(n)] for i in range(n)]
    e = h.entries[0]
    m = gq.theta() * e.iota() * gq * e.inverse()
    if not m.is_central():
        raise InternalConsistencyError("descent similitude multiplier is not central")
    mu = m.scalar_part()
    if not mu.in_base():
        raise InternalConsistencyError("descent similitude multiplier is not in F")
    return g, mu.a
