"""Springer residue chains, anisotropy certification and representation.

A form over k(t) embeds into k((t)); there ``q = q1 + t*q2`` with unit
entries, and q is anisotropic iff both residue forms are.  Recursing through
the tower gives a sound (but incomplete) anisotropy test whose leaves are
exact base-case decisions.
"""

from typing import NamedTuple

from ..errors import PreconditionError
from ..fields import RATIONALS, FieldTower, Scalar, is_square, sqrt, tame_residue
from .certificates import RESIDUE_CHAIN, Certificate, witness_certificate
from .forms import QuadForm
from .local import check_place, local_isotropic
from .rational import anisotropic_place, is_isotropic_Q, rational_witness
from .witness import find_isotropic_vector

ANISOTROPIC = "anisotropic"
ISOTROPIC = "isotropic"
UNKNOWN = "unknown"
YES = "yes"
NO = "no"


class Decision(NamedTuple):
    verdict: str
    certificate: object
    value: object = None


def springer_split(q, var=None):
    """Residue forms (q1, q2) of q at the ``var``-adic valuation.

    ``var`` defaults to the last tower variable.  Both results live over the
    tower with ``var`` removed.
    """
    tower = q.tower
    if var is None:
        if not tower.vars:
            raise PreconditionError("tower has no variables")
        var = tower.vars[-1]
    if var not in tower.vars:
        raise PreconditionError(f"{var!r} is not a tower variable")
    res = tower.without(var)
    even, odd = [], []
    for e in q.entries:
        v, r = tame_residue(e, var)
        (even if v % 2 == 0 else odd).append(r)
    return QuadForm(even, res), QuadForm(odd, res)


def _restrict(q):
    """Drop tower variables that no entry uses."""
    used = set()
    for e in q.entries:
        used.update(e.variables())
    keep = tuple(v for v in q.tower.vars if v in used)
    if keep == q.tower.vars:
        return q
    tower = FieldTower(q.tower.base, keep)
    return QuadForm([_project(e, tower) for e in q.entries], tower)


def _project(x, tower):
    ring = tower.ring
    src = x.tower.vars
    pos = [src.index(v) for v in tower.vars]

    def move(p):
        return ring.from_dict({tuple(m[i] for i in pos): c for m, c in p.terms()})

    return Scalar(tower, tower.field.new(move(x.v.numer), move(x.v.denom)))


def _leaf(q):
    """Exact base-case anisotropy evidence for q, or None."""
    n = q.dim
    if n == 0:
        return {"reason": "empty"}
    if n == 1:
        return {"reason": "dim1"}
    if n == 2 and not is_square(-q.entries[0] * q.entries[1]):
        return {"reason": "binary-nonsquare"}
    if not q.tower.vars and q.is_rational():
        place = anisotropic_place(q.rationals())
        if place is not None:
            return {"reason": "local", "place": str(place)}
    return None


def _chain(q, path, out, memo, depth=0):
    q = _restrict(q)
    key = (q.tower, tuple(q.strings()))
    if key in memo and memo[key] is None:
        return False
    leaf = _leaf(q)
    if leaf is not None:
        out.append({"path": path, "tower": str(q.tower), "form": q.strings(), "var": None, "base": leaf})
        return True
    if not q.tower.vars or depth > 12:
        memo[key] = None
        return False
    for var in reversed(q.tower.vars):
        q1, q2 = springer_split(q, var)
        trial = []
        if _chain(q1, path + ".0", trial, memo, depth + 1) and _chain(q2, path + ".1", trial, memo, depth + 1):
            out.append({"path": path, "tower": str(q.tower), "form": q.strings(), "var": var, "base": None})
            out.extend(trial)
            return True
    memo[key] = None
    return False


def residue_chain(q):
    """ResidueChain certificate for the anisotropy of q, or None."""
    steps = []
    if not _chain(q, "r", steps, {}):
        return None
    return Certificate(RESIDUE_CHAIN, str(q.tower), q.strings(), steps=steps)


def certify_anisotropic(q, budget=None):
    """Three-valued anisotropy verdict with certificate."""
    cert = residue_chain(q)
    if cert is not None:
        return Decision(ANISOTROPIC, cert)
    if not q.tower.vars and q.is_rational():
        iso, c = is_isotropic_Q(q)
        vec = c.witness_scalars()
        return Decision(ISOTROPIC, witness_certificate(q, vec), vec)
    vec = find_isotropic_vector(q, budget=budget)
    if vec is not None:
        return Decision(ISOTROPIC, witness_certificate(q, vec), vec)
    return Decision(UNKNOWN, None)


def verify_chain(cert):
    from ..fields import parse_tower

    nodes = {s["path"]: s for s in cert.steps}
    if "r" not in nodes:
        return False
    root = nodes["r"]
    try:
        start = QuadForm.from_strings(cert.form, parse_tower(cert.tower))
    except Exception:
        return False
    if _restrict(start).strings() != root["form"] or str(_restrict(start).tower) != root["tower"]:
        return False

    def check(path):
        node = nodes.get(path)
        if node is None:
            return False
        tower = parse_tower(node["tower"])
        q = QuadForm.from_strings(node["form"], tower)
        if node["var"] is None:
            return _check_leaf(q, node["base"])
        q1, q2 = springer_split(q, node["var"])
        for child, expect in ((path + ".0", q1), (path + ".1", q2)):
            c = nodes.get(child)
            e = _restrict(expect)
            if c is None or c["form"] != e.strings() or c["tower"] != str(e.tower):
                return False
            if not check(child):
                return False
        return True

    try:
        return check("r")
    except Exception:
        return False


def _check_leaf(q, base):
    reason = base.get("reason")
    if reason == "empty":
        return q.dim == 0
    if reason == "dim1":
        return q.dim == 1
    if reason == "binary-nonsquare":
        return q.dim == 2 and not is_square(-q.entries[0] * q.entries[1])
    if reason == "local":
        if q.tower.vars or not q.is_rational():
            return False
        return not local_isotropic(q.rationals(), check_place(base["place"]))
    return False


# ---------------------------------------------------------------- represents


def _universal(q, u, c):
    """Given isotropic u of q, a vector x with q(x) = c."""
    tower = q.tower
    i = next(k for k, x in enumerate(u) if not x.is_zero())
    v = [tower.zero()] * q.dim
    v[i] = tower.one()
    b = q.polar(u, v)
    alpha = (c - q.evaluate(v)) / (2 * b)
    return [alpha * x + y for x, y in zip(u, v)]


def _from_isotropic(q, c, vec):
    w = vec[-1]
    if not w.is_zero():
        return [x / w for x in vec[:-1]]
    return _universal(q, vec[:-1], c)


def _norm_trick(q, c, budget):
    """Binary <alpha, beta> representing c via the 2-fold Pfister norm form."""
    alpha, beta = q.entries
    a = -beta / alpha
    mu = c / alpha
    norm = QuadForm([1, -a, -mu, a * mu], q.tower)
    vec = find_isotropic_vector(norm, budget=budget)
    if vec is None:
        return None
    x0, x1, x2, x3 = vec
    den = x2 * x2 - a * x3 * x3
    if den.is_zero():
        return None
    # (x0 + x1 r) / (x2 + x3 r) with r^2 = a
    x = (x0 * x2 - a * x1 * x3) / den
    y = (x1 * x2 - x0 * x3) / den
    return [x, y]


def represents(q, c, budget=None):
    """Does q represent c?  Returns Decision(yes|no|unknown, cert, vector)."""
    tower = q.tower.join(c.tower) if isinstance(c, Scalar) else q.tower
    q = q.embed(tower)
    c = tower.scalar(c)
    if c.is_zero():
        raise PreconditionError("represented value must be nonzero")
    from .generic import generic_refutation_for

    refuted = generic_refutation_for(q, c)
    if refuted is not None:
        return Decision(NO, refuted)
    full = q + QuadForm([-c], tower)
    if tower.vars and tower.base == RATIONALS and all(e.is_rational_constant() for e in full.entries):
        # constant coefficients: decide over Q.  A form anisotropic over Q stays
        # anisotropic over a purely transcendental extension.
        base = FieldTower()
        d = represents(QuadForm([e.as_fraction() for e in q.entries], base),
                       base.scalar(c.as_fraction()), budget)
        if d.verdict != YES:
            return d
        x = [tower.scalar(v.as_fraction()) for v in d.value]
        return Decision(YES, witness_certificate(full, x + [tower.one()]), x)
    rational = not tower.vars and full.is_rational()
    if rational:
        place = anisotropic_place(full.rationals())
        if place is not None:
            _, cert = is_isotropic_Q(full)
            return Decision(NO, cert)
    else:
        chain = residue_chain(full)
        if chain is not None:
            return Decision(NO, chain)
    vec = find_isotropic_vector(full, fixed=full.dim - 1, budget=budget)
    if vec is not None:
        x = vec[:-1]
        return Decision(YES, witness_certificate(full, x + [tower.one()]), x)
    if q.dim == 2:
        x = _norm_trick(q, c, budget)
        if x is not None and q.evaluate(x) == c:
            return Decision(YES, witness_certificate(full, x + [tower.one()]), x)
    if rational:
        iso = [tower.scalar(v) for v in rational_witness(full.rationals())]
        x = _from_isotropic(q, c, iso)
    else:
        iso = find_isotropic_vector(full, budget=budget)
        if iso is None:
            return Decision(UNKNOWN, None)
        x = _from_isotropic(q, c, iso)
    if q.evaluate(x) != c:
        return Decision(UNKNOWN, None)
    return Decision(YES, witness_certificate(full, x + [tower.one()]), x)
