"""Generic orthogonal sums: valuation bookkeeping and the outer-automorphism decisions.

The skew-hermitian form <t_1 q_1, ..., t_n q_n> over iterated Laurent series
F((t_1))...((t_n)) is handled through its residues.  Values live in
(1/2)Z^n ordered from the right (t_n most significant) and are stored doubled.

Out1, Out2 and Out3 are reported as holds / fails / unknown.  A verdict that
rests on a claim this engine cannot certify carries the status
``paper-asserted`` instead of ``verified``.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
import json
import os

from .errors import InternalConsistencyError, PreconditionError
from .fields import RATIONALS, FieldTower, Scalar, is_square, parse_scalar, parse_tower, tame_residue
from .hermitian import (
    IMPROPER,
    PROPER,
    BlockError,
    SimilitudeMatrix,
    SkewHermForm,
    UnitaryHermForm,
    build_diagonal_similitude,
    identity,
    mat_eq,
    mat_mul,
    mat_scale,
    unitary_similitude_check,
    verify_similitude,
)
from .quadforms.forms import QuadForm
from .quadforms.springer import _project, represents, residue_chain
from .quadforms.symbols import EMPTY, EQUAL, SPLIT, WITNESS, solve_prescribed_symbols
from .quaternion import QuatAlgebra, is_division, pure_with_square, splits_over

HOLDS = "holds"
FAILS = "fails"
UNKNOWN = "unknown"

VERIFIED = "verified"
ASSERTED = "paper-asserted"

# pattern verdicts
P_WITNESS = "witness"
P_EMPTY = "empty"
P_UNKNOWN = "unknown"
P_ASSERTED = "paper-asserted"
P_SKIPPED = "skipped"

# search budget per candidate inside a sign pattern; a miss only means "try the next one"
PATTERN_BUDGET = int(os.environ.get("OUTERFORMS_PATTERN_BUDGET", "20000"))


# ------------------------------------------------------------- value vectors


class ValueVector:
    """Element of (1/2)Z^n, stored doubled; compared from the right."""

    __slots__ = ("c",)

    def __init__(self, doubled):
        self.c = tuple(int(x) for x in doubled)

    @classmethod
    def from_halves(cls, values):
        out = []
        for v in values:
            v = Fraction(v) * 2
            if v.denominator != 1:
                raise PreconditionError("components must be half-integers")
            out.append(v.numerator)
        return cls(out)

    @classmethod
    def zero(cls, n):
        return cls([0] * n)

    @classmethod
    def unit(cls, n, i, doubled=2):
        v = [0] * n
        v[i] = doubled
        return cls(v)

    def halves(self):
        return tuple(Fraction(x, 2) for x in self.c)

    def __len__(self):
        return len(self.c)

    def __add__(self, other):
        if len(other) != len(self):
            raise PreconditionError("value vectors of different lengths")
        return ValueVector([x + y for x, y in zip(self.c, other.c)])

    def __eq__(self, other):
        return isinstance(other, ValueVector) and self.c == other.c

    def __hash__(self):
        return hash(self.c)

    def __lt__(self, other):
        return lex_compare(self, other) < 0

    def __le__(self, other):
        return lex_compare(self, other) <= 0

    def __gt__(self, other):
        return lex_compare(self, other) > 0

    def __ge__(self, other):
        return lex_compare(self, other) >= 0

    def __repr__(self):
        return "ValueVector(" + ", ".join(str(h) for h in self.halves()) + ")"


def lex_compare(u, v):
    """-1, 0 or 1; the last component is the most significant."""
    if len(u) != len(v):
        raise PreconditionError("value vectors of different lengths")
    for x, y in zip(reversed(u.c), reversed(v.c)):
        if x != y:
            return -1 if x < y else 1
    return 0


def valuation_vector(x, weights):
    """Iterated t-adic valuation of a nonzero scalar, t_n first."""
    if x.is_zero():
        raise PreconditionError("zero has no valuation")
    vals = [0] * len(weights)
    for k in range(len(weights) - 1, -1, -1):
        vals[k], x = tame_residue(x, weights[k])
    return vals


# ------------------------------------------------------------ formal vectors


class FormalVector:
    """Finite sum of c * e_i * t^alpha with c a constant quaternion."""

    def __init__(self, h, terms=None):
        if h.weights is None:
            raise PreconditionError("formal vectors need a form with generic weights")
        self.h = h
        self.terms = {}
        for (i, alpha), c in (terms or {}).items():
            alpha = tuple(int(a) for a in alpha)
            if not 0 <= i < h.rank or len(alpha) != h.rank or min(alpha, default=0) < 0:
                raise PreconditionError("bad term index")
            if not c.is_zero():
                self.terms[(i, alpha)] = c

    @classmethod
    def basis(cls, h, i, alpha=None):
        alpha = alpha or (0,) * h.rank
        return cls(h, {(i, alpha): h.alg.one()})

    def __add__(self, other):
        terms = dict(self.terms)
        for key, c in other.terms.items():
            terms[key] = terms[key] + c if key in terms else c
        return FormalVector(self.h, terms)

    def is_zero(self):
        return not self.terms

    def component(self, i):
        """x_i as a quaternion over the full tower."""
        alg = self.h.alg
        tower = alg.tower
        acc = alg.zero()
        for (j, alpha), c in self.terms.items():
            if j != i:
                continue
            mono = tower.one()
            for w, e in zip(self.h.weights, alpha):
                if e:
                    mono = mono * tower.var(w) ** e
            acc = acc + c * mono
        return acc

    def blocks(self):
        return sorted({i for i, _ in self.terms})


def form_value(x):
    """h(x, x) = sum conj(x_i) t_i q_i x_i."""
    h = x.h
    acc = h.alg.zero()
    for i, d in enumerate(h.diagonal()):
        xi = x.component(i)
        if not xi.is_zero():
            acc = acc + xi.conj() * d * xi
    return acc


def norm_nu(x, h=None):
    """nu(x) = v(h(x, x)) / 2, computed from the reduced norm of h(x, x)."""
    h = h or x.h
    if x.is_zero():
        raise PreconditionError("zero vector")
    z = form_value(x)
    if z.is_zero():
        raise PreconditionError("h(x, x) = 0: the form is isotropic on x")
    # v(z) = v(Nrd z) / 2, and nu = v(z) / 2; doubled nu = v(Nrd z) / 2
    vals = valuation_vector(z.nrd(), h.weights)
    if any(v % 2 for v in vals):
        raise InternalConsistencyError("odd valuation of a reduced norm")
    return ValueVector([v // 2 for v in vals])


def block_nu(x):
    """min over terms of (1/2) eps_i + alpha, from the graded structure."""
    n = x.h.rank
    best = None
    for i, alpha in x.terms:
        v = ValueVector.unit(n, i, 1) + ValueVector([2 * a for a in alpha])
        if best is None or v < best:
            best = v
    return best


# --------------------------------------------------------- graded restriction


@dataclass
class GradedRestriction:
    blocks: list
    kinds: list
    parity: int
    mu: object

    @property
    def kind(self):
        return IMPROPER if self.parity else PROPER


def _base_tower(h):
    tower = h.alg.tower
    return FieldTower(tower.base, tuple(v for v in tower.vars if v not in h.weights))


def _residue_scalar(x, weights):
    """Residue at t = 0 of a scalar with nonnegative value; None if negative."""
    for k in range(len(weights) - 1, -1, -1):
        if x.is_zero():
            return x
        v, r = tame_residue(x, weights[k])
        if v < 0:
            return None
        if v > 0:
            return r * 0
        x = r
    return x


def graded_restriction(g, h):
    """Residue blocks g_1, ..., g_n of a normalized similitude of a generic sum."""
    if h.weights is None:
        raise PreconditionError("graded restriction needs generic weights")
    mat = g.matrix if isinstance(g, SimilitudeMatrix) else g
    mu = g.mu if isinstance(g, SimilitudeMatrix) else None
    n = h.rank
    w = h.weights
    base = _base_tower(h)
    if mu is None:
        raise PreconditionError("multiplier required")
    mu = h.alg.tower.scalar(mu) if not isinstance(mu, Scalar) else mu
    if any(v in mu.variables() for v in w):
        raise PreconditionError("multiplier must lie in F")
    for i in range(n):
        for j in range(n):
            y = mat[i][j]
            if i == j or y.is_zero():
                continue
            val = ValueVector.unit(n, i, 1) + ValueVector(valuation_vector(y.nrd(), w))
            if not val > ValueVector.unit(n, j, 1):
                raise PreconditionError(f"entry ({i},{j}) has a leading term off the block diagonal")
    balg = QuatAlgebra(_project(h.alg.a, base), _project(h.alg.b, base), base)
    mu_b = _project(mu, base)
    blocks, kinds = [], []
    for i in range(n):
        coeffs = []
        for c in mat[i][i].c:
            r = _residue_scalar(c, w)
            if r is None:
                raise PreconditionError(f"block {i} has negative value")
            coeffs.append(_project(r, base))
        gi = balg.element(*coeffs)
        if gi.is_zero() or gi.nrd().is_zero():
            raise PreconditionError(f"block {i} has a non-invertible residue")
        qi = balg.element(*(_project(c, base) for c in h.entries[i].c))
        ok, kind = verify_similitude(SkewHermForm(balg, [qi]), [[gi]], mu_b)
        if not ok:
            raise PreconditionError(f"residue block {i} is not a similitude with the common multiplier")
        blocks.append(gi)
        kinds.append(kind)
    parity = sum(1 for k in kinds if k == IMPROPER) % 2
    return GradedRestriction(blocks, kinds, parity, mu_b)


# ------------------------------------------------------------------ reports


def _cert(c):
    if c is None:
        return None
    if hasattr(c, "to_dict"):
        return c.to_dict()
    return c


@dataclass
class OutVerdict:
    verdict: str
    status: str = VERIFIED
    certificates: list = field(default_factory=list)
    witness: object = None
    note: str = ""

    def to_dict(self):
        d = {"verdict": self.verdict, "status": self.status,
             "cert": [_cert(c) for c in self.certificates]}
        if self.witness is not None:
            d["witness"] = self.witness
        if self.note:
            d["note"] = self.note
        return d


@dataclass
class PatternResult:
    signs: tuple
    values: list
    verdict: str
    reason: str = ""
    certificate: object = None
    mu: object = None
    similitude: object = None

    def to_dict(self):
        d = {"signs": "".join("+" if s > 0 else "-" for s in self.signs),
             "values": [str(v) for v in self.values], "verdict": self.verdict, "reason": self.reason}
        if self.certificate is not None:
            d["cert"] = _cert(self.certificate)
        if self.mu is not None:
            d["mu"] = str(self.mu)
        if self.similitude is not None:
            d["similitude"] = self.similitude.to_dict()
        return d


@dataclass
class OutReport:
    out1: OutVerdict
    out2: OutVerdict
    out3: OutVerdict
    parameters: dict = field(default_factory=dict)
    patterns: list = field(default_factory=list)

    def verdicts(self):
        return self.out1.verdict, self.out2.verdict, self.out3.verdict

    def asserted(self):
        return [name for name, o in (("out1", self.out1), ("out2", self.out2), ("out3", self.out3))
                if o.status == ASSERTED]

    def check_monotone(self):
        o1, o2, o3 = self.verdicts()
        if o3 == HOLDS and o2 == FAILS or o2 == HOLDS and o1 == FAILS:
            raise InternalConsistencyError(f"inconsistent verdicts {self.verdicts()}")

    def to_dict(self):
        return {"out1": self.out1.to_dict(), "out2": self.out2.to_dict(), "out3": self.out3.to_dict(),
                "parameters": dict(self.parameters), "patterns": [p.to_dict() for p in self.patterns]}

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))


# ------------------------------------------------------------ Out decisions


def _group(avals):
    """Distinct values in first-occurrence order with multiplicities."""
    values, mult = [], []
    for a in avals:
        for k, v in enumerate(values):
            if v == a:
                mult[k] += 1
                break
        else:
            values.append(a)
            mult.append(1)
    return values, mult


def _is_rational_tower(tower):
    return tower.base == RATIONALS and not tower.vars


class _Context:
    """Caches shared by all sign patterns of one decision."""

    def __init__(self, Q, values, budget):
        self.Q = Q
        self.values = values
        self.budget = budget
        self._pairs = {}
        self._minus_one = None

    def pair(self, j, k):
        key = (min(j, k), max(j, k))
        if key not in self._pairs:
            prod = self.values[j] * self.values[k]
            if is_square(prod):
                self._pairs[key] = ("square", None)
            else:
                d = splits_over(self.Q, prod, budget=self.budget)
                self._pairs[key] = (d.verdict, d.certificate)
        return self._pairs[key]

    def minus_one_nrd(self):
        if self._minus_one is None:
            d = represents(self.Q.norm_form(), self.Q.tower.scalar(-1), budget=self.budget)
            self._minus_one = (d.verdict, d.certificate)
        return self._minus_one


def _kinds(signs, values, avals):
    by_value = {k: s for k, s in enumerate(signs)}
    out = []
    for a in avals:
        k = next(k for k, v in enumerate(values) if v == a)
        out.append(PROPER if by_value[k] > 0 else IMPROPER)
    return out


def _witness_candidates(Q, values):
    tower = Q.tower
    gens = [tower.scalar(-1)] + list(values) + [Q.a, Q.b]
    seen, out = [], []
    for mask in range(1, 1 << len(gens)):
        mu = tower.one()
        for i, g in enumerate(gens):
            if mask >> i & 1:
                mu = mu * g
        if any(mu == s for s in seen):
            continue
        seen.append(mu)
        out.append(mu)
    out.sort(key=lambda m: (len(str(m)), str(m)))
    return [tower.one()] + [m for m in out if not m == tower.one()]


def _try_witness(h, signs, values, avals, mu, budget):
    pattern = _kinds(signs, values, avals)
    try:
        return build_diagonal_similitude(h, mu, pattern, budget=budget)
    except BlockError:
        return None


def _decide_pattern(ctx, h, signs, values, avals, asserted, search):
    Q = ctx.Q
    tower = Q.tower
    tag = "".join("+" if s > 0 else "-" for s in signs)
    if _is_rational_tower(tower):
        cons = [(v.as_fraction(), SPLIT if s > 0 else EQUAL) for v, s in zip(values, signs)]
        d = solve_prescribed_symbols(cons, (Q.a.as_fraction(), Q.b.as_fraction()))
        if d.verdict == EMPTY:
            return PatternResult(signs, values, P_EMPTY, "local obstruction", d.certificate)
        sim = build_diagonal_similitude(h, d.value, _kinds(signs, values, avals))
        return PatternResult(signs, values, P_WITNESS, "prescribed symbols", None, d.value, sim)

    mixed = any(s > 0 for s in signs) and any(s < 0 for s in signs)
    if mixed:
        verdict, cert = ctx.minus_one_nrd()
        if verdict == "no":
            return PatternResult(signs, values, P_EMPTY, "-1 is not a reduced norm", cert)
    for j in range(len(values)):
        for k in range(j + 1, len(values)):
            if signs[j] == signs[k]:
                continue
            verdict, cert = ctx.pair(j, k)
            if verdict == "square":
                return PatternResult(signs, values, P_EMPTY, f"a{j + 1}*a{k + 1} is a square")
            if verdict == "no":
                return PatternResult(signs, values, P_EMPTY,
                                     f"Q is not split by the square root of value {j + 1} times value {k + 1}",
                                     cert)
    if search:
        for mu in _witness_candidates(Q, values):
            sim = _try_witness(h, signs, values, avals, mu, ctx.budget)
            if sim is not None:
                return PatternResult(signs, values, P_WITNESS, "candidate multiplier", None, mu, sim)
    if tag in asserted:
        return PatternResult(signs, values, P_ASSERTED, asserted[tag])
    return PatternResult(signs, values, P_UNKNOWN, "no witness and no certified obstruction")


def decide_out_generic(avals, Q, n=None, asserted=None, budget=None, search=True):
    """OutReport for the generic sum <t_1 q_1, ..., t_n q_n> with q_i^2 = a_i.

    ``avals`` may be shorter than n; the last value is then repeated.
    ``asserted`` maps sign strings (one sign per distinct value, e.g. "---")
    to a claim id; such patterns are reported empty but not machine-verified.
    """
    tower = Q.tower
    avals = [tower.scalar(a) if not isinstance(a, Scalar) else a.embed(tower.join(a.tower)) for a in avals]
    if not avals:
        raise PreconditionError("at least one square is required")
    n = len(avals) if n is None else int(n)
    if n < len(avals):
        raise PreconditionError("more squares than the rank")
    avals = avals + [avals[-1]] * (n - len(avals))
    if n < 3:
        raise PreconditionError("the generic sum needs rank at least 3")
    asserted = dict(asserted or {})
    div = is_division(Q)
    if div.verdict != "division":
        raise PreconditionError(f"Q must be a certified division algebra (got {div.verdict})")
    values, mult = _group(avals)
    pures = {}
    for k, v in enumerate(values):
        d = pure_with_square(Q, v, budget=budget)
        if d.verdict != "yes":
            raise PreconditionError(f"{v} is not realized as the square of a pure quaternion ({d.verdict})")
        pures[k] = d.value
    entries = [pures[next(k for k, v in enumerate(values) if v == a)] for a in avals]
    h = SkewHermForm(Q, entries)
    params = {"tower": str(tower), "Q": [str(Q.a), str(Q.b)], "n": n,
              "squares": [str(a) for a in avals], "pure": [str(q) for q in entries]}

    # Out1: Q split by F(sqrt disc)
    disc = tower.one()
    for v, m in zip(values, mult):
        if m % 2:
            disc = disc * v
    if is_square(disc):
        raise PreconditionError("trivial discriminant: the centre of the Clifford algebra is not a field")
    d1 = splits_over(Q, disc, budget=budget)
    out1 = OutVerdict({"yes": HOLDS, "no": FAILS}.get(d1.verdict, UNKNOWN), VERIFIED,
                      [d1.certificate] if d1.certificate is not None else [])
    if d1.verdict == "yes":
        out1.witness = {"disc": str(disc), "pure": [str(x) for x in d1.value]}

    # Out2: sign patterns with prod eps^m = -1
    ctx = _Context(Q, values, PATTERN_BUDGET if budget is None else min(budget, PATTERN_BUDGET))
    patterns = [s for s in product((1, -1), repeat=len(values))
                if _sign_product(s, mult) == -1]
    all_minus = tuple([-1] * len(values))
    results = []
    found = None
    for s in patterns:
        if found is not None and not (n % 2 == 1 and s == all_minus):
            results.append(PatternResult(s, values, P_SKIPPED, "Out2 already witnessed"))
            continue
        r = _decide_pattern(ctx, h, s, values, avals, asserted, search)
        results.append(r)
        if r.verdict == P_WITNESS and found is None:
            found = r
    if found is not None:
        out2 = OutVerdict(HOLDS, VERIFIED, [], {"mu": str(found.mu), "pattern": found.to_dict()["signs"],
                                                "similitude": found.similitude.to_dict()})
    elif all(r.verdict in (P_EMPTY, P_ASSERTED) for r in results):
        status = ASSERTED if any(r.verdict == P_ASSERTED for r in results) else VERIFIED
        out2 = OutVerdict(FAILS, status, [r.certificate for r in results if r.certificate is not None])
    else:
        out2 = OutVerdict(UNKNOWN, VERIFIED)

    # Out3
    if n % 2 == 0:
        out3 = OutVerdict(FAILS, VERIFIED, [div.certificate],
                          "n even and Q division: a square-central improper similitude would split Q")
    else:
        r = next(r for r in results if r.signs == all_minus)
        if r.verdict == P_WITNESS:
            g = r.similitude
            sq = mat_mul(g.matrix, g.matrix)
            if not mat_eq(sq, mat_scale(identity(Q, n), g.mu)):
                raise InternalConsistencyError("all-improper witness is not square-central")
            out3 = OutVerdict(HOLDS, VERIFIED, [], {"mu": str(g.mu), "similitude": g.to_dict()})
        elif r.verdict == P_EMPTY:
            out3 = OutVerdict(FAILS, VERIFIED, [r.certificate] if r.certificate is not None else [])
        elif r.verdict == P_ASSERTED:
            out3 = OutVerdict(FAILS, ASSERTED, [], note=r.reason)
        else:
            out3 = OutVerdict(UNKNOWN, VERIFIED)

    if out2.verdict == HOLDS and out1.verdict == UNKNOWN:
        out1 = OutVerdict(HOLDS, VERIFIED, [], note="implied by Out2")
    if out2.verdict == FAILS and out3.verdict == UNKNOWN:
        out3 = OutVerdict(FAILS, out2.status, [], note="implied by Out2")
    report = OutReport(out1, out2, out3, params, results)
    report.check_monotone()
    return report


def _sign_product(signs, mult):
    p = 1
    for s, m in zip(signs, mult):
        if s < 0 and m % 2:
            p = -p
    return p


# ---------------------------------------------------------- example families


def a3_formula(tower):
    """a_1 ((1 - a_1)^2 (1 + a_2)^2 - 4 (1 - a_1) a_2)."""
    return parse_scalar("a1*((1-a1)^2*(1+a2)^2-4*(1-a1)*a2)", tower)


def odd_example(base="Q"):
    """(avals, Q) over k(a1, a2) with the a_3 above; k = Q or Q(i)."""
    tower = parse_tower(f"{base}[a1,a2]")
    a1, a2 = tower.var("a1"), tower.var("a2")
    return [a1, a2, a3_formula(tower)], QuatAlgebra(a1, a2, tower)


def even_example(base="Q(i)"):
    """(avals, Q) over k(a1, a2)(r, s, t) with a_3 = a1 r^2 + a2 s^2 + a1 a2 t^2."""
    tower = parse_tower(f"{base}[a1,a2][r,s,t]")
    a1, a2 = tower.var("a1"), tower.var("a2")
    a3 = parse_scalar("a1*r^2+a2*s^2+a1*a2*t^2", tower)
    return [a1, a2, a3], QuatAlgebra(a1, a2, tower)


ODD_CONDITION_2 = "ex-noimproperlemma-cond2"


def decide_odd_example(n=3, base="Q(i)", budget=None):
    """Out report for the odd-rank family; the all-minus emptiness is not machine-checkable."""
    if n % 2 == 0:
        raise PreconditionError("odd rank required")
    avals, Q = odd_example(base)
    return decide_out_generic(avals, Q, n, asserted={"---": ODD_CONDITION_2}, budget=budget)


def decide_even_example(n=4, base="Q(i)", budget=None):
    if n % 2:
        raise PreconditionError("even rank required")
    avals, Q = even_example(base)
    return decide_out_generic(avals, Q, n, budget=budget)


# ------------------------------------------------- realizable discriminants


def decide_realizable_discriminant(Q, n, budget=None):
    """(criterion, certificate): is -1 a reduced norm of the division algebra Q?"""
    if n % 2:
        raise PreconditionError("n must be even")
    div = is_division(Q)
    if div.verdict != "division":
        raise PreconditionError("Q must be a certified division algebra")
    d = represents(Q.norm_form(), Q.tower.scalar(-1), budget=budget)
    if d.verdict == "unknown":
        return None, None
    return d.verdict == "yes", d.certificate


@dataclass
class EvenConstruction:
    form: SkewHermForm
    similitude: SimilitudeMatrix
    nu: object
    a: object
    delta: object


def construct_even_example(Q, delta, n, nu=None, budget=None):
    """Skew-hermitian <q', q, ..., q> with discriminant delta and an improper similitude."""
    if n % 2 or n < 2:
        raise PreconditionError("n must be even and positive")
    tower = Q.tower
    delta = tower.scalar(delta) if not isinstance(delta, Scalar) else delta
    if is_division(Q).verdict != "division":
        raise PreconditionError("Q must be a certified division algebra")
    m1 = represents(Q.norm_form(), tower.scalar(-1), budget=budget)
    if m1.verdict != "yes":
        raise PreconditionError(f"-1 must be a reduced norm of Q ({m1.verdict})")
    p = pure_with_square(Q, delta, budget=budget)
    if p.verdict != "yes":
        raise PreconditionError(f"F(sqrt {delta}) does not split Q ({p.verdict})")
    P = p.value
    if nu is None:
        from .quaternion import anticommuting_pure

        U = anticommuting_pure(P)
        nu = (U * U).scalar_part()
    else:
        nu = tower.scalar(nu) if not isinstance(nu, Scalar) else nu
        d = pure_with_square(Q, nu, budget=budget)
        if d.verdict != "yes":
            raise PreconditionError("nu is not the square of a pure quaternion")
        U = _anticommuting_with_square(Q, P, nu, budget)
    PU = P * U
    # an isotropic vector of <-nu, 1, delta nu, -delta, -nu> gives
    # x1^2 - nu x4^2 = delta x3^2 + nu x0^2 - delta nu x2^2
    form = QuadForm([-nu, tower.one(), delta * nu, -delta, -nu], tower)
    vec = _isotropic(form, budget)
    if vec is None:
        raise PreconditionError("no isotropic vector found within the search budget")
    x0, x1, x2, x3, x4 = vec
    q = P * x3 + U * x0 + PU * x2
    a = (q * q).scalar_part()
    if q.is_zero() or not (q * q == Q.element(a)) or a.is_zero():
        raise InternalConsistencyError("common value construction failed")
    if not a == x1 * x1 - nu * x4 * x4:
        raise InternalConsistencyError("a is not a norm from F(sqrt nu)")
    qp = pure_with_square(Q, a * delta, budget=budget)
    if qp.verdict != "yes":
        raise PreconditionError("no pure quaternion with square a*delta found")
    h = SkewHermForm(Q, [qp.value] + [q] * (n - 1))
    sim = build_diagonal_similitude(h, nu, [IMPROPER] + [PROPER] * (n - 1), budget=budget)
    ok, kind = verify_similitude(h, sim.matrix, nu)
    if not ok or kind != IMPROPER:
        raise InternalConsistencyError("constructed similitude is not improper")
    return EvenConstruction(h, sim, nu, a, delta)


def _anticommuting_with_square(Q, P, nu, budget):
    """Pure U anticommuting with P and U^2 = nu."""
    from .quaternion import anticommuting_pure

    u1 = anticommuting_pure(P)
    u2 = P * u1
    s1, s2 = (u1 * u1).scalar_part(), (u2 * u2).scalar_part()
    d = represents(QuadForm([s1, s2], Q.tower), nu, budget=budget)
    if d.verdict != "yes":
        raise PreconditionError("(delta, nu) is not Q")
    x, y = d.value
    return u1 * x + u2 * y


def _isotropic(form, budget):
    from .quadforms.rational import rational_witness
    from .quadforms.witness import find_isotropic_vector

    if form.is_rational():
        from .quadforms.rational import anisotropic_place

        if anisotropic_place(form.rationals()) is not None:
            return None
        w = rational_witness(form.rationals())
        return [form.tower.scalar(x) for x in w]
    return find_isotropic_vector(form, budget=budget)


# --------------------------------------------------------- unitary example


UNITARY_OUT3 = "exunit-out3"


def unitary_tower(m, base):
    xs = ",".join(f"x{i}" for i in range(1, m + 1))
    return parse_tower(f"{base}[a1,a2,{xs},t1,t2,t3,T]")


def unitary_example_form(m=1, base="Q(i)"):
    """h = <x_1..x_m> + <sqrt T><t_1 q_1, t_2 q_2, t_3 q_3> over Q (x) F(sqrt T)."""
    if m < 1:
        raise PreconditionError("m must be positive")
    tower = unitary_tower(m, base)
    a1, a2 = tower.var("a1"), tower.var("a2")
    Q0 = QuatAlgebra(a1, a2, tower)
    q3 = pure_with_square(Q0, a3_formula(tower))
    if q3.verdict != "yes":
        raise InternalConsistencyError("q3 not found")
    qs = [Q0.i(), Q0.j(), q3.value]
    h2 = [q * tower.var(f"t{i + 1}") for i, q in enumerate(qs)]
    alg = Q0.over(tower.var("T"))
    h = UnitaryHermForm(alg, h1=[tower.var(f"x{i}") for i in range(1, m + 1)], h2=h2)
    return h, Q0, qs


def unitary_out3_subchecks(base="Q(i)"):
    """Constructive steps behind the Out3 claim, each exactly verified."""
    tower = parse_tower(f"{base}[a1,a2]")
    a1, a2 = tower.var("a1"), tower.var("a2")
    a3 = a3_formula(tower)
    checks = {}
    H = QuatAlgebra(a1, a2, tower)
    checks["H_division"] = is_division(H).verdict == "division"
    # (a1, -a3) splits: -a3 = x^2 - a1 y^2 with an explicit norm
    x = 2 * a1
    y = a1 + a1 * a2 + 1 - a2
    checks["a1_minus_a3_split"] = x * x - a1 * y * y == -a3
    if base != "Q":
        # (a3, -a1) splits once -1 is a square
        d = represents(QuadForm([tower.one(), -a3], tower), -a1)
        checks["a3_minus_a1_split"] = d.verdict == "yes"
    # ((1-a1)((1-a1)(1+a2)^2 - 4 a2), a2) is ramified at 1 - a1
    u = parse_scalar("(1-a1)*((1-a1)*(1+a2)^2-4*a2)", tower)
    v1, _ = tame_residue(u, "1-a1")
    v2, r2 = tame_residue(a2, "1-a1")
    checks["ramified_at_1_minus_a1"] = v1 % 2 == 1 and v2 % 2 == 0 and not is_square(r2)
    return checks


def verify_unitary_example(m=1, base="Q(i)"):
    """Out report for the unitary generic-sum family."""
    if base not in ("Q", "Q(i)"):
        raise PreconditionError("base must be Q or Q(i)")
    h, Q0, qs = unitary_example_form(m, base)
    tower = Q0.tower
    params = {"m": m, "base": base, "tower": str(tower), "h": h.strings()}
    div = is_division(Q0)
    if div.verdict != "division":
        raise InternalConsistencyError("Q is expected to be division")
    out1 = OutVerdict(HOLDS, VERIFIED, [div.certificate], note="index 2 endomorphism algebra")
    sub = unitary_out3_subchecks(base)
    params["out3_subchecks"] = sub
    if base == "Q":
        ftower = parse_tower("Q[a1,a2," + ",".join(f"x{i}" for i in range(1, m + 1)) + "]")
        norm = [ftower.one(), -ftower.var("a1"), -ftower.var("a2"), ftower.var("a1") * ftower.var("a2")]
        phi = [c * ftower.var(f"x{i}") for i in range(1, m + 1) for c in norm]
        chain = residue_chain(QuadForm(phi + phi, ftower))
        if chain is None:
            out2 = OutVerdict(UNKNOWN, VERIFIED, note="phi + phi not certified anisotropic")
        else:
            out2 = OutVerdict(FAILS, VERIFIED, [chain],
                              note="phi + phi is anisotropic, so <-1> phi is not isometric to phi")
        out3 = OutVerdict(FAILS if out2.verdict == FAILS else UNKNOWN, VERIFIED, [], note="implied by Out2")
        return OutReport(out1, out2, out3, params)

    from .descent import build_semilinear_automorphism

    alg = h.alg
    n = h.rank
    I = alg.element(parse_scalar("I", tower))
    g = [[(alg.one() if i < m else I) if i == j else alg.zero() for j in range(n)] for i in range(n)]
    chk = unitary_similitude_check(h, g, 1)
    if not chk.valid:
        raise InternalConsistencyError("isometry witness failed")
    phi = build_semilinear_automorphism(h, g, 1)
    out2 = OutVerdict(HOLDS, VERIFIED, [], {"mu": "1", "g": [str(g[i][i]) for i in range(n)],
                                            "order2": phi.order2})
    out3 = OutVerdict(FAILS, ASSERTED, [], note=UNITARY_OUT3)
    params["candidates"] = [{"g": "diag(1,..,I,I,I)", "order2": chk.order2, "lambda_pm_mu": chk.lam_is_pm_mu}]
    return OutReport(out1, out2, out3, params)
