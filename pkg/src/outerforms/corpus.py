"""Runner for the checked-in claims corpus (line-delimited JSON).

Each entry has an ``id``, a ``kind`` selecting the runner below, ``inputs``,
the ``expected`` outcome, a ``status`` (verified or paper-asserted) and a
``provenance`` tag.  Verified entries must reproduce their expected outcome;
paper-asserted entries are run for their constructive evidence and reported
separately.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
import json
import time

from .errors import OuterFormsError
from .fields import parse_scalar, parse_tower
from .quadforms.certificates import verify
from .quadforms.forms import QuadForm
from .quadforms.local import hilbert_symbol
from .quadforms.springer import represents
from .quadforms.symbols import solve_prescribed_symbols, verify_obstruction
from .quaternion import QuatAlgebra, is_division, pure_with_square, splits_over

VERIFIED = "verified"
ASSERTED = "paper-asserted"
STATUSES = (VERIFIED, ASSERTED, "unknown")


@dataclass
class CorpusEntry:
    id: str
    kind: str
    inputs: dict
    expected: object
    status: str = VERIFIED
    provenance: str = ""

    @classmethod
    def from_dict(cls, d):
        e = cls(d["id"], d["kind"], dict(d.get("inputs", {})), d.get("expected"),
                d.get("status", VERIFIED), d.get("provenance", ""))
        if e.status not in STATUSES:
            raise ValueError(f"{e.id}: bad status {e.status!r}")
        if not e.provenance:
            raise ValueError(f"{e.id}: provenance tag missing")
        return e

    def to_dict(self):
        return {"id": self.id, "kind": self.kind, "inputs": self.inputs, "expected": self.expected,
                "status": self.status, "provenance": self.provenance}


@dataclass
class EntryResult:
    id: str
    status: str
    expected: object
    actual: object
    ok: bool
    seconds: float
    detail: dict = field(default_factory=dict)

    def to_dict(self, timings=False):
        d = {"id": self.id, "status": self.status, "expected": self.expected, "actual": self.actual,
             "ok": self.ok, "detail": self.detail}
        if timings:
            d["seconds"] = round(self.seconds, 3)
        return d


def default_corpus_path():
    return resources.files("outerforms") / "data" / "paper_corpus.jsonl"


def load_corpus(path=None):
    path = path or default_corpus_path()
    text = path.read_text() if hasattr(path, "read_text") else open(path).read()
    entries = []
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            entries.append(CorpusEntry.from_dict(json.loads(line)))
    ids = [e.id for e in entries]
    if len(set(ids)) != len(ids):
        raise ValueError("duplicate claim ids in corpus")
    return entries


# ------------------------------------------------------------------ runners


def _tower(inp):
    return parse_tower(inp.get("tower", "Q"))


def _alg(inp, tower):
    a, b = inp["Q"]
    return QuatAlgebra(parse_scalar(str(a), tower), parse_scalar(str(b), tower), tower)


def _identity(inp):
    tower = _tower(inp)
    return parse_scalar(inp["lhs"], tower) == parse_scalar(inp["rhs"], tower), {}


def _hilbert(inp):
    return hilbert_symbol(Fraction(inp["a"]), Fraction(inp["b"]), inp["place"]), {}


def _represents(inp):
    tower = _tower(inp)
    form = QuadForm([parse_scalar(str(c), tower) for c in inp["form"]], tower)
    d = represents(form, parse_scalar(str(inp["value"]), tower))
    return d.verdict, {"certified": bool(d.certificate is not None and verify(d.certificate))}


def _splits(inp):
    tower = _tower(inp)
    d = splits_over(_alg(inp, tower), parse_scalar(str(inp["delta"]), tower))
    return d.verdict, {"certified": bool(d.certificate is not None and verify(d.certificate)),
                       "certificate": d.certificate.kind if d.certificate is not None else None}


def _division(inp):
    tower = _tower(inp)
    d = is_division(_alg(inp, tower))
    return d.verdict, {"certified": bool(d.certificate is not None and verify(d.certificate))}


def _pure_square(inp):
    tower = _tower(inp)
    Q = _alg(inp, tower)
    d = pure_with_square(Q, parse_scalar(str(inp["square"]), tower))
    return d.verdict, {"q": str(d.value) if d.value is not None else None}


def _symbols(inp):
    cons = [(Fraction(a), t) for a, t in inp["constraints"]]
    d = solve_prescribed_symbols(cons, tuple(Fraction(x) for x in inp["Q"]))
    detail = {"mu": str(d.value)} if d.value is not None else {"certified": verify_obstruction(d.certificate)}
    return d.verdict, detail


def _out_summary(report):
    return {"out1": report.out1.verdict, "out2": report.out2.verdict, "out3": report.out3.verdict,
            "asserted": report.asserted()}


def _out(inp):
    from .genericsum import decide_even_example, decide_odd_example, decide_out_generic

    family = inp.get("family", "generic")
    if family == "even":
        r = decide_even_example(inp["n"], inp["base"])
    elif family == "odd":
        r = decide_odd_example(inp["n"], inp["base"])
    else:
        tower = _tower(inp)
        r = decide_out_generic([parse_scalar(str(s), tower) for s in inp["squares"]], _alg(inp, tower),
                               inp.get("n"))
    detail = {}
    if isinstance(r.out2.witness, dict):
        detail["out2_mu"] = r.out2.witness.get("mu")
        detail["out2_pattern"] = r.out2.witness.get("pattern")
    detail["patterns"] = {p.to_dict()["signs"]: p.verdict for p in r.patterns}
    return _out_summary(r), detail


def _unitary(inp):
    from .genericsum import verify_unitary_example

    r = verify_unitary_example(inp["m"], inp["base"])
    detail = {"subchecks": r.parameters.get("out3_subchecks")}
    if isinstance(r.out2.witness, dict):
        detail["order2"] = r.out2.witness.get("order2")
    return _out_summary(r), detail


def _subchecks(inp):
    from .genericsum import unitary_out3_subchecks

    checks = unitary_out3_subchecks(inp["base"])
    return all(checks.values()), checks


def _realizable(inp):
    from .genericsum import decide_realizable_discriminant

    tower = _tower(inp)
    crit, cert = decide_realizable_discriminant(_alg(inp, tower), inp["n"])
    return crit, {"certified": bool(cert is not None and verify(cert))}


def _even_construction(inp):
    from .genericsum import construct_even_example

    tower = _tower(inp)
    c = construct_even_example(_alg(inp, tower), parse_scalar(str(inp["delta"]), tower), inp["n"])
    return c.similitude.kind, {"form": c.form.strings(), "nu": str(c.nu), "a": str(c.a)}


def _descend(inp):
    from .descent import UnitaryDescentDatum, descend
    from .hermitian import UnitaryHermForm

    tower = _tower(inp)
    datum = UnitaryDescentDatum(_alg(inp, tower), parse_scalar(str(inp["d"]), tower))
    h = UnitaryHermForm(datum.alg, entries=inp["entries"])
    res = descend(h, datum)
    return res.ok, {"q": str(res.q), "hPrime": [str(x) for x in res.h_prime]}


def _odd_condition_evidence(inp):
    """Specialized rational instances of the all-minus symbol problem (evidence only)."""
    tower = parse_tower("Q[a1,a2]")
    from .genericsum import a3_formula

    a3 = a3_formula(tower)
    out = {}
    for a1, a2 in inp["specializations"]:
        from .fields import substitute

        base = parse_tower("Q")
        vals = {"a1": base.scalar(Fraction(a1)), "a2": base.scalar(Fraction(a2))}
        v3 = substitute(a3, vals).as_fraction()
        key = f"a1={a1},a2={a2}"
        if v3 == 0:
            out[key] = "degenerate"
            continue
        try:
            d = solve_prescribed_symbols([(Fraction(a1), "equal"), (Fraction(a2), "equal"), (v3, "equal")],
                                         (Fraction(a1), Fraction(a2)))
            out[key] = d.verdict
        except OuterFormsError as exc:
            out[key] = f"error: {exc}"
    return "evidence", out


RUNNERS = {
    "identity": _identity,
    "hilbert": _hilbert,
    "represents": _represents,
    "splits": _splits,
    "division": _division,
    "pure-square": _pure_square,
    "symbols": _symbols,
    "out": _out,
    "unitary": _unitary,
    "subchecks": _subchecks,
    "realizable": _realizable,
    "even-construction": _even_construction,
    "descend": _descend,
    "odd-condition-evidence": _odd_condition_evidence,
}


def run_entry(entry):
    t0 = time.perf_counter()
    try:
        actual, detail = RUNNERS[entry.kind](entry.inputs)
    except KeyError as exc:
        if entry.kind not in RUNNERS:
            actual, detail = "error", {"error": f"unknown kind {entry.kind}"}
        else:
            actual, detail = "error", {"error": f"missing input {exc}"}
    except OuterFormsError as exc:
        actual, detail = "error", {"error": str(exc)}
    ok = actual == entry.expected
    return EntryResult(entry.id, entry.status, entry.expected, actual, ok, time.perf_counter() - t0, detail)


@dataclass
class CorpusReport:
    results: list

    @property
    def regressions(self):
        return [r for r in self.results if r.status == VERIFIED and not r.ok]

    @property
    def asserted(self):
        return [r for r in self.results if r.status == ASSERTED]

    @property
    def passed(self):
        return not self.regressions

    def to_dict(self, timings=False):
        return {
            "entries": [r.to_dict(timings) for r in sorted(self.results, key=lambda r: r.id)],
            "verified": sum(1 for r in self.results if r.status == VERIFIED and r.ok),
            "regressions": sorted(r.id for r in self.regressions),
            "paper_asserted": sorted(r.id for r in self.asserted),
        }


def verify_paper(path=None, only=None, jobs=1):
    """Run the corpus; entries are independent, so ``jobs > 1`` uses worker processes."""
    entries = load_corpus(path)
    if only:
        entries = [e for e in entries if e.id in set(only)]
    if jobs and jobs > 1 and len(entries) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run_entry, entries))
    else:
        results = [run_entry(e) for e in entries]
    return CorpusReport(sorted(results, key=lambda r: r.id))
