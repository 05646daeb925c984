"""Machine-checkable evidence objects and their JSON form.

Every certificate is a plain record of strings, integers, lists and dicts,
so ``Certificate.from_json(c.to_json()) == c`` holds exactly.  ``verify``
re-derives the claim using only field arithmetic and base-case decisions.
"""

from dataclasses import dataclass, field
import json

from ..errors import PreconditionError
from ..fields import parse_scalar, parse_tower

WITNESS = "Witness"
RESIDUE_CHAIN = "ResidueChain"
LOCAL_TABLE = "LocalTable"
RECIPROCITY = "ReciprocityObstruction"
DISC_MISMATCH = "DiscriminantMismatch"
KINDS = (WITNESS, RESIDUE_CHAIN, LOCAL_TABLE, RECIPROCITY, DISC_MISMATCH)


@dataclass
class Certificate:
    kind: str
    tower: str
    form: list
    steps: list = field(default_factory=list)
    witness: list = field(default_factory=list)
    places: dict = field(default_factory=dict)
    obstruction: list = field(default_factory=list)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise PreconditionError(f"unknown certificate kind {self.kind!r}")

    def to_dict(self):
        return {
            "kind": self.kind,
            "tower": self.tower,
            "form": list(self.form),
            "steps": list(self.steps),
            "witness": list(self.witness),
            "places": dict(self.places),
            "obstruction": list(self.obstruction),
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"), ensure_ascii=False)

    @classmethod
    def from_dict(cls, d):
        return cls(d["kind"], d["tower"], list(d["form"]), list(d.get("steps", [])),
                   list(d.get("witness", [])), dict(d.get("places", {})), list(d.get("obstruction", [])))

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    def witness_scalars(self):
        tower = parse_tower(self.tower)
        return [parse_scalar(w, tower) for w in self.witness]

    def form_scalars(self):
        tower = parse_tower(self.tower)
        return [parse_scalar(e, tower) for e in self.form]


def witness_certificate(form, vector):
    return Certificate(WITNESS, str(form.tower), form.strings(), witness=[str(x) for x in vector])


def verify(cert):
    """Independently re-check a certificate; returns True or False."""
    if isinstance(cert, dict):
        cert = Certificate.from_dict(cert)
    if cert.kind == WITNESS:
        return _verify_witness(cert)
    if cert.kind == LOCAL_TABLE:
        from .rational import verify_local_table
        return verify_local_table(cert)
    if cert.kind == RESIDUE_CHAIN:
        from .springer import verify_chain
        return verify_chain(cert)
    if cert.kind == RECIPROCITY:
        from .symbols import verify_obstruction
        return verify_obstruction(cert)
    if cert.kind == DISC_MISMATCH:
        from .generic import verify_mismatch
        return verify_mismatch(cert)
    return False


def _verify_witness(cert):
    entries = cert.form_scalars()
    vec = cert.witness_scalars()
    if len(entries) != len(vec) or all(x.is_zero() for x in vec):
        return False
    tower = parse_tower(cert.tower)
    total = tower.zero()
    for e, x in zip(entries, vec):
        total = total + e * x * x
    return total.is_zero()
