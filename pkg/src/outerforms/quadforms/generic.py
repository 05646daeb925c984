"""Refuting representations of generic values (subform theorem, equal dimension).

If psi is anisotropic over k and represents phi(x) = sum phi_i x_i^2 over
k(x) with x_i fresh indeterminates, then phi is a subform of psi.  When the
dimensions agree this forces psi ~ phi, so unequal discriminant classes
refute the representation.
"""

from ..errors import PreconditionError
from ..fields import FieldTower, Scalar, is_square
from .certificates import DISC_MISMATCH, Certificate
from .forms import QuadForm

NOT_REPRESENTED = "not-represented"
UNKNOWN = "unknown"


def generic_value_refute(psi, phi, anisotropy=None):
    """Return (verdict, certificate) for "psi represents phi(x) over k(x)"."""
    from .springer import residue_chain

    chain = anisotropy or residue_chain(psi)
    if chain is None:
        raise PreconditionError("psi is not certified anisotropic")
    if phi.dim != psi.dim:
        return UNKNOWN, None
    tower = psi.tower.join(phi.tower)
    psi, phi = psi.embed(tower), phi.embed(tower)
    ratio = psi.discriminant() / phi.discriminant()
    if is_square(ratio):
        return UNKNOWN, None
    cert = Certificate(
        DISC_MISMATCH,
        str(tower),
        psi.strings(),
        steps=[chain.to_dict()],
        obstruction=[{"phi": phi.strings(), "ratio": str(ratio)}],
    )
    return NOT_REPRESENTED, cert


def verify_mismatch(cert):
    from ..fields import parse_scalar, parse_tower
    from .certificates import Certificate as C
    from .springer import verify_chain

    try:
        tower = parse_tower(cert.tower)
        psi = QuadForm.from_strings(cert.form, tower)
        phi = QuadForm.from_strings(cert.obstruction[0]["phi"], tower)
        ratio = parse_scalar(cert.obstruction[0]["ratio"], tower)
        chain = C.from_dict(cert.steps[0])
    except Exception:
        return False
    if psi.dim != phi.dim or ratio != psi.discriminant() / phi.discriminant():
        return False
    if is_square(ratio):
        return False
    if chain.form != psi.strings() or chain.tower != cert.tower:
        return False
    return verify_chain(chain)


def generic_shape(q, c):
    """Detect c = kappa * sum phi_i x_i^2 with x_i tower variables absent from q.

    Returns (kappa, phi, fresh_vars, base_tower) or None.
    """
    qvars = set()
    for e in q.entries:
        qvars.update(e.variables())
    fresh = [v for v in c.variables() if v not in qvars]
    if not fresh:
        return None
    tower = c.tower
    den = c.v.denom
    idx = {tower.vars.index(v): v for v in fresh}
    if any(den.degree(i) > 0 for i in idx):
        return None
    coeffs = {}
    for monom, coeff in c.v.numer.terms():
        xs = [(i, monom[i]) for i in idx if monom[i]]
        if len(xs) != 1 or xs[0][1] != 2:
            return None
        i = xs[0][0]
        rest = monom[:i] + (0,) + monom[i + 1:]
        coeffs.setdefault(i, {})[rest] = coeff
    if set(coeffs) != set(idx):
        return None
    base = FieldTower(tower.base, tuple(v for v in tower.vars if v not in fresh))
    from .springer import _project

    ring = tower.ring
    parts = []
    for i in sorted(coeffs, key=lambda k: fresh.index(idx[k])):
        num = ring.from_dict(coeffs[i])
        parts.append(_project(Scalar(tower, tower.field.new(num, den)), base))
    kappa = parts[0]
    phi = QuadForm([p / kappa for p in parts], base)
    return kappa, phi, fresh, base


def generic_refutation_for(q, c):
    """DiscriminantMismatch certificate refuting "q represents c", or None."""
    shape = generic_shape(q, c)
    if shape is None:
        return None
    kappa, phi, fresh, base = shape
    from .springer import _project, residue_chain

    try:
        psi = QuadForm([_project(e, base) / kappa for e in q.entries], base)
    except Exception:
        return None
    chain = residue_chain(psi)
    if chain is None:
        return None
    verdict, cert = generic_value_refute(psi, phi, chain)
    return cert if verdict == NOT_REPRESENTED else None
