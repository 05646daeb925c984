"""Diagonal quadratic forms over a field tower."""

from fractions import Fraction

from ..errors import PreconditionError
from ..fields import RATIONALS, FieldTower, Scalar, parse_scalar, sqrt, square_class


class QuadForm:
    __slots__ = ("tower", "entries")

    def __init__(self, entries, tower=None):
        entries = list(entries)
        if tower is None:
            scalars = [e for e in entries if isinstance(e, Scalar)]
            tower = scalars[0].tower if scalars else FieldTower()
            for s in scalars[1:]:
                tower = tower.join(s.tower)
        converted = []
        for e in entries:
            s = parse_scalar(e, tower) if isinstance(e, str) else tower.scalar(e)
            if s.is_zero():
                raise PreconditionError("quadratic form entries must be nonzero")
            converted.append(s)
        self.tower = tower
        self.entries = tuple(converted)

    @property
    def dim(self):
        return len(self.entries)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, idx):
        return self.entries[idx]

    def __add__(self, other):
        """Orthogonal sum."""
        tower = self.tower.join(other.tower)
        return QuadForm([e.embed(tower) for e in self.entries + other.entries], tower)

    def scale(self, c):
        c = self.tower.scalar(c) if not isinstance(c, Scalar) else c
        tower = self.tower.join(c.tower)
        return QuadForm([e.embed(tower) * c.embed(tower) for e in self.entries], tower)

    def embed(self, tower):
        return QuadForm([e.embed(tower) for e in self.entries], tower)

    def evaluate(self, vector):
        if len(vector) != self.dim:
            raise PreconditionError("vector length does not match the form's dimension")
        total = self.tower.zero()
        for e, x in zip(self.entries, vector):
            total = total + e * x * x
        return total

    def polar(self, u, v):
        total = self.tower.zero()
        for e, x, y in zip(self.entries, u, v):
            total = total + e * x * y
        return total

    def discriminant(self):
        d = self.tower.one()
        for e in self.entries:
            d = d * e
        return d

    def normalized(self):
        """Square-class representatives plus the scales s_i with e_i = s_i^2 * rep_i."""
        reps, scales = [], []
        for e in self.entries:
            rep = square_class(e).representative()
            s = sqrt(e / rep)
            if s is None:
                raise AssertionError("square class representative is inconsistent")
            reps.append(rep)
            scales.append(s)
        return QuadForm(reps, self.tower), scales

    def is_rational(self):
        return self.tower.base == RATIONALS and not self.tower.vars

    def rationals(self):
        return [e.as_fraction() for e in self.entries]

    def strings(self):
        return [str(e) for e in self.entries]

    @classmethod
    def from_strings(cls, strings, tower):
        return cls([parse_scalar(s, tower) for s in strings], tower)

    def __eq__(self, other):
        return isinstance(other, QuadForm) and self.tower == other.tower and self.strings() == other.strings()

    def __hash__(self):
        return hash((self.tower, tuple(self.strings())))

    def __str__(self):
        return "<" + ", ".join(self.strings()) + ">"

    def __repr__(self):
        return f"QuadForm({self}, {self.tower})"


def rational_form(values):
    return QuadForm([Fraction(v) for v in values], FieldTower())
