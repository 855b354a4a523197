"""Exact linear algebra over the rationals on sparse dict vectors."""

from fractions import Fraction


class Echelon:
    """Incrementally maintained echelon basis.

    Vectors are dicts from hashable keys to Fractions.  Pivot choice uses a
    fixed key order established by first appearance.
    """

    def __init__(self):
        self.rows = {}  # pivot key -> row (pivot coefficient 1)
        self._order = {}

    def _rank_key(self, k):
        if k not in self._order:
            self._order[k] = len(self._order)
        return self._order[k]

    def reduce(self, v):
        v = {k: Fraction(c) for k, c in v.items() if c}
        changed = True
        while changed:
            changed = False
            for k in list(v):
                row = self.rows.get(k)
                if row is not None and k in v:
                    c = v[k]
                    for kk, d in row.items():
                        x = v.get(kk, 0) - c * d
                        if x:
                            v[kk] = x
                        else:
                            v.pop(kk, None)
                    changed = True
        return v

    def add(self, v):
        """Insert v; return True if it was independent of the current span."""
        v = self.reduce(v)
        if not v:
            return False
        piv = min(v, key=self._rank_key)
        c = v[piv]
        v = {k: x / c for k, x in v.items()}
        # keep rows fully reduced at the new pivot
        for k, row in self.rows.items():
            if piv in row:
                d = row[piv]
                for kk, x in v.items():
                    y = row.get(kk, 0) - d * x
                    if y:
                        row[kk] = y
                    else:
                        row.pop(kk, None)
        self.rows[piv] = v
        return True

    def contains(self, v):
        return not self.reduce(v)

    @property
    def rank(self):
        return len(self.rows)


def rank(vectors):
    e = Echelon()
    for v in vectors:
        e.add(v)
    return e.rank
