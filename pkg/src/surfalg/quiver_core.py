"""Quivers, paths, triangulation quivers and their weight data."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping

from . import errors as E


@dataclass(frozen=True)
class Arrow:
    id: str
    source: str
    target: str

    @property
    def is_loop(self):
        return self.source == self.target


@dataclass(frozen=True)
class Path:
    """A path read left to right: the first arrow is applied first.

    Stationary paths have ``arrows == ()`` and ``source == target``.
    """

    source: str
    arrows: tuple
    target: str

    def __len__(self):
        return len(self.arrows)

    def __mul__(self, other):
        if not isinstance(other, Path):
            return NotImplemented
        if self.target != other.source:
            return None
        return Path(self.source, self.arrows + other.arrows, other.target)

    def __str__(self):
        if not self.arrows:
            return "e_%s" % self.source
        return " ".join(self.arrows)

    def to_json(self):
        return list(self.arrows)


class Quiver:
    """Finite quiver with arrows in a fixed declaration order."""

    def __init__(self, vertices: Iterable, arrows: Iterable):
        self.vertices = tuple(str(v) for v in vertices)
        arrs = []
        for a in arrows:
            if isinstance(a, Arrow):
                arrs.append(a)
            elif isinstance(a, Mapping):
                arrs.append(Arrow(str(a["id"]), str(a["source"]), str(a["target"])))
            else:
                i, s, t = a
                arrs.append(Arrow(str(i), str(s), str(t)))
        self.arrows = tuple(arrs)
        if len(set(self.vertices)) != len(self.vertices):
            raise E.InvalidQuiver("duplicate vertex ids")
        vs = set(self.vertices)
        self._arrow = {}
        for k, a in enumerate(self.arrows):
            if a.id in self._arrow:
                raise E.InvalidQuiver("duplicate arrow id %r" % a.id, arrow=a.id)
            if a.source not in vs or a.target not in vs:
                raise E.InvalidQuiver("arrow %r has an undeclared endpoint" % a.id, arrow=a.id)
            self._arrow[a.id] = a
        self.index = {a.id: k for k, a in enumerate(self.arrows)}
        self._out = {v: [] for v in self.vertices}
        self._in = {v: [] for v in self.vertices}
        for a in self.arrows:
            self._out[a.source].append(a.id)
            self._in[a.target].append(a.id)

    def __repr__(self):
        return "Quiver(%d vertices, %d arrows)" % (len(self.vertices), len(self.arrows))

    def __eq__(self, other):
        return (isinstance(other, Quiver) and self.vertices == other.vertices
                and self.arrows == other.arrows)

    def __hash__(self):
        return hash((self.vertices, self.arrows))

    def arrow(self, aid) -> Arrow:
        try:
            return self._arrow[aid]
        except KeyError:
            raise E.UnknownArrow("unknown arrow %r" % (aid,), arrow=aid) from None

    def has_arrow(self, aid):
        return aid in self._arrow

    @property
    def arrow_ids(self):
        return tuple(a.id for a in self.arrows)

    def source(self, aid):
        return self.arrow(aid).source

    def target(self, aid):
        return self.arrow(aid).target

    def out_arrows(self, v):
        return tuple(self._out[v])

    def in_arrows(self, v):
        return tuple(self._in[v])

    def path(self, *aids) -> Path:
        if not aids:
            raise ValueError("use stationary() for trivial paths")
        for x, y in zip(aids, aids[1:]):
            if self.target(x) != self.source(y):
                raise E.InvalidQuiver("arrows %r and %r do not compose" % (x, y))
        return Path(self.source(aids[0]), tuple(aids), self.target(aids[-1]))

    def stationary(self, v) -> Path:
        if v not in self._out:
            raise E.InvalidQuiver("unknown vertex %r" % (v,))
        return Path(v, (), v)

    def is_connected(self):
        if not self.vertices:
            return True
        adj = {v: set() for v in self.vertices}
        for a in self.arrows:
            adj[a.source].add(a.target)
            adj[a.target].add(a.source)
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.vertices)

    def to_json(self):
        return {
            "vertices": list(self.vertices),
            "arrows": [{"id": a.id, "source": a.source, "target": a.target} for a in self.arrows],
        }


# ---------------------------------------------------------------- elements
# An element of a path algebra is a dict Path -> Fraction with no zero values.

def elem(*terms):
    """Build an element from (coef, path) pairs or bare paths."""
    out = {}
    for t in terms:
        if isinstance(t, Path):
            c, p = Fraction(1), t
        else:
            c, p = t
        if p is None:
            continue
        out[p] = out.get(p, Fraction(0)) + Fraction(c)
        if out[p] == 0:
            del out[p]
    return out


def e_add(x, y, scale=1):
    out = dict(x)
    scale = Fraction(scale)
    for p, c in y.items():
        v = out.get(p, Fraction(0)) + scale * c
        if v:
            out[p] = v
        else:
            out.pop(p, None)
    return out


def e_mul(x, y):
    out = {}
    for p, a in x.items():
        for q, b in y.items():
            r = p * q
            if r is None:
                continue
            v = out.get(r, Fraction(0)) + a * b
            if v:
                out[r] = v
            else:
                out.pop(r, None)
    return out


def e_str(x):
    """Juxtaposition notation, shortest paths first: ``alpha xi - 3/2 rho alpha``."""
    if not x:
        return "0"
    out = ""
    for k, p in enumerate(sorted(x, key=lambda p: (len(p), p.arrows))):
        c = x[p]
        sign = "-" if c < 0 else "+"
        mag = "" if abs(c) == 1 else "%s " % abs(c)
        if k == 0:
            out = ("-" if c < 0 else "") + mag + str(p)
        else:
            out += " %s %s%s" % (sign, mag, p)
    return out


# ---------------------------------------------------- triangulation quivers

class TriangulationQuiver:
    """A 2-regular quiver with a permutation f of its arrows.

    Use :func:`validate_triangulation_quiver` to construct one from raw data.
    """

    def __init__(self, quiver: Quiver, f: Mapping):
        self.quiver = quiver
        self.f = dict(f)
        q = quiver
        self.bar = {}
        for v in q.vertices:
            outs = q.out_arrows(v)
            self.bar[outs[0]] = outs[1]
            self.bar[outs[1]] = outs[0]
        self.g = {a: self.bar[self.f[a]] for a in q.arrow_ids}
        self.f_inv = {b: a for a, b in self.f.items()}
        self.g_inv = {b: a for a, b in self.g.items()}
        self.f_orbits = _orbits(q.arrow_ids, self.f)
        self.g_orbits = _orbits(q.arrow_ids, self.g)
        self.orbit_index = {}
        for k, orb in enumerate(self.g_orbits):
            for a in orb:
                self.orbit_index[a] = k

    def __repr__(self):
        return "TriangulationQuiver(%r, g-orbit lengths %s)" % (
            self.quiver, [len(o) for o in self.g_orbits])

    @property
    def arrows(self):
        return self.quiver.arrow_ids

    def orbit(self, a):
        return self.g_orbits[self.orbit_index[a]]

    def n(self, a):
        return len(self.orbit(a))

    def g_power(self, a, k):
        k %= self.n(a)
        for _ in range(k):
            a = self.g[a]
        return a

    def to_json(self):
        d = self.quiver.to_json()
        d["f"] = dict(self.f)
        return d


def _orbits(order, perm):
    seen = set()
    out = []
    for a in order:
        if a in seen:
            continue
        cyc = [a]
        seen.add(a)
        b = perm[a]
        while b != a:
            cyc.append(b)
            seen.add(b)
            b = perm[b]
        out.append(tuple(cyc))
    return tuple(out)


def validate_triangulation_quiver(quiver: Quiver, f: Mapping) -> TriangulationQuiver:
    q = quiver
    if len(q.vertices) < 2:
        raise E.FewerThanTwoVertices("a triangulation quiver needs at least two vertices")
    for v in q.vertices:
        if len(q.out_arrows(v)) != 2 or len(q.in_arrows(v)) != 2:
            raise E.NotTwoRegular(
                "vertex %r has %d outgoing and %d incoming arrows"
                % (v, len(q.out_arrows(v)), len(q.in_arrows(v))), vertex=v)
    f = {str(k): str(v) for k, v in dict(f).items()}
    for a in list(f) + list(f.values()):
        if not q.has_arrow(a):
            raise E.UnknownArrow("f mentions unknown arrow %r" % a, arrow=a)
    if set(f) != set(q.arrow_ids) or len(set(f.values())) != len(f):
        raise E.FNotPermutation("f must be a permutation of the arrow set")
    for a, b in f.items():
        if q.target(a) != q.source(b):
            raise E.FNotFollowingArrows("t(%s) != s(f(%s))" % (a, a), arrow=a)
    for a in q.arrow_ids:
        if f[f[f[a]]] != a:
            raise E.FCycleNotLength1Or3("f-orbit of %r has length not 1 or 3" % a, arrow=a)
        if f[a] == a and not q.arrow(a).is_loop:
            raise E.FCycleNotLength1Or3("f fixes non-loop %r" % a, arrow=a)
    if not q.is_connected():
        raise E.Disconnected("quiver is not connected")
    return TriangulationQuiver(q, f)


def triangulation_quiver_from_json(doc) -> TriangulationQuiver:
    try:
        q = Quiver(doc["vertices"], doc["arrows"])
        f = doc["f"]
    except (KeyError, TypeError, ValueError) as exc:
        raise E.InvalidQuiver("malformed quiver document: %s" % exc) from None
    return validate_triangulation_quiver(q, f)


# ---------------------------------------------------------------- weights

def parse_fraction(x) -> Fraction:
    try:
        if isinstance(x, float):
            raise ValueError("floats are not accepted; use 'p/q'")
        return Fraction(x)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise E.InvalidWeights("bad rational %r: %s" % (x, exc)) from None


@dataclass(frozen=True)
class Weights:
    """Weight m and parameter c for each g-orbit, keyed by orbit index."""

    m: tuple
    c: tuple
    labels: tuple = field(default=())

    def m_of(self, tq, a):
        return self.m[tq.orbit_index[a]]

    def c_of(self, tq, a):
        return self.c[tq.orbit_index[a]]

    def to_json(self, tq):
        return [{"rep": orb[0], "m": self.m[k], "c": str(self.c[k])}
                for k, orb in enumerate(tq.g_orbits)]


def make_weights(tq: TriangulationQuiver, entries) -> Weights:
    """``entries``: iterable of dicts with rep/m/c, or a mapping rep -> (m, c).

    Every g-orbit must receive exactly one entry.
    """
    if isinstance(entries, Mapping):
        entries = [{"rep": k, "m": v[0], "c": v[1]} for k, v in entries.items()]
    m = [None] * len(tq.g_orbits)
    c = [None] * len(tq.g_orbits)
    for ent in entries:
        rep = ent["rep"]
        if rep not in tq.orbit_index:
            raise E.UnknownArrow("weight entry for unknown arrow %r" % rep, arrow=rep)
        k = tq.orbit_index[rep]
        if m[k] is not None:
            raise E.InvalidWeights("orbit of %r weighted twice" % rep, arrow=rep)
        mv = ent.get("m", 1)
        if isinstance(mv, bool) or not isinstance(mv, int) or mv < 1:
            raise E.InvalidWeights("weight m must be a positive integer, got %r" % (mv,), arrow=rep)
        cv = parse_fraction(ent.get("c", 1))
        if cv == 0:
            raise E.InvalidWeights("parameter c must be nonzero", arrow=rep)
        m[k], c[k] = mv, cv
    missing = [tq.g_orbits[k][0] for k in range(len(m)) if m[k] is None]
    if missing:
        raise E.InvalidWeights("no weight for orbit(s) of %s" % missing, orbits=missing)
    return Weights(tuple(m), tuple(c))


def uniform_weights(tq, m=1, c=1):
    return Weights(tuple([m] * len(tq.g_orbits)), tuple([Fraction(c)] * len(tq.g_orbits)))


class WeightedQuiver:
    """A triangulation quiver together with weights; the data of a WTA."""

    def __init__(self, tq: TriangulationQuiver, weights: Weights):
        if len(weights.m) != len(tq.g_orbits):
            raise E.InvalidWeights("weight vector length does not match orbit count")
        self.tq = tq
        self.w = weights

    @property
    def quiver(self):
        return self.tq.quiver

    def m(self, a):
        return self.w.m_of(self.tq, a)

    def c(self, a):
        return self.w.c_of(self.tq, a)

    def n(self, a):
        return self.tq.n(a)

    def mn(self, a):
        return self.m(a) * self.n(a)

    def is_virtual(self, a):
        return self.mn(a) == 2

    def virtual_arrows(self):
        return tuple(a for a in self.tq.arrows if self.is_virtual(a))

    def g_word(self, a, length):
        out = []
        for _ in range(length):
            out.append(a)
            a = self.tq.g[a]
        return out

    def A(self, a) -> Path:
        return self.quiver.path(*self.g_word(a, self.mn(a) - 1))

    def B(self, a) -> Path:
        return self.quiver.path(*self.g_word(a, self.mn(a)))

    def A_prime(self, a) -> Path:
        if self.n(a) < 3:
            raise E.APrimeUndefined("A' needs an orbit of length at least 3", arrow=a)
        return self.quiver.path(*self.g_word(a, self.mn(a) - 2))

    def assumption_report(self):
        """List of (arrow, clause) pairs violating the admissibility bounds."""
        bad = []
        for a in self.tq.arrows:
            b = self.tq.bar[a]
            if self.mn(a) < 2:
                bad.append((a, 1))
            elif self.is_virtual(b) and not self.quiver.arrow(b).is_loop and self.mn(a) < 3:
                bad.append((a, 2))
            elif self.is_virtual(b) and self.quiver.arrow(b).is_loop and self.mn(a) < 4:
                bad.append((a, 3))
        return bad

    def check_assumption(self):
        bad = self.assumption_report()
        if bad:
            a, k = bad[0]
            raise E.AssumptionViolated(
                "weights violate admissibility bound (%d) at arrow %r" % (k, a),
                violations=[list(x) for x in bad])

    def closed_form_dimension(self):
        return sum(self.w.m[k] * len(o) ** 2 for k, o in enumerate(self.tq.g_orbits))

    @cached_property
    def summary(self):
        return [{"orbit": list(o), "m": self.w.m[k], "c": str(self.w.c[k]),
                 "virtual": self.w.m[k] * len(o) == 2}
                for k, o in enumerate(self.tq.g_orbits)]
