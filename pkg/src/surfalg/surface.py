"""Directed triangulated surfaces, their quivers, blow-ups and gluing."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import errors as E
from .quiver_core import Quiver, Weights, validate_triangulation_quiver


@dataclass(frozen=True)
class Surface:
    """Combinatorial directed triangulated surface.

    ``triangles`` are oriented triples of edge ids read cyclically; a
    self-folded triangle repeats one edge, e.g. ``(a, a, b)``.
    """

    edges: tuple
    triangles: tuple
    boundary: tuple = ()

    def to_json(self):
        return {"edges": list(self.edges),
                "triangles": [list(t) for t in self.triangles],
                "boundary": list(self.boundary)}

    def canonical(self):
        """Rotation and order independent form, for equality checks."""
        tris = []
        for t in self.triangles:
            rots = [tuple(t[k:] + t[:k]) for k in range(3)]
            tris.append(min(rots))
        return (tuple(sorted(self.edges)), tuple(sorted(tris)), tuple(sorted(self.boundary)))


def _is_self_folded(t):
    return len(set(t)) == 2


def validate_surface(doc) -> Surface:
    try:
        edges = tuple(str(e) for e in doc["edges"])
        tris = tuple(tuple(str(x) for x in t) for t in doc["triangles"])
        bnd = tuple(str(e) for e in doc.get("boundary", ()))
    except (KeyError, TypeError) as exc:
        raise E.InvalidSurface("malformed surface document: %s" % exc) from None
    if len(edges) < 2:
        raise E.InvalidSurface("a surface needs at least two edges")
    if len(set(edges)) != len(edges):
        raise E.InvalidSurface("duplicate edge ids")
    es = set(edges)
    count = {e: 0 for e in edges}
    for t in tris:
        if len(t) != 3:
            # a two-edge cell bounded by a 2-gon is not a triangle
            raise E.InvalidSurface("triangle %r does not have three slots" % (list(t),))
        for x in t:
            if x not in es:
                raise E.UnknownEdge("triangle mentions unknown edge %r" % x, edge=x)
            count[x] += 1
        if len(set(t)) == 1:
            raise E.InvalidSurface("triangle %r repeats one edge three times" % (list(t),))
    for e in bnd:
        if e not in es:
            raise E.UnknownEdge("boundary mentions unknown edge %r" % e, edge=e)
    if len(set(bnd)) != len(bnd):
        raise E.InvalidSurface("duplicate boundary edges")
    bs = set(bnd)
    for e in edges:
        want = 1 if e in bs else 2
        if count[e] != want:
            raise E.InvalidSurface(
                "edge %r occurs %d times in triangles (expected %d)" % (e, count[e], want), edge=e)
    return Surface(edges, tris, bnd)


def surface_from_json(doc):
    return validate_surface(doc)


def quiver_from_surface(s: Surface):
    """Triangulation quiver of a surface: one arrow per triangle corner
    and a loop fixed by f at each boundary edge."""
    arrows, f = [], {}
    for k, t in enumerate(s.triangles):
        for j in range(3):
            aid = "t%d.%d" % (k, j)
            arrows.append((aid, t[j], t[(j + 1) % 3]))
            f[aid] = "t%d.%d" % (k, (j + 1) % 3)
    for e in s.boundary:
        aid = "bnd.%s" % e
        arrows.append((aid, e, e))
        f[aid] = aid
    q = Quiver(s.edges, arrows)
    for v in q.vertices:
        if len(q.out_arrows(v)) != 2 or len(q.in_arrows(v)) != 2:
            raise E.ResultNotTwoRegular("vertex %r is not 2-regular" % v, vertex=v)
    return validate_triangulation_quiver(q, f)


# ----------------------------------------------------------------- blow-up

LOCAL_NAMES = ("alpha", "xi", "delta", "beta", "nu", "mu")


@dataclass
class BlowUpResult:
    surface: Surface
    edges: tuple                      # blown-up edges, in surface order
    local: dict                       # edge -> {alpha, xi, delta, beta, nu, mu}
    origin: dict = field(default_factory=dict)   # new arrow id -> old arrow id
    source: Surface | None = None

    def new_edge(self, i, part):
        return "%s.%s" % (i, part)


def blow_up(s: Surface, I, a_side=None) -> BlowUpResult:
    """Replace each edge of I by a disc made of two triangles.

    For an internal edge lying in two distinct triangles, ``a_side`` may name
    the index of the triangle that becomes adjacent to ``i.a``; by default it
    is the first such triangle in declaration order.
    """
    I = [str(i) for i in I]
    if not I:
        raise E.EmptyEdgeSet("blow-up needs a nonempty edge set")
    es = set(s.edges)
    for i in I:
        if i not in es:
            raise E.UnknownEdge("unknown edge %r" % i, edge=i)
    if len(set(I)) != len(I):
        raise E.InvalidSurface("repeated edge in blow-up set")
    a_side = {str(k): int(v) for k, v in (a_side or {}).items()}
    order = [e for e in s.edges if e in set(I)]
    tris = [list(t) for t in s.triangles]
    bnd = list(s.boundary)
    edges = []
    for e in s.edges:
        if e in set(I):
            edges.extend("%s.%s" % (e, p) for p in "abcd")
        else:
            edges.append(e)
    newtris = []
    for i in order:
        a, b, c, d = ("%s.%s" % (i, p) for p in "abcd")
        occ = [(k, j) for k, t in enumerate(s.triangles) for j, x in enumerate(t) if x == i]
        if i in s.boundary:
            (k, j), = occ
            tris[k][j] = a
            bnd[bnd.index(i)] = b
        elif occ[0][0] == occ[1][0]:
            k = occ[0][0]
            t = s.triangles[k]
            for j in (occ[0][1], occ[1][1]):
                # the corner followed by the other copy of i is the loop corner
                tris[k][j] = b if t[(j + 1) % 3] == i else a
        else:
            ka = a_side.get(i, occ[0][0])
            if ka not in (occ[0][0], occ[1][0]):
                raise E.InvalidSurface("a_side for %r is not a triangle containing it" % i, edge=i)
            for k, j in occ:
                tris[k][j] = a if k == ka else b
        newtris.append((i, [a, c, d]))
        newtris.append((i, [c, b, d]))
    base = len(tris)
    local = {}
    all_tris = [tuple(t) for t in tris]
    for n, (i, t) in enumerate(newtris):
        all_tris.append(tuple(t))
    for n, i in enumerate(order):
        k1, k2 = base + 2 * n, base + 2 * n + 1
        local[i] = {"alpha": "t%d.0" % k1, "xi": "t%d.1" % k1, "delta": "t%d.2" % k1,
                    "beta": "t%d.0" % k2, "nu": "t%d.1" % k2, "mu": "t%d.2" % k2}
    out = Surface(tuple(edges), tuple(all_tris), tuple(bnd))
    out = validate_surface(out.to_json())
    origin = {}
    for k in range(base):
        for j in range(3):
            origin["t%d.%d" % (k, j)] = "t%d.%d" % (k, j)
    for e in s.boundary:
        ne = "%s.b" % e if e in set(I) else e
        origin["bnd.%s" % ne] = "bnd.%s" % e
    return BlowUpResult(out, tuple(order), local, origin, source=s)


def blow_up_weights(old_tq, old_w: Weights, res: BlowUpResult, new_tq) -> Weights:
    """Weights on the blown-up quiver: new virtual orbits get (1, 1), every
    other orbit inherits from the orbit it extends."""
    xi_orbits = {new_tq.orbit_index[res.local[i]["xi"]] for i in res.edges}
    m, c = [], []
    for k, orb in enumerate(new_tq.g_orbits):
        olds = {old_tq.orbit_index[res.origin[a]] for a in orb if a in res.origin}
        if k in xi_orbits:
            if olds:
                raise E.OrbitMismatch("new disc orbit contains old arrows", orbit=list(orb))
            m.append(1)
            c.append(1)
        elif len(olds) == 1:
            (o,) = olds
            m.append(old_w.m[o])
            c.append(old_w.c[o])
        else:
            raise E.OrbitMismatch("blown-up orbit does not extend exactly one old orbit",
                                  orbit=list(orb))
    return Weights(tuple(m), tuple(Fraction(x) for x in c))


def epsilon_to_xi(res: BlowUpResult, epsilon):
    """Sign +1 selects the arrow c_i -> d_i, sign -1 the arrow d_i -> c_i."""
    eps = {str(k): v for k, v in dict(epsilon).items()}
    out = []
    for i in res.edges:
        if i not in eps:
            raise E.MissingEpsilonValue("no sign given for edge %r" % i, edge=i)
        v = eps[i]
        if v == 1:
            out.append(res.local[i]["xi"])
        elif v == -1:
            out.append(res.local[i]["mu"])
        else:
            raise E.MissingEpsilonValue("sign for %r must be +1 or -1" % i, edge=i)
    extra = set(eps) - set(res.edges)
    if extra:
        raise E.UnknownEdge("signs given for edges outside the blow-up set: %s" % sorted(extra))
    return out


def attach_self_folded_boundary(s: Surface, X, names=None) -> Surface:
    """Glue a self-folded triangle onto each boundary edge in X."""
    names = dict(names or {})
    edges = list(s.edges)
    tris = [tuple(t) for t in s.triangles]
    bnd = list(s.boundary)
    for x in X:
        x = str(x)
        if x not in bnd:
            raise E.NotBoundaryEdge("%r is not a boundary edge" % x, edge=x)
        n = str(names.get(x, "i(%s)" % x))
        if n in edges:
            raise E.InvalidSurface("edge id %r already used" % n, edge=n)
        edges.append(n)
        tris.append((n, n, x))
        bnd.remove(x)
    return validate_surface(Surface(tuple(edges), tuple(tris), tuple(bnd)).to_json())
