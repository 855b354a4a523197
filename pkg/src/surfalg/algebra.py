"""Weighted triangulation algebras: relations, bases, Cartan matrices."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import errors as E
from . import gb_oracle
from .linalg import Echelon
from .quiver_core import Path, WeightedQuiver, e_str, elem


@dataclass
class Relation:
    label: str
    element: dict
    arrow: str = ""
    clause: int = 0

    def __str__(self):
        return "%s: %s" % (self.label, e_str(self.element))

    def to_json(self):
        terms = sorted(self.element.items(), key=lambda t: (len(t[0]), t[0].arrows))
        return [{"coef": str(c), "path": p.to_json()} for p, c in terms]


@dataclass
class PresentedAlgebra:
    """Bound quiver algebra with a distinguished basis of paths."""

    quiver: object
    relations: list
    basis: list
    name: str = ""
    closed_form: int | None = None
    meta: dict = field(default_factory=dict)

    @property
    def dimension(self):
        return len(self.basis)

    @property
    def vertices(self):
        return self.quiver.vertices

    def cartan(self):
        pos = {v: k for k, v in enumerate(self.vertices)}
        C = [[0] * len(pos) for _ in pos]
        for p in self.basis:
            C[pos[p.source]][pos[p.target]] += 1
        return C

    def basis_by_pair(self):
        out = {}
        for p in self.basis:
            out.setdefault((p.source, p.target), []).append(p)
        return out

    def degree_cap(self):
        return self.meta.get("degree_cap") or gb_oracle.default_cap(
            mn_max=self.meta.get("mn_max", max((len(p) for p in self.basis), default=1)))

    def oracle(self, degree_cap=None, time_limit=60.0):
        if "oracle" not in self.meta or degree_cap is not None:
            cap = degree_cap or self.degree_cap()
            self.meta["oracle"] = gb_oracle.complete(
                self.quiver, [r.element for r in self.relations], cap, time_limit=time_limit)
        return self.meta["oracle"]

    def to_json(self):
        pairs = {}
        for (s, t), ps in self.basis_by_pair().items():
            pairs["%s->%s" % (s, t)] = [p.to_json() for p in ps]
        return {
            "name": self.name,
            "quiver": self.quiver.to_json(),
            "dimension": self.dimension,
            "cartan": self.cartan(),
            "basis": pairs,
            "relations": [r.to_json() for r in self.relations],
            "relation_labels": [r.label for r in self.relations],
        }


def relation_order(rels, quiver):
    return sorted(rels, key=lambda r: (quiver.index[r.arrow], r.clause))


# ------------------------------------------------------------- WTA relations

def wta_relations(wq: WeightedQuiver):
    tq, q = wq.tq, wq.quiver
    f, g, bar = tq.f, tq.g, tq.bar
    rels = []
    for a in tq.arrows:
        b = bar[a]
        # commutativity
        rels.append(Relation(
            "comm(%s)" % a,
            elem(q.path(a, f[a]), (-wq.c(b), wq.A(b))), a, 1))
        # zero relations of the first kind
        fa, ffa = f[a], f[f[a]]
        skip = wq.is_virtual(ffa) or (
            wq.is_virtual(f[b]) and wq.m(b) == 1 and wq.n(b) == 3)
        if not skip:
            rels.append(Relation("zero1(%s)" % a, elem(q.path(a, fa, g[fa])), a, 2))
        # zero relations of the second kind
        ga = g[a]
        skip = wq.is_virtual(fa) or (
            wq.is_virtual(ffa) and wq.m(fa) == 1 and wq.n(fa) == 3)
        if not skip:
            rels.append(Relation("zero2(%s)" % a, elem(q.path(a, ga, f[ga])), a, 3))
    return relation_order(rels, q)


def wta_basis(wq: WeightedQuiver):
    """Basis of each e_i Lambda built from initial subpaths of the cycles B."""
    q, tq = wq.quiver, wq.tq
    out = []
    for v in q.vertices:
        a, b = q.out_arrows(v)
        if wq.is_virtual(a) and wq.is_virtual(b):
            raise E.AssumptionViolated("both arrows at %r are virtual" % v, vertex=v)
        if wq.is_virtual(b):
            a, b = b, a
        out.append(q.stationary(v))
        if wq.is_virtual(a):
            word = wq.g_word(b, wq.mn(b))
            out.extend(q.path(*word[:k]) for k in range(1, len(word) + 1))
            out.append(q.path(b, tq.f[b]))
        else:
            for x in (a, b):
                word = wq.g_word(x, wq.mn(x))
                out.extend(q.path(*word[:k]) for k in range(1, len(word)))
            out.append(wq.B(a))
    return out


def socle_representatives(wq: WeightedQuiver):
    q = wq.quiver
    reps = {}
    for v in q.vertices:
        a, b = q.out_arrows(v)
        x = a if not wq.is_virtual(a) else b
        reps[v] = wq.B(x)
    return reps


# ------------------------------------------------------------ singularity

def _is_spherical_shape(wq):
    tq = wq.tq
    lens = sorted(len(o) for o in tq.g_orbits)
    if len(wq.quiver.vertices) != 6 or lens != [2, 2, 4, 4]:
        return False
    if any(len(o) != 3 for o in tq.f_orbits):
        return False
    return True


def singular_spherical(wq: WeightedQuiver):
    """Spherical shape, all weights one, and the two long parameters multiply to one."""
    if not _is_spherical_shape(wq) or not all(m == 1 for m in wq.w.m):
        return False
    prod = Fraction(1)
    for k, o in enumerate(wq.tq.g_orbits):
        if len(o) == 4:
            prod *= wq.w.c[k]
    return prod == 1


def possibly_singular(wq: WeightedQuiver):
    """Heuristic guard; returns a reason string or None.

    Flags small quivers carrying virtual arrows and the spherical shape with
    unit weights whose parameters may multiply to one.  It over-approximates.
    """
    nv = len(wq.quiver.vertices)
    if nv <= 3 and wq.virtual_arrows():
        return "quiver with at most three vertices carrying virtual arrows"
    if _is_spherical_shape(wq):
        tq = wq.tq
        long = [k for k, o in enumerate(tq.g_orbits) if len(o) == 4]
        short = [k for k, o in enumerate(tq.g_orbits) if len(o) == 2]
        if all(wq.w.m[k] == 1 for k in long) and all(wq.w.m[k] == 1 for k in short):
            prod = Fraction(1)
            for k in long:
                prod *= wq.w.c[k]
            unit_virtual = all(wq.w.c[k] == 1 for k in short)
            if prod == 1 or not unit_virtual:
                return "spherical shape with unit weights and parameter product one"
    return None


def build_wta(wq: WeightedQuiver, allow_possibly_singular=False, name="") -> PresentedAlgebra:
    wq.check_assumption()
    if not allow_possibly_singular:
        if singular_spherical(wq):
            raise E.SingularSpherical("spherical quiver with unit weights and parameter product one")
        why = possibly_singular(wq)
        if why:
            raise E.PossiblySingular(why + "; pass allow_possibly_singular to override")
    rels = wta_relations(wq)
    basis = wta_basis(wq)
    closed = wq.closed_form_dimension()
    if len(basis) != closed:
        raise E.ClosedFormMismatch("basis has %d elements, closed form gives %d" % (len(basis), closed))
    mn_max = max(wq.mn(a) for a in wq.tq.arrows)
    alg = PresentedAlgebra(wq.quiver, rels, basis, name=name, closed_form=closed,
                           meta={"weighted": wq, "mn_max": mn_max, "kind": "wta"})
    return alg


# --------------------------------------------------------------- audits

def socle_check(alg: PresentedAlgebra, rs=None):
    """Check alpha f(alpha) f^2(alpha) = c_alpha B_alpha = c_bar B_bar, nonzero, socle.

    Returns a list of failure strings (empty when everything holds).
    """
    wq = alg.meta["weighted"]
    rs = rs or alg.oracle()
    q, tq = wq.quiver, wq.tq
    fails = []
    for v in q.vertices:
        a, b = q.out_arrows(v)
        vals = []
        for x in (a, b):
            t = rs.normal_form(elem(q.path(x, tq.f[x], tq.f[tq.f[x]])))
            cb = rs.normal_form(elem((wq.c(x), wq.B(x))))
            if t != cb:
                fails.append("%s f f != c B at %s" % (x, v))
            vals.append(cb)
        if vals[0] != vals[1]:
            fails.append("c B differ between the two arrows at %s" % v)
        if not vals[0]:
            fails.append("socle element at %s is zero" % v)
        for arr in q.arrow_ids:
            left = q.path(arr)
            for p in (left * wq.B(a), wq.B(a) * left):
                if p is not None and not rs.reduces_to_zero(p):
                    fails.append("arrow %s does not annihilate the socle at %s" % (arr, v))
    return fails


def radical_square_span(rs, quiver):
    """Per vertex pair, an echelon basis of rad^2 inside Lambda."""
    std = [p for p in rs.standard_monomials() if len(p) >= 1]
    ech = {}
    for a in quiver.arrow_ids:
        pa = quiver.path(a)
        for s in std:
            prod = pa * s
            if prod is None:
                continue
            nf = rs.normal_form({prod: Fraction(1)})
            if nf:
                key = (prod.source, prod.target)
                ech.setdefault(key, Echelon()).add(nf)
    return ech


def gabriel_quiver(quiver, rs):
    """Arrows that survive in the Gabriel quiver (order preserved)."""
    ech = radical_square_span(rs, quiver)
    keep = []
    for a in quiver.arrow_ids:
        key = (quiver.source(a), quiver.target(a))
        e = ech.setdefault(key, Echelon())
        nf = rs.normal_form({quiver.path(a): Fraction(1)})
        if nf and e.add(nf):
            keep.append(a)
    return keep


def basis_is_independent(alg: PresentedAlgebra, rs=None):
    """Whether the stored basis paths are linearly independent in the quotient."""
    rs = rs or alg.oracle()
    ech = {}
    for p in alg.basis:
        nf = rs.normal_form({p: Fraction(1)})
        if not nf:
            return False
        if not ech.setdefault((p.source, p.target), Echelon()).add(nf):
            return False
    return True


def compare_with_oracle(alg: PresentedAlgebra, rs=None):
    rs = rs or alg.oracle()
    std = rs.standard_monomials()
    cart = gb_oracle.oracle_cartan(rs, alg.vertices)
    mine = alg.cartan()
    mism = []
    for i, v in enumerate(alg.vertices):
        for j, w in enumerate(alg.vertices):
            if cart[i][j] != mine[i][j]:
                mism.append({"pair": "%s->%s" % (v, w), "basis": mine[i][j], "oracle": cart[i][j]})
    return {
        "dimension": len(std),
        "cartan": cart,
        "agrees": not mism and len(std) == alg.dimension,
        "mismatches": mism,
    }


def algebra_from_json(doc) -> PresentedAlgebra:
    """Rebuild a presented algebra from its ``to_json`` form (no weights attached)."""
    from .quiver_core import Quiver
    try:
        q = Quiver(doc["quiver"]["vertices"], doc["quiver"]["arrows"])
        rels = []
        for k, terms in enumerate(doc["relations"]):
            el = {}
            for t in terms:
                p = q.path(*t["path"])
                el[p] = el.get(p, Fraction(0)) + Fraction(t["coef"])
            labels = doc.get("relation_labels") or []
            rels.append(Relation(labels[k] if k < len(labels) else "r%d" % k,
                                 {p: c for p, c in el.items() if c}))
        basis = []
        for pair, paths in doc["basis"].items():
            s, t = pair.split("->")
            for arrows in paths:
                p = q.path(*arrows) if arrows else q.stationary(s)
                if p.source != s or p.target != t:
                    raise E.InvalidQuiver("basis path %r does not run %s" % (arrows, pair))
                basis.append(p)
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise E.InvalidQuiver("malformed algebra document: %s" % exc) from None
    mn_max = max((len(p) for p in basis), default=1)
    return PresentedAlgebra(q, rels, basis, name=doc.get("name", ""),
                            meta={"kind": "presented", "mn_max": mn_max})
