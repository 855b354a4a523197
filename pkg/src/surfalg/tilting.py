"""Two-term complexes of projectives and Hom computations in the homotopy
category.

Conventions: P_x = e_x A.  A map P_x -> P_y is left multiplication by an
element of e_y A e_x, so an arrow theta: j -> k gives P_k -> P_j.  The
composite of u: P_x -> P_y and v: P_y -> P_z is the product v*u.
Complexes sit in degrees 1 and 0 with the differential going 1 -> 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import errors as E
from .linalg import Echelon


class FiniteAlgebra:
    """Structure constants on the standard monomials of a completed system."""

    def __init__(self, rs):
        self.rs = rs
        self.basis = rs.standard_monomials()
        self.pos = {p: k for k, p in enumerate(self.basis)}
        self.between = {}
        for k, p in enumerate(self.basis):
            self.between.setdefault((p.source, p.target), []).append(k)
        self._mul = {}

    def hom_basis(self, x, y):
        """Indices spanning Hom(P_x, P_y) = e_y A e_x."""
        return self.between.get((y, x), [])

    def coords(self, element):
        nf = self.rs.normal_form(element)
        return {self.pos[p]: c for p, c in nf.items()}

    def mul_basis(self, i, j):
        key = (i, j)
        if key not in self._mul:
            prod = self.basis[i] * self.basis[j]
            self._mul[key] = {} if prod is None else self.coords({prod: Fraction(1)})
        return self._mul[key]

    def mul(self, x, y):
        out = {}
        for i, a in x.items():
            for j, b in y.items():
                for k, c in self.mul_basis(i, j).items():
                    v = out.get(k, 0) + a * b * c
                    if v:
                        out[k] = v
                    else:
                        out.pop(k, None)
        return out


@dataclass
class TwoTerm:
    """P(deg1) --d--> P(deg0); d[(row in deg0, col in deg1)] is an element."""

    deg1: tuple
    deg0: tuple
    d: dict = field(default_factory=dict)
    label: str = ""

    @property
    def is_stalk(self):
        return not self.deg1


def stalk(x):
    return TwoTerm((), (x,), {}, label="P_%s" % x)


def cone(x, y, arrow_path, label=""):
    """P_x -> P_y by left multiplication with a single path from y to x."""
    return TwoTerm((x,), (y,), {(0, 0): {arrow_path: Fraction(1)}}, label=label)


class HomCalculator:
    def __init__(self, alg: FiniteAlgebra):
        self.A = alg
        self._dcache = {}

    def _dmat(self, C):
        key = id(C)
        if key not in self._dcache:
            self._dcache[key] = (C, {k: self.A.coords(v) for k, v in C.d.items()})
        return self._dcache[key][1]

    def _basis(self, xs, ys):
        """Basis of Hom(sum P_xs, sum P_ys): list of (l, k, idx)."""
        out = []
        for k, x in enumerate(xs):
            for l, y in enumerate(ys):
                for i in self.A.hom_basis(x, y):
                    out.append((l, k, i))
        return out

    def _post(self, dmat, l, k, i, tag):
        # d o u where u has a single entry at (l, k): result entries (m, k)
        out = {}
        for (m, ll), dv in dmat.items():
            if ll != l:
                continue
            for j, c in self.A.mul(dv, {i: Fraction(1)}).items():
                out[(tag, m, k, j)] = out.get((tag, m, k, j), 0) + c
        return out

    def _pre(self, dmat, l, k, i, tag):
        # u o d where u has a single entry at (l, k): result entries (l, kk)
        out = {}
        for (kk0, kk), dv in dmat.items():
            if kk0 != k:
                continue
            for j, c in self.A.mul({i: Fraction(1)}, dv).items():
                out[(tag, l, kk, j)] = out.get((tag, l, kk, j), 0) + c
        return out

    def hom(self, C: TwoTerm, D: TwoTerm, shift=0):
        """dim Hom(C, D[shift]) in the homotopy category, D[s]_n = D_{n-s}."""
        if shift not in (-1, 0, 1):
            raise E.UnsupportedShift("only shifts -1, 0, 1 are supported")
        dC, dD = self._dmat(C), self._dmat(D)
        if shift == 0:
            # chain maps: kernel of (f1, f0) -> dD f1 - f0 dC
            b1 = self._basis(C.deg1, D.deg1)
            b0 = self._basis(C.deg0, D.deg0)
            cols = []
            for (l, k, i) in b1:
                cols.append(self._post(dD, l, k, i, "x"))
            for (l, k, i) in b0:
                cols.append({key: -c for key, c in self._pre(dC, l, k, i, "x").items()})
            rank_phi = _column_rank(cols)
            # null-homotopic maps: h -> (h dC, dD h)
            hb = self._basis(C.deg0, D.deg1)
            psi = []
            for (l, k, i) in hb:
                v = dict(self._pre(dC, l, k, i, "one"))
                v.update(self._post(dD, l, k, i, "zero"))
                psi.append(v)
            return len(b1) + len(b0) - rank_phi - _column_rank(psi)
        if shift == -1:
            # maps C_0 -> D_1 killed by both differentials
            b = self._basis(C.deg0, D.deg1)
            cols = []
            for (l, k, i) in b:
                v = dict(self._post(dD, l, k, i, "a"))
                v.update(self._pre(dC, l, k, i, "b"))
                cols.append(v)
            return len(b) - _column_rank(cols)
        # shift == 1: Hom(C_1, D_0) modulo homotopies
        total = len(self._basis(C.deg1, D.deg0))
        cols = []
        for (l, k, i) in self._basis(C.deg1, D.deg1):
            cols.append(self._post(dD, l, k, i, "h"))
        for (l, k, i) in self._basis(C.deg0, D.deg0):
            cols.append(self._pre(dC, l, k, i, "h"))
        return total - _column_rank(cols)


def _column_rank(cols):
    """Rank of the linear map whose images of basis vectors are ``cols``.

    Equal to the rank of the span of the image vectors.
    """
    e = Echelon()
    for v in cols:
        e.add({k: c for k, c in v.items() if c})
    return e.rank


@dataclass
class TiltingReport:
    which: str
    t1_holds: bool
    dim_end: int
    dim_target: int
    cartan_end: list
    cartan_target: list
    cartan_match: bool
    correspondence: dict
    approximation_ok: bool
    details: dict = field(default_factory=dict)

    def to_json(self):
        return {"which": self.which, "t1_holds": self.t1_holds, "dim_end": self.dim_end,
                "dim_target": self.dim_target, "cartan_match": self.cartan_match,
                "approximation_ok": self.approximation_ok,
                "cartan_end": self.cartan_end, "cartan_target": self.cartan_target,
                "correspondence": self.correspondence, **self.details}


def end_data(calc, summands, vertices):
    """Self-extension check and Cartan matrix of End(T).

    Entry (x, y) is dim Hom(T_y, T_x), matching dim e_x A e_y for stalks.
    """
    t1 = True
    ext = []
    n = len(vertices)
    C = [[0] * n for _ in range(n)]
    for i, x in enumerate(vertices):
        for j, y in enumerate(vertices):
            Tx, Ty = summands[x], summands[y]
            C[i][j] = calc.hom(Ty, Tx, 0)
            for s in (-1, 1):
                h = calc.hom(Ty, Tx, s)
                if h:
                    t1 = False
                    ext.append({"from": y, "to": x, "shift": s, "dim": h})
    return t1, C, ext


def approximation_ok(calc, summands, vertices):
    """For each non-stalk summand P -> Q', every map P -> P_x with T_x a stalk
    factors through the differential."""
    A = calc.A
    stalks = [v for v in vertices if summands[v].is_stalk]
    for v in vertices:
        T = summands[v]
        if T.is_stalk:
            continue
        dmat = calc._dmat(T)
        for x in stalks:
            target = len(calc._basis(T.deg1, (x,)))
            cols = []
            for (l, k, i) in calc._basis(T.deg0, (x,)):
                cols.append(calc._pre(dmat, l, k, i, "p"))
            if _column_rank(cols) != target:
                return False
    return True


def _summands_T_xi(mut, mu_too=False):
    q = mut.base.quiver
    S = {v: stalk(v) for v in q.vertices}
    for L in mut.local:
        S[L.c] = cone(L.c, L.a, q.path(L.alpha), label="T_%s" % L.c)
        if mu_too:
            S[L.d] = cone(L.d, L.b, q.path(L.nu), label="T_%s" % L.d)
    return S


def _summands_That(mut):
    Q = mut.quiver
    S = {v: stalk(v) for v in Q.vertices}
    for L in mut.local:
        S[L.c] = cone(L.c, L.b, Q.path(L.beta), label="T_%s" % L.c)
    return S


def _compare(Cend, Ctarget, vertices, perm):
    pos = {v: k for k, v in enumerate(vertices)}
    for i, x in enumerate(vertices):
        for j, y in enumerate(vertices):
            if Cend[i][j] != Ctarget[pos[perm[x]]][pos[perm[y]]]:
                return False
    return True


def tilting_check(base_alg, mut_alg, which="T_xi"):
    """Build the requested complex and compare End with its target algebra."""
    mut = mut_alg.meta["mutation"]
    if which == "T_xi":
        over, target, S = base_alg, mut_alg, _summands_T_xi(mut)
        perm = {v: v for v in base_alg.vertices}
    elif which == "That_xi":
        over, target, S = mut_alg, base_alg, _summands_That(mut)
        perm = {v: v for v in base_alg.vertices}
    elif which == "T_xi_mu":
        over, target, S = base_alg, base_alg, _summands_T_xi(mut, mu_too=True)
        perm = {v: v for v in base_alg.vertices}
        for L in mut.local:
            perm[L.c], perm[L.d] = L.d, L.c
    else:
        raise E.SpecMismatch("unknown complex %r" % which)
    if set(over.vertices) != set(target.vertices):
        raise E.SpecMismatch("vertex sets of source and target algebras differ")
    fa = FiniteAlgebra(over.oracle())
    calc = HomCalculator(fa)
    verts = list(over.vertices)
    t1, Cend, ext = end_data(calc, S, verts)
    ft = FiniteAlgebra(target.oracle())
    pos = {v: k for k, v in enumerate(verts)}
    Ctar = [[len(ft.between.get((x, y), [])) for y in verts] for x in verts]
    ident = {v: v for v in verts}
    match = _compare(Cend, Ctar, verts, perm)
    return TiltingReport(
        which=which, t1_holds=t1, dim_end=sum(map(sum, Cend)),
        dim_target=len(ft.basis), cartan_end=Cend, cartan_target=Ctar,
        cartan_match=match, correspondence={k: v for k, v in perm.items() if k != v},
        approximation_ok=approximation_ok(calc, S, verts),
        details={"self_extensions": ext,
                 "cartan_match_identity": _compare(Cend, Ctar, verts, ident)})
