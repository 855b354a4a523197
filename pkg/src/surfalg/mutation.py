"""Algebraic mutation of a weighted triangulation algebra at virtual arrows.

For each chosen virtual arrow xi_i: c_i -> d_i the local picture is

    alpha_i: a_i -> c_i   xi_i: c_i -> d_i   delta_i: d_i -> a_i   (one f-orbit)
    beta_i:  c_i -> b_i   nu_i: b_i -> d_i   mu_i:    d_i -> c_i   (another)

The mutated quiver drops xi_i and mu_i, reverses alpha_i and beta_i, and adds
tau_i: a_i -> b_i.  Removing c_i (and alpha_i, beta_i) gives the reduced
quiver on which the permutations f*, g* live.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import errors as E
from .algebra import (PresentedAlgebra, Relation, gabriel_quiver, singular_spherical,
                      relation_order)
from .quiver_core import Arrow, Quiver, WeightedQuiver, Weights, e_add, elem


@dataclass
class Local:
    xi: str
    mu: str
    alpha: str
    delta: str
    beta: str
    nu: str
    a: str
    b: str
    c: str
    d: str
    sigma: str
    rho: str
    gamma: str
    omega: str
    tau: str = ""


@dataclass
class MutationSpec:
    base: WeightedQuiver          # weights normalized so chosen orbits have c = 1
    original: WeightedQuiver
    xi: tuple
    local: tuple
    tau_labels: tuple = ()


def validate_mutation(wq: WeightedQuiver, xi, tau_labels=None) -> MutationSpec:
    tq, q = wq.tq, wq.quiver
    xi = tuple(str(x) for x in xi)
    if not xi:
        raise E.NotVirtualOrbit("no arrows chosen for mutation")
    if len(q.vertices) < 4:
        raise E.TooFewVertices("mutation needs at least four vertices")
    seen = set()
    for x in xi:
        if not q.has_arrow(x):
            raise E.UnknownArrow("unknown arrow %r" % x, arrow=x)
        if tq.n(x) != 2 or wq.m(x) != 1 or q.arrow(x).is_loop:
            raise E.NotVirtualOrbit("%r is not in a virtual orbit of length two" % x, arrow=x)
        k = tq.orbit_index[x]
        if k in seen:
            raise E.OrbitRepeated("orbit of %r chosen twice" % x, arrow=x)
        seen.add(k)
    if singular_spherical(wq):
        raise E.SingularSpherical("spherical quiver with unit weights and parameter product one")
    f, g, ginv = tq.f, tq.g, tq.g_inv
    local = []
    for i, x in enumerate(xi):
        mu = g[x]
        alpha, delta = f[f[x]], f[x]
        beta, nu = f[mu], f[f[mu]]
        L = Local(xi=x, mu=mu, alpha=alpha, delta=delta, beta=beta, nu=nu,
                  a=q.source(alpha), b=q.target(beta), c=q.source(x), d=q.target(x),
                  sigma=ginv[alpha], rho=g[delta], gamma=g[beta], omega=ginv[nu])
        for name in ("alpha", "delta", "beta", "nu"):
            arr = getattr(L, name)
            if tq.orbit_index[arr] in seen:
                raise E.LocalShapeError("%s of %r lies in a chosen orbit" % (name, x), arrow=x)
        if tq.n(alpha) < 3 or tq.n(nu) < 3:
            raise E.LocalShapeError("orbits through the local square are too short at %r" % x,
                                    arrow=x)
        L.tau = "tau.%s" % (tau_labels[i] if tau_labels else i + 1)
        local.append(L)
    # chosen orbits are normalized to parameter 1
    c = list(wq.w.c)
    for k in seen:
        c[k] = Fraction(1)
    base = WeightedQuiver(tq, Weights(wq.w.m, tuple(c)))
    return MutationSpec(base, wq, xi, tuple(local), tuple(tau_labels or ()))


class Mutation:
    """The mutated quiver, its reduced form with f*, g*, and weights."""

    def __init__(self, spec: MutationSpec):
        self.spec = spec
        self.base = spec.base
        wq, q, tq = spec.base, spec.base.quiver, spec.base.tq
        self.local = spec.local
        removed = {L.xi for L in self.local} | {L.mu for L in self.local}
        rev = {}
        for L in self.local:
            rev[L.alpha] = Arrow(L.alpha, L.c, L.a)
            rev[L.beta] = Arrow(L.beta, L.b, L.c)
        arrows = []
        for a in q.arrows:
            if a.id in removed:
                continue
            arrows.append(rev.get(a.id, a))
        for L in self.local:
            arrows.append(Arrow(L.tau, L.a, L.b))
        self.quiver = Quiver(q.vertices, arrows)
        cs = {L.c for L in self.local}
        drop = {L.alpha for L in self.local} | {L.beta for L in self.local}
        self.star_arrows = tuple(a.id for a in arrows if a.id not in drop)
        self.star_vertices = tuple(v for v in q.vertices if v not in cs)
        self.taus = {L.tau for L in self.local}
        self.nus = {L.nu for L in self.local}
        self.deltas = {L.delta for L in self.local}
        Qx = self.quiver
        sa = set(self.star_arrows)
        self.tilde = {}
        for eta in self.star_arrows:
            if eta in self.deltas:
                self.tilde[eta] = eta
                continue
            outs = [x for x in Qx.out_arrows(Qx.source(eta)) if x in sa]
            if len(outs) != 2:
                raise E.LocalShapeError("reduced quiver is not 2-regular at %r" % Qx.source(eta))
            self.tilde[eta] = outs[1] if outs[0] == eta else outs[0]
        self.fs = {}
        for eta in self.star_arrows:
            self.fs[eta] = tq.f[eta] if eta not in self.taus else None
        for L in self.local:
            self.fs[L.nu] = L.delta
            self.fs[L.delta] = L.tau
            self.fs[L.tau] = L.nu
        for eta, x in self.fs.items():
            if x not in sa:
                raise E.LocalShapeError("f* leaves the reduced quiver at %r" % eta)
        self.gs = {eta: self.tilde[self.fs[eta]] for eta in self.star_arrows}
        self.gs_inv = {v: k for k, v in self.gs.items()}
        # orbits of g*
        seen, orbits = set(), []
        for eta in self.star_arrows:
            if eta in seen:
                continue
            cyc = [eta]
            seen.add(eta)
            x = self.gs[eta]
            while x != eta:
                cyc.append(x)
                seen.add(x)
                x = self.gs[x]
            orbits.append(tuple(cyc))
        self.orbits = tuple(orbits)
        self.orbit_index = {a: k for k, o in enumerate(orbits) for a in o}
        ms, cs_ = [], []
        tau_owner = {L.tau: L for L in self.local}
        for o in orbits:
            olds = {tq.orbit_index[a] for a in o if a not in self.taus}
            if len(olds) > 1:
                raise E.LocalShapeError("a g*-orbit meets several base orbits", orbit=list(o))
            if olds:
                (k,) = olds
            else:
                first = min((self.local.index(tau_owner[t]), t) for t in o)[1]
                k = tq.orbit_index[tau_owner[first].alpha]
            ms.append(wq.w.m[k])
            cs_.append(wq.w.c[k])
        self.m_star = tuple(ms)
        self.c_star = tuple(cs_)
        for eta in self.star_arrows:
            if self.mn(eta) < 2:
                raise E.AssumptionViolated("mutated weights give m*n* < 2 at %r" % eta)
        self.all_tau_orbit = any(all(a in self.taus for a in o) for o in orbits)

    # ------------------------------------------------------------ helpers
    def m(self, eta):
        return self.m_star[self.orbit_index[eta]]

    def c(self, eta):
        return self.c_star[self.orbit_index[eta]]

    def n(self, eta):
        return len(self.orbits[self.orbit_index[eta]])

    def mn(self, eta):
        return self.m(eta) * self.n(eta)

    def is_virtual(self, eta):
        return self.mn(eta) == 2

    def n_nu(self, eta):
        k = self.orbit_index[eta]
        return sum(1 for L in self.local if self.orbit_index[L.nu] == k)

    def word(self, eta, length):
        out = []
        for _ in range(length):
            out.append(eta)
            eta = self.gs[eta]
        return tuple(out)

    def A_word(self, eta):
        return self.word(eta, self.mn(eta) - 1)

    def B_word(self, eta):
        return self.word(eta, self.mn(eta))

    def C_word(self, L):
        return self.A_word(L.delta)[1:]

    def A_alpha_word(self, L):
        return (L.alpha,) + self.C_word(L)

    def B_alpha_word(self, L):
        return (L.alpha,) + self.C_word(L) + (L.beta,)

    def path(self, word):
        return self.quiver.path(*word) if word else None

    def A(self, eta):
        return self.path(self.A_word(eta))

    def B(self, eta):
        return self.path(self.B_word(eta))

    # ------------------------------------------------------------ relations
    def relations(self):
        rels, self.audit = [], []
        q, wq, tq = self.quiver, self.base, self.base.tq
        P = self.path
        for L in self.local:
            nt = self.tilde[L.nu]
            rels.append(Relation("comm*(%s)" % L.nu, elem(
                P((L.nu, L.delta)), (-1, P((L.beta, L.alpha))),
                (-self.c(nt), self.A(nt))), L.nu, 1))
            rels.append(Relation("zero*(%s %s)" % (L.alpha, L.tau),
                                 elem(P((L.alpha, L.tau))), L.alpha, 1))
            rels.append(Relation("zero*(%s %s)" % (L.tau, L.beta),
                                 elem(P((L.tau, L.beta))), L.tau, 1))
        for eta in self.star_arrows:
            if eta in self.nus:
                continue
            et = self.tilde[eta]
            rels.append(Relation("comm(%s)" % eta, elem(
                P((eta, self.fs[eta])), (-self.c(et), self.A(et))), eta, 2))
        # first zero family
        for eta in self.star_arrows:
            if eta in self.taus or eta in self.nus:
                continue
            why = None
            if eta not in self.deltas:
                if wq.is_virtual(tq.f[tq.f[eta]]):
                    why = "f^2 virtual"
                else:
                    b = tq.bar[eta]
                    if wq.is_virtual(tq.f[b]) and wq.m(b) == 1 and wq.n(b) == 3:
                        why = "f(bar) virtual with m=1, n=3"
            fe = self.fs[eta]
            word = (eta, fe, self.gs[fe])
            self._emit(rels, "zero1", eta, word, why, 3)
        # second zero family
        pre_nu = {self.gs_inv[nu] for nu in self.nus}
        for eta in self.star_arrows:
            why = None
            if eta in self.taus:
                L = next(L for L in self.local if L.tau == eta)
                if wq.m(L.nu) == 1 and wq.n(L.nu) == 3:
                    why = "tau with m(nu)=1, n(nu)=3"
            if why is None and eta in self.nus:
                why = "nu"
            if why is None and eta in pre_nu:
                why = "g*^-1(nu)"
            if why is None and eta not in self.taus:
                fe = tq.f[eta]
                if wq.is_virtual(fe):
                    why = "f virtual"
                elif wq.is_virtual(tq.f[fe]) and wq.m(fe) == 1 and wq.n(fe) == 3:
                    why = "f^2 virtual with m(f)=1, n(f)=3"
            ge = self.gs[eta]
            word = (eta, ge, self.fs[ge])
            self._emit(rels, "zero2", eta, word, why, 4)
        return relation_order(rels, q)

    def _emit(self, rels, kind, eta, word, why, clause):
        self.audit.append({"arrow": eta, "clause": kind, "path": list(word),
                           "emitted": why is None, "reason": why or ""})
        if why is None:
            rels.append(Relation("%s(%s)" % (kind, eta), elem(self.path(word)), eta, clause))

    # ------------------------------------------------------------ bases
    def _Bset(self, word):
        return [word[:k] for k in range(1, len(word))]

    def _Bcset(self, word):
        beta_of = {L.nu: L.beta for L in self.local}
        out = []
        for k, a in enumerate(word[:-1]):
            if a in beta_of:
                out.append(word[:k] + (beta_of[a],))
        return out

    def vertex_basis(self, x):
        q = self.quiver
        words = [()]
        cmap = {L.c: L for L in self.local}
        dmap = {L.d: L for L in self.local}
        if x in cmap:
            w = self.B_alpha_word(cmap[x])
            words += self._Bset(w) + self._Bcset(w) + [w]
        elif x in dmap:
            w = self.B_word(dmap[x].delta)
            words += self._Bset(w) + self._Bcset(w) + [w]
        else:
            sa = set(self.star_arrows)
            eta, et = [a for a in q.out_arrows(x) if a in sa]
            if self.is_virtual(eta):
                eta, et = et, eta
            if self.is_virtual(eta):
                raise E.AssumptionViolated("both reduced arrows at %r are virtual" % x)
            w = self.B_word(eta)
            words += self._Bset(w) + self._Bcset(w) + [w]
            if self.is_virtual(et):
                # for eta = nu_i the path nu_i delta_i already lies in B_eta; the
                # commutativity at nu_i makes beta_i alpha_i the independent one
                L = next((L for L in self.local if L.nu == eta), None)
                words.append((L.beta, L.alpha) if L else (eta, self.fs[eta]))
            else:
                w2 = self.B_word(et)
                words += self._Bset(w2) + self._Bcset(w2)
        if len(set(words)) != len(words):
            raise E.ClosedFormMismatch("repeated path in basis at %r" % x, vertex=x)
        return [q.stationary(x) if not w else q.path(*w) for w in words]

    def basis(self):
        out = []
        for x in self.quiver.vertices:
            out.extend(self.vertex_basis(x))
        return out

    def closed_form_dimension(self):
        tot = 0
        for eta in self.star_arrows:
            tot += self.m(eta) * (self.n(eta) + self.n_nu(eta))
        for L in self.local:
            tot += self.m(L.delta) * (self.n(L.delta) + self.n_nu(L.delta))
        return tot

    def counting_report(self):
        """Per-vertex basis sizes against the counting formulas."""
        rows = []
        sa = set(self.star_arrows)
        cmap = {L.c: L for L in self.local}
        dmap = {L.d: L for L in self.local}

        def term(e):
            return self.m(e) * (self.n(e) + self.n_nu(e))

        for x in self.quiver.vertices:
            got = len(self.vertex_basis(x))
            if x in cmap or x in dmap:
                L = cmap.get(x) or dmap.get(x)
                want, rule = term(L.delta), "c/d vertex"
            else:
                eta, et = [a for a in self.quiver.out_arrows(x) if a in sa]
                if self.is_virtual(eta):
                    eta, et = et, eta
                if self.is_virtual(et):
                    want, rule = term(eta) + 2, "one virtual"
                else:
                    want, rule = term(eta) + term(et), "two non-virtual"
            rows.append({"vertex": x, "rule": rule, "basis": got, "formula": want,
                         "ok": got == want})
        for eta in self.star_arrows:
            if self.is_virtual(eta):
                rows.append({"vertex": self.quiver.source(eta), "rule": "virtual term",
                             "basis": 2, "formula": term(eta), "ok": term(eta) == 2})
        return rows

    def star_summary(self):
        return [{"orbit": list(o), "m": self.m_star[k], "c": str(self.c_star[k]),
                 "virtual": self.m_star[k] * len(o) == 2}
                for k, o in enumerate(self.orbits)]


def mutate(spec: MutationSpec, name=""):
    mut = Mutation(spec)
    rels = mut.relations()
    basis = mut.basis()
    closed = mut.closed_form_dimension()
    if len(basis) != closed:
        raise E.ClosedFormMismatch("mutated basis has %d elements, closed form %d"
                                   % (len(basis), closed))
    mn_max = max(mut.mn(e) for e in mut.star_arrows)
    return PresentedAlgebra(mut.quiver, rels, basis, name=name, closed_form=closed,
                            meta={"mutation": mut, "mn_max": mn_max + 1, "kind": "mutation"})


# ---------------------------------------------------------------- audits

def mutation_identities(alg: PresentedAlgebra, rs=None):
    """Check the socle and vanishing identities of the mutated algebra.

    Returns a dict name -> list of failure strings.
    """
    mut = alg.meta["mutation"]
    rs = rs or alg.oracle()
    q = mut.quiver
    P = mut.path
    nf = rs.normal_form
    out = {"socle_triple": [], "A_alpha_nu": [], "A_delta_beta": [], "B_alpha_socle": []}

    def annihilated(p):
        for a in q.arrow_ids:
            pa = q.path(a)
            for r in (pa * p, p * pa):
                if r is not None and not rs.reduces_to_zero(r):
                    return False
        return True

    for eta in mut.star_arrows:
        et = mut.tilde[eta]
        f1 = mut.fs[eta]
        trip = nf(elem(P((eta, f1, mut.fs[f1]))))
        lhs = nf(elem((mut.c(eta), mut.B(eta))))
        if lhs != trip:
            out["socle_triple"].append("c B != triple at %s" % eta)
        if et != eta:
            rhs = nf(elem((mut.c(et), mut.B(et))))
            if lhs != rhs:
                out["socle_triple"].append("c B differs from tilde at %s" % eta)
        if not lhs:
            out["socle_triple"].append("B* is zero at %s" % eta)
        elif not annihilated(mut.B(eta)):
            out["socle_triple"].append("B* not in socle at %s" % eta)
    for L in mut.local:
        if nf(elem(P(mut.A_alpha_word(L) + (L.nu,)))):
            out["A_alpha_nu"].append("A*_alpha nu != 0 at %s" % L.xi)
        if nf(elem(P(mut.A_word(L.delta) + (L.beta,)))):
            out["A_delta_beta"].append("A*_delta beta != 0 at %s" % L.xi)
        b = P(mut.B_alpha_word(L))
        if not nf(elem(b)):
            out["B_alpha_socle"].append("B*_alpha is zero at %s" % L.xi)
        elif not annihilated(b):
            out["B_alpha_socle"].append("B*_alpha not in socle at %s" % L.xi)
    return out


def short_orbit_branch_applies(mut, L):
    wq = mut.base
    return wq.m(L.alpha) == 1 and wq.n(L.alpha) == 3


def short_orbit_identities(alg: PresentedAlgebra, rs=None, literal=False, only=None):
    """Identities that hold when the orbit through alpha_i has m = 1, n = 3.

    With ``literal`` the last parts of the fourth and fifth identities are
    checked without the factor c_gamma.  Returns {xi: [failures]} for each
    i where the branch applies.  ``only`` restricts to one chosen arrow and
    refuses it when the branch does not apply.
    """
    mut = alg.meta["mutation"]
    if only is not None:
        L = next((L for L in mut.local if L.xi == only), None)
        if L is None:
            raise E.UnknownArrow("%r is not a mutated arrow" % only, arrow=only)
        if not short_orbit_branch_applies(mut, L):
            raise E.AssumptionViolated("orbit through alpha at %r does not have m = 1, n = 3"
                                       % only, arrow=only)
    rs = rs or alg.oracle()
    P = mut.path
    nf = rs.normal_form
    res = {}
    for L in mut.local:
        if not short_orbit_branch_applies(mut, L) or (only is not None and L.xi != only):
            continue
        fails = []
        al, be, de, nu, ta = L.alpha, L.beta, L.delta, L.nu, L.tau
        ga, rho, om = L.gamma, L.rho, L.omega
        cg = mut.c(ga)
        cr, cn, cd = mut.c(rho), mut.c(nu), mut.c(de)

        def eq(name, lhs, rhs):
            if nf(lhs) != nf(rhs):
                fails.append(name)

        eq("nu delta", elem(P((nu, de))), elem(P((be, al)), (cg, P((ga,)))))
        eq("rho omega", elem(P((rho, om))), elem((cg, P((ta,)))))
        gr = mut.base.tq.g[rho]
        if mut.tilde[om] != gr:
            fails.append("tilde(omega) != g(rho)")
        eq("omega nu delta", elem(P((om, nu, de))),
           elem(P((om, be, al)), (cg * cr, mut.A(gr))))
        eq("nu delta rho", elem(P((nu, de, rho))),
           elem(P((be, al, rho)), (cg * cn, mut.A(nu))))
        k = 1 if literal else cg
        eq("rho omega nu", elem(P((rho, om, nu))), elem((cg * cr, mut.A(rho))))
        eq("rho omega nu delta", elem(P((rho, om, nu, de))), elem((k * cr, mut.B(rho))))
        eq("delta rho omega", elem(P((de, rho, om))), elem((cg * cd, mut.A(de))))
        eq("delta rho omega nu", elem(P((de, rho, om, nu))), elem((k * cd, mut.B(de))))
        eq("alpha rho omega", elem(P((al, rho, om))), {})
        eq("rho omega beta", elem(P((rho, om, be))), {})
        gab = gabriel_quiver(mut.quiver, rs)
        for a in (ga, ta):
            if a in gab:
                fails.append("%s survives in the Gabriel quiver" % a)
        res[L.xi] = fails
    return res


def not_wta_witness(alg: PresentedAlgebra, rs=None):
    """A vertex of the Gabriel quiver with in- or out-degree outside {1, 2}."""
    rs = rs or alg.oracle()
    q = alg.quiver
    gab = gabriel_quiver(q, rs)
    outd = {v: 0 for v in q.vertices}
    ind = {v: 0 for v in q.vertices}
    for a in gab:
        outd[q.source(a)] += 1
        ind[q.target(a)] += 1
    for v in q.vertices:
        if outd[v] not in (1, 2) or ind[v] not in (1, 2):
            return {"vertex": v, "out": outd[v], "in": ind[v]}
    return None
