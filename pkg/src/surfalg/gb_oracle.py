"""Noncommutative Groebner completion for quotients of path algebras.

Monomials are paths; the order is by length first, then lexicographic in the
arrow declaration order, so the leading term of a relation is its longest
(then lex-largest) path.  Completion is Buchberger style: overlaps between
leading paths are resolved until every overlap reduces to zero.

The completion is certified when (a) every overlap of the final rule set has
been checked (none exceeded the degree cap) and (b) no irreducible path of
length ``cap - 1`` exists, so the set of standard monomials is finite.
"""

from __future__ import annotations

import heapq
import os
import time
from fractions import Fraction

from . import errors as E
from .quiver_core import Path

ZERO = Fraction(0)


def default_cap(weighted=None, mn_max=None):
    env = os.environ.get("SURFALG_DEGREE_CAP")
    if env:
        return int(env)
    if mn_max is None:
        mn_max = max(weighted.mn(a) for a in weighted.tq.arrows)
    return 2 * mn_max + 4


def _key(w):
    # max-heap key for the monomial order
    return (-len(w), tuple(-x for x in w))


def _lead(poly):
    return max(poly, key=lambda w: (len(w), w))


class RewriteSystem:
    """Completed rewriting system for ``KQ / I``.

    ``rules`` maps a leading word to its tail (a dict word -> coefficient);
    words are tuples of arrow indices.
    """

    def __init__(self, quiver, relations, degree_cap=None, time_limit=None):
        self.quiver = quiver
        self.ids = quiver.arrow_ids
        self.idx = quiver.index
        self.src = [quiver.source(a) for a in self.ids]
        self.tgt = [quiver.target(a) for a in self.ids]
        self.degree_cap = degree_cap
        self.time_limit = time_limit
        self.rules = {}
        self._lens = set()
        self._prefix = {}
        self._suffix = {}
        self.skipped = 0
        self.stats = {"reductions": 0, "overlaps": 0}
        polys = []
        for rel in relations:
            p = self._from_element(rel)
            if p:
                polys.append(p)
        self._complete(polys)

    # ------------------------------------------------------------ conversion
    def _from_element(self, x):
        out = {}
        for p, c in x.items():
            if not p.arrows:
                raise E.InconsistentRelations("relation has a stationary term")
            w = tuple(self.idx[a] for a in p.arrows)
            out[w] = out.get(w, ZERO) + Fraction(c)
        return {w: c for w, c in out.items() if c}

    def word_to_path(self, w):
        if not w:
            raise ValueError("empty word")
        return Path(self.src[w[0]], tuple(self.ids[i] for i in w), self.tgt[w[-1]])

    # ------------------------------------------------------------ reduction
    def _match(self, w):
        n = len(w)
        for k in self._lens_sorted:
            if k > n:
                break
            for i in range(n - k + 1):
                sub = w[i:i + k]
                if sub in self.rules:
                    return i, sub
        return None

    def _reduce(self, poly):
        """Full reduction of a poly of nonempty words."""
        work = dict(poly)
        heap = [(_key(w), w) for w in work]
        heapq.heapify(heap)
        out = {}
        while heap:
            _, w = heapq.heappop(heap)
            c = work.pop(w, ZERO)
            if not c:
                continue
            m = self._match(w)
            if m is None:
                out[w] = c
                continue
            self.stats["reductions"] += 1
            i, lm = m
            left, right = w[:i], w[i + len(lm):]
            for t, d in self.rules[lm].items():
                u = left + t + right
                v = work.get(u, ZERO) + c * d
                if v:
                    if u not in work:
                        heapq.heappush(heap, (_key(u), u))
                    work[u] = v
                else:
                    work.pop(u, None)
        return out

    # ------------------------------------------------------------ completion
    def _index_add(self, lm):
        self._lens.add(len(lm))
        for k in range(1, len(lm)):
            self._prefix.setdefault(lm[:k], set()).add(lm)
            self._suffix.setdefault(lm[-k:], set()).add(lm)

    def _index_remove(self, lm):
        for k in range(1, len(lm)):
            self._prefix[lm[:k]].discard(lm)
            self._suffix[lm[-k:]].discard(lm)
        self._lens = {len(w) for w in self.rules}

    def _overlaps(self, u):
        """S-polynomials between u and all rules (both orders, self included)."""
        cap = self.degree_cap
        n = len(u)
        out = []
        # u = x.s, v = s.y
        for k in range(1, n):
            for v in self._prefix.get(u[-k:], ()):
                if len(v) <= k:
                    continue
                if cap is not None and n + len(v) - k > cap:
                    self.skipped += 1
                    continue
                out.append((u, v, k))
        # v = x.s, u = s.y
        for k in range(1, n):
            for v in self._suffix.get(u[:k], ()):
                if len(v) <= k or v == u:
                    continue
                if cap is not None and n + len(v) - k > cap:
                    self.skipped += 1
                    continue
                out.append((v, u, k))
        return out

    def _spoly(self, u, v, k):
        # u = x s, v = s y with |s| = k; S = x.tail(v) - tail(u).y
        x, y = u[:-k], v[k:]
        s = {}
        for t, c in self.rules[v].items():
            w = x + t
            s[w] = s.get(w, ZERO) + c
        for t, c in self.rules[u].items():
            w = t + y
            s[w] = s.get(w, ZERO) - c
        return {w: c for w, c in s.items() if c}

    def _insert(self, p, queue):
        """Add reduced nonzero poly p as a rule; returns displaced polys."""
        lm = _lead(p)
        c = p[lm]
        tail = {w: -d / c for w, d in p.items() if w != lm}
        displaced = []
        for old in [w for w in self.rules if len(w) > len(lm) and _contains(w, lm)]:
            t = self.rules.pop(old)
            self._index_remove(old)
            q = dict(t)
            q[old] = Fraction(-1)
            displaced.append(q)
        self.rules[lm] = tail
        self._index_add(lm)
        self._lens_sorted = sorted(self._lens)
        for ov in self._overlaps(lm):
            queue.append(ov)
        return displaced

    def _check_time(self, t0):
        if self.time_limit is not None and time.monotonic() - t0 > self.time_limit:
            raise E.CapExceeded("completion exceeded the time limit of %ss" % self.time_limit)

    def _complete(self, polys):
        t0 = time.monotonic()
        self._lens_sorted = []
        heap = []
        counter = 0

        def push(p):
            nonlocal counter
            lm = _lead(p)
            heapq.heappush(heap, ((len(lm), lm), counter, p))
            counter += 1

        for p in polys:
            push(p)
        while True:
            pairs = []
            while heap or pairs:
                self._check_time(t0)
                if pairs:
                    u, v, k = pairs.pop()
                    if u not in self.rules or v not in self.rules:
                        continue
                    self.stats["overlaps"] += 1
                    p = self._spoly(u, v, k)
                else:
                    p = heapq.heappop(heap)[2]
                p = self._reduce(p)
                if not p:
                    continue
                for q in self._insert(p, pairs):
                    push(q)
            # inter-reduce tails, then verify every overlap of the final set
            for lm in list(self.rules):
                self.rules[lm] = self._reduce(self.rules[lm])
            self.skipped = 0
            todo = []
            for lm in list(self.rules):
                for (u, v, k) in self._overlaps(lm):
                    if u == lm:
                        todo.append((u, v, k))
            new = False
            for (u, v, k) in todo:
                self._check_time(t0)
                p = self._reduce(self._spoly(u, v, k))
                if p:
                    push(p)
                    new = True
            if not new:
                break

    # ------------------------------------------------------------ queries
    def normal_form(self, x):
        """Normal form of an element (dict Path -> coef)."""
        stat = {}
        poly = {}
        for p, c in x.items():
            if not p.arrows:
                stat[p] = stat.get(p, ZERO) + Fraction(c)
            else:
                w = tuple(self.idx[a] for a in p.arrows)
                poly[w] = poly.get(w, ZERO) + Fraction(c)
        out = {p: c for p, c in stat.items() if c}
        for w, c in self._reduce({w: c for w, c in poly.items() if c}).items():
            out[self.word_to_path(w)] = c
        return out

    def is_zero(self, x):
        return not self.normal_form(x)

    def reduces_to_zero(self, path):
        return self.is_zero({path: Fraction(1)})

    def _irreducible_ext(self, w):
        for k in self._lens_sorted:
            if k > len(w):
                break
            if w[-k:] in self.rules:
                return False
        return True

    def standard_monomials(self, limit=None):
        """All irreducible paths, stationary ones included, grouped by source.

        Raises CapExceeded if an irreducible path reaches ``limit`` arrows.
        """
        if limit is None:
            limit = self.degree_cap
        out = []
        q = self.quiver
        for v in q.vertices:
            out.append(Path(v, (), v))
            stack = [(self.idx[a],) for a in q.out_arrows(v)]
            while stack:
                w = stack.pop()
                if not self._irreducible_ext(w):
                    continue
                if limit is not None and len(w) >= limit:
                    raise E.CapExceeded(
                        "irreducible path of length %d found; quotient may be infinite "
                        "or the cap too small" % len(w), cap=limit)
                out.append(self.word_to_path(w))
                for a in q.out_arrows(self.tgt[w[-1]]):
                    stack.append(w + (self.idx[a],))
        return out

    def certificate(self):
        """(complete, bounded): no overlap was skipped, and no irreducible path
        reaches cap - 1 arrows.  Together these make the standard monomials a
        basis of a finite-dimensional quotient."""
        complete = self.skipped == 0
        try:
            self.standard_monomials(limit=self.degree_cap - 1 if self.degree_cap else None)
            bounded = True
        except E.CapExceeded:
            bounded = False
        return complete, bounded


def _contains(w, sub):
    k = len(sub)
    for i in range(len(w) - k + 1):
        if w[i:i + k] == sub:
            return True
    return False


# ---------------------------------------------------------------- front door

def complete(quiver, relations, degree_cap, retry=True, time_limit=60.0):
    """Complete and certify; retries once with a doubled cap."""
    caps = [degree_cap, 2 * degree_cap] if retry else [degree_cap]
    last = None
    for cap in caps:
        try:
            rs = RewriteSystem(quiver, relations, degree_cap=cap, time_limit=time_limit)
            if rs.skipped:
                raise E.CapExceeded("overlaps beyond degree cap %d were not checked" % cap, cap=cap)
            rs.standard_monomials(limit=cap - 1)
            return rs
        except E.CapExceeded as exc:
            last = exc
    raise last


def oracle_cartan(rs, vertices=None):
    vertices = list(vertices or rs.quiver.vertices)
    pos = {v: k for k, v in enumerate(vertices)}
    C = [[0] * len(vertices) for _ in vertices]
    for p in rs.standard_monomials():
        C[pos[p.source]][pos[p.target]] += 1
    return C


def oracle_dimension(rs):
    return len(rs.standard_monomials())
