"""Random triangulated surfaces and admissible weights for property tests."""

from __future__ import annotations

import random
from fractions import Fraction

from . import errors as E
from .quiver_core import WeightedQuiver, Weights
from .surface import Surface, blow_up, blow_up_weights, quiver_from_surface, validate_surface

PARAMS = [Fraction(x) for x in (1, 2, 3, -1)] + [Fraction(1, 2), Fraction(-2, 3), Fraction(5, 7)]


def random_surface(rng: random.Random, n_edges):
    """Glue triangles at random; boundary edges are chosen to fix the parity."""
    for _ in range(200):
        b = rng.randrange(0, n_edges + 1)
        if (2 * n_edges - b) % 3 or 2 * n_edges - b == 0:
            continue
        edges = ["e%d" % k for k in range(n_edges)]
        bnd = rng.sample(edges, b)
        slots = [e for e in edges for _ in range(1 if e in bnd else 2)]
        rng.shuffle(slots)
        tris = [slots[k:k + 3] for k in range(0, len(slots), 3)]
        if any(len(set(t)) == 1 for t in tris):
            continue
        s = validate_surface({"edges": edges, "triangles": tris, "boundary": bnd})
        try:
            quiver_from_surface(s)
        except E.Disconnected:
            continue
        return s
    raise RuntimeError("could not draw a connected surface")


def admissible_weights(rng, tq, virtual_fixed=(), mmax=3):
    """Random weights, raised where needed until the admissibility bounds hold."""
    m = [rng.randint(1, mmax) for _ in tq.g_orbits]
    c = [rng.choice(PARAMS) for _ in tq.g_orbits]
    for k in virtual_fixed:
        m[k], c[k] = 1, Fraction(1)
    for _ in range(100):
        wq = WeightedQuiver(tq, Weights(tuple(m), tuple(c)))
        bad = wq.assumption_report()
        if not bad:
            return wq
        a, _ = bad[0]
        k = tq.orbit_index[a]
        if k in virtual_fixed:
            k = tq.orbit_index[tq.bar[a]]
        m[k] += 1
    raise RuntimeError("weights did not stabilise")


def random_instance(rng: random.Random, max_vertices=12, mmax=3):
    """A weighted triangulation quiver, sometimes with blown-up edges.

    Returns (weighted quiver, list of candidate virtual arrows for mutation).
    """
    n0 = rng.randint(2, max_vertices)
    s = random_surface(rng, n0)
    k = rng.randint(0, min(n0, (max_vertices - n0) // 3))
    tq = quiver_from_surface(s)
    if k == 0:
        return admissible_weights(rng, tq, mmax=mmax), []
    base = admissible_weights(rng, tq, mmax=mmax)
    I = rng.sample(list(s.edges), k)
    res = blow_up(s, I)
    ntq = quiver_from_surface(res.surface)
    nw = blow_up_weights(tq, base.w, res, ntq)
    wq = WeightedQuiver(ntq, nw)
    if wq.assumption_report():
        fixed = [ntq.orbit_index[res.local[i]["xi"]] for i in res.edges]
        wq = admissible_weights(rng, ntq, virtual_fixed=fixed, mmax=mmax)
    cands = []
    for i in res.edges:
        cands += [res.local[i]["xi"], res.local[i]["mu"]]
    return wq, cands
