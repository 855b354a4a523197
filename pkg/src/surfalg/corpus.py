"""Bundled worked instances.

Quivers and surfaces live as JSON documents under ``corpus/``; the functions
here attach the parametric weights used throughout the tests.
"""

from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources

from .quiver_core import WeightedQuiver, make_weights, triangulation_quiver_from_json
from .surface import (Surface, blow_up, blow_up_weights, epsilon_to_xi, quiver_from_surface,
                      validate_surface)


def load(name):
    with resources.files("surfalg").joinpath("corpus", name).open() as fh:
        return json.load(fh)


def names():
    return sorted(p.name for p in resources.files("surfalg").joinpath("corpus").iterdir()
                  if p.name.endswith(".json"))


def tq(name):
    return triangulation_quiver_from_json(load(name + ".quiver.json"))


def surface(name):
    return validate_surface(load(name + ".surface.json"))


def disc(m=1, lam=1):
    q = tq("disc")
    return WeightedQuiver(q, make_weights(q, {"alpha": (m, lam), "xi": (1, 1)}))


def ex42(m=1, lam=1):
    q = tq("ex42")
    return WeightedQuiver(q, make_weights(q, {"alpha": (m, lam), "nu": (1, 1), "xi": (1, 1)}))


def sphere(m=1, n=1, a=2, b=3):
    q = tq("sphere")
    return WeightedQuiver(q, make_weights(
        q, {"alpha": (m, a), "rho": (n, b), "xi": (1, 1), "eta": (1, 1)}))


def torus(m=1, c=1):
    q = quiver_from_surface(surface("torus"))
    return WeightedQuiver(q, make_weights(q, {"t0.0": (m, c)}))


# the drawing of the blown-up torus puts edge 2's a-side on the second triangle
TORUS_A_SIDE = {"2": 1, "3": 0}


def blown_up(s: Surface, base: WeightedQuiver, I, a_side=None):
    res = blow_up(s, I, a_side=a_side)
    ntq = quiver_from_surface(res.surface)
    nw = blow_up_weights(base.tq, base.w, res, ntq)
    return res, WeightedQuiver(ntq, nw)


def torus_blowup(a_side=TORUS_A_SIDE):
    return blown_up(surface("torus"), torus(), ["2", "3"], a_side)


def torus_deformation_xi(eps=None, a_side=TORUS_A_SIDE):
    res, wq = torus_blowup(a_side)
    return res, wq, epsilon_to_xi(res, eps or {"2": 1, "3": 1})


def ex66(m=3, lam=Fraction(3, 2)):
    q = quiver_from_surface(surface("ex66"))
    return WeightedQuiver(q, make_weights(
        q, {"t0.0": (m, 1), "t1.0": (m, 1), "t2.0": (m, 1), "t3.0": (1, lam)}))


def ex66_blowup(m=3, lam=Fraction(3, 2)):
    return blown_up(surface("ex66"), ex66(m, lam), ["1", "2", "3"])


def ex66_deformation_xi(m=3, lam=Fraction(3, 2), eps=None):
    res, wq = ex66_blowup(m, lam)
    return res, wq, epsilon_to_xi(res, eps or {"1": 1, "2": 1, "3": -1})


def sphere_T(r):
    """Triangles (a_i c_i d_i), (c_i a_{i+1} d_i) for i = 1..r, indices mod r."""
    edges, tris = [], []
    for i in range(1, r + 1):
        edges += ["a%d" % i, "c%d" % i, "d%d" % i]
    for i in range(1, r + 1):
        j = i % r + 1
        tris.append(["a%d" % i, "c%d" % i, "d%d" % i])
        tris.append(["c%d" % i, "a%d" % j, "d%d" % i])
    return validate_surface({"edges": edges, "triangles": tris, "boundary": []})


def sphere_T_weighted(r, m=1, n=1, a=2, b=3):
    q = quiver_from_surface(sphere_T(r))
    ws = {"t0.0": (m, a), "t0.2": (n, b)}
    for i in range(r):
        ws["t%d.1" % (2 * i)] = (1, 1)
    return WeightedQuiver(q, make_weights(q, ws))


def sphere_T_xi(r):
    return ["t%d.1" % (2 * i) for i in range(r)]
