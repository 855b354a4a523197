"""Regression suite over the bundled corpus.

Every row is a named check belonging to one numbered criterion and a
category (``dims``, ``mutation``, ``cartan``, ``oracle``, ``identities``,
``counting``, ``tilting``, ``fuzz``).  Golden values live in
``corpus/golden.json`` as small arithmetic formulas in m and n.
"""

from __future__ import annotations

import ast
import itertools
import json
import operator
import random
from dataclasses import asdict, dataclass
from fractions import Fraction
from functools import lru_cache

from . import corpus, errors as E, fuzz
from .algebra import (basis_is_independent, build_wta, compare_with_oracle, socle_check)
from .mutation import (mutate, mutation_identities,
                       short_orbit_identities, validate_mutation)
from .quiver_core import WeightedQuiver, make_weights
from .tilting import tilting_check

CATEGORIES = ("dims", "mutation", "cartan", "oracle", "identities", "counting", "tilting", "fuzz")
CRITERION = {c: k + 1 for k, c in enumerate(CATEGORIES)}

FUZZ_COUNT = 200
FUZZ_SEED = 20240607


@dataclass
class Row:
    criterion: int
    category: str
    name: str
    ok: bool
    detail: str = ""


# ------------------------------------------------------------- formulas

_OPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul}


def evaluate(formula, env):
    """Integer arithmetic on names from ``env``; nothing else is allowed."""
    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return node.value
        if isinstance(node, ast.Name):
            return env[node.id]
        if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            return -ev(node.operand)
        raise ValueError("unsupported formula %r" % formula)
    return ev(ast.parse(str(formula), mode="eval"))


def grid_points(grid):
    keys = sorted(grid)
    for vals in itertools.product(*(grid[k] for k in keys)):
        yield dict(zip(keys, vals))


def load_golden(path=None):
    if path is None:
        return corpus.load("golden.json")
    with open(path) as fh:
        return json.load(fh)


# ------------------------------------------------------------- instances

LAM = Fraction(2)


def _ex42_cgamma(m):
    # parameter 5/3 on the orbit through gamma, so the branch identities see c_gamma != 1
    q = corpus.tq("ex42")
    return WeightedQuiver(q, make_weights(q, {"alpha": (m, 2), "nu": (1, Fraction(5, 3)),
                                              "xi": (1, 1)}))


BASES = {
    "disc": lambda m=1, n=1: corpus.disc(m, LAM),
    "ex42": lambda m=1, n=1: corpus.ex42(m, LAM),
    "sphere": lambda m=1, n=1: corpus.sphere(m, n),
    "ex66": lambda m=1, n=1: corpus.ex66(m),
    "torus": lambda m=1, n=1: corpus.torus(m),
    "torus_blowup": lambda m=1, n=1: corpus.torus_blowup()[1],
    "ex66_blowup": lambda m=1, n=1: corpus.ex66_blowup(m)[1],
}

MUTATIONS = {
    "disc_xi": lambda m=1, n=1: (corpus.disc(m, LAM), ["xi"]),
    "ex42_xi": lambda m=1, n=1: (corpus.ex42(m, LAM), ["xi"]),
    "ex42_mu": lambda m=1, n=1: (corpus.ex42(m, LAM), ["mu"]),
    "ex42_mu_cgamma": lambda m=1, n=1: (_ex42_cgamma(m), ["mu"]),
    "sphere_xi": lambda m=1, n=1: (corpus.sphere(m, n), ["xi"]),
    "sphere_xi_eta": lambda m=1, n=1: (corpus.sphere(m, n), ["xi", "eta"]),
    "sphere_xi_zeta": lambda m=1, n=1: (corpus.sphere(m, n), ["xi", "zeta"]),
    "sphere_T2": lambda m=1, n=1: (corpus.sphere_T_weighted(2, m, n), corpus.sphere_T_xi(2)),
    "sphere_T3": lambda m=1, n=1: (corpus.sphere_T_weighted(3, m, n), corpus.sphere_T_xi(3)),
    "torus_def": lambda m=1, n=1: corpus.torus_deformation_xi()[1:],
    "ex66_def": lambda m=1, n=1: corpus.ex66_deformation_xi(m)[1:],
}

GRID = {"disc": {"m": [1, 2, 3]}, "ex42": {"m": [1, 2, 3]},
        "sphere": {"m": [1, 2, 3], "n": [1, 2, 3]}, "ex66": {"m": [2, 3]},
        "torus": {}, "torus_blowup": {}, "ex66_blowup": {"m": [1, 2, 3]},
        "disc_xi": {"m": [1, 2, 3]}, "ex42_xi": {"m": [1, 2, 3]}, "ex42_mu": {"m": [1, 2, 3]},
        "ex42_mu_cgamma": {"m": [1, 2, 3]},
        "sphere_xi": {"m": [1, 2, 3], "n": [1, 2, 3]},
        "sphere_xi_eta": {"m": [1, 2, 3], "n": [1, 2, 3]},
        "sphere_xi_zeta": {"m": [1, 2, 3], "n": [1, 2, 3]},
        "sphere_T2": {"m": [1, 2], "n": [1, 2]}, "sphere_T3": {"m": [1, 2], "n": [1, 2]},
        "torus_def": {}, "ex66_def": {"m": [1, 2, 3]}}


@lru_cache(maxsize=None)
def algebra(name, m=1, n=1):
    if name in BASES:
        return build_wta(BASES[name](m=m, n=n), name=name)
    wq, xi = MUTATIONS[name](m=m, n=n)
    return mutate(validate_mutation(wq, xi), name=name)


@lru_cache(maxsize=None)
def base_of(name, m=1, n=1):
    wq, xi = MUTATIONS[name](m=m, n=n)
    return build_wta(validate_mutation(wq, xi).base, name=name + "_base")


def _label(name, pt):
    if not pt:
        return name
    return "%s %s" % (name, " ".join("%s=%s" % kv for kv in sorted(pt.items())))


def _points(name):
    pts = list(grid_points(GRID[name]))
    return pts or [{}]


# ------------------------------------------------------------- criteria

def _formula_rows(category, entries):
    rows = []
    for ent in entries:
        name = ent["instance"]
        bad = []
        for pt in list(grid_points(ent["grid"])) or [{}]:
            want = evaluate(ent["formula"], pt)
            alg = algebra(name, **pt)
            if alg.dimension != want or alg.closed_form != want:
                bad.append("%s: basis %d, closed form %s, golden %d"
                           % (_label(name, pt), alg.dimension, alg.closed_form, want))
        rows.append(Row(CRITERION[category], category, "%s = %s" % (name, ent["formula"]),
                        not bad, "; ".join(bad)))
    return rows


def crit_dims(golden):
    return _formula_rows("dims", golden["dims"])


def crit_mutation(golden):
    return _formula_rows("mutation", golden["mutation_dims"])


def crit_cartan(golden):
    rows = []
    for ent in golden["cartan"]:
        name = ent["instance"]
        bad = []
        for pt in list(grid_points(ent["grid"])) or [{}]:
            want = [[evaluate(x, pt) for x in row] for row in ent["matrix"]]
            alg = algebra(name, **pt)
            if alg.cartan() != want:
                bad.append("%s: basis Cartan %s" % (_label(name, pt), alg.cartan()))
            oc = compare_with_oracle(alg)["cartan"]
            if oc != want:
                bad.append("%s: oracle Cartan %s" % (_label(name, pt), oc))
        rows.append(Row(3, "cartan", "Cartan %s" % name, not bad, "; ".join(bad)))
    return rows


def crit_oracle(golden):
    rows = []
    for name in list(BASES) + list(MUTATIONS):
        bad = []
        for pt in _points(name):
            alg = algebra(name, **pt)
            r = compare_with_oracle(alg)
            if not r["agrees"]:
                bad.append("%s: oracle dim %d vs %d, pairs %s"
                           % (_label(name, pt), r["dimension"], alg.dimension, r["mismatches"][:3]))
            elif not basis_is_independent(alg):
                bad.append("%s: basis dependent modulo the ideal" % _label(name, pt))
        rows.append(Row(4, "oracle", "oracle %s" % name, not bad, "; ".join(bad)))
    return rows


def crit_identities(golden):
    rows = []
    for name in BASES:
        bad = []
        for pt in _points(name):
            fails = socle_check(algebra(name, **pt))
            if fails:
                bad.append("%s: %s" % (_label(name, pt), fails[:3]))
        rows.append(Row(5, "identities", "socle %s" % name, not bad, "; ".join(bad)))
    for name in MUTATIONS:
        bad = []
        branch = 0
        for pt in _points(name):
            alg = algebra(name, **pt)
            ids = mutation_identities(alg)
            for k, v in ids.items():
                if v:
                    bad.append("%s %s: %s" % (_label(name, pt), k, v[:3]))
            for xi, fails in short_orbit_identities(alg).items():
                branch += 1
                if fails:
                    bad.append("%s branch at %s: %s" % (_label(name, pt), xi, fails))
        note = "" if bad else ("short-orbit branch checked %d times" % branch if branch else "")
        rows.append(Row(5, "identities", "mutation identities %s" % name, not bad,
                        "; ".join(bad) or note))
    return rows


def crit_counting(golden):
    rows = []
    for name in MUTATIONS:
        bad = []
        for pt in _points(name):
            mut = algebra(name, **pt).meta["mutation"]
            for r in mut.counting_report():
                if not r["ok"]:
                    bad.append("%s vertex %s (%s): %d vs %d" % (
                        _label(name, pt), r["vertex"], r["rule"], r["basis"], r["formula"]))
        rows.append(Row(6, "counting", "counting %s" % name, not bad, "; ".join(bad)))
    return rows


TILTING_CASES = [("disc_xi", 1), ("disc_xi", 2), ("ex42_xi", 1), ("ex42_mu", 1), ("torus_def", 1)]


def crit_tilting(golden):
    rows = []
    for name, m in TILTING_CASES:
        mut_alg = algebra(name, m=m)
        base = base_of(name, m=m)
        for which in ("T_xi", "That_xi", "T_xi_mu"):
            rep = tilting_check(base, mut_alg, which)
            ok = rep.t1_holds and rep.dim_end == rep.dim_target and rep.cartan_match \
                and rep.approximation_ok
            detail = "dim End %d, target %d" % (rep.dim_end, rep.dim_target)
            if not rep.t1_holds:
                detail += ", self-extensions %s" % rep.details["self_extensions"][:3]
            if not rep.cartan_match:
                detail += ", Cartan mismatch"
            if not rep.approximation_ok:
                detail += ", approximation fails"
            rows.append(Row(7, "tilting", "%s %s m=%d" % (which, name, m), ok, detail))
    return rows


def _quiver_invariants(tq):
    q, f, g, bar = tq.quiver, tq.f, tq.g, tq.bar
    for a in q.arrow_ids:
        if f[f[f[a]]] != a or q.source(f[a]) != q.target(a):
            return "f at %s" % a
        if bar[bar[a]] != a or bar[a] == a or q.source(bar[a]) != q.source(a):
            return "bar at %s" % a
        if g[a] != bar[f[a]]:
            return "g at %s" % a
        b = bar[a]
        if f[f[a]] != tq.g_power(b, tq.n(b) - 1):
            return "f^2 vs g-power at %s" % a
    for v in q.vertices:
        if len(q.out_arrows(v)) != 2 or len(q.in_arrows(v)) != 2:
            return "2-regularity at %s" % v
    return None


def fuzz_instances(count=FUZZ_COUNT, seed=FUZZ_SEED, max_vertices=12):
    rng = random.Random(seed)
    for _ in range(count):
        yield fuzz.random_instance(rng, max_vertices)


def fuzz_check(wq):
    """Return (failures, number of mutations checked) for one weighted quiver."""
    bad = []
    inv = _quiver_invariants(wq.tq)
    if inv:
        bad.append("quiver invariant: " + inv)
    try:
        alg = build_wta(wq, allow_possibly_singular=True)
    except E.SingularSpherical:
        return bad, 0
    C = alg.cartan()
    if any(C[i][j] != C[j][i] for i in range(len(C)) for j in range(len(C))):
        bad.append("Cartan not symmetric")
    if alg.dimension != wq.closed_form_dimension():
        bad.append("basis %d vs closed form %d" % (alg.dimension, wq.closed_form_dimension()))
    muts = 0
    for x in wq.quiver.arrow_ids:
        try:
            spec = validate_mutation(wq, [x])
        except E.ValidationError:
            continue
        mut_alg = mutate(spec)
        muts += 1
        mut = mut_alg.meta["mutation"]
        if mut_alg.dimension != mut.closed_form_dimension():
            bad.append("mutation at %s: basis %d vs closed form %d"
                       % (x, mut_alg.dimension, mut.closed_form_dimension()))
    return bad, muts


def crit_fuzz(golden, count=FUZZ_COUNT, seed=FUZZ_SEED):
    bad, muts = [], 0
    for k, (wq, _) in enumerate(fuzz_instances(count, seed)):
        b, n = fuzz_check(wq)
        muts += n
        bad += ["instance %d: %s" % (k, x) for x in b]
    return [Row(8, "fuzz", "%d random weighted quivers" % count, not bad,
                "; ".join(bad[:5]) or "%d single-arrow mutations checked" % muts)]


RUNNERS = {"dims": crit_dims, "mutation": crit_mutation, "cartan": crit_cartan,
           "oracle": crit_oracle, "identities": crit_identities, "counting": crit_counting,
           "tilting": crit_tilting, "fuzz": crit_fuzz}


def _select(only):
    if not only:
        return list(CATEGORIES)
    out = []
    for tok in only:
        for t in str(tok).split(","):
            t = t.strip()
            if not t:
                continue
            if t.isdigit() and 1 <= int(t) <= len(CATEGORIES):
                t = CATEGORIES[int(t) - 1]
            if t not in RUNNERS:
                raise E.ValidationError("unknown regression category %r" % t)
            if t not in out:
                out.append(t)
    return out


def _run_category(args):
    cat, golden = args
    try:
        return RUNNERS[cat](golden)
    except E.SurfAlgError as exc:
        return [Row(CRITERION[cat], cat, cat, False, "%s: %s" % (exc.code, exc))]


def run(only=None, golden_path=None, jobs=1):
    """Run the selected categories and return a list of rows."""
    cats = _select(only)
    golden = load_golden(golden_path)
    work = [(c, golden) for c in cats]
    if jobs and jobs > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_run_category, work))
    else:
        parts = [_run_category(w) for w in work]
    return [r for part in parts for r in part]


def summary(rows):
    return {"schema": "surfalg/1", "ok": all(r.ok for r in rows),
            "passed": sum(r.ok for r in rows), "failed": sum(not r.ok for r in rows),
            "rows": [asdict(r) for r in rows]}


def render(rows):
    lines = []
    for r in rows:
        lines.append("%-4s %d %-10s %s%s" % ("PASS" if r.ok else "FAIL", r.criterion, r.category,
                                             r.name, ("  [%s]" % r.detail) if r.detail else ""))
    s = summary(rows)
    lines.append("%d passed, %d failed" % (s["passed"], s["failed"]))
    return "\n".join(lines)
