"""Command line front end.

Exit codes: 0 success, 1 regression failure, 2 invalid input,
3 oracle or internal failure.
"""

from __future__ import annotations

import argparse
import json
import re
import sys

from . import corpus, errors as E, regress
from .algebra import (algebra_from_json, build_wta, compare_with_oracle, gabriel_quiver,
                      socle_check)
from .mutation import mutate, mutation_identities, validate_mutation
from .quiver_core import (WeightedQuiver, make_weights, parse_fraction,
                          triangulation_quiver_from_json)
from .surface import (blow_up, blow_up_weights, epsilon_to_xi, quiver_from_surface,
                      validate_surface)
from .tilting import tilting_check

SCHEMA = "surfalg/1"
EXIT_OK, EXIT_REGRESS, EXIT_INVALID, EXIT_INTERNAL = 0, 1, 2, 3


# ----------------------------------------------------------------- input

def read_document(ref):
    """A path, ``-`` for stdin, or ``corpus:NAME`` for a bundled document."""
    if ref.startswith("corpus:"):
        name = ref[len("corpus:"):]
        cands = [name] if name.endswith(".json") else [
            name + ".quiver.json", name + ".surface.json", name + ".json"]
        for c in cands:
            if c in corpus.names():
                return corpus.load(c)
        raise E.ValidationError("no bundled document named %r" % name,
                                available=corpus.names())
    try:
        if ref == "-":
            return json.load(sys.stdin)
        with open(ref) as fh:
            return json.load(fh)
    except OSError as exc:
        raise E.ValidationError("cannot read %s: %s" % (ref, exc.strerror)) from None
    except json.JSONDecodeError as exc:
        raise E.ValidationError("%s is not valid JSON: %s" % (ref, exc)) from None


def document_kind(doc):
    if not isinstance(doc, dict):
        raise E.ValidationError("input document must be a JSON object")
    if "triangles" in doc:
        return "surface"
    if {"quiver", "relations", "basis"} <= set(doc):
        return "algebra"
    if "arrows" in doc and "f" in doc:
        return "quiver"
    raise E.ValidationError("cannot tell whether the document is a quiver or a surface")


_ORBIT_REF = re.compile(r"^O\((.+)\)$")


def _parse_bindings(tokens, flag):
    """``REP=v`` or ``O(REP)=v`` pairs, or bare values in order."""
    named, positional = {}, []
    for tok in tokens or ():
        for part in str(tok).split(","):
            part = part.strip()
            if not part:
                continue
            if "=" in part:
                k, v = part.split("=", 1)
                k = k.strip()
                mo = _ORBIT_REF.match(k)
                named[mo.group(1) if mo else k] = v.strip()
            else:
                positional.append(part)
    if named and positional:
        raise E.InvalidWeights("%s mixes named and positional values" % flag)
    return named, positional


def _int_value(v, flag):
    try:
        return int(v)
    except ValueError:
        raise E.InvalidWeights("%s value %r is not an integer" % (flag, v)) from None


def _symbol(v):
    return v if isinstance(v, str) and v.isidentifier() else None


def resolve_weights(tq, doc_entries=None, m_tokens=None, c_tokens=None, parameters=None,
                    warn=None):
    """Merge document weights with inline bindings; inline wins.

    Document entries may use symbols (``"m": "m"``, ``"c": "lam"``) with
    defaults under ``parameters``.  Named bindings address a symbol, an
    orbit ``O(rep)`` or a bare arrow id.  Bare values bind the document's
    symbols in order of appearance, or, without symbols, the orbits whose
    length is not two.  Unbound orbits get m = 1, c = 1.
    """
    warn = warn or (lambda msg: print("warning: " + msg, file=sys.stderr))
    params = dict(parameters or {})
    table = {}
    if isinstance(doc_entries, dict):
        doc_entries = [{"rep": k, "m": v[0], "c": v[1]} for k, v in doc_entries.items()]
    for ent in doc_entries or ():
        rep = ent.get("rep")
        if rep not in tq.orbit_index:
            raise E.UnknownArrow("weight entry for unknown arrow %r" % rep, arrow=rep)
        k = tq.orbit_index[rep]
        if k in table:
            raise E.InvalidWeights("orbit of %r weighted twice" % rep, arrow=rep)
        table[k] = [ent.get("m", 1), ent.get("c", 1)]
    from_doc = set(table)
    symbols = ([], [])
    for k in sorted(table):
        for slot in (0, 1):
            sym = _symbol(table[k][slot])
            if sym and sym not in symbols[slot]:
                symbols[slot].append(sym)
    free = [k for k, o in enumerate(tq.g_orbits) if len(o) != 2]
    bound = {}
    for slot, flag, tokens in ((0, "--m", m_tokens), (1, "--c", c_tokens)):
        named, positional = _parse_bindings(tokens, flag)
        conv = (lambda v: _int_value(v, flag)) if slot == 0 else parse_fraction
        slots = symbols[slot] or free
        if len(positional) > len(slots):
            raise E.InvalidWeights("%s got %d values for %d slots" % (flag, len(positional),
                                                                     len(slots)))
        binds = list(zip(slots, positional)) + list(named.items())
        for key, v in binds:
            v = conv(v)
            if isinstance(key, str) and key in symbols[slot]:
                bound[key] = v
                continue
            if isinstance(key, str):
                if key not in tq.orbit_index:
                    raise E.UnknownArrow("%s names unknown arrow or parameter %r" % (flag, key),
                                         arrow=key)
                key = tq.orbit_index[key]
            if key in from_doc and _symbol(table[key][slot]) is None and \
                    conv(table[key][slot]) != v:
                warn("%s overrides the document value for O(%s)" % (flag, tq.g_orbits[key][0]))
            table.setdefault(key, [1, 1])[slot] = v
    entries = []
    for k, orb in enumerate(tq.g_orbits):
        row = list(table.get(k, [1, 1]))
        for slot in (0, 1):
            sym = _symbol(row[slot])
            if sym:
                if sym in bound:
                    row[slot] = bound[sym]
                elif sym in params:
                    row[slot] = params[sym]
                else:
                    raise E.InvalidWeights("no value for parameter %r" % sym, parameter=sym)
        entries.append({"rep": orb[0], "m": row[0], "c": row[1]})
    return make_weights(tq, entries)


def _doc_weights(args, doc):
    entries, params = doc.get("weights"), doc.get("parameters")
    if getattr(args, "weights", None):
        wdoc = read_document(args.weights)
        if isinstance(wdoc, dict):
            entries, params = wdoc.get("weights", entries), wdoc.get("parameters", params)
        else:
            entries = wdoc
    return entries, params


def load_weighted(args):
    """Weighted quiver from the input document plus bindings.

    Returns (weighted quiver, surface or None, document).
    """
    doc = read_document(args.input)
    kind = document_kind(doc)
    if kind == "surface":
        s = validate_surface(doc)
        tq = quiver_from_surface(s)
    else:
        s = None
        tq = triangulation_quiver_from_json(doc)
    entries, params = _doc_weights(args, doc)
    w = resolve_weights(tq, entries, args.m, args.c, params)
    return WeightedQuiver(tq, w), s, doc


def _csv(value):
    return [x.strip() for x in str(value).split(",") if x.strip()] if value else []


def _signs(value):
    out = {}
    for part in _csv(value):
        if "=" not in part:
            raise E.MissingEpsilonValue("sign %r must look like EDGE=+1 or EDGE=-1" % part)
        k, v = part.split("=", 1)
        try:
            out[k.strip()] = int(v)
        except ValueError:
            raise E.MissingEpsilonValue("sign for %r is not an integer" % k) from None
    return out


def _a_side(value):
    out = {}
    for part in _csv(value):
        k, _, v = part.partition("=")
        try:
            out[k.strip()] = int(v)
        except ValueError:
            raise E.InvalidSurface("--a-side expects EDGE=TRIANGLE_INDEX, got %r" % part) from None
    return out


def _blow_up(args):
    wq, s, _ = load_weighted(args)
    if s is None:
        raise E.InvalidSurface("blow-ups need a surface document")
    res = blow_up(s, _csv(args.I), a_side=_a_side(args.a_side))
    ntq = quiver_from_surface(res.surface)
    nwq = WeightedQuiver(ntq, blow_up_weights(wq.tq, wq.w, res, ntq))
    return res, nwq


def _mutation_input(args):
    """(base weighted quiver, xi arrows) from --xi or from a deformation."""
    if getattr(args, "I", None):
        res, wq = _blow_up(args)
        return wq, epsilon_to_xi(res, _signs(args.eps))
    wq, _, _ = load_weighted(args)
    xi = _csv(args.xi)
    if not xi:
        raise E.NotVirtualOrbit("give the mutated arrows with --xi")
    return wq, xi


# ---------------------------------------------------------------- reports

def _orbits_json(wq):
    return [{"rep": o[0], "arrows": list(o), "m": wq.w.m[k], "c": str(wq.w.c[k])}
            for k, o in enumerate(wq.tq.g_orbits)]


def algebra_report(alg, wq=None, relations=True):
    out = {"schema": SCHEMA, "kind": alg.meta.get("kind", "algebra"), "name": alg.name,
           "dimension": alg.dimension, "closed_form": alg.closed_form,
           "vertices": list(alg.vertices), "cartan": alg.cartan()}
    if wq is not None:
        out["orbits"] = _orbits_json(wq)
    if relations:
        out["relations"] = [str(r) for r in alg.relations]
    return out


def _mutation_report(alg, show_star=False, audit=False):
    mut = alg.meta["mutation"]
    out = algebra_report(alg)
    if audit:
        out["zero_relation_audit"] = mut.audit
    out["xi"] = list(mut.spec.xi)
    out["quiver"] = mut.quiver.to_json()
    if show_star:
        out["star_arrows"] = list(mut.star_arrows)
        out["star_orbits"] = mut.star_summary()
        out["f_star"] = {a: mut.fs[a] for a in mut.star_arrows}
        out["tilde"] = {a: t for a, t in mut.tilde.items() if a != t}
    return out


def _matrix_text(M, labels):
    w = max([len(str(x)) for row in M for x in row] + [len(str(l)) for l in labels])
    head = " " * (w + 1) + " ".join(str(l).rjust(w) for l in labels)
    rows = [str(l).rjust(w) + " " + " ".join(str(x).rjust(w) for x in row)
            for l, row in zip(labels, M)]
    return "\n".join([head] + rows)


def render_text(rep):
    lines = []
    for key in ("kind", "name", "dimension", "closed_form", "agrees", "t1_holds", "dim_end",
                "dim_target", "cartan_match", "approximation_ok", "valid", "admissible"):
        if key in rep and rep[key] not in ("", None):
            lines.append("%s: %s" % (key, rep[key]))
    if "xi" in rep:
        lines.append("xi: " + " ".join(rep["xi"]))
    if "orbits" in rep:
        lines.append("orbits:")
        for o in rep["orbits"]:
            lines.append("  O(%s) = (%s)  m=%s c=%s" % (o["rep"], " ".join(o["arrows"]),
                                                       o["m"], o["c"]))
    if "cartan" in rep:
        lines.append("cartan:")
        lines.append(_matrix_text(rep["cartan"], rep["vertices"]))
    if "cartan_end" in rep:
        lines.append("cartan of End:")
        lines.append(_matrix_text(rep["cartan_end"], rep["vertices"]))
    if "relations" in rep:
        lines.append("relations:")
        lines.extend("  " + r for r in rep["relations"])
    if "gabriel_arrows" in rep:
        lines.append("gabriel arrows: " + " ".join(rep["gabriel_arrows"]))
        lines.append("removed arrows: " + " ".join(rep["removed_arrows"]))
    if "basis" in rep:
        lines.append("basis:")
        for pair, paths in rep["basis"].items():
            lines.append("  %s: %s" % (pair, ", ".join(paths)))
    for key in ("reports", "checks"):
        for sub in rep.get(key, []):
            lines.append("---")
            lines.append(render_text(dict(sub, vertices=rep.get("vertices", sub.get("vertices")))))
    return "\n".join(lines)


# ------------------------------------------------------------- commands

def cmd_validate(args):
    doc = read_document(args.input)
    kind = document_kind(doc)
    wq, s, _ = load_weighted(args)
    tq = wq.tq
    bad = wq.assumption_report()
    return {"schema": SCHEMA, "kind": kind, "valid": True,
            "vertices": list(tq.quiver.vertices), "arrows": list(tq.quiver.arrow_ids),
            "f_orbits": [list(o) for o in tq.f_orbits], "g_orbits": [list(o) for o in tq.g_orbits],
            "orbits": _orbits_json(wq), "admissible": not bad,
            "violations": [{"arrow": a, "clause": cl} for a, cl in bad]}


def _build(args):
    wq, _, _ = load_weighted(args)
    return build_wta(wq, allow_possibly_singular=args.allow_possibly_singular), wq


def cmd_build(args):
    alg, wq = _build(args)
    if args.emit_algebra:
        return dict(alg.to_json(), schema=SCHEMA, kind="presented-algebra",
                    dimension=alg.dimension)
    return algebra_report(alg, wq)


def _maybe_mutated(args):
    if args.input != "-":
        doc = read_document(args.input)
        if document_kind(doc) == "algebra":
            return algebra_from_json(doc), None
    if getattr(args, "xi", None) or getattr(args, "I", None):
        wq, xi = _mutation_input(args)
        return mutate(validate_mutation(wq, xi)), None
    return _build(args)


def cmd_basis(args):
    alg, wq = _maybe_mutated(args)
    out = algebra_report(alg, wq, relations=False)
    out["basis"] = {"%s->%s" % st: [str(p) for p in ps]
                    for st, ps in sorted(alg.basis_by_pair().items(),
                                         key=lambda kv: (alg.quiver.vertices.index(kv[0][0]),
                                                         alg.quiver.vertices.index(kv[0][1])))}
    return out


def cmd_cartan(args):
    alg, _ = _maybe_mutated(args)
    return {"schema": SCHEMA, "kind": "cartan", "name": alg.name, "vertices": list(alg.vertices),
            "cartan": alg.cartan(), "dimension": alg.dimension}


def cmd_gabriel(args):
    alg, _ = _maybe_mutated(args)
    rs = alg.oracle(degree_cap=args.degree_cap)
    kept = gabriel_quiver(alg.quiver, rs)
    return {"schema": SCHEMA, "kind": "gabriel", "name": alg.name,
            "gabriel_arrows": list(kept),
            "removed_arrows": [a for a in alg.quiver.arrow_ids if a not in kept]}


def cmd_mutate(args):
    wq, xi = _mutation_input(args)
    alg = mutate(validate_mutation(wq, xi, tau_labels=_csv(args.tau_labels) or None))
    return _mutation_report(alg, args.show_star, args.audit)


def cmd_blowup(args):
    res, nwq = _blow_up(args)
    doc = res.surface.to_json()
    doc["schema"] = SCHEMA
    doc["weights"] = [{"rep": o["rep"], "m": o["m"], "c": o["c"]} for o in _orbits_json(nwq)]
    doc["blowup"] = {"edges": list(res.edges), "local": res.local}
    return doc


def cmd_deform(args):
    wq, xi = _mutation_input(args)
    alg = mutate(validate_mutation(wq, xi), name="deformation")
    return _mutation_report(alg, args.show_star, args.audit)


def cmd_oracle_check(args):
    alg, _ = _maybe_mutated(args)
    rs = alg.oracle(degree_cap=args.degree_cap)
    r = compare_with_oracle(alg, rs)
    complete, bounded = rs.certificate()
    out = {"schema": SCHEMA, "kind": "oracle-check", "name": alg.name,
           "dimension": alg.dimension, "oracle_dimension": r["dimension"],
           "agrees": r["agrees"], "mismatches": r["mismatches"], "degree_cap": rs.degree_cap,
           "certified": complete and bounded, "rules": len(rs.rules)}
    if alg.meta.get("kind") == "mutation":
        out["identities"] = mutation_identities(alg, rs)
    elif alg.meta.get("kind") == "wta":
        out["socle_failures"] = socle_check(alg, rs)
    return out


def cmd_tilting_check(args):
    wq, xi = _mutation_input(args)
    spec = validate_mutation(wq, xi)
    mut_alg = mutate(spec)
    base = build_wta(spec.base, allow_possibly_singular=True)
    which = ["T_xi", "That_xi", "T_xi_mu"] if args.which == "all" else [args.which]
    reps = [tilting_check(base, mut_alg, w).to_json() for w in which]
    if len(reps) == 1:
        return dict(reps[0], schema=SCHEMA, kind="tilting-check",
                    vertices=list(base.vertices))
    return {"schema": SCHEMA, "kind": "tilting-check", "vertices": list(base.vertices),
            "t1_holds": all(r["t1_holds"] for r in reps),
            "cartan_match": all(r["cartan_match"] for r in reps), "reports": reps}


def cmd_regress(args):
    rows = regress.run(only=args.only, golden_path=args.golden, jobs=args.jobs)
    return regress.summary(rows), rows


# ----------------------------------------------------------------- parser

def _weight_flags(p):
    p.add_argument("input", help="quiver or surface JSON; '-' for stdin; corpus:NAME")
    p.add_argument("--weights", help="JSON document with a list of {rep, m, c}")
    p.add_argument("--m", nargs="+", metavar="BIND",
                   help="weights: REP=INT or O(REP)=INT, or values in orbit order")
    p.add_argument("--c", nargs="+", metavar="BIND",
                   help="parameters: REP=Q or O(REP)=Q, or values in orbit order")
    p.add_argument("--allow-possibly-singular", action="store_true",
                   help="build even when the singularity guard fires")


def _mutation_flags(p, deform_only=False):
    if not deform_only:
        p.add_argument("--xi", help="comma separated virtual arrows to mutate at")
    p.add_argument("--I", help="comma separated edges to blow up (surface input)")
    p.add_argument("--eps", help="signs EDGE=+1|-1 for each blown-up edge")
    p.add_argument("--a-side", help="EDGE=TRIANGLE_INDEX overrides for internal edges")


def build_parser():
    ap = argparse.ArgumentParser(prog="surfalg", description=(
        "Weighted surface algebras, virtual mutations and their checks."))
    ap.add_argument("--format", choices=("json", "text"), default="json")
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=("json", "text"), default=argparse.SUPPRESS)
    sub = ap.add_subparsers(dest="command", required=True)
    _add = sub.add_parser

    def add_parser(name, **kw):
        return _add(name, parents=[fmt], **kw)
    sub.add_parser = add_parser

    p = sub.add_parser("validate", help="check a quiver or surface document")
    _weight_flags(p)
    for name, hlp in (("build", "build the algebra and its basis"),
                      ("basis", "list the basis by vertex pair"),
                      ("cartan", "print the Cartan matrix"),
                      ("gabriel", "arrows of the Gabriel quiver (uses the oracle)"),
                      ("oracle-check", "compare against the rewriting oracle")):
        p = sub.add_parser(name, help=hlp)
        _weight_flags(p)
        if name != "build":
            _mutation_flags(p)
        else:
            p.add_argument("--emit-algebra", action="store_true",
                           help="emit the full presented algebra (input for oracle-check)")
        if name in ("gabriel", "oracle-check"):
            p.add_argument("--degree-cap", type=int, help="override the oracle degree cap")

    p = sub.add_parser("mutate", help="virtual mutation at the given arrows")
    _weight_flags(p)
    _mutation_flags(p)
    p.add_argument("--tau-labels", help="comma separated labels for the new arrows")
    p.add_argument("--show-star", action="store_true", help="include Q(xi) orbit data")
    p.add_argument("--audit", action="store_true",
                   help="list emitted and suppressed length-three zero relations")

    p = sub.add_parser("blowup", help="blow up edges; emits a surface document with weights")
    _weight_flags(p)
    p.add_argument("--I", required=True, help="comma separated edges")
    p.add_argument("--a-side", help="EDGE=TRIANGLE_INDEX overrides for internal edges")

    p = sub.add_parser("deform", help="blow up and mutate at the selected virtual arrows")
    _weight_flags(p)
    p.add_argument("--I", required=True, help="comma separated edges")
    p.add_argument("--eps", required=True, help="signs EDGE=+1|-1")
    p.add_argument("--a-side", help="EDGE=TRIANGLE_INDEX overrides for internal edges")
    p.add_argument("--show-star", action="store_true")
    p.add_argument("--audit", action="store_true",
                   help="list emitted and suppressed length-three zero relations")

    p = sub.add_parser("tilting-check", help="tilting complexes and End algebra comparison")
    _weight_flags(p)
    _mutation_flags(p)
    p.add_argument("--which", choices=("T_xi", "That_xi", "T_xi_mu", "all"), default="all")

    p = sub.add_parser("regress", help="run the regression suite")
    p.add_argument("--only", nargs="+", help="categories or criterion numbers")
    p.add_argument("--golden", help="alternative golden values document")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    return ap


COMMANDS = {"validate": cmd_validate, "build": cmd_build, "basis": cmd_basis,
            "cartan": cmd_cartan, "gabriel": cmd_gabriel, "mutate": cmd_mutate,
            "blowup": cmd_blowup, "deform": cmd_deform, "oracle-check": cmd_oracle_check,
            "tilting-check": cmd_tilting_check, "regress": cmd_regress}


def _emit(obj, fmt, out):
    if fmt == "text":
        out.write(render_text(obj) + "\n")
    else:
        out.write(json.dumps(obj, indent=2, default=str) + "\n")


def main(argv=None, out=None):
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        if args.command == "regress":
            summ, rows = cmd_regress(args)
            if args.format == "text":
                out.write(regress.render(rows) + "\n")
            else:
                out.write(json.dumps(summ, indent=2) + "\n")
            return EXIT_OK if summ["ok"] else EXIT_REGRESS
        _emit(COMMANDS[args.command](args), args.format, out)
        return EXIT_OK
    except E.ValidationError as exc:
        _emit_error(exc, out)
        return EXIT_INVALID
    except E.SurfAlgError as exc:
        _emit_error(exc, out)
        return EXIT_INTERNAL


def _emit_error(exc, out):
    rep = dict(exc.to_json(), schema=SCHEMA)
    out.write(json.dumps(rep, indent=2, default=str) + "\n")
    print("error: %s: %s" % (exc.code, exc), file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
