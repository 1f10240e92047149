"""
Command line entry point.

Every command prints one JSON report on stdout. Exit status is 0 when
all requested checks pass, 1 when a certificate fails and 2 for bad input.
"""

import argparse
import json
import sys
import time

from . import __version__, corpus, fileio
from .ce_coalgebra import ce_encode
from .fileio import SchemaError, rat_str
from .linfty_core import check_jacobi, classify_morphism
from .linfty_postnikov import k_invariant, postnikov_tower
from .mc_integration import MCError, curvature, flat_section, nilpotency_class
from .simplicial_core import (
    canonical_iso, check_iso, cyclic, em_inhomog, homotopy_group, inversion_action,
    nerve, predicate, symmetric, to_dot, trivial_group, verify_identities, wbar,
)
from .simplicial_corpus import em_quotient, kinvariant_contexts
from .simplicial_kinvariant import verify_square
from .simplicial_postnikov import interleaved_tower, minpost_equivalence, tau1_vs_nerve

REPORT_VERSION = 1


# ---------------------------------------------------------------------------
# JSON helpers

def _vec(v):
    return {k: rat_str(c) for k, c in sorted(v.items())}


def _table(t):
    """``{word: vector}`` as a sorted list of entries."""
    out = []
    for w in sorted(t, key=repr):
        for y, c in sorted(t[w].items()):
            out.append({"inputs": list(w), "output": y, "coeff": rat_str(c)})
    return out


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (bool, int, float, str)) or x is None:
        return x
    return repr(x)


def _jacobi_report(L, up_to):
    res = check_jacobi(L, up_to)
    out = {"ok": all(not v for v in res.values()), "up_to": up_to}
    for m in sorted(res):
        if res[m]:
            w = sorted(res[m], key=repr)[0]
            out["witness"] = {"arity": m, "inputs": list(w), "defect": _vec(res[m][w])}
            break
    return out


def _coalgebra_report(L, up_to):
    res = ce_encode(L).square_residuals(up_to)
    out = {"ok": all(not v for v in res.values()), "up_to": up_to}
    for k in sorted(res):
        if res[k]:
            w = sorted(res[k], key=repr)[0]
            out["witness"] = {"length": k, "word": list(w), "residual": [{"word": list(u), "coeff": rat_str(c)} for u, c in sorted(res[k][w].items())]}
            break
    return out


def _tower_report(L, depth=None):
    rows = []
    for t in postnikov_tower(L, depth):
        c = t.certificate()
        c["fiber_dims"] = {str(d): n for d, n in sorted(c["fiber_dims"].items())}
        rows.append(c)
    ok = all(all(v for k, v in r.items() if isinstance(v, bool)) for r in rows)
    return {"ok": ok, "stages": rows}


def _kinv_report(f, m):
    kd = k_invariant(f, m)
    sq = kd.classifying_square()
    psi = {str(k): _table(kd.psi_table(k)) for k in sorted(kd.psi.taylor)}
    return {
        "ok": sq.ok,
        "morphism": f.name,
        "m": m,
        "fiber_dim": kd.dimA,
        "psi_source": kd.psi.source.name,
        "psi_target": kd.psi.target.name,
        "psi": psi,
        "square": sq.as_dict(),
    }


# ---------------------------------------------------------------------------
# commands

def cmd_verify(args):
    L, morphisms = fileio.load_algebra(args.file)
    up = args.up_to
    rep = {"algebra": L.name, "dims": {str(d): len(v) for d, v in sorted(L.space.degrees.items())}}
    want_j = args.jacobi or not args.coalgebra
    if want_j:
        rep["jacobi"] = _jacobi_report(L, up)
    if args.coalgebra:
        rep["coalgebra"] = _coalgebra_report(L, max(up - 1, 1))
    if morphisms:
        rep["morphisms"] = {}
        for f in morphisms:
            r = classify_morphism(f, up)
            rep["morphisms"][f.name] = _jsonable(r.as_dict() if hasattr(r, "as_dict") else vars(r))
    rep["ok"] = all(rep[k]["ok"] for k in ("jacobi", "coalgebra") if k in rep)
    return rep


def _pick_morphism(morphisms, name):
    if not morphisms:
        raise SchemaError("file has no morphisms", "morphisms")
    if name is None:
        return morphisms[0]
    for f in morphisms:
        if f.name == name:
            return f
    raise SchemaError("no morphism named %r" % name, "morphisms")


def cmd_postnikov(args):
    L, morphisms = fileio.load_algebra(args.file)
    rep = {"algebra": L.name, "tower": _tower_report(L, args.depth)}
    if args.morphism is not None or (morphisms and args.m is not None):
        f = _pick_morphism(morphisms, args.morphism)
        rep["k_invariant"] = _kinv_report(f, args.m or 1)
    rep["ok"] = rep["tower"]["ok"] and rep.get("k_invariant", {"ok": True})["ok"]
    return rep


def _simplicial_kinv(name, up_to, certify_top):
    ctxs = {"k-z2-2": 0, "k-z3-2-z2": 1}
    if name not in ctxs:
        raise SchemaError("unknown context %r (choose from %s)" % (name, ", ".join(sorted(ctxs))), "context")
    f, n, label = kinvariant_contexts()[ctxs[name]]
    t0 = time.time()
    cert = verify_square(f, n, up_to=up_to, certify_top=certify_top)
    ctx = cert.maps.ctx
    rep = {
        "context": label,
        "n": n,
        "fiber_group": ctx.A.name,
        "base_group_order": ctx.G.order(),
        "action": _jsonable(ctx.action_table()),
        "square": cert.as_dict(),
        "seconds": round(time.time() - t0, 1),
        "ok": cert.ok,
    }
    return rep


def cmd_kinv(args):
    if args.target.endswith(".json"):
        L, morphisms = fileio.load_algebra(args.target)
        f = _pick_morphism(morphisms, args.morphism)
        return _kinv_report(f, args.m)
    return _simplicial_kinv(args.target, args.up_to, args.certify_top)


GROUPS = {"Z1": lambda: trivial_group(), "Z2": lambda: cyclic(2), "Z3": lambda: cyclic(3),
          "Z4": lambda: cyclic(4), "S3": lambda: symmetric(3)}


def _group(name):
    if name not in GROUPS:
        raise SchemaError("unknown group %r (choose from %s)" % (name, ", ".join(GROUPS)), "group")
    return GROUPS[name]()


def _build(kind, G, n):
    if kind == "N":
        return nerve(G, "homog")
    if kind == "N-inhomog":
        return nerve(G, "inhomog")
    if kind == "K":
        return em_inhomog(G, n)
    if kind == "W":
        return wbar(em_inhomog(G, n))
    if kind == "KQ":
        Z2 = cyclic(2)
        return em_quotient(G, n, Z2, inversion_action(Z2, G)).source
    raise SchemaError("unknown construction %r" % kind, "build")


def cmd_simplicial(args):
    G = None
    if args.file:
        X, G, top = fileio.load_simplicial(args.file)
        up = min(args.up_to, top)
    else:
        G = _group(args.group)
        X = _build(args.build, G, args.n)
        up = args.up_to
    rep = {"name": X.name, "sizes": [X.size(k) for k in range(min(up, args.size_limit) + 1)]}
    checks = {}
    if args.check_identities:
        r = verify_identities(X, up)
        checks["identities"] = r.ok
        if not r.ok:
            rep["witness"] = _jsonable(r.witness)
    if args.kan:
        r = predicate(X, "kan", up)
        checks["kan"] = r.holds
        if not r.holds:
            rep["kan_witness"] = _jsonable(r.witnesses[:3])
    if args.pi:
        rep["pi"] = {}
        for k in range(1, args.pi + 1):
            hg = homotopy_group(X, k)
            rep["pi"][str(k)] = len(hg.group().elements)
    if args.tau1:
        ok, P = tau1_vs_nerve(X, up)
        checks["tau1_is_nerve"] = ok
        rep["pi1_order"] = P.order()
    if args.tower is not None:
        T = interleaved_tower(X, args.tower, up)
        rows = T.report()
        rep["tower"] = rows
        checks["tower"] = all(r["down_hypercover"] and r["minfib_minimal"] and r["down_simplicial"]
                              and r["minfib_simplicial"] for r in rows)
        mn, isos, _ = minpost_equivalence(X, args.tower, up)
        rep["minimal"] = mn
        checks["minpost_equivalence"] = mn == isos
    if args.iso:
        if args.iso == "nerve_coords":
            f, g = canonical_iso("nerve_coords", up, G=G)
        else:
            f, g = canonical_iso(args.iso, up, A=G, n=args.n)
        checks["iso"] = bool(check_iso(f, g, up))
    if args.save:
        doc = fileio.simplicial_to_doc(X, up, group=G if args.build == "N" else None)
        with open(args.save, "w") as fh:
            fh.write(fileio.dumps(doc))
        rep["saved"] = args.save
    if args.dot:
        rep["dot"] = to_dot(X, min(up, 2))
    rep["checks"] = checks
    rep["ok"] = all(checks.values())
    return rep


def cmd_integrate(args):
    L, _ = fileio.load_algebra(args.algebra)
    a = fileio.load_forms(args.forms, L.space)
    rep = {"algebra": L.name, "m": a.m, "degrees": sorted(a.degrees())}
    try:
        F = curvature(L, a)
    except MCError as exc:
        raise SchemaError(str(exc), "components")
    rep["curvature"] = fileio.forms_to_doc(F)["components"]
    rep["is_mc"] = not F
    checks = {"mc": rep["is_mc"]}
    lie = set(L.brackets) <= {2} and set(L.space.degrees) <= {0}
    if lie and rep["is_mc"] and a.m >= 1:
        try:
            nilpotency_class(L)
        except Exception as exc:
            rep["flat_section"] = {"skipped": str(exc)}
        else:
            fs = flat_section(L, a)
            rep["flat_section"] = {
                "vertices": [_vec(v) for v in fs.vertices()],
                "coordinates": fileio.forms_to_doc(fs.X)["components"],
                "round_trip": fs.round_trip(),
            }
            checks["round_trip"] = fs.round_trip()
    rep["checks"] = checks
    rep["ok"] = all(checks.values())
    return rep


EXAMPLES = {
    "str-so3": ("algebra", "string Lie 2-algebra over so(3), projected to so(3)"),
    "str2-sloped": ("algebra", "quotient Lie 2-algebra over so(3) x so(3) with slopes (1, 2)"),
    "so3": ("algebra", "so(3) with integer structure constants"),
    "lea-1-1": ("algebra", "EA[1]//End(A), dim A = 1"),
    "lba-1-1": ("algebra", "A[2]//End(A), dim A = 1"),
    "lea-2-1": ("algebra", "EA[1]//End(A), dim A = 2"),
    "lba-2-1": ("algebra", "A[2]//End(A), dim A = 2"),
    "lea-1-2": ("algebra", "EA[2]//End(A), dim A = 1"),
    "lba-1-2": ("algebra", "A[3]//End(A), dim A = 1"),
    "k-z2-2": ("simplicial", "K(Z/2,2) over the point"),
    "k-z3-2-z2": ("simplicial", "K(Z/3,2)//Z/2 over N(Z/2)"),
    "n-z4": ("simplicial", "nerve of Z/4"),
}

PROJECTIONS = {"str-so3": corpus.string_projection, "str2-sloped": corpus.sloped_string_projection}


def cmd_examples(args):
    if args.list or args.name is None:
        return {"ok": True, "examples": {k: {"kind": v[0], "about": v[1]} for k, v in EXAMPLES.items()}}
    if args.name not in EXAMPLES:
        raise SchemaError("unknown example %r" % args.name, "name")
    kind = EXAMPLES[args.name][0]
    rep = {"example": args.name, "kind": kind}
    oks = []
    if kind == "algebra":
        L = corpus.algebra_corpus()[args.name]
        proj = PROJECTIONS.get(args.name)
        morphisms = [proj()] if proj else []
        rep["jacobi"] = _jacobi_report(L, 5)
        oks.append(rep["jacobi"]["ok"])
        if args.postnikov:
            rep["tower"] = _tower_report(L)
            oks.append(rep["tower"]["ok"])
        if args.kinv:
            if not morphisms:
                raise SchemaError("example %r has no bundled fibration" % args.name, "name")
            rep["k_invariant"] = _kinv_report(morphisms[0], args.m)
            oks.append(rep["k_invariant"]["ok"])
        if args.save:
            fileio.save_algebra(args.save, L, morphisms)
            rep["saved"] = args.save
    else:
        if args.name == "n-z4":
            X = nerve(cyclic(4), "homog")
        else:
            f, _, _ = kinvariant_contexts()[0 if args.name == "k-z2-2" else 1]
            X = f.source
        up = 3
        rep["identities"] = verify_identities(X, up).ok
        rep["kan"] = predicate(X, "kan", up).holds
        oks += [rep["identities"], rep["kan"]]
        if args.postnikov:
            mn, isos, _ = minpost_equivalence(X, 1, up)
            rep["minpost_equivalence"] = mn == isos
            oks.append(mn == isos)
        if args.kinv:
            if args.name == "n-z4":
                raise SchemaError("n-z4 has no k-invariant context (n must exceed 1)", "name")
            rep["k_invariant"] = _simplicial_kinv(args.name, None, False)
            oks.append(rep["k_invariant"]["ok"])
        if args.save:
            with open(args.save, "w") as fh:
                fh.write(fileio.dumps(fileio.simplicial_to_doc(X, up)))
            rep["saved"] = args.save
    rep["ok"] = all(oks)
    return rep


# ---------------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="linfpost", description=__doc__.strip().splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="Jacobi and CE checks on an algebra file")
    v.add_argument("file")
    v.add_argument("--jacobi", action="store_true")
    v.add_argument("--coalgebra", action="store_true")
    v.add_argument("--up-to", type=int, default=4)
    v.set_defaults(fn=cmd_verify)

    q = sub.add_parser("postnikov", help="tower certificates and k-invariants")
    q.add_argument("file")
    q.add_argument("--morphism")
    q.add_argument("--m", type=int)
    q.add_argument("--depth", type=int)
    q.set_defaults(fn=cmd_postnikov)

    k = sub.add_parser("kinv", help="k-invariant of an algebra fibration or a simplicial context")
    k.add_argument("target", help="algebra file (*.json) or one of k-z2-2, k-z3-2-z2")
    k.add_argument("--morphism")
    k.add_argument("--m", type=int, default=1)
    k.add_argument("--up-to", type=int)
    k.add_argument("--certify-top", action="store_true")
    k.set_defaults(fn=cmd_kinv)

    s = sub.add_parser("simplicial", help="build or load a finite simplicial set and check it")
    s.add_argument("--file")
    s.add_argument("--build", default="K", choices=["N", "N-inhomog", "K", "W", "KQ"])
    s.add_argument("--group", default="Z2")
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--up-to", type=int, default=3)
    s.add_argument("--check-identities", action="store_true")
    s.add_argument("--kan", action="store_true")
    s.add_argument("--pi", type=int, default=0, metavar="K")
    s.add_argument("--tau1", action="store_true")
    s.add_argument("--tower", type=int, metavar="DEPTH")
    s.add_argument("--iso", choices=["nerve_coords", "K_coords", "wbarK_to_K"])
    s.add_argument("--save")
    s.add_argument("--dot", action="store_true")
    s.add_argument("--size-limit", type=int, default=5, help=argparse.SUPPRESS)
    s.set_defaults(fn=cmd_simplicial)

    i = sub.add_parser("integrate", help="curvature and flat sections of form-valued elements")
    i.add_argument("algebra")
    i.add_argument("forms")
    i.set_defaults(fn=cmd_integrate)

    e = sub.add_parser("examples", help="bundled examples")
    e.add_argument("name", nargs="?")
    e.add_argument("--list", action="store_true")
    e.add_argument("--postnikov", action="store_true")
    e.add_argument("--kinv", action="store_true")
    e.add_argument("--m", type=int, default=1)
    e.add_argument("--save")
    e.set_defaults(fn=cmd_examples)
    return p


def _emit(rep, out):
    out.write(json.dumps(_jsonable(rep), indent=2, sort_keys=True) + "\n")


def main(argv=None, out=None):
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    base = {"command": args.command, "version": REPORT_VERSION}
    try:
        rep = args.fn(args)
    except (SchemaError, OSError) as exc:
        rep = dict(base, ok=False, error=str(exc))
        if isinstance(exc, SchemaError) and exc.path:
            rep["field"] = exc.path
        _emit(rep, out)
        return 2
    except ValueError as exc:
        _emit(dict(base, ok=False, error="%s: %s" % (type(exc).__name__, exc)), out)
        return 2
    rep = dict(base, **rep)
    _emit(rep, out)
    return 0 if rep["ok"] else 1


def main_exit():
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
