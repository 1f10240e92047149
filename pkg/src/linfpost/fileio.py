"""
JSON files for algebras, morphisms, finite simplicial sets and forms.

Rationals are written as ``"p"`` or ``"p/q"`` strings. Saving always
produces the canonical layout (sorted keys and entries), so loading and
saving again is byte-identical.
"""

import json
from fractions import Fraction
from functools import lru_cache
from importlib import resources

import jsonschema

from .graded_core import GradedSpace
from .linfty_core import LInfinityAlgebra, LInfinityMorphism
from .mc_integration import LForm, PolyForm
from .simplicial_core import Coskeletal, FinGroup, FinSimpSet

FORMAT_VERSION = 1


class SchemaError(ValueError):
    """Input that does not match a file schema; ``path`` names the field."""

    def __init__(self, msg, path=""):
        super().__init__("%s: %s" % (path, msg) if path else msg)
        self.path = path


@lru_cache(maxsize=None)
def schema(kind):
    text = resources.files("linfpost").joinpath("schemas", "%s.schema.json" % kind).read_text()
    return json.loads(text)


def _path(parts):
    out = ""
    for p in parts:
        out += "[%d]" % p if isinstance(p, int) else ("." + p if out else p)
    return out


def validate(doc, kind):
    v = jsonschema.Draft202012Validator(schema(kind))
    errs = sorted(v.iter_errors(doc), key=lambda e: list(map(str, e.absolute_path)))
    if errs:
        e = errs[0]
        raise SchemaError(e.message, _path(e.absolute_path))


def parse_json(text, source="<input>"):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("invalid JSON at line %d column %d: %s" % (exc.lineno, exc.colno, exc.msg), source)


def rational(s, path=""):
    try:
        if not isinstance(s, str) or not s.strip():
            raise ValueError
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise SchemaError("malformed rational %r" % (s,), path)


def rat_str(c):
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else "%d/%d" % (c.numerator, c.denominator)


def dumps(doc):
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# algebras

def _entries(table, space):
    out = []
    for k in sorted(table):
        for word in sorted(table[k], key=lambda w: [space.index(x) for x in w]):
            for y, c in sorted(table[k][word].items()):
                out.append({"arity": int(k), "inputs": list(word), "output": y, "coeff": rat_str(c)})
    return out


def _read_entries(items, prefix):
    table = {}
    for i, e in enumerate(items):
        p = "%s[%d]" % (prefix, i)
        if len(e["inputs"]) != e["arity"]:
            raise SchemaError("arity %d with %d inputs" % (e["arity"], len(e["inputs"])), p + ".inputs")
        c = rational(e["coeff"], p + ".coeff")
        slot = table.setdefault(e["arity"], {}).setdefault(tuple(e["inputs"]), {})
        slot[e["output"]] = slot.get(e["output"], 0) + c
    return table


def algebra_to_doc(L, morphisms=()):
    doc = {
        "format": "linfpost-algebra",
        "version": FORMAT_VERSION,
        "name": L.name,
        "basis": {str(d): list(L.space.degrees[d]) for d in sorted(L.space.degrees)},
        "brackets": _entries(L.brackets, L.space),
    }
    if morphisms:
        doc["morphisms"] = []
        for f in morphisms:
            tgt = algebra_to_doc(f.target)
            doc["morphisms"].append({"name": f.name, "target": tgt,
                                     "components": _entries(f.taylor, L.space)})
    return doc


def _check_labels(space, table, prefix, out_space=None):
    out_space = out_space or space
    for k, t in table.items():
        for w, v in t.items():
            for x in w:
                if x not in space:
                    raise SchemaError("unknown label %r" % x, prefix)
            for y in v:
                if y not in out_space:
                    raise SchemaError("unknown output label %r" % y, prefix)


def algebra_from_doc(doc, path=""):
    validate(doc, "algebra")
    basis = {int(d): list(v) for d, v in doc["basis"].items() if v}
    seen = set()
    for d, labs in basis.items():
        for x in labs:
            if x in seen:
                raise SchemaError("duplicate label %r" % x, (path + "." if path else "") + "basis")
            seen.add(x)
    sp = GradedSpace(basis)
    br = _read_entries(doc.get("brackets", []), "brackets")
    _check_labels(sp, br, "brackets")
    try:
        L = LInfinityAlgebra(sp, br, name=doc.get("name", "L"))
    except ValueError as exc:
        raise SchemaError(str(exc), "brackets")
    morphisms = []
    for i, m in enumerate(doc.get("morphisms", [])):
        p = "morphisms[%d]" % i
        T, _ = algebra_from_doc(m["target"], p + ".target")
        tay = _read_entries(m["components"], p + ".components")
        _check_labels(sp, tay, p + ".components", T.space)
        try:
            morphisms.append(LInfinityMorphism(L, T, tay, name=m["name"]))
        except ValueError as exc:
            raise SchemaError(str(exc), p)
    return L, morphisms


def load_algebra(path):
    with open(path) as fh:
        return algebra_from_doc(parse_json(fh.read(), str(path)))


def save_algebra(path, L, morphisms=()):
    text = dumps(algebra_to_doc(L, morphisms))
    with open(path, "w") as fh:
        fh.write(text)
    return text


# ---------------------------------------------------------------------------
# finite simplicial sets

def simplicial_to_doc(X, top, name=None, coskeletal=None, group=None):
    levels = [X.level(k) for k in range(top + 1)]
    idx = [{x: i for i, x in enumerate(lv)} for lv in levels]
    faces = [[[idx[k - 1][X.face(k, i, x)] for i in range(k + 1)] for x in levels[k]] for k in range(1, top + 1)]
    degen = [[[idx[k + 1][X.degen(k, i, x)] for i in range(k + 1)] for x in levels[k]] for k in range(top)]
    doc = {
        "format": "linfpost-simplicial",
        "version": FORMAT_VERSION,
        "name": name or X.name,
        "levels": [[repr(x) for x in lv] for lv in levels],
        "faces": faces,
        "degeneracies": degen,
    }
    if coskeletal is not None:
        doc["coskeletal"] = coskeletal
    if group is not None:
        els = group.elements
        gi = {g: i for i, g in enumerate(els)}
        doc["group"] = {"elements": [repr(g) for g in els],
                        "table": [[gi[group.mul(a, b)] for b in els] for a in els],
                        "identity": gi[group.e]}
    return doc


def simplicial_from_doc(doc):
    validate(doc, "simplicial")
    levels = doc["levels"]
    top = len(levels) - 1
    faces, degen = doc["faces"], doc["degeneracies"]
    if len(faces) != top or len(degen) != top:
        raise SchemaError("need %d face and degeneracy tables" % top, "faces")
    for k in range(1, top + 1):
        if len(faces[k - 1]) != len(levels[k]):
            raise SchemaError("face table size", "faces[%d]" % (k - 1))
        for j, row in enumerate(faces[k - 1]):
            if len(row) != k + 1 or any(v >= len(levels[k - 1]) for v in row):
                raise SchemaError("bad face row", "faces[%d][%d]" % (k - 1, j))
    for k in range(top):
        if len(degen[k]) != len(levels[k]):
            raise SchemaError("degeneracy table size", "degeneracies[%d]" % k)
        for j, row in enumerate(degen[k]):
            if len(row) != k + 1 or any(v >= len(levels[k + 1]) for v in row):
                raise SchemaError("bad degeneracy row", "degeneracies[%d][%d]" % (k, j))
    # elements are (level, index) pairs
    X = FinSimpSet(lambda k: [(k, i) for i in range(len(levels[k]))],
                   lambda k, i, x: (k - 1, faces[k - 1][x[1]][i]),
                   lambda k, i, x: (k + 1, degen[k][x[1]][i]),
                   name=doc.get("name", "X"), max_level=top)
    X.labels = levels
    out = X
    if "coskeletal" in doc:
        c = doc["coskeletal"]
        if c >= top:
            raise SchemaError("coskeletal degree must be below the stored top level", "coskeletal")
        out = Coskeletal(X, c, name=X.name)
    group = None
    if "group" in doc:
        g = doc["group"]
        n = len(g["elements"])
        if len(g["table"]) != n or any(len(r) != n or max(r, default=0) >= n for r in g["table"]):
            raise SchemaError("group table must be square over the elements", "group.table")
        try:
            group = FinGroup(range(n), lambda a, b: g["table"][a][b], g["identity"], name=doc.get("name", "G"))
        except ValueError as exc:
            raise SchemaError(str(exc), "group.table")
        if not group.check_axioms():
            raise SchemaError("table is not a group", "group.table")
    return out, group, top


def load_simplicial(path):
    with open(path) as fh:
        return simplicial_from_doc(parse_json(fh.read(), str(path)))


# ---------------------------------------------------------------------------
# forms

def forms_to_doc(a):
    comps = {}
    for x, w in sorted(a.comps.items()):
        comps[x] = [{"exponents": list(e), "dt": list(I), "coeff": rat_str(c)}
                    for (e, I), c in sorted(w.terms.items())]
    return {"format": "linfpost-forms", "version": FORMAT_VERSION, "m": a.m, "components": comps}


def forms_from_doc(doc, space):
    validate(doc, "forms")
    m = doc["m"]
    comps = {}
    for x, terms in doc["components"].items():
        if x not in space:
            raise SchemaError("unknown label %r" % x, "components.%s" % x)
        t = {}
        for i, term in enumerate(terms):
            p = "components.%s[%d]" % (x, i)
            if len(term["exponents"]) != m:
                raise SchemaError("need %d exponents" % m, p + ".exponents")
            I = term["dt"]
            if sorted(set(I)) != I or any(v > m for v in I):
                raise SchemaError("dt indices must be increasing in 1..%d" % m, p + ".dt")
            key = (tuple(term["exponents"]), tuple(I))
            t[key] = t.get(key, 0) + rational(term["coeff"], p + ".coeff")
        comps[x] = PolyForm(m, t)
    return LForm(space, m, comps)


def load_forms(path, space):
    with open(path) as fh:
        return forms_from_doc(parse_json(fh.read(), str(path)), space)
