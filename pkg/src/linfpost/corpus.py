"""
Bundled example corpus: string Lie 2-algebra of so(3), the sloped
quotient of two copies of it, universal fibration algebras, and the finite
simplicial contexts used by the simplicial modules.
"""

from fractions import Fraction

from .graded_core import ONE, ZERO, GradedSpace, vclean
from .linfty_core import (
    LInfinityAlgebra, LInfinityMorphism, gl_algebra, product, quotient_algebra,
    semidirect, zero_algebra,
)


def levi_civita(i, j, k):
    if len({i, j, k}) < 3:
        return 0
    perm = [i, j, k]
    inv = sum(1 for a in range(3) for b in range(a + 1, 3) if perm[a] > perm[b])
    return -1 if inv % 2 else 1


def so3_structure(prefix="e"):
    labs = ["%s%d" % (prefix, i) for i in range(1, 4)]
    br = {}
    for i in range(3):
        for j in range(i + 1, 3):
            v = {}
            for k in range(3):
                e = levi_civita(i, j, k)
                if e:
                    v[labs[k]] = Fraction(e)
            br[(labs[i], labs[j])] = v
    return labs, br


def so3(prefix="e"):
    labs, br = so3_structure(prefix)
    return LInfinityAlgebra(GradedSpace({0: labs}), {2: br}, name="so(3)", lie_n=1)


def killing_form(g):
    """``<x, y> = tr(ad x ad y)`` on basis labels of a Lie algebra in degree 0."""
    labs = g.space.basis(0)

    def ad(x):
        return [[g.bracket(2, (x, y)).get(z, ZERO) for y in labs] for z in labs]

    out = {}
    for a in labs:
        A = ad(a)
        for b in labs:
            B = ad(b)
            out[(a, b)] = sum((A[i][k] * B[k][i] for i in range(len(labs)) for k in range(len(labs))), ZERO)
    return out


def string_algebra(prefix="e", top="r"):
    """``str(so(3))``: so(3) in degree 0, one line in degree 1,
    ``l_3(A, B, C) = <[A, B], C>``."""
    g = so3(prefix)
    labs = g.space.basis(0)
    kf = killing_form(g)
    br = {2: dict(g.brackets[2]), 3: {}}
    for i in range(3):
        for j in range(i + 1, 3):
            for k in range(j + 1, 3):
                ab = g.bracket(2, (labs[i], labs[j]))
                val = sum((c * kf[(z, labs[k])] for z, c in ab.items()), ZERO)
                if val:
                    br[3][(labs[i], labs[j], labs[k])] = {top: val}
    return LInfinityAlgebra(GradedSpace({0: labs, 1: [top]}), br, name="str(so3)", lie_n=2)


def string_projection(S=None):
    S = S or string_algebra()
    g = so3()
    return LInfinityMorphism.strict(S, g, {x: {x: ONE} for x in g.space.labels()}, name="str->g")


def sloped_string_algebra(p=1, q=2):
    """Quotient of ``str + str`` by the line ``(p, q)`` in degree 1."""
    S1 = string_algebra("e", "r")
    S2 = string_algebra("f", "t")
    P, _, _ = product(S1, S2)
    L, proj = quotient_algebra(P, [{"r": Fraction(p), "t": Fraction(q)}], name="str2_sloped")
    L.lie_n = 2
    return L, P, proj


def sloped_string_projection(L=None):
    L = L or sloped_string_algebra()[0]
    g1, g2 = so3("e"), so3("f")
    G, _, _ = product(g1, g2)
    return LInfinityMorphism.strict(L, G, {x: {x: ONE} for x in G.space.labels()}, name="sloped->gxg")


# ---------------------------------------------------------------------------
# universal fibration algebras

def a_labels(dim, k):
    return ["a%d[%d]" % (i, k) for i in range(dim)]


def lba(dim, m):
    """``A[m+1] // End(A)``."""
    gl = gl_algebra(dim)
    top = a_labels(dim, m + 1)
    act = {("E_%d_%d" % (i, j), top[j]): {top[i]: ONE} for i in range(dim) for j in range(dim)}
    return semidirect(gl, GradedSpace({m + 1: top}), act, name="L_BA(%d)" % m)


def lea(dim, m):
    """``EA[m] // End(A)`` with ``EA[m] = (A[m+1] --id--> A[m])``."""
    gl = gl_algebra(dim)
    top = a_labels(dim, m + 1)
    low = a_labels(dim, m)
    act = {}
    for i in range(dim):
        for j in range(dim):
            act[("E_%d_%d" % (i, j), top[j])] = {top[i]: ONE}
            act[("E_%d_%d" % (i, j), low[j])] = {low[i]: ONE}
    d = {top[i]: {low[i]: ONE} for i in range(dim)}
    return semidirect(gl, GradedSpace({m + 1: top, m: low}), act, differential=d,
                      name="L_EA(%d)" % m)


# ---------------------------------------------------------------------------
# algebra registry

def algebra_corpus():
    out = {
        "so3": so3(),
        "str-so3": string_algebra(),
        "str2-sloped": sloped_string_algebra()[0],
        "lea-1-1": lea(1, 1),
        "lba-1-1": lba(1, 1),
        "lea-2-1": lea(2, 1),
        "lba-2-1": lba(2, 1),
        "lea-1-2": lea(1, 2),
        "lba-1-2": lba(1, 2),
    }
    return out
