"""Bundled finite Kan complexes and fibrations used by tests and the CLI."""

from .simplicial_core import (
    FinSimpSet, SimpMap, constant, constant_group, cyclic, em_inhomog, hoquot,
    inversion_action, nerve, symmetric, terminal_map, trivial_action,
)


def group_nerve(G):
    return nerve(G, "homog")


def em_quotient(A, n, G, action, twist="first"):
    """``K(A,n)//G -> NG`` for ``G`` acting on ``A`` through ``action``."""
    K = em_inhomog(A, n)
    Q, proj = hoquot(K, constant_group(G), K.act(action), twist=twist)
    Q.name = "%s//%s" % (K.name, G.name)
    # W-bar of a constant group is the homogeneous nerve, tuple for tuple
    N = nerve(G, "homog")
    return SimpMap(Q, N, lambda k, xg: xg[1], name="proj")


def translation_quotient(G):
    """``G//G`` for ``G`` acting on itself by left translation, over ``NG``."""
    S = constant(G.elements, name="G")
    Q, _ = hoquot(S, constant_group(G), lambda k, g, x: G.mul(g, x))
    Q.name = "%s//%s" % (G.name, G.name)
    return SimpMap(Q, nerve(G, "homog"), lambda k, xg: xg[1], name="proj")


def bundled_kan_complexes():
    """``name -> (X, levels that are cheap to enumerate)``."""
    out = {}
    for G in (cyclic(2), cyclic(3), cyclic(4), symmetric(3)):
        out["N(%s)" % G.name] = (group_nerve(G), 4 if G.order() < 6 else 3)
    out["K(Z/2,1)"] = (em_inhomog(cyclic(2), 1), 5)
    out["K(Z/2,2)"] = (em_inhomog(cyclic(2), 2), 5)
    out["K(Z/3,2)"] = (em_inhomog(cyclic(3), 2), 4)
    f = em_quotient(cyclic(3), 1, cyclic(2), inversion_action(cyclic(2), cyclic(3)))
    out["K(Z/3,1)//Z/2"] = (f.source, 4)
    f2 = em_quotient(cyclic(3), 2, cyclic(2), inversion_action(cyclic(2), cyclic(3)))
    out["K(Z/3,2)//Z/2"] = (f2.source, 4)
    return out


def kinvariant_contexts():
    """The two flagship fibrations with their degree n."""
    Z2, Z3 = cyclic(2), cyclic(3)
    K = em_inhomog(Z2, 2)
    c1 = (terminal_map(K), 2, "K(Z/2,2) -> pt")
    c2 = (em_quotient(Z3, 2, Z2, inversion_action(Z2, Z3)), 2, "K(Z/3,2)//Z/2 -> N(Z/2)")
    return [c1, c2]
