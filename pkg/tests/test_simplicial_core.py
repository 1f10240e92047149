from collections import Counter
from itertools import combinations_with_replacement

import pytest

from linfpost.simplicial_core import (
    FinSimpSet, GroupAction, LinearIso, brute_force_hom, canonical_iso, check_iso, constant_group,
    cyclic, decalage, em_homog, em_inhomog, hom_finite, homotopy_group, hoquot, inversion_action,
    is_isomorphic_table, k_coords, lin_em, lin_wbar_em, nerve, nerve_coords, predicate, relw_map,
    symmetric, to_dot, verify_identities, verify_linear, verify_map, wbar, wbar_k_to_k,
)


def corrupt(X, level, i, bad_x, value):
    """Copy of ``X`` whose face ``d_i`` on ``bad_x`` at ``level`` returns ``value``."""
    def face(k, j, x):
        if (k, j, x) == (level, i, bad_x):
            return value
        return X.face(k, j, x)
    return FinSimpSet(X.level, face, X.degen, name="corrupt")


@pytest.mark.parametrize("G", [cyclic(2), cyclic(4), symmetric(3)], ids=lambda G: G.name)
def test_nerves_are_simplicial(G):
    for c in ("homog", "inhomog"):
        assert verify_identities(nerve(G, c), 3).ok


def test_corrupted_face_is_located():
    X = nerve(cyclic(3), "homog")
    bad = (1, 1)
    Y = corrupt(X, 2, 1, bad, (0,))
    rep = verify_identities(Y, 3)
    assert not rep.ok
    # level-2 simplices are checked first, so the witness is the corrupted one
    assert rep.witness[1] == 2 and rep.witness[-1] == bad


def test_homog_nerve_faces_multiply_neighbours():
    G = symmetric(3)
    N = nerve(G, "homog")
    for x in N.level(3):
        assert N.face(3, 1, x) == (G.mul(x[0], x[1]), x[2])
        assert N.face(3, 2, x) == (x[0], G.mul(x[1], x[2]))
        assert N.face(3, 0, x) == x[1:] and N.face(3, 3, x) == x[:2]


def test_nerve_coordinates_iso():
    for G in (cyclic(2), cyclic(4), symmetric(3)):
        f, g = nerve_coords(G)
        assert check_iso(f, g, 3)["ok"]
        x = tuple(G.elements[:3])
        assert f(3, x)[1] == G.mul(x[0], x[1])


@pytest.mark.parametrize("p,n", [(2, 1), (3, 1), (3, 2), (2, 3)])
def test_em_top_face_is_alternating_sum(p, n):
    K = em_inhomog(cyclic(p), n)
    for x in K.level(n + 1):
        a = K.to_coords(n + 1, x)
        want = (-1) ** n * sum((-1) ** i * ai for i, ai in enumerate(a)) % p
        assert K.face(n + 1, n + 1, x) == (want,)


@pytest.mark.parametrize("p,n", [(2, 1), (3, 2)])
def test_k_coordinate_formula(p, n):
    A = cyclic(p)
    f, _ = k_coords(A, n)
    H = em_homog(A, n)
    assert all(f(n + 1, x) == f.formula_n1(x) for x in H.level(n + 1))
    f, g = canonical_iso("K_coords", n + 2, A=A, n=n)
    assert check_iso(f, g, n + 2)["ok"]


@pytest.mark.parametrize("p,n", [(2, 1), (3, 1), (2, 2)])
def test_wbar_k_formula(p, n):
    A = cyclic(p)
    phi, W, K, T = wbar_k_to_k(A, n)
    assert verify_identities(W, n + 2).ok and verify_map(phi, n + 2).ok
    for w in W.level(n + 2):
        assert phi(n + 2, w) == phi.formula_n2(K.to_coords(n + 1, w[0]), K.to_coords(n, w[1]))


def test_hoquot_first_face_display():
    G, A = cyclic(2), cyclic(3)
    K = em_inhomog(A, 1)
    Gs = constant_group(G)
    act = K.act(inversion_action(G, A))
    Q, pr = hoquot(K, Gs, act, twist="first")
    W = wbar(Gs)
    for x, g in Q.level(2):
        want = (act(1, G.inv(g[0]), K.face(2, 0, x)), W.face(2, 0, g))
        assert Q.face(2, 0, (x, g)) == want
    for tw in ("first", "last"):
        Q, pr = hoquot(K, Gs, act, twist=tw)
        assert verify_identities(Q, 3).ok and verify_map(pr, 3).ok


def test_relw_is_iso_for_both_twists():
    G, A = cyclic(2), cyclic(3)
    for tw in ("first", "last"):
        f = relw_map(A, 1, G, inversion_action(G, A), twist=tw)
        assert verify_map(f, 3).ok


@pytest.mark.parametrize("shape", [("horn", 2, 0), ("horn", 2, 1), ("horn", 3, 2), ("boundary", 2), ("spine", 3)])
def test_horn_probe_matches_brute_force(shape):
    for X in (nerve(cyclic(2), "inhomog"), em_inhomog(cyclic(2), 1), em_inhomog(cyclic(3), 2)):
        assert Counter(hom_finite(shape, X).elements) == Counter(brute_force_hom(shape, X))


def test_relative_horn_probe_matches_brute_force():
    W = wbar(constant_group(cyclic(2)))
    D, p = decalage(W)
    for shape in (("horn", 2, 1), ("boundary", 2)):
        assert sorted(hom_finite(shape, D, p).elements) == sorted(brute_force_hom(shape, D, p))


def test_homotopy_groups():
    assert homotopy_group(em_inhomog(cyclic(3), 2), 2).order() == 3
    assert homotopy_group(em_inhomog(cyclic(3), 2), 1).order() == 1
    hg = homotopy_group(nerve(symmetric(3), "inhomog"), 1)
    assert hg.order() == 6 and not hg.is_abelian()
    assert is_isomorphic_table(hg.group(), symmetric(3))
    assert not is_isomorphic_table(cyclic(6), symmetric(3))


def test_em_is_a_stack():
    assert predicate(em_inhomog(cyclic(2), 2), "n-stack", 4, n=2)
    assert predicate(em_inhomog(cyclic(2), 1), "kan", 3)


def test_principal_bundle_is_covering_kan_not_hypercover():
    W = wbar(constant_group(cyclic(2)))
    D, p = decalage(W)
    assert predicate(p, "covering-kan", 3)
    rep = predicate(p, "hypercover", 3)
    assert not rep and rep.witnesses


def test_non_kan_boundary():
    # the boundary of a 2-simplex has no filler for the inner horn
    def level(k):
        return [v for v in combinations_with_replacement(range(3), k + 1) if len(set(v)) <= 2]

    def face(k, i, x):
        return x[:i] + x[i + 1:]

    def degen(k, i, x):
        return x[:i + 1] + x[i:]

    X = FinSimpSet(level, face, degen, name="dDelta2")
    assert verify_identities(X, 3).ok
    rep = predicate(X, "kan", 2)
    assert not rep


def test_linear_models_agree():
    for p, n in ((2, 1), (3, 2)):
        A = cyclic(p)
        phi = wbar_k_to_k(A, n)[0]
        LW, LT = lin_wbar_em(A, n), lin_em(A, n + 1)
        cert = LinearIso(LW, LT, phi, "W").certificate(n + 2)
        assert all(v["bijective"] and v["natural"] and v["inverse_ok"] for v in cert.values())
        assert verify_linear(LW, n + 2).ok


def test_group_action_validated():
    with pytest.raises(ValueError):
        GroupAction(cyclic(2), cyclic(3), lambda g, a: (a + g) % 3)


def test_dot_export():
    s = to_dot(nerve(cyclic(2), "inhomog"), 2)
    assert s.startswith("digraph") and "->" in s
