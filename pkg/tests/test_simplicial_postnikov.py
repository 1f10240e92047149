import pytest

from linfpost.simplicial_core import (
    SimpMap, cyclic, em_inhomog, identity_map, inversion_action, is_isomorphic_table, nerve, point,
    symmetric, terminal_map,
)
from linfpost.simplicial_corpus import bundled_kan_complexes, em_quotient, translation_quotient
from linfpost.simplicial_postnikov import (
    RelBoundaryClasses, duskin_truncate, interleaved_tower, is_minimal, minpost_equivalence,
    moore_truncate, pullback_comparison, tau1_vs_nerve,
)

KAN = bundled_kan_complexes()


@pytest.mark.parametrize("name", sorted(KAN))
def test_homotopy_relation_needs_no_closure(name):
    X, levels = KAN[name]
    for n in range(0, min(levels, 4)):
        c = RelBoundaryClasses(X, n)
        assert not c.closure_nontrivial


def test_translation_quotient_minimality():
    f = translation_quotient(cyclic(2))
    assert is_minimal(f, 3) == (True, None)
    ok, wit = is_minimal(f.source, 3)
    assert not ok and wit[0] == 0 and len(wit[1]) == 2


def test_minimality_equivalence_on_both_sides():
    f = translation_quotient(cyclic(2))
    mn, all_iso, _ = minpost_equivalence(f, 2, 4)
    assert mn and all_iso
    mn, all_iso, isos = minpost_equivalence(f.source, 2, 4)
    assert not mn and not all_iso and not isos[0]


def test_duskin_truncations_of_em_space():
    K = em_inhomog(cyclic(2), 2)
    D2 = duskin_truncate(K, 2)
    assert [D2.T.size(k) for k in range(5)] == [1, 1, 2, 8, 64]
    assert all(D2.certify(4).values())
    D1 = duskin_truncate(K, 1)
    assert [D1.T.size(k) for k in range(5)] == [1] * 5


def test_moore_truncation_kills_top_homotopy():
    K = em_inhomog(cyclic(2), 1)
    M = moore_truncate(K, 1)
    assert [M.T.size(k) for k in range(4)] == [1] * 4
    M2 = moore_truncate(K, 2)
    assert [M2.T.size(k) for k in range(4)] == [K.size(k) for k in range(4)]


def test_fundamental_groupoid_of_quotient():
    X, _ = KAN["K(Z/3,1)//Z/2"]
    ok, G = tau1_vs_nerve(X, 4)
    assert ok and is_isomorphic_table(G, symmetric(3))


def test_interleaved_tower_rows():
    for row in interleaved_tower(em_inhomog(cyclic(2), 1), 2, 4).report():
        assert all(v for k, v in row.items() if isinstance(v, bool)), row


def test_truncation_commutes_with_base_change():
    f = em_quotient(cyclic(3), 1, cyclic(2), inversion_action(cyclic(2), cyclic(3)))
    N = f.target
    assert pullback_comparison(f, identity_map(N), 1, 3)
    pt = point()
    g = SimpMap(pt, N, lambda k, x: N.basepoint(k), name="basepoint")
    assert pullback_comparison(f, g, 1, 3)
