import random
from fractions import Fraction

import pytest

from linfpost import corpus
from linfpost.graded_core import homology_dims
from linfpost.linfty_core import LInfinityMorphism, classify_morphism, gl_algebra, jacobi_ok, kernel_ideal
from linfpost.linfty_postnikov import (
    PostnikovError, k_invariant, postnikov_tower, relative_tower, relative_truncation, truncate,
    universal_fibration,
)
from linfpost.randomized import random_complex, random_minimal_fibration, random_space, random_valid_algebra


def raw_killing(i, j):
    """Trace of ad_i ad_j for so(3) from the Levi-Civita symbol."""
    def eps(a, b, c):
        return (a - b) * (b - c) * (c - a) // 2
    return sum(eps(i, k, l) * eps(j, l, k) for k in range(3) for l in range(3))


@pytest.mark.parametrize("seed", range(6))
def test_truncation_homology(seed):
    rng = random.Random(seed)
    L = random_complex(rng, random_space(rng, max_dim=3, max_deg=4))
    h = homology_dims(L.complex())
    for m in range(0, 4):
        le, _ = truncate(L, m, "<=")
        lt, _ = truncate(L, m, "<")
        assert homology_dims(le.complex()) == {d: v for d, v in h.items() if d <= m}
        assert homology_dims(lt.complex()) == {d: v for d, v in h.items() if d < m}


def test_truncations_of_valid_algebras_are_algebras():
    rng = random.Random(9)
    for _ in range(4):
        L = random_valid_algebra(rng, 2, 3)
        for m in range(0, 3):
            for fl in ("<=", "<"):
                T, p = truncate(L, m, fl)
                assert jacobi_ok(T, 4)
                assert classify_morphism(p).fibration


def test_tower_certificates_string_algebra():
    for pair in postnikov_tower(corpus.string_algebra()):
        cert = pair.certificate()
        assert all(v for k, v in cert.items() if isinstance(v, bool)), cert


def test_tower_depth_checked():
    with pytest.raises(PostnikovError):
        postnikov_tower(corpus.so3(), depth=2)


def test_tower_fiber_is_homology():
    L = corpus.sloped_string_algebra()[0]
    for pair in postnikov_tower(L):
        # kernel of q_{<=m} is H_m(L) in degree m
        assert pair.certificate()["fiber_dims"] == {pair.m: homology_dims(L.complex())[pair.m]}


def test_string_psi_tables():
    kv = k_invariant(corpus.string_projection(), 1)
    assert kv.psi_table(1) == {} and kv.psi_table(2) == {}
    want = raw_killing(0, 0)
    assert want == -2
    assert kv.psi_table(3) == {("e1", "e2", "e3"): {"a0[2]": want}}
    assert all(not v for v in kv.psi_residuals().values())


@pytest.mark.parametrize("p,q", [(1, 2), (Fraction(3, 7), Fraction(-5, 2)), (2, 1)])
def test_slope_ratio_of_psi(p, q):
    L, P, _ = corpus.sloped_string_algebra(p, q)
    assert jacobi_ok(L, 4)
    assert homology_dims(L.complex()) == {0: 6, 1: 1}
    kv = k_invariant(corpus.sloped_string_projection(L), 1)
    t = kv.psi_table(3)
    # r + (q/p) t = 0 in the quotient, so the two Killing terms scale by -q/p
    assert t[("e1", "e2", "e3")]["a0[2]"] / t[("f1", "f2", "f3")]["a0[2]"] == -Fraction(q) / Fraction(p)


def test_twisting_avatar_matches_psi():
    assert k_invariant(corpus.string_projection(), 1).twisting_comparison() == []
    assert k_invariant(corpus.sloped_string_projection(), 1).twisting_comparison() == []


def test_classifying_square_string():
    assert k_invariant(corpus.string_projection(), 1).classifying_square().ok


def test_classifying_square_random():
    rng = random.Random(17)
    f = random_minimal_fibration(rng)
    for m in (1, 2):
        assert k_invariant(f, m).classifying_square().ok


def test_relative_tower_reconstructs():
    rng = random.Random(4)
    for _ in range(3):
        f = random_minimal_fibration(rng)
        tw = relative_tower(f)
        assert tw.reconstructs_source()
        for m in range(0, 3):
            assert relative_truncation(f, m).reconstructs_f()


def test_relative_truncation_rejects_non_minimal():
    L = corpus.lea(1, 1)
    # the kernel EA[1] carries the identity differential
    f = LInfinityMorphism.strict(L, gl_algebra(1), {"E_0_0": {"E_0_0": 1}})
    with pytest.raises(PostnikovError):
        relative_truncation(f, 1)


def test_universal_fibration_shape():
    U = universal_fibration(1, 1)
    assert [U.E.space.dim(d) for d in (0, 1, 2)] == [1, 1, 1]
    assert [U.B.space.dim(d) for d in (0, 1, 2)] == [1, 0, 1]
    r = classify_morphism(U.p)
    assert r.fibration and r.minimal_fibration and not r.quasi_split
    K, _ = kernel_ideal(U.p)
    assert {d: K.space.dim(d) for d in K.space.degrees} == {1: 1}
    assert classify_morphism(U.pi_E).acyclic_fibration
