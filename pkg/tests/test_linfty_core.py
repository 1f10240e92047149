import random
from fractions import Fraction

import pytest

from linfpost import corpus
from linfpost.graded_core import ONE, GradedSpace, homology_dims
from linfpost.linfty_core import (
    LInfinityAlgebra, LInfinityError, LInfinityMorphism, check_jacobi, check_morphism,
    classify_morphism, jacobi_ok, kernel_ideal, morphism_ok, product, semidirect,
    strict_morphism_residuals, tangent, zero_algebra,
)
from linfpost.linfty_postnikov import q_le, truncate
from linfpost.randomized import random_complex, random_space, random_valid_algebra


def lie_jacobiator(brackets, labels):
    """Classical ``[[x,y],z] + [[y,z],x] + [[z,x],y]`` from a raw table."""

    def br(u, v):
        out = {}
        for a, ca in u.items():
            for b, cb in v.items():
                if (a, b) in brackets:
                    val, s = brackets[(a, b)], 1
                elif (b, a) in brackets:
                    val, s = brackets[(b, a)], -1
                else:
                    continue
                for t, c in val.items():
                    out[t] = out.get(t, 0) + s * ca * cb * c
        return {k: v for k, v in out.items() if v}

    bad = []
    for i, x in enumerate(labels):
        for j, y in enumerate(labels[i + 1:], i + 1):
            for z in labels[j + 1:]:
                tot = {}
                for a, b, c in ((x, y, z), (y, z, x), (z, x, y)):
                    for t, v in br(br({a: 1}, {b: 1}), {c: 1}).items():
                        tot[t] = tot.get(t, 0) + v
                if any(tot.values()):
                    bad.append((x, y, z))
    return bad


def test_chain_complex_as_abelian_algebra():
    rng = random.Random(4)
    for _ in range(5):
        L = random_complex(rng, random_space(rng))
        assert all(not r for r in check_jacobi(L, 4).values())


def test_string_algebra_passes():
    assert jacobi_ok(corpus.string_algebra(), 4)


def test_string_l3_is_killing_cocycle():
    S = corpus.string_algebra()
    g = corpus.so3()
    kf = corpus.killing_form(g)
    for w in [("e1", "e2", "e3"), ("e2", "e3", "e1"), ("e1", "e3", "e2")]:
        ab = g.bracket(2, w[:2])
        want = sum(c * kf[(z, w[2])] for z, c in ab.items())
        assert S.bracket(3, w) == ({"r": want} if want else {})


@pytest.mark.parametrize("entry,output", [(("e1", "e2"), "e1"), (("e2", "e3"), "e3")])
def test_perturbed_so3_fails_at_arity_three(entry, output):
    labs, br = corpus.so3_structure()
    br = {k: dict(v) for k, v in br.items()}
    br[entry][output] = br[entry].get(output, 0) + 1
    oracle = lie_jacobiator(br, labs)
    assert oracle
    L = LInfinityAlgebra(GradedSpace({0: labs}), {2: br})
    res = check_jacobi(L, 4)
    assert not res[1] and not res[2]
    assert set(res[3]) == set(oracle)


def test_rescaled_constant_is_still_lie():
    # raising an existing so(3) constant keeps Jacobi (diagonal 3-dim brackets)
    labs, br = corpus.so3_structure()
    br[("e1", "e2")] = {"e3": Fraction(2)}
    assert not lie_jacobiator(br, labs)
    assert jacobi_ok(LInfinityAlgebra(GradedSpace({0: labs}), {2: br}), 4)


def test_identity_morphism():
    L = corpus.string_algebra()
    assert morphism_ok(LInfinityMorphism.identity(L), 4)


def test_string_projection_is_strict_morphism():
    f = corpus.string_projection()
    assert morphism_ok(f, 4)
    assert all(not v for v in strict_morphism_residuals(f, 3).values())


def test_bad_quadratic_component_detected_at_arity_two():
    src = LInfinityAlgebra(GradedSpace({0: ["x", "y"]}), {})
    tgt = LInfinityAlgebra(GradedSpace({0: ["x", "y"], 1: ["r"]}), {1: {("r",): {"x": ONE}}})
    f = LInfinityMorphism(src, tgt, {1: {("x",): {"x": ONE}, ("y",): {"y": ONE}},
                                     2: {("x", "y"): {"r": ONE}}})
    res = check_morphism(f, 3)
    assert not res[1]
    # l_1 f_2(x, y) = x has nothing to cancel it
    assert set(res[2]) == {("x", "y")}
    assert set(res[2][("x", "y")]) == {"x"}


def test_tangent_identity_and_projection():
    L = corpus.string_algebra()
    t = tangent(LInfinityMorphism.identity(L))
    for d, mat in t["homology_map"].items():
        assert mat == [[1 if i == j else 0 for j in range(len(mat))] for i in range(len(mat))]
    t = tangent(corpus.string_projection())
    assert t["homology_map"][0] == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


def test_q_le_flags():
    L = corpus.string_algebra()
    for m in (0, 1):
        r = classify_morphism(q_le(L, m))
        assert r.fibration and r.quasi_split and r.minimal_fibration


def test_identity_is_isomorphism():
    r = classify_morphism(LInfinityMorphism.identity(corpus.so3()))
    assert r.isomorphism and r.quasi_isomorphism and r.fibration


def test_universal_projection_not_quasi_split():
    E, B = corpus.lea(1, 1), corpus.lba(1, 1)
    low = set(corpus.a_labels(1, 1))
    p = LInfinityMorphism.strict(E, B, {x: {x: ONE} for x in E.space.labels() if x not in low})
    r = classify_morphism(p)
    assert r.fibration and r.minimal_fibration and not r.quasi_split


def test_flag_implications_on_random_strict_maps():
    rng = random.Random(11)
    for _ in range(8):
        L = random_valid_algebra(rng, 2, 2)
        M = random_valid_algebra(rng, 2, 2, prefix="v")
        P, p1, _ = product(L, M)
        r = classify_morphism(p1)
        if r.isomorphism:
            assert r.quasi_isomorphism
        if r.acyclic_fibration:
            assert r.fibration
        assert r.fibration


def test_kernels():
    K, _ = kernel_ideal(corpus.string_projection())
    assert K.space.dim() == 1 and K.space.dim(1) == 1 and not K.brackets
    K0, _ = kernel_ideal(LInfinityMorphism.identity(corpus.so3()))
    assert K0.space.dim() == 0


def test_semidirect_trivial_action_is_product():
    g = corpus.so3()
    C = GradedSpace({1: ["c"]})
    S = semidirect(g, C, {})
    P, _, _ = product(g, LInfinityAlgebra(C, {}))
    assert S.same_as(P)


def test_semidirect_rejects_non_module():
    g = corpus.so3()
    C = GradedSpace({1: ["c"]})
    with pytest.raises(LInfinityError):
        semidirect(g, C, {("e1", "c"): {"c": ONE}})


def test_universal_algebras():
    B = corpus.lba(2, 1)
    assert jacobi_ok(B, 4) and set(B.brackets) == {2}
    lo, hi = B.space.degree_range()
    assert (lo, hi) == (0, 2)
    E = corpus.lea(1, 1)
    assert jacobi_ok(E, 4)
    assert homology_dims(E.complex()) == {0: 1}


def test_product_with_zero():
    L = corpus.string_algebra()
    P, _, _ = product(L, zero_algebra())
    assert P.same_as(L)


def test_product_homology_is_direct_sum():
    rng = random.Random(2)
    for _ in range(6):
        A = random_complex(rng, random_space(rng, prefix="x"))
        B = random_complex(rng, random_space(rng, prefix="y"))
        P, _, _ = product(A, B)
        ha, hb, hp = homology_dims(A.complex()), homology_dims(B.complex()), homology_dims(P.complex())
        for d in set(ha) | set(hb) | set(hp):
            assert hp.get(d, 0) == ha.get(d, 0) + hb.get(d, 0)


def test_universal_projections_quasi_split_over_zero():
    E = corpus.lea(1, 2)
    P, p1, _ = product(E, zero_algebra())
    assert classify_morphism(p1).quasi_split


def test_truncation_is_lie_algebra_at_zero():
    T, p = truncate(corpus.string_algebra(), 0, "<=")
    assert T.space.degrees == {0: ["e1", "e2", "e3"]}
    assert T.same_as(corpus.so3()) or T.brackets == corpus.so3().brackets
