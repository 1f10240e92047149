from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given, settings, strategies as st

from linfpost.graded_core import (
    ChainComplex, GradedError, GradedLinearMap, GradedSpace, SignedPermutation,
    homology_dims, koszul_sign, nullspace, rank, rref, skew_sign, sort_with_sign,
    suspend, unshuffles,
)


def bubble_sign(perm, degrees):
    """Sign by sorting ``perm`` with adjacent swaps, one Koszul factor per swap."""
    slots = list(perm)
    sign = 1
    changed = True
    while changed:
        changed = False
        for i in range(len(slots) - 1):
            if slots[i] > slots[i + 1]:
                a, b = slots[i], slots[i + 1]
                if degrees[a] % 2 and degrees[b] % 2:
                    sign = -sign
                slots[i], slots[i + 1] = b, a
                changed = True
    return sign


def test_koszul_identity():
    assert koszul_sign(SignedPermutation((0, 1, 2)), [1, 3, 5]) == 1


def test_swapping_two_odd_slots():
    assert koszul_sign(SignedPermutation((1, 0)), [1, 1]) == -1
    assert koszul_sign(SignedPermutation((1, 0)), [1, 2]) == 1


def test_cyclic_shift_matches_adjacent_transpositions():
    degs = [1, 0, 1]
    for p in [(1, 2, 0), (2, 0, 1)]:
        assert koszul_sign(SignedPermutation(p), degs) == bubble_sign(p, degs)
    # the cycle moves one odd slot across the other odd slot once
    assert koszul_sign(SignedPermutation((1, 2, 0)), degs) == -1


@settings(max_examples=200, deadline=None)
@given(st.permutations(range(5)), st.lists(st.integers(-3, 4), min_size=5, max_size=5))
def test_koszul_equals_bubble_sort(perm, degs):
    assert koszul_sign(SignedPermutation(perm), degs) == bubble_sign(perm, degs)


@settings(max_examples=100, deadline=None)
@given(st.permutations(range(4)), st.lists(st.integers(0, 3), min_size=4, max_size=4))
def test_skew_sign_is_parity_times_koszul(perm, degs):
    p = SignedPermutation(perm)
    parity = -1 if p.parity() else 1
    assert skew_sign(p, degs) == parity * bubble_sign(perm, degs)


@pytest.mark.parametrize("p,q,count", [(1, 1, 2), (2, 1, 3), (2, 2, 6), (3, 2, 10)])
def test_unshuffle_counts(p, q, count):
    assert len(unshuffles(p, q)) == count


def test_unshuffles_are_block_order_preserving():
    want = set()
    for perm in permutations(range(4)):
        if perm[0] < perm[1] and perm[2] < perm[3]:
            want.add(perm)
    assert {s.perm for s in unshuffles(2, 2)} == want


def test_suspend():
    V = GradedSpace({0: ["a", "b"]})
    assert suspend(V, 1).dim(1) == 2 and suspend(V, 1).dim(0) == 0
    assert suspend(V, 0) == V


def test_duplicate_labels_rejected():
    with pytest.raises(GradedError):
        GradedSpace({0: ["a"], 1: ["a"]})


def test_floats_rejected():
    V = GradedSpace({0: ["a"]})
    with pytest.raises(GradedError):
        GradedLinearMap(V, V, 0, {"a": {"a": 0.5}})


def test_shifted_identity_complex_is_acyclic():
    A = GradedSpace({0: ["a0", "a1"]})
    top, low = suspend(A, 2), suspend(A, 1)
    sp = top.direct_sum(low)
    d = {t: {l: 1} for t, l in zip(top.labels(), low.labels())}
    C = ChainComplex(sp, GradedLinearMap(sp, sp, -1, d))
    assert homology_dims(C) == {}


def test_zero_differential_homology_is_everything():
    sp = GradedSpace({0: ["a"], 1: ["b", "c"], 3: ["d"]})
    assert homology_dims(ChainComplex(sp)) == {0: 1, 1: 2, 3: 1}


def test_d_squared_nonzero_rejected():
    sp = GradedSpace({0: ["a"], 1: ["b"], 2: ["c"]})
    d = GradedLinearMap(sp, sp, -1, {"c": {"b": 1}, "b": {"a": 1}})
    with pytest.raises(GradedError):
        ChainComplex(sp, d)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(1, 3), st.data())
def test_homology_rank_nullity(n0, n1, n2, data):
    # random d2, then d1 chosen in the left kernel so that d1 d2 = 0
    sp = GradedSpace({0: ["x%d" % i for i in range(n0)], 1: ["y%d" % i for i in range(n1)],
                      2: ["z%d" % i for i in range(n2)]})
    ints = st.integers(-2, 2)
    d2 = [[data.draw(ints) for _ in range(n2)] for _ in range(n1)]
    # rows of d1 are combinations of the left nullspace of d2
    left = nullspace([list(r) for r in zip(*d2)], n1) if n2 else nullspace([], n1)
    d1 = []
    for _ in range(n0):
        coeffs = [data.draw(ints) for _ in left]
        d1.append([sum((c * v[j] for c, v in zip(coeffs, left)), Fraction(0)) for j in range(n1)])
    ent = {}
    for j, y in enumerate(sp.basis(1)):
        ent[y] = {sp.basis(0)[i]: d1[i][j] for i in range(n0) if d1[i][j]}
    for j, z in enumerate(sp.basis(2)):
        ent[z] = {sp.basis(1)[i]: d2[i][j] for i in range(n1) if d2[i][j]}
    C = ChainComplex(sp, GradedLinearMap(sp, sp, -1, ent))
    h = homology_dims(C)
    r1, r2 = rank(d1) if n0 else 0, rank(d2)
    assert h.get(0, 0) == n0 - r1
    assert h.get(1, 0) == n1 - r1 - r2
    assert h.get(2, 0) == n2 - r2


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=1, max_size=4))
def test_rref_is_idempotent_and_preserves_rank(rows):
    mat = [[Fraction(x) for x in r] for r in rows]
    R, piv = rref(mat)
    assert rank(mat) == len(piv)
    R2, piv2 = rref(R)
    assert piv2 == piv and R2[:len(piv)] == R[:len(piv)]


def test_sort_with_sign_vanishing_repeat():
    sp = GradedSpace({1: ["x"], 0: ["a"]})
    # graded skew symmetry: a repeated even letter vanishes, odd does not
    assert sort_with_sign(("a", "a"), [0, 0], sp.index, skew=True)[1] == 0
    assert sort_with_sign(("x", "x"), [1, 1], sp.index, skew=True)[1] != 0
