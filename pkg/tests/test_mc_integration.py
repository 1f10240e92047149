import random
from fractions import Fraction
from itertools import combinations, combinations_with_replacement
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from linfpost import corpus
from linfpost import mc_integration as mi
from linfpost.ce_coalgebra import morphism_decode
from linfpost.graded_core import ONE, GradedSpace
from linfpost.linfty_core import LInfinityAlgebra, check_jacobi, jacobi_ok, morphism_ok
from linfpost.mc_integration import (
    LForm, MCError, PolyForm, bch, codegeneracy, coface, compatible_nu, curvature, dk_degeneracy,
    dk_face, dold_kan_whitney, flat_section, heisenberg, iota, is_mc, lea_maps, maurer_cartan_of,
    normalized_cocycle_rank, pushforward, tensor_bracket, upper_triangular, whitney_form,
)
from linfpost.randomized import (
    random_coalgebra_automorphism, random_strict_morphism, random_valid_algebra, transport,
)


def rpoly(rng, m, deg, formdeg=0, terms=3):
    out = PolyForm.zero(m)
    for _ in range(terms):
        e = [0] * m
        for _ in range(rng.randint(0, deg)):
            e[rng.randrange(m)] += 1
        I = tuple(sorted(rng.sample(range(1, m + 1), formdeg)))
        out = out + PolyForm(m, {(tuple(e), I): rng.randint(-3, 3)})
    return out


def based(X):
    return LForm(X.space, X.m, {x: w - PolyForm.const(X.m, w.at_vertex(0)) for x, w in X.comps.items()})


# -- forms ------------------------------------------------------------------

def test_leibniz_on_coordinates():
    t1, t2 = PolyForm.coord(2, 1), PolyForm.coord(2, 2)
    lhs = (t1 * t2).d()
    assert lhs == PolyForm.dcoord(2, 1) * t2 + t1 * PolyForm.dcoord(2, 2)


def test_barycentric_coordinates_sum_to_one():
    total = sum((PolyForm.coord(3, i) for i in range(4)), PolyForm.zero(3))
    assert total == PolyForm.const(3, 1)
    assert not sum((PolyForm.dcoord(3, i) for i in range(4)), PolyForm.zero(3))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(1, 3), st.integers(0, 2))
def test_d_squared_and_leibniz(seed, m, p):
    rng = random.Random(seed)
    p = min(p, m)
    a = rpoly(rng, m, 3, p)
    b = rpoly(rng, m, 3, rng.randint(0, m))
    assert not a.d().d()
    sign = -1 if p % 2 else 1
    assert (a * b).d() == a.d() * b + (a * b.d()).scale(sign)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_whitney_forms_are_a_cochain_map(m):
    # d omega_S = sum over T = S + v of (-1)^{position of v in T} omega_T
    for size in range(1, m + 1):
        for S in combinations(range(m + 1), size):
            want = PolyForm.zero(m)
            for v in range(m + 1):
                if v in S:
                    continue
                T = tuple(sorted(S + (v,)))
                s = -1 if T.index(v) % 2 else 1
                want = want + whitney_form(m, T).scale(s)
            assert whitney_form(m, S).d() == want, S


def test_whitney_forms_restrict_to_faces():
    m = 3
    for i in range(m + 1):
        th = coface(m, i)
        for S in combinations(range(m + 1), 2):
            pulled = whitney_form(m, S).pullback(th)
            if all(v in th for v in S):
                pre = tuple(th.index(v) for v in S)
                assert pulled == whitney_form(m - 1, pre)
            else:
                assert not pulled


def test_vertex_form_is_barycentric():
    assert whitney_form(2, (1,)) == PolyForm.coord(2, 1)


# -- curvature and pushforward ---------------------------------------------

def test_curvature_binary_case_explicit():
    h = heisenberg()
    rng = random.Random(2)
    for m in (2, 3):
        al, be, ga = (rpoly(rng, m, 2, 1) for _ in range(3))
        th = LForm(h.space, m, {"x": al, "y": be, "z": ga})
        # [theta, theta] = 2 z (x) alpha ^ beta, so the curvature is d theta - alpha ^ beta on z
        want = LForm(h.space, m, {"x": al.d(), "y": be.d(), "z": ga.d() - al * be})
        assert curvature(h, th) == want


def test_curvature_rejects_wrong_degree():
    h = heisenberg()
    with pytest.raises(MCError):
        curvature(h, LForm(h.space, 1, {"x": PolyForm.coord(1, 1)}))


def test_sign_is_standard():
    assert [mi.mc_sign(k) for k in range(1, 6)] == [1, -1, -1, 1, 1]


@pytest.fixture(scope="module")
def transported_case():
    n4 = upper_triangular(4)
    sp = GradedSpace({0: n4.space.labels(), 1: ["p0"], 2: ["q0"], 3: ["r0"]})
    L0 = LInfinityAlgebra(sp, dict(n4.brackets))
    rng = random.Random(5)
    m = 4
    F = random_coalgebra_automorphism(rng, sp, 4, density=0.3)
    L1 = transport(L0, F, 4)
    f = morphism_decode(F, L0, L1)

    def poly(deg):
        out = PolyForm.zero(m)
        for _ in range(2):
            e = [0] * m
            for _ in range(rng.randint(0, deg)):
                e[rng.randrange(m)] += 1
            out = out + PolyForm(m, {(tuple(e), ()): rng.randint(-2, 2)})
        return out - PolyForm.const(m, out.at_vertex(0))

    X = LForm(n4.space, m, {c: poly(1) for c in n4.space.labels()})
    th = LForm(sp, m, maurer_cartan_of(n4, X).comps)
    return L0, L1, f, th


def test_pushforward_keeps_mc(transported_case):
    L0, L1, f, th = transported_case
    assert jacobi_ok(L1, 4) and morphism_ok(f, 4)
    assert is_mc(L0, th)
    assert is_mc(L1, pushforward(f, th))


@pytest.mark.parametrize("variant", [lambda k: (-1) ** (k - 1), lambda k: 1 if k == 1 else -1],
                         ids=["alternating", "all-negative"])
def test_pushforward_pins_the_sign(transported_case, monkeypatch, variant):
    L0, L1, f, th = transported_case
    monkeypatch.setattr(mi, "mc_sign", variant)
    assert not is_mc(L1, pushforward(f, th))


def test_strict_pushforward_is_componentwise():
    rng = random.Random(12)
    for _ in range(5):
        f = random_strict_morphism(rng)
        L = f.source
        m = 3
        comps = {}
        for x in L.space.labels():
            p = L.space.deg(x) + 1
            if p <= m:
                comps[x] = rpoly(rng, m, 2, p)
        a = LForm(L.space, m, comps)
        out = pushforward(f, a)
        want = {}
        for x, w in a.comps.items():
            for y, c in f.component(1, (x,)).items():
                want[y] = want.get(y, PolyForm.zero(m)) + w.scale(c)
        assert out == LForm(f.target.space, m, want)


def tensor_with_truncated_forms(L):
    """``L (x) A`` with ``A = Omega(Delta^1) / (t^2, t dt)``, basis 1, t, dt."""
    forms = {"1": PolyForm.const(1, 1), "t": PolyForm.coord(1, 1), "dt": PolyForm.dcoord(1, 1)}
    fdeg = {"1": 0, "t": 0, "dt": 1}
    labels = {}
    degs = {}
    for x in L.space.labels():
        for k in forms:
            lab = "%s|%s" % (x, k)
            labels[lab] = (x, k)
            degs.setdefault(L.space.deg(x) - fdeg[k], []).append(lab)
    sp = GradedSpace(degs)

    def reduce(lf):
        out = {}
        for x, w in lf.comps.items():
            for (e, I), c in w.terms.items():
                if e[0] == 0 and not I:
                    key = "1"
                elif e[0] == 1 and not I:
                    key = "t"
                elif e[0] == 0 and I:
                    key = "dt"
                else:
                    continue
                lab = "%s|%s" % (x, key)
                out[lab] = out.get(lab, 0) + c
        return {k: v for k, v in out.items() if v}

    br = {}
    top = max(list(L.brackets) + [1])
    for k in range(1, top + 1):
        table = {}
        for w in combinations_with_replacement(sorted(labels, key=sp.index), k):
            args = [LForm(L.space, 1, {labels[u][0]: forms[labels[u][1]]}) for u in w]
            v = reduce(tensor_bracket(L, k, args))
            if v:
                table[w] = v
        if table:
            br[k] = table
    return LInfinityAlgebra(sp, br), sp


def bracketed_algebras():
    rng = random.Random(7)
    out = [corpus.string_algebra()]
    while len(out) < 4:
        L = random_valid_algebra(rng, 2, 2)
        if max(L.brackets, default=1) >= 2:
            out.append(L)
    return out


def test_jacobi_on_tensor_with_forms():
    for L in bracketed_algebras():
        T, _ = tensor_with_truncated_forms(L)
        assert max(T.brackets) >= 2
        assert all(not v for v in check_jacobi(T, 4).values())


def test_tensor_jacobi_detects_unsigned_differential(monkeypatch):
    # dropping (-1)^{|x|} from id (x) d breaks the identities on odd elements
    monkeypatch.setattr(LForm, "d", lambda self: LForm(self.space, self.m,
                                                       {x: w.d() for x, w in self.comps.items()}))
    T, _ = tensor_with_truncated_forms(corpus.string_algebra())
    assert any(check_jacobi(T, 4).values())


# -- flat sections -----------------------------------------------------------

@pytest.mark.parametrize("m", [1, 2])
def test_heisenberg_round_trip(m):
    h = heisenberg()
    rng = random.Random(m)
    for _ in range(5):
        X = based(LForm(h.space, m, {x: rpoly(rng, m, 2) for x in "xyz"}))
        th = maurer_cartan_of(h, X)
        assert is_mc(h, th)
        fs = flat_section(h, th)
        assert fs.X == X and fs.round_trip()
        if m == 2:
            for i in range(3):
                assert fs.face(i).X == flat_section(h, th.pullback(coface(2, i))).X
            # d_0 rebases at vertex 1
            assert fs.face(0).X.at_vertex(0) == {}


def test_abelian_section_is_minus_integral():
    ab = LInfinityAlgebra(GradedSpace({0: ["u"]}), {})
    th = LForm(ab.space, 1, {"u": PolyForm.dcoord(1, 1).scale(5)})
    assert flat_section(ab, th).vertices() == ({"u": -5},)


def test_flat_section_needs_flatness():
    h = heisenberg()
    th = LForm(h.space, 2, {"x": PolyForm.dcoord(2, 1), "y": PolyForm.dcoord(2, 2)})
    with pytest.raises(MCError):
        flat_section(h, th)


def matmul(A, B):
    n = len(A)
    return [[sum(A[i][k] * B[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


def mat_exp(N):
    n = len(N)
    out = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    P = [row[:] for row in out]
    f = 1
    for k in range(1, n):
        P = matmul(P, N)
        f *= k
        out = [[out[i][j] + P[i][j] / f for j in range(n)] for i in range(n)]
    return out


def mat_log(U):
    n = len(U)
    M = [[U[i][j] - int(i == j) for j in range(n)] for i in range(n)]
    out = [[Fraction(0)] * n for _ in range(n)]
    P = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for k in range(1, n):
        P = matmul(P, M)
        out = [[out[i][j] + Fraction((-1) ** (k + 1), k) * P[i][j] for j in range(n)] for i in range(n)]
    return out


@pytest.mark.parametrize("n", [3, 4])
def test_bch_matches_matrix_exponential(n):
    g = upper_triangular(n)
    rng = random.Random(n)
    labs = g.space.labels()
    for _ in range(4):
        X = {x: Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for x in labs}
        Y = {x: Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for x in labs}

        def mat(v):
            M = [[Fraction(0)] * n for _ in range(n)]
            for lab, c in v.items():
                _, i, j = lab.split("_")
                M[int(i)][int(j)] = c
            return M

        want = mat_log(matmul(mat_exp(mat(X)), mat_exp(mat(Y))))
        as_form = lambda v: LForm(g.space, 1, {x: PolyForm.const(1, c) for x, c in v.items()})
        got = bch(g, as_form(X), as_form(Y)).at_vertex(0)
        assert mat(got) == want


# -- Dold-Kan through Whitney forms ------------------------------------------

@pytest.mark.parametrize("m", [0, 1, 2, 3])
def test_normalized_cocycles(m):
    for j in range(m + 1):
        assert normalized_cocycle_rank(m, j) == comb(m, j)


def test_dold_kan_images():
    V = LInfinityAlgebra(GradedSpace({0: ["a0"], 1: ["b0", "b1"]}), {1: {("b0",): {"a0": ONE}}})
    dims = []
    for m in range(4):
        basis, imgs = dold_kan_whitney(V, m)
        dims.append(len(basis))
        for phi, a in zip(basis, imgs):
            assert a.is_homogeneous(-1) and is_mc(V, a)
            for i in range(m + 1):
                if m:
                    assert iota(V, m - 1, dk_face(phi, m, i)) == a.pullback(coface(m, i))
                assert iota(V, m + 1, dk_degeneracy(phi, m, i)) == a.pullback(codegeneracy(m, i))
    assert dims == [0, 1, 4, 9]


# -- End(A) with EA[n] --------------------------------------------------------

@pytest.mark.parametrize("n,m", [(1, 3), (2, 3)])
def test_lea_images(n, m):
    rng = random.Random(n)
    g = upper_triangular(2)
    X = based(LForm(g.space, m, {"E_0_1": rpoly(rng, m, 2)}))
    theta = maurer_cartan_of(g, X)
    mu = [rpoly(rng, m, 2, n + 1) for _ in range(2)]
    nu = compatible_nu(2, n, theta, mu)
    res = lea_maps(2, n, theta, mu, nu)
    assert res.ok, res.checks


def test_lea_rejects_non_mc():
    rng = random.Random(0)
    g = upper_triangular(2)
    theta = maurer_cartan_of(g, based(LForm(g.space, 3, {"E_0_1": rpoly(rng, 3, 2)})))
    mu = [rpoly(rng, 3, 2, 2) for _ in range(2)]
    nu = [PolyForm(3, {((1, 0, 0), (1, 2, 3)): 1}), PolyForm.zero(3)]
    with pytest.raises(MCError):
        lea_maps(2, 1, theta, mu, nu)
