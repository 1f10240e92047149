"""
Seeded random generators for L-infinity data.

Valid algebras are produced by transporting a known structure along a
random coalgebra automorphism with identity linear part, so they carry
nontrivial higher brackets while satisfying the Jacobi identities exactly.
"""

import random
from fractions import Fraction

from .ce_coalgebra import (
    CoalgMorphism, Coderivation, ce_decode, ce_encode, sym_words, word_degree,
)
from .graded_core import ONE, ZERO, GradedSpace, nullspace, vaccum, vclean
from .linfty_core import (
    LInfinityAlgebra, LInfinityMorphism, basis_words, product,
)


def rand_q(rng, lo=-3, hi=3, allow_zero=True):
    while True:
        num = rng.randint(lo, hi)
        den = rng.choice([1, 1, 1, 2, 3])
        if num or allow_zero:
            return Fraction(num, den)


def random_space(rng, max_dim=2, max_deg=3, prefix="x", min_total=1):
    while True:
        degs = {}
        for d in range(0, max_deg + 1):
            n = rng.randint(0, max_dim)
            if n:
                degs[d] = ["%s%d_%d" % (prefix, d, i) for i in range(n)]
        sp = GradedSpace(degs)
        if sp.dim() >= min_total:
            return sp


def random_complex(rng, space):
    """Abelian algebra with a random differential squaring to zero."""
    ent = {}
    for d in sorted(space.degrees):
        low = space.basis(d - 1)
        if not low:
            continue
        lower = space.basis(d - 2)
        # columns in ker d_{d-1}
        if lower:
            mat = [[ent.get(x, {}).get(y, ZERO) for x in low] for y in lower]
            ker = nullspace(mat, len(low))
        else:
            ker = nullspace([], len(low))
        if not ker:
            continue
        for x in space.basis(d):
            if rng.random() < 0.3:
                continue
            v = {}
            for kv in ker:
                c = rand_q(rng, -2, 2)
                for i, y in enumerate(low):
                    if kv[i]:
                        v[y] = v.get(y, ZERO) + c * kv[i]
            v = vclean(v)
            if v:
                ent[x] = v
    return LInfinityAlgebra(space, {1: {(x,): v for x, v in ent.items()}}, name="rand_complex")


def random_coalgebra_automorphism(rng, space, max_arity, density=0.35, targets=None):
    """``F^1_1 = id`` and sparse random ``F^1_k`` for ``2 <= k <= max_arity``.

    ``targets`` restricts the labels allowed as outputs of higher components.
    """
    F1 = {1: {(x,): {x: ONE} for x in space.labels()}}
    allowed = set(targets) if targets is not None else None
    for k in range(2, max_arity + 1):
        t = {}
        for w in sym_words(space, k):
            want = word_degree(space, w) - 1
            cands = [y for y in space.basis(want) if allowed is None or y in allowed]
            v = {}
            for y in cands:
                if rng.random() < density:
                    c = rand_q(rng, -2, 2)
                    if c:
                        v[y] = c
            if v:
                t[w] = v
        if t:
            F1[k] = t
    return CoalgMorphism(space, space, F1)


def transport(L, F, max_arity):
    """Structure ``delta'`` with ``delta' F = F delta`` for ``F^1_1 = id``."""
    sp = L.space
    delta = ce_encode(L)
    new = {}
    for m in range(1, max_arity + 1):
        t = {}
        partial = Coderivation(sp, new)
        for w in sym_words(sp, m):
            rhs = {}
            for u, c in delta.apply_word(w).items():
                vaccum(rhs, F.structure(u), c)
            for p in range(1, m):
                for u, c in F.component(p, w).items():
                    vaccum(rhs, partial.structure(u), -c)
            rhs = vclean(rhs)
            if rhs:
                t[w] = rhs
        if t:
            new[m] = t
    return ce_decode(Coderivation(sp, new), name=L.name + "'")


def arity_bound(space):
    lo, hi = space.degree_range()
    # l_k raises total degree by k-2 on inputs of degree >= lo
    k = 1
    while k * lo + k - 2 <= hi:
        k += 1
        if k > 8:
            break
    return k


def random_valid_algebra(rng, max_dim=2, max_deg=3, prefix="x"):
    sp = random_space(rng, max_dim, max_deg, prefix)
    if not sp.basis(0) or rng.random() < 0.7:
        degs = dict(sp.degrees)
        degs[0] = ["%s0_%d" % (prefix, i) for i in range(rng.randint(1, max_dim))]
        sp = GradedSpace(degs)
    base = random_complex(rng, sp)
    zero = sp.basis(0)
    if len(zero) == 2 and rng.random() < 0.5:
        # two-dimensional nonabelian Lie algebra in degree 0; it has trivial
        # center, so the differential into degree 0 must vanish
        br = dict(base.brackets)
        d1 = {w: v for w, v in br.get(1, {}).items() if sp.deg(w[0]) != 1}
        br[1] = d1
        br[2] = {(zero[0], zero[1]): {zero[1]: ONE}}
        base = LInfinityAlgebra(sp, br, name="rand_base")
    bound = min(arity_bound(sp), 5)
    F = random_coalgebra_automorphism(rng, sp, bound, density=0.5)
    L = transport(base, F, bound)
    L.name = "rand_valid"
    return L


def perturb(L, rng, arities=(2, 3)):
    """Change one admissible bracket coefficient by +1 (may already be invalid)."""
    sp = L.space
    choices = []
    for k in arities:
        for w in basis_words(sp, k):
            want = sum(sp.deg(x) for x in w) + k - 2
            for y in sp.basis(want):
                choices.append((k, w, y))
    if not choices:
        return None
    k, w, y = rng.choice(choices)
    br = {kk: {ww: dict(v) for ww, v in t.items()} for kk, t in L.brackets.items()}
    slot = br.setdefault(k, {}).setdefault(w, {})
    slot[y] = slot.get(y, ZERO) + 1
    out = LInfinityAlgebra(sp, br, name=L.name + "+perturbed")
    return out


def random_algebra_any(rng, max_dim=2, max_deg=3, prefix="x"):
    """Fully random brackets (usually not an L-infinity algebra)."""
    sp = random_space(rng, max_dim, max_deg, prefix)
    br = {}
    for k in (1, 2, 3):
        t = {}
        for w in basis_words(sp, k):
            want = sum(sp.deg(x) for x in w) + k - 2
            v = {}
            for y in sp.basis(want):
                if rng.random() < 0.3:
                    v[y] = rand_q(rng, -2, 2)
            v = vclean(v)
            if v:
                t[w] = v
        if t:
            br[k] = t
    return LInfinityAlgebra(sp, br, name="rand_any")


def random_strict_automorphism_image(L, rng, prefix="y"):
    """Transport ``L`` along a random invertible degree-0 linear map.

    Returns ``(L2, g)`` where ``g: L -> L2`` is a strict isomorphism.
    """
    from .graded_core import inverse
    mapping, inv = {}, {}
    newdeg = {}
    for d, labs in L.space.degrees.items():
        n = len(labs)
        while True:
            mat = [[rand_q(rng, -2, 2) for _ in range(n)] for _ in range(n)]
            try:
                mi = inverse(mat)
                break
            except ValueError:
                continue
        new = ["%s_%s" % (prefix, x) for x in labs]
        newdeg[d] = new
        for j, x in enumerate(labs):
            mapping[x] = vclean({new[i]: mat[i][j] for i in range(n)})
        for j, y in enumerate(new):
            inv[y] = vclean({labs[i]: mi[i][j] for i in range(n)})
    sp2 = GradedSpace(newdeg)
    br = {}
    for k in L.brackets:
        t = {}
        for w in basis_words(sp2, k):
            val = L.ell(k, *[inv[y] for y in w])
            img = {}
            for x, c in val.items():
                vaccum(img, mapping[x], c)
            img = vclean(img)
            if img:
                t[w] = img
        if t:
            br[k] = t
    L2 = LInfinityAlgebra(sp2, br, name=L.name + "~")
    return L2, LInfinityMorphism.strict(L, L2, mapping, name="g")


def random_strict_morphism(rng, max_dim=2, max_deg=2):
    """``g o pr: L' x M -> g(L')`` for random valid ``L'``, ``M``."""
    Lp = random_valid_algebra(rng, max_dim, max_deg, prefix="u")
    M = random_valid_algebra(rng, max_dim, max_deg, prefix="v")
    P, pL, _ = product(Lp, M)
    L2, g = random_strict_automorphism_image(Lp, rng)
    ent = {}
    for x in P.space.labels():
        if x in Lp.space:
            ent[x] = g.linear()({x: ONE})
    return LInfinityMorphism.strict(P, L2, ent, name="rand_strict")


def random_minimal_fibration(rng, max_dim=3, base_deg=2, fiber_degs=(1, 2)):
    """Strict minimal fibration ``L -> L'`` with a random twisted total space.

    ``L'`` is random valid; the kernel ``K`` has zero differential. The total
    space is the product ``L' x K`` transported along a coalgebra
    automorphism whose higher components land in ``K``, which keeps the
    projection strict and the kernel minimal.
    """
    Lp = random_valid_algebra(rng, min(max_dim, 2), base_deg, prefix="u")
    kdeg = {}
    for d in fiber_degs:
        n = rng.randint(1, max_dim)
        kdeg[d] = ["k%d_%d" % (d, i) for i in range(n)]
    K = LInfinityAlgebra(GradedSpace(kdeg), {}, name="K")
    P, pL, _ = product(Lp, K)
    bound = min(arity_bound(P.space), 4)
    F = random_coalgebra_automorphism(rng, P.space, bound, density=0.3,
                                      targets=K.space.labels())
    L = transport(P, F, bound)
    L.name = "rand_total"
    f = LInfinityMorphism.strict(L, Lp, {x: {x: ONE} for x in Lp.space.labels()}, name="rand_minfib")
    return f
