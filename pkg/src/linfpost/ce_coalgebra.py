"""
Chevalley-Eilenberg coalgebra encoding of L-infinity data.

Elements of the reduced symmetric coalgebra on the suspension ``sL`` are
dicts ``{word: coeff}`` where a word is a tuple of basis labels of ``L``
sorted in the space's label order. A label ``x`` stands for ``s x`` and has
degree ``|x| + 1``; the product is graded commutative in those degrees.
"""

from fractions import Fraction
from itertools import combinations_with_replacement
from math import factorial

from .graded_core import (
    ONE, ZERO, GradedSpace, koszul_sign, shuffles, sort_with_sign,
    unshuffles, vaccum, vclean, vscale,
)
from .linfty_core import (
    LInfinityAlgebra, LInfinityError, LInfinityMorphism, basis_words,
)


class CoalgebraError(ValueError):
    pass


def sdeg(space, label):
    return space.deg(label) + 1


def sym_words(space, k):
    """Sorted basis words of length ``k`` in ``S^k(sL)``."""
    return basis_words(space, k, skew=True)


def all_words(space, up_to):
    out = []
    for k in range(1, up_to + 1):
        out.extend(sym_words(space, k))
    return out


def sym_normal(space, word):
    cache = space.__dict__.setdefault("_sym_cache", {})
    word = tuple(word)
    hit = cache.get(word)
    if hit is None:
        degs = [sdeg(space, x) for x in word]
        hit = sort_with_sign(word, degs, space.index, skew=False)
        cache[word] = hit
    return hit


def sym_mul(space, a, b):
    """Product of two elements of ``S(sL)``."""
    out = {}
    for wa, ca in a.items():
        for wb, cb in b.items():
            w, s = sym_normal(space, wa + wb)
            if s:
                out[w] = out.get(w, ZERO) + s * ca * cb
    return vclean(out)


def word_degree(space, word):
    return sum(sdeg(space, x) for x in word)


def decalage_sign(space, word):
    """Sign relating ``(-1)^{k(k-1)/2} s o g o (s^-1)^{(x) k}`` to ``s g``.

    Moving k desuspensions past the suspended arguments gives
    ``(-1)^{sum_i (k-1-i)(|x_i|+1)}``; together with ``(-1)^{k(k-1)/2}``
    this leaves ``(-1)^{sum_i (k-1-i)|x_i|}``.
    """
    k = len(word)
    e = sum((k - 1 - i) * space.deg(x) for i, x in enumerate(word))
    return ONE if e % 2 == 0 else -ONE


# ---------------------------------------------------------------------------
# coderivations

class Coderivation:
    """Degree -1 coderivation of ``S(sL)`` given by its structure maps ``delta^1_m``.

    ``delta1[m][word]`` is a sparse vector of labels (read as elements of sL).
    """

    def __init__(self, space, delta1):
        self.space = space
        self.delta1 = {}
        for m, table in delta1.items():
            t = {}
            for w, v in table.items():
                w = tuple(w)
                sw, s = sym_normal(space, w)
                if s == 0:
                    continue
                for lab, c in v.items():
                    if c == 0:
                        continue
                    if sdeg(space, lab) != word_degree(space, w) - 1:
                        raise CoalgebraError("delta^1_%d on %r violates degree -1" % (m, w))
                    slot = t.setdefault(sw, {})
                    slot[lab] = slot.get(lab, ZERO) + s * c
            t = {w: vclean(v) for w, v in t.items()}
            t = {w: v for w, v in t.items() if v}
            if t:
                self.delta1[int(m)] = t
        self._cache = {}

    def structure(self, word):
        """``delta^1`` on a word whose letters may be unsorted."""
        table = self.delta1.get(len(word))
        if not table:
            return {}
        sw, s = sym_normal(self.space, word)
        if s == 0:
            return {}
        v = table.get(sw)
        if not v:
            return {}
        return v if s == 1 else vscale(s, v)

    def apply_word(self, word):
        """Lifted coderivation on a basis word, summing all ``delta^p_m``."""
        word = tuple(word)
        if word in self._cache:
            return self._cache[word]
        sp = self.space
        m = len(word)
        degs = [sdeg(sp, x) for x in word]
        out = {}
        for a in range(1, m + 1):
            if a not in self.delta1:
                continue
            for sigma in unshuffles(a, m - a):
                eps = koszul_sign(sigma, degs)
                w = sigma.apply(word)
                head = self.structure(w[:a])
                if not head:
                    continue
                rest = w[a:]
                for lab, c in head.items():
                    nw, s = sym_normal(sp, (lab,) + rest)
                    if s:
                        out[nw] = out.get(nw, ZERO) + eps * s * c
        out = vclean(out)
        self._cache[word] = out
        return out

    def __call__(self, elem):
        out = {}
        for w, c in elem.items():
            vaccum(out, self.apply_word(w), c)
        return vclean(out)

    def square_residuals(self, up_to):
        """``delta(delta(w))`` for all basis words of length ``<= up_to``."""
        res = {}
        for k in range(1, up_to + 1):
            bad = {}
            for w in sym_words(self.space, k):
                r = self(self.apply_word(w))
                if r:
                    bad[w] = r
            res[k] = bad
        return res

    def squares_to_zero(self, up_to):
        return all(not v for v in self.square_residuals(up_to).values())


def lift_coderivation(space, delta1):
    return Coderivation(space, delta1)


# ---------------------------------------------------------------------------
# coalgebra morphisms

def set_partitions(m, p):
    """Partitions of ``range(m)`` into ``p`` nonempty blocks, blocks ordered by
    their least element and each block increasing."""
    key = (m, p)
    hit = _PART_CACHE.get(key)
    if hit is not None:
        return hit
    out = []

    def rec(i, blocks):
        if i == m:
            if len(blocks) == p:
                out.append(tuple(tuple(b) for b in blocks))
            return
        if len(blocks) + (m - i) < p:
            return
        for b in blocks:
            b.append(i)
            rec(i + 1, blocks)
            b.pop()
        if len(blocks) < p:
            blocks.append([i])
            rec(i + 1, blocks)
            blocks.pop()

    rec(0, [])
    _PART_CACHE[key] = out
    return out


_PART_CACHE = {}


def compositions(m, p):
    """Ordered tuples of ``p`` positive integers summing to ``m``."""
    if p == 1:
        return [(m,)] if m >= 1 else []
    out = []
    for first in range(1, m - p + 2):
        for rest in compositions(m - first, p - 1):
            out.append((first,) + rest)
    return out


class CoalgMorphism:
    """Degree 0 coalgebra morphism ``S(sL) -> S(sL')`` from its maps ``F^1_k``."""

    def __init__(self, source, target, F1):
        self.source = source
        self.target = target
        self.F1 = {}
        for k, table in F1.items():
            t = {}
            for w, v in table.items():
                w = tuple(w)
                sw, s = sym_normal(source, w)
                if s == 0:
                    continue
                for lab, c in v.items():
                    if c == 0:
                        continue
                    if sdeg(target, lab) != word_degree(source, w):
                        raise CoalgebraError("F^1_%d on %r is not of degree 0" % (k, w))
                    slot = t.setdefault(sw, {})
                    slot[lab] = slot.get(lab, ZERO) + s * c
            t = {w: vclean(v) for w, v in t.items()}
            t = {w: v for w, v in t.items() if v}
            if t:
                self.F1[int(k)] = t
        self._cache = {}

    def structure(self, word):
        table = self.F1.get(len(word))
        if not table:
            return {}
        sw, s = sym_normal(self.source, word)
        if s == 0:
            return {}
        v = table.get(sw)
        if not v:
            return {}
        return v if s == 1 else vscale(s, v)

    def component(self, p, word):
        """``F^p_m`` on a basis word, one term per unordered block partition.

        Summing over ordered compositions and shuffles divided by ``p!``
        counts every partition ``p!`` times with the same sign, so this is
        the same map; ``component_formula`` keeps the literal sum.
        """
        word = tuple(word)
        m = len(word)
        degs = [sdeg(self.source, x) for x in word]
        out = {}
        for blocks in set_partitions(m, p):
            if any(len(b) not in self.F1 for b in blocks):
                continue
            perm = tuple(i for b in blocks for i in b)
            eps = koszul_sign(perm, degs)
            prod = {(): ONE}
            for b in blocks:
                val = self.structure(tuple(word[i] for i in b))
                if not val:
                    prod = {}
                    break
                prod = sym_mul(self.target, prod, {(lab,): c for lab, c in val.items()})
                if not prod:
                    break
            if prod:
                vaccum(out, prod, eps)
        return vclean(out)

    def component_formula(self, p, word):
        """``F^p_m`` by the literal ordered-composition sum with ``1/p!``."""
        word = tuple(word)
        m = len(word)
        degs = [sdeg(self.source, x) for x in word]
        out = {}
        for ks in compositions(m, p):
            if any(k not in self.F1 for k in ks):
                continue
            for sigma in shuffles(*ks):
                eps = koszul_sign(sigma, degs)
                w = sigma.apply(word)
                prod = {(): ONE}
                pos = 0
                for k in ks:
                    val = self.structure(w[pos:pos + k])
                    pos += k
                    if not val:
                        prod = {}
                        break
                    prod = sym_mul(self.target, prod, {(lab,): c for lab, c in val.items()})
                    if not prod:
                        break
                if prod:
                    vaccum(out, prod, eps)
        return vscale(Fraction(1, factorial(p)), vclean(out))

    def apply_word(self, word):
        word = tuple(word)
        if word in self._cache:
            return self._cache[word]
        out = {}
        for p in range(1, len(word) + 1):
            vaccum(out, self.component(p, word))
        out = vclean(out)
        self._cache[word] = out
        return out

    def __call__(self, elem):
        out = {}
        for w, c in elem.items():
            vaccum(out, self.apply_word(w), c)
        return vclean(out)


def lift_morphism(source, target, F1):
    return CoalgMorphism(source, target, F1)


def compose(G, F, up_to):
    """``G o F`` with ``(GF)^1_m = sum_p G^1_p F^p_m`` on words of length ``<= up_to``."""
    if G.source != F.target:
        raise CoalgebraError("composition mismatch")
    F1 = {}
    for m in range(1, up_to + 1):
        t = {}
        for w in sym_words(F.source, m):
            val = {}
            for p in range(1, m + 1):
                comp = F.component(p, w)
                for u, c in comp.items():
                    vaccum(val, G.structure(u), c)
            val = vclean(val)
            if val:
                t[w] = val
        if t:
            F1[m] = t
    return CoalgMorphism(F.source, G.target, F1)


def identity_morphism(space):
    return CoalgMorphism(space, space, {1: {(x,): {x: ONE} for x in space.labels()}})


# ---------------------------------------------------------------------------
# encode / decode

def ce_encode(L):
    """Structure maps ``delta^1_m`` of the CE codifferential of ``L``."""
    sp = L.space
    d1 = {}
    for m, table in L.brackets.items():
        t = {}
        for w, v in table.items():
            s = decalage_sign(sp, w)
            t[w] = vscale(s, v)
        d1[m] = t
    return Coderivation(sp, d1)


def ce_decode(delta, name=None):
    sp = delta.space
    br = {}
    for m, table in delta.delta1.items():
        br[m] = {w: vscale(decalage_sign(sp, w), v) for w, v in table.items()}
    return LInfinityAlgebra(sp, br, name=name)


def morphism_encode(f):
    src = f.source.space
    F1 = {}
    for k, table in f.taylor.items():
        F1[k] = {w: vscale(decalage_sign(src, w), v) for w, v in table.items()}
    return CoalgMorphism(src, f.target.space, F1)


def morphism_decode(F, source, target, name=None):
    src = F.source
    tay = {}
    for k, table in F.F1.items():
        tay[k] = {w: vscale(decalage_sign(src, w), v) for w, v in table.items()}
    return LInfinityMorphism(source, target, tay, name=name)


def coalgebra_residuals(F, dsrc, dtgt, up_to):
    """Cogenerator part of ``dtgt F - F dsrc`` on words of length ``<= up_to``."""
    res = {}
    for m in range(1, up_to + 1):
        bad = {}
        for w in sym_words(F.source, m):
            lhs = {}
            for u, c in F.apply_word(w).items():
                vaccum(lhs, dtgt.structure(u), c)
            rhs = {}
            for u, c in dsrc.apply_word(w).items():
                vaccum(rhs, F.structure(u), c)
            r = vclean(vaccum(dict(lhs), rhs, -ONE))
            if r:
                bad[w] = r
        res[m] = bad
    return res


def morphism_residuals(f, up_to):
    F = morphism_encode(f)
    return coalgebra_residuals(F, ce_encode(f.source), ce_encode(f.target), up_to)


def commutes_fully(F, dsrc, dtgt, up_to):
    """Full (not only cogenerator) comparison of ``dtgt F`` and ``F dsrc``."""
    for m in range(1, up_to + 1):
        for w in sym_words(F.source, m):
            a = dtgt(F.apply_word(w))
            b = F(dsrc.apply_word(w))
            if vclean(vaccum(dict(a), b, -ONE)):
                return False
    return True


# ---------------------------------------------------------------------------
# coproduct (used to test coderivation / morphism properties)

def reduced_coproduct(space, word):
    """``Delta-bar(w) = sum eps(sigma) w_I (x) w_J`` over nontrivial unshuffles."""
    m = len(word)
    degs = [sdeg(space, x) for x in word]
    out = {}
    for i in range(1, m):
        for sigma in unshuffles(i, m - i):
            w = sigma.apply(word)
            key = (w[:i], w[i:])
            out[key] = out.get(key, ZERO) + koszul_sign(sigma, degs)
    return vclean(out)


# ---------------------------------------------------------------------------
# coderivations of S(sA[m]) for ungraded A

class FiberCoalgebra:
    """``C = S(sA[m])`` with ``sA[m]`` in degree ``m+1``; basis letters ``a0, a1, ...``."""

    def __init__(self, dim, m, prefix="a"):
        if m < 1:
            raise CoalgebraError("m must be >= 1")
        self.dim = dim
        self.m = m
        self.letters = ["%s%d" % (prefix, i) for i in range(dim)]
        self.letter_degree = m + 1
        self.index = {x: i for i, x in enumerate(self.letters)}

    def normal(self, word):
        degs = [self.letter_degree] * len(word)
        return sort_with_sign(tuple(word), degs, self.index.__getitem__, skew=False)

    def words(self, up_to):
        out = [()]
        for k in range(1, up_to + 1):
            for w in combinations_with_replacement(self.letters, k):
                if self.letter_degree % 2 == 1 and len(set(w)) < len(w):
                    continue
                out.append(w)
        return out

    def mul(self, a, b):
        out = {}
        for wa, ca in a.items():
            for wb, cb in b.items():
                w, s = self.normal(wa + wb)
                if s:
                    out[w] = out.get(w, ZERO) + s * ca * cb
        return vclean(out)


class FiberCoderivation:
    """Coderivation of ``S(sA[m])`` with components ``1 -> sA[m]`` and ``sA[m] -> sA[m]``.

    ``const`` is a vector over letters (degree ``m+1``), ``lin`` a matrix
    ``{(i, j): c}`` sending letter j to c times letter i (degree 0).
    Higher components vanish for degree reasons in the cases used here.
    """

    def __init__(self, C, const=None, lin=None):
        self.C = C
        self.const = vclean(dict(const or {}))
        self.lin = {k: v for k, v in (lin or {}).items() if v}
        if self.const and self.lin:
            raise CoalgebraError("mixed-degree coderivation")
        self.degree = C.letter_degree if self.const else 0

    def apply_word(self, word):
        C = self.C
        if self.const:
            # coderivation extending 1 -> c: multiplication by c
            return C.mul({(x,): c for x, c in self.const.items()}, {tuple(word): ONE})
        out = {}
        for pos, x in enumerate(word):
            j = C.index[x]
            for (i, jj), c in self.lin.items():
                if jj != j:
                    continue
                nw = word[:pos] + (C.letters[i],) + word[pos + 1:]
                w, s = C.normal(nw)
                if s:
                    out[w] = out.get(w, ZERO) + s * c
        return vclean(out)

    def __call__(self, elem):
        out = {}
        for w, c in elem.items():
            vaccum(out, self.apply_word(w), c)
        return vclean(out)


def coderivation_commutator(D1, D2, words):
    """``[D1, D2] = D1 D2 - (-1)^{|D1||D2|} D2 D1`` evaluated on ``words``."""
    sgn = -ONE if (D1.degree * D2.degree) % 2 else ONE
    out = {}
    for w in words:
        a = D1(D2.apply_word(w))
        b = D2(D1.apply_word(w))
        v = vclean(vaccum(dict(a), b, -sgn))
        if v:
            out[w] = v
    return out


def read_fiber_coderivation(C, values):
    """Recover (const, lin) components from values on ``1`` and on letters."""
    const = {}
    for w, c in values.get((), {}).items():
        if len(w) == 1:
            const[w[0]] = c
    lin = {}
    for x in C.letters:
        for w, c in values.get((x,), {}).items():
            if len(w) == 1:
                lin[(C.index[w[0]], C.index[x])] = c
    return vclean(const), {k: v for k, v in lin.items() if v}


def coderivation_dgla(dim, m):
    """The coderivation Lie algebra of ``S(sA[m])`` and its identification.

    Returns ``(g, to_coder)`` where ``g`` is the semidirect product
    ``A[m+1] // End(A)`` (labels ``E_i_j`` and ``a{i}[m+1]``) and
    ``to_coder(label)`` is the corresponding FiberCoderivation. The bracket
    of ``g`` is checked against commutators of coderivations.
    """
    from .linfty_core import gl_algebra, semidirect
    C = FiberCoalgebra(dim, m)
    gl = gl_algebra(dim)
    top = ["a%d[%d]" % (i, m + 1) for i in range(dim)]
    mod = GradedSpace({m + 1: top})
    act = {}
    for i in range(dim):
        for j in range(dim):
            act[("E_%d_%d" % (i, j), top[j])] = {top[i]: ONE}
    g = semidirect(gl, mod, act, name="A[%d]//End(A)" % (m + 1))

    def to_coder(label):
        if label.startswith("E_"):
            _, i, j = label.split("_")
            return FiberCoderivation(C, lin={(int(i), int(j)): ONE})
        i = top.index(label)
        return FiberCoderivation(C, const={C.letters[i]: ONE})

    words = C.words(3)
    for x in g.space.labels():
        for y in g.space.labels():
            br = g.bracket(2, (x, y))
            comm = coderivation_commutator(to_coder(x), to_coder(y), words)
            expect = {}
            for lab, c in br.items():
                D = to_coder(lab)
                for w in words:
                    vv = D.apply_word(w)
                    if vv:
                        slot = expect.setdefault(w, {})
                        vaccum(slot, vv, c)
            expect = {w: vclean(v) for w, v in expect.items() if vclean(v)}
            if expect != comm:
                raise CoalgebraError("coderivation bracket mismatch on %s, %s" % (x, y))
    return g, to_coder, C


# ---------------------------------------------------------------------------
# twisting functions

class TwistingFunction:
    """Degree -1 map ``theta`` from reduced ``S(sB)`` to a dg Lie algebra ``g``.

    ``values[word]`` is a vector in ``g`` (labels of ``g.space``); ``g`` is an
    LInfinityAlgebra with at most ``l_1`` and ``l_2``.
    """

    def __init__(self, base_space, base_delta, g, values):
        self.base = base_space
        self.delta = base_delta
        self.g = g
        self.values = {}
        for w, v in values.items():
            w = tuple(w)
            sw, s = sym_normal(base_space, w)
            v = vclean(v)
            if s == 0 or not v:
                continue
            for lab in v:
                if g.space.deg(lab) != word_degree(base_space, w) - 1:
                    raise CoalgebraError("twisting function must have degree -1")
            self.values[sw] = vclean(vaccum(self.values.get(sw, {}), v, s))

    def __call__(self, word):
        sw, s = sym_normal(self.base, tuple(word))
        v = self.values.get(sw, {})
        return v if s == 1 else vscale(s, v)

    def on(self, elem):
        out = {}
        for w, c in elem.items():
            vaccum(out, self(w), c)
        return vclean(out)


def mc_residuals(theta, up_to):
    """``d theta + theta delta_B + 1/2 [,] (theta (x) theta) Delta_B`` on words.

    The Koszul rule gives ``(theta (x) theta)(u (x) v) = (-1)^{|u|} theta(u) (x) theta(v)``.
    """
    g = theta.g
    sp = theta.base
    res = {}
    for k in range(1, up_to + 1):
        bad = {}
        for w in sym_words(sp, k):
            out = {}
            th = theta(w)
            if th:
                vaccum(out, g.ell(1, th))
            vaccum(out, theta.on(theta.delta.apply_word(w)))
            for (u, v), c in reduced_coproduct(sp, w).items():
                tu, tv = theta(u), theta(v)
                if not tu or not tv:
                    continue
                sgn = -ONE if word_degree(sp, u) % 2 else ONE
                vaccum(out, g.ell(2, tu, tv), Fraction(1, 2) * c * sgn)
            out = vclean(out)
            if out:
                bad[w] = out
        res[k] = bad
    return res


def twisting_correspondence(theta, up_to):
    """Coalgebra morphism ``F_theta`` with ``F^1 = s theta`` into ``S(s g)``."""
    sp = theta.base
    F1 = {}
    for w, v in theta.values.items():
        F1.setdefault(len(w), {})[w] = v
    return CoalgMorphism(sp, theta.g.space, F1)


def twisting_from_morphism(F, base_delta, g):
    """Inverse direction: ``theta = s^{-1} F^1``."""
    vals = {}
    for k, table in F.F1.items():
        vals.update(table)
    return TwistingFunction(F.source, base_delta, g, vals)


class CoalgebraBundle:
    """Trivialized bundle ``B (x) C -> E`` where ``E = S(s(V + W))``.

    ``E`` is the CE coalgebra of an algebra ``total`` whose space is split
    by a linear isomorphism ``phi`` from ``base_space (+) fiber_space``;
    ``phi[label]`` is a vector in the total space.
    """

    def __init__(self, total, base, fiber_space, phi):
        self.total = total
        self.base = base
        self.fiber_space = fiber_space
        self.phi = phi
        self.split_space = base.space.direct_sum(fiber_space)
        from .graded_core import inverse
        self._inv = {}
        for d, labs in total.space.degrees.items():
            src = self.split_space.basis(d)
            if len(src) != len(labs):
                raise CoalgebraError("trivialization not invertible in degree %d" % d)
            mat = [[phi[s].get(t, ZERO) for s in src] for t in labs]
            inv = inverse(mat)
            for j, t in enumerate(labs):
                self._inv[t] = vclean({src[i]: inv[i][j] for i in range(len(src))})

    def triv(self, word):
        """``phi`` on a split-basis word, as an element of ``S(s total)``."""
        out = {(): ONE}
        for x in word:
            out = sym_mul(self.total.space, out, {(t,): c for t, c in self.phi[x].items()})
        return out

    def triv_inv(self, elem):
        out = {}
        for w, c in elem.items():
            prod = {(): ONE}
            for t in w:
                prod = sym_mul(self.split_space, prod, {(s,): x for s, x in self._inv[t].items()})
            vaccum(out, prod, c)
        return vclean(out)


def twisting_from_bundle(bundle, fiber_words, base_up_to):
    """``theta_E(b)(c) = pr_C triv^{-1} delta_E triv(b (x) c)``.

    Returns ``{b: {c: element of C}}`` for base words ``b`` up to length
    ``base_up_to`` and fiber words ``c`` in ``fiber_words`` (``()`` is 1).
    ``pr_C`` keeps the terms whose letters all lie in the fiber, which is
    the projection along the base augmentation ideal.
    """
    delta = ce_encode(bundle.total)
    fiber = set(bundle.fiber_space.labels())
    sp = bundle.split_space
    out = {}
    for k in range(1, base_up_to + 1):
        for b in sym_words(bundle.base.space, k):
            vals = {}
            for c in fiber_words:
                w, s = sym_normal(sp, b + tuple(c))
                if s == 0:
                    continue
                e = bundle.triv(w)
                de = delta(e)
                back = bundle.triv_inv(de)
                proj = {ww: x * s for ww, x in back.items() if all(y in fiber for y in ww)}
                proj = vclean(proj)
                if proj:
                    vals[tuple(c)] = proj
            if vals:
                out[b] = vals
    return out
