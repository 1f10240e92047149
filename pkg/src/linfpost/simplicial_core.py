"""
Levelwise-finite simplicial sets, maps and groups.

Simplices are hashable Python values; a simplicial set is described by a
level function and face/degeneracy functions. Coskeletal completion stores
a high simplex as its assignment on the (c+1)-element vertex subsets.
A parallel linear backend over a prime field handles the Eilenberg-MacLane
objects at levels too large to enumerate.
"""

from collections import defaultdict
from itertools import combinations, permutations, product


class SimplicialError(ValueError):
    pass


# ---------------------------------------------------------------------------
# finite groups

class FinGroup:
    """Finite group from a multiplication function on a list of elements."""

    def __init__(self, elements, mul, e, name="G", inv=None):
        self.elements = list(elements)
        self.index = {g: i for i, g in enumerate(self.elements)}
        self.e = e
        self.name = name
        self._mul = {}
        for a in self.elements:
            for b in self.elements:
                c = mul(a, b)
                if c not in self.index:
                    raise SimplicialError("multiplication not closed")
                self._mul[(a, b)] = c
        self._inv = {}
        for a in self.elements:
            for b in self.elements:
                if self._mul[(a, b)] == e:
                    self._inv[a] = b
                    break
            else:
                raise SimplicialError("no inverse for %r" % (a,))

    def mul(self, a, b):
        return self._mul[(a, b)]

    def inv(self, a):
        return self._inv[a]

    def order(self):
        return len(self.elements)

    def is_abelian(self):
        return all(self._mul[(a, b)] == self._mul[(b, a)] for a in self.elements for b in self.elements)

    def check_axioms(self):
        E = self.elements
        assoc = all(self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c)) for a in E for b in E for c in E)
        unit = all(self.mul(self.e, a) == a == self.mul(a, self.e) for a in E)
        return assoc and unit

    def prod(self, *gs):
        out = self.e
        for g in gs:
            out = self.mul(out, g)
        return out

    def __repr__(self):
        return "FinGroup(%s, order %d)" % (self.name, self.order())


def cyclic(n):
    return FinGroup(range(n), lambda a, b: (a + b) % n, 0, name="Z/%d" % n)


def symmetric(n=3):
    elems = list(permutations(range(n)))

    def mul(a, b):
        # (a b)(i) = a(b(i))
        return tuple(a[b[i]] for i in range(n))

    return FinGroup(elems, mul, tuple(range(n)), name="S%d" % n)


def trivial_group():
    return FinGroup([0], lambda a, b: 0, 0, name="1")


class GroupAction:
    """``G`` acting on an abelian group ``A`` by automorphisms: ``act[g][a]``."""

    def __init__(self, G, A, fn):
        self.G, self.A = G, A
        self.table = {g: {a: fn(g, a) for a in A.elements} for g in G.elements}
        for g in G.elements:
            img = self.table[g]
            if sorted(img.values(), key=A.index.get) != sorted(A.elements, key=A.index.get):
                raise SimplicialError("action of %r is not bijective" % (g,))
            for a in A.elements:
                for b in A.elements:
                    if img[A.mul(a, b)] != A.mul(img[a], img[b]):
                        raise SimplicialError("action not by automorphisms")
        for g in G.elements:
            for h in G.elements:
                for a in A.elements:
                    if self.table[G.mul(g, h)][a] != self.table[g][self.table[h][a]]:
                        raise SimplicialError("not an action")

    def __call__(self, g, a):
        return self.table[g][a]


def trivial_action(G, A):
    return GroupAction(G, A, lambda g, a: a)


def inversion_action(G, A):
    """Nontrivial elements of ``G = Z/2`` act by ``a -> -a``."""
    return GroupAction(G, A, lambda g, a: a if g == G.e else A.inv(a))


# ---------------------------------------------------------------------------
# simplicial operators

def coface(i, v):
    return v if v < i else v + 1


def codegeneracy(j, v):
    return v if v <= j else v - 1


def epi_mono(theta):
    """Split a monotone map ``[k] -> [m]`` into (image, surjection onto it)."""
    image = sorted(set(theta))
    pos = {v: i for i, v in enumerate(image)}
    return tuple(image), tuple(pos[v] for v in theta)


class FinSimpSet:
    """Simplicial set given by ``level_fn(k)``, ``face_fn(k, i, x)``, ``degen_fn(k, i, x)``."""

    def __init__(self, level_fn, face_fn, degen_fn, name="X", max_level=None):
        self._level_fn = level_fn
        self._face = face_fn
        self._degen = degen_fn
        self.name = name
        self.max_level = max_level
        self._levels = {}
        self._sets = {}

    def __repr__(self):
        return "FinSimpSet(%s)" % self.name

    def level(self, k):
        if k < 0:
            return []
        if self.max_level is not None and k > self.max_level:
            raise SimplicialError("%s: level %d beyond storage bound %d" % (self.name, k, self.max_level))
        if k not in self._levels:
            self._levels[k] = list(self._level_fn(k))
        return self._levels[k]

    def level_set(self, k):
        if k not in self._sets:
            self._sets[k] = set(self.level(k))
        return self._sets[k]

    def size(self, k):
        return len(self.level(k))

    def face(self, k, i, x):
        return self._face(k, i, x)

    def degen(self, k, i, x):
        return self._degen(k, i, x)

    def faces(self, k, x):
        return tuple(self._face(k, i, x) for i in range(k + 1))

    def restrict(self, k, x, subset):
        """Face of ``x`` spanned by the sorted vertex subset."""
        keep = set(subset)
        cur = k
        for v in range(k, -1, -1):
            if v not in keep:
                x = self._face(cur, v, x)
                cur -= 1
        return x

    def degenerate_along(self, j, x, surj):
        """``surj^* x`` for a surjection ``[len(surj)-1] -> [j]``."""
        cur = j
        for t in range(len(surj) - 1):
            if surj[t] == surj[t + 1]:
                x = self._degen(cur, t, x)
                cur += 1
        return x

    def op(self, m, x, theta):
        """``theta^* x`` for ``x`` in level m and monotone ``theta: [k] -> [m]``."""
        image, surj = epi_mono(theta)
        y = self.restrict(m, x, image)
        return self.degenerate_along(len(image) - 1, y, surj)

    def vertex(self, k, x, v):
        return self.restrict(k, x, (v,))

    def spine(self, k, x):
        return tuple(self.restrict(k, x, (t, t + 1)) for t in range(k))

    def basepoint(self, k, v=None):
        """Totally degenerate k-simplex on vertex ``v`` (default: the unique vertex)."""
        if v is None:
            lv = self.level(0)
            if len(lv) != 1:
                raise SimplicialError("%s is not reduced" % self.name)
            v = lv[0]
        x = v
        for j in range(k):
            x = self._degen(j, 0, x)
        return x

    def is_reduced(self):
        return len(self.level(0)) == 1


class SimpMap:
    """Levelwise function ``fn(k, x)`` between simplicial sets."""

    def __init__(self, source, target, fn, name="f", cache_upto=None):
        self.source, self.target, self.fn, self.name = source, target, fn, name
        self._cache = {}
        self.cache_upto = cache_upto

    def __call__(self, k, x):
        if self.cache_upto is not None and k > self.cache_upto:
            return self.fn(k, x)
        key = (k, x)
        try:
            return self._cache[key]
        except KeyError:
            pass
        except TypeError:
            return self.fn(k, x)
        v = self.fn(k, x)
        self._cache[key] = v
        return v

    def compose_after(self, g, name=None):
        """``self o g``."""
        return SimpMap(g.source, self.target, lambda k, x: self(k, g(k, x)), name or "%s.%s" % (self.name, g.name))

    def fiber_index(self, k):
        """``{y: [x, ...]}`` over level k of the source."""
        idx = defaultdict(list)
        for x in self.source.level(k):
            idx[self(k, x)].append(x)
        return idx


class FinSimpGroup(FinSimpSet):
    """Simplicial group: levelwise ``mul``, ``inv`` and ``unit``."""

    def __init__(self, level_fn, face_fn, degen_fn, mul, inv, unit, name="G", max_level=None):
        super().__init__(level_fn, face_fn, degen_fn, name, max_level)
        self.mul, self.inv, self.unit = mul, inv, unit


def identity_map(X):
    return SimpMap(X, X, lambda k, x: x, name="id")


def point():
    return FinSimpSet(lambda k: [()], lambda k, i, x: (), lambda k, i, x: (), name="pt")


def terminal_map(X):
    return SimpMap(X, point(), lambda k, x: (), name="!")


def constant(elements, name="const"):
    els = list(elements)
    return FinSimpSet(lambda k: els, lambda k, i, x: x, lambda k, i, x: x, name=name)


def standard_simplex(n):
    """``Delta^n``: k-simplices are monotone maps ``[k] -> [n]``."""
    def level(k):
        return [t for t in product(range(n + 1), repeat=k + 1) if all(t[i] <= t[i + 1] for i in range(k))]

    return FinSimpSet(
        level, lambda k, i, x: x[:i] + x[i + 1:], lambda k, i, x: x[:i + 1] + x[i:],
        name="Delta^%d" % n)


def fiber(f, y0=None):
    """``Delta^0 x_Y X`` over the (degenerate) vertex ``y0`` of the base."""
    Y = f.target

    def level(k):
        b = Y.basepoint(k, y0)
        return [x for x in f.source.level(k) if f(k, x) == b]

    X = f.source
    F = FinSimpSet(level, X.face, X.degen, name="fiber(%s)" % f.name)
    return F, SimpMap(F, X, lambda k, x: x, name="incl")


# ---------------------------------------------------------------------------
# coskeletal completion

class Coskeletal(FinSimpSet):
    """Levels ``<= c`` from ``base``; above, compatible assignments on
    ``(c+1)``-subsets (optionally fibered over ``g: base -> Y``).

    A simplex at level ``k > c`` is ``("sk", values, y)`` with ``values`` in
    the lexicographic order of the ``(c+1)``-subsets of ``[k]``.
    """

    def __init__(self, base, c, over=None, name=None, max_level=None):
        self.base, self.c, self.over = base, c, over
        self._subsets = {}
        self._pos = {}
        super().__init__(self._level_impl, self._face_impl, self._degen_impl,
                         name or "cosk_%d(%s)" % (c, base.name), max_level)

    def subsets(self, k):
        if k not in self._subsets:
            ss = list(combinations(range(k + 1), self.c + 1))
            self._subsets[k] = ss
            self._pos[k] = {s: i for i, s in enumerate(ss)}
        return self._subsets[k]

    def _low(self, k):
        return k <= self.c

    def _ybase(self, k, x):
        return x[2]

    def restrict(self, k, x, subset):
        subset = tuple(subset)
        if k <= self.c:
            return self.base.restrict(k, x, subset)
        self.subsets(k)
        if len(subset) == k + 1:
            return x
        if len(subset) > self.c + 1:
            # still a coskeletal simplex: reindex
            m = len(subset) - 1
            self.subsets(m)
            vals = []
            for s in self.subsets(m):
                big = tuple(subset[v] for v in s)
                vals.append(x[1][self._pos[k][big]])
            y = self.over.target.restrict(k, x[2], subset) if self.over else None
            return ("sk", tuple(vals), y)
        # pick a (c+1)-subset containing it
        rest = [v for v in range(k + 1) if v not in subset]
        big = tuple(sorted(subset + tuple(rest[:self.c + 1 - len(subset)])))
        val = x[1][self._pos[k][big]]
        inner = tuple(big.index(v) for v in subset)
        return self.base.restrict(self.c, val, inner)

    def _face_impl(self, k, i, x):
        if k <= self.c:
            return self.base.face(k, i, x)
        return self.restrict(k, x, tuple(v for v in range(k + 1) if v != i))

    def op(self, m, x, theta):
        image, surj = epi_mono(theta)
        y = self.restrict(m, x, image)
        return self.degenerate_along(len(image) - 1, y, surj)

    def _degen_impl(self, k, j, x):
        if k + 1 <= self.c:
            return self.base.degen(k, j, x)
        vals = []
        for s in self.subsets(k + 1):
            theta = tuple(codegeneracy(j, v) for v in s)
            vals.append(self.op(k, x, theta))
        y = self.over.target.degen(k, j, self._ybase(k, x) if k > self.c else self.over(k, x)) if self.over else None
        return ("sk", tuple(vals), y)

    def _level_impl(self, k):
        if k <= self.c:
            return self.base.level(k)
        subs = self.subsets(k)
        low = self.base.level(self.c)
        faces_of = {x: self.base.faces(self.c, x) for x in low}
        over = self.over
        ys = over.target.level(k) if over else [None]
        out = []
        if over is not None:
            idx = defaultdict(list)
            for x in low:
                idx[over(self.c, x)].append(x)
        for y in ys:
            if over is not None:
                cands = [idx.get(over.target.restrict(k, y, s), []) for s in subs]
            else:
                cands = [low] * len(subs)
            # backtracking; constraint: agreement on shared c-subsets
            chosen = [None] * len(subs)
            shared = {}

            def rec(t):
                if t == len(subs):
                    out.append(("sk", tuple(chosen), y))
                    return
                s = subs[t]
                for x in cands[t]:
                    fs = faces_of[x]
                    ok = True
                    added = []
                    for pos in range(self.c + 1):
                        key = s[:pos] + s[pos + 1:]
                        v = fs[pos]
                        if key in shared:
                            if shared[key] != v:
                                ok = False
                                break
                        else:
                            shared[key] = v
                            added.append(key)
                    if ok:
                        chosen[t] = x
                        rec(t + 1)
                    for key in added:
                        del shared[key]

            rec(0)
        return out


def extend_over(over, cosk_source):
    """Projection of a relative coskeletal completion onto the base."""
    c = cosk_source.c
    return SimpMap(cosk_source, over.target,
                   lambda k, x: over(k, x) if k <= c else x[2], name="proj")


# ---------------------------------------------------------------------------
# identities and maps

class IdentityReport:
    def __init__(self, ok, witness=None, checked=0):
        self.ok, self.witness, self.checked = ok, witness, checked

    def __bool__(self):
        return self.ok

    def __repr__(self):
        return "IdentityReport(ok=%s, checked=%d, witness=%r)" % (self.ok, self.checked, self.witness)


def verify_identities(X, up_to, levels=None):
    """Exhaustive check of the simplicial identities and closure of faces."""
    n = 0
    for k in range(0, up_to + 1):
        elems = X.level(k) if levels is None else levels(k)
        lower = X.level_set(k - 1) if k >= 1 else None
        upper = X.level_set(k + 1) if k + 1 <= up_to else None
        for x in elems:
            n += 1
            fs = [X.face(k, i, x) for i in range(k + 1)] if k >= 1 else []
            if lower is not None:
                for i, fx in enumerate(fs):
                    if fx not in lower:
                        return IdentityReport(False, ("face not in level", k, i, x), n)
            if k >= 2:
                for j in range(k + 1):
                    for i in range(j):
                        if X.face(k - 1, i, fs[j]) != X.face(k - 1, j - 1, fs[i]):
                            return IdentityReport(False, ("d_i d_j", k, i, j, x), n)
            if k + 1 > up_to:
                continue
            ss = [X.degen(k, j, x) for j in range(k + 1)]
            for j, sx in enumerate(ss):
                if upper is not None and sx not in upper:
                    return IdentityReport(False, ("degeneracy not in level", k, j, x), n)
                for i in range(k + 2):
                    lhs = X.face(k + 1, i, sx)
                    if i < j:
                        rhs = X.degen(k - 1, j - 1, fs[i])
                    elif i in (j, j + 1):
                        rhs = x
                    else:
                        rhs = X.degen(k - 1, j, fs[i - 1])
                    if lhs != rhs:
                        return IdentityReport(False, ("d_i s_j", k, i, j, x), n)
            if k + 2 <= up_to:
                for j in range(k + 1):
                    for i in range(j + 1):
                        if X.degen(k + 1, i, ss[j]) != X.degen(k + 1, j + 1, ss[i]):
                            return IdentityReport(False, ("s_i s_j", k, i, j, x), n)
    return IdentityReport(True, None, n)


def verify_map(f, up_to, levels=None):
    """Naturality of ``f`` with respect to all faces and degeneracies."""
    X, Y = f.source, f.target
    n = 0
    for k in range(0, up_to + 1):
        tgt = Y.level_set(k)
        for x in (X.level(k) if levels is None else levels(k)):
            n += 1
            fx = f(k, x)
            if fx not in tgt:
                return IdentityReport(False, ("image not in level", k, x), n)
            if k >= 1:
                for i in range(k + 1):
                    if f(k - 1, X.face(k, i, x)) != Y.face(k, i, fx):
                        return IdentityReport(False, ("face", k, i, x), n)
            if k + 1 <= up_to:
                for j in range(k + 1):
                    if f(k + 1, X.degen(k, j, x)) != Y.degen(k, j, fx):
                        return IdentityReport(False, ("degeneracy", k, j, x), n)
    return IdentityReport(True, None, n)


def is_levelwise_bijective(f, up_to):
    for k in range(up_to + 1):
        imgs = [f(k, x) for x in f.source.level(k)]
        if len(set(imgs)) != len(imgs) or set(imgs) != f.target.level_set(k):
            return False, k
    return True, None


# ---------------------------------------------------------------------------
# finite shapes

def shape_facets(shape):
    """Maximal vertex subsets of ``horn(n,i)``, ``boundary(n)``, ``skeleton(k,n)``, ``spine(n)``."""
    kind = shape[0]
    if kind == "horn":
        n, i = shape[1], shape[2]
        return n, [tuple(v for v in range(n + 1) if v != j) for j in range(n + 1) if j != i]
    if kind == "boundary":
        n = shape[1]
        return n, [tuple(v for v in range(n + 1) if v != j) for j in range(n + 1)]
    if kind == "skeleton":
        k, n = shape[1], shape[2]
        return n, list(combinations(range(n + 1), k + 1))
    if kind == "spine":
        n = shape[1]
        return n, [(t, t + 1) for t in range(n)]
    raise SimplicialError("unknown shape %r" % (shape,))


class HornProbe:
    """Evaluated ``hom(shape, X)`` (or its relative version) with the restriction map."""

    def __init__(self, shape, X, f=None):
        self.shape, self.X, self.f = shape, X, f
        self.n, self.facets = shape_facets(shape)
        self.elements = self._enumerate()
        self._set = set(self.elements)

    def restrict(self, x):
        tup = tuple(self.X.restrict(self.n, x, s) for s in self.facets)
        if self.f is None:
            return tup
        return (tup, self.f(self.n, x))

    def _enumerate(self):
        X, f, n = self.X, self.f, self.n
        facets = self.facets
        ys = f.target.level(n) if f is not None else [None]
        out = []
        by_level = {}
        for s in facets:
            d = len(s) - 1
            if d not in by_level:
                by_level[d] = X.level(d)
        for y in ys:
            cands = []
            for s in facets:
                d = len(s) - 1
                if f is None:
                    cands.append(by_level[d])
                else:
                    ys_ = f.target.restrict(n, y, s)
                    cands.append([x for x in by_level[d] if f(d, x) == ys_])
            pairs = [(a, b) for a in range(len(facets)) for b in range(a)]
            chosen = [None] * len(facets)

            def compatible(t):
                for b in range(t):
                    common = tuple(sorted(set(facets[t]) & set(facets[b])))
                    if not common:
                        continue
                    ia = tuple(facets[t].index(v) for v in common)
                    ib = tuple(facets[b].index(v) for v in common)
                    if X.restrict(len(facets[t]) - 1, chosen[t], ia) != X.restrict(len(facets[b]) - 1, chosen[b], ib):
                        return False
                return True

            def rec(t):
                if t == len(facets):
                    tup = tuple(chosen)
                    out.append(tup if f is None else (tup, y))
                    return
                for x in cands[t]:
                    chosen[t] = x
                    if compatible(t):
                        rec(t + 1)
                chosen[t] = None

            rec(0)
        return out

    def image_counts(self):
        cnt = defaultdict(int)
        for x in self.X.level(self.n):
            cnt[self.restrict(x)] += 1
        return cnt

    def is_surjective(self):
        cnt = self.image_counts()
        return all(cnt.get(e, 0) >= 1 for e in self.elements)

    def is_bijective(self):
        cnt = self.image_counts()
        return all(cnt.get(e, 0) == 1 for e in self.elements) and sum(cnt.values()) == len(self.elements)

    def first_unfilled(self):
        cnt = self.image_counts()
        for e in self.elements:
            if not cnt.get(e):
                return e
        return None


def hom_finite(shape, X, f=None):
    """``hom(shape, X)``; with ``f: X -> Y`` the relative version over ``Y_n``."""
    if f is not None and f.source is not X:
        raise SimplicialError("f must have source X")
    return HornProbe(shape, X, f)


def brute_force_hom(shape, X, f=None):
    """Reference enumeration by filtering the full product (small cases only)."""
    n, facets = shape_facets(shape)
    ys = f.target.level(n) if f is not None else [None]
    out = []
    for y in ys:
        pools = []
        for s in facets:
            d = len(s) - 1
            pool = X.level(d)
            if f is not None:
                pool = [x for x in pool if f(d, x) == f.target.restrict(n, y, s)]
            pools.append(pool)
        for tup in product(*pools):
            ok = True
            for a in range(len(facets)):
                for b in range(a):
                    common = sorted(set(facets[a]) & set(facets[b]))
                    if not common:
                        continue
                    ra = X.restrict(len(facets[a]) - 1, tup[a], tuple(facets[a].index(v) for v in common))
                    rb = X.restrict(len(facets[b]) - 1, tup[b], tuple(facets[b].index(v) for v in common))
                    if ra != rb:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                out.append(tup if f is None else (tup, y))
    return out


# ---------------------------------------------------------------------------
# predicates

class PredicateReport:
    def __init__(self, holds, witnesses):
        self.holds, self.witnesses = holds, witnesses

    def __bool__(self):
        return self.holds

    def __repr__(self):
        return "PredicateReport(%s, %r)" % (self.holds, self.witnesses[:3])


def _as_map(f):
    if isinstance(f, SimpMap):
        return f
    return terminal_map(f)


def predicate(f, kind, up_to, n=None):
    """Kan-type predicates checked on levels ``<= up_to``.

    ``kind`` is one of ``kan``, ``covering-kan``, ``hypercover``,
    ``n-hypercover``, ``n-stack``, ``covering-n-stack``.
    """
    f = _as_map(f)
    X = f.source
    wit = []
    if kind in ("n-hypercover", "n-stack", "covering-n-stack") and n is None:
        raise SimplicialError("kind %s needs n" % kind)
    if kind in ("covering-kan", "covering-n-stack"):
        img = {f(0, x) for x in X.level(0)}
        if img != f.target.level_set(0):
            wit.append(("f_0 not surjective",))
    if kind in ("kan", "covering-kan", "n-stack", "covering-n-stack"):
        for k in range(1, up_to + 1):
            for i in range(k + 1):
                P = hom_finite(("horn", k, i), X, f)
                if kind in ("n-stack", "covering-n-stack") and k > n:
                    if not P.is_bijective():
                        wit.append(("lambda not bijective", k, i))
                elif not P.is_surjective():
                    wit.append(("lambda not surjective", k, i, P.first_unfilled()))
    if kind in ("hypercover", "n-hypercover"):
        img = {f(0, x) for x in X.level(0)}
        if img != f.target.level_set(0):
            wit.append(("mu_0 not surjective",))
        for k in range(1, up_to + 1):
            P = hom_finite(("boundary", k), X, f)
            if kind == "n-hypercover" and k >= n:
                if not P.is_bijective():
                    wit.append(("mu not bijective", k))
            elif not P.is_surjective():
                wit.append(("mu not surjective", k))
        if kind == "n-hypercover" and n == 0:
            imgs = [f(0, x) for x in X.level(0)]
            if len(set(imgs)) != len(imgs):
                wit.append(("mu_0 not injective",))
    return PredicateReport(not wit, wit)


# ---------------------------------------------------------------------------
# standard constructions

def nerve(G, coords="homog"):
    """Nerve of a finite group; ``coords`` is ``homog`` or ``inhomog``."""
    if coords == "homog":
        def face(k, i, x):
            if i == 0:
                return x[1:]
            if i == k:
                return x[:-1]
            return x[:i - 1] + (G.mul(x[i - 1], x[i]),) + x[i + 1:]

        def degen(k, i, x):
            return x[:i] + (G.e,) + x[i:]
    elif coords == "inhomog":
        def face(k, i, x):
            if i == 0:
                g1i = G.inv(x[0])
                return tuple(G.mul(g1i, g) for g in x[1:])
            return x[:i - 1] + x[i:]

        def degen(k, i, x):
            if i == 0:
                return (G.e,) + x
            return x[:i] + (x[i - 1],) + x[i:]
    else:
        raise SimplicialError("coords must be homog or inhomog")
    return FinSimpSet(lambda k: list(product(G.elements, repeat=k)), face, degen,
                      name="N%s_%s" % (G.name, coords))


def constant_group(G):
    return FinSimpGroup(lambda k: G.elements, lambda k, i, x: x, lambda k, i, x: x,
                        lambda k, a, b: G.mul(a, b), lambda k, a: G.inv(a), lambda k: G.e,
                        name=G.name)


def wbar(Gs, name=None):
    """Nerve ``W-bar`` of a simplicial group: ``(g_{n-1}, ..., g_0)``."""
    def level(k):
        return list(product(*[Gs.level(j) for j in range(k - 1, -1, -1)]))

    def face(k, i, x):
        # x[p] lies in level k-1-p
        if i == 0:
            return x[1:]
        if i == k:
            return tuple(Gs.face(k - 1 - p, i - 1 - p, x[p]) for p in range(k - 1))
        out = []
        for p in range(i - 1):
            out.append(Gs.face(k - 1 - p, i - 1 - p, x[p]))
        # position i-1 holds g_{k-i}; combine d_0 g_{k-i} . g_{k-i-1}
        lv = k - i
        out.append(Gs.mul(lv - 1, Gs.face(lv, 0, x[i - 1]), x[i]))
        out.extend(x[i + 1:])
        return tuple(out)

    def degen(k, i, x):
        out = []
        for p in range(i):
            out.append(Gs.degen(k - 1 - p, i - 1 - p, x[p]))
        out.append(Gs.unit(k - i))
        out.extend(x[i:])
        return tuple(out)

    return FinSimpSet(level, face, degen, name=name or "Wbar(%s)" % Gs.name)


def decalage(X, name=None):
    """Initial decalage: ``(Dec X)_k = X_{k+1}`` with ``d_i, s_i`` shifted by one."""
    D = FinSimpSet(lambda k: X.level(k + 1), lambda k, i, x: X.face(k + 1, i + 1, x),
                   lambda k, i, x: X.degen(k + 1, i + 1, x), name=name or "Dec(%s)" % X.name)
    proj = SimpMap(D, X, lambda k, x: X.face(k + 1, 0, x), name="d_0")
    return D, proj


def hoquot(X, Gs, act, name=None, twist="first"):
    """Homotopy quotient ``X//G -> W-bar G``; ``act(k, g, x)`` with ``g`` in ``G_k``.

    ``twist="first"``: ``d_0(x, g) = (g_{n-1}^{-1} d_0 x, d_0 g)``.
    ``twist="last"`` is the orientation-reversed variant for a constant
    group: ``d_n(x, g) = (g_0 d_n x, d_n g)`` and the other faces untwisted.
    """
    W = wbar(Gs)

    def level(k):
        return [(x, g) for x in X.level(k) for g in W.level(k)]

    if twist == "last":
        def face(k, i, xg):
            x, g = xg
            if i == k:
                return (act(k - 1, g[-1], X.face(k, k, x)), W.face(k, k, g))
            return (X.face(k, i, x), W.face(k, i, g))
    elif twist == "first":
        def face(k, i, xg):
            x, g = xg
            if i == 0:
                return (act(k - 1, Gs.inv(k - 1, g[0]), X.face(k, 0, x)), W.face(k, 0, g))
            return (X.face(k, i, x), W.face(k, i, g))
    else:
        raise SimplicialError("twist must be first or last")

    def degen(k, i, xg):
        x, g = xg
        return (X.degen(k, i, x), W.degen(k, i, g))

    Q = FinSimpSet(level, face, degen, name=name or "%s//%s" % (X.name, Gs.name))
    return Q, SimpMap(Q, W, lambda k, xg: xg[1], name="proj")


def nerve_cover(X, Y, f):
    """Cech nerve of a surjection of finite sets ``f: X -> Y`` (a simplicial set over Y)."""
    fib = defaultdict(list)
    for x in X:
        fib[f(x)].append(x)

    def level(k):
        out = []
        for y, xs in fib.items():
            out.extend(product(xs, repeat=k + 1))
        return out

    N = FinSimpSet(level, lambda k, i, t: t[:i] + t[i + 1:], lambda k, i, t: t[:i + 1] + t[i:], name="N(X/Y)")
    return N, SimpMap(N, constant(Y, "Y"), lambda k, t: f(t[0]), name="proj")


# -- Eilenberg-MacLane objects -----------------------------------------------

class EMSpace(FinSimpGroup):
    """``K(A, n)`` in inhomogeneous coordinates: normalized n-cocycles on ``Delta^k``.

    A k-simplex is the tuple of values on the ``(n+1)``-subsets of ``[k]`` in
    lexicographic order; faces restrict and degeneracies pull back (zero on
    collapsed subsets).
    """

    def __init__(self, A, n):
        self.A, self.n = A, n
        self._subs, self._pos, self._fidx, self._didx = {}, {}, {}, {}
        super().__init__(self._level_impl, self._face_impl, self._degen_impl,
                         lambda k, a, b: tuple(A.mul(x, y) for x, y in zip(a, b)),
                         lambda k, a: tuple(A.inv(x) for x in a),
                         lambda k: tuple(A.e for _ in self.subsets(k)),
                         name="K(%s,%d)" % (A.name, n))

    def subsets(self, k):
        if k not in self._subs:
            ss = list(combinations(range(k + 1), self.n + 1))
            self._subs[k] = ss
            self._pos[k] = {s: i for i, s in enumerate(ss)}
        return self._subs[k]

    def _face_impl(self, k, i, x):
        key = (k, i)
        if key not in self._fidx:
            self.subsets(k)
            self._fidx[key] = tuple(self._pos[k][tuple(coface(i, v) for v in s)] for s in self.subsets(k - 1))
        return tuple(x[j] for j in self._fidx[key])

    def _degen_impl(self, k, j, x):
        key = (k, j)
        if key not in self._didx:
            self.subsets(k)
            idx = []
            for s in self.subsets(k + 1):
                img = tuple(codegeneracy(j, v) for v in s)
                idx.append(self._pos[k][img] if len(set(img)) == len(img) else -1)
            self._didx[key] = tuple(idx)
        e = self.A.e
        return tuple(x[t] if t >= 0 else e for t in self._didx[key])

    def free_subsets(self, k):
        return [s for s in self.subsets(k) if s[0] == 0]

    def from_free(self, k, vals):
        """Cocycle with the given values on the subsets containing 0."""
        A = self.A
        v = {}
        for s, a in zip(self.free_subsets(k), vals):
            v[s] = a
        for s in self.subsets(k):
            if s[0] == 0:
                continue
            tau = (0,) + s
            acc = A.e
            for i in range(1, len(tau)):
                face = tau[:i] + tau[i + 1:]
                term = v[face] if i % 2 == 0 else A.inv(v[face])
                acc = A.mul(acc, term)
            v[s] = A.inv(acc)
        return tuple(v[s] for s in self.subsets(k))

    def is_cocycle(self, k, x):
        A = self.A
        pos = self._pos[k] if k in self._pos else (self.subsets(k), self._pos[k])[1]
        for tau in combinations(range(k + 1), self.n + 2):
            acc = A.e
            for i in range(len(tau)):
                v = x[pos[tau[:i] + tau[i + 1:]]]
                acc = A.mul(acc, v if i % 2 == 0 else A.inv(v))
            if acc != A.e:
                return False
        return True

    def _level_impl(self, k):
        if k < self.n:
            return [()]
        nfree = len(self.free_subsets(k))
        return [self.from_free(k, vals) for vals in product(self.A.elements, repeat=nfree)]

    # coordinates on levels n and n+1
    def to_coords(self, k, x):
        if k == self.n:
            return x[0]
        if k == self.n + 1:
            # (a_0, ..., a_n) = values of the faces d_0, ..., d_n
            return tuple(x[self._pos[k][tuple(v for v in range(k + 1) if v != i)]] for i in range(self.n + 1))
        raise SimplicialError("coordinates only on levels n, n+1")

    def from_coords(self, k, a):
        if k == self.n:
            return (a,)
        if k == self.n + 1:
            A = self.A
            # d_{n+1} = (-1)^n sum (-1)^i a_i
            acc = A.e
            for i, ai in enumerate(a):
                acc = A.mul(acc, ai if i % 2 == 0 else A.inv(ai))
            last = acc if self.n % 2 == 0 else A.inv(acc)
            vals = {}
            for i in range(k + 1):
                s = tuple(v for v in range(k + 1) if v != i)
                vals[s] = a[i] if i <= self.n else last
            self.subsets(k)
            return tuple(vals[s] for s in self.subsets(k))
        raise SimplicialError("coordinates only on levels n, n+1")

    def act(self, action):
        """Levelwise action of a finite group through automorphisms of ``A``."""
        return lambda k, g, x: tuple(action(g, a) for a in x)


def em_inhomog(A, n):
    return EMSpace(A, n)


def em_homog(A, n):
    """``K(A, n)`` via the normalized-chain formulas on levels ``<= n+1``,
    completed coskeletally above."""
    def level(k):
        if k < n:
            return [()]
        if k == n:
            return [(a,) for a in A.elements]
        if k == n + 1:
            return list(product(A.elements, repeat=n + 1))
        raise SimplicialError("stored levels end at n+1")

    def face(k, i, x):
        if k <= n:
            return ()
        if k == n + 1:
            if i == 0:
                return (x[0],)
            if i == n + 1:
                return (x[n],)
            return (A.mul(x[i - 1], x[i]),)
        raise SimplicialError("face above stored levels")

    def degen(k, i, x):
        if k < n - 1:
            return ()
        if k == n - 1:
            return (A.e,)
        if k == n:
            return tuple(x[0] if j == i else A.e for j in range(n + 1))
        raise SimplicialError("degeneracy above stored levels")

    low = FinSimpSet(level, face, degen, name="K(%s,%d)_low" % (A.name, n), max_level=n + 1)
    out = Coskeletal(low, n + 1, name="K(%s,%d)_homog" % (A.name, n))
    return out


def build_standard(kind, **data):
    """Dispatch for the bundled constructions."""
    if kind == "NG_homog":
        return nerve(data["G"], "homog")
    if kind == "NG_inhomog":
        return nerve(data["G"], "inhomog")
    if kind == "K_homog":
        return em_homog(data["A"], data["n"])
    if kind == "K_inhomog":
        return em_inhomog(data["A"], data["n"])
    if kind == "wbar":
        return wbar(data["G"])
    if kind == "hoquot":
        return hoquot(data["X"], data["G"], data["act"], twist=data.get("twist", "first"))
    if kind == "nerve_cover":
        return nerve_cover(data["X"], data["Y"], data["f"])
    raise SimplicialError("unknown kind %r" % kind)


# ---------------------------------------------------------------------------
# canonical isomorphisms (enumerative)

def _invert(f, up_to, name):
    table = {}
    for k in range(up_to + 1):
        for x in f.source.level(k):
            y = f(k, x)
            if (k, y) in table:
                raise SimplicialError("%s is not injective on level %d" % (f.name, k))
            table[(k, y)] = x
    return SimpMap(f.target, f.source, lambda k, y: table[(k, y)], name=name)


def nerve_coords(G):
    """``(g_1, ..., g_n) -> (g_1, g_1 g_2, ..., g_1...g_n)``."""
    S, T = nerve(G, "homog"), nerve(G, "inhomog")

    def fwd(k, x):
        out, acc = [], G.e
        for g in x:
            acc = G.mul(acc, g)
            out.append(acc)
        return tuple(out)

    def bwd(k, y):
        out, prev = [], G.e
        for h in y:
            out.append(G.mul(G.inv(prev), h))
            prev = h
        return tuple(out)

    return SimpMap(S, T, fwd, "nerve_coords"), SimpMap(T, S, bwd, "nerve_coords^-1")


def k_coords(A, n):
    """``K(A,n)`` homogeneous -> inhomogeneous: identity on level n and
    ``(a_0, a_0+a_1, ..., a_{n-1}+a_n)`` on level n+1."""
    S, T = em_homog(A, n), em_inhomog(A, n)

    def on_level_n1(a):
        out = [a[0]] + [A.mul(a[i - 1], a[i]) for i in range(1, n + 1)]
        return T.from_coords(n + 1, tuple(out))

    def fwd(k, x):
        if k < n:
            return ()
        if k == n:
            return (x[0],)
        # value on each (n+1)-subset = the level-n restriction
        vals = []
        for s in T.subsets(k):
            vals.append(S.restrict(k, x, s)[0])
        y = tuple(vals)
        return y

    f = SimpMap(S, T, fwd, "K_coords")
    f.formula_n1 = on_level_n1
    return f, None


def wbar_k_to_k(A, n):
    """``W-bar K(A,n) -> K(A,n+1)``: identity on level n+1 and
    ``((a_0..a_n), b) -> (b, a_0+b, a_1, ..., a_n)`` on level n+2."""
    K = em_inhomog(A, n)
    W = wbar(K)
    T = em_inhomog(A, n + 1)

    def fwd(k, w):
        if k <= n:
            return ()
        vals = []
        for s in T.subsets(k):
            r = W.restrict(k, w, s)
            vals.append(r[0][0])
        return tuple(vals)

    def formula(a, b):
        return T.from_coords(n + 2, (b, A.mul(a[0], b)) + tuple(a[1:]))

    f = SimpMap(W, T, fwd, "Wbar_to_K")
    f.formula_n2 = formula
    return f, W, K, T


def canonical_iso(kind, up_to, **data):
    """Returns ``(iso, inverse)`` after checking both composites are identities."""
    if kind == "nerve_coords":
        f, g = nerve_coords(data["G"])
    elif kind == "K_coords":
        f, _ = k_coords(data["A"], data["n"])
        g = _invert(f, up_to, "K_coords^-1")
    elif kind == "wbarK_to_K":
        f = wbar_k_to_k(data["A"], data["n"])[0]
        g = _invert(f, up_to, "Wbar_to_K^-1")
    elif kind == "relw":
        f = relw_map(data["A"], data["n"], data["G"], data["action"], data.get("twist", "first"))
        g = _invert(f, up_to, "relw^-1")
    else:
        raise SimplicialError("unknown iso %r" % kind)
    return f, g


def relw_map(A, n, G, action, twist="first"):
    """``W-bar K(A,n) // G -> K(A,n+1) // G``: the homotopy quotient of
    ``W-bar K(A,n) -> K(A,n+1)``, compatible with the projections to ``NG``."""
    phi, W, K, T = wbar_k_to_k(A, n)
    Gs = constant_group(G)
    actK = K.act(action)
    actW = lambda k, g, w: tuple(actK(k - 1 - p, g, w[p]) for p in range(len(w)))
    src, _ = hoquot(W, Gs, actW, twist=twist)
    tgt, _ = hoquot(T, Gs, T.act(action), twist=twist)
    return SimpMap(src, tgt, lambda k, xg: (phi(k, xg[0]), xg[1]), name="relw")


def check_iso(f, g, up_to):
    """Both maps simplicial, and both composites identities, on levels ``<= up_to``."""
    out = {"forward_simplicial": bool(verify_map(f, up_to)),
           "inverse_simplicial": bool(verify_map(g, up_to))}
    ok1 = all(g(k, f(k, x)) == x for k in range(up_to + 1) for x in f.source.level(k))
    ok2 = all(f(k, g(k, y)) == y for k in range(up_to + 1) for y in f.target.level(k))
    out["left_inverse"] = ok1
    out["right_inverse"] = ok2
    out["ok"] = all(out.values())
    return out


# ---------------------------------------------------------------------------
# homotopy groups

class HomotopyGroup:
    """``pi_n(X, *)`` as classes of n-simplices with degenerate boundary."""

    def __init__(self, X, n, v=None):
        self.X, self.n = X, n
        self.v = v
        star = lambda k: X.basepoint(k, v)
        self.star = star
        if n == 0:
            self._pi0()
            return
        sph = [x for x in X.level(n) if all(X.face(n, i, x) == star(n - 1) for i in range(n + 1))]
        parent = {x: x for x in sph}

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        sn = star(n)
        for z in X.level(n + 1):
            if all(X.face(n + 1, i, z) == sn for i in range(n)):
                a, b = X.face(n + 1, n, z), X.face(n + 1, n + 1, z)
                if a in parent and b in parent:
                    ra, rb = find(a), find(b)
                    if ra != rb:
                        parent[ra] = rb
        classes = defaultdict(list)
        for x in sph:
            classes[find(x)].append(x)
        reps = sorted(classes, key=lambda r: (r != find(sn), repr(r)))
        self.reps = reps
        self.cls = {}
        for i, r in enumerate(reps):
            for x in classes[r]:
                self.cls[x] = i
        self.identity = self.cls[sn]
        self._table()

    def _pi0(self):
        X = self.X
        parent = {x: x for x in X.level(0)}

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for e in X.level(1):
            a, b = find(X.face(1, 0, e)), find(X.face(1, 1, e))
            if a != b:
                parent[a] = b
        classes = defaultdict(list)
        for x in X.level(0):
            classes[find(x)].append(x)
        self.reps = sorted(classes, key=repr)
        self.cls = {x: i for i, r in enumerate(self.reps) for x in classes[r]}
        self.identity = None
        self.table = None

    def _table(self):
        X, n = self.X, self.n
        star = self.star
        m = len(self.reps)
        table = [[None] * m for _ in range(m)]
        # [a][b] = [d_n w] with d_{n+1} w = a, d_{n-1} w = b and the other
        # faces at the basepoint; for n = 1 this is path composition in the
        # order of the spine, matching the homogeneous nerve
        sn = star(n)
        for w in X.level(n + 1):
            fs = X.faces(n + 1, w)
            if any(fs[i] != sn for i in range(n - 1)):
                continue
            x, y, z = fs[n - 1], fs[n + 1], fs[n]
            if x in self.cls and y in self.cls and z in self.cls:
                a, b = self.cls[y], self.cls[x]
                c = self.cls[z]
                if table[a][b] is None:
                    table[a][b] = c
                elif table[a][b] != c:
                    raise SimplicialError("homotopy product not well defined")
        for a in range(m):
            for b in range(m):
                if table[a][b] is None:
                    raise SimplicialError("horn not fillable: X not Kan at level %d" % (n + 1))
        self.table = table

    def order(self):
        return len(self.reps)

    def __call__(self, x):
        return self.cls[x]

    def is_abelian(self):
        m = self.order()
        return all(self.table[a][b] == self.table[b][a] for a in range(m) for b in range(m))

    def group(self, name=None):
        return FinGroup(range(self.order()), lambda a, b: self.table[a][b], self.identity,
                        name=name or "pi_%d(%s)" % (self.n, self.X.name))


def homotopy_group(X, n, basepoint=None):
    return HomotopyGroup(X, n, basepoint)


def pi0(X):
    return HomotopyGroup(X, 0)


def is_isomorphic_table(G, H):
    """Brute-force isomorphism test between small finite groups."""
    if G.order() != H.order():
        return False
    Ge, He = G.elements, H.elements
    for perm in permutations(He):
        phi = dict(zip(Ge, perm))
        if phi[G.e] != H.e:
            continue
        if all(phi[G.mul(a, b)] == H.mul(phi[a], phi[b]) for a in Ge for b in Ge):
            return True
    return False


# ---------------------------------------------------------------------------
# DOT export

def to_dot(X, up_to=2, nondegenerate_only=True):
    """Face poset of the low levels in Graphviz DOT format."""
    lines = ["digraph %s {" % "".join(ch if ch.isalnum() else "_" for ch in X.name)]
    ids = {}

    def nid(k, x):
        key = (k, x)
        if key not in ids:
            ids[key] = "v%d" % len(ids)
            lines.append('  %s [label="%d:%s"];' % (ids[key], k, str(x).replace('"', "'")))
        return ids[key]

    degenerate = set()
    for k in range(1, up_to + 1):
        for x in X.level(k - 1):
            for j in range(k):
                degenerate.add((k, X.degen(k - 1, j, x)))
    for k in range(up_to + 1):
        for x in X.level(k):
            if nondegenerate_only and (k, x) in degenerate:
                continue
            me = nid(k, x)
            if k >= 1:
                for i in range(k + 1):
                    lines.append("  %s -> %s [label=d%d];" % (me, nid(k - 1, X.face(k, i, x)), i))
    lines.append("}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# linear backend over a prime field

def _flat(x, out):
    if isinstance(x, int):
        out.append(x)
    elif isinstance(x, (tuple, list)):
        for y in x:
            _flat(y, out)
    # markers and None carry no coordinates
    return out


def _unflat(template, it):
    if isinstance(template, int):
        return next(it)
    if isinstance(template, tuple):
        return tuple(_unflat(t, it) for t in template)
    return template


def rank_mod(rows, p):
    """Rank of a list of integer vectors over ``F_p``."""
    return len(rref_mod(rows, p)[1])


def rref_mod(rows, p):
    rows = [[v % p for v in r] for r in rows]
    pivots = []
    r = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], p - 2, p)
        rows[r] = [(v * inv) % p for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return rows[:r], pivots


def nullspace_mod(rows, ncols, p):
    if not rows:
        return [[1 if j == i else 0 for j in range(ncols)] for i in range(ncols)]
    red, piv = rref_mod(rows, p)
    free = [c for c in range(ncols) if c not in piv]
    out = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for r, pc in enumerate(piv):
            v[pc] = (-red[r][fc]) % p
        out.append(v)
    return out


class LinSimp:
    """Simplicial ``F_p``-vector space wrapping a structured simplicial object.

    Levels are subspaces spanned by ``basis(k)``; faces and degeneracies are
    those of ``X`` and must be linear in the flattened coordinates.
    """

    def __init__(self, X, p, basis_fn, name=None):
        self.X, self.p = X, p
        self._basis_fn = basis_fn
        self._basis = {}
        self.name = name or "Lin(%s)" % X.name

    def template(self, k):
        return self.X.basepoint(k)

    def vec(self, x):
        return tuple(v % self.p for v in _flat(x, []))

    def elem(self, k, v):
        return _unflat(self.template(k), iter(v))

    def basis(self, k):
        if k not in self._basis:
            self._basis[k] = list(self._basis_fn(k))
        return self._basis[k]

    def dim(self, k):
        return len(self.basis(k))

    def combine(self, k, coeffs):
        p = self.p
        acc = None
        for c, b in zip(coeffs, self.basis(k)):
            v = self.vec(b)
            acc = [c * t for t in v] if acc is None else [a + c * t for a, t in zip(acc, v)]
        if acc is None:
            acc = self.vec(self.template(k))
        return self.elem(k, [a % p for a in acc])

    def in_span(self, k, x):
        rows = [list(self.vec(b)) for b in self.basis(k)]
        r0 = rank_mod(rows, self.p) if rows else 0
        return rank_mod(rows + [list(self.vec(x))], self.p) == r0

    def coords(self, k, x):
        """Coefficients of ``x`` in ``basis(k)`` (``None`` if outside the span)."""
        B = [self.vec(b) for b in self.basis(k)]
        n = len(B)
        v = self.vec(x)
        # solve sum c_j B_j = v
        rows = [[B[j][i] for j in range(n)] + [v[i]] for i in range(len(v))]
        red, piv = rref_mod(rows, self.p)
        if n in piv:
            return None
        c = [0] * n
        for r, pc in enumerate(piv):
            c[pc] = red[r][n]
        return c


def lin_em(A, n):
    """``K(Z/p, n)`` (cocycle model) as a linear simplicial space."""
    K = em_inhomog(A, n)
    p = A.order()

    def basis(k):
        if k < n:
            return []
        m = len(K.free_subsets(k))
        return [K.from_free(k, tuple(1 if j == i else 0 for j in range(m))) for i in range(m)]

    return LinSimp(K, p, basis, name="Lin" + K.name)


def lin_em_homog(A, n):
    H = em_homog(A, n)
    p = A.order()
    c = n + 1

    def basis(k):
        if k < n:
            return []
        if k == n:
            return [(1,)]
        if k == n + 1:
            return [tuple(1 if j == i else 0 for j in range(n + 1)) for i in range(n + 1)]
        subs = H.subsets(k)
        pos = {s: i for i, s in enumerate(subs)}
        dimc = n + 1
        rows = []
        # adjacent (c+1)-subsets sharing a c-subset must agree there
        owners = defaultdict(list)
        for s in subs:
            for j in range(c + 1):
                owners[s[:j] + s[j + 1:]].append((s, j))
        for T, own in owners.items():
            for (s1, j1), (s2, j2) in zip(own, own[1:]):
                # face j of a level-(n+1) vector is a single coordinate combination
                for_a = _face_row(n, j1)
                for_b = _face_row(n, j2)
                row = [0] * (len(subs) * dimc)
                for t, v in enumerate(for_a):
                    row[pos[s1] * dimc + t] += v
                for t, v in enumerate(for_b):
                    row[pos[s2] * dimc + t] -= v
                rows.append(row)
        ns = nullspace_mod(rows, len(subs) * dimc, p)
        out = []
        for v in ns:
            vals = tuple(tuple(v[i * dimc:(i + 1) * dimc]) for i in range(len(subs)))
            out.append(("sk", vals, None))
        return out

    return LinSimp(H, p, basis, name="Lin" + H.name)


def _face_row(n, j):
    """Linear form of ``d_j`` on level n+1 of the normalized-chain model."""
    row = [0] * (n + 1)
    if j == 0:
        row[0] = 1
    elif j == n + 1:
        row[n] = 1
    else:
        row[j - 1] = row[j] = 1
    return row


def lin_wbar_em(A, n):
    LK = lin_em(A, n)
    W = wbar(LK.X)
    p = A.order()

    def basis(k):
        out = []
        zero = W.basepoint(k) if k >= 1 else ()
        for pos in range(k):
            lv = k - 1 - pos
            for b in LK.basis(lv):
                t = list(zero)
                t[pos] = b
                out.append(tuple(t))
        return out

    return LinSimp(W, p, basis, name="LinWbar" + LK.X.name)


def verify_linear(L, up_to):
    """Simplicial identities and closure, checked on bases (enough by linearity)."""
    X = L.X
    n = 0
    for k in range(up_to + 1):
        for b in L.basis(k):
            n += 1
            if k >= 1:
                for i in range(k + 1):
                    if not L.in_span(k - 1, X.face(k, i, b)):
                        return IdentityReport(False, ("face leaves level", k, i, b), n)
                for j in range(k + 1):
                    for i in range(j):
                        if X.face(k - 1, i, X.face(k, j, b)) != X.face(k - 1, j - 1, X.face(k, i, b)):
                            return IdentityReport(False, ("d_i d_j", k, i, j), n)
            if k + 1 > up_to:
                continue
            for j in range(k + 1):
                sb = X.degen(k, j, b)
                if not L.in_span(k + 1, sb):
                    return IdentityReport(False, ("degeneracy leaves level", k, j, b), n)
                for i in range(k + 2):
                    lhs = X.face(k + 1, i, sb)
                    if i < j:
                        rhs = X.degen(k - 1, j - 1, X.face(k, i, b))
                    elif i in (j, j + 1):
                        rhs = b
                    else:
                        rhs = X.degen(k - 1, j, X.face(k, i - 1, b))
                    if L.vec(lhs) != L.vec(rhs):
                        return IdentityReport(False, ("d_i s_j", k, i, j), n)
                if k + 2 <= up_to:
                    for i in range(j + 1):
                        if L.vec(X.degen(k + 1, i, sb)) != L.vec(X.degen(k + 1, j + 1, X.degen(k, i, b))):
                            return IdentityReport(False, ("s_i s_j", k, i, j), n)
    return IdentityReport(True, None, n)


class LinearIso:
    """Linear simplicial map ``fn`` between linear spaces, with its levelwise inverse."""

    def __init__(self, S, T, fn, name="iso"):
        self.S, self.T, self.fn, self.name = S, T, fn, name

    def __call__(self, k, x):
        return self.fn(k, x)

    def inverse(self, k, y):
        """Preimage of ``y``: solve in the image of the source basis."""
        imgs = [self.T.vec(self.fn(k, b)) for b in self.S.basis(k)]
        n = len(imgs)
        v = self.T.vec(y)
        rows = [[imgs[j][i] for j in range(n)] + [v[i]] for i in range(len(v))]
        red, piv = rref_mod(rows, self.S.p)
        if n in piv:
            raise SimplicialError("not in the image")
        c = [0] * n
        for r, pc in enumerate(piv):
            c[pc] = red[r][n]
        return self.S.combine(k, c)

    def certificate(self, up_to):
        S, T, p = self.S, self.T, self.S.p
        out = {}
        for k in range(up_to + 1):
            B = S.basis(k)
            imgs = [self.fn(k, b) for b in B]
            inside = all(T.in_span(k, y) for y in imgs)
            rk = rank_mod([list(T.vec(y)) for y in imgs], p) if imgs else 0
            bij = inside and rk == len(B) == T.dim(k)
            nat = True
            for b, y in zip(B, imgs):
                if k >= 1:
                    for i in range(k + 1):
                        if T.vec(self.fn(k - 1, S.X.face(k, i, b))) != T.vec(T.X.face(k, i, y)):
                            nat = False
                if k + 1 <= up_to:
                    for j in range(k + 1):
                        if T.vec(self.fn(k + 1, S.X.degen(k, j, b))) != T.vec(T.X.degen(k, j, y)):
                            nat = False
            roundtrip = all(S.vec(self.inverse(k, y)) == S.vec(b) for b, y in zip(B, imgs))
            out[k] = {"dim": len(B), "bijective": bij, "natural": nat, "inverse_ok": roundtrip}
        return out
