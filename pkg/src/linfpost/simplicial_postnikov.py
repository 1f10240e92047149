"""
Moore and Duskin truncations of Kan fibrations between finite simplicial sets.

The Duskin stage keeps the levels below n, replaces level n by fiberwise
homotopy classes relative to the boundary, stores level n+1 as horn data
of classes (the missing face comes from a filler), and is relatively
coskeletal above. The Moore stage replaces each level >= n by its image in
the relative (n-1)-coskeleton.
"""

from collections import defaultdict
from itertools import combinations

from .simplicial_core import (
    Coskeletal, FinSimpSet, SimpMap, SimplicialError, hom_finite, homotopy_group,
    nerve, predicate, terminal_map,
)


def _as_map(f):
    return f if isinstance(f, SimpMap) else terminal_map(f)


class RelBoundaryClasses:
    """Fiberwise homotopy classes rel boundary on ``X_n`` for ``f: X -> Y``.

    ``x ~ y`` when some ``z`` in ``X_{n+1}`` has ``d_n z = x``,
    ``d_{n+1} z = y``, ``d_i z = s_{n-1} d_i x`` for ``i < n`` and
    ``f(z) = s_n f(x)``; classes are the equivalence closure.
    """

    def __init__(self, f, n):
        f = _as_map(f)
        self.f, self.n = f, n
        X, Y = f.source, f.target
        elems = X.level(n)
        parent = {x: x for x in elems}

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        related = set()
        for z in X.level(n + 1):
            x, y = X.face(n + 1, n, z), X.face(n + 1, n + 1, z)
            if f(n + 1, z) != Y.degen(n, n, f(n, x)):
                continue
            if n >= 1 and any(X.face(n + 1, i, z) != X.degen(n - 1, n - 1, X.face(n, i, x)) for i in range(n)):
                continue
            if self.boundary(x) != self.boundary(y):
                raise SimplicialError("relation does not preserve the boundary")
            related.add((x, y))
            ra, rb = find(x), find(y)
            if ra != rb:
                parent[ra] = rb
        classes = defaultdict(list)
        for x in elems:
            classes[find(x)].append(x)
        order = {x: i for i, x in enumerate(elems)}
        self.reps = sorted((min(c, key=order.get) for c in classes.values()), key=order.get)
        self.rep_of = {}
        self.members = {}
        for c in classes.values():
            r = min(c, key=order.get)
            self.members[r] = c
            for x in c:
                self.rep_of[x] = r
        # was the closure needed beyond the raw relation?
        self.closure_nontrivial = False
        for c in classes.values():
            for a in c:
                for b in c:
                    if (a, b) not in related:
                        self.closure_nontrivial = True
                        break
                if self.closure_nontrivial:
                    break
            if self.closure_nontrivial:
                break

    def boundary(self, x):
        X = self.f.source
        fs = X.faces(self.n, x) if self.n >= 1 else ()
        return (fs, self.f(self.n, x))

    def __call__(self, x):
        return self.rep_of[x]

    def is_discrete(self):
        return len(self.reps) == len(self.rep_of)

    def witness(self):
        for r, c in self.members.items():
            if len(c) > 1:
                return c[0], c[1]
        return None


class TruncatedFibration:
    """A truncation ``T`` over ``Y`` with ``q: X -> T`` and ``proj: T -> Y``."""

    def __init__(self, T, q, proj, kind, n, classes=None):
        self.T, self.q, self.proj, self.kind, self.n = T, q, proj, kind, n
        self.classes = classes
        self.missing_face_table = {}

    def certify(self, up_to, stack=True):
        from .simplicial_core import verify_identities, verify_map
        out = {"identities": bool(verify_identities(self.T, up_to)),
               "q_simplicial": bool(verify_map(self.q, up_to)),
               "proj_simplicial": bool(verify_map(self.proj, up_to))}
        if stack:
            out["proj_n_stack"] = bool(predicate(self.proj, "n-stack", up_to, n=self.n))
        return out


def _restrict_levels(X, top):
    """Levels ``<= top`` of ``X`` with its operators (the base of a coskeletal completion)."""
    return FinSimpSet(X.level, X.face, X.degen, name=X.name, max_level=None)


def moore_truncate(f, n):
    """``tau_{<n}(X, f)``: levels ``>= n`` replaced by their image in the
    relative ``(n-1)``-coskeleton over ``Y``."""
    f = _as_map(f)
    X, Y = f.source, f.target
    if n == 0:
        def level(k):
            return sorted({f(k, x) for x in X.level(k)}, key=repr)

        T = FinSimpSet(level, Y.face, Y.degen, name="tau<0")
        q = SimpMap(X, T, f.fn, name="q<")
        return TruncatedFibration(T, q, SimpMap(T, Y, lambda k, y: y, name="proj"), "moore", 0)
    base = _restrict_levels(X, n - 1)
    over = SimpMap(base, Y, f.fn, name="f")
    C = Coskeletal(base, n - 1, over=over, name="tau<%d(%s)" % (n, X.name))

    def qfn(k, x):
        if k < n:
            return x
        vals = tuple(X.restrict(k, x, s) for s in C.subsets(k))
        return ("sk", vals, f(k, x))

    def level(k):
        if k < n:
            return X.level(k)
        seen, out = set(), []
        for x in X.level(k):
            t = qfn(k, x)
            if t not in seen:
                seen.add(t)
                out.append(t)
        return out

    C._level_fn = level
    q = SimpMap(X, C, qfn, name="q<")
    proj = SimpMap(C, Y, lambda k, t: f(k, t) if k < n else t[2], name="proj")
    return TruncatedFibration(C, q, proj, "moore", n)


class _DuskinLow(FinSimpSet):
    """Levels ``<= n+1`` of the Duskin stage."""

    def __init__(self, f, n, classes, check_fillers=True):
        self.f, self.n, self.cls = f, n, classes
        self.check_fillers = check_fillers
        self._missing = {}
        self._filler_index = None
        X = f.source
        self.horn_positions = tuple(i for i in range(n + 2) if i != 1)
        super().__init__(self._level_impl, self._face_impl, self._degen_impl,
                         name="tau<=%d_low" % n)

    def _level_impl(self, k):
        X, n = self.f.source, self.n
        if k < n:
            return X.level(k)
        if k == n:
            return list(self.cls.reps)
        if k == n + 1:
            low = FinSimpSet(lambda j: self.level(j), self._face_impl, self._degen_impl, name="low")
            proj = SimpMap(low, self.f.target, lambda j, t: self.f(j, t), name="p")
            P = hom_finite(("horn", n + 1, 1), low, proj)
            return [("horn", tup, y) for tup, y in P.elements]
        raise SimplicialError("low part stops at n+1")

    def _index(self):
        if self._filler_index is None:
            X, n = self.f.source, self.n
            idx = defaultdict(list)
            for z in X.level(n + 1):
                key = (tuple(X.face(n + 1, i, z) for i in self.horn_positions), self.f(n + 1, z))
                idx[key].append(z)
            self._filler_index = idx
        return self._filler_index

    def missing_face(self, t):
        """``d_1`` of a horn element: fill in X and project to classes."""
        if t in self._missing:
            return self._missing[t]
        X, n = self.f.source, self.n
        _, tup, y = t
        idx = self._index()
        found = None
        # representatives are the class representatives themselves
        cands = idx.get((tup, y), [])
        if not cands:
            raise SimplicialError("horn has no filler; f not Kan at level %d" % (n + 1))
        vals = {self.cls(X.face(n + 1, 1, z)) for z in cands}
        if len(vals) != 1:
            raise SimplicialError("missing face not well defined across fillers")
        found = vals.pop()
        if self.check_fillers:
            # other representatives of the horn classes
            for key, zs in idx.items():
                if key[1] != y:
                    continue
                if tuple(self.cls(v) for v in key[0]) != tup:
                    continue
                for z in zs:
                    if self.cls(X.face(n + 1, 1, z)) != found:
                        raise SimplicialError("missing face depends on representatives")
        self._missing[t] = found
        return found

    def _face_impl(self, k, i, x):
        X, n = self.f.source, self.n
        if k <= n:
            return X.face(k, i, x)
        if k == n + 1:
            if i == 1:
                return self.missing_face(x)
            return x[1][self.horn_positions.index(i)]
        raise SimplicialError("face above n+1")

    def _degen_impl(self, k, j, x):
        X, n = self.f.source, self.n
        if k + 1 < n:
            return X.degen(k, j, x)
        if k + 1 == n:
            return self.cls(X.degen(k, j, x))
        if k == n:
            z = X.degen(n, j, x)
            return ("horn", tuple(self.cls(X.face(n + 1, i, z)) for i in self.horn_positions), self.f(n + 1, z))
        raise SimplicialError("degeneracy above n+1")


def duskin_truncate(f, n, check_fillers=True):
    """``tau_{<=n}(X, f)`` with ``q: X -> tau`` and the projection to ``Y``."""
    f = _as_map(f)
    X, Y = f.source, f.target
    if n is None or n == float("inf"):
        return TruncatedFibration(X, SimpMap(X, X, lambda k, x: x, "id"), f, "duskin", None)
    cls = RelBoundaryClasses(f, n)
    low = _DuskinLow(f, n, cls, check_fillers)

    def low_proj(k, t):
        if k <= n:
            return f(k, t)
        return t[2]

    over = SimpMap(low, Y, low_proj, name="p")
    T = Coskeletal(low, n + 1, over=over, name="tau<=%d(%s)" % (n, X.name))

    def qfn(k, x):
        if k < n:
            return x
        if k == n:
            return cls(x)
        if k == n + 1:
            return ("horn", tuple(cls(X.face(k, i, x)) for i in low.horn_positions), f(k, x))
        vals = tuple(qfn(n + 1, X.restrict(k, x, s)) for s in T.subsets(k))
        return ("sk", vals, f(k, x))

    q = SimpMap(X, T, qfn, name="q<=")
    proj = SimpMap(T, Y, lambda k, t: low_proj(k, t) if k <= n + 1 else t[2], name="proj")
    out = TruncatedFibration(T, q, proj, "duskin", n, classes=cls)
    out.low = low
    out.missing_face_table = low._missing
    return out


def induced_map(D, E, g):
    """Map of truncations induced by ``g: D.X -> E.X`` over a common base.

    ``D`` and ``E`` are truncations of the same kind and degree. The image
    of a simplex is computed through representatives, which ``g`` must
    respect.
    """
    n = D.n
    if D.kind == "duskin":
        X = D.q.source

        def fn(k, t):
            if k < n:
                return g(k, t)
            if k == n:
                return E.classes(g(n, t))
            if k == n + 1:
                _, tup, y = t
                return ("horn", tuple(E.classes(g(n, r)) for r in tup), y)
            vals = tuple(fn(n + 1, v) for v in t[1])
            return ("sk", vals, t[2])

        return SimpMap(D.T, E.T, fn, name="tau(g)")
    raise SimplicialError("only Duskin truncations")


def duskin_to_moore(D, M):
    """``tau_{<=n} -> tau_{<n}``: restrict to the relative ``(n-1)``-skeleton."""
    n = D.n
    T = D.T
    if n == 0:
        return SimpMap(D.T, M.T, lambda k, t: D.proj(k, t), name="tau<=0->tau<0")

    def fn(k, t):
        if k < n:
            return t
        vals = tuple(T.restrict(k, t, s) for s in M.T.subsets(k))
        return ("sk", vals, D.proj(k, t))

    return SimpMap(D.T, M.T, fn, name="tau<=%d->tau<%d" % (n, n))


def moore_to_duskin(M, D):
    """``tau_{<n+1} -> tau_{<=n}`` (``M`` of degree n+1, ``D`` of degree n)."""
    n = D.n
    cls = D.classes
    T = M.T
    hp = tuple(i for i in range(n + 2) if i != 1)

    def fn(k, t):
        if k < n:
            return t
        if k == n:
            return cls(t)
        if k == n + 1:
            return ("horn", tuple(cls(T.face(k, i, t)) for i in hp), M.proj(k, t))
        vals = tuple(fn(n + 1, T.restrict(k, t, s)) for s in D.T.subsets(k))
        return ("sk", vals, M.proj(k, t))

    return SimpMap(M.T, D.T, fn, name="tau<%d->tau<=%d" % (n + 1, n))


def is_minimal(f, up_to):
    """Minimal Kan fibration test on levels ``<= up_to``: all rel-boundary
    classes are singletons. Returns ``(bool, witness)``."""
    f = _as_map(f)
    for n in range(up_to + 1):
        c = RelBoundaryClasses(f, n)
        if not c.is_discrete():
            return False, (n, c.witness())
    return True, None


def _bijective(g, up_to):
    for k in range(up_to + 1):
        src = g.source.level(k)
        imgs = [g(k, x) for x in src]
        tgt = g.target.level_set(k)
        if len(set(imgs)) != len(imgs) or set(imgs) != tgt:
            return False, k
    return True, None


class InterleavedTower:
    """``tau<=0 X <- tau<1 X <- tau<=1 X <- ... <- tau<=depth X``."""

    def __init__(self, f, depth, up_to):
        f = _as_map(f)
        self.f, self.depth, self.up_to = f, depth, up_to
        self.duskin = {n: duskin_truncate(f, n) for n in range(depth + 1)}
        self.moore = {n: moore_truncate(f, n) for n in range(depth + 2)}
        self.down = {}   # tau<n+1 -> tau<=n
        self.minfib = {}  # tau<=n -> tau<n
        for n in range(depth + 1):
            self.down[n] = moore_to_duskin(self.moore[n + 1], self.duskin[n])
            self.minfib[n] = duskin_to_moore(self.duskin[n], self.moore[n])

    def report(self):
        from .simplicial_core import verify_map
        out = []
        for n in range(self.depth + 1):
            lvl = self.up_to
            hyp = predicate(self.down[n], "n-hypercover", lvl, n=n + 1)
            mn = is_minimal(self.minfib[n], lvl)
            row = {
                "n": n,
                "duskin_sizes": [self.duskin[n].T.size(k) for k in range(lvl + 1)],
                "moore_sizes": [self.moore[n + 1].T.size(k) for k in range(lvl + 1)],
                "down_simplicial": bool(verify_map(self.down[n], lvl)),
                "minfib_simplicial": bool(verify_map(self.minfib[n], lvl)),
                "down_hypercover": bool(hyp),
                "minfib_minimal": mn[0],
                "minfib_kan": bool(predicate(self.minfib[n], "kan", lvl)),
            }
            out.append(row)
        return out


def interleaved_tower(X, depth, up_to=None):
    return InterleavedTower(X, depth, depth + 2 if up_to is None else up_to)


def minpost_equivalence(f, depth, up_to):
    """Both sides of: minimal iff every ``tau<n+1 -> tau<=n`` is an isomorphism."""
    mn = is_minimal(f, up_to)[0]
    isos = []
    for n in range(depth + 1):
        D = duskin_truncate(f, n)
        M = moore_truncate(f, n + 1)
        isos.append(_bijective(moore_to_duskin(M, D), up_to)[0])
    return mn, all(isos), isos


def tau1_vs_nerve(X, up_to):
    """``tau<=1 X -> N(pi_1 X)`` through spines; returns (ok, group)."""
    D = duskin_truncate(X, 1)
    hg = homotopy_group(X, 1)
    G = hg.group()
    N = nerve(G, "homog")
    T = D.T

    def fn(k, t):
        return tuple(hg(T.restrict(k, t, (i, i + 1))) for i in range(k))

    g = SimpMap(T, N, fn, name="spine")
    from .simplicial_core import verify_map
    nat = bool(verify_map(g, up_to))
    bij = _bijective(g, up_to)[0]
    return nat and bij, G


def pullback(f, g):
    """``X x_Y Z`` for ``f: X -> Y`` and ``g: Z -> Y``, with both projections."""
    X, Z = f.source, g.source

    def level(k):
        idx = defaultdict(list)
        for z in Z.level(k):
            idx[g(k, z)].append(z)
        return [(x, z) for x in X.level(k) for z in idx.get(f(k, x), [])]

    P = FinSimpSet(level, lambda k, i, p: (X.face(k, i, p[0]), Z.face(k, i, p[1])),
                   lambda k, i, p: (X.degen(k, i, p[0]), Z.degen(k, i, p[1])),
                   name="%s x %s" % (X.name, Z.name))
    return P, SimpMap(P, X, lambda k, p: p[0], "pr1"), SimpMap(P, Z, lambda k, p: p[1], "pr2")


def pullback_comparison(f, g, n, up_to):
    """``tau<=n(g^* f) -> g^* tau<=n(f)``; returns True when levelwise bijective."""
    f = _as_map(f)
    P, p1, p2 = pullback(f, g)
    Dp = duskin_truncate(p2, n)
    D = duskin_truncate(f, n)
    Q, _, _ = pullback(D.proj, g)

    def fn(k, t):
        if k < n:
            return (t[0], t[1])
        if k == n:
            return (D.classes(t[0]), t[1])
        if k == n + 1:
            _, tup, z = t
            return (("horn", tuple(D.classes(r[0]) for r in tup), g(k, z)), z)
        vals = tuple(fn(n + 1, v)[0] for v in t[1])
        return (("sk", vals, g(k, t[2])), t[2])

    c = SimpMap(Dp.T, Q, fn, name="pullback comparison")
    from .simplicial_core import verify_map
    return bool(verify_map(c, up_to)) and _bijective(c, up_to)[0]
