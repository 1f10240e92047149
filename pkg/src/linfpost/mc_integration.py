"""
Maurer-Cartan calculus over polynomial differential forms on simplices.

Forms on ``Delta^m`` are polynomials in ``t_1..t_m`` with differentials
``dt_1..dt_m``; ``t_0 = 1 - sum t_i`` and ``dt_0 = -sum dt_i`` are eliminated.
Coefficients are exact fractions. ``L``-valued forms carry the total degree
``|x| - |omega|`` and brackets pick up the Koszul sign of moving forms past
algebra elements.
"""

from fractions import Fraction
from itertools import combinations
from math import factorial

from .graded_core import ONE, ZERO, GradedSpace, nullspace, rank, vaccum, vclean
from .linfty_core import LInfinityAlgebra, LInfinityError, semidirect


class FormError(ValueError):
    pass


class MCError(ValueError):
    pass


def _merge_sign(I, J):
    """Sign and sorted union of two sorted index tuples (0 if they overlap)."""
    if set(I) & set(J):
        return 0, None
    seq = list(I) + list(J)
    inv = 0
    for a in range(len(seq)):
        for b in range(a + 1, len(seq)):
            if seq[a] > seq[b]:
                inv += 1
    return (-1 if inv % 2 else 1), tuple(sorted(seq))


class PolyForm:
    """Polynomial form on ``Delta^m``: ``{(exponents, dt indices): coeff}``.

    Exponents are a length-m tuple for ``t_1..t_m``; dt indices are a sorted
    tuple drawn from ``1..m``.
    """

    __slots__ = ("m", "terms")

    def __init__(self, m, terms=None):
        self.m = m
        self.terms = {}
        for key, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                self.terms[key] = self.terms.get(key, ZERO) + c
        self.terms = {k: c for k, c in self.terms.items() if c}

    # constructors
    @classmethod
    def zero(cls, m):
        return cls(m)

    @classmethod
    def const(cls, m, c):
        return cls(m, {((0,) * m, ()): c})

    @classmethod
    def coord(cls, m, i):
        """Barycentric coordinate ``t_i``."""
        if not 0 <= i <= m:
            raise FormError("coordinate %d outside Delta^%d" % (i, m))
        if i == 0:
            out = {((0,) * m, ()): ONE}
            for j in range(1, m + 1):
                e = [0] * m
                e[j - 1] = 1
                out[(tuple(e), ())] = -ONE
            return cls(m, out)
        e = [0] * m
        e[i - 1] = 1
        return cls(m, {(tuple(e), ()): ONE})

    @classmethod
    def dcoord(cls, m, i):
        if not 0 <= i <= m:
            raise FormError("coordinate %d outside Delta^%d" % (i, m))
        if i == 0:
            return cls(m, {((0,) * m, (j,)): -ONE for j in range(1, m + 1)})
        return cls(m, {((0,) * m, (i,)): ONE})

    # arithmetic
    def _check(self, other):
        if not isinstance(other, PolyForm):
            raise FormError("expected a PolyForm")
        if other.m != self.m:
            raise FormError("dimension mismatch: Delta^%d vs Delta^%d" % (self.m, other.m))

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, ZERO) + c
        return PolyForm(self.m, out)

    def __neg__(self):
        return PolyForm(self.m, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = Fraction(c)
        return PolyForm(self.m, {k: c * v for k, v in self.terms.items()})

    def wedge(self, other):
        self._check(other)
        out = {}
        for (e1, I), c1 in self.terms.items():
            for (e2, J), c2 in other.terms.items():
                s, K = _merge_sign(I, J)
                if not s:
                    continue
                e = tuple(a + b for a, b in zip(e1, e2))
                out[(e, K)] = out.get((e, K), ZERO) + s * c1 * c2
        return PolyForm(self.m, out)

    __mul__ = wedge

    def __eq__(self, other):
        return isinstance(other, PolyForm) and self.m == other.m and self.terms == other.terms

    def __hash__(self):
        return hash((self.m, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (e, I), c in sorted(self.terms.items()):
            mon = "*".join("t%d^%d" % (i + 1, p) if p > 1 else "t%d" % (i + 1) for i, p in enumerate(e) if p)
            dts = "^".join("dt%d" % i for i in I)
            body = "*".join(x for x in (mon, dts) if x)
            parts.append("%s%s" % (c, "*" + body if body else ""))
        return " + ".join(parts)

    # grading
    def degrees(self):
        return sorted({len(I) for (_, I) in self.terms})

    def homogeneous(self, p):
        return PolyForm(self.m, {k: c for k, c in self.terms.items() if len(k[1]) == p})

    def pieces(self):
        """``[(p, homogeneous part of degree p)]``."""
        return [(p, self.homogeneous(p)) for p in self.degrees()]

    # calculus
    def d(self):
        out = {}
        for (e, I), c in self.terms.items():
            for j in range(self.m):
                if not e[j]:
                    continue
                s, K = _merge_sign((j + 1,), I)
                if not s:
                    continue
                e2 = list(e)
                e2[j] -= 1
                key = (tuple(e2), K)
                out[key] = out.get(key, ZERO) + s * c * e[j]
        return PolyForm(self.m, out)

    def evaluate(self, point):
        """Value of a 0-form at barycentric ``point`` (length m+1)."""
        if len(point) != self.m + 1:
            raise FormError("point needs %d barycentric coordinates" % (self.m + 1))
        acc = ZERO
        for (e, I), c in self.terms.items():
            if I:
                raise FormError("evaluation is for 0-forms")
            v = c
            for j, p in enumerate(e):
                if p:
                    v *= Fraction(point[j + 1]) ** p
            acc += v
        return acc

    def at_vertex(self, i):
        return self.evaluate(tuple(ONE if j == i else ZERO for j in range(self.m + 1)))

    def pullback(self, theta, k=None):
        """Pullback along the affine map of a monotone ``theta: [k] -> [m]``.

        Barycentric coordinates pull back to ``t_j = sum_{theta(i)=j} s_i``.
        """
        theta = tuple(theta)
        k = len(theta) - 1 if k is None else k
        if any(not 0 <= v <= self.m for v in theta) or list(theta) != sorted(theta):
            raise FormError("theta must be monotone into [%d]" % self.m)
        img, dimg = {}, {}
        for j in range(1, self.m + 1):
            acc, dacc = PolyForm.zero(k), PolyForm.zero(k)
            for i, v in enumerate(theta):
                if v == j:
                    acc = acc + PolyForm.coord(k, i)
                    dacc = dacc + PolyForm.dcoord(k, i)
            img[j], dimg[j] = acc, dacc
        powers = {}

        def power(j, p):
            if (j, p) not in powers:
                powers[(j, p)] = PolyForm.const(k, 1) if p == 0 else power(j, p - 1).wedge(img[j])
            return powers[(j, p)]

        out = PolyForm.zero(k)
        for (e, I), c in self.terms.items():
            t = PolyForm.const(k, c)
            for j, p in enumerate(e):
                if p:
                    t = t.wedge(power(j + 1, p))
            for i in I:
                t = t.wedge(dimg[i])
            out = out + t
        return out

    def integrate_radial(self):
        """Primitive of a 1-form by the radial homotopy from vertex 0."""
        out = {}
        for (e, I), c in self.terms.items():
            if len(I) != 1:
                raise FormError("radial primitive is for 1-forms")
            j = I[0]
            e2 = list(e)
            e2[j - 1] += 1
            key = (tuple(e2), ())
            out[key] = out.get(key, ZERO) + c / (sum(e) + 1)
        return PolyForm(self.m, out)


def coface(m, i):
    """``d^i: [m-1] -> [m]`` as a tuple."""
    return tuple(v if v < i else v + 1 for v in range(m))


def codegeneracy(m, i):
    """``s^i: [m+1] -> [m]`` as a tuple."""
    return tuple(v if v <= i else v - 1 for v in range(m + 2))


def form_calculus(op, *args):
    """``wedge(a, b)``, ``d(a)``, ``pullback(a, theta)`` by name."""
    if op == "wedge":
        a, b = args
        return a.wedge(b)
    if op == "d":
        (a,) = args
        return a.d()
    if op == "pullback":
        a, theta = args
        return a.pullback(theta)
    raise FormError("unknown form operation %r" % op)


def whitney_form(m, S):
    """Elementary Whitney form ``j! sum_i (-1)^i t_{s_i} dt_{s_0} .. ^ .. dt_{s_j}``."""
    S = tuple(S)
    j = len(S) - 1
    out = PolyForm.zero(m)
    for i, s in enumerate(S):
        t = PolyForm.coord(m, s)
        for r, u in enumerate(S):
            if r != i:
                t = t.wedge(PolyForm.dcoord(m, u))
        out = out + (t if i % 2 == 0 else -t)
    return out.scale(factorial(j))


# ---------------------------------------------------------------------------
# L-valued forms

class LForm:
    """Finite sum ``sum_x x (x) omega_x`` in ``L (x) Omega(Delta^m)``."""

    def __init__(self, space, m, comps=None):
        self.space, self.m = space, m
        self.comps = {}
        for x, w in (comps or {}).items():
            if x not in space:
                raise FormError("unknown label %r" % (x,))
            if w.m != m:
                raise FormError("dimension mismatch")
            if w:
                self.comps[x] = w

    @classmethod
    def single(cls, space, m, x, w):
        return cls(space, m, {x: w})

    def __add__(self, other):
        out = dict(self.comps)
        for x, w in other.comps.items():
            out[x] = out[x] + w if x in out else w
        return LForm(self.space, self.m, out)

    def __neg__(self):
        return LForm(self.space, self.m, {x: -w for x, w in self.comps.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return LForm(self.space, self.m, {x: w.scale(c) for x, w in self.comps.items()})

    def __eq__(self, other):
        return isinstance(other, LForm) and self.m == other.m and self.comps == other.comps

    def __bool__(self):
        return bool(self.comps)

    def __repr__(self):
        return "LForm(%s)" % ", ".join("%s (x) [%r]" % (x, w) for x, w in sorted(self.comps.items()))

    def pieces(self):
        """``[(label, form degree, homogeneous form)]``."""
        return [(x, p, w) for x, full in self.comps.items() for p, w in full.pieces()]

    def degrees(self):
        return sorted({self.space.deg(x) - p for x, p, _ in self.pieces()})

    def is_homogeneous(self, k):
        return all(d == k for d in self.degrees())

    def pullback(self, theta):
        k = len(theta) - 1
        return LForm(self.space, k, {x: w.pullback(theta) for x, w in self.comps.items()})

    def d(self):
        """``id (x) d`` with the Koszul sign ``(-1)^{|x|}``."""
        out = {}
        for x, w in self.comps.items():
            dw = w.d()
            out[x] = dw if self.space.deg(x) % 2 == 0 else -dw
        return LForm(self.space, self.m, out)

    def at_vertex(self, i):
        return vclean({x: w.at_vertex(i) for x, w in self.comps.items()})


def _tensor_multilinear(space_out, m, args, fn):
    """``sum (-1)^eps fn(x_1..x_k) (x) omega_1 ... omega_k`` over pieces."""
    expanded = [a.pieces() for a in args]
    out = {}

    def rec(i, labels, wedge, formdegs, xdegs):
        if i == len(expanded):
            eps = 0
            for a in range(len(formdegs)):
                for b in range(a + 1, len(formdegs)):
                    eps += formdegs[a] * xdegs[b]
            val = fn(labels)
            if not val:
                return
            w = wedge if eps % 2 == 0 else -wedge
            for y, c in val.items():
                t = w.scale(c)
                out[y] = out[y] + t if y in out else t
            return
        for x, p, w in expanded[i]:
            nw = w if wedge is None else wedge.wedge(w)
            if not nw:
                continue
            rec(i + 1, labels + (x,), nw, formdegs + [p], xdegs + [args[i].space.deg(x)])

    rec(0, (), None, [], [])
    return LForm(space_out, m, out)


def tensor_bracket(L, k, args):
    """``l^Omega_k`` on L-valued forms."""
    if len(args) != k:
        raise LInfinityError("l_%d needs %d arguments" % (k, k))
    m = args[0].m
    if any(a.m != m for a in args):
        raise FormError("dimension mismatch")
    out = _tensor_multilinear(L.space, m, args, lambda w: L.bracket(k, w))
    if k == 1:
        out = out + args[0].d()
    return out


def mc_sign(k):
    """Sign of the k-th term in the curvature: ``(-1)^{k(k-1)/2}``."""
    return -1 if (k * (k - 1) // 2) % 2 else 1


def _series(m, a, max_k, term):
    out = term(1, [a])
    for k in range(2, max_k + 1):
        t = term(k, [a] * k)
        if t:
            out = out + t.scale(Fraction(mc_sign(k), factorial(k)))
    return out


def termination_bound(L, a):
    """Largest arity that can contribute: brackets stop at ``max_arity``."""
    return max(1, L.max_arity)


def curvature(L, a):
    """``l_1(a) + sum_{k>=2} sign(k)/k! l_k(a, ..., a)`` for ``a`` of degree -1."""
    if not a.is_homogeneous(-1):
        raise MCError("curvature needs an element of degree -1, got degrees %r" % a.degrees())
    return _series(a.m, a, termination_bound(L, a), lambda k, xs: tensor_bracket(L, k, xs))


def is_mc(L, a):
    return not curvature(L, a)


def tensor_morphism(f, k, args):
    """``f^Omega_k``: Taylor coefficient with the same Koszul sign."""
    m = args[0].m
    return _tensor_multilinear(f.target.space, m, args, lambda w: f.component(k, w))


def pushforward(f, a):
    """``f^Omega_*(a) = f^Omega_1(a) + sum_{k>=2} sign(k)/k! f^Omega_k(a, ..., a)``."""
    if not a.is_homogeneous(-1):
        raise MCError("pushforward needs an element of degree -1")
    top = max(f.taylor) if f.taylor else 1
    if not f.taylor:
        return LForm(f.target.space, a.m)
    return _series(a.m, a, top, lambda k, xs: tensor_morphism(f, k, xs))


def tensor_linear(f, a):
    """``f_1 (x) id`` applied termwise."""
    out = {}
    for x, w in a.comps.items():
        for y, c in f.component(1, (x,)).items():
            t = w.scale(c)
            out[y] = out[y] + t if y in out else t
    return LForm(f.target.space, a.m, out)


# ---------------------------------------------------------------------------
# nilpotent Lie algebras and flat sections

def lower_central_series(g):
    """Dimensions of ``g = g^1 > g^2 > ...`` until it stabilizes."""
    labs = g.space.labels()

    def span(vecs):
        rows = [[v.get(x, ZERO) for x in labs] for v in vecs]
        return rank(rows) if rows else 0, rows

    cur = [{x: ONE} for x in labs]
    dims = [len(labs)]
    while True:
        new = []
        for x in labs:
            for v in cur:
                acc = {}
                for y, c in v.items():
                    vaccum(acc, g.bracket(2, (x, y)), c)
                acc = vclean(acc)
                if acc:
                    new.append(acc)
        r, rows = span(new)
        if r == dims[-1] or r == 0:
            dims.append(r)
            return dims
        # keep a basis
        basis = []
        for v in new:
            if span(basis + [v])[0] > len(basis):
                basis.append(v)
        cur = basis
        dims.append(r)


def nilpotency_class(g):
    """Smallest c with ``g^{c+1} = 0``; raises if ``g`` is not nilpotent."""
    if any(k != 2 for k in g.brackets) or any(d != 0 for d in g.space.degrees):
        raise MCError("expected a Lie algebra in degree 0")
    dims = lower_central_series(g)
    if dims[-1] != 0:
        raise MCError("Lie algebra is not nilpotent (central series %r)" % dims)
    return len(dims) - 1 if dims[0] else 0


def _bernoulli_plus(n):
    """Bernoulli numbers with ``B_1 = +1/2``."""
    B = [Fraction(1)]
    for k in range(1, n + 1):
        s = sum(Fraction(factorial(k + 1), factorial(j) * factorial(k + 1 - j)) * B[j] for j in range(k))
        B.append(-s / (k + 1))
    if n >= 1:
        B[1] = Fraction(1, 2)
    return B


def lie_bracket(g, X, Y):
    return tensor_bracket(g, 2, [X, Y])


def ad_power(g, X, Y, k):
    for _ in range(k):
        Y = lie_bracket(g, X, Y)
    return Y


def maurer_cartan_of(g, X, c=None):
    """``-g^{-1} dg`` for ``g = exp(X)``: ``-sum_k (-1)^k/(k+1)! ad_X^k dX``."""
    c = nilpotency_class(g) if c is None else c
    dX = X.d()
    out = LForm(g.space, X.m)
    term = dX
    for k in range(c):
        coeff = Fraction((-1) ** k, factorial(k + 1))
        out = out + term.scale(-coeff)
        term = lie_bracket(g, X, term)
    return out


def bch(g, X, Y, c=None):
    """``log(exp X exp Y)`` in a nilpotent algebra (Dynkin series up to class c)."""
    c = nilpotency_class(g) if c is None else c
    out = X + Y
    if c < 2:
        return out

    def nested(word):
        acc = word[-1]
        for w in reversed(word[:-1]):
            acc = lie_bracket(g, w, acc)
        return acc

    seen = set()
    acc = LForm(g.space, X.m)
    for seq in _dynkin_sequences(c):
        key = tuple(seq)
        if key in seen:
            continue
        seen.add(key)
        n = len(seq)
        N = sum(r + s for r, s in seq)
        if N < 2:
            continue
        word = []
        denom = 1
        for r, s in seq:
            word.extend([X] * r + [Y] * s)
            denom *= factorial(r) * factorial(s)
        coeff = Fraction((-1) ** (n - 1), n * N * denom)
        acc = acc + nested(word).scale(coeff)
    return out + acc


def _dynkin_sequences(c):
    out = []

    def rec(prefix, total):
        if prefix:
            out.append(list(prefix))
        for r in range(c + 1):
            for s in range(c + 1 - r):
                if r + s == 0 or total + r + s > c:
                    continue
                prefix.append((r, s))
                rec(prefix, total + r + s)
                prefix.pop()

    rec([], 0)
    return out


class FlatSection:
    """Based map ``Delta^m -> exp(g)`` in exponential coordinates ``X``."""

    def __init__(self, g, X, theta=None, c=None):
        self.g, self.X, self.m = g, X, X.m
        self.c = nilpotency_class(g) if c is None else c
        self.theta = theta

    def value(self, i):
        return self.X.at_vertex(i)

    def vertices(self):
        """``(g(1), ..., g(m))``: inhomogeneous nerve coordinates."""
        return tuple(self.value(i) for i in range(1, self.m + 1))

    def connection(self):
        return maurer_cartan_of(self.g, self.X, self.c)

    def round_trip(self):
        return self.theta is not None and self.connection() == self.theta

    def _const(self, vec, m):
        return LForm(self.g.space, m, {x: PolyForm.const(m, c) for x, c in vec.items()})

    def face(self, i):
        """``d_0 g = g(1)^{-1} (g o d^0)``, ``d_i g = g o d^i`` otherwise."""
        Xi = self.X.pullback(coface(self.m, i))
        if i == 0:
            inv = self._const(self.value(1), self.m - 1).scale(-1)
            Xi = bch(self.g, inv, Xi, self.c)
        th = self.theta.pullback(coface(self.m, i)) if self.theta is not None else None
        return FlatSection(self.g, Xi, th, self.c)

    def degeneracy(self, i):
        th = self.theta.pullback(codegeneracy(self.m, i)) if self.theta is not None else None
        return FlatSection(self.g, self.X.pullback(codegeneracy(self.m, i)), th, self.c)


def flat_section(g, theta, max_iter=None):
    """Unique ``g_theta`` with ``theta = -g^{-1} dg`` and ``g(vertex 0) = e``.

    Picard iteration of ``X = P(-B(ad X) theta)`` with ``P`` the radial
    primitive and ``B(z) = z / (1 - e^{-z})``; it stabilizes after at most
    ``class + 1`` rounds.
    """
    c = nilpotency_class(g)
    if not theta.is_homogeneous(-1) or any(p != 1 for _, p, _ in theta.pieces()):
        raise MCError("connection must be a g-valued 1-form")
    if not is_mc(g, theta):
        raise MCError("connection is not flat")
    B = _bernoulli_plus(c)
    X = LForm(g.space, theta.m)
    for _ in range((max_iter or c + 1) + 1):
        rhs = LForm(g.space, theta.m)
        term = theta
        for n in range(c):
            rhs = rhs + term.scale(-B[n] / factorial(n))
            term = lie_bracket(g, X, term)
        newX = LForm(g.space, theta.m, {x: w.integrate_radial() for x, w in rhs.comps.items()})
        if newX == X:
            break
        X = newX
    fs = FlatSection(g, X, theta, c)
    if not fs.round_trip():
        raise MCError("flat section does not reproduce the connection")
    return fs


def heisenberg():
    """``h_3``: ``[x, y] = z``."""
    sp = GradedSpace({0: ["x", "y", "z"]})
    return LInfinityAlgebra(sp, {2: {("x", "y"): {"z": ONE}}}, name="h3")


def upper_triangular(n, prefix="E"):
    """Strictly upper triangular ``n x n`` matrices with the commutator."""
    labs = ["%s_%d_%d" % (prefix, i, j) for i in range(n) for j in range(n) if i < j]
    br = {}
    for a in labs:
        for b in labs:
            if labs.index(a) >= labs.index(b):
                continue
            _, i, j = a.split("_")
            _, k, l = b.split("_")
            i, j, k, l = int(i), int(j), int(k), int(l)
            v = {}
            if j == k:
                v["%s_%d_%d" % (prefix, i, l)] = ONE
            if l == i:
                key = "%s_%d_%d" % (prefix, k, j)
                v[key] = v.get(key, ZERO) - 1
            v = vclean(v)
            if v:
                br[(a, b)] = v
    return LInfinityAlgebra(GradedSpace({0: labs}), {2: br} if br else {}, name="n_%d" % n)


# ---------------------------------------------------------------------------
# Dold-Kan inclusion through Whitney forms

def _subsets(m, size):
    return list(combinations(range(m + 1), size))


def _boundary(S):
    return [(S[:i] + S[i + 1:], -1 if i % 2 else 1) for i in range(len(S))]


def dk_sign(j):
    """Sign placed on the Whitney form of a j-simplex: ``(-1)^{j(j+1)/2}``."""
    return -1 if (j * (j + 1) // 2) % 2 else 1


class DoldKanLevel:
    """``K_m(V[1])``: chain maps ``N(Delta^m) -> V[1]`` (``V[1]_j = V_{j-1}``,
    differential ``-d_V``), stored as ``{simplex: vector of V}``."""

    def __init__(self, V, m):
        if not V.is_abelian():
            raise LInfinityError("expected an abelian L-infinity algebra")
        lo, _ = V.space.degree_range() if V.space.dim() else (0, 0)
        if lo < 0:
            raise LInfinityError("V must be non-negatively graded")
        self.V, self.m = V, m
        sp = V.space
        self.unknowns = []
        for size in range(2, m + 2):
            for S in _subsets(m, size):
                for x in sp.basis(size - 2):
                    self.unknowns.append((S, x))
        pos = {u: i for i, u in enumerate(self.unknowns)}
        rows = []
        dV = V.differential()
        for size in range(2, m + 2):
            for T in _subsets(m, size):
                # phi(dT) + d_V phi(T) = 0 in V_{size-3}
                for y in sp.basis(size - 3):
                    row = [ZERO] * len(self.unknowns)
                    for S, s in _boundary(T):
                        if (S, y) in pos:
                            row[pos[(S, y)]] += s
                    for x in sp.basis(size - 2):
                        c = dV({x: ONE}).get(y, ZERO)
                        if c:
                            row[pos[(T, x)]] += c
                    rows.append(row)
        n = len(self.unknowns)
        ker = nullspace(rows, n) if rows else [[ONE if i == j else ZERO for i in range(n)] for j in range(n)]
        self.basis = [self._to_map(v) for v in ker]

    def _to_map(self, v):
        phi = {}
        for (S, x), c in zip(self.unknowns, v):
            if c:
                phi.setdefault(S, {})[x] = c
        return phi

    def dim(self):
        return len(self.basis)


def iota(V, m, phi):
    """``sum_S sign(|S|-1) phi(S) (x) omega_S`` in ``V (x) Omega(Delta^m)``."""
    comps = {}
    for S, vec in phi.items():
        w = whitney_form(m, S).scale(dk_sign(len(S) - 1))
        for x, c in vec.items():
            t = w.scale(c)
            comps[x] = comps[x] + t if x in comps else t
    return LForm(V.space, m, comps)


def dk_face(phi, m, i):
    """``d_i phi = phi o N(d^i)``."""
    th = coface(m, i)
    out = {}
    for S, vec in phi.items():
        pre = [v for v in range(m) if th[v] in S]
        if len(pre) == len(S):
            out[tuple(pre)] = vec
    return out


def dk_degeneracy(phi, m, i):
    """``s_i phi = phi o N(s^i)``, zero on simplices that collapse."""
    th = codegeneracy(m, i)
    out = {}
    for size in range(1, m + 3):
        for S in _subsets(m + 1, size):
            img = tuple(th[v] for v in S)
            if len(set(img)) == len(img) and img in phi:
                out[S] = phi[img]
    return out


def dold_kan_whitney(V, m):
    """Basis of ``K_m(V[1])`` and their images under the Whitney inclusion."""
    lvl = DoldKanLevel(V, m)
    return lvl.basis, [iota(V, m, phi) for phi in lvl.basis]


def normalized_cocycle_rank(m, j):
    """``dim Z^j`` of normalized cochains on ``Delta^m``, by matrix ranks."""
    if j < 0 or j > m:
        return 0
    cj = _subsets(m, j + 1)
    cj1 = _subsets(m, j + 2)
    idx = {S: i for i, S in enumerate(cj)}
    rows = []
    for T in cj1:
        row = [ZERO] * len(cj)
        for S, s in _boundary(T):
            row[idx[S]] += s
        rows.append(row)
    return len(cj) - (rank(rows) if rows else 0)


# ---------------------------------------------------------------------------
# End(A) with EA[n] and A[n+1]

def lea_algebras(a, n, nilpotent=True):
    """``(L_E, L_B, p)`` for ``A = Q^a``: ``End(A) + (A[n+1] -> A[n])`` and
    ``End(A) + A[n+1]``. With ``nilpotent`` the endomorphisms are strictly
    upper triangular."""
    from .linfty_core import LInfinityMorphism, gl_algebra
    g = upper_triangular(a) if nilpotent else gl_algebra(a)
    mu = ["mu%d" % i for i in range(a)]
    nu = ["nu%d" % i for i in range(a)]

    def action(labels):
        act = {}
        for x in g.space.labels():
            _, i, j = x.split("_")
            i, j = int(i), int(j)
            for lab in labels:
                k = int(lab[2:])
                if k == j:
                    act[(x, lab)] = {labels[0][:2] + str(i): ONE}
        return act

    modE = GradedSpace({n: mu, n + 1: nu})
    LE = semidirect(g, modE, {**action(mu), **action(nu)},
                    differential={v: {mu[i]: ONE} for i, v in enumerate(nu)}, name="L_E")
    modB = GradedSpace({n + 1: nu})
    LB = semidirect(g, modB, action(nu), name="L_B")
    p = LInfinityMorphism.strict(LE, LB, {x: {x: ONE} for x in g.space.labels() + nu}, name="p")
    return g, LE, LB, p


def _exp_matrix(g, X, a):
    """``exp(X)`` as an ``a x a`` matrix of 0-forms (X strictly upper triangular)."""
    m = X.m
    M = [[PolyForm.zero(m) for _ in range(a)] for _ in range(a)]
    for lab, w in X.comps.items():
        _, i, j = lab.split("_")
        M[int(i)][int(j)] = M[int(i)][int(j)] + w
    out = [[PolyForm.const(m, 1 if i == j else 0) for j in range(a)] for i in range(a)]
    power = [row[:] for row in out]
    for k in range(1, a):
        power = [[sum((power[i][r].wedge(M[r][j]) for r in range(a)), PolyForm.zero(m))
                  for j in range(a)] for i in range(a)]
        for i in range(a):
            for j in range(a):
                out[i][j] = out[i][j] + power[i][j].scale(Fraction(1, factorial(k)))
    return out


def act_forms(Mat, forms):
    """Matrix of 0-forms acting on a list of A-valued form components."""
    a = len(forms)
    m = forms[0].m
    return [sum((Mat[i][j].wedge(forms[j]) for j in range(a)), PolyForm.zero(m)) for i in range(a)]


def _components(elem, labels):
    return [elem.comps.get(x, PolyForm.zero(elem.m)) for x in labels]


class LEAImages:
    def __init__(self, psi, phi, section, checks):
        self.psi, self.phi, self.section, self.checks = psi, phi, section, checks

    @property
    def ok(self):
        return all(self.checks.values())


def lea_maps(a, n, theta, mu, nu):
    """Images ``(g mu, g(1..m))`` and ``(g nu, g(1..m))`` for ``(theta, mu, nu)``.

    ``theta`` is an ``n_a``-valued LForm, ``mu`` and ``nu`` are lists of
    ``a`` forms of degree ``n+1`` and ``n+2``. Checks the Maurer-Cartan
    conditions both through the brackets and in de Rham form, and that the
    square with the signed de Rham map commutes.
    """
    g, LE, LB, p = lea_algebras(a, n)
    m = theta.m
    mu_l = ["mu%d" % i for i in range(a)]
    nu_l = ["nu%d" % i for i in range(a)]
    full = LForm(LE.space, m, {**theta.comps, **dict(zip(mu_l, mu)), **dict(zip(nu_l, nu))})
    if not is_mc(LE, full):
        raise MCError("(theta, mu, nu) is not Maurer-Cartan")
    sec = flat_section(g, theta)
    G = _exp_matrix(g, sec.X, a)
    gmu, gnu = act_forms(G, mu), act_forms(G, nu)
    sign = -1 if (n + 1) % 2 else 1
    verts = tuple(tuple(tuple(G[i][j].at_vertex(v) for j in range(a)) for i in range(a))
                  for v in range(1, m + 1))
    checks = {
        "de_rham_closed": all(not w.d() for w in gnu),
        "de_rham_relation": all(w.d().scale(sign) == z for w, z in zip(gmu, gnu)),
    }
    base = LForm(LB.space, m, {**theta.comps, **dict(zip(nu_l, nu))})
    checks["projection_is_mc"] = is_mc(LB, base)
    checks["projection_matches"] = pushforward(p, full) == base
    psi = (gmu, verts)
    phi = (gnu, verts)
    checks["square_commutes"] = [w.d().scale(sign) for w in psi[0]] == phi[0] and psi[1] == phi[1]
    return LEAImages(psi, phi, sec, checks)


def compatible_nu(a, n, theta, mu):
    """``nu = (-1)^{n+1} g^{-1} d(g mu)`` so that ``(theta, mu, nu)`` is MC."""
    g = upper_triangular(a)
    sec = flat_section(g, theta)
    G = _exp_matrix(g, sec.X, a)
    Ginv = _exp_matrix(g, sec.X.scale(-1), a)
    sign = -1 if (n + 1) % 2 else 1
    dg = [w.d().scale(sign) for w in act_forms(G, mu)]
    return act_forms(Ginv, dg)
