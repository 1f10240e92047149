"""
L-infinity algebras and their morphisms.

Brackets are stored sparsely on sorted basis multi-indices. Evaluating on an
unsorted tuple multiplies by the graded skew sign of the sort, so skew
symmetry holds by construction.
"""

from fractions import Fraction
from itertools import combinations_with_replacement

from .graded_core import (
    ONE, ZERO, ChainComplex, GradedError, GradedLinearMap, GradedSpace,
    as_scalar, homology, matmul, nullspace, quotient_coords, rank, solve,
    skew_sign, sort_with_sign, span_rref, unshuffles, vaccum, vadd, vclean,
    vscale,
)


class LInfinityError(ValueError):
    pass


def normalize_multilinear(space, table, shift_of_arity, skew=True):
    """Bring a table ``{k: {tuple: vector}}`` into sorted normal form.

    ``shift_of_arity(k)`` is the degree of the k-ary map. Entries on unsorted
    tuples are moved to their sorted representative with the skew sign.
    """
    out = {}
    order = space.index
    for k, entries in table.items():
        k = int(k)
        shift = shift_of_arity(k)
        acc = {}
        for key, vec in entries.items():
            key = tuple(key)
            if len(key) != k:
                raise LInfinityError("arity %d entry has %d inputs" % (k, len(key)))
            degs = [space.deg(x) for x in key]
            want = sum(degs) + shift
            skey, sign = sort_with_sign(key, degs, order, skew=skew)
            for t, c in vec.items():
                c = as_scalar(c)
                if c == 0:
                    continue
                if space.deg(t) != want:
                    raise LInfinityError("entry %r -> %r has wrong degree (map degree %d)" % (key, t, shift))
                if sign == 0:
                    raise LInfinityError("entry %r is forced to vanish by skew symmetry" % (key,))
                slot = acc.setdefault(skey, {})
                slot[t] = slot.get(t, ZERO) + sign * c
        acc = {kk: vclean(v) for kk, v in acc.items()}
        acc = {kk: v for kk, v in acc.items() if v}
        if acc:
            out[k] = acc
    return out


def basis_words(space, k, skew=True):
    """Sorted basis multi-indices of length ``k`` that are not forced to vanish."""
    labels = space.labels()
    out = []
    for w in combinations_with_replacement(labels, k):
        ok = True
        for a, b in zip(w, w[1:]):
            if a == b and (space.deg(a) % 2 == 0) == skew:
                ok = False
                break
        if ok:
            out.append(w)
    return out


class LInfinityAlgebra:
    """Finite-type L-infinity algebra with sparse brackets ``l_k`` of degree ``k-2``."""

    def __init__(self, space, brackets=None, name=None, lie_n=None):
        self.space = space
        self.brackets = normalize_multilinear(space, brackets or {}, lambda k: k - 2)
        self.name = name or "L"
        if lie_n is not None:
            lo, hi = space.degree_range()
            if space.dim() and (lo < 0 or hi > lie_n - 1):
                raise LInfinityError("Lie %d-algebra must live in degrees [0, %d]" % (lie_n, lie_n - 1))
        self.lie_n = lie_n

    def __repr__(self):
        return "LInfinityAlgebra(%s, %r, arities=%s)" % (self.name, self.space, sorted(self.brackets))

    @property
    def max_arity(self):
        return max(self.brackets) if self.brackets else 0

    def bracket(self, k, word):
        """``l_k`` on a tuple of basis labels (any order)."""
        table = self.brackets.get(k)
        if not table:
            return {}
        degs = [self.space.deg(x) for x in word]
        skey, sign = sort_with_sign(tuple(word), degs, self.space.index, skew=True)
        if sign == 0:
            return {}
        v = table.get(skey)
        if not v:
            return {}
        return v if sign == 1 else vscale(sign, v)

    def ell(self, k, *vectors):
        """Multilinear evaluation of ``l_k`` on sparse vectors."""
        if len(vectors) != k:
            raise LInfinityError("l_%d needs %d arguments" % (k, k))
        if k not in self.brackets:
            return {}
        out = {}

        def rec(i, word, coeff):
            if i == k:
                vaccum(out, self.bracket(k, word), coeff)
                return
            for lab, c in vectors[i].items():
                rec(i + 1, word + (lab,), coeff * c)

        rec(0, (), ONE)
        return vclean(out)

    def differential(self):
        ent = {}
        for (x,), v in self.brackets.get(1, {}).items():
            ent[x] = v
        return GradedLinearMap(self.space, self.space, -1, ent)

    def complex(self, check=True):
        return ChainComplex(self.space, self.differential(), check=check)

    def is_abelian(self):
        return all(k == 1 for k in self.brackets)

    def same_as(self, other):
        return self.space == other.space and self.brackets == other.brackets


class LInfinityMorphism:
    """Weak morphism with Taylor coefficients ``f_k`` of degree ``k-1``."""

    def __init__(self, source, target, taylor=None, name=None):
        self.source = source
        self.target = target
        self.taylor = _normalize_cross(source.space, target.space, taylor or {}, lambda k: k - 1)
        self.name = name or "f"

    def component(self, k, word):
        table = self.taylor.get(k)
        if not table:
            return {}
        degs = [self.source.space.deg(x) for x in word]
        skey, sign = sort_with_sign(tuple(word), degs, self.source.space.index, skew=True)
        if sign == 0:
            return {}
        v = table.get(skey)
        if not v:
            return {}
        return v if sign == 1 else vscale(sign, v)

    def apply(self, k, *vectors):
        out = {}

        def rec(i, word, coeff):
            if i == k:
                vaccum(out, self.component(k, word), coeff)
                return
            for lab, c in vectors[i].items():
                rec(i + 1, word + (lab,), coeff * c)

        rec(0, (), ONE)
        return vclean(out)

    def linear(self):
        ent = {x: v for (x,), v in self.taylor.get(1, {}).items()}
        return GradedLinearMap(self.source.space, self.target.space, 0, ent)

    def is_strict(self):
        return all(k == 1 for k in self.taylor)

    @staticmethod
    def identity(L):
        return LInfinityMorphism(L, L, {1: {(x,): {x: ONE} for x in L.space.labels()}}, name="id")

    @staticmethod
    def strict(source, target, linear_map, name=None):
        """Strict morphism from ``{label: vector}`` or a GradedLinearMap."""
        ent = linear_map.entries if isinstance(linear_map, GradedLinearMap) else linear_map
        return LInfinityMorphism(source, target, {1: {(x,): v for x, v in ent.items() if v}}, name=name)


def _normalize_cross(src, tgt, table, shift_of_arity):
    out = {}
    for k, entries in table.items():
        k = int(k)
        shift = shift_of_arity(k)
        acc = {}
        for key, vec in entries.items():
            key = tuple(key)
            if len(key) != k:
                raise LInfinityError("arity mismatch in Taylor component")
            degs = [src.deg(x) for x in key]
            want = sum(degs) + shift
            skey, sign = sort_with_sign(key, degs, src.index, skew=True)
            for t, c in vec.items():
                c = as_scalar(c)
                if c == 0:
                    continue
                if tgt.deg(t) != want:
                    raise LInfinityError("component %r -> %r violates degree %d" % (key, t, shift))
                if sign == 0:
                    raise LInfinityError("entry %r is forced to vanish by skew symmetry" % (key,))
                slot = acc.setdefault(skey, {})
                slot[t] = slot.get(t, ZERO) + sign * c
        acc = {kk: vclean(v) for kk, v in acc.items()}
        acc = {kk: v for kk, v in acc.items() if v}
        if acc:
            out[k] = acc
    return out


# ---------------------------------------------------------------------------
# Jacobi identities

def check_brackets_degrees(L):
    for k, table in L.brackets.items():
        for key, v in table.items():
            want = sum(L.space.deg(x) for x in key) + k - 2
            for t in v:
                if L.space.deg(t) != want:
                    raise LInfinityError("bracket l_%d%r has degree violation" % (k, key))


def jacobiator(L, word):
    """Left side of the m-th generalized Jacobi identity on a basis word."""
    m = len(word)
    degs = [L.space.deg(x) for x in word]
    out = {}
    for i in range(1, m + 1):
        j = m + 1 - i
        if i not in L.brackets or j not in L.brackets:
            continue
        outer = ONE if (i * (j - 1)) % 2 == 0 else -ONE
        for sigma in unshuffles(i, m - i):
            s = skew_sign(sigma, degs) * outer
            w = sigma.apply(word)
            inner = L.bracket(i, w[:i])
            if not inner:
                continue
            rest = w[i:]
            for lab, c in inner.items():
                vaccum(out, L.bracket(j, (lab,) + rest), s * c)
    return vclean(out)


def check_jacobi(L, up_to):
    """Residuals of the Jacobi identities for arities ``1..up_to``.

    Returns ``{m: {word: defect}}`` with only nonzero defects; an empty inner
    dict means the m-th identity holds.
    """
    if up_to < 1:
        raise LInfinityError("up_to must be >= 1")
    check_brackets_degrees(L)
    lo, hi = L.space.degree_range()
    res = {}
    for m in range(1, up_to + 1):
        bad = {}
        for w in basis_words(L.space, m):
            outdeg = sum(L.space.deg(x) for x in w) + m - 3
            if outdeg < lo or outdeg > hi:
                continue
            r = jacobiator(L, w)
            if r:
                bad[w] = r
        res[m] = bad
    return res


def jacobi_ok(L, up_to):
    return all(not v for v in check_jacobi(L, up_to).values())


# ---------------------------------------------------------------------------
# morphisms

def check_morphism(f, up_to):
    """Residuals of the morphism equations, arity ``1..up_to``.

    The equations are evaluated through the Chevalley-Eilenberg encoding:
    the arity-m residual is the projection to the cogenerators of
    ``delta' F - F delta`` on words of length m.
    """
    from .ce_coalgebra import morphism_residuals
    return morphism_residuals(f, up_to)


def morphism_ok(f, up_to):
    return all(not v for v in check_morphism(f, up_to).values())


def strict_morphism_residuals(f, up_to):
    """Direct check for strict morphisms: ``f1 l_k = l'_k(f1, ..., f1)``."""
    if not f.is_strict():
        raise LInfinityError("morphism is not strict")
    f1 = f.linear()
    res = {}
    for k in range(1, up_to + 1):
        bad = {}
        for w in basis_words(f.source.space, k):
            lhs = f1(f.source.bracket(k, w))
            rhs = f.target.ell(k, *[f1({x: ONE}) for x in w])
            r = vadd(lhs, vscale(-1, rhs))
            if r:
                bad[w] = r
        res[k] = bad
    return res


def compose_strict(g, f):
    return LInfinityMorphism.strict(f.source, g.target, g.linear().compose(f.linear()).entries)


# ---------------------------------------------------------------------------
# homology with brackets

class HomologyData:
    """Homology of the underlying complex with coordinates for cycles."""

    def __init__(self, L):
        self.algebra = L
        self.complex = L.complex()
        self.h = homology(self.complex)
        self.labels = {}
        for d, (n, reps) in self.h.items():
            self.labels[d] = ["H%d_%d" % (d, i) for i in range(n)]

    def dim(self, d):
        return self.h.get(d, (0, []))[0]

    def reps(self, d):
        return self.h.get(d, (0, []))[1]

    def coords(self, d, cycle):
        """Coordinates of the class of ``cycle`` in the chosen basis."""
        sp = self.algebra.space
        basis = sp.basis(d)
        reps = self.reps(d)
        bnds = [self.complex.d({u: ONE}) for u in sp.basis(d + 1)]
        bnds = [b for b in bnds if b]
        cols = reps + bnds
        if not cols:
            if any(cycle.get(x, 0) for x in basis):
                raise LInfinityError("vector is not a combination of cycles")
            return []
        mat = [[c.get(x, ZERO) for c in cols] for x in basis]
        sol = solve(mat, [cycle.get(x, ZERO) for x in basis])
        if sol is None:
            raise LInfinityError("vector is not a cycle")
        return sol[:len(reps)]

    def space(self):
        return GradedSpace(self.labels)

    def lie_bracket_table(self):
        """Bracket induced by l_2 on H_0, in class coordinates."""
        L = self.algebra
        reps = self.reps(0)
        n = len(reps)
        table = {}
        for i in range(n):
            for j in range(n):
                v = L.ell(2, reps[i], reps[j])
                table[(i, j)] = self.coords(0, v) if n else []
        return table


def homology_map(f, HL=None, HM=None):
    """Matrices of ``H(f_1)`` per degree, in the chosen homology bases."""
    HL = HL or HomologyData(f.source)
    HM = HM or HomologyData(f.target)
    f1 = f.linear()
    out = {}
    degs = set(HL.h) | set(HM.h)
    for d in sorted(degs):
        cols = [HM.coords(d, f1(r)) for r in HL.reps(d)]
        rows = HM.dim(d)
        out[d] = [[cols[j][i] for j in range(len(cols))] for i in range(rows)]
    return out, HL, HM


def tangent(f):
    """``(f_1, H(f_1))`` together with the bracket tables on H_0."""
    hmap, HL, HM = homology_map(f)
    return {
        "chain_map": f.linear(),
        "homology_map": hmap,
        "source_homology": HL,
        "target_homology": HM,
        "source_h0_bracket": HL.lie_bracket_table(),
        "target_h0_bracket": HM.lie_bracket_table(),
    }


def _surjective(mat, rows):
    return rank(mat) == rows if rows else True


def _injective(mat, cols):
    return rank(mat) == cols if cols else True


class MorphismReport:
    FLAGS = ("strict", "isomorphism", "quasi_isomorphism", "fibration",
             "quasi_split", "acyclic_fibration", "minimal_fibration")

    def __init__(self, **flags):
        for k in self.FLAGS:
            setattr(self, k, bool(flags.get(k, False)))
        self.residuals = flags.get("residuals", {})
        self.splitting = flags.get("splitting")

    def as_dict(self):
        return {k: getattr(self, k) for k in self.FLAGS}

    def __repr__(self):
        on = [k for k in self.FLAGS if getattr(self, k)]
        return "MorphismReport(%s)" % ", ".join(on)


def classify_morphism(f, up_to=None):
    """Decide the standard morphism classes by exact rank computations."""
    src, tgt = f.source.space, f.target.space
    f1 = f.linear()
    degs = sorted(set(src.degrees) | set(tgt.degrees))
    iso = True
    fib = True
    for d in degs:
        mat = f1.matrix(d)
        r = rank(mat) if mat and mat[0] else 0
        if r != tgt.dim(d) or r != src.dim(d):
            iso = False
        if d >= 1 and r != tgt.dim(d):
            fib = False
    hmap, HL, HM = homology_map(f)
    qiso = True
    hsurj = True
    for d in sorted(set(HL.h) | set(HM.h)):
        mat = hmap.get(d, [])
        rows, cols = HM.dim(d), HL.dim(d)
        r = rank(mat) if rows and cols else 0
        if r != rows:
            hsurj = False
            qiso = False
        if r != cols:
            qiso = False
    # minimality: l_1 vanishes on ker f_1
    minimal = fib and _kernel_differential_zero(f)
    split = None
    qsplit = False
    if fib and hsurj:
        split = _lie_splitting(f, HL, HM, hmap.get(0, []))
        qsplit = split is not None
    return MorphismReport(
        strict=f.is_strict(), isomorphism=iso, quasi_isomorphism=qiso,
        fibration=fib, quasi_split=qsplit, acyclic_fibration=fib and qiso,
        minimal_fibration=minimal, splitting=split,
    )


def _kernel_vectors(lin, space, d, tgt):
    basis = space.basis(d)
    if not basis:
        return []
    mat = lin.matrix(d)
    if not mat:
        mat = []
    ns = nullspace(mat, len(basis)) if mat else nullspace([], len(basis))
    return [vclean({basis[i]: x[i] for i in range(len(basis))}) for x in ns]


def _kernel_differential_zero(f):
    src = f.source.space
    f1 = f.linear()
    d = f.source.differential()
    for deg in src.degrees:
        for v in _kernel_vectors(f1, src, deg, f.target.space):
            if d(v):
                return False
    return True


def _lie_splitting(f, HL, HM, h0):
    """Search a Lie section ``s`` of ``H_0(f)`` whose image commutes with the kernel.

    Writing ``s = s0 + t`` with ``s0`` a fixed linear section and ``t``
    valued in the kernel, the two conditions are linear in ``t``.
    Returns the section matrix (columns = images of H_0(L') basis) or None.
    """
    n, p = HL.dim(0), HM.dim(0)
    if p == 0:
        return []
    if n == 0:
        return None
    A = h0  # p x n
    # linear section s0: solve A s0_j = e_j
    s0 = []
    for j in range(p):
        sol = solve(A, [ONE if i == j else ZERO for i in range(p)])
        if sol is None:
            return None
        s0.append(sol)
    K = nullspace(A, n)  # kernel basis, vectors of length n
    br = HL.lie_bracket_table()
    brM = HM.lie_bracket_table()

    def lb(u, v):
        out = [ZERO] * n
        for i in range(n):
            if u[i] == 0:
                continue
            for j in range(n):
                if v[j] == 0:
                    continue
                c = u[i] * v[j]
                for r, x in enumerate(br[(i, j)]):
                    out[r] += c * x
        return out

    if not K:
        # s0 is unique; just test it
        for a in range(p):
            for b in range(p):
                lhs = [sum((s0[c][r] * brM[(a, b)][c] for c in range(p)), ZERO) for r in range(n)]
                if lhs != lb(s0[a], s0[b]):
                    return None
        return [list(col) for col in s0]
    q = len(K)
    # unknowns t[b][c]: t(e_b) = sum_c t[b][c] K[c]
    nun = p * q

    def idx(b, c):
        return b * q + c

    rows, rhs = [], []
    # (i) [k, s0 b + t b] = 0 for each kernel basis k and b
    for k in K:
        for b in range(p):
            base = lb(k, s0[b])
            coeffs = [lb(k, K[c]) for c in range(q)]
            for r in range(n):
                row = [ZERO] * nun
                for c in range(q):
                    row[idx(b, c)] = coeffs[c][r]
                rows.append(row)
                rhs.append(-base[r])
    # (ii) s0[a,b] + t[a,b] = [s0 a, s0 b] + [s0 a, t b]
    for a in range(p):
        for b in range(p):
            ab = brM[(a, b)]
            lhs0 = [sum((ab[c] * s0[c][r] for c in range(p)), ZERO) for r in range(n)]
            target = lb(s0[a], s0[b])
            adk = [lb(s0[a], K[c]) for c in range(q)]
            for r in range(n):
                row = [ZERO] * nun
                for c2 in range(p):
                    if ab[c2] == 0:
                        continue
                    for c in range(q):
                        row[idx(c2, c)] += ab[c2] * K[c][r]
                for c in range(q):
                    row[idx(b, c)] -= adk[c][r]
                rows.append(row)
                rhs.append(target[r] - lhs0[r])
    sol = solve(rows, rhs)
    if sol is None:
        return None
    sec = []
    for b in range(p):
        col = list(s0[b])
        for c in range(q):
            t = sol[idx(b, c)]
            if t:
                col = [x + t * y for x, y in zip(col, K[c])]
        sec.append(col)
    return sec


# ---------------------------------------------------------------------------
# constructions

def subalgebra(L, vectors, prefix="k", name=None):
    """Restrict brackets to the span of homogeneous ``vectors``.

    Returns ``(K, incl)`` where ``incl[label]`` is the vector of the new basis
    element in ``L``. Raises if the span is not closed under the brackets.
    """
    by_deg = {}
    for v in vectors:
        d = L.space.vdeg(v)
        if d is None:
            continue
        by_deg.setdefault(d, []).append(v)
    degs, incl = {}, {}
    coord = {}
    n = 0
    for d in sorted(by_deg):
        basis = L.space.basis(d)
        rows, piv = span_rref(by_deg[d], basis)
        vecs = [vclean(dict(zip(basis, r))) for r in rows]
        labs = []
        for v in vecs:
            lab = "%s%d" % (prefix, n)
            n += 1
            labs.append(lab)
            incl[lab] = v
        degs[d] = labs
        coord[d] = (basis, rows, piv, labs)
    K = GradedSpace(degs)

    def to_coords(v):
        if not v:
            return {}
        d = L.space.vdeg(v)
        if d not in coord:
            raise LInfinityError("subspace is not closed under the brackets")
        basis, rows, piv, labs = coord[d]
        out = {}
        for row, p, lab in zip(rows, piv, labs):
            c = v.get(basis[p], ZERO)
            if c:
                out[lab] = c
        recon = {}
        for lab, c in out.items():
            vaccum(recon, incl[lab], c)
        if vclean(recon) != vclean(v):
            raise LInfinityError("subspace is not closed under the brackets")
        return out

    br = {}
    for k in L.brackets:
        table = {}
        for w in basis_words(K, k):
            val = L.ell(k, *[incl[x] for x in w])
            if val:
                table[w] = to_coords(val)
        if table:
            br[k] = table
    return LInfinityAlgebra(K, br, name=name or (L.name + "_sub")), incl, to_coords


def quotient_algebra(L, vectors, name=None):
    """Quotient by the span of ``vectors`` (must be an L-infinity ideal).

    Basis of the quotient: the non-pivot labels of each degree. Returns
    ``(Q, proj)`` with ``proj`` a GradedLinearMap ``L -> Q``.
    """
    by_deg = {}
    for v in vectors:
        d = L.space.vdeg(v)
        if d is not None:
            by_deg.setdefault(d, []).append(v)
    degs, proj = {}, {}
    for d, labs in L.space.degrees.items():
        kept, pr = quotient_coords(by_deg.get(d, []), labs)
        degs[d] = kept
        proj.update(pr)
    Qs = GradedSpace(degs)
    P = GradedLinearMap(L.space, Qs, 0, proj)
    br = {}
    for k in L.brackets:
        table = {}
        for w in basis_words(Qs, k):
            val = P(L.bracket(k, w))
            if val:
                table[w] = val
        if table:
            br[k] = table
    Qa = LInfinityAlgebra(Qs, br, name=name or (L.name + "_quot"))
    # ideal check: brackets with an ideal element must project to zero
    for k in L.brackets:
        for d, vs in by_deg.items():
            for v in vs:
                for w in basis_words(L.space, k - 1):
                    val = L.ell(k, v, *[{x: ONE} for x in w])
                    if P(val):
                        raise LInfinityError("span is not an ideal")
    return Qa, P


def kernel_ideal(f):
    """The kernel of a strict morphism with the restricted brackets."""
    if not f.is_strict():
        raise LInfinityError("kernel_ideal needs a strict morphism")
    f1 = f.linear()
    vecs = []
    for d in f.source.space.degrees:
        vecs.extend(_kernel_vectors(f1, f.source.space, d, f.target.space))
    K, incl, _ = subalgebra(f.source, vecs, prefix="ker", name="ker(%s)" % f.name)
    return K, incl


def product(L, M, name=None):
    """Componentwise product; labels must be disjoint."""
    if set(L.space.labels()) & set(M.space.labels()):
        raise LInfinityError("product needs disjoint labels")
    sp = L.space.direct_sum(M.space)
    br = {}
    for A in (L, M):
        for k, t in A.brackets.items():
            br.setdefault(k, {}).update(t)
    P = LInfinityAlgebra(sp, br, name=name or "%s x %s" % (L.name, M.name))
    pL = LInfinityMorphism.strict(P, L, {x: {x: ONE} for x in L.space.labels()}, name="pr1")
    pM = LInfinityMorphism.strict(P, M, {x: {x: ONE} for x in M.space.labels()}, name="pr2")
    return P, pL, pM


def zero_algebra():
    return LInfinityAlgebra(GradedSpace({}), {}, name="0")


def relabel(L, mapping, name=None):
    sp = GradedSpace({d: [mapping.get(x, x) for x in labs] for d, labs in L.space.degrees.items()})
    br = {k: {tuple(mapping.get(x, x) for x in w): {mapping.get(t, t): c for t, c in v.items()}
              for w, v in t.items()} for k, t in L.brackets.items()}
    return LInfinityAlgebra(sp, br, name=name or L.name)


def semidirect(g, module_space, action, differential=None, name=None):
    """Strict L-infinity algebra ``C // g`` of a Lie algebra and a dg module.

    ``g`` is an LInfinityAlgebra concentrated in degree 0 with only ``l_2``.
    ``action[(x, c)]`` is the vector ``x . c`` in ``module_space``;
    ``differential`` maps module labels to module vectors (degree -1).
    """
    if any(k != 2 for k in g.brackets) or any(d != 0 for d in g.space.degrees):
        raise LInfinityError("semidirect needs a Lie algebra in degree 0")
    dC = differential or {}
    dmap = GradedLinearMap(module_space, module_space, -1, dC)
    ChainComplex(module_space, dmap)
    act = {}
    for (x, c), v in action.items():
        act[(x, c)] = vclean({t: as_scalar(s) for t, s in v.items()})

    def a(x, cvec):
        out = {}
        for c, s in cvec.items():
            vaccum(out, act.get((x, c), {}), s)
        return vclean(out)

    # module axioms
    for x in g.space.labels():
        for c in module_space.labels():
            lhs = dmap(a(x, {c: ONE}))
            rhs = a(x, dmap({c: ONE}))
            if vadd(lhs, vscale(-1, rhs)):
                raise LInfinityError("action does not commute with the differential")
            for y in g.space.labels():
                xy = g.bracket(2, (x, y))
                lhs = {}
                for z, s in xy.items():
                    vaccum(lhs, a(z, {c: ONE}), s)
                rhs = vadd(a(x, a(y, {c: ONE})), vscale(-1, a(y, a(x, {c: ONE}))))
                if vadd(vclean(lhs), vscale(-1, rhs)):
                    raise LInfinityError("action does not respect the bracket")
    sp = g.space.direct_sum(module_space)
    br = {2: dict(g.brackets.get(2, {}))}
    for (x, c), v in act.items():
        if v:
            br[2][(x, c)] = v
    if dC:
        br[1] = {(c,): v for c, v in dC.items() if v}
    return LInfinityAlgebra(sp, br, name=name or "%s//%s" % ("C", g.name))


def gl_algebra(n, prefix="E"):
    """``End(k^n)`` with matrix-unit basis ``E_i_j`` and commutator bracket."""
    labs = ["%s_%d_%d" % (prefix, i, j) for i in range(n) for j in range(n)]
    br = {}
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    v = {}
                    if j == k:
                        v["%s_%d_%d" % (prefix, i, l)] = v.get("%s_%d_%d" % (prefix, i, l), ZERO) + 1
                    if l == i:
                        key = "%s_%d_%d" % (prefix, k, j)
                        v[key] = v.get(key, ZERO) - 1
                    v = vclean(v)
                    a, b = "%s_%d_%d" % (prefix, i, j), "%s_%d_%d" % (prefix, k, l)
                    if v and labs.index(a) < labs.index(b):
                        br[(a, b)] = v
    return LInfinityAlgebra(GradedSpace({0: labs}), {2: br}, name="End(A)")
