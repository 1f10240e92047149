"""
Postnikov towers of L-infinity algebras, relative towers of minimal
fibrations, universal fibrations and k-invariants.
"""

from fractions import Fraction

from .ce_coalgebra import (
    CoalgMorphism, Coderivation, CoalgebraBundle, FiberCoalgebra, ce_decode,
    ce_encode, coalgebra_residuals, compose, identity_morphism, morphism_decode,
    morphism_encode, sym_normal, sym_words, twisting_from_bundle, word_degree,
)
from .graded_core import (
    ONE, ZERO, GradedLinearMap, GradedSpace, inverse, nullspace,
    quotient_coords, solve, span_rref, vaccum, vclean, vscale,
)
from .linfty_core import (
    LInfinityAlgebra, LInfinityError, LInfinityMorphism, basis_words,
    check_jacobi, classify_morphism, kernel_ideal, morphism_ok,
    product, zero_algebra,
)
from .corpus import a_labels, lba, lea


class PostnikovError(ValueError):
    pass


# ---------------------------------------------------------------------------
# absolute truncations

def _quotient_top(L, m, sub, name):
    """Keep degrees < m, replace degree m by ``L_m / span(sub)``, drop the rest."""
    sp = L.space
    labs_m = sp.basis(m)
    kept, proj_m = quotient_coords(sub, labs_m)
    degs = {d: list(v) for d, v in sp.degrees.items() if d < m}
    if kept:
        degs[m] = kept
    T = GradedSpace(degs)
    ent = {}
    for x in sp.labels():
        d = sp.deg(x)
        if d < m:
            ent[x] = {x: ONE}
        elif d == m:
            if proj_m[x]:
                ent[x] = proj_m[x]
    P = GradedLinearMap(sp, T, 0, ent)
    br = {}
    for k in L.brackets:
        table = {}
        for w in basis_words(T, k):
            v = P(L.bracket(k, w))
            if v:
                table[w] = v
        if table:
            br[k] = table
    TL = LInfinityAlgebra(T, br, name=name)
    return TL, LInfinityMorphism.strict(L, TL, P, name="p_" + name)


def boundaries(L, m):
    d = L.differential()
    return [v for v in (d({u: ONE}) for u in L.space.basis(m + 1)) if v]


def cycles(L, m):
    basis = L.space.basis(m)
    if not basis:
        return []
    d = L.differential()
    mat = d.matrix(m)
    ns = nullspace(mat, len(basis)) if mat else nullspace([], len(basis))
    return [vclean({basis[i]: x[i] for i in range(len(basis))}) for x in ns]


def truncate(L, m, flavor="<="):
    """``tau_{<=m} L`` (degree m is ``coker d_{m+1}``) or ``tau_{<m} L``
    (degree m is ``L_m / ker d_m``, identified with ``im d_m`` by ``d``).

    Returns ``(T, p)`` with ``p: L -> T`` the strict projection.
    """
    if m < 0:
        raise PostnikovError("m must be >= 0")
    if flavor in ("<=", "le"):
        return _quotient_top(L, m, boundaries(L, m), "tau<=%d" % m)
    if flavor in ("<", "lt"):
        return _quotient_top(L, m, cycles(L, m), "tau<%d" % m)
    raise PostnikovError("unknown flavor %r" % flavor)


def _strict_between(S, T, rule):
    ent = {}
    for x in S.space.labels():
        v = rule(x)
        if v:
            ent[x] = v
    return LInfinityMorphism.strict(S, T, ent)


def q_le(L, m, Tle=None, Tlt=None):
    """``q_{<=m}: tau_{<=m} L -> tau_{<m} L``."""
    Tle = Tle or truncate(L, m, "<=")[0]
    Tlt = Tlt or truncate(L, m, "<")[0]
    _, proj = quotient_coords(cycles(L, m), L.space.basis(m))

    def rule(x):
        if Tle.space.deg(x) == m:
            return proj[x]
        return {x: ONE}

    f = _strict_between(Tle, Tlt, rule)
    f.name = "q<=%d" % m
    return f


def q_lt(L, m, Tlt1=None, Tle=None):
    """``q_{<m+1}: tau_{<m+1} L -> tau_{<=m} L``."""
    Tlt1 = Tlt1 or truncate(L, m + 1, "<")[0]
    Tle = Tle or truncate(L, m, "<=")[0]
    _, proj = quotient_coords(boundaries(L, m), L.space.basis(m))

    def rule(x):
        d = Tlt1.space.deg(x)
        if d < m:
            return {x: ONE}
        if d == m:
            return proj[x]
        return {}

    f = _strict_between(Tlt1, Tle, rule)
    f.name = "q<%d" % (m + 1)
    return f


# ---------------------------------------------------------------------------
# solving for morphism components

def _max_sdeg(space, vectors_by_deg):
    ds = [d + 1 for d, vs in vectors_by_deg.items() if vs]
    return max(ds) if ds else None


def extend_morphism(src_alg, tgt_alg, F1, k, allowed):
    """Solve for ``F^1_k`` so that the arity-k equation holds.

    ``F1`` holds the known components ``1..k-1``; ``allowed[d]`` lists the
    target vectors (degree d) that ``F^1_k`` may take values in. Leftmost
    pivots with free variables set to zero make the choice deterministic.
    Returns the new table or None when infeasible.
    """
    src, tgt = src_alg.space, tgt_alg.space
    dsrc = ce_encode(src_alg)
    dtgt = ce_encode(tgt_alg)
    known = CoalgMorphism(src, tgt, F1)
    words = sym_words(src, k)
    # unknowns: (word u, allowed vector j)
    unknowns = []
    for u in words:
        d = word_degree(src, u) - 1
        for j, v in enumerate(allowed.get(d, [])):
            unknowns.append((u, d, j))
    if not unknowns:
        # nothing to solve; just verify
        res = coalgebra_residuals(known, dsrc, dtgt, k)[k]
        return {} if not res else None
    uidx = {(u, d, j): i for i, (u, d, j) in enumerate(unknowns)}
    tl = tgt.labels()
    rows, rhs = [], []
    for w in words:
        # known part: sum_{p>=2} d'^1_p F^p_k(w) - sum_{p<k} F^1_p d^p_k(w)
        lhs = {}
        for p in range(2, k + 1):
            for u, c in known.component(p, w).items():
                vaccum(lhs, dtgt.structure(u), c)
        dw = dsrc.apply_word(w)
        for u, c in dw.items():
            if len(u) < k:
                vaccum(lhs, known.structure(u), -c)
        lhs = vclean(lhs)
        # linear part in the unknowns
        coeffs = {}
        for (u, d, j), i in uidx.items():
            if u == w:
                vec = allowed[d][j]
                dv = {}
                for lab, c in vec.items():
                    vaccum(dv, dtgt.structure((lab,)), c)
                for lab, c in vclean(dv).items():
                    coeffs.setdefault(lab, {})[i] = coeffs.get(lab, {}).get(i, ZERO) + c
        for u, c in dw.items():
            if len(u) != k:
                continue
            d = word_degree(src, u) - 1
            for j, vec in enumerate(allowed.get(d, [])):
                i = uidx[(u, d, j)]
                for lab, x in vec.items():
                    coeffs.setdefault(lab, {})[i] = coeffs.get(lab, {}).get(i, ZERO) - c * x
        for lab in tl:
            row = [ZERO] * len(unknowns)
            for i, c in coeffs.get(lab, {}).items():
                row[i] = c
            b = -lhs.get(lab, ZERO)
            if any(row) or b:
                rows.append(row)
                rhs.append(b)
    if not rows:
        return {}
    sol = solve(rows, rhs)
    if sol is None:
        return None
    table = {}
    for (u, d, j), i in uidx.items():
        if sol[i]:
            vaccum(table.setdefault(u, {}), allowed[d][j], sol[i])
    return {u: vclean(v) for u, v in table.items() if vclean(v)}


def arity_limit(src_space, tgt_space):
    """Largest arity for which a degree-0 map ``S^k(sL) -> sL'`` can be nonzero."""
    lo, _ = src_space.degree_range()
    _, hi = tgt_space.degree_range()
    if not src_space.dim() or not tgt_space.dim():
        return 1
    k = 1
    while (k + 1) * (lo + 1) <= hi + 1:
        k += 1
    return k


def solve_section(q, name="sigma"):
    """L-infinity section of a strict surjection ``q`` (lowest arity first)."""
    if not q.is_strict():
        raise PostnikovError("solve_section needs a strict morphism")
    S, T = q.source, q.target
    q1 = q.linear()
    # linear part: chain map section
    ker = {}
    for d in S.space.degrees:
        basis = S.space.basis(d)
        mat = q1.matrix(d)
        ns = nullspace(mat, len(basis)) if mat and mat[0] else nullspace([], len(basis))
        ker[d] = [vclean({basis[i]: x[i] for i in range(len(basis))}) for x in ns]
    # unknown sigma_1(y) = s0(y) + sum kernel, subject to d sigma = sigma d
    s0 = {}
    for d in T.space.degrees:
        tb = T.space.basis(d)
        sb = S.space.basis(d)
        mat = q1.matrix(d)
        for j, y in enumerate(tb):
            sol = solve(mat, [ONE if i == j else ZERO for i in range(len(tb))])
            if sol is None:
                raise PostnikovError("q is not surjective in degree %d" % d)
            s0[y] = vclean({sb[i]: sol[i] for i in range(len(sb))})
    allowed = ker
    F1 = {1: _solve_linear_section(T, S, s0, allowed)}
    if F1[1] is None:
        raise PostnikovError("no chain-map section (implementation bug)")
    top = arity_limit(T.space, S.space)
    for k in range(2, top + 1):
        t = extend_morphism(T, S, F1, k, allowed)
        if t is None:
            raise PostnikovError("section obstruction at arity %d (implementation bug)" % k)
        if t:
            F1[k] = t
    sigma = morphism_decode(CoalgMorphism(T.space, S.space, F1), T, S, name=name)
    return sigma


def _solve_linear_section(T, S, s0, allowed):
    """``sigma_1 = s0 + K`` with ``K`` valued in ``ker q_1`` and ``d sigma_1 = sigma_1 d``."""
    dT, dS = T.differential(), S.differential()
    unknowns = []
    for y in T.space.labels():
        d = T.space.deg(y)
        for j in range(len(allowed.get(d, []))):
            unknowns.append((y, d, j))
    idx = {u: i for i, u in enumerate(unknowns)}
    rows, rhs = [], []
    sl = S.space.labels()
    for y in T.space.labels():
        d = T.space.deg(y)
        # dS(s0 y + K y) - (s0 + K)(dT y) = 0
        base = vclean(vaccum(dict(dS(s0[y])), _apply_map(s0, dT({y: ONE})), -ONE))
        coeffs = {}
        for j, vec in enumerate(allowed.get(d, [])):
            i = idx[(y, d, j)]
            for lab, c in dS(vec).items():
                coeffs.setdefault(lab, {})[i] = coeffs.get(lab, {}).get(i, ZERO) + c
        for z, c in dT({y: ONE}).items():
            dz = T.space.deg(z)
            for j, vec in enumerate(allowed.get(dz, [])):
                i = idx[(z, dz, j)]
                for lab, x in vec.items():
                    coeffs.setdefault(lab, {})[i] = coeffs.get(lab, {}).get(i, ZERO) - c * x
        for lab in sl:
            row = [ZERO] * len(unknowns)
            for i, c in coeffs.get(lab, {}).items():
                row[i] = c
            b = -base.get(lab, ZERO)
            if any(row) or b:
                rows.append(row)
                rhs.append(b)
    sol = solve(rows, rhs) if rows else [ZERO] * len(unknowns)
    if sol is None:
        return None
    out = {}
    for y in T.space.labels():
        v = dict(s0[y])
        d = T.space.deg(y)
        for j, vec in enumerate(allowed.get(d, [])):
            c = sol[idx[(y, d, j)]] if unknowns else ZERO
            if c:
                vaccum(v, vec, c)
        v = vclean(v)
        if v:
            out[(y,)] = v
    return out


def _apply_map(table, vec):
    out = {}
    for y, c in vec.items():
        vaccum(out, table.get(y, {}), c)
    return vclean(out)


def compose_morphisms(g, f, up_to=None):
    up_to = up_to or arity_limit(f.source.space, g.target.space)
    G = morphism_encode(g)
    F = morphism_encode(f)
    return morphism_decode(compose(G, F, up_to), f.source, g.target, name="%s.%s" % (g.name, f.name))


def is_identity(f, up_to=None):
    up_to = up_to or arity_limit(f.source.space, f.target.space)
    idm = LInfinityMorphism.identity(f.source)
    return f.taylor == idm.taylor


# ---------------------------------------------------------------------------
# the tower

class TruncationPair:
    def __init__(self, L, m):
        self.m = m
        self.le, self.p_le = truncate(L, m, "<=")
        self.lt, self.p_lt = truncate(L, m, "<")
        self.lt_next, self.p_lt_next = truncate(L, m + 1, "<")
        self.q_le = q_le(L, m, self.le, self.lt)
        self.q_lt = q_lt(L, m, self.lt_next, self.le)
        self.sigma = solve_section(self.q_lt, name="sigma<%d" % (m + 1))

    def section_is_right_inverse(self):
        comp = compose_morphisms(self.q_lt, self.sigma)
        return comp.taylor == LInfinityMorphism.identity(self.le).taylor

    def certificate(self):
        rq = classify_morphism(self.q_le)
        ra = classify_morphism(self.q_lt)
        K, _ = kernel_ideal(self.q_le)
        return {
            "m": self.m,
            "q_le_minimal_fibration": rq.minimal_fibration,
            "q_le_quasi_split": rq.quasi_split,
            "q_lt_acyclic_fibration": ra.acyclic_fibration,
            "section_is_morphism": morphism_ok(self.sigma, arity_limit(self.le.space, self.lt_next.space)),
            "section_right_inverse": self.section_is_right_inverse(),
            "fiber_dims": {d: K.space.dim(d) for d in K.space.degrees},
            "fiber_differential_zero": 1 not in K.brackets,
        }


def postnikov_tower(L, depth=None):
    lo, hi = L.space.degree_range()
    if depth is None:
        depth = max(hi, 0)
    if depth > max(hi, 0):
        raise PostnikovError("depth exceeds the top degree")
    return [TruncationPair(L, m) for m in range(0, depth + 1)]


# ---------------------------------------------------------------------------
# relative truncations

def _lift_table(f, degrees):
    """Linear section of ``f_1`` in the given degrees: ``{label of L': vector in L}``."""
    f1 = f.linear()
    out = {}
    for d in degrees:
        tb = f.target.space.basis(d)
        sb = f.source.space.basis(d)
        if not tb:
            continue
        mat = f1.matrix(d)
        for j, y in enumerate(tb):
            sol = solve(mat, [ONE if i == j else ZERO for i in range(len(tb))])
            if sol is None:
                raise PostnikovError("f is not surjective in degree %d" % d)
            out[y] = vclean({sb[i]: sol[i] for i in range(len(sb))})
    return out


class RelativeStage:
    """``tau_{<=m}(L, f)`` with ``r_{<=m}`` and ``tau_{<=m}(f)``."""

    def __init__(self, f, m, check=True):
        if not f.is_strict():
            raise PostnikovError("relative truncation needs a strict fibration")
        if check:
            rep = classify_morphism(f)
            if not rep.minimal_fibration:
                raise PostnikovError("f is not a minimal fibration")
        self.f, self.m = f, m
        L, Lp = f.source, f.target
        self.rename = {}
        low = {x for x in L.space.labels() if L.space.deg(x) <= m}
        for y in Lp.space.labels():
            if Lp.space.deg(y) > m and y in low:
                self.rename[y] = y + "'"
        nm = lambda y: self.rename.get(y, y)
        degs = {}
        for d, labs in L.space.degrees.items():
            if d <= m:
                degs[d] = list(labs)
        for d, labs in Lp.space.degrees.items():
            if d > m:
                degs[d] = [nm(y) for y in labs]
        sp = GradedSpace(degs)
        hi = max(list(L.space.degrees) + list(Lp.space.degrees) + [0])
        lift = _lift_table(f, [d for d in Lp.space.degrees if d > m])
        f1 = f.linear()
        # r: L -> tau
        rent = {}
        for x in L.space.labels():
            if L.space.deg(x) <= m:
                rent[x] = {x: ONE}
            else:
                v = f1({x: ONE})
                if v:
                    rent[x] = {nm(y): c for y, c in v.items()}
        R = GradedLinearMap(L.space, sp, 0, rent)
        inv_nm = {nm(y): y for y in Lp.space.labels()}

        def lift_letter(z):
            if sp.deg(z) <= m:
                return {z: ONE}
            return lift[inv_nm[z]]

        br = {}
        maxk = max(list(L.brackets) + [1])
        for k in range(1, maxk + 1):
            if k not in L.brackets:
                continue
            table = {}
            for w in basis_words(sp, k):
                v = R(L.ell(k, *[lift_letter(z) for z in w]))
                if v:
                    table[w] = v
            if table:
                br[k] = table
        self.algebra = LInfinityAlgebra(sp, br, name="tau<=%d(L,f)" % m)
        self.r = LInfinityMorphism.strict(L, self.algebra, R, name="r<=%d" % m)
        tent = {}
        for z in sp.labels():
            if sp.deg(z) <= m:
                v = f1({z: ONE})
                if v:
                    tent[z] = v
            else:
                tent[z] = {inv_nm[z]: ONE}
        self.tau_f = LInfinityMorphism.strict(self.algebra, Lp, tent, name="tau<=%d(f)" % m)
        self.inv_nm = inv_nm
        self.nm = nm

    def reconstructs_f(self):
        comp = self.tau_f.linear().compose(self.r.linear())
        return comp.entries == self.f.linear().entries


def relative_truncation(f, m, check=True):
    return RelativeStage(f, m, check=check)


class RelativeTower:
    """All stages ``tau_{<=m}(L, f)`` for ``0 <= m <= top`` with connecting maps."""

    def __init__(self, f, top=None):
        hi = max(list(f.source.space.degrees) + list(f.target.space.degrees) + [0])
        top = hi if top is None else top
        self.f = f
        self.stages = [RelativeStage(f, 0)] + [RelativeStage(f, m, check=False) for m in range(1, top + 1)]
        self.q = [None] + [q_relative(self.stages[m], self.stages[m - 1]) for m in range(1, top + 1)]

    def reconstructs_source(self):
        """At the top stage ``r`` is the identity of ``L`` on the nose."""
        st = self.stages[-1]
        L = self.f.source
        return (st.algebra.space.degrees == L.space.degrees and st.algebra.same_as(L)
                and st.r.linear().entries == {x: {x: ONE} for x in L.space.labels()})


def relative_tower(f, top=None):
    return RelativeTower(f, top)


def q_relative(upper, lower):
    """``q^f_{<=m}: tau_{<=m}(L,f) -> tau_{<=m-1}(L,f)``: f in degree m, identity else."""
    m = upper.m
    f1 = upper.f.linear()
    ent = {}
    for z in upper.algebra.space.labels():
        d = upper.algebra.space.deg(z)
        if d == m:
            v = f1({z: ONE})
            v = {lower.nm(y): c for y, c in v.items()}
            if v:
                ent[z] = v
        else:
            # same underlying element in both stages
            if d < m:
                ent[z] = {z: ONE}
            else:
                ent[z] = {lower.nm(upper.inv_nm[z]): ONE}
    return LInfinityMorphism.strict(upper.algebra, lower.algebra, ent, name="q^f<=%d" % m)


# ---------------------------------------------------------------------------
# universal fibrations

class UniversalFibration:
    def __init__(self, dim, m, base=None):
        if m < 1:
            raise PostnikovError("m must be >= 1")
        base = base or zero_algebra()
        self.dim, self.m, self.base = dim, m, base
        self.lea = lea(dim, m)
        self.lba = lba(dim, m)
        self.E, _, _ = product(self.lea, base, name="L_EA(%d) x L'" % m)
        self.B, _, _ = product(self.lba, base, name="L_BA(%d) x L'" % m)
        low = set(a_labels(dim, m))
        self.p = LInfinityMorphism.strict(
            self.E, self.B, {x: {x: ONE} for x in self.E.space.labels() if x not in low}, name="p_A(m)/L'")
        gl_labels = [x for x in self.lea.space.labels() if x.startswith("E_")]
        from .linfty_core import gl_algebra
        self.gl = gl_algebra(dim)
        End = self.gl
        EL, _, _ = product(End, base, name="End(A) x L'")
        self.end_base = EL
        keep = set(gl_labels) | set(base.space.labels())
        self.pi_E = LInfinityMorphism.strict(
            self.E, EL, {x: {x: ONE} for x in self.E.space.labels() if x in keep}, name="pi_E")
        self.pi_B = LInfinityMorphism.strict(
            self.B, EL, {x: {x: ONE} for x in self.B.space.labels() if x in keep}, name="pi_B")


def universal_fibration(dim, m, base=None):
    return UniversalFibration(dim, m, base)


# ---------------------------------------------------------------------------
# k-invariants

class KInvariantData:
    """Section ``eta``, splitting ``phi`` and the morphism ``psi`` for stage m."""

    def __init__(self, f, m, section=None, check=True):
        if m < 1:
            raise PostnikovError("m must be >= 1")
        self.f, self.m = f, m
        self.upper = RelativeStage(f, m, check=check)
        self.lower = RelativeStage(f, m - 1, check=False)
        self.q = q_relative(self.upper, self.lower)
        U, D = self.upper.algebra, self.lower.algebra
        L, Lp = f.source, f.target
        f1 = f.linear()
        # A = (ker f)_m
        basis_m = L.space.basis(m)
        mat = f1.matrix(m)
        ns = nullspace(mat, len(basis_m)) if mat and mat[0] else nullspace([], len(basis_m))
        self.A = [vclean({basis_m[i]: x[i] for i in range(len(basis_m))}) for x in ns]
        self.dimA = len(self.A)
        # section sigma_m: L'_m -> L_m
        if section is None:
            section = _lift_table(f, [m])
        for y, v in section.items():
            if f1(v) != {y: ONE}:
                raise PostnikovError("sigma_m is not a section at %s" % y)
        self.section = section
        # eta on the lower stage
        eta = {}
        for z in D.space.labels():
            if D.space.deg(z) == m:
                eta[z] = section[self.lower.inv_nm[z]]
            elif D.space.deg(z) < m:
                eta[z] = {z: ONE}
            else:
                eta[z] = {self.upper.nm(self.lower.inv_nm[z]): ONE}
        self.eta = eta
        # phi: D (+) A[m] -> U ; labels of A[m] are "A<i>"
        self.A_labels = ["A%d" % i for i in range(self.dimA)]
        phi = dict(eta)
        for lab, v in zip(self.A_labels, self.A):
            phi[lab] = v
        self.phi = phi
        split_deg = {d: list(v) for d, v in D.space.degrees.items()}
        if self.A_labels:
            split_deg.setdefault(m, [])
            split_deg[m] = split_deg[m] + self.A_labels
        self.split_space = GradedSpace(split_deg)
        self.phi_inv = {}
        for d, labs in U.space.degrees.items():
            src = self.split_space.basis(d)
            M = [[phi[s].get(t, ZERO) for s in src] for t in labs]
            Mi = inverse(M)
            for j, t in enumerate(labs):
                self.phi_inv[t] = vclean({src[i]: Mi[i][j] for i in range(len(src))})
        self.target = lba(self.dimA, m)
        self.psi = self._build_psi()

    def pr_A(self, vec):
        """``pr_{A[m]} o phi^{-1}`` as coordinates on the A basis (index -> coeff)."""
        out = {}
        for t, c in vec.items():
            for s, x in self.phi_inv.get(t, {}).items():
                if s in self.A_labels:
                    out[s] = out.get(s, ZERO) + c * x
        return vclean(out)

    def _build_psi(self):
        U, D = self.upper.algebra, self.lower.algebra
        m = self.m
        top = a_labels(self.dimA, m + 1)
        to_top = {a: t for a, t in zip(self.A_labels, top)}
        tay = {}
        # psi_1 on degree 0: End(A) part
        t1 = {}
        for x in D.space.basis(0):
            v = {}
            for j, aj in enumerate(self.A):
                img = self.pr_A(U.ell(2, self.eta[x], aj))
                for ai, c in img.items():
                    i = self.A_labels.index(ai)
                    v["E_%d_%d" % (i, j)] = c
            if v:
                t1[(x,)] = v
        for x in D.space.basis(m + 1):
            img = self.pr_A(U.ell(1, self.eta[x]))
            v = {to_top[a]: c for a, c in img.items()}
            if v:
                t1[(x,)] = v
        if t1:
            tay[1] = t1
        maxk = max(list(U.brackets) + [1])
        for k in range(2, maxk + 1):
            if k not in U.brackets:
                continue
            tk = {}
            for w in basis_words(D.space, k):
                if sum(D.space.deg(z) for z in w) != m - k + 2:
                    continue
                img = self.pr_A(U.ell(k, *[self.eta[z] for z in w]))
                v = {to_top[a]: c for a, c in img.items()}
                if v:
                    tk[w] = v
            if tk:
                tay[k] = tk
        return LInfinityMorphism(D, self.target, tay, name="psi")

    def psi_table(self, k):
        return dict(self.psi.taylor.get(k, {}))

    def psi_residuals(self):
        up = arity_limit(self.lower.algebra.space, self.target.space)
        return check_morphism_local(self.psi, up)

    # -- pullback square ------------------------------------------------

    def classifying_square(self):
        return verify_classifying_square(self)

    # -- twisting-function avatar ----------------------------------------

    def twisting_comparison(self, base_up_to=None):
        """Compare ``theta_E`` of the split bundle with ``s^{-1} Psi^1``.

        Both sides are read as coderivations of ``S(sA[m])`` through the
        components on ``1`` (A[m+1] part) and on single letters (End part).
        """
        D = self.lower.algebra
        U = self.upper.algebra
        bundle = CoalgebraBundle(U, D, GradedSpace({self.m: self.A_labels}) if self.A_labels else GradedSpace({}),
                                 self.phi)
        up = base_up_to or arity_limit(D.space, self.target.space)
        fiber_words = [()] + [(a,) for a in self.A_labels]
        theta = twisting_from_bundle(bundle, fiber_words, up)
        Psi = morphism_encode(self.psi)
        top = a_labels(self.dimA, self.m + 1)
        mism = []
        for k in range(1, up + 1):
            for w in sym_words(D.space, k):
                got = theta.get(w, {})
                # theta(w) as an element of g: const part from c = 1, linear part from letters
                g_el = {}
                for (c_word), val in got.items():
                    for ww, x in val.items():
                        if c_word == () and len(ww) == 1:
                            i = self.A_labels.index(ww[0])
                            g_el[top[i]] = g_el.get(top[i], ZERO) + x
                        elif len(c_word) == 1 and len(ww) == 1:
                            i = self.A_labels.index(ww[0])
                            j = self.A_labels.index(c_word[0])
                            key = "E_%d_%d" % (i, j)
                            g_el[key] = g_el.get(key, ZERO) + x
                want = vclean(Psi.structure(w))
                if vclean(g_el) != want:
                    mism.append((w, vclean(g_el), want))
        return mism


def check_morphism_local(f, up_to):
    from .ce_coalgebra import morphism_residuals
    return morphism_residuals(f, up_to)


def k_invariant(f, m, section=None, check=True):
    return KInvariantData(f, m, section=section, check=check)


def solve_structure_through(space, J, target_alg, max_arity):
    """L-infinity structure on ``space`` making ``J`` (coalgebra map with
    injective linear part) a dg morphism into ``target_alg``.

    Returns ``(algebra, residuals)``; residuals are nonempty when the
    recursion meets an inconsistency, i.e. no such structure exists.
    """
    dT = ce_encode(target_alg)
    tl = target_alg.space.labels()
    # left inverse of J^1_1 degreewise
    lin = {}
    for x in space.labels():
        lin[x] = J.structure((x,))
    left = {}
    for d, labs in space.degrees.items():
        tb = target_alg.space.basis(d + 0)
        M = [[lin[x].get(t, ZERO) for x in labs] for t in tb]
        left[d] = (labs, tb, M)
    new = {}
    residuals = {}
    for k in range(1, max_arity + 1):
        partial = Coderivation(space, new)
        table = {}
        for w in sym_words(space, k):
            rhs = {}
            for u, c in J.apply_word(w).items():
                vaccum(rhs, dT.structure(u), c)
            # subtract sum_{p >= 2} J^1_p delta^p_k (uses known delta^1_{<k})
            for u, c in partial.apply_word(w).items():
                if len(u) >= 2:
                    vaccum(rhs, J.structure(u), -c)
            rhs = vclean(rhs)
            if not rhs:
                continue
            d = word_degree(space, w) - 1 - 1  # degree of the output in L
            labs, tb, M = left.get(d, ([], target_alg.space.basis(d), []))
            if not labs:
                residuals[w] = rhs
                continue
            sol = solve(M, [rhs.get(t, ZERO) for t in tb])
            if sol is None or any(t not in tb for t in rhs):
                residuals[w] = rhs
                continue
            table[w] = vclean({labs[i]: sol[i] for i in range(len(labs))})
        if table:
            new[k] = {w: v for w, v in table.items() if v}
    alg = ce_decode(Coderivation(space, new), name="pullback")
    return alg, residuals


class SquareReport:
    def __init__(self, **kw):
        self.__dict__.update(kw)

    @property
    def ok(self):
        return (self.psi_is_morphism and self.psi_tilde_is_morphism and not self.pullback_residuals and self.pullback_jacobi
                and self.comparison_is_morphism and self.comparison_iso and self.square_commutes)

    def as_dict(self):
        return {k: v for k, v in self.__dict__.items() if isinstance(v, (bool, int, str))} | {"ok": self.ok}


def verify_classifying_square(kd):
    """Certify that ``tau_{<=m}(L,f)`` is the pullback of the universal fibration.

    The pullback ``P`` of ``p_{A(m)/L'}`` along ``(psi, tau_{<=m-1}(f))`` has
    underlying space ``tau_{<=m-1}(L,f) (+) A[m]``; its brackets are solved
    from the requirement that ``P -> tau_{<=m-1} x (L_EA x L')`` is a
    morphism. The comparison ``phi^{-1}`` from ``tau_{<=m}(L,f)`` must then
    be a strict L-infinity isomorphism over both legs.
    """
    m = kd.m
    D, U = kd.lower.algebra, kd.upper.algebra
    Lp = kd.f.target
    uni = UniversalFibration(kd.dimA, m, _prefixed(Lp, "b:"))
    base_labels = {y: "b:" + y for y in Lp.space.labels()}
    up = max(arity_limit(D.space, uni.B.space), arity_limit(D.space, D.space), 2)
    psi_res = check_morphism_local(kd.psi, up)
    psi_ok = all(not v for v in psi_res.values())
    # the base map (psi, tau_{<=m-1}(f)) : D -> L_BA x L'
    tauf = kd.lower.tau_f
    PsiB = {}
    for k, t in kd.psi.taylor.items():
        for w, v in t.items():
            PsiB.setdefault(k, {})[w] = dict(v)
    for (z,), v in tauf.taylor.get(1, {}).items():
        slot = PsiB.setdefault(1, {}).setdefault((z,), {})
        for y, c in v.items():
            slot[base_labels[y]] = slot.get(base_labels[y], ZERO) + c
    base_map = LInfinityMorphism(D, uni.B, PsiB, name="(psi, tau(f))")
    base_ok = all(not v for v in check_morphism_local(base_map, up).values())
    # pullback space and the map J into D x E
    P_space = kd.split_space
    DE, _, _ = product(_prefixed(D, "d:"), uni.E, name="D x E")
    low = a_labels(kd.dimA, m)
    Jt = {}
    for k, t in morphism_encode(base_map).F1.items():
        for w, v in t.items():
            Jt.setdefault(k, {})[w] = dict(v)
    for z in D.space.labels():
        slot = Jt.setdefault(1, {}).setdefault((z,), {})
        slot["d:" + z] = ONE
    for i, a in enumerate(kd.A_labels):
        Jt.setdefault(1, {})[(a,)] = {low[i]: ONE}
    J = CoalgMorphism(P_space, DE.space, Jt)
    top = arity_limit(P_space, DE.space) + 1
    P, pres = solve_structure_through(P_space, J, DE, top)
    pj = all(not v for v in check_jacobi(P, max(top, 3)).values())
    # comparison phi^{-1}: U -> P
    comp = LInfinityMorphism.strict(U, P, {t: v for t, v in kd.phi_inv.items() if v}, name="phi^-1")
    cres = check_morphism_local(comp, max(arity_limit(U.space, P.space), 3))
    comp_ok = all(not v for v in cres.values())
    rep = classify_morphism(comp)
    # commutativity: pr_D o phi^{-1} = q^f_{<=m}
    prD = {}
    for t, v in kd.phi_inv.items():
        w = {s: c for s, c in v.items() if s in D.space}
        if w:
            prD[t] = w
    commutes = prD == {t: v for t, v in kd.q.linear().entries.items()}
    # lifted classifying map psi~ = (pr_E o J) o phi^{-1}: tau_{<=m}(L,f) -> L_EA x L'
    E_names = set(uni.E.space.labels())
    JE = {k: {w: {y: c for y, c in v.items() if y in E_names} for w, v in t.items()}
          for k, t in Jt.items()}
    JE = CoalgMorphism(P_space, uni.E.space, {k: {w: v for w, v in t.items() if v} for k, t in JE.items()})
    psi_tilde = compose_morphisms(
        morphism_decode(JE, P, uni.E, name="pr_E J"), comp,
        up_to=arity_limit(U.space, uni.E.space))
    psi_tilde.name = "psi~"
    pt_ok = all(not v for v in check_morphism_local(psi_tilde, up).values())
    return SquareReport(
        psi_tilde_is_morphism=pt_ok, psi_tilde=psi_tilde,
        psi_is_morphism=psi_ok, base_map_is_morphism=base_ok,
        pullback_residuals=pres, pullback_jacobi=pj,
        comparison_is_morphism=comp_ok, comparison_iso=rep.isomorphism,
        square_commutes=commutes, pullback=P, comparison=comp,
    )


def _prefixed(L, pre):
    mp = {x: pre + x for x in L.space.labels()}
    from .linfty_core import relabel
    return relabel(L, mp, name=L.name)
