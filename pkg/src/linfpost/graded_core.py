"""
Exact graded linear algebra over the rationals.

Vectors are sparse dicts ``{label: Fraction}``. A graded space keeps an
ordered list of labels per degree; the global order of labels is what
defines the sorted normal form of multi-indices everywhere else in the
package.
"""

from fractions import Fraction
from itertools import combinations, permutations
from math import comb

Q = Fraction
ZERO = Fraction(0)
ONE = Fraction(1)


class GradedError(ValueError):
    pass


def as_scalar(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise GradedError("floating point scalars are not allowed: %r" % (x,))
    return Fraction(x)


# ---------------------------------------------------------------------------
# sparse vectors

def vclean(v):
    return {k: c for k, c in v.items() if c != 0}


def vadd(*vs):
    out = {}
    for v in vs:
        for k, c in v.items():
            out[k] = out.get(k, ZERO) + c
    return vclean(out)


def vscale(c, v):
    c = as_scalar(c)
    if c == 0:
        return {}
    return {k: c * x for k, x in v.items()}


def vsub(a, b):
    return vadd(a, vscale(-1, b))


def vaccum(acc, v, c=ONE):
    """In-place ``acc += c*v``; zeros are dropped lazily by the caller."""
    if c == 0:
        return acc
    for k, x in v.items():
        acc[k] = acc.get(k, ZERO) + c * x
    return acc


def suffix_label(label, k):
    """Shift annotation on a label: ``x`` -> ``x[k]``, stacking additively."""
    base, shift = split_shift(label)
    total = shift + k
    return base if total == 0 else "%s[%d]" % (base, total)


def split_shift(label):
    if label.endswith("]") and "[" in label:
        i = label.rindex("[")
        try:
            return label[:i], int(label[i + 1:-1])
        except ValueError:
            pass
    return label, 0


# ---------------------------------------------------------------------------
# graded spaces

class GradedSpace:
    """Finite-type graded vector space with a named basis in each degree.

    ``degrees`` maps an integer degree to an ordered list of labels. Labels
    must be unique across degrees.
    """

    def __init__(self, degrees=None):
        degrees = degrees or {}
        self.degrees = {}
        self._deg = {}
        self._index = {}
        for d in sorted(degrees):
            labels = list(degrees[d])
            if not labels:
                continue
            self.degrees[int(d)] = labels
            for lab in labels:
                if lab in self._deg:
                    raise GradedError("duplicate basis label %r" % lab)
                self._deg[lab] = int(d)
        for i, lab in enumerate(self.labels()):
            self._index[lab] = i

    def labels(self):
        out = []
        for d in sorted(self.degrees):
            out.extend(self.degrees[d])
        return out

    def basis(self, d):
        return list(self.degrees.get(d, []))

    def deg(self, label):
        try:
            return self._deg[label]
        except KeyError:
            raise GradedError("unknown basis label %r" % (label,))

    def index(self, label):
        return self._index[label]

    def __contains__(self, label):
        return label in self._deg

    def dim(self, d=None):
        if d is None:
            return len(self._deg)
        return len(self.degrees.get(d, ()))

    def degree_range(self):
        if not self.degrees:
            return (0, -1)
        return (min(self.degrees), max(self.degrees))

    def vdeg(self, v):
        """Degree of a homogeneous vector; None for the zero vector."""
        ds = {self.deg(k) for k in v}
        if len(ds) > 1:
            raise GradedError("inhomogeneous vector %r" % (v,))
        return ds.pop() if ds else None

    def __eq__(self, other):
        return isinstance(other, GradedSpace) and self.degrees == other.degrees

    def __hash__(self):
        return hash(tuple((d, tuple(v)) for d, v in sorted(self.degrees.items())))

    def __repr__(self):
        dims = ", ".join("%d:%d" % (d, len(v)) for d, v in sorted(self.degrees.items()))
        return "GradedSpace(%s)" % dims

    def direct_sum(self, other):
        degs = {}
        for sp in (self, other):
            for d, labs in sp.degrees.items():
                degs.setdefault(d, []).extend(labs)
        return GradedSpace(degs)

    def restrict(self, labels):
        keep = set(labels)
        return GradedSpace({d: [x for x in labs if x in keep] for d, labs in self.degrees.items()})


def suspend(space, k):
    """``s^k V``: every label moves up by ``k`` and carries the shift in its name."""
    return GradedSpace({d + k: [suffix_label(x, k) for x in labs]
                        for d, labs in space.degrees.items()})


# ---------------------------------------------------------------------------
# linear maps

class GradedLinearMap:
    """Sparse linear map of fixed degree between graded spaces.

    ``entries[src_label]`` is a sparse vector in the target.
    """

    def __init__(self, source, target, shift, entries=None, check=True):
        self.source = source
        self.target = target
        self.shift = shift
        self.entries = {}
        for k, v in (entries or {}).items():
            v = vclean({t: as_scalar(c) for t, c in v.items()})
            if v:
                self.entries[k] = v
        if check:
            for k, v in self.entries.items():
                want = source.deg(k) + shift
                for t in v:
                    if target.deg(t) != want:
                        raise GradedError("entry %s -> %s violates degree shift %d" % (k, t, shift))

    def __call__(self, v):
        out = {}
        for k, c in v.items():
            img = self.entries.get(k)
            if img:
                vaccum(out, img, c)
        return vclean(out)

    def matrix(self, d):
        """Matrix of the degree-``d`` component (rows: target basis)."""
        src = self.source.basis(d)
        tgt = self.target.basis(d + self.shift)
        return [[self.entries.get(s, {}).get(t, ZERO) for s in src] for t in tgt]

    def compose(self, other):
        """``self o other``."""
        ent = {k: self(v) for k, v in other.entries.items()}
        return GradedLinearMap(other.source, self.target, self.shift + other.shift, ent, check=False)

    def is_zero(self):
        return not self.entries

    def __eq__(self, other):
        return (self.shift == other.shift and self.entries == other.entries)

    @staticmethod
    def identity(space):
        return GradedLinearMap(space, space, 0, {x: {x: ONE} for x in space.labels()}, check=False)

    @staticmethod
    def zero(source, target, shift):
        return GradedLinearMap(source, target, shift, {}, check=False)


# ---------------------------------------------------------------------------
# matrices over Q (lists of rows)

def rref(mat):
    """Reduced row echelon form with leftmost pivots.

    Returns ``(rows, pivots)``; the rows are the nonzero rows only.
    """
    m = [list(map(as_scalar, r)) for r in mat]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(m)):
            if m[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        if p != 1:
            m[r] = [x / p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                row = m[r]
                m[i] = [a - f * b for a, b in zip(m[i], row)]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(mat):
    return len(rref(mat)[1])


def nullspace(mat, ncols=None):
    """Basis of ``{x : mat x = 0}`` as a list of column vectors."""
    if not mat:
        n = ncols or 0
        return [[ONE if i == j else ZERO for i in range(n)] for j in range(n)]
    ncols = len(mat[0])
    rows, pivots = rref(mat)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [ZERO] * ncols
        x[f] = ONE
        for row, p in zip(rows, pivots):
            x[p] = -row[f]
        basis.append(x)
    return basis


def solve(mat, rhs):
    """One solution of ``mat x = rhs`` (free variables set to 0), or None."""
    if not mat:
        return [] if all(b == 0 for b in rhs) else None
    ncols = len(mat[0])
    aug = [list(r) + [as_scalar(b)] for r, b in zip(mat, rhs)]
    rows, pivots = rref(aug)
    if pivots and pivots[-1] == ncols:
        return None
    x = [ZERO] * ncols
    for row, p in zip(rows, pivots):
        x[p] = row[ncols]
    return x


def matmul(a, b):
    if not a or not b:
        return [[ZERO] * (len(b[0]) if b else 0) for _ in a]
    cols = list(zip(*b))
    return [[sum((x * y for x, y in zip(row, col)), ZERO) for col in cols] for row in a]


def inverse(mat):
    n = len(mat)
    aug = [list(r) + [ONE if i == j else ZERO for j in range(n)] for i, r in enumerate(mat)]
    rows, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(rows) < n:
        raise GradedError("matrix is singular")
    return [r[n:] for r in rows]


# ---------------------------------------------------------------------------
# subspaces and quotients in label coordinates

def span_rref(vectors, labels):
    """Echelon basis of the span of sparse vectors, in ``labels`` coordinates."""
    mat = [[v.get(x, ZERO) for x in labels] for v in vectors]
    rows, pivots = rref(mat) if mat else ([], [])
    return rows, pivots


def quotient_coords(subspace_vectors, labels):
    """Quotient ``span(labels) / span(subspace_vectors)``.

    Returns ``(kept, proj)``: ``kept`` are the labels that form a basis of the
    quotient (non-pivot labels of the echelon form), and ``proj[x]`` is the
    image of label ``x`` in those coordinates.
    """
    rows, pivots = span_rref(subspace_vectors, labels)
    piv_labels = [labels[p] for p in pivots]
    kept = [x for x in labels if x not in piv_labels]
    proj = {x: {x: ONE} for x in kept}
    for row, p in zip(rows, pivots):
        proj[labels[p]] = vclean({labels[c]: -row[c] for c in range(len(labels))
                                  if labels[c] in kept and row[c] != 0})
    return kept, proj


# ---------------------------------------------------------------------------
# chain complexes

class ChainComplex:
    """Graded space with a degree -1 differential squaring to zero."""

    def __init__(self, space, differential=None, check=True):
        self.space = space
        if differential is None:
            differential = GradedLinearMap.zero(space, space, -1)
        if differential.shift != -1:
            raise GradedError("differential must have degree -1")
        self.d = differential
        if check:
            bad = self.d.compose(self.d)
            if not bad.is_zero():
                raise GradedError("differential does not square to zero: %r" % (bad.entries,))

    def homology(self):
        return homology(self)


def homology(c):
    """Homology of a chain complex.

    Returns ``{degree: (dim, reps)}`` where ``reps`` are cycles (sparse vectors)
    whose classes form a basis. Only degrees with nonzero homology appear.
    """
    d = c.d
    sq = d.compose(d)
    if not sq.is_zero():
        raise GradedError("differential fails d^2 = 0")
    out = {}
    for deg in sorted(c.space.degrees):
        basis = c.space.basis(deg)
        low = c.space.basis(deg - 1)
        dm = d.matrix(deg)
        if low:
            z = nullspace(dm, len(basis))
        else:
            z = nullspace([], len(basis))
        cycles = [vclean({basis[i]: x[i] for i in range(len(basis))}) for x in z]
        up = c.space.basis(deg + 1)
        bnds = [d({u: ONE}) for u in up]
        bnds = [b for b in bnds if b]
        # extend an echelon basis of boundaries by cycles, keep the new ones
        reps = []
        rows, pivots = span_rref(bnds, basis)
        cur = [dict(zip(basis, r)) for r in rows]
        r0 = len(pivots)
        for z_ in cycles:
            trial = cur + [z_]
            if rank([[v.get(x, ZERO) for x in basis] for v in trial]) > r0:
                cur.append(z_)
                r0 += 1
                reps.append(z_)
        if reps:
            out[deg] = (len(reps), reps)
    return out


def homology_dims(c):
    return {d: v[0] for d, v in homology(c).items()}


# ---------------------------------------------------------------------------
# permutations and signs

class SignedPermutation:
    """Permutation ``sigma`` written as the tuple of images ``(sigma(0), ...)``.

    Acting on a word ``(x_0, ..., x_{m-1})`` it produces
    ``(x_{sigma(0)}, ..., x_{sigma(m-1)})``.
    """

    __slots__ = ("perm", "degrees")

    def __init__(self, perm, degrees=None):
        perm = tuple(perm)
        if sorted(perm) != list(range(len(perm))):
            raise GradedError("not a permutation: %r" % (perm,))
        self.perm = perm
        self.degrees = tuple(degrees) if degrees is not None else None

    def __len__(self):
        return len(self.perm)

    def __iter__(self):
        return iter(self.perm)

    def __getitem__(self, i):
        return self.perm[i]

    def apply(self, word):
        return tuple(word[i] for i in self.perm)

    def compose(self, other):
        """``(self o other)``, acting first by ``self`` on positions then ``other``."""
        return SignedPermutation(tuple(self.perm[j] for j in other.perm))

    def parity(self):
        p = self.perm
        inv = 0
        for i in range(len(p)):
            for j in range(i + 1, len(p)):
                if p[i] > p[j]:
                    inv += 1
        return inv % 2

    def __repr__(self):
        return "SignedPermutation(%r)" % (self.perm,)


def koszul_sign(perm, degrees):
    """Koszul sign of reordering graded slots by ``perm``.

    Each inversion of a pair of odd slots contributes a factor -1.
    """
    p = perm.perm if isinstance(perm, SignedPermutation) else tuple(perm)
    if len(degrees) != len(p):
        raise GradedError("length mismatch between permutation and degrees")
    key = (p, tuple(d % 2 for d in degrees))
    hit = _KOSZUL_CACHE.get(key)
    if hit is None:
        if sorted(p) != list(range(len(p))):
            raise GradedError("not a permutation: %r" % (p,))
        hit = _koszul(p, degrees)
        _KOSZUL_CACHE[key] = hit
    return hit


_KOSZUL_CACHE = {}


def _koszul(p, degrees):
    s = 0
    for i in range(len(p)):
        di = degrees[p[i]] % 2
        if not di:
            continue
        for j in range(i + 1, len(p)):
            if p[i] > p[j] and degrees[p[j]] % 2:
                s += 1
    return ONE if s % 2 == 0 else -ONE


def skew_sign(perm, degrees):
    """``(-1)^sigma`` times the Koszul sign."""
    if not isinstance(perm, SignedPermutation):
        perm = SignedPermutation(perm)
    k = koszul_sign(perm, degrees)
    return -k if perm.parity() else k


def shuffles(*blocks):
    """All ``(b_1, ..., b_r)``-shuffles, order preserving on every block."""
    hit = _SHUFFLE_CACHE.get(blocks)
    if hit is None:
        hit = _shuffles(blocks)
        _SHUFFLE_CACHE[blocks] = hit
    return hit


_SHUFFLE_CACHE = {}


def _shuffles(blocks):
    n = sum(blocks)
    out = []

    def rec(remaining, blocks_left, chosen):
        if not blocks_left:
            out.append(SignedPermutation(tuple(x for part in chosen for x in part)))
            return
        b = blocks_left[0]
        for part in combinations(remaining, b):
            rest = [x for x in remaining if x not in part]
            rec(rest, blocks_left[1:], chosen + [part])

    rec(list(range(n)), list(blocks), [])
    return out


def unshuffles(p, q):
    """The ``(p, q)``-shuffles; there are ``binomial(p+q, p)`` of them."""
    if p < 0 or q < 0:
        raise GradedError("negative block size")
    return shuffles(p, q)


def all_permutations(m):
    return [SignedPermutation(p) for p in permutations(range(m))]


def binomial(n, k):
    return comb(n, k)


def sort_with_sign(word, degrees, order, skew=False):
    """Sort ``word`` by ``order`` with the accumulated Koszul sign.

    With ``skew=True`` every transposition also contributes a factor -1, which
    is the graded skew-symmetric convention. Returns ``(sorted_word, sign)``;
    the sign is 0 when the word is forced to vanish by (anti)symmetry.
    """
    idx = sorted(range(len(word)), key=lambda i: order(word[i]))
    perm = SignedPermutation(idx)
    sign = skew_sign(perm, degrees) if skew else koszul_sign(perm, degrees)
    out = tuple(word[i] for i in idx)
    # repeated letters: symmetric product kills odd repeats, skew kills even repeats
    for a, b, da in zip(out, out[1:], [degrees[i] for i in idx]):
        if a == b:
            if skew and da % 2 == 0:
                return out, ZERO
            if not skew and da % 2 == 1:
                return out, ZERO
    return out, sign
