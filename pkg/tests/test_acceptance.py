"""End-to-end acceptance checks, one test per criterion.

Each test prints a single ``criterion N: PASS|FAIL ...`` line (visible with
``pytest -s`` or in the verbose log) and then asserts.
"""
import json
import random
import subprocess
import sys
import time
from fractions import Fraction
from itertools import combinations

import numpy as np

from linfpost import corpus
from linfpost.ce_coalgebra import ce_encode
from linfpost.graded_core import homology_dims
from linfpost.linfty_core import check_jacobi
from linfpost.linfty_postnikov import k_invariant, truncate, verify_classifying_square
from linfpost.mc_integration import (
    LForm, PolyForm, codegeneracy, coface, curvature, dk_degeneracy, dk_face, dold_kan_whitney,
    flat_section, heisenberg, iota, is_mc, maurer_cartan_of, pushforward, tensor_bracket,
)
from linfpost.randomized import (
    random_algebra_any, random_complex, random_minimal_fibration, random_space, random_strict_morphism,
)
from linfpost.simplicial_core import (
    LinearIso, canonical_iso, check_iso, cyclic, k_coords, lin_em, lin_em_homog, lin_wbar_em, nerve_coords,
    symmetric, wbar_k_to_k,
)
from linfpost.simplicial_corpus import bundled_kan_complexes, kinvariant_contexts
from linfpost.simplicial_kinvariant import verify_square
from linfpost.simplicial_postnikov import (
    duskin_truncate, interleaved_tower, minpost_equivalence, moore_truncate, tau1_vs_nerve,
)


def report(capsys, n, ok, detail=""):
    line = "criterion %d: %s %s" % (n, "PASS" if ok else "FAIL", detail)
    with capsys.disabled():
        print("\n" + line.rstrip())
    return ok


def rpoly(rng, m, deg, formdeg=0, terms=3):
    out = PolyForm.zero(m)
    for _ in range(terms):
        e = [0] * m
        for _ in range(rng.randint(0, deg)):
            e[rng.randrange(m)] += 1
        I = tuple(sorted(rng.sample(range(1, m + 1), formdeg)))
        out = out + PolyForm(m, {(tuple(e), I): rng.randint(-3, 3)})
    return out


# --------------------------------------------------------------------------

def jacobi_iff_square_zero(L, up_to):
    jac = check_jacobi(L, up_to)
    sq = ce_encode(L).square_residuals(up_to)
    for m in range(1, up_to + 1):
        lower_ok = all(not jac[k] for k in range(1, m + 1))
        if lower_ok != (not sq[m]):
            return False, None
    return True, all(not v for v in jac.values())


def test_criterion_1_jacobi_iff_square_zero(capsys):
    t0 = time.time()
    bad, lie = [], 0
    for name, L in corpus.algebra_corpus().items():
        agree, valid = jacobi_iff_square_zero(L, 4)
        if not (agree and valid and all(not v for v in check_jacobi(L, 5).values())):
            bad.append(name)
    rng = random.Random(101)
    for i in range(20):
        agree, valid = jacobi_iff_square_zero(random_algebra_any(rng), 3)
        lie += bool(valid)
        if not agree:
            bad.append("random %d" % i)
    dt = time.time() - t0
    ok = not bad and dt < 30
    report(capsys, 1, ok, "(%d bundled + 20 random, %d random valid, %.1fs) %s" % (
        len(corpus.algebra_corpus()), lie, dt, bad or ""))
    assert ok, bad


def test_criterion_2_classifying_square(capsys):
    t0 = time.time()
    results = {
        "str-so3": verify_classifying_square(k_invariant(corpus.string_projection(), 1)).ok,
        "str2-sloped": verify_classifying_square(k_invariant(corpus.sloped_string_projection(), 1)).ok,
    }
    rng = random.Random(2024)
    for i in range(5):
        f = random_minimal_fibration(rng)
        for m in (1, 2):
            results["random %d m=%d" % (i, m)] = verify_classifying_square(k_invariant(f, m)).ok
    dt = time.time() - t0
    failed = [k for k, v in results.items() if not v]
    ok = not failed and dt < 60
    report(capsys, 2, ok, "(%d squares, %.1fs) %s" % (len(results), dt, failed or ""))
    assert ok, failed


def test_criterion_3_truncation_homology(capsys):
    bad = []
    for seed in range(10):
        rng = random.Random(300 + seed)
        L = random_complex(rng, random_space(rng, max_dim=3, max_deg=4))
        h = homology_dims(L.complex())
        for m in range(0, 5):
            le, _ = truncate(L, m, "<=")
            lt, _ = truncate(L, m, "<")
            if homology_dims(le.complex()) != {d: v for d, v in h.items() if d <= m}:
                bad.append((seed, m, "<="))
            if homology_dims(lt.complex()) != {d: v for d, v in h.items() if d < m}:
                bad.append((seed, m, "<"))
    ok = not bad
    report(capsys, 3, ok, "(10 complexes, m = 0..4) %s" % (bad or ""))
    assert ok, bad


def test_criterion_4_canonical_isomorphisms(capsys):
    res = {}
    for G in (cyclic(2), cyclic(4), symmetric(3)):
        f, g = nerve_coords(G)
        res["nerve %s" % G.name] = check_iso(f, g, 3 if G.order() > 4 else 4)["ok"]
    for p in (2, 3):
        A = cyclic(p)
        for n in (1, 2, 3):
            # enumerated on the small levels, over F_p up to n+3
            f, g = canonical_iso("K_coords", n + 1, A=A, n=n)
            enum_k = check_iso(f, g, n + 1)["ok"]
            f, g = canonical_iso("wbarK_to_K", n + 1, A=A, n=n)
            enum_w = check_iso(f, g, n + 1)["ok"]
            ck = LinearIso(lin_em_homog(A, n), lin_em(A, n), k_coords(A, n)[0], "K").certificate(n + 3)
            cw = LinearIso(lin_wbar_em(A, n), lin_em(A, n + 1), wbar_k_to_k(A, n)[0], "W").certificate(n + 3)
            lin = all(v["bijective"] and v["natural"] and v["inverse_ok"]
                      for c in (ck, cw) for v in c.values())
            res["Z/%d n=%d" % (p, n)] = enum_k and enum_w and lin
    failed = [k for k, v in res.items() if not v]
    ok = not failed
    report(capsys, 4, ok, "(%d cases) %s" % (len(res), failed or ""))
    assert ok, failed


def test_criterion_5_minimality_and_truncation(capsys):
    t0 = time.time()
    res = {}
    for name, (X, levels) in bundled_kan_complexes().items():
        top = min(levels, 5)
        mn, all_iso, _ = minpost_equivalence(X, 1, top)
        rows = interleaved_tower(X, 1, top).report()
        hyper = all(r["down_hypercover"] and r["down_simplicial"] for r in rows)
        duskin = all(duskin_truncate(X, 1).certify(top).values())
        moore = all(moore_truncate(X, 2).certify(top, stack=False).values())
        tau1 = tau1_vs_nerve(X, top)[0]
        res["%s@%d" % (name, top)] = (mn == all_iso) and hyper and duskin and moore and tau1
    failed = [k for k, v in res.items() if not v]
    ok = not failed
    report(capsys, 5, ok, "(%d complexes, %.1fs) %s" % (len(res), time.time() - t0, failed or ""))
    assert ok, failed


def test_criterion_6_simplicial_kinvariant_square(capsys):
    t0 = time.time()
    res, notes = {}, []
    for idx, (f, n, label) in enumerate(kinvariant_contexts()):
        cert = verify_square(f, n, up_to=4, certify_top=(idx == 0))
        res[label] = cert.ok and cert.checks.get("nu_relation", False)
        notes.append("%s: %d level-%d elements" % (label, cert.sizes.get("wbar_top", 0), n + 2))
    dt = time.time() - t0
    failed = [k for k, v in res.items() if not v]
    ok = not failed and dt < 120
    report(capsys, 6, ok, "(%.1fs; %s) %s" % (dt, "; ".join(notes), failed or ""))
    assert ok, failed


def test_criterion_7_mc_layer(capsys):
    res = {}
    rng = random.Random(7)
    h = heisenberg()

    # binary curvature: d theta - 1/2 [theta, theta]
    good = True
    for m in (2, 3):
        for _ in range(3):
            th = LForm(h.space, m, {x: rpoly(rng, m, 2, 1) for x in "xyz"})
            want = th.d() - tensor_bracket(h, 2, [th, th]).scale(Fraction(1, 2))
            good &= curvature(h, th) == want
    res["curvature"] = good

    # strict pushforward acts componentwise
    good = True
    for _ in range(10):
        f = random_strict_morphism(rng)
        m = 3
        a = LForm(f.source.space, m, {x: rpoly(rng, m, 2, f.source.space.deg(x) + 1)
                                      for x in f.source.space.labels() if f.source.space.deg(x) + 1 <= m})
        want = {}
        for x, w in a.comps.items():
            for y, c in f.component(1, (x,)).items():
                want[y] = want.get(y, PolyForm.zero(m)) + w.scale(c)
        good &= pushforward(f, a) == LForm(f.target.space, m, want)
    res["pushforward"] = good

    # flat sections of Heisenberg connections
    good = True
    for m in (1, 2):
        for _ in range(5):
            X = LForm(h.space, m, {x: rpoly(rng, m, 2) for x in "xyz"})
            X = LForm(h.space, m, {x: w - PolyForm.const(m, w.at_vertex(0)) for x, w in X.comps.items()})
            th = maurer_cartan_of(h, X)
            fs = flat_section(h, th)
            good &= is_mc(h, th) and fs.X == X and fs.round_trip()
    res["flat_section"] = good

    # Dold-Kan images are MC in degree -1 and simplicial
    good, checked = True, 0
    for dim in range(1, 5):
        for _ in range(2):
            V = random_complex(rng, random_space(rng, max_dim=dim, max_deg=2))
            while V.space.dim() > 4:
                V = random_complex(rng, random_space(rng, max_dim=dim, max_deg=2))
            for m in range(4):
                basis, imgs = dold_kan_whitney(V, m)
                for phi, a in zip(basis, imgs):
                    checked += 1
                    good &= a.is_homogeneous(-1) and is_mc(V, a)
                    for i in range(m + 1):
                        if m:
                            good &= iota(V, m - 1, dk_face(phi, m, i)) == a.pullback(coface(m, i))
                        good &= iota(V, m + 1, dk_degeneracy(phi, m, i)) == a.pullback(codegeneracy(m, i))
    res["dold_kan"] = good and checked > 0
    failed = [k for k, v in res.items() if not v]
    ok = not failed
    report(capsys, 7, ok, "(%d DK images) %s" % (checked, failed or ""))
    assert ok, failed


# -- criterion 8: CLI against a standalone evaluation ----------------------

def levi_civita_psi3():
    """psi_3 on (e1, e2, e3) from raw so(3) data: <e_i, [e_j, e_k]> with the Killing form."""
    eps = np.zeros((3, 3, 3))
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        eps[i, j, k], eps[j, i, k] = 1, -1
    ad = [eps[i].T for i in range(3)]  # (ad e_i)_{kj} = eps_{ijk}
    killing = np.array([[np.trace(ad[i] @ ad[j]) for j in range(3)] for i in range(3)])
    out = []
    for i, j, k in combinations(range(3), 3):
        br = eps[j, k]
        c = killing[i] @ br
        if c:
            out.append({"coeff": str(int(round(c))), "inputs": ["e%d" % (a + 1) for a in (i, j, k)],
                        "output": "a0[2]"})
    return out


def test_criterion_8_cli_string_example(capsys):
    r = subprocess.run([sys.executable, "-m", "linfpost.cli", "examples", "str-so3", "--postnikov", "--kinv"],
                       capture_output=True, text=True)
    got = None
    if r.returncode == 0:
        got = json.loads(r.stdout)["k_invariant"]["psi"]["3"]
    want = levi_civita_psi3()
    ok = r.returncode == 0 and got == want == [{"coeff": "-2", "inputs": ["e1", "e2", "e3"], "output": "a0[2]"}]
    report(capsys, 8, ok, "(exit %d, psi_3 = %s)" % (r.returncode, got))
    assert ok, r.stderr
