"""Acceptance criteria 1-9, each at its stated tolerance and time budget.

Every test prints one ``ACCEPTANCE <n> PASS|FAIL`` line, visible even under
captured output.
"""

from __future__ import annotations

import itertools
import math
import os
import random
import subprocess
import sys
import time

import numpy as np
import pytest

from autocat.diagram import SignedObject, identity_diagram
from autocat.functors import check_triangle_L, embed, value
from autocat.harness import (fixture_diagrams, random_interface, random_mat, random_net,
                             run_suite, suite_conjecture, yank_composites)
from autocat.models import Mat, MatTensor, NetSigma, TriState, bifunctoriality_sides
from autocat.pregroup import (Order, all_reductions, find_reduction, sentence_meaning,
                              sentence_types)
from autocat.rewrite import normalize
from autocat.textio import format_diagram, load_diagram, load_lexicon, load_signature

from conftest import DIAGRAMS, FIXTURES, ROOT
from oracles import ALPHABETS, ORDER, TARGETS, planar_reductions, sentence_oracle

SEED = 0
SENTENCE = "Clouzot directed an Italian movie".split()


@pytest.fixture
def report(capsys):
    def emit(n: int, ok: bool, seconds: float, budget: float | None, detail: str = "") -> None:
        in_time = budget is None or seconds < budget
        verdict = "PASS" if ok and in_time else "FAIL"
        limit = f" < {budget:g}s" if budget is not None else ""
        with capsys.disabled():
            print(f"\nACCEPTANCE {n} {verdict} ({seconds:.2f}s{limit}) {detail}".rstrip())
        assert ok, detail
        assert in_time, f"took {seconds:.2f}s, budget {budget}s"
    return emit


def _suite(name: str):
    rep = run_suite(name, SEED)
    return rep, "; ".join(rep.lines()[1:] + rep.failures)


def test_acceptance_1_yanking(report):
    t0 = time.perf_counter()
    rep, detail = _suite("yanking")
    # both composites are checked in-test as well, independently of the suite's bookkeeping
    rng = random.Random(SEED + 1)
    ok = rep.failed == 0 and rep.passed == 2000
    for _ in range(500):
        i = random_interface(rng, (1, 2, 3, 4, 5))
        assert len(i) <= 4 and all(abs(o.winding) <= 3 for o in i)
        dim = math.prod(o.base for o in i)
        for z in yank_composites(i):
            ok &= normalize(z) == identity_diagram(i)
            ok &= value(z, MatTensor()) == Mat.identity(dim)
    report(1, ok, time.perf_counter() - t0, 10, detail)


def test_acceptance_2_bifunctoriality(report):
    t0 = time.perf_counter()
    rep, detail = _suite("bifunctoriality")
    ok = rep.failed == 0 and rep.passed == 1500
    # the NetSigma half at its numeric tolerance, measured directly at the 16 sample points
    rng = random.Random(SEED + 2)
    model = NetSigma()
    worst = 0.0
    for _ in range(500):
        a, b, c, x, y, z = (rng.randint(0, 3) for _ in range(6))
        f2, f1 = random_net(rng, b, a), random_net(rng, c, b)
        g2, g1 = random_net(rng, y, x), random_net(rng, z, y)
        lhs, rhs = bifunctoriality_sides(model, f1, f2, g1, g2)
        points = model.sample_points(lhs.dom)
        assert len(points) == 16
        for p in points:
            worst = max(worst, float(np.max(np.abs(model.apply(lhs, p) - model.apply(rhs, p)),
                                            initial=0.0)))
    ok &= worst <= 1e-9
    report(2, ok, time.perf_counter() - t0, 10, f"{detail} NetSigma max deviation {worst:.1e}")


def test_acceptance_3_triangles(report):
    t0 = time.perf_counter()
    rng = random.Random(SEED + 3)
    ok = True
    for _ in range(200):
        f = random_mat(rng, rng.randint(1, 4), rng.randint(1, 4))
        ok &= value(embed(f), MatTensor()) == f
    fixtures = fixture_diagrams()
    verdicts = [check_triangle_L(d) for d in fixtures]
    ok &= len(fixtures) >= 30 and all(v is TriState.EQUAL for v in verdicts)
    kinds = {type(n).__name__ for d in fixtures for s in d.slices for n in s}
    ok &= {"Box", "Cup", "Cap"} <= kinds
    report(3, ok, time.perf_counter() - t0, 10,
           f"{len(fixtures)} fixtures, node kinds {sorted(kinds)}")


def test_acceptance_4_rewrite_invariance(report):
    t0 = time.perf_counter()
    rep, detail = _suite("invariance")
    report(4, rep.failed == 0 and rep.passed == 300, time.perf_counter() - t0, 10, detail)


def test_acceptance_5_cartesian(report):
    from autocat.functors import cartesian_no_adjoint_witness
    from autocat.harness import random_affine, random_rational
    from autocat.models import Affine

    t0 = time.perf_counter()
    rng = random.Random(SEED + 5)
    refuted = total = 0
    for da in (1, 2, 3):
        for db in (1, 2, 3):
            for _ in range(50):
                eps = random_affine(rng, 0, da + db)
                eta = Affine.constant([random_rational(rng) for _ in range(db + da)])
                w = cartesian_no_adjoint_witness(da, db, eps, eta)
                # re-check the witness: the snake moves at least one of the two points
                moved = any(w.composite(p) != p for p in w.points)
                imaged = all(w.composite(p) == im for p, im in zip(w.points, w.images))
                total += 1
                refuted += w.refuted and moved and imaged and w.points[0] != w.points[1]
    report(5, refuted == total == 450, time.perf_counter() - t0, 5,
           f"{refuted}/{total} refuted")


def test_acceptance_6_pregroup_sentence(report):
    t0 = time.perf_counter()
    lex = load_lexicon(FIXTURES / "sentence.lex")
    sig = load_signature(FIXTURES / "sentence.sig")
    types = sentence_types(SENTENCE, lex, sig.objects)
    r = find_reduction(types, (SignedObject("s", 0),), sig)
    links = sorted(r.one_based()) if r else None
    ok = links == [(1, 2), (4, 9), (5, 6), (7, 8)] and r.survivors == (2,)
    ok &= all(d == 2 for d in sig.objects.values())
    got = sentence_meaning(SENTENCE, lex, dict(sig.objects), order=sig)
    expected = sentence_oracle(*(lex[w].meaning for w in SENTENCE))
    ok &= got is not None and [row[0] for row in got.rows] == expected
    report(6, ok, time.perf_counter() - t0, 1,
           f"links {links}, meaning {[str(x) for x in expected]}")


def test_acceptance_7_planar_oracle(report):
    t0 = time.perf_counter()
    order = Order(ORDER)
    words = mismatches = 0
    for alphabet in ALPHABETS:
        for n in range(13):
            for word in itertools.product(alphabet, repeat=n):
                for target in TARGETS:
                    got = {(r.links, r.survivors) for r in all_reductions([word], target, order)}
                    want = planar_reductions(word, target)
                    first = find_reduction([word], target, order)
                    words += 1
                    if got != want or (first is None) != (not want) or (
                            first is not None and (first.links, first.survivors) not in want):
                        mismatches += 1
    report(7, mismatches == 0, time.perf_counter() - t0, 60,
           f"{words} word/target pairs, {mismatches} mismatches")


_CORPUS_SCRIPT = """
import sys
from autocat.harness import fixture_diagrams
from autocat.rewrite import normalize
from autocat.textio import format_diagram, load_diagram, load_signature
sig = load_signature(sys.argv[1] + "/free.sig")
import pathlib
files = sorted(pathlib.Path(sys.argv[1]).glob("*.diag"))
corpus = fixture_diagrams() + [load_diagram(f, sig) for f in files]
sys.stdout.write("\\n=====\\n".join(format_diagram(normalize(d)) for d in corpus))
"""


def test_acceptance_8_normalize_determinism(report):
    t0 = time.perf_counter()
    sig = load_signature(DIAGRAMS / "free.sig")
    files = sorted(DIAGRAMS.glob("*.diag"))
    corpus = fixture_diagrams() + [load_diagram(f, sig) for f in files]
    texts = []
    ok = True
    for d in corpus:
        n = normalize(d)
        ok &= normalize(n) == n
        texts.append(format_diagram(n))
        ok &= format_diagram(normalize(d)) == texts[-1]
    here = "\n=====\n".join(texts)
    # a fresh interpreter with a different hash seed must print the same bytes
    env = dict(os.environ, PYTHONHASHSEED="12345",
               PYTHONPATH=os.pathsep.join([str(ROOT / "src"), os.environ.get("PYTHONPATH", "")]))
    proc = subprocess.run([sys.executable, "-c", _CORPUS_SCRIPT, str(DIAGRAMS)],
                          capture_output=True, text=True, env=env, check=True)
    ok &= proc.stdout == here
    report(8, ok, time.perf_counter() - t0, 5, f"{len(corpus)} diagrams")


def test_acceptance_9_conjecture_probe(report):
    t0 = time.perf_counter()
    rep = suite_conjecture(SEED)
    stat = rep.stats.get("single-box fraction")
    report(9, stat is not None and not rep.gating, time.perf_counter() - t0, None,
           f"(informational) single-box fraction {stat}")
