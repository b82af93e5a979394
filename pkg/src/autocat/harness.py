"""Seeded property suites shared by the CLI and the acceptance tests."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .diagram import (Box, Diagram, SignedObject, compose, identity_diagram, node_diagram,
                      right_adjoint, snake_eps, snake_eta, tensor, transpose_left,
                      transpose_right, whisker, cap, cup)
from .functors import (cartesian_no_adjoint_witness, check_triangle_L, embed, value)
from .models import (AffDirectSum, Affine, Gen, Mat, MatTensor, Net, NetSigma, TriState,
                     bifunctoriality_sides)
from .rewrite import count_nodes, normalize, rewrite_step

SUITES = ("yanking", "bifunctoriality", "triangles", "invariance", "cartesian", "conjecture")


@dataclass
class Report:
    suite: str
    seed: int
    passed: int = 0
    failed: int = 0
    failures: list[str] = field(default_factory=list)
    stats: dict[str, object] = field(default_factory=dict)
    seconds: float = 0.0
    gating: bool = True

    def record(self, ok: bool, what: str) -> None:
        if ok:
            self.passed += 1
        else:
            self.failed += 1
            if len(self.failures) < 10:
                self.failures.append(what)

    @property
    def ok(self) -> bool:
        return self.failed == 0 or not self.gating

    def lines(self) -> list[str]:
        out = [f"suite {self.suite} seed={self.seed}: {self.passed} passed, "
               f"{self.failed} failed ({self.seconds:.2f}s)"]
        for k, v in self.stats.items():
            out.append(f"  {k}: {v}")
        out.extend(f"  FAIL {f}" for f in self.failures)
        return out


# ---------------------------------------------------------------------------
# Random data
# ---------------------------------------------------------------------------


def random_rational(rng: random.Random, span: int = 3) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.choice((1, 1, 2, 3)))


def random_mat(rng: random.Random, cod: int, dom: int) -> Mat:
    return Mat([[random_rational(rng) for _ in range(dom)] for _ in range(cod)], dom, cod)


def random_affine(rng: random.Random, cod: int, dom: int) -> Affine:
    return Affine(random_mat(rng, cod, dom), tuple(random_rational(rng) for _ in range(cod)))


def random_net(rng: random.Random, cod: int, dom: int, activation: str = "sigmoid") -> Net:
    stages = [random_affine(rng, cod, dom)]
    net = Net.affine(stages[0], activation)
    if rng.random() < 0.5:
        model = NetSigma(activation)
        net = model.compose(Net.sigma(cod, activation), net)
    return net


def random_interface(rng: random.Random, bases, max_len: int = 4, max_wind: int = 3
                     ) -> tuple[SignedObject, ...]:
    return tuple(SignedObject(rng.choice(bases), rng.randint(-max_wind, max_wind))
                 for _ in range(rng.randint(0, max_len)))


def yank_composites(i: tuple[SignedObject, ...]) -> tuple[Diagram, Diagram]:
    """The two zig-zags on ``i``; both should equal the identity."""
    ir = right_adjoint(i)
    first = compose(whisker(snake_eta(i), right=i), whisker(snake_eps(i), left=i))
    second = compose(whisker(snake_eta(ir), left=i), whisker(snake_eps(ir), right=i))
    return first, second


def _random_box(rng: random.Random, dom: tuple, kind: str) -> Box:
    """A box with winding-0 legs ``dom`` and a random codomain factorization."""
    if kind == "mat":
        cod = tuple(rng.randint(1, 3) for _ in range(rng.randint(0, 2)))
        d = 1
        for b in dom:
            d *= b
        c = 1
        for b in cod:
            c *= b
        return Box(random_mat(rng, c, d), dom, cod)
    cod = tuple(rng.choice("ABC") for _ in range(rng.randint(0, 2)))
    name = f"g{rng.randint(0, 3)}_{''.join(dom)}_{''.join(cod)}"
    return Box(Gen(name, dom, cod), dom, cod)


def random_diagram(rng: random.Random, kind: str = "mat", steps: int = 5,
                   start: tuple | None = None) -> Diagram:
    """Stack random slices: caps, cups on matching pairs, boxes on winding-0 runs,
    and zig-zags, so that every rewrite rule has a chance to fire."""
    bases = (1, 2, 3) if kind == "mat" else ("A", "B", "C")
    cur = start if start is not None else tuple(
        SignedObject(rng.choice(bases), rng.randint(-1, 1)) for _ in range(rng.randint(0, 3)))
    d = identity_diagram(cur)
    for _ in range(steps):
        cur = d.cod
        choice = rng.random()
        pos = rng.randint(0, len(cur))
        if choice < 0.2:
            b = rng.choice(bases)
            piece = cap(b, rng.randint(-1, 1))
            d = compose(d, whisker(piece, left=cur[:pos], right=cur[pos:]))
            continue
        if choice < 0.4:
            sites = [k for k in range(len(cur) - 1) if cur[k].base == cur[k + 1].base
                     and cur[k + 1].winding == cur[k].winding + 1]
            if sites:
                k = rng.choice(sites)
                piece = cup(cur[k].base, cur[k].winding)
                d = compose(d, whisker(piece, left=cur[:k], right=cur[k + 2:]))
                continue
        if choice < 0.55 and cur:
            k = rng.randrange(len(cur))
            z = yank_composites((cur[k],))[rng.randint(0, 1)]
            d = compose(d, whisker(z, left=cur[:k], right=cur[k + 1:]))
            continue
        runs = [(a, b) for a in range(len(cur) + 1) for b in range(a, min(len(cur), a + 2) + 1)
                if all(o.winding == 0 for o in cur[a:b])]
        a, b = rng.choice(runs)
        box = _random_box(rng, tuple(o.base for o in cur[a:b]), kind)
        d = compose(d, whisker(node_diagram(box), left=cur[:a], right=cur[b:]))
    return d


def fixture_diagrams() -> list[Diagram]:
    """Small diagrams (at most six nodes) covering boxes, cups, caps and mixtures."""
    rng = random.Random(1234)
    out: list[Diagram] = []
    for b in (2, 3, "A"):
        out.append(identity_diagram((SignedObject(b, 0),)))
        for n in (-1, 0, 1):
            out.append(cup(b, n))
            out.append(cap(b, n))
    for _ in range(6):
        m, n = rng.randint(1, 3), rng.randint(1, 3)
        out.append(embed(random_mat(rng, m, n)))
    f = random_mat(rng, 2, 3)
    out.append(transpose_right(embed(f)))
    out.append(transpose_left(embed(f)))
    out.append(tensor(cup(2, 0), embed(random_mat(rng, 2, 2))))
    out.append(compose(cap(3, -1), tensor(embed(random_mat(rng, 2, 3)), identity_diagram(
        (SignedObject(3, -1),)))))
    out.extend(yank_composites((SignedObject(2, 0), SignedObject(3, 1))))
    out.append(node_diagram(Box(Mat.identity(6), (2, 3), (6,))))
    out.append(node_diagram(Box(Gen("f", ("A",), ("B",)), ("A",), ("B",))))
    out.append(transpose_right(node_diagram(Box(Gen("f", ("A",), ("B", "C")), ("A",),
                                                ("B", "C")))))
    while len(out) < 40:
        d = random_diagram(rng, "mat", steps=rng.randint(1, 4))
        if sum(count_nodes(d)) <= 6:
            out.append(d)
    return out


# ---------------------------------------------------------------------------
# Suites
# ---------------------------------------------------------------------------


def suite_yanking(seed: int, cases: int = 500) -> Report:
    rng = random.Random(seed)
    rep = Report("yanking", seed)
    for _ in range(cases):
        i = random_interface(rng, (1, 2, 3, 4, 5))
        ident = identity_diagram(i)
        eye = Mat.identity(_dim(i))
        for k, z in enumerate(yank_composites(i)):
            label = f"composite {k + 1} on {list(map(str, i))}"
            rep.record(normalize(z) == ident, label + " normalizes")
            rep.record(value(z, MatTensor()) == eye, label + " evaluates")
    return rep


def _dim(i) -> int:
    d = 1
    for o in i:
        d *= o.base
    return d


def suite_bifunctoriality(seed: int, cases: int = 500) -> Report:
    rng = random.Random(seed)
    rep = Report("bifunctoriality", seed)
    models: list[tuple[str, object, Callable]] = [
        ("MatTensor", MatTensor(), random_mat),
        ("AffDirectSum", AffDirectSum(), random_affine),
        ("NetSigma", NetSigma(), random_net),
    ]
    for name, model, gen in models:
        for _ in range(cases):
            a, b, c = (rng.randint(0 if name != "MatTensor" else 1, 3) for _ in range(3))
            x, y, z = (rng.randint(0 if name != "MatTensor" else 1, 3) for _ in range(3))
            f2, f1 = gen(rng, b, a), gen(rng, c, b)
            g2, g1 = gen(rng, y, x), gen(rng, z, y)
            lhs, rhs = bifunctoriality_sides(model, f1, f2, g1, g2)
            verdict = model.equal_morphisms(lhs, rhs)
            exact = name != "NetSigma"
            ok = verdict is TriState.EQUAL if exact else verdict is not TriState.NOT_EQUAL
            rep.record(ok, f"{name}: {verdict}")
    return rep


def suite_triangles(seed: int, cases: int = 200) -> Report:
    rng = random.Random(seed)
    rep = Report("triangles", seed)
    for _ in range(cases):
        f = random_mat(rng, rng.randint(1, 4), rng.randint(1, 4))
        rep.record(value(embed(f), MatTensor()) == f, f"value(embed(f)) for {f.shape}")
    fixtures = fixture_diagrams()
    for k, d in enumerate(fixtures):
        verdict = check_triangle_L(d)
        rep.record(verdict is TriState.EQUAL, f"fixture {k}: {verdict}")
    rep.stats["fixtures"] = len(fixtures)
    return rep


def suite_invariance(seed: int, cases: int = 300) -> Report:
    rng = random.Random(seed)
    rep = Report("invariance", seed)
    fired: dict[str, int] = {}
    for k in range(cases):
        # redraw diagrams that are already normal so every case applies a rule
        rule = None
        while rule is None:
            d = random_diagram(rng, "mat", steps=rng.randint(2, 6))
            after, rule = rewrite_step(d, rng)
        fired[str(rule)] = fired.get(str(rule), 0) + 1
        rep.record(value(d, MatTensor()) == value(after, MatTensor()), f"case {k}: {rule}")
    rep.stats["rules"] = ", ".join(f"{k}={v}" for k, v in sorted(fired.items()))
    return rep


def suite_cartesian(seed: int, cases: int = 50, max_dim: int = 3) -> Report:
    rng = random.Random(seed)
    rep = Report("cartesian", seed)
    for da in range(1, max_dim + 1):
        for db in range(1, max_dim + 1):
            for _ in range(cases):
                eps = random_affine(rng, 0, da + db)
                eta = Affine.constant([random_rational(rng) for _ in range(db + da)])
                w = cartesian_no_adjoint_witness(da, db, eps, eta)
                rep.record(w.refuted, f"dim A={da}, dim B={db}")
    return rep


def conjecture_sample(rng: random.Random) -> Diagram:
    """A diagram with winding-0 boundaries built from boxes, zig-zags and double transposes."""
    kind = rng.choice(("mat", "free"))
    bases = (1, 2, 3) if kind == "mat" else ("A", "B", "C")
    cur = tuple(SignedObject(rng.choice(bases), 0) for _ in range(rng.randint(1, 2)))
    d = identity_diagram(cur)
    for _ in range(rng.randint(1, 4)):
        cur = d.cod
        a = rng.randint(0, len(cur))
        b = rng.randint(a, min(len(cur), a + 2))
        box = node_diagram(_random_box(rng, tuple(o.base for o in cur[a:b]), kind))
        r = rng.random()
        if r < 0.25:
            box = transpose_left(transpose_right(box))
        elif r < 0.4 and box.cod:
            z = yank_composites(box.cod)[rng.randint(0, 1)]
            box = compose(box, z)
        d = compose(d, whisker(box, left=cur[:a], right=cur[b:]))
    return d


def suite_conjecture(seed: int, cases: int = 200) -> Report:
    """Informational: how often a winding-0 boundary normalizes to one box."""
    rng = random.Random(seed)
    rep = Report("conjecture", seed, gating=False)
    shapes = {"single box": 0, "identity": 0, "several boxes": 0, "cups or caps left": 0}
    for _ in range(cases):
        boxes, cups, caps = count_nodes(normalize(conjecture_sample(rng)))
        if cups or caps:
            shapes["cups or caps left"] += 1
        elif boxes == 1:
            shapes["single box"] += 1
        elif boxes == 0:
            shapes["identity"] += 1
        else:
            shapes["several boxes"] += 1
        rep.record(True, "")
    single = shapes["single box"]
    rep.stats["single-box fraction"] = f"{single}/{cases} = {single / cases:.3f}"
    rep.stats["normal forms"] = ", ".join(f"{k}={v}" for k, v in shapes.items())
    return rep


RUNNERS: dict[str, Callable[[int], Report]] = {
    "yanking": suite_yanking,
    "bifunctoriality": suite_bifunctoriality,
    "triangles": suite_triangles,
    "invariance": suite_invariance,
    "cartesian": suite_cartesian,
    "conjecture": suite_conjecture,
}


def run_suite(name: str, seed: int) -> Report:
    t0 = time.perf_counter()
    rep = RUNNERS[name](seed)
    rep.seconds = time.perf_counter() - t0
    return rep
