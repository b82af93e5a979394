"""Normalization and equality of diagrams.

Rewriting happens on a *layered* form: a list of ``(node, offset)`` pairs
with exactly one node per layer, where ``offset`` counts the wires to the left
of the node's inputs.  In this form interchange is a swap of adjacent layers,
and the other rules are local edits:

* ``Yank``: a cap whose leg is wired straight into a cup forming a zig-zag is
  removed together with the cup.  Nodes sitting beside the zig-zag are moved
  out of the way first (right-hand ones above the cap, left-hand ones below
  the cup for one orientation, mirrored for the other).
* ``DropIdentity``: a box whose value is an identity and whose two
  factorizations agree becomes plain wires.
* ``MergeSequential``: a box is fused with every neighbouring box that is
  fully plugged into it (parallel neighbours are tensored first, which is
  the ``MergeParallel`` step).
* ``Interchange``: the final re-slicing moves every node to the earliest slice
  its wires allow, ordering nodes in a slice from left to right.

The result is turned back into slices, one slice per dependency depth.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from typing import Any, Callable, Iterable, Sequence

import numpy as np

from .diagram import (Box, Cap, Cup, Diagram, Node, SignedObject, Wire,
                      format_interface)
from .models import (FreeSignature, Gen, IdTerm, Mat, Par, Seq, Term, TriState,
                     model_of)


class RewriteRule(Enum):
    MERGE_SEQUENTIAL = "MergeSequential"
    MERGE_PARALLEL = "MergeParallel"
    DROP_IDENTITY = "DropIdentity"
    YANK = "Yank"
    INTERCHANGE = "Interchange"

    def __str__(self) -> str:
        return self.value


Verdict = TriState
Layer = tuple  # (node, offset)
Trace = Callable[[str], None]


def n_dom(node: Node) -> int:
    if isinstance(node, Box):
        return len(node.dom_factors)
    return 2 if isinstance(node, Cup) else 0


def n_cod(node: Node) -> int:
    if isinstance(node, Box):
        return len(node.cod_factors)
    return 2 if isinstance(node, Cap) else 0


# ---------------------------------------------------------------------------
# Layered form
# ---------------------------------------------------------------------------


def to_layers(d: Diagram) -> list[Layer]:
    layers = []
    for items in d.slices:
        pos = 0
        for item in items:
            if isinstance(item, Wire):
                pos += 1
            else:
                layers.append((item, pos))
                pos += n_cod(item)
    return layers


def layers_interfaces(dom: Sequence[SignedObject], layers: Sequence[Layer]) -> list[tuple]:
    """Interfaces before each layer, plus the final codomain."""
    current = tuple(dom)
    out = [current]
    for node, off in layers:
        current = current[:off] + node.cod + current[off + n_dom(node):]
        out.append(current)
    return out


def from_layers(dom: Sequence[SignedObject], layers: Sequence[Layer]) -> Diagram:
    """One slice per layer, no re-slicing."""
    current = tuple(dom)
    slices = []
    for node, off in layers:
        k = n_dom(node)
        slices.append(tuple(Wire(o) for o in current[:off]) + (node,)
                      + tuple(Wire(o) for o in current[off + k:]))
        current = current[:off] + node.cod + current[off + k:]
    return Diagram(tuple(dom), slices)


@dataclass
class Wiring:
    """Where every node input comes from and every output goes to.

    Ports are ``("dom", k)``, ``("cod", k)`` or ``(layer, index)``.
    """

    sources: list[list[tuple]]
    targets: list[list[tuple]]


def wiring(dom: Sequence[SignedObject], layers: Sequence[Layer]) -> Wiring:
    ports: list[tuple] = [("dom", k) for k in range(len(dom))]
    sources: list[list[tuple]] = []
    targets: list[list[tuple]] = []
    for i, (node, off) in enumerate(layers):
        k = n_dom(node)
        consumed = ports[off:off + k]
        sources.append(consumed)
        for m, port in enumerate(consumed):
            if port[0] != "dom":
                targets[port[0]][port[1]] = (i, m)
        c = n_cod(node)
        targets.append([None] * c)
        ports[off:off + k] = [(i, r) for r in range(c)]
    for pos, port in enumerate(ports):
        if port[0] != "dom":
            targets[port[0]][port[1]] = ("cod", pos)
    return Wiring(sources, targets)


def _rank(node: Node) -> int:
    d, c = n_dom(node), n_cod(node)
    if c == 0:
        return 0 if d else 1
    return 2 if d == 0 else 3


def _tie_key(node: Node) -> tuple:
    return (_rank(node), repr(node))


def swap(first: Layer, second: Layer) -> tuple[Layer, Layer] | None:
    """Exchange two adjacent layers, or None when they are wired together.

    A zero-width node meeting another zero-width node in the same gap may go
    either way; the tie is broken by ``_tie_key`` so results are reproducible.
    """
    (a, oa), (b, ob) = first, second
    da, ca, db, cb = n_dom(a), n_cod(a), n_dom(b), n_cod(b)
    left = ob + db <= oa
    right = ob >= oa + ca
    if left and right:
        left = _tie_key(b) < _tie_key(a)
    if left:
        return (b, ob), (a, oa - db + cb)
    if right:
        return (b, ob - ca + da), (a, oa)
    return None


def _second_is_left(first: Layer, second: Layer) -> bool:
    """For independent layers: does ``second`` sit left of ``first``?"""
    (a, oa), (b, ob) = first, second
    left = ob + n_dom(b) <= oa
    right = ob >= oa + n_cod(a)
    if left and right:
        return _tie_key(b) < _tie_key(a)
    return left


def canonical_layers(layers: Sequence[Layer], trace: Trace | None = None
                     ) -> list[tuple[Node, int, int]]:
    """Order layers by (earliest slice, left to right); returns (node, offset, slice).

    Each incoming node rises past every independent layer until it meets the
    latest layer it depends on, whose slice plus one becomes its own.  It then
    settles behind the nodes of lower slices and among its slice-mates by
    horizontal position.
    """
    out: list[list] = []
    for node, off in layers:
        cur = (node, off)
        pos = len(out)
        blocker_slice = -1
        while pos > 0:
            swapped = swap((out[pos - 1][0], out[pos - 1][1]), cur)
            if swapped is None:
                blocker_slice = out[pos - 1][2]
                break
            (bn, bo), (an, ao) = swapped
            cur = (bn, bo)
            out[pos - 1] = [an, ao, out[pos - 1][2]]
            pos -= 1
        level = blocker_slice + 1
        # sink back below same-or-lower slices and slice-mates to our left
        while pos < len(out):
            nxt = out[pos]
            if nxt[2] > level:
                break
            if nxt[2] == level and not _second_is_left(cur, (nxt[0], nxt[1])):
                break
            swapped = swap(cur, (nxt[0], nxt[1]))
            (xn, xo), (cn, co) = swapped
            out[pos] = [xn, xo, nxt[2]]
            cur = (cn, co)
            pos += 1
        out.insert(pos, [cur[0], cur[1], level])
        if trace is not None and pos != len(out) - 1:
            trace(f"{RewriteRule.INTERCHANGE} @ slice={level} pos={cur[1]}")
    return [(n, o, s) for n, o, s in out]


def slices_from_canonical(dom: Sequence[SignedObject],
                          canon: Sequence[tuple[Node, int, int]]) -> Diagram:
    current = tuple(dom)
    slices = []
    k = 0
    while k < len(canon):
        level = canon[k][2]
        group = []
        while k < len(canon) and canon[k][2] == level:
            group.append(canon[k])
            k += 1
        items: list = []
        consumed_upto = 0
        shift = 0
        nxt: list = []
        for node, off, _ in group:
            start = off - shift
            items.extend(Wire(o) for o in current[consumed_upto:start])
            nxt.extend(current[consumed_upto:start])
            items.append(node)
            nxt.extend(node.cod)
            consumed_upto = start + n_dom(node)
            shift += n_cod(node) - n_dom(node)
        items.extend(Wire(o) for o in current[consumed_upto:])
        nxt.extend(current[consumed_upto:])
        slices.append(tuple(items))
        current = tuple(nxt)
    return Diagram(tuple(dom), slices)


def reslice(d: Diagram, trace: Trace | None = None) -> Diagram:
    """Interchange canonicalization alone."""
    return slices_from_canonical(d.dom, canonical_layers(to_layers(d), trace))


# ---------------------------------------------------------------------------
# Rules on the layered form
# ---------------------------------------------------------------------------


def find_yanks(layers: Sequence[Layer], wires: Wiring) -> list[tuple[int, int, int]]:
    """All ``(cap layer, cup layer, form)`` zig-zags joined by a direct wire."""
    found = []
    for i, (node, _) in enumerate(layers):
        if not isinstance(node, Cap):
            continue
        for form, leg, slot in ((1, 1, 0), (2, 0, 1)):
            tgt = wires.targets[i][leg]
            if tgt[0] == "cod":
                continue
            j, m = tgt
            other = layers[j][0]
            if m == slot and isinstance(other, Cup) and other.base == node.base \
                    and other.level == node.level:
                found.append((i, j, form))
    return found


def apply_yank(layers: list[Layer], i: int, j: int, form: int) -> list[Layer]:
    cap_off = layers[i][1]
    mid = cap_off + (1 if form == 1 else 0)
    lefts, rights = [], []
    for node, off in layers[i + 1:j]:
        d, c = n_dom(node), n_cod(node)
        if off + d <= mid:
            lefts.append((node, off))
            mid += c - d
        elif off >= mid + 1:
            rights.append((node, off - mid - 1))
        else:
            raise AssertionError("zig-zag wire is not direct")
    if form == 1:
        middle = [(n, cap_off + r) for n, r in rights] + lefts
    else:
        middle = lefts + [(n, mid - 1 + r) for n, r in rights]
    return list(layers[:i]) + middle + list(layers[j + 1:])


def find_drops(layers: Sequence[Layer]) -> list[int]:
    out = []
    for i, (node, _) in enumerate(layers):
        if isinstance(node, Box) and node.dom_factors == node.cod_factors \
                and node.model.is_identity(node.value):
            out.append(i)
    return out


def _same_model(a: Box, b: Box) -> bool:
    return a.model == b.model


def _move(layers: list[Layer], src: int, dst: int) -> bool:
    """Bubble layer ``src`` to index ``dst`` by swaps; False if blocked."""
    step = 1 if dst > src else -1
    k = src
    while k != dst:
        lo = min(k, k + step)
        swapped = swap(layers[lo], layers[lo + 1])
        if swapped is None:
            return False
        layers[lo], layers[lo + 1] = swapped
        k += step
    return True


def _consecutive(ports: Sequence[tuple]) -> bool:
    """Ports occupy adjacent indices, so no other wire is sandwiched between them."""
    return all(b[1] == a[1] + 1 for a, b in zip(ports, ports[1:]))


def _consumer_site(layers: Sequence[Layer], wires: Wiring, j: int) -> list[int] | None:
    b2 = layers[j][0]
    if not isinstance(b2, Box) or not b2.dom_factors:
        return None
    producers = []
    for port in wires.sources[j]:
        p = port[0]
        if p == "dom" or p in producers:
            continue
        node = layers[p][0]
        if not isinstance(node, Box) or not node.cod_factors or not _same_model(node, b2):
            continue
        if all(t[0] == j for t in wires.targets[p]) and _consecutive(wires.targets[p]):
            producers.append(p)
    return producers or None


def _producer_site(layers: Sequence[Layer], wires: Wiring, i: int) -> list[int] | None:
    b1 = layers[i][0]
    if not isinstance(b1, Box) or not b1.cod_factors:
        return None
    consumers = []
    for port in wires.targets[i]:
        c = port[0]
        if c == "cod" or c in consumers:
            continue
        node = layers[c][0]
        if not isinstance(node, Box) or not node.dom_factors or not _same_model(node, b1):
            continue
        if all(s[0] == i for s in wires.sources[c]) and _consecutive(wires.sources[c]):
            consumers.append(c)
    return consumers or None


def merge_consumer(layers: list[Layer], j: int, producers: Sequence[int]) -> list[Layer] | None:
    work = list(layers)
    target = j
    for p in sorted(producers, reverse=True):
        if not _move(work, p, target - 1):
            return None
        target -= 1
    block = work[target:j + 1]
    b2, u = block[-1]
    model = b2.model
    width_before = u + sum(n_dom(n) - n_cod(n) for n, _ in block[:-1]) + n_dom(b2)
    tokens: list[Any] = list(range(width_before))
    for idx, (node, off) in enumerate(block[:-1]):
        tokens[off:off + n_dom(node)] = [(idx, r) for r in range(n_cod(node))]
    inputs = tokens[u:u + n_dom(b2)]
    dom_factors: list = []
    parts: list = []
    for r, tok in enumerate(inputs):
        if isinstance(tok, tuple):
            idx, out = tok
            if out == 0:
                node = block[idx][0]
                dom_factors.extend(node.dom_factors)
                parts.append(node.value)
        else:
            base = b2.dom_factors[r]
            dom_factors.append(base)
            parts.append(model.identity(model.object_of(base)))
    value = model.compose(b2.value, model.tensor_many(parts))
    merged = Box(value, tuple(dom_factors), b2.cod_factors)
    return work[:target] + [(merged, u)] + work[j + 1:]


def merge_producer(layers: list[Layer], i: int, consumers: Sequence[int]) -> list[Layer] | None:
    work = list(layers)
    target = i
    for c in sorted(consumers):
        if not _move(work, c, target + 1):
            return None
        target += 1
    block = work[i:target + 1]
    b1, o1 = block[0]
    model = b1.model
    tokens: list[Any] = [("b1", r) for r in range(n_cod(b1))]
    owner: dict[int, tuple[int, int]] = {}
    for idx, (node, off) in enumerate(block[1:]):
        local = off - o1
        for m, tok in enumerate(tokens[local:local + n_dom(node)]):
            owner[tok[1]] = (idx, m)
        tokens[local:local + n_dom(node)] = [("c", idx)] * n_cod(node)
    cod_factors: list = []
    parts: list = []
    for r in range(n_cod(b1)):
        if r in owner:
            idx, m = owner[r]
            if m == 0:
                node = block[1 + idx][0]
                cod_factors.extend(node.cod_factors)
                parts.append(node.value)
        else:
            base = b1.cod_factors[r]
            cod_factors.append(base)
            parts.append(model.identity(model.object_of(base)))
    value = model.compose(model.tensor_many(parts), b1.value)
    merged = Box(value, b1.dom_factors, tuple(cod_factors))
    return work[:i] + [(merged, o1)] + work[target + 1:]


# ---------------------------------------------------------------------------
# Normalization
# ---------------------------------------------------------------------------


def _disjoint(sites: Sequence[tuple]) -> list[tuple]:
    """Greedy left-to-right choice of sites whose layer ranges do not overlap."""
    chosen: list[tuple] = []
    reach = -1
    for site in sorted(sites, key=lambda s: (s[0], s[1])):
        if site[0] > reach:
            chosen.append(site)
            reach = site[1]
    return chosen


def _merge_sites(layers: Sequence[Layer], wires: Wiring) -> list[tuple]:
    """``(first layer, last layer, kind, anchor, partners)`` for every merge candidate."""
    sites = []
    for k in range(len(layers)):
        producers = _consumer_site(layers, wires, k)
        if producers:
            sites.append((min(producers), k, "consumer", k, producers))
        consumers = _producer_site(layers, wires, k)
        if consumers:
            sites.append((k, max(consumers), "producer", k, consumers))
    return sites


def _apply_merge(layers: list[Layer], site: tuple, trace: Trace | None) -> list[Layer] | None:
    _, _, kind, k, partners = site
    new = (merge_consumer if kind == "consumer" else merge_producer)(layers, k, partners)
    if new is not None and trace is not None:
        if len(partners) > 1:
            trace(f"{RewriteRule.MERGE_PARALLEL} @ slice={min(partners)} "
                  f"pos={layers[min(partners)][1]}")
        trace(f"{RewriteRule.MERGE_SEQUENTIAL} @ slice={k} pos={layers[k][1]}")
    return new


def _rewrite_once(dom: Sequence[SignedObject], layers: list[Layer], merge: bool,
                  trace: Trace | None) -> list[Layer] | None:
    """One pass: every non-overlapping site of the first applicable rule.

    Sites touch disjoint layer ranges and leave the interfaces around their
    range intact, so applying them right to left keeps the other indices valid.
    """
    wires = wiring(dom, layers)
    yanks = find_yanks(layers, wires)
    if yanks:
        for i, j, form in reversed(_disjoint(yanks)):
            if trace is not None:
                trace(f"{RewriteRule.YANK} @ slice={i} pos={layers[i][1]}")
            layers = apply_yank(layers, i, j, form)
        return layers
    drops = find_drops(layers)
    if drops:
        if trace is not None:
            for i in drops:
                trace(f"{RewriteRule.DROP_IDENTITY} @ slice={i} pos={layers[i][1]}")
        dropped = set(drops)
        return [layer for k, layer in enumerate(layers) if k not in dropped]
    if not merge:
        return None
    sites = _merge_sites(layers, wires)
    changed = False
    for site in reversed(_disjoint(sites)):
        new = _apply_merge(layers, site, trace)
        if new is not None:
            layers, changed = new, True
    if changed:
        return layers
    for site in sites:
        new = _apply_merge(layers, site, trace)
        if new is not None:
            return new
    return None


def normalize(d: Diagram, trace: Trace | None = None, merge: bool = True) -> Diagram:
    """Rewrite to the canonical normal form.

    ``trace`` receives one line per rule application.  ``merge=False`` keeps
    boxes apart, which gives the interchange normal form of a progressive
    diagram.
    """
    layers = to_layers(d)
    while True:
        new = _rewrite_once(d.dom, layers, merge, trace)
        if new is None:
            break
        layers = new
    out = slices_from_canonical(d.dom, canonical_layers(layers, trace))
    # a node with no inputs may start inside a cap's span and only float free of
    # it once its neighbours have moved, so repeat until the slicing is stable
    for _ in range(len(layers) + 1):
        again = reslice(out, trace)
        if again == out:
            break
        out = again
    return out


def count_nodes(d: Diagram) -> tuple[int, int, int]:
    boxes = cups = caps = 0
    for _, _, node in d.nodes():
        if isinstance(node, Box):
            boxes += 1
        elif isinstance(node, Cup):
            cups += 1
        else:
            caps += 1
    return boxes, cups, caps


def termination_measure(d: Diagram) -> tuple[int, int, int, int]:
    """(cups+caps, boxes, sum of slice indices, sum of horizontal positions)."""
    boxes, cups, caps = count_nodes(d)
    depth = sum(k for k, _, _ in d.nodes())
    horizontal = sum(j for _, j, _ in d.nodes())
    return cups + caps, boxes, depth, horizontal


# ---------------------------------------------------------------------------
# Single random rule application
# ---------------------------------------------------------------------------


def rule_sites(d: Diagram) -> list[tuple[RewriteRule, tuple]]:
    """Every single rule application available in ``d``'s layered form."""
    layers = to_layers(d)
    wires = wiring(d.dom, layers)
    sites: list[tuple[RewriteRule, tuple]] = []
    sites += [(RewriteRule.YANK, y) for y in find_yanks(layers, wires)]
    sites += [(RewriteRule.DROP_IDENTITY, (i,)) for i in find_drops(layers)]
    for k in range(len(layers)):
        producers = _consumer_site(layers, wires, k)
        if producers:
            sites.append((RewriteRule.MERGE_SEQUENTIAL, ("consumer", k, tuple(producers))))
        consumers = _producer_site(layers, wires, k)
        if consumers:
            sites.append((RewriteRule.MERGE_SEQUENTIAL, ("producer", k, tuple(consumers))))
    for k in range(len(layers) - 1):
        if swap(layers[k], layers[k + 1]) is not None:
            sites.append((RewriteRule.INTERCHANGE, (k,)))
    return sites


def apply_site(d: Diagram, rule: RewriteRule, site: tuple) -> Diagram | None:
    layers = to_layers(d)
    if rule is RewriteRule.YANK:
        new = apply_yank(layers, *site)
    elif rule is RewriteRule.DROP_IDENTITY:
        new = layers[:site[0]] + layers[site[0] + 1:]
    elif rule is RewriteRule.INTERCHANGE:
        k = site[0]
        pair = swap(layers[k], layers[k + 1])
        if pair is None:
            return None
        new = layers[:k] + list(pair) + layers[k + 2:]
    elif site[0] == "consumer":
        new = merge_consumer(layers, site[1], site[2])
    else:
        new = merge_producer(layers, site[1], site[2])
    return None if new is None else from_layers(d.dom, new)


def rewrite_step(d: Diagram, rng: random.Random) -> tuple[Diagram, RewriteRule | None]:
    """Apply one randomly chosen rule application (identity if none applies)."""
    sites = rule_sites(d)
    rng.shuffle(sites)
    for rule, site in sites:
        new = apply_site(d, rule, site)
        if new is not None:
            return new, rule
    return d, None


# ---------------------------------------------------------------------------
# Free monoidal terms
# ---------------------------------------------------------------------------


def term_diagram(term: Term) -> Diagram:
    """The progressive diagram of a free term (one box per generator)."""
    from .diagram import compose, identity_diagram, node_diagram, tensor

    if isinstance(term, Gen):
        return node_diagram(Box(term, term.dom, term.cod))
    if isinstance(term, IdTerm):
        return identity_diagram(SignedObject(name) for name in term.obj)
    if isinstance(term, Seq):
        return compose(term_diagram(term.first), term_diagram(term.second))
    if isinstance(term, Par):
        return tensor(term_diagram(term.left), term_diagram(term.right))
    raise TypeError(f"not a free term: {term!r}")


def progressive_form(term: Term) -> Diagram:
    """Interchange normal form of a term's diagram; equal iff the terms are."""
    return normalize(term_diagram(term), merge=False)


# ---------------------------------------------------------------------------
# Equality
# ---------------------------------------------------------------------------


def _structural(d1: Diagram, d2: Diagram) -> TriState:
    """EQUAL if the two normal forms coincide up to box-value equality."""
    if d1 == d2:
        return TriState.EQUAL
    if len(d1.slices) != len(d2.slices):
        return TriState.NOT_EQUAL
    verdict = TriState.EQUAL
    for s1, s2 in zip(d1.slices, d2.slices):
        if len(s1) != len(s2):
            return TriState.NOT_EQUAL
        for a, b in zip(s1, s2):
            if a == b:
                continue
            if not (isinstance(a, Box) and isinstance(b, Box)) \
                    or a.dom_factors != b.dom_factors or a.cod_factors != b.cod_factors:
                return TriState.NOT_EQUAL
            model = a.model
            if model != b.model:
                return TriState.NOT_EQUAL
            v = model.equal_morphisms(a.value, b.value)
            if v is TriState.NOT_EQUAL:
                return v
            if v is TriState.UNKNOWN:
                verdict = v
    return verdict


def _box_kinds(d: Diagram) -> set[type]:
    kinds = set()
    for box in d.boxes():
        value = box.value
        kinds.add(Term if isinstance(value, Term) else type(value))
    return kinds


def _base_names(base: Any) -> list[str]:
    if isinstance(base, str):
        return [base]
    return list(base)


def random_free_functor(d_list: Sequence[Diagram], rng: random.Random,
                        max_dim: int = 3):
    """A random strict functor from the free signature into MatTensor."""
    from .functors import StrongMonoidalFunctor, term_value

    names: set[str] = set()
    gens: dict[str, Gen] = {}

    def visit(term: Term) -> None:
        if isinstance(term, Gen):
            gens[term.name] = term
            names.update(term.dom + term.cod)
        elif isinstance(term, IdTerm):
            names.update(term.obj)
        elif isinstance(term, Seq):
            visit(term.first), visit(term.second)
        elif isinstance(term, Par):
            visit(term.left), visit(term.right)

    for d in d_list:
        for o in d.dom + d.cod:
            names.update(_base_names(o.base))
        for _, _, node in d.nodes():
            if isinstance(node, Box):
                visit(node.value)
            else:
                names.update(_base_names(node.base))
    dims = {n: rng.randint(1, max_dim) for n in sorted(names)}

    def dim_of(obj: tuple) -> int:
        return int(np.prod([dims[n] for n in obj], dtype=np.int64)) if obj else 1

    mats = {}
    for name in sorted(gens):
        g = gens[name]
        dom, cod = dim_of(g.dom), dim_of(g.cod)
        mats[name] = Mat([[rng.randint(-3, 3) for _ in range(dom)] for _ in range(cod)],
                         dom=dom, cod=cod)
    from .models import MatTensor

    return StrongMonoidalFunctor(
        source=FreeSignature(), target=MatTensor(), on_object=dim_of,
        on_arrow=lambda t: term_value(t, dim_of, mats))


def _refute(d1: Diagram, d2: Diagram, trials: int = 3) -> bool:
    """True when some evaluation into matrices tells the diagrams apart."""
    from .functors import map_diagram, value
    from .models import MatTensor

    kinds = _box_kinds(d1) | _box_kinds(d2)
    bases = {o.base for d in (d1, d2) for o in d.dom + d.cod}
    bases |= {n.base for d in (d1, d2) for _, _, n in d.nodes() if not isinstance(n, Box)}
    if kinds <= {Mat} and all(isinstance(b, int) for b in bases):
        return value(d1, MatTensor()) != value(d2, MatTensor())
    if kinds <= {Term} and all(isinstance(b, (str, tuple)) and
                               all(isinstance(x, str) for x in _base_names(b)) for b in bases):
        rng = random.Random(0x5EED)
        for _ in range(trials):
            functor = random_free_functor((d1, d2), rng)
            if value(map_diagram(functor, d1), MatTensor()) != \
                    value(map_diagram(functor, d2), MatTensor()):
                return True
    return False


def equal(d1: Diagram, d2: Diagram, model: Any = None, trace: Trace | None = None
          ) -> TriState:
    """Tri-state equality of diagrams.

    EQUAL when the normal forms agree (box values compared in their model),
    NOT_EQUAL when the boundaries differ or an evaluation into matrices
    separates the two, UNKNOWN otherwise.  ``model`` is accepted for symmetry
    with the model API; box values carry their own model.
    """
    if d1.dom != d2.dom or d1.cod != d2.cod:
        return TriState.NOT_EQUAL
    n1 = normalize(d1, trace)
    n2 = normalize(d2, trace)
    verdict = _structural(n1, n2)
    if verdict is TriState.EQUAL:
        return verdict
    if _refute(n1, n2):
        return TriState.NOT_EQUAL
    return TriState.UNKNOWN


def describe(d: Diagram) -> str:
    return f"{format_interface(d.dom)} -> {format_interface(d.cod)}"
