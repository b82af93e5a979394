"""Pregroup grammars: types, planar reductions, and sentence meanings.

A type is an interface of basic grammar objects; ``n^l`` is ``n`` at winding
-1 and ``n^r`` at winding +1.  Adjacent atoms ``x^(k) y^(k+1)`` contract when
their bases are compatible with the basic-type order: ``x <= y`` for even
``k`` and ``y <= x`` for odd ``k`` (the order flips with each adjoint).

A reduction is a planar set of such contractions whose uncontracted atoms
spell the target type and are not enclosed by any contraction.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .diagram import (Box, Cup, Diagram, SignedObject, Wire, compose, identity_diagram,
                      node_diagram, tensor_all, transpose_left, transpose_right)
from .errors import ParseError, ShapeMismatch, Uninterpretable
from .functors import free_to_mat, map_diagram, value
from .models import Gen, Mat, MatTensor, Signature

_ATOM = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)((?:\^[lr]+)*)$")

PregroupType = tuple  # tuple[SignedObject, ...]


def parse_type(text: str, basics: Iterable[str] | None = None) -> PregroupType:
    """Parse ``"n_s^r s n^l"``; each ``r`` adds one to the winding, each ``l`` subtracts one."""
    known = set(basics) if basics is not None else None
    atoms = []
    for tok in text.split():
        m = _ATOM.match(tok)
        if not m:
            raise ParseError(f"malformed type atom {tok!r}")
        name, suffix = m.groups()
        if known is not None and name not in known:
            raise ParseError(f"unknown basic type {name!r}")
        winding = suffix.count("r") - suffix.count("l")
        atoms.append(SignedObject(name, winding))
    return tuple(atoms)


def format_atom(o: SignedObject) -> str:
    if o.winding == 0:
        return str(o.base)
    return f"{o.base}^" + ("r" * o.winding if o.winding > 0 else "l" * -o.winding)


def format_type(t: Sequence[SignedObject]) -> str:
    return " ".join(format_atom(o) for o in t)


# ---------------------------------------------------------------------------
# Basic-type order
# ---------------------------------------------------------------------------


class Order:
    """Reflexive-transitive closure of declared ``a <= b`` pairs."""

    def __init__(self, pairs: Iterable[tuple[str, str]] = ()):
        self.pairs = frozenset(pairs)
        self._up: dict[str, set[str]] = {}
        for lo, hi in self.pairs:
            self._up.setdefault(lo, set()).add(hi)
        self._cache: dict[tuple[str, str], bool] = {}

    @classmethod
    def of(cls, order: Order | Signature | Iterable[tuple[str, str]] | None) -> Order:
        if isinstance(order, Order):
            return order
        if isinstance(order, Signature):
            return cls(order.order)
        return cls(order or ())

    def leq(self, a: str, b: str) -> bool:
        if a == b:
            return True
        key = (a, b)
        if key not in self._cache:
            seen, stack = {a}, [a]
            found = False
            while stack and not found:
                for nxt in self._up.get(stack.pop(), ()):
                    if nxt == b:
                        found = True
                        break
                    if nxt not in seen:
                        seen.add(nxt)
                        stack.append(nxt)
            self._cache[key] = found
        return self._cache[key]


def contracts(x: SignedObject, y: SignedObject, order: Order) -> bool:
    """Does ``x y`` (x on the left) reduce to the empty type?"""
    if y.winding != x.winding + 1:
        return False
    if x.winding % 2 == 0:
        return order.leq(x.base, y.base)
    return order.leq(y.base, x.base)


# ---------------------------------------------------------------------------
# Reductions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Reduction:
    """Links ``(i, j)`` with ``i < j`` (0-based) and surviving positions."""

    links: tuple[tuple[int, int], ...]
    survivors: tuple[int, ...]

    def one_based(self) -> tuple[tuple[int, int], ...]:
        return tuple((i + 1, j + 1) for i, j in self.links)

    def __str__(self) -> str:
        links = " ".join(f"({i},{j})" for i, j in sorted(self.one_based()))
        surv = " ".join(str(k + 1) for k in self.survivors)
        return f"links: {links or '-'}\nsurvivors: {surv or '-'}"


def flatten(types: Sequence[Sequence[SignedObject]]) -> tuple[SignedObject, ...]:
    return tuple(o for t in types for o in t)


def validate_reduction(r: Reduction, atoms: Sequence[SignedObject],
                       target: Sequence[SignedObject], order: Order) -> list[str]:
    """Problems with ``r``; an empty list means it is a valid reduction."""
    problems = []
    used = [p for link in r.links for p in link] + list(r.survivors)
    if sorted(used) != list(range(len(atoms))):
        problems.append("positions are not covered exactly once")
    for i, j in r.links:
        if not i < j:
            problems.append(f"link ({i},{j}) is not ordered")
        elif not contracts(atoms[i], atoms[j], order):
            problems.append(f"link ({i},{j}) does not contract")
    for i, j in r.links:
        for k, l in r.links:
            if i < k < j < l:
                problems.append(f"links ({i},{j}) and ({k},{l}) cross")
        for s in r.survivors:
            if i < s < j:
                problems.append(f"survivor {s} is enclosed by ({i},{j})")
    if tuple(atoms[s] for s in sorted(r.survivors)) != tuple(target):
        problems.append("survivors do not spell the target")
    return problems


def _full(atoms: Sequence[SignedObject], a: int, b: int, order: Order
          ) -> Iterator[list[tuple[int, int]]]:
    """All planar perfect contractions of ``atoms[a:b]``."""
    if a >= b:
        yield []
        return
    for j in range(a + 1, b, 2):
        if contracts(atoms[a], atoms[j], order):
            for inner in _full(atoms, a + 1, j, order):
                for outer in _full(atoms, j + 1, b, order):
                    yield [(a, j)] + inner + outer


def _reduce(atoms: Sequence[SignedObject], i: int, target: Sequence[SignedObject],
            t: int, order: Order) -> Iterator[tuple[list, list]]:
    n = len(atoms)
    if i == n:
        if t == len(target):
            yield [], []
        return
    if (n - i - (len(target) - t)) % 2 or n - i < len(target) - t:
        return
    for j in range(i + 1, n, 2):
        if contracts(atoms[i], atoms[j], order):
            for inner in _full(atoms, i + 1, j, order):
                for links, surv in _reduce(atoms, j + 1, target, t, order):
                    yield [(i, j)] + inner + links, surv
    if t < len(target) and atoms[i] == target[t]:
        for links, surv in _reduce(atoms, i + 1, target, t + 1, order):
            yield links, [i] + surv


def iter_reductions(types: Sequence[Sequence[SignedObject]], target: Sequence[SignedObject],
                    order=None) -> Iterator[Reduction]:
    atoms = flatten(types)
    order = Order.of(order)
    for links, surv in _reduce(atoms, 0, tuple(target), 0, order):
        yield Reduction(tuple(sorted(links)), tuple(surv))


def find_reduction(types: Sequence[Sequence[SignedObject]], target: Sequence[SignedObject],
                   order=None) -> Reduction | None:
    """The first reduction in leftmost-link order, or None if ungrammatical."""
    return next(iter_reductions(types, target, order), None)


def all_reductions(types: Sequence[Sequence[SignedObject]], target: Sequence[SignedObject],
                   order=None) -> list[Reduction]:
    return list(iter_reductions(types, target, order))


# ---------------------------------------------------------------------------
# Diagrams and meanings
# ---------------------------------------------------------------------------


def order_generator(lo: str, hi: str) -> Gen:
    return Gen(f"{lo}<={hi}", (lo,), (hi,))


def _order_wire(lo: str, hi: str, level: int) -> Diagram:
    """``lo^(level) -> hi^(level)`` for even ``level``, from the box ``lo -> hi``."""
    d = node_diagram(Box(order_generator(lo, hi), (lo,), (hi,)))
    step = transpose_right if level > 0 else transpose_left
    for _ in range(abs(level) // 2):
        d = step(step(d))
    return d


def _heights(links: Sequence[tuple[int, int]]) -> dict[tuple[int, int], int]:
    heights: dict[tuple[int, int], int] = {}
    for i, j in sorted(links, key=lambda l: l[1] - l[0]):
        inside = [heights[(k, l)] for k, l in links if i < k and l < j]
        heights[(i, j)] = 1 + max(inside, default=0)
    return heights


def reduction_to_diagram(r: Reduction, types: Sequence[Sequence[SignedObject]],
                         order=None) -> Diagram:
    """Cups for the links, one slice per nesting depth, innermost first.

    Contractions between different bases first pass through an order box
    ``x<=y`` on the leg whose winding is even.
    """
    atoms = flatten(types)
    order = Order.of(order)
    problems = validate_reduction(r, atoms, tuple(atoms[s] for s in sorted(r.survivors)),
                                  order)
    if problems:
        raise ShapeMismatch("invalid reduction: " + "; ".join(problems))
    pieces: list[Diagram] = [identity_diagram((o,)) for o in atoms]
    current = list(atoms)
    needs_prefix = False
    for i, j in r.links:
        x, y = atoms[i], atoms[j]
        if x.base == y.base:
            continue
        needs_prefix = True
        if x.winding % 2 == 0:
            pieces[i] = _order_wire(x.base, y.base, x.winding)
            current[i] = SignedObject(y.base, x.winding)
        else:
            pieces[j] = _order_wire(y.base, x.base, y.winding)
            current[j] = SignedObject(x.base, y.winding)
    diagram = tensor_all(pieces) if needs_prefix else identity_diagram(atoms)
    heights = _heights(r.links)
    alive = list(range(len(atoms)))
    for h in range(1, max(heights.values(), default=0) + 1):
        layer = {i: j for (i, j), hh in heights.items() if hh == h}
        items = []
        k = 0
        nxt = []
        while k < len(alive):
            p = alive[k]
            if p in layer:
                o = current[p]
                items.append(Cup(o.base, o.winding))
                k += 2
            else:
                items.append(Wire(current[p]))
                nxt.append(p)
                k += 1
        alive = nxt
        diagram = compose(diagram, Diagram(diagram.cod, (tuple(items),)))
    return diagram


def sentence_types(words: Sequence[str], lexicon: dict, basics=None) -> list[PregroupType]:
    out = []
    for w in words:
        if w not in lexicon:
            raise Uninterpretable(f"word {w!r} is not in the lexicon")
        out.append(parse_type(lexicon[w].type_text, basics))
    return out


def interpretation_functor(dims: dict[str, int], mats: dict[str, Mat],
                           diagram: Diagram | None = None):
    """Strict functor into MatTensor; order boxes default to identities."""
    mats = dict(mats)
    if diagram is not None:
        for box in diagram.boxes():
            gen = box.value
            if isinstance(gen, Gen) and "<=" in gen.name and gen.name not in mats:
                lo, hi = gen.dom[0], gen.cod[0]
                if dims.get(lo) != dims.get(hi):
                    raise Uninterpretable(
                        f"order box {gen.name} needs a matrix (dimensions differ)")
                mats[gen.name] = Mat.identity(dims[lo])
    return free_to_mat(dims, mats)


def sentence_meaning(words: Sequence[str], lexicon: dict, dims: dict[str, int],
                     mats: dict[str, Mat] | None = None, target: Sequence[SignedObject] = None,
                     order=None) -> Mat | None:
    """Meaning of a sentence as a column over the target space, or None."""
    target = parse_type("s") if target is None else tuple(target)
    types = sentence_types(words, lexicon)
    r = find_reduction(types, target, order)
    if r is None:
        return None
    diagram = reduction_to_diagram(r, types, order)
    functor = interpretation_functor(dims, mats or {}, diagram)
    reduce_mat = value(map_diagram(functor, diagram), MatTensor())
    model = MatTensor()
    state = Mat.identity(1)
    for w, t in zip(words, types):
        meaning = lexicon[w].meaning
        if meaning is None:
            raise Uninterpretable(f"word {w!r} has no meaning matrix")
        expected = 1
        for o in t:
            if o.base not in dims:
                raise Uninterpretable(f"object {o.base} has no dimension")
            expected *= dims[o.base]
        if (meaning.cod, meaning.dom) != (expected, 1):
            raise ShapeMismatch(f"meaning of {w!r} is {meaning.cod}x{meaning.dom}, "
                                f"type {format_type(t)} needs {expected}x1")
        state = model.tensor(state, meaning)
    return model.compose(reduce_mat, state)
