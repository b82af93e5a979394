"""String diagrams for the free autonomous category over a monoidal model.

A :class:`Diagram` is a domain interface plus a list of slices.  Each slice is
a horizontal row of items (wires and single nodes), so every diagram is
already cut into elementary pieces.  Interfaces are tuples of
:class:`SignedObject`, an object of the underlying category tagged with an
integer winding (level 0 is the object, +1 its right adjoint, -1 its left).

Diagrams are plain immutable values with structural equality; deciding when
two diagrams denote the same morphism is the job of :mod:`autocat.rewrite`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable, Iterator, Sequence, Union

from .errors import InterfaceMismatch, InvalidDiagram, ShapeMismatch
from .models import (CategoryModel, FreeSignature, MatTensor, model_of,
                     register_model)


def format_base(base: Any) -> str:
    if isinstance(base, str):
        return base
    if isinstance(base, tuple):
        if all(isinstance(b, SignedObject) for b in base) and base:
            return "[" + ", ".join(map(str, base)) + "]"
        return "*".join(map(str, base)) if base else "I"
    return str(base)


@dataclass(frozen=True)
class SignedObject:
    """The object ``base`` at adjoint level ``winding``."""

    base: Any
    winding: int = 0

    def shift(self, k: int) -> SignedObject:
        return SignedObject(self.base, self.winding + k)

    def __str__(self) -> str:
        name = format_base(self.base)
        return name if self.winding == 0 else f"{name}^{self.winding}"

    def __repr__(self) -> str:
        return f"SignedObject({self.base!r}, {self.winding})"


Interface = tuple  # tuple[SignedObject, ...]


def interface(*items: Any) -> Interface:
    """Build an interface from SignedObjects, bare bases, or (base, winding) pairs."""
    out = []
    for item in items:
        if isinstance(item, SignedObject):
            out.append(item)
        elif isinstance(item, tuple) and len(item) == 2 and isinstance(item[1], int) \
                and not isinstance(item[0], SignedObject):
            out.append(SignedObject(item[0], item[1]))
        else:
            out.append(SignedObject(item, 0))
    return tuple(out)


def format_interface(i: Sequence[SignedObject]) -> str:
    return "(" + ", ".join(map(str, i)) + ")"


# ---------------------------------------------------------------------------
# Slice items
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Wire:
    obj: SignedObject

    @property
    def dom(self) -> Interface:
        return (self.obj,)

    cod = dom

    def __str__(self) -> str:
        return f"wire {self.obj}"


@dataclass(frozen=True)
class Box:
    """A morphism of the underlying category with chosen factorizations.

    ``dom_factors``/``cod_factors`` are wire labels whose tensor product is the
    domain/codomain of ``value``; every leg sits at winding 0.
    """

    value: Any
    dom_factors: tuple
    cod_factors: tuple
    dom: Interface = field(init=False, repr=False, compare=False)
    cod: Interface = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "dom_factors", tuple(self.dom_factors))
        object.__setattr__(self, "cod_factors", tuple(self.cod_factors))
        model = model_of(self.value)
        for side, factors, expected in (("dom", self.dom_factors, model.dom(self.value)),
                                        ("cod", self.cod_factors, model.cod(self.value))):
            got = model.tensor_all(model.object_of(b) for b in factors)
            if got != expected:
                raise ShapeMismatch(
                    f"box {side} factors {[format_base(b) for b in factors]} multiply to "
                    f"{got!r}, expected {expected!r}")
        object.__setattr__(self, "dom", tuple(SignedObject(b, 0) for b in self.dom_factors))
        object.__setattr__(self, "cod", tuple(SignedObject(b, 0) for b in self.cod_factors))
        object.__setattr__(self, "_model", model)

    @property
    def model(self) -> CategoryModel:
        return self._model

    def __str__(self) -> str:
        dom = ",".join(format_base(b) for b in self.dom_factors)
        cod = ",".join(format_base(b) for b in self.cod_factors)
        return f"box {self.value} [{dom}] -> [{cod}]"


@dataclass(frozen=True)
class Cup:
    """Counit ``(base^n, base^(n+1)) -> ()``."""

    base: Any
    level: int = 0

    @property
    def dom(self) -> Interface:
        return (SignedObject(self.base, self.level), SignedObject(self.base, self.level + 1))

    @property
    def cod(self) -> Interface:
        return ()

    def __str__(self) -> str:
        return f"cup {SignedObject(self.base, self.level)}"


@dataclass(frozen=True)
class Cap:
    """Unit ``() -> (base^(n+1), base^n)``."""

    base: Any
    level: int = 0

    @property
    def dom(self) -> Interface:
        return ()

    @property
    def cod(self) -> Interface:
        return (SignedObject(self.base, self.level + 1), SignedObject(self.base, self.level))

    def __str__(self) -> str:
        return f"cap {SignedObject(self.base, self.level)}"


Node = Union[Box, Cup, Cap]
Item = Union[Wire, Box, Cup, Cap]
NODE_TYPES = (Box, Cup, Cap)


def slice_dom(items: Iterable[Item]) -> Interface:
    return tuple(o for item in items for o in item.dom)


def slice_cod(items: Iterable[Item]) -> Interface:
    return tuple(o for item in items for o in item.cod)


def first_difference(a: Sequence, b: Sequence) -> int | None:
    for k, (x, y) in enumerate(zip(a, b)):
        if x != y:
            return k
    return None if len(a) == len(b) else min(len(a), len(b))


# ---------------------------------------------------------------------------
# Diagrams
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Diagram:
    dom: Interface
    slices: tuple = ()
    cod: Interface = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "dom", tuple(self.dom))
        object.__setattr__(self, "slices", tuple(tuple(s) for s in self.slices))
        for obj in self.dom:
            if not isinstance(obj, SignedObject):
                raise InvalidDiagram(f"interface entry {obj!r} is not a SignedObject")
        current = self.dom
        for k, items in enumerate(self.slices):
            for item in items:
                if not isinstance(item, (Wire,) + NODE_TYPES):
                    raise InvalidDiagram(f"slice {k} holds {item!r}, not a wire or node")
            upper = slice_dom(items)
            if upper != current:
                pos = first_difference(current, upper)
                raise InvalidDiagram(
                    f"slice {k} expects {format_interface(upper)} but receives "
                    f"{format_interface(current)} (first difference at {pos})")
            current = slice_cod(items)
        object.__setattr__(self, "cod", current)

    def __rshift__(self, other: Diagram) -> Diagram:
        return compose(self, other)

    def __matmul__(self, other: Diagram) -> Diagram:
        return tensor(self, other)

    def nodes(self) -> Iterator[tuple[int, int, Node]]:
        """Yield ``(slice index, item index, node)`` for every non-wire item."""
        for k, items in enumerate(self.slices):
            for j, item in enumerate(items):
                if not isinstance(item, Wire):
                    yield k, j, item

    def boxes(self) -> list[Box]:
        return [n for _, _, n in self.nodes() if isinstance(n, Box)]

    @property
    def size(self) -> int:
        return sum(1 for _ in self.nodes())

    def __str__(self) -> str:
        from .textio import format_diagram

        return format_diagram(self)


def _diagram_model(_: Diagram) -> CategoryModel:
    from .functors import DiagramModel

    return DiagramModel()


register_model(Diagram, _diagram_model)


def validate(d: Diagram) -> None:
    """Re-check every invariant; raises InvalidDiagram on failure."""
    Diagram(d.dom, d.slices)
    for _, _, node in d.nodes():
        if isinstance(node, Box) and any(o.winding for o in node.dom + node.cod):
            raise InvalidDiagram("box legs must sit at winding 0")


def identity_diagram(i: Iterable[SignedObject]) -> Diagram:
    return Diagram(tuple(i), ())


def node_diagram(node: Node, left: Interface = (), right: Interface = ()) -> Diagram:
    """One slice holding ``node`` with pass-through wires on both sides."""
    items = [Wire(o) for o in left] + [node] + [Wire(o) for o in right]
    return Diagram(tuple(left) + node.dom + tuple(right), (tuple(items),))


def box_diagram(f: Any, dom_factors: Iterable[Any] | None = None,
                cod_factors: Iterable[Any] | None = None) -> Diagram:
    """A single box; factorizations default to the whole dom/cod."""
    model = model_of(f)
    if dom_factors is None:
        dom_factors = (model.base_of(model.dom(f)),)
    if cod_factors is None:
        cod_factors = (model.base_of(model.cod(f)),)
    return node_diagram(Box(f, tuple(dom_factors), tuple(cod_factors)))


def cup(base: Any, n: int = 0) -> Diagram:
    return node_diagram(Cup(base, n))


def cap(base: Any, n: int = 0) -> Diagram:
    return node_diagram(Cap(base, n))


def compose(f: Diagram, g: Diagram) -> Diagram:
    """``f`` followed by ``g``."""
    if f.cod != g.dom:
        pos = first_difference(f.cod, g.dom)
        raise InterfaceMismatch(
            f"cannot compose: cod {format_interface(f.cod)} vs dom "
            f"{format_interface(g.dom)} differ at position {pos}", pos)
    return Diagram(f.dom, f.slices + g.slices)


def compose_all(diagrams: Sequence[Diagram]) -> Diagram:
    """Sequential composite, validated once rather than once per step."""
    for f, g in zip(diagrams, diagrams[1:]):
        if f.cod != g.dom:
            pos = first_difference(f.cod, g.dom)
            raise InterfaceMismatch(
                f"cannot compose: cod {format_interface(f.cod)} vs dom "
                f"{format_interface(g.dom)} differ at position {pos}", pos)
    return Diagram(diagrams[0].dom, tuple(s for d in diagrams for s in d.slices))


def _padded(d: Diagram, depth: int) -> tuple:
    pad = tuple(Wire(o) for o in d.cod)
    return d.slices + (pad,) * (depth - len(d.slices))


def tensor(f: Diagram, g: Diagram) -> Diagram:
    depth = max(len(f.slices), len(g.slices))
    slices = tuple(a + b for a, b in zip(_padded(f, depth), _padded(g, depth)))
    return Diagram(f.dom + g.dom, slices)


def tensor_all(diagrams: Sequence[Diagram]) -> Diagram:
    out = identity_diagram(())
    for d in diagrams:
        out = tensor(out, d)
    return out


def whisker(d: Diagram, left: Interface = (), right: Interface = ()) -> Diagram:
    return tensor(tensor(identity_diagram(left), d), identity_diagram(right))


def left_adjoint(i: Sequence[SignedObject]) -> Interface:
    return tuple(o.shift(-1) for o in reversed(tuple(i)))


def right_adjoint(i: Sequence[SignedObject]) -> Interface:
    return tuple(o.shift(1) for o in reversed(tuple(i)))


def iterated_adjoint(i: Sequence[SignedObject], n: int) -> Interface:
    """``n`` right adjoints for ``n > 0``, ``-n`` left adjoints for ``n < 0``."""
    i = tuple(i)
    step = right_adjoint if n > 0 else left_adjoint
    for _ in range(abs(n)):
        i = step(i)
    return i


def snake_eps(i: Sequence[SignedObject]) -> Diagram:
    """Counit ``left_adjoint(i) ++ i -> ()`` as nested cups, innermost first."""
    i = tuple(i)
    dom = left_adjoint(i) + i
    slices = []
    for k, obj in enumerate(i):
        outer_left = left_adjoint(i[k + 1:])
        outer_right = i[k + 1:]
        slices.append(tuple(Wire(o) for o in outer_left)
                      + (Cup(obj.base, obj.winding - 1),)
                      + tuple(Wire(o) for o in outer_right))
    return Diagram(dom, slices)


def snake_eta(i: Sequence[SignedObject]) -> Diagram:
    """Unit ``() -> i ++ left_adjoint(i)`` as nested caps, outermost first."""
    i = tuple(i)
    slices = []
    for k, obj in enumerate(i):
        outer_left = i[:k]
        outer_right = left_adjoint(i[:k])
        slices.append(tuple(Wire(o) for o in outer_left)
                      + (Cap(obj.base, obj.winding - 1),)
                      + tuple(Wire(o) for o in outer_right))
    return Diagram((), slices)


def transpose_right(d: Diagram) -> Diagram:
    """The mate ``Y^r -> X^r`` of ``d : X -> Y``."""
    xr, yr = right_adjoint(d.dom), right_adjoint(d.cod)
    return compose_all([
        whisker(snake_eta(xr), right=yr),
        whisker(d, left=xr, right=yr),
        whisker(snake_eps(yr), left=xr),
    ])


def transpose_left(d: Diagram) -> Diagram:
    """The mate ``Y^l -> X^l`` of ``d : X -> Y``."""
    xl, yl = left_adjoint(d.dom), left_adjoint(d.cod)
    return compose_all([
        whisker(snake_eta(d.dom), left=yl),
        whisker(d, left=yl, right=xl),
        whisker(snake_eps(d.cod), right=xl),
    ])


def _split_adjunction(eps: Diagram, eta: Diagram) -> int | None:
    """Length of A when ``eps : A ++ B -> ()`` and ``eta : () -> B ++ A``."""
    if eps.cod or eta.dom or len(eps.dom) != len(eta.cod):
        return None
    p = len(eps.dom)
    candidates = [k for k in range(p + 1)
                  if eps.dom[:k] == eta.cod[p - k:] and eps.dom[k:] == eta.cod[:p - k]]
    return candidates[0] if len(candidates) == 1 else None


def adjunction_iso(eps1: Diagram, eta1: Diagram, eps2: Diagram, eta2: Diagram,
                   right: Sequence[SignedObject] | None = None) -> Diagram:
    """Comparison ``A -> A'`` between two left adjoints of the same ``B``.

    ``(eps1, eta1)`` exhibits ``A ⊣ B`` and ``(eps2, eta2)`` exhibits
    ``A' ⊣ B``.  The result is ``(eps1 ⊗ 1_A') ∘ (1_A ⊗ eta2)``; swapping the
    pairs gives its inverse.  Pass ``right`` (that is ``B``) when the split of
    ``eps1``'s domain is ambiguous.
    """
    if right is None:
        k = _split_adjunction(eps1, eta1)
        if k is None:
            raise ShapeMismatch("cannot infer the shared right adjoint; pass right=")
        b = eps1.dom[k:]
    else:
        b = tuple(right)
    if eps1.cod or eta1.dom or eps2.cod or eta2.dom:
        raise ShapeMismatch("counits must end in () and units start from ()")
    if eps1.dom[len(eps1.dom) - len(b):] != b or eta1.cod[:len(b)] != b:
        raise ShapeMismatch(f"pair 1 does not share {format_interface(b)}")
    a = eps1.dom[:len(eps1.dom) - len(b)]
    if eta2.cod[:len(b)] != b or eps2.dom[len(eps2.dom) - len(b):] != b:
        raise ShapeMismatch(f"pair 2 does not share {format_interface(b)}")
    a2 = eta2.cod[len(b):]
    if eps2.dom[:len(eps2.dom) - len(b)] != a2 or eta1.cod[len(b):] != a:
        raise ShapeMismatch("unit and counit boundaries disagree")
    return compose(whisker(eta2, left=a), whisker(eps1, right=a2))


def _default_model(obj: Any) -> CategoryModel:
    return MatTensor() if isinstance(obj, int) else FreeSignature()


def assoc_iso(a: Any, b: Any, c: Any, d: Any, model: CategoryModel | None = None) -> Diagram:
    """``(A^0, B^0) -> (C^0, D^0)`` for ``A⊗B = C⊗D``, as a relabelled identity box."""
    model = model or _default_model(a)
    ab = model.tensor_objects(model.object_of(a), model.object_of(b))
    cd = model.tensor_objects(model.object_of(c), model.object_of(d))
    if ab != cd:
        raise ShapeMismatch(f"{ab!r} differs from {cd!r}")
    return node_diagram(Box(model.identity(ab), (a, b), (c, d)))
