"""Functors in and out of the diagram category.

* :func:`embed` sends a morphism of a model to a one-box diagram.
* :func:`value` evaluates a diagram in an autonomous model (cups and caps go
  to the model's counits and units).  For matrices a tensor-network
  contraction is used, which avoids building large intermediate slices.
* :func:`map_diagram` pushes a diagram along a strong monoidal functor,
  conjugating each box by the functor's coherence maps.
* :class:`DiagramModel` makes the diagram category itself an autonomous
  model, which :func:`check_triangle_L` uses to test the triangle identity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Sequence

import numpy as np

from .diagram import (Box, Cap, Cup, Diagram, SignedObject, Wire, box_diagram,
                      compose, identity_diagram, iterated_adjoint, node_diagram,
                      snake_eps, snake_eta, tensor)
from .errors import ModelMismatch, ShapeMismatch, Uninterpretable
from .models import (Affine, AffDirectSum, AutonomousModel, CategoryModel, Gen,
                     IdTerm, Mat, MatTensor, Par, Seq, Term, TriState, model_of)


def embed(f: Any, model: CategoryModel | None = None) -> Diagram:
    """The one-box diagram ``(dom f)^0 -> (cod f)^0``."""
    model = model or model_of(f)
    return box_diagram(f, (model.base_of(model.dom(f)),), (model.base_of(model.cod(f)),))


# ---------------------------------------------------------------------------
# Strong monoidal functors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StrongMonoidalFunctor:
    """A monoidal functor given by its action and coherence maps.

    ``mu(objs)`` is ``F(A_1 ⊗ ... ⊗ A_n) -> F(A_1) ⊗ ... ⊗ F(A_n)`` for source
    objects ``objs``, and ``mu_inv`` its inverse.  Leave both as None for a
    strict functor, in which case boxes are mapped without conjugation.
    """

    source: CategoryModel
    target: CategoryModel
    on_object: Callable[[Any], Any]
    on_arrow: Callable[[Any], Any]
    mu: Callable[[tuple], Any] | None = None
    mu_inv: Callable[[tuple], Any] | None = None

    def map_base(self, base: Any) -> Any:
        return self.target.base_of(self.on_object(self.source.object_of(base)))

    def map_box(self, box: Box) -> Box:
        image = self.on_arrow(box.value)
        if self.mu is not None:
            dom = tuple(self.source.object_of(b) for b in box.dom_factors)
            cod = tuple(self.source.object_of(b) for b in box.cod_factors)
            if len(cod) != 1:
                image = self.target.compose(self.mu(cod), image)
            if len(dom) != 1:
                image = self.target.compose(image, self.mu_inv(dom))
        return Box(image, tuple(self.map_base(b) for b in box.dom_factors),
                   tuple(self.map_base(b) for b in box.cod_factors))


def identity_functor(model: CategoryModel) -> StrongMonoidalFunctor:
    return StrongMonoidalFunctor(model, model, lambda a: a, lambda f: f)


def left_nested_mu(binary: Callable[[Any, Any], Any], unit_mu: Callable[[], Any],
                   target: CategoryModel, source: CategoryModel,
                   on_object: Callable[[Any], Any]) -> Callable[[tuple], Any]:
    """n-ary coherence maps built by left nesting of binary ones.

    ``binary(A, B)`` is ``F(A ⊗ B) -> F(A) ⊗ F(B)``; ``unit_mu()`` is
    ``F(I) -> I``.  For one object the identity is used.
    """

    def mu(objs: tuple) -> Any:
        if not objs:
            return unit_mu()
        if len(objs) == 1:
            return target.identity(on_object(objs[0]))
        head = source.tensor_all(objs[:-1])
        step = binary(head, objs[-1])
        rest = target.tensor(mu(objs[:-1]), target.identity(on_object(objs[-1])))
        return target.compose(rest, step)

    return mu


def map_diagram(functor: StrongMonoidalFunctor, d: Diagram) -> Diagram:
    """Same skeleton, bases and boxes sent through ``functor``."""
    def obj(o: SignedObject) -> SignedObject:
        return SignedObject(functor.map_base(o.base), o.winding)

    slices = []
    for items in d.slices:
        row = []
        for item in items:
            if isinstance(item, Wire):
                row.append(Wire(obj(item.obj)))
            elif isinstance(item, Box):
                row.append(functor.map_box(item))
            elif isinstance(item, Cup):
                row.append(Cup(functor.map_base(item.base), item.level))
            else:
                row.append(Cap(functor.map_base(item.base), item.level))
        slices.append(tuple(row))
    return Diagram(tuple(obj(o) for o in d.dom), slices)


def term_value(term: Term, dim_of: Callable[[tuple], int], mats: dict[str, Mat]) -> Mat:
    """Evaluate a free term in MatTensor given generator matrices."""
    model = MatTensor()
    if isinstance(term, Gen):
        if term.name not in mats:
            raise Uninterpretable(f"generator {term.name} has no matrix")
        m = mats[term.name]
        if (m.dom, m.cod) != (dim_of(term.dom), dim_of(term.cod)):
            raise ShapeMismatch(f"matrix for {term.name} is {m.cod}x{m.dom}, expected "
                                f"{dim_of(term.cod)}x{dim_of(term.dom)}")
        return m
    if isinstance(term, IdTerm):
        return Mat.identity(dim_of(term.obj))
    if isinstance(term, Seq):
        return model.compose(term_value(term.second, dim_of, mats),
                             term_value(term.first, dim_of, mats))
    if isinstance(term, Par):
        return model.tensor(term_value(term.left, dim_of, mats),
                            term_value(term.right, dim_of, mats))
    raise Uninterpretable(f"cannot interpret {term!r}")


def free_to_mat(dims: dict[str, int], mats: dict[str, Mat]) -> StrongMonoidalFunctor:
    """Strict functor from a free signature to MatTensor."""
    from .models import FreeSignature

    def dim_of(obj: tuple) -> int:
        out = 1
        for name in obj:
            if name not in dims:
                raise Uninterpretable(f"object {name} has no dimension")
            out *= dims[name]
        return out

    return StrongMonoidalFunctor(FreeSignature(), MatTensor(), dim_of,
                                 lambda t: term_value(t, dim_of, mats))


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------


def _object(model: CategoryModel, o: SignedObject) -> Any:
    obj = model.object_of(o.base)
    if isinstance(model, MatTensor) and not isinstance(obj, (int, np.integer)):
        raise Uninterpretable(f"object {o.base!r} has no dimension")
    if o.winding == 0:
        return obj
    if not isinstance(model, AutonomousModel):
        raise ModelMismatch(f"{model.name} has no adjoints, cannot evaluate {o}")
    return model.adjoint(obj, o.winding)


def _check_owned(model: CategoryModel, value: Any) -> None:
    if not model.owns(value):
        raise Uninterpretable(f"{model.name} cannot interpret box value {value!r}")


def value_by_slices(d: Diagram, model: CategoryModel) -> Any:
    """Tensor each slice, then compose the slices."""
    result = model.identity(model.tensor_all(_object(model, o) for o in d.dom))
    for items in d.slices:
        parts = []
        for item in items:
            if isinstance(item, Wire):
                parts.append(model.identity(_object(model, item.obj)))
            elif isinstance(item, Box):
                _check_owned(model, item.value)
                parts.append(item.value)
            else:
                if not isinstance(model, AutonomousModel):
                    raise ModelMismatch(f"{model.name} has no units or counits")
                base = _object(model, SignedObject(item.base, 0))
                fn = model.eps if isinstance(item, Cup) else model.eta
                parts.append(fn(base, item.level))
        layer = model.tensor_many(parts) if parts else model.identity(model.unit)
        result = model.compose(layer, result)
    return result


def _int_bound_ok(tensors: list[tuple[np.ndarray, list]], dims: dict) -> bool:
    bound = 1
    for arr, _ in tensors:
        flat = arr.ravel()
        if not all(type(x) is int for x in flat.tolist()):
            return False
        bound *= max(1, max((abs(x) for x in flat.tolist()), default=0))
    for d in dims.values():
        bound *= max(1, d)
    return bound < 2 ** 62


def _contract(tensors: list[tuple[np.ndarray, list]], dims: dict) -> tuple[np.ndarray, list]:
    """Greedy pairwise contraction of a tensor network."""
    tensors = list(tensors)
    while len(tensors) > 1:
        best = None
        for a in range(len(tensors)):
            legs_a = set(tensors[a][1])
            for b in range(a + 1, len(tensors)):
                shared = legs_a.intersection(tensors[b][1])
                size = 1
                for e in legs_a.symmetric_difference(tensors[b][1]):
                    size *= dims[e]
                key = (0 if shared else 1, size, a, b)
                if best is None or key < best[0]:
                    best = (key, a, b, shared)
        _, a, b, shared = best
        (ta, la), (tb, lb) = tensors[a], tensors[b]
        shared = sorted(shared, key=la.index)
        ia = [la.index(e) for e in shared]
        ib = [lb.index(e) for e in shared]
        out = np.tensordot(ta, tb, axes=(ia, ib))
        legs = [e for e in la if e not in shared] + [e for e in lb if e not in shared]
        tensors = [t for k, t in enumerate(tensors) if k not in (a, b)] + [(out, legs)]
    return tensors[0]


def value_by_contraction(d: Diagram) -> Mat:
    """Exact MatTensor value of ``d`` by contracting its tensor network."""
    model = MatTensor()
    dims: dict[int, int] = {}
    counter = iter(range(1 << 62))

    def new_edge(dim: int) -> int:
        e = next(counter)
        dims[e] = dim
        return e

    def dim_of(o: SignedObject) -> int:
        return _object(model, SignedObject(o.base, 0))

    tensors: list[tuple[np.ndarray, list]] = []
    dom_edges = [new_edge(dim_of(o)) for o in d.dom]
    current = list(dom_edges)
    for items in d.slices:
        nxt = []
        p = 0
        for item in items:
            if isinstance(item, Wire):
                nxt.append(current[p])
                p += 1
            elif isinstance(item, Box):
                _check_owned(model, item.value)
                k = len(item.dom_factors)
                ins = current[p:p + k]
                outs = [new_edge(dim_of(o)) for o in item.cod]
                shape = [dims[e] for e in outs] + [dims[e] for e in ins]
                tensors.append((item.value.array.reshape(shape), outs + ins))
                nxt.extend(outs)
                p += k
            elif isinstance(item, Cup):
                ins = current[p:p + 2]
                tensors.append((np.eye(dims[ins[0]], dtype=np.int64).astype(object), ins))
                p += 2
            else:
                dim = dim_of(SignedObject(item.base, 0))
                outs = [new_edge(dim), new_edge(dim)]
                tensors.append((np.eye(dim, dtype=np.int64).astype(object), outs))
                nxt.extend(outs)
        current = nxt
    cod_edges = []
    dom_set = set(dom_edges)
    for e in current:
        if e in dom_set:
            fresh = new_edge(dims[e])
            tensors.append((np.eye(dims[e], dtype=np.int64).astype(object), [e, fresh]))
            e = fresh
        cod_edges.append(e)
    dom_dim = int(np.prod([dims[e] for e in dom_edges], dtype=np.int64))
    cod_dim = int(np.prod([dims[e] for e in cod_edges], dtype=np.int64))
    if not tensors:
        return Mat.identity(1)
    if _int_bound_ok(tensors, dims):
        tensors = [(arr.astype(np.int64), legs) for arr, legs in tensors]
    arr, legs = _contract(tensors, dims)
    order = [legs.index(e) for e in cod_edges + dom_edges]
    arr = np.transpose(arr, order) if order else arr
    return Mat.from_array(np.asarray(arr).reshape(cod_dim, dom_dim), dom_dim, cod_dim)


def value(d: Diagram, model: CategoryModel | None = None, route: str = "auto") -> Any:
    """Evaluate ``d`` in ``model`` (inferred from the boxes when omitted).

    ``route`` is ``"slices"``, ``"contract"`` (MatTensor only) or ``"auto"``.
    """
    if model is None:
        boxes = d.boxes()
        model = model_of(boxes[0].value) if boxes else MatTensor()
    if route == "contract" or (route == "auto" and isinstance(model, MatTensor)):
        if not isinstance(model, MatTensor):
            raise ModelMismatch("contraction is only available for MatTensor")
        return value_by_contraction(d)
    return value_by_slices(d, model)


# ---------------------------------------------------------------------------
# The diagram category as a model
# ---------------------------------------------------------------------------


class DiagramModel(AutonomousModel):
    """Diagrams as morphisms, interfaces as objects; equality by rewriting."""

    name = "L"
    unit: tuple = ()

    def owns(self, f: Any) -> bool:
        return isinstance(f, Diagram)

    def object_of(self, base: Any) -> tuple:
        return (base,) if isinstance(base, SignedObject) else tuple(base)

    def base_of(self, obj: Any) -> tuple:
        return tuple(obj)

    def tensor_objects(self, a: tuple, b: tuple) -> tuple:
        return tuple(a) + tuple(b)

    def dom(self, f: Diagram) -> tuple:
        return f.dom

    def cod(self, f: Diagram) -> tuple:
        return f.cod

    def identity(self, obj: tuple) -> Diagram:
        return identity_diagram(obj)

    def compose(self, g: Diagram, f: Diagram) -> Diagram:
        return compose(f, g)

    def tensor(self, f: Diagram, g: Diagram) -> Diagram:
        return tensor(f, g)

    def equal_morphisms(self, f: Diagram, g: Diagram) -> TriState:
        from .rewrite import equal

        self.check_parallel(f, g)
        return equal(f, g)

    def is_identity(self, f: Diagram) -> bool:
        from .rewrite import normalize

        return f.dom == f.cod and not normalize(f).slices

    def adjoint(self, obj: tuple, n: int) -> tuple:
        return iterated_adjoint(obj, n)

    def eps(self, obj: tuple, n: int = 0) -> Diagram:
        return snake_eps(iterated_adjoint(obj, n + 1))

    def eta(self, obj: tuple, n: int = 0) -> Diagram:
        return snake_eta(iterated_adjoint(obj, n + 1))


def _source_model(d: Diagram) -> CategoryModel:
    boxes = d.boxes()
    if boxes:
        return boxes[0].model
    from .diagram import _default_model

    bases = [o.base for o in d.dom + d.cod] + [n.base for _, _, n in d.nodes()]
    return _default_model(bases[0]) if bases else MatTensor()


def embedding_functor(model: CategoryModel) -> StrongMonoidalFunctor:
    """The unit of the free/forgetful adjunction: ``A ↦ (A^0)``, ``f ↦ embed(f)``."""
    target = DiagramModel()

    def on_object(a: Any) -> tuple:
        return (SignedObject(model.base_of(a), 0),)

    def mu(objs: tuple) -> Diagram:
        whole = model.tensor_all(objs)
        return node_diagram(Box(model.identity(whole), (model.base_of(whole),),
                                tuple(model.base_of(a) for a in objs)))

    def mu_inv(objs: tuple) -> Diagram:
        whole = model.tensor_all(objs)
        return node_diagram(Box(model.identity(whole), tuple(model.base_of(a) for a in objs),
                                (model.base_of(whole),)))

    return StrongMonoidalFunctor(model, target, on_object, lambda f: embed(f, model),
                                 mu, mu_inv)


def check_triangle_L(d: Diagram, model: CategoryModel | None = None) -> TriState:
    """Push ``d`` through the embedding, evaluate in the diagram category, compare."""
    from .rewrite import equal

    model = model or _source_model(d)
    lifted = map_diagram(embedding_functor(model), d)
    flattened = value_by_slices(lifted, DiagramModel())
    return equal(flattened, d)


# ---------------------------------------------------------------------------
# Cartesian models have no adjoints
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CartesianWitness:
    composite: Affine
    points: tuple[tuple[Fraction, ...], tuple[Fraction, ...]]
    images: tuple[tuple[Fraction, ...], tuple[Fraction, ...]]
    refuted: bool
    note: str = field(default="")


def cartesian_no_adjoint_witness(dim_a: int, dim_b: int, eps: Affine,
                                 eta: Affine) -> CartesianWitness:
    """Show the snake ``(eps ⊕ 1_A) ∘ (1_A ⊕ eta)`` is not ``1_A`` under ⊕.

    ``eps : A ⊕ B -> O`` and ``eta : O -> B ⊕ A``; the snake is constant, so
    two inputs differing in their A component cannot both be fixed.
    """
    if dim_a < 1:
        raise ValueError("dim A must be at least 1: the case A = O has trivial adjoints")
    if (eps.dom, eps.cod) != (dim_a + dim_b, 0):
        raise ShapeMismatch(f"eps must map {dim_a + dim_b} -> 0, got {eps.dom} -> {eps.cod}")
    if (eta.dom, eta.cod) != (0, dim_b + dim_a):
        raise ShapeMismatch(f"eta must map 0 -> {dim_b + dim_a}, got {eta.dom} -> {eta.cod}")
    aff = AffDirectSum()
    one_a = aff.identity(dim_a)
    snake = aff.compose(aff.tensor(eps, one_a), aff.tensor(one_a, eta))
    zero = tuple(Fraction(0) for _ in range(dim_a))
    e1 = (Fraction(1),) + zero[1:]
    images = (snake(zero), snake(e1))
    refuted = images[0] != zero or images[1] != e1
    return CartesianWitness(snake, (zero, e1), images, refuted,
                            "composite is constant" if images[0] == images[1] else "")
