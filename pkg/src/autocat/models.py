"""Strict monoidal categories used as generators and as semantic targets.

Four concrete models are provided:

* :class:`FreeSignature`: terms over generators, decided by diagram normal forms.
* :class:`MatTensor`: exact rational matrices under the Kronecker product.
  This one is autonomous (every dimension is self-dual).
* :class:`AffDirectSum`: affine maps ``x -> Mx + b`` under direct sum.
* :class:`NetSigma`: pipelines of affine stages and pointwise activations.

Every morphism value knows its own dom/cod, so :func:`model_of` can recover a
model from a value alone.  This is what lets the rewrite engine merge boxes
without being told which category they live in.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import reduce
from typing import Any, Callable, Iterable, Sequence

import numpy as np

from .errors import ModelMismatch, ShapeMismatch


class TriState(Enum):
    EQUAL = "EQUAL"
    NOT_EQUAL = "NOT_EQUAL"
    UNKNOWN = "UNKNOWN"

    def __str__(self) -> str:
        return self.value


def _frac(x: Any) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, (float, np.floating)):
        return Fraction(float(x))
    return Fraction(int(x)) if isinstance(x, (bool, np.integer)) else Fraction(x)


# ---------------------------------------------------------------------------
# Behavioural interfaces
# ---------------------------------------------------------------------------


class CategoryModel(ABC):
    """A strict monoidal category, seen through its operations."""

    name = "model"

    @property
    @abstractmethod
    def unit(self) -> Any: ...

    @abstractmethod
    def tensor_objects(self, a: Any, b: Any) -> Any: ...

    @abstractmethod
    def dom(self, f: Any) -> Any: ...

    @abstractmethod
    def cod(self, f: Any) -> Any: ...

    @abstractmethod
    def identity(self, obj: Any) -> Any: ...

    @abstractmethod
    def compose(self, g: Any, f: Any) -> Any:
        """``g ∘ f``: first ``f``, then ``g``."""

    @abstractmethod
    def tensor(self, f: Any, g: Any) -> Any: ...

    @abstractmethod
    def equal_morphisms(self, f: Any, g: Any) -> TriState: ...

    def owns(self, f: Any) -> bool:
        return True

    def object_of(self, base: Any) -> Any:
        """The model object named by a diagram wire label."""
        return base

    def base_of(self, obj: Any) -> Any:
        """The wire label used for a model object (inverse of object_of)."""
        return obj

    def tensor_all(self, objects: Iterable[Any]) -> Any:
        return reduce(self.tensor_objects, objects, self.unit)

    def tensor_many(self, morphisms: Sequence[Any], empty_obj: Any = None) -> Any:
        if not morphisms:
            return self.identity(self.unit if empty_obj is None else empty_obj)
        return reduce(self.tensor, morphisms)

    def is_identity(self, f: Any) -> bool:
        if self.dom(f) != self.cod(f):
            return False
        return self.equal_morphisms(f, self.identity(self.dom(f))) is TriState.EQUAL

    def check_parallel(self, f: Any, g: Any) -> None:
        if not (self.owns(f) and self.owns(g)):
            raise ModelMismatch(f"{self.name} cannot compare {f!r} and {g!r}")
        if self.dom(f) != self.dom(g) or self.cod(f) != self.cod(g):
            raise ShapeMismatch(
                f"cannot compare {self.dom(f)}->{self.cod(f)} "
                f"with {self.dom(g)}->{self.cod(g)}")

    def __eq__(self, other: object) -> bool:
        return type(self) is type(other) and vars(self) == vars(other)

    def __hash__(self) -> int:
        return hash(type(self))

    def __repr__(self) -> str:
        return f"{type(self).__name__}()"


class AutonomousModel(CategoryModel):
    """A monoidal category in which every object has left and right adjoints.

    Adjoint levels are indexed by integers: level 0 is the object itself,
    level ``n + 1`` is the right adjoint of level ``n``.
    """

    @abstractmethod
    def adjoint(self, obj: Any, n: int) -> Any: ...

    @abstractmethod
    def eps(self, obj: Any, n: int) -> Any:
        """Counit ``obj^(n) ⊗ obj^(n+1) -> I``."""

    @abstractmethod
    def eta(self, obj: Any, n: int) -> Any:
        """Unit ``I -> obj^(n+1) ⊗ obj^(n)``."""

    def left_adj(self, obj: Any) -> Any:
        return self.adjoint(obj, -1)

    def right_adj(self, obj: Any) -> Any:
        return self.adjoint(obj, 1)


_MODEL_FOR_TYPE: dict[type, Callable[[Any], CategoryModel]] = {}


def register_model(value_type: type, factory: Callable[[Any], CategoryModel]) -> None:
    _MODEL_FOR_TYPE[value_type] = factory


def model_of(value: Any) -> CategoryModel:
    """Return the model a morphism value belongs to."""
    for klass in type(value).__mro__:
        factory = _MODEL_FOR_TYPE.get(klass)
        if factory is not None:
            return factory(value)
    raise ModelMismatch(f"no model registered for {type(value).__name__}")


# ---------------------------------------------------------------------------
# Exact rational matrices
# ---------------------------------------------------------------------------


class Mat:
    """Immutable exact matrix with shape ``(cod, dom)``.

    Entries are Python ints or Fractions held in a numpy object array, so
    products and Kronecker products stay exact.
    """

    __slots__ = ("dom", "cod", "_array", "_hash")

    def __init__(self, rows: Iterable[Iterable[Any]], dom: int | None = None,
                 cod: int | None = None):
        rows = [[_frac(x) for x in row] for row in rows]
        if cod is None:
            cod = len(rows)
        if dom is None:
            dom = len(rows[0]) if rows else 0
        if len(rows) != cod or any(len(r) != dom for r in rows):
            raise ShapeMismatch(f"matrix rows do not form a {cod}x{dom} array")
        arr = np.empty((cod, dom), dtype=object)
        for i, row in enumerate(rows):
            for j, x in enumerate(row):
                arr[i, j] = x.numerator if x.denominator == 1 else x
        self._set(arr, dom, cod)

    def _set(self, arr: np.ndarray, dom: int, cod: int) -> None:
        arr.flags.writeable = False
        self._array = arr
        self.dom = dom
        self.cod = cod
        self._hash = None

    @classmethod
    def from_array(cls, array: Any, dom: int | None = None,
                   cod: int | None = None) -> Mat:
        """Wrap an array of ints, Fractions or floats (converted exactly)."""
        array = np.asarray(array)
        if array.ndim == 1:
            array = array.reshape(-1, 1)
        if cod is None:
            cod = array.shape[0]
        if dom is None:
            dom = array.shape[1] if array.ndim > 1 else 1
        if array.size != cod * dom:
            raise ShapeMismatch(f"{array.size} entries cannot form a {cod}x{dom} matrix")
        if array.dtype.kind in "iub":
            arr = array.astype(object)
        elif array.dtype.kind == "f":
            arr = np.vectorize(Fraction, otypes=[object])(array) if array.size else \
                array.astype(object)
        else:
            arr = array.astype(object, copy=True)
        out = cls.__new__(cls)
        out._set(arr.reshape(cod, dom), dom, cod)
        return out

    @classmethod
    def identity(cls, d: int) -> Mat:
        return cls.from_array(np.eye(d, dtype=np.int64), d, d)

    @classmethod
    def zeros(cls, cod: int, dom: int) -> Mat:
        return cls.from_array(np.zeros((cod, dom), dtype=np.int64), dom, cod)

    @classmethod
    def column(cls, entries: Iterable[Any]) -> Mat:
        entries = list(entries)
        return cls([[x] for x in entries], dom=1, cod=len(entries))

    @property
    def array(self) -> np.ndarray:
        return self._array

    @property
    def rows(self) -> tuple[tuple[Fraction, ...], ...]:
        return tuple(tuple(Fraction(x) for x in row) for row in self._array.tolist())

    @property
    def shape(self) -> tuple[int, int]:
        return self.cod, self.dom

    def to_float(self) -> np.ndarray:
        return self._array.astype(np.float64)

    def transpose(self) -> Mat:
        return Mat.from_array(self._array.T, self.cod, self.dom)

    def __matmul__(self, other: Mat) -> Mat:
        if self.dom != other.cod:
            raise ShapeMismatch(f"cannot multiply {self.shape} by {other.shape}")
        if self.dom == 0:
            return Mat.zeros(self.cod, other.dom)
        return Mat.from_array(self._array.dot(other._array), other.dom, self.cod)

    def kron(self, other: Mat) -> Mat:
        dom, cod = self.dom * other.dom, self.cod * other.cod
        if not dom or not cod:
            return Mat.zeros(cod, dom)
        return Mat.from_array(np.kron(self._array, other._array), dom, cod)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Mat) or self.shape != other.shape:
            return False
        return self is other or bool(np.array_equal(self._array, other._array))

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.dom, self.cod, tuple(self._array.ravel().tolist())))
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join("[" + ", ".join(str(x) for x in r) + "]"
                         for r in self._array.tolist())
        return f"Mat([{body}], dom={self.dom}, cod={self.cod})"


class MatTensor(AutonomousModel):
    """Finite-dimensional rational vector spaces, ⊗ = Kronecker product.

    Objects are dimensions.  Basis index of ``a ⊗ b`` is ``i * b + j``, the
    same row-major convention as :func:`numpy.kron`.
    """

    name = "MatTensor"
    unit = 1

    def owns(self, f: Any) -> bool:
        return isinstance(f, Mat)

    def tensor_objects(self, a: int, b: int) -> int:
        return a * b

    def dom(self, f: Mat) -> int:
        return f.dom

    def cod(self, f: Mat) -> int:
        return f.cod

    def identity(self, obj: int) -> Mat:
        return Mat.identity(obj)

    def _own(self, *fs: Any) -> None:
        for f in fs:
            if not isinstance(f, Mat):
                raise ModelMismatch(f"MatTensor expects Mat, got {type(f).__name__}")

    def compose(self, g: Mat, f: Mat) -> Mat:
        self._own(f, g)
        if f.cod != g.dom:
            raise ShapeMismatch(f"cod {f.cod} does not match dom {g.dom}")
        return g @ f

    def tensor(self, f: Mat, g: Mat) -> Mat:
        self._own(f, g)
        return f.kron(g)

    def equal_morphisms(self, f: Mat, g: Mat) -> TriState:
        self.check_parallel(f, g)
        return TriState.EQUAL if f == g else TriState.NOT_EQUAL

    def is_identity(self, f: Mat) -> bool:
        if f.dom != f.cod:
            return False
        a = f.array
        return all(a[k, k] == 1 for k in range(f.dom)) and np.count_nonzero(a) == f.dom

    def apply(self, f: Mat, x: Sequence[Any]) -> tuple[Fraction, ...]:
        if len(x) != f.dom:
            raise ShapeMismatch(f"vector of length {len(x)} for dom {f.dom}")
        vec = np.array([_frac(b) for b in x], dtype=object)
        out = f.array.dot(vec) if f.dom else np.zeros(f.cod, dtype=object)
        return tuple(Fraction(v) for v in out.tolist())

    def adjoint(self, obj: int, n: int) -> int:
        return obj

    def eps(self, obj: int, n: int = 0) -> Mat:
        return Mat.from_array(np.eye(obj, dtype=np.int64).reshape(1, obj * obj),
                              obj * obj, 1)

    def eta(self, obj: int, n: int = 0) -> Mat:
        return self.eps(obj, n).transpose()


def mat_tensor(f: Mat, g: Mat) -> Mat:
    """Kronecker product of two matrices."""
    return MatTensor().tensor(f, g)


register_model(Mat, lambda _: MatTensor())


# ---------------------------------------------------------------------------
# Affine maps under direct sum
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Affine:
    """``x -> linear @ x + offset``; ``linear`` has shape ``(cod, dom)``."""

    linear: Mat
    offset: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "offset", tuple(_frac(b) for b in self.offset))
        if len(self.offset) != self.linear.cod:
            raise ShapeMismatch(
                f"offset of length {len(self.offset)} for cod {self.linear.cod}")

    @classmethod
    def make(cls, linear: Iterable[Iterable[Any]], offset: Iterable[Any],
             dom: int | None = None) -> Affine:
        offset = tuple(offset)
        return cls(Mat(linear, dom=dom, cod=len(offset)), offset)

    @classmethod
    def constant(cls, values: Iterable[Any], dom: int = 0) -> Affine:
        values = tuple(values)
        return cls(Mat.zeros(len(values), dom), values)

    @property
    def dom(self) -> int:
        return self.linear.dom

    @property
    def cod(self) -> int:
        return self.linear.cod

    def __call__(self, x: Sequence[Any]) -> tuple[Fraction, ...]:
        lin = MatTensor().apply(self.linear, x)
        return tuple(a + b for a, b in zip(lin, self.offset))


class AffDirectSum(CategoryModel):
    """Affine maps between ``Q^n`` with ⊕ as tensor and dimension 0 as unit."""

    name = "AffDirectSum"
    unit = 0

    def owns(self, f: Any) -> bool:
        return isinstance(f, Affine)

    def tensor_objects(self, a: int, b: int) -> int:
        return a + b

    def dom(self, f: Affine) -> int:
        return f.dom

    def cod(self, f: Affine) -> int:
        return f.cod

    def identity(self, obj: int) -> Affine:
        return Affine(Mat.identity(obj), (0,) * obj)

    def compose(self, g: Affine, f: Affine) -> Affine:
        return aff_compose(g, f)

    def tensor(self, f: Affine, g: Affine) -> Affine:
        return aff_direct_sum(f, g)

    def equal_morphisms(self, f: Affine, g: Affine) -> TriState:
        self.check_parallel(f, g)
        return TriState.EQUAL if f == g else TriState.NOT_EQUAL

    def apply(self, f: Affine, x: Sequence[Any]) -> tuple[Fraction, ...]:
        return f(x)


def _block_diag(a: Mat, b: Mat) -> Mat:
    out = np.zeros((a.cod + b.cod, a.dom + b.dom), dtype=np.int64).astype(object)
    out[:a.cod, :a.dom] = a.array
    out[a.cod:, a.dom:] = b.array
    return Mat.from_array(out, a.dom + b.dom, a.cod + b.cod)


def aff_compose(g: Affine, f: Affine) -> Affine:
    """Composite ``g ∘ f``, i.e. ``x -> M_g (M_f x + b_f) + b_g``."""
    if not (isinstance(f, Affine) and isinstance(g, Affine)):
        raise ModelMismatch("aff_compose expects two Affine maps")
    if f.cod != g.dom:
        raise ShapeMismatch(f"cod {f.cod} does not match dom {g.dom}")
    shifted = MatTensor().apply(g.linear, f.offset)
    return Affine(g.linear @ f.linear, tuple(a + b for a, b in zip(shifted, g.offset)))


def aff_direct_sum(f: Affine, g: Affine) -> Affine:
    if not (isinstance(f, Affine) and isinstance(g, Affine)):
        raise ModelMismatch("aff_direct_sum expects two Affine maps")
    return Affine(_block_diag(f.linear, g.linear), f.offset + g.offset)


register_model(Affine, lambda _: AffDirectSum())


# ---------------------------------------------------------------------------
# sigma-networks
# ---------------------------------------------------------------------------


def _sigmoid(x: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-x))


def _relu(x: np.ndarray) -> np.ndarray:
    return np.maximum(x, 0.0)


ACTIVATIONS: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "sigmoid": _sigmoid,
    "tanh": np.tanh,
    # unbounded, so outside the usual continuous/non-constant/bounded hypothesis
    "relu": _relu,
}
BOUNDED_ACTIVATIONS = frozenset({"sigmoid", "tanh"})


@dataclass(frozen=True)
class Activation:
    """Pointwise activation applied where ``mask`` is true."""

    mask: tuple[bool, ...]

    @property
    def dom(self) -> int:
        return len(self.mask)

    cod = dom


Stage = Affine | Activation


@dataclass(frozen=True)
class Net:
    """A morphism of Net_sigma: stages applied left to right."""

    dom: int
    cod: int
    stages: tuple[Stage, ...] = ()
    activation: str = "sigmoid"

    def __post_init__(self) -> None:
        if self.activation not in ACTIVATIONS:
            raise ValueError(f"unknown activation {self.activation!r}")
        width = self.dom
        for stage in self.stages:
            if stage.dom != width:
                raise ShapeMismatch(f"stage expects {stage.dom} inputs, got {width}")
            width = stage.cod
        if width != self.cod:
            raise ShapeMismatch(f"pipeline ends at {width}, declared cod {self.cod}")

    @classmethod
    def affine(cls, f: Affine, activation: str = "sigmoid") -> Net:
        return cls(f.dom, f.cod, (f,), activation)

    @classmethod
    def sigma(cls, dim: int, activation: str = "sigmoid") -> Net:
        return cls(dim, dim, (Activation((True,) * dim),), activation)

    def __call__(self, x: Sequence[float]) -> np.ndarray:
        return net_apply(self, x)


def _lift(stage: Stage, left: int, right: int) -> Stage:
    if isinstance(stage, Activation):
        return Activation((False,) * left + stage.mask + (False,) * right)
    aff = AffDirectSum()
    return aff.tensor(aff.tensor(aff.identity(left), stage), aff.identity(right))


def net_apply(f: Net, x: Sequence[float]) -> np.ndarray:
    """Evaluate a pipeline at a float vector."""
    v = np.asarray(x, dtype=np.float64).reshape(-1)
    if v.shape[0] != f.dom:
        raise ShapeMismatch(f"vector of length {v.shape[0]} for dom {f.dom}")
    sigma = ACTIVATIONS[f.activation]
    for stage in f.stages:
        if isinstance(stage, Activation):
            mask = np.asarray(stage.mask, dtype=bool)
            v = np.where(mask, sigma(v), v)
        else:
            w = stage.linear.to_float()
            v = w @ v + np.array(stage.offset, dtype=np.float64)
    return v


class NetSigma(CategoryModel):
    """Net_sigma with ⊕ as tensor.  Equality is only ever refuted by sampling."""

    name = "NetSigma"
    unit = 0
    tolerance = 1e-9
    n_samples = 16

    def __init__(self, activation: str = "sigmoid"):
        if activation not in ACTIVATIONS:
            raise ValueError(f"unknown activation {activation!r}")
        self.activation = activation

    def __repr__(self) -> str:
        return f"NetSigma({self.activation!r})"

    def __hash__(self) -> int:
        return hash((type(self), self.activation))

    def owns(self, f: Any) -> bool:
        return isinstance(f, Net) and f.activation == self.activation

    def tensor_objects(self, a: int, b: int) -> int:
        return a + b

    def dom(self, f: Net) -> int:
        return f.dom

    def cod(self, f: Net) -> int:
        return f.cod

    def identity(self, obj: int) -> Net:
        return Net(obj, obj, (), self.activation)

    def _own(self, *fs: Any) -> None:
        for f in fs:
            if not self.owns(f):
                raise ModelMismatch(f"{self!r} does not own {f!r}")

    def compose(self, g: Net, f: Net) -> Net:
        self._own(f, g)
        if f.cod != g.dom:
            raise ShapeMismatch(f"cod {f.cod} does not match dom {g.dom}")
        return Net(f.dom, g.cod, f.stages + g.stages, self.activation)

    def tensor(self, f: Net, g: Net) -> Net:
        self._own(f, g)
        stages = tuple(_lift(s, 0, g.dom) for s in f.stages)
        stages += tuple(_lift(s, f.cod, 0) for s in g.stages)
        return Net(f.dom + g.dom, f.cod + g.cod, stages, self.activation)

    def sample_points(self, dim: int) -> np.ndarray:
        rng = np.random.default_rng(20150101 + dim)
        return rng.normal(scale=2.0, size=(self.n_samples, dim))

    def equal_morphisms(self, f: Net, g: Net) -> TriState:
        self.check_parallel(f, g)
        if f == g:
            return TriState.EQUAL
        for x in self.sample_points(f.dom):
            if np.max(np.abs(net_apply(f, x) - net_apply(g, x)), initial=0.0) > self.tolerance:
                return TriState.NOT_EQUAL
        return TriState.UNKNOWN

    def is_identity(self, f: Net) -> bool:
        return f.dom == f.cod and not f.stages

    def apply(self, f: Net, x: Sequence[float]) -> np.ndarray:
        return net_apply(f, x)


register_model(Net, lambda f: NetSigma(f.activation))


# ---------------------------------------------------------------------------
# Free monoidal category on a signature
# ---------------------------------------------------------------------------

FreeObject = tuple  # tuple[str, ...]; () is the unit


class Term:
    """A morphism term of the free monoidal category."""

    dom: FreeObject
    cod: FreeObject

    def __rshift__(self, other: Term) -> Term:
        return FreeSignature().compose(other, self)

    def __matmul__(self, other: Term) -> Term:
        return FreeSignature().tensor(self, other)


@dataclass(frozen=True)
class Gen(Term):
    name: str
    dom: FreeObject
    cod: FreeObject

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class IdTerm(Term):
    obj: FreeObject

    @property
    def dom(self) -> FreeObject:
        return self.obj

    @property
    def cod(self) -> FreeObject:
        return self.obj

    def __str__(self) -> str:
        return f"id({format_free_object(self.obj)})"


@dataclass(frozen=True)
class Seq(Term):
    """``second ∘ first``."""

    first: Term
    second: Term

    @property
    def dom(self) -> FreeObject:
        return self.first.dom

    @property
    def cod(self) -> FreeObject:
        return self.second.cod

    def __str__(self) -> str:
        return f"({self.first} ; {self.second})"


@dataclass(frozen=True)
class Par(Term):
    left: Term
    right: Term

    @property
    def dom(self) -> FreeObject:
        return self.left.dom + self.right.dom

    @property
    def cod(self) -> FreeObject:
        return self.left.cod + self.right.cod

    def __str__(self) -> str:
        return f"({self.left} @ {self.right})"


def format_free_object(obj: FreeObject) -> str:
    return "*".join(obj) if obj else "I"


def generators_of(term: Term) -> list[Gen]:
    if isinstance(term, Gen):
        return [term]
    if isinstance(term, Seq):
        return generators_of(term.first) + generators_of(term.second)
    if isinstance(term, Par):
        return generators_of(term.left) + generators_of(term.right)
    return []


class FreeSignature(CategoryModel):
    """The free strict monoidal category over named objects and generators.

    Objects are tuples of basic names.  Equality of terms is decided by
    comparing the interchange normal forms of their (cup/cap free) diagrams,
    which is complete for the free monoidal category.
    """

    name = "FreeSignature"
    unit: FreeObject = ()

    def owns(self, f: Any) -> bool:
        return isinstance(f, Term)

    def tensor_objects(self, a: FreeObject, b: FreeObject) -> FreeObject:
        return tuple(a) + tuple(b)

    def object_of(self, base: Any) -> FreeObject:
        return (base,) if isinstance(base, str) else tuple(base)

    def base_of(self, obj: FreeObject) -> Any:
        return obj[0] if len(obj) == 1 else tuple(obj)

    def dom(self, f: Term) -> FreeObject:
        return f.dom

    def cod(self, f: Term) -> FreeObject:
        return f.cod

    def identity(self, obj: FreeObject) -> Term:
        return IdTerm(tuple(obj))

    def _own(self, *fs: Any) -> None:
        for f in fs:
            if not isinstance(f, Term):
                raise ModelMismatch(f"FreeSignature expects terms, got {type(f).__name__}")

    def compose(self, g: Term, f: Term) -> Term:
        self._own(f, g)
        if f.cod != g.dom:
            raise ShapeMismatch(
                f"cod {format_free_object(f.cod)} does not match dom "
                f"{format_free_object(g.dom)}")
        return Seq(f, g)

    def tensor(self, f: Term, g: Term) -> Term:
        self._own(f, g)
        return Par(f, g)

    def equal_morphisms(self, f: Term, g: Term) -> TriState:
        self.check_parallel(f, g)
        if f == g:
            return TriState.EQUAL
        from .rewrite import progressive_form

        same = progressive_form(f) == progressive_form(g)
        return TriState.EQUAL if same else TriState.NOT_EQUAL

    def is_identity(self, f: Term) -> bool:
        if isinstance(f, IdTerm):
            return True
        if isinstance(f, Gen) or f.dom != f.cod:
            return False
        from .rewrite import progressive_form

        return not progressive_form(f).slices


register_model(Term, lambda _: FreeSignature())


@dataclass
class Signature:
    """Declared basic objects, generators and (optional) basic-type order."""

    objects: dict[str, int | None]
    generators: dict[str, Gen]
    order: set[tuple[str, str]]

    def __init__(self, objects: dict[str, int | None] | None = None,
                 generators: Iterable[Gen] = (), order: Iterable[tuple[str, str]] = ()):
        self.objects = dict(objects or {})
        self.generators = {}
        self.order = set(order)
        for gen in generators:
            self.add_generator(gen)

    def add_object(self, name: str, dim: int | None = None) -> None:
        self.objects[name] = dim

    def add_generator(self, gen: Gen) -> None:
        for name in gen.dom + gen.cod:
            if name not in self.objects:
                raise ShapeMismatch(f"generator {gen.name} uses undeclared object {name}")
        self.generators[gen.name] = gen

    def leq(self, a: str, b: str) -> bool:
        """Reflexive-transitive closure of the declared order."""
        if a == b:
            return True
        seen, frontier = {a}, [a]
        while frontier:
            x = frontier.pop()
            for lo, hi in self.order:
                if lo == x and hi not in seen:
                    if hi == b:
                        return True
                    seen.add(hi)
                    frontier.append(hi)
        return False


# ---------------------------------------------------------------------------
# Bifunctoriality helper used by tests and the harness
# ---------------------------------------------------------------------------


def bifunctoriality_sides(model: CategoryModel, f1: Any, f2: Any, g1: Any,
                          g2: Any) -> tuple[Any, Any]:
    """Both sides of ``(f1∘f2) ⊗ (g1∘g2) = (f1⊗g1) ∘ (f2⊗g2)``."""
    lhs = model.tensor(model.compose(f1, f2), model.compose(g1, g2))
    rhs = model.compose(model.tensor(f1, g1), model.tensor(f2, g2))
    return lhs, rhs


def sigmoid(x: float) -> float:
    return 1.0 / (1.0 + math.exp(-x))
