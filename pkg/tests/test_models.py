from __future__ import annotations

import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from autocat.errors import ModelMismatch, ShapeMismatch
from autocat.harness import random_affine, random_mat, random_net
from autocat.models import (AffDirectSum, Affine, FreeSignature, Gen, IdTerm, Mat, MatTensor,
                            Net, NetSigma, Signature, TriState, aff_compose, aff_direct_sum,
                            bifunctoriality_sides, mat_tensor, model_of, net_apply, sigmoid)

from conftest import kron_oracle, mat, matmul_oracle


# ---------------------------------------------------------------------------
# MatTensor
# ---------------------------------------------------------------------------


def test_mat_tensor_identity_with_scalar():
    assert mat_tensor(mat([[1, 0], [0, 1]]), mat([[2]])) == mat([[2, 0], [0, 2]])


def test_mat_tensor_row_by_column_matches_index_formula():
    f, g = mat([[1, 2]]), mat([[3], [4]])
    out = mat_tensor(f, g)
    assert out == mat([[3, 6], [4, 8]])
    assert [list(r) for r in out.rows] == kron_oracle(f, g)
    assert (out.cod, out.dom) == (2, 2)


def test_mat_tensor_yanking_dimension_two_by_explicit_product():
    m = MatTensor()
    eps, eta = m.eps(2), m.eta(2)
    assert eps.shape == (1, 4) and eta.shape == (4, 1)
    # (eps ⊗ 1)∘(1 ⊗ eta) as an explicit 2x8 by 8x2 product
    left = mat_tensor(eps, Mat.identity(2))
    right = mat_tensor(Mat.identity(2), eta)
    assert left.shape == (2, 8) and right.shape == (8, 2)
    assert matmul_oracle(left, right) == [[1, 0], [0, 1]]
    assert m.compose(left, right) == Mat.identity(2)


@pytest.mark.parametrize("d", [1, 2, 3, 4, 5])
@pytest.mark.parametrize("n", [-3, -1, 0, 2, 3])
def test_mat_tensor_yanking_both_composites(d, n):
    m = MatTensor()
    one = Mat.identity(d)
    z1 = m.compose(m.tensor(one, m.eps(d, n)), m.tensor(m.eta(d, n), one))
    z2 = m.compose(m.tensor(m.eps(d, n), one), m.tensor(one, m.eta(d, n)))
    assert z1 == one and z2 == one
    assert m.left_adj(d) == m.right_adj(d) == d


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(1, 3), st.integers(0, 2**31))
def test_mat_tensor_kron_matches_oracle(r, c, k, seed):
    rng = random.Random(seed)
    a, b = random_mat(rng, r, c), random_mat(rng, k, r)
    assert [list(x) for x in mat_tensor(a, b).rows] == kron_oracle(a, b)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**31))
def test_mat_tensor_associative_and_unital(seed):
    rng = random.Random(seed)
    m = MatTensor()
    a, b, c = (random_mat(rng, rng.randint(1, 2), rng.randint(1, 2)) for _ in range(3))
    assert m.tensor(m.tensor(a, b), c) == m.tensor(a, m.tensor(b, c))
    unit = m.identity(m.unit)
    assert m.tensor(unit, a) == a == m.tensor(a, unit)
    assert m.tensor_objects(m.tensor_objects(2, 3), 4) == m.tensor_objects(2, m.tensor_objects(3, 4))


def test_mat_equality_and_errors():
    m = MatTensor()
    assert m.equal_morphisms(Mat.identity(3), Mat.identity(3)) is TriState.EQUAL
    assert m.equal_morphisms(mat([[1, 0], [0, 1]]), mat([[1, 0], [0, 2]])) is TriState.NOT_EQUAL
    with pytest.raises(ShapeMismatch):
        m.equal_morphisms(Mat.identity(2), Mat.identity(3))
    with pytest.raises(ShapeMismatch):
        m.compose(Mat.identity(2), Mat.identity(3))
    with pytest.raises(ModelMismatch):
        mat_tensor(Mat.identity(2), Affine.make([[1]], [0]))


def test_mat_is_exact():
    a = mat([[Fraction(1, 3)]])
    assert (a @ mat([[3]])) == mat([[1]])
    assert Mat.from_array(np.array([[0.5]])).rows == ((Fraction(1, 2),),)


# ---------------------------------------------------------------------------
# AffDirectSum
# ---------------------------------------------------------------------------


def _solve_affine_1d(fn) -> tuple[Fraction, Fraction]:
    """Slope and intercept of a 1-d affine map from its values at 0 and 1."""
    b = fn((Fraction(0),))[0]
    return fn((Fraction(1),))[0] - b, b


def test_aff_compose_post_identity():
    f = Affine.make([[1, 0], [0, 1]], [1, 1])
    g = Affine.make([[1, 0], [0, 1]], [0, 0])
    assert aff_compose(g, f) == f


def test_aff_compose_scalar_by_evaluation_oracle():
    f, g = Affine.make([[2]], [3]), Affine.make([[1]], [4])
    slope, intercept = _solve_affine_1d(lambda x: g(f(x)))
    assert (slope, intercept) == (2, 7)
    assert aff_compose(g, f) == Affine.make([[2]], [7])


def test_aff_compose_two_dim_by_basis_points():
    f = Affine.make([[0, 1], [1, 0]], [1, 0])
    g = Affine.make([[1, 0], [0, 2]], [0, 1])
    h = aff_compose(g, f)
    zero, e1, e2 = (0, 0), (1, 0), (0, 1)
    b = g(f(zero))
    cols = [tuple(x - y for x, y in zip(g(f(e)), b)) for e in (e1, e2)]
    assert b == (1, 1)
    assert [list(r) for r in zip(*cols)] == [[0, 1], [2, 0]]
    assert h == Affine.make([[0, 1], [2, 0]], [1, 1])


def test_aff_compose_is_not_the_double_counting_formula():
    # the alternative constant part g(f(0)) + g(0) would give 7 + 4 = 11 here
    f, g = Affine.make([[2]], [3]), Affine.make([[1]], [4])
    assert aff_compose(g, f)((0,)) == g(f((0,))) == (7,)


def test_aff_direct_sum_examples():
    one = Affine.make([[1]], [0])
    assert aff_direct_sum(one, one) == Affine.make([[1, 0], [0, 1]], [0, 0])
    f, g = Affine.make([[2]], [1]), Affine.make([[3]], [2])
    s = aff_direct_sum(f, g)
    assert s == Affine.make([[2, 0], [0, 3]], [1, 2])
    for x, y in [(0, 0), (1, 5), (-2, 3)]:
        assert s((x, y)) == f((x,)) + g((y,))


def test_aff_bifunctoriality_at_affinely_independent_points():
    rng = random.Random(5)
    a = AffDirectSum()
    for _ in range(20):
        f, g = random_affine(rng, 2, 2), random_affine(rng, 2, 2)
        k, h = random_affine(rng, 2, 2), random_affine(rng, 2, 2)
        lhs = a.tensor(a.compose(g, f), a.compose(h, k))
        rhs = a.compose(a.tensor(g, h), a.tensor(f, k))
        for p in [(0, 0, 0, 0), (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)]:
            assert lhs(p) == rhs(p)
        assert a.equal_morphisms(lhs, rhs) is TriState.EQUAL


def test_aff_errors():
    a = AffDirectSum()
    with pytest.raises(ShapeMismatch):
        a.compose(Affine.make([[1]], [0]), Affine.make([[1, 0], [0, 1]], [0, 0]))
    with pytest.raises(ModelMismatch):
        a.tensor(Affine.make([[1]], [0]), Mat.identity(1))


def test_aff_unit_is_zero_dimensional():
    a = AffDirectSum()
    f = Affine.make([[2]], [1])
    assert a.tensor(a.identity(0), f) == f == a.tensor(f, a.identity(0))


# ---------------------------------------------------------------------------
# NetSigma
# ---------------------------------------------------------------------------


def test_net_apply_empty_pipeline():
    assert list(net_apply(NetSigma().identity(2), [1, 2])) == [1, 2]


def test_net_apply_single_affine_stage():
    assert list(net_apply(Net.affine(Affine.make([[1]], [1])), [0])) == [1]


def test_net_apply_sigmoid_at_zero():
    n = NetSigma().compose(Net.sigma(1), Net.affine(Affine.make([[1]], [0])))
    assert net_apply(n, [0])[0] == pytest.approx(0.5, abs=1e-15)
    assert sigmoid(0.0) == 0.5
    assert net_apply(Net.sigma(1), [2.0])[0] == pytest.approx(1 / (1 + math.exp(-2.0)))


def test_net_activations_selectable():
    assert net_apply(Net.sigma(1, "tanh"), [1.0])[0] == pytest.approx(math.tanh(1.0))
    assert list(net_apply(Net.sigma(2, "relu"), [-1.0, 2.0])) == [0.0, 2.0]
    with pytest.raises(ValueError):
        NetSigma("step")


def test_net_dimension_mismatch():
    with pytest.raises(ShapeMismatch):
        net_apply(Net.sigma(2), [1.0])


def test_net_equality_tristate():
    m = NetSigma()
    a = m.compose(Net.sigma(1), Net.affine(Affine.make([[1]], [0])))
    b = m.compose(Net.sigma(1), Net.affine(Affine.make([[1]], [0])))
    assert m.equal_morphisms(a, b) is TriState.EQUAL
    c = m.compose(Net.sigma(1), Net.affine(Affine.make([[2]], [0])))
    assert m.equal_morphisms(a, c) is TriState.NOT_EQUAL
    # syntactically different, numerically equal: never claims EQUAL
    split = m.compose(m.compose(Net.sigma(1), Net.affine(Affine.make([[1]], [0]))),
                      m.identity(1))
    d = Net(1, 1, (Affine.make([[1]], [0]), Affine.make([[1]], [0])) + split.stages[1:])
    assert m.equal_morphisms(a, d) is TriState.UNKNOWN
    with pytest.raises(ShapeMismatch):
        m.equal_morphisms(Net.sigma(1), Net.sigma(2))


def test_net_bifunctoriality_sampled():
    rng = random.Random(9)
    m = NetSigma()
    for _ in range(20):
        f2, f1 = random_net(rng, 2, 1), random_net(rng, 2, 2)
        g2, g1 = random_net(rng, 1, 2), random_net(rng, 3, 1)
        lhs, rhs = bifunctoriality_sides(m, f1, f2, g1, g2)
        for x in m.sample_points(lhs.dom):
            assert np.max(np.abs(net_apply(lhs, x) - net_apply(rhs, x))) <= 1e-9
        assert m.equal_morphisms(lhs, rhs) is not TriState.NOT_EQUAL


# ---------------------------------------------------------------------------
# FreeSignature
# ---------------------------------------------------------------------------

F = Gen("f", ("A",), ("B",))
G = Gen("g", ("B",), ("C",))
H = Gen("h", ("C",), ("C",))


def test_free_interchange_equality():
    free = FreeSignature()
    lhs = (F >> G) @ (F >> G)
    rhs = (F @ F) >> (G @ G)
    assert free.equal_morphisms(lhs, rhs) is TriState.EQUAL
    assert free.equal_morphisms(F >> G >> H, F >> (G >> H)) is TriState.EQUAL
    assert free.equal_morphisms(F >> G, F >> G >> H) is TriState.NOT_EQUAL


def test_free_identities():
    free = FreeSignature()
    assert free.equal_morphisms(free.compose(F, IdTerm(("A",))), F) is TriState.EQUAL
    assert free.is_identity(IdTerm(("A", "B")))
    assert not free.is_identity(H)
    assert free.is_identity(IdTerm(("A",)) @ IdTerm(("B",)))
    with pytest.raises(ShapeMismatch):
        free.compose(F, F)
    with pytest.raises(ShapeMismatch):
        free.equal_morphisms(F, G)


def test_free_object_monoid():
    free = FreeSignature()
    assert free.tensor_objects(("A",), ()) == ("A",)
    assert free.tensor_objects(("A",), ("B", "C")) == ("A", "B", "C")
    assert model_of(F) == free


def test_signature_order_closure():
    sig = Signature({"a": None, "b": None, "c": None}, order=[("a", "b"), ("b", "c")])
    assert sig.leq("a", "c") and sig.leq("a", "a") and not sig.leq("c", "a")
    with pytest.raises(ShapeMismatch):
        sig.add_generator(Gen("x", ("z",), ()))


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**31))
def test_bifunctoriality_exact_in_mat_and_aff(seed):
    rng = random.Random(seed)
    for model, gen in ((MatTensor(), random_mat), (AffDirectSum(), random_affine)):
        lo = 1 if isinstance(model, MatTensor) else 0
        a, b, c, x, y, z = (rng.randint(lo, 3) for _ in range(6))
        lhs, rhs = bifunctoriality_sides(model, gen(rng, c, b), gen(rng, b, a),
                                         gen(rng, z, y), gen(rng, y, x))
        assert model.equal_morphisms(lhs, rhs) is TriState.EQUAL
