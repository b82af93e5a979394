from __future__ import annotations

from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from autocat.models import Mat

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"
DIAGRAMS = FIXTURES / "diagrams"


def mat(rows) -> Mat:
    return Mat([[Fraction(x) for x in row] for row in rows])


def kron_oracle(a: Mat, b: Mat) -> list[list[Fraction]]:
    """Kronecker product by the index formula, independent of numpy.kron."""
    ra, ca = a.shape
    rb, cb = b.shape
    A, B = a.rows, b.rows
    return [[A[i // rb][j // cb] * B[i % rb][j % cb] for j in range(ca * cb)]
            for i in range(ra * rb)]


def matmul_oracle(a: Mat, b: Mat) -> list[list[Fraction]]:
    A, B = a.rows, b.rows
    return [[sum((A[i][k] * B[k][j] for k in range(len(B))), Fraction(0))
             for j in range(b.dom)] for i in range(a.cod)]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
