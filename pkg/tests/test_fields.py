"""Tests for the finite field arithmetic."""
import numpy as np
import pytest

from indlift.backend.errors import KindError
from indlift.backend.fields import GaloisField, galois_field


def test_unsupported_order():
    """Test that a field order without tables is rejected."""
    with pytest.raises(KindError):
        GaloisField(6)


def test_prime_field_inverses():
    """Test that every nonzero element of GF(5) has its inverse."""
    field = galois_field(5)
    for a in range(1, 5):
        assert field.mul[a, field.inv[a]] == 1
        assert field.add[a, field.neg[a]] == 0


def test_gf4_multiplication():
    """Test that x * x = x + 1 in GF(4)."""
    field = galois_field(4)
    assert field.mul[2, 2] == 3
    assert field.mul[3, 3] == 2
    assert field.add[3, 3] == 0
    for a in range(1, 4):
        assert field.mul[a, field.inv[a]] == 1


def test_shared_instance():
    """Test that galois_field caches one instance per order."""
    assert galois_field(3) is galois_field(3)


def test_rank_and_rref():
    """Test row reduction over GF(2)."""
    field = galois_field(2)
    rows = np.array([[1, 1, 0], [0, 1, 1], [1, 0, 1]])
    reduced, pivots = field.rref(rows)
    assert pivots == (0, 1)
    assert field.rank(rows) == 2
    assert reduced.tolist() == [[1, 0, 1], [0, 1, 1]]


def test_nullspace():
    """Test that the nullspace is annihilated by the matrix."""
    field = galois_field(3)
    matrix = np.array([[1, 2, 0], [0, 1, 1]])
    basis = field.nullspace(matrix)
    assert basis.shape == (1, 3)
    assert not field.mat_mul(matrix, basis.T).any()


def test_solve():
    """Test solving a consistent and an inconsistent system."""
    field = galois_field(2)
    matrix = np.array([[1, 1], [1, 1]])
    assert field.solve(matrix, [1, 0]) is None
    solution = field.solve(matrix, [1, 1])
    assert solution is not None
    assert field.mat_mul(matrix, solution.reshape(-1, 1)).ravel().tolist() == [1, 1]


def test_general_linear_sizes():
    """Test the orders of GL(2, 2) and GL(2, 3)."""
    assert len(galois_field(2).general_linear(2)) == 6
    assert len(galois_field(3).general_linear(2)) == 48


def test_echelon_bases_count_subspaces():
    """Test that F_2^2 has five subspaces and F_3^2 has six."""
    assert len(galois_field(2).echelon_bases(2)) == 5
    assert len(galois_field(3).echelon_bases(2)) == 6


def test_coordinates():
    """Test coordinates in an echelon basis."""
    field = galois_field(2)
    basis = np.array([[1, 0, 1]])
    assert field.coordinates(basis, (0,), (1, 0, 1)) == (1,)
    assert field.coordinates(basis, (0,), (1, 1, 1)) is None
