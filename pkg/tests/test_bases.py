import itertools

import numpy as np
import pytest

from quditqsv.bases import (
    ObservablePair,
    SudLabel,
    diagonal_level,
    embedded_lambda,
    gellmann3,
    pauli,
    sud_basis,
    sud_generator,
    weyl_D,
    weyl_X,
    weyl_Z,
)
from quditqsv.errors import EvenDimension, IndexOutOfRange

# the eight matrices as printed, plus the identity
GELLMANN_LISTED = {
    0: np.eye(3),
    1: [[0, 1, 0], [1, 0, 0], [0, 0, 0]],
    2: [[0, -1j, 0], [1j, 0, 0], [0, 0, 0]],
    3: [[1, 0, 0], [0, -1, 0], [0, 0, 0]],
    4: [[0, 0, 1], [0, 0, 0], [1, 0, 0]],
    5: [[0, 0, -1j], [0, 0, 0], [1j, 0, 0]],
    6: [[0, 0, 0], [0, 0, 1], [0, 1, 0]],
    7: [[0, 0, 0], [0, 0, -1j], [0, 1j, 0]],
    8: np.diag([1, 1, -2]) / np.sqrt(3),
}


def test_pauli():
    np.testing.assert_array_equal(pauli(0), np.eye(2))
    np.testing.assert_array_equal(pauli(3), np.diag([1, -1]))
    np.testing.assert_array_equal(pauli(2), [[0, -1j], [1j, 0]])
    with pytest.raises(IndexOutOfRange):
        pauli(4)


@pytest.mark.parametrize("k", range(9))
def test_gellmann3_matches_listed(k):
    np.testing.assert_allclose(gellmann3(k), GELLMANN_LISTED[k], atol=1e-15)
    np.testing.assert_allclose(sud_generator(3, k), GELLMANN_LISTED[k], atol=1e-15)
    if k:
        assert abs(np.trace(gellmann3(k) @ gellmann3(k)) - 2) < 1e-14


def test_gellmann_index_range():
    with pytest.raises(IndexOutOfRange):
        gellmann3(9)
    with pytest.raises(IndexOutOfRange):
        sud_generator(2, 4)


def test_sud_examples():
    np.testing.assert_allclose(sud_generator(4, 15), np.diag([1, 1, 1, -3]) / np.sqrt(6), atol=1e-15)
    for d in (2, 5):
        np.testing.assert_array_equal(sud_generator(d, 0), np.eye(d))
    for i in (1, 2, 3):
        np.testing.assert_array_equal(sud_generator(2, i), pauli(i))


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_sud_orthogonality_hermiticity_trace(d):
    ops = sud_basis(d)
    for a, b in itertools.product(range(1, d * d), repeat=2):
        assert abs(np.trace(ops[a] @ ops[b]) - 2 * (a == b)) < 1e-12
    for a in range(1, d * d):
        np.testing.assert_allclose(ops[a], ops[a].conj().T, atol=0)
        assert abs(np.trace(ops[a])) < 1e-14


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_sud_completeness(rng, d):
    ops = sud_basis(d)
    norms = np.array([np.trace(o @ o).real for o in ops])
    for _ in range(20):
        g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        h = g + g.conj().T
        coef = np.array([np.trace(h @ o) for o in ops]) / norms
        assert np.max(np.abs(coef.imag)) < 1e-12
        rebuilt = np.einsum("a,aij->ij", coef.real, ops)
        assert np.abs(rebuilt - h).max() < 1e-10


def test_diagonal_level():
    assert [diagonal_level(4, k) for k in (3, 8, 15)] == [2, 3, 4]
    assert diagonal_level(4, 1) is None and diagonal_level(3, 15) is None


def test_embedded_lambda():
    for i in (1, 2, 3):
        np.testing.assert_array_equal(embedded_lambda(2, i), pauli(i))
    np.testing.assert_array_equal(embedded_lambda(3, 3), np.diag([1, -1, 0]))
    m = embedded_lambda(4, 1)
    assert sorted(zip(*np.nonzero(m))) == [(0, 1), (1, 0)]
    with pytest.raises(IndexOutOfRange):
        embedded_lambda(3, 0)


def test_weyl_generators():
    ket2 = np.array([0, 0, 1])
    np.testing.assert_array_equal(weyl_X(3) @ ket2, [1, 0, 0])
    np.testing.assert_allclose(weyl_Z(2), np.diag([1, -1]), atol=1e-15)
    for d in (2, 3, 5):
        np.testing.assert_allclose(np.linalg.matrix_power(weyl_X(d), d), np.eye(d), atol=1e-12)
        np.testing.assert_allclose(np.linalg.matrix_power(weyl_Z(d), d), np.eye(d), atol=1e-12)


def test_weyl_D_examples():
    np.testing.assert_allclose(weyl_D(3, 0, 0), np.eye(3))
    u = weyl_D(3, 1, 1)
    assert np.abs(u.conj().T @ u - np.eye(3)).max() < 1e-12
    with pytest.raises(EvenDimension):
        weyl_D(4, 1, 1)
    with pytest.raises(IndexOutOfRange):
        weyl_D(3, 3, 0)


@pytest.mark.parametrize("d", [3, 5])
def test_weyl_trace_orthogonality_brute_force(d):
    labels = list(itertools.product(range(d), repeat=2))
    for (p, q), (pp, qq) in itertools.product(labels, repeat=2):
        t = np.trace(weyl_D(d, p, q).conj().T @ weyl_D(d, pp, qq))
        assert abs(t - d * (p == pp and q == qq)) < 1e-12


def test_observable_pair_naming():
    pair = ObservablePair(SudLabel(3, 3), SudLabel(3, 8))
    assert pair.kind == "sud" and pair.name == "3_8"
