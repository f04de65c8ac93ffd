"""Operator families: Pauli, Gell-Mann, generalized SU(d) generators, embedded
Pauli blocks and the Weyl clock/shift algebra."""
from __future__ import annotations

from functools import lru_cache
from typing import NamedTuple, Union

import numpy as np

from .errors import EvenDimension, IndexOutOfRange


class SudLabel(NamedTuple):
    d: int
    k: int

    def __str__(self) -> str:
        return str(self.k)


class WeylLabel(NamedTuple):
    d: int
    p: int
    q: int

    @property
    def index(self) -> int:
        return self.p * self.d + self.q

    def __str__(self) -> str:
        return f"{self.p}_{self.q}"


Label = Union[SudLabel, WeylLabel]


class ObservablePair(NamedTuple):
    first: Label
    second: Label

    @property
    def kind(self) -> str:
        return "sud" if isinstance(self.first, SudLabel) else "weyl"

    @property
    def name(self) -> str:
        return f"{self.first}_{self.second}"


_PAULI = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def pauli(i: int) -> np.ndarray:
    """``I, X, Y, Z`` for ``i = 0, 1, 2, 3``."""
    if not 0 <= i <= 3:
        raise IndexOutOfRange(f"Pauli index {i} not in 0..3")
    return _PAULI[i].copy()


def _check_dim(d: int) -> None:
    if d < 2:
        raise IndexOutOfRange(f"dimension must be >= 2, got {d}")


def _generator_table(d: int) -> list[np.ndarray]:
    # n = 2..d: symmetric/antisymmetric pair for each column j < n, then the
    # diagonal generator, which lands at index n**2 - 1.
    mats = [np.eye(d, dtype=complex)]
    for n in range(2, d + 1):
        col = n - 1
        for j in range(col):
            x = np.zeros((d, d), dtype=complex)
            x[j, col] = x[col, j] = 1
            y = np.zeros((d, d), dtype=complex)
            y[j, col] = -1j
            y[col, j] = 1j
            mats += [x, y]
        diag = np.zeros(d)
        diag[: n - 1] = np.sqrt(2 / (n * (n - 1)))
        diag[n - 1] = -np.sqrt(2 * (n - 1) / n)
        mats.append(np.diag(diag).astype(complex))
    return mats


@lru_cache(maxsize=None)
def sud_basis(d: int) -> np.ndarray:
    """All ``d**2`` operators ``lambda_k`` stacked as a read-only ``(d*d, d, d)`` array."""
    _check_dim(d)
    arr = np.array(_generator_table(d))
    arr.setflags(write=False)
    return arr


def sud_generator(d: int, k: int) -> np.ndarray:
    _check_dim(d)
    if not 0 <= k < d * d:
        raise IndexOutOfRange(f"SU({d}) index {k} not in 0..{d * d - 1}")
    return sud_basis(d)[k].copy()


def gellmann3(k: int) -> np.ndarray:
    """The eight Gell-Mann matrices plus the identity at ``k = 0``."""
    if not 0 <= k <= 8:
        raise IndexOutOfRange(f"Gell-Mann index {k} not in 0..8")
    return sud_generator(3, k)


def sud_normalizers(d: int) -> np.ndarray:
    """``sqrt(Tr[lambda_k^2])``: ``sqrt(d)`` for the identity, ``sqrt(2)`` otherwise."""
    out = np.full(d * d, np.sqrt(2.0))
    out[0] = np.sqrt(d)
    return out


def diagonal_level(d: int, k: int) -> int | None:
    """The ``n`` of a diagonal generator ``lambda_{n^2-1}``, or None for other labels."""
    n = int(round(np.sqrt(k + 1)))
    return n if k >= 1 and n * n - 1 == k and n <= d else None


def embedded_lambda(d: int, i: int, levels: tuple[int, int] = (0, 1)) -> np.ndarray:
    """Pauli ``sigma_i`` placed on the 2x2 block spanned by ``levels``, zero elsewhere."""
    _check_dim(d)
    if i not in (1, 2, 3):
        raise IndexOutOfRange(f"embedded Pauli index {i} not in 1..3")
    a, b = levels
    if not (0 <= a < d and 0 <= b < d and a != b):
        raise IndexOutOfRange(f"levels {levels} invalid for d={d}")
    out = np.zeros((d, d), dtype=complex)
    out[np.ix_([a, b], [a, b])] = _PAULI[i]
    return out


def weyl_Z(d: int) -> np.ndarray:
    _check_dim(d)
    return np.diag(np.exp(2j * np.pi * np.arange(d) / d))


def weyl_X(d: int) -> np.ndarray:
    """Shift ``|k> -> |k+1 mod d>``."""
    _check_dim(d)
    return np.roll(np.eye(d, dtype=complex), 1, axis=0)


def _check_odd(d: int) -> None:
    _check_dim(d)
    if d % 2 == 0:
        raise EvenDimension(f"the Weyl basis phase convention needs odd d, got {d}")


def weyl_D(d: int, p: int, q: int) -> np.ndarray:
    """Displacement ``exp(-i pi p q / d) Z^p X^q``."""
    _check_odd(d)
    if not (0 <= p < d and 0 <= q < d):
        raise IndexOutOfRange(f"Weyl label ({p}, {q}) out of range for d={d}")
    zp = np.linalg.matrix_power(weyl_Z(d), p)
    xq = np.linalg.matrix_power(weyl_X(d), q)
    return np.exp(-1j * np.pi * p * q / d) * zp @ xq


@lru_cache(maxsize=None)
def weyl_basis(d: int) -> np.ndarray:
    """All displacements stacked as ``(d*d, d, d)``, index ``p*d + q``."""
    _check_odd(d)
    arr = np.array([weyl_D(d, p, q) for p in range(d) for q in range(d)])
    arr.setflags(write=False)
    return arr


def sud_label(d: int, k: int) -> SudLabel:
    if not 0 <= k < d * d:
        raise IndexOutOfRange(f"SU({d}) index {k} not in 0..{d * d - 1}")
    return SudLabel(d, k)


def weyl_label(d: int, index: int) -> WeylLabel:
    if not 0 <= index < d * d:
        raise IndexOutOfRange(f"Weyl index {index} out of range for d={d}")
    return WeylLabel(d, index // d, index % d)
