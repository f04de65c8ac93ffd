"""Dense complex linear algebra for small bipartite Hilbert spaces.

Matrices are plain ``numpy`` arrays of ``complex128``. Everything here is a
pure function of its inputs.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .errors import DimensionMismatch, InvalidDensityMatrix, NotHermitian

ATOL_HERM = 1e-10
ATOL_NORM = 1e-12
DEGEN_GAP = 1e-9


@dataclass(frozen=True)
class EigenDecomposition:
    """Ascending eigenvalues with the matching orthonormal eigenvectors as columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T

    def clusters(self, gap: float = DEGEN_GAP) -> list[tuple[float, np.ndarray]]:
        """Group eigenvalues closer than ``gap`` and return ``(value, projector)`` pairs.

        Vectors inside a degenerate cluster are arbitrary, the projector is not.
        """
        vals, vecs = self.eigenvalues, self.eigenvectors
        out: list[tuple[float, np.ndarray]] = []
        start = 0
        for i in range(1, len(vals) + 1):
            if i == len(vals) or vals[i] - vals[i - 1] > gap:
                block = vecs[:, start:i]
                out.append((float(np.mean(vals[start:i])), block @ block.conj().T))
                start = i
        return out


def as_matrix(m) -> np.ndarray:
    return np.asarray(m, dtype=complex)


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.transpose(m))


def kron(*ops) -> np.ndarray:
    """Kronecker product of any number of operators (or kets)."""
    return reduce(np.kron, [np.asarray(o, dtype=complex) for o in ops])


def is_hermitian(m: np.ndarray, atol: float = ATOL_HERM) -> bool:
    m = np.asarray(m)
    return m.ndim == 2 and m.shape[0] == m.shape[1] and np.allclose(m, dagger(m), rtol=0, atol=atol)


def hermitian_eig(m) -> EigenDecomposition:
    m = as_matrix(m)
    if not is_hermitian(m):
        raise NotHermitian("matrix is not Hermitian within %g" % ATOL_HERM)
    # eigh only reads one triangle, so symmetrise first
    vals, vecs = np.linalg.eigh(0.5 * (m + dagger(m)))
    return EigenDecomposition(vals, vecs)


def projector(ket) -> np.ndarray:
    ket = np.asarray(ket, dtype=complex).ravel()
    return np.outer(ket, ket.conj())


def partial_transpose(rho, dims: tuple[int, int], subsystem: int = 1) -> np.ndarray:
    """Transpose the ``subsystem``-th tensor factor (0 or 1) of a bipartite operator."""
    d1, d2 = dims
    rho = as_matrix(rho)
    if rho.shape != (d1 * d2, d1 * d2):
        raise DimensionMismatch(f"operator of shape {rho.shape} does not match dims {dims}")
    r = rho.reshape(d1, d2, d1, d2)
    if subsystem == 0:
        r = r.transpose(2, 1, 0, 3)
    elif subsystem == 1:
        r = r.transpose(0, 3, 2, 1)
    else:
        raise DimensionMismatch(f"subsystem must be 0 or 1, got {subsystem}")
    return r.reshape(d1 * d2, d1 * d2)


def check_density_matrix(rho, dim: int | None = None, atol: float = ATOL_HERM) -> np.ndarray:
    rho = as_matrix(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise InvalidDensityMatrix(f"not a square matrix: shape {rho.shape}")
    if dim is not None and rho.shape[0] != dim:
        raise DimensionMismatch(f"expected a {dim}x{dim} density matrix, got {rho.shape}")
    if not is_hermitian(rho, atol):
        raise InvalidDensityMatrix("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1) > atol:
        raise InvalidDensityMatrix(f"trace is {np.trace(rho).real:.3g}, expected 1")
    return rho


def negativity(rho, dims: tuple[int, int]) -> float:
    """Sum of the magnitudes of the negative eigenvalues of the partial transpose."""
    d1, d2 = dims
    rho = check_density_matrix(rho)
    if rho.shape[0] != d1 * d2:
        raise DimensionMismatch(f"operator of shape {rho.shape} does not match dims {dims}")
    vals = np.linalg.eigvalsh(partial_transpose(rho, dims))
    return float(np.abs(vals[vals < 0]).sum())


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR of a Ginibre matrix."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * ph


def random_ket(n: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return v / np.linalg.norm(v)


def random_density_matrix(n: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    rank = n if rank is None else rank
    g = rng.standard_normal((n, rank)) + 1j * rng.standard_normal((n, rank))
    rho = g @ dagger(g)
    return rho / np.trace(rho).real
