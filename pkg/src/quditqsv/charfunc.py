"""Characteristic functions of bipartite states in the SU(d) and Weyl bases.

For a two-site state the function is indexed by a pair of single-site
labels. Values are stored as a dense ``(d1**2, d2**2)`` array; entry
``[a, b]`` is ``Tr[rho A_a (x) B_b] / (N_a N_b)`` with ``N`` the Hilbert-Schmidt
norm of each operator (for Weyl operators ``Tr[rho D_a^dag (x) D_b^dag] / d``).
This normalization makes ``sum |chi|^2 = Tr[rho^2]``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .bases import ObservablePair, SudLabel, WeylLabel, sud_basis, sud_normalizers, weyl_basis
from .errors import BasisMismatch, DimensionMismatch, IncompleteFunction, NotHermitian
from .linalg import ATOL_HERM, as_matrix, is_hermitian

SUD = "sud"
WEYL = "weyl"
SUPPORT_THRESHOLD = 1e-12


@dataclass(frozen=True, eq=False)
class CharFunction:
    basis: str
    d1: int
    d2: int
    values: np.ndarray

    def label(self, a: int, b: int) -> ObservablePair:
        if self.basis == SUD:
            return ObservablePair(SudLabel(self.d1, a), SudLabel(self.d2, b))
        return ObservablePair(
            WeylLabel(self.d1, a // self.d1, a % self.d1),
            WeylLabel(self.d2, b // self.d2, b % self.d2),
        )

    def __getitem__(self, key) -> complex:
        if isinstance(key, ObservablePair):
            key = tuple(_flat(lab) for lab in key)
        return self.values[key]

    def items(self) -> Iterator[tuple[ObservablePair, complex]]:
        for a, b in np.ndindex(self.values.shape):
            yield self.label(a, b), self.values[a, b]

    def normalizers(self) -> np.ndarray:
        """Two-site normalizer ``N_a N_b`` for every entry."""
        return pair_normalizers(self.basis, self.d1, self.d2)

    def purity(self) -> float:
        return float(np.sum(np.abs(self.values) ** 2))

    def to_json(self) -> str:
        entries = []
        for lab, v in self.items():
            v = complex(v)
            entries.append({"label": _label_json(lab), "re": v.real, "im": v.imag})
        return json.dumps({"basis": self.basis, "d1": self.d1, "d2": self.d2, "values": entries})

    @classmethod
    def from_json(cls, text: str) -> "CharFunction":
        doc = json.loads(text)
        basis, d1, d2 = doc["basis"], int(doc["d1"]), int(doc["d2"])
        if basis not in (SUD, WEYL):
            raise BasisMismatch(f"unknown basis {basis!r}")
        vals = np.full((d1 * d1, d2 * d2), np.nan, dtype=complex)
        for e in doc["values"]:
            first, second = e["label"]
            if basis == SUD:
                a, b = int(first), int(second)
            else:
                a, b = first[0] * d1 + first[1], second[0] * d2 + second[1]
            vals[a, b] = complex(e["re"], e["im"])
        return cls(basis, d1, d2, vals)


def _flat(lab) -> int:
    return lab.k if isinstance(lab, SudLabel) else lab.index


def _label_json(lab: ObservablePair):
    if lab.kind == SUD:
        return [lab.first.k, lab.second.k]
    return [[lab.first.p, lab.first.q], [lab.second.p, lab.second.q]]


def pair_normalizers(basis: str, d1: int, d2: int) -> np.ndarray:
    if basis == SUD:
        return np.outer(sud_normalizers(d1), sud_normalizers(d2))
    return np.full((d1 * d1, d2 * d2), np.sqrt(d1 * d2))


def _operators(basis: str, d: int) -> np.ndarray:
    if basis == SUD:
        return sud_basis(d)
    if basis == WEYL:
        return weyl_basis(d)
    raise BasisMismatch(f"unknown basis {basis!r}")


def _check_state(rho, d1: int, d2: int) -> np.ndarray:
    rho = as_matrix(rho)
    if rho.shape != (d1 * d2, d1 * d2):
        raise DimensionMismatch(f"operator of shape {rho.shape} does not match {d1}x{d2}")
    if not is_hermitian(rho, ATOL_HERM):
        raise NotHermitian("state must be Hermitian")
    return rho


def _expand(basis: str, rho: np.ndarray, d1: int, d2: int) -> np.ndarray:
    ops1, ops2 = _operators(basis, d1), _operators(basis, d2)
    if basis == WEYL:
        ops1, ops2 = ops1.conj().transpose(0, 2, 1), ops2.conj().transpose(0, 2, 1)
    r = rho.reshape(d1, d2, d1, d2)
    # Tr[rho (A (x) B)] = sum rho[(i j),(k l)] A[k, i] B[l, j]
    tr = np.einsum("ijkl,aki,blj->ab", r, ops1, ops2)
    return tr / pair_normalizers(basis, d1, d2)


def char_sud(rho, d1: int, d2: int) -> CharFunction:
    rho = _check_state(rho, d1, d2)
    vals = _expand(SUD, rho, d1, d2)
    return CharFunction(SUD, d1, d2, vals.real.copy())


def char_weyl(rho, d: int, d2: int | None = None) -> CharFunction:
    d2 = d if d2 is None else d2
    rho = _check_state(rho, d, d2)
    return CharFunction(WEYL, d, d2, _expand(WEYL, rho, d, d2))


def characteristic(rho, d1: int, d2: int, basis: str = SUD) -> CharFunction:
    if basis == SUD:
        return char_sud(rho, d1, d2)
    if basis == WEYL:
        return char_weyl(rho, d1, d2)
    raise BasisMismatch(f"unknown basis {basis!r}")


def reconstruct(chi: CharFunction) -> np.ndarray:
    d1, d2 = chi.d1, chi.d2
    vals = np.asarray(chi.values)
    if vals.shape != (d1 * d1, d2 * d2) or not np.all(np.isfinite(vals)):
        raise IncompleteFunction("characteristic function is missing values")
    coef = vals / chi.normalizers()
    ops1, ops2 = _operators(chi.basis, d1), _operators(chi.basis, d2)
    out = np.einsum("ab,aik,bjl->ijkl", coef, ops1, ops2)
    return out.reshape(d1 * d2, d1 * d2)


def fidelity_overlap(chi1: CharFunction, chi2: CharFunction) -> float:
    """``Tr[rho1 rho2]`` from the two characteristic functions."""
    if chi1.basis != chi2.basis or (chi1.d1, chi1.d2) != (chi2.d1, chi2.d2):
        raise BasisMismatch(
            f"cannot overlap {chi1.basis}{(chi1.d1, chi1.d2)} with {chi2.basis}{(chi2.d1, chi2.d2)}"
        )
    return float(np.sum(chi1.values * np.conj(chi2.values)).real)


def support(chi: CharFunction, threshold: float = SUPPORT_THRESHOLD) -> list[tuple[ObservablePair, float]]:
    """Labels with ``|chi| > threshold`` and their sampling weight ``|chi|^2``."""
    mag = np.abs(chi.values)
    return [
        (chi.label(a, b), float(mag[a, b] ** 2))
        for a, b in zip(*np.nonzero(mag > threshold))
    ]
