"""Fast invariant checks run by ``quditqsv check`` and the ``--check`` flag."""
from __future__ import annotations

import math
from typing import Callable

import numpy as np

from . import bases, charfunc, linalg, states, verification

CheckResult = tuple[str, bool, str]


def _sud_orthogonality() -> tuple[bool, str]:
    worst = 0.0
    for d in (2, 3, 4, 5):
        ops = bases.sud_basis(d)[1:]
        gram = np.einsum("aij,bji->ab", ops, ops)
        worst = max(worst, float(np.abs(gram - 2 * np.eye(len(ops))).max()))
    return worst < 1e-12, f"max |Tr[l_a l_b] - 2 delta_ab| = {worst:.2e}"


def _weyl_orthogonality() -> tuple[bool, str]:
    worst = 0.0
    for d in (3, 5):
        ops = bases.weyl_basis(d)
        gram = np.einsum("aji,bjk->abik", ops.conj(), ops).trace(axis1=2, axis2=3)
        worst = max(worst, float(np.abs(gram - d * np.eye(d * d)).max()))
    return worst < 1e-12, f"max |Tr[D_a^dag D_b] - d delta_ab| = {worst:.2e}"


def _pt_involution() -> tuple[bool, str]:
    rng = np.random.default_rng(0)
    rho = linalg.random_density_matrix(9, rng)
    twice = linalg.partial_transpose(linalg.partial_transpose(rho, (3, 3)), (3, 3))
    err = float(np.abs(twice - rho).max())
    return err == 0.0, f"PT o PT error {err:.2e}"


def _negativity_landmarks() -> tuple[bool, str]:
    n0 = linalg.negativity(states.two_qutrit_target(0).density, (3, 3))
    npi = linalg.negativity(states.two_qutrit_target(math.pi).density, (3, 3))
    return abs(n0) < 1e-12 and abs(npi - 0.5) < 1e-9, f"N(0)={n0:.3g}, N(pi)={npi:.12g}"


def _strategy_soundness() -> tuple[bool, str]:
    worst_fix = worst_spec = 0.0
    beta_max = 0.0
    for tau in np.linspace(0.05, 2 * math.pi - 0.05, 9):
        for s in (verification.strategy_two_qutrit(tau), verification.strategy_qudit_general(states.two_qubit_target(tau))):
            psi = s.target.vector
            worst_fix = max(worst_fix, float(np.abs(s.omega @ psi - psi).max()))
            ev = np.linalg.eigvalsh(s.omega)
            worst_spec = max(worst_spec, float(max(-ev[0], ev[-1] - 1, 0)))
            beta_max = max(beta_max, s.beta_spectral)
    ok = worst_fix < 1e-8 and worst_spec < 1e-9 and beta_max < 1
    return ok, f"fix err {worst_fix:.2e}, spectrum excess {worst_spec:.2e}, max beta {beta_max:.6f}"


def _bell_counts() -> tuple[bool, str]:
    n_bell = verification.strategy_bell_2qubit().report(0.01, 0.1).n
    n_sep = verification.strategy_separable(states.two_qutrit_target(0)).report(0.01, 0.1).n
    return n_bell == 345 and n_sep == 230, f"bell n={n_bell}, separable n={n_sep}"


def _charfunc_roundtrip() -> tuple[bool, str]:
    rng = np.random.default_rng(1)
    worst = 0.0
    for basis in (charfunc.SUD, charfunc.WEYL):
        rho = linalg.random_density_matrix(9, rng)
        chi = charfunc.characteristic(rho, 3, 3, basis)
        worst = max(worst, float(np.abs(charfunc.reconstruct(chi) - rho).max()))
        worst = max(worst, abs(chi.purity() - float(np.trace(rho @ rho).real)))
    return worst < 1e-10, f"round-trip / purity error {worst:.2e}"


CHECKS: dict[str, Callable[[], tuple[bool, str]]] = {
    "sud-orthogonality": _sud_orthogonality,
    "weyl-orthogonality": _weyl_orthogonality,
    "partial-transpose-involution": _pt_involution,
    "negativity-landmarks": _negativity_landmarks,
    "strategy-soundness": _strategy_soundness,
    "special-case-counts": _bell_counts,
    "charfunc-roundtrip": _charfunc_roundtrip,
}


def run_checks() -> list[CheckResult]:
    out = []
    for name, fn in CHECKS.items():
        try:
            ok, detail = fn()
        except Exception as exc:  # a crashing check is a failed check
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append((name, bool(ok), detail))
    return out
