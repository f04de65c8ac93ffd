"""Verification strategies built from local projective measurements.

A strategy is a Hermitian ``0 <= Omega <= 1`` that accepts the target with
certainty. Its quality is the largest acceptance probability ``beta`` over
states orthogonal to the target, which sets how many rounds are needed to
certify the state up to infidelity ``epsilon`` with confidence ``1 - delta``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Sequence, Union

import numpy as np
from scipy.optimize import minimize_scalar

from .bases import embedded_lambda, pauli
from .errors import (
    DimensionMismatch,
    InvalidParameter,
    NotSeparable,
    SingularAngle,
    UnsupportedDimension,
)
from .linalg import check_density_matrix, hermitian_eig, projector
from .states import (
    THIRD_ROOT_PHASES,
    QutritAngles,
    SchmidtState,
    angles_from_coefficients,
    basis_ket,
    diagonal_ket,
    general_schmidt,
    qutrit_orthogonal_amplitudes,
    schmidt_orthogonal_directions,
    separable_partners,
    two_qubit_orth_states,
    two_qubit_target,
    two_qutrit_target,
)

MAX_QUDIT_DIM = 6
THETA3_GRID = 181
THETA3_XATOL = 1e-6
_TIE = 1e-12

Theta3Policy = Union[float, str]


@dataclass(frozen=True)
class StrategyReport:
    beta_basis: float
    beta_spectral: float
    n: int
    epsilon: float
    delta: float


@dataclass(eq=False)
class Strategy:
    omega: np.ndarray
    target: SchmidtState
    kind: str
    alpha: float | None = None
    theta3: float | None = None
    components: dict[str, np.ndarray] = field(default_factory=dict, repr=False)
    orthobasis: list[np.ndarray] | None = field(default=None, repr=False)

    @cached_property
    def _complement_eig(self):
        psi = self.target.vector
        q = np.eye(len(psi)) - projector(psi)
        return hermitian_eig(q @ self.omega @ q)

    @property
    def beta_spectral(self) -> float:
        """Largest eigenvalue of Omega on the orthogonal complement of the target."""
        b = float(self._complement_eig.eigenvalues[-1])
        return 0.0 if b < 1e-14 else b

    @property
    def beta_basis(self) -> float:
        """Largest acceptance over the named orthogonal basis (spectral if none)."""
        if not self.orthobasis:
            return self.beta_spectral
        return float(max(np.vdot(v, self.omega @ v).real for v in self.orthobasis))

    def worst_orthogonal_state(self) -> np.ndarray:
        """A unit vector orthogonal to the target accepted with probability ``beta_spectral``."""
        v = self._complement_eig.eigenvectors[:, -1]
        psi = self.target.vector
        v = v - np.vdot(psi, v) * psi
        return v / np.linalg.norm(v)

    def report(self, epsilon: float, delta: float) -> StrategyReport:
        b = self.beta_spectral
        return StrategyReport(self.beta_basis, b, n_measurements(b, epsilon, delta), epsilon, delta)


def _ceil(x: float) -> int:
    # absorb representation error such as 1/(0.01**2 * 0.1) = 100000.00000000001
    return math.ceil(x - 1e-9 * max(1.0, abs(x)))


def n_measurements(beta: float, epsilon: float, delta: float) -> int:
    """Rounds needed so a state with infidelity >= epsilon passes with prob <= delta."""
    if not 0 <= beta < 1:
        raise InvalidParameter(f"beta must lie in [0, 1), got {beta}")
    if not 0 < epsilon < 1 or not 0 < delta < 1:
        raise InvalidParameter(f"epsilon and delta must lie in (0, 1), got {epsilon}, {delta}")
    return _ceil(math.log(1 / delta) / -math.log1p(-epsilon * (1 - beta)))


def minimax_alpha(a: Sequence[float], b: Sequence[float]) -> tuple[float, float]:
    """Minimise ``max_i alpha*a_i + (1-alpha)*b_i`` over ``alpha`` in [0, 1].

    The objective is a convex piecewise-linear envelope, so its minimum sits at
    an endpoint or at a crossing of two lines. Returns ``(alpha, value)``,
    preferring the smallest alpha on ties.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    slope = a - b
    i, j = np.triu_indices(len(a), k=1)
    ds = slope[i] - slope[j]
    ok = np.abs(ds) > 1e-15
    x = (b[j][ok] - b[i][ok]) / ds[ok]
    cands = {0.0, 1.0} | set(x[(x >= 0) & (x <= 1)].tolist())
    xs = np.array(sorted(cands))
    vals = np.max(np.outer(xs, slope) + b, axis=1)
    best = vals.min()
    k = int(np.flatnonzero(vals <= best + _TIE)[0])
    return float(xs[k]), float(vals[k])


def _acceptance(op: np.ndarray, kets: Sequence[np.ndarray]) -> np.ndarray:
    k = np.asarray(kets)
    return np.einsum("ni,ij,nj->n", k.conj(), op, k).real


def _mix(target, kind, pz, other, orthobasis, components, theta3=None) -> Strategy:
    alpha, _ = minimax_alpha(_acceptance(pz, orthobasis), _acceptance(other, orthobasis))
    omega = alpha * pz + (1 - alpha) * other
    return Strategy(omega, target, kind, alpha, theta3, components, orthobasis)


def strategy_separable(psi: SchmidtState) -> Strategy:
    if psi.schmidt_rank != 1:
        raise NotSeparable(f"Schmidt rank is {psi.schmidt_rank}")
    return Strategy(projector(psi.vector), psi, "separable")


def _bell_projector(d: int, i: int, levels: tuple[int, int]) -> np.ndarray:
    eig = hermitian_eig(embedded_lambda(d, i, levels))
    out = np.zeros((d * d, d * d), dtype=complex)
    for value, proj in eig.clusters():
        if abs(abs(value) - 1) < 1e-9:
            out += np.kron(proj, proj.conj())
    return out


def strategy_bell_general(d: int, levels: tuple[int, int] = (0, 1)) -> Strategy:
    """Equal mixture of the three embedded-Pauli correlation tests.

    Accepts ``(|aa> + |bb>)/sqrt(2)`` with certainty, ``(a, b) = levels``.
    """
    pis = {f"correlation_{i}": _bell_projector(d, i, levels) for i in (1, 2, 3)}
    omega = sum(pis.values()) / 3
    amps = np.zeros(d)
    amps[list(levels)] = 1 / math.sqrt(2)
    return Strategy(omega, general_schmidt(amps, d), "bell", components=pis)


def strategy_bell_2qubit() -> Strategy:
    pis = {}
    for i in (1, 2, 3):
        eig = hermitian_eig(pauli(i))
        pis[f"correlation_{i}"] = sum(
            np.kron(projector(eig.eigenvectors[:, k]), projector(eig.eigenvectors[:, k].conj()))
            for k in range(2)
        )
    omega = sum(pis.values()) / 3
    return Strategy(omega, general_schmidt(np.full(2, 1 / math.sqrt(2)), 2), "bell", components=pis)


def two_qubit_alpha(tau: float) -> float:
    """Closed-form mixing weight ``(2 - sin 2tau) / (4 + sin 2tau)``."""
    s = math.sin(2 * tau)
    return (2 - s) / (4 + s)


def strategy_two_qubit(tau: float) -> Strategy:
    psi = two_qubit_target(tau)
    s, c = math.sin(tau), math.cos(tau)
    if abs(s * c) < 1e-12:
        raise SingularAngle(f"tau={tau} gives a product state; use strategy_separable")
    pz = projector(basis_ket(0, 0, 2)) + projector(basis_ket(1, 1, 2))
    omega3 = np.eye(4) - sum(projector(two_qubit_orth_states(tau, j)) for j in (1, 2, 3)) / 3
    orth = [diagonal_ket([s, -c]), basis_ket(0, 1, 2), basis_ket(1, 0, 2)]
    return _mix(psi, "two_qubit", pz, omega3, orth, {"schmidt_diagonal": pz, "product_rejection": omega3})


def _phase_averaged_rejection(directions: Sequence[np.ndarray], d: int) -> np.ndarray:
    """``mean over phase tuples of (I - sum_n |phi_n><phi_n|)``.

    Each direction (diagonal amplitudes of an entangled state orthogonal to the
    target) yields one product state per tuple of third-root phases, one phase
    per level above 0. Averaging over the 3**(d-1) tuples equals integrating
    the phases over the circle.
    """
    ph = _phase_table(d)
    proj = np.zeros((d * d, d * d), dtype=complex)
    for amps in directions:
        rho, sigma = separable_partners(amps, np.zeros(d - 1))
        v = np.einsum("pi,pj->pij", rho * ph, sigma * ph.conj()).reshape(len(ph), d * d)
        proj += v.T @ v.conj()
    return np.eye(d * d) - proj / len(ph)


@lru_cache(maxsize=None)
def _phase_table(d: int) -> np.ndarray:
    """``exp(i phi)`` for every tuple of third-root phases, level 0 fixed to phase 0."""
    tuples = np.array(list(itertools.product(THIRD_ROOT_PHASES, repeat=d - 1)))
    table = np.exp(1j * np.hstack([np.zeros((len(tuples), 1)), tuples]))
    table.setflags(write=False)
    return table


def _off_diagonal_kets(d: int) -> list[np.ndarray]:
    return [basis_ket(i, j, d) for i in range(d) for j in range(d) if i != j]


@lru_cache(maxsize=None)
def _schmidt_projector(d: int) -> np.ndarray:
    out = np.diag(np.eye(d).ravel()).astype(complex)
    out.setflags(write=False)
    return out


def _qutrit_strategy(psi: SchmidtState, theta3: float) -> Strategy:
    amps = psi.amplitudes.real
    t1, t2 = angles_from_coefficients(amps)
    dirs = qutrit_orthogonal_amplitudes(QutritAngles(t1, t2, theta3))
    pz = _schmidt_projector(3)
    high = _phase_averaged_rejection(dirs, 3)
    orth = [diagonal_ket(v) for v in dirs] + _off_diagonal_kets(3)
    return _mix(psi, "two_qutrit", pz, high, orth, {"schmidt_diagonal": pz, "product_rejection": high}, theta3)


def optimize_theta3(
    tau: float, grid: int = THETA3_GRID, xatol: float = THETA3_XATOL
) -> tuple[float, Strategy]:
    """Pick the free angle minimising ``beta_spectral``: grid scan then bounded refinement."""
    psi = two_qutrit_target(tau)
    two_pi = 2 * math.pi

    q = np.eye(9) - projector(psi.vector)

    def beta(t: float) -> float:
        return float(np.linalg.eigvalsh(q @ _qutrit_strategy(psi, t % two_pi).omega @ q)[-1])

    thetas = np.linspace(0.0, two_pi, grid, endpoint=False)
    betas = np.array([beta(t) for t in thetas])
    i = int(np.argmin(betas))
    step = two_pi / grid
    res = minimize_scalar(
        beta, bounds=(thetas[i] - step, thetas[i] + step), method="bounded", options={"xatol": xatol}
    )
    cands = list(zip(betas, thetas)) + [(float(res.fun), float(res.x) % two_pi)]
    best = min(b for b, _ in cands)
    theta = min(t for b, t in cands if b <= best + _TIE)
    return theta, _qutrit_strategy(psi, theta)


def strategy_two_qutrit(tau: float, theta3: Theta3Policy = 0.0) -> Strategy:
    """Mixture of the Schmidt-basis projector and the phase-averaged rank-7 part.

    ``theta3`` is either a fixed angle or ``"optimize"``.
    """
    if isinstance(theta3, str):
        if theta3 not in ("optimize", "auto"):
            raise InvalidParameter(f"unknown theta3 policy {theta3!r}")
        return optimize_theta3(tau)[1]
    return _qutrit_strategy(two_qutrit_target(tau), float(theta3))


def strategy_qudit_general(psi: SchmidtState, max_dim: int = MAX_QUDIT_DIM) -> Strategy:
    """Same two-part construction for any ``d``, with every free angle set to 0."""
    d = psi.d
    if d < 2:
        raise UnsupportedDimension(f"d must be >= 2, got {d}")
    if d > max_dim:
        raise UnsupportedDimension(f"d={d} exceeds the configured maximum {max_dim}")
    amps = psi.amplitudes
    if np.max(np.abs(amps.imag)) > 1e-12:
        raise InvalidParameter("Schmidt amplitudes must be real")
    amps = amps.real
    support = np.flatnonzero(np.abs(amps) > 1e-12)
    pz = sum(projector(basis_ket(i, i, d)) for i in support)
    dirs = schmidt_orthogonal_directions(amps)
    high = _phase_averaged_rejection(dirs, d)
    orth = [diagonal_ket(v) for v in dirs] + _off_diagonal_kets(d)
    return _mix(psi, "qudit_general", pz, high, orth, {"schmidt_diagonal": pz, "product_rejection": high}, 0.0)


def strategy_for_tau(d: int, tau: float, theta3: Theta3Policy = "optimize", dispatch: bool = True) -> Strategy:
    """Strategy used by the sweeps: product targets go to :func:`strategy_separable`."""
    if d == 2:
        psi = two_qubit_target(tau)
    elif d == 3:
        psi = two_qutrit_target(tau)
    else:
        raise UnsupportedDimension(f"closed-form targets exist for d in (2, 3), got {d}")
    if psi.schmidt_rank == 1 and (dispatch or d == 2):
        return strategy_separable(psi)
    if d == 2:
        return strategy_two_qubit(tau)
    return strategy_two_qutrit(tau, theta3)


def accept_probability(strategy: Strategy, rho) -> float:
    """``Tr[Omega rho]``; a 1-d input is treated as a ket."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim == 1:
        rho = projector(rho)
    dim = strategy.omega.shape[0]
    if rho.shape != (dim, dim):
        raise DimensionMismatch(f"state of shape {rho.shape} does not match strategy dim {dim}")
    rho = check_density_matrix(rho)
    p = float(np.trace(strategy.omega @ rho).real)
    return min(1.0, max(0.0, p))


def verify_simulate(strategy: Strategy, rho, n: int, seed: int) -> int:
    """Number of passed rounds out of ``n`` independent tests of ``rho``."""
    p = accept_probability(strategy, rho)
    rng = np.random.default_rng(seed)
    return int(np.count_nonzero(rng.random(n) < p))
