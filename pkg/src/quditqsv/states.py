"""Target states of the two-qudit squeezing evolution and the auxiliary states
used to assemble verification strategies."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    DegenerateState,
    InvalidParameter,
    NotNormalized,
    NotOrthogonal,
    NumericalDomain,
    SingularAngle,
)
from .linalg import ATOL_NORM, as_matrix, projector

_CLAMP = 1e-12
THIRD_ROOT_PHASES = (0.0, 2 * np.pi / 3, 4 * np.pi / 3)


@dataclass(frozen=True, eq=False)
class SchmidtState:
    """Bipartite pure state ``sum_i c_i |ii>`` on ``d x d``.

    ``coeffs`` are the non-negative Schmidt coefficients; any sign carried by an
    amplitude lives only in ``vector``.
    """

    d: int
    coeffs: np.ndarray
    vector: np.ndarray = field(repr=False)

    @property
    def amplitudes(self) -> np.ndarray:
        """The (possibly signed) amplitudes of ``|ii>``."""
        return self.vector[:: self.d + 1].copy()

    @property
    def density(self) -> np.ndarray:
        return projector(self.vector)

    @property
    def schmidt_rank(self) -> int:
        return int(np.count_nonzero(self.coeffs > _CLAMP))


@dataclass(frozen=True)
class QutritAngles:
    theta1: float
    theta2: float
    theta3: float = 0.0


@dataclass(frozen=True)
class PhasePair:
    phi1: float
    phi2: float


def diagonal_ket(amps: Sequence[complex], d: int | None = None) -> np.ndarray:
    """``sum_i amps[i] |ii>`` in a ``d x d`` space (zero padded)."""
    amps = np.asarray(amps, dtype=complex)
    d = len(amps) if d is None else d
    out = np.zeros(d * d, dtype=complex)
    out[: len(amps) * (d + 1) : d + 1] = amps
    return out


def basis_ket(i: int, j: int, d: int) -> np.ndarray:
    out = np.zeros(d * d, dtype=complex)
    out[i * d + j] = 1
    return out


def _state_from_amplitudes(amps: np.ndarray, d: int) -> SchmidtState:
    amps = np.asarray(amps, dtype=float)
    padded = np.zeros(d)
    padded[: len(amps)] = amps
    return SchmidtState(d, np.abs(padded), diagonal_ket(padded, d))


def two_qubit_target(tau: float) -> SchmidtState:
    """``cos(tau)|00> + sin(tau)|11>``."""
    return _state_from_amplitudes(np.array([math.cos(tau), math.sin(tau)]), 2)


def gamma(tau: float) -> float:
    c = math.cos(tau)
    return (2 * c + 2) * math.sqrt(c * c - 2 * c + 5)


def _sqrt_clamped(x: float) -> float:
    if x < -_CLAMP:
        raise NumericalDomain(f"negative radicand {x:.3g}")
    return math.sqrt(max(x, 0.0))


def two_qutrit_coefficients(tau: float) -> np.ndarray:
    a = 2 * math.cos(tau) ** 2 + 6
    g = gamma(tau)
    return np.array(
        [
            0.25 * _sqrt_clamped(a + g),
            0.5 * abs(math.sin(tau)),
            0.25 * _sqrt_clamped(a - g),
        ]
    )


def two_qutrit_target(tau: float) -> SchmidtState:
    return _state_from_amplitudes(two_qutrit_coefficients(tau), 3)


def angles_from_coefficients(c: Sequence[float]) -> tuple[float, float]:
    """Inverse of :func:`qutrit_state`: ``(theta1, theta2)`` for real amplitudes ``c``."""
    c0, c1, c2 = (float(x) for x in c)
    if abs(c2) > 1 + _CLAMP:
        raise NumericalDomain(f"arccos argument {c2:.6g} outside [-1, 1]")
    theta2 = math.acos(min(1.0, max(-1.0, c2)))
    theta1 = math.atan2(c1, c0)
    return theta1, theta2


def theta_params(tau: float) -> tuple[float, float]:
    return angles_from_coefficients(two_qutrit_coefficients(tau))


def qutrit_state(theta1: float, theta2: float) -> np.ndarray:
    s2 = math.sin(theta2)
    return diagonal_ket([s2 * math.cos(theta1), s2 * math.sin(theta1), math.cos(theta2)])


def qutrit_orthogonal_amplitudes(angles: QutritAngles) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal amplitudes of the two entangled states orthogonal to the target."""
    s1, c1 = math.sin(angles.theta1), math.cos(angles.theta1)
    s2, c2 = math.sin(angles.theta2), math.cos(angles.theta2)
    s3, c3 = math.sin(angles.theta3), math.cos(angles.theta3)
    first = np.array([c1 * c2 * c3 - s1 * s3, s1 * c2 * c3 + c1 * s3, -s2 * c3])
    second = np.array([c1 * c2 * s3 + s1 * c3, s1 * c2 * s3 - c1 * c3, -s2 * s3])
    return first, second


def qutrit_orthobasis(angles: QutritAngles) -> list[np.ndarray]:
    """Eight states that complete ``psi(theta1, theta2)`` to an orthonormal basis."""
    first, second = qutrit_orthogonal_amplitudes(angles)
    off = [basis_ket(i, j, 3) for i, j in ((0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1))]
    return [diagonal_ket(first), diagonal_ket(second)] + off


def separable_partners(
    amplitudes: Sequence[float], phases: Sequence[float]
) -> tuple[np.ndarray, np.ndarray]:
    """Local kets whose product has ``|kk>`` amplitudes equal to ``amplitudes``.

    Each local amplitude is the principal square root of the target amplitude,
    ``phases`` (one per level above 0) are attached with opposite signs on the
    two sides so they cancel on ``|kk>``. Both kets are normalized.
    """
    roots = np.emath.sqrt(np.asarray(amplitudes, dtype=float)).astype(complex)
    norm = math.sqrt(float(np.sum(np.abs(roots) ** 2)))
    if norm < _CLAMP:
        raise DegenerateState("orthogonal state vanishes; no separable partner")
    ph = np.exp(1j * np.concatenate([[0.0], np.asarray(phases, dtype=float)]))
    return roots * ph / norm, roots * ph.conj() / norm


def qutrit_separable_states(
    angles: QutritAngles, phases: PhasePair
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """``(rho7, sigma7, rho7_perp, sigma7_perp)`` as normalized 3-vectors."""
    first, second = qutrit_orthogonal_amplitudes(angles)
    ph = (phases.phi1, phases.phi2)
    rho, sigma = separable_partners(first, ph)
    rho_p, sigma_p = separable_partners(second, ph)
    return rho, sigma, rho_p, sigma_p


def schmidt_orthogonal_directions(c: Sequence[float]) -> list[np.ndarray]:
    """Real unit vectors spanning the complement of ``c`` inside the Schmidt span.

    ``c`` is written in nested hyperspherical form
    ``c = (sin t_{m-1} * head, cos t_{m-1})``; each direction is the tangent
    along one angle. Angles that are undefined (a vanishing head) are set to 0.
    For three levels this reproduces the two orthogonal qutrit states at
    ``theta3 = 0``.
    """
    c = np.asarray(c, dtype=float)
    c = c / np.linalg.norm(c)
    m = len(c)
    if m == 1:
        return []
    if m == 2:
        return [np.array([c[1], -c[0]])]
    head = c[:-1]
    s = float(np.linalg.norm(head))
    if s > _CLAMP:
        unit_head = head / s
    else:
        unit_head = np.zeros(m - 1)
        unit_head[0] = 1.0
    top = np.concatenate([c[-1] * unit_head, [-s]])
    rest = [np.concatenate([v, [0.0]]) for v in schmidt_orthogonal_directions(unit_head)]
    return [top] + rest


def general_schmidt(coeffs: Sequence[float], d: int) -> SchmidtState:
    coeffs = np.asarray(coeffs, dtype=float)
    if len(coeffs) > d:
        raise InvalidParameter(f"{len(coeffs)} coefficients do not fit in d={d}")
    norm2 = float(np.sum(coeffs**2))
    if abs(norm2 - 1) > 1e-9:
        raise NotNormalized(f"sum of squared coefficients is {norm2:.12g}")
    return _state_from_amplitudes(coeffs / math.sqrt(norm2), d)


def max_entangled(d: int) -> SchmidtState:
    if d < 2:
        raise InvalidParameter(f"dimension must be >= 2, got {d}")
    return _state_from_amplitudes(np.full(d, 1 / math.sqrt(d)), d)


def two_qubit_orth_states(tau: float, j: int) -> np.ndarray:
    """Product state ``|phi_j>`` orthogonal to ``cos(tau)|00> + sin(tau)|11>``.

    Built as ``(sqrt(s)|0> + e^{i phi} sqrt(c)|1>) x (sqrt(s)|0> - e^{-i phi} sqrt(c)|1>)``
    with ``phi = 2 pi j / 3``, normalized.
    """
    if j not in (1, 2, 3):
        raise InvalidParameter(f"j must be 1, 2 or 3, got {j}")
    s, c = math.sin(tau), math.cos(tau)
    if abs(s * c) < _CLAMP:
        raise SingularAngle(f"tan/cot diverge at tau={tau}")
    rs, rc = np.emath.sqrt(s), np.emath.sqrt(c)
    norm = math.sqrt(abs(s) + abs(c))
    phi = 2 * np.pi * j / 3
    a = np.array([rs, np.exp(1j * phi) * rc]) / norm
    b = np.array([rs, np.exp(1j * (np.pi - phi)) * rc]) / norm
    return np.kron(a, b)


def depolarize(rho, p: float) -> np.ndarray:
    if not 0 <= p <= 1:
        raise InvalidParameter(f"depolarizing probability {p} not in [0, 1]")
    rho = as_matrix(rho)
    n = rho.shape[0]
    return (1 - p) * rho + p * np.eye(n) / n


def mix_orthogonal(psi: SchmidtState | np.ndarray, psi_perp, eps: float) -> np.ndarray:
    """``sqrt(1-eps)|psi> + sqrt(eps)|psi_perp>``."""
    if not 0 <= eps <= 1:
        raise InvalidParameter(f"weight {eps} not in [0, 1]")
    v = psi.vector if isinstance(psi, SchmidtState) else np.asarray(psi, dtype=complex)
    w = np.asarray(psi_perp, dtype=complex)
    overlap = abs(np.vdot(w, v))
    if overlap > 1e-9:
        raise NotOrthogonal(f"|<psi_perp|psi>| = {overlap:.3g}")
    out = math.sqrt(1 - eps) * v + math.sqrt(eps) * w
    return out / np.linalg.norm(out)


def is_normalized(v) -> bool:
    return abs(np.linalg.norm(v) - 1) < ATOL_NORM
