"""Direct fidelity estimation by importance sampling of characteristic-function labels.

A pure target with characteristic function ``chi`` is compared with an
unknown state by drawing ``ell`` labels with probability ``chi^2``, measuring
the corresponding product observable ``m`` times for each draw, and averaging
the rescaled outcomes. Only the Hermitian SU(d) basis is simulated; Weyl
plans can be built and scheduled but not measured.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from functools import lru_cache
from typing import Union

import numpy as np
from scipy.stats import binomtest

from .bases import ObservablePair, sud_basis
from .charfunc import SUD, CharFunction, char_sud, fidelity_overlap, support
from .errors import BasisMismatch, DimensionMismatch, ImpureTarget, InvalidParameter
from .linalg import check_density_matrix, hermitian_eig, projector
from .states import SchmidtState

Seed = Union[int, np.random.SeedSequence, None]


@dataclass(frozen=True)
class PlanEntry:
    label: ObservablePair
    chi: float
    probability: float
    m: int
    normalizer: float


@dataclass(frozen=True, eq=False)
class SamplingPlan:
    ell: int
    epsilon: float
    delta: float
    entries: tuple[PlanEntry, ...]
    target: CharFunction

    @property
    def probabilities(self) -> np.ndarray:
        return np.array([e.probability for e in self.entries])

    def to_dict(self) -> dict:
        return {
            "ell": self.ell,
            "epsilon": self.epsilon,
            "delta": self.delta,
            "basis": self.target.basis,
            "entries": [
                {"label": e.label.name, "chi": e.chi, "prob": e.probability, "m": e.m}
                for e in self.entries
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


@dataclass(frozen=True)
class EstimateReport:
    y_tilde: float
    true_fidelity: float | None
    total_single_measurements: int
    seed: int | None

    def to_json(self) -> str:
        return json.dumps(asdict(self))


@dataclass(frozen=True)
class CoverageResult:
    coverage: float
    ci_low: float
    ci_high: float
    trials: int
    true_fidelity: float
    estimates: np.ndarray


def _ceil(x: float) -> int:
    return math.ceil(x - 1e-9 * max(1.0, abs(x)))


def num_labels(epsilon: float, delta: float) -> int:
    """``ell = ceil(1 / (epsilon^2 delta))``."""
    if not 0 < epsilon < 1 or not 0 < delta < 1:
        raise InvalidParameter(f"epsilon and delta must lie in (0, 1), got {epsilon}, {delta}")
    return _ceil(1 / (epsilon**2 * delta))


def repetitions(chi: float, normalizer: float, ell: int, epsilon: float, delta: float) -> int:
    """Measurements per draw: ``ceil(2 ln(2/delta) / (N^2 ell eps^2 chi^2))``.

    ``normalizer`` is the two-site factor ``N_k N_k'``, so ``N^2`` is 4 for a
    pair of Pauli labels and ``N_k^2 N_k'^2`` in general.
    """
    return _ceil(2 * math.log(2 / delta) / (normalizer**2 * ell * epsilon**2 * abs(chi) ** 2))


def make_plan(chi_target: CharFunction, epsilon: float, delta: float) -> SamplingPlan:
    purity = chi_target.purity()
    if abs(purity - 1) > 1e-6:
        raise ImpureTarget(f"target purity is {purity:.6g}; a pure target is required")
    ell = num_labels(epsilon, delta)
    norms = chi_target.normalizers()
    entries = []
    for label, prob in support(chi_target):
        a, b = label.first, label.second
        idx = (a.k, b.k) if label.kind == SUD else (a.index, b.index)
        chi = complex(chi_target.values[idx])
        chi = chi.real if label.kind == SUD else chi
        n = float(norms[idx])
        entries.append(PlanEntry(label, chi, prob, repetitions(abs(chi), n, ell, epsilon, delta), n))
    return SamplingPlan(ell, epsilon, delta, tuple(entries), chi_target)


def expected_schedule(plan: SamplingPlan) -> dict[ObservablePair, tuple[float, float]]:
    """Expected ``(draws, single measurements)`` per label; absent labels are never drawn."""
    return {e.label: (plan.ell * e.probability, plan.ell * e.probability * e.m) for e in plan.entries}


@lru_cache(maxsize=4096)
def _observable_clusters(d1: int, d2: int, k1: int, k2: int) -> tuple[np.ndarray, np.ndarray]:
    op = np.kron(sud_basis(d1)[k1], sud_basis(d2)[k2])
    clusters = hermitian_eig(op).clusters()
    values = np.array([v for v, _ in clusters])
    projs = np.array([p for _, p in clusters])
    values.setflags(write=False)
    projs.setflags(write=False)
    return values, projs


def observable_spectrum(pair: ObservablePair) -> np.ndarray:
    """Distinct eigenvalues of the product observable (possible single-shot outcomes)."""
    if pair.kind != SUD:
        raise BasisMismatch("only SU(d) labels correspond to Hermitian observables")
    return _observable_clusters(pair.first.d, pair.second.d, pair.first.k, pair.second.k)[0]


def _born(pair: ObservablePair, rho: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    d1, d2 = pair.first.d, pair.second.d
    if rho.shape != (d1 * d2, d1 * d2):
        raise DimensionMismatch(f"state of shape {rho.shape} does not match {d1}x{d2} labels")
    values, projs = _observable_clusters(d1, d2, pair.first.k, pair.second.k)
    probs = np.clip(np.einsum("cij,ji->c", projs, rho).real, 0, None)
    return values, probs / probs.sum()


def _rng(seed: Seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def measure_observable(rho_true, pair: ObservablePair, m: int, seed: Seed = None) -> np.ndarray:
    """``m`` single-shot outcomes of ``lambda_k (x) lambda_k'`` under the Born rule."""
    if pair.kind != SUD:
        raise BasisMismatch("measurement simulation is only available for SU(d) labels")
    rho = check_density_matrix(rho_true)
    values, probs = _born(pair, rho)
    return _rng(seed).choice(values, size=m, p=probs)


def _as_density(state) -> np.ndarray:
    if isinstance(state, SchmidtState):
        return state.density
    state = np.asarray(state, dtype=complex)
    return projector(state) if state.ndim == 1 else state


class _Estimator:
    """Plan bound to one true state; Born tables are computed once and reused."""

    def __init__(self, plan: SamplingPlan, rho_true):
        if plan.target.basis != SUD:
            raise BasisMismatch("measurement simulation is only available for SU(d) plans")
        rho = check_density_matrix(_as_density(rho_true))
        self.plan = plan
        self.tables = [_born(e.label, rho) for e in plan.entries]
        probs = plan.probabilities
        self.probs = probs / probs.sum()
        self.scale = np.array([1 / (e.m * e.normalizer * e.chi) for e in plan.entries])
        self.m = np.array([e.m for e in plan.entries])
        chi_true = char_sud(rho, plan.target.d1, plan.target.d2)
        self.true_fidelity = fidelity_overlap(plan.target, chi_true)

    def run(self, rng: np.random.Generator) -> tuple[float, int]:
        ell = self.plan.ell
        draws = rng.choice(len(self.probs), size=ell, p=self.probs)
        counts = np.bincount(draws, minlength=len(self.probs))
        total = 0.0
        shots = 0
        # i.i.d. shots of one observable only enter through their sum, so
        # the per-draw loop collapses to one multinomial per distinct label
        for i in np.flatnonzero(counts):
            values, probs = self.tables[i]
            n = int(counts[i] * self.m[i])
            hist = rng.multinomial(n, probs)
            total += float(hist @ values) * self.scale[i]
            shots += n
        return total / ell, shots


def estimate(plan: SamplingPlan, rho_true, seed: Seed = None) -> EstimateReport:
    est = _Estimator(plan, rho_true)
    y, shots = est.run(_rng(seed))
    return EstimateReport(y, est.true_fidelity, shots, seed if isinstance(seed, int) else None)


def estimate_many(plan: SamplingPlan, rho_true, trials: int, seed: int) -> tuple[np.ndarray, float]:
    """Independent estimates, one spawned stream per trial index."""
    est = _Estimator(plan, rho_true)
    streams = np.random.SeedSequence(seed).spawn(trials)
    ys = np.array([est.run(np.random.default_rng(s))[0] for s in streams])
    return ys, est.true_fidelity


def coverage_experiment(
    target, rho_true, epsilon: float, delta: float, trials: int, seed: int
) -> CoverageResult:
    """Fraction of trials with ``|Y - F| <= 2 epsilon`` and its 95% Clopper-Pearson interval."""
    if trials < 100:
        raise InvalidParameter(f"need at least 100 trials, got {trials}")
    rho_t = _as_density(target)
    dim = rho_t.shape[0]
    d = int(round(math.sqrt(dim)))
    if d * d != dim:
        raise DimensionMismatch("coverage experiments take a d x d bipartite target")
    plan = make_plan(char_sud(rho_t, d, d), epsilon, delta)
    ys, fid = estimate_many(plan, rho_true, trials, seed)
    hits = int(np.count_nonzero(np.abs(ys - fid) <= 2 * epsilon))
    ci = binomtest(hits, trials).proportion_ci(confidence_level=0.95)
    return CoverageResult(hits / trials, float(ci.low), float(ci.high), trials, fid, ys)


def hoeffding_width(n1: int, n2: int) -> float:
    """Outcome spread ``2 sqrt(n1 / ((n1-1) n2 (n2-1)))`` for a pair of diagonal generators."""
    return 2 * math.sqrt(n1 / ((n1 - 1) * n2 * (n2 - 1)))
