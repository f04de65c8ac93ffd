"""Command-line driver producing CSV/JSON sweeps over the squeezing parameter.

Every command is deterministic given its configuration. Settings come from
built-in defaults, then an optional flat JSON config file (``--config``),
then command-line flags.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, fields, replace
from typing import Any, Sequence

import numpy as np

from . import charfunc, dfe, linalg, states, verification
from .checks import run_checks
from .errors import QuditError

COMMANDS = ("sweep-verify", "sweep-charfunc", "sweep-negativity", "dfe-plan", "dfe-run", "fidelity", "check")


class ConfigError(QuditError):
    pass


@dataclass(frozen=True)
class SweepConfig:
    d: int = 3
    tau_min: float = 0.0
    tau_max: float = 2 * math.pi
    points: int = 200
    epsilon: float = 0.01
    delta: float = 0.1
    theta3: str = "auto"
    noise: str = "none"
    basis: str = "sud"
    seed: int = 0
    out: str | None = None
    format: str = "csv"
    tau: float | None = None
    repeats: int = 1
    schmidt_file: str | None = None
    no_dispatch: bool = False
    check: bool = False

    def validate(self, command: str) -> "SweepConfig":
        if self.points < 2:
            raise ConfigError(f"--points must be >= 2, got {self.points}")
        if not (0 < self.epsilon < 1 and 0 < self.delta < 1):
            raise ConfigError("--epsilon and --delta must lie in (0, 1)")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"--format must be csv or json, got {self.format!r}")
        if self.basis not in (charfunc.SUD, charfunc.WEYL):
            raise ConfigError(f"--basis must be sud or weyl, got {self.basis!r}")
        if self.repeats < 1:
            raise ConfigError("--repeats must be >= 1")
        if command != "fidelity" and self.schmidt_file is None and self.d not in (2, 3):
            raise ConfigError(f"closed-form targets need --d 2 or 3, got {self.d}")
        theta3_value(self.theta3)
        parse_noise(self.noise)
        return self

    def taus(self) -> np.ndarray:
        return np.linspace(self.tau_min, self.tau_max, self.points)


def theta3_value(text) -> float | str:
    if isinstance(text, (int, float)):
        return float(text)
    if text in ("auto", "optimize"):
        return "optimize"
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"--theta3 must be 'auto' or a number, got {text!r}") from None


def parse_noise(text: str) -> tuple[str, float]:
    if text == "none":
        return "none", 0.0
    kind, _, value = text.partition(":")
    if kind not in ("depol", "orth") or not value:
        raise ConfigError(f"--noise must be none, depol:<p> or orth:<eps>, got {text!r}")
    try:
        p = float(value)
    except ValueError:
        raise ConfigError(f"bad noise parameter in {text!r}") from None
    if not 0 <= p <= 1:
        raise ConfigError(f"noise parameter {p} not in [0, 1]")
    return kind, p


def fmt(x: Any) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.12g}"
    return str(x)


def _jsonable(x: Any) -> Any:
    if isinstance(x, (np.floating, float)):
        return float(f"{float(x):.12g}")
    if isinstance(x, (np.integer,)):
        return int(x)
    return x


def render(rows: list[dict], header: Sequence[str], form: str) -> str:
    if form == "json":
        return json.dumps([{k: _jsonable(r.get(k)) for k in header} for r in rows], indent=1) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(r.get(k)) for k in header])
    return buf.getvalue()


def target_for(d: int, tau: float) -> states.SchmidtState:
    return states.two_qubit_target(tau) if d == 2 else states.two_qutrit_target(tau)


class InvariantViolation(QuditError):
    pass


def _check_strategy(s: verification.Strategy) -> None:
    psi = s.target.vector
    fix = float(np.abs(s.omega @ psi - psi).max())
    ev = np.linalg.eigvalsh(s.omega)
    if fix > 1e-8 or ev[0] < -1e-9 or ev[-1] > 1 + 1e-9:
        raise InvariantViolation(f"strategy {s.kind} failed soundness (fix error {fix:.2e})")


def _read_schmidt_file(path: str) -> list[tuple[float, np.ndarray]]:
    with open(path, newline="") as fh:
        reader = csv.reader(row for row in fh if row.strip() and not row.startswith("#"))
        header = next(reader)
        if header[0].strip() != "tau":
            raise ConfigError("Schmidt file must start with a 'tau' column")
        return [(float(r[0]), np.array([float(x) for x in r[1:]])) for r in reader]


# -- commands -----------------------------------------------------------------

VERIFY_HEADER = ("tau", "alpha", "theta3", "beta_basis", "beta_spectral", "n", "strategy_kind")


def cmd_sweep_verify(cfg: SweepConfig) -> tuple[list[dict], Sequence[str]]:
    rows = []
    if cfg.schmidt_file:
        jobs = []
        for tau, c in _read_schmidt_file(cfg.schmidt_file):
            psi = states.general_schmidt(c, len(c))
            jobs.append((tau, psi))
        make = lambda tau, psi: (  # noqa: E731
            verification.strategy_separable(psi)
            if psi.schmidt_rank == 1 and not cfg.no_dispatch
            else verification.strategy_qudit_general(psi)
        )
    else:
        policy = theta3_value(cfg.theta3)
        jobs = [(float(t), None) for t in cfg.taus()]
        make = lambda tau, _: verification.strategy_for_tau(  # noqa: E731
            cfg.d, tau, policy, dispatch=not cfg.no_dispatch
        )
    for tau, psi in jobs:
        s = make(tau, psi)
        _check_strategy(s)
        rep = s.report(cfg.epsilon, cfg.delta)
        rows.append(
            {
                "tau": tau,
                "alpha": s.alpha,
                "theta3": s.theta3,
                "beta_basis": rep.beta_basis,
                "beta_spectral": rep.beta_spectral,
                "n": rep.n,
                "strategy_kind": s.kind,
            }
        )
    return rows, VERIFY_HEADER


def cmd_sweep_charfunc(cfg: SweepConfig) -> tuple[list[dict], Sequence[str]]:
    taus = cfg.taus()
    chis = [charfunc.characteristic(target_for(cfg.d, t).density, cfg.d, cfg.d, cfg.basis) for t in taus]
    mask = np.zeros_like(chis[0].values, dtype=bool)
    for chi in chis:
        mask |= np.abs(chi.values) > charfunc.SUPPORT_THRESHOLD
    idx = list(zip(*np.nonzero(mask)))
    names = [f"chi_{chis[0].label(a, b).name}" for a, b in idx]
    complex_cols = cfg.basis == charfunc.WEYL
    header = ["tau"]
    for n in names:
        header += [f"{n}_re", f"{n}_im"] if complex_cols else [n]
    rows = []
    for t, chi in zip(taus, chis):
        row: dict[str, Any] = {"tau": float(t)}
        for n, (a, b) in zip(names, idx):
            v = chi.values[a, b]
            if complex_cols:
                row[f"{n}_re"], row[f"{n}_im"] = float(v.real), float(v.imag)
            else:
                row[n] = float(v)
        rows.append(row)
    return rows, header


def cmd_sweep_negativity(cfg: SweepConfig) -> tuple[list[dict], Sequence[str]]:
    rows = [
        {"tau": float(t), "negativity": linalg.negativity(target_for(cfg.d, t).density, (cfg.d, cfg.d))}
        for t in cfg.taus()
    ]
    return rows, ("tau", "negativity")


PLAN_HEADER = ("tau", "label", "chi", "prob", "m", "expected_draws", "expected_measurements")


def _plan_taus(cfg: SweepConfig) -> np.ndarray:
    return np.array([cfg.tau]) if cfg.tau is not None else cfg.taus()


def cmd_dfe_plan(cfg: SweepConfig) -> tuple[list[dict], Sequence[str]]:
    rows = []
    for t in _plan_taus(cfg):
        psi = target_for(cfg.d, t)
        plan = dfe.make_plan(charfunc.characteristic(psi.density, cfg.d, cfg.d, cfg.basis), cfg.epsilon, cfg.delta)
        sched = dfe.expected_schedule(plan)
        for e in plan.entries:
            draws, shots = sched[e.label]
            chi = e.chi if isinstance(e.chi, float) else abs(e.chi)
            rows.append(
                {
                    "tau": float(t),
                    "label": e.label.name,
                    "chi": chi,
                    "prob": e.probability,
                    "m": e.m,
                    "expected_draws": draws,
                    "expected_measurements": shots,
                }
            )
    return rows, PLAN_HEADER


RUN_HEADER = ("tau", "repeat", "y_tilde", "true_fidelity", "total_single_measurements", "seed", "noise")


def noisy_state(psi: states.SchmidtState, noise: str) -> np.ndarray:
    kind, p = parse_noise(noise)
    if kind == "depol":
        return states.depolarize(psi.density, p)
    if kind == "orth":
        direction = states.schmidt_orthogonal_directions(psi.amplitudes.real)[0]
        return linalg.projector(states.mix_orthogonal(psi, states.diagonal_ket(direction, psi.d), p))
    return psi.density


def cmd_dfe_run(cfg: SweepConfig) -> tuple[list[dict], Sequence[str]]:
    if cfg.basis != charfunc.SUD:
        raise ConfigError("dfe-run simulates measurements in the sud basis only")
    rows = []
    for i, t in enumerate(_plan_taus(cfg)):
        psi = target_for(cfg.d, t)
        plan = dfe.make_plan(charfunc.char_sud(psi.density, cfg.d, cfg.d), cfg.epsilon, cfg.delta)
        rho = noisy_state(psi, cfg.noise)
        for r in range(cfg.repeats):
            seed = int(np.random.SeedSequence([cfg.seed, i, r]).generate_state(1)[0])
            rep = dfe.estimate(plan, rho, seed)
            rows.append(
                {
                    "tau": float(t),
                    "repeat": r,
                    "y_tilde": rep.y_tilde,
                    "true_fidelity": rep.true_fidelity,
                    "total_single_measurements": rep.total_single_measurements,
                    "seed": seed,
                    "noise": cfg.noise,
                }
            )
    return rows, RUN_HEADER


def parse_state_spec(spec: str) -> states.SchmidtState:
    """``qubit:<tau>``, ``qutrit:<tau>``, ``maxent:<d>`` or ``schmidt:c0,c1,...[@d]``."""
    family, _, arg = spec.partition(":")
    try:
        if family == "qubit":
            return states.two_qubit_target(float(arg))
        if family == "qutrit":
            return states.two_qutrit_target(float(arg))
        if family == "maxent":
            return states.max_entangled(int(arg))
        if family == "schmidt":
            coeffs, _, dim = arg.partition("@")
            c = [float(x) for x in coeffs.split(",")]
            return states.general_schmidt(c, int(dim) if dim else len(c))
    except ValueError as exc:
        raise ConfigError(f"cannot parse state spec {spec!r}: {exc}") from None
    raise ConfigError(f"unknown state family in {spec!r}")


def cmd_fidelity(spec_a: str, spec_b: str, basis: str) -> float:
    a, b = parse_state_spec(spec_a), parse_state_spec(spec_b)
    if a.d != b.d:
        raise ConfigError(f"states live in different dimensions ({a.d} vs {b.d})")
    ca = charfunc.characteristic(a.density, a.d, a.d, basis)
    cb = charfunc.characteristic(b.density, b.d, b.d, basis)
    f = charfunc.fidelity_overlap(ca, cb)
    return 0.0 if abs(f) < 5e-13 else f


SWEEPS = {
    "sweep-verify": cmd_sweep_verify,
    "sweep-charfunc": cmd_sweep_charfunc,
    "sweep-negativity": cmd_sweep_negativity,
    "dfe-plan": cmd_dfe_plan,
    "dfe-run": cmd_dfe_run,
}


# -- argument handling --------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", help="flat JSON file of settings; flags override it")
    common.add_argument("--d", type=int, help="per-site dimension (2 or 3)")
    common.add_argument("--tau-min", type=float)
    common.add_argument("--tau-max", type=float)
    common.add_argument("--points", type=int, help="tau grid size, endpoints included")
    common.add_argument("--tau", type=float, help="single tau for dfe-plan / dfe-run")
    common.add_argument("--epsilon", type=float)
    common.add_argument("--delta", type=float)
    common.add_argument("--theta3", help="'auto' or a fixed angle")
    common.add_argument("--noise", help="none | depol:<p> | orth:<eps>")
    common.add_argument("--basis", choices=("sud", "weyl"))
    common.add_argument("--seed", type=int)
    common.add_argument("--repeats", type=int, help="dfe-run repetitions per tau")
    common.add_argument("--schmidt-file", help="CSV with columns tau,c0,c1,... for general d")
    common.add_argument("--no-dispatch", action="store_true", help="keep the general strategy at product points")
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--check", action="store_true", help="run the invariant suite first")

    parser = argparse.ArgumentParser(prog="quditqsv", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in SWEEPS:
        sub.add_parser(name, parents=[common])
    fp = sub.add_parser("fidelity", parents=[common], help="overlap of two states via characteristic functions")
    fp.add_argument("state_a")
    fp.add_argument("state_b")
    sub.add_parser("check", help="run the invariant suite")
    return parser


def load_config(args: argparse.Namespace) -> SweepConfig:
    values: dict[str, Any] = {}
    path = getattr(args, "config", None)
    if path:
        with open(path) as fh:
            doc = json.load(fh)
        if not isinstance(doc, dict) or any(isinstance(v, (dict, list)) for v in doc.values()):
            raise ConfigError("config file must be a flat JSON object")
        values.update({k.replace("-", "_"): v for k, v in doc.items()})
    known = {f.name for f in fields(SweepConfig)}
    values.update({k: v for k, v in vars(args).items() if k in known})
    unknown = set(values) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    return replace(SweepConfig(), **values)


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="") as fh:
            fh.write(text)


def _report_checks() -> bool:
    results = run_checks()
    for name, ok, detail in results:
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}", file=sys.stderr)
    return all(ok for _, ok, _ in results)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "check":
        return 0 if _report_checks() else 1
    try:
        cfg = load_config(args).validate(args.command)
        if cfg.check and not _report_checks():
            return 1
        if args.command == "fidelity":
            print(f"{cmd_fidelity(args.state_a, args.state_b, cfg.basis):.12f}")
            return 0
        rows, header = SWEEPS[args.command](cfg)
        _emit(render(rows, header, cfg.format), cfg.out)
    except InvariantViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (QuditError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
