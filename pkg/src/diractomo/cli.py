"""Reproducible command-line experiment runner.

Commands: fierz-check, roundtrip, feasibility, ambiguity, kernel-check.
Exit codes: 0 success, 2 configuration error, 3 acceptance failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from dataclasses import dataclass, asdict

import numpy as np

from . import __version__
from .clifford import RepKind, make_representation
from .lorentz import DirectionSample, QuadratureScheme, kernel_vector_recon
from .reconstruct import (TAU_RECON, TomographicGroup, ambiguity_probe,
                          reconstruct_combined, reconstruct_continuous,
                          reconstruct_majorana, representation_feasibility,
                          simulate_dataset)
from .spinor import DiracSpinor, bilinears, fierz_residuals, phase_distance
from .tomography import Protocol

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_FAILURE = 3

FIERZ_GATE = 1e-10
KERNEL_GATE = 1e-10


class ConfigError(Exception):
    pass


@dataclass
class ExperimentConfig:
    command: str
    representation: str | None = None
    protocol: str = "discrete-majorana"
    shots: int | None = None
    seed: int = 0
    trials: int = 100
    grid: tuple | None = None
    spinor: list | None = None
    output_path: str | None = None
    format: str = "json"

    def validate(self) -> None:
        if self.shots is not None and self.shots < 1:
            raise ConfigError("shots must be >= 1")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.grid is not None:
            g = tuple(int(x) for x in self.grid)
            if len(g) != 2 or min(g) < 2:
                raise ConfigError("grid must be two dimensions >= 2")
            self.grid = g
        if self.format not in ("csv", "json"):
            raise ConfigError(f"unknown format {self.format!r}")
        if self.protocol is not None:
            try:
                Protocol(self.protocol)
            except ValueError:
                raise ConfigError(f"unknown protocol {self.protocol!r}")
        if self.representation is not None:
            try:
                RepKind(self.representation)
            except ValueError:
                raise ConfigError(f"unknown representation {self.representation!r}")
        if self.spinor is not None:
            arr = np.asarray(self.spinor, dtype=float)
            if arr.shape != (8,) or not np.all(np.isfinite(arr)) or \
                    not np.any(arr != 0):
                raise ConfigError("explicit spinor must be 8 finite reals, nonzero")
            self.spinor = [float(x) for x in arr]

    def sha256(self) -> str:
        # the output location is not part of the experiment identity
        d = {k: v for k, v in asdict(self).items() if k != "output_path"}
        blob = json.dumps(d, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def explicit_spinor(self) -> DiracSpinor | None:
        if self.spinor is None:
            return None
        return DiracSpinor.from_json(self.spinor)


_CONFIG_KEYS = ("command", "representation", "protocol", "shots", "seed",
                "trials", "grid", "spinor", "output_path", "format")


def load_config(args: argparse.Namespace) -> ExperimentConfig:
    data = {}
    if args.config is not None:
        try:
            with open(args.config) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}")
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
        unknown = set(data) - set(_CONFIG_KEYS)
        if unknown:
            raise ConfigError(f"unknown config keys {sorted(unknown)}")
    cfg = ExperimentConfig(command=args.command, **{
        k: v for k, v in data.items() if k != "command"})
    # command-line flags override the file
    for attr, value in (("seed", args.seed), ("shots", args.shots),
                        ("trials", args.trials), ("representation", args.rep),
                        ("protocol", args.protocol),
                        ("output_path", args.out), ("format", args.format)):
        if value is not None:
            setattr(cfg, attr, value)
    cfg.validate()
    return cfg


def _trial_rng(cfg: ExperimentConfig, trial: int) -> np.random.Generator:
    return np.random.default_rng([cfg.seed, trial])


def _trial_spinor(cfg: ExperimentConfig, trial: int) -> DiracSpinor:
    explicit = cfg.explicit_spinor()
    if explicit is not None:
        return explicit
    rng = _trial_rng(cfg, trial)
    v = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    return DiracSpinor(v).normalized()


def _fmt(x) -> str:
    return f"{float(x):.17g}"


def write_report(cfg: ExperimentConfig, columns: list, rows: list,
                 summary: dict) -> None:
    """Emit the report in the configured format, to file or stdout.

    Both formats embed the library version and the config hash.
    """
    if cfg.format == "json":
        doc = {
            "version": __version__,
            "config_sha256": cfg.sha256(),
            "command": cfg.command,
            "columns": columns,
            "rows": rows,
            "summary": summary,
        }
        text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    else:
        lines = [f"# diractomo {__version__}",
                 f"# config_sha256={cfg.sha256()}",
                 f"# command={cfg.command}"]
        for key in sorted(summary):
            val = summary[key]
            val = _fmt(val) if isinstance(val, float) else val
            lines.append(f"# {key}={val}")
        lines.append(",".join(columns))
        for row in rows:
            lines.append(",".join(
                _fmt(v) if isinstance(v, float) else str(v) for v in row))
        text = "\n".join(lines) + "\n"
    if cfg.output_path:
        with open(cfg.output_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run_fierz_check(cfg: ExperimentConfig) -> int:
    """Max Fierz residual per identity over sampled (or explicit) spinors."""
    reps = [make_representation(k) for k in
            (RepKind.MAJORANA, RepKind.STANDARD, RepKind.CHIRAL)]
    if cfg.representation is not None:
        reps = [make_representation(RepKind(cfg.representation))]
    worst = np.zeros(9)
    for trial in range(cfg.trials):
        psi = _trial_spinor(cfg, trial)
        for rep in reps:
            r = np.abs(fierz_residuals(bilinears(psi, rep)))
            worst = np.maximum(worst, r)
    rows = [[i + 1, float(worst[i])] for i in range(9)]
    ok = bool(np.max(worst) < FIERZ_GATE)
    write_report(cfg, ["identity", "max_residual"], rows,
                 {"trials": cfg.trials, "max_residual": float(np.max(worst)),
                  "gate": FIERZ_GATE, "pass": ok})
    return EXIT_OK if ok else EXIT_FAILURE


_RECONSTRUCTORS = {
    Protocol.DISCRETE_MAJORANA: reconstruct_majorana,
    Protocol.COMBINED_ST_CHIRAL: reconstruct_combined,
    Protocol.CONTINUOUS_GRID: reconstruct_continuous,
}


def run_roundtrip(cfg: ExperimentConfig) -> int:
    """Simulate-and-reconstruct trials; per-trial distance and residuals."""
    protocol = Protocol(cfg.protocol)
    recon = _RECONSTRUCTORS[protocol]
    if protocol == Protocol.CONTINUOUS_GRID and cfg.grid is None:
        cfg.grid = (32, 64)
    rows, failures = [], 0
    tau = TAU_RECON if cfg.shots is None else 3.0 / np.sqrt(cfg.shots)
    for trial in range(cfg.trials):
        psi = _trial_spinor(cfg, trial)
        data = simulate_dataset(psi, protocol, shots=cfg.shots,
                                seed=cfg.seed, trial=trial, grid=cfg.grid)
        report = recon(data)
        dist = min(phase_distance(c, psi) for c in report.candidates)
        resid = float(min(report.marginal_residuals))
        if cfg.shots is None and resid > tau:
            failures += 1
        rows.append([trial, float(dist), resid, int(report.ambiguity_flag)])
    dists = np.array([r[1] for r in rows])
    summary = {
        "trials": cfg.trials,
        "protocol": protocol.value,
        "shots": cfg.shots,
        "median_phase_distance": float(np.median(dists)),
        "max_phase_distance": float(np.max(dists)),
        "failures": failures,
    }
    write_report(cfg, ["trial", "phase_distance", "marginal_residual",
                       "ambiguity"], rows, summary)
    return EXIT_OK if failures == 0 else EXIT_FAILURE


def run_feasibility(cfg: ExperimentConfig) -> int:
    """Marginal-gradient span rank table for all (rep, group) pairs."""
    cases = [(kind, group, False)
             for kind in (RepKind.MAJORANA, RepKind.STANDARD, RepKind.CHIRAL)
             for group in (TomographicGroup.ROTATIONS,
                           TomographicGroup.FULL_RESTRICTED_LORENTZ)]
    cases.append((RepKind.CHIRAL, TomographicGroup.FULL_RESTRICTED_LORENTZ,
                  True))
    rows = []
    for kind, group, weyl in cases:
        r = representation_feasibility(kind, group, seed=cfg.seed,
                                       weyl_class=weyl)
        rows.append([kind.value, group.value, "weyl" if weyl else "generic",
                     r.span_rank, r.target_rank, r.verdict.value,
                     ";".join(r.recoverable_slots)])
    write_report(cfg, ["representation", "group", "class", "span_rank",
                       "target_rank", "verdict", "recoverable_slots"],
                 rows, {"seed": cfg.seed})
    return EXIT_OK


_PROBE_CASES = [
    (RepKind.MAJORANA, TomographicGroup.ROTATIONS),
    (RepKind.STANDARD, TomographicGroup.ROTATIONS),
    (RepKind.CHIRAL, TomographicGroup.FULL_RESTRICTED_LORENTZ),
]


def run_ambiguity(cfg: ExperimentConfig) -> int:
    """Counterexample search: distinct spinors with identical marginals."""
    cases = _PROBE_CASES
    if cfg.representation is not None:
        kind = RepKind(cfg.representation)
        cases = [c for c in _PROBE_CASES if c[0] == kind]
    rows = []
    for kind, group in cases:
        for trial in range(cfg.trials):
            psi = _trial_spinor(cfg, trial)
            probe = ambiguity_probe(psi, kind, group, seed=cfg.seed + trial)
            rows.append([kind.value, group.value, trial, int(probe.found),
                         probe.strategy, float(probe.mismatch)
                         if np.isfinite(probe.mismatch) else "inf",
                         float(probe.distance)])
    found = sum(r[3] for r in rows)
    write_report(cfg, ["representation", "group", "trial", "found",
                       "strategy", "marginal_mismatch", "phase_distance"],
                 rows, {"trials": cfg.trials, "counterexamples": found})
    return EXIT_OK


def run_kernel_check(cfg: ExperimentConfig) -> int:
    """Spherical integral transform on random 3-vectors."""
    grid = cfg.grid or (32, 64)
    scheme = QuadratureScheme(*grid)
    thetas, _, phis, _ = scheme.nodes()
    worst = 0.0
    rows = []
    for trial in range(cfg.trials):
        rng = _trial_rng(cfg, trial)
        v = rng.standard_normal(3)
        samples = [DirectionSample(theta=t, phi=p,
                                   nu=v @ np.array([np.sin(t) * np.cos(p),
                                                    np.sin(t) * np.sin(p),
                                                    np.cos(t)]))
                   for t in thetas for p in phis]
        err = float(np.max(np.abs(kernel_vector_recon(samples, scheme) - v)))
        worst = max(worst, err)
        rows.append([trial, err])
    ok = worst < KERNEL_GATE
    write_report(cfg, ["trial", "max_error"], rows,
                 {"trials": cfg.trials, "grid": f"{grid[0]}x{grid[1]}",
                  "max_error": worst, "gate": KERNEL_GATE, "pass": bool(ok)})
    return EXIT_OK if ok else EXIT_FAILURE


_RUNNERS = {
    "fierz-check": run_fierz_check,
    "roundtrip": run_roundtrip,
    "feasibility": run_feasibility,
    "ambiguity": run_ambiguity,
    "kernel-check": run_kernel_check,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="diractomo",
        description="Tomographic simulation and reconstruction of Dirac "
                    "spinor internal degrees of freedom.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _RUNNERS:
        p = sub.add_parser(name)
        p.add_argument("--config", default=None,
                       help="JSON config file (snake_case fields)")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--shots", type=int, default=None)
        p.add_argument("--trials", type=int, default=None)
        p.add_argument("--rep", default=None,
                       choices=[k.value for k in RepKind if k != RepKind.CUSTOM])
        p.add_argument("--protocol", default=None,
                       choices=[p.value for p in Protocol])
        p.add_argument("--out", default=None)
        p.add_argument("--format", default=None, choices=["csv", "json"])
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return _RUNNERS[cfg.command](cfg)


if __name__ == "__main__":
    sys.exit(main())
