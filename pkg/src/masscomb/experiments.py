"""Named desk-scale experiments emitting replayable reports.

Each experiment embeds its full parameter set (including seeds) so a
report can be reproduced cell for cell.  Reports hold tables (rows are
subsets in natural order, columns are rules), plot-ready series, and
timings; rendering is left to external tooling.
"""

from __future__ import annotations

import json
import statistics
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from . import eknn, rules
from .core import FrameOfDiscernment, MassFunction, SimpleSupport, pignistic
from .errors import ParameterError, TotalConflictError
from .genrand import GenSpec, generate
from .rules import RuleConfig, combine

EXPERIMENT_NAMES = ("table1", "eta-sweep", "conflict-sweep", "timing", "eknn-sweep")

#: Number of decimals used when rendering table cells.
TABLE_DECIMALS = 5


@dataclass
class ExperimentReport:
    """Replayable experiment output.

    ``parameters`` holds exactly the inputs accepted by
    :func:`run_experiment`, so feeding a report's parameter block back in
    reproduces it; ``notes`` carries informational context that is not an
    input.
    """

    name: str
    parameters: dict
    notes: dict = field(default_factory=dict)
    tables: dict = field(default_factory=dict)
    series: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)

    def save(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=1)
            fh.write("\n")

    def format_table(self, name: str) -> str:
        """Fixed-point text rendering of one table."""
        tab = self.tables[name]
        cols = tab["column_labels"]
        width = max(12, *(len(c) + 2 for c in cols))
        head = " " * 16 + "".join(f"{c:>{width}}" for c in cols)
        lines = [head]
        for label, row in zip(tab["row_labels"], tab["values"]):
            cells = "".join(
                f"{v:>{width}.{TABLE_DECIMALS}f}" if v is not None else f"{'-':>{width}}"
                for v in row
            )
            lines.append(f"{label:<16}{cells}")
        return "\n".join(lines)


def _series(x, y, **extra) -> dict:
    out = {"x": list(x), "y": list(y)}
    out.update(extra)
    return out


def _spawn_seed(seed: int, *key: int) -> int:
    """Derive a child seed from a base seed and an integer key path."""
    return int(np.random.SeedSequence(seed, spawn_key=tuple(key)).generate_state(1)[0])


def six_source_inputs(frame: FrameOfDiscernment | None = None) -> list[MassFunction]:
    """The six-source showcase: five weak supporters of one singleton and a
    strong dissenter on another."""
    frame = frame or FrameOfDiscernment.numbered(3)
    supports = [SimpleSupport(frame, 1, w) for w in (0.88, 0.84, 0.85, 0.89, 0.86)]
    supports.append(SimpleSupport(frame, 2, 0.05))
    return [s.to_mass() for s in supports]


def run_experiment(name: str, params: dict | None = None) -> ExperimentReport:
    """Run a named experiment with optional parameter overrides."""
    if name not in EXPERIMENT_NAMES:
        raise ParameterError(f"unknown experiment {name!r}; choose from {EXPERIMENT_NAMES}")
    runner = {
        "table1": _run_table1,
        "eta-sweep": _run_eta_sweep,
        "conflict-sweep": _run_conflict_sweep,
        "timing": _run_timing,
        "eknn-sweep": _run_eknn_sweep,
    }[name]
    return runner(dict(params or {}))


# ---------------------------------------------------------------------------
# table1
# ---------------------------------------------------------------------------


def _run_table1(params: dict) -> ExperimentReport:
    eta = float(params.pop("eta", 1.0))
    deterministic = bool(params.pop("deterministic", False))
    rule_names = tuple(
        params.pop(
            "rules",
            ("conjunctive", "dempster", "disjunctive", "dp", "pcr6", "cautious", "average", "lns"),
        )
    )
    _reject_unknown(params)
    frame = FrameOfDiscernment.numbered(3)
    inputs = six_source_inputs(frame)
    columns = []
    status = {}
    for rule in rule_names:
        cfg = RuleConfig(rule=rule, eta=eta, deterministic=deterministic)
        res = combine(inputs, cfg)
        columns.append(res.mass.values)
        status[rule] = "ok"
    values = [
        [float(col[a]) for col in columns] for a in range(frame.powerset_size)
    ]
    report = ExperimentReport(
        name="table1",
        parameters={"eta": eta, "deterministic": deterministic, "rules": list(rule_names)},
    )
    report.tables["fused"] = {
        "row_labels": [frame.format_subset(a) for a in range(frame.powerset_size)],
        "column_labels": list(rule_names),
        "values": values,
        "column_status": status,
    }
    return report


# ---------------------------------------------------------------------------
# eta-sweep
# ---------------------------------------------------------------------------


def _run_eta_sweep(params: dict) -> ExperimentReport:
    seed = int(params.pop("seed", 42))
    counts = tuple(params.pop("counts", (60, 50, 50)))
    eta_max = float(params.pop("eta_max", 6.0))
    eta_points = int(params.pop("eta_points", 31))
    deterministic = bool(params.pop("deterministic", False))
    _reject_unknown(params)

    frame = FrameOfDiscernment.numbered(3)
    focals = (1, 2, 6)  # {theta1}, {theta2}, {theta2,theta3}
    inputs: list[MassFunction] = []
    for i, (focal, count) in enumerate(zip(focals, counts)):
        spec = GenSpec(frame, kind="ssf", focal_pool=(focal,), seed=_spawn_seed(seed, i))
        inputs.extend(generate(spec, count))

    etas = np.linspace(0.0, eta_max, eta_points)
    masses = np.empty((len(etas), frame.powerset_size))
    betps = np.empty((len(etas), frame.n))
    for i, eta in enumerate(etas):
        res = rules.combine_lns(
            inputs, RuleConfig(rule="lns", eta=float(eta), deterministic=deterministic)
        )
        masses[i] = res.mass.values
        betps[i] = pignistic(res.mass).values

    report = ExperimentReport(
        name="eta-sweep",
        parameters={
            "seed": seed,
            "counts": list(counts),
            "eta_max": eta_max,
            "eta_points": eta_points,
            "deterministic": deterministic,
        },
        notes={
            "focal_elements": [frame.format_subset(a) for a in focals],
            "weight_distribution": "uniform[0,1)",
        },
    )
    xs = etas.tolist()
    for a in sorted({0, *focals, frame.full_set}):
        report.series[f"mass/{frame.format_subset(a)}"] = _series(xs, masses[:, a].tolist())
    for i, lab in enumerate(frame.labels):
        report.series[f"betp/{lab}"] = _series(xs, betps[:, i].tolist())
    report.series["betp/theta1-theta2"] = _series(
        xs, (betps[:, 0] - betps[:, 1]).tolist()
    )
    return report


# ---------------------------------------------------------------------------
# conflict-sweep
# ---------------------------------------------------------------------------


def _run_conflict_sweep(params: dict) -> ExperimentReport:
    seed = int(params.pop("seed", 42))
    s2_grid = tuple(params.pop("s2_grid", tuple(range(5, 101, 5))))
    ts = tuple(params.pop("ts", (1, 2, 3, 4)))
    rule_names = tuple(
        params.pop("rules", ("conjunctive", "dempster", "average", "cautious", "lns", "lnsa"))
    )
    deterministic_w = params.pop("deterministic_w", None)
    min_singleton_mass = float(params.pop("min_singleton_mass", 0.5))
    eta = float(params.pop("eta", 1.0))
    _reject_unknown(params)

    frame = FrameOfDiscernment.numbered(2)

    def sources(t: int, s2: int) -> list[MassFunction]:
        s1 = t * s2
        if deterministic_w is not None:
            w = float(deterministic_w)
            return [SimpleSupport(frame, 1, w).to_mass()] * s1 + [
                SimpleSupport(frame, 2, w).to_mass()
            ] * s2
        out = generate(
            GenSpec(frame, kind="ssf", focal_pool=(1,), min_singleton_mass=min_singleton_mass,
                    seed=_spawn_seed(seed, t, s2, 1)),
            s1,
        )
        out += generate(
            GenSpec(frame, kind="ssf", focal_pool=(2,), min_singleton_mass=min_singleton_mass,
                    seed=_spawn_seed(seed, t, s2, 2)),
            s2,
        )
        return out

    report = ExperimentReport(
        name="conflict-sweep",
        parameters={
            "seed": seed,
            "s2_grid": list(s2_grid),
            "ts": list(ts),
            "rules": list(rule_names),
            "deterministic_w": deterministic_w,
            "min_singleton_mass": min_singleton_mass,
            "eta": eta,
        },
        notes={
            "weight_distribution": "uniform[0,1) filtered"
            if deterministic_w is None
            else "constant",
        },
    )
    for rule in rule_names:
        cfg = RuleConfig(rule=rule, eta=eta)
        for t in ts:
            kappas, masses, notes = [], [], []
            for s2 in s2_grid:
                try:
                    res = combine(sources(t, int(s2)), cfg)
                except TotalConflictError:
                    kappas.append(None)
                    masses.append(None)
                    notes.append("saturated")
                    continue
                kappas.append(res.conflict)
                masses.append(float(res.mass.values[1]))
                notes.append("ok")
            xs = list(s2_grid)
            report.series[f"kappa/{rule}/t{t}"] = _series(xs, kappas, status=notes)
            report.series[f"m_theta1/{rule}/t{t}"] = _series(xs, masses, status=notes)
    return report


# ---------------------------------------------------------------------------
# timing
# ---------------------------------------------------------------------------


def _run_timing(params: dict) -> ExperimentReport:
    seed = int(params.pop("seed", 42))
    sources_grid = tuple(params.pop("sources_grid", (10_000, 100_000)))
    frame_size = int(params.pop("frame_size", 8))
    kind = str(params.pop("kind", "ssf"))
    num_focals = int(params.pop("num_focals", 5))
    repeats = int(params.pop("repeats", 5))
    rule_names = tuple(
        params.pop("rules", ("conjunctive", "average", "cautious", "lns", "lnsa"))
    )
    _reject_unknown(params)
    if kind not in ("ssf", "consonant"):
        raise ParameterError("timing inputs are 'ssf' or 'consonant'")

    frame = FrameOfDiscernment.numbered(frame_size)
    report = ExperimentReport(
        name="timing",
        parameters={
            "seed": seed,
            "sources_grid": list(sources_grid),
            "frame_size": frame_size,
            "kind": kind,
            "num_focals": num_focals,
            "repeats": repeats,
            "rules": list(rule_names),
        },
        notes={"method": "median of repeats after one discarded warm-up run"},
    )
    times: dict[str, list[float]] = {rule: [] for rule in rule_names}
    steps: dict[str, list[float]] = {}
    for si, S in enumerate(sources_grid):
        spec = GenSpec(frame, kind=kind, num_focals=num_focals, seed=_spawn_seed(seed, si))
        inputs = generate(spec, int(S))
        for rule in rule_names:
            cfg = RuleConfig(rule=rule)
            fn = rules._COMBINERS[rule]
            fn(inputs, cfg)  # warm-up, discarded
            samples = []
            step_samples: dict[str, list[float]] = {}
            for _ in range(repeats):
                t0 = time.perf_counter()
                res = fn(inputs, cfg)
                samples.append(time.perf_counter() - t0)
                if res.step_seconds:
                    for key, val in res.step_seconds.items():
                        step_samples.setdefault(key, []).append(val)
            times[rule].append(statistics.median(samples))
            if rule == "lns":
                for key, vals in step_samples.items():
                    steps.setdefault(key, []).append(statistics.median(vals))
    xs = list(sources_grid)
    for rule in rule_names:
        report.series[f"time/{rule}"] = _series(xs, times[rule])
    for key, vals in steps.items():
        report.series[f"lns_step/{key}"] = _series(xs, vals)
    report.timings = {
        f"{rule}@{S}": t for rule in rule_names for S, t in zip(sources_grid, times[rule])
    }
    return report


# ---------------------------------------------------------------------------
# eknn-sweep
# ---------------------------------------------------------------------------


def _run_eknn_sweep(params: dict) -> ExperimentReport:
    seed = int(params.pop("seed", 42))
    n_per_class = int(params.pop("n_per_class", 100))
    separation = float(params.pop("separation", 4.0))
    dim = int(params.pop("dim", 2))
    ks = tuple(params.pop("ks", tuple(range(1, 26))))
    rule_names = tuple(params.pop("rules", ("dempster", "lns", "conjunctive")))
    alpha = float(params.pop("alpha", 0.95))
    _reject_unknown(params)

    ds = eknn.two_gaussian_dataset(n_per_class, separation, dim=dim, seed=seed)
    report = ExperimentReport(
        name="eknn-sweep",
        parameters={
            "seed": seed,
            "n_per_class": n_per_class,
            "separation": separation,
            "dim": dim,
            "ks": list(ks),
            "rules": list(rule_names),
            "alpha": alpha,
        },
        notes={"gamma": "auto (inverse mean same-class pair distance)"},
    )
    for rule in rule_names:
        accs, maxk, err_counts = [], [], []
        for k in ks:
            cfg = eknn.EknnConfig(k=int(k), alpha=alpha, rule=RuleConfig(rule=rule))
            rep = eknn.evaluate_loo(ds, cfg)
            accs.append(rep.accuracy)
            maxk.append(rep.max_kappa)
            err_counts.append(len(rep.errors))
        xs = list(ks)
        report.series[f"accuracy/{rule}"] = _series(xs, accs)
        report.series[f"max_kappa/{rule}"] = _series(xs, maxk, errors=err_counts)
    return report


def _reject_unknown(params: dict) -> None:
    if params:
        raise ParameterError(f"unknown experiment parameters: {sorted(params)}")
