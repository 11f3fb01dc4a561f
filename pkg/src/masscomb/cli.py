"""Command-line front-end.

Subcommands: fuse, transform, decompose, discount, gen, eknn,
experiment <name>, bench.  Exit codes: 0 success, 2 validation error,
3 saturation / total conflict, 4 complexity guard.
"""

from __future__ import annotations

import argparse
import json
import statistics
import sys
import time

from . import eknn as eknn_mod
from . import io as mio
from .core import FrameOfDiscernment, MassFunction, transform
from .errors import ComplexityGuardError, MassCombError, ParameterError, TotalConflictError
from .experiments import EXPERIMENT_NAMES, run_experiment
from .genrand import GEN_KINDS, GenSpec, generate
from .rules import GLOBAL_RULE_NAMES, RULE_NAMES, RuleConfig, combine

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_SATURATION = 3
EXIT_GUARD = 4


def _add_io_flags(p: argparse.ArgumentParser, need_input: bool = True) -> None:
    if need_input:
        p.add_argument("--input", required=True, help="mass-function file to read")
    p.add_argument("--output", help="file to write (default: stdout)")
    p.add_argument("--format", choices=mio.FORMATS, help="file format (default: by extension)")


def _add_rule_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--rule", choices=RULE_NAMES, default="conjunctive")
    p.add_argument("--eta", type=float, default=1.0, help="precision exponent for grouped rules")
    p.add_argument("--lambda", dest="lambda_", type=float, default=1.0,
                   help="shape of the conflict-based reliability estimator")
    p.add_argument("--global-rule", choices=GLOBAL_RULE_NAMES, default="conjunctive",
                   help="rule for the final stage of lns/lnsa")
    p.add_argument("--enumeration-guard", type=int, default=10_000_000)
    p.add_argument("--deterministic", action="store_true",
                   help="sequential accumulation for bit-reproducible output")


def _rule_config(args: argparse.Namespace) -> RuleConfig:
    return RuleConfig(
        rule=args.rule,
        eta=args.eta,
        global_rule=args.global_rule,
        lam=args.lambda_,
        enumeration_guard=args.enumeration_guard,
        deterministic=args.deterministic,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="masscomb",
                                     description="Combine belief functions, at any source count.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fuse", help="combine the assignments in a file")
    _add_io_flags(p)
    _add_rule_flags(p)
    p.set_defaults(handler=_cmd_fuse)

    p = sub.add_parser("transform", help="convert an assignment to another representation")
    _add_io_flags(p)
    p.add_argument("--kind", required=True,
                   help="belief|plausibility|commonality|implicability|pignistic (or bel/pl/q/b/betp)")
    p.set_defaults(handler=_cmd_transform)

    p = sub.add_parser("decompose", help="canonical simple-support weights of each assignment")
    _add_io_flags(p)
    p.set_defaults(handler=_cmd_decompose)

    p = sub.add_parser("discount", help="apply a reliability factor to each assignment")
    _add_io_flags(p)
    p.add_argument("--alpha", type=float, required=True)
    p.set_defaults(handler=_cmd_discount)

    p = sub.add_parser("gen", help="generate random assignments")
    _add_io_flags(p, need_input=False)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--kind", choices=GEN_KINDS, default="general")
    p.add_argument("--frame-size", type=int, default=3)
    p.add_argument("--labels", help="comma-separated hypothesis labels (overrides --frame-size)")
    p.add_argument("--focal-pool", help="comma-separated binary bitmasks, e.g. 001,010")
    p.add_argument("--num-focals", type=int, default=3)
    p.add_argument("--min-singleton-mass", type=float)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--stream", type=int, default=0,
                   help="independent substream of the same seed")
    p.set_defaults(handler=_cmd_gen)

    p = sub.add_parser("eknn", help="evidential K-nearest-neighbour evaluation")
    p.add_argument("--train", required=True, help="CSV with features and the label in the last column")
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--alpha", type=float, default=0.95)
    _add_rule_flags(p)
    p.add_argument("--loo", action="store_true", help="leave-one-out evaluation at --k")
    p.add_argument("--sweep-k", metavar="A:B", help="leave-one-out for every K in the range")
    p.add_argument("--standardize", action="store_true")
    p.add_argument("--report", help="write the evaluation report as JSON")
    p.set_defaults(handler=_cmd_eknn)

    p = sub.add_parser("experiment", help="run a named experiment")
    p.add_argument("name", choices=EXPERIMENT_NAMES)
    p.add_argument("--seed", type=int)
    p.add_argument("--eta", type=float)
    p.add_argument("--deterministic", action="store_true")
    p.add_argument("--deterministic-w", type=float, help="constant simple-support weight (conflict-sweep)")
    p.add_argument("--t", type=int, help="restrict the conflict-sweep to one majority ratio")
    p.add_argument("--rule", action="append", help="restrict to these rules (repeatable)")
    p.add_argument("--sources", type=int, action="append", help="source-count grid point (repeatable)")
    p.add_argument("--frame", type=int, help="frame size (timing)")
    p.add_argument("--kind", choices=("ssf", "consonant"), help="input family (timing)")
    p.add_argument("--repeats", type=int, help="timed repetitions (timing)")
    p.add_argument("--k-max", type=int, help="largest neighbour count (eknn-sweep)")
    p.add_argument("--output", help="write the report as JSON")
    p.set_defaults(handler=_cmd_experiment)

    p = sub.add_parser("bench", help="time one rule on generated inputs")
    _add_rule_flags(p)
    p.add_argument("--sources", type=int, default=10_000)
    p.add_argument("--frame", type=int, default=8)
    p.add_argument("--kind", choices=("ssf", "consonant"), default="ssf")
    p.add_argument("--num-focals", type=int, default=5)
    p.add_argument("--repeats", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", help="write the timing record as JSON")
    p.set_defaults(handler=_cmd_bench)

    return parser


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------


def _emit_bbas(args, bbas) -> None:
    if args.output:
        mio.write_bbas(args.output, bbas, fmt=args.format)
    else:
        fmt = args.format or "csv"
        if fmt == "csv":
            print(",".join(mio.bitmask_header(bbas[0].frame.n)))
            for m in bbas:
                print(",".join(repr(v) for v in m.values.tolist()))
        else:
            print(json.dumps(mio.to_json_doc(bbas), indent=1))


def _emit_json(args, payload: dict) -> None:
    text = json.dumps(payload, indent=1)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _read_inputs(args) -> list[MassFunction]:
    return mio.read_bbas(args.input, fmt=args.format)


# ---------------------------------------------------------------------------
# Command handlers
# ---------------------------------------------------------------------------


def _cmd_fuse(args) -> int:
    bbas = _read_inputs(args)
    result = combine(bbas, _rule_config(args))
    _emit_bbas(args, [result.mass])
    print(
        f"rule={args.rule} sources={len(bbas)} conflict={result.conflict:.6g}",
        file=sys.stderr,
    )
    return EXIT_OK


def _cmd_transform(args) -> int:
    from .core import resolve_kind

    bbas = _read_inputs(args)
    frame = bbas[0].frame
    if resolve_kind(args.kind) == "mass":
        _emit_bbas(args, bbas)
        return EXIT_OK
    rows = [transform(m, args.kind) for m in bbas]
    kind = rows[0].kind
    header = frame.labels if kind == "pignistic" else mio.bitmask_header(frame.n)
    payload = {
        "kind": kind,
        "frame": list(frame.labels),
        "columns": list(header),
        "values": [r.values.tolist() for r in rows],
    }
    _emit_json(args, payload)
    return EXIT_OK


def _cmd_decompose(args) -> int:
    from .core import canonical_decompose

    bbas = _read_inputs(args)
    frame = bbas[0].frame
    weights = [canonical_decompose(m).weights.tolist() for m in bbas]
    payload = {
        "kind": "decomposition-weights",
        "frame": list(frame.labels),
        "columns": mio.bitmask_header(frame.n),
        "values": weights,
    }
    _emit_json(args, payload)
    return EXIT_OK


def _cmd_discount(args) -> int:
    from .core import discount

    bbas = _read_inputs(args)
    _emit_bbas(args, [discount(m, args.alpha) for m in bbas])
    return EXIT_OK


def _parse_focal_pool(text: str, frame: FrameOfDiscernment) -> tuple[int, ...]:
    pool = []
    for tok in text.split(","):
        tok = tok.strip()
        try:
            pool.append(int(tok, 2))
        except ValueError:
            raise ParameterError(f"focal pool entry {tok!r} is not a binary bitmask") from None
    return tuple(pool)


def _cmd_gen(args) -> int:
    if args.labels:
        frame = FrameOfDiscernment(tuple(s.strip() for s in args.labels.split(",")))
    else:
        frame = FrameOfDiscernment.numbered(args.frame_size)
    pool = _parse_focal_pool(args.focal_pool, frame) if args.focal_pool else None
    spec = GenSpec(
        frame,
        kind=args.kind,
        focal_pool=pool,
        num_focals=args.num_focals,
        min_singleton_mass=args.min_singleton_mass,
        seed=args.seed,
        stream=args.stream,
    )
    _emit_bbas(args, generate(spec, args.count))
    return EXIT_OK


def _parse_k_range(text: str) -> range:
    try:
        lo, hi = (int(tok) for tok in text.split(":"))
    except ValueError:
        raise ParameterError(f"--sweep-k expects A:B, got {text!r}") from None
    if not 1 <= lo <= hi:
        raise ParameterError(f"bad K range {text!r}")
    return range(lo, hi + 1)


def _cmd_eknn(args) -> int:
    ds = eknn_mod.load_dataset_csv(args.train)
    rule_cfg = _rule_config(args)
    payload: dict = {
        "dataset": {"samples": ds.n_samples, "features": ds.n_features,
                    "classes": list(ds.frame.labels)},
        "rule": args.rule,
        "alpha": args.alpha,
        "gamma": "auto (inverse mean same-class pair distance)",
        "standardize": args.standardize,
    }
    ks = list(_parse_k_range(args.sweep_k)) if args.sweep_k else [args.k]
    accs, maxk, errs = [], [], []
    for k in ks:
        cfg = eknn_mod.EknnConfig(
            k=k, alpha=args.alpha, rule=rule_cfg, standardize=args.standardize
        )
        rep = eknn_mod.evaluate_loo(ds, cfg)
        accs.append(rep.accuracy)
        maxk.append(rep.max_kappa)
        errs.append(len(rep.errors))
    payload["k"] = ks
    payload["accuracy"] = accs
    payload["max_kappa"] = maxk
    payload["failed_samples"] = errs
    text = json.dumps(payload, indent=1)
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(text + "\n")
        print(f"k={ks} accuracy={accs}", file=sys.stderr)
    else:
        print(text)
    return EXIT_OK


def _cmd_experiment(args) -> int:
    params: dict = {}
    if args.seed is not None:
        params["seed"] = args.seed
    if args.eta is not None and args.name in ("table1", "conflict-sweep"):
        params["eta"] = args.eta
    if args.deterministic:
        params["deterministic"] = True
    if args.deterministic_w is not None:
        params["deterministic_w"] = args.deterministic_w
    if args.t is not None:
        params["ts"] = (args.t,)
    if args.rule:
        params["rules"] = tuple(args.rule)
    if args.sources:
        key = "s2_grid" if args.name == "conflict-sweep" else "sources_grid"
        params[key] = tuple(args.sources)
    if args.frame is not None:
        params["frame_size"] = args.frame
    if args.kind is not None:
        params["kind"] = args.kind
    if args.repeats is not None:
        params["repeats"] = args.repeats
    if args.k_max is not None:
        params["ks"] = tuple(range(1, args.k_max + 1))
    report = run_experiment(args.name, params)
    if args.output:
        report.save(args.output)
        print(f"report written to {args.output}", file=sys.stderr)
    else:
        print(json.dumps(report.to_dict(), indent=1))
    for name in report.tables:
        print(report.format_table(name), file=sys.stderr)
    return EXIT_OK


def _cmd_bench(args) -> int:
    frame = FrameOfDiscernment.numbered(args.frame)
    spec = GenSpec(frame, kind=args.kind, num_focals=args.num_focals, seed=args.seed)
    inputs = generate(spec, args.sources)
    cfg = _rule_config(args)
    combine(inputs, cfg)  # warm-up, discarded
    samples = []
    step_samples: dict[str, list[float]] = {}
    for _ in range(args.repeats):
        t0 = time.perf_counter()
        res = combine(inputs, cfg)
        samples.append(time.perf_counter() - t0)
        if res.step_seconds:
            for key, val in res.step_seconds.items():
                step_samples.setdefault(key, []).append(val)
    record = {
        "rule": args.rule,
        "sources": args.sources,
        "frame_size": args.frame,
        "kind": args.kind,
        "seed": args.seed,
        "repeats": args.repeats,
        "seconds": statistics.median(samples),
        "step_seconds": {k: statistics.median(v) for k, v in step_samples.items()},
    }
    _emit_json(args, record)
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ComplexityGuardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except TotalConflictError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SATURATION
    except (MassCombError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
