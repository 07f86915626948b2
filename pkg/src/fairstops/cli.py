"""Command-line surface: generate instances, run algorithms, verify, batch-run.

Exit codes follow one convention across subcommands: 0 success / property
holds, 1 fairness witness found, 2 usage error, 3 resource guard tripped.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from fractions import Fraction

from . import __version__
from .algorithms import (
    ECA_JR_FACTOR,
    GC_JR_FACTOR,
    EnumerationGuardError,
    eca,
    exact_min_cost,
    gc_trsp,
    hybrid,
    hybrid_jr_factor,
)
from .fairness import core_ratio, core_violation, jr_ratio, jr_violation, pf_ratio, pf_violation
from .instances import (
    FAMILIES,
    InstanceParseError,
    canonical_family,
    generate,
    random_euclidean,
    read_instance,
    write_instance,
)
from .model import Instance, induce_clustering, solution_costs, total_cost, validate_instance

_FAMILY_PARAM_FLAGS = ("eps", "h", "gamma", "r", "lam", "delta", "ell")

USAGE_ERROR = 2
GUARD_ERROR = 3


class _CliError(Exception):
    def __init__(self, message: str, code: int = USAGE_ERROR):
        super().__init__(message)
        self.code = code


def _label(instance: Instance, c: int) -> str:
    if instance.candidate_labels is not None:
        return instance.candidate_labels[c]
    return f"s{c}"


def _fmt(x: float) -> str:
    if x != x:
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return repr(float(x))


# ---------------------------------------------------------------------------
# gen
# ---------------------------------------------------------------------------


def _collect_family_params(args) -> dict:
    params = {}
    for name in _FAMILY_PARAM_FLAGS:
        value = getattr(args, name, None)
        if value is not None:
            params[name] = value
    return params


def _cmd_gen(args) -> int:
    try:
        built = generate(args.family, **_collect_family_params(args))
    except (ValueError, TypeError) as exc:
        raise _CliError(str(exc))
    if isinstance(built, Instance):
        issues = validate_instance(built)
        if issues:
            raise _CliError("generated instance failed validation: " + "; ".join(issues))
        write_instance(built, args.out)
        print(f"wrote {args.out}: n={built.n} m={built.m} k={built.k}")
        if built.candidate_labels:
            legend = "  ".join(f"{lb}={j}" for j, lb in enumerate(built.candidate_labels))
            print(f"stop legend: {legend}")
    else:
        # Line clustering instances use their own small format.
        doc = {
            "kind": "line-clustering",
            "datapoints": list(built.datapoints),
            "centers": list(built.centers),
            "k": built.k,
            "ell": built.ell,
        }
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=1)
            fh.write("\n")
        print(f"wrote {args.out}: line instance n={built.n} m={len(built.centers)} k={built.k}")
    return 0


# ---------------------------------------------------------------------------
# run
# ---------------------------------------------------------------------------


def _load_instance(path) -> Instance:
    try:
        return read_instance(path)
    except InstanceParseError as exc:
        raise _CliError(str(exc))
    except OSError as exc:
        raise _CliError(f"cannot read {path}: {exc}")


def _run_algorithm(instance: Instance, alg: str, lam: float | None):
    if alg == "gc":
        return gc_trsp(instance)
    if alg == "eca":
        return eca(instance)
    if alg == "hybrid":
        if lam is None or not 0.0 <= lam <= 1.0:
            raise _CliError(f"hybrid needs --lam in [0, 1], got {lam}")
        return hybrid(instance, lam)
    raise _CliError(f"unknown algorithm {alg!r}")


def _cmd_run(args) -> int:
    instance = _load_instance(args.instance)
    solution, trace = _run_algorithm(instance, args.alg, args.lam)
    print("stops:", " ".join(_label(instance, c) for c in solution) or "(none)")
    print("stop indices:", ",".join(str(c) for c in solution))
    costs = solution_costs(instance, solution)
    print("agent costs:", " ".join(_fmt(c) for c in costs))
    print("total cost:", _fmt(total_cost(instance, solution)))
    if args.trace:
        doc = [
            {
                "radius": "inf" if math.isinf(ev.radius) else ev.radius,
                "opened": list(ev.opened),
                "endpoints": list(ev.endpoints),
                "agents": list(ev.agents),
            }
            for ev in trace.events
        ]
        with open(args.trace, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=1)
            fh.write("\n")
        print(f"trace written to {args.trace}")
    return 0


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def _parse_solution(text: str, m: int) -> tuple[int, ...]:
    if not text.strip():
        return ()
    try:
        stops = tuple(sorted({int(tok) for tok in text.split(",")}))
    except ValueError:
        raise _CliError(f"solution must be comma-separated indices, got {text!r}")
    if stops and (stops[0] < 0 or stops[-1] >= m):
        raise _CliError(f"solution index out of range [0, {m})")
    return stops


def _parse_alpha(text: str) -> Fraction:
    try:
        alpha = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise _CliError(f"alpha must be a rational like 2 or 59/30, got {text!r}")
    if alpha < 1:
        raise _CliError(f"alpha must be >= 1, got {text}")
    return alpha


def _print_witness(instance: Instance, witness) -> None:
    print("witness coalition:", ",".join(str(i) for i in witness.coalition))
    print(
        "witness deviation:",
        ",".join(str(c) for c in witness.deviation),
        "(" + " ".join(_label(instance, c) for c in witness.deviation) + ")",
    )
    print("witness factor:", _fmt(witness.factor))


def _cmd_verify(args) -> int:
    instance = _load_instance(args.instance)
    stops = _parse_solution(args.solution, instance.m)
    beta = args.beta if args.beta is not None else 1.0
    if beta < 1:
        raise _CliError(f"beta must be >= 1, got {beta}")
    try:
        if args.prop == "jr":
            report = jr_ratio(instance, stops)
            witness = jr_violation(instance, stops, beta)
        elif args.prop == "core":
            alpha = _parse_alpha(args.alpha)
            report = core_ratio(instance, stops, alpha, backend=args.backend)
            witness = core_violation(instance, stops, alpha, beta, backend=args.backend)
        elif args.prop == "pf":
            clustering = induce_clustering(instance)
            report = pf_ratio(clustering, stops)
            witness = pf_violation(clustering, stops, beta)
        else:
            raise _CliError(f"unknown property {args.prop!r}")
    except EnumerationGuardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return GUARD_ERROR
    if args.json:
        doc = {
            "property": report.prop,
            "alpha": str(report.alpha) if report.alpha is not None else None,
            "factor": "inf" if math.isinf(report.factor) else report.factor,
            "coalition": list(witness.coalition) if witness else [],
            "deviation": list(witness.deviation) if witness else [],
        }
        print(json.dumps(doc))
        return 1 if witness else 0
    print("property:", args.prop)
    if args.prop == "core":
        print("alpha:", args.alpha)
    print("tight factor:", _fmt(report.factor))
    print(f"holds at beta={_fmt(beta)}:", "no" if witness else "yes")
    if witness:
        _print_witness(instance, witness)
        return 1
    return 0


# ---------------------------------------------------------------------------
# experiment
# ---------------------------------------------------------------------------

CSV_SCHEMA = "# fairstops-experiment v1"
CSV_COLUMNS = (
    "seed",
    "n",
    "m",
    "k",
    "transit_scale",
    "algorithm",
    "jr_factor",
    "core_alpha",
    "core_factor",
    "pf_factor",
    "total_cost",
    "runtime_ms",
)


def _parse_algs(text: str) -> list[tuple[str, float | None]]:
    out: list[tuple[str, float | None]] = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        if tok in ("gc", "eca"):
            out.append((tok, None))
        elif tok.startswith("hybrid"):
            lam = 0.5
            if ":" in tok:
                try:
                    lam = float(tok.split(":", 1)[1])
                except ValueError:
                    raise _CliError(f"bad hybrid weight in {tok!r}")
            if not 0.0 <= lam <= 1.0:
                raise _CliError(f"hybrid weight must lie in [0, 1], got {lam}")
            out.append(("hybrid", lam))
        else:
            raise _CliError(f"unknown algorithm {tok!r}")
    if not out:
        raise _CliError("need at least one algorithm")
    return out


def _parse_transit(text: str) -> tuple[str, float, str]:
    if text == "null":
        return "null", 1.0, "0"
    if text == "random":
        return "random", 1.0, "random"
    if text.startswith("scaled:"):
        try:
            factor = float(text.split(":", 1)[1])
        except ValueError:
            raise _CliError(f"bad transit factor in {text!r}")
        return "scaled", factor, repr(factor)
    raise _CliError(f"transit must be null, random or scaled:<factor>, got {text!r}")


def _alg_name(alg: str, lam: float | None) -> str:
    return f"hybrid:{lam}" if alg == "hybrid" else alg


def _cmd_experiment(args) -> int:
    checks = [tok.strip() for tok in args.checks.split(",") if tok.strip()]
    unknown = set(checks) - {"jr", "core", "pf", "mincost"}
    if unknown:
        raise _CliError(f"unknown checks: {sorted(unknown)}")
    if not checks:
        raise _CliError("need at least one check")
    algs = _parse_algs(args.algs)
    alpha = _parse_alpha(args.alpha)
    if args.rounds < 1:
        raise _CliError("rounds must be >= 1")
    mode, factor, scale_label = _parse_transit(args.transit)
    ks = [int(tok) for tok in str(args.k).split(",") if tok.strip()]
    if args.instance:
        source = "file"
    elif args.family:
        source = "family"
    else:
        source = "random"
        if not ks:
            raise _CliError("random experiments need --k")

    rows = []
    for round_idx in range(args.rounds):
        seed = args.seed_base + round_idx
        if source == "file":
            instances = [(seed, _load_instance(args.instance))]
        elif source == "family":
            built = generate(args.family, **_collect_family_params(args))
            if not isinstance(built, Instance):
                raise _CliError("line instances are not supported by experiment")
            instances = [(seed, built)]
        else:
            instances = [
                (seed, random_euclidean(args.n, args.m, k, seed, transit=mode, factor=factor))
                for k in ks
                if k <= args.m
            ]
        for seed_val, inst in instances:
            for alg, lam in algs:
                row = {
                    "seed": seed_val,
                    "n": inst.n,
                    "m": inst.m,
                    "k": inst.k,
                    "transit_scale": scale_label,
                    "algorithm": _alg_name(alg, lam),
                    "jr_factor": "",
                    "core_alpha": "",
                    "core_factor": "",
                    "pf_factor": "",
                    "total_cost": "",
                    "runtime_ms": "",
                }
                t0 = time.perf_counter()
                try:
                    solution, _ = _run_algorithm(inst, alg, lam)
                    row["total_cost"] = _fmt(total_cost(inst, solution))
                    if "jr" in checks:
                        row["jr_factor"] = _fmt(jr_ratio(inst, solution).factor)
                    if "core" in checks:
                        row["core_alpha"] = str(alpha)
                        row["core_factor"] = _fmt(core_ratio(inst, solution, alpha).factor)
                    if "pf" in checks:
                        row["pf_factor"] = _fmt(
                            pf_ratio(induce_clustering(inst), solution.stops).factor
                        )
                except EnumerationGuardError:
                    row["core_factor"] = "error"
                except Exception:
                    row["total_cost"] = "error"
                if args.timing:
                    row["runtime_ms"] = f"{(time.perf_counter() - t0) * 1e3:.3f}"
                rows.append(row)
            if "mincost" in checks:
                row = {col: "" for col in CSV_COLUMNS}
                row.update(
                    seed=seed_val,
                    n=inst.n,
                    m=inst.m,
                    k=inst.k,
                    transit_scale=scale_label,
                    algorithm="mincost",
                )
                t0 = time.perf_counter()
                try:
                    _, optimum = exact_min_cost(inst, max_subsets=args.max_subsets)
                    row["total_cost"] = _fmt(optimum)
                except EnumerationGuardError:
                    row["total_cost"] = "error"
                if args.timing:
                    row["runtime_ms"] = f"{(time.perf_counter() - t0) * 1e3:.3f}"
                rows.append(row)

    rows.sort(key=lambda rr: (rr["seed"], rr["algorithm"], rr["k"]))
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        fh.write(CSV_SCHEMA + "\n")
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)
    print(f"wrote {args.out}: {len(rows)} rows")
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _add_family_flags(sub) -> None:
    sub.add_argument("--eps", type=float, help="tightness gap of the construction")
    sub.add_argument("--h", type=float, help="group-size scale")
    sub.add_argument("--gamma", type=float, help="coalition size factor (kz family)")
    sub.add_argument("--r", type=int, help="agents per edge (kz family)")
    sub.add_argument("--lam", "--lambda", dest="lam", type=float, help="hybrid mixing weight")
    sub.add_argument("--delta", type=float, help="coalition-size gap")
    sub.add_argument("--ell", type=int, help="dictator rank (line family)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fairstops",
        description="Fair transit stop placement: algorithms, verifiers, generators.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    gen = subs.add_parser("gen", help="generate a named instance family to a file")
    gen.add_argument("--family", required=True, help=f"one of {', '.join(sorted(FAMILIES))} (aliases accepted)")
    _add_family_flags(gen)
    gen.add_argument("--out", required=True)
    gen.set_defaults(func=_cmd_gen)

    run = subs.add_parser("run", help="run one algorithm on an instance file")
    run.add_argument("--instance", required=True)
    run.add_argument("--alg", required=True, choices=("gc", "eca", "hybrid"))
    run.add_argument("--lam", "--lambda", dest="lam", type=float, help="mixing weight for --alg hybrid")
    run.add_argument("--trace", help="write the sweep trace to this JSON file")
    run.set_defaults(func=_cmd_run)

    verify = subs.add_parser("verify", help="verify a fairness property of a solution")
    verify.add_argument("--instance", required=True)
    verify.add_argument("--solution", required=True, help="comma-separated candidate indices")
    verify.add_argument("--prop", required=True, choices=("jr", "core", "pf"))
    verify.add_argument("--alpha", default="1", help="coalition-size factor (core)")
    verify.add_argument("--beta", type=float, help="cost factor to test (default 1)")
    verify.add_argument("--backend", default="enumerate", choices=("enumerate", "milp"))
    verify.add_argument("--json", action="store_true", help="emit the report as one JSON object")
    verify.set_defaults(func=_cmd_verify)

    exp = subs.add_parser("experiment", help="batch runs with CSV output")
    exp.add_argument("--out", required=True)
    exp.add_argument("--instance", help="run on one instance file")
    exp.add_argument("--family", help="run on a generated family instance")
    _add_family_flags(exp)
    exp.add_argument("--n", type=int, default=12, help="agents per random instance")
    exp.add_argument("--m", type=int, default=8, help="candidates per random instance")
    exp.add_argument("--k", default="3", help="comma-separated budgets for random instances")
    exp.add_argument("--rounds", type=int, default=1, help="number of seeds (repetitions)")
    exp.add_argument("--seed-base", type=int, default=0)
    exp.add_argument("--algs", default="gc,eca,hybrid:0.5")
    exp.add_argument("--checks", default="jr")
    exp.add_argument("--alpha", default="2", help="core size factor")
    exp.add_argument("--transit", default="null", help="null | random | scaled:<factor>")
    exp.add_argument("--timing", action="store_true", help="record wall times (breaks byte determinism)")
    exp.add_argument("--max-subsets", type=int, default=200_000)
    exp.set_defaults(func=_cmd_experiment)

    ver = subs.add_parser("version", help="print the package version")
    ver.set_defaults(func=lambda args: (print(__version__), 0)[1])

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help.
        return int(exc.code or 0)
    try:
        return args.func(args)
    except _CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except EnumerationGuardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return GUARD_ERROR


if __name__ == "__main__":
    sys.exit(main())
