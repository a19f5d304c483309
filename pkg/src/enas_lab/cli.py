"""Command-line front end: experiments, validators, and stable serialization.

Exit codes: 0 success, 1 usage error, 2 failed validation check, 3 I/O error.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import random
import sys
import time
from pathlib import Path

import numpy as np

from .evolution import (
    Action,
    Mode,
    TrialConfig,
    init_architecture,
    run_trial,
    sample_k,
    sample_op,
)
from .fitness import (
    Architecture,
    BlockType,
    Semantics,
    allocation_levels,
    best_allocation_bruteforce,
    best_allocation_greedy,
    literal_levels,
    placement_fitness,
)
from .geometry import make_instance
from .harness import (
    QUARTER_N,
    SweepCell,
    SweepConfig,
    estimate_drift,
    initialization_distribution,
    resolve_s,
    run_sweep_raw,
)
from .network import build_network, monte_carlo_accuracy

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_IO = 3

CELL_COLUMNS = ["n", "mode", "semantics", "trials", "mean", "std", "se",
                "ci95_lo", "ci95_hi", "min", "max", "theory_upper", "capped"]
TRIAL_COLUMNS = ["trial", "seed", "n", "mode", "semantics", "generations",
                 "init_nA", "init_nB", "init_nC",
                 "final_nA", "final_nB", "final_nC", "hit_cap"]
TRAJECTORY_COLUMNS = ["generation", "n_A", "n_B", "n_C", "i", "j",
                      "accepted", "K"]
DRIFT_COLUMNS = ["phase", "mean_one_step_decrease", "std_error", "samples"]
DISCREPANCY_COLUMNS = ["n", "n_A", "n_B", "n_C",
                       "literal_i", "literal_j", "placement_i", "placement_j"]


class UsageError(Exception):
    pass


class ValidationError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        raise UsageError(message)


def fmt(value) -> str:
    """Shortest round-trip serialization for CSV fields."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def parse_n_values(spec: str) -> list[int]:
    """Either a single integer or an inclusive range 'lo..hi:step'."""
    if ".." in spec:
        lo_part, _, rest = spec.partition("..")
        hi_part, _, step_part = rest.partition(":")
        step = int(step_part) if step_part else 1
        lo, hi = int(lo_part), int(hi_part)
        if step <= 0 or hi < lo:
            raise UsageError(f"bad n range {spec!r}")
        return list(range(lo, hi + 1, step))
    return [int(spec)]


def parse_modes(spec: str) -> list[Mode]:
    out = []
    for token in spec.split(","):
        token = token.strip()
        try:
            out.append(Mode(token))
        except ValueError:
            raise UsageError(f"unknown mode {token!r}") from None
    return out


def parse_semantics(spec: str) -> list[Semantics]:
    if spec == "both":
        return [Semantics.LITERAL, Semantics.PLACEMENT]
    try:
        return [Semantics(spec)]
    except ValueError:
        raise UsageError(f"unknown semantics {spec!r}") from None


def parse_s(spec: str) -> int | str:
    if spec == QUARTER_N:
        return QUARTER_N
    try:
        value = int(spec)
    except ValueError:
        raise UsageError(f"--s must be an integer or '{QUARTER_N}'") from None
    if value < 0:
        raise UsageError("--s must be >= 0")
    return value


def load_config_file(path: str) -> dict[str, str]:
    """Flat 'key = value' lines; '#' starts a comment."""
    values: dict[str, str] = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from None
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        values[key.strip()] = value.strip()
    return values


_BOOL_KEYS = {"trajectory", "strict_selection"}


def resolve(args: argparse.Namespace, defaults: dict) -> dict:
    """Merge flag values over config-file values over built-in defaults."""
    config = load_config_file(args.config) if getattr(args, "config", None) else {}
    resolved = {}
    for key, default in defaults.items():
        flag_value = getattr(args, key, None)
        if isinstance(default, bool):
            # store_true flags: False means "not given"
            flag_value = flag_value or None
        if flag_value is not None:
            resolved[key] = flag_value
        elif key in config:
            raw = config[key]
            resolved[key] = (raw.lower() in ("1", "true", "yes")
                             if key in _BOOL_KEYS else raw)
        else:
            resolved[key] = default
    return resolved


def write_csv(path: Path, columns: list[str], rows) -> None:
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([fmt(v) for v in row])


def write_resolved_config(path: Path, resolved: dict) -> None:
    lines = []
    for key in sorted(resolved):
        value = resolved[key]
        if isinstance(value, bool):
            value = "true" if value else "false"
        lines.append(f"{key} = {value}")
    path.write_text("\n".join(lines) + "\n")


def cell_row(c: SweepCell) -> list:
    return [c.n, c.mode.value, c.semantics.value, c.trials, c.mean, c.std,
            c.std_error, c.ci95_low, c.ci95_high, c.min, c.max,
            c.theory_upper, c.capped_trials]


def _out_dir(resolved: dict) -> Path:
    out = resolved.get("out")
    if not out:
        raise UsageError("--out is required for this command")
    path = Path(out)
    try:
        path.mkdir(parents=True, exist_ok=True)
        probe = path / ".write-probe"
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        raise OSError(f"output directory {out} is not writable: {exc}") from exc
    return path


# ---------------------------------------------------------------- subcommands

def cmd_run(args) -> int:
    defaults = dict(n="16", mode="onebit", semantics="literal",
                    s=QUARTER_N, seed="0", max_gens=str(10**7),
                    trajectory=False, strict_selection=False, out=None)
    r = resolve(args, defaults)
    (n,) = parse_n_values(str(r["n"]))
    mode = parse_modes(str(r["mode"]))[0]
    sem = parse_semantics(str(r["semantics"]))[0]
    s = resolve_s(parse_s(str(r["s"])), n)
    cfg = TrialConfig(
        n=n, s=s, mode=mode, semantics=sem, seed=int(r["seed"]),
        max_generations=int(r["max_gens"]),
        record_trajectory=bool(r["trajectory"]),
        strict_selection=bool(r["strict_selection"]),
    )
    try:
        result = run_trial(cfg)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    resolved = {"n": n, "mode": mode.value, "semantics": sem.value, "s": s,
                "seed": cfg.seed, "max_gens": cfg.max_generations,
                "trajectory": cfg.record_trajectory,
                "strict_selection": cfg.strict_selection,
                "out": r["out"] or ""}
    payload = {
        "config": resolved,
        "generations": result.generations,
        "initial": result.initial.as_tuple(),
        "final": result.final.as_tuple(),
        "hit_cap": result.hit_cap,
    }
    print(json.dumps(payload))
    if cfg.record_trajectory and r["out"]:
        out = _out_dir(resolved)
        rows = [[st.generation, st.n_a, st.n_b, st.n_c, st.i, st.j,
                 st.accepted, st.k] for st in result.trajectory]
        write_csv(out / "trajectory.csv", TRAJECTORY_COLUMNS, rows)
        write_resolved_config(out / "config_resolved.cfg", resolved)
    return EXIT_OK


def cmd_sweep(args) -> int:
    workers_default = os.environ.get("ENAS_LAB_WORKERS", "1")
    defaults = dict(n="12..100:4", modes="onebit,multibit",
                    semantics="literal", trials="10000", s=QUARTER_N,
                    seed="0", max_gens=str(10**7), workers=workers_default,
                    strict_selection=False, out=None)
    r = resolve(args, defaults)
    try:
        cfg = SweepConfig(
            n_values=tuple(parse_n_values(str(r["n"]))),
            modes=tuple(parse_modes(str(r["modes"]))),
            semantics=tuple(parse_semantics(str(r["semantics"]))),
            trials=int(r["trials"]),
            s_rule=parse_s(str(r["s"])),
            master_seed=int(r["seed"]),
            workers=int(r["workers"]),
            max_generations=int(r["max_gens"]),
            strict_selection=bool(r["strict_selection"]),
        )
        for n in cfg.n_values:
            make_instance(n)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    resolved = {
        "n": str(r["n"]), "modes": ",".join(m.value for m in cfg.modes),
        "semantics": str(r["semantics"]), "trials": cfg.trials,
        "s": str(r["s"]), "seed": cfg.master_seed,
        "max_gens": cfg.max_generations, "workers": cfg.workers,
        "strict_selection": cfg.strict_selection, "out": r["out"] or "",
    }
    out = _out_dir(resolved)
    cells, raw = run_sweep_raw(cfg)
    write_csv(out / "cells.csv", CELL_COLUMNS, [cell_row(c) for c in cells])
    write_csv(out / "trials.csv", TRIAL_COLUMNS, [
        [t.trial, t.seed, t.n, t.mode.value, t.semantics.value, t.generations,
         *t.initial, *t.final, t.hit_cap] for t in raw
    ])
    summary = {
        "config": resolved,
        "cells": [
            {"n": c.n, "mode": c.mode.value, "semantics": c.semantics.value,
             "trials": c.trials, "mean": c.mean, "std": c.std,
             "se": c.std_error, "ci95_lo": c.ci95_low, "ci95_hi": c.ci95_high,
             "min": c.min, "max": c.max, "theory_upper": c.theory_upper,
             "capped": c.capped_trials}
            for c in cells
        ],
        "meta": {"timestamp": time.strftime("%Y-%m-%dT%H:%M:%S%z")},
    }
    (out / "summary.json").write_text(json.dumps(summary, indent=2) + "\n")
    write_resolved_config(out / "config_resolved.cfg", resolved)
    total_capped = sum(c.capped_trials for c in cells)
    print(f"wrote {len(cells)} cells, {len(raw)} trials to {out}"
          + (f" ({total_capped} capped)" if total_capped else ""))
    return EXIT_OK


def cmd_drift(args) -> int:
    defaults = dict(n="64", mode="multibit", semantics="literal",
                    trials="10000", s=QUARTER_N, seed="0",
                    max_gens=str(10**7), out=None)
    r = resolve(args, defaults)
    (n,) = parse_n_values(str(r["n"]))
    mode = parse_modes(str(r["mode"]))[0]
    sem = parse_semantics(str(r["semantics"]))[0]
    s = resolve_s(parse_s(str(r["s"])), n)
    cfg = TrialConfig(n=n, s=s, mode=mode, semantics=sem, seed=int(r["seed"]),
                      max_generations=int(r["max_gens"]),
                      record_trajectory=True)
    try:
        records = estimate_drift(cfg, int(r["trials"]))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rows = [[rec.phase.value, rec.mean_one_step_decrease, rec.std_error,
             rec.samples] for rec in records]
    if r["out"]:
        out = _out_dir(r)
        write_csv(out / "drift.csv", DRIFT_COLUMNS, rows)
    for row in rows:
        print(",".join(fmt(v) for v in row))
    return EXIT_OK


def cmd_validate_fitness(args) -> int:
    defaults = dict(n="16", cap="10", mc_archs="5", mc_samples="200000",
                    seed="0")
    r = resolve(args, defaults)
    n_values = parse_n_values(str(r["n"]))
    cap = int(r["cap"])
    failures = 0
    for n in n_values:
        inst = make_instance(n)
        mismatches = 0
        for n_a in range(cap + 1):
            for n_b in range(cap + 1):
                for n_c in range(cap + 1):
                    x = Architecture(n_a, n_b, n_c)
                    greedy = allocation_levels(best_allocation_greedy(x, inst))
                    brute = allocation_levels(
                        best_allocation_bruteforce(x, inst, cap=cap + 1))
                    if greedy != brute:
                        mismatches += 1
        status = "PASS" if mismatches == 0 else "FAIL"
        print(f"greedy-vs-bruteforce n={n} cap={cap}: {status} "
              f"({(cap + 1) ** 3} architectures, {mismatches} mismatches)")
        failures += mismatches

    rng_arch = random.Random(int(r["seed"]))
    mc_rng = np.random.default_rng(int(r["seed"]))
    samples = int(r["mc_samples"])
    for n in n_values:
        inst = make_instance(n)
        for _ in range(int(r["mc_archs"])):
            x = Architecture(rng_arch.randint(0, inst.a),
                             rng_arch.randint(0, inst.b + inst.c),
                             rng_arch.randint(0, inst.b + inst.c))
            score = placement_fitness(x, inst)
            cl = build_network(best_allocation_greedy(x, inst), inst, x)
            est, se = monte_carlo_accuracy(cl, samples, mc_rng)
            tol = max(4 * se, 1e-9)
            ok = abs(est - score.value) <= tol
            print(f"monte-carlo n={n} x={x.as_tuple()}: "
                  f"{'PASS' if ok else 'FAIL'} "
                  f"(closed-form {score.value!r}, estimate {est!r}, 4se {4*se!r})")
            if not ok:
                failures += 1
    if failures:
        raise ValidationError(f"{failures} fitness validation failures")
    return EXIT_OK


def cmd_validate_distributions(args) -> int:
    defaults = dict(draws="1000000", s="25", seed="0")
    r = resolve(args, defaults)
    draws = int(r["draws"])
    s = int(str(r["s"]))
    seed = int(r["seed"])
    scale = math.sqrt(1_000_000 / draws)
    failures = 0

    def check(name, observed, expected, tol):
        nonlocal failures
        ok = abs(observed - expected) <= tol
        print(f"{name}: {'PASS' if ok else 'FAIL'} "
              f"(observed {observed!r}, expected {expected!r}, tol {tol!r})")
        if not ok:
            failures += 1

    rng = random.Random(seed)
    add_bc = modify_a = modify_b_to_c = 0
    for _ in range(draws):
        op = sample_op(rng)
        if op.action is Action.ADD and op.kind in (BlockType.B, BlockType.C):
            add_bc += 1
        elif op.action is Action.MODIFY and op.kind is BlockType.A:
            modify_a += 1
        elif (op.action is Action.MODIFY and op.kind is BlockType.B
              and op.dest is BlockType.C):
            modify_b_to_c += 1
    check("P(add B or C)", add_bc / draws, 2 / 9, 0.005 * scale)
    check("P(modify A->B/C)", modify_a / draws, 1 / 9, 0.005 * scale)
    check("P(modify B->C)", modify_b_to_c / draws, 1 / 18, 0.005 * scale)

    rng = random.Random(seed + 1)
    k1 = k3 = 0
    for _ in range(draws):
        k = sample_k(Mode.MULTI_BIT, rng)
        if k == 1:
            k1 += 1
        elif k == 3:
            k3 += 1
    check("P(K=1)", k1 / draws, 1 / math.e, 0.005 * scale)
    check("P(K=3)", k3 / draws, 1 / (2 * math.e), 0.005 * scale)

    rng = random.Random(seed + 2)
    hist = np.zeros(2 * s + 1, dtype=np.int64)
    for _ in range(draws):
        x = init_architecture(s, rng)
        hist[x.n_b + x.n_c] += 1
    empirical = hist / draws
    z = np.arange(2 * s + 1)
    check("E[Z0]", float(np.sum(z * empirical)), float(s), 0.1 * scale)
    tv = 0.5 * float(np.abs(empirical - initialization_distribution(s)).sum())
    check("TV(Z0)", tv, 0.0, 0.005 * scale)

    if failures:
        raise ValidationError(f"{failures} distribution checks failed")
    return EXIT_OK


def cmd_discrepancy_scan(args) -> int:
    defaults = dict(n="16", cap="12", out=None)
    r = resolve(args, defaults)
    cap = int(r["cap"])
    rows = []
    for n in parse_n_values(str(r["n"])):
        inst = make_instance(n)
        for n_a in range(cap + 1):
            for n_b in range(cap + 1):
                for n_c in range(cap + 1):
                    x = Architecture(n_a, n_b, n_c)
                    lit = literal_levels(x, inst)
                    plc = allocation_levels(best_allocation_greedy(x, inst))
                    if lit != plc:
                        rows.append([n, n_a, n_b, n_c, *lit, *plc])
    if r["out"]:
        out = _out_dir(r)
        write_csv(out / "discrepancies.csv", DISCREPANCY_COLUMNS, rows)
    print(f"{len(rows)} architectures with literal/placement disagreement "
          f"(cap {cap})")
    return EXIT_OK


# ------------------------------------------------------------------- plumbing

def build_parser() -> _Parser:
    parser = _Parser(prog="enas-lab",
                     description="Runtime experiments for elitist block-count "
                                 "architecture search on the disk problem")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, *names):
        if "config" in names:
            p.add_argument("--config", help="flat key = value config file")
        if "n" in names:
            p.add_argument("--n", help="problem size: int or lo..hi:step")
        if "seed" in names:
            p.add_argument("--seed", help="master seed (u64)")
        if "s" in names:
            p.add_argument("--s", help=f"init upper bound: int or '{QUARTER_N}'")
        if "out" in names:
            p.add_argument("--out", help="output directory")
        if "max_gens" in names:
            p.add_argument("--max-gens", dest="max_gens",
                           help="generation safety cap")

    p = sub.add_parser("run", help="single trial")
    add_common(p, "config", "n", "seed", "s", "out", "max_gens")
    p.add_argument("--mode", help="onebit or multibit")
    p.add_argument("--semantics", help="literal or placement")
    p.add_argument("--trajectory", action="store_true", default=False)
    p.add_argument("--strict-selection", dest="strict_selection",
                   action="store_true", default=False)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="runtime sweep over (n, mode, semantics)")
    add_common(p, "config", "n", "seed", "s", "out", "max_gens")
    p.add_argument("--modes", help="comma-separated: onebit,multibit")
    p.add_argument("--semantics", help="literal, placement or both")
    p.add_argument("--trials", help="trials per cell")
    p.add_argument("--workers", help="parallel workers "
                                     "(default $ENAS_LAB_WORKERS or 1)")
    p.add_argument("--strict-selection", dest="strict_selection",
                   action="store_true", default=False)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("drift", help="empirical per-phase one-step drift")
    add_common(p, "config", "n", "seed", "s", "out", "max_gens")
    p.add_argument("--mode", help="onebit or multibit")
    p.add_argument("--semantics", help="literal or placement")
    p.add_argument("--trials", help="trajectories to pool")
    p.set_defaults(func=cmd_drift)

    p = sub.add_parser("validate-fitness",
                       help="greedy vs brute force, Monte Carlo vs closed form")
    add_common(p, "config", "n", "seed")
    p.add_argument("--cap", help="enumerate architectures in [0, cap]^3")
    p.add_argument("--mc-archs", dest="mc_archs",
                   help="random architectures for the Monte Carlo check")
    p.add_argument("--mc-samples", dest="mc_samples",
                   help="Monte Carlo samples per architecture")
    p.set_defaults(func=cmd_validate_fitness)

    p = sub.add_parser("validate-distributions",
                       help="operator, K and initialization laws")
    add_common(p, "config", "seed")
    p.add_argument("--draws", help="sample count per check")
    p.add_argument("--s", help="initialization upper bound for the Z0 check")
    p.set_defaults(func=cmd_validate_distributions)

    p = sub.add_parser("discrepancy-scan",
                       help="architectures where the two fitness semantics differ")
    add_common(p, "config", "n", "out")
    p.add_argument("--cap", help="enumerate architectures in [0, cap]^3")
    p.set_defaults(func=cmd_discrepancy_scan)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"error: usage: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValidationError as exc:
        print(f"error: validation: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: io: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
