"""Command-line interface: run scenario files, check invariants, replicate.

Exit codes: 0 success / all checks pass, 1 check or replication failures,
2 validation errors and unknown names. Proxy ids are 1-based here.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import random
import sys
from pathlib import Path

from . import dynamics as dyn
from . import manipulation as manip
from . import metrics, model
from . import partial_info as pinfo
from .dynamics import PolicyKind, PolicySpec, Scheduler
from .errors import ProxylineError, ScenarioValidationError
from .fixtures import REPLICATIONS, replicate
from .generators import random_scenario, random_state
from .model import Space
from .oracle import GridSpec, oracle_best_deviation
from .scenario_io import load_scenario_file, summarize, write_summary, write_trace


def cmd_run(args) -> int:
    try:
        sf = load_scenario_file(args.file)
    except (ScenarioValidationError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    max_steps = args.max_steps if args.max_steps is not None else sf.max_steps
    trace = dyn.run_dynamics(
        sf.scenario,
        sf.scheduler,
        sf.policies,
        max_steps=max_steps,
        oscillation_window=sf.oscillation_window,
        mode=sf.mode,
    )
    out_dir = Path(args.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    trace_path = out_dir / sf.trace_path
    summary_path = out_dir / sf.summary_path
    write_trace(trace, trace_path)
    summary = summarize(trace)
    write_summary(summary, summary_path)
    print(f"wrote {trace_path} ({summary['steps']} moves) and {summary_path}")
    print(
        f"outcome {summary['initial_outcome']} -> {summary['final_outcome']}"
        f"  sc {summary['sc_initial']} -> {summary['sc_final']}"
        f"  stop {summary['stop_reason']}"
    )
    return 0


# ---------------------------------------------------------------------------
# invariant checks


def _check_one_random(seed: int) -> list[tuple[str, bool, str]]:
    """Full invariant sweep on one seeded random scenario."""
    rng = random.Random(seed)
    results: list[tuple[str, bool, str]] = []

    scenario = random_scenario(rng)
    ok = True
    for _ in range(6):
        state = random_state(rng, scenario)
        if model.nearest_proxy_to_median(scenario, state) != model.wm_winner(scenario, state)[0]:
            ok = False
    results.append(("lemma1_equivalence", ok, ""))

    witness = manip.follower_manipulation_scan(scenario, grid_step=0.5)
    results.append(("theorem1_no_follower_manipulation", witness is None, str(witness)))

    verdict = manip.characterize_truthful_manipulability(scenario)
    lo, hi = scenario.bounding_box()
    grid = GridSpec(lo, hi, 0.25)
    found = any(
        oracle_best_deviation(scenario, scenario.truthful_state(), j, grid) is not None
        for j in range(scenario.num_proxies)
    )
    results.append(
        ("theorem2_oracle_agreement", verdict.manipulable == found,
         f"analytic {verdict.manipulable}, oracle {found}")
    )

    disc = random_scenario(rng, space=Space.discrete(1.0), both_sides=True, no_peak_at_median=True)
    policies = [
        PolicySpec(PolicyKind.MONOTONE_BETTER_RESPONSE, fraction=rng.choice([0.25, 0.5, 1.0]),
                   truth_oriented=True)
        for _ in range(disc.num_proxies)
    ]
    trace = dyn.run_dynamics(disc, Scheduler.round_robin(), policies, max_steps=200)
    med = metrics.true_median(disc)
    ok = trace.stop_reason == dyn.StopReason.PNE and trace.final_outcome() == med
    results.append(("discrete_monotone_converges_to_median", ok,
                    f"stop {trace.stop_reason.value}, outcome {trace.final_outcome()}, med {med}"))

    lemmas_ok = dyn.check_bound_invariant(trace)
    if dyn.trace_is_monotone(trace):
        for seg in dyn.detect_meta_moves(trace):
            if not seg.exit_delta < seg.entry_delta:
                lemmas_ok = False
        base = trace.initial_delta
        prev = base
        for rec in trace.records:
            if rec.mover != rec.winner_before and rec.winner_after != rec.mover:
                if not rec.delta_after < prev:
                    lemmas_ok = False
            prev = rec.delta_after
    results.append(("delta_lemmas_and_bound", lemmas_ok, ""))

    part = random_scenario(rng, min_proxies=2, both_sides=True, no_peak_at_median=True)
    ptrace = dyn.run_dynamics(
        part, Scheduler.round_robin(),
        [PolicySpec(PolicyKind.MINIMAX_REGRET)] * part.num_proxies,
        max_steps=60, mode="partial_info",
    )
    med = metrics.true_median(part)
    sound = all(iv.contains(med) for iv in ptrace.interval_history)
    shrinking = all(
        b.intersect(a) == b
        for a, b in zip(ptrace.interval_history, ptrace.interval_history[1:])
    )
    results.append(("interval_soundness_and_monotonicity", sound and shrinking,
                    f"sound {sound}, shrinking {shrinking}"))
    return results


def _check_file(path: str) -> list[tuple[str, bool, str]]:
    sf = load_scenario_file(path)
    scenario = sf.scenario
    results: list[tuple[str, bool, str]] = []
    state = scenario.truthful_state()
    results.append(
        ("lemma1_equivalence",
         model.nearest_proxy_to_median(scenario, state) == model.wm_winner(scenario, state)[0], "")
    )
    witness = manip.follower_manipulation_scan(scenario, grid_step=0.5)
    results.append(("theorem1_no_follower_manipulation", witness is None, str(witness)))
    if sf.alt_followers is not None:
        alt = scenario.with_followers(sf.alt_followers)
        same = pinfo.observe(scenario, state) == pinfo.observe(alt, state)
        results.append(("identical_observed_state", same, ""))
    return results


def cmd_check(args) -> int:
    rows: list[tuple[str, bool, str]] = []
    if args.file:
        try:
            rows = _check_file(args.file)
        except (ScenarioValidationError, FileNotFoundError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
    else:
        seeds = [args.seed + i for i in range(args.random)]
        if args.jobs > 1:
            with concurrent.futures.ProcessPoolExecutor(max_workers=args.jobs) as pool:
                per_seed = list(pool.map(_check_one_random, seeds))
        else:
            per_seed = [_check_one_random(s) for s in seeds]
        tally: dict[str, tuple[int, int, str]] = {}
        for results in per_seed:
            for name, ok, detail in results:
                passed, total, first_fail = tally.get(name, (0, 0, ""))
                tally[name] = (
                    passed + (1 if ok else 0),
                    total + 1,
                    first_fail or ("" if ok else detail),
                )
        for name, (passed, total, first_fail) in tally.items():
            rows.append((f"{name} [{passed}/{total}]", passed == total, first_fail))

    width = max(len(name) for name, _, _ in rows) if rows else 0
    all_ok = True
    for name, ok, detail in rows:
        mark = "PASS" if ok else "FAIL"
        line = f"{mark}  {name.ljust(width)}"
        if detail and not ok:
            line += f"  {detail}"
        print(line)
        all_ok &= ok
    return 0 if all_ok else 1


def cmd_replicate(args) -> int:
    if args.name not in REPLICATIONS:
        print(
            f"error: unknown fixture {args.name!r}; known: {', '.join(sorted(REPLICATIONS))}",
            file=sys.stderr,
        )
        return 2
    report = replicate(args.name)
    for check in report.checks:
        mark = "PASS" if check.ok else "FAIL"
        line = f"{mark}  {report.name}.{check.name}"
        if check.detail and not check.ok:
            line += f"  {check.detail}"
        print(line)
    return 0 if report.ok else 1


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="proxyline",
        description="Strategic proxy voting on the line: run, check, replicate.",
    )
    parser.add_argument("--jobs", type=int, default=1, help="parallel workers for random checks")
    parser.add_argument("--output-dir", default=".", help="directory for trace/summary files")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute a scenario file")
    p_run.add_argument("file")
    p_run.add_argument("--max-steps", type=int, default=None)
    p_run.add_argument("--seed", type=int, default=0, help="accepted for interface parity")
    p_run.set_defaults(func=cmd_run)

    p_check = sub.add_parser("check", help="run the invariant suite")
    p_check.add_argument("file", nargs="?", default=None)
    p_check.add_argument("--random", type=int, default=20)
    p_check.add_argument("--seed", type=int, default=7)
    p_check.set_defaults(func=cmd_check)

    p_rep = sub.add_parser("replicate", help="replicate a named fixture")
    p_rep.add_argument("name")
    p_rep.set_defaults(func=cmd_replicate)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ProxylineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
