"""Command-line entry point: ``python -m seedfix <command> ...``.

Exit codes: 0 success, 1 no bracket found (or an invalid bracket in
``verify``), 2 bad usage or an unreadable input.
"""

from __future__ import annotations

import argparse
import csv
import logging
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .core import (
    Bracket,
    PreconditionError,
    SizeCapError,
    TfpError,
    TfpInstance,
    is_valid_bracket,
    replay_bracket,
)
from .counting import DEFAULT_MAX_N, HARD_MAX_N, build_dp_table, extract_winning_bracket
from .formats import format_bracket, format_instance, parse_bracket, parse_instance
from .probabilistic import (
    CSV_HEADER,
    DEFAULT_RESTARTS,
    Model,
    fix_seeded_random,
    run_trial,
    sample_instance,
    trial_seed,
)
from .reductions import reduce_to_seeded_constant, reduce_to_seeded_half
from .structural import (
    Counterexample,
    classify_player,
    fix_king_two_seeds,
    fix_superking_two_seeds,
    fix_ultraking,
    make_counterexample,
)

log = logging.getLogger("seedfix")

ALGORITHMS = ("auto", "king", "superking", "ultraking", "random", "dp")
COMMANDS = ("solve", "count", "verify", "gen", "reduce", "classify", "experiment")

EXIT_OK, EXIT_NOT_FOUND, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class CliConfig:
    command: str
    input: Path | None = None
    output: Path | None = None
    bracket: Path | None = None
    algo: str = "auto"
    n: int = 8
    s: int = 0
    p: float = 0.5
    model: Model = Model.UNIFORM
    trials: int = 10
    seed: int = 0
    target: int | None = None
    restarts: int = DEFAULT_RESTARTS
    max_n: int = DEFAULT_MAX_N
    workers: int | None = None
    kind: str = "half"
    counterexample: str | None = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.algo not in ALGORITHMS:
            raise UsageError(f"unknown algorithm {self.algo!r}")
        if self.command in ("solve", "count", "verify", "reduce", "classify") and self.input is None:
            raise UsageError(f"{self.command} needs --in")
        if self.command == "verify" and self.bracket is None:
            raise UsageError("verify needs --bracket")
        if self.trials < 1 or self.restarts < 0:
            raise UsageError("--trials must be positive and --restarts non-negative")
        if not 0 <= self.p <= 0.5:
            raise UsageError("--p must lie in [0, 0.5]")
        if self.max_n > HARD_MAX_N:
            raise UsageError(f"--max-n-override is capped at {HARD_MAX_N}")
        if self.workers is not None and self.workers < 1:
            raise UsageError("--workers must be positive")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="seedfix", description="Fix seeded knockout tournaments.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--in", dest="input", type=Path)
    parser.add_argument("--out", dest="output", type=Path)
    parser.add_argument("--bracket", type=Path, help="bracket file for verify")
    parser.add_argument("--algo", default="auto", choices=ALGORITHMS)
    parser.add_argument("--n", type=int, default=8)
    parser.add_argument("--s", type=int, default=0)
    parser.add_argument("--p", type=float, default=0.5)
    parser.add_argument("--model", default="UNIFORM", type=str.upper, choices=[m.value for m in Model])
    parser.add_argument("--trials", type=int, default=10)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--target", type=int, help="override the target stored in the instance")
    parser.add_argument("--restarts", type=int, default=DEFAULT_RESTARTS)
    parser.add_argument("--max-n-override", dest="max_n", type=int, default=DEFAULT_MAX_N)
    parser.add_argument("--workers", type=int, help="experiment pool size (default: CPU count)")
    parser.add_argument("--kind", default="half", choices=("half", "const"), help="reduction for reduce")
    parser.add_argument("--counterexample", choices=[c.value for c in Counterexample], help="gen a hard instance")
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def parse_config(argv: list[str] | None) -> CliConfig:
    parser = build_parser()
    ns = parser.parse_args(argv)
    fields = vars(ns)
    logging.basicConfig(level=logging.DEBUG if fields.pop("verbose") else logging.WARNING, format="%(message)s")
    fields["model"] = Model(fields["model"])
    return CliConfig(**fields)


# --- helpers ---------------------------------------------------------------


def _read_instance(cfg: CliConfig) -> TfpInstance:
    instance = parse_instance(cfg.input.read_text())
    if cfg.target is not None:
        instance = TfpInstance(instance.graph, instance.seeds, cfg.target)
    return instance


def _emit(cfg: CliConfig, text: str) -> None:
    if cfg.output is None:
        sys.stdout.write(text)
    else:
        cfg.output.write_text(text)


def _verified(instance: TfpInstance, bracket: Bracket | None) -> Bracket | None:
    if bracket is None:
        return None
    winner, _ = replay_bracket(bracket, instance.graph)
    if winner != instance.target or not is_valid_bracket(bracket, instance.seeds):
        raise AssertionError("a fixer returned a bracket that does not verify")
    return bracket


def solve(instance: TfpInstance, algo: str, restarts: int, max_n: int, seed: int) -> tuple[Bracket | None, bool]:
    """Run one fixer, or the auto chain.  Returns (bracket, dp_ran)."""
    rng = random.Random(seed)
    graph, x, n = instance.graph, instance.target, instance.n
    if algo == "dp":
        return extract_winning_bracket(instance, max_n=max_n), True
    if algo == "king":
        return fix_king_two_seeds(instance, rng), False
    if algo == "superking":
        return fix_superking_two_seeds(instance, rng), False
    if algo == "ultraking":
        return fix_ultraking(instance, rng), False
    if algo == "random":
        return fix_seeded_random(instance, rng, restarts, exact_max_n=0), False

    if graph.outdegree(x) == n - 1:
        log.debug("target beats everyone")
        return fix_ultraking(instance, rng), False
    profile = classify_player(graph, x)
    if profile.is_ultraking:
        log.debug("ultraking fixer")
        return fix_ultraking(instance, rng), False
    if instance.seeds.s == 2:
        for name, fixer in (("king", fix_king_two_seeds), ("superking", fix_superking_two_seeds)):
            try:
                bracket = fixer(instance, rng)
            except PreconditionError as err:
                log.debug("%s fixer skipped: %s", name, err)
                continue
            log.debug("%s fixer", name)
            return bracket, False
    bracket = fix_seeded_random(instance, rng, restarts, exact_max_n=0)
    if bracket is not None:
        log.debug("random fixer")
        return bracket, False
    if n <= max_n:
        log.debug("counting DP")
        return extract_winning_bracket(instance, max_n=max_n), True
    return None, False


# --- commands --------------------------------------------------------------


def cmd_solve(cfg: CliConfig) -> int:
    instance = _read_instance(cfg)
    bracket, dp_ran = solve(instance, cfg.algo, cfg.restarts, cfg.max_n, cfg.seed)
    bracket = _verified(instance, bracket)
    if bracket is None:
        print("NO WINNING BRACKET FOUND")
        if dp_ran:
            print("PROVED IMPOSSIBLE")
        return EXIT_NOT_FOUND
    _emit(cfg, format_bracket(bracket))
    return EXIT_OK


def cmd_count(cfg: CliConfig) -> int:
    instance = _read_instance(cfg)
    counts = build_dp_table(instance, max_n=cfg.max_n).counts()
    lines = ["player,count"] + [f"{p},{c}" for p, c in enumerate(counts.counts)]
    _emit(cfg, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_verify(cfg: CliConfig) -> int:
    instance = _read_instance(cfg)
    bracket = parse_bracket(cfg.bracket.read_text())
    if bracket.n != instance.n:
        raise UsageError(f"bracket has {bracket.n} players, instance has {instance.n}")
    valid = is_valid_bracket(bracket, instance.seeds)
    winner, _ = replay_bracket(bracket, instance.graph)
    print(f"valid {'yes' if valid else 'no'}")
    print(f"winner {winner}")
    print(f"target {'wins' if winner == instance.target else 'loses'}")
    return EXIT_OK if valid and winner == instance.target else EXIT_NOT_FOUND


def cmd_gen(cfg: CliConfig) -> int:
    if cfg.counterexample:
        instance = make_counterexample(cfg.counterexample, cfg.n, cfg.s or None)
    else:
        graph, seeds = sample_instance(cfg.n, cfg.s, cfg.model, cfg.p, trial_seed(cfg.seed, 0))
        target = 0 if cfg.target is None else cfg.target
        instance = TfpInstance(graph, seeds, target)
    _emit(cfg, format_instance(instance))
    return EXIT_OK


def cmd_reduce(cfg: CliConfig) -> int:
    instance = _read_instance(cfg)
    rng = random.Random(cfg.seed) if cfg.seed else None
    if cfg.kind == "half":
        out = reduce_to_seeded_half(instance, rng)
    else:
        out = reduce_to_seeded_constant(instance, cfg.s or 2, rng)
    _emit(cfg, format_instance(out.instance))
    return EXIT_OK


def cmd_classify(cfg: CliConfig) -> int:
    instance = _read_instance(cfg)
    prof = classify_player(instance.graph, instance.target)
    text = (
        f"player {instance.target}\n"
        f"outdegree {prof.outdegree}\n"
        f"king {'yes' if prof.is_king else 'no'}\n"
        f"superking {'yes' if prof.is_superking else 'no'}\n"
        f"ultraking {'yes' if prof.is_ultraking else 'no'}\n"
    )
    _emit(cfg, text)
    return EXIT_OK


def _trial_job(args):
    return run_trial(*args)


def cmd_experiment(cfg: CliConfig) -> int:
    sample_instance(cfg.n, cfg.s, cfg.model, cfg.p, 0)  # validates n, s and p up front
    jobs = [(cfg.n, cfg.s, cfg.model, cfg.p, t, cfg.seed, cfg.restarts) for t in range(cfg.trials)]
    workers = cfg.workers or os.cpu_count() or 1
    if workers == 1:
        results = map(_trial_job, jobs)
    else:
        pool = ProcessPoolExecutor(max_workers=workers)
        results = pool.map(_trial_job, jobs)
    out = open(cfg.output, "w", newline="") if cfg.output else sys.stdout
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        hits = total = 0
        for rows in results:
            writer.writerows(rows)
            hits += sum(r[6] for r in rows)
            total += len(rows)
    finally:
        if workers > 1:
            pool.shutdown()
        if cfg.output:
            out.close()
    log.info("success %d/%d", hits, total)
    print(f"success {hits}/{total} = {hits / total:.4f}", file=sys.stderr)
    return EXIT_OK


HANDLERS = {
    "solve": cmd_solve,
    "count": cmd_count,
    "verify": cmd_verify,
    "gen": cmd_gen,
    "reduce": cmd_reduce,
    "classify": cmd_classify,
    "experiment": cmd_experiment,
}


def dispatch(cfg: CliConfig) -> int:
    try:
        return HANDLERS[cfg.command](cfg)
    except (TfpError, UsageError, OSError) as err:
        # PreconditionError and SizeCapError are TfpErrors: the request itself is unusable
        kind = "precondition" if isinstance(err, PreconditionError) else "cap" if isinstance(err, SizeCapError) else "error"
        print(f"seedfix: {kind}: {err}", file=sys.stderr)
        return EXIT_USAGE


def main(argv: list[str] | None = None) -> int:
    try:
        cfg = parse_config(argv)
    except UsageError as err:
        print(f"seedfix: usage: {err}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # argparse already printed its message
        return EXIT_USAGE if exc.code else EXIT_OK
    return dispatch(cfg)


if __name__ == "__main__":
    sys.exit(main())
