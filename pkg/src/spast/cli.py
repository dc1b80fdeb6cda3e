"""Command-line interface: ``spast <command> ...``.

Exit status is 0 on success, 1 on bad input, and 2 when the answer is
negative (no super-stable matching, a blocking pair, an inconsistency).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

from . import cloning, experiments, ipmodel, oracle
from .generator import GeneratorConfig, generate
from .instance import format_instance, read_instance
from .solver import solve, solve_traced
from .stability import (
    SUPER,
    WEAK,
    check_matching,
    find_blocking_pairs,
    format_matching,
    parse_matching,
)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NEGATIVE = 2
NO_SUPER_STABLE = "NO_SUPER_STABLE"


def parse_grid(text: str) -> list[int]:
    """``"100,200"`` or ``"100:1000:100"`` (inclusive) to a list of ints."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if ":" in part:
            bits = [int(b) for b in part.split(":")]
            if len(bits) == 2:
                bits.append(1)
            lo, hi, step = bits
            if step < 1:
                raise argparse.ArgumentTypeError(f"bad step in {part!r}")
            out.extend(range(lo, hi + 1, step))
        elif part:
            out.append(int(part))
    if not out:
        raise argparse.ArgumentTypeError("empty grid")
    return out


def parse_float_grid(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_solve(args) -> int:
    inst = read_instance(args.instance)
    outcome = solve_traced(inst) if args.trace else solve(inst)
    if args.trace:
        for event in outcome.trace:
            print(f"# {event}")
    if not outcome.exists:
        print(NO_SUPER_STABLE)
        print(f"# reason: {outcome.reason}", file=sys.stderr)
        return EXIT_NEGATIVE
    if args.check:
        blocking = find_blocking_pairs(inst, outcome.matching, SUPER)
        if blocking:
            print(f"internal error: solver output is blocked by {blocking[0]}", file=sys.stderr)
            return EXIT_INPUT
    sys.stdout.write(format_matching(outcome.matching))
    return EXIT_OK


def cmd_check(args) -> int:
    inst = read_instance(args.instance)
    m = check_matching(inst, parse_matching(Path(args.matching).read_text()))
    blocking = find_blocking_pairs(inst, m, args.notion)
    for bp in blocking:
        print(f"{bp.student} {bp.project} type-{bp.kind}")
    if blocking:
        return EXIT_NEGATIVE
    print(f"{args.notion}-stable")
    return EXIT_OK


def cmd_oracle(args) -> int:
    inst = read_instance(args.instance)
    budget = oracle.EnumerationBudget(args.max_nodes)
    rows = oracle.stable_rows(inst, args.notion, budget)
    for n, row in enumerate(rows, start=1):
        print(f"# matching {n}")
        sys.stdout.write(format_matching(oracle.row_to_matching(row)))
    print(f"# {len(rows)} {args.notion}-stable matching(s)")
    return EXIT_OK if len(rows) else EXIT_NEGATIVE


def cmd_ipcheck(args) -> int:
    inst = read_instance(args.instance)
    budget = oracle.EnumerationBudget(args.max_nodes)
    model = ipmodel.build_model(inst)
    feasible = ipmodel.feasible_matchings_by_enumeration(inst, budget, model)
    stable = oracle.all_super_stable(inst, budget)
    outcome = solve(inst)
    agree = feasible == stable and outcome.exists == bool(feasible)
    print(f"variables {len(model.variables)}")
    print(f"constraints {len(model.constraints)}")
    print(f"feasible {len(feasible)}")
    print(f"super-stable {len(stable)}")
    print(f"solver {'matching' if outcome.exists else NO_SUPER_STABLE}")
    print("consistent" if agree else "INCONSISTENT")
    return EXIT_OK if agree else EXIT_NEGATIVE


def cmd_lpexport(args) -> int:
    inst = read_instance(args.instance)
    _emit(ipmodel.export_lp(ipmodel.build_model(inst)), args.output)
    return EXIT_OK


def cmd_clone(args) -> int:
    inst = read_instance(args.instance)
    hrt = cloning.clone_to_hrt(inst)
    extra = hrt.n_students - inst.n_students
    note = f"cloned HRT instance; residents {inst.n_students + 1}..{hrt.n_students} are dummies" if extra else "cloned HRT instance"
    _emit(format_instance(hrt, comment=note), args.output)
    return EXIT_OK


def cmd_generate(args) -> int:
    config = GeneratorConfig(
        args.n1, args.pref_len, args.t_ds, args.t_dl, args.seed, args.n2, args.n3, args.capacity
    )
    inst = generate(config)
    _emit(format_instance(inst, comment=f"generated: {config}"), args.output)
    return EXIT_OK


def cmd_experiment(args) -> int:
    kw = dict(crosscheck=args.crosscheck)
    if args.number == 1:
        rows = experiments.experiment_1(args.n1, args.trials, args.seed, args.pref_len, **kw)
    elif args.number == 2:
        rows = experiments.experiment_2(args.n1, args.pref_lens, args.trials, args.seed, **kw)
    else:
        rows = experiments.experiment_3(args.n1, args.trials, args.seed, args.densities, pref_len=args.pref_len, **kw)
    _emit(experiments.to_csv(rows, experiments.ExperimentRow), args.output)
    return EXIT_OK


def cmd_bench(args) -> int:
    rows = experiments.bench(args.n1, args.trials, args.seed)
    _emit(experiments.to_csv(rows, experiments.BenchRow), args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spast", description="Super-stable student-project allocation.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="find the student-optimal super-stable matching")
    p.add_argument("instance")
    p.add_argument("--trace", action="store_true", help="print the APPLY/DELETE/PHASE events")
    p.add_argument("--check", action="store_true", help="re-verify the result with the blocking-pair checker")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("check", help="list the blocking pairs of a matching")
    p.add_argument("instance")
    p.add_argument("matching")
    p.add_argument("--notion", choices=(SUPER, WEAK), default=SUPER)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("oracle", help="enumerate every stable matching (small instances)")
    p.add_argument("instance")
    p.add_argument("--notion", choices=(SUPER, WEAK), default=SUPER)
    p.add_argument("--max-nodes", type=int, default=oracle.DEFAULT_BUDGET.max_nodes)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("ipcheck", help="compare the integer program, the oracle and the solver")
    p.add_argument("instance")
    p.add_argument("--max-nodes", type=int, default=oracle.DEFAULT_BUDGET.max_nodes)
    p.set_defaults(func=cmd_ipcheck)

    p = sub.add_parser("lpexport", help="write the integer program in LP format")
    p.add_argument("instance")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_lpexport)

    p = sub.add_parser("clone", help="write the cloned HRT instance")
    p.add_argument("instance")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_clone)

    p = sub.add_parser("generate", help="write a random instance")
    p.add_argument("--n1", type=int, required=True, help="number of students")
    p.add_argument("--pref-len", type=int, required=True)
    p.add_argument("--t-ds", type=float, default=0.0, help="student tie density")
    p.add_argument("--t-dl", type=float, default=0.0, help="lecturer tie density")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n2", type=int, help="number of projects (default n1/2)")
    p.add_argument("--n3", type=int, help="number of lecturers (default n1/5)")
    p.add_argument("--capacity", type=int, help="total project capacity (default 1.5*n1)")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("experiment", help="proportion of random instances admitting a super-stable matching")
    p.add_argument("number", type=int, choices=(1, 2, 3))
    p.add_argument("--n1", type=parse_grid, default=[100, 200, 300], help="e.g. 100,200 or 100:1000:100")
    p.add_argument(
        "--pref-len",
        type=int,
        default=experiments.EXPERIMENT_PREF_LEN,
        help="experiments 1 and 3: student list length",
    )
    p.add_argument("--pref-lens", type=parse_grid, default=list(range(5, 31, 5)), help="experiment 2 only")
    p.add_argument(
        "--densities",
        type=parse_float_grid,
        default=list(experiments.DENSITY_GRID),
        help="experiment 3 only: tie densities for both sides",
    )
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--crosscheck", action="store_true", help="compare with the oracle when n1 <= 8")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("bench", help="mean solve time per instance size")
    p.add_argument("--n1", type=parse_grid, default=list(range(100, 1001, 100)))
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, oracle.BudgetExceeded) as exc:
        # parse, validation and configuration errors are all ValueErrors
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
