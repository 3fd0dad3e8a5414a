"""Command line front end.

Subcommands:
  solve           run one instance end to end (classical or quantum)
  prove           batch verifier runs against a chosen prover
  analyze-exact   exact outcome probabilities for a deterministic prover
  check-instance  audit the promise on a generated instance

Exit codes: 0 success, 1 contract violation (including bad arguments),
2 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .bits import GVariant
from .classical import solve
from .errors import ContractViolation
from .harness import ExperimentConfig, emit_report, run_experiment
from .instance import RfsInstance, check_promise
from .oracle import CountingOracle
from .protocol import VerifierConfig, exact_outcome_analysis
from .provers import ProverKind, make_prover
from .quantum import qrfs_run


class _Parser(argparse.ArgumentParser):
    """Routes argparse failures through the package's exit-code contract."""

    def error(self, message):
        raise ContractViolation(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rfs", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    solve_p = sub.add_parser("solve", help="solve one instance")
    solve_p.add_argument("--mode", choices=("classical", "qrfs"), required=True)
    solve_p.add_argument("--n", type=int, required=True)
    solve_p.add_argument("--l", type=int, required=True)
    solve_p.add_argument("--seed", type=int, default=0)

    prove_p = sub.add_parser("prove", help="verifier trials against a prover")
    prove_p.add_argument("--prover", default="honest-lookup",
                         metavar="KIND", help="honest-lookup, honest-quantum, "
                         "root-flip, level-flip:K, random-lie:P, g-preserving")
    prove_p.add_argument("--n", type=int, required=True)
    prove_p.add_argument("--l", type=int, required=True)
    prove_p.add_argument("--trials", type=int, default=1)
    prove_p.add_argument("--seed", type=int, default=0,
                         help="base instance seed (trial t adds t)")
    prove_p.add_argument("--verifier-seed", type=int, default=0)
    prove_p.add_argument("--reps", type=int, default=3)
    prove_p.add_argument("--out", default=None, metavar="PATH")
    prove_p.add_argument("--format", choices=("json", "csv"), default="json")

    exact_p = sub.add_parser("analyze-exact",
                             help="exact outcome enumeration")
    exact_p.add_argument("--n", type=int, required=True)
    exact_p.add_argument("--l", type=int, required=True)
    exact_p.add_argument("--prover", required=True, metavar="KIND")
    exact_p.add_argument("--reps", type=int, default=3)
    exact_p.add_argument("--seed", type=int, default=0)

    check_p = sub.add_parser("check-instance", help="audit the promise")
    check_p.add_argument("--n", type=int, required=True)
    check_p.add_argument("--l", type=int, required=True)
    check_p.add_argument("--seed", type=int, default=0)
    check_p.add_argument("--mode", default="exhaustive",
                         help="exhaustive or sampled:COUNT")

    return parser


def _cmd_solve(args) -> int:
    instance = RfsInstance(args.n, args.l, GVariant.HAMMING_MOD3, args.seed)
    oracle = CountingOracle(instance)
    if args.mode == "classical":
        answer = solve(oracle).answer
    else:
        answer = qrfs_run(oracle)
    print(json.dumps({"instance": instance.descriptor(), "answer": answer,
                      "counters": oracle.counters()}, sort_keys=True))
    return 0


def _cmd_prove(args) -> int:
    config = ExperimentConfig(
        n=args.n, l=args.l, mode="verifier", prover=args.prover,
        instance_seed=args.seed, repetitions=args.reps, trials=args.trials,
        rng_seed=args.verifier_seed, out_format=args.format,
        out_path=args.out)
    rows, summary = run_experiment(config)
    emit_report(config, rows, summary)
    return 0


def _cmd_analyze_exact(args) -> int:
    instance = RfsInstance(args.n, args.l, GVariant.HAMMING_MOD3, args.seed)
    oracle = CountingOracle(instance)
    prover = make_prover(args.prover, instance, oracle)
    outcome = exact_outcome_analysis(
        instance, prover, config=VerifierConfig(repetitions=args.reps))
    doc = {"n": args.n, "l": args.l, "prover": ProverKind.parse(args.prover).text(),
           "reps": args.reps, "seed": args.seed}
    doc.update(outcome.to_dict())
    print(json.dumps(doc, sort_keys=True))
    return 0


def _parse_check_mode(text: str) -> tuple[str, int]:
    if text == "exhaustive":
        return "exhaustive", 0
    if text.startswith("sampled:"):
        try:
            count = int(text.split(":", 1)[1])
        except ValueError:
            raise ContractViolation(f"bad sample count in {text!r}") from None
        if count < 1:
            raise ContractViolation("sample count must be >= 1")
        return "sampled", count
    raise ContractViolation(
        f"mode must be exhaustive or sampled:COUNT, got {text!r}")


def _cmd_check_instance(args) -> int:
    mode, count = _parse_check_mode(args.mode)
    instance = RfsInstance(args.n, args.l, GVariant.HAMMING_MOD3, args.seed)
    if mode == "exhaustive":
        report = check_promise(instance, mode=mode)
    else:
        report = check_promise(instance, mode=mode, count=count)
    print(json.dumps({"instance": instance.descriptor(),
                      "checked": report.checked,
                      "violations": report.violations}, sort_keys=True))
    return 0 if report.violations == 0 else 1


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        handler = {"solve": _cmd_solve, "prove": _cmd_prove,
                   "analyze-exact": _cmd_analyze_exact,
                   "check-instance": _cmd_check_instance}[args.command]
        return handler(args)
    except ContractViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
