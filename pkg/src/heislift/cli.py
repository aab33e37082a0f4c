# coding=utf-8
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""Batch command line front end: reads documents, calls the library, writes deterministic reports.

"""

import argparse
from dataclasses import dataclass
from dataclasses import field
import logging
import os
from pathlib import Path
import random
import sys
import time

from .atlas import atlas
from .cohomology import cochain
from .cohomology import delta_cup
from .errors import HeisliftError
from .errors import InvalidModPSolution
from .errors import InvalidRank
from .errors import InvariantViolation
from .errors import NotHeisenbergH1
from .errors import NotHeisenbergH2
from .errors import VerificationFailure
from .heisenberg import heisenberg
from .heisenberg.heisenberg import DEFAULT_BUDGET
from .padic.padic_core import DEFAULT_PRECISION
from .padic.padic_core import check_prime
from .util import file_manipulation
from .util import os_ops

LOG = logging.getLogger("heislift")

ENV_PREFIX = "HEISLIFT_"
FILE_COMMANDS = ("heis-check", "heis-enumerate", "heis-solve", "coh-compute", "coh-cup", "coh-classify",
                 "delta-check", "delta-bound", "delta-dims")
ATLAS_COMMANDS = ("atlas-dump", "atlas-verify")


@dataclass
class RunReport:
    """What a command reports; elapsed is only shown in the human format."""
    command: str
    input_digest: str
    results: dict
    residual_valuations: list = field(default_factory=list)
    achieved_prec: int = None
    elapsed: float = None
    failure: HeisliftError = None

    def to_document(self):
        """dict: The machine-format report."""
        return {
            "command": self.command,
            "input_digest": self.input_digest,
            "results": self.results,
            "residual_valuations": self.residual_valuations,
            "achieved_prec": self.achieved_prec,
        }


def odd_prime(value):
    """argparse type for --prime.

    Args:
        value (str): Flag value

    Raises:
        ArgumentTypeError: If the value is not an odd prime

    Returns:
        int: The prime
    """
    try:
        return check_prime(int(value))
    except ValueError as ex:
        raise argparse.ArgumentTypeError(f"--prime must be an odd prime, got {value!r}") from ex


def positive_int(value):  # pylint: disable=missing-param-doc,missing-return-doc,missing-return-type-doc
    # pylint: disable=missing-type-doc,missing-raises-doc
    """argparse type for counts and precisions."""
    try:
        number = int(value)
    except ValueError as ex:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value!r}") from ex
    if number < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value!r}")
    return number


def _env(name, fallback):
    """Default for a flag, overridden by HEISLIFT_<NAME>; argparse applies the flag's type to string defaults."""
    return os.environ.get(f"{ENV_PREFIX}{name}", fallback)


def _common_flags():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--prime", type=odd_prime, default=_env("PRIME", None),
                        help="Odd prime p. Fills in documents that do not declare one; atlas commands default to 5")
    common.add_argument("--precision", type=positive_int, default=_env("PRECISION", str(DEFAULT_PRECISION)),
                        help='Absolute precision for documents that do not declare one. Defaults to "%(default)s".')
    common.add_argument("--budget", type=positive_int, default=_env("BUDGET", str(DEFAULT_BUDGET)),
                        help='Largest exhaustive search allowed. Defaults to "%(default)s".')
    common.add_argument("--seed", type=int, default=_env("SEED", "0"),
                        help='Seed of every random choice. Defaults to "%(default)s".')
    common.add_argument("--format", choices=("human", "machine"), default=_env("FORMAT", "human"),
                        help='Report format. Defaults to "%(default)s".')
    common.add_argument("--workers", type=positive_int, default=_env("WORKERS", "1"),
                        help='Worker processes for exhaustive searches. Defaults to "%(default)s".')
    common.add_argument("--output", type=Path, help="Write the report to this file instead of stdout")
    common.add_argument("-v", "--verbose", action="store_true", help="Show more information for debugging")
    return common


def build_parser():
    """Build the argument parser with one subcommand per operation.

    Returns:
        ArgumentParser: The parser
    """
    common = _common_flags()
    arg_parser = argparse.ArgumentParser(prog="heislift", description=__doc__.strip())
    subparsers = arg_parser.add_subparsers(dest="command", metavar="command")
    subparsers.required = True
    for name in FILE_COMMANDS:
        sub = subparsers.add_parser(name, parents=[common])
        sub.add_argument("file", type=Path, help="Input document")
        if name == "heis-solve":
            sub.add_argument("--solution", help='Mod-p solution to lift, as "x1,...,xr;y1,...,yt"')
        if name == "coh-classify":
            sub.add_argument("--oracle", action="store_true",
                             help="Cross-check the count by brute force over the matrix relation")
    for name in ATLAS_COMMANDS:
        sub = subparsers.add_parser(name, parents=[common])
        sub.add_argument("family", choices=atlas.FAMILIES)
        sub.add_argument("n", type=positive_int)
        sub.add_argument("k", type=positive_int)
        if name == "atlas-dump":
            sub.add_argument("--dir", type=Path, default=Path.cwd(),
                             help="Base directory of the numbered dump directories. Defaults to the current one.")
    return arg_parser


def parse_args(args=None):
    """Parses arguments from the command line.

    Args:
        args (None): Argument parameters, defaults to None.

    Returns:
        class: Namespace of argparse parameters.
    """
    return build_parser().parse_args(args)


def parse_solution(text, system):
    """Parse "x1,...,xr;y1,...,yt" into a ModPSolution.

    Args:
        text (str): Flag value
        system (HeisenbergSystem): The system the solution belongs to

    Raises:
        InvalidModPSolution: If the text is malformed

    Returns:
        ModPSolution: The solution, not yet checked against the system
    """
    parts = text.split(";")
    if len(parts) != 2:
        raise InvalidModPSolution(f"expected 'x...;y...', got {text!r}")
    try:
        xbar, ybar = (tuple(int(v) % system.prime for v in part.split(",") if v.strip()) for part in parts)
    except ValueError as ex:
        raise InvalidModPSolution(f"non-integer coordinate in {text!r}") from ex
    return heisenberg.ModPSolution(xbar, ybar)


def _with_defaults(doc, args, precision_default):
    doc = dict(doc)
    if "prime" not in doc:
        if args.prime is None:
            raise InvariantViolation("the document declares no prime and --prime was not given")
        doc["prime"] = args.prime
    doc.setdefault("precision", precision_default)
    return doc


def _heis_check(args, doc):
    system = heisenberg.system_from_document(_with_defaults(doc, args, args.precision))
    report = heisenberg.check_h1(system)
    results = {
        "h1": report.holds,
        "h1_kind": report.kind,
        "cokernel_exponents": list(report.invariants.exponents),
        "cokernel_free_rank": report.invariants.free_rank,
    }
    if not report.holds:
        return RunReport(args.command, "", results, failure=NotHeisenbergH1("H1 fails"))
    witness = heisenberg.check_h2(system, args.budget)
    results.update({"h2": witness is not None, "witness": list(witness) if witness else None})
    failure = None if witness is not None else NotHeisenbergH2("H2 fails")
    return RunReport(args.command, "", results, failure=failure)


def _heis_enumerate(args, doc):
    system = heisenberg.system_from_document(_with_defaults(doc, args, args.precision))
    solutions = heisenberg.enumerate_mod_p(system, args.budget, args.workers)
    return RunReport(args.command, "", {
        "count": len(solutions),
        "solutions": [[list(sol.xbar), list(sol.ybar)] for sol in solutions],
    })


def _heis_solve(args, doc):
    system = heisenberg.system_from_document(_with_defaults(doc, args, args.precision))
    if args.solution:
        solution = parse_solution(args.solution, system)
    else:
        solutions = heisenberg.enumerate_mod_p(system, args.budget, args.workers)
        solution = next((sol for sol in solutions if any(sol.as_tuple())), solutions[0])
        LOG.info("Lifting the enumerated solution %s", solution.as_tuple())
    result = heisenberg.lift(system, solution, args.budget)
    residuals = heisenberg.verify(system, result)
    results = heisenberg.lift_result_to_document(result)
    results["solution"] = [list(solution.xbar), list(solution.ybar)]
    return RunReport(args.command, "", results, [str(val) for val in residuals.valuations],
                     result.achieved_prec)


def _coh_compute(args, doc):
    module = cochain.ToyPhiGammaModule.from_document(_with_defaults(doc, args, 1))
    groups = [cochain.cohomology(module, degree) for degree in (0, 1, 2)]
    return RunReport(args.command, "", {
        "dimensions": [group.dimension for group in groups],
        "lengths": [group.length for group in groups],
        "H0": groups[0].to_document(),
        "H1": groups[1].to_document(),
        "H2": groups[2].to_document(),
    })


def _coh_cup(args, doc):
    pair = cochain.pair_from_document(doc)
    return RunReport(args.command, "", {
        "h1_representatives": [list(rep) for rep in cochain.cohomology(pair.m1.reduced(), 1).representatives],
        "h2_representatives": [list(rep) for rep in cochain.cohomology(pair.m0.reduced(), 2).representatives],
        "pairing": [[list(entry) for entry in row] for row in cochain.cup_pairing_matrix(pair)],
    })


def _coh_classify(args, doc):
    pair = cochain.pair_from_document(doc)
    classification = cochain.classify_extensions(pair, args.budget, args.workers, args.oracle)
    return RunReport(args.command, "", classification.to_document())


def _delta_check(args, doc):
    pair = cochain.pair_from_document(doc["pair"])
    action = delta_cup.action_from_document(pair, doc["action"])
    action.check_descends()
    induced = delta_cup.induced_on_cohomology(action, 2, piece=0)
    return RunReport(args.command, "", {
        "classicality": delta_cup.is_classical(action).to_document(),
        "transfer": delta_cup.nontriviality_transfer_check(action, args.budget).to_document(),
        "induced_h2": [[int(x) for x in row] for row in induced],
    })


def _delta_bound(args, doc):
    doc = _with_defaults(doc, args, 1)
    space = delta_cup.BilinearPairingSpace.from_lists(doc["prime"], doc["matrix"])
    holds = delta_cup.orthogonal_subspace_bound(space, doc["hx"], doc["hy"])
    return RunReport(args.command, "", {"holds": holds, "dim_x": space.dim_x, "dim_y": space.dim_y})


def _delta_dims(args, doc):
    count = delta_cup.dimension_count(doc["degree"], doc["a"], doc["b"], doc["h0"], doc["h2"])
    return RunReport(args.command, "", count.to_document())


def _atlas_spec(args):
    return atlas.ClassicalGroupSpec(args.family, args.n, args.k, args.prime or 5)


def _atlas_dump(args, spec):
    data = atlas.build_parabolic(spec)
    f_levi, g_levi = atlas.commuting_levi_pair(spec, random.Random(args.seed))
    pair = atlas.graded_pair(data, f_levi, g_levi)
    action = atlas.delta_action(data, pair)
    base = args.dir.resolve()
    base.mkdir(parents=True, exist_ok=True)
    target = os_ops.make_numbered_dir(base, f"{spec.family}{spec.n}k{spec.k}-")
    documents = {
        "parabolic.json": atlas.parabolic_to_document(data),
        "pair.json": pair.to_document(),
        "delta.json": {"pair": pair.to_document(), "action": action.to_document()},
    }
    for name, document in sorted(documents.items()):
        file_manipulation.write_document(target / name, document)
    LOG.info("Dumped %s into %s", ", ".join(sorted(documents)), target)
    return RunReport(args.command, "", {"directory": target.name, "files": sorted(documents)})


def _atlas_verify(args, spec):
    data = atlas.build_parabolic(spec)
    fixed = atlas.verify_fixed_points(data, seed=args.seed)
    involution = atlas.involution_properties(data, seed=args.seed)
    failure = None
    if not (fixed.passed and involution.passed):
        failure = VerificationFailure(f"{spec.family} n={spec.n} k={spec.k} failed verification")
    return RunReport(args.command, "", {
        "gr1_dims": list(data.gr1_dims),
        "gr0_dim": data.gr0_dim,
        "fixed_points": fixed.to_document(),
        "involution": involution.to_document(),
        "passed": failure is None,
    }, failure=failure)


HANDLERS = {
    "heis-check": _heis_check,
    "heis-enumerate": _heis_enumerate,
    "heis-solve": _heis_solve,
    "coh-compute": _coh_compute,
    "coh-cup": _coh_cup,
    "coh-classify": _coh_classify,
    "delta-check": _delta_check,
    "delta-bound": _delta_bound,
    "delta-dims": _delta_dims,
    "atlas-dump": _atlas_dump,
    "atlas-verify": _atlas_verify,
}


def render(report, fmt):
    """Render a report.

    Args:
        report (RunReport): The report
        fmt (str): "human" or "machine"

    Returns:
        str: Text ending in a newline
    """
    if fmt == "machine":
        return file_manipulation.canonical_dump(report.to_document())
    lines = [f"heislift {report.command} (input {report.input_digest})"]
    for key in sorted(report.results):
        lines.append(f"  {key}: {report.results[key]}")
    if report.residual_valuations:
        lines.append(f"  residual valuations: {', '.join(report.residual_valuations)}")
    if report.achieved_prec is not None:
        lines.append(f"  achieved precision: {report.achieved_prec}")
    if report.elapsed is not None:
        lines.append(f"  elapsed: {report.elapsed:.3f}s")
    return "\n".join(lines) + "\n"


def run(args, arg_parser):
    """Run the selected command.

    Args:
        args (class): Namespace of argparse parameters
        arg_parser (ArgumentParser): Parser used to report usage errors

    Returns:
        RunReport: The report
    """
    start = time.perf_counter()
    if args.command in ATLAS_COMMANDS:
        try:
            spec = _atlas_spec(args)
        except (InvalidRank, ValueError) as ex:
            arg_parser.error(str(ex))
        digest = file_manipulation.document_digest(dict(spec.to_document(), seed=args.seed))
        report = HANDLERS[args.command](args, spec)
    else:
        doc = file_manipulation.read_document(args.file)
        digest = file_manipulation.document_digest(doc)
        try:
            report = HANDLERS[args.command](args, doc)
        except (KeyError, TypeError) as ex:
            raise InvariantViolation(f"malformed {args.command} document: {ex!r}") from ex
    report.input_digest = digest
    report.elapsed = time.perf_counter() - start
    LOG.info("%s finished in %.3fs", args.command, report.elapsed)
    return report


def main(argparse_args=None):
    """Parse arguments, run one command and emit its report; the process exits with the error's exit code.

    Args:
        argparse_args (None): Argument parameters, defaults to None.

    Returns:
        int: The exit code
    """
    arg_parser = build_parser()
    args = arg_parser.parse_args(argparse_args)
    logging.basicConfig(datefmt="%Y-%m-%d %H:%M:%S",
                        format="%(asctime)s %(levelname)-8s %(message)s",
                        level=logging.DEBUG if args.verbose else logging.INFO)
    logging.getLogger("flake8").setLevel(logging.ERROR)

    try:
        report = run(args, arg_parser)
    except HeisliftError as ex:
        LOG.error("%s: %s", type(ex).__name__, ex)
        return ex.exit_code
    except ValueError as ex:
        LOG.error("%s: %s", type(ex).__name__, ex)
        return InvariantViolation.exit_code

    if args.output and args.format == "machine":
        file_manipulation.write_document(args.output, report.to_document())
    elif args.output:
        args.output.write_text(render(report, args.format), encoding="utf-8")
    else:
        sys.stdout.write(render(report, args.format))
    if report.failure is not None:
        LOG.error("%s: %s", type(report.failure).__name__, report.failure)
        return report.failure.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
