"""
Main entry point for the acyclic orientation lattice toolkit.

Dispatches the command-line surface: enumeration, poset construction,
verification, and evaluation of the geometric map phi.

Exit codes: 0 when every check passes, 1 when a theorem check fails,
2 for usage and input errors.
"""

import argparse
import logging
import os
import random
import sys
from dataclasses import dataclass
from typing import List, Optional, TextIO, Tuple

from pydantic import TypeAdapter, ValidationError

from src import __version__
from src.exceptions import AcyclicError, TheoremViolation
from src.firing_poset import build_p0, component_of, components, to_dot
from src.geometry import (
    Point,
    canonical_lift,
    cube_anchor,
    lift_fire,
    lift_unfire,
    phi,
    region_signature,
)
from src.graph_core import Graph, load_graph
from src.lattice_analysis import (
    BoundDirection,
    chromatic_polynomial,
    component_minimum,
    geometric_bound,
    greene_zaslavsky_count,
    poset_bound,
    verify_all_connected,
    verify_theorem,
)
from src.orientations import (
    FiringMode,
    FiringSequence,
    Orientation,
    enumerate_acyclic,
    enumerate_sink_zero,
    validate_firing_sequence,
)
from src.schemas import (
    ComponentModel,
    EnumeratedOrientationModel,
    FiringSequenceModel,
    PointModel,
    PointRegionModel,
)

logger = logging.getLogger(__name__)

# Defaults (override via environment, then flags)
LOG_LEVEL = os.environ.get("ACYCLIC_LOG_LEVEL", "WARNING")
# Strings; argparse applies each flag's type to its default
DEFAULT_SEED = os.environ.get("ACYCLIC_SEED", "0")
DEFAULT_SAMPLES = os.environ.get("ACYCLIC_SAMPLES", "0")
MAX_DENOMINATOR = os.environ.get("ACYCLIC_MAX_DENOMINATOR", "1000")

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2


@dataclass
class CommandResult:
    exit_code: int
    output: str = ""
    error: str = ""


def configure_logging(level: str) -> None:
    """Send log records to stderr; stdout carries the command payload."""
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.WARNING),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[logging.StreamHandler(sys.stderr)],
        force=True,
    )


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        '--format',
        choices=('json', 'text'),
        default='text',
        help='Output format (default: text)'
    )
    common.add_argument(
        '--seed',
        type=int,
        default=DEFAULT_SEED,
        help=f'Random seed for sampled checks (default: {DEFAULT_SEED})'
    )
    common.add_argument(
        '--mode',
        choices=('P', 'P0'),
        default='P0',
        help='Firing mode: P allows any source, P0 forbids 0 and its neighbors (default: P0)'
    )
    common.add_argument(
        '--log-level',
        default=LOG_LEVEL,
        help=f'Logging level (default: {LOG_LEVEL})'
    )
    common.add_argument('-v', '--verbose', action='store_true', help='Log at INFO level')

    parser = argparse.ArgumentParser(
        prog='orient',
        description='Acyclic orientations under source-firing: posets, lattices and the map phi'
    )
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('enumerate', parents=[common], help='List acyclic orientations (P) or those with sink 0 (P0)')
    p.add_argument('graph', help='Edge-list file')

    p = sub.add_parser('poset', parents=[common], help='Build P0; text format prints the Hasse diagram as DOT')
    p.add_argument('graph', help='Edge-list file')

    p = sub.add_parser('components', parents=[common], help='Connected components of P0')
    p.add_argument('graph', help='Edge-list file')

    p = sub.add_parser('verify', parents=[common], help='Check that every component of P0 is a distributive lattice')
    p.add_argument('graph', nargs='?', help='Edge-list file')
    p.add_argument(
        '--all-connected',
        type=int,
        metavar='N',
        help='Verify every connected graph on at most N vertices instead of one file'
    )
    p.add_argument(
        '--samples',
        type=int,
        default=DEFAULT_SAMPLES,
        help=f'Random geometric samples per graph (default: {DEFAULT_SAMPLES})'
    )
    p.add_argument(
        '--max-denominator',
        type=int,
        default=MAX_DENOMINATOR,
        help=f'Largest denominator of random sample points (default: {MAX_DENOMINATOR})'
    )

    p = sub.add_parser('phi', parents=[common], help='Apply phi to a Point read as JSON on stdin')
    p.add_argument('graph', help='Edge-list file')

    p = sub.add_parser('region', parents=[common], help='Region signature and cube anchor of a Point read as JSON on stdin')
    p.add_argument('graph', help='Edge-list file')

    p = sub.add_parser('lift', parents=[common], help='Canonical lift of an orientation, or lift a stdin Point by one firing')
    p.add_argument('graph', help='Edge-list file')
    p.add_argument('code', nargs='?', type=int, help='Orientation code for the canonical lift')
    moves = p.add_mutually_exclusive_group()
    moves.add_argument('--fire', type=int, metavar='V', help='Lift the stdin Point so that V fires')
    moves.add_argument('--unfire', type=int, metavar='V', help='Lift the stdin Point so that V unfires')

    p = sub.add_parser('bound', parents=[common], help='Meet or join of two orientations in one component')
    p.add_argument('graph', help='Edge-list file')
    p.add_argument('a', type=int, help='First orientation code')
    p.add_argument('b', type=int, help='Second orientation code')
    p.add_argument('direction', choices=[d.value for d in BoundDirection])
    p.add_argument('method', choices=('geometric', 'bruteforce'))

    p = sub.add_parser('chromatic', parents=[common], help='Chromatic polynomial and Greene-Zaslavsky count')
    p.add_argument('graph', help='Edge-list file')

    p = sub.add_parser('fire', parents=[common], help='Validate a FiringSequence read as JSON on stdin')
    p.add_argument('graph', help='Edge-list file')

    return parser


class CommandRunner:
    """Runs one parsed command and renders its payload."""

    def __init__(self, args: argparse.Namespace, stdin: TextIO):
        self.args = args
        self.stdin = stdin
        self.json = args.format == 'json'

    def run(self) -> Tuple[int, str]:
        handler = getattr(self, f"_cmd_{self.args.command}")
        return handler()

    def _graph(self) -> Graph:
        return load_graph(self.args.graph)

    def _read_point(self) -> Point:
        return Point.from_model(PointModel.model_validate_json(self.stdin.read()))

    @staticmethod
    def _dump(kind, payload) -> str:
        return TypeAdapter(kind).dump_json(payload, indent=2).decode() + "\n"

    def _cmd_enumerate(self) -> Tuple[int, str]:
        g = self._graph()
        orientations = enumerate_acyclic(g) if self.args.mode == 'P' else enumerate_sink_zero(g)
        if self.json:
            payload = [o.to_enumerated_model() for o in orientations]
            return EXIT_OK, self._dump(List[EnumeratedOrientationModel], payload)
        return EXIT_OK, "".join(f"{o.code}\t{o.describe()}\n" for o in orientations)

    def _cmd_poset(self) -> Tuple[int, str]:
        poset = build_p0(self._graph())
        if self.json:
            return EXIT_OK, poset.to_model().model_dump_json(indent=2) + "\n"
        return EXIT_OK, to_dot(poset)

    def _cmd_components(self) -> Tuple[int, str]:
        poset = build_p0(self._graph())
        comps = components(poset)
        minima = [component_minimum(c).code for c in comps]
        if self.json:
            payload = [c.to_model(minimum) for c, minimum in zip(comps, minima)]
            return EXIT_OK, self._dump(List[ComponentModel], payload)
        lines = [
            f"component {c.index}: size {len(c)}, minimum {minimum}, codes {[o.code for o in c.orientations]}"
            for c, minimum in zip(comps, minima)
        ]
        return EXIT_OK, "\n".join(lines) + "\n"

    def _cmd_verify(self) -> Tuple[int, str]:
        if self.args.max_denominator < 2:
            raise argparse.ArgumentError(
                None, f"--max-denominator must be at least 2, got {self.args.max_denominator}"
            )
        if self.args.all_connected is not None:
            if self.args.graph:
                raise argparse.ArgumentError(None, "give a graph file or --all-connected, not both")
            corpus = verify_all_connected(
                self.args.all_connected,
                self.args.samples,
                self.args.seed,
                max_denominator=self.args.max_denominator,
            )
            code = EXIT_OK if corpus.passed else EXIT_CHECK_FAILED
            if self.json:
                return code, corpus.dump_json() + "\n"
            lines = [f"verified {corpus.graphs} connected graphs on <= {corpus.max_vertices} vertices"]
            lines += [f"FAILED {name}" for name in corpus.failed]
            lines.append("pass" if corpus.passed else "fail")
            return code, "\n".join(lines) + "\n"

        if not self.args.graph:
            raise argparse.ArgumentError(None, "verify needs a graph file or --all-connected N")
        report = verify_theorem(
            self._graph(),
            samples=self.args.samples,
            rng=random.Random(self.args.seed),
            max_denominator=self.args.max_denominator,
        )
        code = EXIT_OK if report.passed else EXIT_CHECK_FAILED
        if self.json:
            return code, report.dump_json() + "\n"
        lines = [
            f"elements: {report.elements}",
            f"components: {report.component_count}",
            f"greene-zaslavsky: {report.greene_zaslavsky_count}",
            f"unique-sink orientations: {report.unique_sink_count}",
        ]
        for c in report.components:
            lines.append(
                f"component {c.index}: size {c.size}, lattice {c.is_lattice}, "
                f"distributive {c.is_distributive}, minimum {c.minimum_code}, bounds agree {c.bounds_agree}"
            )
        if report.geometry is not None:
            lines.append(f"geometry samples: {report.geometry.samples}, passed {report.geometry.passed}")
        lines += [f"FAILED {f}" for f in report.failures]
        lines.append("pass" if report.passed else "fail")
        return code, "\n".join(lines) + "\n"

    def _cmd_phi(self) -> Tuple[int, str]:
        o = phi(self._graph(), self._read_point())
        if self.json:
            return EXIT_OK, o.to_model().model_dump_json() + "\n"
        return EXIT_OK, f"{o}\n"

    def _cmd_region(self) -> Tuple[int, str]:
        g = self._graph()
        x = self._read_point()
        signature = region_signature(g, x)
        anchor = cube_anchor(x)
        if self.json:
            model = PointRegionModel(signature=signature.to_model(), anchor=anchor.to_model())
            return EXIT_OK, model.model_dump_json(indent=2) + "\n"
        slabs = " ".join(f"{key}:{k}" for key, k in signature.as_dict().items())
        return EXIT_OK, f"signature: {slabs}\nanchor: {list(anchor.floors)}\norientation: {phi(g, x)}\n"

    def _cmd_lift(self) -> Tuple[int, str]:
        g = self._graph()
        if self.args.fire is not None:
            point = lift_fire(g, self._read_point(), self.args.fire)
        elif self.args.unfire is not None:
            point = lift_unfire(g, self._read_point(), self.args.unfire)
        elif self.args.code is not None:
            point = canonical_lift(Orientation.from_code(g, self.args.code))
        else:
            raise argparse.ArgumentError(None, "lift needs an orientation code, --fire or --unfire")
        if self.json:
            return EXIT_OK, point.to_model().model_dump_json() + "\n"
        return EXIT_OK, f"{point}\n"

    def _cmd_bound(self) -> Tuple[int, str]:
        g = self._graph()
        poset = build_p0(g)
        a = Orientation.from_code(g, self.args.a)
        b = Orientation.from_code(g, self.args.b)
        component = component_of(poset, a)
        direction = BoundDirection(self.args.direction)
        if self.args.method == 'geometric':
            result = geometric_bound(component, a, b, direction)
        else:
            result = poset_bound(component, a, b, direction)
        if self.json:
            return EXIT_OK, result.to_enumerated_model().model_dump_json(indent=2) + "\n"
        return EXIT_OK, f"{result.code}\t{result}\n"

    def _cmd_chromatic(self) -> Tuple[int, str]:
        g = self._graph()
        polynomial = chromatic_polynomial(g)
        if self.json:
            return EXIT_OK, polynomial.to_model().model_dump_json() + "\n"
        return EXIT_OK, f"{polynomial}\ngreene-zaslavsky: {greene_zaslavsky_count(g)}\n"

    def _cmd_fire(self) -> Tuple[int, str]:
        g = self._graph()
        sequence = FiringSequence.from_model(g, FiringSequenceModel.model_validate_json(self.stdin.read()))
        report = validate_firing_sequence(sequence, FiringMode(self.args.mode))
        ok = report.lemma1_ok and report.bound_ok is not False
        code = EXIT_OK if ok else EXIT_CHECK_FAILED
        if self.json:
            return code, report.to_model().model_dump_json(indent=2) + "\n"
        lines = [
            f"final: {report.final}",
            f"counts: {list(report.counts)}",
            f"neighbor counts: {'ok' if report.lemma1_ok else 'FAILED'}",
        ]
        if report.bound_ok is not None:
            lines.append(f"bound: {'ok' if report.bound_ok else 'FAILED'} ({report.length} <= {report.bound})")
        return code, "\n".join(lines) + "\n"


def run(argv: List[str], stdin: Optional[TextIO] = None) -> CommandResult:
    """
    Parse argv and run the command.

    Args:
        argv: Arguments without the program name
        stdin: Stream for Point / FiringSequence JSON (default: sys.stdin)

    Returns:
        CommandResult with exit code, stdout payload and error message
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return CommandResult(exit_code=e.code if isinstance(e.code, int) else EXIT_USAGE)

    configure_logging('INFO' if args.verbose else args.log_level)
    runner = CommandRunner(args, stdin if stdin is not None else sys.stdin)
    try:
        code, output = runner.run()
        return CommandResult(exit_code=code, output=output)
    except TheoremViolation as e:
        logger.error(f"Theorem check failed: {e}")
        return CommandResult(exit_code=EXIT_CHECK_FAILED, error=f"theorem check failed: {e}")
    except (AcyclicError, ValidationError, argparse.ArgumentError, OSError) as e:
        logger.error(f"{args.command}: {e}")
        return CommandResult(exit_code=EXIT_USAGE, error=f"error: {e}")


def main():
    """Main entry point."""
    try:
        result = run(sys.argv[1:])
    except KeyboardInterrupt:
        logger.info("\nInterrupted by user")
        sys.exit(1)
    if result.output:
        sys.stdout.write(result.output)
    if result.error:
        sys.stderr.write(result.error + "\n")
    sys.exit(result.exit_code)


if __name__ == '__main__':
    main()
