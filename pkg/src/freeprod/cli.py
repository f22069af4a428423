"""
	Command-line interface.

	```
	freeprod [--config FILE] [--depth N] [--seed S] [--tol-NAME X ...] [--with-oracle] [--out FILE] COMMAND [options]
	```

	Commands: `moments`, `freeness`, `lemma-verify`, `vav-check`, `faithfulness`, `example-toeplitz`. The report is written as JSON to stdout or to `--out`. Logging goes to stderr at the level named by the `FREEPROD_LOG` environment variable.

	Exit codes: 0 if every check passes, 1 if a check fails, 2 for configuration errors, 3 if the depth is too small, in which case the required depth is printed.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Final, Optional

from . import __version__
from .config import DEFAULT_TOLERANCES, RunConfig, load_run_config
from .errors import ConfigError, DimensionLimitError, FreeProductError, TruncationError
from .freerep import freeness_report, restriction_report
from .oracle import DenseSpace
from .report import Report, ReportGroup, render_json
from .suites import faithfulness_suite, lemma_suite, moments_suite, vav_suite, witness_suite
from .toeplitz import DEFAULT_K, build_example, verify_noncyclic, verify_v_onto


__all__ = ('main', 'EXIT_PASS', 'EXIT_FAIL', 'EXIT_CONFIG', 'EXIT_TRUNCATION', 'LOG_ENVIRONMENT_VARIABLE')


_logger = logging.getLogger(__name__)


EXIT_PASS: Final = 0
EXIT_FAIL: Final = 1
EXIT_CONFIG: Final = 2
EXIT_TRUNCATION: Final = 3

LOG_ENVIRONMENT_VARIABLE: Final = 'FREEPROD_LOG'

_LOG_LEVELS: Final = ('DEBUG', 'INFO', 'WARNING', 'ERROR')


def _configure_logging() -> None:
	level = os.environ.get(LOG_ENVIRONMENT_VARIABLE, 'WARNING').upper()
	if level not in _LOG_LEVELS:
		level = 'WARNING'
	logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


def _positive_int(value: str) -> int:
	try:
		n = int(value)
	except ValueError:
		raise argparse.ArgumentTypeError(f"not an integer: {value!r}") from None
	if n < 1:
		raise argparse.ArgumentTypeError(f"must be at least 1: {n}")
	return n


def _parser() -> argparse.ArgumentParser:
	parser = argparse.ArgumentParser(prog='freeprod', description="Numerical checks for reduced free products of finite-dimensional C*-algebras.")
	parser.add_argument('--version', action='version', version=f"%(prog)s {__version__}")
	parser.add_argument('--config', type=Path, help="JSON run configuration; two copies of C² with the state (½, ½) if omitted")
	parser.add_argument('--depth', type=_positive_int, help="truncation depth N, overriding the configuration")
	parser.add_argument('--seed', type=int, help="root seed, overriding the configuration")
	for name in DEFAULT_TOLERANCES.as_dict():
		parser.add_argument(f'--tol-{name}', type=float, dest=f'tol_{name}', metavar='X', help=f"{name} tolerance")
	parser.add_argument('--with-oracle', action='store_true', help="also compare against the dense reference")
	parser.add_argument('--out', type=Path, help="write the report here instead of stdout")

	commands = parser.add_subparsers(dest='command', required=True, metavar='COMMAND')

	moments = commands.add_parser('moments', help="evaluate the free product state on the configured polynomials")
	moments.add_argument('--stability', action='store_true', help="also compare with the moments at depth N + 1")

	freeness = commands.add_parser('freeness', help="check that the factors are free and the state restricts correctly")
	freeness.add_argument('--max-degree', type=_positive_int, help="longest alternating product; min(6, N) by default")

	lemma = commands.add_parser('lemma-verify', help="compare the closed form of compressions with direct computation")
	lemma.add_argument('--instances', type=_positive_int, default=200)
	lemma.add_argument('--max-n', type=_positive_int, help="longest isometry word; N by default")

	vav = commands.add_parser('vav-check', help="check that V* A V recovers the target factor")
	vav.add_argument('--n', type=_positive_int, default=2, help="length of the isometry word")
	vav.add_argument('--target', help="label of the target factor; random by default")
	vav.add_argument('--words', type=_positive_int, default=50, help="random words for the containment check")

	faithfulness = commands.add_parser('faithfulness', help="look for witnesses that the free product state is non-zero on x* x, for random and configured x")
	faithfulness.add_argument('--instances', type=_positive_int, default=100)
	faithfulness.add_argument('--degree', type=_positive_int, default=2, help="largest degree of x")

	example = commands.add_parser('example-toeplitz', help="check the finite Toeplitz model of a non-cyclic GNS vector")
	example.add_argument('--K', type=int, default=DEFAULT_K, dest='k', help="truncation size, at least 3")

	return parser


def _oracle(config: RunConfig, args: argparse.Namespace) -> Optional[DenseSpace]:
	if not args.with_oracle:
		return None
	space = config.space()
	return DenseSpace(space.factors, space.depth)


def run(args: argparse.Namespace) -> Report:
	"""
		Run one command and return its report.

		Raises
		------
		- `ConfigError` if the configuration is invalid
		- `TruncationError` if the depth is too small for the command
	"""
	tolerances = {name: getattr(args, f'tol_{name}') for name in DEFAULT_TOLERANCES.as_dict()}
	config = load_run_config(args.config, depth=args.depth, seed=args.seed, tolerances=tolerances)

	if args.command == 'example-toeplitz':
		try:
			model = build_example(args.k, tolerances=config.tolerances)
		except ValueError as e:
			raise ConfigError(str(e)) from e
		return ReportGroup("example_toeplitz", {'v_onto': verify_v_onto(model), 'noncyclic': verify_noncyclic(model)})

	space = config.space()
	if args.command == 'moments':
		deeper = config.space(config.depth + 1) if args.stability else None
		return moments_suite(space, config.polynomials, _oracle(config, args), deeper)
	if args.command == 'freeness':
		return ReportGroup("freeness", {'freeness': freeness_report(space, args.max_degree), 'state_restriction': restriction_report(space)})
	if args.command == 'lemma-verify':
		return lemma_suite(space, config.generators(args.instances), args.max_n, _oracle(config, args))
	if args.command == 'vav-check':
		(rng,) = config.generators(1)
		return vav_suite(space, rng, args.n, args.target, args.words)
	if args.command == 'faithfulness':
		oracle = _oracle(config, args)
		return ReportGroup("faithfulness", {
			'random': faithfulness_suite(space, config.generators(args.instances), args.degree, oracle),
			'polynomials': witness_suite(space, config.polynomials, oracle),
		})
	raise ConfigError(f"unknown command {args.command!r}")


def main(argv: Optional[Sequence[str]]=None) -> int:
	"""
		Entry point of the `freeprod` command; returns the exit code.

		Examples
		--------
		```python
		main(["freeness", "--max-degree", "4"])              # 0
		main(["--depth", "2", "faithfulness", "--degree", "2"])  # 3, depth 4 is needed
		```
	"""
	_configure_logging()
	args = _parser().parse_args(argv)
	try:
		report = run(args)
	except TruncationError as e:
		print(f"freeprod: {e}; required depth: {e.required_depth}", file=sys.stderr)
		return EXIT_TRUNCATION
	except (ConfigError, DimensionLimitError) as e:
		print(f"freeprod: configuration error: {e}", file=sys.stderr)
		return EXIT_CONFIG
	except FreeProductError as e:
		print(f"freeprod: {e}", file=sys.stderr)
		return EXIT_FAIL

	text = render_json(report)
	if args.out is None:
		sys.stdout.write(text)
	else:
		try:
			args.out.write_text(text, encoding='utf-8')
		except OSError as e:
			print(f"freeprod: cannot write {str(args.out)!r}: {e}", file=sys.stderr)
			return EXIT_CONFIG
	if not report.passed:
		_logger.warning("%s failed", args.command)
		return EXIT_FAIL
	return EXIT_PASS
