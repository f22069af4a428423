"""
	Run configuration: tolerances, factor fragments, element references and polynomials, read from JSON.

	A run configuration looks like

	```json
	{
		"schema": 1,
		"factors": [
			{"label": "a", "blocks": [1, 1], "density": [[[0.5]], [[0.5]]]},
			{"label": "b", "blocks": [2], "weights": [[0.75, 0.25]]}
		],
		"depth": 4,
		"seed": 7,
		"tolerances": {"free": 1e-10},
		"polynomials": [
			{"terms": [{"coefficient": [1, 0], "word": [["a", "0.0.0"], ["b", "~0.0.1"]]}]}
		]
	}
	```

	Complex numbers are written as [re, im] pairs or as plain real numbers. A factor gives its state either as `density`, one matrix per block, or as `weights`, one list of diagonal entries per block.

	An element reference is one of

	- `"1"`, the unit,
	- `"b.i.j"`, the matrix unit e_ij of block b, indexed from 0,
	- `"~b.i.j"`, the same matrix unit centred with respect to the state of its factor,
	- `{"blocks": [...]}`, explicit matrices for every block.
"""

from __future__ import annotations

import json
import logging
import numbers
import re
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Final, Optional, Union

import numpy as np

from ._tolerances import DEFAULT_TOLERANCES, Tolerances
from .blockalg import AlgebraElement, BlockAlgebra, StateSpec
from .errors import ConfigError, FreeProductError
from .freefock import FreeFockSpace
from .freerep import Letter, NCPoly
from .gns import GnsSpace


__all__ = (
	'Tolerances',
	'DEFAULT_TOLERANCES',
	'CONFIG_SCHEMA',
	'DEFAULT_RUN_CONFIG',
	'RunConfig',
	'parse_tolerances',
	'parse_factor',
	'parse_element_ref',
	'parse_polynomial',
	'parse_run_config',
	'load_run_config',
	'spawn_generators',
)


_logger = logging.getLogger(__name__)


CONFIG_SCHEMA: Final = 1


DEFAULT_RUN_CONFIG: Final = {
	'schema': CONFIG_SCHEMA,
	'factors': [
		{'label': "p", 'blocks': [1, 1], 'weights': [[0.5], [0.5]]},
		{'label': "q", 'blocks': [1, 1], 'weights': [[0.5], [0.5]]},
	],
	'depth': 4,
	'seed': 0,
	'polynomials': [
		{'terms': [{'coefficient': [1, 0], 'word': [["p", "0.0.0"], ["q", "0.0.0"]]}]},
		{'terms': [{'coefficient': [1, 0], 'word': [["p", "0.0.0"], ["q", "0.0.0"], ["p", "0.0.0"]]}]},
	],
}
"""Two copies of C² with the state (½, ½), and the moments of pq and pqp for p = q = (1, 0)"""


_MATRIX_UNIT: Final = re.compile(r'(~?)(\d+)\.(\d+)\.(\d+)')


def _complex(value: Any, where: str) -> complex:
	if isinstance(value, numbers.Real) and not isinstance(value, bool):
		return complex(value)
	if isinstance(value, Sequence) and not isinstance(value, str) and len(value) == 2 and all(isinstance(v, numbers.Real) and not isinstance(v, bool) for v in value):
		return complex(value[0], value[1])
	raise ConfigError(f"{where} must be a number or an [re, im] pair: {value!r}")


def _matrix(value: Any, where: str) -> np.ndarray:
	if not isinstance(value, Sequence) or isinstance(value, str) or len(value) == 0:
		raise ConfigError(f"{where} must be a non-empty list of rows: {value!r}")
	rows = []
	for i, row in enumerate(value):
		if not isinstance(row, Sequence) or isinstance(row, str):
			raise ConfigError(f"{where} row {i} must be a list: {row!r}")
		rows.append([_complex(entry, f"{where}[{i}][{j}]") for j, entry in enumerate(row)])
	if len({len(row) for row in rows}) != 1:
		raise ConfigError(f"{where} has rows of different lengths")
	return np.array(rows, dtype=np.complex128)


def _int(value: Any, where: str, minimum: int) -> int:
	if not isinstance(value, int) or isinstance(value, bool):
		raise ConfigError(f"{where} must be an integer: {value!r}")
	if value < minimum:
		raise ConfigError(f"{where} must be at least {minimum}: {value}")
	return value


def parse_tolerances(value: Any, base: Tolerances=DEFAULT_TOLERANCES) -> Tolerances:
	"""
		Tolerances from a mapping of names to positive numbers, with missing entries taken from `base`.

		Raises
		------
		`ConfigError` if a name is unknown or a value is not a positive number
	"""
	if value is None:
		return base
	if not isinstance(value, Mapping):
		raise ConfigError(f"tolerances must be an object: {value!r}")
	known = set(base.as_dict())
	unknown = sorted(set(value) - known)
	if unknown:
		raise ConfigError(f"unknown tolerances {unknown}; expected some of {sorted(known)}")
	try:
		return base.replace(**value)
	except (TypeError, ValueError) as e:
		raise ConfigError(f"invalid tolerances: {e}") from e


def parse_factor(fragment: Any, tolerances: Tolerances=DEFAULT_TOLERANCES) -> GnsSpace:
	"""
		The GNS space of a factor fragment {"label": str, "blocks": [ints], "density" | "weights": ...}.

		Raises
		------
		`ConfigError` if the fragment is malformed or the state fails validation; validation failures keep the block and eigenvalue in the message
	"""
	if not isinstance(fragment, Mapping):
		raise ConfigError(f"factor must be an object: {fragment!r}")
	label = fragment.get('label')
	if not isinstance(label, str) or label == "":
		raise ConfigError(f"factor label must be a non-empty string: {label!r}")
	blocks = fragment.get('blocks')
	if not isinstance(blocks, Sequence) or isinstance(blocks, str) or len(blocks) == 0:
		raise ConfigError(f"factor {label!r}: blocks must be a non-empty list of dimensions: {blocks!r}")
	dims = [_int(d, f"factor {label!r} block dimension", 1) for d in blocks]

	try:
		algebra = BlockAlgebra(dims, label)
		if 'density' in fragment:
			densities = fragment['density']
			if not isinstance(densities, Sequence) or isinstance(densities, str):
				raise ConfigError(f"factor {label!r}: density must be a list of matrices")
			state = StateSpec(algebra, [_matrix(m, f"factor {label!r} density {b}") for b, m in enumerate(densities)], tolerances)
		elif 'weights' in fragment:
			weights = fragment['weights']
			if not isinstance(weights, Sequence) or isinstance(weights, str):
				raise ConfigError(f"factor {label!r}: weights must be a list of lists")
			state = StateSpec.from_weights(algebra, weights, tolerances)
		else:
			raise ConfigError(f"factor {label!r} needs a density or weights")
		return GnsSpace(state, tolerances)
	except ConfigError:
		raise
	except (FreeProductError, TypeError, ValueError) as e:
		raise ConfigError(f"factor {label!r}: {e}") from e


def parse_element_ref(ref: Any, factor: GnsSpace) -> AlgebraElement:
	"""
		The element of `factor` named by `ref`.

		Examples
		--------
		```python
		parse_element_ref("1", factor)        # the unit
		parse_element_ref("0.1.0", factor)    # e_10 of block 0
		parse_element_ref("~0.0.0", factor)   # e_00 - φ(e_00)
		```

		Raises
		------
		`ConfigError` if `ref` is malformed or out of range
	"""
	algebra = factor.algebra
	if isinstance(ref, str):
		if ref == "1":
			return algebra.one()
		match = _MATRIX_UNIT.fullmatch(ref)
		if match is None:
			raise ConfigError(f"element reference must be \"1\", \"b.i.j\" or \"~b.i.j\": {ref!r}")
		centred, b, i, j = match.group(1), int(match.group(2)), int(match.group(3)), int(match.group(4))
		try:
			unit = algebra.matrix_unit(b, i, j)
		except (IndexError, ValueError) as e:
			raise ConfigError(f"element reference {ref!r} is out of range for {algebra!r}") from e
		return unit.centered(factor.state) if centred else unit
	if isinstance(ref, Mapping) and 'blocks' in ref:
		blocks = ref['blocks']
		if not isinstance(blocks, Sequence) or isinstance(blocks, str):
			raise ConfigError(f"element blocks must be a list of matrices: {blocks!r}")
		try:
			return algebra.element([_matrix(m, f"element block {b}") for b, m in enumerate(blocks)])
		except ConfigError:
			raise
		except (FreeProductError, ValueError) as e:
			raise ConfigError(f"element of {algebra!r}: {e}") from e
	raise ConfigError(f"unrecognised element reference: {ref!r}")


def parse_polynomial(value: Any, factors: Mapping[str, GnsSpace]) -> NCPoly:
	"""
		A polynomial {"terms": [{"coefficient": c, "word": [[factor, elementRef], ...]}, ...]}.

		A missing coefficient is 1, and an empty word is the unit.

		Raises
		------
		`ConfigError` if the polynomial is malformed or names an unknown factor
	"""
	if not isinstance(value, Mapping) or not isinstance(value.get('terms'), Sequence):
		raise ConfigError(f"polynomial must be an object with a list of terms: {value!r}")
	terms = []
	for t, term in enumerate(value['terms']):
		if not isinstance(term, Mapping):
			raise ConfigError(f"term {t} must be an object: {term!r}")
		coefficient = _complex(term.get('coefficient', 1), f"term {t} coefficient")
		word = term.get('word', [])
		if not isinstance(word, Sequence) or isinstance(word, str):
			raise ConfigError(f"term {t} word must be a list of [factor, element] pairs: {word!r}")
		letters = []
		for entry in word:
			if not isinstance(entry, Sequence) or isinstance(entry, str) or len(entry) != 2:
				raise ConfigError(f"term {t} letter must be a [factor, element] pair: {entry!r}")
			label, ref = entry
			if label not in factors:
				raise ConfigError(f"term {t} names unknown factor {label!r}; factors are {sorted(factors)}")
			letters.append(Letter(label, parse_element_ref(ref, factors[label])))
		terms.append((coefficient, letters))
	return NCPoly(terms)


@dataclass(frozen=True)
class RunConfig:
	"""
		A parsed run configuration.

		Attributes
		----------
		`factors`
		: GNS spaces of the factors, in configuration order

		`depth`
		: truncation depth N ≥ 1

		`seed`
		: root seed for `spawn_generators()`

		`tolerances`
		: tolerances every factor was validated with

		`polynomials`
		: polynomials for the `moments` and `faithfulness` commands
	"""

	factors: tuple[GnsSpace, ...]
	depth: int
	seed: int
	tolerances: Tolerances = DEFAULT_TOLERANCES
	polynomials: tuple[NCPoly, ...] = field(default_factory=tuple)

	@property
	def labels(self) -> tuple[str, ...]:
		return tuple(f.label for f in self.factors)

	def space(self, depth: Optional[int]=None) -> FreeFockSpace:
		"""
			The truncated free product of the factors; trivial factors are dropped.

			Raises
			------
			`ConfigError` if the factors do not form a free product
		"""
		try:
			return FreeFockSpace(self.factors, self.depth if depth is None else depth, allow_trivial=True, tolerances=self.tolerances)
		except FreeProductError as e:
			raise ConfigError(str(e)) from e

	def generators(self, count: int) -> list[np.random.Generator]:
		return spawn_generators(self.seed, count)


def parse_run_config(document: Any, depth: Optional[int]=None, seed: Optional[int]=None, tolerances: Optional[Mapping[str, Optional[float]]]=None) -> RunConfig:
	"""
		A `RunConfig` from a decoded JSON document, with `depth`, `seed` and individual tolerances overriding the document when given.

		Raises
		------
		`ConfigError` if the document is malformed
	"""
	if not isinstance(document, Mapping):
		raise ConfigError(f"configuration must be a JSON object: got {type(document).__name__}")
	schema = document.get('schema', CONFIG_SCHEMA)
	if schema != CONFIG_SCHEMA:
		raise ConfigError(f"unsupported configuration schema {schema!r}; expected {CONFIG_SCHEMA}")

	tol = parse_tolerances(document.get('tolerances'))
	if tolerances:
		tol = parse_tolerances({k: v for k, v in tolerances.items() if v is not None}, tol)

	fragments = document.get('factors')
	if not isinstance(fragments, Sequence) or isinstance(fragments, str) or len(fragments) == 0:
		raise ConfigError("configuration needs a non-empty list of factors")
	factors = tuple(parse_factor(f, tol) for f in fragments)
	labels = [f.label for f in factors]
	if len(set(labels)) != len(labels):
		raise ConfigError(f"factor labels must be distinct: {labels}")

	depth = _int(document.get('depth', 4) if depth is None else depth, "depth", 1)
	seed = _int(document.get('seed', 0) if seed is None else seed, "seed", 0)

	by_label = {f.label: f for f in factors}
	polynomials = document.get('polynomials', [])
	if not isinstance(polynomials, Sequence) or isinstance(polynomials, str):
		raise ConfigError("polynomials must be a list")
	parsed = tuple(parse_polynomial(p, by_label) for p in polynomials)

	_logger.debug("run configuration: factors %s, depth %d, seed %d", labels, depth, seed)
	return RunConfig(factors, depth, seed, tol, parsed)


def load_run_config(path: Optional[Union[str, Path]]=None, **overrides: Any) -> RunConfig:
	"""
		Read a run configuration from a JSON file, or use `DEFAULT_RUN_CONFIG` if `path` is None.

		Keyword arguments are passed on to `parse_run_config()` as overrides.

		Raises
		------
		`ConfigError` if the file cannot be read or parsed
	"""
	if path is None:
		return parse_run_config(DEFAULT_RUN_CONFIG, **overrides)
	try:
		text = Path(path).read_text(encoding='utf-8')
	except OSError as e:
		raise ConfigError(f"cannot read configuration {str(path)!r}: {e}") from e
	try:
		document = json.loads(text)
	except json.JSONDecodeError as e:
		raise ConfigError(f"configuration {str(path)!r} is not valid JSON: {e}") from e
	return parse_run_config(document, **overrides)


def spawn_generators(seed: int, count: int) -> list[np.random.Generator]:
	"""
		`count` independent Philox generators spawned from `seed`.

		Generator i depends only on `seed` and i, so instance i of a suite is reproducible however many instances run.
	"""
	children = np.random.SeedSequence(seed).spawn(count)
	return [np.random.Generator(np.random.Philox(child)) for child in children]
