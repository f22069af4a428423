"""
	Seeded verification suites run by the command line: moments, the closed form of compressions, V* A V, and faithfulness on random and configured polynomials.

	Each suite takes a `FreeFockSpace` and a list of generators, one per random instance, and returns a `Report`. With a `DenseSpace` given, results are also compared against the dense reference.
"""

from __future__ import annotations

import logging
from collections import Counter
from collections.abc import Sequence
from typing import Any, Final, Optional

import numpy as np

from .compress import FaithfulnessWitness, LemmaBranch, build_isometry, compress, faithfulness_witness, induction_step, lemma_value, vav_surjectivity
from .errors import StructuralError, TruncationError
from .freefock import FreeFockSpace
from .freerep import Letter, NCPoly, moment, represent_poly
from .oracle import DenseSpace
from .report import Report, complex_fields


__all__ = (
	'SUITE_TOLERANCE',
	'MomentsReport',
	'moments_suite',
	'LemmaSuiteReport',
	'lemma_suite',
	'vav_suite',
	'FaithfulnessSuiteReport',
	'faithfulness_suite',
	'WitnessSuiteReport',
	'witness_suite',
)


_logger = logging.getLogger(__name__)


SUITE_TOLERANCE: Final = 1e-10
"""Largest residual accepted between two ways of computing the same quantity"""


def _random_word(labels: Sequence[str], length: int, rng: np.random.Generator) -> list[str]:
	word: list[str] = []
	for _ in range(length):
		choices = [label for label in labels if not word or label != word[-1]]
		word.append(choices[int(rng.integers(len(choices)))])
	return word


def _centred_letter(space: FreeFockSpace, label: str, rng: np.random.Generator) -> Letter:
	factor = space.factor(label)
	return Letter(label, factor.algebra.random_element(rng).centered(factor.state))


def _relative(difference: float, scale: float) -> float:
	return difference / max(1.0, scale)


def _witness_residual(oracle: DenseSpace, a: NCPoly, witness: FaithfulnessWitness) -> float:
	return abs(witness.value - oracle.dense_expectation(a, witness.word, witness.multi_index))


class MomentsReport(Report):
	"""
		Moments of the configured polynomials, with optional comparisons against the dense reference and against a deeper truncation.
	"""

	__slots__ = ('depth', 'entries', 'tolerance')

	def __init__(self, depth: int, entries: list[dict[str, Any]], tolerance: float):
		self.depth = depth
		self.entries = entries
		self.tolerance = tolerance

	@property
	def passed(self) -> bool:
		return all(
			e.get(key, 0.0) < self.tolerance
			for e in self.entries
			for key in ('oracle_residual', 'depth_residual')
		)

	def as_dict(self) -> dict[str, Any]:
		return {
			'check': "moments",
			'depth': self.depth,
			'moments': self.entries,
			'tolerance': self.tolerance,
		}


def moments_suite(space: FreeFockSpace, polynomials: Sequence[NCPoly], oracle: Optional[DenseSpace]=None, deeper: Optional[FreeFockSpace]=None) -> MomentsReport:
	"""
		Evaluate φ on every polynomial; the unit if none are given.

		Parameters
		----------
		`oracle`
		: dense reference to compare against

		`deeper`
		: the same free product at a larger depth; moments must not change

		Raises
		------
		`TruncationError` if a polynomial has degree above the depth
	"""
	if len(polynomials) == 0:
		polynomials = [NCPoly.constant(1)]
	entries = []
	for i, poly in enumerate(polynomials):
		value = moment(space, poly)
		entry: dict[str, Any] = {'index': i, 'degree': poly.degree, 'depth': space.depth, 'exact': poly.degree <= space.depth, 'terms': len(poly)}
		entry.update(complex_fields(value))
		if oracle is not None:
			entry['oracle_residual'] = abs(value - oracle.dense_moment(poly))
		if deeper is not None:
			entry['depth_residual'] = abs(value - moment(deeper, poly))
		entries.append(entry)
	return MomentsReport(space.depth, entries, SUITE_TOLERANCE)


class LemmaSuiteReport(Report):
	"""
		Result of `lemma_suite()`.

		`closed_form_residual` compares the closed form with the direct compression, `oracle_residual` with the dense reference, and `zero_norm` is the largest direct norm in the zero branch.
	"""

	__slots__ = (
		'instances',
		'branches',
		'closed_form_residual',
		'oracle_residual',
		'zero_norm',
		'adjoint_residual',
		'induction_residual',
		'induction_steps',
		'isometry_defect',
		'tolerance',
		'isometry_tolerance',
	)

	def __init__(self, instances: int, branches: dict[str, int], closed_form_residual: float, oracle_residual: Optional[float], zero_norm: float, adjoint_residual: float, induction_residual: float, induction_steps: int, isometry_defect: float, tolerance: float, isometry_tolerance: float):
		self.instances = instances
		self.branches = branches
		self.closed_form_residual = closed_form_residual
		self.oracle_residual = oracle_residual
		self.zero_norm = zero_norm
		self.adjoint_residual = adjoint_residual
		self.induction_residual = induction_residual
		self.induction_steps = induction_steps
		self.isometry_defect = isometry_defect
		self.tolerance = tolerance
		self.isometry_tolerance = isometry_tolerance

	@property
	def passed(self) -> bool:
		return (
			self.instances > 0
			and self.closed_form_residual < self.tolerance
			and (self.oracle_residual is None or self.oracle_residual < self.tolerance)
			and self.zero_norm < self.tolerance
			and self.adjoint_residual < self.tolerance
			and self.induction_residual < self.tolerance
			and self.isometry_defect < self.isometry_tolerance
		)

	def as_dict(self) -> dict[str, Any]:
		return {
			'check': "lemma",
			'instances': self.instances,
			'branches': self.branches,
			'closed_form_residual': self.closed_form_residual,
			'oracle_residual': self.oracle_residual,
			'zero_norm': self.zero_norm,
			'adjoint_residual': self.adjoint_residual,
			'induction_residual': self.induction_residual,
			'induction_steps': self.induction_steps,
			'isometry_defect': self.isometry_defect,
			'tolerance': self.tolerance,
			'isometry_tolerance': self.isometry_tolerance,
		}


def _lemma_instance(space: FreeFockSpace, branch: LemmaBranch, max_n: int, rng: np.random.Generator) -> Optional[tuple[list[str], list[str]]]:
	"""Isometry labels and letter labels aimed at `branch`, or None if the space cannot hold that branch"""
	depth = space.depth
	labels = space.labels
	if branch == LemmaBranch.SCALAR_TARGET:
		# m = 2n - 1 needs depth 2n - 1; one label only alternates as a single letter
		top = min(max_n, (depth + 1) // 2, depth if len(labels) > 1 else 1)
		if top < 1:
			return None
		n = int(rng.integers(1, top + 1))
		iota = _random_word(labels, n, rng)
		return iota, iota[:-1] + [iota[-1]] + list(reversed(iota[:-1]))
	if branch == LemmaBranch.SCALAR_IDENTITY:
		top = min(max_n, depth)
		if top < 2 or len(labels) < 2:
			return None
		n = int(rng.integers(2, top + 1))
		iota = _random_word(labels, n, rng)
		# m = 2p - 1 with p < n needs depth n + p - 1
		p = int(rng.integers(1, min(n - 1, depth - n + 1) + 1))
		return iota, iota[:p - 1] + [iota[p - 1]] + list(reversed(iota[:p - 1]))
	if len(labels) < 2:
		return [labels[0]], [labels[0]]
	n = int(rng.integers(1, min(max_n, depth) + 1))
	iota = _random_word(labels, n, rng)
	m = int(rng.integers(1, 2 * (depth - n) + 2))
	return iota, _random_word(labels, m, rng)


def lemma_suite(space: FreeFockSpace, generators: Sequence[np.random.Generator], max_n: Optional[int]=None, oracle: Optional[DenseSpace]=None) -> LemmaSuiteReport:
	"""
		Compare the closed form of V* a_1 ... a_m V with the direct compression over random instances.

		Instance i aims at branch i mod 3 and draws its isometry, with random unit vectors ζ_j ∈ H°, and its centred letters from `generators[i]`. Every instance also checks the adjoint form and, where the letters allow it, the induction step.

		Parameters
		----------
		`max_n`
		: longest isometry word; defaults to the depth
	"""
	max_n = space.depth if max_n is None else min(max_n, space.depth)
	branches: Counter[str] = Counter()
	closed = 0.0
	dense: Optional[float] = None if oracle is None else 0.0
	zero = 0.0
	adjoint = 0.0
	induction = 0.0
	steps = 0
	defect = 0.0
	instances = 0

	for i, rng in enumerate(generators):
		shape = _lemma_instance(space, LemmaBranch(i % 3), max_n, rng)
		if shape is None:
			shape = _lemma_instance(space, LemmaBranch.ZERO, max_n, rng)
			assert shape is not None
		iota, letter_labels = shape
		zetas = [(label, space.factor(label).random_complement_unit(rng)) for label in iota[:-1]]
		isometry = build_isometry(space, zetas, iota[-1])
		letters = [_centred_letter(space, label, rng) for label in letter_labels]

		case = lemma_value(isometry, letters)
		predicted = case.matrix(isometry)
		direct = compress(isometry, represent_poly(space, NCPoly.word(letters)))
		closed = max(closed, float(np.max(np.abs(predicted - direct))))
		if case.branch == LemmaBranch.ZERO:
			zero = max(zero, float(np.linalg.norm(direct, 2)))
		if dense is not None:
			reference = oracle.dense_compress(zetas, iota[-1], letters)
			dense = max(dense, float(np.max(np.abs(predicted - reference))))

		reversed_case = lemma_value(isometry, [letter.adjoint() for letter in reversed(letters)])
		adjoint = max(adjoint, float(np.max(np.abs(reversed_case.matrix(isometry) - case.adjoint().matrix(isometry)))))

		if len(letters) >= 3 and isometry.n >= 2 and letters[0].label == iota[0] == letters[-1].label:
			induction = max(induction, induction_step(isometry, letters).residual)
			steps += 1

		defect = max(defect, isometry.isometry_defect())
		branches[str(case.branch)] += 1
		instances += 1

	counts = {str(b): branches.get(str(b), 0) for b in LemmaBranch}
	_logger.debug("lemma suite: %d instances, branches %s, residual %.3e", instances, counts, closed)
	return LemmaSuiteReport(instances, counts, closed, dense, zero, adjoint, induction, steps, defect, SUITE_TOLERANCE, space.tolerances.isometry)


def vav_suite(space: FreeFockSpace, rng: np.random.Generator, n: int=2, target: Optional[str]=None, words: int=50) -> Report:
	"""
		Build a random isometry with a word of length `n` ending in `target`, and check that V* A V = A_target.

		Raises
		------
		- `StructuralError` if `target` is not a factor
		- `TruncationError` if 2n - 1 exceeds the depth
	"""
	if target is not None and target not in space.labels:
		raise StructuralError(f"unknown factor {target!r}; factors are {list(space.labels)}")
	if 2 * n - 1 > space.depth:
		raise TruncationError(f"checking V* A V for words of length {n} needs depth {2 * n - 1}: got {space.depth}", required_depth=2 * n - 1)
	if n > 1 and len(space.labels) < 2:
		raise StructuralError(f"a single factor has no alternating words of length {n}")
	if target is None:
		iota = _random_word(space.labels, n, rng)
	else:
		iota = _align_to(space.labels, target, n, rng)
	zetas = [(label, space.factor(label).random_complement_unit(rng)) for label in iota[:-1]]
	return vav_surjectivity(build_isometry(space, zetas, iota[-1]), rng, words)


def _align_to(labels: Sequence[str], target: str, n: int, rng: np.random.Generator) -> list[str]:
	# build the word backwards from its last label
	word = [target]
	for _ in range(n - 1):
		choices = [label for label in labels if label != word[0]]
		word.insert(0, choices[int(rng.integers(len(choices)))])
	return word


class FaithfulnessSuiteReport(Report):
	"""
		Result of `faithfulness_suite()`.

		For random non-zero polynomials x, φ(x* x) must exceed `pos` · ‖xξ‖², agree with ‖xξ‖², and be found as a witness value; with a dense reference, every witness value is compared with ⟨aη, η⟩ recomputed at its witness vector η.
	"""

	__slots__ = ('instances', 'min_ratio', 'norm_residual', 'oracle_residual', 'witnesses', 'vacuum_witnesses', 'threshold', 'tolerance')

	def __init__(self, instances: int, min_ratio: float, norm_residual: float, oracle_residual: Optional[float], witnesses: int, vacuum_witnesses: int, threshold: float, tolerance: float):
		self.instances = instances
		self.min_ratio = min_ratio
		self.norm_residual = norm_residual
		self.oracle_residual = oracle_residual
		self.witnesses = witnesses
		self.vacuum_witnesses = vacuum_witnesses
		self.threshold = threshold
		self.tolerance = tolerance

	@property
	def passed(self) -> bool:
		return (
			self.instances > 0
			and self.min_ratio > self.threshold
			and self.norm_residual < self.tolerance
			and (self.oracle_residual is None or self.oracle_residual < self.tolerance)
			and self.witnesses == self.instances
		)

	def as_dict(self) -> dict[str, Any]:
		return {
			'check': "faithfulness",
			'instances': self.instances,
			'min_ratio': self.min_ratio,
			'norm_residual': self.norm_residual,
			'oracle_residual': self.oracle_residual,
			'witnesses': self.witnesses,
			'vacuum_witnesses': self.vacuum_witnesses,
			'threshold': self.threshold,
			'tolerance': self.tolerance,
		}


def faithfulness_suite(space: FreeFockSpace, generators: Sequence[np.random.Generator], degree: int=2, oracle: Optional[DenseSpace]=None) -> FaithfulnessSuiteReport:
	"""
		Check faithfulness of the free product state on x* x for random polynomials x of degree 1 to `degree`.

		Raises
		------
		`TruncationError` if 2 · `degree` exceeds the depth
	"""
	if degree < 1:
		raise ValueError(f"degree must be at least 1: {degree}")
	if 2 * degree > space.depth:
		raise TruncationError(f"x* x for x of degree {degree} needs depth {2 * degree}: got {space.depth}", required_depth=2 * degree)
	ratio = float('inf')
	norms = 0.0
	dense: Optional[float] = None if oracle is None else 0.0
	witnesses = 0
	vacuum = 0
	for rng in generators:
		x = NCPoly.random(space, int(rng.integers(1, degree + 1)), rng)
		positive = x.adjoint() * x
		value = moment(space, positive)
		squared = float(np.linalg.norm(represent_poly(space, x).matrix @ space.xi) ** 2)
		ratio = min(ratio, value.real / squared if squared > 0 else 0.0)
		norms = max(norms, _relative(abs(value - squared), squared))
		witness = faithfulness_witness(space, x)
		if witness.found:
			witnesses += 1
			if witness.word.is_vacuum:
				vacuum += 1
			if dense is not None:
				dense = max(dense, _relative(_witness_residual(oracle, positive, witness), squared))
	_logger.debug("faithfulness suite: %d instances, min ratio %.3e", len(generators), ratio)
	return FaithfulnessSuiteReport(len(generators), ratio, norms, dense, witnesses, vacuum, space.tolerances.pos, SUITE_TOLERANCE)


class WitnessSuiteReport(Report):
	"""
		Faithfulness witnesses for configured polynomials x, one entry per polynomial.

		Every x must have a witness; with a dense reference, each witness value is also compared with ⟨x* x η, η⟩ recomputed at its witness vector η.
	"""

	__slots__ = ('entries', 'tolerance')

	def __init__(self, entries: list[dict[str, Any]], tolerance: float):
		self.entries = entries
		self.tolerance = tolerance

	@property
	def passed(self) -> bool:
		return all(e['verdict'] == "witness" and e.get('oracle_residual', 0.0) < self.tolerance for e in self.entries)

	def as_dict(self) -> dict[str, Any]:
		return {
			'check': "faithfulness_witnesses",
			'witnesses': self.entries,
			'tolerance': self.tolerance,
		}


def witness_suite(space: FreeFockSpace, polynomials: Sequence[NCPoly], oracle: Optional[DenseSpace]=None) -> WitnessSuiteReport:
	"""
		Run `faithfulness_witness()` on every polynomial x.

		Raises
		------
		`TruncationError` if a polynomial has degree above the depth
	"""
	entries = []
	for i, x in enumerate(polynomials):
		witness = faithfulness_witness(space, x)
		entry: dict[str, Any] = {'index': i, 'degree': x.degree}
		entry.update(witness.as_dict())
		del entry['check']
		if oracle is not None and witness.found:
			entry['oracle_residual'] = _relative(_witness_residual(oracle, x.adjoint() * x, witness), witness.value)
		entries.append(entry)
	_logger.debug("witness suite: %d polynomials", len(entries))
	return WitnessSuiteReport(entries, SUITE_TOLERANCE)
