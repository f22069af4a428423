"""
	Compression isometries V = V_{(ζ_1, ..., ζ_{n-1}, ι_n)} : H_{ι_n} → ℋ and the compressions V* T V.

	V sends ξ_{ι_n} to ζ_1 ⊗ ... ⊗ ζ_{n-1} and ζ ∈ H°_{ι_n} to ζ_1 ⊗ ... ⊗ ζ_{n-1} ⊗ ζ. For an alternating product a_1 ... a_m of centred letters the compression has a closed form, which is one of c·1, c·a_n or 0 depending on how the letter labels mirror the labels of V. This module computes the closed form, the direct compression, the recovery of every element of A_{ι_n} as a compression, and the scan for a vector on which a positive operator is visibly non-zero.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from enum import IntEnum, auto, unique
from typing import Any, Final, NamedTuple, Optional, Union

import numpy as np
import scipy.linalg
import scipy.sparse
import scipy.sparse.linalg

from .blockalg import AlgebraElement
from .errors import StructuralError, TruncationError, ValidationError, WitnessConstructionError
from .freefock import FreeFockSpace, Word
from .freerep import Letter, NCPoly, RepOperator, represent_poly
from .report import Report, complex_fields


__all__ = (
	'CompressionIsometry',
	'build_isometry',
	'LemmaBranch',
	'Classification',
	'LemmaCase',
	'classify',
	'lemma_value',
	'compress',
	'InductionStep',
	'induction_step',
	'SurjectivityReport',
	'vav_surjectivity',
	'FaithfulnessWitness',
	'witness_scan',
	'operator_norm',
	'faithfulness_witness',
	'SURJECTIVITY_TOLERANCE',
)


_logger = logging.getLogger(__name__)


SURJECTIVITY_TOLERANCE: Final = 1e-8
"""Largest recovery or containment residual accepted by `vav_surjectivity()`"""


def _required_depth(n: int, letters: int) -> int:
	# a product of k letters between words of length ≤ n never leaves length n + k // 2
	return n + letters // 2


class CompressionIsometry:
	"""
		The isometry V_{(ζ_1, ..., ζ_{n-1}, ι_n)} from the GNS space of factor ι_n into a truncated free product space.

		The ζ_j are unit vectors of H°_{ι_j}, given in the frame of the GNS space of ι_j.
	"""

	__slots__ = ('_space', '_word', '_zetas', '_matrix')

	def __init__(self, space: FreeFockSpace, zetas: Sequence[tuple[str, Any]], target: str):
		"""
			Parameters
			----------
			`space`
			: the free product space

			`zetas`
			: pairs (ι_j, ζ_j) for j = 1, ..., n - 1

			`target`
			: the label ι_n

			Raises
			------
			- `StructuralError` if the labels do not alternate, are unknown, or a ζ has the wrong length
			- `ValidationError` if a ζ is not a unit vector of H°; the message gives the factor to rescale by
			- `TruncationError` if n exceeds the depth of `space`
		"""
		labels = [label for label, _ in zetas] + [target]
		word = Word(labels)
		if len(word) > space.depth:
			raise TruncationError(f"isometry of length {len(word)} does not fit in depth {space.depth}", required_depth=len(word))
		tol = space.tolerances
		vectors = []
		for j, (label, zeta) in enumerate(zetas):
			factor = space.factor(label)
			zeta = np.array(zeta, dtype=np.complex128)
			if zeta.shape != (factor.dim,):
				raise StructuralError(f"ζ_{j + 1} must have length {factor.dim} for factor {label!r}: got shape {zeta.shape}")
			if abs(zeta[0]) > tol.norm:
				raise ValidationError(f"ζ_{j + 1} is not orthogonal to ξ_{label}: ξ-coordinate {abs(zeta[0]):.3e}")
			norm = float(np.linalg.norm(zeta))
			if abs(norm - 1) > tol.norm:
				raise ValidationError(f"ζ_{j + 1} must be a unit vector: norm {norm:.12g}; rescale it by {1 / norm if norm > 0 else float('inf'):.12g}")
			zeta.setflags(write=False)
			vectors.append(zeta)
		space.factor(target)

		self._space: FreeFockSpace = space
		self._word: Word = word
		self._zetas: tuple[np.ndarray, ...] = tuple(vectors)

		target_dim = space.factor(target).dim
		head = np.ones(1, dtype=np.complex128)
		for zeta in vectors:
			head = np.kron(head, zeta[1:])
		matrix = np.zeros((space.total_dim, target_dim), dtype=np.complex128)
		matrix[space.block_slice(word[:-1]), 0] = head
		tail = space.block_slice(word)
		matrix[tail, 1:] = np.kron(head[:, None], np.eye(target_dim - 1))
		self._matrix: scipy.sparse.csr_matrix = scipy.sparse.csr_matrix(matrix)

		_logger.debug("built isometry for word %s with defect %.3e", word, self.isometry_defect())

	@property
	def space(self) -> FreeFockSpace:
		return self._space

	@property
	def word(self) -> Word:
		"""Read-only labels (ι_1, ..., ι_n)"""
		return self._word

	@property
	def n(self) -> int:
		return len(self._word)

	@property
	def target(self) -> str:
		return self._word[-1]

	@property
	def zetas(self) -> tuple[np.ndarray, ...]:
		return self._zetas

	@property
	def matrix(self) -> scipy.sparse.csr_matrix:
		"""Read-only total_dim × dim H_{ι_n} matrix of V"""
		return self._matrix

	def isometry_defect(self) -> float:
		"""‖V*V - 1‖ in operator norm"""
		gram = (self._matrix.conj().T @ self._matrix).toarray()
		return float(np.linalg.norm(gram - np.eye(gram.shape[0]), 2))

	def shifted(self) -> CompressionIsometry:
		"""
			The isometry U = V_{(ζ_2, ..., ζ_{n-1}, ι_n)} obtained by dropping the first vector.

			Raises
			------
			`StructuralError` if n = 1
		"""
		if self.n < 2:
			raise StructuralError("an isometry with n = 1 has no first vector to drop")
		return CompressionIsometry(self._space, list(zip(self._word.labels[1:-1], self._zetas[1:])), self.target)

	def __repr__(self) -> str:
		return f"CompressionIsometry({self._space!r}, word={str(self._word)!r})"


def build_isometry(space: FreeFockSpace, zetas: Sequence[tuple[str, Any]], target: str) -> CompressionIsometry:
	"""Equivalent to `CompressionIsometry(space, zetas, target)`"""
	return CompressionIsometry(space, zetas, target)


@unique
class LemmaBranch(IntEnum):
	"""
		The three possible forms of V* a_1 ... a_m V for centred alternating letters.

		A LemmaBranch object can be obtained by name using `LemmaBranch.from_str()`.
	"""

	SCALAR_IDENTITY = 0
	"""c·1, for m = 2p - 1 with p < n"""
	SCALAR_TARGET = auto()
	"""c·a_n, for m = 2n - 1"""
	ZERO = auto()

	@staticmethod
	def from_str(name: str) -> LemmaBranch:
		"""
			Get the LemmaBranch with a given name, one of "scalar-identity", "scalar-target" or "zero".
		"""
		try:
			return _branch_names[name]
		except KeyError:
			raise ValueError(f"unknown branch name: {name!r}") from None

	def __str__(self) -> str:
		return _name_of_branches[self]


_branch_names: dict[str, LemmaBranch] = {
	'scalar-identity': LemmaBranch.SCALAR_IDENTITY,
	'scalar-target': LemmaBranch.SCALAR_TARGET,
	'zero': LemmaBranch.ZERO,
}

_name_of_branches: dict[LemmaBranch, str] = {v: k for k, v in _branch_names.items()}


class Classification(NamedTuple):
	branch: LemmaBranch
	p: Optional[int]
	"""the middle position, for the two non-zero branches"""


def classify(m: int, n: int, letter_labels: Sequence[str], isometry_labels: Sequence[str]) -> Classification:
	"""
		Decide which form V* a_1 ... a_m V takes, from the labels k_1, ..., k_m of the letters and ι_1, ..., ι_n of V.

		The result is non-zero only if m = 2p - 1 is odd with p ≤ n, the letters mirror each other around position p as k_j = k_{m+1-j} = ι_j for j < p, and k_p = ι_p. Then it is c·1 if p < n and c·a_n if p = n.

		Raises
		------
		`StructuralError` if either label sequence does not alternate or has the wrong length

		Examples
		--------
		```python
		classify(1, 1, ["a"], ["a"])            # Classification(SCALAR_TARGET, 1)
		classify(1, 2, ["a"], ["a", "b"])       # Classification(SCALAR_IDENTITY, 1)
		classify(3, 2, ["a", "b", "b"], [...])  # StructuralError
		```
	"""
	k = Word(letter_labels)
	iota = Word(isometry_labels)
	if len(k) != m or len(iota) != n:
		raise StructuralError(f"expected {m} letter labels and {n} isometry labels: got {len(k)} and {len(iota)}")
	if m < 1 or n < 1:
		raise StructuralError(f"m and n must be positive: m={m}, n={n}")
	if m % 2 == 0:
		return Classification(LemmaBranch.ZERO, None)
	p = (m + 1) // 2
	if p > n:
		return Classification(LemmaBranch.ZERO, None)
	for j in range(1, p):
		if not (k[j - 1] == iota[j - 1] == k[m - j]):
			return Classification(LemmaBranch.ZERO, None)
	if k[p - 1] != iota[p - 1]:
		return Classification(LemmaBranch.ZERO, None)
	return Classification(LemmaBranch.SCALAR_TARGET if p == n else LemmaBranch.SCALAR_IDENTITY, p)


class LemmaCase:
	"""
		The closed form of V* a_1 ... a_m V: a branch, a scalar c, and for `SCALAR_TARGET` the middle letter a_n.
	"""

	__slots__ = ('branch', 'scalar', 'element', 'm', 'n', 'p')

	def __init__(self, branch: LemmaBranch, scalar: complex, element: Optional[AlgebraElement], m: int, n: int, p: Optional[int]):
		self.branch = branch
		self.scalar = complex(scalar)
		self.element = element
		self.m = m
		self.n = n
		self.p = p

	def matrix(self, isometry: CompressionIsometry) -> np.ndarray:
		"""The predicted compression as a matrix on H_{ι_n}"""
		target = isometry.space.factor(isometry.target)
		if self.branch == LemmaBranch.SCALAR_IDENTITY:
			return self.scalar * np.eye(target.dim)
		if self.branch == LemmaBranch.SCALAR_TARGET:
			assert self.element is not None
			return self.scalar * target.rep(self.element)
		return np.zeros((target.dim, target.dim), dtype=np.complex128)

	def adjoint(self) -> LemmaCase:
		"""
			The case for the reversed product of adjoint letters, which compresses to the adjoint: c̄·1, c̄·a_n* or 0.
		"""
		element = None if self.element is None else self.element.adjoint()
		return LemmaCase(self.branch, self.scalar.conjugate(), element, self.m, self.n, self.p)

	def __repr__(self) -> str:
		return f"LemmaCase({self.branch!s}, scalar={self.scalar!r}, m={self.m}, n={self.n}, p={self.p})"


def _ket_xi(label: str, space: FreeFockSpace, element: AlgebraElement, zeta: np.ndarray) -> complex:
	"""⟨a ζ, ξ⟩"""
	return complex((space.factor(label).rep(element) @ zeta)[0])


def _bra_xi(label: str, space: FreeFockSpace, element: AlgebraElement, zeta: np.ndarray) -> complex:
	"""⟨a ξ, ζ⟩"""
	return complex(np.vdot(zeta, space.factor(label).rep(element)[:, 0]))


def lemma_value(isometry: CompressionIsometry, letters: Sequence[Union[Letter, tuple[str, AlgebraElement]]]) -> LemmaCase:
	"""
		The closed form of V* a_1 ... a_m V for centred alternating letters.

		For m = 2p - 1 the scalar is

		c = Π_{j<p} ⟨a_{m+1-j} ζ_j, ξ⟩ · ⟨a_p ζ_p, ζ_p⟩ · Π_{j<p} ⟨a_j ξ, ζ_j⟩

		where the middle factor is present only for p < n.

		Raises
		------
		- `StructuralError` if the letters do not alternate or name unknown factors
		- `ValidationError` if a letter is not centred
	"""
	letters = [Letter(*letter) for letter in letters]
	space = isometry.space
	tol = space.tolerances
	for j, letter in enumerate(letters):
		value = space.factor(letter.label).state.evaluate(letter.element)
		if abs(value) > tol.norm:
			raise ValidationError(f"letter a_{j + 1} of {letter.label!r} is not centred: φ(a) = {value:.3e}")
	m = len(letters)
	n = isometry.n
	branch, p = classify(m, n, [letter.label for letter in letters], isometry.word.labels)
	if branch == LemmaBranch.ZERO:
		return LemmaCase(branch, 0, None, m, n, None)
	assert p is not None
	zetas = isometry.zetas
	c = 1 + 0j
	for j in range(1, p):
		outer = letters[m - j]
		inner = letters[j - 1]
		c *= _ket_xi(outer.label, space, outer.element, zetas[j - 1])
		c *= _bra_xi(inner.label, space, inner.element, zetas[j - 1])
	middle = letters[p - 1]
	if branch == LemmaBranch.SCALAR_IDENTITY:
		zeta = zetas[p - 1]
		c *= complex(np.vdot(zeta, space.factor(middle.label).rep(middle.element) @ zeta))
		return LemmaCase(branch, c, None, m, n, p)
	return LemmaCase(branch, c, middle.element, m, n, p)


def compress(isometry: CompressionIsometry, operator: RepOperator) -> np.ndarray:
	"""
		V* T V as a dense matrix on H_{ι_n}.

		Raises
		------
		- `StructuralError` if `operator` is on a different space
		- `TruncationError` if the truncation could change the result, that is if n + k // 2 exceeds the depth for a product of k letters
	"""
	if operator.space is not isometry.space:
		raise StructuralError(f"operator on {operator.space!r} given for an isometry on {isometry.space!r}")
	required = _required_depth(isometry.n, operator.letters)
	if required > isometry.space.depth:
		raise TruncationError(
			f"compressing a product of {operator.letters} letters to a word of length {isometry.n} needs depth {required}: got {isometry.space.depth}",
			required_depth=required,
		)
	v = isometry.matrix
	return (v.conj().T @ operator.matrix @ v).toarray()


def _word_operator(space: FreeFockSpace, letters: Sequence[Letter]) -> RepOperator:
	return represent_poly(space, NCPoly.word(letters))


class InductionStep(NamedTuple):
	"""
		The identity V* a_1 ... a_m V = ⟨a_m ζ_1, ξ⟩ · V* a_1 ... a_{m-1} U with both sides computed directly.
	"""

	coefficient: complex
	shifted: CompressionIsometry
	left: np.ndarray
	right: np.ndarray

	@property
	def residual(self) -> float:
		return float(np.max(np.abs(self.left - self.right), initial=0))


def induction_step(isometry: CompressionIsometry, letters: Sequence[Union[Letter, tuple[str, AlgebraElement]]]) -> InductionStep:
	"""
		Peel the last letter off a compression, as in the inductive proof of the closed form.

		Requires k_m = ι_1 = k_1, m ≥ 3 and n ≥ 2; the last letter then only contributes through its ξ-coordinate on ζ_1.

		Raises
		------
		- `StructuralError` if the letter labels do not have this shape
		- `TruncationError` if either side is not exact at the depth of the space
	"""
	letters = [Letter(*letter) for letter in letters]
	m = len(letters)
	if m < 3 or isometry.n < 2:
		raise StructuralError(f"an induction step needs m ≥ 3 and n ≥ 2: got m={m}, n={isometry.n}")
	first = isometry.word[0]
	if not (letters[0].label == first == letters[-1].label):
		raise StructuralError(f"an induction step needs k_1 = k_m = ι_1 = {first!r}")
	space = isometry.space
	shifted = isometry.shifted()
	coefficient = _ket_xi(first, space, letters[-1].element, isometry.zetas[0])
	left = compress(isometry, _word_operator(space, letters))
	head = _word_operator(space, letters[:-1])
	required = _required_depth(isometry.n, head.letters)
	if required > space.depth:
		raise TruncationError(f"induction step needs depth {required}: got {space.depth}", required_depth=required)
	right = coefficient * (isometry.matrix.conj().T @ head.matrix @ shifted.matrix).toarray()
	return InductionStep(coefficient, shifted, left, right)


class SurjectivityReport(Report):
	"""
		Result of `vav_surjectivity()`.

		`recovery_residual` is the largest distance between V* a_1 ... a_{2n-1} V / c and π(b) over centred frame elements b = a_n; `containment_residual` is the largest relative distance from V* T V to the span of π(A_{ι_n}) over random words T.
	"""

	__slots__ = ('word', 'recovered', 'recovery_residual', 'words_tested', 'containment_residual', 'tolerance')

	def __init__(self, word: Word, recovered: int, recovery_residual: float, words_tested: int, containment_residual: float, tolerance: float):
		self.word = word
		self.recovered = recovered
		self.recovery_residual = recovery_residual
		self.words_tested = words_tested
		self.containment_residual = containment_residual
		self.tolerance = tolerance

	@property
	def passed(self) -> bool:
		return self.recovery_residual < self.tolerance and self.containment_residual < self.tolerance

	def as_dict(self) -> dict[str, Any]:
		return {
			'check': "vav_surjectivity",
			'word': str(self.word),
			'n': len(self.word),
			'recovered': self.recovered,
			'recovery_residual': self.recovery_residual,
			'words_tested': self.words_tested,
			'containment_residual': self.containment_residual,
			'tolerance': self.tolerance,
		}


def _best_letter(space: FreeFockSpace, label: str, score: Any, what: str) -> AlgebraElement:
	candidates = space.factor(label).frame_elements()[1:]
	values = [abs(score(e)) for e in candidates]
	best = int(np.argmax(values)) if values else -1
	if best < 0 or values[best] <= space.tolerances.pos:
		raise WitnessConstructionError(f"no centred element of {label!r} has {what} above {space.tolerances.pos}")
	return candidates[best]


def _span_distance(target: np.ndarray, basis: np.ndarray) -> float:
	coefficients, *_ = scipy.linalg.lstsq(basis, target.ravel())
	distance = float(np.linalg.norm(basis @ coefficients - target.ravel()))
	return distance / max(1.0, float(np.linalg.norm(target)))


def vav_surjectivity(isometry: CompressionIsometry, rng: Optional[np.random.Generator]=None, words: int=50) -> SurjectivityReport:
	"""
		Check that V* A V = A_{ι_n}.

		Recovery: for every centred frame element b of A_{ι_n}, pick centred letters a_j, a_{2n-j} of ι_j with ⟨a_j ξ, ζ_j⟩ ≠ 0 and ⟨a_{2n-j} ζ_j, ξ⟩ ≠ 0, compress a_1 ... a_{n-1} b a_{n+1} ... a_{2n-1} and divide by the closed-form scalar; the result must be π(b). The unit is recovered as V*V.

		Containment: compress `words` random products of at most N - n letters and measure their distance to the span of π(A_{ι_n}).

		Raises
		------
		- `TruncationError` if 2n - 1 exceeds the depth
		- `WitnessConstructionError` if no centred element pairs with some ζ_j
	"""
	space = isometry.space
	n = isometry.n
	required = _required_depth(n, 2 * n - 1)
	if required > space.depth:
		raise TruncationError(f"recovering A_{isometry.target} through a word of length {n} needs depth {required}: got {space.depth}", required_depth=required)
	target = space.factor(isometry.target)

	left = []
	right = []
	for j, (label, zeta) in enumerate(zip(isometry.word.labels[:-1], isometry.zetas)):
		left.append(Letter(label, _best_letter(space, label, lambda e: _bra_xi(label, space, e, zeta), f"⟨aξ, ζ_{j + 1}⟩")))
		right.append(Letter(label, _best_letter(space, label, lambda e: _ket_xi(label, space, e, zeta), f"⟨aζ_{j + 1}, ξ⟩")))

	recovery = float(np.linalg.norm((isometry.matrix.conj().T @ isometry.matrix).toarray() - np.eye(target.dim), 2))
	recovered = 1
	for b in target.frame_elements()[1:]:
		letters = left + [Letter(isometry.target, b)] + list(reversed(right))
		case = lemma_value(isometry, letters)
		if case.branch != LemmaBranch.SCALAR_TARGET or abs(case.scalar) <= space.tolerances.pos:
			raise WitnessConstructionError(f"witness letters for {isometry.word} do not give a non-zero scalar: {case!r}")
		compressed = compress(isometry, _word_operator(space, letters))
		recovery = max(recovery, float(np.linalg.norm(compressed / case.scalar - target.rep(b), 2)))
		recovered += 1

	rng = np.random.default_rng(0) if rng is None else rng
	basis = np.column_stack([target.rep(u).ravel() for u in target.algebra.basis()])
	containment = 0.0
	max_length = space.depth - n
	tested = 0
	if max_length >= 1:
		for _ in range(words):
			length = int(rng.integers(1, max_length + 1))
			letters = []
			previous = None
			for _ in range(length):
				choices = [label for label in space.labels if label != previous] or list(space.labels)
				label = choices[int(rng.integers(len(choices)))]
				letters.append(Letter(label, space.factor(label).algebra.random_element(rng)))
				previous = label
			compressed = compress(isometry, _word_operator(space, letters))
			containment = max(containment, _span_distance(compressed, basis))
			tested += 1

	report = SurjectivityReport(isometry.word, recovered, recovery, tested, containment, SURJECTIVITY_TOLERANCE)
	_logger.debug("surjectivity for %s: recovery %.3e, containment %.3e over %d words", isometry.word, recovery, containment, tested)
	return report


class FaithfulnessWitness(Report):
	"""
		Result of a witness scan: the first vector η, in canonical order, with ⟨aη, η⟩ above the positivity threshold.

		If a witness is found in a summand of length n ≥ 1, `chain_left` and `chain_right` are ⟨a Vξ, Vξ⟩ and ⟨a(ζ_1 ⊗ ... ⊗ ζ_{n-1}), ζ_1 ⊗ ... ⊗ ζ_{n-1}⟩ for the isometry V built from the components of η, and `compressed_norm` is ‖V* a V‖.
	"""

	__slots__ = (
		'found',
		'word',
		'multi_index',
		'value',
		'threshold',
		'max_scanned',
		'scanned',
		'scan_length',
		'support_word',
		'chain_left',
		'chain_right',
		'compressed_norm',
	)

	def __init__(
		self,
		found: bool,
		word: Optional[Word],
		multi_index: Optional[tuple[int, ...]],
		value: float,
		threshold: float,
		max_scanned: float,
		scanned: int,
		scan_length: int,
		support_word: Optional[Word],
		chain_left: Optional[complex]=None,
		chain_right: Optional[complex]=None,
		compressed_norm: Optional[float]=None,
	):
		self.found = found
		self.word = word
		self.multi_index = multi_index
		self.value = value
		self.threshold = threshold
		self.max_scanned = max_scanned
		self.scanned = scanned
		self.scan_length = scan_length
		self.support_word = support_word
		self.chain_left = chain_left
		self.chain_right = chain_right
		self.compressed_norm = compressed_norm

	@property
	def numerically_zero(self) -> bool:
		return not self.found

	@property
	def chain_residual(self) -> Optional[float]:
		if self.chain_left is None or self.chain_right is None:
			return None
		return abs(self.chain_left - self.chain_right)

	@property
	def passed(self) -> bool:
		return self.found

	def as_dict(self) -> dict[str, Any]:
		result: dict[str, Any] = {
			'check': "faithfulness_witness",
			'verdict': "witness" if self.found else "numerically_zero",
			'word': None if self.word is None else str(self.word),
			'multi_index': None if self.multi_index is None else list(self.multi_index),
			'value': self.value,
			'threshold': self.threshold,
			'max_scanned': self.max_scanned,
			'scanned': self.scanned,
			'scan_length': self.scan_length,
			'support_word': None if self.support_word is None else str(self.support_word),
			'chain_residual': self.chain_residual,
			'compressed_norm': self.compressed_norm,
		}
		if self.chain_left is not None:
			result.update(complex_fields(self.chain_left, "chain_left"))
		return result


_DENSE_NORM_LIMIT: Final = 64
"""Largest dimension at which `operator_norm()` takes the norm of the dense matrix instead of a sparse singular value estimate"""


def operator_norm(matrix: Any) -> float:
	"""
		The operator norm, i.e. the largest singular value, of a dense or sparse matrix.

		Small matrices are densified. Larger ones go through ARPACK with a fixed start vector, so the estimate is reproducible.
	"""
	matrix = scipy.sparse.csr_matrix(matrix, dtype=np.complex128)
	if matrix.nnz == 0:
		return 0.0
	size = min(matrix.shape)
	if size <= _DENSE_NORM_LIMIT:
		return float(np.linalg.norm(matrix.toarray(), 2))
	sigma = scipy.sparse.linalg.svds(matrix, k=1, v0=np.ones(size, dtype=np.complex128), return_singular_vectors=False)
	return float(sigma[0])


def witness_scan(space: FreeFockSpace, operator: RepOperator, max_length: Optional[int]=None) -> FaithfulnessWitness:
	"""
		Scan ξ and then the product basis vectors of summands of length at most `max_length`, in canonical order, for the first η with ⟨aη, η⟩ above `pos` · ‖a‖, with ‖a‖ the operator norm.

		`operator` is taken to be positive. On a positive operator, ⟨aη, η⟩ = 0 on a spanning set of a summand forces p_w a p_w = 0, so the scan finds the least summand on which a is non-zero.

		Parameters
		----------
		`max_length`
		: longest word scanned; defaults to the longest word on which `operator` is exact

		Raises
		------
		`TruncationError` if no word length is exact for `operator`
	"""
	exact_length = space.depth - operator.letters // 2
	if max_length is None:
		max_length = exact_length
	if max_length < 0 or max_length > exact_length:
		raise TruncationError(
			f"scanning words of length {max_length} for a product of {operator.letters} letters needs depth {max_length + operator.letters // 2}: got {space.depth}",
			required_depth=max(max_length, 0) + operator.letters // 2,
		)
	threshold = space.tolerances.pos * operator_norm(operator.matrix)
	diagonal = operator.matrix.diagonal().real
	stop = max(space.block_slice(w).stop for w in space.words if len(w) <= max_length)
	scanned = diagonal[:stop]
	hits = np.flatnonzero(scanned > threshold)

	support_word = None
	for w, norm in space.support_profile(operator):
		if len(w) > max_length:
			break
		if norm > threshold:
			support_word = w
			break

	max_scanned = float(scanned.max(initial=0))
	if len(hits) == 0:
		_logger.info("no witness among %d vectors: max value %.3e below threshold %.3e", stop, max_scanned, threshold)
		return FaithfulnessWitness(False, None, None, max_scanned, threshold, max_scanned, stop, max_length, support_word)

	coordinate = int(hits[0])
	word, multi_index = space.multi_index(coordinate)
	value = float(diagonal[coordinate])
	if len(word) == 0:
		return FaithfulnessWitness(True, word, multi_index, value, threshold, max_scanned, stop, max_length, support_word)

	zetas = []
	for label, i in zip(word.labels[:-1], multi_index[:-1]):
		zeta = np.zeros(space.factor(label).dim, dtype=np.complex128)
		zeta[i + 1] = 1
		zetas.append((label, zeta))
	isometry = CompressionIsometry(space, zetas, word[-1])
	compressed = (isometry.matrix.conj().T @ operator.matrix @ isometry.matrix).toarray()
	head = space.product_vector(word[:-1], [z for _, z in zetas])
	chain_left = complex(compressed[0, 0])
	chain_right = complex(np.vdot(head, operator.matrix @ head))
	return FaithfulnessWitness(
		True, word, multi_index, value, threshold, max_scanned, stop, max_length, support_word,
		chain_left, chain_right, float(np.linalg.norm(compressed, 2)),
	)


def faithfulness_witness(space: FreeFockSpace, x: NCPoly) -> FaithfulnessWitness:
	"""
		Look for a witness that the free product state does not vanish on a = x* x.

		Since the free product of faithful states is faithful, for x ≠ 0 the witness is ξ itself, with value φ(x* x) = ‖xξ‖².

		Raises
		------
		`TruncationError` if the degree of x exceeds the depth

		Examples
		--------
		```python
		faithfulness_witness(space, NCPoly.constant(1)).value  # 1.0, at the vacuum
		```
	"""
	if x.degree > space.depth:
		raise TruncationError(f"x* x of degree {2 * x.degree} is not exact on any word at depth {space.depth}", required_depth=x.degree)
	operator = represent_poly(space, x.adjoint() * x)
	return witness_scan(space, operator)
