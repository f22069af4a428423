"""
	The left action of each factor algebra on the truncated free product space, noncommutative polynomials in the factors, the free product state, and its moments.
"""

from __future__ import annotations

import itertools
import logging
import numbers
from collections.abc import Iterable, Sequence
from typing import Any, NamedTuple, Optional, Union

import numpy as np
import scipy.sparse

from .blockalg import AlgebraElement
from .errors import StructuralError, TruncationError
from .freefock import FreeFockSpace, Word
from .report import Report


__all__ = (
	'Letter',
	'NCPoly',
	'RepOperator',
	'represent',
	'represent_poly',
	'free_state',
	'moment',
	'FreenessReport',
	'freeness_report',
	'RestrictionReport',
	'restriction_report',
)


_logger = logging.getLogger(__name__)


class Letter(NamedTuple):
	"""An element of one factor algebra, tagged with the label of the factor"""

	label: str
	element: AlgebraElement

	def adjoint(self) -> Letter:
		return Letter(self.label, self.element.adjoint())


class NCPoly:
	"""
		An immutable noncommutative polynomial Σ c_t a_{t,1} a_{t,2} ... a_{t,m_t} in letters from the factor algebras.

		Products are formal: consecutive letters from the same factor are kept apart, so that `degree` is additive under multiplication.

		Supports `+`, `-`, `*` (polynomial product or scalar multiple) and `adjoint()`.
	"""

	__slots__ = ('_terms',)

	def __init__(self, terms: Iterable[tuple[complex, Sequence[Letter]]]=()):
		"""
			Parameters
			----------
			`terms`
			: pairs of a complex coefficient and a sequence of letters; the empty sequence is the unit

			Examples
			--------
			```python
			NCPoly([(1, [Letter("p", p), Letter("q", q)])])  # pq
			NCPoly.constant(1)
			```
		"""
		normalised = []
		for coefficient, word in terms:
			if not isinstance(coefficient, numbers.Number):
				raise TypeError(f"coefficient must be a number: {coefficient} ({type(coefficient)})")
			letters = tuple(Letter(*letter) for letter in word)
			for letter in letters:
				if not isinstance(letter.element, AlgebraElement):
					raise TypeError(f"letter element must be an AlgebraElement: {letter.element} ({type(letter.element)})")
			normalised.append((complex(coefficient), letters))
		self._terms: tuple[tuple[complex, tuple[Letter, ...]], ...] = tuple(normalised)

	@staticmethod
	def constant(value: complex=1) -> NCPoly:
		return NCPoly([(value, ())])

	@staticmethod
	def letter(label: str, element: AlgebraElement) -> NCPoly:
		"""The polynomial consisting of a single letter"""
		return NCPoly([(1, (Letter(label, element),))])

	@staticmethod
	def word(letters: Sequence[Union[Letter, tuple[str, AlgebraElement]]], coefficient: complex=1) -> NCPoly:
		"""The monomial c·a_1 ... a_m"""
		return NCPoly([(coefficient, letters)])

	@staticmethod
	def random(space: FreeFockSpace, degree: int, rng: np.random.Generator, terms: int=3) -> NCPoly:
		"""
			A random polynomial with `terms` monomials of degree at most `degree` in random elements of the factors of `space`.

			Letters are not centred and consecutive letters may come from the same factor. The first monomial has exactly degree `degree`.
		"""
		labels = space.labels
		result = []
		for t in range(terms):
			length = degree if t == 0 else int(rng.integers(0, degree + 1))
			letters = []
			for _ in range(length):
				label = labels[int(rng.integers(len(labels)))]
				letters.append(Letter(label, space.factor(label).algebra.random_element(rng)))
			coefficient = complex(rng.standard_normal(), rng.standard_normal())
			result.append((coefficient, letters))
		return NCPoly(result)

	@property
	def terms(self) -> tuple[tuple[complex, tuple[Letter, ...]], ...]:
		return self._terms

	@property
	def degree(self) -> int:
		"""Read-only length of the longest monomial; 0 for constants and for the empty polynomial"""
		return max((len(word) for _, word in self._terms), default=0)

	def adjoint(self) -> NCPoly:
		"""
			Formal adjoint: conjugate the coefficients, reverse the words and take the adjoint of every letter.
		"""
		return NCPoly([
			(c.conjugate(), tuple(letter.adjoint() for letter in reversed(word)))
			for c, word in self._terms
		])

	def __add__(self, other: NCPoly) -> NCPoly:
		if not isinstance(other, NCPoly):
			return NotImplemented
		return NCPoly(self._terms + other._terms)

	def __sub__(self, other: NCPoly) -> NCPoly:
		if not isinstance(other, NCPoly):
			return NotImplemented
		return self + (-1) * other

	def __mul__(self, other: Union[NCPoly, complex]) -> NCPoly:
		"""
			Formal product, or scalar multiple.

			Usage: <code><var>p</var> * <var>q</var></code>, <code><var>p</var> * 2</code>
		"""
		if isinstance(other, NCPoly):
			return NCPoly([
				(c1 * c2, w1 + w2)
				for (c1, w1), (c2, w2) in itertools.product(self._terms, other._terms)
			])
		if isinstance(other, numbers.Number):
			return NCPoly([(c * complex(other), w) for c, w in self._terms])
		return NotImplemented

	def __rmul__(self, other: complex) -> NCPoly:
		if isinstance(other, numbers.Number):
			return NCPoly([(complex(other) * c, w) for c, w in self._terms])
		return NotImplemented

	def __len__(self) -> int:
		"""Number of terms"""
		return len(self._terms)

	def __repr__(self) -> str:
		terms = " + ".join(
			f"({c:.6g})" + "".join(f"·{letter.label}" for letter in word)
			for c, word in self._terms
		)
		return f"NCPoly({terms or '0'})"


class RepOperator:
	"""
		An operator on a truncated free product space, stored as a sparse matrix, together with the number of letters it was built from.

		A single letter is the compression P_N a P_N, which is exact. A product of k letters computed on the truncation agrees with the compression of the true product on all entries between words of length at most N - k // 2; `exact_in_degree` reports the coarser bound ⌈k / 2⌉, which is what is lost uniformly.

		Supports `@` (operator product), `+`, `-`, scalar `*` and `adjoint()`.
	"""

	__slots__ = ('_space', '_matrix', '_letters')

	def __init__(self, space: FreeFockSpace, matrix: Any, letters: int=0):
		if not isinstance(space, FreeFockSpace):
			raise TypeError(f"space must be a FreeFockSpace: {space} ({type(space)})")
		matrix = scipy.sparse.csr_matrix(matrix, dtype=np.complex128)
		if matrix.shape != (space.total_dim, space.total_dim):
			raise StructuralError(f"operator on {space!r} must be {space.total_dim}×{space.total_dim}: got {matrix.shape}")
		self._space: FreeFockSpace = space
		self._matrix: scipy.sparse.csr_matrix = matrix
		self._letters: int = letters

	@staticmethod
	def identity(space: FreeFockSpace) -> RepOperator:
		return RepOperator(space, scipy.sparse.identity(space.total_dim, dtype=np.complex128, format='csr'), 0)

	@property
	def space(self) -> FreeFockSpace:
		return self._space

	@property
	def matrix(self) -> scipy.sparse.csr_matrix:
		return self._matrix

	@property
	def letters(self) -> int:
		"""Read-only number of letters in the longest product this operator was built from"""
		return self._letters

	@property
	def exact_in_degree(self) -> int:
		"""
			Read-only d such that matrix entries between words of length at most N - d are those of the untruncated operator.

			Examples
			--------
			```python
			RepOperator.identity(space).exact_in_degree  # 0
			represent(space, "a", a).exact_in_degree     # 1
			```
		"""
		return (self._letters + 1) // 2

	def toarray(self) -> np.ndarray:
		return self._matrix.toarray()

	def apply(self, vector: Any) -> np.ndarray:
		return self._matrix @ np.asarray(vector, dtype=np.complex128)

	def adjoint(self) -> RepOperator:
		return RepOperator(self._space, self._matrix.conj().T, self._letters)

	def _check(self, other: RepOperator) -> None:
		if other._space is not self._space:
			raise StructuralError(f"operators act on different spaces: {self._space!r} and {other._space!r}")

	def __matmul__(self, other: RepOperator) -> RepOperator:
		if not isinstance(other, RepOperator):
			return NotImplemented
		self._check(other)
		return RepOperator(self._space, self._matrix @ other._matrix, self._letters + other._letters)

	def __add__(self, other: RepOperator) -> RepOperator:
		if not isinstance(other, RepOperator):
			return NotImplemented
		self._check(other)
		return RepOperator(self._space, self._matrix + other._matrix, max(self._letters, other._letters))

	def __sub__(self, other: RepOperator) -> RepOperator:
		if not isinstance(other, RepOperator):
			return NotImplemented
		self._check(other)
		return RepOperator(self._space, self._matrix - other._matrix, max(self._letters, other._letters))

	def __mul__(self, other: complex) -> RepOperator:
		if isinstance(other, numbers.Number):
			return RepOperator(self._space, self._matrix * complex(other), self._letters)
		return NotImplemented

	def __rmul__(self, other: complex) -> RepOperator:
		return self.__mul__(other)

	def __repr__(self) -> str:
		return f"RepOperator({self._space!r}, nnz={self._matrix.nnz}, letters={self._letters})"


def represent(space: FreeFockSpace, label: str, element: AlgebraElement) -> RepOperator:
	"""
		The operator of `element` of factor `label` acting on the left of the truncated space.

		For every word u not starting with `label`, the pair of summands u and (label)u is a copy of H ⊗ H_u, with the summand u as Cξ ⊗ H_u, and the element acts there as π(a) ⊗ 1. Words u of full length have no partner; there only the ξξ-entry φ(a) survives the truncation.

		Raises
		------
		`StructuralError` if `label` is not a factor of `space` or `element` is not in its algebra
	"""
	factor = space.factor(label)
	rep = factor.rep(element)
	dim = factor.dim
	rows = []
	cols = []
	data = []
	for u in space.words:
		if len(u) > 0 and u[0] == label:
			continue
		block = space.block_slice(u)
		size = block.stop - block.start
		if len(u) == space.depth:
			rows.append(np.arange(block.start, block.stop))
			cols.append(np.arange(block.start, block.stop))
			data.append(np.full(size, rep[0, 0]))
			continue
		extended = space.block_slice(Word((label,) + u.labels))
		# local index k * size + t of H ⊗ H_u: k = 0 is the summand u, k ≥ 1 is the summand (label)u
		local = np.arange(dim * size)
		placement = np.where(local < size, block.start + local, extended.start + local - size)
		piece = scipy.sparse.kron(scipy.sparse.csr_matrix(rep), scipy.sparse.identity(size), format='coo')
		rows.append(placement[piece.row])
		cols.append(placement[piece.col])
		data.append(piece.data)
	matrix = scipy.sparse.coo_matrix(
		(np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))),
		shape=(space.total_dim, space.total_dim),
	).tocsr()
	matrix.eliminate_zeros()
	return RepOperator(space, matrix, 1)


def represent_poly(space: FreeFockSpace, poly: NCPoly) -> RepOperator:
	"""
		The truncated operator of a polynomial, as the sum over its terms of the products of represented letters.
	"""
	total = RepOperator(space, scipy.sparse.csr_matrix((space.total_dim, space.total_dim), dtype=np.complex128), 0)
	cache: dict[int, RepOperator] = {}
	for coefficient, word in poly.terms:
		term = RepOperator.identity(space)
		for letter in word:
			key = id(letter.element)
			if key not in cache:
				cache[key] = represent(space, letter.label, letter.element)
			term = term @ cache[key]
		total = total + coefficient * term
	return total


def free_state(space: FreeFockSpace, operator: RepOperator) -> complex:
	"""
		The free product state ⟨Tξ, ξ⟩.

		Raises
		------
		`StructuralError` if `operator` is on a different space
	"""
	if operator.space is not space:
		raise StructuralError(f"operator on {operator.space!r} given for {space!r}")
	return complex(operator.matrix[0, 0])


def _apply_word(space: FreeFockSpace, word: Sequence[Letter], vector: np.ndarray, cache: dict[int, RepOperator]) -> np.ndarray:
	for letter in reversed(word):
		key = id(letter.element)
		if key not in cache:
			cache[key] = represent(space, letter.label, letter.element)
		vector = cache[key].matrix @ vector
	return vector


def moment(space: FreeFockSpace, poly: NCPoly) -> complex:
	"""
		The free product state of a polynomial, evaluated by applying the letters of each monomial to ξ from right to left.

		A product of m letters applied to ξ never reaches words longer than m, so the result is exact whenever the degree is at most the depth.

		Raises
		------
		`TruncationError` if `poly.degree` exceeds the depth of `space`

		Examples
		--------
		```python
		moment(space, NCPoly.constant(1))  # 1
		```
	"""
	if poly.degree > space.depth:
		raise TruncationError(
			f"moment of degree {poly.degree} is not exact at depth {space.depth}; raise the depth to at least {poly.degree}",
			required_depth=poly.degree,
		)
	cache: dict[int, RepOperator] = {}
	xi = space.xi
	total = 0j
	for coefficient, word in poly.terms:
		total += coefficient * _apply_word(space, word, xi, cache)[0]
	return complex(total)


class FreenessReport(Report):
	"""
		Result of `freeness_report()`: the largest |φ(a_1 ... a_m)| over alternating products of centred frame elements.
	"""

	__slots__ = ('depth', 'max_degree', 'tested', 'expected', 'max_residual', 'worst_word', 'tolerance')

	def __init__(self, depth: int, max_degree: int, tested: int, expected: int, max_residual: float, worst_word: Optional[Word], tolerance: float):
		self.depth = depth
		self.max_degree = max_degree
		self.tested = tested
		self.expected = expected
		self.max_residual = max_residual
		self.worst_word = worst_word
		self.tolerance = tolerance

	@property
	def passed(self) -> bool:
		return self.max_residual < self.tolerance and self.tested == self.expected

	def as_dict(self) -> dict[str, Any]:
		return {
			'check': "freeness",
			'depth': self.depth,
			'max_degree': self.max_degree,
			'tested': self.tested,
			'expected': self.expected,
			'max_residual': self.max_residual,
			'worst_word': None if self.worst_word is None else str(self.worst_word),
			'tolerance': self.tolerance,
		}


def freeness_report(space: FreeFockSpace, max_degree: Optional[int]=None) -> FreenessReport:
	"""
		Check that alternating products of centred elements have vanishing moments, up to `max_degree` letters.

		Every alternating word of labels is combined with every choice of centred frame elements (`GnsSpace.frame_elements()[1:]`), so the number of tested products is Σ_w Π_j dim H°_{ι_j} over words of length 1 to `max_degree`.

		Raises
		------
		`TruncationError` if `max_degree` exceeds the depth of `space`
	"""
	if max_degree is None:
		max_degree = min(6, space.depth)
	if max_degree > space.depth:
		raise TruncationError(
			f"freeness up to degree {max_degree} is not exact at depth {space.depth}",
			required_depth=max_degree,
		)
	operators = {
		label: [represent(space, label, e) for e in space.factor(label).frame_elements()[1:]]
		for label in space.labels
	}
	expected = sum(
		int(np.prod([space.factor(label).complement_dim for label in w]))
		for w in space.words if 1 <= len(w) <= max_degree
	)

	tested = 0
	worst = 0.0
	worst_word: Optional[Word] = None
	# grow words leftwards, reusing a_k ... a_m ξ for every extension a_{k-1}
	stack: list[tuple[Optional[str], tuple[str, ...], np.ndarray]] = [(None, (), space.xi)]
	while stack:
		first, labels, vector = stack.pop()
		for label in space.labels:
			if label == first:
				continue
			for operator in operators[label]:
				extended = operator.matrix @ vector
				tested += 1
				residual = abs(extended[0])
				if residual > worst or worst_word is None:
					worst = float(residual)
					worst_word = Word((label,) + labels)
				if len(labels) + 1 < max_degree:
					stack.append((label, (label,) + labels, extended))

	report = FreenessReport(space.depth, max_degree, tested, expected, worst, worst_word, space.tolerances.free)
	_logger.debug("freeness up to degree %d: %d products, max residual %.3e", max_degree, tested, worst)
	if not report.passed:
		_logger.warning("freeness check failed: residual %.3e at word %s", worst, worst_word)
	return report


class RestrictionReport(Report):
	"""
		Result of `restriction_report()`: the largest |φ(π(u)) - φ_ι(u)| over the matrix units u of every factor.
	"""

	__slots__ = ('max_residual', 'tested', 'tolerance')

	def __init__(self, max_residual: float, tested: int, tolerance: float):
		self.max_residual = max_residual
		self.tested = tested
		self.tolerance = tolerance

	@property
	def passed(self) -> bool:
		return self.max_residual < self.tolerance

	def as_dict(self) -> dict[str, Any]:
		return {
			'check': "state_restriction",
			'tested': self.tested,
			'max_residual': self.max_residual,
			'tolerance': self.tolerance,
		}


def restriction_report(space: FreeFockSpace, tolerance: float=1e-12) -> RestrictionReport:
	"""
		Check that the free product state restricts to the state of each factor.
	"""
	worst = 0.0
	tested = 0
	for factor in space.factors:
		for u in factor.algebra.basis():
			value = free_state(space, represent(space, factor.label, u))
			worst = max(worst, abs(value - factor.state.evaluate(u)))
			tested += 1
	return RestrictionReport(float(worst), tested, tolerance)
