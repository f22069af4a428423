"""
	The truncated free product Hilbert space

	ℋ_N = Cξ ⊕ ⊕ H°_{ι_1} ⊗ ... ⊗ H°_{ι_n}   (1 ≤ n ≤ N, ι_j ≠ ι_{j+1})

	with its word bookkeeping, coordinate layout, and summand projections.

	Coordinates are laid out word by word in canonical order: by length, then lexicographically in factor order. Within the block of a word, the tensor product is laid out row-major with letters from left to right, so that the leftmost letter is the slowest index.
"""

from __future__ import annotations

import functools
import logging
import math
from collections.abc import Hashable, Iterable, Iterator, Sequence
from typing import Any, Optional, Union

import numpy as np
import scipy.sparse
import scipy.sparse.linalg

from . import _tolerances
from ._tolerances import Tolerances
from .errors import StructuralError, ValidationError
from .gns import GnsSpace


__all__ = (
	'Word',
	'FreeFockSpace',
	'SummandProjection',
	'enumerate_words',
	'build_space',
)


_logger = logging.getLogger(__name__)


@functools.total_ordering
class Word(Hashable, Sequence[str]):
	"""
		An immutable alternating word (ι_1, ..., ι_n) of factor labels, indexing one summand of the free product space.

		The empty word is the vacuum word, whose summand is Cξ.

		Words are ordered by length and then by their labels as strings. This is the canonical order of `enumerate_words()` when the labels are given sorted.

		Examples
		--------
		```python
		Word(["a", "b", "a"])
		Word([])               # vacuum
		Word(["a", "a"])       # StructuralError
		```
	"""

	__slots__ = ('_labels',)

	def __init__(self, labels: Iterable[str]=()):
		"""
			Raises
			------
			- `TypeError` if a label is not a str
			- `StructuralError` if two consecutive labels are equal
		"""
		labels = tuple(labels)
		for label in labels:
			if not isinstance(label, str):
				raise TypeError(f"word labels must be str: {label} ({type(label)})")
		for left, right in zip(labels, labels[1:]):
			if left == right:
				raise StructuralError(f"word is not alternating: {list(labels)}")
		self._labels: tuple[str, ...] = labels

	@property
	def labels(self) -> tuple[str, ...]:
		return self._labels

	@property
	def is_vacuum(self) -> bool:
		return len(self._labels) == 0

	def __getitem__(self, index: Any) -> Any:
		"""
			Get a label, or a slice of the word as a new Word.

			Usage: <code><var>w</var>[<var>i</var>]</code>, <code><var>w</var>[1:]</code>
		"""
		if isinstance(index, slice):
			return Word(self._labels[index])
		return self._labels[index]

	def __len__(self) -> int:
		return len(self._labels)

	def __iter__(self) -> Iterator[str]:
		return iter(self._labels)

	def __hash__(self) -> int:
		return hash(self._labels)

	def __eq__(self, other: object) -> bool:
		if isinstance(other, Word):
			return self._labels == other._labels
		if isinstance(other, tuple):
			return self._labels == other
		return NotImplemented

	def __lt__(self, other: object) -> bool:
		"""
			Usage: <code><var>w1</var> < <var>w2</var></code>
		"""
		if not isinstance(other, Word):
			return NotImplemented
		return (len(self._labels), self._labels) < (len(other._labels), other._labels)

	def __str__(self) -> str:
		"""
			Return the word as labels joined by dots, or "ε" for the vacuum.
		"""
		return ".".join(self._labels) if self._labels else "ε"

	def __repr__(self) -> str:
		return f"Word({list(self._labels)!r})"


def enumerate_words(labels: Sequence[str], depth: int) -> list[Word]:
	"""
		All alternating words over `labels` of length at most `depth`, including the vacuum, in canonical order.

		Canonical order is by length, then lexicographic with respect to the order of `labels`.

		Raises
		------
		- `ValueError` if `depth` is negative
		- `StructuralError` if `labels` contains duplicates

		Examples
		--------
		```python
		[str(w) for w in enumerate_words(["a", "b"], 2)]  # ['ε', 'a', 'b', 'a.b', 'b.a']
		```
	"""
	if depth < 0:
		raise ValueError(f"depth must be non-negative: {depth}")
	if len(set(labels)) != len(labels):
		raise StructuralError(f"factor labels must be distinct: {list(labels)}")
	words = [()]
	layer: list[tuple[str, ...]] = [()]
	for _ in range(depth):
		layer = [w + (label,) for w in layer for label in labels if len(w) == 0 or w[-1] != label]
		if len(layer) == 0:
			break
		words.extend(layer)
	return [Word(w) for w in words]


class SummandProjection:
	"""
		The orthogonal projection p_w of the free product space onto the summand of a word.
	"""

	__slots__ = ('_space', '_word', '_slice')

	def __init__(self, space: FreeFockSpace, word: Word):
		self._space: FreeFockSpace = space
		self._word: Word = word
		self._slice: slice = space.block_slice(word)

	@property
	def space(self) -> FreeFockSpace:
		return self._space

	@property
	def word(self) -> Word:
		return self._word

	@property
	def rank(self) -> int:
		return self._slice.stop - self._slice.start

	@property
	def matrix(self) -> scipy.sparse.csr_matrix:
		"""Sparse diagonal 0/1 matrix of the projection"""
		diagonal = np.zeros(self._space.total_dim)
		diagonal[self._slice] = 1
		return scipy.sparse.diags(diagonal, format='csr')

	def apply(self, vector: Any) -> np.ndarray:
		vector = np.asarray(vector, dtype=np.complex128)
		result = np.zeros_like(vector)
		result[self._slice] = vector[self._slice]
		return result

	def __call__(self, vector: Any) -> np.ndarray:
		return self.apply(vector)

	def __repr__(self) -> str:
		return f"SummandProjection({self._word!r})"


class FreeFockSpace:
	"""
		The truncated free product of the GNS spaces of its factors, keeping words of length at most `depth`.

		Each factor is registered under the label of its algebra. The space inherits the tolerances of its first factor unless others are given.
	"""

	__slots__ = (
		'_factors',
		'_depth',
		'_words',
		'_offsets',
		'_shapes',
		'_index',
		'_total_dim',
		'_tolerances',
	)

	def __init__(self, factors: Sequence[GnsSpace], depth: int, allow_trivial: bool=False, tolerances: Optional[Tolerances]=None):
		"""
			Parameters
			----------
			`factors`
			: GNS spaces of the factor algebras, with distinct labels

			`depth`
			: truncation depth N ≥ 1

			`allow_trivial`
			: if True, factors with H° = 0 (that is, the algebra C) are dropped instead of rejected, since free product with C changes nothing

			`tolerances`
			: overrides the tolerances inherited from the factors

			Raises
			------
			- `ValueError` if `depth` < 1
			- `StructuralError` if there are no factors, labels repeat, or a factor has H° = 0 and `allow_trivial` is False
		"""
		if not isinstance(depth, int) or isinstance(depth, bool):
			raise TypeError(f"depth must be an int: {depth} ({type(depth)})")
		if depth < 1:
			raise ValueError(f"depth must be at least 1: {depth}")
		factors = list(factors)
		if len(factors) == 0:
			raise StructuralError("a free product needs at least one factor")
		kept = []
		for factor in factors:
			if not isinstance(factor, GnsSpace):
				raise TypeError(f"factor must be a GnsSpace: {factor} ({type(factor)})")
			if factor.complement_dim == 0:
				if not allow_trivial:
					raise StructuralError(f"factor {factor.label!r} is trivial (H° = 0); free product factors must be different from C")
				_logger.info("dropping trivial factor %r", factor.label)
				continue
			kept.append(factor)
		if len(kept) == 0:
			raise StructuralError("every factor is trivial")

		self._factors: dict[str, GnsSpace] = {}
		for factor in kept:
			if factor.label in self._factors:
				raise StructuralError(f"factor labels must be distinct: {factor.label!r} repeats")
			self._factors[factor.label] = factor
		self._depth: int = depth
		self._tolerances: Tolerances = _tolerances.resolve(tolerances, kept[0].tolerances)

		self._words: tuple[Word, ...] = tuple(enumerate_words(list(self._factors), depth))
		self._index: dict[Word, int] = {w: i for i, w in enumerate(self._words)}
		self._shapes: tuple[tuple[int, ...], ...] = tuple(
			tuple(self._factors[label].complement_dim for label in w) for w in self._words
		)
		sizes = [math.prod(shape) for shape in self._shapes]
		self._offsets: tuple[int, ...] = tuple(np.concatenate([[0], np.cumsum(sizes)]).astype(int).tolist())
		self._total_dim: int = self._offsets[-1]

		_logger.debug("built free product of %s at depth %d: %d words, dimension %d", list(self._factors), depth, len(self._words), self._total_dim)

	@property
	def factors(self) -> tuple[GnsSpace, ...]:
		return tuple(self._factors.values())

	@property
	def labels(self) -> tuple[str, ...]:
		return tuple(self._factors)

	@property
	def depth(self) -> int:
		return self._depth

	@property
	def words(self) -> tuple[Word, ...]:
		"""Read-only words of the space in canonical order, starting with the vacuum"""
		return self._words

	@property
	def total_dim(self) -> int:
		return self._total_dim

	@property
	def tolerances(self) -> Tolerances:
		return self._tolerances

	@property
	def xi(self) -> np.ndarray:
		"""The vacuum vector, which is always coordinate 0"""
		v = np.zeros(self._total_dim, dtype=np.complex128)
		v[0] = 1
		return v

	def factor(self, label: str) -> GnsSpace:
		"""
			Raises
			------
			`StructuralError` if no factor has this label
		"""
		try:
			return self._factors[label]
		except KeyError:
			raise StructuralError(f"unknown factor {label!r}: expected one of {list(self._factors)}") from None

	def _word_position(self, word: Union[Word, Sequence[str]]) -> int:
		if not isinstance(word, Word):
			word = Word(word)
		try:
			return self._index[word]
		except KeyError:
			raise StructuralError(f"word {word} is not in the space (factors {list(self._factors)}, depth {self._depth})") from None

	def contains(self, word: Union[Word, Sequence[str]]) -> bool:
		try:
			self._word_position(word)
		except StructuralError:
			return False
		return True

	def word_shape(self, word: Union[Word, Sequence[str]]) -> tuple[int, ...]:
		"""Shape (dim H°_{ι_1}, ..., dim H°_{ι_n}) of the tensor block of `word`"""
		return self._shapes[self._word_position(word)]

	def block_slice(self, word: Union[Word, Sequence[str]]) -> slice:
		"""
			Coordinate range of the summand of `word`.

			Raises
			------
			`StructuralError` if `word` is not a word of the space
		"""
		i = self._word_position(word)
		return slice(self._offsets[i], self._offsets[i + 1])

	def block_size(self, word: Union[Word, Sequence[str]]) -> int:
		s = self.block_slice(word)
		return s.stop - s.start

	def word_at(self, coordinate: int) -> Word:
		"""The word whose summand contains a coordinate"""
		if not 0 <= coordinate < self._total_dim:
			raise IndexError(f"coordinate out of range: {coordinate}")
		return self._words[int(np.searchsorted(self._offsets, coordinate, side='right')) - 1]

	def basis_index(self, word: Union[Word, Sequence[str]], multi_index: Sequence[int]) -> int:
		"""
			Coordinate of the product basis vector e_{i_1} ⊗ ... ⊗ e_{i_n}, where i_j indexes H°_{ι_j} from 0.

			Examples
			--------
			```python
			space.basis_index([], [])  # 0, the vacuum
			```
		"""
		block = self.block_slice(word)
		shape = self.word_shape(word)
		if len(multi_index) != len(shape):
			raise StructuralError(f"word {Word(word)} needs {len(shape)} indices: got {len(multi_index)}")
		if len(shape) == 0:
			return block.start
		return block.start + int(np.ravel_multi_index(tuple(multi_index), shape))

	def multi_index(self, coordinate: int) -> tuple[Word, tuple[int, ...]]:
		"""Inverse of `basis_index()`"""
		word = self.word_at(coordinate)
		shape = self.word_shape(word)
		if len(shape) == 0:
			return word, ()
		local = coordinate - self.block_slice(word).start
		return word, tuple(int(i) for i in np.unravel_index(local, shape))

	def projection(self, word: Union[Word, Sequence[str]]) -> SummandProjection:
		"""
			The projection p_w onto the summand of `word`.

			Raises
			------
			`StructuralError` if `word` is not a word of the space
		"""
		if not isinstance(word, Word):
			word = Word(word)
		return SummandProjection(self, word)

	def product_vector(self, word: Union[Word, Sequence[str]], components: Sequence[Any]) -> np.ndarray:
		"""
			The elementary tensor ζ_1 ⊗ ... ⊗ ζ_n in the summand of `word`.

			Each component is a vector of the full GNS space of its letter, in that space's frame, and must be orthogonal to ξ.

			Raises
			------
			- `StructuralError` if the number of components or a component length is wrong
			- `ValidationError` if a component has a ξ-coordinate larger than the `norm` tolerance

			Examples
			--------
			```python
			space.product_vector([], [])  # ξ
			```
		"""
		if not isinstance(word, Word):
			word = Word(word)
		block = self.block_slice(word)
		if len(components) != len(word):
			raise StructuralError(f"word {word} needs {len(word)} components: got {len(components)}")
		tensor = np.ones(1, dtype=np.complex128)
		for j, (label, component) in enumerate(zip(word, components)):
			factor = self.factor(label)
			component = np.asarray(component, dtype=np.complex128)
			if component.shape != (factor.dim,):
				raise StructuralError(f"component {j} must be a vector of length {factor.dim} in the GNS space of {label!r}: got shape {component.shape}")
			if abs(component[0]) > self._tolerances.norm:
				raise ValidationError(f"component {j} is not in H° of {label!r}: ξ-coordinate {abs(component[0]):.3e}")
			tensor = np.kron(tensor, component[1:])
		v = np.zeros(self._total_dim, dtype=np.complex128)
		v[block] = tensor
		return v

	def support_profile(self, operator: Any) -> list[tuple[Word, float]]:
		"""
			The Frobenius norm of p_w T p_w for every word w, in canonical order.

			`operator` is a `RepOperator` or anything scipy.sparse accepts as a matrix.
		"""
		matrix = scipy.sparse.csr_matrix(getattr(operator, 'matrix', operator))
		if matrix.shape != (self._total_dim, self._total_dim):
			raise StructuralError(f"operator must be {self._total_dim}×{self._total_dim}: got {matrix.shape}")
		profile = []
		for i, w in enumerate(self._words):
			s = slice(self._offsets[i], self._offsets[i + 1])
			profile.append((w, float(scipy.sparse.linalg.norm(matrix[s, s]))))
		return profile

	def __repr__(self) -> str:
		return f"FreeFockSpace({list(self._factors)!r}, depth={self._depth})"


def build_space(factors: Sequence[GnsSpace], depth: int, allow_trivial: bool=False, tolerances: Optional[Tolerances]=None) -> FreeFockSpace:
	"""Equivalent to `FreeFockSpace(factors, depth, allow_trivial, tolerances)`"""
	return FreeFockSpace(factors, depth, allow_trivial, tolerances)
