"""
	Brute-force dense reference for the truncated free product.

	The reference keeps its own basis, a sorted list of explicit tensors ((ι_1, i_1), ..., (ι_n, i_n)) with i_j ≥ 1 indexing the frame of H_{ι_j}, and builds every operator entry by entry from the left action rule. Factor representations are recomputed from the states as ⟨a f_l, f_k⟩ = φ(f_k* a f_l) over the frame elements f_k, so nothing but element arithmetic and the GNS frame is shared with the sparse path.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from typing import Any, Final

import numpy as np

from .blockalg import AlgebraElement
from .errors import DimensionLimitError, StructuralError, TruncationError
from .gns import GnsSpace


__all__ = ('DenseSpace', 'DENSE_LIMIT')


_logger = logging.getLogger(__name__)


DENSE_LIMIT: Final = 5000
"""Largest dimension the dense reference will build"""


Tensor = tuple[tuple[str, int], ...]


class DenseSpace:
	"""
		Dense reference model of the free product of `factors` truncated at `depth`.
	"""

	__slots__ = ('_factors', '_depth', '_basis', '_index', '_frames')

	def __init__(self, factors: Sequence[GnsSpace], depth: int, limit: int=DENSE_LIMIT):
		"""
			Raises
			------
			`DimensionLimitError` if the space would have more than `limit` dimensions
		"""
		self._factors: dict[str, GnsSpace] = {g.label: g for g in factors}
		self._depth: int = depth

		basis: list[Tensor] = [()]
		frontier: list[Tensor] = [()]
		for _ in range(depth):
			frontier = [
				t + ((label, i),)
				for t in frontier
				for label, g in self._factors.items()
				if len(t) == 0 or t[-1][0] != label
				for i in range(1, g.dim)
			]
			basis.extend(frontier)
			if len(basis) > limit:
				raise DimensionLimitError(f"dense reference is limited to {limit} dimensions: depth {depth} needs more")
		basis.sort()
		self._basis: list[Tensor] = basis
		self._index: dict[Tensor, int] = {t: i for i, t in enumerate(basis)}
		self._frames: dict[str, list[AlgebraElement]] = {label: g.frame_elements() for label, g in self._factors.items()}
		_logger.debug("dense reference of dimension %d", len(basis))

	@property
	def dim(self) -> int:
		return len(self._basis)

	@property
	def basis(self) -> list[Tensor]:
		return list(self._basis)

	@property
	def xi_index(self) -> int:
		return self._index[()]

	def _factor_matrix(self, label: str, element: AlgebraElement) -> np.ndarray:
		g = self._factors[label]
		frame = self._frames[label]
		state = g.state
		matrix = np.zeros((g.dim, g.dim), dtype=np.complex128)
		for k, fk in enumerate(frame):
			for l, fl in enumerate(frame):
				matrix[k, l] = state.evaluate(fk.adjoint() * element * fl)
		return matrix

	def dense_represent(self, label: str, element: AlgebraElement) -> np.ndarray:
		"""
			The dense matrix of `element` of factor `label`, in the reference basis.

			Raises
			------
			`StructuralError` if `label` is not a factor
		"""
		if label not in self._factors:
			raise StructuralError(f"unknown factor {label!r}")
		r = self._factor_matrix(label, element)
		dim = self._factors[label].dim
		out = np.zeros((self.dim, self.dim), dtype=np.complex128)
		for col, tensor in enumerate(self._basis):
			if len(tensor) > 0 and tensor[0][0] == label:
				i = tensor[0][1]
				rest = tensor[1:]
				out[self._index[rest], col] += r[0, i]
				for k in range(1, dim):
					out[self._index[((label, k),) + rest], col] += r[k, i]
			else:
				out[col, col] += r[0, 0]
				if len(tensor) < self._depth:
					for k in range(1, dim):
						out[self._index[((label, k),) + tensor], col] += r[k, 0]
		return out

	def dense_word(self, letters: Sequence[tuple[str, AlgebraElement]]) -> np.ndarray:
		"""The full product of the dense matrices of `letters`, left to right"""
		product = np.eye(self.dim, dtype=np.complex128)
		for label, element in letters:
			product = product @ self.dense_represent(label, element)
		return product

	def dense_moment(self, terms: Any) -> complex:
		"""
			⟨Pξ, ξ⟩ for a polynomial P, given as an NCPoly or as pairs of coefficient and letters.

			Raises
			------
			`TruncationError` if the degree exceeds the depth
		"""
		terms = getattr(terms, 'terms', terms)
		total = 0j
		x = self.xi_index
		for coefficient, letters in terms:
			if len(letters) > self._depth:
				raise TruncationError(f"dense moment of degree {len(letters)} needs depth {len(letters)}", required_depth=len(letters))
			total += coefficient * self.dense_word(letters)[x, x]
		return complex(total)

	def dense_expectation(self, terms: Any, word: Sequence[str], multi_index: Sequence[int]) -> complex:
		"""
			⟨Pη, η⟩ for the product basis vector η named by `word` and `multi_index` in the layout of a `FreeFockSpace`, where each index counts from 0 within H°.

			Raises
			------
			- `StructuralError` if `word` and `multi_index` do not name a basis vector
			- `TruncationError` if len(`word`) + degree // 2 exceeds the depth
		"""
		terms = getattr(terms, 'terms', terms)
		labels = tuple(word)
		if len(labels) != len(multi_index):
			raise StructuralError(f"multi-index {list(multi_index)} does not fit the word {list(labels)}")
		tensor = tuple((label, int(i) + 1) for label, i in zip(labels, multi_index))
		if tensor not in self._index:
			raise StructuralError(f"no basis vector {list(multi_index)} of the word {list(labels)} in the dense reference")
		required = len(labels) + max((len(letters) for _, letters in terms), default=0) // 2
		if required > self._depth:
			raise TruncationError(f"dense expectation at a word of length {len(labels)} needs depth {required}: got {self._depth}", required_depth=required)
		x = self._index[tensor]
		total = 0j
		for coefficient, letters in terms:
			total += coefficient * self.dense_word(letters)[x, x]
		return complex(total)

	def dense_isometry(self, zetas: Sequence[tuple[str, Any]], target: str) -> np.ndarray:
		"""
			The matrix of V_{(ζ_1, ..., ζ_{n-1}, ι_n)} in the reference basis, built from explicit tensor coefficients.
		"""
		target_dim = self._factors[target].dim
		v = np.zeros((self.dim, target_dim), dtype=np.complex128)
		heads: list[tuple[Tensor, complex]] = [((), 1 + 0j)]
		for label, zeta in zetas:
			zeta = np.asarray(zeta, dtype=np.complex128)
			heads = [
				(t + ((label, i),), c * zeta[i])
				for t, c in heads
				for i in range(1, self._factors[label].dim)
			]
		for t, c in heads:
			v[self._index[t], 0] += c
			for k in range(1, target_dim):
				v[self._index[t + ((target, k),)], k] += c
		return v

	def dense_compress(self, zetas: Sequence[tuple[str, Any]], target: str, letters: Sequence[tuple[str, AlgebraElement]]) -> np.ndarray:
		"""
			V* (a_1 ... a_m) V with every factor dense.

			Raises
			------
			`TruncationError` if n + m // 2 exceeds the depth
		"""
		n = len(zetas) + 1
		required = n + len(letters) // 2
		if required > self._depth:
			raise TruncationError(f"dense compression needs depth {required}: got {self._depth}", required_depth=required)
		v = self.dense_isometry(zetas, target)
		return v.conj().T @ self.dense_word(letters) @ v

	def permutation(self, space: Any) -> np.ndarray:
		"""
			The array `perm` with reference coordinate i equal to coordinate `perm[i]` of a `FreeFockSpace`.
		"""
		perm = np.empty(self.dim, dtype=int)
		for i, tensor in enumerate(self._basis):
			word = [label for label, _ in tensor]
			perm[i] = space.basis_index(word, [k - 1 for _, k in tensor])
		return perm

	def from_layout(self, matrix: Any, space: Any) -> np.ndarray:
		"""Re-index a dense or sparse matrix from the layout of `space` into the reference basis"""
		matrix = matrix.toarray() if hasattr(matrix, 'toarray') else np.asarray(matrix)
		perm = self.permutation(space)
		return matrix[np.ix_(perm, perm)]

	def __repr__(self) -> str:
		return f"DenseSpace({list(self._factors)!r}, depth={self._depth})"
