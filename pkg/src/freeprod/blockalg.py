"""
	Finite-dimensional C*-algebras as direct sums of full matrix blocks, their elements, and states given by block density matrices.
"""

from __future__ import annotations

import numbers
from collections.abc import Hashable, Iterable, Iterator, Sequence, Sized
from typing import Any, NamedTuple, Optional, Union

import numpy as np

from . import _tolerances
from ._tolerances import Tolerances
from .errors import StructuralError, ValidationError


__all__ = (
	'BlockAlgebra',
	'AlgebraElement',
	'StateSpec',
	'Faithfulness',
	'multiply',
	'adjoint',
	'state_eval',
	'is_faithful',
	'center',
)

Scalar = Union[int, float, complex, np.number]


def _frozen(matrix: Any, shape: tuple[int, int]) -> np.ndarray:
	array = np.array(matrix, dtype=np.complex128)
	if array.shape != shape:
		raise StructuralError(f"block must have shape {shape}: got {array.shape}")
	array.setflags(write=False)
	return array


class BlockAlgebra(Hashable, Sized):
	"""
		An immutable finite-dimensional C*-algebra M_{d_1} ⊕ ... ⊕ M_{d_k}, described by its block sizes.

		The algebra has the linear basis of matrix units e^{(b)}_{ij}, ordered by block and then row-major within each block; `AlgebraElement.to_vector()` uses the same order.
	"""

	__slots__ = ('_block_dims', '_label')

	def __init__(self, block_dims: Iterable[int], label: str="A"):
		"""
			Parameters
			----------
			`block_dims`
			: the sizes d_1, ..., d_k of the matrix blocks; at least one, each at least 1

			`label`
			: name of the algebra, used as the factor label in free products

			Raises
			------
			- `TypeError` if a block size is not an int
			- `ValueError` if there are no blocks or a block size is less than 1

			Examples
			--------
			```python
			BlockAlgebra([1, 1], "p")  # C^2
			BlockAlgebra([2])          # M_2
			```
		"""
		dims = tuple(block_dims)
		if len(dims) == 0:
			raise ValueError("a block algebra needs at least one block")
		for d in dims:
			if not isinstance(d, numbers.Integral) or isinstance(d, bool):
				raise TypeError(f"block size must be an int: {d} ({type(d)})")
			if d < 1:
				raise ValueError(f"block size must be at least 1: {d}")
		if not isinstance(label, str):
			raise TypeError(f"label must be a str: {label} ({type(label)})")
		self._block_dims: tuple[int, ...] = tuple(int(d) for d in dims)
		self._label: str = label

	@property
	def block_dims(self) -> tuple[int, ...]:
		"""Read-only block sizes (d_1, ..., d_k)"""
		return self._block_dims

	@property
	def label(self) -> str:
		return self._label

	@property
	def dim(self) -> int:
		"""
			Read-only linear dimension Σ d_b²

			Examples
			--------
			```python
			BlockAlgebra([1, 1]).dim  # 2
			BlockAlgebra([2, 1]).dim  # 5
			```
		"""
		return sum(d * d for d in self._block_dims)

	def one(self) -> AlgebraElement:
		"""The unit of the algebra"""
		return AlgebraElement(self, [np.eye(d) for d in self._block_dims])

	def zero(self) -> AlgebraElement:
		return AlgebraElement(self, [np.zeros((d, d)) for d in self._block_dims])

	def element(self, blocks: Sequence[Any]) -> AlgebraElement:
		"""Equivalent to `AlgebraElement(self, blocks)`"""
		return AlgebraElement(self, blocks)

	def matrix_unit(self, block: int, i: int, j: int) -> AlgebraElement:
		"""
			The matrix unit e_{ij} of block `block`.

			Raises
			------
			`StructuralError` if the indices are out of range
		"""
		if not 0 <= block < len(self._block_dims):
			raise StructuralError(f"no block {block} in {self!r}")
		d = self._block_dims[block]
		if not (0 <= i < d and 0 <= j < d):
			raise StructuralError(f"matrix unit ({i}, {j}) out of range for block {block} of size {d}")
		blocks = [np.zeros((e, e)) for e in self._block_dims]
		blocks[block][i, j] = 1
		return AlgebraElement(self, blocks)

	def basis_indices(self) -> Iterator[tuple[int, int, int]]:
		"""Iterate through (block, i, j) in basis order"""
		for b, d in enumerate(self._block_dims):
			for i in range(d):
				for j in range(d):
					yield (b, i, j)

	def basis(self) -> list[AlgebraElement]:
		"""All matrix units, in basis order"""
		return [self.matrix_unit(b, i, j) for b, i, j in self.basis_indices()]

	def from_vector(self, vector: Any) -> AlgebraElement:
		"""
			Inverse of `AlgebraElement.to_vector()`.

			Raises
			------
			`StructuralError` if the vector does not have length `dim`
		"""
		vector = np.asarray(vector, dtype=np.complex128).ravel()
		if vector.shape != (self.dim,):
			raise StructuralError(f"coordinate vector must have length {self.dim}: got {vector.shape}")
		blocks = []
		offset = 0
		for d in self._block_dims:
			blocks.append(vector[offset:offset + d * d].reshape(d, d))
			offset += d * d
		return AlgebraElement(self, blocks)

	def random_element(self, rng: np.random.Generator) -> AlgebraElement:
		"""An element with independent standard complex Gaussian entries"""
		return AlgebraElement(self, [
			(rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
			for d in self._block_dims
		])

	def __len__(self) -> int:
		"""
			Same as `dim`.

			Usage: <code>len(<var>A</var>)</code>
		"""
		return self.dim

	def __hash__(self) -> int:
		return hash((self._block_dims, self._label))

	def __eq__(self, other: object) -> bool:
		"""
			Check if two algebras have the same blocks and label.

			Usage: <code><var>A1</var> == <var>A2</var></code>
		"""
		if not isinstance(other, BlockAlgebra):
			return NotImplemented
		return self._block_dims == other._block_dims and self._label == other._label

	def __repr__(self) -> str:
		return f"BlockAlgebra({list(self._block_dims)!r}, {self._label!r})"


def _check_parent(x: Union[AlgebraElement, StateSpec], y: Union[AlgebraElement, StateSpec]) -> None:
	if x.parent != y.parent:
		raise StructuralError(f"elements belong to different algebras: {x.parent!r} and {y.parent!r}")


class AlgebraElement:
	"""
		An immutable element of a `BlockAlgebra`, stored as one dense complex matrix per block.

		Elements support `+`, `-`, scalar multiplication, and `*` for the algebra product.
	"""

	__slots__ = ('_parent', '_blocks')

	__array_ufunc__ = None  # numpy scalars defer to __rmul__

	def __init__(self, parent: BlockAlgebra, blocks: Sequence[Any]):
		"""
			Raises
			------
			- `TypeError` if `parent` is not a BlockAlgebra
			- `StructuralError` if the number or shapes of blocks do not match `parent`
		"""
		if not isinstance(parent, BlockAlgebra):
			raise TypeError(f"parent must be a BlockAlgebra: {parent} ({type(parent)})")
		if len(blocks) != len(parent.block_dims):
			raise StructuralError(f"{parent!r} has {len(parent.block_dims)} blocks: got {len(blocks)}")
		self._parent: BlockAlgebra = parent
		self._blocks: tuple[np.ndarray, ...] = tuple(_frozen(m, (d, d)) for m, d in zip(blocks, parent.block_dims))

	@property
	def parent(self) -> BlockAlgebra:
		return self._parent

	@property
	def blocks(self) -> tuple[np.ndarray, ...]:
		"""Read-only matrices, one per block"""
		return self._blocks

	def to_vector(self) -> np.ndarray:
		"""Coordinates in the matrix-unit basis of the parent algebra"""
		return np.concatenate([m.ravel() for m in self._blocks])

	def multiply(self, other: AlgebraElement) -> AlgebraElement:
		"""
			Blockwise matrix product.

			Raises
			------
			`StructuralError` if the elements belong to different algebras
		"""
		_check_parent(self, other)
		return AlgebraElement(self._parent, [x @ y for x, y in zip(self._blocks, other._blocks)])

	def adjoint(self) -> AlgebraElement:
		"""Blockwise conjugate transpose"""
		return AlgebraElement(self._parent, [m.conj().T for m in self._blocks])

	def centered(self, state: StateSpec) -> AlgebraElement:
		"""
			Return a - state(a)·1, the projection of `self` onto the kernel of `state`.

			Raises
			------
			`StructuralError` if `state` is on a different algebra
		"""
		_check_parent(self, state)
		value = state.evaluate(self)
		return AlgebraElement(self._parent, [m - value * np.eye(m.shape[0]) for m in self._blocks])

	def norm(self) -> float:
		"""C*-norm: the largest operator norm over the blocks"""
		return max(float(np.linalg.norm(m, 2)) for m in self._blocks)

	def allclose(self, other: AlgebraElement, atol: float=1e-12) -> bool:
		_check_parent(self, other)
		return all(np.allclose(x, y, rtol=0, atol=atol) for x, y in zip(self._blocks, other._blocks))

	def __add__(self, other: AlgebraElement) -> AlgebraElement:
		if not isinstance(other, AlgebraElement):
			return NotImplemented
		_check_parent(self, other)
		return AlgebraElement(self._parent, [x + y for x, y in zip(self._blocks, other._blocks)])

	def __sub__(self, other: AlgebraElement) -> AlgebraElement:
		if not isinstance(other, AlgebraElement):
			return NotImplemented
		_check_parent(self, other)
		return AlgebraElement(self._parent, [x - y for x, y in zip(self._blocks, other._blocks)])

	def __neg__(self) -> AlgebraElement:
		return AlgebraElement(self._parent, [-m for m in self._blocks])

	def __mul__(self, other: Union[AlgebraElement, Scalar]) -> AlgebraElement:
		"""
			Algebra product with another element, or scalar multiple.

			Usage: <code><var>a</var> * <var>b</var></code>, <code><var>a</var> * 0.5</code>
		"""
		if isinstance(other, AlgebraElement):
			return self.multiply(other)
		if isinstance(other, numbers.Number):
			return AlgebraElement(self._parent, [m * complex(other) for m in self._blocks])
		return NotImplemented

	def __rmul__(self, other: Scalar) -> AlgebraElement:
		if isinstance(other, numbers.Number):
			return AlgebraElement(self._parent, [complex(other) * m for m in self._blocks])
		return NotImplemented

	def __repr__(self) -> str:
		return f"AlgebraElement({self._parent!r}, {[m.tolist() for m in self._blocks]!r})"


class Faithfulness(NamedTuple):
	"""Outcome of `StateSpec.is_faithful()`"""

	faithful: bool
	margin: float
	"""smallest eigenvalue over all densities"""
	block: int
	"""block attaining the margin"""

	def __bool__(self) -> bool:
		return self.faithful


class StateSpec:
	"""
		An immutable state φ(a) = Σ_b trace(ρ_b a_b) on a `BlockAlgebra`, given by one density matrix per block.

		The densities are validated on construction: each must be Hermitian and positive semidefinite, and their traces must sum to 1. The tolerances used for validation are remembered and propagate to objects built from the state.
	"""

	__slots__ = ('_parent', '_densities', '_tolerances')

	def __init__(self, parent: BlockAlgebra, densities: Sequence[Any], tolerances: Optional[Tolerances]=None):
		"""
			Parameters
			----------
			`parent`
			: the algebra the state is defined on

			`densities`
			: one d_b×d_b complex matrix per block

			`tolerances`
			: tolerances for validation; `DEFAULT_TOLERANCES` if not specified

			Raises
			------
			- `StructuralError` if the number or shapes of densities do not match `parent`
			- `ValidationError` if a density is not Hermitian or not positive semidefinite, or if the total trace is not 1; the error names the block and the eigenvalue

			Examples
			--------
			```python
			C2 = BlockAlgebra([1, 1])
			StateSpec(C2, [[[0.5]], [[0.5]]])
			```
		"""
		if not isinstance(parent, BlockAlgebra):
			raise TypeError(f"parent must be a BlockAlgebra: {parent} ({type(parent)})")
		if len(densities) != len(parent.block_dims):
			raise StructuralError(f"{parent!r} has {len(parent.block_dims)} blocks: got {len(densities)} densities")
		self._parent: BlockAlgebra = parent
		self._tolerances: Tolerances = _tolerances.resolve(tolerances)
		self._densities: tuple[np.ndarray, ...] = tuple(_frozen(m, (d, d)) for m, d in zip(densities, parent.block_dims))
		self._validate()

	def _validate(self) -> None:
		tol = self._tolerances
		total = 0j
		for b, rho in enumerate(self._densities):
			asymmetry = float(np.max(np.abs(rho - rho.conj().T)))
			if asymmetry > tol.norm:
				raise ValidationError(f"density of block {b} is not Hermitian: deviation {asymmetry:.3e}", block=b)
			smallest = float(np.linalg.eigvalsh(rho)[0])
			if smallest < -tol.psd:
				raise ValidationError(f"density of block {b} is not positive semidefinite: eigenvalue {smallest:.3e}", block=b, eigenvalue=smallest)
			total += np.trace(rho)
		if abs(total - 1) > tol.norm:
			raise ValidationError(f"densities must have total trace 1: {total.real:.12g}")

	@staticmethod
	def trace(parent: BlockAlgebra, tolerances: Optional[Tolerances]=None) -> StateSpec:
		"""
			The normalised trace, with density I / Σ d_b on every block.

			This is the unique tracial state giving every minimal projection the same weight.
		"""
		n = sum(parent.block_dims)
		return StateSpec(parent, [np.eye(d) / n for d in parent.block_dims], tolerances)

	@staticmethod
	def from_weights(parent: BlockAlgebra, weights: Sequence[Sequence[float]], tolerances: Optional[Tolerances]=None) -> StateSpec:
		"""
			A state with diagonal densities, given as one list of diagonal weights per block.

			Examples
			--------
			```python
			StateSpec.from_weights(BlockAlgebra([1, 1]), [[0.5], [0.5]])
			StateSpec.from_weights(BlockAlgebra([2]), [[1, 0]])  # pure
			```
		"""
		return StateSpec(parent, [np.diag(np.asarray(w, dtype=float)) for w in weights], tolerances)

	@staticmethod
	def vector_state(parent: BlockAlgebra, block: int, vector: Sequence[complex], tolerances: Optional[Tolerances]=None) -> StateSpec:
		"""
			The pure state a ↦ ⟨a_b v, v⟩ for a unit vector `v` in block `block`.

			Raises
			------
			- `StructuralError` if `block` is out of range or `vector` does not fit it
			- `ValidationError` if `vector` does not have unit norm
		"""
		if not 0 <= block < len(parent.block_dims):
			raise StructuralError(f"no block {block} in {parent!r}")
		tol = _tolerances.resolve(tolerances)
		v = np.asarray(vector, dtype=np.complex128)
		if v.shape != (parent.block_dims[block],):
			raise StructuralError(f"vector for block {block} of size {parent.block_dims[block]} has shape {v.shape}")
		if abs(np.linalg.norm(v) - 1) > tol.norm:
			raise ValidationError(f"vector state needs a unit vector: norm {np.linalg.norm(v):.12g}")
		densities = [np.zeros((d, d)) for d in parent.block_dims]
		densities[block] = np.outer(v, v.conj())
		return StateSpec(parent, densities, tol)

	@property
	def parent(self) -> BlockAlgebra:
		return self._parent

	@property
	def densities(self) -> tuple[np.ndarray, ...]:
		return self._densities

	@property
	def tolerances(self) -> Tolerances:
		return self._tolerances

	def evaluate(self, a: AlgebraElement) -> complex:
		"""
			Return φ(a) = Σ_b trace(ρ_b a_b).

			Usage: <code><var>phi</var>.evaluate(<var>a</var>)</code> or <code><var>phi</var>(<var>a</var>)</code>

			Raises
			------
			`StructuralError` if `a` belongs to a different algebra
		"""
		_check_parent(self, a)
		return complex(sum(np.trace(rho @ x) for rho, x in zip(self._densities, a.blocks)))

	def __call__(self, a: AlgebraElement) -> complex:
		return self.evaluate(a)

	def is_faithful(self) -> Faithfulness:
		"""
			Decide faithfulness spectrally: the state is faithful iff every density has all eigenvalues above the `faithful` tolerance.

			The margin is the smallest eigenvalue over all blocks.

			Examples
			--------
			```python
			StateSpec.from_weights(BlockAlgebra([1, 1]), [[0.5], [0.5]]).is_faithful()  # Faithfulness(True, 0.5, 0)
			StateSpec.from_weights(BlockAlgebra([2]), [[1, 0]]).is_faithful()         # Faithfulness(False, 0.0, 0)
			```
		"""
		margins = [float(np.linalg.eigvalsh(rho)[0]) for rho in self._densities]
		block = int(np.argmin(margins))
		margin = margins[block]
		return Faithfulness(margin > self._tolerances.faithful, margin, block)

	def is_tracial(self) -> bool:
		"""Check if φ(ab) = φ(ba) for all a, b, i.e. every density is a multiple of the identity"""
		return all(
			np.allclose(rho, np.trace(rho) / rho.shape[0] * np.eye(rho.shape[0]), rtol=0, atol=self._tolerances.norm)
			for rho in self._densities
		)

	def mixed_with(self, other: StateSpec, weight: float) -> StateSpec:
		"""
			Return the convex combination weight·self + (1 - weight)·other.

			Raises
			------
			- `StructuralError` if the states are on different algebras
			- `ValueError` if `weight` is not in [0, 1]
		"""
		_check_parent(self, other)
		if not 0 <= weight <= 1:
			raise ValueError(f"mixing weight must be in [0, 1]: {weight}")
		return StateSpec(
			self._parent,
			[weight * x + (1 - weight) * y for x, y in zip(self._densities, other._densities)],
			self._tolerances,
		)

	def __repr__(self) -> str:
		return f"StateSpec({self._parent!r}, {[m.tolist() for m in self._densities]!r})"


def multiply(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
	"""Equivalent to `a.multiply(b)`"""
	return a.multiply(b)


def adjoint(a: AlgebraElement) -> AlgebraElement:
	"""Equivalent to `a.adjoint()`"""
	return a.adjoint()


def state_eval(state: StateSpec, a: AlgebraElement) -> complex:
	"""Equivalent to `state.evaluate(a)`"""
	return state.evaluate(a)


def is_faithful(state: StateSpec) -> Faithfulness:
	"""Equivalent to `state.is_faithful()`"""
	return state.is_faithful()


def center(a: AlgebraElement, state: StateSpec) -> AlgebraElement:
	"""Equivalent to `a.centered(state)`"""
	return a.centered(state)
