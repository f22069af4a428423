"""
	GNS construction (π, H, ξ) for a state on a block algebra, in an orthonormal coordinate frame whose first vector is ξ.
"""

from __future__ import annotations

import logging
from typing import Any, Optional

import numpy as np
import scipy.linalg

from . import _tolerances
from ._tolerances import Tolerances
from .blockalg import AlgebraElement, BlockAlgebra, StateSpec
from .errors import StructuralError


__all__ = ('GnsSpace', 'gns_construct')


_logger = logging.getLogger(__name__)


def _gram(state: StateSpec) -> np.ndarray:
	# φ(e_ji e_kl) = δ_ik ρ_lj, so each block contributes kron(I, ρ^T)
	return scipy.linalg.block_diag(*[np.kron(np.eye(rho.shape[0]), rho.T) for rho in state.densities])


class GnsSpace:
	"""
		The GNS space H = L²(A, φ) of a state, with H = Cξ ⊕ H°.

		Vectors of H are coordinate arrays in a fixed orthonormal frame. The frame always has ξ = 1̂ at index 0, so that H° is spanned by indices 1 to `dim` - 1.

		If the state is not faithful, H is the quotient by the Gram null space and `non_faithful` is True; the rank is decided on the Gram eigenvalues at the `faithful` tolerance.
	"""

	__slots__ = (
		'_algebra',
		'_state',
		'_tolerances',
		'_to_frame',
		'_from_frame',
		'_dim',
	)

	def __init__(self, state: StateSpec, tolerances: Optional[Tolerances]=None):
		"""
			Build the GNS space of `state` on its parent algebra.

			Parameters
			----------
			`state`
			: the state φ; its parent algebra is A

			`tolerances`
			: overrides the tolerances carried by `state`
		"""
		if not isinstance(state, StateSpec):
			raise TypeError(f"state must be a StateSpec: {state} ({type(state)})")
		self._algebra: BlockAlgebra = state.parent
		self._state: StateSpec = state
		self._tolerances: Tolerances = _tolerances.resolve(tolerances, state.tolerances)

		eigenvalues, eigenvectors = scipy.linalg.eigh(_gram(state))
		keep = eigenvalues > self._tolerances.faithful
		values = eigenvalues[keep]
		vectors = eigenvectors[:, keep]
		rank = int(keep.sum())

		# frame coordinates of â are sqrt(Λ) U† vec(a); rotate so that 1̂ is the first frame vector
		to_frame = np.sqrt(values)[:, None] * vectors.conj().T
		xi = to_frame @ self._algebra.one().to_vector()
		q, r = scipy.linalg.qr(np.column_stack([xi, np.eye(rank)]))
		q[:, 0] *= r[0, 0]
		self._to_frame: np.ndarray = q.conj().T @ to_frame
		self._from_frame: np.ndarray = (vectors / np.sqrt(values)[None, :]) @ q
		self._dim: int = rank
		self._to_frame.setflags(write=False)
		self._from_frame.setflags(write=False)

		if rank < self._algebra.dim:
			_logger.info("GNS of %r is a proper quotient: rank %d of %d", self._algebra, rank, self._algebra.dim)
		else:
			_logger.debug("GNS of %r has full dimension %d", self._algebra, rank)

	@property
	def algebra(self) -> BlockAlgebra:
		return self._algebra

	@property
	def state(self) -> StateSpec:
		return self._state

	@property
	def label(self) -> str:
		"""Read-only label of the underlying algebra"""
		return self._algebra.label

	@property
	def tolerances(self) -> Tolerances:
		return self._tolerances

	@property
	def dim(self) -> int:
		return self._dim

	@property
	def complement_dim(self) -> int:
		"""Read-only dimension of H° = H ⊖ Cξ"""
		return self._dim - 1

	@property
	def non_faithful(self) -> bool:
		"""Read-only flag for whether H is a proper quotient of A"""
		return self._dim < self._algebra.dim

	@property
	def xi(self) -> np.ndarray:
		"""The cyclic vector ξ, which is always the first frame vector"""
		v = np.zeros(self._dim, dtype=np.complex128)
		v[0] = 1
		return v

	@property
	def frame(self) -> np.ndarray:
		"""
			Read-only `dim`×`algebra.dim` matrix sending matrix-unit coordinates of a to the frame coordinates of â.

			Its columns are the GNS vectors of the matrix units.
		"""
		return self._to_frame

	def _check(self, a: AlgebraElement) -> None:
		if a.parent != self._algebra:
			raise StructuralError(f"element of {a.parent!r} cannot act on the GNS space of {self._algebra!r}")

	def vector_of(self, a: AlgebraElement) -> np.ndarray:
		"""
			Frame coordinates of â.

			Examples
			--------
			```python
			g.vector_of(A.one())  # array([1, 0, ..., 0])
			```
		"""
		self._check(a)
		return self._to_frame @ a.to_vector()

	def element_of(self, v: Any) -> AlgebraElement:
		"""
			An algebra element whose GNS vector is `v`.

			When the state is faithful this is the unique such element; otherwise it is the one orthogonal to the Gram null space.
		"""
		v = np.asarray(v, dtype=np.complex128)
		if v.shape != (self._dim,):
			raise StructuralError(f"vector must have length {self._dim}: got {v.shape}")
		return self._algebra.from_vector(self._from_frame @ v)

	def frame_elements(self) -> list[AlgebraElement]:
		"""
			Algebra elements whose GNS vectors are the frame vectors, in frame order.

			The first represents the unit, and is the unit when the state is faithful; the rest are centred. Modulo the Gram null space their classes form a basis of A°.
		"""
		return [self._algebra.from_vector(column) for column in self._from_frame.T]

	def rep(self, a: AlgebraElement) -> np.ndarray:
		"""
			The matrix of π(a) in the frame.

			Left multiplication by a acts on row-major block coordinates as kron(a_b, I) in every block.
		"""
		self._check(a)
		left = scipy.linalg.block_diag(*[np.kron(m, np.eye(m.shape[0])) for m in a.blocks])
		return self._to_frame @ left @ self._from_frame

	def right_rep(self, b: AlgebraElement) -> np.ndarray:
		"""
			The matrix of right multiplication â ↦ (ab)^ in the frame.

			This is well defined and lies in the commutant of π(A) when the state is faithful.

			Raises
			------
			`ValueError` if the state is not faithful
		"""
		self._check(b)
		if self.non_faithful:
			raise ValueError(f"right multiplication is not defined on the quotient GNS space of {self._algebra!r}")
		right = scipy.linalg.block_diag(*[np.kron(np.eye(m.shape[0]), m.T) for m in b.blocks])
		return self._to_frame @ right @ self._from_frame

	def complement_project(self, v: Any) -> np.ndarray:
		"""
			Return v - ⟨v, ξ⟩ξ, the component of `v` in H°.
		"""
		v = np.array(v, dtype=np.complex128)
		if v.shape != (self._dim,):
			raise StructuralError(f"vector must have length {self._dim}: got {v.shape}")
		v[0] = 0
		return v

	def cyclicity_rank(self) -> int:
		"""Rank of {π(u)ξ : u a matrix unit}; equal to `dim` since ξ is cyclic"""
		return int(np.linalg.matrix_rank(self._to_frame, tol=self._tolerances.faithful))

	def commutant_cyclicity_rank(self) -> int:
		"""
			Rank of the orbit of ξ under the commutant π(A)'.

			For a faithful state the commutant is spanned by right multiplications, whose orbit of ξ is all of H. Otherwise the commutant is computed as the null space of the commutation equations.
		"""
		if not self.non_faithful:
			orbit = np.column_stack([self.right_rep(b) @ self.xi for b in self._algebra.basis()])
			return int(np.linalg.matrix_rank(orbit, tol=self._tolerances.faithful))
		n = self._dim
		identity = np.eye(n)
		# X R = R X  <=>  (R^T ⊗ I - I ⊗ R) vec(X) = 0 in column-major vec
		equations = np.vstack([
			np.kron(r.T, identity) - np.kron(identity, r)
			for r in (self.rep(u) for u in self._algebra.basis())
		])
		commutant = scipy.linalg.null_space(equations)
		orbit = np.column_stack([
			column.reshape(n, n, order='F') @ self.xi for column in commutant.T
		])
		return int(np.linalg.matrix_rank(orbit, tol=self._tolerances.faithful))

	def random_complement_unit(self, rng: np.random.Generator) -> np.ndarray:
		"""
			A random unit vector of H°.

			Raises
			------
			`StructuralError` if H° = 0
		"""
		if self.complement_dim < 1:
			raise StructuralError(f"the GNS space of {self._algebra!r} has no complement to ξ")
		v = np.zeros(self._dim, dtype=np.complex128)
		v[1:] = rng.standard_normal(self.complement_dim) + 1j * rng.standard_normal(self.complement_dim)
		return v / np.linalg.norm(v)

	def __repr__(self) -> str:
		return f"GnsSpace({self._state!r})"


def gns_construct(algebra: BlockAlgebra, state: StateSpec, tolerances: Optional[Tolerances]=None) -> GnsSpace:
	"""
		Equivalent to `GnsSpace(state)` after checking that `state` lives on `algebra`.

		Raises
		------
		`StructuralError` if `state` is a state on a different algebra
	"""
	if state.parent != algebra:
		raise StructuralError(f"state on {state.parent!r} given for {algebra!r}")
	return GnsSpace(state, tolerances)
