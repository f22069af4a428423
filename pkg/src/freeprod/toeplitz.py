"""
	A finite model of a faithful state whose GNS vector is not cyclic for the commutant.

	The Toeplitz algebra is replaced by 𝒯_K = M_K ⊕ C: the first block holds the compact operators truncated to K dimensions, and the one-dimensional second block stands in for the symbol algebra. The shift is S_K ⊕ 1, whose only defect is 1 - S_K* S_K = e_{K-1,K-1}. The algebra is A = 𝒯_K ⊗ M_2 = M_{2K} ⊕ M_2, with t ⊗ f stored as kron(t, f) in the first block.

	The states are

	- ψ_1 with weights 2^-(j+1) on the diagonal of the compacts block and the remaining 2^-K on the symbol block,
	- ψ_0 the character of the symbol block, which annihilates the compacts,
	- ρ = diag(1, 0) on M_2, and φ = ½ ψ_1 ⊗ tr_2 + ½ ψ_0 ⊗ ρ.

	Identities that hold exactly in the finite model are checked to tolerance; the weight ψ_1 puts on the symbol block has no infinite counterpart and is reported as a truncation defect.
"""

from __future__ import annotations

import logging
from typing import Any, Final, Optional

import numpy as np
import scipy.linalg
import scipy.sparse

from . import _tolerances
from ._tolerances import Tolerances
from .blockalg import AlgebraElement, BlockAlgebra, StateSpec
from .errors import ValidationError
from .gns import GnsSpace
from .report import Report


__all__ = (
	'TruncatedToeplitz',
	'SplitGnsModel',
	'build_example',
	'OntoReport',
	'verify_v_onto',
	'NoncyclicReport',
	'verify_noncyclic',
	'DEFAULT_K',
)


_logger = logging.getLogger(__name__)


DEFAULT_K: Final = 4


class TruncatedToeplitz:
	"""
		The algebra 𝒯_K = M_K ⊕ C with its shift, matrix units and the two states ψ_1 and ψ_0.

		The one-dimensional symbol block is kept as a separate summand, so A = 𝒯_K ⊗ M_2 has dimension 4K² + 4 and so does L²(A, ψ_1 ⊗ tr_2), not the 4K² of M_K ⊗ M_2 alone. The extra four dimensions carry the symbol, on which ψ_0 ⊗ ρ lives: L²(A, ψ_0 ⊗ ρ) has dimension 2.
	"""

	__slots__ = ('_k', '_algebra')

	def __init__(self, k: int=DEFAULT_K):
		"""
			Raises
			------
			`ValueError` if `k` < 3
		"""
		if not isinstance(k, int) or isinstance(k, bool):
			raise TypeError(f"K must be an int: {k} ({type(k)})")
		if k < 3:
			raise ValueError(f"K must be at least 3: {k}")
		self._k: int = k
		self._algebra: BlockAlgebra = BlockAlgebra([k, 1], "T")

	@property
	def k(self) -> int:
		return self._k

	@property
	def algebra(self) -> BlockAlgebra:
		return self._algebra

	def shift_matrix(self) -> np.ndarray:
		"""S_K, with S_K δ_i = δ_{i+1} and S_K δ_{K-1} = 0"""
		return np.eye(self._k, k=-1)

	def shift(self) -> AlgebraElement:
		"""S_K ⊕ 1"""
		return self._algebra.element([self.shift_matrix(), [[1]]])

	def matrix_unit(self, i: int, j: int) -> AlgebraElement:
		"""e_ij of the compacts block"""
		return self._algebra.matrix_unit(0, i, j)

	def truncation_defect(self) -> AlgebraElement:
		"""1 - S* S, which is e_{K-1,K-1} in the compacts block"""
		s = self.shift()
		return self._algebra.one() - s.adjoint() * s

	def faithful_state(self, tolerances: Optional[Tolerances]=None) -> StateSpec:
		"""ψ_1 with geometric weights 2^-(j+1), and tail mass 2^-K on the symbol block"""
		weights = [2.0 ** -(j + 1) for j in range(self._k)]
		return StateSpec.from_weights(self._algebra, [weights, [2.0 ** -self._k]], tolerances)

	def character(self, tolerances: Optional[Tolerances]=None) -> StateSpec:
		"""ψ_0, the character of the symbol block"""
		return StateSpec.from_weights(self._algebra, [[0] * self._k, [1]], tolerances)

	def __repr__(self) -> str:
		return f"TruncatedToeplitz({self._k})"


_M2: Final = BlockAlgebra([2], "M2")


def _tensor_state(algebra: BlockAlgebra, psi: StateSpec, sigma: StateSpec, tolerances: Tolerances) -> StateSpec:
	compacts, symbol = psi.densities
	(density,) = sigma.densities
	return StateSpec(algebra, [np.kron(compacts, density), symbol[0, 0] * density], tolerances)


class SplitGnsModel:
	"""
		The finite model of A with φ, its GNS space, and the split ℋ′ = L²(A, ψ_1 ⊗ tr_2) ⊕ L²(A, ψ_0 ⊗ ρ).

		The two summands have dimensions 4K² + 4 and 2.

		ℋ′ carries the norm ‖ζ_1 ⊕ ζ_0‖² = ½(‖ζ_1‖² + ‖ζ_0‖²); its orthonormal coordinates are the frame coordinates of the two summands, each scaled by 1/√2. The isometry V maps â to â ⊕ â.
	"""

	__slots__ = ('toeplitz', 'algebra', 'state', 'left_state', 'right_state', 'gns', 'left', 'right', 'isometry', 'tolerances')

	def __init__(self, toeplitz: TruncatedToeplitz, psi1: StateSpec, rho: StateSpec, tolerances: Tolerances):
		k = toeplitz.k
		self.toeplitz: TruncatedToeplitz = toeplitz
		self.tolerances: Tolerances = tolerances
		self.algebra: BlockAlgebra = BlockAlgebra([2 * k, 2], "A")
		self.left_state: StateSpec = _tensor_state(self.algebra, psi1, StateSpec.trace(_M2), tolerances)
		self.right_state: StateSpec = _tensor_state(self.algebra, toeplitz.character(tolerances), rho, tolerances)
		self.state: StateSpec = self.left_state.mixed_with(self.right_state, 0.5)
		self.gns: GnsSpace = GnsSpace(self.state, tolerances)
		self.left: GnsSpace = GnsSpace(self.left_state, tolerances)
		self.right: GnsSpace = GnsSpace(self.right_state, tolerances)
		self.isometry: np.ndarray = np.column_stack([self.hprime_vector(f) for f in self.gns.frame_elements()])
		_logger.debug("built finite model at K=%d: dim L²(φ)=%d, dim ℋ′=%d", k, self.gns.dim, self.isometry.shape[0])

	def tensor(self, t: Any, f: Any) -> AlgebraElement:
		"""
			The element t ⊗ f of A for t in 𝒯_K and f a 2×2 matrix.
		"""
		if isinstance(t, AlgebraElement):
			compacts, symbol = t.blocks
		else:
			compacts, symbol = t
		f = np.asarray(f, dtype=np.complex128)
		return self.algebra.element([np.kron(compacts, f), complex(np.asarray(symbol).ravel()[0]) * f])

	def f(self, i: int, j: int) -> np.ndarray:
		"""The matrix unit f_ij of M_2, indexed from 0"""
		m = np.zeros((2, 2))
		m[i, j] = 1
		return m

	def hprime_vector(self, a: AlgebraElement) -> np.ndarray:
		"""Orthonormal ℋ′ coordinates of â ⊕ â"""
		return np.concatenate([self.left.vector_of(a), self.right.vector_of(a)]) / np.sqrt(2)

	def compact_units(self) -> list[tuple[tuple[int, int, int, int], AlgebraElement]]:
		"""The elements e_ij ⊗ f_kl, keyed by (i, j, k, l)"""
		t = self.toeplitz
		return [
			((i, j, k, l), self.tensor(t.matrix_unit(i, j), self.f(k, l)))
			for i in range(t.k) for j in range(t.k) for k in range(2) for l in range(2)
		]

	def symbol_units(self) -> list[AlgebraElement]:
		"""The elements 1 ⊗ f_i1"""
		one = self.toeplitz.algebra.one()
		return [self.tensor(one, self.f(i, 0)) for i in range(2)]

	def identification(self) -> np.ndarray:
		"""
			Orthonormal columns W sending identified coordinates into ℋ′.

			The first 4K² columns are the normalised vectors (ê_ij ⊗ f̂_kl) ⊕ 0, ordered as δ_i ⊗ δ_k ⊗ δ_l ⊗ δ_j; the last two are the normalised vectors 0 ⊕ (1 ⊗ f_i1)^. The norm of ê_ij ⊗ f̂_kl in L²(ψ_1 ⊗ tr_2) is (ψ_1(e_jj) / 2)^½.
		"""
		k = self.toeplitz.k
		weights = np.diag(self.left_state.densities[0]).real
		columns = np.zeros((self.left.dim + self.right.dim, 4 * k * k + 2), dtype=np.complex128)
		for (i, j, kk, l), unit in self.compact_units():
			# the density diagonal at 2j holds ψ_1(e_jj) / 2
			scale = 1 / np.sqrt(weights[2 * j])
			column = ((i * 2 + kk) * 2 + l) * k + j
			columns[:self.left.dim, column] = scale * self.left.vector_of(unit)
		for i, unit in enumerate(self.symbol_units()):
			columns[self.left.dim:, 4 * k * k + i] = self.right.vector_of(unit)
		return columns

	def identified_vector(self, v: Any) -> np.ndarray:
		"""Identified coordinates of a vector of L²(A, φ), given in its frame"""
		return self.identification().conj().T @ (self.isometry @ np.asarray(v, dtype=np.complex128))

	def identified_operator(self, a: AlgebraElement) -> np.ndarray:
		"""
			The action of a on the identified coordinates.

			A acts on ℋ′ summandwise, and V intertwines this action with π; the identified coordinates span an invariant subspace.
		"""
		w = self.identification()
		return w.conj().T @ scipy.linalg.block_diag(self.left.rep(a), self.right.rep(a)) @ w

	def symbol_weight(self) -> float:
		"""Weight ψ_1 puts on the symbol block, which the identified coordinates do not see"""
		return float(np.trace(self.left_state.densities[1]).real)

	def __repr__(self) -> str:
		return f"SplitGnsModel(K={self.toeplitz.k})"


def build_example(k: int=DEFAULT_K, psi1: Optional[StateSpec]=None, rho: Optional[StateSpec]=None, tolerances: Optional[Tolerances]=None) -> SplitGnsModel:
	"""
		Build the finite model.

		Parameters
		----------
		`k`
		: truncation size K ≥ 3

		`psi1`
		: faithful state on 𝒯_K with diagonal density on the compacts block; defaults to `TruncatedToeplitz.faithful_state()`

		`rho`
		: pure state on M_2 with ρ(f_11) = 1; defaults to diag(1, 0)

		Raises
		------
		- `ValueError` if `k` < 3
		- `ValidationError` if `psi1` is not faithful or not diagonal on the compacts, or if `rho` is not pure or ρ(f_11) ≠ 1
	"""
	tol = _tolerances.resolve(tolerances)
	toeplitz = TruncatedToeplitz(k)
	if psi1 is None:
		psi1 = toeplitz.faithful_state(tol)
	if psi1.parent != toeplitz.algebra:
		raise ValidationError(f"ψ_1 must be a state on {toeplitz.algebra!r}: got {psi1.parent!r}")
	faithful = psi1.is_faithful()
	if not faithful:
		raise ValidationError(f"ψ_1 must be faithful: eigenvalue {faithful.margin:.3e} in block {faithful.block}", block=faithful.block, eigenvalue=faithful.margin)
	compacts = psi1.densities[0]
	if np.max(np.abs(compacts - np.diag(np.diag(compacts)))) > tol.norm:
		raise ValidationError("ψ_1 must have a diagonal density on the compacts block", block=0)

	if rho is None:
		rho = StateSpec.from_weights(_M2, [[1, 0]], tol)
	if rho.parent != _M2:
		raise ValidationError(f"ρ must be a state on {_M2!r}: got {rho.parent!r}")
	spectrum = np.linalg.eigvalsh(rho.densities[0])
	if abs(spectrum[-1] - 1) > tol.norm:
		raise ValidationError(f"ρ must be pure: largest eigenvalue {spectrum[-1]:.12g}", block=0, eigenvalue=float(spectrum[-1]))
	if abs(rho.densities[0][0, 0] - 1) > tol.norm:
		raise ValidationError(f"ρ(f_11) must be 1: got {rho.densities[0][0, 0].real:.12g}")

	return SplitGnsModel(toeplitz, psi1, rho, tol)


class OntoReport(Report):
	"""
		Result of `verify_v_onto()`.
	"""

	__slots__ = (
		'k',
		'isometry_defect',
		'compact_residual',
		'compact_leak',
		'symbol_residual',
		'symbol_components',
		'smallest_singular_value',
		'symbol_leak',
		'tolerance',
	)

	def __init__(self, k: int, isometry_defect: float, compact_residual: float, compact_leak: float, symbol_residual: float, symbol_components: float, smallest_singular_value: float, symbol_leak: float, tolerance: float):
		self.k = k
		self.isometry_defect = isometry_defect
		self.compact_residual = compact_residual
		self.compact_leak = compact_leak
		self.symbol_residual = symbol_residual
		self.symbol_components = symbol_components
		self.smallest_singular_value = smallest_singular_value
		self.symbol_leak = symbol_leak
		self.tolerance = tolerance

	@property
	def passed(self) -> bool:
		return (
			self.isometry_defect < self.tolerance
			and self.compact_residual < self.tolerance
			and self.compact_leak < self.tolerance
			and self.symbol_residual < self.tolerance
			and self.symbol_components < self.tolerance
			and self.smallest_singular_value > self.tolerance
		)

	def as_dict(self) -> dict[str, Any]:
		return {
			'check': "v_onto",
			'K': self.k,
			'exact': {
				'isometry_defect': self.isometry_defect,
				'compact_image_residual': self.compact_residual,
				'compact_second_component': self.compact_leak,
				'symbol_image_residual': self.symbol_residual,
				'symbol_components_difference': self.symbol_components,
				'smallest_singular_value': self.smallest_singular_value,
			},
			'truncation_defect': {
				'symbol_sector_leak': self.symbol_leak,
			},
			'tolerance': self.tolerance,
		}


def verify_v_onto(model: SplitGnsModel) -> OntoReport:
	"""
		Check that V: â ↦ â ⊕ â is an isometry and that the images of e_ij ⊗ f_kl and 1 ⊗ f_i1 span the identified part of ℋ′.

		The images of e_ij ⊗ f_kl must be (ê_ij ⊗ f̂_kl) ⊕ 0, and those of 1 ⊗ f_i1 must have equal components. The span is measured by the smallest singular value of the images in identified coordinates. The part of the images of 1 ⊗ f_i1 outside the identified coordinates comes from the symbol block and is reported as a truncation defect.
	"""
	tol = model.tolerances.norm
	v = model.isometry
	isometry_defect = float(np.linalg.norm(v.conj().T @ v - np.eye(v.shape[1]), 2))
	left_dim = model.left.dim
	sqrt2 = np.sqrt(2)

	images = []
	compact_residual = 0.0
	compact_leak = 0.0
	for _, unit in model.compact_units():
		image = v @ model.gns.vector_of(unit)
		images.append(image)
		compact_residual = max(compact_residual, float(np.linalg.norm(image[:left_dim] - model.left.vector_of(unit) / sqrt2)))
		compact_leak = max(compact_leak, float(np.linalg.norm(image[left_dim:])))

	symbol_residual = 0.0
	symbol_components = 0.0
	for unit in model.symbol_units():
		image = v @ model.gns.vector_of(unit)
		images.append(image)
		symbol_residual = max(symbol_residual, float(np.linalg.norm(image - model.hprime_vector(unit))))
		# both components are the same element; in the second summand it is a unit vector
		symbol_components = max(symbol_components, abs(float(np.linalg.norm(image[left_dim:]) * sqrt2) - 1))

	w = model.identification()
	coordinates = w.conj().T @ np.column_stack(images)
	smallest = float(scipy.linalg.svdvals(coordinates)[-1])
	leak = max(float(np.linalg.norm(image - w @ (w.conj().T @ image))) for image in images)

	report = OntoReport(model.toeplitz.k, isometry_defect, compact_residual, compact_leak, symbol_residual, symbol_components, smallest, leak, tol)
	if not report.passed:
		_logger.warning("V is not onto at K=%d: smallest singular value %.3e", model.toeplitz.k, smallest)
	return report


class NoncyclicReport(Report):
	"""
		Result of `verify_noncyclic()`.
	"""

	__slots__ = (
		'k',
		'orthogonality',
		'commutant_size',
		'matrix_commutator',
		'shift_commutator',
		'shift_boundary_defect',
		'symbol_weight',
		'model_dim',
		'model_commutant_rank',
		'tolerance',
		'orthogonality_tolerance',
	)

	def __init__(self, k: int, orthogonality: float, commutant_size: int, matrix_commutator: float, shift_commutator: float, shift_boundary_defect: float, symbol_weight: float, model_dim: int, model_commutant_rank: int, tolerance: float, orthogonality_tolerance: float):
		self.k = k
		self.orthogonality = orthogonality
		self.commutant_size = commutant_size
		self.matrix_commutator = matrix_commutator
		self.shift_commutator = shift_commutator
		self.shift_boundary_defect = shift_boundary_defect
		self.symbol_weight = symbol_weight
		self.model_dim = model_dim
		self.model_commutant_rank = model_commutant_rank
		self.tolerance = tolerance
		self.orthogonality_tolerance = orthogonality_tolerance

	@property
	def passed(self) -> bool:
		return (
			self.orthogonality < self.orthogonality_tolerance
			and self.matrix_commutator < self.tolerance
			and self.shift_commutator < self.tolerance
		)

	def as_dict(self) -> dict[str, Any]:
		return {
			'check': "noncyclic",
			'K': self.k,
			'exact': {
				'orthogonality': self.orthogonality,
				'commutant_spanning_set': self.commutant_size,
				'matrix_commutator': self.matrix_commutator,
				'shift_commutator': self.shift_commutator,
			},
			'truncation_defect': {
				'shift_boundary': self.shift_boundary_defect,
				'symbol_sector_weight': self.symbol_weight,
			},
			'finite_model': {
				'dim': self.model_dim,
				'commutant_cyclicity_rank': self.model_commutant_rank,
			},
			'tolerance': self.tolerance,
			'orthogonality_tolerance': self.orthogonality_tolerance,
		}


ORTHOGONALITY_TOLERANCE: Final = 1e-12


def _commutant(k: int) -> list[scipy.sparse.csr_matrix]:
	"""Spanning set of (1 ⊗ 1 ⊗ B(ℓ²_2) ⊗ B(ℓ²_K)) ⊕ C in identified coordinates"""
	size = 4 * k * k
	spanning = []
	for l1 in range(2):
		for l2 in range(2):
			for j1 in range(k):
				for j2 in range(k):
					unit = scipy.sparse.kron(scipy.sparse.coo_matrix(([1.0], ([l1], [l2])), shape=(2, 2)), scipy.sparse.coo_matrix(([1.0], ([j1], [j2])), shape=(k, k)))
					inner = scipy.sparse.kron(scipy.sparse.identity(2 * k), unit)
					spanning.append(scipy.sparse.block_diag([inner, scipy.sparse.csr_matrix((2, 2))], format='csr'))
	scalar = scipy.sparse.block_diag([scipy.sparse.csr_matrix((size, size)), scipy.sparse.identity(2)], format='csr')
	spanning.append(scalar)
	return spanning


def verify_noncyclic(model: SplitGnsModel) -> NoncyclicReport:
	"""
		Check that 0 ⊕ (1 ⊗ f_21)^ is orthogonal to D ξ for a spanning set of the commutant D = (1 ⊗ 1 ⊗ B(ℓ²_2) ⊗ B(ℓ²_K)) ⊕ C, in identified coordinates.

		Also checks that these D commute with the compressed generators 1 ⊗ f_kl and S ⊗ 1, and reports the truncation defects: ‖(1 - S* S)ξ‖ at the shift boundary, and the weight ψ_1 puts on the symbol block. In the finite model itself ξ is cyclic for the full commutant, which is reported for comparison.
	"""
	k = model.toeplitz.k
	size = 4 * k * k
	xi = model.identified_vector(model.gns.xi)
	target = np.zeros(size + 2, dtype=np.complex128)
	target[size + 1] = 1

	spanning = _commutant(k)
	orthogonality = max(abs(np.vdot(target, d @ xi)) for d in spanning)

	one = model.toeplitz.algebra.one()
	matrix_generators = [model.identified_operator(model.tensor(one, model.f(i, j))) for i in range(2) for j in range(2)]
	shift = model.identified_operator(model.tensor(model.toeplitz.shift(), np.eye(2)))
	shift_generators = [shift, shift.conj().T]

	# Frobenius norms bound the operator norms
	def worst(generators: list[np.ndarray]) -> float:
		return max(float(np.linalg.norm(d @ g - (d.T @ g.T).T)) for d in spanning for g in generators)

	defect = model.tensor(model.toeplitz.truncation_defect(), np.eye(2))
	boundary = float(np.linalg.norm(model.gns.vector_of(defect)))

	report = NoncyclicReport(
		k,
		float(orthogonality),
		len(spanning),
		worst(matrix_generators),
		worst(shift_generators),
		boundary,
		model.symbol_weight(),
		model.gns.dim,
		model.gns.commutant_cyclicity_rank(),
		model.tolerances.norm,
		ORTHOGONALITY_TOLERANCE,
	)
	_logger.debug("non-cyclicity at K=%d: orthogonality %.3e, boundary defect %.3e", k, orthogonality, boundary)
	return report
