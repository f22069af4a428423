from __future__ import annotations

import numpy as np
import pytest
from numpy.testing import assert_allclose

from freeprod import BlockAlgebra, SplitGnsModel, StateSpec, TruncatedToeplitz, ValidationError, build_example, verify_noncyclic, verify_v_onto


class TestTruncatedToeplitz:
	@staticmethod
	@pytest.mark.parametrize('k', [3, 4, 6])
	def test_truncation_defect(k: int):
		"""
			Test that 1 - S* S is the last diagonal matrix unit of the compacts block.
		"""
		toeplitz = TruncatedToeplitz(k)
		assert toeplitz.algebra.dim == k * k + 1
		assert toeplitz.truncation_defect().allclose(toeplitz.matrix_unit(k - 1, k - 1))
		s = toeplitz.shift()
		assert (s * s.adjoint()).blocks[1][0, 0] == 1


	@staticmethod
	def test_states():
		toeplitz = TruncatedToeplitz(4)
		psi1 = toeplitz.faithful_state()
		assert psi1.is_faithful()
		assert psi1(toeplitz.matrix_unit(0, 0)) == pytest.approx(0.5)
		assert psi1(toeplitz.algebra.one()) == pytest.approx(1)
		psi0 = toeplitz.character()
		assert not psi0.is_faithful()
		assert psi0(toeplitz.shift()) == pytest.approx(1)
		assert psi0(toeplitz.matrix_unit(1, 1)) == 0


	@staticmethod
	def test_invalid():
		with pytest.raises(ValueError):
			TruncatedToeplitz(2)
		with pytest.raises(TypeError):
			TruncatedToeplitz(4.0)


class TestSplitGnsModel:
	@staticmethod
	@pytest.fixture(scope='class')
	def model() -> SplitGnsModel:
		return build_example(4)


	@staticmethod
	def test_dims(model: SplitGnsModel):
		assert model.algebra.dim == 4 * 16 + 4
		assert model.gns.dim == 4 * 16 + 4
		assert model.left.dim == 4 * 16 + 4
		assert model.right.dim == 2
		assert model.isometry.shape == (model.left.dim + model.right.dim, model.gns.dim)
		assert model.identification().shape == (model.left.dim + model.right.dim, 4 * 16 + 2)


	@staticmethod
	def test_isometry(model: SplitGnsModel):
		"""
			Test that V: â ↦ â ⊕ â is an isometry and the identification has orthonormal columns.
		"""
		v = model.isometry
		assert_allclose(v.conj().T @ v, np.eye(model.gns.dim), atol=1e-12)
		w = model.identification()
		assert_allclose(w.conj().T @ w, np.eye(w.shape[1]), atol=1e-12)


	@staticmethod
	def test_identified_operator(model: SplitGnsModel):
		one = model.algebra.one()
		assert_allclose(model.identified_operator(one), np.eye(4 * 16 + 2), atol=1e-12)
		shift = model.identified_operator(model.tensor(model.toeplitz.shift(), np.eye(2)))
		flip = model.identified_operator(model.tensor(model.toeplitz.algebra.one(), model.f(0, 1)))
		assert_allclose(shift @ flip, flip @ shift, atol=1e-12)


	@staticmethod
	def test_tensor(model: SplitGnsModel):
		t = model.toeplitz.matrix_unit(1, 2)
		element = model.tensor(t, model.f(0, 1))
		assert element.blocks[0][2, 5] == 1
		assert np.count_nonzero(element.blocks[0]) == 1
		assert np.count_nonzero(element.blocks[1]) == 0
		assert model.tensor(([[0] * 4] * 4, [[2]]), np.eye(2)).blocks[1][1, 1] == 2


	@staticmethod
	def test_symbol_weight(model: SplitGnsModel):
		assert model.symbol_weight() == pytest.approx(2 ** -4)


class TestVerifyVOnto:
	@staticmethod
	@pytest.mark.parametrize('k', [3, 4])
	def test_passes(k: int):
		report = verify_v_onto(build_example(k))
		assert report.passed
		assert report.k == k
		assert report.isometry_defect < 1e-10
		assert report.compact_leak < 1e-10
		assert report.smallest_singular_value > 1e-8
		assert report.as_dict()['check'] == "v_onto"


	@staticmethod
	def test_custom_psi1():
		toeplitz = TruncatedToeplitz(3)
		psi1 = StateSpec.from_weights(toeplitz.algebra, [[0.3, 0.3, 0.2], [0.2]])
		assert verify_v_onto(build_example(3, psi1=psi1)).passed


class TestVerifyNoncyclic:
	@staticmethod
	def test_passes():
		report = verify_noncyclic(build_example(4))
		assert report.passed
		assert report.orthogonality < 1e-12
		assert report.matrix_commutator < 1e-10
		assert report.shift_commutator < 1e-10
		assert report.commutant_size == 4 * 16 + 1
		assert report.symbol_weight == 2 ** -4
		assert report.shift_boundary_defect == pytest.approx(2 ** -2.5)
		assert report.model_commutant_rank == report.model_dim == 4 * 16 + 4


	@staticmethod
	def test_defects_decrease():
		"""
			Test that both truncation defects shrink as K grows.
		"""
		reports = [verify_noncyclic(build_example(k)) for k in (3, 4, 5)]
		boundaries = [r.shift_boundary_defect for r in reports]
		weights = [r.symbol_weight for r in reports]
		assert boundaries == sorted(boundaries, reverse=True)
		assert weights == sorted(weights, reverse=True)
		assert len(set(boundaries)) == 3


	@staticmethod
	def test_as_dict():
		data = verify_noncyclic(build_example(3)).as_dict()
		assert data['check'] == "noncyclic"
		assert set(data) >= {'exact', 'truncation_defect', 'finite_model'}
		assert data['finite_model']['dim'] == 4 * 9 + 4


def test_build_example_invalid():
	toeplitz = TruncatedToeplitz(4)
	m2 = BlockAlgebra([2], "M2")
	with pytest.raises(ValueError):
		build_example(2)
	with pytest.raises(ValidationError):
		build_example(4, rho=StateSpec.from_weights(m2, [[0.5, 0.5]]))
	with pytest.raises(ValidationError):
		build_example(4, rho=StateSpec.from_weights(m2, [[0, 1]]))
	with pytest.raises(ValidationError):
		build_example(4, rho=StateSpec.from_weights(BlockAlgebra([1, 1]), [[1], [0]]))
	with pytest.raises(ValidationError):
		build_example(4, psi1=StateSpec.from_weights(toeplitz.algebra, [[0.5, 0.5, 0, 0], [0]]))
	with pytest.raises(ValidationError):
		build_example(4, psi1=StateSpec.from_weights(TruncatedToeplitz(3).algebra, [[0.25, 0.25, 0.25], [0.25]]))
