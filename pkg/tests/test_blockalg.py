from __future__ import annotations

import numpy as np
import pytest

from freeprod import BlockAlgebra, StateSpec, StructuralError, ValidationError
from freeprod.blockalg import center, is_faithful, multiply, state_eval
from util import generator


class TestBlockAlgebra:
	@staticmethod
	@pytest.mark.parametrize(
		('blocks', 'expected_dim'),
		[
			([1], 1),
			([1, 1], 2),
			([2], 4),
			([2, 1], 5),
			([2, 2], 8),
			([3, 1, 1], 11),
		]
	)
	def test_dim(blocks: list[int], expected_dim: int):
		"""
			Test `dim`, `__len__()` and `basis()`.
		"""
		algebra = BlockAlgebra(blocks)
		assert algebra.dim == expected_dim
		assert len(algebra) == expected_dim
		assert len(algebra.basis()) == expected_dim


	@staticmethod
	@pytest.mark.parametrize(
		('blocks', 'expected_error'),
		[
			([], ValueError),
			([0], ValueError),
			([2, -1], ValueError),
			([1.5], TypeError),
			([True], TypeError),
		]
	)
	def test_invalid(blocks: list, expected_error: type):
		with pytest.raises(expected_error):
			BlockAlgebra(blocks)


	@staticmethod
	def test_eq_hash():
		"""
			Test `__eq__()` and `__hash__()`, which depend on both the blocks and the label.
		"""
		assert BlockAlgebra([2, 1], "a") == BlockAlgebra([2, 1], "a")
		assert hash(BlockAlgebra([2, 1], "a")) == hash(BlockAlgebra([2, 1], "a"))
		assert BlockAlgebra([2, 1], "a") != BlockAlgebra([1, 2], "a")
		assert BlockAlgebra([2, 1], "a") != BlockAlgebra([2, 1], "b")


	@staticmethod
	@pytest.mark.parametrize('blocks', [[1], [1, 1], [2], [2, 1], [3, 2]])
	def test_vector_roundtrip(blocks: list[int]):
		"""
			Test that `from_vector()` inverts `AlgebraElement.to_vector()` and that matrix units are the coordinate basis.
		"""
		algebra = BlockAlgebra(blocks)
		a = algebra.random_element(generator(1))
		assert algebra.from_vector(a.to_vector()).allclose(a)
		for k, u in enumerate(algebra.basis()):
			expected = np.zeros(algebra.dim)
			expected[k] = 1
			assert np.array_equal(u.to_vector(), expected)


	@staticmethod
	def test_matrix_unit_out_of_range():
		algebra = BlockAlgebra([2, 1])
		with pytest.raises(StructuralError):
			algebra.matrix_unit(2, 0, 0)
		with pytest.raises(StructuralError):
			algebra.matrix_unit(1, 0, 1)


class TestAlgebraElement:
	@staticmethod
	def test_multiply_blockwise():
		"""
			Test that `*` multiplies block by block.
		"""
		algebra = BlockAlgebra([2, 1])
		a = algebra.element([[[1, 2], [3, 4]], [[5]]])
		b = algebra.element([[[0, 1], [1, 0]], [[2]]])
		product = a * b
		assert np.array_equal(product.blocks[0], np.array([[2, 1], [4, 3]]))
		assert np.array_equal(product.blocks[1], np.array([[10]]))
		assert multiply(a, b).allclose(product)


	@staticmethod
	def test_adjoint_and_norm():
		algebra = BlockAlgebra([2, 1])
		a = algebra.element([[[0, 1j], [0, 0]], [[3]]])
		assert np.array_equal(a.adjoint().blocks[0], np.array([[0, 0], [-1j, 0]]))
		assert a.norm() == pytest.approx(3)
		assert (a * a.adjoint()).norm() == pytest.approx(a.norm() ** 2)


	@staticmethod
	def test_arithmetic():
		algebra = BlockAlgebra([1, 1])
		one = algebra.one()
		p = algebra.matrix_unit(0, 0, 0)
		assert (one - p).allclose(algebra.matrix_unit(1, 0, 0))
		assert (2 * p + p * 3).allclose(5 * p)
		assert (-p).allclose(p * -1)
		assert (p * p).allclose(p)


	@staticmethod
	def test_immutable():
		algebra = BlockAlgebra([2])
		a = algebra.one()
		with pytest.raises(ValueError):
			a.blocks[0][0, 0] = 2


	@staticmethod
	def test_different_parents():
		a = BlockAlgebra([2], "a").one()
		b = BlockAlgebra([2], "b").one()
		with pytest.raises(StructuralError):
			a * b
		with pytest.raises(StructuralError):
			a + b


	@staticmethod
	def test_wrong_shape():
		with pytest.raises(StructuralError):
			BlockAlgebra([2, 1]).element([np.eye(2)])


class TestStateSpec:
	@staticmethod
	@pytest.mark.parametrize(
		('densities', 'expected_block'),
		[
			([[[0.5, 0], [0, -0.5]]], 0),
			([[[1, 1], [1, 1]], [[-0.1]]], 1),
		]
	)
	def test_not_psd(densities: list, expected_block: int):
		"""
			Test that a density with a negative eigenvalue is rejected, naming the block and the eigenvalue.
		"""
		blocks = [len(m) for m in densities]
		with pytest.raises(ValidationError) as e:
			StateSpec(BlockAlgebra(blocks), densities)
		assert e.value.block == expected_block
		assert e.value.eigenvalue < 0


	@staticmethod
	def test_not_hermitian():
		with pytest.raises(ValidationError) as e:
			StateSpec(BlockAlgebra([2]), [[[0.5, 0.1], [0, 0.5]]])
		assert e.value.block == 0


	@staticmethod
	def test_trace_not_one():
		with pytest.raises(ValidationError):
			StateSpec.from_weights(BlockAlgebra([1, 1]), [[0.5], [0.6]])


	@staticmethod
	def test_evaluate():
		algebra = BlockAlgebra([2, 1])
		phi = StateSpec.from_weights(algebra, [[0.5, 0.25], [0.25]])
		assert phi(algebra.one()) == pytest.approx(1)
		assert phi(algebra.matrix_unit(0, 1, 1)) == pytest.approx(0.25)
		assert phi(algebra.matrix_unit(0, 0, 1)) == pytest.approx(0)
		assert state_eval(phi, algebra.matrix_unit(1, 0, 0)) == pytest.approx(0.25)


	@staticmethod
	@pytest.mark.parametrize(
		('blocks', 'weights', 'expected_faithful', 'expected_margin'),
		[
			([1, 1], [[0.5], [0.5]], True, 0.5),
			([1, 1], [[0.3], [0.7]], True, 0.3),
			([2], [[0.75, 0.25]], True, 0.25),
			([2], [[1, 0]], False, 0.0),
			([2, 1], [[0.5, 0.5], [0]], False, 0.0),
		]
	)
	def test_is_faithful(blocks: list[int], weights: list[list[float]], expected_faithful: bool, expected_margin: float):
		"""
			Test `is_faithful()` and its margin.
		"""
		phi = StateSpec.from_weights(BlockAlgebra(blocks), weights)
		result = phi.is_faithful()
		assert bool(result) == expected_faithful
		assert result.margin == pytest.approx(expected_margin)
		assert is_faithful(phi) == result


	@staticmethod
	def test_is_faithful_margin_block():
		phi = StateSpec.from_weights(BlockAlgebra([2, 1]), [[0.45, 0.45], [0.1]])
		assert phi.is_faithful().block == 1


	@staticmethod
	def test_is_tracial():
		algebra = BlockAlgebra([2, 1])
		assert StateSpec.trace(algebra).is_tracial()
		assert StateSpec.from_weights(algebra, [[0.25, 0.25], [0.5]]).is_tracial()
		assert not StateSpec.from_weights(algebra, [[0.5, 0.25], [0.25]]).is_tracial()


	@staticmethod
	def test_vector_state():
		algebra = BlockAlgebra([2])
		v = np.array([1, 1j]) / np.sqrt(2)
		phi = StateSpec.vector_state(algebra, 0, v)
		assert phi(algebra.matrix_unit(0, 0, 1)) == pytest.approx(np.vdot(v, algebra.matrix_unit(0, 0, 1).blocks[0] @ v))
		assert not phi.is_faithful()
		with pytest.raises(ValidationError):
			StateSpec.vector_state(algebra, 0, [1, 1])
		with pytest.raises(StructuralError):
			StateSpec.vector_state(algebra, 1, v)
		with pytest.raises(StructuralError):
			StateSpec.vector_state(algebra, -1, v)
		with pytest.raises(StructuralError):
			StateSpec.vector_state(algebra, 0, [1, 0, 0])


	@staticmethod
	def test_mixed_with():
		"""
			Test `mixed_with()`, which is faithful as soon as one of the mixed states is.
		"""
		algebra = BlockAlgebra([2])
		pure = StateSpec.from_weights(algebra, [[1, 0]])
		faithful = StateSpec.trace(algebra)
		mixed = pure.mixed_with(faithful, 0.5)
		assert mixed.is_faithful().margin == pytest.approx(0.25)
		assert mixed(algebra.matrix_unit(0, 0, 0)) == pytest.approx(0.75)
		with pytest.raises(ValueError):
			pure.mixed_with(faithful, 1.5)


	@staticmethod
	def test_centered():
		algebra = BlockAlgebra([1, 1])
		phi = StateSpec.from_weights(algebra, [[0.3], [0.7]])
		p = algebra.matrix_unit(0, 0, 0)
		centred = p.centered(phi)
		assert phi(centred) == pytest.approx(0, abs=1e-15)
		assert center(p, phi).allclose(centred)
		assert centred.allclose(algebra.element([[[0.7]], [[-0.3]]]))
