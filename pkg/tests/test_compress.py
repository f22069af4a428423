from __future__ import annotations

import numpy as np
import pytest
from numpy.testing import assert_allclose

from freeprod import (
	CompressionIsometry,
	FreeFockSpace,
	LemmaBranch,
	Letter,
	NCPoly,
	RepOperator,
	StructuralError,
	TruncationError,
	ValidationError,
	classify,
	faithfulness_witness,
	lemma_value,
	vav_surjectivity,
)
from freeprod.compress import build_isometry, compress, induction_step, operator_norm, witness_scan
from freeprod.freerep import represent_poly
from util import c2_m2_space, generator, projection_p, two_c2_space


A_ZETA = np.array([0, 1])


def _isometry(space: FreeFockSpace, labels: list[str], seed: int=0) -> CompressionIsometry:
	"""V for the word `labels`, with ζ_j the unit of C² or a random unit of H°"""
	rng = generator(seed)
	zetas = [(label, A_ZETA if label == "a" else space.factor(label).random_complement_unit(rng)) for label in labels[:-1]]
	return CompressionIsometry(space, zetas, labels[-1])


def _centred_letters(space: FreeFockSpace, labels: list[str], seed: int=1) -> list[Letter]:
	rng = generator(seed)
	letters = []
	for label in labels:
		factor = space.factor(label)
		letters.append(Letter(label, factor.algebra.random_element(rng).centered(factor.state)))
	return letters


def _direct(isometry: CompressionIsometry, letters: list[Letter]) -> np.ndarray:
	return compress(isometry, represent_poly(isometry.space, NCPoly.word(letters)))


class TestLemmaBranch:
	@staticmethod
	@pytest.mark.parametrize(
		('name', 'expected_branch'),
		[
			("scalar-identity", LemmaBranch.SCALAR_IDENTITY),
			("scalar-target", LemmaBranch.SCALAR_TARGET),
			("zero", LemmaBranch.ZERO),
		]
	)
	def test_from_str(name: str, expected_branch: LemmaBranch):
		"""
			Test `from_str()` and `__str__()`.
		"""
		assert LemmaBranch.from_str(name) == expected_branch
		assert str(expected_branch) == name


	@staticmethod
	def test_from_str_invalid():
		with pytest.raises(ValueError):
			LemmaBranch.from_str("identity")


@pytest.mark.parametrize(
	('letter_labels', 'isometry_labels', 'expected_branch', 'expected_p'),
	[
		(["a"], ["a"], LemmaBranch.SCALAR_TARGET, 1),
		(["a"], ["a", "b"], LemmaBranch.SCALAR_IDENTITY, 1),
		(["b"], ["a", "b"], LemmaBranch.ZERO, None),
		(["a", "b", "a"], ["a", "b"], LemmaBranch.SCALAR_TARGET, 2),
		(["a", "b", "a"], ["a", "b", "a"], LemmaBranch.SCALAR_IDENTITY, 2),
		(["a", "b", "a"], ["a"], LemmaBranch.ZERO, None),
		(["b", "a", "b"], ["a", "b"], LemmaBranch.ZERO, None),
		(["a", "b"], ["a", "b"], LemmaBranch.ZERO, None),
		(["a", "b", "a", "b", "a"], ["a", "b", "a"], LemmaBranch.SCALAR_TARGET, 3),
		(["a", "b", "c", "b", "a"], ["a", "b", "a"], LemmaBranch.ZERO, None),
	]
)
def test_classify(letter_labels: list[str], isometry_labels: list[str], expected_branch: LemmaBranch, expected_p: int):
	branch, p = classify(len(letter_labels), len(isometry_labels), letter_labels, isometry_labels)
	assert branch == expected_branch
	assert p == expected_p


def test_classify_invalid():
	with pytest.raises(StructuralError):
		classify(3, 2, ["a", "b", "b"], ["a", "b"])
	with pytest.raises(StructuralError):
		classify(2, 1, ["a"], ["a"])


class TestCompressionIsometry:
	@staticmethod
	@pytest.mark.parametrize('labels', [["a"], ["b"], ["a", "b"], ["b", "a", "b"], ["a", "b", "a", "b"]])
	def test_isometry(labels: list[str]):
		space = c2_m2_space(4)
		isometry = _isometry(space, labels)
		assert isometry.n == len(labels)
		assert isometry.target == labels[-1]
		assert isometry.matrix.shape == (space.total_dim, space.factor(labels[-1]).dim)
		assert isometry.isometry_defect() < 1e-12


	@staticmethod
	def test_vacuum_image():
		"""
			Test that V sends ξ_{ι_n} to ζ_1 ⊗ ... ⊗ ζ_{n-1} and H° to the summand of the full word.
		"""
		space = c2_m2_space(3)
		zeta = space.factor("b").random_complement_unit(generator(2))
		isometry = build_isometry(space, [("a", A_ZETA), ("b", zeta)], "a")
		image = isometry.matrix.toarray()
		assert_allclose(image[:, 0], space.product_vector(["a", "b"], [A_ZETA, zeta]), atol=1e-12)
		assert_allclose(image[:, 1], space.product_vector(["a", "b", "a"], [A_ZETA, zeta, A_ZETA]), atol=1e-12)


	@staticmethod
	def test_shifted():
		space = c2_m2_space(4)
		isometry = _isometry(space, ["b", "a", "b"])
		shifted = isometry.shifted()
		assert str(shifted.word) == "a.b"
		assert_allclose(shifted.zetas[0], isometry.zetas[1])
		with pytest.raises(StructuralError):
			_isometry(space, ["b"]).shifted()


	@staticmethod
	def test_invalid():
		space = c2_m2_space(2)
		with pytest.raises(ValidationError) as e:
			CompressionIsometry(space, [("a", 2 * A_ZETA)], "b")
		assert "rescale it by 0.5" in str(e.value)
		with pytest.raises(ValidationError):
			CompressionIsometry(space, [("a", np.array([1, 0]))], "b")
		with pytest.raises(StructuralError):
			CompressionIsometry(space, [("a", np.array([0, 1, 0]))], "b")
		with pytest.raises(StructuralError):
			CompressionIsometry(space, [("a", A_ZETA)], "a")
		with pytest.raises(StructuralError):
			CompressionIsometry(space, [("a", A_ZETA)], "c")
		with pytest.raises(TruncationError) as e:
			_isometry(space, ["a", "b", "a"])
		assert e.value.required_depth == 3


class TestLemmaValue:
	@staticmethod
	@pytest.mark.parametrize(
		('isometry_labels', 'letter_labels', 'expected_branch'),
		[
			(["b", "a", "b"], ["b", "a", "b", "a", "b"], LemmaBranch.SCALAR_TARGET),
			(["b", "a", "b"], ["b", "a", "b"], LemmaBranch.SCALAR_IDENTITY),
			(["b", "a", "b"], ["b"], LemmaBranch.SCALAR_IDENTITY),
			(["b", "a", "b"], ["a", "b", "a"], LemmaBranch.ZERO),
			(["b", "a", "b"], ["b", "a"], LemmaBranch.ZERO),
			(["a", "b"], ["a", "b", "a"], LemmaBranch.SCALAR_TARGET),
			(["a", "b"], ["a"], LemmaBranch.SCALAR_IDENTITY),
			(["b"], ["b"], LemmaBranch.SCALAR_TARGET),
			(["b"], ["b", "a", "b"], LemmaBranch.ZERO),
		]
	)
	def test_matches_direct(isometry_labels: list[str], letter_labels: list[str], expected_branch: LemmaBranch):
		"""
			Test that the closed form agrees with the direct compression V* a_1 ... a_m V.
		"""
		space = c2_m2_space(5)
		isometry = _isometry(space, isometry_labels)
		letters = _centred_letters(space, letter_labels)
		case = lemma_value(isometry, letters)
		assert case.branch == expected_branch
		assert case.m == len(letters)
		assert case.n == isometry.n
		assert_allclose(case.matrix(isometry), _direct(isometry, letters), atol=1e-10)


	@staticmethod
	def test_scalar_is_non_zero():
		"""
			Test that the scalar of a mirrored product of generic centred letters is non-zero.
		"""
		space = c2_m2_space(5)
		isometry = _isometry(space, ["b", "a", "b"])
		case = lemma_value(isometry, _centred_letters(space, ["b", "a", "b", "a", "b"]))
		assert abs(case.scalar) > 1e-6
		assert case.p == 3
		assert case.element is not None


	@staticmethod
	def test_adjoint():
		"""
			Test that the reversed product of adjoint letters compresses to the adjoint.
		"""
		space = c2_m2_space(5)
		isometry = _isometry(space, ["b", "a", "b"])
		letters = _centred_letters(space, ["b", "a", "b", "a", "b"])
		case = lemma_value(isometry, letters)
		reversed_case = lemma_value(isometry, [letter.adjoint() for letter in reversed(letters)])
		assert_allclose(reversed_case.matrix(isometry), case.adjoint().matrix(isometry), atol=1e-10)
		assert_allclose(case.adjoint().matrix(isometry), case.matrix(isometry).conj().T, atol=1e-10)


	@staticmethod
	def test_not_centred():
		space = c2_m2_space(3)
		isometry = _isometry(space, ["a", "b"])
		with pytest.raises(ValidationError):
			lemma_value(isometry, [("a", projection_p(space, "a"))])


class TestCompress:
	@staticmethod
	def test_truncation():
		space = c2_m2_space(5)
		isometry = _isometry(space, ["b", "a", "b"])
		letters = _centred_letters(space, ["a", "b", "a", "b", "a", "b"])
		with pytest.raises(TruncationError) as e:
			_direct(isometry, letters)
		assert e.value.required_depth == 6


	@staticmethod
	def test_different_space():
		isometry = _isometry(c2_m2_space(3), ["a", "b"])
		with pytest.raises(StructuralError):
			compress(isometry, RepOperator.identity(c2_m2_space(3)))


	@staticmethod
	def test_identity():
		"""
			Test that V* 1 V = 1.
		"""
		space = c2_m2_space(3)
		isometry = _isometry(space, ["a", "b"])
		assert_allclose(compress(isometry, RepOperator.identity(space)), np.eye(4), atol=1e-12)


	@staticmethod
	@pytest.mark.parametrize(
		('labels', 'seed'),
		[
			(["b"], 0),
			(["a", "b"], 1),
			(["b", "a", "b"], 2),
			(["a", "b", "a"], 3),
		]
	)
	def test_adjoint(labels: list[str], seed: int):
		"""
			Test that V* T* V is the adjoint of V* T V.
		"""
		space = c2_m2_space(5)
		isometry = _isometry(space, labels, seed)
		operator = represent_poly(space, NCPoly.random(space, 3, generator(seed + 10)))
		assert_allclose(compress(isometry, operator.adjoint()), compress(isometry, operator).conj().T, atol=1e-12)


class TestInductionStep:
	@staticmethod
	@pytest.mark.parametrize(
		('isometry_labels', 'letter_labels'),
		[
			(["b", "a", "b"], ["b", "a", "b"]),
			(["b", "a", "b"], ["b", "a", "b", "a", "b"]),
			(["a", "b"], ["a", "b", "a"]),
		]
	)
	def test_residual(isometry_labels: list[str], letter_labels: list[str]):
		space = c2_m2_space(5)
		isometry = _isometry(space, isometry_labels)
		step = induction_step(isometry, _centred_letters(space, letter_labels))
		assert step.shifted.n == isometry.n - 1
		assert step.residual < 1e-10


	@staticmethod
	def test_invalid():
		space = c2_m2_space(5)
		with pytest.raises(StructuralError):
			induction_step(_isometry(space, ["b", "a", "b"]), _centred_letters(space, ["b", "a"]))
		with pytest.raises(StructuralError):
			induction_step(_isometry(space, ["b", "a", "b"]), _centred_letters(space, ["a", "b", "a"]))
		with pytest.raises(StructuralError):
			induction_step(_isometry(space, ["b"]), _centred_letters(space, ["b", "a", "b"]))


class TestVavSurjectivity:
	@staticmethod
	@pytest.mark.parametrize(
		('labels', 'expected_recovered'),
		[
			(["a", "b"], 4),
			(["b", "a"], 2),
			(["b"], 4),
		]
	)
	def test_passes(labels: list[str], expected_recovered: int):
		space = c2_m2_space(4)
		report = vav_surjectivity(_isometry(space, labels), generator(3), words=20)
		assert report.passed
		assert report.recovered == expected_recovered
		assert report.words_tested == 20
		assert report.recovery_residual < 1e-8
		assert report.containment_residual < 1e-8
		assert report.as_dict()['n'] == len(labels)


	@staticmethod
	def test_truncation():
		space = c2_m2_space(4)
		with pytest.raises(TruncationError) as e:
			vav_surjectivity(_isometry(space, ["b", "a", "b"]))
		assert e.value.required_depth == 5


class TestFaithfulnessWitness:
	@staticmethod
	def test_projection_operator():
		"""
			Test that the scan of a summand projection stops at the first vector of that summand.
		"""
		space = two_c2_space(3)
		operator = RepOperator(space, space.projection(["q", "p"]).matrix, 0)
		witness = witness_scan(space, operator)
		assert witness.found
		assert str(witness.word) == "q.p"
		assert witness.multi_index == (0, 0)
		assert witness.value == pytest.approx(1)
		assert str(witness.support_word) == "q.p"
		assert witness.chain_residual == pytest.approx(0, abs=1e-12)
		assert witness.compressed_norm == pytest.approx(1)
		assert witness.as_dict()['verdict'] == "witness"


	@staticmethod
	def test_scan_length():
		space = two_c2_space(3)
		operator = RepOperator(space, space.projection(["q", "p"]).matrix, 0)
		witness = witness_scan(space, operator, max_length=1)
		assert not witness.found
		assert witness.numerically_zero
		assert witness.scanned == 3
		with pytest.raises(TruncationError):
			witness_scan(space, operator, max_length=4)


	@staticmethod
	def test_zero():
		space = two_c2_space(2)
		witness = witness_scan(space, RepOperator(space, np.zeros((5, 5))))
		assert not witness.passed
		assert witness.as_dict()['verdict'] == "numerically_zero"
		assert witness.chain_residual is None


	@staticmethod
	def test_vacuum():
		"""
			Test that φ(x* x) = ‖p̂°‖² = ¼ is found at ξ for x = p°.
		"""
		space = two_c2_space(4)
		p = projection_p(space, "p").centered(space.factor("p").state)
		witness = faithfulness_witness(space, NCPoly.letter("p", p))
		assert witness.found
		assert witness.word.is_vacuum
		assert witness.value == pytest.approx(0.25)
		assert faithfulness_witness(space, NCPoly.constant(1)).value == pytest.approx(1)


	@staticmethod
	@pytest.mark.parametrize('seed', [0, 1, 2, 3])
	def test_random(seed: int):
		space = c2_m2_space(4)
		x = NCPoly.random(space, 2, generator(seed))
		witness = faithfulness_witness(space, x)
		assert witness.passed
		assert witness.value > witness.threshold


	@staticmethod
	def test_threshold():
		"""
			Test that the threshold is `pos` times the operator norm, which is estimated sparsely above 64 dimensions.
		"""
		space = c2_m2_space(5)
		assert space.total_dim > 64
		x = NCPoly.random(space, 2, generator(5))
		operator = represent_poly(space, x.adjoint() * x)
		dense_norm = np.linalg.norm(operator.matrix.toarray(), 2)
		assert operator_norm(operator.matrix) == pytest.approx(dense_norm, rel=1e-8)
		assert witness_scan(space, operator).threshold == pytest.approx(space.tolerances.pos * dense_norm, rel=1e-8)
		assert operator_norm(np.diag([3, -4])) == pytest.approx(4)
		assert operator_norm(np.zeros((3, 3))) == 0


	@staticmethod
	def test_truncation():
		space = two_c2_space(2)
		x = NCPoly.word([(label, projection_p(space, label)) for label in ["p", "q", "p"]])
		with pytest.raises(TruncationError) as e:
			faithfulness_witness(space, x)
		assert e.value.required_depth == 3
