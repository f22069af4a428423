from __future__ import annotations

import pytest

from freeprod import DenseSpace, NCPoly, StructuralError, TruncationError
from freeprod.config import spawn_generators
from freeprod.suites import faithfulness_suite, lemma_suite, moments_suite, vav_suite, witness_suite
from util import c2, c2_m2_space, generator, m2, projection_p, space_of, two_c2_space


class TestMomentsSuite:
	@staticmethod
	def test_default_unit():
		report = moments_suite(two_c2_space(), [])
		assert report.passed
		(entry,) = report.entries
		assert entry['value_re'] == 1
		assert entry['degree'] == 0
		assert entry['depth'] == 4
		assert entry['exact'] is True


	@staticmethod
	def test_oracle_and_stability():
		space = c2_m2_space(3)
		polys = [NCPoly.random(space, 3, generator(seed)) for seed in range(3)]
		report = moments_suite(space, polys, DenseSpace(space.factors, space.depth), c2_m2_space(4))
		assert report.passed
		assert [e['index'] for e in report.entries] == [0, 1, 2]
		assert all(e['oracle_residual'] < 1e-10 and e['depth_residual'] < 1e-10 for e in report.entries)
		assert all(e['depth'] == 3 and e['exact'] for e in report.entries)


	@staticmethod
	def test_truncation():
		space = two_c2_space(2)
		poly = NCPoly.word([(label, projection_p(space, label)) for label in ["p", "q", "p"]])
		with pytest.raises(TruncationError):
			moments_suite(space, [poly])


class TestLemmaSuite:
	@staticmethod
	def test_branches():
		report = lemma_suite(c2_m2_space(5), spawn_generators(1, 30))
		assert report.passed
		assert set(report.branches) == {"scalar-identity", "scalar-target", "zero"}
		assert sum(report.branches.values()) == 30
		assert report.oracle_residual is None
		assert report.as_dict()['check'] == "lemma"


	@staticmethod
	def test_single_factor():
		"""
			Test that a single factor, which has no alternating words beyond length 1, still runs.
		"""
		report = lemma_suite(space_of([m2("b")], 3), spawn_generators(2, 9))
		assert report.passed
		assert report.instances == 9
		assert report.branches["scalar-identity"] == 0


class TestVavSuite:
	@staticmethod
	@pytest.mark.parametrize('target', [None, "a", "b"])
	def test_passes(target: str):
		report = vav_suite(c2_m2_space(3), generator(4), 2, target, words=10)
		assert report.passed
		if target is not None:
			assert report.word[-1] == target


	@staticmethod
	def test_errors():
		space = c2_m2_space(3)
		with pytest.raises(StructuralError):
			vav_suite(space, generator(5), 2, "c")
		with pytest.raises(TruncationError) as e:
			vav_suite(space, generator(5), 3)
		assert e.value.required_depth == 5
		with pytest.raises(StructuralError):
			vav_suite(space_of([m2("b")], 3), generator(5), 2)


class TestFaithfulnessSuite:
	@staticmethod
	def test_passes():
		space = c2_m2_space(4)
		report = faithfulness_suite(space, spawn_generators(3, 12), 2, DenseSpace(space.factors, space.depth))
		assert report.passed
		assert report.instances == report.witnesses == 12
		assert report.vacuum_witnesses == 12
		assert report.norm_residual < 1e-10
		assert report.oracle_residual < 1e-10


	@staticmethod
	def test_errors():
		with pytest.raises(TruncationError) as e:
			faithfulness_suite(two_c2_space(3), spawn_generators(0, 1), 2)
		assert e.value.required_depth == 4
		with pytest.raises(ValueError):
			faithfulness_suite(two_c2_space(3), spawn_generators(0, 1), 0)


class TestWitnessSuite:
	@staticmethod
	def test_pure_state():
		"""
			Test that e_11 under the pure state of M_2 is witnessed on the word b rather than at ξ, in agreement with the dense reference.
		"""
		space = space_of([c2("a"), m2("b", (1, 0))], 3)
		x = NCPoly.letter("b", space.factor("b").algebra.matrix_unit(0, 1, 1))
		report = witness_suite(space, [x, NCPoly.constant(1)], DenseSpace(space.factors, space.depth))
		assert report.passed
		assert [e['word'] for e in report.entries] == ["b", "ε"]
		assert [e['value'] for e in report.entries] == [pytest.approx(1), pytest.approx(1)]
		assert all(e['oracle_residual'] < 1e-10 for e in report.entries)
		assert report.as_dict()['check'] == "faithfulness_witnesses"


	@staticmethod
	def test_zero():
		report = witness_suite(two_c2_space(2), [NCPoly.constant(0)])
		assert not report.passed
		(entry,) = report.entries
		assert entry['verdict'] == "numerically_zero"
		assert 'oracle_residual' not in entry


	@staticmethod
	def test_truncation():
		space = two_c2_space(2)
		x = NCPoly.word([(label, projection_p(space, label)) for label in ["p", "q", "p"]])
		with pytest.raises(TruncationError):
			witness_suite(space, [x])
