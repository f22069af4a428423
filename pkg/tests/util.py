from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
import pytest

from freeprod import BlockAlgebra, FreeFockSpace, GnsSpace, StateSpec


@dataclass
class FactorData:
	label: str
	blocks: list[int]
	weights: list[list[float]] = field(default_factory=list)

	def algebra(self) -> BlockAlgebra:
		return BlockAlgebra(self.blocks, self.label)

	def state(self) -> StateSpec:
		weights = self.weights or [[1 / sum(self.blocks)] * d for d in self.blocks]
		return StateSpec.from_weights(self.algebra(), weights)

	def gns(self) -> GnsSpace:
		return GnsSpace(self.state())


def c2(label: str, weights: Sequence[float]=(0.5, 0.5)) -> FactorData:
	"""C² with the state (w_0, w_1)"""
	return FactorData(label, [1, 1], [[weights[0]], [weights[1]]])


def m2(label: str, weights: Sequence[float]=(0.75, 0.25)) -> FactorData:
	"""M_2 with a diagonal density"""
	return FactorData(label, [2], [list(weights)])


def space_of(factors: Sequence[FactorData], depth: int, allow_trivial: bool=False) -> FreeFockSpace:
	return FreeFockSpace([f.gns() for f in factors], depth, allow_trivial)


def two_c2_space(depth: int=4) -> FreeFockSpace:
	"""Two free copies of C² with the state (½, ½), labelled p and q"""
	return space_of([c2("p"), c2("q")], depth)


def c2_m2_space(depth: int=4) -> FreeFockSpace:
	"""C² with the state (0.3, 0.7) labelled a, and faithful M_2 labelled b"""
	return space_of([c2("a", (0.3, 0.7)), m2("b")], depth)


def projection_p(space: FreeFockSpace, label: str):
	"""The minimal projection (1, 0) of a C² factor"""
	return space.factor(label).algebra.matrix_unit(0, 0, 0)


def generator(seed: int=0) -> np.random.Generator:
	return np.random.Generator(np.random.Philox(seed))


class TestFreeProduct:
	@staticmethod
	@pytest.fixture
	def factor(request: pytest.FixtureRequest) -> GnsSpace:
		return request.param.gns()

	@staticmethod
	@pytest.fixture
	def space(request: pytest.FixtureRequest) -> FreeFockSpace:
		factors, depth = request.param
		return space_of(factors, depth)
