"""
	Exceptions raised by freeprod.

	Every concrete error also derives from the builtin exception a caller would expect, so `except ValueError` keeps working for code that does not know about freeprod.
"""

from __future__ import annotations

from typing import Optional


__all__ = (
	'FreeProductError',
	'StructuralError',
	'ValidationError',
	'TruncationError',
	'WitnessConstructionError',
	'ConfigError',
	'DimensionLimitError',
)


class FreeProductError(Exception):
	"""Base class of all freeprod errors"""


class StructuralError(FreeProductError, ValueError):
	"""
		Objects that do not fit together: mismatched parent algebras, unknown factors or words, alternation breaches, wrong numbers of components.
	"""


class ValidationError(FreeProductError, ValueError):
	"""
		Numerical data that fails validation, such as a density that is not positive semidefinite.

		Attributes
		----------
		`block`
		: index of the offending block, if the failure is tied to one

		`eigenvalue`
		: the eigenvalue (or other scalar) that failed the check, if any
	"""

	def __init__(self, message: str, block: Optional[int]=None, eigenvalue: Optional[float]=None):
		super().__init__(message)
		self.block = block
		self.eigenvalue = eigenvalue


class TruncationError(FreeProductError, ValueError):
	"""
		A computation would not be exact at the truncation depth of the space.

		Attributes
		----------
		`required_depth`
		: the smallest depth at which the computation is exact
	"""

	def __init__(self, message: str, required_depth: int):
		super().__init__(message)
		self.required_depth = required_depth


class WitnessConstructionError(FreeProductError, RuntimeError):
	"""No letter pairs with the given vector, so a compression witness cannot be built"""


class ConfigError(FreeProductError, ValueError):
	"""Malformed run configuration"""


class DimensionLimitError(FreeProductError, ValueError):
	"""The dense reference construction would exceed its size ceiling"""
