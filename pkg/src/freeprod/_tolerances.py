from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Any, Final, Optional


__all__ = ('Tolerances', 'DEFAULT_TOLERANCES', 'resolve')


@dataclass(frozen=True)
class Tolerances:
	"""
		Immutable set of numerical tolerances.

		Attributes
		----------
		`psd`
		: smallest eigenvalue a density may have and still count as positive semidefinite (as `-psd`)

		`norm`
		: allowed deviation of traces, Hermiticity and imaginary parts

		`faithful`
		: a density is faithful when all of its eigenvalues exceed this; also the rank cut-off for Gram matrices

		`free`
		: largest alternating centred moment accepted by the freeness check

		`pos`
		: relative threshold separating a positive witness value from float noise

		`isometry`
		: allowed deviation of V*V from the identity
	"""

	psd: float = 1e-10
	norm: float = 1e-10
	faithful: float = 1e-8
	free: float = 1e-10
	pos: float = 1e-9
	isometry: float = 1e-12

	def __post_init__(self):
		for field in dataclasses.fields(self):
			value = getattr(self, field.name)
			if not isinstance(value, (int, float)) or isinstance(value, bool):
				raise TypeError(f"tolerance {field.name} must be a float: {value} ({type(value)})")
			if not value > 0:
				raise ValueError(f"tolerance {field.name} must be positive: {value}")

	def replace(self, **changes: Any) -> Tolerances:
		"""
			Return a copy with some tolerances replaced; entries given as None are ignored.

			Examples
			--------
			```python
			DEFAULT_TOLERANCES.replace(free=1e-9).free  # 1e-9
			DEFAULT_TOLERANCES.replace(free=None).free  # 1e-10
			```
		"""
		return dataclasses.replace(self, **{k: float(v) for k, v in changes.items() if v is not None})

	def as_dict(self) -> dict[str, float]:
		return dataclasses.asdict(self)


DEFAULT_TOLERANCES: Final = Tolerances()


def resolve(*candidates: Optional[Tolerances]) -> Tolerances:
	"""Return the first candidate that is not None, or `DEFAULT_TOLERANCES`"""
	for candidate in candidates:
		if candidate is not None:
			return candidate
	return DEFAULT_TOLERANCES
