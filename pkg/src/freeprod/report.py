from __future__ import annotations

import json
import math
from abc import ABC, abstractmethod
from typing import Any, Final, Union


__all__ = ('Report', 'ReportGroup', 'render_json', 'complex_fields', 'REPORT_SCHEMA')


REPORT_SCHEMA: Final = 1


class Report(ABC):
	"""
		Abstract interface for the result of a verification suite.

		Abstract properties
		-------------------
		`passed: bool`
		: read-only flag for whether every check in the report is within tolerance

		Abstract methods
		----------------
		`as_dict() -> dict`
		: JSON-compatible view of the report, without the schema tag
	"""

	@property
	@abstractmethod
	def passed(self) -> bool:
		pass

	@abstractmethod
	def as_dict(self) -> dict[str, Any]:
		pass

	def __bool__(self) -> bool:
		"""
			Same as `passed`.

			Usage: <code>bool(<var>r</var>)</code> or <code>if <var>r</var>:</code>
		"""
		return self.passed


class ReportGroup(Report):
	"""
		Several named reports that pass together.

		Examples
		--------
		```python
		ReportGroup("freeness", {"freeness": f, "state_restriction": r}).passed  # f.passed and r.passed
		```
	"""

	__slots__ = ('check', 'reports')

	def __init__(self, check: str, reports: dict[str, Report]):
		self.check = check
		self.reports = dict(reports)

	@property
	def passed(self) -> bool:
		return all(r.passed for r in self.reports.values())

	def as_dict(self) -> dict[str, Any]:
		return {
			'check': self.check,
			'reports': {name: dict(r.as_dict(), passed=r.passed) for name, r in self.reports.items()},
		}


def complex_fields(value: complex, prefix: str="value") -> dict[str, float]:
	"""Split a complex number into `<prefix>_re` and `<prefix>_im` entries"""
	value = complex(value)
	return {f"{prefix}_re": value.real, f"{prefix}_im": value.imag}


def _jsonable(obj: Any) -> Any:
	if isinstance(obj, Report):
		return _jsonable(obj.as_dict())
	if isinstance(obj, dict):
		return {str(k): _jsonable(v) for k, v in obj.items()}
	if isinstance(obj, (list, tuple)):
		return [_jsonable(v) for v in obj]
	if isinstance(obj, bool) or obj is None or isinstance(obj, str):
		return obj
	if isinstance(obj, complex):
		return [_jsonable(obj.real), _jsonable(obj.imag)]
	if hasattr(obj, 'item'):  # numpy scalars
		return _jsonable(obj.item())
	if isinstance(obj, float):
		return obj if math.isfinite(obj) else str(obj)
	if isinstance(obj, int):
		return obj
	return str(obj)


def render_json(report: Union[Report, dict[str, Any]], indent: int=2) -> str:
	"""
		Render a report as deterministic JSON.

		Keys are sorted and a top-level `"schema"` entry is added, so that identical inputs always render to identical bytes.
	"""
	body = _jsonable(report)
	body['schema'] = REPORT_SCHEMA
	if isinstance(report, Report):
		body['passed'] = report.passed
	return json.dumps(body, sort_keys=True, indent=indent) + "\n"
