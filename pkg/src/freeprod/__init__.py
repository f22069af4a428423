"""
	freeprod computes with reduced free products of finite-dimensional C*-algebras: GNS spaces of states, the free product Hilbert space truncated at a word depth, the left action of each factor, the free product state, and compressions by the isometries used to show that the free product of faithful states is faithful.

	The package logs to the `freeprod` logger and installs no handlers; the `freeprod` command logs to stderr.
"""


__version__ = '0.1.0'

import logging

from . import blockalg, compress, config, errors, freefock, freerep, gns, oracle, report, suites, toeplitz
from .blockalg import AlgebraElement, BlockAlgebra, Faithfulness, StateSpec
from .compress import (
	CompressionIsometry,
	LemmaBranch,
	LemmaCase,
	classify,
	faithfulness_witness,
	lemma_value,
	vav_surjectivity,
)
from .config import DEFAULT_TOLERANCES, RunConfig, Tolerances
from .errors import (
	ConfigError,
	DimensionLimitError,
	FreeProductError,
	StructuralError,
	TruncationError,
	ValidationError,
	WitnessConstructionError,
)
from .freefock import FreeFockSpace, SummandProjection, Word, enumerate_words
from .freerep import Letter, NCPoly, RepOperator, free_state, freeness_report, moment, represent
from .gns import GnsSpace
from .oracle import DenseSpace
from .report import Report, render_json
from .toeplitz import SplitGnsModel, TruncatedToeplitz, build_example, verify_noncyclic, verify_v_onto

logging.getLogger(__name__).addHandler(logging.NullHandler())

__all__ = (
	'AlgebraElement',
	'BlockAlgebra',
	'Faithfulness',
	'StateSpec',
	'GnsSpace',
	'Word',
	'FreeFockSpace',
	'SummandProjection',
	'enumerate_words',
	'Letter',
	'NCPoly',
	'RepOperator',
	'represent',
	'free_state',
	'moment',
	'freeness_report',
	'CompressionIsometry',
	'LemmaBranch',
	'LemmaCase',
	'classify',
	'lemma_value',
	'vav_surjectivity',
	'faithfulness_witness',
	'DenseSpace',
	'TruncatedToeplitz',
	'SplitGnsModel',
	'build_example',
	'verify_v_onto',
	'verify_noncyclic',
	'Tolerances',
	'DEFAULT_TOLERANCES',
	'RunConfig',
	'Report',
	'render_json',
	'FreeProductError',
	'StructuralError',
	'ValidationError',
	'TruncationError',
	'WitnessConstructionError',
	'ConfigError',
	'DimensionLimitError',
	'blockalg',
	'gns',
	'freefock',
	'freerep',
	'compress',
	'oracle',
	'toeplitz',
	'config',
	'errors',
	'report',
	'suites',
)
