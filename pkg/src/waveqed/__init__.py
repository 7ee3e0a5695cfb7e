"""Coherent single-photon scattering through qubits coupled to one-dimensional modes."""

from .errors import (
    IllConditioned,
    ParseError,
    SingularDenominator,
    SingularNode,
    ValidationError,
)
from .interferometer import (
    InterferometerOutputs,
    InterferometerPoint,
    closed_form,
    fringe_scan,
    periodicity_check,
    verify_against_engine,
)
from .model import (
    DriveSpec,
    NetworkSpec,
    QubitParams,
    SegmentParams,
    compute_gamma,
    parse_network,
    serialize_network,
)
from .scattering import ScatteringResult, flux_report, solve, solve_direct, solve_transfer
from .sweep import Axis, SweepSpec, run_sweep, write_csv
from .transfer import TransferChain, build_A, build_chain, node_matrix, phase_matrix

__version__ = "0.1.0"
