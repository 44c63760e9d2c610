"""Deterministic simulator of a single-qubit Ramsey probe in a Coulomb chain.

The package computes transverse phonon spectra of a ring-periodic ion chain
on both sides of the linear-to-zigzag structural transition, propagates the
probe qubit through the pi/2 -- free evolution -- -pi/2 Ramsey sequence
exactly via coherent-state algebra, and quantifies information backflow with
the trace-distance (BLP) non-Markovianity measure.
"""

from .chain_spectrum import (
    ChainParams,
    ModeSet,
    ZigzagEquilibrium,
    critical_frequency,
    linear_spectrum,
    soft_mode_gap,
    zigzag_equilibrium,
    zigzag_spectrum,
)
from .coherent_algebra import DisplacedVacuum, displace, evolve, overlap
from .ramsey_probe import (
    SIGMA_X_PAIR,
    BlochPair,
    KickVector,
    ProbeSignal,
    QubitState,
    kick_amplitudes,
    probe_signal,
    ramsey_map,
    trace_distance_closed_form,
)
from .nonmarkov import BLPResult, TimeGrid, blp_measure, optimize_pair, trace_distance
from .fock_oracle import FockConfig, simulate

__all__ = [
    "ChainParams",
    "ModeSet",
    "ZigzagEquilibrium",
    "critical_frequency",
    "linear_spectrum",
    "zigzag_equilibrium",
    "zigzag_spectrum",
    "soft_mode_gap",
    "DisplacedVacuum",
    "displace",
    "evolve",
    "overlap",
    "KickVector",
    "ProbeSignal",
    "QubitState",
    "BlochPair",
    "SIGMA_X_PAIR",
    "kick_amplitudes",
    "probe_signal",
    "ramsey_map",
    "trace_distance_closed_form",
    "TimeGrid",
    "BLPResult",
    "trace_distance",
    "blp_measure",
    "optimize_pair",
    "FockConfig",
    "simulate",
]

__version__ = "0.1.0"
