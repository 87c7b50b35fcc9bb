"""Simulator for local phonons in a trapped-ion chain.

Covers chain geometry and phonon hopping rates, the truncated spin-phonon
Hilbert space, hopping and sideband Hamiltonians, unitary and Lindblad
propagation, pulse sequences, phonon-number-resolving readout, Rabi fits and
end-to-end experiment pipelines.
"""

from .chain import ChainGeometry, TrapConfig, equilibrium_positions, coupling_matrix, two_ion_separation
from .detection import (
    FockDistribution,
    PnrOutcome,
    RabiFit,
    RabiTrace,
    joint_pnr_probabilities,
    pnr_map_sequence,
    pnr_probabilities,
    rabi_fit,
    rabi_forward,
    sample_trace,
    two_stage_readout,
)
from .dynamics import NoiseChannel, Propagator, Segment, propagate_lindblad, run_schedule
from .errors import ConvergenceError, NumericalError, RabiFitError, TruncationWarning, ValidationError
from .hamiltonian import DriveSpec, blockade_hamiltonian, drive_term, hopping_hamiltonian, jc_energies
from .hilbert import DOWN, E0, UP, HilbertSpec, product_state
from .pulses import PulseEvent, PulseSequence, Simultaneous, Wait, composite_cp, prep_sequence
from .scenarios import (
    NoiseConfig,
    ProbeConfig,
    ScenarioConfig,
    TimeGrid,
    TimeSeries,
    calibrate_noise,
    load_config,
    run_scenario,
    sweep_blockade,
)

__version__ = "0.1.0"
