"""Permutation automata for the 1+1 dimensional Dirac and Weyl equations."""

from .lattice import (
    EncodingError,
    GeometryError,
    LatticeGeometry,
    NecklaceState,
    StateError,
    WaveField,
    decode,
    encode,
    random_field,
    shift_necklace,
    single_excitation,
    transpose_spins,
    wrap_value,
    zero_field,
)
from .dirac import (
    Trajectory,
    kinematic_shift,
    run,
    scatter,
    second_order_residual,
    step,
    step_inverse,
)
from .weyl import (
    BlockField,
    OccupationField,
    SpinChain,
    block_inverse,
    block_transform,
    chain_step,
    mover_step,
    occupation,
    spinor_components,
)
from .cogwheel import (
    CogwheelSpec,
    cycle_hamiltonian,
    exchange_pauli_check,
    hamiltonian_diagonal,
    hamiltonian_standard,
    permutation_unitary,
    verify_exponential,
)

__version__ = "0.1.0"
