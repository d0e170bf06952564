"""Exact steady-state simulator for networks of degenerate optical
parametric oscillators with one- and two-photon dissipative couplings."""

__version__ = "0.1.0"

from .classical import (
    classical_rhs,
    classical_threshold,
    find_fixed_points,
    hypersphere_radius,
)
from .entanglement import NegativityResult, negativity, partial_transpose
from .fock import FockSpace, annihilation, creation, embed, number_op
from .liouvillian import (
    SparseSuperoperator,
    build_hamiltonian,
    build_liouvillian,
    collective_two_photon_dissipator,
)
from .network import OPONetworkParams
from .observables import moments, partial_trace
from .steady import (
    DensityMatrix,
    SteadyStateError,
    evolve,
    solve_steady_state,
    zero_cluster_diagnostics,
)
from .wigner import WignerGrid, displacement_kernel, wigner

__all__ = [
    "FockSpace",
    "OPONetworkParams",
    "SparseSuperoperator",
    "DensityMatrix",
    "WignerGrid",
    "NegativityResult",
    "SteadyStateError",
    "annihilation",
    "creation",
    "embed",
    "number_op",
    "build_hamiltonian",
    "build_liouvillian",
    "collective_two_photon_dissipator",
    "solve_steady_state",
    "evolve",
    "zero_cluster_diagnostics",
    "wigner",
    "displacement_kernel",
    "partial_trace",
    "moments",
    "partial_transpose",
    "negativity",
    "classical_rhs",
    "classical_threshold",
    "hypersphere_radius",
    "find_fixed_points",
]
